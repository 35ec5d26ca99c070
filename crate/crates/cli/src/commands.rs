//! The subcommands. Each reads its inputs, runs the library and writes its
//! outputs atomically; anything printed goes to standard output.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::ValueEnum;
use framecurve::curve::resample_base;
use framecurve::synth::{random_rotation, TrigCurve};
use framecurve::{
    frenet_frame, geodesic, hopf_map, k_medoids, lift, mean_closed_curves, resample, rmf_frame, shape_distance,
    stats::distance_matrix, Closure, FramedCurve, GridSpec, LiftSign, Mode, ShapeInput,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::config::RunConfig;
use crate::error::{CliError, Context, Result};
use crate::io::{class_name, num, parse_path, read, render_path, write_atomic, CurveFile, MatrixFile};
use crate::mesh::tube_obj;

fn stem(path: &Path) -> String {
    path.file_stem()
        .map_or_else(|| "curve".into(), |s| s.to_string_lossy().into_owned())
}

fn grid(cfg: &RunConfig) -> GridSpec {
    GridSpec::new(cfg.grid).expect("grid validated with the config")
}

/// Loads a curve file as input for `mode`, resampled to the run's grid.
pub fn load_input(path: &Path, cfg: &RunConfig, mode: Mode) -> Result<ShapeInput> {
    let file = CurveFile::load(path)?;
    let g = grid(cfg);
    let where_ = path.display();
    match (mode, file.framed()) {
        (Mode::Planar, _) | (_, None) => {
            let mut base = file.base().context(&where_)?;
            if base.grid() != g {
                base = resample_base(&base, g).context(&where_)?;
            }
            Ok(ShapeInput::Base(base))
        }
        (_, Some(framed)) => {
            let mut c = framed.context(&where_)?;
            if c.grid() != g {
                c = resample(&c, g).context(&where_)?;
            }
            Ok(ShapeInput::Framed(c))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Shape {
    Helix,
    Circle,
    Ellipse,
    Trefoil,
    TorusSpiral,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FrameKind {
    None,
    Frenet,
    Rmf,
}

/// Parameters of the synthetic generators.
#[derive(Debug, Clone, clap::Args)]
pub struct ShapeParams {
    /// Helix or circle radius.
    #[arg(long, default_value_t = 1.0)]
    pub radius: f64,
    /// Helix rise.
    #[arg(long, default_value_t = 1.0)]
    pub rise: f64,
    /// Helix turns.
    #[arg(long, default_value_t = 2.0)]
    pub turns: f64,
    /// Ellipse semi-axes.
    #[arg(long, default_value_t = 1.5)]
    pub a: f64,
    #[arg(long, default_value_t = 1.0)]
    pub b: f64,
    /// Torus spiral radii and winding numbers.
    #[arg(long, default_value_t = 2.0)]
    pub major: f64,
    #[arg(long, default_value_t = 0.7)]
    pub minor: f64,
    #[arg(long, default_value_t = 2)]
    pub p: u32,
    #[arg(long, default_value_t = 3)]
    pub q: u32,
}

pub fn cmd_generate(
    shape: Shape,
    params: &ShapeParams,
    frame: FrameKind,
    rotate: bool,
    twist: f64,
    out: &Path,
    cfg: &RunConfig,
) -> Result<()> {
    let mut curve = match shape {
        Shape::Helix => TrigCurve::helix(params.radius, params.rise, params.turns),
        Shape::Circle => TrigCurve::circle(params.radius),
        Shape::Ellipse => TrigCurve::ellipse(params.a, params.b),
        Shape::Trefoil => TrigCurve::trefoil(),
        Shape::TorusSpiral => TrigCurve::torus_spiral(params.major, params.minor, params.p, params.q),
    };
    if rotate {
        curve = curve.rotated(&random_rotation(&mut ChaCha8Rng::seed_from_u64(cfg.seed)));
    }
    let g = grid(cfg);
    let name = shape
        .to_possible_value()
        .map_or_else(String::new, |v| v.get_name().to_string());
    let id = stem(out);
    let file = match frame {
        FrameKind::None => CurveFile::from_base(&id, &curve.sample(g)?),
        FrameKind::Frenet => {
            let c = curve.sample_frenet_twisted(g, |t| twist * (std::f64::consts::PI * t).sin())?;
            CurveFile::from_framed(&id, &c)
        }
        FrameKind::Rmf => {
            let c = rmf_frame(&curve.sample(g)?, curve.closure() == Closure::Closed)?;
            let u: Vec<f64> = g
                .params(c.closure().class())
                .iter()
                .map(|t| twist * (std::f64::consts::PI * t).sin())
                .collect();
            CurveFile::from_framed(&id, &c.twisted(&u))
        }
    };
    file.with_meta("source", &format!("generate {name}")).save(out)
}

pub fn cmd_frames(input: &Path, kind: FrameKind, out: &Path) -> Result<()> {
    let file = CurveFile::load(input)?;
    let base = file.base().context(input.display())?;
    let framed = match kind {
        FrameKind::Frenet => frenet_frame(&base),
        FrameKind::Rmf => rmf_frame(&base, base.closure() == Closure::Closed),
        FrameKind::None => return Err(CliError::Config("frames needs `frenet` or `rmf`".into())),
    }
    .context(input.display())?;
    let mut outf = CurveFile::from_framed(&file.id, &framed);
    outf.meta = file.meta.clone();
    outf.save(out)
}

fn framed_input(path: &Path) -> Result<(CurveFile, FramedCurve)> {
    let file = CurveFile::load(path)?;
    let c = match file.framed() {
        Some(c) => c.context(path.display())?,
        None => {
            let base = file.base().context(path.display())?;
            rmf_frame(&base, base.closure() == Closure::Closed).context(path.display())?
        }
    };
    Ok((file, c))
}

/// Writes the lift of a curve; curves without a frame get the
/// rotation-minimizing one. Prints the closure class.
pub fn cmd_lift(input: &Path, out: &Path) -> Result<String> {
    let (file, c) = framed_input(input)?;
    let q = lift(&c, LiftSign::Plus).context(input.display())?;
    write_atomic(out, &render_path(&file.id, &q))?;
    Ok(format!("class {}\n", class_name(q.class())))
}

/// The inverse of `lift`: the framed curve of a quaternionic path, starting
/// at the origin.
pub fn cmd_hopf(input: &Path, out: &Path) -> Result<()> {
    let (id, q) = parse_path(input, &read(input)?)?;
    let c = hopf_map(&q).context(input.display())?;
    CurveFile::from_framed(&id, &c).save(out)
}

pub fn cmd_dist(a: &Path, b: &Path, cfg: &RunConfig) -> Result<String> {
    let c0 = load_input(a, cfg, cfg.mode)?;
    let c1 = load_input(b, cfg, cfg.mode)?;
    let d = shape_distance(&c0, &c1, cfg.mode, &cfg.dp).context(format!("{} vs {}", a.display(), b.display()))?;
    Ok(format!("mode {}\nnormalized_distance {}\n", cfg.mode, num(d)))
}

pub fn step_name(k: usize) -> String {
    format!("step_{k:03}")
}

pub fn cmd_geodesic(a: &Path, b: &Path, out: &Path, cfg: &RunConfig) -> Result<String> {
    let c0 = load_input(a, cfg, cfg.mode)?;
    let c1 = load_input(b, cfg, cfg.mode)?;
    let geo =
        geodesic(&c0, &c1, cfg.mode, cfg.steps, &cfg.dp).context(format!("{} vs {}", a.display(), b.display()))?;
    fs::create_dir_all(out).map_err(|e| CliError::Io {
        path: out.to_path_buf(),
        source: e,
    })?;
    for (k, (c, u)) in geo.curves.iter().zip(&geo.params).enumerate() {
        let name = step_name(k);
        CurveFile::from_framed(&name, c)
            .with_meta("u", &num(*u))
            .save(&out.join(format!("{name}.curve")))?;
    }
    let mut s = format!("framecurve geodesic {}\n", crate::io::FORMAT_VERSION);
    let _ = writeln!(s, "mode {}", geo.mode);
    let _ = writeln!(s, "from {}", a.display());
    let _ = writeln!(s, "to {}", b.display());
    let _ = writeln!(s, "steps {}", cfg.steps);
    let _ = writeln!(s, "distance {}", num(geo.distance));
    let _ = writeln!(s, "normalized_distance {}", num(geo.normalized_distance));
    if let Some((tz, tw)) = geo.jordan_angles {
        let _ = writeln!(s, "jordan_angles {} {}", num(tz), num(tw));
    }
    let _ = writeln!(s, "iterations {}", geo.registration.iterations);
    let _ = writeln!(s, "half_twisted {}", geo.half_twisted);
    let _ = writeln!(s, "right_angle {}", geo.right_angle);
    for (k, samples) in &geo.singular_steps {
        let list: Vec<String> = samples.iter().map(ToString::to_string).collect();
        let _ = writeln!(s, "warning singular samples in {}: {}", step_name(*k), list.join(" "));
    }
    write_atomic(&out.join("summary.txt"), &s)?;
    Ok(s)
}

pub fn cmd_distmat(inputs: &[PathBuf], out: &Path, cfg: &RunConfig) -> Result<Vec<String>> {
    let curves = inputs
        .iter()
        .map(|p| load_input(p, cfg, cfg.mode))
        .collect::<Result<Vec<_>>>()?;
    let labels: Vec<String> = inputs.iter().map(|p| stem(p)).collect();
    let dm = distance_matrix(&curves, labels.clone(), cfg.mode, &cfg.dp)?;
    let warnings = dm
        .failures
        .iter()
        .map(|f| {
            format!(
                "{} vs {}: {}",
                inputs[f.row].display(),
                inputs[f.col].display(),
                f.error
            )
        })
        .collect();
    let file = MatrixFile {
        mode: cfg.mode,
        labels,
        d: dm.d,
    };
    write_atomic(out, &file.render())?;
    Ok(warnings)
}

pub fn cmd_mean(inputs: &[PathBuf], out: &Path, cfg: &RunConfig) -> Result<String> {
    let curves = inputs
        .iter()
        .map(|p| load_input(p, cfg, cfg.mode))
        .collect::<Result<Vec<_>>>()?;
    let m = mean_closed_curves(&curves, cfg.mode, &cfg.dp)?;
    CurveFile::from_framed(&stem(out), &m.curve)
        .with_meta("source", &format!("mean of {} curves", inputs.len()))
        .save(out)?;
    let mut s = format!(
        "iterations {}\nconverged {}\ndegenerate {}\n",
        m.iterations, m.converged, m.degenerate
    );
    let objective: Vec<String> = m.objective.iter().map(|v| num(*v)).collect();
    let _ = writeln!(s, "objective {}", objective.join(" "));
    Ok(s)
}

pub fn cmd_cluster(matrix: &Path, k: usize, out: &Path, cfg: &RunConfig) -> Result<()> {
    let file = MatrixFile::parse(matrix, &read(matrix)?)?;
    let r = k_medoids(&file.d, k, cfg.seed).context(matrix.display())?;
    let label = |i: usize| file.labels[i].as_str();
    let mut s = format!("framecurve clusters {}\n", crate::io::FORMAT_VERSION);
    let _ = writeln!(s, "k {k}");
    let _ = writeln!(s, "seed {}", r.seed);
    let _ = writeln!(s, "total_cost {}", num(r.total_cost));
    let medoids: Vec<&str> = r.medoids.iter().map(|&m| label(m)).collect();
    let _ = writeln!(s, "medoids {}", medoids.join(" "));
    let history: Vec<String> = r.cost_history.iter().map(|v| num(*v)).collect();
    let _ = writeln!(s, "cost_history {}", history.join(" "));
    s.push_str("data\n");
    for (i, m) in r.assignment.iter().enumerate() {
        let _ = writeln!(s, "{} {}", label(i), label(*m));
    }
    write_atomic(out, &s)
}

/// Converts every step curve of a geodesic directory to a tube mesh.
pub fn cmd_export(dir: &Path, out: &Path, radius: f64, sides: usize) -> Result<usize> {
    let io = |e: std::io::Error| CliError::Io {
        path: dir.to_path_buf(),
        source: e,
    };
    let mut steps: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(io)?
        .map(|e| e.map(|e| e.path()))
        .collect::<std::io::Result<Vec<_>>>()
        .map_err(io)?
        .into_iter()
        .filter(|p| p.extension().is_some_and(|x| x == "curve"))
        .collect();
    steps.sort();
    if steps.is_empty() {
        return Err(CliError::Parse {
            path: dir.to_path_buf(),
            line: 0,
            msg: "no .curve files".into(),
        });
    }
    fs::create_dir_all(out).map_err(|e| CliError::Io {
        path: out.to_path_buf(),
        source: e,
    })?;
    for path in &steps {
        let (_, c) = framed_input(path)?;
        write_atomic(&out.join(format!("{}.obj", stem(path))), &tube_obj(&c, radius, sides))?;
    }
    Ok(steps.len())
}
