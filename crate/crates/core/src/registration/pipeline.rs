//! Alternating registration pipelines. Each pass applies every applicable
//! alignment step in turn and keeps a step only if it does not increase the
//! distance, so the recorded distances never increase.

use num_complex::Complex64;

use crate::curve::QuaternionPath;
use crate::error::{Error, Result};
use crate::grid::{ClosureClass, GridSpec, Interp};
use crate::linalg::{inv_sqrt, C2x2};
use crate::metric::sphere_distance;
use crate::quat::Quat;
use crate::registration::actions::{apply_rotation, apply_twist, warp_stiefel, Warp};
use crate::registration::align::{optimal_rotation, split_unitary, svd_align};
use crate::registration::dp::{dp_reparam, dp_reparam_unframed};
use crate::registration::refine::refine_warp;
use crate::registration::seed::seed_search_stiefel;
use crate::registration::twist::{grassmann_twist, twist_field};
use crate::registration::{Aligned, DPConfig, RegistrationResult};
use crate::stiefel::{orthonormalizer, StiefelPoint};

/// Distances below this count as coincidence and end a pipeline at once.
const COINCIDENT: f64 = 1e-12;
/// Pass cap of the twist fixed-point iteration.
const TWIST_PASSES: usize = 50;
/// Cap on rotation/twist alternations within one open unframed pass.
const ROTATION_TWIST_ROUNDS: usize = 500;

/// Highest frequency of the smooth warp refinement.
fn refine_modes(grid: GridSpec) -> usize {
    (grid.n_samples() / 8).clamp(4, 64)
}

/// The accumulated group element taking the moving input to its registered
/// representative.
struct Tracker {
    grid: GridSpec,
    /// Class used to resample the twist field (periodic for closed inputs).
    twist_class: ClosureClass,
    warp: Warp,
    seed: isize,
    twist: Vec<Complex64>,
    basis: C2x2,
}

impl Tracker {
    fn new(grid: GridSpec, class: ClosureClass) -> Self {
        let twist_class = if class.is_closed() {
            ClosureClass::Loop
        } else {
            ClosureClass::Open
        };
        Self {
            grid,
            twist_class,
            warp: Warp::identity(grid),
            seed: 0,
            twist: vec![Complex64::from(1.0); grid.len(class)],
            basis: C2x2::identity(),
        }
    }

    /// Records `rho . current`.
    fn warp(&mut self, rho: &Warp) -> Result<()> {
        let values = rho.values().iter().map(|t| self.warp.eval(*t)).collect();
        self.warp = Warp::new(self.grid, values)?;
        self.twist = (0..self.twist.len())
            .map(|i| {
                let v = self
                    .grid
                    .sample_at(&self.twist, self.twist_class, rho.values()[i], Interp::Linear);
                v / v.norm()
            })
            .collect();
        Ok(())
    }

    fn shift(&mut self, s: isize) -> Result<()> {
        let rho = Warp::identity(self.grid).offset(s as f64 * self.grid.dt());
        self.warp(&rho)?;
        self.seed = (self.seed + s).rem_euclid(self.grid.n_samples() as isize);
        Ok(())
    }

    fn twist(&mut self, u: &[Complex64]) {
        for (t, v) in self.twist.iter_mut().zip(u) {
            *t *= v;
        }
    }

    fn rebase(&mut self, m: &C2x2) {
        self.basis *= m;
    }

    fn rotate(&mut self, a: Quat) {
        let (x, y) = a.to_complex_pair();
        self.rebase(&C2x2::new(x, y, -y.conj(), x.conj()));
    }

    fn finish(
        self,
        aligned: Aligned,
        distance: f64,
        history: Vec<f64>,
        iterations: usize,
        twisted: bool,
    ) -> RegistrationResult {
        // unitary part of the accumulated (possibly re-orthonormalized) basis
        let unitary = inv_sqrt(&(self.basis.adjoint() * self.basis))
            .map(|r| self.basis * r)
            .unwrap_or(self.basis);
        let (rotation, global_twist) = split_unitary(&unitary);
        RegistrationResult {
            rotation,
            global_twist,
            warp: self.warp,
            seed: self.seed,
            twist: twisted.then_some(self.twist),
            aligned,
            distance,
            history,
            iterations,
        }
    }
}

/// Registers an open path `q1` onto `q0`: optimal rotation and warp in turn.
/// Both inputs are scaled onto the sphere first.
pub fn register_open(q0: &QuaternionPath, q1: &QuaternionPath, cfg: &DPConfig) -> Result<RegistrationResult> {
    open_pipeline(q0, q1, cfg, false)
}

/// [`register_open`] with an additional optimal twist step, for open curves
/// whose framing is not part of the shape.
pub fn register_open_unframed(q0: &QuaternionPath, q1: &QuaternionPath, cfg: &DPConfig) -> Result<RegistrationResult> {
    open_pipeline(q0, q1, cfg, true)
}

fn open_pipeline(
    q0: &QuaternionPath,
    q1: &QuaternionPath,
    cfg: &DPConfig,
    unframed: bool,
) -> Result<RegistrationResult> {
    cfg.validate()?;
    q0.grid().ensure_same(&q1.grid())?;
    if q0.class() != ClosureClass::Open || q1.class() != ClosureClass::Open {
        return Err(Error::InvalidArgument("the open pipeline takes open paths".into()));
    }
    let q0 = q0.to_sphere();
    let mut cur = q1.to_sphere();
    let dist = |q: &QuaternionPath| sphere_distance(&q0, q, false);
    let mut tracker = Tracker::new(q0.grid(), ClosureClass::Open);
    let mut d = dist(&cur)?;
    let mut history = vec![d];
    let mut iterations = 0;
    // the lattice search is dropped once it stops helping
    let mut lattice = true;
    while iterations < cfg.max_iters && d > COINCIDENT {
        iterations += 1;
        let prev = d;

        // Rotations about the mean tangent nearly coincide with a constant
        // twist, so single alternations converge slowly; rotation and twist
        // are alternated here until they stop helping.
        for _ in 0..if unframed { ROTATION_TWIST_ROUNDS } else { 1 } {
            let before = d;
            let a = optimal_rotation(&q0, &cur)?;
            let cand = apply_rotation(&cur, a);
            let dc = dist(&cand)?;
            if dc <= d {
                cur = cand;
                d = dc;
                tracker.rotate(a);
            }
            if unframed {
                let u = twist_field(&q0, &cur)?;
                let cand = apply_twist(&cur, &u)?;
                let dc = dist(&cand)?;
                if dc < d {
                    cur = cand;
                    d = dc;
                    tracker.twist(&u);
                }
            }
            if before - d <= 1e-12 * before || d <= COINCIDENT {
                break;
            }
        }
        if d <= COINCIDENT {
            history.push(d);
            break;
        }

        if lattice {
            let before = d;
            if unframed {
                // warp and twist are optimized jointly, so only the pair is judged
                let (rho, warped) = dp_reparam_unframed(&q0, &cur, cfg)?;
                if rho.max_deviation_from_identity() > 0.0 {
                    let warped = warped.to_sphere();
                    let u = twist_field(&q0, &warped)?;
                    let cand = apply_twist(&warped, &u)?;
                    let dc = dist(&cand)?;
                    if dc < d && tracker.warp(&rho).is_ok() {
                        cur = cand;
                        d = dc;
                        tracker.twist(&u);
                    }
                }
            } else {
                let (rho, warped) = dp_reparam(&q0, &cur, cfg)?;
                let warped = warped.to_sphere();
                let dc = dist(&warped)?;
                if dc < d && tracker.warp(&rho).is_ok() {
                    cur = warped;
                    d = dc;
                }
            }

            if unframed {
                let u = twist_field(&q0, &cur)?;
                let cand = apply_twist(&cur, &u)?;
                let dc = dist(&cand)?;
                if dc < d {
                    cur = cand;
                    d = dc;
                    tracker.twist(&u);
                }
            }
            lattice = d < before;
        }

        let (rho, refined) = refine_warp(&q0, &cur, &Warp::identity(q0.grid()), refine_modes(q0.grid()))?;
        let refined = refined.to_sphere();
        let dc = dist(&refined)?;
        // a step whose accumulated warp rounds to non-monotone is skipped
        if dc < d && tracker.warp(&rho).is_ok() {
            cur = refined;
            d = dc;
            if unframed {
                let u = twist_field(&q0, &cur)?;
                let cand = apply_twist(&cur, &u)?;
                let dc = dist(&cand)?;
                if dc < d {
                    cur = cand;
                    d = dc;
                    tracker.twist(&u);
                }
            }
        }

        history.push(d);
        if prev - d <= cfg.tol * prev {
            break;
        }
    }
    Ok(tracker.finish(Aligned::Path(cur), d, history, iterations, unframed))
}

fn check_closed_pair(s0: &StiefelPoint, s1: &StiefelPoint) -> Result<()> {
    s0.grid().ensure_same(&s1.grid())?;
    if s0.field() != s1.field() {
        return Err(Error::FieldMismatch);
    }
    if s0.class() != s1.class() {
        return Err(Error::ParityMismatch);
    }
    Ok(())
}

struct ClosedRun<'a> {
    s0: &'a StiefelPoint,
    cur: StiefelPoint,
    d: f64,
    tracker: Tracker,
    history: Vec<f64>,
    iterations: usize,
    /// Whether the lattice warp search is still worth running.
    lattice: bool,
}

impl<'a> ClosedRun<'a> {
    fn new(s0: &'a StiefelPoint, s1: &StiefelPoint) -> Result<Self> {
        let d = svd_align(s0, s1)?.distance();
        Ok(Self {
            s0,
            cur: s1.clone(),
            d,
            tracker: Tracker::new(s0.grid(), s0.class()),
            history: vec![d],
            iterations: 0,
            lattice: true,
        })
    }

    fn dist(&self, p: &StiefelPoint) -> Result<f64> {
        Ok(svd_align(self.s0, p)?.distance())
    }

    /// Rotates the basis of the current point to best match that of `s0`;
    /// leaves the plane and hence the distance unchanged.
    fn procrustes(&mut self) -> Result<()> {
        let m = svd_align(self.s0, &self.cur)?.procrustes();
        self.cur = self.cur.rebased(&m)?;
        self.tracker.rebase(&m);
        Ok(())
    }

    fn seed_step(&mut self, cfg: &DPConfig) -> Result<()> {
        let (s, shifted) = seed_search_stiefel(self.s0, &self.cur, cfg)?;
        if s != 0 {
            let dc = self.dist(&shifted)?;
            if dc < self.d && self.tracker.shift(s).is_ok() {
                self.cur = shifted;
                self.d = dc;
            }
        }
        Ok(())
    }

    /// Warp step; in unframed runs the warp is searched with the twist-free
    /// integrand and judged together with the twist that follows it.
    ///
    /// The lattice search pins the warp at the seam. With `seam = h` both
    /// paths are first rotated by `h` samples, which moves the pinned point to
    /// `t = h dt` and lets the warp near `t = 0` adjust.
    fn warp_step(&mut self, cfg: &DPConfig, unframed: bool, seam: usize) -> Result<()> {
        let h = seam as isize;
        let (p0, p1) = (self.s0.to_path().shifted(h), self.cur.to_path().shifted(h));
        let (rho_h, _) = if unframed {
            dp_reparam_unframed(&p0, &p1, cfg)?
        } else {
            dp_reparam(&p0, &p1, cfg)?
        };
        if rho_h.max_deviation_from_identity() == 0.0 {
            return Ok(());
        }
        let grid = self.s0.grid();
        let offset = seam as f64 * grid.dt();
        let rho = Warp::from_fn(grid, |t| rho_h.eval(t - offset) + offset)?;
        self.try_warp(&rho, unframed)
    }

    /// Smooth refinement of the current warp against the basis-aligned `s0`.
    fn refine_step(&mut self, unframed: bool) -> Result<()> {
        let grid = self.s0.grid();
        let (rho, _) = refine_warp(
            &self.s0.to_path(),
            &self.cur.to_path(),
            &Warp::identity(grid),
            refine_modes(grid),
        )?;
        if rho.max_deviation_from_identity() == 0.0 {
            return Ok(());
        }
        self.try_warp(&rho, unframed)
    }

    /// Applies `rho` (and in unframed runs the best twist after it) if that
    /// lowers the distance.
    fn try_warp(&mut self, rho: &Warp, unframed: bool) -> Result<()> {
        let raw = warp_stiefel(&self.cur, rho)?;
        // a failed re-projection just means the step is not taken
        let Ok(m) = orthonormalizer(&raw) else {
            return Ok(());
        };
        let mut cand = raw.rebased(&m)?;
        let mut u = None;
        if unframed {
            let (twisted, field) = grassmann_twist(self.s0, &cand, TWIST_PASSES)?;
            cand = twisted;
            u = Some(field);
        }
        let dc = self.dist(&cand)?;
        // the accumulated warp can lose strict monotonicity to rounding when
        // very flat pieces compose; such a step is not taken either
        if dc < self.d && self.tracker.warp(rho).is_ok() {
            self.cur = cand;
            self.d = dc;
            self.tracker.rebase(&m);
            if let Some(u) = u {
                self.tracker.twist(&u);
            }
        }
        Ok(())
    }

    fn twist_step(&mut self) -> Result<()> {
        let (cand, u) = grassmann_twist(self.s0, &self.cur, TWIST_PASSES)?;
        let dc = self.dist(&cand)?;
        if dc < self.d {
            self.cur = cand;
            self.d = dc;
            self.tracker.twist(&u);
        }
        Ok(())
    }

    fn run(&mut self, cfg: &DPConfig, unframed: bool) -> Result<()> {
        let mut passes = 0;
        self.lattice = true;
        while passes < cfg.max_iters && self.d > COINCIDENT {
            passes += 1;
            self.iterations += 1;
            let prev = self.d;
            self.seed_step(cfg)?;
            self.procrustes()?;
            if self.lattice {
                // once the lattice search stops helping only refinement is left
                let before = self.d;
                self.warp_step(cfg, unframed, 0)?;
                self.warp_step(cfg, unframed, self.s0.grid().n_samples() / 2)?;
                self.lattice = self.d < before;
            }
            self.procrustes()?;
            self.refine_step(unframed)?;
            if unframed {
                self.procrustes()?;
                self.twist_step()?;
            }
            self.history.push(self.d);
            if prev - self.d <= cfg.tol * prev {
                break;
            }
        }
        self.procrustes()
    }

    fn finish(self, unframed: bool) -> RegistrationResult {
        self.tracker.finish(
            Aligned::Stiefel(self.cur),
            self.d,
            self.history,
            self.iterations,
            unframed,
        )
    }
}

/// Registers the closed framed curve with coordinates `s1` onto `s0`: cyclic
/// seed shift, unitary change of basis and warp in turn, with the Grassmann
/// distance as objective. The aligned basis is finally rotated to best match
/// the basis of `s0`.
pub fn register_closed_framed(s0: &StiefelPoint, s1: &StiefelPoint, cfg: &DPConfig) -> Result<RegistrationResult> {
    cfg.validate()?;
    check_closed_pair(s0, s1)?;
    let mut run = ClosedRun::new(s0, s1)?;
    run.run(cfg, false)?;
    Ok(run.finish(false))
}

/// Registers closed curves whose framing is not part of the shape: the framed
/// pipeline followed by passes that add the optimal frame twist.
pub fn register_closed_unframed(s0: &StiefelPoint, s1: &StiefelPoint, cfg: &DPConfig) -> Result<RegistrationResult> {
    cfg.validate()?;
    check_closed_pair(s0, s1)?;
    if s0.field() == crate::stiefel::Field::Real {
        return Err(Error::RealFieldTwist);
    }
    // A run that twists from the start usually ends closer, since framed
    // passes fit warps to the frame mismatch. The framed result bounds the
    // unframed one, so if the direct run misses that bound, unframed passes
    // are continued from the framed optimum instead.
    let mut direct = ClosedRun::new(s0, s1)?;
    direct.run(cfg, true)?;
    let mut framed = ClosedRun::new(s0, s1)?;
    framed.run(cfg, false)?;
    if direct.d <= framed.d {
        return Ok(direct.finish(true));
    }
    framed.run(cfg, true)?;
    Ok(if direct.d < framed.d { direct } else { framed }.finish(true))
}
