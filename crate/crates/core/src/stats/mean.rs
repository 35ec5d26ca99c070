//! Averaging closed curves: alternate full registration to the current
//! estimate with a flag mean of the registered samples.

use rayon::prelude::*;

use crate::curve::{hopf_map, FramedCurve};
use crate::error::{Error, Result};
use crate::metric::grassmann_distance;
use crate::planar::{planar_srt_inverse, PlanarRoot};
use crate::registration::{Aligned, DPConfig};
use crate::shape::{prepare, register_pair, Mode, ShapeInput};
use crate::stats::flag::flag_mean;
use crate::stiefel::{GrassmannPoint, StiefelPoint};

/// Outcome of [`mean_closed_curves`].
#[derive(Debug, Clone, PartialEq)]
pub struct MeanResult {
    pub coords: StiefelPoint,
    /// The mean curve; in unframed modes its frame is incidental, and plane
    /// curves are embedded in the xy-plane.
    pub curve: FramedCurve,
    /// `sum_j d(q*, q_j)^2` for each accepted estimate `q*`.
    pub objective: Vec<f64>,
    pub iterations: usize,
    /// Successive estimates came within the tolerance.
    pub converged: bool,
    /// Some flag mean along the way was not unique.
    pub degenerate: bool,
}

fn to_curve(p: &StiefelPoint, mode: Mode) -> Result<FramedCurve> {
    if mode == Mode::Planar {
        planar_srt_inverse(&PlanarRoot::from_stiefel(p)?)?.to_framed()
    } else {
        hopf_map(&p.to_path())
    }
}

/// Registers every sample onto `center`, returning the aligned samples and
/// the objective.
fn register_all(center: &Aligned, samples: &[Aligned], mode: Mode, cfg: &DPConfig) -> Result<(Vec<StiefelPoint>, f64)> {
    let regs = samples
        .par_iter()
        .map(|p| register_pair(center, p, mode, cfg))
        .collect::<Result<Vec<_>>>()?;
    let objective = regs.iter().map(|r| r.result.distance.powi(2)).sum();
    let aligned = regs
        .into_iter()
        .map(|r| match r.result.aligned {
            Aligned::Stiefel(s) => s,
            Aligned::Path(_) => unreachable!("closed modes register Stiefel points"),
        })
        .collect();
    Ok((aligned, objective))
}

/// Mean shape of closed curves in a closed `mode`.
///
/// Starts from the first curve. Each outer iteration registers all samples
/// onto the estimate and replaces it by the flag mean of the registered
/// samples. The loop ends when successive estimates are within `cfg.tol` in
/// Grassmann distance, after `cfg.max_iters` iterations, or when the
/// objective would increase, in which case the previous estimate is kept.
pub fn mean_closed_curves(curves: &[ShapeInput], mode: Mode, cfg: &DPConfig) -> Result<MeanResult> {
    if curves.len() < 2 {
        return Err(Error::InvalidArgument("averaging needs at least two curves".into()));
    }
    if !mode.is_closed() {
        return Err(Error::NotClosed);
    }
    cfg.validate()?;
    let samples = curves.iter().map(|c| prepare(c, mode)).collect::<Result<Vec<_>>>()?;
    let mut center = samples[0].clone();
    let (mut aligned, mut best) = register_all(&center, &samples, mode, cfg)?;
    let mut objective = vec![best];
    let mut iterations = 0;
    let mut converged = false;
    let mut degenerate = false;
    while iterations < cfg.max_iters {
        iterations += 1;
        let points: Vec<GrassmannPoint> = aligned.iter().cloned().map(GrassmannPoint::from).collect();
        let mean = flag_mean(&points)?;
        degenerate |= mean.degenerate;
        let next = Aligned::Stiefel(mean.point);
        let step = grassmann_distance(
            &GrassmannPoint::new(center.as_stiefel().expect("closed").clone()),
            &GrassmannPoint::new(next.as_stiefel().expect("closed").clone()),
        )?
        .distance;
        let (next_aligned, value) = register_all(&next, &samples, mode, cfg)?;
        if value > best {
            break;
        }
        center = next;
        aligned = next_aligned;
        best = value;
        objective.push(value);
        if step < cfg.tol {
            converged = true;
            break;
        }
    }
    let coords = center.as_stiefel().expect("closed").clone();
    Ok(MeanResult {
        curve: to_curve(&coords, mode)?,
        coords,
        objective,
        iterations,
        converged,
        degenerate,
    })
}
