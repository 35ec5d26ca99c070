//! Optimal alignment over the groups that preserve shape: rotations,
//! reparameterizations, cyclic seed shifts, unitary changes of basis and
//! frame twisting.

pub mod actions;
pub mod align;
pub mod dp;
pub mod pipeline;
pub mod refine;
pub mod seed;
pub mod twist;

use num_complex::Complex64;

pub use actions::{apply_rotation, apply_twist, apply_twist_stiefel, apply_warp, half_twist, half_twist_stiefel, Warp};
pub use align::{optimal_rotation, split_unitary, svd_align, AlignedPair};
pub use dp::{dp_reparam, dp_reparam_unframed};
pub use pipeline::{register_closed_framed, register_closed_unframed, register_open, register_open_unframed};
pub use refine::refine_warp;
pub use seed::{seed_search, seed_search_stiefel};
pub use twist::{
    grassmann_twist, horizontality_residual, optimal_twist, optimal_twist_stiefel, twist_field, TWIST_EPS,
};

use crate::curve::QuaternionPath;
use crate::error::{Error, Result};
use crate::quat::Quat;
use crate::stiefel::StiefelPoint;

/// Settings of the dynamic-programming search and the alternating pipelines.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DPConfig {
    /// Largest lattice step; bounds warp slopes to `[1/window, window]`.
    pub window: usize,
    /// Stride of the cyclic seed search.
    pub seed_stride: usize,
    pub max_iters: usize,
    /// Relative decrease of the distance below which a pipeline stops.
    pub tol: f64,
}

impl Default for DPConfig {
    fn default() -> Self {
        Self {
            window: 6,
            seed_stride: 1,
            max_iters: 10,
            tol: 1e-4,
        }
    }
}

impl DPConfig {
    pub fn validate(&self) -> Result<()> {
        if self.window < 1 {
            return Err(Error::InvalidArgument("dp window must be at least 1".into()));
        }
        if self.seed_stride < 1 {
            return Err(Error::InvalidArgument("seed stride must be at least 1".into()));
        }
        if !(self.tol >= 0.0) {
            return Err(Error::InvalidArgument("tolerance must be nonnegative".into()));
        }
        Ok(())
    }
}

/// The registered representative of the moving input.
#[derive(Debug, Clone, PartialEq)]
pub enum Aligned {
    Path(QuaternionPath),
    Stiefel(StiefelPoint),
}

impl Aligned {
    pub fn to_path(&self) -> QuaternionPath {
        match self {
            Aligned::Path(p) => p.clone(),
            Aligned::Stiefel(s) => s.to_path(),
        }
    }

    pub fn as_stiefel(&self) -> Option<&StiefelPoint> {
        match self {
            Aligned::Stiefel(s) => Some(s),
            Aligned::Path(_) => None,
        }
    }
}

/// Outcome of an alternating registration pipeline.
///
/// Up to discretization error the aligned representative is
/// `twist(t) sqrt(warp') (q1 o warp) rotation`; for closed curves the
/// rotation is the special-unitary part of the accumulated change of basis
/// and `global_twist` the angle of its determinant.
#[derive(Debug, Clone, PartialEq)]
pub struct RegistrationResult {
    pub rotation: Quat,
    pub global_twist: f64,
    pub warp: Warp,
    /// Accumulated cyclic shift, in samples (zero for open curves).
    pub seed: isize,
    /// Accumulated frame twist (unframed pipelines only).
    pub twist: Option<Vec<Complex64>>,
    pub aligned: Aligned,
    /// Distance from the fixed input to `aligned` in the pipeline's space.
    pub distance: f64,
    /// Distance after each iteration, starting with the unregistered one.
    pub history: Vec<f64>,
    pub iterations: usize,
}
