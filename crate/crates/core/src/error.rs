use thiserror::Error;

/// Errors raised by curve construction, coordinate maps and shape-space algorithms.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("grid must have at least {min} samples, got {got}")]
    GridTooSmall { got: usize, min: usize },
    #[error("sample count {got} does not match the grid (expected {expected})")]
    SampleCount { got: usize, expected: usize },
    #[error("operands live on different grids ({left} vs {right} samples)")]
    GridMismatch { left: usize, right: usize },
    #[error("operands have different closure classes")]
    ClosureMismatch,
    #[error("operands have different scalar fields")]
    FieldMismatch,
    #[error("quaternion sample {index} vanishes")]
    ZeroQuaternionSample { index: usize },
    #[error("derivative vanishes at sample {index}")]
    ZeroDerivativeSample { index: usize },
    #[error("speed vanishes at sample {index}")]
    DegenerateSpeed { index: usize },
    #[error("curve has (near) zero length")]
    DegenerateCurve,
    #[error("frame at sample {index} is not orthonormal (residual {residual:.3e})")]
    DegenerateFrame { index: usize, residual: f64 },
    #[error("curvature vanishes at sample {index}")]
    VanishingCurvature { index: usize },
    #[error("operation requires a closed curve")]
    NotClosed,
    #[error("closure violation: Stiefel residual {residual:.3e}")]
    ClosureViolation { residual: f64 },
    #[error("tangent field violates the tangency constraints (residual {residual:.3e})")]
    ConstraintViolation { residual: f64 },
    #[error("path is not on the radius sqrt(2) sphere (squared norm {norm_sq})")]
    NotOnSphere { norm_sq: f64 },
    #[error("paths are L2-orthogonal, optimal rotation undefined")]
    OrthogonalInputs,
    #[error("warp is not strictly increasing at sample {index}")]
    NonMonotoneWarp { index: usize },
    #[error("pointwise C2 inner product vanishes at samples {samples:?}")]
    PointwiseOrthogonal { samples: Vec<usize> },
    #[error("paths lie in the same twist orbit")]
    SameOrbit,
    #[error("endpoints coincide or are antipodal, geodesic undefined")]
    AntipodalOrCoincident,
    #[error("mod-2 linking numbers differ; joining different components is not supported")]
    ParityMismatch,
    #[error("frame twisting is not defined for real (planar) Stiefel points")]
    RealFieldTwist,
    #[error("empty input")]
    EmptyInput,
    #[error("invalid cluster count k={k} for {n} samples")]
    InvalidK { k: usize, n: usize },
    #[error("distance matrix has a NaN entry at ({row}, {col})")]
    IncompleteMatrix { row: usize, col: usize },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    /// True for errors caused by inputs that violate an operation's
    /// preconditions, as opposed to numerical breakdown.
    pub fn is_precondition(&self) -> bool {
        !matches!(
            self,
            Error::ZeroQuaternionSample { .. }
                | Error::AntipodalOrCoincident
                | Error::SameOrbit
                | Error::OrthogonalInputs
                | Error::PointwiseOrthogonal { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
