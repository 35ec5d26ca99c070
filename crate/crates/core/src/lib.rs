//! Elastic shape analysis of framed space curves in quaternionic coordinates.
//!
//! Framed curves `(gamma, V)` are represented by quaternion-valued paths `q`
//! through the frame-Hopf map. Under this map the open-curve shape space
//! becomes a round sphere and the closed-curve shape space a Grassmannian of
//! 2-planes, so geodesics and distances have closed forms. Registration over
//! rotations, reparameterizations and frame twists is provided in
//! [`registration`], explicit geodesics in [`geodesic`], and averaging and
//! clustering in [`stats`].

// `!(x > tol)` is used on purpose so that NaN fails the check.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod curve;
pub mod error;
pub mod frames;
pub mod geodesic;
pub mod grid;
pub mod linalg;
pub mod metric;
pub mod planar;
pub mod quat;
pub mod registration;
pub mod shape;
pub mod stats;
pub mod stiefel;
pub mod synth;

pub use curve::{
    hopf_map, lift, linking_parity, normalize_length, resample, resample_path, BaseCurve, Closure, FramedCurve,
    LiftSign, Parity, QuaternionPath, Vec3,
};
pub use error::{Error, Result};
pub use frames::{frenet_frame, rmf_frame, twist_rate};
pub use geodesic::{
    geodesic, geodesic_closed_framed, geodesic_closed_unframed, geodesic_open_framed, geodesic_open_unframed,
    geodesic_planar, grassmann_geodesic, sphere_geodesic, GeodesicPath, Steps,
};
pub use grid::{ClosureClass, GridSpec, Interp};
pub use metric::{
    elastic_metric, g_s, grassmann_distance, l2_inner, normalized_distance, sphere_distance, ElasticParams,
    GrassmannDistance, Space, TangentField,
};
pub use planar::{planar_srt, planar_srt_inverse, PlanarCurve, PlanarRoot};
pub use quat::Quat;
pub use registration::{Aligned, DPConfig, RegistrationResult, Warp};
pub use shape::{prepare, register_pair, shape_distance, Mode, ShapeInput};
pub use stats::{
    distance_matrix, flag_mean, k_medoids, mean_closed_curves, ClusterResult, DistanceMatrix, FlagMean, MeanResult,
};
pub use stiefel::{orthonormalize, to_stiefel, Field, GrassmannPoint, StiefelPoint};
