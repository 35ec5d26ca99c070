//! Statistics on shape space: flag means, averaging of closed curves,
//! distance matrices and k-medoids clustering.

pub mod distmat;
pub mod flag;
pub mod kmedoids;
pub mod mean;

pub use distmat::{distance_matrix, DistanceMatrix, PairFailure};
pub use flag::{flag_mean, line_objective, FlagMean};
pub use kmedoids::{k_medoids, ClusterResult};
pub use mean::{mean_closed_curves, MeanResult};
