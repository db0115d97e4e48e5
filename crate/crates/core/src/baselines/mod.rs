//! Classical clustering baselines used for comparison runs.

pub mod kmeans;
pub mod sofm;

pub use kmeans::{kmeans_cluster, KMeansConfig, KMeansModel};
pub use sofm::{decay_schedule, sofm_cluster, SofmModel, SofmParams};
