//! Quantum-assisted cluster analysis, fully classical.
//!
//! The pipeline encodes clustering as quadratic unconstrained binary
//! optimization: random polytope scaffolds define an instance-independent
//! cluster-form QUBO with attractive intra-cluster and repulsive
//! inter-cluster couplings; each data instance is fed into a copy, the
//! resulting instance-cluster matrix is standardized and minimized (an exact
//! exhaustive oracle for small problems, seeded simulated annealing
//! otherwise), and the minimizing bit vector is read out into definite and
//! probabilistic cluster assignments. Self-organizing-map and k-means
//! baselines plus a best-permutation accuracy scorer round out the benchmark
//! harness.
//!
//! Everything is deterministic given the configured seeds; the per-instance
//! solve loop is data-parallel (rayon) behind the default `parallel` feature
//! with a sequential fallback producing bit-identical results.

pub mod baselines;
pub mod clusterform;
pub mod dataset;
pub mod error;
pub mod evaluation;
pub mod geometry;
pub mod icm;
pub mod qubo;
pub mod readout;
pub mod rng;
pub mod solver;

pub use error::{Error, Result};
