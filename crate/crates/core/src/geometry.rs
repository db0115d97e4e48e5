//! Classical cluster scaffolds.
//!
//! Clusters are polytopes in attribute space. The fixed tetrahedron
//! construction is a three-dimensional demonstration; the general path draws
//! typeless polygons, vertex by vertex, from a coordinate range that slides
//! upward after each cluster so consecutive clusters occupy shifted (and, for
//! a sliding factor below one, overlapping) regions of the data range.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::rng::rng_from_seed;

/// Vertex scaffold for `m` clusters with `n_v` vertices of `d` coordinates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusterGeometry {
    pub m: usize,
    pub n_v: usize,
    pub d: usize,
    pub epsilon: f64,
    pub seed: u64,
    /// `vertices[cluster][vertex][coordinate]`
    pub vertices: Vec<Vec<Vec<f64>>>,
}

impl ClusterGeometry {
    /// Total number of binary variables the scaffold maps to.
    pub fn qubit_count(&self) -> usize {
        qubit_count(self.m, self.n_v, self.d)
    }
}

/// Sliding coordinate range used while drawing cluster vertices.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RangeSchedule {
    /// Lower edge of the data range; initial `r_min`.
    pub i_c: f64,
    /// Per-cluster range width: (max - min) / m.
    pub i_plus: f64,
    pub r_min: f64,
    pub r_max: f64,
}

/// One binary variable per coordinate: `m * n_v * d`.
pub fn qubit_count(m: usize, n_v: usize, d: usize) -> usize {
    m * n_v * d
}

/// Four tetrahedron vertices at a fixed offset from a centroid.
///
/// Only defined in three dimensions; the general pipeline uses
/// [`random_polygon_clusters`] instead.
pub fn tetrahedron_from_centroid(c: [f64; 3], dist: f64) -> Result<[[f64; 3]; 4]> {
    if !dist.is_finite() || dist <= 0.0 {
        return Err(Error::invalid("dist", "> 0", dist));
    }
    let [x, y, z] = c;
    Ok([
        [x, y, z + dist],
        [x - dist, y - dist, z - dist],
        [x + dist, y - dist, z - dist],
        [x, y + dist, z - dist],
    ])
}

/// Derives the initial sliding range from the dataset's global value range.
pub fn init_schedule(ds: &Dataset, m: usize) -> Result<RangeSchedule> {
    if m < 2 {
        return Err(Error::invalid("m", ">= 2", m));
    }
    let (min, max) = ds.global_min_max();
    if max <= min {
        return Err(Error::DegenerateRange(min));
    }
    let i_plus = (max - min) / m as f64;
    Ok(RangeSchedule {
        i_c: min,
        i_plus,
        r_min: min,
        r_max: min + i_plus,
    })
}

/// Draws `m` clusters of `n_v` vertices with `d` uniform coordinates each.
///
/// Draw order is fixed: cluster-major, then vertex, then coordinate, each
/// coordinate uniform in the half-open range `[r_min, r_max)`. After a
/// cluster completes, both range edges shift by `i_plus * epsilon`. All draws
/// come from a ChaCha8 generator seeded with `seed`, so the same inputs
/// reproduce the same vertices bit for bit.
pub fn random_polygon_clusters(
    schedule: &RangeSchedule,
    m: usize,
    n_v: usize,
    d: usize,
    epsilon: f64,
    seed: u64,
) -> Result<ClusterGeometry> {
    if m < 2 {
        return Err(Error::invalid("m", ">= 2", m));
    }
    if n_v == 0 {
        return Err(Error::invalid("n_v", ">= 1", n_v));
    }
    if d == 0 {
        return Err(Error::invalid("d", ">= 1", d));
    }
    if !epsilon.is_finite() || epsilon < 0.0 {
        return Err(Error::invalid("epsilon", ">= 0", epsilon));
    }

    let mut rng = rng_from_seed(seed);
    let mut r_min = schedule.r_min;
    let mut r_max = schedule.r_max;
    let mut vertices = Vec::with_capacity(m);
    for _ in 0..m {
        let mut cluster = Vec::with_capacity(n_v);
        for _ in 0..n_v {
            let vertex: Vec<f64> = (0..d).map(|_| rng.random_range(r_min..r_max)).collect();
            cluster.push(vertex);
        }
        vertices.push(cluster);
        r_min += schedule.i_plus * epsilon;
        r_max += schedule.i_plus * epsilon;
    }

    Ok(ClusterGeometry {
        m,
        n_v,
        d,
        epsilon,
        seed,
        vertices,
    })
}
