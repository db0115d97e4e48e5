//! Per-instance matrix construction: feeding one instance into the
//! cluster-form yields the instance-cluster matrix that goes to the solver.

use serde::{Deserialize, Serialize};

use crate::clusterform::{standardize_in_place, ClusterForm, LookupTables};
use crate::dataset::Instance;
use crate::error::{Error, Result};
use crate::qubo::QuboMatrix;

/// How an instance coordinate updates the per-qubit value table.
#[derive(Debug, Default, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DistanceMode {
    /// `value - coord^2`: the update applied verbatim.
    #[default]
    SubtractSquare,
    /// `(value - coord)^2`: proper squared Euclidean distance per coordinate.
    SquaredEuclidean,
}

impl std::fmt::Display for DistanceMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            DistanceMode::SubtractSquare => write!(f, "subtract_square"),
            DistanceMode::SquaredEuclidean => write!(f, "squared_euclidean"),
        }
    }
}

/// Scaled, solver-ready matrix for one instance, with the updated value table
/// the readout needs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceClusterMatrix {
    pub q: QuboMatrix,
    /// Per-qubit values after the instance update.
    pub instance_values: Vec<f64>,
    pub instance_index: usize,
}

/// Applies the instance update to a fresh copy of the coordinate table.
///
/// Walks clusters in block order and qubits within each block in order; the
/// coordinate counter cycles through the instance's coordinates and restarts
/// at every cluster boundary. The base table is left untouched.
pub fn update_instance_values(
    tables: &LookupTables,
    instance: &Instance,
    mode: DistanceMode,
) -> Result<Vec<f64>> {
    let d = instance.coords.len();
    if d == 0 {
        return Err(Error::DimensionMismatch {
            expected: 1,
            found: 0,
        });
    }
    for block in tables.cluster_qubits() {
        if block.len() % d != 0 {
            return Err(Error::DimensionMismatch {
                expected: block.len(),
                found: d,
            });
        }
    }
    let mut values = tables.coord_values().to_vec();
    for block in tables.cluster_qubits() {
        let mut cc = 0usize;
        for &qubit in block {
            let coord = instance.coords[cc];
            values[qubit] = match mode {
                DistanceMode::SubtractSquare => values[qubit] - coord * coord,
                DistanceMode::SquaredEuclidean => {
                    let diff = values[qubit] - coord;
                    diff * diff
                }
            };
            cc += 1;
            if cc == d {
                cc = 0;
            }
        }
    }
    Ok(values)
}

/// Adds the instance couplings to a copy of the base matrix (unscaled).
///
/// For every upper-triangle pair: same cluster off-diagonal subtracts
/// `v_i^2 + v_j^2`, the diagonal subtracts `v_i^2`, different clusters add
/// `v_i^2 + v_j^2`. A different-cluster diagonal cannot occur since each
/// qubit belongs to exactly one cluster.
pub fn apply_instance_couplings(cf: &ClusterForm, values: &[f64]) -> QuboMatrix {
    let n = cf.base.n();
    debug_assert_eq!(values.len(), n);
    let mut q = cf.base.clone();
    for i in 0..n {
        let vi2 = values[i] * values[i];
        q.add(i, i, -vi2);
        for (j, &vj) in values.iter().enumerate().skip(i + 1) {
            let sum = vi2 + vj * vj;
            if cf.tables.same_cluster(i, j) {
                q.add(i, j, -sum);
            } else {
                q.add(i, j, sum);
            }
        }
    }
    q
}

/// Centers the upper triangle (diagonal included) to mean zero and scales it
/// to unit population variance; degenerate matrices are centered only. The
/// structural zeros below the diagonal are excluded from the statistics.
pub fn scale_upper_triangle(q: &QuboMatrix) -> QuboMatrix {
    let mut values: Vec<f64> = q.upper_entries().map(|(_, _, v)| v).collect();
    standardize_in_place(&mut values);
    let mut iter = values.into_iter();
    q.map_upper(|_| iter.next().expect("entry counts match"))
}

/// Full per-instance composition: update values, apply couplings, scale.
pub fn feed_instance(
    cf: &ClusterForm,
    instance: &Instance,
    mode: DistanceMode,
) -> Result<InstanceClusterMatrix> {
    let instance_values = update_instance_values(&cf.tables, instance, mode)?;
    let raw = apply_instance_couplings(cf, &instance_values);
    let q = scale_upper_triangle(&raw);
    Ok(InstanceClusterMatrix {
        q,
        instance_values,
        instance_index: instance.index,
    })
}
