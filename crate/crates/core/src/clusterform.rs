//! Instance-independent cluster-form: the base QUBO plus lookup tables.
//!
//! Qubits are numbered consecutively cluster by cluster, one per vertex
//! coordinate. The coordinate-value table maps each qubit to the coordinate
//! it encodes; the cluster table maps each cluster to its contiguous qubit
//! block. The base matrix couples qubits of the same cluster negatively and
//! qubits of different clusters positively, so that feeding an instance
//! lowers the couplings around its most plausible cluster while raising the
//! rest.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::ClusterGeometry;
use crate::qubo::QuboMatrix;

/// Per-qubit coordinate values and per-cluster qubit blocks.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "LookupTablesWire", into = "LookupTablesWire")]
pub struct LookupTables {
    /// Coordinate value each qubit encodes, flattened cluster-major:
    /// the first `d` entries are the first vertex of the first cluster.
    coord_values: Vec<f64>,
    /// Qubit IDs per cluster; contiguous ascending blocks partitioning 0..N.
    cluster_qubits: Vec<Vec<usize>>,
    /// Cluster that owns each qubit (derived, kept for O(1) lookups).
    #[serde(skip)]
    qubit_cluster: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct LookupTablesWire {
    coord_values: Vec<f64>,
    cluster_qubits: Vec<Vec<usize>>,
}

impl From<LookupTables> for LookupTablesWire {
    fn from(t: LookupTables) -> Self {
        LookupTablesWire {
            coord_values: t.coord_values,
            cluster_qubits: t.cluster_qubits,
        }
    }
}

impl TryFrom<LookupTablesWire> for LookupTables {
    type Error = Error;

    fn try_from(wire: LookupTablesWire) -> Result<Self> {
        LookupTables::new(wire.coord_values, wire.cluster_qubits)
    }
}

impl LookupTables {
    /// Validates the partition invariant: blocks are contiguous, ascending,
    /// disjoint and jointly cover `0..N`.
    pub fn new(coord_values: Vec<f64>, cluster_qubits: Vec<Vec<usize>>) -> Result<Self> {
        let n = coord_values.len();
        let mut qubit_cluster = vec![usize::MAX; n];
        let mut next = 0usize;
        for (k, block) in cluster_qubits.iter().enumerate() {
            for &q in block {
                if q != next || q >= n {
                    return Err(Error::invalid(
                        "cluster_qubits",
                        "contiguous ascending partition of 0..N",
                        format!("{q} in cluster {k}"),
                    ));
                }
                qubit_cluster[q] = k;
                next += 1;
            }
        }
        if next != n {
            return Err(Error::invalid(
                "cluster_qubits",
                "complete partition of 0..N",
                format!("{next} of {n} qubits assigned"),
            ));
        }
        Ok(LookupTables {
            coord_values,
            cluster_qubits,
            qubit_cluster,
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.coord_values.len()
    }

    pub fn cluster_count(&self) -> usize {
        self.cluster_qubits.len()
    }

    pub fn coord_values(&self) -> &[f64] {
        &self.coord_values
    }

    pub fn cluster_qubits(&self) -> &[Vec<usize>] {
        &self.cluster_qubits
    }

    #[inline]
    pub fn cluster_of(&self, qubit: usize) -> usize {
        self.qubit_cluster[qubit]
    }

    #[inline]
    pub fn same_cluster(&self, i: usize, j: usize) -> bool {
        self.qubit_cluster[i] == self.qubit_cluster[j]
    }
}

/// Sign treatment for same-cluster couplings in the base matrix.
#[derive(Debug, Default, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IntraMode {
    /// Same-cluster entries get `-sqrt(L_i^2 + L_j^2)`.
    #[default]
    SqrtCoupling,
    /// Same-cluster entries stay zero; sometimes better, higher variance.
    Zero,
}

impl std::fmt::Display for IntraMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            IntraMode::SqrtCoupling => write!(f, "sqrt_coupling"),
            IntraMode::Zero => write!(f, "zero"),
        }
    }
}

/// The base QUBO and its lookup tables. Built once per run; instance feeding
/// always copies and never mutates it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusterForm {
    pub base: QuboMatrix,
    pub tables: LookupTables,
    pub intra_mode: IntraMode,
}

/// Flattens geometry vertices into the lookup tables.
///
/// With `scale_values` the coordinate table is centered to mean zero and
/// scaled to unit population variance as a whole; useful when the data
/// variance would otherwise dominate the couplings.
pub fn build_lookup_tables(geom: &ClusterGeometry, scale_values: bool) -> LookupTables {
    let block = geom.n_v * geom.d;
    let mut coord_values = Vec::with_capacity(geom.qubit_count());
    let mut cluster_qubits = Vec::with_capacity(geom.m);
    for (k, cluster) in geom.vertices.iter().enumerate() {
        let start = k * block;
        cluster_qubits.push((start..start + block).collect());
        for vertex in cluster {
            coord_values.extend_from_slice(vertex);
        }
    }
    if scale_values {
        standardize_in_place(&mut coord_values);
    }
    LookupTables::new(coord_values, cluster_qubits)
        .expect("construction from geometry satisfies the partition invariant")
}

/// Builds the base matrix from the tables.
///
/// For every pair `i <= j`: same cluster subtracts `sqrt(L_i^2 + L_j^2)`
/// (or stays zero under [`IntraMode::Zero`]), different clusters add it.
pub fn build_cluster_form(tables: &LookupTables, intra_mode: IntraMode) -> ClusterForm {
    let n = tables.n_qubits();
    let values = tables.coord_values();
    let mut base = QuboMatrix::zeros(n);
    for i in 0..n {
        for j in i..n {
            let magnitude = values[i].hypot(values[j]);
            if tables.same_cluster(i, j) {
                if intra_mode == IntraMode::SqrtCoupling {
                    base.add(i, j, -magnitude);
                }
            } else {
                base.add(i, j, magnitude);
            }
        }
    }
    ClusterForm {
        base,
        tables: tables.clone(),
        intra_mode,
    }
}

/// Centers to mean zero and, unless degenerate, scales to unit population
/// variance.
pub(crate) fn standardize_in_place(values: &mut [f64]) {
    if values.is_empty() {
        return;
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
    let std = var.sqrt();
    for v in values.iter_mut() {
        *v -= mean;
        if std > 0.0 {
            *v /= std;
        }
    }
}
