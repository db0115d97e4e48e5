//! Dense upper-triangular QUBO matrix.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Real-valued `n x n` matrix with every entry below the diagonal fixed at
/// zero. Stored dense; problem sizes here stay in the low hundreds.
///
/// Serializes as nested row arrays.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<f64>>", into = "Vec<Vec<f64>>")]
pub struct QuboMatrix {
    n: usize,
    entries: Vec<f64>,
}

impl QuboMatrix {
    pub fn zeros(n: usize) -> Self {
        QuboMatrix {
            n,
            entries: vec![0.0; n * n],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.n + j]
    }

    /// Writes an upper-triangle entry. Lower-triangle writes are a logic bug.
    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: f64) {
        debug_assert!(i <= j, "write below the diagonal ({i},{j})");
        self.entries[i * self.n + j] = value;
    }

    #[inline]
    pub fn add(&mut self, i: usize, j: usize, delta: f64) {
        debug_assert!(i <= j, "write below the diagonal ({i},{j})");
        self.entries[i * self.n + j] += delta;
    }

    /// Iterates the upper triangle (diagonal included) in row-major order.
    pub fn upper_entries(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.n).flat_map(move |i| (i..self.n).map(move |j| (i, j, self.get(i, j))))
    }

    /// Number of stored upper-triangle entries, diagonal included.
    pub fn upper_len(&self) -> usize {
        self.n * (self.n + 1) / 2
    }

    /// Applies `f` to every upper-triangle entry in row-major order.
    pub fn map_upper(&self, mut f: impl FnMut(f64) -> f64) -> QuboMatrix {
        let mut out = QuboMatrix::zeros(self.n);
        for i in 0..self.n {
            for j in i..self.n {
                out.set(i, j, f(self.get(i, j)));
            }
        }
        out
    }
}

impl From<QuboMatrix> for Vec<Vec<f64>> {
    fn from(q: QuboMatrix) -> Self {
        (0..q.n)
            .map(|i| (0..q.n).map(|j| q.get(i, j)).collect())
            .collect()
    }
}

impl TryFrom<Vec<Vec<f64>>> for QuboMatrix {
    type Error = Error;

    fn try_from(rows: Vec<Vec<f64>>) -> Result<Self> {
        let n = rows.len();
        let mut q = QuboMatrix::zeros(n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::RaggedRow {
                    row: i,
                    found: row.len(),
                    expected: n,
                });
            }
            for (j, &v) in row.iter().enumerate() {
                if !v.is_finite() {
                    return Err(Error::invalid("matrix entry", "finite", v));
                }
                if j < i {
                    if v != 0.0 {
                        return Err(Error::invalid("matrix entry", "zero below the diagonal", v));
                    }
                } else {
                    q.set(i, j, v);
                }
            }
        }
        Ok(q)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trips_through_nested_arrays() {
        let mut q = QuboMatrix::zeros(3);
        q.set(0, 0, 1.5);
        q.set(0, 2, -2.0);
        q.set(1, 2, 0.25);
        let json = serde_json::to_string(&q).unwrap();
        let back: QuboMatrix = serde_json::from_str(&json).unwrap();
        assert_eq!(q, back);
    }

    #[test]
    fn rejects_nonzero_lower_triangle() {
        let rows = vec![vec![0.0, 1.0], vec![2.0, 0.0]];
        assert!(QuboMatrix::try_from(rows).is_err());
    }

    #[test]
    fn upper_iteration_covers_the_triangle() {
        let q = QuboMatrix::zeros(4);
        assert_eq!(q.upper_entries().count(), q.upper_len());
    }
}
