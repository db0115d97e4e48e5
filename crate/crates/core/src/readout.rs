//! Extraction of cluster assignments from a solved bit vector.
//!
//! Three readings of the same result: the definite assignment (lowest sum of
//! on-qubit values per cluster), on-count percentages, and on-value-sum
//! percentages. Readout looks only at the bits, the cluster blocks and the
//! per-instance value table, never at the matrix.

use serde::{Deserialize, Serialize};

use crate::clusterform::LookupTables;
use crate::error::{Error, Result};
use crate::solver::SolveResult;

/// Per-instance assignment bundle.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Assignment {
    pub instance_index: usize,
    pub definite_cluster: usize,
    /// On-count share per cluster.
    pub prob1: Vec<f64>,
    /// On-value-sum share per cluster.
    pub prob2: Vec<f64>,
    /// False when the value sums mix signs or cancel; the shares are then not
    /// a probability vector and are reported uniform instead of clamped.
    pub prob2_valid: bool,
    pub on_counts: Vec<usize>,
    pub on_value_sums: Vec<f64>,
    /// Set when the solver turned every qubit off; the definite cluster
    /// defaults to 0 and both probability vectors to uniform.
    pub all_off: bool,
}

fn check_dims(bits: &[u8], tables: &LookupTables) -> Result<()> {
    if bits.len() != tables.n_qubits() {
        return Err(Error::BitLengthMismatch {
            expected: tables.n_qubits(),
            found: bits.len(),
        });
    }
    Ok(())
}

fn per_cluster_on_stats(
    bits: &[u8],
    tables: &LookupTables,
    values: &[f64],
) -> (Vec<usize>, Vec<f64>) {
    let m = tables.cluster_count();
    let mut counts = vec![0usize; m];
    let mut sums = vec![0.0f64; m];
    for (k, block) in tables.cluster_qubits().iter().enumerate() {
        for &q in block {
            if bits[q] == 1 {
                counts[k] += 1;
                sums[k] += values[q];
            }
        }
    }
    (counts, sums)
}

/// Cluster with the lowest sum of on-qubit values; ties go to the lowest
/// cluster ID and an all-off result falls back to cluster 0 with a flag.
pub fn definite_assignment(
    result: &SolveResult,
    tables: &LookupTables,
    values: &[f64],
) -> Result<(usize, bool)> {
    check_dims(&result.bits, tables)?;
    if result.bits.iter().all(|&b| b == 0) {
        return Ok((0, true));
    }
    let (_, sums) = per_cluster_on_stats(&result.bits, tables, values);
    let mut best = 0;
    for (k, &s) in sums.iter().enumerate() {
        if s < sums[best] {
            best = k;
        }
    }
    Ok((best, false))
}

/// Share of turned-on qubits per cluster; uniform with a flag when all off.
pub fn probabilistic_on_counts(
    result: &SolveResult,
    tables: &LookupTables,
) -> Result<(Vec<f64>, bool)> {
    check_dims(&result.bits, tables)?;
    let m = tables.cluster_count();
    let values = vec![0.0; tables.n_qubits()];
    let (counts, _) = per_cluster_on_stats(&result.bits, tables, &values);
    let total: usize = counts.iter().sum();
    if total == 0 {
        return Ok((vec![1.0 / m as f64; m], true));
    }
    let probs = counts.iter().map(|&c| c as f64 / total as f64).collect();
    Ok((probs, false))
}

/// Share of on-qubit value sums per cluster.
///
/// Valid only when every share lands in `[0, 1]`, which holds exactly when
/// all nonzero sums carry one sign. Cancelling or mixed-sign sums come back
/// uniform with `valid = false` rather than silently clamped.
pub fn probabilistic_value_sums(
    result: &SolveResult,
    tables: &LookupTables,
    values: &[f64],
) -> Result<(Vec<f64>, bool)> {
    check_dims(&result.bits, tables)?;
    let m = tables.cluster_count();
    let (_, sums) = per_cluster_on_stats(&result.bits, tables, values);
    let total: f64 = sums.iter().sum();
    if total == 0.0 {
        return Ok((vec![1.0 / m as f64; m], false));
    }
    let probs: Vec<f64> = sums.iter().map(|&s| s / total).collect();
    let valid = probs.iter().all(|&p| (0.0..=1.0).contains(&p));
    if valid {
        Ok((probs, true))
    } else {
        Ok((vec![1.0 / m as f64; m], false))
    }
}

/// Bundles all three readings for one instance.
pub fn assemble_assignment(
    result: &SolveResult,
    tables: &LookupTables,
    values: &[f64],
    instance_index: usize,
) -> Result<Assignment> {
    let (definite_cluster, all_off) = definite_assignment(result, tables, values)?;
    let (prob1, _) = probabilistic_on_counts(result, tables)?;
    let (prob2, prob2_valid) = probabilistic_value_sums(result, tables, values)?;
    let (on_counts, on_value_sums) = per_cluster_on_stats(&result.bits, tables, values);
    Ok(Assignment {
        instance_index,
        definite_cluster,
        prob1,
        prob2,
        prob2_valid,
        on_counts,
        on_value_sums,
        all_off,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver::SolverId;

    fn tables(blocks: Vec<Vec<usize>>, n: usize) -> LookupTables {
        LookupTables::new(vec![0.0; n], blocks).unwrap()
    }

    fn result(bits: Vec<u8>) -> SolveResult {
        SolveResult {
            bits,
            energy: 0.0,
            solver_id: SolverId::Exhaustive,
            samples: None,
        }
    }

    #[test]
    fn definite_picks_the_lowest_sum() {
        let t = tables(vec![vec![0, 1], vec![2, 3]], 4);
        let values = [-5.0, -1.0, -2.0, -9.0];
        let r = result(vec![1, 0, 1, 0]);
        let (cluster, all_off) = definite_assignment(&r, &t, &values).unwrap();
        assert_eq!(cluster, 0);
        assert!(!all_off);
    }

    #[test]
    fn all_off_falls_back_to_cluster_zero() {
        let t = tables(vec![vec![0, 1], vec![2, 3]], 4);
        let r = result(vec![0, 0, 0, 0]);
        let (cluster, all_off) = definite_assignment(&r, &t, &[0.0; 4]).unwrap();
        assert_eq!(cluster, 0);
        assert!(all_off);
    }

    #[test]
    fn equal_sums_tie_to_the_lowest_id() {
        let t = tables(vec![vec![0, 1], vec![2, 3]], 4);
        let values = [-3.0, 0.0, -3.0, 0.0];
        let r = result(vec![1, 0, 1, 0]);
        let (cluster, _) = definite_assignment(&r, &t, &values).unwrap();
        assert_eq!(cluster, 0);
    }

    #[test]
    fn on_count_shares() {
        let t = tables(
            vec![vec![0, 1, 2, 3], vec![4, 5, 6, 7], vec![8, 9, 10, 11]],
            12,
        );
        let mut bits = vec![0u8; 12];
        bits[0] = 1;
        bits[1] = 1;
        bits[4] = 1;
        bits[8] = 1;
        let (p, all_off) = probabilistic_on_counts(&result(bits), &t).unwrap();
        assert_eq!(p, vec![0.5, 0.25, 0.25]);
        assert!(!all_off);
    }

    #[test]
    fn one_cluster_takes_everything() {
        let t = tables(
            vec![vec![0, 1, 2, 3], vec![4, 5, 6, 7], vec![8, 9, 10, 11]],
            12,
        );
        let mut bits = vec![0u8; 12];
        for b in bits.iter_mut().take(4) {
            *b = 1;
        }
        let (p, _) = probabilistic_on_counts(&result(bits), &t).unwrap();
        assert_eq!(p, vec![1.0, 0.0, 0.0]);
    }

    #[test]
    fn all_off_counts_are_uniform_and_flagged() {
        let t = tables(vec![vec![0], vec![1], vec![2]], 3);
        let (p, all_off) = probabilistic_on_counts(&result(vec![0, 0, 0]), &t).unwrap();
        assert_eq!(p, vec![1.0 / 3.0; 3]);
        assert!(all_off);
    }

    #[test]
    fn value_sum_shares_with_shared_sign() {
        let t = tables(vec![vec![0], vec![1]], 2);
        let (p, valid) = probabilistic_value_sums(&result(vec![1, 1]), &t, &[-6.0, -2.0]).unwrap();
        assert!(valid);
        assert!((p[0] - 0.75).abs() < 1e-12);
        assert!((p[1] - 0.25).abs() < 1e-12);

        let (p, valid) = probabilistic_value_sums(&result(vec![1, 1]), &t, &[3.0, 1.0]).unwrap();
        assert!(valid);
        assert_eq!(p, vec![0.75, 0.25]);
    }

    #[test]
    fn valid_shares_sum_to_one() {
        let t = tables(vec![vec![0, 1], vec![2, 3], vec![4, 5]], 6);
        let values = [-1.5, -0.25, -4.0, -2.0, -0.125, -3.5];
        let (p, valid) = probabilistic_value_sums(&result(vec![1; 6]), &t, &values).unwrap();
        assert!(valid);
        assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn mixed_signs_are_flagged_not_clamped() {
        let t = tables(vec![vec![0], vec![1]], 2);
        let (p, valid) = probabilistic_value_sums(&result(vec![1, 1]), &t, &[3.0, -1.0]).unwrap();
        assert!(!valid);
        assert_eq!(p, vec![0.5, 0.5]);
    }

    #[test]
    fn cancelling_sums_are_flagged() {
        let t = tables(vec![vec![0], vec![1]], 2);
        let (p, valid) = probabilistic_value_sums(&result(vec![1, 1]), &t, &[2.0, -2.0]).unwrap();
        assert!(!valid);
        assert_eq!(p, vec![0.5, 0.5]);
    }

    #[test]
    fn negative_sums_agree_with_the_definite_choice() {
        let t = tables(vec![vec![0, 1], vec![2, 3], vec![4, 5]], 6);
        let values = [-5.0, -1.0, -0.5, -0.25, -2.0, -1.5];
        let r = result(vec![1, 1, 1, 1, 1, 1]);
        let (definite, _) = definite_assignment(&r, &t, &values).unwrap();
        let (p2, valid) = probabilistic_value_sums(&r, &t, &values).unwrap();
        assert!(valid);
        let argmax = p2
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .unwrap()
            .0;
        assert_eq!(argmax, definite);
    }

    #[test]
    fn assembled_bundle_is_consistent() {
        let t = tables(vec![vec![0, 1], vec![2, 3]], 4);
        let values = [-1.0, -2.0, -3.0, -4.0];
        let a = assemble_assignment(&result(vec![1, 0, 0, 1]), &t, &values, 7).unwrap();
        assert_eq!(a.instance_index, 7);
        assert_eq!(a.on_counts, vec![1, 1]);
        assert_eq!(a.on_value_sums, vec![-1.0, -4.0]);
        assert_eq!(a.definite_cluster, 1);
        assert!((a.prob1.iter().sum::<f64>() - 1.0).abs() < 1e-9);
        assert!(a.prob2_valid);
        assert!(!a.all_off);
    }

    #[test]
    fn assembled_all_off_bundle() {
        let t = tables(vec![vec![0, 1], vec![2, 3]], 4);
        let a = assemble_assignment(&result(vec![0; 4]), &t, &[0.0; 4], 0).unwrap();
        assert!(a.all_off);
        assert_eq!(a.definite_cluster, 0);
        assert_eq!(a.prob1, vec![0.5, 0.5]);
        assert_eq!(a.prob2, vec![0.5, 0.5]);
        assert!(!a.prob2_valid);
    }

    #[test]
    fn relabeling_clusters_permutes_the_outputs() {
        let values = [-5.0, -1.0, -2.0, -9.0];
        let bits = vec![1, 0, 1, 1];
        let t_ab = tables(vec![vec![0, 1], vec![2, 3]], 4);
        let r = result(bits);
        let (p1_ab, _) = probabilistic_on_counts(&r, &t_ab).unwrap();
        let (p2_ab, _) = probabilistic_value_sums(&r, &t_ab, &values).unwrap();

        // swap block order: cluster 0 <-> cluster 1 (blocks must stay
        // contiguous ascending, so swap the values and bits instead)
        let swapped_values = [-2.0, -9.0, -5.0, -1.0];
        let swapped_bits = vec![1, 1, 1, 0];
        let r2 = result(swapped_bits);
        let (p1_ba, _) = probabilistic_on_counts(&r2, &t_ab).unwrap();
        let (p2_ba, _) = probabilistic_value_sums(&r2, &t_ab, &swapped_values).unwrap();
        assert_eq!(p1_ab, vec![p1_ba[1], p1_ba[0]]);
        assert_eq!(p2_ab, vec![p2_ba[1], p2_ba[0]]);
    }

    #[test]
    fn dimension_mismatch_is_rejected() {
        let t = tables(vec![vec![0, 1]], 2);
        let r = result(vec![1]);
        assert!(definite_assignment(&r, &t, &[0.0, 0.0]).is_err());
    }
}
