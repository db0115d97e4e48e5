//! QUBO minimization: an exact exhaustive oracle for small problems and
//! seeded simulated annealing as the general-purpose stand-in for quantum
//! hardware.

use std::collections::BTreeMap;

use rand::Rng;
use serde::{Deserialize, Serialize};

pub use crate::qubo::QuboMatrix;

use crate::error::{Error, Result};
use crate::rng::{derive_seed, rng_from_seed};

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Problems at or below this size are safe to enumerate exhaustively.
pub const DEFAULT_EXHAUSTIVE_CAP: usize = 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolverId {
    Exhaustive,
    Sa,
}

/// Minimizer choice; `Auto` picks the exact oracle whenever the problem fits
/// under the exhaustive cap.
#[derive(Debug, Default, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolverStrategy {
    #[default]
    Auto,
    Exhaustive,
    Sa,
}

impl std::fmt::Display for SolverStrategy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SolverStrategy::Auto => write!(f, "auto"),
            SolverStrategy::Exhaustive => write!(f, "exhaustive"),
            SolverStrategy::Sa => write!(f, "sa"),
        }
    }
}

/// One distinct solution a multi-read solver observed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleGroup {
    pub bits: Vec<u8>,
    pub energy: f64,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveResult {
    pub bits: Vec<u8>,
    pub energy: f64,
    pub solver_id: SolverId,
    /// Per-restart bests for annealing runs, grouped by bit vector and
    /// sorted by energy.
    pub samples: Option<Vec<SampleGroup>>,
}

/// Simulated-annealing knobs. Unset temperatures are resolved per problem:
/// the start is ten times the largest entry magnitude and the end is one
/// hundredth of the smallest nonzero magnitude, floored at 1e-6 so the
/// schedule survives aggressively scaled matrices.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SaParams {
    pub restarts: usize,
    pub sweeps: usize,
    pub t_start: Option<f64>,
    pub t_end: Option<f64>,
}

impl Default for SaParams {
    fn default() -> Self {
        SaParams {
            restarts: 100,
            sweeps: 1000,
            t_start: None,
            t_end: None,
        }
    }
}

impl SaParams {
    fn resolve(&self, q: &QuboMatrix) -> Result<(f64, f64)> {
        if self.restarts == 0 {
            return Err(Error::invalid("restarts", ">= 1", self.restarts));
        }
        if self.sweeps == 0 {
            return Err(Error::invalid("sweeps", ">= 1", self.sweeps));
        }
        let mut max_abs: f64 = 0.0;
        let mut min_nonzero = f64::INFINITY;
        for (_, _, v) in q.upper_entries() {
            let a = v.abs();
            max_abs = max_abs.max(a);
            if a > 0.0 {
                min_nonzero = min_nonzero.min(a);
            }
        }
        let t_start = self.t_start.unwrap_or_else(|| (10.0 * max_abs).max(1e-5));
        let t_end = self.t_end.unwrap_or_else(|| {
            if min_nonzero.is_finite() {
                (0.01 * min_nonzero).max(1e-6)
            } else {
                1e-6
            }
        });
        if !(t_start.is_finite() && t_end.is_finite()) || t_start <= t_end || t_end <= 0.0 {
            return Err(Error::invalid(
                "temperature schedule",
                "t_start > t_end > 0",
                format!("t_start={t_start}, t_end={t_end}"),
            ));
        }
        Ok((t_start, t_end))
    }
}

/// `sum_{i<=j} Q(i,j) * x_i * x_j` with input validation.
pub fn objective(q: &QuboMatrix, bits: &[u8]) -> Result<f64> {
    if bits.len() != q.n() {
        return Err(Error::BitLengthMismatch {
            expected: q.n(),
            found: bits.len(),
        });
    }
    if let Some(index) = bits.iter().position(|&b| b > 1) {
        return Err(Error::NonBinaryBit {
            index,
            value: bits[index],
        });
    }
    Ok(objective_unchecked(q, bits))
}

fn objective_unchecked(q: &QuboMatrix, bits: &[u8]) -> f64 {
    let n = q.n();
    let mut total = 0.0;
    for i in 0..n {
        if bits[i] == 0 {
            continue;
        }
        total += q.get(i, i);
        for (j, &bj) in bits.iter().enumerate().skip(i + 1) {
            if bj == 1 {
                total += q.get(i, j);
            }
        }
    }
    total
}

/// Energy change from flipping bit `k` of `bits`, computed incrementally.
pub fn flip_delta(q: &QuboMatrix, bits: &[u8], k: usize) -> f64 {
    let sign = if bits[k] == 0 { 1.0 } else { -1.0 };
    let mut coupling = q.get(k, k);
    for (i, &bi) in bits.iter().enumerate().take(k) {
        if bi == 1 {
            coupling += q.get(i, k);
        }
    }
    for (j, &bj) in bits.iter().enumerate().skip(k + 1) {
        if bj == 1 {
            coupling += q.get(k, j);
        }
    }
    sign * coupling
}

/// Exact minimization by Gray-code enumeration of all `2^n` assignments.
///
/// Ties resolve to the lexicographically smallest bit vector with bit 0 most
/// significant. The returned energy is recomputed from scratch for the
/// winning assignment, so incremental drift cannot leak into the result.
pub fn solve_exhaustive(q: &QuboMatrix, cap: usize) -> Result<SolveResult> {
    let n = q.n();
    if n > cap {
        return Err(Error::ProblemTooLarge { n, cap });
    }
    assert!(n < usize::BITS as usize, "cap guards the shift below");

    // mask bit (n-1-i) holds x_i, so numeric mask order is lexicographic
    // order of the bit vector with x_0 most significant.
    let mut bits = vec![0u8; n];
    let mut energy = 0.0;
    let mut mask: usize = 0;
    let mut best_mask = mask;
    let mut best_energy = energy;

    let total: usize = 1 << n;
    for step in 1..total {
        let gray_bit = step.trailing_zeros() as usize;
        let var = n - 1 - gray_bit;
        energy += flip_delta(q, &bits, var);
        bits[var] ^= 1;
        mask ^= 1 << gray_bit;
        if energy < best_energy || (energy == best_energy && mask < best_mask) {
            best_energy = energy;
            best_mask = mask;
        }
    }

    let bits: Vec<u8> = (0..n)
        .map(|i| ((best_mask >> (n - 1 - i)) & 1) as u8)
        .collect();
    let energy = objective_unchecked(q, &bits);
    Ok(SolveResult {
        bits,
        energy,
        solver_id: SolverId::Exhaustive,
        samples: None,
    })
}

fn sa_single_restart(
    q: &QuboMatrix,
    sweeps: usize,
    t_start: f64,
    t_end: f64,
    seed: u64,
) -> (Vec<u8>, f64) {
    let n = q.n();
    let mut rng = rng_from_seed(seed);
    let mut bits: Vec<u8> = (0..n).map(|_| u8::from(rng.random_bool(0.5))).collect();
    let mut energy = objective_unchecked(q, &bits);
    let mut best_bits = bits.clone();
    let mut best_energy = energy;

    let ratio = t_end / t_start;
    for sweep in 0..sweeps {
        let progress = if sweeps > 1 {
            sweep as f64 / (sweeps - 1) as f64
        } else {
            1.0
        };
        let temperature = t_start * ratio.powf(progress);
        for k in 0..n {
            let delta = flip_delta(q, &bits, k);
            let accept = delta <= 0.0 || rng.random::<f64>() < (-delta / temperature).exp();
            if accept {
                bits[k] ^= 1;
                energy += delta;
                if energy < best_energy {
                    best_energy = energy;
                    best_bits.copy_from_slice(&bits);
                }
            }
        }
    }

    // recompute to shed incremental drift
    let best_energy = objective_unchecked(q, &best_bits);
    (best_bits, best_energy)
}

/// Best-of-restarts single-flip Metropolis annealing on a geometric
/// temperature schedule.
///
/// Each restart runs on its own generator seeded from `seed` and the restart
/// index, so results are identical whether restarts execute sequentially or
/// in parallel. `samples` carries the per-restart bests grouped by bit
/// vector.
pub fn solve_sa(q: &QuboMatrix, params: &SaParams, seed: u64) -> Result<SolveResult> {
    let (t_start, t_end) = params.resolve(q)?;
    let sweeps = params.sweeps;

    let run =
        |restart: u64| sa_single_restart(q, sweeps, t_start, t_end, derive_seed(seed, restart));

    #[cfg(feature = "parallel")]
    let restart_bests: Vec<(Vec<u8>, f64)> = (0..params.restarts as u64)
        .into_par_iter()
        .map(run)
        .collect();

    #[cfg(not(feature = "parallel"))]
    let restart_bests: Vec<(Vec<u8>, f64)> = (0..params.restarts as u64).map(run).collect();

    let mut grouped: BTreeMap<Vec<u8>, (f64, usize)> = BTreeMap::new();
    for (bits, energy) in &restart_bests {
        let entry = grouped.entry(bits.clone()).or_insert((*energy, 0));
        entry.1 += 1;
    }
    let mut samples: Vec<SampleGroup> = grouped
        .into_iter()
        .map(|(bits, (energy, count))| SampleGroup {
            bits,
            energy,
            count,
        })
        .collect();
    samples.sort_by(|a, b| a.energy.total_cmp(&b.energy).then(a.bits.cmp(&b.bits)));

    let (best_bits, best_energy) = restart_bests
        .into_iter()
        .reduce(|best, candidate| {
            if candidate.1 < best.1 {
                candidate
            } else {
                best
            }
        })
        .expect("restarts >= 1");

    Ok(SolveResult {
        bits: best_bits,
        energy: best_energy,
        solver_id: SolverId::Sa,
        samples: Some(samples),
    })
}

/// Dispatches on strategy: `Auto` uses the exact oracle up to `cap` variables
/// and annealing beyond it.
pub fn solve(
    q: &QuboMatrix,
    strategy: SolverStrategy,
    cap: usize,
    params: &SaParams,
    seed: u64,
) -> Result<SolveResult> {
    match strategy {
        SolverStrategy::Exhaustive => solve_exhaustive(q, cap),
        SolverStrategy::Sa => solve_sa(q, params, seed),
        SolverStrategy::Auto => {
            if q.n() <= cap {
                solve_exhaustive(q, cap)
            } else {
                solve_sa(q, params, seed)
            }
        }
    }
}
