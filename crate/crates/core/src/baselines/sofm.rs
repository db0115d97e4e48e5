//! Self-organizing feature map reduced to a clusterer: a one-dimensional
//! lattice of exactly `m` neurons, trained with winner-take-most updates and
//! a Gaussian neighborhood that cuts off beyond the shrinking radius. The
//! final label of an instance is the index of its winning neuron.

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::rng::rng_from_seed;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SofmParams {
    /// Training epochs over the full dataset.
    pub epochs: usize,
    pub mu_start: f64,
    pub mu_end: f64,
    /// Defaults to m/2 when unset.
    pub radius_start: Option<f64>,
    pub radius_end: f64,
}

impl Default for SofmParams {
    fn default() -> Self {
        SofmParams {
            epochs: 100,
            mu_start: 0.5,
            mu_end: 0.01,
            radius_start: None,
            radius_end: 0.5,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SofmModel {
    /// Weight vector per neuron.
    pub neurons: Vec<Vec<f64>>,
    /// Lattice coordinate per neuron (a line: 0, 1, 2, ...).
    pub positions: Vec<f64>,
}

impl SofmModel {
    /// Index of the neuron closest to `x` in Euclidean distance; ties go to
    /// the lowest index.
    pub fn winner(&self, x: &[f64]) -> Result<usize> {
        let d = self.neurons[0].len();
        if x.len() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: x.len(),
            });
        }
        let mut best = 0;
        let mut best_dist = squared_distance(&self.neurons[0], x);
        for (i, w) in self.neurons.iter().enumerate().skip(1) {
            let dist = squared_distance(w, x);
            if dist < best_dist {
                best = i;
                best_dist = dist;
            }
        }
        Ok(best)
    }

    /// Moves every neuron toward `x` by `mu * phi`, where `phi` is the
    /// Gaussian neighborhood factor of its lattice distance to the winner.
    pub fn update(&mut self, x: &[f64], winner: usize, mu: f64, radius: f64) {
        let win_pos = self.positions[winner];
        for (w, &pos) in self.neurons.iter_mut().zip(self.positions.iter()) {
            let phi = neighborhood_factor((pos - win_pos).abs(), radius);
            if phi > 0.0 {
                pull_toward(w, x, mu * phi);
            }
        }
    }
}

/// Gaussian neighborhood, zero beyond the radius.
pub fn neighborhood_factor(lattice_distance: f64, radius: f64) -> f64 {
    if lattice_distance > radius {
        0.0
    } else {
        (-lattice_distance * lattice_distance / (2.0 * radius * radius)).exp()
    }
}

/// `w += factor * (x - w)` per coordinate.
pub fn pull_toward(w: &mut [f64], x: &[f64], factor: f64) {
    for (wi, &xi) in w.iter_mut().zip(x.iter()) {
        *wi += factor * (xi - *wi);
    }
}

/// Geometric interpolation from `sigma_s` down to `sigma_e`: the value used
/// after iteration `t` of `t_e`. Reaches `sigma_e` exactly at the last step.
pub fn decay_schedule(sigma_s: f64, sigma_e: f64, t: usize, t_e: usize) -> Result<f64> {
    if !(sigma_s >= sigma_e && sigma_e > 0.0) {
        return Err(Error::invalid(
            "decay endpoints",
            "sigma_s >= sigma_e > 0",
            format!("sigma_s={sigma_s}, sigma_e={sigma_e}"),
        ));
    }
    if t >= t_e {
        return Err(Error::invalid("t", "< t_e", t));
    }
    let exponent = (t + 1) as f64 / t_e as f64;
    Ok(sigma_s * (sigma_e / sigma_s).powf(exponent))
}

/// Trains an `m`-neuron line over shuffled data and labels each instance with
/// its winning neuron.
///
/// Weights initialize uniformly inside each attribute's observed range;
/// the learning rate and radius decay geometrically each epoch.
pub fn sofm_cluster(
    ds: &Dataset,
    m: usize,
    params: &SofmParams,
    seed: u64,
) -> Result<(Vec<usize>, SofmModel)> {
    if m < 2 {
        return Err(Error::invalid("m", ">= 2", m));
    }
    if params.epochs == 0 {
        return Err(Error::invalid("epochs", ">= 1", params.epochs));
    }
    let d = ds.dims();
    let mut rng = rng_from_seed(seed);

    let stats = ds.attribute_stats();
    let neurons: Vec<Vec<f64>> = (0..m)
        .map(|_| {
            (0..d)
                .map(|c| {
                    if stats[c].max > stats[c].min {
                        rng.random_range(stats[c].min..stats[c].max)
                    } else {
                        stats[c].min
                    }
                })
                .collect()
        })
        .collect();
    let positions: Vec<f64> = (0..m).map(|i| i as f64).collect();
    let mut model = SofmModel { neurons, positions };

    let radius_start = params.radius_start.unwrap_or(m as f64 / 2.0);
    let mut order: Vec<usize> = (0..ds.len()).collect();
    for t in 0..params.epochs {
        let mu = decay_schedule(params.mu_start, params.mu_end, t, params.epochs)?;
        let radius = decay_schedule(radius_start, params.radius_end, t, params.epochs)?;
        order.shuffle(&mut rng);
        for &idx in &order {
            let x = &ds.instances()[idx].coords;
            let winner = model.winner(x)?;
            model.update(x, winner, mu, radius);
        }
    }

    let labels = ds
        .instances()
        .iter()
        .map(|inst| model.winner(&inst.coords))
        .collect::<Result<Vec<_>>>()?;
    Ok((labels, model))
}

fn squared_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x - y) * (x - y)).sum()
}
