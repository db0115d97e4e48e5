//! Lloyd's k-means with k-means++ seeding.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::rng::rng_from_seed;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KMeansConfig {
    pub max_iter: usize,
    /// Independent seedings compared by inertia in the experiment layer.
    pub restarts: usize,
}

impl Default for KMeansConfig {
    fn default() -> Self {
        KMeansConfig {
            max_iter: 300,
            restarts: 10,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KMeansModel {
    pub centroids: Vec<Vec<f64>>,
    pub iterations_run: usize,
    /// Sum of squared distances to assigned centroids.
    pub inertia: f64,
    pub converged: bool,
}

/// One seeded k-means run: k-means++ initialization, then Lloyd iterations
/// until the assignment reaches a fixpoint or `max_iter`. An emptied cluster
/// is re-seeded to the point farthest from its assigned centroid.
pub fn kmeans_cluster(
    ds: &Dataset,
    m: usize,
    max_iter: usize,
    seed: u64,
) -> Result<(Vec<usize>, KMeansModel)> {
    let n = ds.len();
    if m == 0 {
        return Err(Error::invalid("m", ">= 1", m));
    }
    if m > n {
        return Err(Error::TooManyClusters { m, instances: n });
    }
    let points: Vec<&[f64]> = ds.instances().iter().map(|i| i.coords.as_slice()).collect();
    let mut rng = rng_from_seed(seed);
    let mut centroids = plus_plus_seeding(&points, m, &mut rng);

    let mut labels = vec![0usize; n];
    let mut iterations_run = 0;
    let mut converged = false;
    for _ in 0..max_iter {
        iterations_run += 1;
        let mut new_labels = Vec::with_capacity(n);
        let mut dists = Vec::with_capacity(n);
        for p in &points {
            let (k, dist) = nearest(&centroids, p);
            new_labels.push(k);
            dists.push(dist);
        }

        for (k, centroid) in centroids.iter_mut().enumerate() {
            if !new_labels.contains(&k) {
                // farthest point from its current centroid becomes the seed
                let far = (0..n)
                    .max_by(|&a, &b| dists[a].total_cmp(&dists[b]))
                    .expect("dataset is non-empty");
                *centroid = points[far].to_vec();
                new_labels[far] = k;
                dists[far] = 0.0;
            }
        }

        let fixpoint = iterations_run > 1 && new_labels == labels;
        labels = new_labels;
        if fixpoint {
            converged = true;
            break;
        }
        update_centroids(&points, &labels, &mut centroids);
    }

    let inertia = points
        .iter()
        .zip(labels.iter())
        .map(|(p, &k)| squared_distance(p, &centroids[k]))
        .sum();
    Ok((
        labels,
        KMeansModel {
            centroids,
            iterations_run,
            inertia,
            converged,
        },
    ))
}

fn plus_plus_seeding(points: &[&[f64]], m: usize, rng: &mut impl Rng) -> Vec<Vec<f64>> {
    let n = points.len();
    let mut centroids: Vec<Vec<f64>> = Vec::with_capacity(m);
    centroids.push(points[rng.random_range(0..n)].to_vec());
    let mut d2: Vec<f64> = vec![0.0; n];
    while centroids.len() < m {
        let mut total = 0.0;
        for (i, p) in points.iter().enumerate() {
            let dist = centroids
                .iter()
                .map(|c| squared_distance(p, c))
                .fold(f64::INFINITY, f64::min);
            d2[i] = dist;
            total += dist;
        }
        let pick = if total > 0.0 {
            // inverse-cdf draw over the squared-distance weights
            let target = rng.random_range(0.0..total);
            let mut acc = 0.0;
            let mut chosen = n - 1;
            for (i, &w) in d2.iter().enumerate() {
                acc += w;
                if target < acc {
                    chosen = i;
                    break;
                }
            }
            chosen
        } else {
            rng.random_range(0..n)
        };
        centroids.push(points[pick].to_vec());
    }
    centroids
}

fn nearest(centroids: &[Vec<f64>], p: &[f64]) -> (usize, f64) {
    let mut best = 0;
    let mut best_dist = squared_distance(p, &centroids[0]);
    for (k, c) in centroids.iter().enumerate().skip(1) {
        let dist = squared_distance(p, c);
        if dist < best_dist {
            best = k;
            best_dist = dist;
        }
    }
    (best, best_dist)
}

fn update_centroids(points: &[&[f64]], labels: &[usize], centroids: &mut [Vec<f64>]) {
    let d = points[0].len();
    for (k, c) in centroids.iter_mut().enumerate() {
        let mut sum = vec![0.0; d];
        let mut count = 0usize;
        for (p, &l) in points.iter().zip(labels.iter()) {
            if l == k {
                for (s, &v) in sum.iter_mut().zip(p.iter()) {
                    *s += v;
                }
                count += 1;
            }
        }
        if count > 0 {
            for s in &mut sum {
                *s /= count as f64;
            }
            *c = sum;
        }
    }
}

fn squared_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x - y) * (x - y)).sum()
}
