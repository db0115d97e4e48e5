//! Experiment protocol: seeded runs, best-permutation accuracy scoring and
//! comparison reports.
//!
//! A full clustering run is embarrassingly parallel across instances, so the
//! per-instance feed/solve/readout map runs on rayon when the `parallel`
//! feature is enabled. Per-instance solver seeds derive from the run seed and
//! the instance index, which keeps sequential and parallel execution
//! bit-identical.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::baselines::{kmeans_cluster, sofm_cluster, KMeansConfig, SofmParams};
use crate::clusterform::{build_cluster_form, build_lookup_tables, ClusterForm, IntraMode};
use crate::dataset::{Dataset, Instance};
use crate::error::{Error, Result};
use crate::geometry::{init_schedule, random_polygon_clusters, ClusterGeometry};
use crate::icm::{feed_instance, DistanceMode};
use crate::readout::{assemble_assignment, Assignment};
use crate::rng::derive_seed;
use crate::solver::{solve, SaParams, SolverStrategy, DEFAULT_EXHAUSTIVE_CAP};

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Exact permutation search is factorial in the cluster count.
pub const PERMUTATION_CAP: usize = 8;

/// Best bijection between predicted clusters and true classes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PermutationMatch {
    pub accuracy: f64,
    pub correct: usize,
    /// `mapping[cluster] = class`
    pub mapping: Vec<usize>,
}

/// Maximizes matching accuracy over all `m!` cluster-to-class bijections.
pub fn permutation_accuracy(
    predicted: &[usize],
    truth: &[usize],
    m: usize,
) -> Result<PermutationMatch> {
    if predicted.len() != truth.len() {
        return Err(Error::LabelLengthMismatch {
            left: predicted.len(),
            right: truth.len(),
        });
    }
    if m > PERMUTATION_CAP {
        return Err(Error::TooManyClassesForPermutation {
            m,
            cap: PERMUTATION_CAP,
        });
    }
    for &l in predicted.iter().chain(truth.iter()) {
        if l >= m {
            return Err(Error::invalid("label", "in 0..m", l));
        }
    }

    let mut best = PermutationMatch {
        accuracy: 0.0,
        correct: 0,
        mapping: (0..m).collect(),
    };
    let mut mapping: Vec<usize> = (0..m).collect();
    let total = predicted.len();
    heap_permutations(m, &mut mapping, &mut |perm| {
        let correct = predicted
            .iter()
            .zip(truth.iter())
            .filter(|(&p, &t)| perm[p] == t)
            .count();
        if correct > best.correct || (best.correct == 0 && best.accuracy == 0.0) {
            best = PermutationMatch {
                accuracy: correct as f64 / total as f64,
                correct,
                mapping: perm.to_vec(),
            };
        }
    });
    Ok(best)
}

fn heap_permutations(k: usize, arr: &mut Vec<usize>, f: &mut impl FnMut(&[usize])) {
    if k <= 1 {
        f(arr);
        return;
    }
    for i in 0..k {
        heap_permutations(k - 1, arr, f);
        if k.is_multiple_of(2) {
            arr.swap(i, k - 1);
        } else {
            arr.swap(0, k - 1);
        }
    }
}

/// Full configuration of one clustering run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QacaConfig {
    pub m: usize,
    pub n_v: usize,
    pub epsilon: f64,
    pub intra_mode: IntraMode,
    pub distance_mode: DistanceMode,
    /// Standardize the coordinate-value table as a whole.
    pub scale_values: bool,
    /// Standardize dataset columns before anything else.
    pub standardize_features: bool,
    pub strategy: SolverStrategy,
    pub sa: SaParams,
    pub exhaustive_cap: usize,
}

impl Default for QacaConfig {
    fn default() -> Self {
        QacaConfig {
            m: 3,
            n_v: 1,
            epsilon: 1.0,
            intra_mode: IntraMode::default(),
            distance_mode: DistanceMode::default(),
            scale_values: false,
            standardize_features: false,
            strategy: SolverStrategy::Auto,
            sa: SaParams::default(),
            exhaustive_cap: DEFAULT_EXHAUSTIVE_CAP,
        }
    }
}

/// Everything one seeded run produces.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QacaRun {
    pub seed: u64,
    pub geometry: ClusterGeometry,
    pub cluster_form: ClusterForm,
    pub assignments: Vec<Assignment>,
    /// Definite cluster per instance.
    pub labels: Vec<usize>,
}

fn assignment_for_instance(
    cf: &ClusterForm,
    instance: &Instance,
    config: &QacaConfig,
    run_seed: u64,
) -> Result<Assignment> {
    let icm = feed_instance(cf, instance, config.distance_mode)?;
    let result = solve(
        &icm.q,
        config.strategy,
        config.exhaustive_cap,
        &config.sa,
        derive_seed(run_seed, instance.index as u64),
    )?;
    assemble_assignment(&result, &cf.tables, &icm.instance_values, instance.index)
}

/// Sequential per-instance map; always available.
pub fn assignments_for_instances_seq(
    cf: &ClusterForm,
    instances: &[Instance],
    config: &QacaConfig,
    run_seed: u64,
) -> Result<Vec<Assignment>> {
    instances
        .iter()
        .map(|inst| assignment_for_instance(cf, inst, config, run_seed))
        .collect()
}

/// Rayon per-instance map; bit-identical to the sequential path.
#[cfg(feature = "parallel")]
pub fn assignments_for_instances_par(
    cf: &ClusterForm,
    instances: &[Instance],
    config: &QacaConfig,
    run_seed: u64,
) -> Result<Vec<Assignment>> {
    instances
        .par_iter()
        .map(|inst| assignment_for_instance(cf, inst, config, run_seed))
        .collect()
}

/// Per-instance map, parallel when the feature is on.
pub fn assignments_for_instances(
    cf: &ClusterForm,
    instances: &[Instance],
    config: &QacaConfig,
    run_seed: u64,
) -> Result<Vec<Assignment>> {
    #[cfg(feature = "parallel")]
    {
        assignments_for_instances_par(cf, instances, config, run_seed)
    }
    #[cfg(not(feature = "parallel"))]
    {
        assignments_for_instances_seq(cf, instances, config, run_seed)
    }
}

/// One seeded end-to-end run: geometry, cluster-form, per-instance solve and
/// readout.
pub fn run_qaca_once(ds: &Dataset, config: &QacaConfig, seed: u64) -> Result<QacaRun> {
    let standardized;
    let data = if config.standardize_features {
        standardized = ds.standardize_features();
        &standardized
    } else {
        ds
    };
    let schedule = init_schedule(data, config.m)?;
    let geometry = random_polygon_clusters(
        &schedule,
        config.m,
        config.n_v,
        data.dims(),
        config.epsilon,
        seed,
    )?;
    let tables = build_lookup_tables(&geometry, config.scale_values);
    let cluster_form = build_cluster_form(&tables, config.intra_mode);
    let assignments = assignments_for_instances(&cluster_form, data.instances(), config, seed)?;
    let labels = assignments.iter().map(|a| a.definite_cluster).collect();
    Ok(QacaRun {
        seed,
        geometry,
        cluster_form,
        assignments,
        labels,
    })
}

/// Accuracy report over a set of seeded runs of one algorithm.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub algorithm: String,
    pub seeds: Vec<u64>,
    /// Fractional accuracy per run, aligned with `seeds`.
    pub accuracies: Vec<f64>,
    pub correct_counts: Vec<usize>,
    pub total_instances: usize,
    pub mean_accuracy: f64,
    /// Resolved configuration snapshot for reproduction.
    pub config: serde_json::Value,
    /// True for rows carried from published numbers rather than reproduced.
    pub published_only: bool,
    /// Seconds per run. Excluded from serialization so that reports stay
    /// byte-identical across repeat runs.
    #[serde(skip)]
    pub wall_clock_s: Vec<f64>,
}

impl RunReport {
    fn from_runs(
        algorithm: &str,
        seeds: &[u64],
        accuracies: Vec<f64>,
        correct_counts: Vec<usize>,
        total_instances: usize,
        config: serde_json::Value,
        wall_clock_s: Vec<f64>,
    ) -> RunReport {
        let mean_accuracy = accuracies.iter().sum::<f64>() / accuracies.len().max(1) as f64;
        RunReport {
            algorithm: algorithm.to_string(),
            seeds: seeds.to_vec(),
            accuracies,
            correct_counts,
            total_instances,
            mean_accuracy,
            config,
            published_only: false,
            wall_clock_s,
        }
    }
}

fn truth_labels(ds: &Dataset) -> Result<&[usize]> {
    ds.labels().ok_or(Error::MissingLabels)
}

/// Runs the clustering pipeline once per seed and scores each run against
/// ground truth. Returns the report and the full per-seed run artifacts.
pub fn run_qaca_experiment(
    ds: &Dataset,
    config: &QacaConfig,
    seeds: &[u64],
) -> Result<(RunReport, Vec<QacaRun>)> {
    let truth = truth_labels(ds)?;
    let mut accuracies = Vec::with_capacity(seeds.len());
    let mut corrects = Vec::with_capacity(seeds.len());
    let mut clocks = Vec::with_capacity(seeds.len());
    let mut runs = Vec::with_capacity(seeds.len());
    for &seed in seeds {
        let start = Instant::now();
        let run = run_qaca_once(ds, config, seed)?;
        let score = permutation_accuracy(&run.labels, truth, config.m)?;
        clocks.push(start.elapsed().as_secs_f64());
        accuracies.push(score.accuracy);
        corrects.push(score.correct);
        runs.push(run);
    }
    let report = RunReport::from_runs(
        "QACA",
        seeds,
        accuracies,
        corrects,
        ds.len(),
        serde_json::to_value(config)?,
        clocks,
    );
    Ok((report, runs))
}

/// Baseline selection for comparison runs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum BaselineAlgo {
    KMeans(KMeansConfig),
    Sofm(SofmParams),
}

/// Runs a classical baseline once per seed and scores it. k-means takes the
/// best of its configured restarts by inertia within each seed.
pub fn run_baseline_experiment(
    ds: &Dataset,
    m: usize,
    algo: &BaselineAlgo,
    seeds: &[u64],
) -> Result<RunReport> {
    let truth = truth_labels(ds)?;
    let mut accuracies = Vec::with_capacity(seeds.len());
    let mut corrects = Vec::with_capacity(seeds.len());
    let mut clocks = Vec::with_capacity(seeds.len());
    let (name, config) = match algo {
        BaselineAlgo::KMeans(c) => ("k-means", serde_json::to_value(c)?),
        BaselineAlgo::Sofm(c) => ("SOFM", serde_json::to_value(c)?),
    };
    for &seed in seeds {
        let start = Instant::now();
        let labels = match algo {
            BaselineAlgo::KMeans(c) => {
                let mut best: Option<(Vec<usize>, f64)> = None;
                for restart in 0..c.restarts.max(1) as u64 {
                    let (labels, model) =
                        kmeans_cluster(ds, m, c.max_iter, derive_seed(seed, restart))?;
                    if best
                        .as_ref()
                        .is_none_or(|(_, inertia)| model.inertia < *inertia)
                    {
                        best = Some((labels, model.inertia));
                    }
                }
                best.expect("at least one restart").0
            }
            BaselineAlgo::Sofm(c) => sofm_cluster(ds, m, c, seed)?.0,
        };
        let score = permutation_accuracy(&labels, truth, m)?;
        clocks.push(start.elapsed().as_secs_f64());
        accuracies.push(score.accuracy);
        corrects.push(score.correct);
    }
    Ok(RunReport::from_runs(
        name,
        seeds,
        accuracies,
        corrects,
        ds.len(),
        config,
        clocks,
    ))
}

/// Comparison row carried from published results; nothing is executed.
pub fn published_report(algorithm: &str, accuracy: f64) -> RunReport {
    RunReport {
        algorithm: format!("{algorithm} (published, not reproduced)"),
        seeds: Vec::new(),
        accuracies: Vec::new(),
        correct_counts: Vec::new(),
        total_instances: 0,
        mean_accuracy: accuracy,
        config: serde_json::Value::Null,
        published_only: true,
        wall_clock_s: Vec::new(),
    }
}

fn fmt_pct(fraction: f64) -> String {
    let pct = fraction * 100.0;
    let s = format!("{pct:.2}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    s.to_string()
}

/// Aligned text table with one row per algorithm: the mean accuracy and the
/// per-run accuracies with correct counts in brackets.
pub fn format_comparison_table(reports: &[RunReport]) -> String {
    let mut rows: Vec<(String, String)> = Vec::new();
    for r in reports {
        let cell = if r.published_only {
            fmt_pct(r.mean_accuracy)
        } else {
            let individuals: Vec<String> = r
                .accuracies
                .iter()
                .zip(r.correct_counts.iter())
                .map(|(a, c)| format!("{} ({c})", fmt_pct(*a)))
                .collect();
            format!(
                "Avg.: {}  Ind.: ({})",
                fmt_pct(r.mean_accuracy),
                individuals.join(", ")
            )
        };
        rows.push((r.algorithm.clone(), cell));
    }
    let width = rows
        .iter()
        .map(|(name, _)| name.len())
        .chain(["Algorithm".len()])
        .max()
        .unwrap_or(9);
    let mut out = String::from("Algorithm comparison\n");
    out.push_str(&format!("{:width$}  Accuracy in %\n", "Algorithm"));
    for (name, cell) in rows {
        out.push_str(&format!("{name:width$}  {cell}\n"));
    }
    out
}

/// Per-instance probability lines in the style of the on-value-sum readout:
/// `instance N probabilities: p1, p2, p3` with percentages.
pub fn format_probability_lines(assignments: &[Assignment]) -> String {
    let mut out = String::new();
    for a in assignments {
        let probs: Vec<String> = a
            .prob2
            .iter()
            .map(|p| format!("{:.2}", p * 100.0))
            .collect();
        let marker = if a.prob2_valid {
            ""
        } else {
            " [mixed-sign sums]"
        };
        out.push_str(&format!(
            "instance {} probabilities: {}{}\n",
            a.instance_index,
            probs.join(", "),
            marker
        ));
    }
    out
}
