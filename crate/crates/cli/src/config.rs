//! Run configuration: defaults, config-file values, then command-line flags,
//! later layers winning. The fully resolved config is echoed into the output
//! directory so a run can be reproduced from its artifacts alone.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use qaca_core::baselines::{KMeansConfig, SofmParams};
use qaca_core::clusterform::IntraMode;
use qaca_core::evaluation::QacaConfig;
use qaca_core::icm::DistanceMode;
use qaca_core::solver::{SaParams, SolverStrategy, DEFAULT_EXHAUSTIVE_CAP};

use crate::CliError;

pub const SCHEMA_VERSION: u32 = 1;

/// Output-directory override honored ahead of the default but below `--out`.
pub const OUT_DIR_ENV: &str = "QACA_OUT_DIR";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Algo {
    Qaca,
    Kmeans,
    Sofm,
    All,
}

/// Fully resolved run configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub data: PathBuf,
    pub labels: Option<String>,
    pub algo: Algo,
    pub m: usize,
    pub n_v: usize,
    pub epsilon: f64,
    pub intra_mode: IntraMode,
    pub distance_mode: DistanceMode,
    pub scale_values: bool,
    pub standardize_features: bool,
    pub solver: SolverStrategy,
    pub sa_restarts: usize,
    pub sa_sweeps: usize,
    pub exhaustive_cap: usize,
    pub kmeans_restarts: usize,
    pub kmeans_max_iter: usize,
    pub sofm_epochs: usize,
    pub seeds: Vec<u64>,
    pub out: PathBuf,
    pub dump_assignments: bool,
    pub dump_artifacts: bool,
    pub dump_icm: bool,
}

impl RunConfig {
    pub fn qaca_config(&self) -> QacaConfig {
        QacaConfig {
            m: self.m,
            n_v: self.n_v,
            epsilon: self.epsilon,
            intra_mode: self.intra_mode,
            distance_mode: self.distance_mode,
            scale_values: self.scale_values,
            standardize_features: self.standardize_features,
            strategy: self.solver,
            sa: SaParams {
                restarts: self.sa_restarts,
                sweeps: self.sa_sweeps,
                ..SaParams::default()
            },
            exhaustive_cap: self.exhaustive_cap,
        }
    }

    pub fn kmeans_config(&self) -> KMeansConfig {
        KMeansConfig {
            restarts: self.kmeans_restarts,
            max_iter: self.kmeans_max_iter,
        }
    }

    pub fn sofm_params(&self) -> SofmParams {
        SofmParams {
            epochs: self.sofm_epochs,
            ..SofmParams::default()
        }
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let fail = |msg: String| Err(CliError::Validation(msg));
        if !self.data.exists() {
            return fail(format!("data: file {} does not exist", self.data.display()));
        }
        if self.m < 2 {
            return fail(format!("m: must be >= 2, got {}", self.m));
        }
        if self.n_v == 0 {
            return fail(format!("n_v: must be >= 1, got {}", self.n_v));
        }
        if !self.epsilon.is_finite() || self.epsilon < 0.0 {
            return fail(format!(
                "epsilon: must be finite and >= 0, got {}",
                self.epsilon
            ));
        }
        if self.sa_restarts == 0 {
            return fail(format!(
                "sa_restarts: must be >= 1, got {}",
                self.sa_restarts
            ));
        }
        if self.sa_sweeps == 0 {
            return fail(format!("sa_sweeps: must be >= 1, got {}", self.sa_sweeps));
        }
        if self.exhaustive_cap == 0 || self.exhaustive_cap > 30 {
            return fail(format!(
                "exhaustive_cap: must be in 1..=30, got {}",
                self.exhaustive_cap
            ));
        }
        if self.kmeans_restarts == 0 {
            return fail(format!(
                "kmeans_restarts: must be >= 1, got {}",
                self.kmeans_restarts
            ));
        }
        if self.kmeans_max_iter == 0 {
            return fail(format!(
                "kmeans_max_iter: must be >= 1, got {}",
                self.kmeans_max_iter
            ));
        }
        if self.sofm_epochs == 0 {
            return fail(format!(
                "sofm_epochs: must be >= 1, got {}",
                self.sofm_epochs
            ));
        }
        if self.seeds.is_empty() {
            return fail("seeds: at least one seed is required".to_string());
        }
        Ok(())
    }
}

/// Config-file shape: every field optional, unknown keys rejected.
#[derive(Debug, Default, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub data: Option<PathBuf>,
    pub labels: Option<String>,
    pub algo: Option<Algo>,
    pub m: Option<usize>,
    pub n_v: Option<usize>,
    pub epsilon: Option<f64>,
    pub intra_mode: Option<IntraMode>,
    pub distance_mode: Option<DistanceMode>,
    pub scale_values: Option<bool>,
    pub standardize_features: Option<bool>,
    pub solver: Option<SolverStrategy>,
    pub sa_restarts: Option<usize>,
    pub sa_sweeps: Option<usize>,
    pub exhaustive_cap: Option<usize>,
    pub kmeans_restarts: Option<usize>,
    pub kmeans_max_iter: Option<usize>,
    pub sofm_epochs: Option<usize>,
    pub seeds: Option<Vec<u64>>,
    pub out: Option<PathBuf>,
    pub dump_assignments: Option<bool>,
    pub dump_artifacts: Option<bool>,
    pub dump_icm: Option<bool>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<FileConfig, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| {
            CliError::Validation(format!("config: cannot read {}: {e}", path.display()))
        })?;
        serde_json::from_str(&text)
            .map_err(|e| CliError::Validation(format!("config: invalid {}: {e}", path.display())))
    }
}

/// Command-line values for `run`; `None` means "not given".
#[derive(Debug, Clone, clap::Args)]
pub struct RunArgs {
    /// Dataset CSV (header row, comma separator)
    #[arg(long)]
    pub data: Option<PathBuf>,
    /// Header name of the label column, used for accuracy scoring only
    #[arg(long)]
    pub labels: Option<String>,
    /// Algorithm(s) to run
    #[arg(long, value_enum)]
    pub algo: Option<Algo>,
    /// Cluster count
    #[arg(long)]
    pub m: Option<usize>,
    /// Vertices per cluster
    #[arg(long = "n-v")]
    pub n_v: Option<usize>,
    /// Sliding factor between consecutive cluster ranges
    #[arg(long)]
    pub epsilon: Option<f64>,
    /// Same-cluster coupling treatment in the base matrix
    #[arg(long, value_parser = parse_intra_mode)]
    pub intra_mode: Option<IntraMode>,
    /// Per-coordinate instance update rule
    #[arg(long, value_parser = parse_distance_mode)]
    pub distance_mode: Option<DistanceMode>,
    /// Standardize the coordinate-value table
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    pub scale_values: Option<bool>,
    /// Standardize dataset columns before clustering
    #[arg(long = "standardize", num_args = 0..=1, default_missing_value = "true")]
    pub standardize_features: Option<bool>,
    /// QUBO solver
    #[arg(long, value_parser = parse_strategy)]
    pub solver: Option<SolverStrategy>,
    #[arg(long)]
    pub sa_restarts: Option<usize>,
    #[arg(long)]
    pub sa_sweeps: Option<usize>,
    /// Largest problem size solved exactly
    #[arg(long)]
    pub exhaustive_cap: Option<usize>,
    #[arg(long)]
    pub kmeans_restarts: Option<usize>,
    #[arg(long)]
    pub kmeans_max_iter: Option<usize>,
    #[arg(long)]
    pub sofm_epochs: Option<usize>,
    /// Comma-separated run seeds
    #[arg(long, value_delimiter = ',')]
    pub seeds: Option<Vec<u64>>,
    /// Output directory (also via QACA_OUT_DIR)
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Write per-instance probability lines and assignment JSON
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    pub dump_assignments: Option<bool>,
    /// Write geometry and cluster-form JSON per seed
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    pub dump_artifacts: Option<bool>,
    /// Write every instance-cluster matrix as JSON (large)
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    pub dump_icm: Option<bool>,
    /// JSON config file; flags override its values
    #[arg(long)]
    pub config: Option<PathBuf>,
}

fn parse_intra_mode(s: &str) -> Result<IntraMode, String> {
    match s {
        "sqrt_coupling" => Ok(IntraMode::SqrtCoupling),
        "zero" => Ok(IntraMode::Zero),
        other => Err(format!(
            "intra_mode: expected sqrt_coupling or zero, got {other:?}"
        )),
    }
}

fn parse_distance_mode(s: &str) -> Result<DistanceMode, String> {
    match s {
        "subtract_square" => Ok(DistanceMode::SubtractSquare),
        "squared_euclidean" => Ok(DistanceMode::SquaredEuclidean),
        other => Err(format!(
            "distance_mode: expected subtract_square or squared_euclidean, got {other:?}"
        )),
    }
}

fn parse_strategy(s: &str) -> Result<SolverStrategy, String> {
    match s {
        "auto" => Ok(SolverStrategy::Auto),
        "exhaustive" => Ok(SolverStrategy::Exhaustive),
        "sa" => Ok(SolverStrategy::Sa),
        other => Err(format!(
            "solver: expected auto, exhaustive or sa, got {other:?}"
        )),
    }
}

/// defaults <- config file <- flags, validated at the end.
pub fn resolve(args: &RunArgs) -> Result<RunConfig, CliError> {
    let file = match &args.config {
        Some(path) => FileConfig::load(path)?,
        None => FileConfig::default(),
    };

    let data = args
        .data
        .clone()
        .or(file.data)
        .ok_or_else(|| CliError::Validation("data: --data is required".to_string()))?;
    let out = args
        .out
        .clone()
        .or_else(|| std::env::var_os(OUT_DIR_ENV).map(PathBuf::from))
        .or(file.out)
        .unwrap_or_else(|| PathBuf::from("qaca-out"));

    let config = RunConfig {
        data,
        labels: args.labels.clone().or(file.labels),
        algo: args.algo.or(file.algo).unwrap_or(Algo::All),
        m: args.m.or(file.m).unwrap_or(3),
        n_v: args.n_v.or(file.n_v).unwrap_or(1),
        epsilon: args.epsilon.or(file.epsilon).unwrap_or(1.0),
        intra_mode: args.intra_mode.or(file.intra_mode).unwrap_or_default(),
        distance_mode: args
            .distance_mode
            .or(file.distance_mode)
            .unwrap_or_default(),
        scale_values: args.scale_values.or(file.scale_values).unwrap_or(false),
        standardize_features: args
            .standardize_features
            .or(file.standardize_features)
            .unwrap_or(false),
        solver: args.solver.or(file.solver).unwrap_or_default(),
        sa_restarts: args.sa_restarts.or(file.sa_restarts).unwrap_or(100),
        sa_sweeps: args.sa_sweeps.or(file.sa_sweeps).unwrap_or(1000),
        exhaustive_cap: args
            .exhaustive_cap
            .or(file.exhaustive_cap)
            .unwrap_or(DEFAULT_EXHAUSTIVE_CAP),
        kmeans_restarts: args.kmeans_restarts.or(file.kmeans_restarts).unwrap_or(10),
        kmeans_max_iter: args.kmeans_max_iter.or(file.kmeans_max_iter).unwrap_or(300),
        sofm_epochs: args.sofm_epochs.or(file.sofm_epochs).unwrap_or(100),
        seeds: args
            .seeds
            .clone()
            .or(file.seeds)
            .unwrap_or_else(|| vec![1, 2, 3, 4, 5]),
        out,
        dump_assignments: args
            .dump_assignments
            .or(file.dump_assignments)
            .unwrap_or(false),
        dump_artifacts: args.dump_artifacts.or(file.dump_artifacts).unwrap_or(false),
        dump_icm: args.dump_icm.or(file.dump_icm).unwrap_or(false),
    };
    config.validate()?;
    Ok(config)
}
