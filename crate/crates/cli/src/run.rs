//! The `run` subcommand: dataset in, experiment reports and artifacts out.
//!
//! All output content is assembled in memory, written to a staging directory
//! and moved into place at the end, so a failed run leaves no partial output
//! directory behind.

use std::fmt::Write as _;
use std::path::PathBuf;

use serde::Serialize;

use qaca_core::dataset::Dataset;
use qaca_core::evaluation::{
    format_comparison_table, format_probability_lines, published_report, run_baseline_experiment,
    run_qaca_experiment, BaselineAlgo, QacaRun, RunReport,
};
use qaca_core::icm::feed_instance;

use crate::config::{resolve, Algo, RunArgs, RunConfig, SCHEMA_VERSION};
use crate::CliError;

/// Published comparison value for the expectation-maximization baseline; the
/// source gives the number without an algorithm specification, so it is
/// carried, not reproduced.
const EM_PUBLISHED_ACCURACY: f64 = 0.86;

#[derive(Serialize)]
struct Envelope<T: Serialize> {
    schema_version: u32,
    kind: &'static str,
    payload: T,
}

fn envelope_json<T: Serialize>(kind: &'static str, payload: &T) -> Result<Vec<u8>, CliError> {
    let envelope = Envelope {
        schema_version: SCHEMA_VERSION,
        kind,
        payload,
    };
    let mut bytes = serde_json::to_vec_pretty(&envelope)
        .map_err(|e| CliError::Runtime(format!("serialize {kind}: {e}")))?;
    bytes.push(b'\n');
    Ok(bytes)
}

pub fn cmd_run(args: &RunArgs) -> Result<(), CliError> {
    // validation phase: config and dataset problems exit 1, before any output
    let config = resolve(args)?;
    let dataset = Dataset::load_csv(&config.data, config.labels.as_deref())
        .map_err(|e| CliError::Validation(format!("data: {e}")))?;

    // runtime phase
    let outputs = execute(&config, &dataset)?;
    write_outputs(&config.out, outputs)?;
    println!("wrote {}", config.out.display());
    Ok(())
}

fn runtime(e: impl std::fmt::Display) -> CliError {
    CliError::Runtime(e.to_string())
}

type Outputs = Vec<(PathBuf, Vec<u8>)>;

fn execute(config: &RunConfig, dataset: &Dataset) -> Result<Outputs, CliError> {
    let mut outputs: Outputs = Vec::new();
    let mut reports: Vec<RunReport> = Vec::new();
    let mut qaca_runs: Vec<QacaRun> = Vec::new();

    let run_qaca = matches!(config.algo, Algo::Qaca | Algo::All);
    let run_kmeans = matches!(config.algo, Algo::Kmeans | Algo::All);
    let run_sofm = matches!(config.algo, Algo::Sofm | Algo::All);

    if matches!(config.algo, Algo::All) {
        reports.push(published_report("EM", EM_PUBLISHED_ACCURACY));
    }
    if run_kmeans {
        reports.push(
            run_baseline_experiment(
                dataset,
                config.m,
                &BaselineAlgo::KMeans(config.kmeans_config()),
                &config.seeds,
            )
            .map_err(runtime)?,
        );
    }
    if run_sofm {
        reports.push(
            run_baseline_experiment(
                dataset,
                config.m,
                &BaselineAlgo::Sofm(config.sofm_params()),
                &config.seeds,
            )
            .map_err(runtime)?,
        );
    }
    if run_qaca {
        let (report, runs) =
            run_qaca_experiment(dataset, &config.qaca_config(), &config.seeds).map_err(runtime)?;
        reports.push(report);
        qaca_runs = runs;
    }

    // resolved config echo: enough to reproduce the run bit for bit
    outputs.push((
        PathBuf::from("config.json"),
        envelope_json("run_config", config)?,
    ));
    outputs.push((
        PathBuf::from("report.json"),
        envelope_json("report", &reports)?,
    ));

    let mut table = format_comparison_table(&reports);
    table.push('\n');
    for r in &reports {
        if r.published_only {
            continue;
        }
        let _ = writeln!(
            table,
            "{}: seeds {:?}, per-run wall clock {:?} s",
            r.algorithm,
            r.seeds,
            r.wall_clock_s
                .iter()
                .map(|s| (s * 1000.0).round() / 1000.0)
                .collect::<Vec<_>>()
        );
    }
    outputs.push((PathBuf::from("report.txt"), table.into_bytes()));

    for run in &qaca_runs {
        outputs.push((
            PathBuf::from(format!("assignments_seed{}.csv", run.seed)),
            assignments_csv(run),
        ));
        if config.dump_assignments {
            outputs.push((
                PathBuf::from(format!("probabilities_seed{}.txt", run.seed)),
                format_probability_lines(&run.assignments).into_bytes(),
            ));
            let mut jsonl = Vec::new();
            for a in &run.assignments {
                serde_json::to_writer(&mut jsonl, a).map_err(runtime)?;
                jsonl.push(b'\n');
            }
            outputs.push((
                PathBuf::from(format!("assignments_seed{}.jsonl", run.seed)),
                jsonl,
            ));
        }
        if config.dump_artifacts {
            outputs.push((
                PathBuf::from(format!("geometry_seed{}.json", run.seed)),
                envelope_json("geometry", &run.geometry)?,
            ));
            outputs.push((
                PathBuf::from(format!("cluster_form_seed{}.json", run.seed)),
                envelope_json("cluster_form", &run.cluster_form)?,
            ));
        }
        if config.dump_icm {
            let qaca_config = config.qaca_config();
            let standardized;
            let data = if qaca_config.standardize_features {
                standardized = dataset.standardize_features();
                &standardized
            } else {
                dataset
            };
            for instance in data.instances() {
                let icm = feed_instance(&run.cluster_form, instance, qaca_config.distance_mode)
                    .map_err(runtime)?;
                outputs.push((
                    PathBuf::from(format!(
                        "icm_seed{}_instance{}.json",
                        run.seed, instance.index
                    )),
                    envelope_json("icm", &icm)?,
                ));
            }
        }
    }

    Ok(outputs)
}

fn assignments_csv(run: &QacaRun) -> Vec<u8> {
    let m = run
        .assignments
        .first()
        .map(|a| a.prob2.len())
        .unwrap_or_default();
    let mut out = String::from("instance_index,definite");
    for k in 1..=m {
        let _ = write!(out, ",p_{k}");
    }
    out.push_str(",prob2_valid,all_off\n");
    for a in &run.assignments {
        let _ = write!(out, "{},{}", a.instance_index, a.definite_cluster);
        for p in &a.prob2 {
            let _ = write!(out, ",{:.6}", p * 100.0);
        }
        let _ = writeln!(out, ",{},{}", a.prob2_valid, a.all_off);
    }
    out.into_bytes()
}

/// Stage, then swap into place; nothing lands in `out` unless every write
/// succeeded.
fn write_outputs(out: &PathBuf, outputs: Outputs) -> Result<(), CliError> {
    let parent = out.parent().filter(|p| !p.as_os_str().is_empty());
    if let Some(parent) = parent {
        std::fs::create_dir_all(parent)
            .map_err(|e| CliError::Runtime(format!("create {}: {e}", parent.display())))?;
    }
    let stage = out.with_file_name(format!(
        "{}.partial-{}",
        out.file_name()
            .map(|n| n.to_string_lossy().into_owned())
            .unwrap_or_else(|| "out".to_string()),
        std::process::id()
    ));
    let result = (|| -> Result<(), CliError> {
        std::fs::create_dir_all(&stage)
            .map_err(|e| CliError::Runtime(format!("create {}: {e}", stage.display())))?;
        for (name, bytes) in &outputs {
            std::fs::write(stage.join(name), bytes)
                .map_err(|e| CliError::Runtime(format!("write {}: {e}", name.display())))?;
        }
        if out.exists() {
            std::fs::remove_dir_all(out)
                .map_err(|e| CliError::Runtime(format!("replace {}: {e}", out.display())))?;
        }
        std::fs::rename(&stage, out)
            .map_err(|e| CliError::Runtime(format!("finalize {}: {e}", out.display())))
    })();
    if result.is_err() {
        let _ = std::fs::remove_dir_all(&stage);
    }
    result
}
