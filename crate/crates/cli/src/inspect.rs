//! The `inspect` subcommand: human-readable summaries of serialized
//! artifacts (geometry, cluster-form, instance matrices, reports).

use std::path::Path;

use qaca_core::clusterform::ClusterForm;
use qaca_core::evaluation::RunReport;
use qaca_core::geometry::ClusterGeometry;
use qaca_core::icm::InstanceClusterMatrix;

use crate::config::SCHEMA_VERSION;
use crate::CliError;

pub fn cmd_inspect(path: &Path) -> Result<(), CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Validation(format!("cannot read {}: {e}", path.display())))?;
    let value: serde_json::Value = serde_json::from_str(&text)
        .map_err(|e| CliError::Validation(format!("{}: not valid JSON: {e}", path.display())))?;

    let schema = value
        .get("schema_version")
        .and_then(|v| v.as_u64())
        .ok_or_else(|| schema_error(path, "missing schema_version"))?;
    if schema != SCHEMA_VERSION as u64 {
        return Err(schema_error(
            path,
            &format!("schema_version {schema} unsupported (expected {SCHEMA_VERSION})"),
        ));
    }
    let kind = value
        .get("kind")
        .and_then(|v| v.as_str())
        .ok_or_else(|| schema_error(path, "missing kind"))?
        .to_string();
    let payload = value
        .get("payload")
        .cloned()
        .ok_or_else(|| schema_error(path, "missing payload"))?;

    match kind.as_str() {
        "geometry" => {
            let geom: ClusterGeometry =
                serde_json::from_value(payload).map_err(|e| payload_error(path, &kind, e))?;
            print_geometry(&geom);
        }
        "cluster_form" => {
            let cf: ClusterForm =
                serde_json::from_value(payload).map_err(|e| payload_error(path, &kind, e))?;
            print_cluster_form(&cf);
        }
        "icm" => {
            let icm: InstanceClusterMatrix =
                serde_json::from_value(payload).map_err(|e| payload_error(path, &kind, e))?;
            print_icm(&icm);
        }
        "report" => {
            let reports: Vec<RunReport> =
                serde_json::from_value(payload).map_err(|e| payload_error(path, &kind, e))?;
            print_reports(&reports);
        }
        "run_config" => {
            println!("run configuration:");
            println!(
                "{}",
                serde_json::to_string_pretty(&payload).unwrap_or_default()
            );
        }
        other => return Err(schema_error(path, &format!("unknown kind {other:?}"))),
    }
    Ok(())
}

fn schema_error(path: &Path, msg: &str) -> CliError {
    CliError::Validation(format!("{}: {msg}", path.display()))
}

fn payload_error(path: &Path, kind: &str, e: serde_json::Error) -> CliError {
    CliError::Validation(format!("{}: malformed {kind} payload: {e}", path.display()))
}

fn print_geometry(geom: &ClusterGeometry) {
    println!("geometry: m={} n_v={} d={}", geom.m, geom.n_v, geom.d);
    println!("  epsilon={} seed={}", geom.epsilon, geom.seed);
    println!("  qubits={}", geom.qubit_count());
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for cluster in &geom.vertices {
        for vertex in cluster {
            for &c in vertex {
                lo = lo.min(c);
                hi = hi.max(c);
            }
        }
    }
    println!("  coordinate range [{lo:.6}, {hi:.6}]");
}

fn print_cluster_form(cf: &ClusterForm) {
    let n = cf.base.n();
    let mut intra_nonpos = 0usize;
    let mut intra_pos = 0usize;
    let mut inter_nonneg = 0usize;
    let mut inter_neg = 0usize;
    for (i, j, v) in cf.base.upper_entries() {
        if cf.tables.same_cluster(i, j) {
            if v <= 0.0 {
                intra_nonpos += 1;
            } else {
                intra_pos += 1;
            }
        } else if v >= 0.0 {
            inter_nonneg += 1;
        } else {
            inter_neg += 1;
        }
    }
    println!(
        "cluster form: n={n} clusters={} intra_mode={}",
        cf.tables.cluster_count(),
        cf.intra_mode
    );
    println!("  intra entries: {intra_nonpos} <= 0, {intra_pos} > 0");
    println!("  inter entries: {inter_nonneg} >= 0, {inter_neg} < 0");
}

fn print_icm(icm: &InstanceClusterMatrix) {
    let values: Vec<f64> = icm.q.upper_entries().map(|(_, _, v)| v).collect();
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let std = (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n).sqrt();
    println!(
        "instance matrix: n={} instance_index={}",
        icm.q.n(),
        icm.instance_index
    );
    println!("  upper triangle: mean={mean:.3e} std={std:.6}");
}

fn print_reports(reports: &[RunReport]) {
    println!("report with {} row(s):", reports.len());
    for r in reports {
        if r.published_only {
            println!("  {}: {:.2}%", r.algorithm, r.mean_accuracy * 100.0);
        } else {
            println!(
                "  {}: mean {:.2}% over seeds {:?}",
                r.algorithm,
                r.mean_accuracy * 100.0,
                r.seeds
            );
        }
    }
}
