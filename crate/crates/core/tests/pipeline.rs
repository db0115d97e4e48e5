//! Integration checks of the full pipeline against the bundled Iris data.

use qaca_core::clusterform::{build_cluster_form, build_lookup_tables, IntraMode};
use qaca_core::dataset::Dataset;
use qaca_core::evaluation::{run_qaca_once, QacaConfig};
use qaca_core::geometry::{init_schedule, random_polygon_clusters};
use qaca_core::icm::{feed_instance, DistanceMode};

const IRIS_PATH: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/../../data/iris.csv");

fn iris() -> Dataset {
    Dataset::load_csv(IRIS_PATH, Some("species")).unwrap()
}

#[test]
fn iris_loads_with_expected_shape() {
    let ds = iris();
    assert_eq!(ds.len(), 150);
    assert_eq!(ds.dims(), 4);
    assert_eq!(ds.class_count(), Some(3));
}

#[test]
fn iris_global_range_matches_a_full_scan() {
    let ds = iris();
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for inst in ds.instances() {
        for &v in &inst.coords {
            lo = lo.min(v);
            hi = hi.max(v);
        }
    }
    let (min, max) = ds.global_min_max();
    assert_eq!((min, max), (lo, hi));
    assert!((min - 0.1).abs() < 1e-12);
    assert!((max - 7.9).abs() < 1e-12);
}

#[test]
fn iris_schedule_splits_the_range_in_three() {
    let ds = iris();
    let schedule = init_schedule(&ds, 3).unwrap();
    assert!((schedule.i_plus - 2.6).abs() < 1e-12);
    assert!((schedule.r_min - 0.1).abs() < 1e-12);
    assert!((schedule.r_max - 2.7).abs() < 1e-12);
}

#[test]
fn iris_instance_through_a_seeded_form_is_standardized() {
    let ds = iris();
    let schedule = init_schedule(&ds, 3).unwrap();
    let geom = random_polygon_clusters(&schedule, 3, 1, 4, 1.0, 7).unwrap();
    let tables = build_lookup_tables(&geom, false);
    let cf = build_cluster_form(&tables, IntraMode::SqrtCoupling);
    let icm = feed_instance(&cf, &ds.instances()[0], DistanceMode::SubtractSquare).unwrap();
    assert_eq!(icm.q.n(), 12);
    let values: Vec<f64> = icm.q.upper_entries().map(|(_, _, v)| v).collect();
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let std = (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n).sqrt();
    assert!(mean.abs() < 1e-9);
    assert!((std - 1.0).abs() < 1e-9);
}

#[cfg(feature = "parallel")]
#[test]
fn parallel_instance_map_matches_sequential_on_iris() {
    use qaca_core::evaluation::assignments_for_instances_seq;

    let ds = iris();
    let config = QacaConfig {
        m: 3,
        distance_mode: DistanceMode::SquaredEuclidean,
        epsilon: 0.65,
        ..QacaConfig::default()
    };
    let run = run_qaca_once(&ds, &config, 1).unwrap();
    let seq = assignments_for_instances_seq(&run.cluster_form, ds.instances(), &config, 1).unwrap();
    assert_eq!(run.assignments, seq);
}

#[test]
fn rerun_with_the_same_seed_is_identical() {
    let ds = iris();
    let config = QacaConfig {
        m: 3,
        epsilon: 0.65,
        distance_mode: DistanceMode::SquaredEuclidean,
        ..QacaConfig::default()
    };
    let a = run_qaca_once(&ds, &config, 5).unwrap();
    let b = run_qaca_once(&ds, &config, 5).unwrap();
    assert_eq!(a, b);
}
