//! Numeric dataset ingestion and per-column statistics.
//!
//! Datasets are immutable after construction. Labels, when present, are only
//! ever consumed by the evaluation layer; the clustering path never sees them.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One row of the dataset.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Instance {
    pub coords: Vec<f64>,
    /// Ordinal position in the dataset.
    pub index: usize,
}

/// Min, max, mean and population standard deviation of one attribute column.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AttributeStats {
    pub min: f64,
    pub max: f64,
    pub mean: f64,
    pub std: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Dataset {
    instances: Vec<Instance>,
    d: usize,
    labels: Option<Vec<usize>>,
    attribute_stats: Vec<AttributeStats>,
}

impl Dataset {
    /// Builds a dataset from raw rows, computing per-column stats.
    pub fn new(rows: Vec<Vec<f64>>, labels: Option<Vec<usize>>) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::EmptyDataset);
        }
        let d = rows[0].len();
        if d == 0 {
            return Err(Error::EmptyDataset);
        }
        for (i, row) in rows.iter().enumerate() {
            if row.len() != d {
                return Err(Error::RaggedRow {
                    row: i + 1,
                    found: row.len(),
                    expected: d,
                });
            }
            for &v in row {
                if !v.is_finite() {
                    return Err(Error::invalid("coordinate", "finite", v));
                }
            }
        }
        if let Some(ref l) = labels {
            if l.len() != rows.len() {
                return Err(Error::LabelLengthMismatch {
                    left: l.len(),
                    right: rows.len(),
                });
            }
        }
        let attribute_stats = column_stats(&rows, d);
        let instances = rows
            .into_iter()
            .enumerate()
            .map(|(index, coords)| Instance { coords, index })
            .collect();
        Ok(Dataset {
            instances,
            d,
            labels,
            attribute_stats,
        })
    }

    /// Reads a CSV file with a header row, comma separator and `.` decimals.
    ///
    /// When `label_column` names a header field, that column is stripped from
    /// the features and its values are mapped to contiguous class IDs in order
    /// of first appearance.
    pub fn load_csv(path: impl AsRef<Path>, label_column: Option<&str>) -> Result<Self> {
        let path = path.as_ref();
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(true)
            .flexible(true)
            .from_path(path)
            .map_err(|e| match e.kind() {
                csv::ErrorKind::Io(_) => Error::Io {
                    path: path.to_path_buf(),
                    source: std::io::Error::other(e.to_string()),
                },
                _ => Error::Csv(e),
            })?;

        let headers: Vec<String> = reader
            .headers()?
            .iter()
            .map(|h| h.trim().to_string())
            .collect();
        let label_idx = match label_column {
            Some(name) => Some(
                headers
                    .iter()
                    .position(|h| h == name)
                    .ok_or_else(|| Error::MissingLabelColumn(name.to_string()))?,
            ),
            None => None,
        };

        let mut rows = Vec::new();
        let mut raw_labels: Vec<String> = Vec::new();
        for (i, record) in reader.records().enumerate() {
            let record = record?;
            let row_number = i + 1; // 1-based, excluding the header
            if record.len() != headers.len() {
                return Err(Error::RaggedRow {
                    row: row_number,
                    found: record.len(),
                    expected: headers.len(),
                });
            }
            let mut coords = Vec::with_capacity(headers.len() - label_idx.map_or(0, |_| 1));
            for (col, field) in record.iter().enumerate() {
                if Some(col) == label_idx {
                    raw_labels.push(field.trim().to_string());
                    continue;
                }
                let value: f64 = field.trim().parse().map_err(|_| Error::NonNumericCell {
                    row: row_number,
                    column: headers[col].clone(),
                    value: field.to_string(),
                })?;
                if !value.is_finite() {
                    return Err(Error::NonNumericCell {
                        row: row_number,
                        column: headers[col].clone(),
                        value: field.to_string(),
                    });
                }
                coords.push(value);
            }
            rows.push(coords);
        }

        let labels = label_idx.map(|_| {
            let mut seen: Vec<String> = Vec::new();
            raw_labels
                .iter()
                .map(|raw| {
                    if let Some(pos) = seen.iter().position(|s| s == raw) {
                        pos
                    } else {
                        seen.push(raw.clone());
                        seen.len() - 1
                    }
                })
                .collect()
        });

        Dataset::new(rows, labels)
    }

    pub fn instances(&self) -> &[Instance] {
        &self.instances
    }

    pub fn len(&self) -> usize {
        self.instances.len()
    }

    pub fn is_empty(&self) -> bool {
        self.instances.is_empty()
    }

    /// Attribute count per instance.
    pub fn dims(&self) -> usize {
        self.d
    }

    pub fn labels(&self) -> Option<&[usize]> {
        self.labels.as_deref()
    }

    /// Number of distinct label classes, when labels are present.
    pub fn class_count(&self) -> Option<usize> {
        self.labels
            .as_ref()
            .map(|l| l.iter().copied().max().map_or(0, |m| m + 1))
    }

    pub fn attribute_stats(&self) -> &[AttributeStats] {
        &self.attribute_stats
    }

    /// Minimum and maximum over every attribute value of every instance.
    ///
    /// A single scalar pair: the geometry range schedule divides one global
    /// range by the cluster count.
    pub fn global_min_max(&self) -> (f64, f64) {
        let mut min = f64::INFINITY;
        let mut max = f64::NEG_INFINITY;
        for stats in &self.attribute_stats {
            min = min.min(stats.min);
            max = max.max(stats.max);
        }
        (min, max)
    }

    /// Centers every column to mean zero and scales non-degenerate columns to
    /// unit population variance. Zero-variance columns are centered only.
    pub fn standardize_features(&self) -> Dataset {
        let mut rows: Vec<Vec<f64>> = self.instances.iter().map(|i| i.coords.clone()).collect();
        for (col, stats) in self.attribute_stats.iter().enumerate() {
            let scale = if stats.std > 0.0 { stats.std } else { 1.0 };
            for row in &mut rows {
                row[col] = (row[col] - stats.mean) / scale;
            }
        }
        Dataset::new(rows, self.labels.clone()).expect("standardizing a valid dataset cannot fail")
    }
}

fn column_stats(rows: &[Vec<f64>], d: usize) -> Vec<AttributeStats> {
    let n = rows.len() as f64;
    (0..d)
        .map(|col| {
            let mut min = f64::INFINITY;
            let mut max = f64::NEG_INFINITY;
            let mut sum = 0.0;
            for row in rows {
                let v = row[col];
                min = min.min(v);
                max = max.max(v);
                sum += v;
            }
            let mean = sum / n;
            let var = rows.iter().map(|r| (r[col] - mean).powi(2)).sum::<f64>() / n;
            AttributeStats {
                min,
                max,
                mean,
                std: var.sqrt(),
            }
        })
        .collect()
}
