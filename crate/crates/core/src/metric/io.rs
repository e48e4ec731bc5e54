use std::fs::File;
use std::path::Path;

use super::{MetricKind, MetricSpaceSample, PointId};
use crate::error::{Error, Result};

/// Reads a header-less CSV of real rows. Every row must have the same width.
pub fn read_points_csv(path: &Path) -> Result<Vec<Vec<f64>>> {
    let file = File::open(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(file);

    let parse_err = |row: usize, column: usize, message: String| Error::Parse {
        path: path.to_path_buf(),
        row,
        column,
        message,
    };

    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let record = record.map_err(|e| {
            let row = e.position().map_or(i + 1, |p| p.line() as usize);
            parse_err(row, 0, e.to_string())
        })?;
        let row = record.position().map_or(i + 1, |p| p.line() as usize);
        let values = record
            .iter()
            .enumerate()
            .map(|(col, field)| {
                field
                    .parse::<f64>()
                    .ok()
                    .filter(|v| v.is_finite())
                    .ok_or_else(|| {
                        parse_err(row, col + 1, format!("not a finite number: {field:?}"))
                    })
            })
            .collect::<Result<Vec<f64>>>()?;
        if let Some(first) = rows.first() {
            if first.len() != values.len() {
                return Err(parse_err(
                    row,
                    values.len().min(first.len()) + 1,
                    format!("expected {} columns, found {}", first.len(), values.len()),
                ));
            }
        }
        rows.push(values);
    }
    Ok(rows)
}

/// Reads a square distance matrix in the point CSV format.
pub fn read_matrix_csv(path: &Path) -> Result<Vec<Vec<f64>>> {
    let rows = read_points_csv(path)?;
    if let Some(first) = rows.first() {
        if first.len() != rows.len() {
            return Err(Error::Parse {
                path: path.to_path_buf(),
                row: rows.len(),
                column: first.len(),
                message: format!("matrix is {}x{}, not square", rows.len(), first.len()),
            });
        }
    }
    Ok(rows)
}

/// Loads a user point cloud. With [`MetricKind::ExplicitMatrix`] the distances
/// come from `matrix_path`, which must be a square matrix with one row per point.
pub fn load_points(
    path: &Path,
    metric: MetricKind,
    basepoint: PointId,
    window_radius: f64,
    resolution: f64,
    matrix_path: Option<&Path>,
) -> Result<MetricSpaceSample> {
    let coords = read_points_csv(path)?;
    match (metric, matrix_path) {
        (MetricKind::ExplicitMatrix, Some(m)) => {
            let matrix = read_matrix_csv(m)?;
            MetricSpaceSample::from_matrix(coords, matrix, basepoint, window_radius, resolution)
        }
        (MetricKind::ExplicitMatrix, None) => Err(Error::InvalidSpec(
            "explicit-matrix metric needs a companion matrix file".into(),
        )),
        (_, Some(_)) => Err(Error::InvalidSpec(
            "a matrix file only applies to the explicit-matrix metric".into(),
        )),
        (kind, None) => {
            MetricSpaceSample::from_coords(coords, kind, basepoint, window_radius, resolution)
        }
    }
}
