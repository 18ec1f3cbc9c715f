//! Input loading: CSV point clouds and JSON distance matrices, validated on
//! the way in.

use std::path::Path;

use ghkit::space::DEFAULT_TOL_METRIC;
use ghkit::{FiniteMetricSpace, PointCloud};

use crate::CliError;

#[derive(Debug)]
pub enum Ingested {
    Cloud(PointCloud),
    Space(FiniteMetricSpace),
}

/// Loads a file by extension: `.csv` point clouds, `.json` distance
/// matrices. Matrices are validated against the metric axioms and rejected
/// with the offending indices.
pub fn ingest(path: &Path) -> Result<Ingested, CliError> {
    match path.extension().and_then(|e| e.to_str()) {
        Some("csv") => Ok(Ingested::Cloud(
            ghkit::io::read_point_cloud_csv(path).map_err(CliError::from_display)?,
        )),
        Some("json") => Ok(Ingested::Space(
            ghkit::io::read_metric_json(path, DEFAULT_TOL_METRIC).map_err(CliError::from_display)?,
        )),
        other => Err(CliError::input(format!(
            "cannot infer the format of {} (extension {:?}); use .csv or .json",
            path.display(),
            other
        ))),
    }
}

/// Loads either kind and lowers it to a metric space (clouds via their
/// induced metric).
pub fn ingest_space(path: &Path) -> Result<FiniteMetricSpace, CliError> {
    Ok(match ingest(path)? {
        Ingested::Cloud(c) => c.induced_metric(),
        Ingested::Space(m) => m,
    })
}

/// Loads a file that must be a point cloud.
pub fn ingest_cloud(path: &Path) -> Result<PointCloud, CliError> {
    match ingest(path)? {
        Ingested::Cloud(c) => Ok(c),
        Ingested::Space(_) => Err(CliError::input(format!(
            "{} is a distance matrix; this command needs point-cloud coordinates",
            path.display()
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    #[test]
    fn csv_cloud_roundtrip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("points.csv");
        std::fs::write(&path, "0,0\n1,0\n0,1\n").unwrap();
        match ingest(&path).unwrap() {
            Ingested::Cloud(c) => {
                assert_eq!(c.dim(), 2);
                assert_eq!(c.len(), 3);
            }
            _ => panic!("expected a cloud"),
        }
    }

    #[test]
    fn asymmetric_matrix_rejected_with_indices() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("m.json");
        std::fs::write(&path, r#"{"size": 2, "dist": [[0, 1], [2, 0]]}"#).unwrap();
        let err = ingest(&path).unwrap_err();
        assert!(err.to_string().contains("(0,1)"), "{err}");
    }

    #[test]
    fn empty_file_is_a_parse_error() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("empty.csv");
        std::fs::File::create(&path).unwrap().flush().unwrap();
        assert!(ingest(&path).is_err());
    }

    #[test]
    fn unknown_extension_is_refused() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("points.txt");
        std::fs::write(&path, "0,0\n").unwrap();
        assert!(ingest(&path).is_err());
    }
}
