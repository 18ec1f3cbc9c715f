//! File formats: CSV point clouds, JSON distance matrices, JSON relations.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::relation::Relation;
use crate::space::{FiniteMetricSpace, PointCloud};

/// JSON shape of a distance matrix file: `{"size": k, "dist": [[...], ...]}`.
#[derive(Debug, Serialize, Deserialize)]
pub struct MatrixFile {
    pub size: usize,
    pub dist: Vec<Vec<f64>>,
}

/// JSON shape of a relation file:
/// `{"left": m, "right": n, "pairs": [[i, j], ...]}`.
#[derive(Debug, Serialize, Deserialize)]
pub struct RelationFile {
    pub left: usize,
    pub right: usize,
    pub pairs: Vec<(usize, usize)>,
}

/// Reads a CSV point cloud: one point per line, comma-separated decimal
/// coordinates, no header. The dimension is inferred from the first line.
pub fn read_point_cloud_csv(path: impl AsRef<Path>) -> Result<PointCloud> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)?;
    parse_point_cloud_csv(&text, &path.display().to_string())
}

pub fn parse_point_cloud_csv(text: &str, source: &str) -> Result<PointCloud> {
    let mut points: Vec<Vec<f64>> = Vec::new();
    let mut dim: Option<usize> = None;
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let coords: Vec<f64> = line
            .split(',')
            .map(|field| {
                field.trim().parse::<f64>().map_err(|e| Error::Parse {
                    path: source.to_string(),
                    line: lineno + 1,
                    msg: format!("bad coordinate {field:?}: {e}"),
                })
            })
            .collect::<Result<_>>()?;
        match dim {
            None => dim = Some(coords.len()),
            Some(d) if d != coords.len() => {
                return Err(Error::Parse {
                    path: source.to_string(),
                    line: lineno + 1,
                    msg: format!("expected {d} fields, found {}", coords.len()),
                });
            }
            _ => {}
        }
        points.push(coords);
    }
    if points.is_empty() {
        return Err(Error::Parse {
            path: source.to_string(),
            line: 0,
            msg: "no points in file".into(),
        });
    }
    PointCloud::new(points)
}

/// Writes a cloud in the CSV format above. Coordinates use the shortest
/// round-trip decimal form.
pub fn write_point_cloud_csv(cloud: &PointCloud, path: impl AsRef<Path>) -> Result<()> {
    let mut body = String::new();
    for p in cloud.iter() {
        let line: Vec<String> = p.iter().map(|c| format!("{c}")).collect();
        body.push_str(&line.join(","));
        body.push('\n');
    }
    std::fs::write(path, body)?;
    Ok(())
}

/// Reads a distance matrix JSON file, validating the metric axioms.
pub fn read_metric_json(path: impl AsRef<Path>, tol_metric: f64) -> Result<FiniteMetricSpace> {
    let text = std::fs::read_to_string(path.as_ref())?;
    let file: MatrixFile = serde_json::from_str(&text)?;
    if file.dist.len() != file.size {
        return Err(Error::MalformedMatrix(format!(
            "declared size {} but found {} rows",
            file.size,
            file.dist.len()
        )));
    }
    FiniteMetricSpace::new(file.dist, tol_metric)
}

pub fn write_metric_json(space: &FiniteMetricSpace, path: impl AsRef<Path>) -> Result<()> {
    let file = MatrixFile { size: space.size(), dist: space.rows().to_vec() };
    std::fs::write(path, serde_json::to_string_pretty(&file)?)?;
    Ok(())
}

pub fn read_relation_json(path: impl AsRef<Path>) -> Result<Relation> {
    let text = std::fs::read_to_string(path.as_ref())?;
    let file: RelationFile = serde_json::from_str(&text)?;
    Relation::new(file.left, file.right, file.pairs)
}

pub fn write_relation_json(relation: &Relation, path: impl AsRef<Path>) -> Result<()> {
    let file = RelationFile {
        left: relation.left_size(),
        right: relation.right_size(),
        pairs: relation.pairs().to_vec(),
    };
    std::fs::write(path, serde_json::to_string_pretty(&file)?)?;
    Ok(())
}

/// Loads either input kind by extension: `.csv` clouds get their induced
/// metric, `.json` files are read as distance matrices.
pub fn load_space(path: impl AsRef<Path>, tol_metric: f64) -> Result<FiniteMetricSpace> {
    let path = path.as_ref();
    match path.extension().and_then(|e| e.to_str()) {
        Some("csv") => Ok(read_point_cloud_csv(path)?.induced_metric()),
        Some("json") => read_metric_json(path, tol_metric),
        other => Err(Error::InvalidArgument(format!(
            "cannot infer format of {:?} (extension {:?}); use .csv or .json",
            path, other
        ))),
    }
}
