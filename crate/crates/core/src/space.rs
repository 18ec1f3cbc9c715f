//! Finite metric spaces and Euclidean point clouds.
//!
//! A [`FiniteMetricSpace`] is a dense square distance matrix validated
//! against the metric axioms; a [`PointCloud`] is an ordered list of points
//! in `R^n` whose induced metric is the pairwise Euclidean distance. Point
//! identity is positional: duplicate coordinates are allowed.

use crate::error::{Error, Result};

/// Default absolute tolerance for metric-axiom validation. Distance matrices
/// read from files may carry round-off.
pub const DEFAULT_TOL_METRIC: f64 = 1e-9;

/// A single violated metric axiom, with the offending indices.
#[derive(Debug, Clone, PartialEq)]
pub enum MetricViolation {
    /// `dist[i][i]` is not zero.
    Diagonal { index: usize, value: f64 },
    /// `dist[i][j] != dist[j][i]`.
    Symmetry { i: usize, j: usize, forward: f64, backward: f64 },
    /// `dist[i][k] > dist[i][j] + dist[j][k]` beyond tolerance.
    Triangle { i: usize, j: usize, k: usize, direct: f64, detour: f64 },
    /// Negative entry.
    Negative { i: usize, j: usize, value: f64 },
}

impl std::fmt::Display for MetricViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            MetricViolation::Diagonal { index, value } => {
                write!(f, "diagonal entry ({index},{index}) is {value}, expected 0")
            }
            MetricViolation::Symmetry { i, j, forward, backward } => {
                write!(f, "symmetry violated at ({i},{j}): {forward} vs {backward}")
            }
            MetricViolation::Triangle { i, j, k, direct, detour } => {
                write!(f, "triangle inequality violated on ({i},{j},{k}): {direct} > {detour}")
            }
            MetricViolation::Negative { i, j, value } => {
                write!(f, "negative distance {value} at ({i},{j})")
            }
        }
    }
}

/// Checks the shape of a raw matrix (square, finite entries) and returns all
/// metric-axiom violations within `tol_metric`. An empty list means the
/// matrix is a valid metric.
pub fn validate_metric(dist: &[Vec<f64>], tol_metric: f64) -> Result<Vec<MetricViolation>> {
    if tol_metric < 0.0 || !tol_metric.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "tol_metric must be a non-negative finite real, got {tol_metric}"
        )));
    }
    let n = dist.len();
    if n == 0 {
        return Err(Error::MalformedMatrix("matrix is empty".into()));
    }
    for (i, row) in dist.iter().enumerate() {
        if row.len() != n {
            return Err(Error::MalformedMatrix(format!(
                "row {i} has {} entries, expected {n}",
                row.len()
            )));
        }
        for (j, &v) in row.iter().enumerate() {
            if !v.is_finite() {
                return Err(Error::MalformedMatrix(format!(
                    "non-finite entry {v} at ({i},{j})"
                )));
            }
        }
    }

    let mut violations = Vec::new();
    for i in 0..n {
        if dist[i][i].abs() > tol_metric {
            violations.push(MetricViolation::Diagonal { index: i, value: dist[i][i] });
        }
        for j in 0..n {
            if dist[i][j] < -tol_metric {
                violations.push(MetricViolation::Negative { i, j, value: dist[i][j] });
            }
        }
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if (dist[i][j] - dist[j][i]).abs() > tol_metric {
                violations.push(MetricViolation::Symmetry {
                    i,
                    j,
                    forward: dist[i][j],
                    backward: dist[j][i],
                });
            }
        }
    }
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let direct = dist[i][k];
                let detour = dist[i][j] + dist[j][k];
                if direct > detour + tol_metric {
                    violations.push(MetricViolation::Triangle { i, j, k, direct, detour });
                }
            }
        }
    }
    Ok(violations)
}

/// A finite metric space given by its dense distance matrix.
///
/// Valid by construction: the matrix is square with zero diagonal, symmetric
/// and satisfies the triangle inequality within the construction tolerance.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteMetricSpace {
    dist: Vec<Vec<f64>>,
}

impl FiniteMetricSpace {
    /// Builds a space from a raw matrix, validating the metric axioms within
    /// `tol_metric`.
    pub fn new(dist: Vec<Vec<f64>>, tol_metric: f64) -> Result<Self> {
        let violations = validate_metric(&dist, tol_metric)?;
        if !violations.is_empty() {
            return Err(Error::InvalidMetric(violations));
        }
        Ok(Self { dist })
    }

    /// Internal constructor for matrices that are metrics by construction
    /// (e.g. induced by a norm).
    pub(crate) fn from_valid(dist: Vec<Vec<f64>>) -> Self {
        debug_assert!(!dist.is_empty() && dist.iter().all(|r| r.len() == dist.len()));
        Self { dist }
    }

    pub fn size(&self) -> usize {
        self.dist.len()
    }

    /// Distance between points `i` and `j`.
    pub fn dist(&self, i: usize, j: usize) -> f64 {
        self.dist[i][j]
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.dist
    }

    /// Largest pairwise distance; 0 for a singleton.
    pub fn diameter(&self) -> f64 {
        let mut max = 0.0_f64;
        for row in &self.dist {
            for &v in row {
                if v > max {
                    max = v;
                }
            }
        }
        max
    }

    /// Max distance from point `i` to any other point.
    pub fn eccentricity(&self, i: usize) -> f64 {
        self.dist[i].iter().cloned().fold(0.0, f64::max)
    }

    /// Re-checks the metric axioms, returning any violations.
    pub fn validate(&self, tol_metric: f64) -> Result<Vec<MetricViolation>> {
        validate_metric(&self.dist, tol_metric)
    }

    /// Sub-space on the given (distinct, in-range) indices, in order.
    pub fn subspace(&self, indices: &[usize]) -> Result<Self> {
        if indices.is_empty() {
            return Err(Error::InvalidArgument("subspace needs at least one index".into()));
        }
        for &i in indices {
            if i >= self.size() {
                return Err(Error::IndexOutOfRange { index: i, size: self.size() });
            }
        }
        let dist = indices
            .iter()
            .map(|&i| indices.iter().map(|&j| self.dist[i][j]).collect())
            .collect();
        Ok(Self::from_valid(dist))
    }
}

/// Euclidean distance between two coordinate slices of equal length.
pub fn euclidean(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

/// A finite ordered list of points in `R^n`.
#[derive(Debug, Clone, PartialEq)]
pub struct PointCloud {
    dim: usize,
    points: Vec<Vec<f64>>,
}

impl PointCloud {
    /// Builds a cloud, inferring the dimension from the first point. All
    /// points must share that dimension and have finite coordinates.
    pub fn new(points: Vec<Vec<f64>>) -> Result<Self> {
        let first = points
            .first()
            .ok_or_else(|| Error::MalformedCloud("point cloud is empty".into()))?;
        let dim = first.len();
        if dim == 0 {
            return Err(Error::MalformedCloud("points must have at least one coordinate".into()));
        }
        for (i, p) in points.iter().enumerate() {
            if p.len() != dim {
                return Err(Error::MalformedCloud(format!(
                    "point {i} has {} coordinates, expected {dim}",
                    p.len()
                )));
            }
            if let Some(&bad) = p.iter().find(|c| !c.is_finite()) {
                return Err(Error::MalformedCloud(format!(
                    "point {i} has non-finite coordinate {bad}"
                )));
            }
        }
        Ok(Self { dim, points })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        false // non-empty by construction
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.points[i]
    }

    pub fn points(&self) -> &[Vec<f64>] {
        &self.points
    }

    pub fn iter(&self) -> impl Iterator<Item = &[f64]> {
        self.points.iter().map(|p| p.as_slice())
    }

    /// Coordinate-wise mean of all points.
    pub fn centroid(&self) -> Vec<f64> {
        let mut c = vec![0.0; self.dim];
        for p in &self.points {
            for (acc, &x) in c.iter_mut().zip(p) {
                *acc += x;
            }
        }
        let n = self.points.len() as f64;
        c.iter_mut().for_each(|x| *x /= n);
        c
    }

    /// The metric induced by the Euclidean norm: `dist[i][j] = |p_i - p_j|`.
    pub fn induced_metric(&self) -> FiniteMetricSpace {
        let n = self.points.len();
        let mut dist = vec![vec![0.0; n]; n];
        for i in 0..n {
            for j in (i + 1)..n {
                let d = euclidean(&self.points[i], &self.points[j]);
                dist[i][j] = d;
                dist[j][i] = d;
            }
        }
        FiniteMetricSpace::from_valid(dist)
    }

    /// Max pairwise Euclidean distance; 0 for a singleton.
    pub fn diameter(&self) -> f64 {
        let mut max = 0.0_f64;
        for i in 0..self.points.len() {
            for j in (i + 1)..self.points.len() {
                max = max.max(euclidean(&self.points[i], &self.points[j]));
            }
        }
        max
    }
}

/// A closed ball in `R^n`.
#[derive(Debug, Clone, PartialEq)]
pub struct Ball {
    center: Vec<f64>,
    radius: f64,
}

impl Ball {
    pub fn new(center: Vec<f64>, radius: f64) -> Result<Self> {
        if center.is_empty() || center.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidArgument("ball center must be a finite non-empty vector".into()));
        }
        if !(radius >= 0.0) || !radius.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "ball radius must be a non-negative finite real, got {radius}"
            )));
        }
        Ok(Self { center, radius })
    }

    pub fn center(&self) -> &[f64] {
        &self.center
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn dim(&self) -> usize {
        self.center.len()
    }

    pub fn contains(&self, p: &[f64]) -> bool {
        euclidean(&self.center, p) <= self.radius
    }
}
