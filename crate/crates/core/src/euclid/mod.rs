//! Hausdorff distance between Euclidean point clouds and upper estimation of
//! the Euclidean Gromov-Hausdorff distance `inf_T d_H(X, T(Y))` over the
//! full isometry group of `R^n` (rotations, reflections, translations).
//!
//! Two estimators are provided behind the [`EhEstimator`] trait: a
//! multi-start alternating refinement ([`MultiStart`]) that works in any
//! dimension, and an exhaustive planar rotation scan ([`PlanarScan`]) whose
//! result carries a certified resolution gap. Both return upper bounds on
//! the true infimum.

mod kdtree;
mod multistart;
mod planar_scan;
mod procrustes;
mod sandwich;

pub use kdtree::KdTree;
pub use multistart::MultiStart;
pub use planar_scan::PlanarScan;
pub use procrustes::best_rigid_alignment;
pub use sandwich::{sandwich_check, SandwichReport};

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::space::PointCloud;

/// Orthogonality tolerance for rigid-motion linear parts.
pub const TOL_ORTH: f64 = 1e-9;

/// Convergence tolerance for the alternating refinement.
pub const TOL_CONV: f64 = 1e-9;

/// An isometry of `R^n`: an orthogonal linear part followed by a
/// translation. Reflections are allowed, the determinant is +1 or -1.
#[derive(Debug, Clone, PartialEq)]
pub struct RigidMotion {
    linear: DMatrix<f64>,
    translation: DVector<f64>,
}

impl RigidMotion {
    pub fn new(linear: DMatrix<f64>, translation: DVector<f64>) -> Result<Self> {
        if !linear.is_square() || linear.nrows() != translation.len() || linear.nrows() == 0 {
            return Err(Error::InvalidArgument(format!(
                "rigid motion needs an n x n linear part and an n-vector translation, got {}x{} and {}",
                linear.nrows(),
                linear.ncols(),
                translation.len()
            )));
        }
        let n = linear.nrows();
        let gram = linear.transpose() * &linear;
        let residual = (&gram - DMatrix::<f64>::identity(n, n)).abs().max();
        if residual > TOL_ORTH {
            return Err(Error::InvalidArgument(format!(
                "linear part is not orthogonal: residual {residual:e} exceeds {TOL_ORTH:e}"
            )));
        }
        Ok(Self { linear, translation })
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            linear: DMatrix::identity(dim, dim),
            translation: DVector::zeros(dim),
        }
    }

    pub fn translation_by(offset: &[f64]) -> Self {
        Self {
            linear: DMatrix::identity(offset.len(), offset.len()),
            translation: DVector::from_column_slice(offset),
        }
    }

    /// Planar rotation by `angle`, optionally composed with the reflection
    /// that flips the second coordinate (covering the orientation-reversing
    /// half of the planar isometry group).
    pub fn planar(angle: f64, reflect: bool) -> Self {
        let (s, c) = angle.sin_cos();
        let mut linear = DMatrix::from_row_slice(2, 2, &[c, -s, s, c]);
        if reflect {
            // rotation * diag(1, -1)
            linear.column_mut(1).scale_mut(-1.0);
        }
        Self { linear, translation: DVector::zeros(2) }
    }

    pub fn dim(&self) -> usize {
        self.linear.nrows()
    }

    pub fn linear(&self) -> &DMatrix<f64> {
        &self.linear
    }

    pub fn translation(&self) -> &DVector<f64> {
        &self.translation
    }

    pub fn determinant(&self) -> f64 {
        self.linear.determinant()
    }

    pub fn linear_rows(&self) -> Vec<Vec<f64>> {
        (0..self.linear.nrows())
            .map(|i| self.linear.row(i).iter().cloned().collect())
            .collect()
    }

    pub fn translation_vec(&self) -> Vec<f64> {
        self.translation.iter().cloned().collect()
    }

    pub fn transform_point(&self, p: &[f64]) -> Vec<f64> {
        let v = &self.linear * DVector::from_column_slice(p) + &self.translation;
        v.iter().cloned().collect()
    }

    /// Replaces the translation so that `source`'s centroid maps onto
    /// `target_centroid`.
    pub fn with_centroid_alignment(mut self, source: &PointCloud, target_centroid: &[f64]) -> Self {
        let sc = DVector::from_vec(source.centroid());
        let tc = DVector::from_column_slice(target_centroid);
        self.translation = tc - &self.linear * sc;
        self
    }
}

/// Applies a rigid motion to every point of a cloud.
pub fn apply_motion(motion: &RigidMotion, cloud: &PointCloud) -> Result<PointCloud> {
    if motion.dim() != cloud.dim() {
        return Err(Error::DimensionMismatch { left: motion.dim(), right: cloud.dim() });
    }
    let points = cloud.iter().map(|p| motion.transform_point(p)).collect();
    PointCloud::new(points)
}

fn directed_hausdorff(from: &PointCloud, to_tree: &KdTree<'_>) -> f64 {
    from.iter()
        .map(|p| to_tree.nearest(p).1)
        .fold(0.0, f64::max)
}

/// Symmetric Hausdorff distance between two clouds in the same `R^n`.
pub fn hausdorff_distance(a: &PointCloud, b: &PointCloud) -> Result<f64> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch { left: a.dim(), right: b.dim() });
    }
    let tree_a = KdTree::build(a.points());
    let tree_b = KdTree::build(b.points());
    Ok(directed_hausdorff(a, &tree_b).max(directed_hausdorff(b, &tree_a)))
}

/// Upper estimate of the Euclidean Gromov-Hausdorff distance.
#[derive(Debug, Clone)]
pub struct EhResult {
    /// Hausdorff distance achieved by `motion`, recomputed exactly.
    pub value: f64,
    pub motion: RigidMotion,
    /// True only for the exhaustive planar scan, whose grid resolution
    /// bounds the gap to the true infimum.
    pub certified: bool,
    /// For certified results, how far above the true infimum the value can
    /// be; `None` for heuristic estimates.
    pub gap_bound: Option<f64>,
}

impl EhResult {
    pub(crate) fn from_motion(
        a: &PointCloud,
        b: &PointCloud,
        motion: RigidMotion,
        certified: bool,
        gap_bound: Option<f64>,
    ) -> Result<Self> {
        let value = hausdorff_distance(a, &apply_motion(&motion, b)?)?;
        Ok(Self { value, motion, certified, gap_bound })
    }
}

/// A strategy producing upper estimates of the Euclidean Gromov-Hausdorff
/// distance between two clouds.
pub trait EhEstimator {
    /// Registry name of this estimator.
    fn name(&self) -> &'static str;
    fn estimate(&self, a: &PointCloud, b: &PointCloud) -> Result<EhResult>;
}

/// Looks an estimator up by registry name.
pub fn estimator_by_name(name: &str, seed: u64) -> Option<Box<dyn EhEstimator>> {
    match name {
        "multistart" => Some(Box::new(MultiStart::with_seed(seed))),
        "planar-scan" => Some(Box::new(PlanarScan::default())),
        _ => None,
    }
}

/// Names accepted by [`estimator_by_name`].
pub const EH_ESTIMATOR_NAMES: &[&str] = &["multistart", "planar-scan"];

const GOLDEN_RATIO: f64 = 1.618033988749895;

/// Golden-section minimization over `[lo, hi]` down to interval width `tol`.
pub(crate) fn golden_section_min(
    mut lo: f64,
    mut hi: f64,
    tol: f64,
    mut f: impl FnMut(f64) -> f64,
) -> (f64, f64) {
    let mut x1 = hi - (hi - lo) / GOLDEN_RATIO;
    let mut x2 = lo + (hi - lo) / GOLDEN_RATIO;
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while hi - lo > tol {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - (hi - lo) / GOLDEN_RATIO;
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + (hi - lo) / GOLDEN_RATIO;
            f2 = f(x2);
        }
    }
    if f1 <= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}
