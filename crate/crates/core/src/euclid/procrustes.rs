//! Least-squares rigid fit between matched points.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::space::PointCloud;

use super::RigidMotion;

/// Rigid motion `T` minimizing the sum of squared distances
/// `sum |a_i - T(b_j)|^2` over the matched index pairs `(i, j)`.
///
/// The linear part is found from the SVD of the cross-covariance of the
/// centered matched points; both determinant signs are evaluated and the one
/// with the lower residual wins, so reflections are recovered. If all
/// matched points on either side coincide the motion degrades to the pure
/// translation aligning the matched centroids.
pub fn best_rigid_alignment(
    a: &PointCloud,
    b: &PointCloud,
    matching: &[(usize, usize)],
) -> Result<RigidMotion> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch { left: a.dim(), right: b.dim() });
    }
    if matching.is_empty() {
        return Err(Error::InvalidArgument("matching must be non-empty".into()));
    }
    for &(i, j) in matching {
        if i >= a.len() {
            return Err(Error::IndexOutOfRange { index: i, size: a.len() });
        }
        if j >= b.len() {
            return Err(Error::IndexOutOfRange { index: j, size: b.len() });
        }
    }
    let dim = a.dim();
    let k = matching.len() as f64;

    let mut centroid_a = DVector::zeros(dim);
    let mut centroid_b = DVector::zeros(dim);
    for &(i, j) in matching {
        centroid_a += DVector::from_column_slice(a.point(i));
        centroid_b += DVector::from_column_slice(b.point(j));
    }
    centroid_a /= k;
    centroid_b /= k;

    // Cross-covariance of centered matched points, plus spread checks for
    // the degenerate (all-coincident) case.
    let mut cross = DMatrix::<f64>::zeros(dim, dim);
    let mut spread_a = 0.0_f64;
    let mut spread_b = 0.0_f64;
    for &(i, j) in matching {
        let pa = DVector::from_column_slice(a.point(i)) - &centroid_a;
        let pb = DVector::from_column_slice(b.point(j)) - &centroid_b;
        spread_a = spread_a.max(pa.norm());
        spread_b = spread_b.max(pb.norm());
        cross += &pa * pb.transpose();
    }
    if spread_a < 1e-12 || spread_b < 1e-12 {
        let translation = &centroid_a - &centroid_b;
        return Ok(RigidMotion {
            linear: DMatrix::identity(dim, dim),
            translation,
        });
    }

    let svd = cross.svd(true, true);
    let u = svd.u.as_ref().expect("svd with u");
    let v_t = svd.v_t.as_ref().expect("svd with v_t");

    // Unconstrained orthogonal minimizer, and the proper-rotation variant
    // with the smallest singular direction flipped.
    let free = u * v_t;
    let mut flip = DMatrix::identity(dim, dim);
    flip[(dim - 1, dim - 1)] = -1.0;
    let flipped = u * flip * v_t;

    let residual = |linear: &DMatrix<f64>| -> f64 {
        matching
            .iter()
            .map(|&(i, j)| {
                let pb = DVector::from_column_slice(b.point(j)) - &centroid_b;
                let pa = DVector::from_column_slice(a.point(i)) - &centroid_a;
                (pa - linear * pb).norm_squared()
            })
            .sum()
    };

    let linear = if residual(&free) <= residual(&flipped) { free } else { flipped };
    let translation = &centroid_a - &linear * &centroid_b;
    Ok(RigidMotion { linear, translation })
}
