//! Joint evaluation of the GH / Euclidean-GH inequality chain on one
//! instance pair.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gh::GhResult;
use crate::space::PointCloud;

use super::EhResult;

/// Per-instance record of the inequality chain
/// `d_GH <= d_EH <= c' * M^(1/2) * d_GH^(1/2)` with `M` the larger diameter.
///
/// The Euclidean side is represented by a computed upper estimate, so the
/// left inequality is checked against that stand-in; the right-hand side is
/// evaluated relative to the configured constant `c_prime`, and the implied
/// empirical constant `c_hat = eh / (M^(1/2) * d_GH^(1/2))` is reported
/// whenever `d_GH > 0`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SandwichReport {
    pub gh_value: f64,
    pub eh_value: f64,
    pub eh_certified: bool,
    /// `M = max(diam a, diam b)`.
    pub max_diameter: f64,
    /// `gh_value <= eh_value`.
    pub left_holds: bool,
    /// `c_prime * sqrt(M) * sqrt(gh_value)`.
    pub right_side: f64,
    /// `eh_value <= right_side`, relative to the configured `c_prime`.
    pub right_holds: bool,
    /// `eh / (sqrt(M) * sqrt(gh))`; `None` when `gh_value = 0`.
    pub c_hat: Option<f64>,
    pub c_prime: f64,
}

/// Evaluates the inequality chain for one instance. Requires an exact GH
/// result: checking inequalities against loose bounds would be meaningless.
pub fn sandwich_check(
    a: &PointCloud,
    b: &PointCloud,
    gh: &GhResult,
    eh: &EhResult,
    c_prime: f64,
) -> Result<SandwichReport> {
    if !gh.exact {
        return Err(Error::PreconditionViolated(
            "sandwich check needs an exact GH value, got bounds only".into(),
        ));
    }
    if !(c_prime > 0.0) || !c_prime.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "c_prime must be positive and finite, got {c_prime}"
        )));
    }
    let gh_value = gh.upper;
    let max_diameter = a.diameter().max(b.diameter());
    let right_side = c_prime * max_diameter.sqrt() * gh_value.sqrt();
    let c_hat = if gh_value > 0.0 {
        Some(eh.value / (max_diameter.sqrt() * gh_value.sqrt()))
    } else {
        None
    };
    Ok(SandwichReport {
        gh_value,
        eh_value: eh.value,
        eh_certified: eh.certified,
        max_diameter,
        left_holds: gh_value <= eh.value,
        right_side,
        right_holds: eh.value <= right_side,
        c_hat,
        c_prime,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::euclid::{EhEstimator, MultiStart};
    use crate::gh::{BranchAndBound, GhSolver};

    #[test]
    fn identical_clouds_give_all_zero_quantities() {
        let a = PointCloud::new(vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
        let gh = BranchAndBound::default()
            .solve(&a.induced_metric(), &a.induced_metric())
            .unwrap();
        let eh = MultiStart { restarts: 4, seed: 0, ..Default::default() }
            .estimate(&a, &a)
            .unwrap();
        let report = sandwich_check(&a, &a, &gh, &eh, 1.0).unwrap();
        assert_eq!(report.gh_value, 0.0);
        assert!(report.eh_value <= 1e-9);
        assert_eq!(report.right_side, 0.0);
        assert!(report.c_hat.is_none());
        assert!(report.left_holds);
    }

    #[test]
    fn refuses_inexact_gh_results() {
        let a = PointCloud::new(vec![vec![0.0, 0.0], vec![1.0, 0.0]]).unwrap();
        let gh = crate::gh::GhResult {
            lower: 0.0,
            upper: 1.0,
            witness: None,
            exact: false,
        };
        let eh = MultiStart { restarts: 1, seed: 0, ..Default::default() }
            .estimate(&a, &a)
            .unwrap();
        assert!(sandwich_check(&a, &a, &gh, &eh, 1.0).is_err());
    }
}
