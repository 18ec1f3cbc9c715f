//! Exact and bounded Gromov-Hausdorff distance between small finite metric
//! spaces.
//!
//! Both solvers minimize the distortion over all correspondences between the
//! two index sets and report half of that minimum, together with a witness
//! correspondence attaining it. [`BruteForce`] enumerates every
//! correspondence and is the ground-truth oracle for tiny spaces;
//! [`BranchAndBound`] explores the same search space with pruning and scales
//! to roughly eight points per side within its default node budget. When the
//! budget runs out the branch-and-bound degrades to a certified
//! lower/upper bracket instead of failing.
//!
//! All internal comparisons are made on distortions; values are halved only
//! at the boundary, so the two solvers agree bit-for-bit on instances both
//! can solve.

mod bnb;
mod brute;

pub use bnb::BranchAndBound;
pub use brute::{BruteForce, BRUTE_FORCE_SIZE_CAP};

use crate::error::{Error, Result};
use crate::relation::{distortion, Correspondence};
use crate::space::FiniteMetricSpace;

/// Outcome of a GH computation: a bracket `[lower, upper]` that collapses to
/// the exact value when `exact` is set, plus the best witness found.
#[derive(Debug, Clone)]
pub struct GhResult {
    pub lower: f64,
    pub upper: f64,
    /// Correspondence whose distortion is exactly `2 * upper`.
    pub witness: Option<Correspondence>,
    pub exact: bool,
}

impl GhResult {
    fn exact_from_witness(
        witness: Correspondence,
        mx: &FiniteMetricSpace,
        my: &FiniteMetricSpace,
    ) -> Result<Self> {
        let dis = distortion(&witness, mx, my)?;
        let value = dis / 2.0;
        debug_assert!(diameter_gap_lower_bound(mx, my) <= value + 1e-12);
        Ok(Self { lower: value, upper: value, witness: Some(witness), exact: true })
    }
}

/// Lower bound from the diameter gap: `|diam X - diam Y| / 2` never exceeds
/// the GH distance.
pub fn diameter_gap_lower_bound(mx: &FiniteMetricSpace, my: &FiniteMetricSpace) -> f64 {
    (mx.diameter() - my.diameter()).abs() / 2.0
}

/// Any correspondence upper-bounds the GH distance by half its distortion.
pub fn upper_bound_from_correspondence(
    r: &Correspondence,
    mx: &FiniteMetricSpace,
    my: &FiniteMetricSpace,
) -> Result<f64> {
    Ok(distortion(r, mx, my)? / 2.0)
}

/// A complete search strategy for the exact GH distance.
pub trait GhSolver {
    /// Registry name of this solver.
    fn name(&self) -> &'static str;
    fn solve(&self, mx: &FiniteMetricSpace, my: &FiniteMetricSpace) -> Result<GhResult>;
}

/// Looks a solver up by its registry name.
///
/// `budget` overrides the node budget where the strategy has one.
pub fn solver_by_name(name: &str, budget: Option<u64>) -> Option<Box<dyn GhSolver>> {
    match name {
        "brute" => Some(Box::new(BruteForce::default())),
        "bnb" => {
            let mut solver = BranchAndBound::default();
            if let Some(b) = budget {
                solver.node_budget = b;
            }
            Some(Box::new(solver))
        }
        _ => None,
    }
}

/// Names accepted by [`solver_by_name`].
pub const SOLVER_NAMES: &[&str] = &["brute", "bnb"];

/// Greedy warm-start correspondence: left points are matched to the right
/// point with the most similar sorted distance profile, then uncovered right
/// points are patched in the same way. Cheap, and usually tight on
/// near-isometric inputs.
fn profile_matching(mx: &FiniteMetricSpace, my: &FiniteMetricSpace) -> Correspondence {
    let profile = |m: &FiniteMetricSpace, i: usize| -> Vec<f64> {
        let mut row = m.rows()[i].clone();
        row.sort_by(f64::total_cmp);
        row
    };
    let profiles_x: Vec<Vec<f64>> = (0..mx.size()).map(|i| profile(mx, i)).collect();
    let profiles_y: Vec<Vec<f64>> = (0..my.size()).map(|j| profile(my, j)).collect();
    // Profiles may have different lengths; compare up to the shorter one and
    // penalize the leftover mass.
    let gap = |p: &[f64], q: &[f64]| -> f64 {
        let shared: f64 = p
            .iter()
            .zip(q)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        let tail = if p.len() > q.len() { &p[q.len()..] } else { &q[p.len()..] };
        shared.max(tail.iter().cloned().fold(0.0, f64::max))
    };
    let mut pairs = Vec::new();
    for (i, px) in profiles_x.iter().enumerate() {
        let j = profiles_y
            .iter()
            .enumerate()
            .min_by(|(_, a), (_, b)| gap(px, a).total_cmp(&gap(px, b)))
            .map(|(j, _)| j)
            .expect("non-empty space");
        pairs.push((i, j));
    }
    let covered: std::collections::BTreeSet<usize> = pairs.iter().map(|&(_, j)| j).collect();
    for (j, py) in profiles_y.iter().enumerate() {
        if covered.contains(&j) {
            continue;
        }
        let i = profiles_x
            .iter()
            .enumerate()
            .min_by(|(_, a), (_, b)| gap(py, a).total_cmp(&gap(py, b)))
            .map(|(i, _)| i)
            .expect("non-empty space");
        pairs.push((i, j));
    }
    let relation = crate::relation::Relation::new(mx.size(), my.size(), pairs)
        .expect("patched matching is non-empty and in range");
    Correspondence::new(relation).expect("patched matching covers both sides")
}

fn check_sizes(mx: &FiniteMetricSpace, my: &FiniteMetricSpace, cap: usize) -> Result<()> {
    let worst = mx.size().max(my.size());
    if worst > cap {
        return Err(Error::SizeLimit { limit: cap, got: worst });
    }
    Ok(())
}
