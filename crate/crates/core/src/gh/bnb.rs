//! Complete branch-and-bound over correspondences.

use crate::error::{Error, Result};
use crate::relation::{distortion, Correspondence, Relation};
use crate::space::FiniteMetricSpace;

use super::{profile_matching, GhResult, GhSolver};

/// Hard cap on the side whose subsets are enumerated; image sets are stored
/// as bitmasks.
const SUBSET_SIDE_CAP: usize = 16;

/// Complete search: branches on the image set of each left point (ordered by
/// decreasing eccentricity), pruning subtrees whose partial distortion
/// already reaches the incumbent and stopping outright once the incumbent
/// meets the diameter-gap lower bound.
///
/// Within the node budget the search is exhaustive and the result exact;
/// when the budget runs out the best incumbent becomes the upper bound and
/// the smallest partial distortion among unexplored subtrees the proven
/// lower bound.
#[derive(Debug, Clone)]
pub struct BranchAndBound {
    pub node_budget: u64,
}

impl Default for BranchAndBound {
    fn default() -> Self {
        Self { node_budget: 10_000_000 }
    }
}

impl GhSolver for BranchAndBound {
    fn name(&self) -> &'static str {
        "bnb"
    }

    fn solve(&self, mx: &FiniteMetricSpace, my: &FiniteMetricSpace) -> Result<GhResult> {
        if my.size() <= SUBSET_SIDE_CAP {
            self.solve_oriented(mx, my, false)
        } else if mx.size() <= SUBSET_SIDE_CAP {
            self.solve_oriented(my, mx, true)
        } else {
            Err(Error::SizeLimit {
                limit: SUBSET_SIDE_CAP,
                got: mx.size().min(my.size()),
            })
        }
    }
}

impl BranchAndBound {
    fn solve_oriented(
        &self,
        mx: &FiniteMetricSpace,
        my: &FiniteMetricSpace,
        transposed: bool,
    ) -> Result<GhResult> {
        let mut search = Search::new(mx, my, self.node_budget);
        search.run();
        let witness_relation = Relation::new(mx.size(), my.size(), search.best_pairs.clone())
            .expect("incumbent is non-empty and in range");
        let mut witness = Correspondence::new(witness_relation)
            .expect("incumbent covers both sides");
        if transposed {
            witness = witness.transpose();
        }
        let (orig_x, orig_y) = if transposed { (my, mx) } else { (mx, my) };
        if search.exhausted {
            let dis_upper = distortion(&witness, orig_x, orig_y)?;
            let proven = search
                .frontier_min
                .min(dis_upper)
                .max(search.diameter_gap);
            Ok(GhResult {
                lower: proven / 2.0,
                upper: dis_upper / 2.0,
                witness: Some(witness),
                exact: false,
            })
        } else {
            GhResult::exact_from_witness(witness, orig_x, orig_y)
        }
    }
}

struct Search<'a> {
    mx: &'a FiniteMetricSpace,
    my: &'a FiniteMetricSpace,
    order: Vec<usize>,
    /// subset_diam[s]: max pairwise distance in `my` within the subset `s`.
    subset_diam: Vec<f64>,
    budget: u64,
    nodes: u64,
    exhausted: bool,
    diameter_gap: f64,
    incumbent: f64,
    best_pairs: Vec<(usize, usize)>,
    assigned: Vec<(usize, usize)>,
    frontier_min: f64,
    done: bool,
}

impl<'a> Search<'a> {
    fn new(mx: &'a FiniteMetricSpace, my: &'a FiniteMetricSpace, budget: u64) -> Self {
        let m = mx.size();
        let n = my.size();

        let mut order: Vec<usize> = (0..m).collect();
        order.sort_by(|&a, &b| {
            mx.eccentricity(b)
                .total_cmp(&mx.eccentricity(a))
                .then(a.cmp(&b))
        });

        // max_to[y][s] = max distance from y to the subset s; feeds the
        // subset-diameter table.
        let full = 1_usize << n;
        let mut max_to = vec![vec![0.0_f64; full]; n];
        for y in 0..n {
            for s in 1..full {
                let low = s.trailing_zeros() as usize;
                let rest = s & (s - 1);
                max_to[y][s] = max_to[y][rest].max(my.dist(y, low));
            }
        }
        let mut subset_diam = vec![0.0_f64; full];
        for s in 1..full {
            let low = s.trailing_zeros() as usize;
            let rest = s & (s - 1);
            subset_diam[s] = subset_diam[rest].max(max_to[low][rest]);
        }

        let warm = profile_matching(mx, my);
        let incumbent = distortion(&warm, mx, my).expect("warm start matches sizes");
        let best_pairs = warm.pairs().to_vec();

        Self {
            mx,
            my,
            order,
            subset_diam,
            budget,
            nodes: 0,
            exhausted: false,
            diameter_gap: (mx.diameter() - my.diameter()).abs(),
            incumbent,
            best_pairs,
            assigned: Vec::new(),
            frontier_min: f64::INFINITY,
            done: false,
        }
    }

    fn run(&mut self) {
        if self.incumbent <= self.diameter_gap {
            return; // warm start already meets the lower bound
        }
        self.descend(0, 0, 0.0);
    }

    /// Expands the node at `depth` with right-side coverage `covered` and
    /// partial distortion `partial` over the assigned pairs.
    fn descend(&mut self, depth: usize, covered: usize, partial: f64) {
        let m = self.mx.size();
        let n = self.my.size();
        if depth == m {
            if partial < self.incumbent {
                self.incumbent = partial;
                self.best_pairs = self.assigned.clone();
                if self.incumbent <= self.diameter_gap {
                    self.done = true;
                }
            }
            return;
        }
        let left = self.order[depth];

        // Distortion a single pair (left, y) adds against the assigned
        // prefix.
        let mut pair_gap = vec![0.0_f64; n];
        for (y, slot) in pair_gap.iter_mut().enumerate() {
            let mut worst = 0.0_f64;
            for &(x2, y2) in &self.assigned {
                let gap = (self.mx.dist(left, x2) - self.my.dist(y, y2)).abs();
                if gap > worst {
                    worst = gap;
                }
            }
            *slot = worst;
        }
        // gap_agg[s]: worst pair_gap over the subset s.
        let full = 1_usize << n;
        let mut gap_agg = vec![0.0_f64; full];
        for s in 1..full {
            let low = s.trailing_zeros() as usize;
            gap_agg[s] = gap_agg[s & (s - 1)].max(pair_gap[low]);
        }

        // Candidate image sets, cheapest completion first. On the last level
        // only supersets of the uncovered right indices keep the result a
        // correspondence.
        let mut candidates: Vec<(f64, usize)> = Vec::new();
        let consider = |s: usize, candidates: &mut Vec<(f64, usize)>| {
            let bound = partial.max(gap_agg[s]).max(self.subset_diam[s]);
            if bound < self.incumbent {
                candidates.push((bound, s));
            }
        };
        if depth + 1 == m {
            let missing = !covered & (full - 1);
            let free = covered;
            let mut t = free;
            loop {
                let s = missing | t;
                if s != 0 {
                    consider(s, &mut candidates);
                }
                if t == 0 {
                    break;
                }
                t = (t - 1) & free;
            }
        } else {
            for s in 1..full {
                consider(s, &mut candidates);
            }
        }
        candidates.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));

        for (bound, s) in candidates {
            if self.done {
                return;
            }
            if bound >= self.incumbent {
                break; // sorted: nothing further can improve
            }
            if self.exhausted {
                self.frontier_min = self.frontier_min.min(bound);
                continue;
            }
            self.nodes += 1;
            if self.nodes > self.budget {
                self.exhausted = true;
                self.frontier_min = self.frontier_min.min(bound);
                continue;
            }
            let before = self.assigned.len();
            let mut bits = s;
            while bits != 0 {
                let y = bits.trailing_zeros() as usize;
                self.assigned.push((left, y));
                bits &= bits - 1;
            }
            self.descend(depth + 1, covered | s, bound);
            self.assigned.truncate(before);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gh::BruteForce;
    use crate::space::PointCloud;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_space(n: usize, rng: &mut ChaCha8Rng) -> FiniteMetricSpace {
        PointCloud::new(
            (0..n)
                .map(|_| vec![rng.random::<f64>(), rng.random::<f64>()])
                .collect(),
        )
        .unwrap()
        .induced_metric()
    }

    #[test]
    fn space_against_itself_is_exactly_zero() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let m = random_space(7, &mut rng);
        let r = BranchAndBound::default().solve(&m, &m).unwrap();
        assert!(r.exact);
        assert_eq!(r.upper, 0.0);
    }

    #[test]
    fn agrees_with_brute_force_on_random_small_pairs() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for trial in 0..120 {
            let a = random_space(1 + trial % 4, &mut rng);
            let b = random_space(1 + (trial / 4) % 4, &mut rng);
            let exact = BruteForce.solve(&a, &b).unwrap();
            let bnb = BranchAndBound::default().solve(&a, &b).unwrap();
            assert!(bnb.exact);
            assert_eq!(bnb.upper, exact.upper, "trial {trial}");
            assert_eq!(bnb.lower, exact.lower, "trial {trial}");
        }
    }

    #[test]
    fn two_point_example_is_half() {
        let mx = FiniteMetricSpace::new(vec![vec![0.0, 2.0], vec![2.0, 0.0]], 0.0).unwrap();
        let my = FiniteMetricSpace::new(vec![vec![0.0, 1.0], vec![1.0, 0.0]], 0.0).unwrap();
        let r = BranchAndBound::default().solve(&mx, &my).unwrap();
        assert!(r.exact);
        assert_eq!(r.upper, 0.5);
        let w = r.witness.unwrap();
        assert_eq!(distortion(&w, &mx, &my).unwrap(), 1.0);
    }

    #[test]
    fn transposed_orientation_used_for_lopsided_sizes() {
        // Right side above the subset cap forces the transposed search. Two
        // tight clusters keep the optimal split unambiguous, so pruning cuts
        // the deep side down immediately.
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let large = PointCloud::new(
            (0..17)
                .map(|i| {
                    let base = if i % 2 == 0 { 0.0 } else { 1.0 };
                    vec![base + 0.01 * rng.random::<f64>(), 0.01 * rng.random::<f64>()]
                })
                .collect(),
        )
        .unwrap()
        .induced_metric();
        let small = FiniteMetricSpace::new(vec![vec![0.0, 1.0], vec![1.0, 0.0]], 0.0).unwrap();
        let r = BranchAndBound::default().solve(&small, &large).unwrap();
        assert!(r.exact);
        let w = r.witness.as_ref().unwrap();
        assert_eq!(w.left_size(), 2);
        assert_eq!(w.right_size(), 17);
        assert_eq!(distortion(w, &small, &large).unwrap(), 2.0 * r.upper);
        assert!(r.upper < 0.1);
    }

    #[test]
    fn exhausted_budget_degrades_to_bounds() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let a = random_space(6, &mut rng);
        let b = random_space(6, &mut rng);
        let full = BranchAndBound::default().solve(&a, &b).unwrap();
        assert!(full.exact);
        let starved = BranchAndBound { node_budget: 3 }.solve(&a, &b).unwrap();
        assert!(!starved.exact);
        assert!(starved.lower <= starved.upper);
        assert!(starved.lower <= full.upper);
        assert!(starved.upper >= full.upper);
        assert!(starved.lower >= (a.diameter() - b.diameter()).abs() / 2.0);
    }

    #[test]
    fn both_sides_above_cap_refused() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let a = random_space(17, &mut rng);
        assert!(matches!(
            BranchAndBound::default().solve(&a, &a),
            Err(Error::SizeLimit { .. })
        ));
    }
}
