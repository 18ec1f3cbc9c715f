//! Exhaustive enumeration of every correspondence between two tiny spaces.

use crate::error::Result;
use crate::relation::{Correspondence, Relation};
use crate::space::FiniteMetricSpace;

use super::{check_sizes, GhResult, GhSolver};

/// Largest side length the exhaustive solver accepts. The number of
/// correspondences between sizes (m, n) is the number of m x n binary
/// matrices with no zero row or column, which at 4 x 4 is still only 34,902.
pub const BRUTE_FORCE_SIZE_CAP: usize = 4;

/// Ground-truth solver: iterates over all subsets of the index grid, keeps
/// those covering both sides, and minimizes distortion directly.
#[derive(Debug, Clone, Default)]
pub struct BruteForce;

impl GhSolver for BruteForce {
    fn name(&self) -> &'static str {
        "brute"
    }

    fn solve(&self, mx: &FiniteMetricSpace, my: &FiniteMetricSpace) -> Result<GhResult> {
        check_sizes(mx, my, BRUTE_FORCE_SIZE_CAP)?;
        let m = mx.size();
        let n = my.size();
        let cells = m * n;

        let mut best_dis = f64::INFINITY;
        let mut best_mask = 0_u32;
        let mut pairs: Vec<(usize, usize)> = Vec::with_capacity(cells);
        for mask in 1_u32..(1 << cells) {
            if !covers_both_sides(mask, m, n) {
                continue;
            }
            pairs.clear();
            let mut bits = mask;
            while bits != 0 {
                let k = bits.trailing_zeros() as usize;
                pairs.push((k / n, k % n));
                bits &= bits - 1;
            }
            let mut dis = 0.0_f64;
            for (a, &(x, y)) in pairs.iter().enumerate() {
                for &(x2, y2) in &pairs[a + 1..] {
                    let gap = (mx.dist(x, x2) - my.dist(y, y2)).abs();
                    if gap > dis {
                        dis = gap;
                    }
                }
                if dis >= best_dis {
                    break;
                }
            }
            if dis < best_dis {
                best_dis = dis;
                best_mask = mask;
            }
        }

        let witness_pairs: Vec<(usize, usize)> = (0..cells)
            .filter(|k| best_mask & (1 << k) != 0)
            .map(|k| (k / n, k % n))
            .collect();
        let witness =
            Correspondence::new(Relation::new(m, n, witness_pairs).expect("non-empty mask"))
                .expect("mask covers both sides");
        GhResult::exact_from_witness(witness, mx, my)
    }
}

fn covers_both_sides(mask: u32, m: usize, n: usize) -> bool {
    for i in 0..m {
        let row = ((1_u32 << n) - 1) << (i * n);
        if mask & row == 0 {
            return false;
        }
    }
    for j in 0..n {
        let mut col = 0_u32;
        for i in 0..m {
            col |= 1 << (i * n + j);
        }
        if mask & col == 0 {
            return false;
        }
    }
    true
}
