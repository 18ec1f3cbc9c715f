//! Exact nearest-neighbour search over a fixed point set.
//!
//! Plain kd-tree with median splits. Queries return exactly the brute-force
//! answer (ties broken towards the smaller point index), which matters here
//! because Hausdorff values feed inequality checks downstream.

use crate::space::euclidean;

struct Node {
    point: usize,
    axis: usize,
    left: Option<Box<Node>>,
    right: Option<Box<Node>>,
}

pub struct KdTree<'a> {
    points: &'a [Vec<f64>],
    root: Option<Box<Node>>,
}

impl<'a> KdTree<'a> {
    pub fn build(points: &'a [Vec<f64>]) -> Self {
        assert!(!points.is_empty(), "kd-tree needs at least one point");
        let dim = points[0].len();
        let mut index: Vec<usize> = (0..points.len()).collect();
        let root = Self::build_node(points, &mut index, 0, dim);
        Self { points, root }
    }

    fn build_node(
        points: &[Vec<f64>],
        index: &mut [usize],
        depth: usize,
        dim: usize,
    ) -> Option<Box<Node>> {
        if index.is_empty() {
            return None;
        }
        let axis = depth % dim;
        let mid = index.len() / 2;
        index.select_nth_unstable_by(mid, |&a, &b| {
            points[a][axis]
                .total_cmp(&points[b][axis])
                .then(a.cmp(&b))
        });
        let point = index[mid];
        let (lo, rest) = index.split_at_mut(mid);
        let hi = &mut rest[1..];
        Some(Box::new(Node {
            point,
            axis,
            left: Self::build_node(points, lo, depth + 1, dim),
            right: Self::build_node(points, hi, depth + 1, dim),
        }))
    }

    /// Index and distance of the point nearest to `query`.
    pub fn nearest(&self, query: &[f64]) -> (usize, f64) {
        let mut best = (usize::MAX, f64::INFINITY);
        Self::search(self.points, self.root.as_deref(), query, &mut best);
        best
    }

    fn search(points: &[Vec<f64>], node: Option<&Node>, query: &[f64], best: &mut (usize, f64)) {
        let Some(node) = node else { return };
        let d = euclidean(&points[node.point], query);
        if d < best.1 || (d == best.1 && node.point < best.0) {
            *best = (node.point, d);
        }
        let gap = query[node.axis] - points[node.point][node.axis];
        let (near, far) = if gap < 0.0 {
            (node.left.as_deref(), node.right.as_deref())
        } else {
            (node.right.as_deref(), node.left.as_deref())
        };
        Self::search(points, near, query, best);
        if gap.abs() <= best.1 {
            Self::search(points, far, query, best);
        }
    }
}
