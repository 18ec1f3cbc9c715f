//! Relations and correspondences between finite index sets, and their
//! distortion.
//!
//! A [`Relation`] is a non-empty set of index pairs between two sides of
//! known sizes. A [`Correspondence`] is a relation whose projections onto
//! both sides are surjective: every left index and every right index occurs
//! in some pair. The distortion of a relation against two metric spaces is
//! the largest discrepancy `| d_X(x,x') - d_Y(y,y') |` over pairs of related
//! pairs; half the minimal distortion over correspondences is the
//! Gromov-Hausdorff distance, which is what the solvers in [`crate::gh`]
//! minimize.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::euclid::hausdorff_distance;
use crate::space::{euclidean, FiniteMetricSpace, PointCloud};

/// A non-empty set of index pairs between a left side of `left_size` indices
/// and a right side of `right_size` indices.
///
/// Pairs are kept sorted and deduplicated, so iteration order is
/// deterministic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Relation {
    left_size: usize,
    right_size: usize,
    pairs: Vec<(usize, usize)>,
}

impl Relation {
    pub fn new(
        left_size: usize,
        right_size: usize,
        pairs: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self> {
        if left_size == 0 || right_size == 0 {
            return Err(Error::InvalidArgument("relation sides must be non-empty".into()));
        }
        let set: BTreeSet<(usize, usize)> = pairs.into_iter().collect();
        if set.is_empty() {
            return Err(Error::EmptyRelation);
        }
        for &(i, j) in &set {
            if i >= left_size {
                return Err(Error::IndexOutOfRange { index: i, size: left_size });
            }
            if j >= right_size {
                return Err(Error::IndexOutOfRange { index: j, size: right_size });
            }
        }
        Ok(Self {
            left_size,
            right_size,
            pairs: set.into_iter().collect(),
        })
    }

    /// The identity bijection on `size` indices.
    pub fn identity(size: usize) -> Self {
        Self {
            left_size: size,
            right_size: size,
            pairs: (0..size).map(|i| (i, i)).collect(),
        }
    }

    /// The full relation `X x Y`.
    pub fn full(left_size: usize, right_size: usize) -> Self {
        let pairs = (0..left_size)
            .flat_map(|i| (0..right_size).map(move |j| (i, j)))
            .collect();
        Self { left_size, right_size, pairs }
    }

    pub fn left_size(&self) -> usize {
        self.left_size
    }

    pub fn right_size(&self) -> usize {
        self.right_size
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn contains(&self, pair: (usize, usize)) -> bool {
        self.pairs.binary_search(&pair).is_ok()
    }

    /// True iff both projections cover their full index ranges.
    pub fn is_correspondence(&self) -> bool {
        let mut left = vec![false; self.left_size];
        let mut right = vec![false; self.right_size];
        for &(i, j) in &self.pairs {
            left[i] = true;
            right[j] = true;
        }
        left.into_iter().all(|b| b) && right.into_iter().all(|b| b)
    }

    /// Swaps the two sides.
    pub fn transpose(&self) -> Self {
        let mut pairs: Vec<(usize, usize)> = self.pairs.iter().map(|&(i, j)| (j, i)).collect();
        pairs.sort_unstable();
        Self {
            left_size: self.right_size,
            right_size: self.left_size,
            pairs,
        }
    }

    /// `{ j : exists i in a with (i,j) in r }`.
    pub fn image(&self, a: &BTreeSet<usize>) -> Result<BTreeSet<usize>> {
        for &i in a {
            if i >= self.left_size {
                return Err(Error::IndexOutOfRange { index: i, size: self.left_size });
            }
        }
        Ok(self
            .pairs
            .iter()
            .filter(|(i, _)| a.contains(i))
            .map(|&(_, j)| j)
            .collect())
    }

    /// `{ i : exists j in b with (i,j) in r }`.
    pub fn preimage(&self, b: &BTreeSet<usize>) -> Result<BTreeSet<usize>> {
        for &j in b {
            if j >= self.right_size {
                return Err(Error::IndexOutOfRange { index: j, size: self.right_size });
            }
        }
        Ok(self
            .pairs
            .iter()
            .filter(|(_, j)| b.contains(j))
            .map(|&(i, _)| i)
            .collect())
    }
}

/// A relation whose projections onto both sides are surjective.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Correspondence(Relation);

impl Correspondence {
    pub fn new(relation: Relation) -> Result<Self> {
        if !relation.is_correspondence() {
            let mut left = vec![false; relation.left_size];
            let mut right = vec![false; relation.right_size];
            for &(i, j) in &relation.pairs {
                left[i] = true;
                right[j] = true;
            }
            let msg = if let Some(i) = left.iter().position(|&b| !b) {
                format!("left index {i} is not covered")
            } else {
                let j = right.iter().position(|&b| !b).unwrap();
                format!("right index {j} is not covered")
            };
            return Err(Error::NotACorrespondence(msg));
        }
        Ok(Self(relation))
    }

    pub fn identity(size: usize) -> Self {
        Self(Relation::identity(size))
    }

    pub fn full(left_size: usize, right_size: usize) -> Self {
        Self(Relation::full(left_size, right_size))
    }

    pub fn into_relation(self) -> Relation {
        self.0
    }

    pub fn as_relation(&self) -> &Relation {
        &self.0
    }

    pub fn transpose(&self) -> Self {
        Self(self.0.transpose())
    }
}

impl std::ops::Deref for Correspondence {
    type Target = Relation;
    fn deref(&self) -> &Relation {
        &self.0
    }
}

/// Largest discrepancy `| d_X(x,x') - d_Y(y,y') |` over pairs of related
/// pairs. Zero for a single-pair relation.
pub fn distortion(r: &Relation, mx: &FiniteMetricSpace, my: &FiniteMetricSpace) -> Result<f64> {
    if r.left_size() != mx.size() {
        return Err(Error::SizeMismatch {
            what: "relation left side vs first space",
            expected: r.left_size(),
            got: mx.size(),
        });
    }
    if r.right_size() != my.size() {
        return Err(Error::SizeMismatch {
            what: "relation right side vs second space",
            expected: r.right_size(),
            got: my.size(),
        });
    }
    let pairs = r.pairs();
    let mut max = 0.0_f64;
    for (a, &(x, y)) in pairs.iter().enumerate() {
        for &(x2, y2) in &pairs[a + 1..] {
            let gap = (mx.dist(x, x2) - my.dist(y, y2)).abs();
            if gap > max {
                max = gap;
            }
        }
    }
    Ok(max)
}

/// Pairs `(x,z)` connected through some shared middle index `y`. When both
/// inputs are correspondences the result is one as well.
pub fn compose(r1: &Relation, r2: &Relation) -> Result<Relation> {
    if r1.right_size() != r2.left_size() {
        return Err(Error::SizeMismatch {
            what: "composition middle side",
            expected: r1.right_size(),
            got: r2.left_size(),
        });
    }
    let mut by_middle: Vec<Vec<usize>> = vec![Vec::new(); r2.left_size()];
    for &(y, z) in r2.pairs() {
        by_middle[y].push(z);
    }
    let mut out = BTreeSet::new();
    for &(x, y) in r1.pairs() {
        for &z in &by_middle[y] {
            out.insert((x, z));
        }
    }
    if out.is_empty() {
        return Err(Error::EmptyComposition);
    }
    Ok(Relation {
        left_size: r1.left_size(),
        right_size: r2.right_size(),
        pairs: out.into_iter().collect(),
    })
}

/// All index pairs of strictly Hausdorff-close points: `{(i,j) : |a_i b_j| < c}`.
///
/// Requires `hausdorff_distance(a, b) < c`, which makes the result a
/// correspondence with distortion at most `2c`. Ties at distance exactly `c`
/// are excluded; callers wanting closed balls pass `c` plus a little slack.
pub fn proximity_correspondence(a: &PointCloud, b: &PointCloud, c: f64) -> Result<Correspondence> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch { left: a.dim(), right: b.dim() });
    }
    if !(c > 0.0) || !c.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "proximity threshold must be positive and finite, got {c}"
        )));
    }
    let dh = hausdorff_distance(a, b)?;
    if dh >= c {
        // Name an uncovered point: one whose nearest neighbour on the other
        // side is at distance >= c.
        for (i, p) in a.iter().enumerate() {
            let min = b.iter().map(|q| euclidean(p, q)).fold(f64::INFINITY, f64::min);
            if min >= c {
                return Err(Error::PreconditionViolated(format!(
                    "Hausdorff distance {dh} is not below {c}: left point {i} has no neighbour within {c}"
                )));
            }
        }
        for (j, q) in b.iter().enumerate() {
            let min = a.iter().map(|p| euclidean(p, q)).fold(f64::INFINITY, f64::min);
            if min >= c {
                return Err(Error::PreconditionViolated(format!(
                    "Hausdorff distance {dh} is not below {c}: right point {j} has no neighbour within {c}"
                )));
            }
        }
        unreachable!("hausdorff_distance >= c implies some point has no strict c-neighbour");
    }
    let mut pairs = Vec::new();
    for (i, p) in a.iter().enumerate() {
        for (j, q) in b.iter().enumerate() {
            if euclidean(p, q) < c {
                pairs.push((i, j));
            }
        }
    }
    let relation = Relation {
        left_size: a.len(),
        right_size: b.len(),
        pairs,
    };
    Correspondence::new(relation)
}

/// Restriction of a correspondence to subsets of both sides, reindexed to
/// the subspaces. Fails unless the restriction is again a correspondence on
/// the subsets.
pub fn restrict(
    r: &Correspondence,
    sub_left: &BTreeSet<usize>,
    sub_right: &BTreeSet<usize>,
) -> Result<Correspondence> {
    if sub_left.is_empty() || sub_right.is_empty() {
        return Err(Error::InvalidArgument("restriction subsets must be non-empty".into()));
    }
    for &i in sub_left {
        if i >= r.left_size() {
            return Err(Error::IndexOutOfRange { index: i, size: r.left_size() });
        }
    }
    for &j in sub_right {
        if j >= r.right_size() {
            return Err(Error::IndexOutOfRange { index: j, size: r.right_size() });
        }
    }
    let left_index: std::collections::BTreeMap<usize, usize> =
        sub_left.iter().enumerate().map(|(new, &old)| (old, new)).collect();
    let right_index: std::collections::BTreeMap<usize, usize> =
        sub_right.iter().enumerate().map(|(new, &old)| (old, new)).collect();
    let pairs: Vec<(usize, usize)> = r
        .pairs()
        .iter()
        .filter(|(i, j)| sub_left.contains(i) && sub_right.contains(j))
        .map(|&(i, j)| (left_index[&i], right_index[&j]))
        .collect();
    if pairs.is_empty() {
        return Err(Error::NotACorrespondence(
            "restriction is empty on the given subsets".into(),
        ));
    }
    let relation = Relation {
        left_size: sub_left.len(),
        right_size: sub_right.len(),
        pairs,
    };
    Correspondence::new(relation)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn space(rows: Vec<Vec<f64>>) -> FiniteMetricSpace {
        FiniteMetricSpace::new(rows, 1e-12).unwrap()
    }

    fn two_point(d: f64) -> FiniteMetricSpace {
        space(vec![vec![0.0, d], vec![d, 0.0]])
    }

    fn set(v: &[usize]) -> BTreeSet<usize> {
        v.iter().copied().collect()
    }

    #[test]
    fn bijection_is_correspondence() {
        let r = Relation::new(2, 2, [(0, 0), (1, 1)]).unwrap();
        assert!(r.is_correspondence());
    }

    #[test]
    fn uncovered_left_index_is_not_correspondence() {
        let r = Relation::new(2, 2, [(0, 0), (0, 1)]).unwrap();
        assert!(!r.is_correspondence());
        let err = Correspondence::new(r).unwrap_err();
        assert!(err.to_string().contains("left index 1"));
    }

    #[test]
    fn singleton_covering_all_is_correspondence() {
        let r = Relation::new(1, 3, [(0, 0), (0, 1), (0, 2)]).unwrap();
        assert!(r.is_correspondence());
    }

    #[test]
    fn identity_distortion_is_zero() {
        let m = space(vec![
            vec![0.0, 1.0, 2.0],
            vec![1.0, 0.0, 1.5],
            vec![2.0, 1.5, 0.0],
        ]);
        let id = Relation::identity(3);
        assert_eq!(distortion(&id, &m, &m).unwrap(), 0.0);
    }

    #[test]
    fn bijection_between_two_point_spaces() {
        // Single quadruple: |2 - 1| = 1.
        let r = Relation::new(2, 2, [(0, 0), (1, 1)]).unwrap();
        assert_eq!(distortion(&r, &two_point(2.0), &two_point(1.0)).unwrap(), 1.0);
    }

    #[test]
    fn full_relation_distortion_is_max_diameter() {
        // Enumerating all quadruples of the full relation gives
        // max(diam X, diam Y): some pair maps (x,x') to (y,y) with
        // |d(x,x') - 0| = diam X, and symmetrically.
        let mx = two_point(2.0);
        let my = two_point(1.0);
        let full = Relation::full(2, 2);
        let expected = mx.diameter().max(my.diameter());
        assert_eq!(distortion(&full, &mx, &my).unwrap(), expected);
        assert_eq!(expected, 2.0);
    }

    #[test]
    fn distortion_rejects_size_mismatch() {
        let r = Relation::identity(2);
        let m3 = space(vec![
            vec![0.0, 1.0, 1.0],
            vec![1.0, 0.0, 1.0],
            vec![1.0, 1.0, 0.0],
        ]);
        assert!(distortion(&r, &m3, &two_point(1.0)).is_err());
    }

    #[test]
    fn composition_of_identities() {
        let id = Relation::identity(3);
        assert_eq!(compose(&id, &id).unwrap(), id);
    }

    #[test]
    fn composition_of_bijections_composes_the_maps() {
        // p: 0->1, 1->0 then q: 0->0, 1->1 gives q(p(x)).
        let p = Relation::new(2, 2, [(0, 1), (1, 0)]).unwrap();
        let q = Relation::identity(2);
        let composed = compose(&p, &q).unwrap();
        assert_eq!(composed.pairs(), &[(0, 1), (1, 0)]);
    }

    #[test]
    fn composition_enumerates_middle_witnesses() {
        let r1 = Relation::new(2, 1, [(0, 0), (1, 0)]).unwrap();
        let r2 = Relation::new(1, 2, [(0, 0), (0, 1)]).unwrap();
        let composed = compose(&r1, &r2).unwrap();
        assert_eq!(composed.pairs(), &[(0, 0), (0, 1), (1, 0), (1, 1)]);
    }

    #[test]
    fn composition_errors() {
        let r1 = Relation::new(2, 2, [(0, 1)]).unwrap();
        let r2 = Relation::new(3, 2, [(0, 0)]).unwrap();
        assert!(matches!(
            compose(&r1, &r2),
            Err(Error::SizeMismatch { .. })
        ));
        // No middle witness: r1 only uses y=1, r2 only y=0.
        let r2 = Relation::new(2, 2, [(0, 0)]).unwrap();
        assert!(matches!(compose(&r1, &r2), Err(Error::EmptyComposition)));
    }

    #[test]
    fn image_and_preimage() {
        let id = Relation::identity(2);
        assert_eq!(id.image(&set(&[0])).unwrap(), set(&[0]));

        let r = Relation::new(1, 2, [(0, 0), (0, 1)]).unwrap();
        assert_eq!(r.image(&set(&[0])).unwrap(), set(&[0, 1]));

        let r = Relation::new(2, 1, [(0, 0), (1, 0)]).unwrap();
        assert_eq!(r.preimage(&set(&[0])).unwrap(), set(&[0, 1]));

        assert!(r.image(&set(&[5])).is_err());
        assert!(r.preimage(&set(&[1])).is_err());
    }

    #[test]
    fn proximity_on_equal_clouds_contains_diagonal() {
        let a = PointCloud::new(vec![vec![0.0, 0.0], vec![1.0, 0.5]]).unwrap();
        let u = proximity_correspondence(&a, &a, 0.1).unwrap();
        assert!(u.contains((0, 0)) && u.contains((1, 1)));
        assert!(u.is_correspondence());
    }

    #[test]
    fn proximity_single_pair() {
        let a = PointCloud::new(vec![vec![0.0]]).unwrap();
        let b = PointCloud::new(vec![vec![0.5]]).unwrap();
        let u = proximity_correspondence(&a, &b, 1.0).unwrap();
        assert_eq!(u.pairs(), &[(0, 0)]);
        let ma = a.induced_metric();
        let mb = b.induced_metric();
        assert_eq!(distortion(&u, &ma, &mb).unwrap(), 0.0);
    }

    #[test]
    fn proximity_two_segments() {
        let a = PointCloud::new(vec![vec![0.0], vec![1.0]]).unwrap();
        let b = PointCloud::new(vec![vec![0.2], vec![0.8]]).unwrap();
        let u = proximity_correspondence(&a, &b, 0.3).unwrap();
        assert_eq!(u.pairs(), &[(0, 0), (1, 1)]);
        let d = distortion(&u, &a.induced_metric(), &b.induced_metric()).unwrap();
        assert!((d - 0.4).abs() < 1e-15);
        assert!(d <= 2.0 * 0.3);
    }

    #[test]
    fn proximity_rejects_far_clouds_naming_a_point() {
        let a = PointCloud::new(vec![vec![0.0], vec![10.0]]).unwrap();
        let b = PointCloud::new(vec![vec![0.0]]).unwrap();
        let err = proximity_correspondence(&a, &b, 1.0).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("left point 1"), "{msg}");
    }

    #[test]
    fn restrict_identity_to_prefix() {
        let id = Correspondence::identity(3);
        let r = restrict(&id, &set(&[0, 1]), &set(&[0, 1])).unwrap();
        assert_eq!(r.pairs(), Correspondence::identity(2).pairs());
    }

    #[test]
    fn restrict_full_stays_full() {
        let full = Correspondence::full(3, 3);
        let r = restrict(&full, &set(&[0, 2]), &set(&[1])).unwrap();
        assert_eq!(r.pairs(), Correspondence::full(2, 1).pairs());
    }

    #[test]
    fn restrict_reindexes_to_subspaces() {
        let c = Correspondence::new(Relation::new(2, 2, [(0, 0), (1, 0), (1, 1)]).unwrap()).unwrap();
        let r = restrict(&c, &set(&[1]), &set(&[0, 1])).unwrap();
        assert_eq!(r.pairs(), &[(0, 0), (0, 1)]);
    }

    #[test]
    fn restrict_rejects_non_surjective_restriction() {
        let c = Correspondence::new(Relation::new(2, 2, [(0, 0), (1, 1)]).unwrap()).unwrap();
        // Keeping left {0} but right {0,1} leaves right index 1 uncovered.
        assert!(matches!(
            restrict(&c, &set(&[0]), &set(&[0, 1])),
            Err(Error::NotACorrespondence(_))
        ));
    }
}
