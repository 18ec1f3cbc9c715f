//! Covering radius of a point set relative to a box window: the largest
//! empty-ball radius `max_{x in box} min_i |x - a_i|`.

use crate::error::{Error, Result};
use crate::euclid::KdTree;
use crate::space::PointCloud;

use super::BoxRegion;

/// How a covering radius was obtained.
#[derive(Debug, Clone, PartialEq)]
pub enum CoveringMethod {
    /// Exact planar candidate enumeration.
    PlanarExact,
    /// Grid seeding plus local ascent; carries the seeding resolution.
    GridAscent { resolution: f64 },
}

/// Covering radius with the centre witnessing it.
#[derive(Debug, Clone, PartialEq)]
pub struct CoveringRadius {
    pub radius: f64,
    pub witness: Vec<f64>,
    pub method: CoveringMethod,
}

/// A strategy computing the covering radius of a cloud within a box.
pub trait CoveringRadiusEstimator {
    /// Registry name of this estimator.
    fn name(&self) -> &'static str;
    fn covering_radius(&self, cloud: &PointCloud, region: &BoxRegion) -> Result<CoveringRadius>;
}

/// Exact planar algorithm.
///
/// The maximum of the nearest-site distance over a closed box is attained at
/// a point equidistant from three sites (a circumcenter, superset of the
/// Voronoi vertices), on a box edge where two sites tie (bisector-edge
/// intersection), or at a box corner. All three candidate families are
/// enumerated outright; the triple loop makes this cubic in the number of
/// points, which is fine at desk scale.
#[derive(Debug, Clone, Default)]
pub struct PlanarExact;

impl CoveringRadiusEstimator for PlanarExact {
    fn name(&self) -> &'static str {
        "planar-exact"
    }

    fn covering_radius(&self, cloud: &PointCloud, region: &BoxRegion) -> Result<CoveringRadius> {
        check_inputs(cloud, region)?;
        if cloud.dim() != 2 {
            return Err(Error::UnsupportedDimension {
                dim: cloud.dim(),
                context: "exact covering radius is planar only",
            });
        }
        let tree = KdTree::build(cloud.points());
        let mut best: Option<(f64, Vec<f64>)> = None;
        let offer = |p: Vec<f64>, best: &mut Option<(f64, Vec<f64>)>| {
            let d = tree.nearest(&p).1;
            if best.as_ref().map_or(true, |(b, _)| d > *b) {
                *best = Some((d, p));
            }
        };

        for corner in region.corners() {
            offer(corner, &mut best);
        }

        let pts = cloud.points();
        for i in 0..pts.len() {
            for j in (i + 1)..pts.len() {
                for candidate in bisector_edge_intersections(&pts[i], &pts[j], region) {
                    offer(candidate, &mut best);
                }
                for k in (j + 1)..pts.len() {
                    if let Some(center) = circumcenter(&pts[i], &pts[j], &pts[k]) {
                        if region.contains(&center) {
                            offer(center, &mut best);
                        }
                    }
                }
            }
        }

        let (radius, witness) = best.expect("corners always provide candidates");
        Ok(CoveringRadius { radius, witness, method: CoveringMethod::PlanarExact })
    }
}

/// Any-dimension approximation: evaluate the nearest-site distance on a grid
/// at the given resolution, then climb from the best seeds with a compass
/// search. The result is labelled with the seeding resolution.
#[derive(Debug, Clone)]
pub struct GridAscent {
    pub resolution: f64,
    pub seeds: usize,
}

impl GridAscent {
    pub fn new(resolution: f64) -> Self {
        Self { resolution, seeds: 4 }
    }
}

impl CoveringRadiusEstimator for GridAscent {
    fn name(&self) -> &'static str {
        "grid-ascent"
    }

    fn covering_radius(&self, cloud: &PointCloud, region: &BoxRegion) -> Result<CoveringRadius> {
        check_inputs(cloud, region)?;
        if !(self.resolution > 0.0) || !self.resolution.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "resolution must be positive, got {}",
                self.resolution
            )));
        }
        let dim = region.dim();
        let steps: Vec<usize> = (0..dim)
            .map(|i| {
                let extent = region.high()[i] - region.low()[i];
                ((extent / self.resolution).ceil() as usize).max(1) + 1
            })
            .collect();
        let total: usize = steps.iter().product();
        if total > 5_000_000 {
            return Err(Error::InvalidArgument(format!(
                "grid of {total} nodes is too fine; coarsen the resolution"
            )));
        }

        let tree = KdTree::build(cloud.points());
        let eval = |p: &[f64]| tree.nearest(p).1;

        // Best few grid seeds.
        let mut seeds: Vec<(f64, Vec<f64>)> = Vec::new();
        let mut index = vec![0_usize; dim];
        loop {
            let p: Vec<f64> = (0..dim)
                .map(|i| {
                    let extent = region.high()[i] - region.low()[i];
                    region.low()[i] + extent * index[i] as f64 / (steps[i] - 1).max(1) as f64
                })
                .collect();
            let d = eval(&p);
            if seeds.len() < self.seeds {
                seeds.push((d, p));
                seeds.sort_by(|a, b| b.0.total_cmp(&a.0));
            } else if d > seeds.last().unwrap().0 {
                seeds.pop();
                seeds.push((d, p));
                seeds.sort_by(|a, b| b.0.total_cmp(&a.0));
            }
            // Odometer increment.
            let mut carry = true;
            for i in 0..dim {
                if carry {
                    index[i] += 1;
                    if index[i] == steps[i] {
                        index[i] = 0;
                    } else {
                        carry = false;
                    }
                }
            }
            if carry {
                break;
            }
        }

        let mut best = seeds[0].clone();
        for (value, seed) in seeds {
            let (v, p) = compass_ascent(seed, value, region, &eval, self.resolution);
            if v > best.0 {
                best = (v, p);
            }
        }
        Ok(CoveringRadius {
            radius: best.0,
            witness: best.1,
            method: CoveringMethod::GridAscent { resolution: self.resolution },
        })
    }
}

/// Derivative-free local ascent of the (piecewise-smooth) nearest-site
/// distance, clamped to the box.
fn compass_ascent(
    mut point: Vec<f64>,
    mut value: f64,
    region: &BoxRegion,
    eval: &impl Fn(&[f64]) -> f64,
    resolution: f64,
) -> (f64, Vec<f64>) {
    let dim = region.dim();
    let mut step = resolution;
    let floor = resolution * 1e-9;
    while step > floor {
        let mut moved = false;
        for i in 0..dim {
            for sign in [1.0, -1.0] {
                let mut p = point.clone();
                p[i] = (p[i] + sign * step).clamp(region.low()[i], region.high()[i]);
                let v = eval(&p);
                if v > value {
                    point = p;
                    value = v;
                    moved = true;
                }
            }
        }
        if !moved {
            step /= 2.0;
        }
    }
    (value, point)
}

/// Dimension-dispatching entry point: exact in the plane, grid ascent
/// elsewhere.
pub fn covering_radius_in_box(
    cloud: &PointCloud,
    region: &BoxRegion,
    resolution: f64,
) -> Result<CoveringRadius> {
    if cloud.dim() == 2 {
        PlanarExact.covering_radius(cloud, region)
    } else {
        GridAscent::new(resolution).covering_radius(cloud, region)
    }
}

/// True iff the covering radius within the box is at most `eps`.
pub fn is_epsilon_net_in_box(
    cloud: &PointCloud,
    region: &BoxRegion,
    eps: f64,
    resolution: f64,
) -> Result<bool> {
    if !(eps > 0.0) || !eps.is_finite() {
        return Err(Error::InvalidArgument(format!("eps must be positive, got {eps}")));
    }
    Ok(covering_radius_in_box(cloud, region, resolution)?.radius <= eps)
}

/// Looks an estimator up by registry name.
pub fn estimator_by_name(name: &str, resolution: f64) -> Option<Box<dyn CoveringRadiusEstimator>> {
    match name {
        "planar-exact" => Some(Box::new(PlanarExact)),
        "grid-ascent" => Some(Box::new(GridAscent::new(resolution))),
        _ => None,
    }
}

/// Names accepted by [`estimator_by_name`].
pub const ESTIMATOR_NAMES: &[&str] = &["planar-exact", "grid-ascent"];

fn check_inputs(cloud: &PointCloud, region: &BoxRegion) -> Result<()> {
    if cloud.dim() != region.dim() {
        return Err(Error::DimensionMismatch { left: cloud.dim(), right: region.dim() });
    }
    Ok(())
}

/// Circumcenter of a non-degenerate triangle, `None` when collinear.
fn circumcenter(a: &[f64], b: &[f64], c: &[f64]) -> Option<Vec<f64>> {
    let (ax, ay) = (a[0], a[1]);
    let (bx, by) = (b[0], b[1]);
    let (cx, cy) = (c[0], c[1]);
    let d = 2.0 * ((bx - ax) * (cy - ay) - (by - ay) * (cx - ax));
    if d == 0.0 {
        return None;
    }
    let a2 = ax * ax + ay * ay;
    let b2 = bx * bx + by * by;
    let c2 = cx * cx + cy * cy;
    let ux = (a2 * (by - cy) + b2 * (cy - ay) + c2 * (ay - by)) / d;
    let uy = (a2 * (cx - bx) + b2 * (ax - cx) + c2 * (bx - ax)) / d;
    if !ux.is_finite() || !uy.is_finite() {
        return None;
    }
    Some(vec![ux, uy])
}

/// Intersections of the perpendicular bisector of `p`, `q` with the four box
/// edges.
fn bisector_edge_intersections(p: &[f64], q: &[f64], region: &BoxRegion) -> Vec<Vec<f64>> {
    // Bisector: 2 (q - p) . x = |q|^2 - |p|^2.
    let dx = q[0] - p[0];
    let dy = q[1] - p[1];
    if dx == 0.0 && dy == 0.0 {
        return Vec::new(); // duplicate coordinates, no bisector
    }
    let rhs = (q[0] * q[0] + q[1] * q[1] - p[0] * p[0] - p[1] * p[1]) / 2.0;
    let (lo, hi) = (region.low(), region.high());
    let mut out = Vec::new();
    // Horizontal edges: y fixed, solve for x.
    if dx != 0.0 {
        for y in [lo[1], hi[1]] {
            let x = (rhs - dy * y) / dx;
            if x >= lo[0] && x <= hi[0] {
                out.push(vec![x, y]);
            }
        }
    }
    // Vertical edges: x fixed, solve for y.
    if dy != 0.0 {
        for x in [lo[0], hi[0]] {
            let y = (rhs - dx * x) / dy;
            if y >= lo[1] && y <= hi[1] {
                out.push(vec![x, y]);
            }
        }
    }
    out
}
