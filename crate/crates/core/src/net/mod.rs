//! Covering-radius and cone-probe machinery for point sets in a bounded
//! window.
//!
//! The covering radius here is always relative to a user-supplied box: over
//! all of `R^n` the largest empty ball around any bounded point set is
//! unbounded, so a finite window is the only faithful surrogate. The cone
//! probes ask whether a point set meets the intersection of a circular cone
//! with the annulus `N - c <= |x - apex| <= N + c` derived from a
//! [`ConstantSchedule`]; for epsilon-net-like inputs they hit for every axis
//! once the apex is far enough from the window boundary.

mod covering;

pub use covering::{
    covering_radius_in_box, estimator_by_name, is_epsilon_net_in_box, CoveringMethod,
    CoveringRadius, CoveringRadiusEstimator, GridAscent, PlanarExact, ESTIMATOR_NAMES,
};

use crate::error::{Error, Result};
use crate::space::{euclidean, Ball, PointCloud};

/// Unit-norm tolerance for cone axes.
pub const TOL_AXIS: f64 = 1e-12;

/// Half-angle of the probe cone: the cone spanned by a ball of radius `N/2`
/// centred at distance `N` subtends `arcsin(1/2)`.
pub fn probe_half_angle() -> f64 {
    0.5_f64.asin()
}

/// An axis-aligned box window `[low, high]` in `R^n`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoxRegion {
    low: Vec<f64>,
    high: Vec<f64>,
}

impl BoxRegion {
    pub fn new(low: Vec<f64>, high: Vec<f64>) -> Result<Self> {
        if low.is_empty() || low.len() != high.len() {
            return Err(Error::InvalidArgument(
                "box needs matching non-empty corner vectors".into(),
            ));
        }
        for (i, (&lo, &hi)) in low.iter().zip(&high).enumerate() {
            if !lo.is_finite() || !hi.is_finite() {
                return Err(Error::InvalidArgument(format!(
                    "box corners must be finite (coordinate {i})"
                )));
            }
            if lo >= hi {
                return Err(Error::InvalidArgument(format!(
                    "box is empty in coordinate {i}: {lo} >= {hi}"
                )));
            }
        }
        Ok(Self { low, high })
    }

    /// Centered cube of the given side length.
    pub fn centered_cube(dim: usize, side: f64) -> Result<Self> {
        Self::new(vec![-side / 2.0; dim], vec![side / 2.0; dim])
    }

    pub fn dim(&self) -> usize {
        self.low.len()
    }

    pub fn low(&self) -> &[f64] {
        &self.low
    }

    pub fn high(&self) -> &[f64] {
        &self.high
    }

    pub fn contains(&self, p: &[f64]) -> bool {
        p.len() == self.dim()
            && p.iter()
                .zip(self.low.iter().zip(&self.high))
                .all(|(&x, (&lo, &hi))| lo <= x && x <= hi)
    }

    pub fn clamp(&self, p: &[f64]) -> Vec<f64> {
        p.iter()
            .zip(self.low.iter().zip(&self.high))
            .map(|(&x, (&lo, &hi))| x.clamp(lo, hi))
            .collect()
    }

    /// All `2^dim` corner points.
    pub fn corners(&self) -> Vec<Vec<f64>> {
        let dim = self.dim();
        (0..(1_usize << dim))
            .map(|mask| {
                (0..dim)
                    .map(|i| if mask & (1 << i) != 0 { self.high[i] } else { self.low[i] })
                    .collect()
            })
            .collect()
    }

    /// Distance from `p` to the nearest boundary face (negative outside).
    pub fn boundary_gap(&self, p: &[f64]) -> f64 {
        p.iter()
            .zip(self.low.iter().zip(&self.high))
            .map(|(&x, (&lo, &hi))| (x - lo).min(hi - x))
            .fold(f64::INFINITY, f64::min)
    }
}

/// A circular cone: apex, unit axis, half-angle in `(0, pi/2)`.
///
/// The apex itself belongs to the cone (the zero-scaling term of the union
/// defining it).
#[derive(Debug, Clone, PartialEq)]
pub struct ConeSpec {
    apex: Vec<f64>,
    axis: Vec<f64>,
    half_angle: f64,
}

impl ConeSpec {
    pub fn new(apex: Vec<f64>, axis: Vec<f64>, half_angle: f64) -> Result<Self> {
        if apex.len() != axis.len() || apex.is_empty() {
            return Err(Error::DimensionMismatch { left: apex.len(), right: axis.len() });
        }
        if apex.iter().chain(&axis).any(|c| !c.is_finite()) {
            return Err(Error::InvalidArgument("cone apex and axis must be finite".into()));
        }
        let norm = axis.iter().map(|c| c * c).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > TOL_AXIS {
            return Err(Error::InvalidArgument(format!(
                "cone axis must be a unit vector; |axis| = {norm}"
            )));
        }
        if !(half_angle > 0.0 && half_angle < std::f64::consts::FRAC_PI_2) {
            return Err(Error::InvalidArgument(format!(
                "half angle must lie in (0, pi/2), got {half_angle}"
            )));
        }
        Ok(Self { apex, axis, half_angle })
    }

    /// The probe cone with the fixed half-angle `arcsin(1/2)`.
    pub fn probe(apex: Vec<f64>, axis: Vec<f64>) -> Result<Self> {
        Self::new(apex, axis, probe_half_angle())
    }

    pub fn apex(&self) -> &[f64] {
        &self.apex
    }

    pub fn axis(&self) -> &[f64] {
        &self.axis
    }

    pub fn half_angle(&self) -> f64 {
        self.half_angle
    }

    /// True iff `x` is the apex or the angle between `x - apex` and the axis
    /// is at most the half-angle.
    pub fn contains(&self, x: &[f64]) -> Result<bool> {
        if x.len() != self.apex.len() {
            return Err(Error::DimensionMismatch { left: x.len(), right: self.apex.len() });
        }
        let delta: Vec<f64> = x.iter().zip(&self.apex).map(|(a, b)| a - b).collect();
        let norm = delta.iter().map(|c| c * c).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Ok(true);
        }
        let dot: f64 = delta.iter().zip(&self.axis).map(|(a, b)| a * b).sum();
        Ok(dot >= norm * self.half_angle.cos())
    }
}

/// The scaled constants driving a probe: given a distortion bound `c` and
/// the dimension constant `c'`, the slack coefficient is `T = sqrt(3c) c'`
/// and the sphere radius is the smallest positive integer `N` with
/// `3 T sqrt(N) < N/2`, `c < N` and `c < T sqrt(N)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConstantSchedule {
    distortion_bound: f64,
    dimension_constant: f64,
    slack_coefficient: f64,
    sphere_radius: u64,
}

impl ConstantSchedule {
    /// Derives the schedule from `c` and `c'`.
    ///
    /// The three strict inequalities are decided in squared form
    /// (`108 c c'^2 < N`, `c < N`, `c^2 < 3 c c'^2 N`), which is exact where
    /// the literal floating evaluation can land on either side of a tie; the
    /// returned schedule always satisfies the floating form as well.
    pub fn derive(c: f64, c_prime: f64) -> Result<Self> {
        if !(c > 0.0) || !c.is_finite() {
            return Err(Error::InvalidArgument(format!("c must be positive and finite, got {c}")));
        }
        if !(c_prime > 0.0) || !c_prime.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "c' must be positive and finite, got {c_prime}"
            )));
        }
        let slack = (3.0 * c).sqrt() * c_prime;
        let holds = |n: f64| 108.0 * c * c_prime * c_prime < n && c < n && c * c < 3.0 * c * c_prime * c_prime * n;
        let mut n = (108.0 * c * c_prime * c_prime).max(c).floor().max(0.0) as u64;
        if n == 0 {
            n = 1;
        }
        while !holds(n as f64) {
            n += 1;
        }
        let schedule = Self {
            distortion_bound: c,
            dimension_constant: c_prime,
            slack_coefficient: slack,
            sphere_radius: n,
        };
        assert!(schedule.invariants_hold(), "derived schedule must satisfy its inequalities");
        Ok(schedule)
    }

    /// `c`.
    pub fn distortion_bound(&self) -> f64 {
        self.distortion_bound
    }

    /// `c'`.
    pub fn dimension_constant(&self) -> f64 {
        self.dimension_constant
    }

    /// `T = sqrt(3c) c'`.
    pub fn slack_coefficient(&self) -> f64 {
        self.slack_coefficient
    }

    /// `N`.
    pub fn sphere_radius(&self) -> u64 {
        self.sphere_radius
    }

    /// `T sqrt(N)`, the Hausdorff slack of the aligned probe.
    pub fn alignment_slack(&self) -> f64 {
        self.slack_coefficient * (self.sphere_radius as f64).sqrt()
    }

    pub fn annulus_inner(&self) -> f64 {
        self.sphere_radius as f64 - self.distortion_bound
    }

    pub fn annulus_outer(&self) -> f64 {
        self.sphere_radius as f64 + self.distortion_bound
    }

    /// The defining equation of `T` and the three strict inequalities, in
    /// their literal floating form.
    pub fn invariants_hold(&self) -> bool {
        let n = self.sphere_radius as f64;
        let slack = self.alignment_slack();
        self.slack_coefficient == (3.0 * self.distortion_bound).sqrt() * self.dimension_constant
            && 3.0 * slack < n / 2.0
            && self.distortion_bound < n
            && self.distortion_bound < slack
    }
}

/// Outcome of one annulus-cone probe.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbeOutcome {
    pub hit: bool,
    /// Smallest cloud index inside the cone-annulus region, if any.
    pub witness: Option<usize>,
}

/// Scans the cloud for a point inside the probe cone at `cloud[base_index]`
/// that also lies in the closed annulus `N - c <= |x - apex| <= N + c`.
///
/// Both annulus bounds are closed: a point at distance exactly `N - c`
/// counts as inside, consistent with reading the region as
/// `|dist - N| <= c`.
pub fn annulus_cone_probe(
    cloud: &PointCloud,
    base_index: usize,
    axis: &[f64],
    schedule: &ConstantSchedule,
) -> Result<ProbeOutcome> {
    if base_index >= cloud.len() {
        return Err(Error::IndexOutOfRange { index: base_index, size: cloud.len() });
    }
    let apex = cloud.point(base_index).to_vec();
    let cone = ConeSpec::probe(apex.clone(), axis.to_vec())?;
    let inner = schedule.annulus_inner();
    let outer = schedule.annulus_outer();
    for (i, p) in cloud.iter().enumerate() {
        let d = euclidean(&apex, p);
        if d < inner || d > outer {
            continue;
        }
        if cone.contains(p)? {
            return Ok(ProbeOutcome { hit: true, witness: Some(i) });
        }
    }
    Ok(ProbeOutcome { hit: false, witness: None })
}

/// Verdict of a cone-annulus-in-ball containment check.
#[derive(Debug, Clone, PartialEq)]
pub struct CoverCheck {
    pub contained: bool,
    /// Largest sampled distance from the region to the ball centre.
    pub sampled_max: f64,
    /// Samples per axis of the (radius, angle) grid.
    pub samples_per_axis: usize,
}

/// Decides whether the cone-annulus region rooted at a point of the sphere
/// (axis through the centre) is contained in the ball, by maximizing the
/// distance to the centre over a dense (radius, angle) grid with local
/// refinement.
pub fn empty_ball_cone_cover_check(
    ball: &Ball,
    apex_on_sphere: &[f64],
    schedule: &ConstantSchedule,
    samples_per_axis: usize,
) -> Result<CoverCheck> {
    if apex_on_sphere.len() != ball.dim() {
        return Err(Error::DimensionMismatch { left: apex_on_sphere.len(), right: ball.dim() });
    }
    if samples_per_axis < 2 {
        return Err(Error::InvalidArgument("need at least 2 samples per axis".into()));
    }
    let apex_gap = (euclidean(apex_on_sphere, ball.center()) - ball.radius()).abs();
    if apex_gap > 1e-9 {
        return Err(Error::PreconditionViolated(format!(
            "apex must lie on the sphere of the ball; offset {apex_gap:e}"
        )));
    }
    let dim = ball.dim();
    let to_center: Vec<f64> = ball
        .center()
        .iter()
        .zip(apex_on_sphere)
        .map(|(c, a)| c - a)
        .collect();
    let dist = euclidean(apex_on_sphere, ball.center());
    if dist == 0.0 {
        return Err(Error::PreconditionViolated(
            "degenerate ball: apex coincides with the centre".into(),
        ));
    }
    let axis: Vec<f64> = to_center.iter().map(|c| c / dist).collect();
    let ortho = perpendicular_unit(&axis);

    let half_angle = probe_half_angle();
    let inner = schedule.annulus_inner();
    let outer = schedule.annulus_outer();
    let eval = |rho: f64, phi: f64| -> f64 {
        let (s, c) = phi.sin_cos();
        let p: Vec<f64> = (0..dim)
            .map(|k| {
                let dir = c * axis[k] + s * ortho.as_ref().map_or(0.0, |o| o[k]);
                apex_on_sphere[k] + rho * dir
            })
            .collect();
        euclidean(&p, ball.center())
    };

    let steps = samples_per_axis;
    let max_phi = if ortho.is_some() { half_angle } else { 0.0 };
    let mut best = (inner, 0.0, eval(inner, 0.0));
    for i in 0..steps {
        let rho = inner + (outer - inner) * i as f64 / (steps - 1) as f64;
        for j in 0..steps {
            let phi = max_phi * j as f64 / (steps - 1) as f64;
            let v = eval(rho, phi);
            if v > best.2 {
                best = (rho, phi, v);
            }
        }
    }
    // Local compass refinement on the (rho, phi) rectangle.
    let mut step_rho = (outer - inner).max(f64::MIN_POSITIVE) / (steps - 1) as f64;
    let mut step_phi = (max_phi / (steps - 1) as f64).max(1e-12);
    let (mut rho, mut phi, mut value) = best;
    for _ in 0..200 {
        let mut moved = false;
        for (dr, dp) in [(step_rho, 0.0), (-step_rho, 0.0), (0.0, step_phi), (0.0, -step_phi)] {
            let r2 = (rho + dr).clamp(inner, outer);
            let p2 = (phi + dp).clamp(0.0, max_phi);
            let v2 = eval(r2, p2);
            if v2 > value {
                rho = r2;
                phi = p2;
                value = v2;
                moved = true;
            }
        }
        if !moved {
            step_rho /= 2.0;
            step_phi /= 2.0;
            if step_rho < 1e-12 && step_phi < 1e-14 {
                break;
            }
        }
    }
    Ok(CoverCheck {
        contained: value <= ball.radius(),
        sampled_max: value,
        samples_per_axis: steps,
    })
}

/// A unit vector orthogonal to `axis`, or `None` in dimension one.
fn perpendicular_unit(axis: &[f64]) -> Option<Vec<f64>> {
    let dim = axis.len();
    if dim < 2 {
        return None;
    }
    // Start from the basis vector least aligned with the axis.
    let k = axis
        .iter()
        .enumerate()
        .min_by(|(_, a), (_, b)| a.abs().total_cmp(&b.abs()))
        .map(|(k, _)| k)
        .unwrap();
    let mut v = vec![0.0; dim];
    v[k] = 1.0;
    let dot: f64 = v.iter().zip(axis).map(|(a, b)| a * b).sum();
    for (vi, ai) in v.iter_mut().zip(axis) {
        *vi -= dot * ai;
    }
    let norm = v.iter().map(|c| c * c).sum::<f64>().sqrt();
    v.iter_mut().for_each(|c| *c /= norm);
    Some(v)
}
