//! Gromov-Hausdorff distances at desk scale.
//!
//! This crate computes, bounds and probes Gromov-Hausdorff distances
//! between finite metric spaces and Euclidean point clouds:
//!
//! - [`space`]: validated distance matrices, point clouds and their induced
//!   metrics.
//! - [`relation`]: relations, correspondences, distortion, composition and
//!   the strict-proximity correspondence between Hausdorff-close clouds.
//! - [`gh`]: exact GH solvers (exhaustive and branch-and-bound) plus
//!   diameter-gap lower bounds and correspondence upper bounds.
//! - [`euclid`]: Hausdorff distance, rigid motions, least-squares alignment
//!   and two upper estimators for the Euclidean GH distance.
//! - [`net`]: covering radius in a box window, probe cones, constant
//!   schedules and annulus-cone hitting probes.
//! - [`io`]: the CSV / JSON file formats shared with the command-line tool.
//!
//! Interchangeable algorithm families (GH solvers, Euclidean estimators,
//! covering-radius estimators) sit behind traits and are selectable by
//! registry name at runtime.

pub mod error;
pub mod euclid;
pub mod gh;
pub mod io;
pub mod net;
pub mod relation;
pub mod space;

pub use error::{Error, Result};
pub use euclid::{
    apply_motion, best_rigid_alignment, hausdorff_distance, sandwich_check, EhEstimator, EhResult,
    MultiStart, PlanarScan, RigidMotion, SandwichReport,
};
pub use gh::{
    diameter_gap_lower_bound, upper_bound_from_correspondence, BranchAndBound, BruteForce,
    GhResult, GhSolver,
};
pub use net::{
    annulus_cone_probe, covering_radius_in_box, empty_ball_cone_cover_check, is_epsilon_net_in_box,
    BoxRegion, ConeSpec, ConstantSchedule, CoverCheck, CoveringRadius, ProbeOutcome,
};
pub use relation::{
    compose, distortion, proximity_correspondence, restrict, Correspondence, Relation,
};
pub use space::{validate_metric, Ball, FiniteMetricSpace, MetricViolation, PointCloud};
