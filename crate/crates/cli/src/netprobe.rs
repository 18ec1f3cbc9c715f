//! Cone-probe campaigns over epsilon-net-like presets.

use ghkit::net::{annulus_cone_probe, covering_radius_in_box, empty_ball_cone_cover_check, BoxRegion, ConstantSchedule};
use ghkit::space::{euclidean, Ball, PointCloud};
use rayon::prelude::*;

use crate::config::ExperimentConfig;
use crate::report::{
    render_jsonl, write_report, CoverCheckRecord, CoveringCurvePoint, NetProbeBatch,
    NetProbeSummary, ProbeRecord, ScheduleRecord,
};
use crate::rng::SplitMix64;
use crate::CliError;

/// Instance families for the probe campaign.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Preset {
    /// Uniform grid of spacing c/2: every probe away from the boundary must
    /// hit.
    Grid,
    /// Grid with a ball of radius 2(N+c) deleted: probes aimed into the
    /// hole must miss, each miss certified by the cover check.
    PunchedGrid,
    /// Points sampled on a hyperplane slab: the covering radius grows
    /// linearly with the box half-width.
    HyperplaneSample,
}

impl Preset {
    pub fn name(&self) -> &'static str {
        match self {
            Preset::Grid => "grid",
            Preset::PunchedGrid => "punched-grid",
            Preset::HyperplaneSample => "hyperplane-sample",
        }
    }
}

/// Probe distortion bound: the campaign schedule is derived from a unit
/// distortion and the configured dimension constant.
const CAMPAIGN_C: f64 = 1.0;

fn centered_grid(half: f64, spacing: f64) -> Vec<Vec<f64>> {
    let steps = (2.0 * half / spacing).round() as i64;
    let mut points = Vec::with_capacity(((steps + 1) * (steps + 1)) as usize);
    for i in 0..=steps {
        for j in 0..=steps {
            points.push(vec![-half + i as f64 * spacing, -half + j as f64 * spacing]);
        }
    }
    points
}

pub fn run_net_probe_campaign(cfg: &ExperimentConfig, preset: Preset) -> Result<NetProbeBatch, CliError> {
    cfg.validate()?;
    if cfg.dim != 2 {
        return Err(CliError::input(format!(
            "preset {} is planar; got dim {}",
            preset.name(),
            cfg.dim
        )));
    }
    match preset {
        Preset::Grid => run_grid(cfg),
        Preset::PunchedGrid => run_punched_grid(cfg),
        Preset::HyperplaneSample => run_hyperplane(cfg),
    }
}

fn schedule_record(s: &ConstantSchedule) -> ScheduleRecord {
    ScheduleRecord {
        c: s.distortion_bound(),
        c_prime: s.dimension_constant(),
        slack_coefficient: s.slack_coefficient(),
        sphere_radius: s.sphere_radius(),
    }
}

fn finish(
    cfg: &ExperimentConfig,
    preset: Preset,
    records: Vec<ProbeRecord>,
    schedule: Option<&ConstantSchedule>,
    curve: Vec<CoveringCurvePoint>,
) -> Result<NetProbeBatch, CliError> {
    let probes = records.len();
    let hits = records.iter().filter(|r| r.hit).count();
    let summary = NetProbeSummary {
        kind: "net-probe-summary".into(),
        preset: preset.name().into(),
        seed: cfg.seed,
        probes,
        hits,
        hit_rate: if probes > 0 { Some(hits as f64 / probes as f64) } else { None },
        schedule: schedule.map(schedule_record),
        covering_curve: curve,
    };
    let batch = NetProbeBatch { records, summary };
    let body = render_jsonl(&batch.records, &batch.summary)?;
    write_report(&cfg.output_path, &body)?;
    Ok(batch)
}

fn run_grid(cfg: &ExperimentConfig) -> Result<NetProbeBatch, CliError> {
    let schedule = ConstantSchedule::derive(CAMPAIGN_C, cfg.c_prime).map_err(CliError::from_display)?;
    let spacing = schedule.distortion_bound() / 2.0;
    let reach = 2.0 * schedule.annulus_outer();
    let half = 1.25 * reach;
    let cloud = PointCloud::new(centered_grid(half, spacing)).expect("grid is non-empty");

    // Apexes must keep the whole annulus plus slack inside the window.
    let margin = half - reach;
    let eligible: Vec<usize> = (0..cloud.len())
        .filter(|&i| {
            let p = cloud.point(i);
            p[0].abs() <= margin && p[1].abs() <= margin
        })
        .collect();
    if eligible.is_empty() {
        return Err(CliError::input("no eligible apexes away from the boundary"));
    }

    let mut rng = SplitMix64::new(cfg.seed);
    let draws: Vec<(usize, [f64; 2])> = (0..cfg.instance_count)
        .map(|_| {
            let apex = eligible[rng.next_index(eligible.len())];
            (apex, rng.next_unit_vector_2d())
        })
        .collect();

    let records: Vec<ProbeRecord> = draws
        .par_iter()
        .enumerate()
        .map(|(index, &(apex, axis))| {
            let outcome = annulus_cone_probe(&cloud, apex, &axis, &schedule)
                .expect("probe inputs are valid by construction");
            ProbeRecord {
                index,
                apex: cloud.point(apex).to_vec(),
                axis: axis.to_vec(),
                hit: outcome.hit,
                witness: outcome.witness,
                cover_check: None,
            }
        })
        .collect();

    let batch = finish(cfg, Preset::Grid, records, Some(&schedule), Vec::new())?;

    // For an epsilon-net at this spacing every such probe is proven to
    // hit; a miss is a bug worth a reproducer.
    if batch.summary.hits < batch.summary.probes {
        let bad = batch.records.iter().find(|r| !r.hit).expect("miss counted");
        let stem = cfg.output_path.with_extension("");
        let base = stem.to_string_lossy();
        let cloud_path = format!("{base}.violation-{}.points.csv", bad.index);
        let record_path = format!("{base}.violation-{}.json", bad.index);
        ghkit::io::write_point_cloud_csv(&cloud, &cloud_path).map_err(CliError::from_display)?;
        std::fs::write(
            &record_path,
            serde_json::to_string_pretty(bad).map_err(CliError::from_display)?,
        )
        .map_err(CliError::from_display)?;
        return Err(CliError::TheoremViolation { reproducer: record_path.into() });
    }
    Ok(batch)
}

fn run_punched_grid(cfg: &ExperimentConfig) -> Result<NetProbeBatch, CliError> {
    let schedule = ConstantSchedule::derive(CAMPAIGN_C, cfg.c_prime).map_err(CliError::from_display)?;
    let spacing = schedule.distortion_bound() / 2.0;
    let hole_radius = 2.0 * schedule.annulus_outer();
    let half = hole_radius + 8.0 * spacing;
    let origin = vec![0.0, 0.0];
    let kept: Vec<Vec<f64>> = centered_grid(half, spacing)
        .into_iter()
        .filter(|p| euclidean(p, &origin) > hole_radius)
        .collect();
    let cloud = PointCloud::new(kept).expect("ring of points remains");

    // Apexes sit just outside the deleted sphere, aimed at its centre.
    let candidates: Vec<usize> = (0..cloud.len())
        .filter(|&i| euclidean(cloud.point(i), &origin) <= hole_radius + 2.0 * spacing)
        .collect();
    if candidates.is_empty() {
        return Err(CliError::input("no apex candidates near the hole boundary"));
    }

    let mut rng = SplitMix64::new(cfg.seed);
    let draws: Vec<usize> = (0..cfg.instance_count)
        .map(|_| candidates[rng.next_index(candidates.len())])
        .collect();

    let records: Vec<ProbeRecord> = draws
        .par_iter()
        .enumerate()
        .map(|(index, &apex_idx)| {
            let apex = cloud.point(apex_idx).to_vec();
            let r = euclidean(&apex, &origin);
            let axis = [-apex[0] / r, -apex[1] / r];
            let outcome = annulus_cone_probe(&cloud, apex_idx, &axis, &schedule)
                .expect("probe inputs are valid by construction");
            // Inflate the hole to the sphere through the apex and certify
            // that it swallows the whole cone-annulus region.
            let cover_check = if outcome.hit {
                None
            } else {
                let ball = Ball::new(origin.clone(), r).expect("radius is positive");
                let check = empty_ball_cone_cover_check(&ball, &apex, &schedule, 128)
                    .expect("apex lies on the sphere by construction");
                Some(CoverCheckRecord {
                    contained: check.contained,
                    sampled_max: check.sampled_max,
                    ball_radius: r,
                    samples_per_axis: check.samples_per_axis,
                })
            };
            ProbeRecord {
                index,
                apex,
                axis: axis.to_vec(),
                hit: outcome.hit,
                witness: outcome.witness,
                cover_check,
            }
        })
        .collect();

    finish(cfg, Preset::PunchedGrid, records, Some(&schedule), Vec::new())
}

fn run_hyperplane(cfg: &ExperimentConfig) -> Result<NetProbeBatch, CliError> {
    let mut curve = Vec::new();
    for k in 0..4 {
        let half_width = 2.0_f64.powi(k); // 1, 2, 4, 8
        let samples = 64;
        let spacing = 2.0 * half_width / samples as f64;
        let points: Vec<Vec<f64>> = (0..=samples)
            .map(|i| vec![0.0, -half_width + i as f64 * spacing])
            .collect();
        let cloud = PointCloud::new(points).expect("slab sample is non-empty");
        let region = BoxRegion::new(vec![-half_width; 2], vec![half_width; 2])
            .map_err(CliError::from_display)?;
        let radius = covering_radius_in_box(&cloud, &region, cfg.tolerances.resolution)
            .map_err(CliError::from_display)?;
        curve.push(CoveringCurvePoint { half_width, covering_radius: radius.radius });
    }
    finish(cfg, Preset::HyperplaneSample, Vec::new(), None, curve)
}
