//! The sandwich-inequality experiment: exact GH vs Euclidean-GH upper
//! estimates on random planar instance pairs.

use ghkit::euclid::{EhEstimator, MultiStart};
use ghkit::gh::{BranchAndBound, GhSolver};
use ghkit::{sandwich_check, PointCloud};
use rayon::prelude::*;

use crate::config::ExperimentConfig;
use crate::report::{render_jsonl, write_report, SandwichBatch, SandwichInstanceRecord, SandwichSummary};
use crate::rng::SplitMix64;
use crate::CliError;

/// Largest cloud size for which the branch-and-bound solver is exact within
/// its default budget.
pub const EXACT_CLOUD_CAP: usize = 8;

/// One uniform cloud in the unit box; consumes `2 * size * dim` draws.
pub fn sample_cloud(rng: &mut SplitMix64, size: usize, dim: usize) -> PointCloud {
    let points = (0..size)
        .map(|_| (0..dim).map(|_| rng.next_f64()).collect())
        .collect();
    PointCloud::new(points).expect("uniform draws are finite")
}

/// Generates the instance pair for `instance_seed`: cloud `a` first, then
/// cloud `b`, coordinates row-major from one SplitMix64 stream.
pub fn sample_instance(instance_seed: u64, size: usize, dim: usize) -> (PointCloud, PointCloud) {
    let mut rng = SplitMix64::new(instance_seed);
    let a = sample_cloud(&mut rng, size, dim);
    let b = sample_cloud(&mut rng, size, dim);
    (a, b)
}

pub fn run_sandwich_experiment(cfg: &ExperimentConfig) -> Result<SandwichBatch, CliError> {
    cfg.validate()?;
    if cfg.dim != 2 {
        return Err(CliError::input(format!(
            "sandwich experiment needs dim = 2 (certified runs use the planar machinery), got {}",
            cfg.dim
        )));
    }
    if cfg.cloud_size > EXACT_CLOUD_CAP {
        return Err(CliError::input(format!(
            "cloud_size {} exceeds the exact-solver cap {EXACT_CLOUD_CAP}; exact GH values are required per instance",
            cfg.cloud_size
        )));
    }

    let mut root = SplitMix64::new(cfg.seed);
    let instance_seeds: Vec<u64> = (0..cfg.instance_count).map(|_| root.next_u64()).collect();

    let results: Vec<Result<SandwichInstanceRecord, CliError>> = instance_seeds
        .par_iter()
        .enumerate()
        .map(|(index, &instance_seed)| {
            let (a, b) = sample_instance(instance_seed, cfg.cloud_size, cfg.dim);
            let gh = BranchAndBound::default()
                .solve(&a.induced_metric(), &b.induced_metric())
                .map_err(CliError::from_display)?;
            if !gh.exact {
                return Err(CliError::input(format!(
                    "instance {index}: branch-and-bound exhausted its budget; no exact GH value"
                )));
            }
            let eh = MultiStart {
                seed: instance_seed,
                tol_conv: cfg.tolerances.tol_conv,
                ..Default::default()
            }
            .estimate(&a, &b)
            .map_err(CliError::from_display)?;
            let report = sandwich_check(&a, &b, &gh, &eh, cfg.c_prime).map_err(CliError::from_display)?;
            Ok(SandwichInstanceRecord { index, report })
        })
        .collect();

    let mut records = Vec::with_capacity(results.len());
    for r in results {
        records.push(r?);
    }

    let left_violations = records.iter().filter(|r| !r.report.left_holds).count();
    let max_c_hat = records
        .iter()
        .filter_map(|r| r.report.c_hat)
        .fold(None, |acc: Option<f64>, c| Some(acc.map_or(c, |a| a.max(c))));

    let summary = SandwichSummary {
        kind: "sandwich-summary".into(),
        seed: cfg.seed,
        instances: records.len(),
        left_violations,
        max_c_hat,
        c_prime: cfg.c_prime,
        right_side_basis: "relative to configured c_prime".into(),
    };
    let batch = SandwichBatch { records, summary };

    let body = render_jsonl(&batch.records, &batch.summary)?;
    write_report(&cfg.output_path, &body)?;

    if left_violations > 0 {
        // The left inequality is a theorem; a violation means a bug, so dump
        // a reproducer and abort the batch.
        let bad = batch
            .records
            .iter()
            .find(|r| !r.report.left_holds)
            .expect("violation counted");
        let seed = instance_seeds[bad.index];
        let (a, b) = sample_instance(seed, cfg.cloud_size, cfg.dim);
        let stem = cfg.output_path.with_extension("");
        let base = stem.to_string_lossy();
        let x_path = format!("{base}.violation-{}.x.csv", bad.index);
        let y_path = format!("{base}.violation-{}.y.csv", bad.index);
        let record_path = format!("{base}.violation-{}.json", bad.index);
        ghkit::io::write_point_cloud_csv(&a, &x_path).map_err(CliError::from_display)?;
        ghkit::io::write_point_cloud_csv(&b, &y_path).map_err(CliError::from_display)?;
        std::fs::write(
            &record_path,
            serde_json::to_string_pretty(bad).map_err(CliError::from_display)?,
        )
        .map_err(CliError::from_display)?;
        return Err(CliError::TheoremViolation { reproducer: record_path.into() });
    }

    Ok(batch)
}
