use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use ghkit::euclid::{EhEstimator, MultiStart, PlanarScan};
use ghkit::net::{annulus_cone_probe, BoxRegion, ConstantSchedule};
use ghkit_cli::config::{ExperimentConfig, Tolerances};
use ghkit_cli::ingest::{ingest_cloud, ingest_space};
use ghkit_cli::netprobe::{run_net_probe_campaign, Preset};
use ghkit_cli::sandwich::run_sandwich_experiment;
use ghkit_cli::CliError;
use serde_json::json;

#[derive(Parser)]
#[command(name = "ghkit", version, about = "Gromov-Hausdorff distances, Euclidean alignment and covering-radius probes at desk scale")]
struct Cli {
    /// Seed for every randomized component.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Also write the JSON output to this path (experiment reports go only
    /// here).
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Worker threads for batch runs; 0 keeps the rayon default.
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Gromov-Hausdorff distance between two spaces (exact at small sizes).
    Gh {
        /// Distance-matrix JSON or point-cloud CSV (induced metric).
        #[arg(long)]
        x: PathBuf,
        #[arg(long)]
        y: PathBuf,
        /// Solver registry name.
        #[arg(long, default_value = "bnb")]
        mode: String,
        /// Node budget for the branch-and-bound solver.
        #[arg(long)]
        budget: Option<u64>,
    },
    /// Upper estimate of the Euclidean Gromov-Hausdorff distance.
    Eh {
        #[arg(long)]
        x: PathBuf,
        #[arg(long)]
        y: PathBuf,
        /// Use the exhaustive planar scan instead of the multistart
        /// refinement.
        #[arg(long)]
        oracle: bool,
        #[arg(long, default_value_t = 64)]
        restarts: usize,
        #[arg(long, default_value_t = 3600)]
        angle_steps: usize,
    },
    /// Hausdorff distance between two point clouds.
    Hausdorff {
        #[arg(long)]
        x: PathBuf,
        #[arg(long)]
        y: PathBuf,
    },
    /// Covering radius of a point set within a box window.
    CoveringRadius {
        #[arg(long)]
        points: PathBuf,
        /// Box as comma-separated lows then highs: `x0,y0,...,x1,y1,...`.
        #[arg(long, value_name = "lo...,hi...")]
        r#box: String,
        #[arg(long, default_value_t = 0.05)]
        resolution: f64,
        /// Estimator registry name; by default the planar exact path is
        /// used in 2-D and grid ascent elsewhere.
        #[arg(long)]
        method: Option<String>,
    },
    /// Annulus-cone hitting probe at a point of the cloud.
    ProbeCone {
        #[arg(long)]
        points: PathBuf,
        #[arg(long)]
        apex_index: usize,
        /// Unit axis as comma-separated coordinates.
        #[arg(long)]
        axis: String,
        #[arg(long)]
        c: f64,
        #[arg(long)]
        c_prime: f64,
    },
    /// Batch experiment runners emitting JSON-lines reports.
    Experiment {
        #[command(subcommand)]
        which: ExperimentCommand,
    },
}

#[derive(Subcommand)]
enum ExperimentCommand {
    /// Exact GH vs Euclidean-GH estimates on random planar pairs.
    Sandwich(SandwichArgs),
    /// Cone-probe campaigns over net-like presets.
    NetProbe(NetProbeArgs),
}

#[derive(Args)]
struct SandwichArgs {
    #[arg(long, default_value_t = 100)]
    instances: usize,
    #[arg(long, default_value_t = 6)]
    cloud_size: usize,
    #[arg(long, default_value_t = 2)]
    dim: usize,
    #[arg(long, default_value_t = 1.0)]
    c_prime: f64,
}

#[derive(Args)]
struct NetProbeArgs {
    #[arg(long, value_enum)]
    preset: Preset,
    #[arg(long, default_value_t = 1000)]
    probes: usize,
    #[arg(long, default_value_t = 0.5)]
    c_prime: f64,
}

fn parse_vector(text: &str, what: &str) -> Result<Vec<f64>, CliError> {
    text.split(',')
        .map(|f| {
            f.trim()
                .parse::<f64>()
                .map_err(|e| CliError::input(format!("bad {what} component {f:?}: {e}")))
        })
        .collect()
}

fn emit(cli_out: &Option<PathBuf>, value: &serde_json::Value) -> Result<(), CliError> {
    let body = serde_json::to_string_pretty(value).map_err(CliError::from_display)?;
    println!("{body}");
    if let Some(path) = cli_out {
        std::fs::write(path, format!("{body}\n")).map_err(CliError::from_display)?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Gh { x, y, mode, budget } => {
            let mx = ingest_space(&x)?;
            let my = ingest_space(&y)?;
            let solver = ghkit::gh::solver_by_name(&mode, budget).ok_or_else(|| {
                CliError::input(format!(
                    "unknown GH solver {mode:?}; available: {}",
                    ghkit::gh::SOLVER_NAMES.join(", ")
                ))
            })?;
            let result = solver.solve(&mx, &my).map_err(CliError::from_display)?;
            emit(
                &cli.out,
                &json!({
                    "lower": result.lower,
                    "upper": result.upper,
                    "exact": result.exact,
                    "witness_pairs": result.witness.as_ref().map(|w| w.pairs().to_vec()),
                }),
            )
        }
        Command::Eh { x, y, oracle, restarts, angle_steps } => {
            let a = ingest_cloud(&x)?;
            let b = ingest_cloud(&y)?;
            let estimator: Box<dyn EhEstimator> = if oracle {
                Box::new(PlanarScan::with_steps(angle_steps))
            } else {
                Box::new(MultiStart { restarts, seed: cli.seed, ..Default::default() })
            };
            let result = estimator.estimate(&a, &b).map_err(CliError::from_display)?;
            emit(
                &cli.out,
                &json!({
                    "value": result.value,
                    "certified": result.certified,
                    "motion": {
                        "linear": result.motion.linear_rows(),
                        "translation": result.motion.translation_vec(),
                    },
                    "gap_bound": result.gap_bound,
                }),
            )
        }
        Command::Hausdorff { x, y } => {
            let a = ingest_cloud(&x)?;
            let b = ingest_cloud(&y)?;
            let value = ghkit::hausdorff_distance(&a, &b).map_err(CliError::from_display)?;
            emit(&cli.out, &json!({ "value": value }))
        }
        Command::CoveringRadius { points, r#box, resolution, method } => {
            let cloud = ingest_cloud(&points)?;
            let coords = parse_vector(&r#box, "box")?;
            if coords.len() % 2 != 0 || coords.is_empty() {
                return Err(CliError::input(
                    "box needs an even number of coordinates: lows then highs",
                ));
            }
            let dim = coords.len() / 2;
            let region = BoxRegion::new(coords[..dim].to_vec(), coords[dim..].to_vec())
                .map_err(CliError::from_display)?;
            let result = match method {
                Some(name) => ghkit::net::estimator_by_name(&name, resolution)
                    .ok_or_else(|| {
                        CliError::input(format!(
                            "unknown covering-radius estimator {name:?}; available: {}",
                            ghkit::net::ESTIMATOR_NAMES.join(", ")
                        ))
                    })?
                    .covering_radius(&cloud, &region),
                None => ghkit::covering_radius_in_box(&cloud, &region, resolution),
            }
            .map_err(CliError::from_display)?;
            let (method_name, method_resolution) = match result.method {
                ghkit::net::CoveringMethod::PlanarExact => ("planar-exact", None),
                ghkit::net::CoveringMethod::GridAscent { resolution } => {
                    ("grid-ascent", Some(resolution))
                }
            };
            emit(
                &cli.out,
                &json!({
                    "radius": result.radius,
                    "witness": result.witness,
                    "method": method_name,
                    "resolution": method_resolution,
                }),
            )
        }
        Command::ProbeCone { points, apex_index, axis, c, c_prime } => {
            let cloud = ingest_cloud(&points)?;
            let axis = parse_vector(&axis, "axis")?;
            let schedule = ConstantSchedule::derive(c, c_prime).map_err(CliError::from_display)?;
            let outcome = annulus_cone_probe(&cloud, apex_index, &axis, &schedule)
                .map_err(CliError::from_display)?;
            emit(
                &cli.out,
                &json!({
                    "hit": outcome.hit,
                    "witness": outcome.witness,
                    "schedule": {
                        "c": schedule.distortion_bound(),
                        "c_prime": schedule.dimension_constant(),
                        "slack_coefficient": schedule.slack_coefficient(),
                        "sphere_radius": schedule.sphere_radius(),
                    },
                }),
            )
        }
        Command::Experiment { which } => {
            let (label, args_dim, args_count, args_cloud, args_c_prime) = match &which {
                ExperimentCommand::Sandwich(a) => ("sandwich", a.dim, a.instances, a.cloud_size, a.c_prime),
                ExperimentCommand::NetProbe(a) => ("net-probe", 2, a.probes, 1, a.c_prime),
            };
            let output_path = cli
                .out
                .clone()
                .unwrap_or_else(|| PathBuf::from(format!("{label}-report.jsonl")));
            let cfg = ExperimentConfig {
                seed: cli.seed,
                instance_count: args_count,
                dim: args_dim,
                cloud_size: args_cloud,
                c_prime: args_c_prime,
                tolerances: Tolerances::default(),
                output_path,
            };
            match which {
                ExperimentCommand::Sandwich(_) => {
                    let batch = run_sandwich_experiment(&cfg)?;
                    let summary = serde_json::to_value(&batch.summary).map_err(CliError::from_display)?;
                    println!("{}", serde_json::to_string_pretty(&summary).map_err(CliError::from_display)?);
                    eprintln!("report written to {}", cfg.output_path.display());
                    Ok(())
                }
                ExperimentCommand::NetProbe(args) => {
                    let batch = run_net_probe_campaign(&cfg, args.preset)?;
                    let summary = serde_json::to_value(&batch.summary).map_err(CliError::from_display)?;
                    println!("{}", serde_json::to_string_pretty(&summary).map_err(CliError::from_display)?);
                    eprintln!("report written to {}", cfg.output_path.display());
                    Ok(())
                }
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.threads > 0 {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(cli.threads)
            .build_global()
        {
            eprintln!("error: could not configure {} threads: {e}", cli.threads);
            return ExitCode::from(1);
        }
    }
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
