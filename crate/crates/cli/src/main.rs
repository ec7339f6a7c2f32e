use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use gossip_blocks_cli::config::{
    ConfigError, ExperimentConfig, ExperimentKind, InitialStates, SnapshotGrid,
};
use gossip_blocks_cli::defaults;
use gossip_blocks_cli::experiments::{
    oracle_report_json, run_curve, run_estimate, run_karate, run_sbm_sweep, run_simulate,
    run_single, write_curve, write_karate, write_sbm_sweep, write_single, CurveSpec, KarateSpec,
    SingleSpec, SweepSpec,
};
use gossip_blocks_cli::output;

/// Gossip opinion dynamics over block networks: simulation, closed-form
/// oracles, and joint community recovery + interaction estimation.
#[derive(Parser)]
#[command(name = "gossip-blocks", version, about)]
struct Cli {
    /// Worker threads for replications (GOSSIP_BLOCKS_THREADS overrides).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Escalate assumption-violation warnings to exit code 3.
    #[arg(long, global = true)]
    strict: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct CommonArgs {
    /// Experiment config JSON (built-in defaults when omitted).
    #[arg(long)]
    config: Option<PathBuf>,
    /// Master seed (required here or in the config; no wall-clock default).
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory.
    #[arg(long)]
    out: PathBuf,
    /// Replication count override.
    #[arg(long)]
    replications: Option<u64>,
    /// Trajectory length override.
    #[arg(long)]
    steps: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// Run one trajectory and dump it as CSV.
    Simulate {
        #[command(flatten)]
        common: CommonArgs,
        /// Record every k-th tick.
        #[arg(long, default_value_t = 1)]
        decimate: u64,
    },
    /// Run the joint recovery/estimation algorithm on one trajectory.
    Estimate {
        #[command(flatten)]
        common: CommonArgs,
        /// Consume a recorded (undecimated) trajectory CSV instead of
        /// simulating.
        #[arg(long)]
        trajectory: Option<PathBuf>,
    },
    /// Print the closed-form oracle report for a model as JSON.
    Oracle {
        /// Experiment config JSON (built-in default model when omitted).
        #[arg(long)]
        config: Option<PathBuf>,
        /// Also write oracle.json into this directory.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Seeded multi-replication experiments.
    Experiment {
        #[command(subcommand)]
        kind: ExperimentCommand,
    },
}

#[derive(Subcommand)]
enum ExperimentCommand {
    /// One trajectory + estimator run with the oracle report.
    Single {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Exact-recovery frequency curve of the estimator's own rule.
    RecoveryCurve {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Recovery-frequency comparison across all registered methods.
    Compare {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Accuracy/ratio-error sweep over SBM-sampled graphs.
    SbmSweep {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Recovery on the bundled weighted karate-club network.
    Karate {
        #[command(flatten)]
        common: CommonArgs,
    },
}

enum RunError {
    Config(String),
    Other(anyhow::Error),
}

impl From<ConfigError> for RunError {
    fn from(e: ConfigError) -> Self {
        RunError::Config(e.to_string())
    }
}

impl From<anyhow::Error> for RunError {
    fn from(e: anyhow::Error) -> Self {
        RunError::Other(e)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let threads = std::env::var("GOSSIP_BLOCKS_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .or(cli.threads);
    if let Some(threads) = threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
        {
            eprintln!("warning: could not size the thread pool: {e}");
        }
    }

    match run(cli.command, cli.strict) {
        Ok(warnings) => {
            for w in &warnings {
                eprintln!("warning: {w}");
            }
            if cli.strict && !warnings.is_empty() {
                eprintln!("error: warnings escalated under --strict");
                ExitCode::from(3)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(RunError::Config(message)) => {
            eprintln!("config error: {message}");
            ExitCode::from(2)
        }
        Err(RunError::Other(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

struct Resolved {
    config: ExperimentConfig,
    seed: u64,
    steps: Option<u64>,
    replications: Option<u64>,
    out: PathBuf,
}

fn resolve(common: &CommonArgs, kind: ExperimentKind) -> Result<Resolved, RunError> {
    let config = match &common.config {
        Some(path) => ExperimentConfig::load(path)?,
        None => ExperimentConfig::default(),
    };
    config.validate_for(kind)?;
    let seed = common
        .seed
        .or(config.seed)
        .ok_or_else(|| RunError::Config("a master seed is required (--seed or \"seed\")".into()))?;
    let steps = common.steps.or(config.steps);
    let replications = common.replications.or(config.replications);
    let out = common.out.clone();
    Ok(Resolved {
        config,
        seed,
        steps,
        replications,
        out,
    })
}

fn config_dir(common: &CommonArgs) -> Option<PathBuf> {
    common
        .config
        .as_ref()
        .and_then(|p| p.parent().map(|d| d.to_path_buf()))
}

fn single_spec(resolved: &Resolved, base: Option<&PathBuf>) -> Result<SingleSpec, RunError> {
    let model = resolved
        .config
        .model(base.map(|p| p.as_path()))?
        .unwrap_or_else(defaults::small_complete_model);
    Ok(SingleSpec {
        model,
        steps: resolved.steps.unwrap_or(defaults::SINGLE_STEPS),
        seed: resolved.seed,
        step_a: resolved.config.step_a.unwrap_or(defaults::DEFAULT_STEP_A),
        grid: resolved
            .config
            .snapshot_grid
            .clone()
            .unwrap_or_default(),
        initial: resolved.config.initial_states.clone().unwrap_or_default(),
    })
}

fn run(command: Command, _strict: bool) -> Result<Vec<String>, RunError> {
    match command {
        Command::Simulate { common, decimate } => {
            let resolved = resolve(&common, ExperimentKind::Single)?;
            let spec = single_spec(&resolved, config_dir(&common).as_ref())?;
            let csv = run_simulate(
                &spec.model,
                spec.steps,
                spec.seed,
                &spec.initial,
                decimate,
            )?;
            let path = resolved.out.join("trajectory.csv");
            output::write_text(&path, &csv)
                .map_err(|e| RunError::Other(anyhow::Error::new(e)))?;
            println!("{}", path.display());
            Ok(Vec::new())
        }
        Command::Estimate { common, trajectory } => {
            let resolved = resolve(&common, ExperimentKind::Single)?;
            let spec = single_spec(&resolved, config_dir(&common).as_ref())?;
            let text = match &trajectory {
                Some(path) => Some(std::fs::read_to_string(path).map_err(|e| {
                    RunError::Other(anyhow::anyhow!("cannot read {}: {e}", path.display()))
                })?),
                None => None,
            };
            let result = run_estimate(&spec, text.as_deref())?;
            for path in write_single(&result, &resolved.out)? {
                println!("{}", path.display());
            }
            Ok(result.warnings)
        }
        Command::Oracle { config, out } => {
            let (model, warnings) = match &config {
                Some(path) => {
                    let experiment = ExperimentConfig::load(path)?;
                    let base = path.parent().map(|d| d.to_path_buf());
                    let model = experiment
                        .model(base.as_deref())?
                        .unwrap_or_else(defaults::small_complete_model);
                    let warnings =
                        gossip_blocks_cli::experiments::model_warnings(&model);
                    (model, warnings)
                }
                None => {
                    let model = defaults::small_complete_model();
                    let warnings =
                        gossip_blocks_cli::experiments::model_warnings(&model);
                    (model, warnings)
                }
            };
            let report = oracle_report_json(&model)?;
            print!("{report}");
            if let Some(dir) = out {
                let path = dir.join("oracle.json");
                output::write_text(&path, &report)
                    .map_err(|e| RunError::Other(anyhow::Error::new(e)))?;
            }
            Ok(warnings)
        }
        Command::Experiment { kind } => match kind {
            ExperimentCommand::Single { common } => {
                let resolved = resolve(&common, ExperimentKind::Single)?;
                let spec = single_spec(&resolved, config_dir(&common).as_ref())?;
                let result = run_single(&spec)?;
                for path in write_single(&result, &resolved.out)? {
                    println!("{}", path.display());
                }
                Ok(result.warnings)
            }
            ExperimentCommand::RecoveryCurve { common } => {
                run_curve_command(&common, ExperimentKind::RecoveryCurve)
            }
            ExperimentCommand::Compare { common } => {
                run_curve_command(&common, ExperimentKind::Compare)
            }
            ExperimentCommand::SbmSweep { common } => {
                let resolved = resolve(&common, ExperimentKind::SbmSweep)?;
                let spec = SweepSpec {
                    sbm: resolved.config.sbm.clone().unwrap_or_default(),
                    steps: resolved.steps,
                    seed: resolved.seed,
                    step_a: resolved.config.step_a.unwrap_or(defaults::DEFAULT_STEP_A),
                    initial: resolved.config.initial_states.clone().unwrap_or_default(),
                };
                let result = run_sbm_sweep(&spec)?;
                for path in write_sbm_sweep(&result, &resolved.out)? {
                    println!("{}", path.display());
                }
                Ok(result.warnings)
            }
            ExperimentCommand::Karate { common } => {
                let resolved = resolve(&common, ExperimentKind::Karate)?;
                let steps = resolved.steps.unwrap_or(defaults::KARATE_STEPS);
                let spec = KarateSpec {
                    karate: resolved.config.karate.clone().unwrap_or_default(),
                    q: 0.5,
                    steps,
                    replications: resolved
                        .replications
                        .unwrap_or(defaults::KARATE_REPLICATIONS),
                    seed: resolved.seed,
                    step_a: resolved.config.step_a.unwrap_or(defaults::DEFAULT_STEP_A),
                    grid: match &resolved.config.snapshot_grid {
                        Some(grid) => grid.ticks(steps),
                        None => defaults::quarter_decade_grid(100, steps),
                    },
                    initial: resolved.config.initial_states.clone().unwrap_or_default(),
                };
                let result = run_karate(&spec)?;
                for path in write_karate(&result, &resolved.out)? {
                    println!("{}", path.display());
                }
                Ok(result.warnings)
            }
        },
    }
}

fn run_curve_command(common: &CommonArgs, kind: ExperimentKind) -> Result<Vec<String>, RunError> {
    let resolved = resolve(common, kind)?;
    let steps = resolved.steps.unwrap_or(defaults::COMPARE_STEPS);
    let model = resolved
        .config
        .model(config_dir(common).as_deref())?
        .unwrap_or_else(|| defaults::comparison_model(resolved.seed));
    let (methods, file_name) = match kind {
        ExperimentKind::RecoveryCurve => (vec!["alg1".to_string()], "recovery_curve.csv"),
        _ => (
            resolved.config.methods.clone().unwrap_or_else(|| {
                gossip_blocks_core::estimation::method_names()
                    .iter()
                    .map(|s| s.to_string())
                    .collect()
            }),
            "comparison.csv",
        ),
    };
    let spec = CurveSpec {
        model,
        steps,
        replications: resolved
            .replications
            .unwrap_or(defaults::COMPARE_REPLICATIONS),
        seed: resolved.seed,
        grid: match &resolved.config.snapshot_grid {
            Some(SnapshotGrid::Explicit(list)) => {
                let grid = SnapshotGrid::Explicit(list.clone());
                grid.ticks(steps)
            }
            Some(geometric) => geometric.ticks(steps),
            None => defaults::quarter_decade_grid(1000, steps),
        },
        methods,
        initial: resolved
            .config
            .initial_states
            .clone()
            .unwrap_or(InitialStates::Uniform([-1.0, 1.0])),
        file_name,
    };
    let result = run_curve(&spec)?;
    for path in write_curve(&result, &resolved.out)? {
        println!("{}", path.display());
    }
    Ok(result.warnings)
}
