//! One trajectory + one estimator run, with the oracle report; also the
//! plain `simulate` and `estimate` commands.

use std::path::{Path, PathBuf};

use anyhow::{anyhow, Context as _};

use gossip_blocks_core::dynamics::{simulate, GossipSystem, Observer, TrajectoryRecorder};
use gossip_blocks_core::estimation::{run_algorithm1, Alg1Output, Alg1Runner, Alg1Settings};
use gossip_blocks_core::model::BlockGossipModel;
use gossip_blocks_core::oracle::{
    eq12_residual, stationary_mean_closed_form, theory_constants,
};
use gossip_blocks_core::rng::{stream_rng, Channel};

use crate::config::{InitialStates, SnapshotGrid};
use crate::output;

#[derive(Debug, Clone)]
pub struct SingleSpec {
    pub model: BlockGossipModel,
    pub steps: u64,
    pub seed: u64,
    pub step_a: f64,
    pub grid: SnapshotGrid,
    pub initial: InitialStates,
}

pub struct SingleResult {
    pub output: Alg1Output,
    pub oracle_json: String,
    pub warnings: Vec<String>,
}

/// Assumption checks shared by block-model experiments.
pub fn model_warnings(model: &BlockGossipModel) -> Vec<String> {
    let mut warnings = Vec::new();
    if !model.assumption2_holds() {
        warnings.push(
            "identifiability violated: stubborn community means coincide (chi gap = 0); \
             labels will not stabilize meaningfully"
                .to_string(),
        );
    }
    warnings
}

/// The `oracle` report: every closed-form quantity of a model as JSON.
/// Quantities that require the identifiability assumption are null when it
/// fails.
pub fn oracle_report_json(model: &BlockGossipModel) -> anyhow::Result<String> {
    let profile = stationary_mean_closed_form(model)?;
    let eq12 = eq12_residual(model)?;
    let constants = theory_constants(model).ok();
    let value = serde_json::json!({
        "chi1": profile.chi1,
        "chi2": profile.chi2,
        "delta": profile.delta,
        "rho_A": gossip_blocks_core::oracle::mean_matrices(model).spectral_radius(),
        "t0": constants.as_ref().map(|c| c.t0),
        "eta": constants.as_ref().map(|c| c.eta),
        "sstar": constants.as_ref().map(|c| c.s_star),
        "eq12_check_residual": eq12,
    });
    Ok(serde_json::to_string_pretty(&value)? + "\n")
}

pub fn run_single(spec: &SingleSpec) -> anyhow::Result<SingleResult> {
    let system = GossipSystem::from_block_model(&spec.model)?;
    let truth = spec.model.assignment().two_community_truth();
    let mut init_rng = stream_rng(spec.seed, 0, Channel::InitialStates);
    let x0 = super::initial_states(&spec.initial, system.assignment().num_regular(), &mut init_rng)
        .map_err(|e| anyhow!(e))?;
    let settings = Alg1Settings::new(spec.step_a, spec.grid.ticks(spec.steps)).with_truth(truth);
    let mut edge_rng = stream_rng(spec.seed, 0, Channel::Edges);
    let mut alg_rng = stream_rng(spec.seed, 0, Channel::Algorithm);
    let (output, _) = run_algorithm1(&system, &x0, spec.steps, &settings, &mut edge_rng, &mut alg_rng)?;
    Ok(SingleResult {
        output,
        oracle_json: oracle_report_json(&spec.model)?,
        warnings: model_warnings(&spec.model),
    })
}

pub fn write_single(result: &SingleResult, out_dir: &Path) -> anyhow::Result<Vec<PathBuf>> {
    let estimator = out_dir.join("estimator.csv");
    output::write_text(&estimator, &output::estimator_csv(&result.output.snapshots))
        .with_context(|| format!("writing {}", estimator.display()))?;
    let oracle = out_dir.join("oracle.json");
    output::write_text(&oracle, &result.oracle_json)
        .with_context(|| format!("writing {}", oracle.display()))?;
    Ok(vec![estimator, oracle])
}

/// `simulate`: dump the trajectory (t = 0 row included) at a decimation
/// cadence.
pub fn run_simulate(
    model: &BlockGossipModel,
    steps: u64,
    seed: u64,
    initial: &InitialStates,
    decimate: u64,
) -> anyhow::Result<String> {
    let system = GossipSystem::from_block_model(model)?;
    let mut init_rng = stream_rng(seed, 0, Channel::InitialStates);
    let x0 = super::initial_states(initial, system.assignment().num_regular(), &mut init_rng)
        .map_err(|e| anyhow!(e))?;
    let mut recorder = TrajectoryRecorder::new(decimate);
    let mut edge_rng = stream_rng(seed, 0, Channel::Edges);
    {
        let mut observers: [&mut dyn Observer; 1] = [&mut recorder];
        simulate(&system, &x0, steps, &mut edge_rng, &mut observers)?;
    }
    let mut rows = vec![(0u64, x0)];
    rows.extend(recorder.into_rows());
    Ok(output::trajectory_csv(system.assignment().num_regular(), &rows))
}

/// `estimate`: run the estimator online (fresh trajectory) or over a
/// recorded undecimated trajectory file.
pub fn run_estimate(
    spec: &SingleSpec,
    trajectory: Option<&str>,
) -> anyhow::Result<SingleResult> {
    let Some(text) = trajectory else {
        return run_single(spec);
    };
    let rows = output::parse_trajectory_csv(text).map_err(|e| anyhow!(e))?;
    let Some(((t0, x0), ticks)) = rows.split_first() else {
        return Err(anyhow!("trajectory file has no rows"));
    };
    if *t0 != 0 {
        return Err(anyhow!("trajectory must start at t = 0, got t = {t0}"));
    }
    let n_r = spec.model.assignment().num_regular();
    if x0.len() != n_r {
        return Err(anyhow!(
            "trajectory has {} states per row, model has {n_r} regular agents",
            x0.len()
        ));
    }
    let steps = ticks.last().map_or(0, |(t, _)| *t);
    let truth = spec.model.assignment().two_community_truth();
    let settings = Alg1Settings::new(spec.step_a, spec.grid.ticks(steps)).with_truth(truth);
    let mut alg_rng = stream_rng(spec.seed, 0, Channel::Algorithm);
    let mut runner = Alg1Runner::new(
        spec.model.assignment(),
        spec.model.stubborn_states(),
        x0,
        &settings,
        &mut alg_rng,
    );
    let mut expected = 1u64;
    for (t, states) in ticks {
        if *t != expected {
            return Err(anyhow!(
                "estimation needs an undecimated trajectory: expected t = {expected}, got {t}"
            ));
        }
        runner.on_dense_tick(*t, states);
        expected += 1;
    }
    Ok(SingleResult {
        output: runner.into_output(steps),
        oracle_json: oracle_report_json(&spec.model)?,
        warnings: model_warnings(&spec.model),
    })
}
