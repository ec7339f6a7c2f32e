//! SBM sweep: for each network size, sample graphs, run the estimator over
//! trajectories of the gossip model on each sample, and aggregate recovery
//! accuracy and the relative error of ŵ_s/ŵ_d as an estimate of p_s/p_d
//! (only the ratio is identifiable from the normalized dynamics).

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use anyhow::Context as _;
use rayon::prelude::*;

use gossip_blocks_core::dynamics::{EdgeSampler, GossipSystem};
use gossip_blocks_core::estimation::{run_algorithm1_with_sampler, Alg1Settings};
use gossip_blocks_core::model::{graph_to_interaction, sample_sbm_with, CommunityAssignment, SbmParams};
use gossip_blocks_core::rng::{stream_rng, Channel};

use crate::config::{InitialStates, SbmSweepConfig};
use crate::output;

#[derive(Debug, Clone)]
pub struct SweepSpec {
    pub sbm: SbmSweepConfig,
    /// Flat trajectory-length override; by default each size n runs for
    /// 10_000·n ticks so per-agent activity is comparable across sizes.
    pub steps: Option<u64>,
    pub seed: u64,
    pub step_a: f64,
    pub initial: InitialStates,
}

/// Default per-size horizon: agents are touched about once per n/20 ticks,
/// so scaling with n keeps the averages equally settled at every size.
pub const STEPS_PER_AGENT: u64 = 10_000;

#[derive(Debug, Clone)]
pub struct SweepRun {
    pub n: usize,
    pub graph: usize,
    pub run: usize,
    pub accuracy: f64,
    pub ratio_rel_error: f64,
}

pub struct SweepResult {
    pub runs: Vec<SweepRun>,
    /// (n, mean accuracy, median ratio error), in size order.
    pub summary: Vec<(usize, f64, f64)>,
    pub warnings: Vec<String>,
}

/// Fig-4-style parameters for one size: p_s = (log n)²/n, p_d = log n/n,
/// equal communities, `regular_fraction` of each community regular.
pub fn sweep_params(n: usize) -> SbmParams {
    let log_n = (n as f64).ln();
    SbmParams {
        n,
        nu1: 0.5,
        p_s: log_n * log_n / n as f64,
        p_d: log_n / n as f64,
    }
}

pub fn run_sbm_sweep(spec: &SweepSpec) -> anyhow::Result<SweepResult> {
    let mut runs = Vec::new();
    let mut summary = Vec::new();
    let mut warnings = Vec::new();
    let runs_per_graph = spec.sbm.runs_per_graph;

    for (size_idx, &n) in spec.sbm.sizes.iter().enumerate() {
        let steps = spec.steps.unwrap_or(STEPS_PER_AGENT * n as u64);
        let params = sweep_params(n);
        params.validate()?;
        let true_ratio = params.p_s / params.p_d;
        let half = n / 2;
        let n_r = (spec.sbm.regular_fraction * n as f64).round() as usize;
        if 2 * (n_r + (half - n_r)) != n || n_r == 0 || half <= n_r {
            anyhow::bail!("regular fraction {} does not split n = {n}", spec.sbm.regular_fraction);
        }
        let n_s = half - n_r;
        let counts = [(n_r, n_s), (n_r, n_s)];
        let assignment = CommunityAssignment::sorted_blocks(&counts)?;
        let truth = assignment.two_community_truth();
        // Stubborn states: +1 in community 1, −1 in community 2.
        let mut stubborn_states = vec![1.0; n_s];
        stubborn_states.extend(vec![-1.0; n_s]);

        let mut size_runs: Vec<SweepRun> = Vec::with_capacity(spec.sbm.graphs * runs_per_graph);
        for graph_idx in 0..spec.sbm.graphs {
            // Graph stream: replication slot = size_idx * graphs + graph_idx.
            let mut graph_rng = stream_rng(
                spec.seed,
                (size_idx * spec.sbm.graphs + graph_idx) as u64,
                Channel::Graph,
            );
            let graph = sample_sbm_with(&params, &mut graph_rng)?;
            if !graph.is_connected() {
                warnings.push(format!(
                    "n = {n}, graph {graph_idx}: sample is disconnected ({} edges); kept",
                    graph.edge_count()
                ));
            }
            let interaction = graph_to_interaction(&graph)?;
            let system = GossipSystem::new(
                assignment.clone(),
                interaction,
                0.5,
                stubborn_states.clone(),
            )?;
            let sampler = EdgeSampler::from_interaction(system.interaction())?;

            let graph_runs: Vec<SweepRun> = (0..runs_per_graph)
                .into_par_iter()
                .map(|run_idx| {
                    // Per-run streams are indexed by the flattened grid slot.
                    let rep = (size_idx * spec.sbm.graphs * runs_per_graph
                        + graph_idx * runs_per_graph
                        + run_idx) as u64;
                    let mut init_rng = stream_rng(spec.seed, rep, Channel::InitialStates);
                    let x0 = super::initial_states(
                        &spec.initial,
                        system.assignment().num_regular(),
                        &mut init_rng,
                    )
                    .expect("initial-state config validated");
                    let settings =
                        Alg1Settings::new(spec.step_a, vec![steps]).with_truth(truth.clone());
                    let mut edge_rng = stream_rng(spec.seed, rep, Channel::Edges);
                    let mut alg_rng = stream_rng(spec.seed, rep, Channel::Algorithm);
                    let (out, _) = run_algorithm1_with_sampler(
                        &system,
                        &sampler,
                        &x0,
                        steps,
                        &settings,
                        &mut edge_rng,
                        &mut alg_rng,
                    )
                    .expect("simulation inputs validated");
                    let snapshot = out.snapshots.last().expect("final snapshot");
                    let est_ratio = out.w_s_hat / out.w_d_hat;
                    SweepRun {
                        n,
                        graph: graph_idx,
                        run: run_idx,
                        accuracy: snapshot.accuracy.expect("truth supplied"),
                        ratio_rel_error: (est_ratio - true_ratio).abs() / true_ratio,
                    }
                })
                .collect();
            size_runs.extend(graph_runs);
        }

        let mean_accuracy =
            size_runs.iter().map(|r| r.accuracy).sum::<f64>() / size_runs.len() as f64;
        let mut errors: Vec<f64> = size_runs.iter().map(|r| r.ratio_rel_error).collect();
        let median_error = super::median(&mut errors);
        summary.push((n, mean_accuracy, median_error));
        runs.extend(size_runs);
    }

    Ok(SweepResult {
        runs,
        summary,
        warnings,
    })
}

pub fn write_sbm_sweep(result: &SweepResult, out_dir: &Path) -> anyhow::Result<Vec<PathBuf>> {
    let mut runs_text = String::from(output::SWEEP_RUNS_HEADER);
    runs_text.push('\n');
    for run in &result.runs {
        let _ = writeln!(
            runs_text,
            "{},{},{},{},{}",
            run.n,
            run.graph,
            run.run,
            output::fmt_f64(run.accuracy),
            output::fmt_f64(run.ratio_rel_error)
        );
    }
    let mut summary_text = String::from(output::SWEEP_SUMMARY_HEADER);
    summary_text.push('\n');
    for (n, mean_acc, median_err) in &result.summary {
        let _ = writeln!(
            summary_text,
            "{},{},{}",
            n,
            output::fmt_f64(*mean_acc),
            output::fmt_f64(*median_err)
        );
    }
    let runs_path = out_dir.join("sweep_runs.csv");
    let summary_path = out_dir.join("sweep_summary.csv");
    output::write_text(&runs_path, &runs_text)
        .with_context(|| format!("writing {}", runs_path.display()))?;
    output::write_text(&summary_path, &summary_text)
        .with_context(|| format!("writing {}", summary_path.display()))?;
    Ok(vec![runs_path, summary_path])
}
