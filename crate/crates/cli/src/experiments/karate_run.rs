//! Gossip over the weighted karate-club network with the two faction
//! leaders pinned as stubborn agents; the estimator recovers the observed
//! two-faction split from states alone.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use anyhow::Context as _;
use rayon::prelude::*;

use gossip_blocks_core::dynamics::EdgeSampler;
use gossip_blocks_core::estimation::{run_algorithm1_with_sampler, Alg1Settings};
use gossip_blocks_core::rng::{stream_rng, Channel};

use crate::config::{InitialStates, KarateConfig};
use crate::karate::karate_system;
use crate::output;

#[derive(Debug, Clone)]
pub struct KarateSpec {
    pub karate: KarateConfig,
    pub q: f64,
    pub steps: u64,
    pub replications: u64,
    pub seed: u64,
    pub step_a: f64,
    pub grid: Vec<u64>,
    pub initial: InitialStates,
}

pub struct KarateResult {
    pub grid: Vec<u64>,
    /// accuracy\[rep\]\[grid_idx\].
    pub accuracy: Vec<Vec<f64>>,
    /// Final (accuracy, exact) per replication.
    pub finals: Vec<(f64, bool)>,
    pub warnings: Vec<String>,
}

pub fn run_karate(spec: &KarateSpec) -> anyhow::Result<KarateResult> {
    let (system, truth) = karate_system(&spec.karate, spec.q)?;
    let sampler = EdgeSampler::from_interaction(system.interaction())?;
    let mut warnings = Vec::new();
    if spec.karate.stubborn_states[0] == spec.karate.stubborn_states[1] {
        warnings.push(
            "both stubborn states are equal: regular agents share one stationary mean and \
             accuracy will stagnate near chance"
                .to_string(),
        );
    }

    let runs: Vec<(Vec<f64>, (f64, bool))> = (0..spec.replications)
        .into_par_iter()
        .map(|rep| {
            let mut init_rng = stream_rng(spec.seed, rep, Channel::InitialStates);
            let x0 = super::initial_states(
                &spec.initial,
                system.assignment().num_regular(),
                &mut init_rng,
            )
            .expect("initial-state config validated");
            let settings =
                Alg1Settings::new(spec.step_a, spec.grid.clone()).with_truth(truth.clone());
            let mut edge_rng = stream_rng(spec.seed, rep, Channel::Edges);
            let mut alg_rng = stream_rng(spec.seed, rep, Channel::Algorithm);
            let (out, _) = run_algorithm1_with_sampler(
                &system,
                &sampler,
                &x0,
                spec.steps,
                &settings,
                &mut edge_rng,
                &mut alg_rng,
            )
            .expect("simulation inputs validated");
            let curve: Vec<f64> = out
                .snapshots
                .iter()
                .map(|s| s.accuracy.expect("truth supplied"))
                .collect();
            let last = out.snapshots.last().expect("nonempty grid");
            let finals = (
                last.accuracy.expect("truth supplied"),
                last.exact.expect("truth supplied"),
            );
            (curve, finals)
        })
        .collect();

    Ok(KarateResult {
        grid: spec.grid.clone(),
        accuracy: runs.iter().map(|(c, _)| c.clone()).collect(),
        finals: runs.iter().map(|(_, f)| *f).collect(),
        warnings,
    })
}

pub fn write_karate(result: &KarateResult, out_dir: &Path) -> anyhow::Result<Vec<PathBuf>> {
    let mut series = String::from(output::KARATE_HEADER);
    series.push('\n');
    for (gi, &t) in result.grid.iter().enumerate() {
        for (rep, curve) in result.accuracy.iter().enumerate() {
            let _ = writeln!(series, "{t},{rep},{}", output::fmt_f64(curve[gi]));
        }
    }
    let mut summary = String::from("replication,final_accuracy,exact\n");
    for (rep, (acc, exact)) in result.finals.iter().enumerate() {
        let _ = writeln!(
            summary,
            "{rep},{},{}",
            output::fmt_f64(*acc),
            u8::from(*exact)
        );
    }
    let series_path = out_dir.join("karate_accuracy.csv");
    let summary_path = out_dir.join("karate_summary.csv");
    output::write_text(&series_path, &series)
        .with_context(|| format!("writing {}", series_path.display()))?;
    output::write_text(&summary_path, &summary)
        .with_context(|| format!("writing {}", summary_path.display()))?;
    Ok(vec![series_path, summary_path])
}
