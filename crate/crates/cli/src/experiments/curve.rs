//! Exact-recovery frequency curves: p_t per grid tick for a set of
//! recovery methods over N seeded replications (the comparison experiment,
//! or the estimator-only recovery curve).

use std::path::{Path, PathBuf};

use anyhow::{anyhow, Context as _};
use rayon::prelude::*;

use gossip_blocks_core::dynamics::{
    simulate_with_sampler, EdgeSampler, GossipSystem, Observer, TickEvent,
};
use gossip_blocks_core::estimation::{
    exact_recovery, method_by_name, ActivationCounter, RecoveryContext, RecoveryMethod,
    RunningAverage,
};
use gossip_blocks_core::model::BlockGossipModel;
use gossip_blocks_core::rng::{stream_rng, ChaCha8Rng, Channel};

use crate::config::InitialStates;
use crate::output;

#[derive(Debug, Clone)]
pub struct CurveSpec {
    pub model: BlockGossipModel,
    pub steps: u64,
    pub replications: u64,
    pub seed: u64,
    pub grid: Vec<u64>,
    pub methods: Vec<String>,
    pub initial: InitialStates,
    /// Output file name (comparison.csv / recovery_curve.csv).
    pub file_name: &'static str,
}

pub struct CurveResult {
    pub grid: Vec<u64>,
    pub methods: Vec<&'static str>,
    /// p_t\[grid_idx\]\[method_idx\].
    pub p_t: Vec<Vec<f64>>,
    pub warnings: Vec<String>,
    pub file_name: &'static str,
}

/// Evaluates every method at every grid tick of one trajectory.
struct CurveObserver<'a> {
    avg: RunningAverage,
    activations: Option<ActivationCounter>,
    grid: &'a [u64],
    next: usize,
    methods: &'a [&'static dyn RecoveryMethod],
    system: &'a GossipSystem,
    truth: &'a [u8],
    alg_rng: ChaCha8Rng,
    /// exact\[grid_idx\]\[method_idx\]
    exact: Vec<Vec<bool>>,
}

impl Observer for CurveObserver<'_> {
    fn on_tick(&mut self, event: &TickEvent<'_>) {
        self.avg.record(event.t, event.touched);
        if let Some(counter) = &mut self.activations {
            counter.record(event.edge.0, event.edge.1);
        }
        while self.next < self.grid.len() && self.grid[self.next] == event.t {
            let averages = self.avg.means();
            let ctx = RecoveryContext {
                averages: &averages,
                assignment: self.system.assignment(),
                activations: self.activations.as_ref(),
                t: event.t,
            };
            let mut row = Vec::with_capacity(self.methods.len());
            for method in self.methods {
                let labels = method
                    .recover(&ctx, &mut self.alg_rng)
                    .expect("methods validated against context");
                row.push(exact_recovery(&labels, self.truth).expect("matching lengths"));
            }
            self.exact.push(row);
            self.next += 1;
        }
    }
}

pub fn run_curve(spec: &CurveSpec) -> anyhow::Result<CurveResult> {
    let methods: Vec<&'static dyn RecoveryMethod> = spec
        .methods
        .iter()
        .map(|name| method_by_name(name).map_err(|e| anyhow!(e.to_string())))
        .collect::<Result<_, _>>()?;
    let needs_activations = methods.iter().any(|m| m.needs_activations());
    let system = GossipSystem::from_block_model(&spec.model)?;
    let sampler = EdgeSampler::from_interaction(system.interaction())?;
    let truth = spec.model.assignment().two_community_truth();
    let n = spec.model.n();

    let per_rep: Vec<Vec<Vec<bool>>> = (0..spec.replications)
        .into_par_iter()
        .map(|rep| {
            let mut init_rng = stream_rng(spec.seed, rep, Channel::InitialStates);
            let x0 = super::initial_states(
                &spec.initial,
                system.assignment().num_regular(),
                &mut init_rng,
            )
            .expect("initial-state config validated");
            let mut observer = CurveObserver {
                avg: RunningAverage::new(&x0),
                activations: needs_activations.then(|| ActivationCounter::new(n)),
                grid: &spec.grid,
                next: 0,
                methods: &methods,
                system: &system,
                truth: &truth,
                alg_rng: stream_rng(spec.seed, rep, Channel::Algorithm),
                exact: Vec::with_capacity(spec.grid.len()),
            };
            let mut edge_rng = stream_rng(spec.seed, rep, Channel::Edges);
            {
                let mut observers: [&mut dyn Observer; 1] = [&mut observer];
                simulate_with_sampler(
                    &system,
                    &sampler,
                    &x0,
                    spec.steps,
                    &mut edge_rng,
                    &mut observers,
                )
                .expect("simulation inputs validated");
            }
            observer.exact
        })
        .collect();

    let p_t: Vec<Vec<f64>> = (0..spec.grid.len())
        .map(|gi| {
            (0..methods.len())
                .map(|mi| {
                    let hits = per_rep.iter().filter(|rep| rep[gi][mi]).count();
                    hits as f64 / spec.replications as f64
                })
                .collect()
        })
        .collect();

    Ok(CurveResult {
        grid: spec.grid.clone(),
        methods: methods.iter().map(|m| m.name()).collect(),
        p_t,
        warnings: super::single::model_warnings(&spec.model),
        file_name: spec.file_name,
    })
}

pub fn write_curve(result: &CurveResult, out_dir: &Path) -> anyhow::Result<Vec<PathBuf>> {
    let mut rows = Vec::new();
    for (gi, &t) in result.grid.iter().enumerate() {
        for (mi, &method) in result.methods.iter().enumerate() {
            rows.push((t, method, result.p_t[gi][mi]));
        }
    }
    let path = out_dir.join(result.file_name);
    output::write_text(&path, &output::comparison_csv(&rows))
        .with_context(|| format!("writing {}", path.display()))?;
    Ok(vec![path])
}
