//! Seeded experiment orchestration. Every experiment is a pure function of
//! (resolved spec, master seed): replications fan out over a rayon pool
//! with per-replication streams and are merged in replication order, so
//! parallel and serial runs emit identical bytes.

mod curve;
mod karate_run;
mod sbm_sweep;
mod single;

pub use curve::{run_curve, write_curve, CurveResult, CurveSpec};
pub use karate_run::{run_karate, write_karate, KarateResult, KarateSpec};
pub use sbm_sweep::{run_sbm_sweep, write_sbm_sweep, SweepResult, SweepSpec};
pub use single::{
    model_warnings, oracle_report_json, run_estimate, run_simulate, run_single, write_single,
    SingleResult, SingleSpec,
};

use gossip_blocks_core::rng::ChaCha8Rng;
use rand::Rng;

use crate::config::InitialStates;

/// Draws or copies the initial regular states.
pub fn initial_states(
    init: &InitialStates,
    n_r: usize,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<f64>, String> {
    match init {
        InitialStates::Uniform([lo, hi]) => {
            if !(lo < hi) {
                return Err(format!("uniform bounds [{lo}, {hi}] are not increasing"));
            }
            Ok((0..n_r).map(|_| rng.random_range(*lo..*hi)).collect())
        }
        InitialStates::Explicit(values) => {
            if values.len() != n_r {
                return Err(format!(
                    "explicit initial states have {} entries, expected {n_r}",
                    values.len()
                ));
            }
            Ok(values.clone())
        }
    }
}

/// Median of a (will be sorted) sample.
pub fn median(values: &mut [f64]) -> f64 {
    values.sort_by(f64::total_cmp);
    let k = values.len();
    if k == 0 {
        return f64::NAN;
    }
    if k % 2 == 1 {
        values[k / 2]
    } else {
        0.5 * (values[k / 2 - 1] + values[k / 2])
    }
}
