//! Built-in experiment configurations. Each experiment kind runs out of the
//! box with these; a config file overrides them field by field.

use gossip_blocks_core::model::{solve_interaction_probs, BlockGossipModel, CommunityAssignment};
use gossip_blocks_core::rng::{stream_rng, Channel};
use rand::Rng;

/// Twelve-agent complete-graph model: two communities of five regular and
/// one stubborn agent each, w_s/w_d = 5 (w_s = 5/186), q = 1/2, stubborn
/// states ±1.
pub fn small_complete_model() -> BlockGossipModel {
    BlockGossipModel::from_counts_and_ratio(&[(5, 1), (5, 1)], 5.0, 0.5, vec![1.0, -1.0])
        .expect("built-in model is valid")
}

/// Comparison-experiment model: n = 400, n₁ = 150, eight stubborn agents
/// per community, w_s/w_d = 5. One stubborn agent per community is pinned
/// at ±1; the rest get uniform(−1, 1) states drawn once per experiment
/// from the master seed's model-setup stream, so all replications share
/// one stubborn-state vector.
pub fn comparison_model(master_seed: u64) -> BlockGossipModel {
    let counts = [(142usize, 8usize), (242usize, 8usize)];
    let (w_s, w_d) = solve_interaction_probs(150, 250, 5.0).expect("valid sizes");
    let mut rng = stream_rng(master_seed, 0, Channel::ModelSetup);
    let mut stubborn_states = Vec::with_capacity(16);
    for pinned in [1.0, -1.0] {
        stubborn_states.push(pinned);
        for _ in 0..7 {
            stubborn_states.push(rng.random_range(-1.0..1.0));
        }
    }
    let assignment = CommunityAssignment::sorted_blocks(&counts).expect("valid counts");
    BlockGossipModel::new(assignment, w_s, w_d, 0.5, stubborn_states)
        .expect("built-in model is valid")
}

/// Default trajectory lengths, chosen so the corresponding curves saturate.
pub const SINGLE_STEPS: u64 = 1_000_000;
pub const COMPARE_STEPS: u64 = 10_000_000;
pub const KARATE_STEPS: u64 = 1_000_000;

pub const COMPARE_REPLICATIONS: u64 = 200;
pub const KARATE_REPLICATIONS: u64 = 20;

pub const DEFAULT_STEP_A: f64 = 1.0;

/// Quarter-decade grid 10^{k/4} within [lo, steps], ending at steps.
pub fn quarter_decade_grid(lo: u64, steps: u64) -> Vec<u64> {
    let mut ticks = Vec::new();
    let mut k = 0;
    loop {
        let t = 10f64.powf(k as f64 / 4.0).round() as u64;
        if t > steps {
            break;
        }
        if t >= lo {
            ticks.push(t);
        }
        k += 1;
    }
    if steps >= lo.max(1) {
        ticks.push(steps);
    }
    ticks.sort_unstable();
    ticks.dedup();
    ticks
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn comparison_model_is_seed_deterministic_and_pinned() {
        let a = comparison_model(7);
        let b = comparison_model(7);
        assert_eq!(a.stubborn_states(), b.stubborn_states());
        assert_eq!(a.stubborn_states()[0], 1.0);
        assert_eq!(a.stubborn_states()[8], -1.0);
        assert!(a.stubborn_states().iter().all(|s| (-1.0..=1.0).contains(s)));
        let c = comparison_model(8);
        assert_ne!(a.stubborn_states(), c.stubborn_states());
    }

    #[test]
    fn small_model_matches_the_published_probabilities() {
        let m = small_complete_model();
        assert!((m.w_s() - 5.0 / 186.0).abs() <= 1e-15);
        assert!((m.w_d() - 1.0 / 186.0).abs() <= 1e-15);
    }

    #[test]
    fn quarter_decade_grid_is_sorted_and_capped() {
        let grid = quarter_decade_grid(1000, 2_000_000);
        assert_eq!(*grid.first().unwrap(), 1000);
        assert_eq!(*grid.last().unwrap(), 2_000_000);
        assert!(grid.windows(2).all(|w| w[0] < w[1]));
    }
}
