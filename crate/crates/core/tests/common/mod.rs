//! Shared random-instance generators for the integration suites.

use gossip_blocks_core::model::{solve_interaction_probs_k, BlockGossipModel, CommunityAssignment};
use gossip_blocks_core::rng::ChaCha8Rng;
use rand::Rng;

/// Random valid K-community block model. Every community gets at least one
/// regular agent; stubborn counts are at least `min_stubborn` per community;
/// stubborn states are uniform on (−1, 1).
pub fn random_model(
    rng: &mut ChaCha8Rng,
    communities: usize,
    max_regular: usize,
    max_stubborn: usize,
    min_stubborn: usize,
) -> BlockGossipModel {
    let counts: Vec<(usize, usize)> = (0..communities)
        .map(|_| {
            (
                rng.random_range(1..=max_regular),
                rng.random_range(min_stubborn..=max_stubborn),
            )
        })
        .collect();
    let sizes: Vec<usize> = counts.iter().map(|&(r, s)| r + s).collect();
    let ratio = loop {
        let r: f64 = rng.random_range(0.2..5.0);
        if (r - 1.0).abs() > 0.05 {
            break r;
        }
    };
    let (w_s, w_d) = solve_interaction_probs_k(&sizes, ratio).expect("valid sizes");
    let n_s: usize = counts.iter().map(|&(_, s)| s).sum();
    let stubborn_states: Vec<f64> = (0..n_s).map(|_| rng.random_range(-1.0..1.0)).collect();
    let q = rng.random_range(0.0..0.9);
    let assignment = CommunityAssignment::sorted_blocks(&counts).expect("valid counts");
    BlockGossipModel::new(assignment, w_s, w_d, q, stubborn_states).expect("valid model")
}
