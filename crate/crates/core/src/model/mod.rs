//! Generative model layer: community assignments, exact block interaction
//! matrices, SBM-sampled graphs, and the normalization/deviation checks the
//! model setup requires.

mod assignment;
mod block;
mod error;
mod interaction;
mod sbm;

pub use assignment::{CommunityAssignment, Role};
pub use block::{solve_interaction_probs, solve_interaction_probs_k, BlockGossipModel};
pub use error::ModelError;
pub use interaction::{build_block_interaction_matrix, deviation_norm, InteractionMatrix};
pub use sbm::{
    expected_edge_count, expected_interaction, graph_to_interaction, sample_sbm, sample_sbm_with,
    SbmParams, SimpleGraph,
};
