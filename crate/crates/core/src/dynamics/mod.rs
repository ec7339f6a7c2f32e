//! Execution of the gossip process: one edge per tick sampled from the
//! interaction matrix, pairwise averaging with stubborn agents frozen,
//! observer streaming.

mod error;
mod sampler;
mod simulate;
mod step;

pub use error::DynamicsError;
pub use sampler::EdgeSampler;
pub use simulate::{
    simulate, simulate_with_sampler, GossipState, GossipSystem, Observer, RegularStates,
    TickEvent, TrajectoryRecorder,
};
pub use step::{gossip_step, Touched};
