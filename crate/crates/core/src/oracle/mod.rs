//! Closed-form quantities computed independently of simulation: mean update
//! matrices and their stability, stationary means (dense solve and block
//! closed form), the χ-gap identity, the multi-community inverse, sample
//! complexity and rate constants, and the Markov-chain concentration bound
//! with a finite-chain test oracle.

mod chain;
mod constants;
mod eq12;
mod error;
mod mean;
mod multi;
mod stationary;

pub use chain::{
    fundamental_g, hoeffding_chain_bound, sample_chain_average, stationary_distribution,
    two_state_test_chain,
};
pub use constants::{convergence_rate_eta, rate_ceiling, s_star, theory_constants, TheoryConstants};
pub use eq12::{assemble_eq12, eq12_residual, solve_eq12};
pub use error::OracleError;
pub use mean::{mean_matrices, mean_matrices_from_interaction, MeanDynamics};
pub use multi::multi_community_inverse;
pub use stationary::{
    chi_gap, chi_gap_from_parts, delta_from_parts, stationary_mean_closed_form,
    stationary_mean_solve, StationaryProfile, TwoCommunityCounts,
};
