//! Gossip opinion dynamics with stubborn agents over two-community block
//! networks: generative model, tick-level simulator, closed-form oracles for
//! every stationary/limit quantity, and the online joint community-recovery +
//! interaction-probability estimator with its clustering baselines.
//!
//! Layout:
//! - [`model`]: community assignments, block interaction matrices, SBM
//!   sampling, normalization checks.
//! - [`dynamics`]: the pairwise-averaging process, alias-table edge sampling,
//!   observer hooks.
//! - [`oracle`]: mean dynamics, stationary means (dense solve and closed
//!   form), multi-community inverse, sample-complexity and rate constants,
//!   Markov-chain concentration bound with a finite-chain test oracle.
//! - [`estimation`]: running trajectory average, the joint
//!   recovery/estimation loop, k-means and spectral baselines, metrics, and
//!   the name-keyed recovery-method registry.

pub mod dynamics;
pub mod estimation;
pub mod model;
pub mod oracle;
pub mod rng;
