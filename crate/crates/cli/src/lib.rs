//! Experiment orchestration, configuration, bundled data, and result
//! emission behind the `gossip-blocks` binary.

pub mod config;
pub mod defaults;
pub mod experiments;
pub mod karate;
pub mod output;
