//! Online single-pass consumer of the trajectory: Polyak averaging,
//! threshold-based community recovery, SA interaction-probability
//! estimation, the clustering baselines, and evaluation metrics.

mod algorithm1;
mod average;
mod error;
mod kmeans;
mod methods;
mod metrics;
mod spectral;

pub use algorithm1::{
    recover_labels_from_averages, run_algorithm1, run_algorithm1_with_sampler, Alg1Output,
    Alg1Runner, Alg1Settings, Alg1Snapshot,
};
pub use average::RunningAverage;
pub use error::EstimationError;
pub use kmeans::{kmeans_1d, KMeans1dResult, KMeansInit};
pub use methods::{method_by_name, method_names, registry, RecoveryContext, RecoveryMethod};
pub use metrics::{accuracy, exact_recovery, exact_recovery_rate};
pub use spectral::{estimate_w_from_activations, spectral_cluster, ActivationCounter};
