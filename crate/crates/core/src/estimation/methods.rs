//! Name-keyed registry of interchangeable recovery methods.
//!
//! Every §6 recovery variant sits behind one trait: the estimator's own
//! threshold rule, k-means and k-means++ on the same running averages, and
//! the privileged spectral baseline on the activation stream. Experiments
//! select methods by name from configs or the CLI.

use rand_chacha::ChaCha8Rng;

use super::{
    estimate_w_from_activations, kmeans_1d, recover_labels_from_averages, spectral_cluster,
    ActivationCounter, EstimationError, KMeansInit,
};
use crate::model::CommunityAssignment;

/// Everything a recovery method may look at when asked for labels at time t.
/// `averages` is S(t) over regular slots; `activations` is only present for
/// methods that declare the need (the privileged information of the §6
/// comparison).
pub struct RecoveryContext<'a> {
    pub averages: &'a [f64],
    pub assignment: &'a CommunityAssignment,
    pub activations: Option<&'a ActivationCounter>,
    pub t: u64,
}

/// One interchangeable recovery strategy producing {0,1} labels for all
/// agents.
pub trait RecoveryMethod: Sync {
    fn name(&self) -> &'static str;
    fn needs_activations(&self) -> bool {
        false
    }
    fn recover(
        &self,
        ctx: &RecoveryContext<'_>,
        rng: &mut ChaCha8Rng,
    ) -> Result<Vec<u8>, EstimationError>;
}

/// The estimator's own line-4 rule: strict above-grand-mean threshold plus
/// witness inheritance.
struct ThresholdMethod;

impl RecoveryMethod for ThresholdMethod {
    fn name(&self) -> &'static str {
        "alg1"
    }

    fn recover(
        &self,
        ctx: &RecoveryContext<'_>,
        _rng: &mut ChaCha8Rng,
    ) -> Result<Vec<u8>, EstimationError> {
        Ok(recover_labels_from_averages(ctx.averages, ctx.assignment))
    }
}

struct KMeansMethod {
    init: KMeansInit,
    name: &'static str,
}

impl RecoveryMethod for KMeansMethod {
    fn name(&self) -> &'static str {
        self.name
    }

    fn recover(
        &self,
        ctx: &RecoveryContext<'_>,
        rng: &mut ChaCha8Rng,
    ) -> Result<Vec<u8>, EstimationError> {
        let clustering = kmeans_1d(ctx.averages, 2, self.init, rng)?;
        let assignment = ctx.assignment;
        let mut labels = vec![0u8; assignment.len()];
        for (slot, &agent) in assignment.regular_agents().iter().enumerate() {
            labels[agent] = clustering.labels[slot];
        }
        for &agent in assignment.stubborn_agents() {
            let witness = assignment.witness_of(agent).expect("validated witness");
            labels[agent] = labels[witness];
        }
        Ok(labels)
    }
}

struct SpectralMethod;

impl RecoveryMethod for SpectralMethod {
    fn name(&self) -> &'static str {
        "spectral"
    }

    fn needs_activations(&self) -> bool {
        true
    }

    fn recover(
        &self,
        ctx: &RecoveryContext<'_>,
        _rng: &mut ChaCha8Rng,
    ) -> Result<Vec<u8>, EstimationError> {
        let counter = ctx.activations.ok_or(EstimationError::MissingActivations)?;
        let w_hat = estimate_w_from_activations(counter)?;
        Ok(spectral_cluster(&w_hat).labels)
    }
}

static THRESHOLD: ThresholdMethod = ThresholdMethod;
static KMEANS: KMeansMethod = KMeansMethod {
    init: KMeansInit::Forgy,
    name: "kmeans",
};
static KMEANS_PP: KMeansMethod = KMeansMethod {
    init: KMeansInit::PlusPlus,
    name: "kmeans++",
};
static SPECTRAL: SpectralMethod = SpectralMethod;

static REGISTRY: [&dyn RecoveryMethod; 4] = [&THRESHOLD, &KMEANS, &KMEANS_PP, &SPECTRAL];

/// All registered methods, in the §6 comparison order.
pub fn registry() -> &'static [&'static dyn RecoveryMethod] {
    &REGISTRY
}

pub fn method_names() -> Vec<&'static str> {
    registry().iter().map(|m| m.name()).collect()
}

pub fn method_by_name(name: &str) -> Result<&'static dyn RecoveryMethod, EstimationError> {
    registry()
        .iter()
        .copied()
        .find(|m| m.name() == name)
        .ok_or_else(|| EstimationError::UnknownMethod(name.to_string()))
}
