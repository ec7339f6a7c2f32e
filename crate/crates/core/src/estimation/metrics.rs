//! Evaluation metrics: permutation-maximized accuracy, exact recovery, and
//! the exact-recovery frequency over replications.

use super::EstimationError;

/// Accuracy at time t: max over the two label permutations of the fraction
/// of agreeing agents.
pub fn accuracy(labels: &[u8], truth: &[u8]) -> Result<f64, EstimationError> {
    if labels.len() != truth.len() {
        return Err(EstimationError::LengthMismatch {
            a: labels.len(),
            b: truth.len(),
        });
    }
    if labels.is_empty() {
        return Ok(1.0);
    }
    let matches = labels.iter().zip(truth).filter(|(a, b)| a == b).count();
    Ok(matches.max(labels.len() - matches) as f64 / labels.len() as f64)
}

/// All labels correct up to a global permutation.
pub fn exact_recovery(labels: &[u8], truth: &[u8]) -> Result<bool, EstimationError> {
    Ok(accuracy(labels, truth)? == 1.0)
}

/// p_t: relative frequency of exact recovery over replications.
pub fn exact_recovery_rate(outcomes: &[bool]) -> f64 {
    if outcomes.is_empty() {
        return 0.0;
    }
    outcomes.iter().filter(|&&b| b).count() as f64 / outcomes.len() as f64
}
