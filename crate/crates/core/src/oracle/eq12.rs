//! The 2×2 parameter system behind the interaction estimator, assembled
//! from oracle χ values as a closed-form reference:
//!
//! ```text
//! (n_{s1}χ₁ − 1ᵀx^{s1})·x + (n₂χ₁ − n_{r2}χ₂ − 1ᵀx^{s2})·y = 0
//! (n₁(n₁−1) + n₂(n₂−1))·x + 2n₁n₂·y = 2
//! ```
//!
//! whose unique solution is (w_s, w_d) under the identifiability assumption.
//! The estimator solves this by stochastic approximation; the assembled
//! system is a diagnostic/reference route.

use nalgebra::{Matrix2, Vector2};

use super::{stationary_mean_closed_form, OracleError, TwoCommunityCounts};
use crate::model::BlockGossipModel;

/// Coefficient matrix and right-hand side of the system.
pub fn assemble_eq12(model: &BlockGossipModel) -> Result<(Matrix2<f64>, Vector2<f64>), OracleError> {
    let counts = TwoCommunityCounts::of(model)?;
    let profile = stationary_mean_closed_form(model)?;
    let (n1, n2) = (counts.n1 as f64, counts.n2 as f64);
    let h1 = counts.n_s1 as f64 * profile.chi1 - model.stubborn_sum(0);
    let h2 = n2 * profile.chi1 - counts.n_r2 as f64 * profile.chi2 - model.stubborn_sum(1);
    let within = n1 * (n1 - 1.0) + n2 * (n2 - 1.0);
    let cross = 2.0 * n1 * n2;
    Ok((
        Matrix2::new(h1, h2, within, cross),
        Vector2::new(0.0, 2.0),
    ))
}

/// Solves the assembled system for (w_s, w_d).
pub fn solve_eq12(model: &BlockGossipModel) -> Result<(f64, f64), OracleError> {
    let (m, rhs) = assemble_eq12(model)?;
    let sol = m.lu().solve(&rhs).ok_or(OracleError::SolveFailed)?;
    Ok((sol[0], sol[1]))
}

/// Residual of the true (w_s, w_d) in the first (homogeneous) equation; the
/// second holds by the model's own normalization.
pub fn eq12_residual(model: &BlockGossipModel) -> Result<f64, OracleError> {
    let (m, _) = assemble_eq12(model)?;
    Ok((m[(0, 0)] * model.w_s() + m[(0, 1)] * model.w_d()).abs())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hand_instance() -> BlockGossipModel {
        BlockGossipModel::from_counts_and_ratio(&[(1, 1), (1, 1)], 3.0, 0.5, vec![1.0, -1.0])
            .unwrap()
    }

    #[test]
    fn true_parameters_satisfy_the_assembled_system() {
        let model = hand_instance();
        assert!(eq12_residual(&model).unwrap() <= 1e-10);
        let (w_s, w_d) = solve_eq12(&model).unwrap();
        assert!((w_s - model.w_s()).abs() <= 1e-10);
        assert!((w_d - model.w_d()).abs() <= 1e-10);
    }

    #[test]
    fn hand_instance_h_coefficients() {
        // h₁* = 1/3 − 1 = −2/3, h₂* = 2·(1/3) + 1/3 + 1 = 2.
        let (m, rhs) = assemble_eq12(&hand_instance()).unwrap();
        assert!((m[(0, 0)] + 2.0 / 3.0).abs() <= 1e-12);
        assert!((m[(0, 1)] - 2.0).abs() <= 1e-12);
        assert_eq!(m[(1, 0)], 4.0);
        assert_eq!(m[(1, 1)], 8.0);
        assert_eq!(rhs[1], 2.0);
    }
}
