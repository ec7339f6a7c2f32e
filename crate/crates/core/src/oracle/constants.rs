//! Sample-complexity threshold t₀, the recovery probability bound, the SA
//! drift coefficient η, and the concentration-bound scale s_*.

use super::{delta_from_parts, mean_matrices, OracleError, TwoCommunityCounts};
use crate::model::BlockGossipModel;

/// The constants behind the finite-sample recovery bound: t₀ = 4δ·c_Ā·c_{n_r}·c_s/c_w
/// with c_Ā = 1/(1−ρ(Ā)), c_{n_r} = n_r^{3/2}(n_r+1),
/// c_s = max{|s̲|,|s̄|}/|n_{s1}·1ᵀx^{s2} − n_{s2}·1ᵀx^{s1}|, c_w = |w_s²−w_d²|.
#[derive(Debug, Clone)]
pub struct TheoryConstants {
    pub t0: f64,
    pub c_a: f64,
    pub c_nr: f64,
    pub c_s: f64,
    pub c_w: f64,
    pub delta: f64,
    pub eta: f64,
    pub s_star: f64,
    pub rho_a: f64,
    pub n_r: usize,
}

impl TheoryConstants {
    /// Lower bound on the all-labels-correct probability at time t:
    /// 1 − 2n_r·exp{−2(t−t₀)²/(t₀²t)}, clamped to [0, 1]; the raw bound is
    /// vacuous near t₀.
    pub fn recovery_bound(&self, t: f64) -> f64 {
        if t <= self.t0 {
            return 0.0;
        }
        let d = t - self.t0;
        let raw = 1.0 - 2.0 * self.n_r as f64 * (-2.0 * d * d / (self.t0 * self.t0 * t)).exp();
        raw.clamp(0.0, 1.0)
    }
}

/// η = (w_s·n₂ + w_d·n₁)(n_{s1}·1ᵀx^{s2} − n_{s2}·1ᵀx^{s1})/(δ·n₁·n₂):
/// the drift coefficient of the SA recursion; zero exactly when the
/// identifiability assumption fails.
pub fn convergence_rate_eta(model: &BlockGossipModel) -> Result<f64, OracleError> {
    let counts = TwoCommunityCounts::of(model)?;
    let (w_s, w_d) = (model.w_s(), model.w_d());
    let delta = delta_from_parts(w_s, w_d, &counts);
    let (n1, n2) = (counts.n1 as f64, counts.n2 as f64);
    let disagreement =
        counts.n_s1 as f64 * model.stubborn_sum(1) - counts.n_s2 as f64 * model.stubborn_sum(0);
    Ok((w_s * n2 + w_d * n1) * disagreement / (delta * n1 * n2))
}

/// Admissible a.s. rate ceiling min{1/2, a|η|} for step parameter a:
/// (ŵ−w) = o(t^{−d}) for every d below it.
pub fn rate_ceiling(step_a: f64, eta: f64) -> f64 {
    (step_a * eta.abs()).min(0.5)
}

/// Analytic bound on the gossip chain's ‖g‖_s:
/// s_* = 2√n_r·max{|s̄|,|s̲|}/(1−ρ(Ā)).
pub fn s_star(model: &BlockGossipModel) -> Result<f64, OracleError> {
    let (lo, hi) = model.state_box().ok_or(OracleError::NoStubbornAgents)?;
    let rho = mean_matrices(model).spectral_radius();
    if rho >= 1.0 {
        return Err(OracleError::NotSchurStable { rho });
    }
    let n_r = model.assignment().num_regular() as f64;
    Ok(2.0 * n_r.sqrt() * lo.abs().max(hi.abs()) / (1.0 - rho))
}

/// All theory constants of a two-community model. Rejects models whose
/// stubborn community means coincide (the c_s denominator vanishes).
pub fn theory_constants(model: &BlockGossipModel) -> Result<TheoryConstants, OracleError> {
    let counts = TwoCommunityCounts::of(model)?;
    let (lo, hi) = model.state_box().ok_or(OracleError::NoStubbornAgents)?;
    let disagreement =
        counts.n_s1 as f64 * model.stubborn_sum(1) - counts.n_s2 as f64 * model.stubborn_sum(0);
    if disagreement == 0.0 {
        return Err(OracleError::AssumptionTwoViolated);
    }
    let dynamics = mean_matrices(model);
    let rho_a = dynamics.spectral_radius();
    if rho_a >= 1.0 {
        return Err(OracleError::NotSchurStable { rho: rho_a });
    }
    let (w_s, w_d) = (model.w_s(), model.w_d());
    let n_r = model.assignment().num_regular();
    let delta = delta_from_parts(w_s, w_d, &counts);
    let c_a = 1.0 / (1.0 - rho_a);
    let c_nr = (n_r as f64).powf(1.5) * (n_r as f64 + 1.0);
    let c_s = lo.abs().max(hi.abs()) / disagreement.abs();
    let c_w = (w_s * w_s - w_d * w_d).abs();
    let t0 = 4.0 * delta * c_a * c_nr * c_s / c_w;
    let eta = convergence_rate_eta(model)?;
    let s_star = 2.0 * (n_r as f64).sqrt() * lo.abs().max(hi.abs()) / (1.0 - rho_a);
    Ok(TheoryConstants {
        t0,
        c_a,
        c_nr,
        c_s,
        c_w,
        delta,
        eta,
        s_star,
        rho_a,
        n_r,
    })
}

/// Raw right-hand side of the Markov-chain concentration bound:
/// 2·exp{−(tε − 2‖g‖_s)²/(2t‖g‖_s²)}, valid for t > 2‖g‖_s/ε. Not clamped;
/// the bound is vacuous (≈2) at the hypothesis boundary.
pub fn hoeffding_chain_bound_raw(epsilon: f64, t: f64, g_sup: f64) -> Result<f64, OracleError> {
    if !(epsilon > 0.0) {
        return Err(OracleError::BadEpsilon(epsilon));
    }
    if g_sup == 0.0 {
        // Constant function: the time average never deviates.
        return Ok(0.0);
    }
    let threshold = 2.0 * g_sup / epsilon;
    if t <= threshold {
        return Err(OracleError::LemmaHypothesis { t, threshold });
    }
    let num = t * epsilon - 2.0 * g_sup;
    Ok(2.0 * (-(num * num) / (2.0 * t * g_sup * g_sup)).exp())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::chi_gap;

    fn hand_instance() -> BlockGossipModel {
        BlockGossipModel::from_counts_and_ratio(&[(1, 1), (1, 1)], 3.0, 0.5, vec![1.0, -1.0])
            .unwrap()
    }

    #[test]
    fn hand_instance_constants_match_term_by_term_derivation() {
        let tc = theory_constants(&hand_instance()).unwrap();
        assert!((tc.c_w - 0.08).abs() <= 1e-15);
        assert!((tc.c_s - 0.5).abs() <= 1e-15);
        assert!((tc.c_nr - 2.0f64.powf(1.5) * 3.0).abs() <= 1e-12);
        assert!((tc.c_a - 5.0).abs() <= 1e-10);
        assert!((tc.delta - 0.24).abs() <= 1e-15);
        // 4·0.24·5·(2√2·3)·0.5/0.08 = 180√2
        let expected = 180.0 * 2.0f64.sqrt();
        assert!((tc.t0 - expected).abs() <= 1e-9, "t0 = {}", tc.t0);
        // reproduced from parts
        let recomposed = 4.0 * tc.delta * tc.c_a * tc.c_nr * tc.c_s / tc.c_w;
        assert!((tc.t0 - recomposed).abs() <= 1e-12 * tc.t0);
    }

    #[test]
    fn hand_instance_eta_is_minus_five_thirds() {
        let eta = convergence_rate_eta(&hand_instance()).unwrap();
        assert!((eta + 5.0 / 3.0).abs() <= 1e-12, "eta = {eta}");
        assert_eq!(rate_ceiling(1.0, eta), 0.5);
        assert!((rate_ceiling(0.1, eta) - 1.0 / 6.0).abs() <= 1e-12);
    }

    #[test]
    fn swapping_stubborn_states_flips_eta_sign() {
        let base = hand_instance();
        let swapped = BlockGossipModel::from_counts_and_ratio(
            &[(1, 1), (1, 1)],
            3.0,
            0.5,
            vec![-1.0, 1.0],
        )
        .unwrap();
        let a = convergence_rate_eta(&base).unwrap();
        let b = convergence_rate_eta(&swapped).unwrap();
        assert_eq!(a, -b);
    }

    #[test]
    fn eta_vanishes_exactly_when_identifiability_fails() {
        let model = BlockGossipModel::from_counts_and_ratio(
            &[(1, 1), (1, 1)],
            3.0,
            0.5,
            vec![0.25, 0.25],
        )
        .unwrap();
        assert_eq!(convergence_rate_eta(&model).unwrap(), 0.0);
        assert!(matches!(
            theory_constants(&model),
            Err(OracleError::AssumptionTwoViolated)
        ));
        let gap = chi_gap(&model).unwrap();
        assert_eq!(gap, 0.0);
    }

    #[test]
    fn recovery_bound_is_clamped_and_nondecreasing() {
        let tc = theory_constants(&hand_instance()).unwrap();
        assert_eq!(tc.recovery_bound(tc.t0), 0.0);
        let mut prev = 0.0;
        let mut t = tc.t0 + 1.0;
        // For t >> t₀ the exponent behaves like 2t/t₀², so reaching a tight
        // bound takes t of order t₀².
        while t < tc.t0 * tc.t0 * 10.0 {
            let b = tc.recovery_bound(t);
            assert!((0.0..=1.0).contains(&b));
            assert!(b + 1e-15 >= prev, "bound decreased at t = {t}");
            prev = b;
            t *= 1.3;
        }
        assert!(prev > 0.99, "bound should approach 1, got {prev}");
    }

    #[test]
    fn chain_bound_boundary_is_vacuous_and_decreasing_beyond() {
        let g = 1.5;
        let eps = 0.1;
        let boundary = 2.0 * g / eps;
        assert!(matches!(
            hoeffding_chain_bound_raw(eps, boundary, g),
            Err(OracleError::LemmaHypothesis { .. })
        ));
        let near = hoeffding_chain_bound_raw(eps, boundary * (1.0 + 1e-12), g).unwrap();
        assert!((near - 2.0).abs() < 1e-6, "boundary bound {near}");
        let mut prev = near;
        for mult in [1.5, 2.0, 4.0, 8.0, 32.0] {
            let b = hoeffding_chain_bound_raw(eps, boundary * mult, g).unwrap();
            assert!(b < prev, "bound must strictly decrease, {b} !< {prev}");
            prev = b;
        }
    }

    #[test]
    fn s_star_matches_hand_evaluation() {
        // 2·√2·1/(1−0.8) = 10√2
        let s = s_star(&hand_instance()).unwrap();
        assert!((s - 10.0 * 2.0f64.sqrt()).abs() <= 1e-9);
    }
}
