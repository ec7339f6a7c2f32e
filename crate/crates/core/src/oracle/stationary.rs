//! Stationary mean of the regular states: dense solve of (I−Ā)x = B̄xˢ and
//! the two-community block closed form
//!
//! ```text
//! x^r = [χ₁·1ᵀ, χ₂·1ᵀ]ᵀ,   χ_k = (γ_k1·1ᵀx^{s1} + γ_k2·1ᵀx^{s2})/δ,
//! γ_kk    = w_s²·n_{s,3−k} + w_s w_d·n_k + w_d²·n_{r,3−k},
//! γ_k,3−k = w_d·(w_s·n_{3−k} + w_d·n_k),
//! δ = w_s²·n_{s1}n_{s2} + w_s w_d·(n₁n_{s1}+n₂n_{s2}) + w_d²·(n₁n₂−n_{r1}n_{r2}),
//! ```
//!
//! with 1ᵀx^{sk} := 0 when n_{sk} = 0. The χ-gap identity
//! χ₁−χ₂ = (w_s²−w_d²)(n_{s2}·1ᵀx^{s1} − n_{s1}·1ᵀx^{s2})/δ is exposed
//! separately: it is nonzero exactly when both communities hold stubborn
//! agents with distinct mean states and w_s ≠ w_d.

use nalgebra::{DMatrix, DVector};

use super::{MeanDynamics, OracleError};
use crate::model::BlockGossipModel;

/// Absolute residual tolerance for the dense stationary solve.
const SOLVE_TOL: f64 = 1e-10;

/// Two-community size bookkeeping for the closed forms.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TwoCommunityCounts {
    pub n1: usize,
    pub n2: usize,
    pub n_r1: usize,
    pub n_r2: usize,
    pub n_s1: usize,
    pub n_s2: usize,
}

impl TwoCommunityCounts {
    pub fn of(model: &BlockGossipModel) -> Result<Self, OracleError> {
        let a = model.assignment();
        if a.num_communities() != 2 {
            return Err(OracleError::NeedTwoCommunities(a.num_communities()));
        }
        Ok(Self {
            n1: a.community_sizes()[0],
            n2: a.community_sizes()[1],
            n_r1: a.regular_per_community()[0],
            n_r2: a.regular_per_community()[1],
            n_s1: a.stubborn_per_community()[0],
            n_s2: a.stubborn_per_community()[1],
        })
    }
}

/// δ of the closed-form inverse.
pub fn delta_from_parts(w_s: f64, w_d: f64, c: &TwoCommunityCounts) -> f64 {
    let (n1, n2) = (c.n1 as f64, c.n2 as f64);
    let (nr1, nr2) = (c.n_r1 as f64, c.n_r2 as f64);
    let (ns1, ns2) = (c.n_s1 as f64, c.n_s2 as f64);
    w_s * w_s * ns1 * ns2 + w_s * w_d * (n1 * ns1 + n2 * ns2) + w_d * w_d * (n1 * n2 - nr1 * nr2)
}

fn gammas_from_parts(w_s: f64, w_d: f64, c: &TwoCommunityCounts) -> [[f64; 2]; 2] {
    let n = [c.n1 as f64, c.n2 as f64];
    let nr = [c.n_r1 as f64, c.n_r2 as f64];
    let ns = [c.n_s1 as f64, c.n_s2 as f64];
    let mut g = [[0.0; 2]; 2];
    for k in 0..2 {
        let other = 1 - k;
        g[k][k] = w_s * w_s * ns[other] + w_s * w_d * n[k] + w_d * w_d * nr[other];
        g[k][other] = w_d * (w_s * n[other] + w_d * n[k]);
    }
    g
}

/// Stationary profile of a two-community block model.
#[derive(Debug, Clone)]
pub struct StationaryProfile {
    pub chi1: f64,
    pub chi2: f64,
    pub delta: f64,
    pub gammas: [[f64; 2]; 2],
    /// Block-constant stationary mean, in regular-slot order.
    pub x_r: Vec<f64>,
}

impl StationaryProfile {
    pub fn chi_gap(&self) -> f64 {
        self.chi1 - self.chi2
    }
}

/// Solves (I−Ā)x = B̄xˢ by dense LU; rejects unstable mean dynamics and
/// checks the residual to 1e−10.
pub fn stationary_mean_solve(
    dynamics: &MeanDynamics,
    x_s: &[f64],
) -> Result<Vec<f64>, OracleError> {
    if !dynamics.is_schur_stable() {
        return Err(OracleError::NotSchurStable {
            rho: dynamics.spectral_radius(),
        });
    }
    let n_r = dynamics.n_regular();
    let xs = DVector::from_column_slice(x_s);
    let rhs = &dynamics.b_bar * &xs;
    let system = DMatrix::identity(n_r, n_r) - &dynamics.a_bar;
    let solution = system
        .clone()
        .lu()
        .solve(&rhs)
        .ok_or(OracleError::SolveFailed)?;
    let residual = (&system * &solution - &rhs).norm();
    if residual > SOLVE_TOL {
        return Err(OracleError::ResidualTooLarge {
            residual,
            tolerance: SOLVE_TOL,
        });
    }
    Ok(solution.as_slice().to_vec())
}

/// Closed-form stationary profile (two communities, at least one stubborn
/// agent).
pub fn stationary_mean_closed_form(
    model: &BlockGossipModel,
) -> Result<StationaryProfile, OracleError> {
    let counts = TwoCommunityCounts::of(model)?;
    if model.assignment().num_stubborn() == 0 {
        return Err(OracleError::NoStubbornAgents);
    }
    let (w_s, w_d) = (model.w_s(), model.w_d());
    let delta = delta_from_parts(w_s, w_d, &counts);
    let gammas = gammas_from_parts(w_s, w_d, &counts);
    let sums = [model.stubborn_sum(0), model.stubborn_sum(1)];
    let chi1 = (gammas[0][0] * sums[0] + gammas[0][1] * sums[1]) / delta;
    let chi2 = (gammas[1][0] * sums[0] + gammas[1][1] * sums[1]) / delta;
    let chis = [chi1, chi2];
    let labels = model.assignment().labels();
    let x_r = model
        .assignment()
        .regular_agents()
        .iter()
        .map(|&agent| chis[labels[agent]])
        .collect();
    Ok(StationaryProfile {
        chi1,
        chi2,
        delta,
        gammas,
        x_r,
    })
}

/// χ₁ − χ₂ through the explicit identity, for raw parameters. Accepts
/// w_s = w_d so hypothetical boundary inputs evaluate to exactly zero.
pub fn chi_gap_from_parts(
    w_s: f64,
    w_d: f64,
    counts: &TwoCommunityCounts,
    stubborn_sum1: f64,
    stubborn_sum2: f64,
) -> f64 {
    let delta = delta_from_parts(w_s, w_d, counts);
    (w_s * w_s - w_d * w_d) * (counts.n_s2 as f64 * stubborn_sum1 - counts.n_s1 as f64 * stubborn_sum2)
        / delta
}

/// χ₁ − χ₂ of a model via the identity (not via the χ's themselves).
pub fn chi_gap(model: &BlockGossipModel) -> Result<f64, OracleError> {
    let counts = TwoCommunityCounts::of(model)?;
    Ok(chi_gap_from_parts(
        model.w_s(),
        model.w_d(),
        &counts,
        model.stubborn_sum(0),
        model.stubborn_sum(1),
    ))
}
