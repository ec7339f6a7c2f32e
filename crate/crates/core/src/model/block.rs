use super::{CommunityAssignment, ModelError};

/// Relative tolerance for the pair-probability normalization check. All test
/// configurations are exact rationals, so a tight tolerance catches
/// construction bugs rather than rounding noise.
pub(crate) const NORMALIZATION_TOL: f64 = 1e-12;

/// Complete generative model over an exact block interaction matrix: an
/// assignment, within/cross pair probabilities, the averaging weight, and the
/// frozen stubborn states.
#[derive(Debug, Clone)]
pub struct BlockGossipModel {
    assignment: CommunityAssignment,
    w_s: f64,
    w_d: f64,
    q: f64,
    /// One state per stubborn agent, in stubborn-slot order.
    stubborn_states: Vec<f64>,
}

/// Sum of the normalization equation's coefficients for given community
/// sizes: (within_pairs_x2, cross_pairs_x2) = (Σ n_k(n_k−1), Σ_{k≠l} n_k n_l).
fn pair_coefficients(sizes: &[usize]) -> (f64, f64) {
    let total: usize = sizes.iter().sum();
    let within: f64 = sizes.iter().map(|&nk| (nk * (nk - 1)) as f64).sum();
    let cross: f64 = sizes
        .iter()
        .map(|&nk| (nk * (total - nk)) as f64)
        .sum();
    (within, cross)
}

/// Solves the pair-probability normalization for two communities given the
/// ratio w_s/w_d: (n₁(n₁−1)+n₂(n₂−1))·w_s + 2n₁n₂·w_d = 2.
pub fn solve_interaction_probs(
    n1: usize,
    n2: usize,
    ratio: f64,
) -> Result<(f64, f64), ModelError> {
    solve_interaction_probs_k(&[n1, n2], ratio)
}

/// K-community version of [`solve_interaction_probs`] (normalization of
/// the multi-community model).
pub fn solve_interaction_probs_k(sizes: &[usize], ratio: f64) -> Result<(f64, f64), ModelError> {
    if !(ratio > 0.0) || ratio == 1.0 || !ratio.is_finite() {
        return Err(ModelError::BadRatio(ratio));
    }
    let n: usize = sizes.iter().sum();
    if n < 2 {
        return Err(ModelError::TooFewAgents(n));
    }
    if sizes.iter().any(|&nk| nk == 0) {
        return Err(ModelError::EmptyCommunity {
            community: sizes.iter().position(|&nk| nk == 0).unwrap(),
            num_communities: sizes.len(),
        });
    }
    let (within, cross) = pair_coefficients(sizes);
    let w_d = 2.0 / (ratio * within + cross);
    Ok((ratio * w_d, w_d))
}

impl BlockGossipModel {
    /// Validates Assumption-1-style constraints: positive distinct
    /// probabilities, q ∈ [0,1), the pair normalization to relative
    /// tolerance 1e−12, and one stubborn state per stubborn agent.
    pub fn new(
        assignment: CommunityAssignment,
        w_s: f64,
        w_d: f64,
        q: f64,
        stubborn_states: Vec<f64>,
    ) -> Result<Self, ModelError> {
        if !(w_s > 0.0) || !(w_d > 0.0) {
            return Err(ModelError::NonPositiveWeights { w_s, w_d });
        }
        if w_s == w_d {
            return Err(ModelError::EqualWeights(w_s));
        }
        if !(0.0..1.0).contains(&q) {
            return Err(ModelError::BadAveragingWeight(q));
        }
        if stubborn_states.len() != assignment.num_stubborn() {
            return Err(ModelError::LengthMismatch {
                what: "stubborn_states",
                got: stubborn_states.len(),
                expected: assignment.num_stubborn(),
            });
        }
        let (within, cross) = pair_coefficients(assignment.community_sizes());
        let sum = within * w_s + cross * w_d;
        let residual = (sum - 2.0).abs();
        let tolerance = NORMALIZATION_TOL * sum.abs().max(1.0);
        if residual > tolerance {
            return Err(ModelError::Normalization {
                sum: sum / 2.0,
                residual,
                tolerance,
            });
        }
        Ok(Self {
            assignment,
            w_s,
            w_d,
            q,
            stubborn_states,
        })
    }

    /// Convenience constructor from per-community (regular, stubborn) counts
    /// and the w_s/w_d ratio, in the canonical sorted layout.
    pub fn from_counts_and_ratio(
        counts: &[(usize, usize)],
        ratio: f64,
        q: f64,
        stubborn_states: Vec<f64>,
    ) -> Result<Self, ModelError> {
        let assignment = CommunityAssignment::sorted_blocks(counts)?;
        let sizes: Vec<usize> = counts.iter().map(|&(r, s)| r + s).collect();
        let (w_s, w_d) = solve_interaction_probs_k(&sizes, ratio)?;
        Self::new(assignment, w_s, w_d, q, stubborn_states)
    }

    pub fn assignment(&self) -> &CommunityAssignment {
        &self.assignment
    }

    pub fn w_s(&self) -> f64 {
        self.w_s
    }

    pub fn w_d(&self) -> f64 {
        self.w_d
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn stubborn_states(&self) -> &[f64] {
        &self.stubborn_states
    }

    pub fn n(&self) -> usize {
        self.assignment.len()
    }

    /// Pairwise probability between two distinct agents.
    pub fn pair_probability(&self, i: usize, j: usize) -> f64 {
        if self.assignment.community_of(i) == self.assignment.community_of(j) {
            self.w_s
        } else {
            self.w_d
        }
    }

    /// Sum of community-k stubborn states (zero when the community has no
    /// stubborn agents, matching the closed forms' convention).
    pub fn stubborn_sum(&self, community: usize) -> f64 {
        self.assignment
            .stubborn_agents()
            .iter()
            .enumerate()
            .filter(|&(_, &agent)| self.assignment.community_of(agent) == community)
            .map(|(slot, _)| self.stubborn_states[slot])
            .sum()
    }

    /// State box [s̲, s̄] spanned by the stubborn states; None without
    /// stubborn agents.
    pub fn state_box(&self) -> Option<(f64, f64)> {
        if self.stubborn_states.is_empty() {
            return None;
        }
        let lo = self.stubborn_states.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = self
            .stubborn_states
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max);
        Some((lo, hi))
    }

    /// Both communities hold stubborn agents with distinct community-mean
    /// states — the identifiability condition for the χ-gap. Evaluated in
    /// the cross-multiplied form n_{s2}·Σ₁ ≠ n_{s1}·Σ₂ so constructed
    /// boundary instances compare exactly.
    pub fn assumption2_holds(&self) -> bool {
        if self.assignment.num_communities() != 2 {
            return false;
        }
        let ns = self.assignment.stubborn_per_community();
        if ns[0] == 0 || ns[1] == 0 {
            return false;
        }
        let s1 = self.stubborn_sum(0);
        let s2 = self.stubborn_sum(1);
        ns[1] as f64 * s1 != ns[0] as f64 * s2
    }
}
