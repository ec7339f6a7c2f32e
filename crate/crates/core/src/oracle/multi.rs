//! Multi-community closed form for (I−Ā)^{−1} and (I−Ā)^{−1}B̄.
//!
//! The K-community inverse is assembled from the combinatorial quantities
//!
//! ```text
//! d_A(S) = −Σ_{T⊆S} (w_d−w_s)^{|T|−1} (w_s+(|T|−1)w_d) Π_{l∈T} n_{rl}/a_l,
//! e_A(S) = Π_{p∈S} (1 + (w_d−w_s)·n_{rp}/a_p),
//! a_i    = w_s·n_i + w_d·Σ_{j≠i} n_j,
//! ```
//!
//! with the empty-set conventions d_A(∅) = e_A(∅) = 1 (the T = ∅ term reads
//! (w_d−w_s)^{−1}(w_s−w_d) = −1, so the conventions fall out of the formula
//! itself). Ordered p-tuples from S are exactly the p-subsets, so subsets
//! are enumerated by bitmask. Blocks:
//!
//! ```text
//! (I−Ā)^{−1}    = (1−q)^{−1} [Ã^{(ij)}],
//! Ã^{(ii)}      = a_i^{−1} [I − n_{ri}^{−1}(1 − d_A([K]∖i)/d_A([K])) 11ᵀ],
//! Ã^{(ij)}      = w_d e_A([K]∖{i,j}) 11ᵀ / (a_i a_j d_A([K])),
//! (I−Ā)^{−1}B̄  = [B̃^{(ij)}]           (the (1−q) factors cancel),
//! B̃^{(ii)}     = n_{ri}^{−1}(d_A([K]∖i)/d_A([K]) − 1) 11ᵀ,
//! B̃^{(ij)}     = w_d e_A([K]∖{i,j}) 11ᵀ / (a_i d_A([K])).
//! ```

use nalgebra::DMatrix;

use super::OracleError;
use crate::model::BlockGossipModel;

struct Combinatorics {
    w_s: f64,
    w_d: f64,
    /// n_{ri}/a_i per community.
    ratio: Vec<f64>,
}

impl Combinatorics {
    /// d_A over the communities selected by `mask`.
    fn d_a(&self, mask: u32) -> f64 {
        let members: Vec<usize> = (0..self.ratio.len()).filter(|&i| mask & (1 << i) != 0).collect();
        let mut total = 0.0;
        for sub in 0..(1u32 << members.len()) {
            let p = sub.count_ones() as i32;
            if p == 0 {
                // (w_d−w_s)^{−1}(w_s−w_d)·1 = −1 exactly.
                total += -1.0;
                continue;
            }
            let mut prod = 1.0;
            for (bit, &m) in members.iter().enumerate() {
                if sub & (1 << bit) != 0 {
                    prod *= self.ratio[m];
                }
            }
            total += (self.w_d - self.w_s).powi(p - 1)
                * (self.w_s + (p - 1) as f64 * self.w_d)
                * prod;
        }
        -total
    }

    fn e_a(&self, mask: u32) -> f64 {
        (0..self.ratio.len())
            .filter(|&i| mask & (1 << i) != 0)
            .map(|i| 1.0 + (self.w_d - self.w_s) * self.ratio[i])
            .product()
    }
}

/// Closed-form ((I−Ā)^{−1}, (I−Ā)^{−1}B̄) for a K-community block model,
/// K ≥ 2, with at least one stubborn agent. Rows/columns follow the
/// model's regular/stubborn slot order.
pub fn multi_community_inverse(
    model: &BlockGossipModel,
) -> Result<(DMatrix<f64>, DMatrix<f64>), OracleError> {
    let assignment = model.assignment();
    let k = assignment.num_communities();
    if k < 2 {
        return Err(OracleError::NeedTwoCommunities(k));
    }
    if assignment.num_stubborn() == 0 {
        return Err(OracleError::NoStubbornAgents);
    }
    debug_assert!(k <= 31, "bitmask subset enumeration bound");

    let (w_s, w_d, q) = (model.w_s(), model.w_d(), model.q());
    let n: usize = assignment.len();
    let sizes = assignment.community_sizes();
    let a: Vec<f64> = sizes
        .iter()
        .map(|&nk| w_s * nk as f64 + w_d * (n - nk) as f64)
        .collect();
    let n_rk = assignment.regular_per_community();
    let comb = Combinatorics {
        w_s,
        w_d,
        ratio: (0..k).map(|i| n_rk[i] as f64 / a[i]).collect(),
    };

    let full: u32 = (1 << k) - 1;
    let d_full = comb.d_a(full);
    // Diagonal-block rank-one coefficient per community.
    let diag_coeff: Vec<f64> = (0..k)
        .map(|i| (1.0 - comb.d_a(full & !(1 << i)) / d_full) / n_rk[i] as f64)
        .collect();

    let labels = assignment.labels();
    let regular = assignment.regular_agents();
    let stubborn = assignment.stubborn_agents();
    let n_r = regular.len();
    let n_s = stubborn.len();
    let scale = 1.0 / (1.0 - q);

    let mut inv = DMatrix::zeros(n_r, n_r);
    for (ri, &gi) in regular.iter().enumerate() {
        let ci = labels[gi];
        for (rj, &gj) in regular.iter().enumerate() {
            let cj = labels[gj];
            let value = if ci == cj {
                let identity = if ri == rj { 1.0 } else { 0.0 };
                (identity - diag_coeff[ci]) / a[ci]
            } else {
                w_d * comb.e_a(full & !(1 << ci) & !(1 << cj)) / (a[ci] * a[cj] * d_full)
            };
            inv[(ri, rj)] = scale * value;
        }
    }

    let mut inv_b = DMatrix::zeros(n_r, n_s);
    for (ri, &gi) in regular.iter().enumerate() {
        let ci = labels[gi];
        for (sj, &gj) in stubborn.iter().enumerate() {
            let cj = labels[gj];
            inv_b[(ri, sj)] = if ci == cj {
                (comb.d_a(full & !(1 << ci)) / d_full - 1.0) / n_rk[ci] as f64
            } else {
                w_d * comb.e_a(full & !(1 << ci) & !(1 << cj)) / (a[ci] * d_full)
            };
        }
    }

    Ok((inv, inv_b))
}
