//! Mean update matrices Ā = E{A(t)}, B̄ = E{B(t)} and their spectral radius.
//!
//! Ā's off-diagonal entry between regular agents i ≠ j is (1−q)·w_ij, its
//! diagonal is 1 − (1−q)·Σ_{j≠i} w_ij, and B̄ carries the regular-to-stubborn
//! entries; [Ā B̄] is row-stochastic. For the block model this reduces to
//! the two-block closed form with a_k = w_s·n_k + w_d·Σ_{l≠k} n_l, built
//! here directly from the community counts (not via the dense interaction
//! matrix) so it can serve as an independent route in tests.

use nalgebra::{DMatrix, SymmetricEigen};

use crate::model::{BlockGossipModel, CommunityAssignment, InteractionMatrix};

#[derive(Debug, Clone)]
pub struct MeanDynamics {
    pub a_bar: DMatrix<f64>,
    pub b_bar: DMatrix<f64>,
    spectral_radius: f64,
}

impl MeanDynamics {
    fn from_parts(a_bar: DMatrix<f64>, b_bar: DMatrix<f64>) -> Self {
        // Ā is symmetric for any symmetric interaction matrix, so the
        // spectral radius is the largest absolute eigenvalue.
        let spectral_radius = if a_bar.is_empty() {
            0.0
        } else {
            SymmetricEigen::new(a_bar.clone())
                .eigenvalues
                .iter()
                .fold(0.0f64, |m, &l| m.max(l.abs()))
        };
        Self {
            a_bar,
            b_bar,
            spectral_radius,
        }
    }

    pub fn spectral_radius(&self) -> f64 {
        self.spectral_radius
    }

    /// Cor. of the block form: with at least one stubborn agent the mean
    /// dynamics are Schur stable. Decided to the eigensolve tolerance, so
    /// the doubly stochastic no-stubborn limit (ρ = 1 up to rounding)
    /// reports unstable.
    pub fn is_schur_stable(&self) -> bool {
        self.spectral_radius < 1.0 - 1e-12
    }

    pub fn n_regular(&self) -> usize {
        self.a_bar.nrows()
    }
}

/// Block-model mean matrices from the community counts (closed block form).
pub fn mean_matrices(model: &BlockGossipModel) -> MeanDynamics {
    let assignment = model.assignment();
    let labels = assignment.labels();
    let sizes = assignment.community_sizes();
    let n: usize = assignment.len();
    let (w_s, w_d, q) = (model.w_s(), model.w_d(), model.q());
    let a_k: Vec<f64> = sizes
        .iter()
        .map(|&nk| w_s * nk as f64 + w_d * (n - nk) as f64)
        .collect();

    let regular = assignment.regular_agents();
    let stubborn = assignment.stubborn_agents();
    let n_r = regular.len();
    let n_s = stubborn.len();

    let mut a_bar = DMatrix::zeros(n_r, n_r);
    for (ri, &gi) in regular.iter().enumerate() {
        let ki = labels[gi];
        for (rj, &gj) in regular.iter().enumerate() {
            if ri == rj {
                // a_k counts the agent itself at w_s; the true neighbor sum
                // is a_k − w_s.
                a_bar[(ri, ri)] = 1.0 - (1.0 - q) * (a_k[ki] - w_s);
            } else {
                let w = if ki == labels[gj] { w_s } else { w_d };
                a_bar[(ri, rj)] = (1.0 - q) * w;
            }
        }
    }
    let mut b_bar = DMatrix::zeros(n_r, n_s);
    for (ri, &gi) in regular.iter().enumerate() {
        for (sj, &gj) in stubborn.iter().enumerate() {
            let w = if labels[gi] == labels[gj] { w_s } else { w_d };
            b_bar[(ri, sj)] = (1.0 - q) * w;
        }
    }
    MeanDynamics::from_parts(a_bar, b_bar)
}

/// Mean matrices of an arbitrary symmetric interaction matrix (SBM samples,
/// weighted real networks).
pub fn mean_matrices_from_interaction(
    w: &InteractionMatrix,
    assignment: &CommunityAssignment,
    q: f64,
) -> MeanDynamics {
    assert_eq!(w.n(), assignment.len(), "dimension mismatch");
    let regular = assignment.regular_agents();
    let stubborn = assignment.stubborn_agents();
    let n_r = regular.len();
    let n_s = stubborn.len();
    let mut a_bar = DMatrix::zeros(n_r, n_r);
    for (ri, &gi) in regular.iter().enumerate() {
        let total: f64 = w.row(gi).iter().sum();
        a_bar[(ri, ri)] = 1.0 - (1.0 - q) * total;
        for (rj, &gj) in regular.iter().enumerate() {
            if ri != rj {
                a_bar[(ri, rj)] = (1.0 - q) * w.entry(gi, gj);
            }
        }
    }
    let mut b_bar = DMatrix::zeros(n_r, n_s);
    for (ri, &gi) in regular.iter().enumerate() {
        for (sj, &gj) in stubborn.iter().enumerate() {
            b_bar[(ri, sj)] = (1.0 - q) * w.entry(gi, gj);
        }
    }
    MeanDynamics::from_parts(a_bar, b_bar)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::build_block_interaction_matrix;

    fn hand_instance() -> BlockGossipModel {
        BlockGossipModel::from_counts_and_ratio(&[(1, 1), (1, 1)], 3.0, 0.5, vec![1.0, -1.0])
            .unwrap()
    }

    #[test]
    fn hand_instance_matches_eq8_values() {
        let dynamics = mean_matrices(&hand_instance());
        let a = &dynamics.a_bar;
        assert!((a[(0, 0)] - 0.75).abs() <= 1e-15);
        assert!((a[(1, 1)] - 0.75).abs() <= 1e-15);
        assert!((a[(0, 1)] - 0.05).abs() <= 1e-15);
        let b = &dynamics.b_bar;
        assert!((b[(0, 0)] - 0.15).abs() <= 1e-15);
        assert!((b[(0, 1)] - 0.05).abs() <= 1e-15);
        assert!((b[(1, 0)] - 0.05).abs() <= 1e-15);
        assert!((b[(1, 1)] - 0.15).abs() <= 1e-15);
        assert!((dynamics.spectral_radius() - 0.8).abs() <= 1e-12);
        assert!(dynamics.is_schur_stable());
    }

    #[test]
    fn rows_of_joint_matrix_sum_to_one() {
        let m = BlockGossipModel::from_counts_and_ratio(&[(4, 2), (3, 1)], 2.0, 0.3, vec![0.0; 3])
            .unwrap();
        let d = mean_matrices(&m);
        for i in 0..d.n_regular() {
            let sum: f64 = d.a_bar.row(i).iter().sum::<f64>() + d.b_bar.row(i).iter().sum::<f64>();
            assert!((sum - 1.0).abs() <= 1e-12, "row {i} sums to {sum}");
        }
    }

    #[test]
    fn no_stubborn_agents_is_marginally_stable() {
        let m = BlockGossipModel::from_counts_and_ratio(&[(3, 0), (3, 0)], 4.0, 0.5, vec![])
            .unwrap();
        let d = mean_matrices(&m);
        assert!((d.spectral_radius() - 1.0).abs() <= 1e-12);
        assert!(!d.is_schur_stable());
    }

    #[test]
    fn block_form_agrees_with_generic_interaction_route() {
        let m = BlockGossipModel::from_counts_and_ratio(&[(2, 1), (3, 2)], 0.5, 0.25, vec![0.0; 3])
            .unwrap();
        let fast = mean_matrices(&m);
        let w = build_block_interaction_matrix(&m).unwrap();
        let generic = mean_matrices_from_interaction(&w, m.assignment(), m.q());
        assert!((&fast.a_bar - &generic.a_bar).abs().max() <= 1e-14);
        assert!((&fast.b_bar - &generic.b_bar).abs().max() <= 1e-14);
        assert!((fast.spectral_radius() - generic.spectral_radius()).abs() <= 1e-12);
    }
}
