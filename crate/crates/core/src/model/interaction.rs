use super::block::NORMALIZATION_TOL;
use super::{BlockGossipModel, ModelError};

/// Symmetric nonnegative pairwise edge-selection probabilities with zero
/// diagonal, summing to one over unordered pairs.
#[derive(Debug, Clone)]
pub struct InteractionMatrix {
    n: usize,
    /// Row-major n×n storage.
    w: Vec<f64>,
}

impl InteractionMatrix {
    /// Validates symmetry, nonnegativity, zero diagonal, and the pair-sum
    /// normalization 𝟏ᵀW𝟏/2 = 1 (relative tolerance 1e−12).
    pub fn from_rows(n: usize, w: Vec<f64>) -> Result<Self, ModelError> {
        if w.len() != n * n {
            return Err(ModelError::LengthMismatch {
                what: "interaction entries",
                got: w.len(),
                expected: n * n,
            });
        }
        // Kahan compensation: the check must not drown in plain summation
        // error for matrices with ~n²/2 small entries.
        let mut pair_sum = 0.0;
        let mut comp = 0.0;
        for i in 0..n {
            let diag = w[i * n + i];
            if diag != 0.0 {
                return Err(ModelError::NonzeroDiagonal { i, value: diag });
            }
            for j in (i + 1)..n {
                let a = w[i * n + j];
                let b = w[j * n + i];
                if a != b {
                    return Err(ModelError::NotSymmetric { i, j, a, b });
                }
                if a < 0.0 {
                    return Err(ModelError::NegativeEntry { i, j, value: a });
                }
                let y = a - comp;
                let t = pair_sum + y;
                comp = (t - pair_sum) - y;
                pair_sum = t;
            }
        }
        let residual = (pair_sum - 1.0).abs();
        let tolerance = NORMALIZATION_TOL * pair_sum.abs().max(1.0);
        if residual > tolerance {
            return Err(ModelError::Normalization {
                sum: pair_sum,
                residual,
                tolerance,
            });
        }
        Ok(Self { n, w })
    }

    /// Builds from a function over unordered pairs i < j.
    pub fn from_pair_fn(n: usize, f: impl Fn(usize, usize) -> f64) -> Result<Self, ModelError> {
        let mut w = vec![0.0; n * n];
        for i in 0..n {
            for j in (i + 1)..n {
                let v = f(i, j);
                w[i * n + j] = v;
                w[j * n + i] = v;
            }
        }
        Self::from_rows(n, w)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn entry(&self, i: usize, j: usize) -> f64 {
        self.w[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.w[i * self.n..(i + 1) * self.n]
    }

    /// Unordered pairs with their probabilities, i < j, zeros included.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.n).flat_map(move |i| {
            ((i + 1)..self.n).map(move |j| (i, j, self.entry(i, j)))
        })
    }

    /// 𝟏ᵀW𝟏/2, Kahan-compensated.
    pub fn pair_sum(&self) -> f64 {
        let mut sum = 0.0;
        let mut comp = 0.0;
        for (_, _, w) in self.pairs() {
            let y = w - comp;
            let t = sum + y;
            comp = (t - sum) - y;
            sum = t;
        }
        sum
    }
}

/// Exact block interaction matrix of a [`BlockGossipModel`]: w_s within a
/// community, w_d across, zero diagonal.
pub fn build_block_interaction_matrix(
    model: &BlockGossipModel,
) -> Result<InteractionMatrix, ModelError> {
    let labels = model.assignment().labels();
    InteractionMatrix::from_pair_fn(model.n(), |i, j| {
        if labels[i] == labels[j] {
            model.w_s()
        } else {
            model.w_d()
        }
    })
}

/// Spectral norm (largest singular value) of the difference of two
/// interaction matrices.
///
/// The difference of symmetric matrices is symmetric, so the norm equals the
/// largest absolute eigenvalue; it is computed by power iteration on the
/// squared difference, which is positive semidefinite and immune to ±λ
/// oscillation. Deterministic start vector, relative tolerance 1e−10.
pub fn deviation_norm(
    sampled: &InteractionMatrix,
    expected: &InteractionMatrix,
) -> Result<f64, ModelError> {
    if sampled.n() != expected.n() {
        return Err(ModelError::DimensionMismatch {
            a: sampled.n(),
            b: expected.n(),
        });
    }
    let n = sampled.n();
    let diff: Vec<f64> = sampled
        .w
        .iter()
        .zip(&expected.w)
        .map(|(a, b)| a - b)
        .collect();

    let matvec = |x: &[f64], out: &mut [f64]| {
        for (i, o) in out.iter_mut().enumerate() {
            let row = &diff[i * n..(i + 1) * n];
            *o = row.iter().zip(x).map(|(a, b)| a * b).sum();
        }
    };

    // Start vector with nonzero overlap against any eigenvector in practice.
    let mut v: Vec<f64> = (0..n)
        .map(|i| 1.0 + (i as f64 * 0.7312).sin() * 0.5)
        .collect();
    let norm = |x: &[f64]| x.iter().map(|a| a * a).sum::<f64>().sqrt();
    let nv = norm(&v);
    for x in &mut v {
        *x /= nv;
    }

    let mut tmp = vec![0.0; n];
    let mut w = vec![0.0; n];
    let mut sigma = 0.0f64;
    for _ in 0..5000 {
        matvec(&v, &mut tmp);
        let s = norm(&tmp);
        if s == 0.0 {
            return Ok(0.0);
        }
        matvec(&tmp, &mut w);
        let wn = norm(&w);
        if wn == 0.0 {
            return Ok(s);
        }
        for (vi, wi) in v.iter_mut().zip(&w) {
            *vi = wi / wn;
        }
        if (s - sigma).abs() <= 1e-10 * s.max(1.0) {
            return Ok(s);
        }
        sigma = s;
    }
    Ok(sigma)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::CommunityAssignment;

    fn block_model(counts: &[(usize, usize)], w_s: f64, w_d: f64) -> BlockGossipModel {
        let a = CommunityAssignment::sorted_blocks(counts).unwrap();
        let n_s = a.num_stubborn();
        BlockGossipModel::new(a, w_s, w_d, 0.5, vec![0.0; n_s]).unwrap()
    }

    #[test]
    fn three_agent_block_matrix_matches_hand_values() {
        // n1 = 2, n2 = 1, w_s = 0.8, w_d = 0.1: 2·0.8 + 4·0.1 = 2
        let m = block_model(&[(2, 0), (1, 0)], 0.8, 0.1);
        let w = build_block_interaction_matrix(&m).unwrap();
        assert_eq!(w.entry(0, 1), 0.8);
        assert_eq!(w.entry(0, 2), 0.1);
        assert_eq!(w.entry(1, 2), 0.1);
        assert_eq!(w.entry(1, 1), 0.0);
        assert!((w.pair_sum() - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn four_agent_block_matrix_is_normalized() {
        let m = block_model(&[(2, 0), (2, 0)], 0.3, 0.1);
        let w = build_block_interaction_matrix(&m).unwrap();
        assert_eq!(w.entry(0, 1), 0.3);
        assert_eq!(w.entry(2, 3), 0.3);
        assert_eq!(w.entry(0, 2), 0.1);
        assert!((w.pair_sum() - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn reading_back_entries_round_trips_the_solved_pair() {
        let (w_s, w_d) = crate::model::solve_interaction_probs(3, 4, 2.5).unwrap();
        let a = CommunityAssignment::sorted_blocks(&[(3, 0), (4, 0)]).unwrap();
        let m = BlockGossipModel::new(a, w_s, w_d, 0.5, vec![]).unwrap();
        let w = build_block_interaction_matrix(&m).unwrap();
        assert_eq!(w.entry(0, 1), w_s);
        assert_eq!(w.entry(0, 3), w_d);
    }

    #[test]
    fn constructor_rejects_asymmetry_and_bad_sum() {
        let mut w = vec![0.0; 4];
        w[1] = 0.6;
        w[2] = 0.5;
        assert!(matches!(
            InteractionMatrix::from_rows(2, w),
            Err(ModelError::NotSymmetric { .. })
        ));
        let err = InteractionMatrix::from_pair_fn(3, |_, _| 0.5).unwrap_err();
        assert!(matches!(err, ModelError::Normalization { .. }));
    }

    #[test]
    fn deviation_norm_is_zero_for_identical_matrices() {
        let m = block_model(&[(2, 0), (2, 0)], 0.3, 0.1);
        let w = build_block_interaction_matrix(&m).unwrap();
        assert_eq!(deviation_norm(&w, &w).unwrap(), 0.0);
    }

    #[test]
    fn deviation_norm_matches_a_hand_computed_rank_one_difference() {
        // W and V differ by eps on the (0,1)/(1,0) pair: spectral norm = eps.
        let w = InteractionMatrix::from_pair_fn(3, |_, _| 1.0 / 3.0).unwrap();
        let eps = 1e-3;
        let v = InteractionMatrix::from_pair_fn(3, |i, j| match (i, j) {
            (0, 1) => 1.0 / 3.0 + eps,
            (0, 2) => 1.0 / 3.0 - eps,
            _ => 1.0 / 3.0,
        })
        .unwrap();
        // Difference has rows (0, e, -e), (e, 0, 0), (-e, 0, 0); its nonzero
        // eigenvalues are ±e√2.
        let d = deviation_norm(&w, &v).unwrap();
        assert!((d - eps * 2.0f64.sqrt()).abs() < 1e-12, "{d}");
    }

    #[test]
    fn deviation_norm_rejects_dimension_mismatch() {
        let a = InteractionMatrix::from_pair_fn(3, |_, _| 1.0 / 3.0).unwrap();
        let b = InteractionMatrix::from_pair_fn(2, |_, _| 1.0).unwrap();
        assert!(matches!(
            deviation_norm(&a, &b),
            Err(ModelError::DimensionMismatch { .. })
        ));
    }
}
