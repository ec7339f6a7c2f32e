//! Alias-table sampler over the unordered-pair distribution {w_ij}.
//!
//! Vose construction: O(m) build over the m positive-probability pairs,
//! O(1) per draw (one uniform cell index + one uniform accept). 10⁶–10⁷
//! draws per run dominate simulation cost, so constant-time draws matter
//! more than build time.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::DynamicsError;
use crate::model::InteractionMatrix;

#[derive(Debug, Clone)]
pub struct EdgeSampler {
    pairs: Vec<(u32, u32)>,
    /// Acceptance threshold per cell, scaled so that cell i returns its own
    /// pair with probability prob[i]/m.
    prob: Vec<f64>,
    alias: Vec<u32>,
}

impl EdgeSampler {
    pub fn from_interaction(w: &InteractionMatrix) -> Result<Self, DynamicsError> {
        let pairs: Vec<(u32, u32, f64)> = w
            .pairs()
            .filter(|&(_, _, p)| p > 0.0)
            .map(|(i, j, p)| (i as u32, j as u32, p))
            .collect();
        Self::from_weighted_pairs(pairs)
    }

    /// Builds from explicit positive pair weights (need not sum to one; the
    /// distribution is the normalized weights).
    pub fn from_weighted_pairs(weighted: Vec<(u32, u32, f64)>) -> Result<Self, DynamicsError> {
        let total: f64 = weighted.iter().map(|&(_, _, p)| p).sum();
        if !(total > 0.0) {
            return Err(DynamicsError::AllZeroWeights);
        }
        let m = weighted.len();
        let mut pairs = Vec::with_capacity(m);
        let mut prob = Vec::with_capacity(m);
        for &(i, j, p) in &weighted {
            pairs.push((i, j));
            prob.push(p / total * m as f64);
        }
        let mut alias: Vec<u32> = (0..m as u32).collect();
        let mut small: Vec<usize> = Vec::new();
        let mut large: Vec<usize> = Vec::new();
        for (idx, &p) in prob.iter().enumerate() {
            if p < 1.0 {
                small.push(idx);
            } else {
                large.push(idx);
            }
        }
        while let (Some(s), Some(l)) = (small.pop(), large.pop()) {
            alias[s] = l as u32;
            prob[l] += prob[s] - 1.0;
            if prob[l] < 1.0 {
                small.push(l);
            } else {
                large.push(l);
            }
        }
        // Leftovers are 1.0 up to rounding.
        for idx in small.into_iter().chain(large) {
            prob[idx] = 1.0;
        }
        Ok(Self { pairs, prob, alias })
    }

    /// Number of representable pairs.
    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Draws one unordered pair (i, j) with i < j.
    #[inline]
    pub fn sample(&self, rng: &mut ChaCha8Rng) -> (usize, usize) {
        let cell = rng.random_range(0..self.pairs.len());
        let keep = rng.random::<f64>() < self.prob[cell];
        let idx = if keep { cell } else { self.alias[cell] as usize };
        let (i, j) = self.pairs[idx];
        (i as usize, j as usize)
    }
}
