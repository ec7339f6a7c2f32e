//! 1-D Lloyd k-means with Forgy and k-means++ seeding, used in place of the
//! threshold rule as a recovery baseline.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::EstimationError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KMeansInit {
    /// k distinct points drawn uniformly as initial centers.
    Forgy,
    /// D² seeding: first center uniform, later centers weighted by squared
    /// distance to the nearest chosen center.
    PlusPlus,
}

#[derive(Debug, Clone)]
pub struct KMeans1dResult {
    /// Cluster index per point, in center order.
    pub labels: Vec<u8>,
    pub centers: Vec<f64>,
    /// Some cluster ended empty (e.g. all-identical input).
    pub degenerate: bool,
    pub iterations: usize,
}

const MAX_ITERATIONS: usize = 100;

/// Lloyd iterations to an assignment fixpoint or the 100-iteration cap.
pub fn kmeans_1d(
    values: &[f64],
    k: usize,
    init: KMeansInit,
    rng: &mut ChaCha8Rng,
) -> Result<KMeans1dResult, EstimationError> {
    if values.len() < k || k == 0 {
        return Err(EstimationError::TooFewPoints {
            what: "k-means",
            needed: k.max(1),
            got: values.len(),
        });
    }
    let mut centers = match init {
        KMeansInit::Forgy => forgy_centers(values, k, rng),
        KMeansInit::PlusPlus => plus_plus_centers(values, k, rng),
    };

    let mut labels = vec![0u8; values.len()];
    let mut iterations = 0;
    loop {
        iterations += 1;
        let mut changed = false;
        for (i, &v) in values.iter().enumerate() {
            let mut best = 0u8;
            let mut best_dist = f64::INFINITY;
            for (c, &center) in centers.iter().enumerate() {
                let d = (v - center).abs();
                if d < best_dist {
                    best_dist = d;
                    best = c as u8;
                }
            }
            if labels[i] != best {
                labels[i] = best;
                changed = true;
            }
        }
        let mut sums = vec![0.0; k];
        let mut counts = vec![0usize; k];
        for (i, &v) in values.iter().enumerate() {
            sums[labels[i] as usize] += v;
            counts[labels[i] as usize] += 1;
        }
        for c in 0..k {
            if counts[c] > 0 {
                centers[c] = sums[c] / counts[c] as f64;
            }
            // Empty clusters keep their previous center.
        }
        if !changed && iterations > 1 {
            let degenerate = counts.iter().any(|&c| c == 0);
            return Ok(KMeans1dResult {
                labels,
                centers,
                degenerate,
                iterations,
            });
        }
        if iterations >= MAX_ITERATIONS {
            let degenerate = counts.iter().any(|&c| c == 0);
            return Ok(KMeans1dResult {
                labels,
                centers,
                degenerate,
                iterations,
            });
        }
    }
}

fn forgy_centers(values: &[f64], k: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    // Prefer distinct values; fall back to distinct indices when the data
    // has fewer than k distinct values.
    let mut distinct: Vec<f64> = values.to_vec();
    distinct.sort_by(f64::total_cmp);
    distinct.dedup();
    if distinct.len() >= k {
        let mut picked = Vec::with_capacity(k);
        while picked.len() < k {
            let candidate = distinct[rng.random_range(0..distinct.len())];
            if !picked.contains(&candidate) {
                picked.push(candidate);
            }
        }
        picked
    } else {
        let mut indices: Vec<usize> = Vec::with_capacity(k);
        while indices.len() < k {
            let idx = rng.random_range(0..values.len());
            if !indices.contains(&idx) {
                indices.push(idx);
            }
        }
        indices.into_iter().map(|i| values[i]).collect()
    }
}

fn plus_plus_centers(values: &[f64], k: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let mut centers = Vec::with_capacity(k);
    centers.push(values[rng.random_range(0..values.len())]);
    let mut dist2: Vec<f64> = values
        .iter()
        .map(|&v| (v - centers[0]) * (v - centers[0]))
        .collect();
    while centers.len() < k {
        let total: f64 = dist2.iter().sum();
        let next = if total > 0.0 {
            let mut target = rng.random::<f64>() * total;
            let mut chosen = values.len() - 1;
            for (i, &d) in dist2.iter().enumerate() {
                target -= d;
                if target <= 0.0 {
                    chosen = i;
                    break;
                }
            }
            values[chosen]
        } else {
            // All mass at the chosen centers already.
            values[rng.random_range(0..values.len())]
        };
        centers.push(next);
        for (d, &v) in dist2.iter_mut().zip(values) {
            let nd = (v - next) * (v - next);
            if nd < *d {
                *d = nd;
            }
        }
    }
    centers
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{stream_rng, Channel};

    fn rng() -> ChaCha8Rng {
        stream_rng(99, 0, Channel::Algorithm)
    }

    #[test]
    fn well_separated_clusters_are_found_by_both_inits() {
        let values = [0.0, 0.0, 10.0, 10.0];
        for init in [KMeansInit::Forgy, KMeansInit::PlusPlus] {
            let out = kmeans_1d(&values, 2, init, &mut rng()).unwrap();
            assert_eq!(out.labels[0], out.labels[1]);
            assert_eq!(out.labels[2], out.labels[3]);
            assert_ne!(out.labels[0], out.labels[2]);
            assert!(!out.degenerate);
            let mut centers = out.centers.clone();
            centers.sort_by(f64::total_cmp);
            assert_eq!(centers, vec![0.0, 10.0]);
        }
    }

    #[test]
    fn one_point_per_cluster_centers_exactly() {
        let out = kmeans_1d(&[-1.0, 1.0], 2, KMeansInit::PlusPlus, &mut rng()).unwrap();
        let mut centers = out.centers.clone();
        centers.sort_by(f64::total_cmp);
        assert_eq!(centers, vec![-1.0, 1.0]);
    }

    #[test]
    fn all_identical_input_is_flagged_degenerate() {
        let out = kmeans_1d(&[0.5; 6], 2, KMeansInit::Forgy, &mut rng()).unwrap();
        assert!(out.degenerate);
        assert!(out.labels.iter().all(|&l| l == out.labels[0]));
        let out = kmeans_1d(&[0.5; 6], 2, KMeansInit::PlusPlus, &mut rng()).unwrap();
        assert!(out.degenerate);
    }

    #[test]
    fn rejects_fewer_points_than_clusters() {
        assert!(matches!(
            kmeans_1d(&[1.0], 2, KMeansInit::Forgy, &mut rng()),
            Err(EstimationError::TooFewPoints { .. })
        ));
    }

    #[test]
    fn seeded_runs_are_deterministic() {
        let values: Vec<f64> = (0..40).map(|i| ((i * 37 % 17) as f64) * 0.3).collect();
        let a = kmeans_1d(&values, 2, KMeansInit::PlusPlus, &mut rng()).unwrap();
        let b = kmeans_1d(&values, 2, KMeansInit::PlusPlus, &mut rng()).unwrap();
        assert_eq!(a.labels, b.labels);
        assert_eq!(a.centers, b.centers);
    }
}
