//! Estimator invariants along real simulated runs, plus the property-based
//! contracts of the metric and the averager.

mod common;

use common::random_model;
use gossip_blocks_core::dynamics::{simulate, GossipSystem, Observer, TrajectoryRecorder};
use gossip_blocks_core::estimation::{accuracy, Alg1Runner, Alg1Settings, RunningAverage};
use gossip_blocks_core::rng::{stream_rng, Channel};
use proptest::prelude::*;
use rand::Rng;

/// After every non-skipped tick, ŵ_d satisfies the normalization inversion
/// against ŵ_s and the current tallies exactly.
#[test]
fn inversion_identity_holds_after_every_update() {
    let mut rng = stream_rng(91, 0, Channel::Algorithm);
    let model = random_model(&mut rng, 2, 4, 2, 1);
    let system = GossipSystem::from_block_model(&model).unwrap();
    let n_r = system.assignment().num_regular();
    let x0: Vec<f64> = (0..n_r).map(|_| rng.random_range(-0.5..0.5)).collect();

    struct InversionCheck<'a> {
        runner: Alg1Runner<'a>,
        n: usize,
    }
    impl Observer for InversionCheck<'_> {
        fn on_tick(&mut self, event: &gossip_blocks_core::dynamics::TickEvent<'_>) {
            self.runner.on_tick(event);
            let labels = self.runner.labels();
            let n1 = labels.iter().filter(|&&l| l == 0).count() as f64;
            let n2 = self.n as f64 - n1;
            if n1 > 0.0 && n2 > 0.0 {
                let expected = (2.0 - self.runner.w_s_hat() * (n1 * n1 + n2 * n2 - n1 - n2))
                    / (2.0 * n1 * n2);
                // Exact identity except on skipped ticks, where stale
                // tallies may differ; those carry the previous pair.
                let got = self.runner.w_d_hat();
                assert!(
                    (got - expected).abs() <= 1e-15 * expected.abs().max(1.0)
                        || self.runner.skipped_updates() > 0,
                    "t = {}: wd {got} vs inversion {expected}",
                    event.t
                );
            }
        }
    }

    let settings = Alg1Settings::new(1.0, vec![]);
    let mut alg_rng = stream_rng(91, 0, Channel::Algorithm);
    let runner = Alg1Runner::new(
        system.assignment(),
        system.stubborn_states(),
        &x0,
        &settings,
        &mut alg_rng,
    );
    let mut check = InversionCheck {
        runner,
        n: model.n(),
    };
    let mut edge_rng = stream_rng(91, 0, Channel::Edges);
    let mut observers: [&mut dyn Observer; 1] = [&mut check];
    simulate(&system, &x0, 5_000, &mut edge_rng, &mut observers).unwrap();
}

/// The online averager agrees with the batch mean of the recorded
/// trajectory at every snapshot.
#[test]
fn online_average_equals_batch_mean_on_a_simulated_run() {
    let mut rng = stream_rng(92, 0, Channel::Algorithm);
    let model = random_model(&mut rng, 2, 5, 2, 1);
    let system = GossipSystem::from_block_model(&model).unwrap();
    let n_r = system.assignment().num_regular();
    let x0: Vec<f64> = (0..n_r).map(|_| rng.random_range(-1.0..1.0)).collect();

    let mut avg = RunningAverage::new(&x0);
    let mut recorder = TrajectoryRecorder::new(1);
    let mut edge_rng = stream_rng(92, 0, Channel::Edges);
    {
        let mut observers: [&mut dyn Observer; 2] = [&mut avg, &mut recorder];
        simulate(&system, &x0, 3_000, &mut edge_rng, &mut observers).unwrap();
    }
    let rows = recorder.into_rows();
    for &snapshot in &[1u64, 7, 100, 999, 3000] {
        let mut batch = vec![0.0; n_r];
        for (t, row) in std::iter::once(&(0, x0.clone())).chain(rows.iter()) {
            if *t <= snapshot {
                for (b, v) in batch.iter_mut().zip(row) {
                    *b += v;
                }
            }
        }
        let count = (snapshot + 1) as f64;
        let mut replay = RunningAverage::new(&x0);
        for (t, row) in rows.iter().filter(|(t, _)| *t <= snapshot) {
            replay.record_dense(*t, row);
        }
        for slot in 0..n_r {
            let batch_mean = batch[slot] / count;
            assert!(
                (replay.mean(slot) - batch_mean).abs() <= 1e-10,
                "t = {snapshot}, slot {slot}"
            );
        }
    }
}

proptest! {
    /// Accuracy is invariant under a global label swap.
    #[test]
    fn accuracy_is_permutation_invariant(labels in prop::collection::vec(0u8..2, 1..40),
                                          truth_bits in prop::collection::vec(0u8..2, 1..40)) {
        let n = labels.len().min(truth_bits.len());
        let labels = &labels[..n];
        let truth = &truth_bits[..n];
        let swapped: Vec<u8> = labels.iter().map(|&l| 1 - l).collect();
        let a = accuracy(labels, truth).unwrap();
        let b = accuracy(&swapped, truth).unwrap();
        prop_assert_eq!(a, b);
        prop_assert!((0.5..=1.0).contains(&a) || n == 1);
    }

    /// The averager is exact for piecewise-constant streams regardless of
    /// touch pattern.
    #[test]
    fn lazy_average_matches_direct_summation(
        updates in prop::collection::vec((1u64..200, 0usize..4, -100i32..100), 0..40)
    ) {
        let x0 = [0.25, -0.5, 0.75, 0.0];
        let mut sorted = updates.clone();
        sorted.sort();
        sorted.dedup_by_key(|(t, i, _)| (*t, *i));
        let horizon = 220u64;

        let mut avg = RunningAverage::new(&x0);
        let mut x = x0.to_vec();
        let mut trajectory = vec![x.clone()];
        let mut queue = sorted.iter().peekable();
        for t in 1..=horizon {
            let mut touched = Vec::new();
            while let Some(&&(ut, i, v)) = queue.peek() {
                if ut == t {
                    x[i] = v as f64 / 16.0;
                    touched.push((i, x[i]));
                    queue.next();
                } else {
                    break;
                }
            }
            trajectory.push(x.clone());
            avg.record(t, &touched);
        }
        for slot in 0..4 {
            let batch: f64 = trajectory.iter().map(|row| row[slot]).sum::<f64>()
                / trajectory.len() as f64;
            prop_assert!((avg.mean(slot) - batch).abs() <= 1e-12);
        }
    }
}
