//! The joint recovery and estimation loop, one pass over the trajectory.
//!
//! Per tick t ≥ 1, with S(t) the running average of regular states:
//!
//! - recovery: a regular agent gets label 1 (internally 0) iff its average
//!   strictly exceeds the grand mean of regular averages; each stubborn
//!   agent inherits its witness's label. Ties go to label 2, exactly as the
//!   strict inequality dictates.
//! - estimation: with n̂_k the label tallies over all agents, V̂_rk/V̂_sk the
//!   label classes of regular/stubborn agents,
//!
//!   ```text
//!   h₁ = (|V̂_s1|/|V̂_r1|)·Σ_{V̂_r1} S_i − Σ_{V̂_s1} x^s_i
//!   h₂ = (n̂₂/|V̂_r1|)·Σ_{V̂_r1} S_i − Σ_{V̂_r2} S_i − Σ_{V̂_s2} x^s_i
//!   g  = h₁ − (n̂₁²+n̂₂²−n̂₁−n̂₂)/(2n̂₁n̂₂)·h₂
//!   ŵ_s ← ŵ_s − (a/t)·sgn(g)·(g·ŵ_s + h₂/(n̂₁n̂₂))
//!   ŵ_d = (2 − ŵ_s·(n̂₁²+n̂₂²−n̂₁−n̂₂))/(2n̂₁n̂₂)
//!   ```
//!
//!   with sgn(0) := 0. Ticks on which |V̂_r1|, n̂₁, or n̂₂ is zero skip the
//!   update (the h's divide by them); skips are counted in diagnostics.
//!
//! The estimator consumes states only. It never reads the fired edge or the
//! true labels; ground truth, when supplied, feeds metrics alone.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::RunningAverage;
use crate::dynamics::{
    simulate_with_sampler, DynamicsError, EdgeSampler, GossipState, GossipSystem, Observer,
    TickEvent,
};
use crate::model::CommunityAssignment;

/// Labels from averages: regular agents by the strict above-grand-mean rule
/// (label 0 = above), stubborn agents from their witnesses. `values` is one
/// number per regular slot; any positive rescaling of S (e.g. the
/// division-free totals (t+1)·S) yields identical labels.
pub fn recover_labels_into(values: &[f64], assignment: &CommunityAssignment, labels: &mut [u8]) {
    debug_assert_eq!(values.len(), assignment.num_regular());
    debug_assert_eq!(labels.len(), assignment.len());
    let grand: f64 = values.iter().sum();
    let n_r = values.len() as f64;
    for (slot, &agent) in assignment.regular_agents().iter().enumerate() {
        labels[agent] = u8::from(values[slot] * n_r <= grand);
    }
    for &agent in assignment.stubborn_agents() {
        let witness = assignment.witness_of(agent).expect("validated witness");
        labels[agent] = labels[witness];
    }
}

/// Allocating wrapper around [`recover_labels_into`].
pub fn recover_labels_from_averages(values: &[f64], assignment: &CommunityAssignment) -> Vec<u8> {
    let mut labels = vec![0u8; assignment.len()];
    recover_labels_into(values, assignment, &mut labels);
    labels
}

#[derive(Debug, Clone)]
pub struct Alg1Settings {
    /// Step-size parameter a of the a/t schedule.
    pub step_a: f64,
    /// Ticks at which to record snapshots (sorted ascending).
    pub snapshots: Vec<u64>,
    /// True labels ({0,1}, all agents) for metrics; never used for estimates.
    pub truth: Option<Vec<u8>>,
    /// Upper end of the U(0, hi) initialization of ŵ_s(0); defaults to the
    /// scale-appropriate 2/(n(n−1)).
    pub w_s_init_hi: Option<f64>,
}

impl Alg1Settings {
    pub fn new(step_a: f64, snapshots: Vec<u64>) -> Self {
        Self {
            step_a,
            snapshots,
            truth: None,
            w_s_init_hi: None,
        }
    }

    pub fn with_truth(mut self, truth: Vec<u8>) -> Self {
        self.truth = Some(truth);
        self
    }
}

#[derive(Debug, Clone)]
pub struct Alg1Snapshot {
    pub t: u64,
    /// Estimated labels, {0,1}, all agents.
    pub labels: Vec<u8>,
    pub w_s_hat: f64,
    pub w_d_hat: f64,
    pub skipped_updates: u64,
    pub accuracy: Option<f64>,
    pub exact: Option<bool>,
}

#[derive(Debug, Clone)]
pub struct Alg1Output {
    pub snapshots: Vec<Alg1Snapshot>,
    pub w_s_hat: f64,
    pub w_d_hat: f64,
    pub skipped_updates: u64,
    /// Last tick at which exact recovery failed (None if never, or without
    /// truth); recovery is sustained from the next tick on.
    pub last_wrong_tick: Option<u64>,
    pub final_labels: Vec<u8>,
    /// Final running averages S(t), regular-slot order.
    pub final_means: Vec<f64>,
    pub time: u64,
}

/// Observer driving one estimator instance over one trajectory.
pub struct Alg1Runner<'a> {
    assignment: &'a CommunityAssignment,
    stubborn_states: &'a [f64],
    avg: RunningAverage,
    labels: Vec<u8>,
    w_s_hat: f64,
    w_d_hat: f64,
    step_a: f64,
    skipped: u64,
    totals: Vec<f64>,
    snapshots: Vec<u64>,
    next_snapshot: usize,
    out: Vec<Alg1Snapshot>,
    truth: Option<Vec<u8>>,
    last_wrong: Option<u64>,
}

impl<'a> Alg1Runner<'a> {
    /// Randomizes Ĉ(·,0) and ŵ_s(0) from `alg_rng`, sets S(0) = X^r(0).
    pub fn new(
        assignment: &'a CommunityAssignment,
        stubborn_states: &'a [f64],
        x0_regular: &[f64],
        settings: &Alg1Settings,
        alg_rng: &mut ChaCha8Rng,
    ) -> Self {
        let n = assignment.len();
        let labels: Vec<u8> = (0..n).map(|_| u8::from(alg_rng.random::<bool>())).collect();
        let hi = settings
            .w_s_init_hi
            .unwrap_or(2.0 / (n as f64 * (n as f64 - 1.0)));
        let w_s_hat: f64 = alg_rng.random::<f64>() * hi;
        let n1 = labels.iter().filter(|&&l| l == 0).count() as f64;
        let n2 = n as f64 - n1;
        let w_d_hat = if n1 > 0.0 && n2 > 0.0 {
            inversion(w_s_hat, n1, n2)
        } else {
            w_s_hat
        };
        if let Some(truth) = &settings.truth {
            assert_eq!(truth.len(), n, "truth labels must cover all agents");
        }
        Self {
            assignment,
            stubborn_states,
            avg: RunningAverage::new(x0_regular),
            labels,
            w_s_hat,
            w_d_hat,
            step_a: settings.step_a,
            skipped: 0,
            totals: vec![0.0; assignment.num_regular()],
            snapshots: settings.snapshots.clone(),
            next_snapshot: 0,
            out: Vec::new(),
            truth: settings.truth.clone(),
            last_wrong: None,
        }
    }

    fn step(&mut self, t: u64) {
        self.avg.totals_into(&mut self.totals);
        recover_labels_into(&self.totals, self.assignment, &mut self.labels);

        // Tallies and class sums in one pass each over regular and stubborn.
        let mut v_r1_count = 0usize;
        let mut v_r1_total = 0.0;
        let mut v_r2_total = 0.0;
        for (slot, &agent) in self.assignment.regular_agents().iter().enumerate() {
            if self.labels[agent] == 0 {
                v_r1_count += 1;
                v_r1_total += self.totals[slot];
            } else {
                v_r2_total += self.totals[slot];
            }
        }
        let mut v_s1_count = 0usize;
        let mut s1_sum = 0.0;
        let mut s2_sum = 0.0;
        for (s_slot, &agent) in self.assignment.stubborn_agents().iter().enumerate() {
            if self.labels[agent] == 0 {
                v_s1_count += 1;
                s1_sum += self.stubborn_states[s_slot];
            } else {
                s2_sum += self.stubborn_states[s_slot];
            }
        }
        let n1_hat = v_r1_count + v_s1_count;
        let n2_hat = self.assignment.len() - n1_hat;

        if n1_hat == 0 || n2_hat == 0 || v_r1_count == 0 {
            self.skipped += 1;
        } else {
            let count = self.avg.count() as f64;
            let s_r1 = v_r1_total / count;
            let s_r2 = v_r2_total / count;
            let (n1, n2) = (n1_hat as f64, n2_hat as f64);
            let h1 = (v_s1_count as f64 / v_r1_count as f64) * s_r1 - s1_sum;
            let h2 = (n2 / v_r1_count as f64) * s_r1 - s_r2 - s2_sum;
            let pair_coeff = n1 * n1 + n2 * n2 - n1 - n2;
            let g = h1 - pair_coeff / (2.0 * n1 * n2) * h2;
            let sgn = if g > 0.0 {
                1.0
            } else if g < 0.0 {
                -1.0
            } else {
                0.0
            };
            self.w_s_hat -=
                self.step_a / t as f64 * sgn * (g * self.w_s_hat + h2 / (n1 * n2));
            self.w_d_hat = inversion(self.w_s_hat, n1, n2);
        }

        let agreement = self.truth.as_ref().map(|truth| {
            let matches = self
                .labels
                .iter()
                .zip(truth)
                .filter(|(a, b)| a == b)
                .count();
            matches.max(self.labels.len() - matches)
        });
        if let Some(m) = agreement {
            if m != self.labels.len() {
                self.last_wrong = Some(t);
            }
        }

        if self.next_snapshot < self.snapshots.len() && self.snapshots[self.next_snapshot] == t {
            while self.next_snapshot < self.snapshots.len()
                && self.snapshots[self.next_snapshot] == t
            {
                self.next_snapshot += 1;
            }
            self.out.push(Alg1Snapshot {
                t,
                labels: self.labels.clone(),
                w_s_hat: self.w_s_hat,
                w_d_hat: self.w_d_hat,
                skipped_updates: self.skipped,
                accuracy: agreement.map(|m| m as f64 / self.labels.len() as f64),
                exact: agreement.map(|m| m == self.labels.len()),
            });
        }
    }

    /// Offline tick from a dense state row (consecutive t required).
    pub fn on_dense_tick(&mut self, t: u64, states: &[f64]) {
        self.avg.record_dense(t, states);
        self.step(t);
    }

    pub fn into_output(self, time: u64) -> Alg1Output {
        Alg1Output {
            snapshots: self.out,
            w_s_hat: self.w_s_hat,
            w_d_hat: self.w_d_hat,
            skipped_updates: self.skipped,
            last_wrong_tick: self.last_wrong,
            final_labels: self.labels,
            final_means: self.avg.means(),
            time,
        }
    }

    pub fn running_average(&self) -> &RunningAverage {
        &self.avg
    }

    /// Current label estimates, {0,1}, all agents.
    pub fn labels(&self) -> &[u8] {
        &self.labels
    }

    pub fn w_s_hat(&self) -> f64 {
        self.w_s_hat
    }

    pub fn w_d_hat(&self) -> f64 {
        self.w_d_hat
    }

    pub fn skipped_updates(&self) -> u64 {
        self.skipped
    }
}

/// ŵ_d from ŵ_s and the label tallies — the normalization inversion
/// ŵ_d = (2 − ŵ_s·(n̂₁²+n̂₂²−n̂₁−n̂₂))/(2n̂₁n̂₂).
fn inversion(w_s_hat: f64, n1: f64, n2: f64) -> f64 {
    (2.0 - w_s_hat * (n1 * n1 + n2 * n2 - n1 - n2)) / (2.0 * n1 * n2)
}

impl Observer for Alg1Runner<'_> {
    fn on_tick(&mut self, event: &TickEvent<'_>) {
        self.avg.record(event.t, event.touched);
        self.step(event.t);
    }
}

/// Runs one trajectory with one estimator instance attached. Edge and
/// algorithm randomness come from separate streams.
pub fn run_algorithm1(
    system: &GossipSystem,
    x0_regular: &[f64],
    steps: u64,
    settings: &Alg1Settings,
    edge_rng: &mut ChaCha8Rng,
    alg_rng: &mut ChaCha8Rng,
) -> Result<(Alg1Output, GossipState), DynamicsError> {
    let sampler = EdgeSampler::from_interaction(system.interaction())?;
    run_algorithm1_with_sampler(system, &sampler, x0_regular, steps, settings, edge_rng, alg_rng)
}

/// [`run_algorithm1`] with a prebuilt edge sampler (shared across
/// replications of the same system).
pub fn run_algorithm1_with_sampler(
    system: &GossipSystem,
    sampler: &EdgeSampler,
    x0_regular: &[f64],
    steps: u64,
    settings: &Alg1Settings,
    edge_rng: &mut ChaCha8Rng,
    alg_rng: &mut ChaCha8Rng,
) -> Result<(Alg1Output, GossipState), DynamicsError> {
    let mut runner = Alg1Runner::new(
        system.assignment(),
        system.stubborn_states(),
        x0_regular,
        settings,
        alg_rng,
    );
    let state = {
        let mut observers: [&mut dyn Observer; 1] = [&mut runner];
        simulate_with_sampler(system, sampler, x0_regular, steps, edge_rng, &mut observers)?
    };
    Ok((runner.into_output(steps), state))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::simulate;
    use crate::model::{BlockGossipModel, Role};
    use crate::rng::{stream_rng, Channel};

    fn assignment_2r1s() -> CommunityAssignment {
        // Two regular agents and one stubborn whose witness is agent 0.
        CommunityAssignment::new(
            vec![0, 1, 0],
            vec![Role::Regular, Role::Regular, Role::Stubborn],
            vec![None, None, Some(0)],
        )
        .unwrap()
    }

    #[test]
    fn labels_follow_the_strict_threshold_rule() {
        // S = (0.4, 0.35, −0.2), grand mean 0.18(3): labels (1, 1, 2).
        let a = CommunityAssignment::new(
            vec![0, 0, 1],
            vec![Role::Regular; 3],
            vec![None, None, None],
        )
        .unwrap();
        let labels = recover_labels_from_averages(&[0.4, 0.35, -0.2], &a);
        assert_eq!(labels, vec![0, 0, 1]);
    }

    #[test]
    fn ties_get_label_two() {
        let a = CommunityAssignment::new(
            vec![0, 0, 1],
            vec![Role::Regular; 3],
            vec![None, None, None],
        )
        .unwrap();
        // Dyadic value: the scaled comparison is exact.
        let labels = recover_labels_from_averages(&[0.25, 0.25, 0.25], &a);
        assert_eq!(labels, vec![1, 1, 1]);
    }

    #[test]
    fn stubborn_agents_inherit_their_witness_label() {
        let labels = recover_labels_from_averages(&[0.9, -0.9], &assignment_2r1s());
        assert_eq!(labels[0], 0);
        assert_eq!(labels[2], 0, "stubborn agent follows its witness");
        let labels = recover_labels_from_averages(&[-0.9, 0.9], &assignment_2r1s());
        assert_eq!(labels[0], 1);
        assert_eq!(labels[2], 1);
    }

    /// With S frozen at the oracle stationary mean and labels correct, the
    /// true (w_s, w_d) is an exact fixed point of the update.
    #[test]
    fn converged_inputs_leave_the_true_parameters_fixed() {
        let model =
            BlockGossipModel::from_counts_and_ratio(&[(1, 1), (1, 1)], 3.0, 0.5, vec![1.0, -1.0])
                .unwrap();
        let settings = Alg1Settings::new(1.0, vec![]);
        let mut alg_rng = stream_rng(1, 0, Channel::Algorithm);
        let x_r = [1.0 / 3.0, -1.0 / 3.0];
        let mut runner = Alg1Runner::new(
            model.assignment(),
            model.stubborn_states(),
            &x_r,
            &settings,
            &mut alg_rng,
        );
        runner.w_s_hat = model.w_s();
        for t in 1..=100u64 {
            // No state motion: S stays at the stationary mean.
            runner.on_dense_tick(t, &x_r);
            assert!(
                (runner.w_s_hat - model.w_s()).abs() <= 1e-12,
                "t = {t}: {} drifted from {}",
                runner.w_s_hat,
                model.w_s()
            );
            assert!((runner.w_d_hat - model.w_d()).abs() <= 1e-12);
        }
        assert_eq!(runner.skipped, 0);
    }

    #[test]
    fn inversion_matches_the_hand_value() {
        // n̂₁ = n̂₂ = 2, ŵ_s = 0.3 -> (2 − 0.3·4)/8 = 0.1.
        assert!((inversion(0.3, 2.0, 2.0) - 0.1).abs() <= 1e-15);
    }

    #[test]
    fn zero_g_means_no_movement_of_w_s() {
        // Two regular agents, no stubborn: n̂₁ = n̂₂ = 1 makes the pair
        // coefficient 0 and h₁ = 0, hence g = 0 and sgn(0) = 0 keeps ŵ_s.
        let a = CommunityAssignment::new(
            vec![0, 1],
            vec![Role::Regular, Role::Regular],
            vec![None, None],
        )
        .unwrap();
        let settings = Alg1Settings::new(1.0, vec![]);
        let mut alg_rng = stream_rng(2, 0, Channel::Algorithm);
        let mut runner = Alg1Runner::new(&a, &[], &[0.5, -0.5], &settings, &mut alg_rng);
        let before = runner.w_s_hat;
        runner.on_dense_tick(1, &[0.5, -0.5]);
        assert_eq!(runner.w_s_hat, before);
        assert_eq!(runner.skipped, 0);
    }

    #[test]
    fn empty_stream_yields_empty_output() {
        let model =
            BlockGossipModel::from_counts_and_ratio(&[(2, 1), (2, 1)], 2.0, 0.5, vec![1.0, -1.0])
                .unwrap();
        let system = crate::dynamics::GossipSystem::from_block_model(&model).unwrap();
        let settings = Alg1Settings::new(1.0, vec![1, 2, 4]);
        let mut edge_rng = stream_rng(5, 0, Channel::Edges);
        let mut alg_rng = stream_rng(5, 0, Channel::Algorithm);
        let (out, _) = run_algorithm1(
            &system,
            &[0.1, -0.1, 0.2, -0.2],
            0,
            &settings,
            &mut edge_rng,
            &mut alg_rng,
        )
        .unwrap();
        assert!(out.snapshots.is_empty());
        assert_eq!(out.time, 0);
    }

    #[test]
    fn online_average_equals_batch_mean_at_snapshots() {
        let model =
            BlockGossipModel::from_counts_and_ratio(&[(2, 1), (2, 1)], 2.0, 0.5, vec![1.0, -1.0])
                .unwrap();
        let system = crate::dynamics::GossipSystem::from_block_model(&model).unwrap();
        let x0 = [0.5, -0.25, 0.125, -0.5];
        let mut rec = crate::dynamics::TrajectoryRecorder::new(1);
        let settings = Alg1Settings::new(1.0, vec![10, 100, 500]);
        let mut alg_rng = stream_rng(6, 0, Channel::Algorithm);
        let mut runner =
            Alg1Runner::new(model.assignment(), model.stubborn_states(), &x0, &settings, &mut alg_rng);
        let mut edge_rng = stream_rng(6, 0, Channel::Edges);
        {
            let mut observers: [&mut dyn Observer; 2] = [&mut rec, &mut runner];
            simulate(&system, &x0, 500, &mut edge_rng, &mut observers).unwrap();
        }
        let rows = rec.into_rows();
        for &snap_t in &[10u64, 100, 500] {
            // Batch mean over X(0..=snap_t); the recorder starts at t = 1,
            // so prepend the initial state.
            let mut batch = vec![0.0; 4];
            let mut count = 0.0;
            for (t, row) in std::iter::once(&(0u64, x0.to_vec())).chain(rows.iter()) {
                if *t <= snap_t {
                    for (b, v) in batch.iter_mut().zip(row) {
                        *b += v;
                    }
                    count += 1.0;
                }
            }
            for b in &mut batch {
                *b /= count;
            }
            // Replay the averager to the same tick for comparison.
            let mut avg = RunningAverage::new(&x0);
            for (t, row) in rows.iter().filter(|(t, _)| *t <= snap_t) {
                avg.record_dense(*t, row);
            }
            for i in 0..4 {
                assert!(
                    (avg.mean(i) - batch[i]).abs() <= 1e-10,
                    "slot {i} at t={snap_t}: {} vs {}",
                    avg.mean(i),
                    batch[i]
                );
            }
        }
    }
}
