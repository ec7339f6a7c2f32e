use rand_chacha::ChaCha8Rng;

use super::{gossip_step, DynamicsError, EdgeSampler};
use crate::model::{
    build_block_interaction_matrix, BlockGossipModel, CommunityAssignment, InteractionMatrix,
    ModelError,
};

/// Runnable configuration: who talks to whom with what probability, how
/// averaging weighs the endpoints, and the frozen stubborn states.
#[derive(Debug, Clone)]
pub struct GossipSystem {
    assignment: CommunityAssignment,
    interaction: InteractionMatrix,
    q: f64,
    stubborn_states: Vec<f64>,
}

impl GossipSystem {
    pub fn new(
        assignment: CommunityAssignment,
        interaction: InteractionMatrix,
        q: f64,
        stubborn_states: Vec<f64>,
    ) -> Result<Self, ModelError> {
        if interaction.n() != assignment.len() {
            return Err(ModelError::DimensionMismatch {
                a: interaction.n(),
                b: assignment.len(),
            });
        }
        if stubborn_states.len() != assignment.num_stubborn() {
            return Err(ModelError::LengthMismatch {
                what: "stubborn_states",
                got: stubborn_states.len(),
                expected: assignment.num_stubborn(),
            });
        }
        if !(0.0..1.0).contains(&q) {
            return Err(ModelError::BadAveragingWeight(q));
        }
        Ok(Self {
            assignment,
            interaction,
            q,
            stubborn_states,
        })
    }

    /// Exact block system of a [`BlockGossipModel`].
    pub fn from_block_model(model: &BlockGossipModel) -> Result<Self, ModelError> {
        let w = build_block_interaction_matrix(model)?;
        Self::new(
            model.assignment().clone(),
            w,
            model.q(),
            model.stubborn_states().to_vec(),
        )
    }

    pub fn assignment(&self) -> &CommunityAssignment {
        &self.assignment
    }

    pub fn interaction(&self) -> &InteractionMatrix {
        &self.interaction
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn stubborn_states(&self) -> &[f64] {
        &self.stubborn_states
    }
}

/// Regular states and the tick counter after a run.
#[derive(Debug, Clone, PartialEq)]
pub struct GossipState {
    pub regular_states: Vec<f64>,
    pub time: u64,
}

/// Read-only view of the regular states during a run, in regular-slot order.
pub struct RegularStates<'a> {
    full: &'a [f64],
    regular: &'a [usize],
}

impl RegularStates<'_> {
    #[inline]
    pub fn get(&self, slot: usize) -> f64 {
        self.full[self.regular[slot]]
    }

    pub fn len(&self) -> usize {
        self.regular.len()
    }

    pub fn is_empty(&self) -> bool {
        self.regular.is_empty()
    }

    pub fn to_vec(&self) -> Vec<f64> {
        self.regular.iter().map(|&g| self.full[g]).collect()
    }
}

/// Per-tick notification. `touched` lists the regular slots whose state
/// changed this tick, with their new values, so observers can stay
/// incremental. `edge` is the fired pair — privileged activation
/// information that only the §6-style spectral baseline may consume; the
/// estimator works from states alone.
pub struct TickEvent<'a> {
    pub t: u64,
    pub edge: (usize, usize),
    pub touched: &'a [(usize, f64)],
    pub states: RegularStates<'a>,
}

pub trait Observer {
    fn on_tick(&mut self, event: &TickEvent<'_>);
}

/// Executes `steps` ticks with a prebuilt sampler, invoking each observer
/// after every tick. Deterministic given the rng state. `steps = 0` returns
/// the initial regular states unchanged.
pub fn simulate_with_sampler(
    system: &GossipSystem,
    sampler: &EdgeSampler,
    x0_regular: &[f64],
    steps: u64,
    rng: &mut ChaCha8Rng,
    observers: &mut [&mut dyn Observer],
) -> Result<GossipState, DynamicsError> {
    let assignment = &system.assignment;
    let n_r = assignment.num_regular();
    if x0_regular.len() != n_r {
        return Err(DynamicsError::BadInitialStates {
            got: x0_regular.len(),
            expected: n_r,
        });
    }

    let n = assignment.len();
    let mut x = vec![0.0; n];
    for (slot, &agent) in assignment.regular_agents().iter().enumerate() {
        x[agent] = x0_regular[slot];
    }
    for (slot, &agent) in assignment.stubborn_agents().iter().enumerate() {
        x[agent] = system.stubborn_states[slot];
    }

    // Convexity keeps every state inside the hull of initial + stubborn
    // states; checked per tick in debug builds.
    #[cfg(debug_assertions)]
    let hull = {
        let lo = x.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = x.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        (lo, hi)
    };

    let roles = assignment.roles();
    let q = system.q;
    let mut touched_slots: [(usize, f64); 2] = [(0, 0.0); 2];
    for t in 1..=steps {
        let (i, j) = sampler.sample(rng);
        let touched = gossip_step(&mut x, i, j, q, roles);
        let raw = touched.as_slice();
        for (out, &(agent, value)) in touched_slots.iter_mut().zip(raw) {
            *out = (
                assignment
                    .regular_slot(agent)
                    .expect("touched agents are regular"),
                value,
            );
        }

        #[cfg(debug_assertions)]
        for &(_, value) in raw {
            debug_assert!(
                value >= hull.0 - 1e-12 && value <= hull.1 + 1e-12,
                "state {value} escaped the invariant hull [{}, {}]",
                hull.0,
                hull.1
            );
        }

        if !observers.is_empty() {
            let event = TickEvent {
                t,
                edge: (i, j),
                touched: &touched_slots[..raw.len()],
                states: RegularStates {
                    full: &x,
                    regular: assignment.regular_agents(),
                },
            };
            for obs in observers.iter_mut() {
                obs.on_tick(&event);
            }
        }
    }

    Ok(GossipState {
        regular_states: assignment.regular_agents().iter().map(|&g| x[g]).collect(),
        time: steps,
    })
}

/// [`simulate_with_sampler`] with the sampler built from the system's own
/// interaction matrix.
pub fn simulate(
    system: &GossipSystem,
    x0_regular: &[f64],
    steps: u64,
    rng: &mut ChaCha8Rng,
    observers: &mut [&mut dyn Observer],
) -> Result<GossipState, DynamicsError> {
    let sampler = EdgeSampler::from_interaction(&system.interaction)?;
    simulate_with_sampler(system, &sampler, x0_regular, steps, rng, observers)
}

/// Records "t,x_1,...,x_{n_r}" rows at a decimation cadence (every `every`
/// ticks; tick multiples only).
pub struct TrajectoryRecorder {
    every: u64,
    rows: Vec<(u64, Vec<f64>)>,
}

impl TrajectoryRecorder {
    pub fn new(every: u64) -> Self {
        Self {
            every: every.max(1),
            rows: Vec::new(),
        }
    }

    pub fn rows(&self) -> &[(u64, Vec<f64>)] {
        &self.rows
    }

    pub fn into_rows(self) -> Vec<(u64, Vec<f64>)> {
        self.rows
    }
}

impl Observer for TrajectoryRecorder {
    fn on_tick(&mut self, event: &TickEvent<'_>) {
        if event.t % self.every == 0 {
            self.rows.push((event.t, event.states.to_vec()));
        }
    }
}
