//! Bundled Zachary karate-club data: matrix C (34×34 shared-activity
//! weights) and the observed two-faction split. See data/README.md for
//! provenance.

use gossip_blocks_core::dynamics::GossipSystem;
use gossip_blocks_core::model::{CommunityAssignment, InteractionMatrix, Role};

use crate::config::{ConfigError, KarateConfig};

const KARATE_DATA: &str = include_str!("../data/zachary_karate.txt");
pub const KARATE_N: usize = 34;

/// Symmetric nonnegative weight matrix with zero diagonal.
#[derive(Debug, Clone)]
pub struct WeightedGraphData {
    pub n: usize,
    /// Row-major weights.
    pub weights: Vec<f64>,
    /// Faction per agent, 0-based (0 = Mr. Hi's club, 1 = Officers).
    pub factions: Vec<usize>,
}

impl WeightedGraphData {
    pub fn zachary() -> Self {
        let mut weights = Vec::with_capacity(KARATE_N * KARATE_N);
        let mut factions = Vec::new();
        for line in KARATE_DATA.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if let Some(rest) = line.strip_prefix("factions ") {
                factions = rest
                    .split_whitespace()
                    .map(|t| t.parse::<usize>().expect("bundled faction label") - 1)
                    .collect();
            } else {
                weights.extend(
                    line.split_whitespace()
                        .map(|t| t.parse::<f64>().expect("bundled weight")),
                );
            }
        }
        let data = Self {
            n: KARATE_N,
            weights,
            factions,
        };
        data.check();
        data
    }

    fn check(&self) {
        assert_eq!(self.weights.len(), self.n * self.n, "bundled matrix shape");
        assert_eq!(self.factions.len(), self.n, "bundled faction labels");
        let mut positive = false;
        for i in 0..self.n {
            assert_eq!(self.weights[i * self.n + i], 0.0, "zero diagonal");
            for j in 0..self.n {
                let w = self.weights[i * self.n + j];
                assert!(w >= 0.0);
                assert_eq!(w, self.weights[j * self.n + i], "symmetry at ({i},{j})");
                positive |= w > 0.0;
            }
        }
        assert!(positive, "at least one positive weight");
    }

    /// Total weight over unordered pairs.
    pub fn total_weight(&self) -> f64 {
        let mut sum = 0.0;
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                sum += self.weights[i * self.n + j];
            }
        }
        sum
    }

    /// Interaction matrix W = C/Σ: one edge fires per tick with probability
    /// proportional to interaction strength.
    pub fn to_interaction(&self) -> InteractionMatrix {
        let total = self.total_weight();
        InteractionMatrix::from_pair_fn(self.n, |i, j| self.weights[i * self.n + j] / total)
            .expect("bundled matrix is valid")
    }
}

/// Builds the karate gossip system: the configured agents are stubborn with
/// the configured states, everyone else is regular, labels are the
/// documented factions.
pub fn karate_system(config: &KarateConfig, q: f64) -> Result<(GossipSystem, Vec<u8>), ConfigError> {
    let data = WeightedGraphData::zachary();
    let stubborn: Vec<usize> = config.stubborn_agents.iter().map(|&a| a - 1).collect();
    let witnesses: Vec<usize> = config.witnesses.iter().map(|&a| a - 1).collect();
    if stubborn[0] == stubborn[1] {
        return Err(ConfigError::Invalid(
            "the two stubborn agents must differ".into(),
        ));
    }
    let mut roles = vec![Role::Regular; data.n];
    let mut witness = vec![None; data.n];
    for (slot, &agent) in stubborn.iter().enumerate() {
        roles[agent] = Role::Stubborn;
        let w = witnesses[slot];
        if data.factions[w] != data.factions[agent] {
            return Err(ConfigError::Invalid(format!(
                "witness {} is not in stubborn agent {}'s faction",
                w + 1,
                agent + 1
            )));
        }
        witness[agent] = Some(w);
    }
    for (slot, &w) in witnesses.iter().enumerate() {
        if stubborn.contains(&w) {
            return Err(ConfigError::Invalid(format!(
                "witness {} of stubborn agent {} must be regular",
                w + 1,
                stubborn[slot] + 1
            )));
        }
    }
    let assignment = CommunityAssignment::new(data.factions.clone(), roles, witness)?;
    let mut states = vec![0.0; 2];
    for (slot, &agent) in stubborn.iter().enumerate() {
        let s_slot = assignment.stubborn_slot(agent).expect("stubborn agent");
        states[s_slot] = config.stubborn_states[slot];
    }
    let system = GossipSystem::new(assignment, data.to_interaction(), q, states)?;
    let truth = data.factions.iter().map(|&f| f as u8).collect();
    Ok((system, truth))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_matrix_has_the_documented_shape() {
        let data = WeightedGraphData::zachary();
        assert_eq!(data.n, 34);
        assert_eq!(data.total_weight(), 231.0);
        // Agents 1 and 34 lead opposite factions.
        assert_ne!(data.factions[0], data.factions[33]);
        // 78 distinct edges.
        let edges = (0..data.n)
            .flat_map(|i| ((i + 1)..data.n).map(move |j| (i, j)))
            .filter(|&(i, j)| data.weights[i * data.n + j] > 0.0)
            .count();
        assert_eq!(edges, 78);
    }

    #[test]
    fn interaction_matrix_is_pair_normalized() {
        let w = WeightedGraphData::zachary().to_interaction();
        assert!((w.pair_sum() - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn default_config_builds_a_valid_system() {
        let (system, truth) = karate_system(&KarateConfig::default(), 0.5).unwrap();
        assert_eq!(system.assignment().num_stubborn(), 2);
        assert_eq!(system.assignment().num_regular(), 32);
        assert_eq!(truth.len(), 34);
        // stubborn slots carry +1 (agent 1) and −1 (agent 34)
        let s0 = system.assignment().stubborn_slot(0).unwrap();
        let s33 = system.assignment().stubborn_slot(33).unwrap();
        assert_eq!(system.stubborn_states()[s0], 1.0);
        assert_eq!(system.stubborn_states()[s33], -1.0);
    }

    #[test]
    fn cross_faction_witness_is_rejected() {
        let config = KarateConfig {
            witnesses: [33, 2],
            ..KarateConfig::default()
        };
        assert!(karate_system(&config, 0.5).is_err());
    }
}
