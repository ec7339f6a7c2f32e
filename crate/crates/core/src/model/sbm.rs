use rand::Rng;

use super::{InteractionMatrix, ModelError};
use crate::rng;

/// Two-community stochastic block model parameters.
///
/// Labels are assigned by fixed fractions: agents 0..ν₁n get community 0,
/// the rest community 1. The concentration regime
/// log n/n = O(min{p_s, p_d}) under which the sampled interaction matrix
/// stays close to its averaged version is documented, not validated.
#[derive(Debug, Clone, Copy)]
pub struct SbmParams {
    pub n: usize,
    /// Fraction of community-0 agents; ν₁n must be an integer.
    pub nu1: f64,
    /// Within-community link probability, in (0, 1].
    pub p_s: f64,
    /// Cross-community link probability, in (0, 1].
    pub p_d: f64,
}

impl SbmParams {
    pub fn validate(&self) -> Result<(), ModelError> {
        if self.n < 2 {
            return Err(ModelError::BadSbmParams(format!("n = {} < 2", self.n)));
        }
        if !(self.nu1 > 0.0 && self.nu1 < 1.0) {
            return Err(ModelError::BadSbmParams(format!(
                "nu1 = {} outside (0, 1)",
                self.nu1
            )));
        }
        let n1 = self.nu1 * self.n as f64;
        if (n1 - n1.round()).abs() > 1e-9 || n1.round() < 1.0 {
            return Err(ModelError::BadSbmParams(format!(
                "nu1*n = {n1} is not a positive integer"
            )));
        }
        for (name, p) in [("p_s", self.p_s), ("p_d", self.p_d)] {
            if !(p > 0.0 && p <= 1.0) {
                return Err(ModelError::BadSbmParams(format!("{name} = {p} outside (0, 1]")));
            }
        }
        Ok(())
    }

    /// Community-0 size ν₁n.
    pub fn n1(&self) -> usize {
        (self.nu1 * self.n as f64).round() as usize
    }

    pub fn n2(&self) -> usize {
        self.n - self.n1()
    }

    /// Community label (0/1) of an agent under the fixed-fraction layout.
    pub fn label_of(&self, agent: usize) -> usize {
        usize::from(agent >= self.n1())
    }
}

/// Undirected simple graph stored as a sorted edge list (i < j, 0-based).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimpleGraph {
    n: usize,
    edges: Vec<(u32, u32)>,
}

impl SimpleGraph {
    pub fn new(n: usize, mut edges: Vec<(u32, u32)>) -> Result<Self, ModelError> {
        for e in &mut edges {
            if e.0 == e.1 {
                return Err(ModelError::SelfLoop(e.0 as usize));
            }
            if e.0 > e.1 {
                *e = (e.1, e.0);
            }
            if e.1 as usize >= n {
                return Err(ModelError::EdgeOutOfRange(e.1 as usize, n));
            }
        }
        edges.sort_unstable();
        edges.dedup();
        Ok(Self { n, edges })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(u32, u32)] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edge-list text, one "i j" pair per line, 1-based.
    pub fn to_edge_list_text(&self) -> String {
        let mut out = String::new();
        for &(i, j) in &self.edges {
            out.push_str(&format!("{} {}\n", i + 1, j + 1));
        }
        out
    }

    /// Parses 1-based "i j" lines (blank lines ignored).
    pub fn from_edge_list_text(n: usize, text: &str) -> Result<Self, ModelError> {
        let mut edges = Vec::new();
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let mut it = line.split_whitespace();
            let parse = |tok: Option<&str>| -> Result<u32, ModelError> {
                tok.and_then(|t| t.parse::<u32>().ok())
                    .filter(|&v| v >= 1)
                    .ok_or_else(|| ModelError::BadSbmParams(format!("bad edge-list line: {line:?}")))
            };
            let i = parse(it.next())?;
            let j = parse(it.next())?;
            edges.push((i - 1, j - 1));
        }
        Self::new(n, edges)
    }

    /// Whether every agent can reach every other one.
    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        let mut adj = vec![Vec::new(); self.n];
        for &(i, j) in &self.edges {
            adj[i as usize].push(j as usize);
            adj[j as usize].push(i as usize);
        }
        let mut seen = vec![false; self.n];
        let mut stack = vec![0usize];
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = stack.pop() {
            for &u in &adj[v] {
                if !seen[u] {
                    seen[u] = true;
                    count += 1;
                    stack.push(u);
                }
            }
        }
        count == self.n
    }
}

/// Samples an SBM graph: each unordered pair is linked independently with
/// p_s (same label) or p_d (different), deterministically for a given seed.
/// Pairs are visited in row-major order with one uniform draw each.
pub fn sample_sbm(params: &SbmParams, seed: u64) -> Result<SimpleGraph, ModelError> {
    sample_sbm_with(params, &mut rng::graph_rng(seed))
}

/// [`sample_sbm`] drawing from a caller-provided stream.
pub fn sample_sbm_with(
    params: &SbmParams,
    rng: &mut rng::ChaCha8Rng,
) -> Result<SimpleGraph, ModelError> {
    params.validate()?;
    let n = params.n;
    let n1 = params.n1();
    let mut edges = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            let p = if (i < n1) == (j < n1) { params.p_s } else { params.p_d };
            if rng.random::<f64>() < p {
                edges.push((i as u32, j as u32));
            }
        }
    }
    SimpleGraph::new(n, edges)
}

/// Interaction matrix of a sampled graph: W̃ = 𝒜/α with α the edge count.
pub fn graph_to_interaction(g: &SimpleGraph) -> Result<InteractionMatrix, ModelError> {
    if g.edge_count() == 0 {
        return Err(ModelError::EmptyGraph);
    }
    let alpha = g.edge_count() as f64;
    let n = g.n();
    let mut w = vec![0.0; n * n];
    for &(i, j) in g.edges() {
        let (i, j) = (i as usize, j as usize);
        w[i * n + j] = 1.0 / alpha;
        w[j * n + i] = 1.0 / alpha;
    }
    InteractionMatrix::from_rows(n, w)
}

/// Expected edge count E{α} = [½p_s(ν₁²+ν₂²−ν₁/n−ν₂/n) + p_d ν₁ν₂]n².
pub fn expected_edge_count(params: &SbmParams) -> f64 {
    let n = params.n as f64;
    let (nu1, nu2) = (params.nu1, 1.0 - params.nu1);
    let within = 0.5 * params.p_s * (nu1 * nu1 + nu2 * nu2 - nu1 / n - nu2 / n);
    (within + params.p_d * nu1 * nu2) * n * n
}

/// Averaged interaction matrix E{𝒜}/E{α}: block matrix with off-diagonal
/// entries p_s/E{α} (same label) and p_d/E{α} (different), zero diagonal.
pub fn expected_interaction(params: &SbmParams) -> Result<InteractionMatrix, ModelError> {
    params.validate()?;
    let ealpha = expected_edge_count(params);
    let n1 = params.n1();
    InteractionMatrix::from_pair_fn(params.n, |i, j| {
        if (i < n1) == (j < n1) {
            params.p_s / ealpha
        } else {
            params.p_d / ealpha
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_one_probabilities_give_the_complete_graph() {
        let params = SbmParams { n: 8, nu1: 0.5, p_s: 1.0, p_d: 1.0 };
        let g = sample_sbm(&params, 3).unwrap();
        assert_eq!(g.edge_count(), 8 * 7 / 2);
    }

    #[test]
    fn vanishing_probabilities_give_an_empty_graph() {
        let params = SbmParams { n: 10, nu1: 0.5, p_s: 1e-12, p_d: 1e-12 };
        let g = sample_sbm(&params, 11).unwrap();
        assert_eq!(g.edge_count(), 0);
        assert!(matches!(graph_to_interaction(&g), Err(ModelError::EmptyGraph)));
    }

    #[test]
    fn sampling_is_seed_deterministic() {
        let params = SbmParams { n: 60, nu1: 0.5, p_s: 0.3, p_d: 0.05 };
        let a = sample_sbm(&params, 42).unwrap();
        let b = sample_sbm(&params, 42).unwrap();
        assert_eq!(a, b);
        let c = sample_sbm(&params, 43).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn complete_graph_interaction_is_uniform() {
        let g = SimpleGraph::new(3, vec![(0, 1), (0, 2), (1, 2)]).unwrap();
        let w = graph_to_interaction(&g).unwrap();
        for (_, _, v) in w.pairs() {
            assert_eq!(v, 1.0 / 3.0);
        }
    }

    #[test]
    fn single_edge_interaction_concentrates_on_that_edge() {
        let g = SimpleGraph::new(3, vec![(0, 1)]).unwrap();
        let w = graph_to_interaction(&g).unwrap();
        assert_eq!(w.entry(0, 1), 1.0);
        assert_eq!(w.entry(0, 2), 0.0);
        assert_eq!(w.entry(1, 2), 0.0);
    }

    #[test]
    fn any_sample_is_pair_normalized() {
        let params = SbmParams { n: 40, nu1: 0.25, p_s: 0.4, p_d: 0.1 };
        let g = sample_sbm(&params, 5).unwrap();
        let w = graph_to_interaction(&g).unwrap();
        assert!((w.pair_sum() - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn expected_edge_count_matches_direct_pair_counting() {
        // n=4, nu1=0.5 (exact in binary), p_s=0.5, p_d=0.25:
        // within pairs 2, cross pairs 4 -> E{alpha} = 0.5*2 + 0.25*4 = 2.
        let params = SbmParams { n: 4, nu1: 0.5, p_s: 0.5, p_d: 0.25 };
        assert_eq!(expected_edge_count(&params), 2.0);
        let w = expected_interaction(&params).unwrap();
        assert_eq!(w.entry(0, 1), 0.25);
        assert_eq!(w.entry(0, 2), 0.125);
        assert!((w.pair_sum() - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn uniform_probabilities_make_the_expectation_parameter_free() {
        let n = 6;
        for p in [0.2, 0.7, 1.0] {
            let params = SbmParams { n, nu1: 0.5, p_s: p, p_d: p };
            let w = expected_interaction(&params).unwrap();
            let uniform = 2.0 / (n as f64 * (n - 1) as f64);
            for (_, _, v) in w.pairs() {
                assert!((v - uniform).abs() <= 1e-15);
            }
        }
    }

    #[test]
    fn edge_list_text_round_trips() {
        let g = SimpleGraph::new(5, vec![(0, 3), (1, 2), (2, 4)]).unwrap();
        let text = g.to_edge_list_text();
        assert_eq!(text, "1 4\n2 3\n3 5\n");
        let back = SimpleGraph::from_edge_list_text(5, &text).unwrap();
        assert_eq!(back, g);
    }

    #[test]
    fn connectivity_detects_isolated_vertices() {
        let g = SimpleGraph::new(4, vec![(0, 1), (1, 2)]).unwrap();
        assert!(!g.is_connected());
        let g = SimpleGraph::new(4, vec![(0, 1), (1, 2), (2, 3)]).unwrap();
        assert!(g.is_connected());
    }
}
