use thiserror::Error;

/// Construction and validation failures of the model layer.
#[derive(Debug, Error)]
pub enum ModelError {
    #[error("agent count mismatch: {what} has length {got}, expected {expected}")]
    LengthMismatch {
        what: &'static str,
        got: usize,
        expected: usize,
    },
    #[error("community {community} has no regular agents")]
    NoRegularAgent { community: usize },
    #[error("community labels must cover 0..{num_communities} without gaps (community {community} is empty)")]
    EmptyCommunity {
        community: usize,
        num_communities: usize,
    },
    #[error("at least two communities are required, got {0}")]
    TooFewCommunities(usize),
    #[error("stubborn agent {agent} has no witness")]
    MissingWitness { agent: usize },
    #[error("witness {witness} of stubborn agent {agent} must be a regular agent in the same community")]
    BadWitness { agent: usize, witness: usize },
    #[error("interaction probabilities must be positive, got w_s = {w_s}, w_d = {w_d}")]
    NonPositiveWeights { w_s: f64, w_d: f64 },
    #[error("within- and cross-community probabilities must differ (w_s = w_d = {0})")]
    EqualWeights(f64),
    #[error("averaging weight q must lie in [0, 1), got {0}")]
    BadAveragingWeight(f64),
    #[error(
        "pair-probability normalization violated: sum over unordered pairs is {sum} \
         (residual {residual:e} exceeds tolerance {tolerance:e})"
    )]
    Normalization {
        sum: f64,
        residual: f64,
        tolerance: f64,
    },
    #[error("w_s/w_d ratio must be positive and != 1, got {0}")]
    BadRatio(f64),
    #[error("need at least two agents to define pairwise interactions, got {0}")]
    TooFewAgents(usize),
    #[error("interaction matrix is not symmetric at ({i}, {j}): {a} vs {b}")]
    NotSymmetric { i: usize, j: usize, a: f64, b: f64 },
    #[error("interaction matrix has negative entry {value} at ({i}, {j})")]
    NegativeEntry { i: usize, j: usize, value: f64 },
    #[error("interaction matrix has nonzero diagonal entry {value} at ({i}, {i})")]
    NonzeroDiagonal { i: usize, value: f64 },
    #[error("invalid SBM parameters: {0}")]
    BadSbmParams(String),
    #[error("graph has no edges")]
    EmptyGraph,
    #[error("matrix dimensions differ: {a} vs {b}")]
    DimensionMismatch { a: usize, b: usize },
    #[error("self-loop {0} is not allowed")]
    SelfLoop(usize),
    #[error("edge endpoint {0} out of range for {1} agents")]
    EdgeOutOfRange(usize, usize),
}
