use thiserror::Error;

#[derive(Debug, Error)]
pub enum OracleError {
    #[error("mean dynamics are not Schur stable (spectral radius {rho})")]
    NotSchurStable { rho: f64 },
    #[error("linear solve residual {residual:e} exceeds tolerance {tolerance:e}")]
    ResidualTooLarge { residual: f64, tolerance: f64 },
    #[error("operation requires exactly two communities, got {0}")]
    NeedTwoCommunities(usize),
    #[error("operation requires at least one stubborn agent")]
    NoStubbornAgents,
    #[error("stubborn community means coincide (identifiability assumption violated)")]
    AssumptionTwoViolated,
    #[error("row {row} of the transition matrix sums to {sum}, not 1")]
    NotRowStochastic { row: usize, sum: f64 },
    #[error("transition matrix has negative entry at ({i}, {j})")]
    NegativeTransition { i: usize, j: usize },
    #[error("chain is reducible: the positive-entry graph is not strongly connected")]
    ReducibleChain,
    #[error("chain is periodic with period {0}")]
    PeriodicChain(usize),
    #[error("lemma hypothesis violated: t = {t} must exceed 2‖g‖_s/ε = {threshold}")]
    LemmaHypothesis { t: f64, threshold: f64 },
    #[error("epsilon must be positive, got {0}")]
    BadEpsilon(f64),
    #[error("dense linear solve failed (singular system)")]
    SolveFailed,
}
