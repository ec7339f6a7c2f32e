use thiserror::Error;

#[derive(Debug, Error)]
pub enum EstimationError {
    #[error("label vectors have different lengths: {a} vs {b}")]
    LengthMismatch { a: usize, b: usize },
    #[error("need at least {needed} points for {what}, got {got}")]
    TooFewPoints {
        what: &'static str,
        needed: usize,
        got: usize,
    },
    #[error("activation stream required by this method is missing")]
    MissingActivations,
    #[error("activation stream is empty (t = 0)")]
    EmptyActivations,
    #[error("unknown recovery method {0:?}")]
    UnknownMethod(String),
}
