use thiserror::Error;

use crate::model::ModelError;

#[derive(Debug, Error)]
pub enum DynamicsError {
    #[error("cannot sample edges: all pair probabilities are zero")]
    AllZeroWeights,
    #[error("initial regular states have length {got}, expected {expected}")]
    BadInitialStates { got: usize, expected: usize },
    #[error(transparent)]
    Model(#[from] ModelError),
}
