//! Activation functions, a small fully connected network trained by
//! backpropagation with pathology diagnostics, and a Hopfield associative
//! memory.

pub mod activation;
pub mod hopfield;
pub mod mlp;

use thiserror::Error;

pub use activation::{Activation, DEFAULT_LEAKY_ALPHA};
pub use hopfield::{HopfieldNet, Recall};
pub use mlp::{ForwardPass, GradientReport, Gradients, Mlp};

#[derive(Error, Debug, Clone, PartialEq)]
pub enum NeuralError {
    #[error("bad topology: {0}")]
    BadTopology(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("leaky ReLU slope must lie in (0, 1), got {0}")]
    BadAlpha(f64),
    #[error("learning rate must be non-negative and finite, got {0}")]
    BadLearningRate(f64),
    #[error("dataset is empty")]
    EmptyDataset,
    #[error("pattern entry {value} at index {index} is not bipolar")]
    NonBipolarPattern { index: usize, value: i8 },
    #[error("state entry {value} at index {index} is not ternary")]
    NonTernaryState { index: usize, value: i8 },
    #[error("pattern length {got} does not match network size {expected}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("no bipolar fixed point reached within {iterations} sweeps")]
    NonConvergent { iterations: usize, state: Vec<i8> },
    #[error("max_iter must be at least 1")]
    ZeroIterations,
    #[error("unsupported document: {0}")]
    BadDocument(String),
}

pub type Result<T> = std::result::Result<T, NeuralError>;
