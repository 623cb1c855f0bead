//! Gradients, losses and the synthetic training experiment.

mod data;
mod experiment;
mod fit;
mod forward;
mod gradcheck;
mod loss;
pub mod tape;

pub use data::{make_cycle_union_dataset, Example, SyntheticDataset, CYCLE_UNION};
pub use experiment::{Architecture, Experiment, ExperimentOutcome};
pub use fit::{
    evaluate, history_to_csv, train, EpochRecord, Optimizer, TrainConfig, HISTORY_HEADER,
};
pub use forward::forward_on_tape;
#[doc(hidden)]
pub use gradcheck::grad_check_with_fault;
pub use gradcheck::{
    grad_check, loss_and_gradient, random_params, GradCheckConfig, GradCheckReport,
};
pub use loss::{loss_abs_error, loss_cross_entropy, predicted_class, Loss};
pub use tape::{Fault, NodeId, Op, Tape};

use crate::net::NetError;
use crate::tensor::TensorError;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TrainError {
    #[error(transparent)]
    Net(#[from] NetError),
    #[error(transparent)]
    Tensor(#[from] TensorError),
    #[error("the tape was already consumed by a backward pass")]
    TapeConsumed,
    #[error("expected {expected} parameters, found {found}")]
    ParamCount { expected: usize, found: usize },
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("non-finite {0}")]
    NonFinite(String),
    #[error("label {label} out of range for {classes} classes")]
    Label { label: usize, classes: usize },
    #[error("cycle length {0} is below 3")]
    CycleLength(usize),
    #[error("invalid training configuration: {0}")]
    Config(String),
    #[error("empty dataset")]
    EmptyDataset,
    #[error("training diverged at epoch {epoch}: {detail}")]
    Diverged { epoch: usize, detail: String },
}
