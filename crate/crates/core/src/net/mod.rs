//! Dense-tensor runtime for the matrix-product network
//! `F = m ∘ h ∘ B_d ∘ … ∘ B_1` over `n × n × c` tensors.

mod cube;
mod linear_basis;
mod mlp;
mod model;
mod ops;
mod spec;

pub use cube::{generalized_matmul3, CubeTensor};
pub use linear_basis::{
    basis_op, coefficient_count, equivariant_linear_basis_apply, BASIS_SIZE, BIAS_PATTERNS,
};
pub use mlp::{apply_mlp, apply_mlp_featurewise, Activation, MlpSpec};
pub use model::{
    block_forward, handcrafted_triangle_model, handcrafted_triangle_model_for, model_forward,
};
pub use ops::{feature_matmul, invariant_pool, matmul_real, Pooling};
pub use spec::{BlockSpec, Head, ModelSpec, Params, Skip, Slot};

pub(crate) use mlp::affine_featurewise;
pub(crate) use ops::{channel_matrix, from_channel_matrices, pool_with_argmax};

use thiserror::Error;

use crate::tensor::TensorError;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NetError {
    #[error("width mismatch: expected {expected}, found {found}")]
    Width { expected: usize, found: usize },
    #[error("side length mismatch: {0} vs {1}")]
    Side(usize, usize),
    #[error("parameter count mismatch: expected {expected}, found {found}")]
    ParamCount { expected: usize, found: usize },
    #[error("invalid model: {0}")]
    Spec(String),
    #[error("non-finite value after {0}")]
    NonFinite(String),
    #[error("malformed model file: {0}")]
    Format(String),
    #[error(transparent)]
    Tensor(#[from] TensorError),
}
