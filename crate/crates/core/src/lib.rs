//! Weisfeiler-Lehman refinement, exact power-sum multiset encodings and
//! matrix-product graph networks.
//!
//! The crate is organised bottom-up:
//!
//! * [`graph`]: the colored simple graph model, its tensor encodings, graph6 and
//!   JSON codecs, and deterministic generators.
//! * [`wl`]: 1-WL color refinement, k-WL and k-FWL with canonical color
//!   interning and pairwise comparison verdicts.
//! * [`multiset`]: exact power-sum multi-symmetric polynomial encodings and the
//!   matrix-multiplication realization of the 2-FWL multiset.
//! * [`net`]: the dense-tensor network runtime (feature-wise MLPs, per-channel
//!   matrix products, invariant pooling heads).
//! * [`train`]: reverse-mode gradients over the network operations, losses,
//!   gradient checking and the synthetic training experiment.
//! * [`bench`]: timing of the per-channel matrix product.
//!
//! Numeric code is generic over the scalar. The aliases below fix the two
//! instantiations used throughout: `f64` for the network and arbitrary
//! precision rationals for the exact multiset encodings.

pub mod bench;
pub mod graph;
pub mod multiset;
pub mod net;
pub mod perm;
pub mod scalar;
pub mod tensor;
pub mod train;
pub mod wl;

pub use graph::Graph;
pub use perm::Permutation;
pub use scalar::{Real, Scalar};
pub use tensor::DenseTensor3;

/// Arbitrary precision rational used by the exact encodings.
pub type Rational = num_rational::BigRational;

/// Double precision tensor, the working representation of the network.
pub type Tensor = DenseTensor3<f64>;

/// Single precision tensor.
pub type Tensor32 = DenseTensor3<f32>;

/// Exact rational tensor.
pub type ExactTensor = DenseTensor3<Rational>;

/// Exact rational matrix whose rows are multiset elements.
pub type ExactMatrix = multiset::Matrix<Rational>;

/// Double precision model parameters.
pub type Params = net::Params<f64>;
