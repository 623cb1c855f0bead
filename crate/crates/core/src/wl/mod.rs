//! Weisfeiler-Lehman refinement: color refinement on vertices, k-WL and
//! k-FWL on k-tuples, and pairwise comparison by color histograms.

mod coloring;
mod compare;
pub mod corpus;
mod interner;
mod refine;

pub use coloring::{
    decode_index, encode_index, initial_coloring, initial_coloring_joint, neighborhood_fwl,
    neighborhood_wl, tuple_count, TupleColoring, MAX_TUPLES,
};
pub use compare::{compare_graphs, Comparison, Variant, Verdict};
pub use interner::{ColorId, ColorInterner, Signature};
pub use refine::{
    color_refinement_1wl, fwl_step, fwl_step_joint, refine_vertices_joint, round_cap,
    vertex_coloring_joint, wl_step, wl_step_joint,
};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WlError {
    #[error("{n}^{k} tuples exceeds the supported maximum")]
    TooLarge { n: usize, k: usize },
    #[error("coloring has {found} entries, expected {expected}")]
    ColoringLength { expected: usize, found: usize },
    #[error("permutation of size {found} applied to {expected} vertices")]
    PermutationSize { expected: usize, found: usize },
    #[error("position {position} out of range for {k}-tuples")]
    PositionOutOfRange { position: usize, k: usize },
    #[error("vertex {vertex} out of range for {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("invalid tuple order {0}")]
    InvalidOrder(usize),
    #[error("color interner exhausted")]
    InternerExhausted,
    #[error("variant {variant} does not accept k = {k}")]
    VariantOrder { variant: Variant, k: usize },
    #[error("no stable coloring within {0} rounds")]
    RoundLimit(usize),
}

/// Leading word of every signature, keeping the signature families disjoint
/// inside one interner.
pub(crate) mod tags {
    pub const INITIAL: u32 = 0;
    pub const WL: u32 = 1;
    pub const FWL: u32 = 2;
    pub const VERTEX: u32 = 3;
    pub const REFINE: u32 = 4;
}
