//! Vertex permutations and their action on index tuples.

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PermutationError {
    #[error("index {index} out of range for permutation of {n} elements")]
    OutOfRange { index: usize, n: usize },
    #[error("index {0} appears twice")]
    Repeated(usize),
    #[error("size mismatch: {0} vs {1}")]
    SizeMismatch(usize, usize),
}

/// A bijection on `0..n`. `g` sends vertex `v` to `g.apply(v)`.
///
/// Tensors transform as `(g·T)[i] = T[g⁻¹(i)]`, so an entry that lived at
/// multi-index `i` moves to `g(i)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Permutation {
    mapping: Vec<usize>,
}

impl Permutation {
    pub fn new(mapping: Vec<usize>) -> Result<Self, PermutationError> {
        let n = mapping.len();
        let mut seen = vec![false; n];
        for &v in &mapping {
            if v >= n {
                return Err(PermutationError::OutOfRange { index: v, n });
            }
            if std::mem::replace(&mut seen[v], true) {
                return Err(PermutationError::Repeated(v));
            }
        }
        Ok(Self { mapping })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            mapping: (0..n).collect(),
        }
    }

    /// Uniformly random permutation.
    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        let mut mapping: Vec<usize> = (0..n).collect();
        mapping.shuffle(rng);
        Self { mapping }
    }

    pub fn len(&self) -> usize {
        self.mapping.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mapping.is_empty()
    }

    #[inline]
    pub fn apply(&self, v: usize) -> usize {
        self.mapping[v]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.mapping
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.mapping.len()];
        for (v, &w) in self.mapping.iter().enumerate() {
            inv[w] = v;
        }
        Self { mapping: inv }
    }

    /// `self ∘ other`: apply `other` first, then `self`.
    pub fn compose(&self, other: &Self) -> Result<Self, PermutationError> {
        if self.len() != other.len() {
            return Err(PermutationError::SizeMismatch(self.len(), other.len()));
        }
        Ok(Self {
            mapping: other.mapping.iter().map(|&v| self.mapping[v]).collect(),
        })
    }

    pub fn is_identity(&self) -> bool {
        self.mapping.iter().enumerate().all(|(i, &v)| i == v)
    }

    /// Entrywise action on a multi-index.
    pub fn apply_tuple(&self, tuple: &[usize]) -> Vec<usize> {
        tuple.iter().map(|&v| self.mapping[v]).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn rejects_non_bijections() {
        assert_eq!(
            Permutation::new(vec![0, 0]),
            Err(PermutationError::Repeated(0))
        );
        assert_eq!(
            Permutation::new(vec![0, 2]),
            Err(PermutationError::OutOfRange { index: 2, n: 2 })
        );
    }

    #[test]
    fn inverse_composes_to_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for n in 0..10 {
            let g = Permutation::random(n, &mut rng);
            assert!(g.inverse().compose(&g).unwrap().is_identity());
            assert!(g.compose(&g.inverse()).unwrap().is_identity());
        }
    }

    #[test]
    fn compose_applies_right_operand_first() {
        let shift = Permutation::new(vec![1, 2, 0]).unwrap();
        let swap = Permutation::new(vec![1, 0, 2]).unwrap();
        let both = shift.compose(&swap).unwrap();
        for v in 0..3 {
            assert_eq!(both.apply(v), shift.apply(swap.apply(v)));
        }
    }
}
