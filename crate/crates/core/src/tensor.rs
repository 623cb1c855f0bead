//! `n × n × c` dense tensors.
//!
//! Layout is row-major over `(i1, i2, channel)`: the feature vector of a
//! position is contiguous, and the entry `(i1, i2, ch)` lives at
//! `(i1 * n + i2) * c + ch`. Every operation in the crate uses this layout.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::perm::Permutation;
use crate::scalar::Scalar;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TensorError {
    #[error("data length {len} does not match {n}x{n}x{c}")]
    Length { len: usize, n: usize, c: usize },
    #[error("side length mismatch: {0} vs {1}")]
    Side(usize, usize),
    #[error("channel mismatch: expected {expected}, found {found}")]
    Channels { expected: usize, found: usize },
    #[error("channel index {index} out of range for {channels} channels")]
    ChannelIndex { index: usize, channels: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DenseTensor3<T> {
    n: usize,
    c: usize,
    data: Vec<T>,
}

impl<T: Scalar> DenseTensor3<T> {
    pub fn new(n: usize, c: usize, data: Vec<T>) -> Result<Self, TensorError> {
        if data.len() != n * n * c {
            return Err(TensorError::Length {
                len: data.len(),
                n,
                c,
            });
        }
        Ok(Self { n, c, data })
    }

    pub fn zeros(n: usize, c: usize) -> Self {
        Self::filled(n, c, T::zero())
    }

    pub fn filled(n: usize, c: usize, value: T) -> Self {
        Self {
            n,
            c,
            data: vec![value; n * n * c],
        }
    }

    /// Builds a tensor from per-channel `n × n` row-major matrices.
    pub fn from_channels(n: usize, channels: &[Vec<T>]) -> Result<Self, TensorError> {
        let c = channels.len();
        let mut data = Vec::with_capacity(n * n * c);
        for ch in channels {
            if ch.len() != n * n {
                return Err(TensorError::Length {
                    len: ch.len(),
                    n,
                    c: 1,
                });
            }
        }
        for p in 0..n * n {
            for ch in channels {
                data.push(ch[p].clone());
            }
        }
        Ok(Self { n, c, data })
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn channels(&self) -> usize {
        self.c
    }

    #[inline]
    pub fn data(&self) -> &[T] {
        &self.data
    }

    #[inline]
    pub fn data_mut(&mut self) -> &mut [T] {
        &mut self.data
    }

    pub fn into_data(self) -> Vec<T> {
        self.data
    }

    #[inline]
    pub fn offset(&self, i1: usize, i2: usize, ch: usize) -> usize {
        debug_assert!(i1 < self.n && i2 < self.n && ch < self.c);
        (i1 * self.n + i2) * self.c + ch
    }

    #[inline]
    pub fn get(&self, i1: usize, i2: usize, ch: usize) -> &T {
        &self.data[self.offset(i1, i2, ch)]
    }

    #[inline]
    pub fn set(&mut self, i1: usize, i2: usize, ch: usize, value: T) {
        let o = self.offset(i1, i2, ch);
        self.data[o] = value;
    }

    /// Feature vector at position `(i1, i2)`.
    #[inline]
    pub fn position(&self, i1: usize, i2: usize) -> &[T] {
        let start = (i1 * self.n + i2) * self.c;
        &self.data[start..start + self.c]
    }

    /// Copies channel `ch` out as a row-major `n × n` matrix.
    pub fn channel(&self, ch: usize) -> Result<Vec<T>, TensorError> {
        if ch >= self.c {
            return Err(TensorError::ChannelIndex {
                index: ch,
                channels: self.c,
            });
        }
        Ok(self.data.iter().skip(ch).step_by(self.c).cloned().collect())
    }

    pub fn select_channels(&self, which: &[usize]) -> Result<Self, TensorError> {
        if let Some(&bad) = which.iter().find(|&&w| w >= self.c) {
            return Err(TensorError::ChannelIndex {
                index: bad,
                channels: self.c,
            });
        }
        let mut data = Vec::with_capacity(self.n * self.n * which.len());
        for pos in self.data.chunks_exact(self.c.max(1)).take(self.n * self.n) {
            data.extend(which.iter().map(|&w| pos[w].clone()));
        }
        Ok(Self {
            n: self.n,
            c: which.len(),
            data,
        })
    }

    /// Channel-wise concatenation `(self, other)`.
    pub fn concat(&self, other: &Self) -> Result<Self, TensorError> {
        if self.n != other.n {
            return Err(TensorError::Side(self.n, other.n));
        }
        let c = self.c + other.c;
        let mut data = Vec::with_capacity(self.n * self.n * c);
        for p in 0..self.n * self.n {
            data.extend_from_slice(&self.data[p * self.c..(p + 1) * self.c]);
            data.extend_from_slice(&other.data[p * other.c..(p + 1) * other.c]);
        }
        Ok(Self { n: self.n, c, data })
    }

    /// Splits off the first `left` channels.
    pub fn split_channels(&self, left: usize) -> Result<(Self, Self), TensorError> {
        if left > self.c {
            return Err(TensorError::ChannelIndex {
                index: left,
                channels: self.c,
            });
        }
        let right = self.c - left;
        let mut a = Vec::with_capacity(self.n * self.n * left);
        let mut b = Vec::with_capacity(self.n * self.n * right);
        for p in 0..self.n * self.n {
            let pos = &self.data[p * self.c..(p + 1) * self.c];
            a.extend_from_slice(&pos[..left]);
            b.extend_from_slice(&pos[left..]);
        }
        Ok((
            Self {
                n: self.n,
                c: left,
                data: a,
            },
            Self {
                n: self.n,
                c: right,
                data: b,
            },
        ))
    }

    /// `(g·T)[i1, i2, :] = T[g⁻¹(i1), g⁻¹(i2), :]`.
    pub fn permute(&self, g: &Permutation) -> Result<Self, TensorError> {
        if g.len() != self.n {
            return Err(TensorError::Side(g.len(), self.n));
        }
        let mut out = self.data.clone();
        for i1 in 0..self.n {
            for i2 in 0..self.n {
                let dst = (g.apply(i1) * self.n + g.apply(i2)) * self.c;
                let src = (i1 * self.n + i2) * self.c;
                out[dst..dst + self.c].clone_from_slice(&self.data[src..src + self.c]);
            }
        }
        Ok(Self {
            n: self.n,
            c: self.c,
            data: out,
        })
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> DenseTensor3<U> {
        DenseTensor3 {
            n: self.n,
            c: self.c,
            data: self.data.iter().map(f).collect(),
        }
    }
}

/// Row-major `n × n` matrix product `a · b`.
pub fn matmul<T: Scalar>(a: &[T], b: &[T], n: usize) -> Vec<T> {
    debug_assert_eq!(a.len(), n * n);
    debug_assert_eq!(b.len(), n * n);
    let mut out = vec![T::zero(); n * n];
    for i in 0..n {
        let row = &mut out[i * n..(i + 1) * n];
        for k in 0..n {
            let aik = &a[i * n + k];
            let brow = &b[k * n..(k + 1) * n];
            for (o, bkj) in row.iter_mut().zip(brow) {
                *o = o.clone() + aik.clone() * bkj.clone();
            }
        }
    }
    out
}

/// Row-major transpose of an `n × n` matrix.
pub fn transpose<T: Scalar>(a: &[T], n: usize) -> Vec<T> {
    let mut out = a.to_vec();
    for i in 0..n {
        for j in 0..n {
            out[j * n + i] = a[i * n + j].clone();
        }
    }
    out
}
