use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::NetError;
use crate::scalar::Real;
use crate::tensor::DenseTensor3;

/// Row-major `n × n` product for floats, `i-k-j` loop order.
pub fn matmul_real<T: Real>(a: &[T], b: &[T], n: usize) -> Vec<T> {
    let mut out = vec![T::zero(); n * n];
    for i in 0..n {
        let row = &mut out[i * n..(i + 1) * n];
        for k in 0..n {
            let aik = a[i * n + k];
            let brow = &b[k * n..(k + 1) * n];
            for (o, &bkj) in row.iter_mut().zip(brow) {
                *o += aik * bkj;
            }
        }
    }
    out
}

/// Channel `ch` of `t` as a row-major `n × n` matrix.
pub(crate) fn channel_matrix<T: Real>(t: &DenseTensor3<T>, ch: usize) -> Vec<T> {
    let c = t.channels();
    t.data().iter().skip(ch).step_by(c).copied().collect()
}

/// Reassembles per-channel matrices into a tensor.
pub(crate) fn from_channel_matrices<T: Real>(n: usize, mats: &[Vec<T>]) -> DenseTensor3<T> {
    let c = mats.len();
    let mut data = vec![T::zero(); n * n * c];
    for (ch, m) in mats.iter().enumerate() {
        for (p, &v) in m.iter().enumerate() {
            data[p * c + ch] = v;
        }
    }
    DenseTensor3::new(n, c, data).expect("shape by construction")
}

/// `W[:, :, j] = U[:, :, j] · V[:, :, j]`, channels in parallel.
pub fn feature_matmul<T: Real>(
    u: &DenseTensor3<T>,
    v: &DenseTensor3<T>,
) -> Result<DenseTensor3<T>, NetError> {
    if u.n() != v.n() {
        return Err(NetError::Side(u.n(), v.n()));
    }
    if u.channels() != v.channels() {
        return Err(NetError::Width {
            expected: u.channels(),
            found: v.channels(),
        });
    }
    let n = u.n();
    let mats: Vec<Vec<T>> = (0..u.channels())
        .into_par_iter()
        .map(|ch| matmul_real(&channel_matrix(u, ch), &channel_matrix(v, ch), n))
        .collect();
    Ok(from_channel_matrices(n, &mats))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Pooling {
    #[default]
    Max,
    Sum,
}

/// Invariant readout: for each channel, the reduction over the diagonal
/// followed by the reduction over the off-diagonal entries, so the output is
/// `[diag_0, off_0, diag_1, off_1, …]`. An empty reduction (the off-diagonal
/// of a `1 × 1` tensor) yields `0`.
pub fn invariant_pool<T: Real>(t: &DenseTensor3<T>, pooling: Pooling) -> Vec<T> {
    pool_with_argmax(t, pooling).0
}

/// [`invariant_pool`] plus, for max pooling, the linear data index that
/// attained each output (`usize::MAX` for an empty reduction). Ties go to
/// the lowest index.
pub(crate) fn pool_with_argmax<T: Real>(
    t: &DenseTensor3<T>,
    pooling: Pooling,
) -> (Vec<T>, Vec<usize>) {
    let (n, c) = (t.n(), t.channels());
    let mut out = vec![T::zero(); 2 * c];
    let mut arg = vec![usize::MAX; 2 * c];
    let data = t.data();
    for i1 in 0..n {
        for i2 in 0..n {
            let slot = if i1 == i2 { 0 } else { 1 };
            let base = (i1 * n + i2) * c;
            for ch in 0..c {
                let (o, idx) = (2 * ch + slot, base + ch);
                let x = data[idx];
                match pooling {
                    Pooling::Sum => out[o] += x,
                    Pooling::Max => {
                        if arg[o] == usize::MAX || x > out[o] {
                            out[o] = x;
                            arg[o] = idx;
                        }
                    }
                }
            }
        }
    }
    (out, arg)
}
