//! The 15 linear permutation-equivariant maps `R^{n×n} → R^{n×n}` and the
//! two equivariant bias patterns.

use super::ops::{channel_matrix, from_channel_matrices};
use super::NetError;
use crate::scalar::Real;
use crate::tensor::DenseTensor3;

pub const BASIS_SIZE: usize = 15;
pub const BIAS_PATTERNS: usize = 2;

/// Number of coefficients for `c_in → c_out` channels.
pub fn coefficient_count(c_in: usize, c_out: usize) -> usize {
    BASIS_SIZE * c_in * c_out + BIAS_PATTERNS * c_out
}

/// Applies basis element `op` (0-based) to one `n × n` matrix `x`.
///
/// | op | output `[i, j]` |
/// |----|-----------------|
/// | 0  | `x[i, j]` |
/// | 1  | `x[j, i]` |
/// | 2  | `x[i, i]` if `i = j` |
/// | 3  | row sum `i` |
/// | 4  | row sum `j` |
/// | 5  | column sum `i` |
/// | 6  | column sum `j` |
/// | 7  | total sum |
/// | 8  | trace |
/// | 9  | `x[i, i]` |
/// | 10 | `x[j, j]` |
/// | 11 | row sum `i` if `i = j` |
/// | 12 | column sum `i` if `i = j` |
/// | 13 | total sum if `i = j` |
/// | 14 | trace if `i = j` |
pub fn basis_op<T: Real>(op: usize, x: &[T], n: usize) -> Vec<T> {
    assert!(op < BASIS_SIZE, "basis index out of range");
    let row: Vec<T> = (0..n).map(|i| (0..n).map(|k| x[i * n + k]).sum()).collect();
    let col: Vec<T> = (0..n).map(|i| (0..n).map(|k| x[k * n + i]).sum()).collect();
    let total: T = row.iter().copied().sum();
    let trace: T = (0..n).map(|i| x[i * n + i]).sum();
    let mut out = vec![T::zero(); n * n];
    for i in 0..n {
        for j in 0..n {
            let d = i == j;
            let v = match op {
                0 => x[i * n + j],
                1 => x[j * n + i],
                2 if d => x[i * n + i],
                3 => row[i],
                4 => row[j],
                5 => col[i],
                6 => col[j],
                7 => total,
                8 => trace,
                9 => x[i * n + i],
                10 => x[j * n + j],
                11 if d => row[i],
                12 if d => col[i],
                13 if d => total,
                14 if d => trace,
                _ => T::zero(),
            };
            out[i * n + j] = v;
        }
    }
    out
}

/// `out[:, :, o] = Σ_{op, i} coef[op, i, o] · L_op(T[:, :, i]) + bias`.
///
/// Coefficients are laid out as `[op][in][out]` followed by `c_out` weights
/// of the all-ones pattern and `c_out` weights of the identity pattern.
pub fn equivariant_linear_basis_apply<T: Real>(
    t: &DenseTensor3<T>,
    c_out: usize,
    coefficients: &[T],
) -> Result<DenseTensor3<T>, NetError> {
    let (n, c_in) = (t.n(), t.channels());
    let expected = coefficient_count(c_in, c_out);
    if coefficients.len() != expected {
        return Err(NetError::ParamCount {
            expected,
            found: coefficients.len(),
        });
    }
    let inputs: Vec<Vec<T>> = (0..c_in).map(|i| channel_matrix(t, i)).collect();
    let mut outs = vec![vec![T::zero(); n * n]; c_out];
    for op in 0..BASIS_SIZE {
        for (i, x) in inputs.iter().enumerate() {
            let image = basis_op(op, x, n);
            for (o, acc) in outs.iter_mut().enumerate() {
                let w = coefficients[(op * c_in + i) * c_out + o];
                if w != T::zero() {
                    for (a, v) in acc.iter_mut().zip(&image) {
                        *a += w * *v;
                    }
                }
            }
        }
    }
    let bias = &coefficients[BASIS_SIZE * c_in * c_out..];
    for (o, acc) in outs.iter_mut().enumerate() {
        let (ones, eye) = (bias[o], bias[c_out + o]);
        for i in 0..n {
            for j in 0..n {
                acc[i * n + j] += ones + if i == j { eye } else { T::zero() };
            }
        }
    }
    Ok(from_channel_matrices(n, &outs))
}
