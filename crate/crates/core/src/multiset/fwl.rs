//! The 2-FWL multiset encoding computed with per-channel matrix products.
//!
//! For an `n × n × a` tensor `B` and a position `(i1, i2)`, the 2-FWL update
//! needs the multiset of rows `X_j = (B[j, i2, :], B[i1, j, :])`, `j ∈ [n]`.
//! Its encoding `u(X)` has one coordinate per `α = (β, γ)` with
//! `|β| + |γ| ≤ n`, and
//!
//! ```text
//! p_α(X) = Σ_j B[i1, j, :]^γ · B[j, i2, :]^β = (Z_l · Y_l)[i1, i2]
//! ```
//!
//! where `Y_l = B^β` and `Z_l = B^γ` are taken entrywise over channels.

use rayon::prelude::*;

use super::{monomial, split_multi_indices, u_vector, Matrix, MultiIndex, MultisetError};
use crate::scalar::Scalar;
use crate::tensor::{matmul, DenseTensor3};

pub const MAX_FWL_SIDE: usize = 8;
pub const MAX_FWL_CHANNELS: usize = 4;

fn check_bounds<T: Scalar>(b: &DenseTensor3<T>) -> Result<(), MultisetError> {
    if b.n() > MAX_FWL_SIDE || b.channels() > MAX_FWL_CHANNELS {
        return Err(MultisetError::TooLarge {
            what: format!("{}x{}x{} tensor", b.n(), b.n(), b.channels()),
        });
    }
    if b.channels() == 0 {
        return Err(MultisetError::ZeroWidth);
    }
    Ok(())
}

/// `out[i1, i2, l] = Π_j B[i1, i2, j]^{e_l[j]}` for each exponent vector `e_l`.
pub fn tau<T: Scalar>(
    b: &DenseTensor3<T>,
    exponents: &[MultiIndex],
) -> Result<DenseTensor3<T>, MultisetError> {
    let c = b.channels();
    if let Some(e) = exponents.iter().find(|e| e.width() != c) {
        return Err(MultisetError::Width {
            expected: c,
            found: e.width(),
        });
    }
    let n = b.n();
    let mut data = Vec::with_capacity(n * n * exponents.len());
    for i1 in 0..n {
        for i2 in 0..n {
            let feat = b.position(i1, i2);
            data.extend(exponents.iter().map(|e| monomial(feat, &e.0)));
        }
    }
    Ok(DenseTensor3::new(n, exponents.len(), data).expect("shape by construction"))
}

/// `W` with `W[:, :, l] = τ2(B)_l · τ1(B)_l`, one channel per split
/// multi-index `(β_l, γ_l)`.
pub fn fwl_multiset_via_matmul<T: Scalar>(
    b: &DenseTensor3<T>,
) -> Result<DenseTensor3<T>, MultisetError> {
    check_bounds(b)?;
    let n = b.n();
    let splits = split_multi_indices(b.channels(), n as u32)?;
    let (betas, gammas): (Vec<_>, Vec<_>) = splits.into_iter().unzip();
    let y = tau(b, &betas)?;
    let z = tau(b, &gammas)?;
    let products: Vec<Vec<T>> = (0..betas.len())
        .into_par_iter()
        .map(|l| {
            let yl = y.channel(l).expect("channel in range");
            let zl = z.channel(l).expect("channel in range");
            matmul(&zl, &yl, n)
        })
        .collect();
    Ok(DenseTensor3::from_channels(n, &products).expect("shape by construction"))
}

/// Position-wise `u(X)` with `X_j = (B[j, i2, :], B[i1, j, :])`, computed
/// directly from the definition.
pub fn direct_fwl_multiset<T: Scalar>(
    b: &DenseTensor3<T>,
) -> Result<DenseTensor3<T>, MultisetError> {
    check_bounds(b)?;
    let n = b.n();
    let positions: Vec<(usize, usize)> = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).collect();
    let vectors: Vec<Vec<T>> = positions
        .par_iter()
        .map(|&(i1, i2)| {
            let rows: Vec<Vec<T>> = (0..n)
                .map(|j| {
                    let mut r = b.position(j, i2).to_vec();
                    r.extend_from_slice(b.position(i1, j));
                    r
                })
                .collect();
            u_vector(&Matrix::from_rows(rows)?).map(|u| u.values)
        })
        .collect::<Result<_, _>>()?;
    let width = vectors.first().map_or(0, Vec::len);
    Ok(DenseTensor3::new(n, width, vectors.concat()).expect("shape by construction"))
}
