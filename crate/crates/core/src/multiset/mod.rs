//! Power-sum multi-symmetric polynomials.
//!
//! A multiset of `n` vectors in `R^a` is stored as the rows of an `n × a`
//! matrix `X`. For a multi-index `α`, `p_α(X) = Σ_i Π_j X[i][j]^α_j`, and the
//! vector `u(X)` of all `p_α` with `|α| ≤ n` determines the multiset of rows.
//! Everything here is generic over [`Scalar`] and meant to be used with exact
//! rationals.

mod fwl;

pub use fwl::{direct_fwl_multiset, fwl_multiset_via_matmul, tau, MAX_FWL_CHANNELS, MAX_FWL_SIDE};

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::perm::Permutation;
use crate::scalar::{powi, Scalar};

/// Most multi-indices a single enumeration may produce.
pub const MAX_MULTI_INDICES: usize = 1 << 20;
/// Bounds on the matrices accepted by [`u_vector`].
pub const MAX_ROWS: usize = 8;
pub const MAX_COLS: usize = 8;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MultisetError {
    #[error("multi-index has width {found}, expected {expected}")]
    Width { expected: usize, found: usize },
    #[error("shape mismatch: {0:?} vs {1:?}")]
    Shape((usize, usize), (usize, usize)),
    #[error("data length {len} does not match {rows}x{cols}")]
    Length {
        len: usize,
        rows: usize,
        cols: usize,
    },
    #[error("ragged rows: row {row} has width {found}, expected {expected}")]
    Ragged {
        row: usize,
        expected: usize,
        found: usize,
    },
    #[error("multi-index width must be at least 1")]
    ZeroWidth,
    #[error("{what} exceeds the supported bound")]
    TooLarge { what: String },
}

/// Exponent vector `α`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MultiIndex(pub Vec<u32>);

impl MultiIndex {
    pub fn width(&self) -> usize {
        self.0.len()
    }

    /// `|α|`.
    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn split_at(&self, mid: usize) -> (MultiIndex, MultiIndex) {
        let (a, b) = self.0.split_at(mid);
        (MultiIndex(a.to_vec()), MultiIndex(b.to_vec()))
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")
    }
}

/// `C(n, k)`, `None` on overflow.
pub fn binomial(n: u64, k: u64) -> Option<u64> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u64 = 1;
    for i in 0..k {
        // acc * (n - i) / (i + 1) stays integral at every step
        acc = acc.checked_mul(n - i)? / (i + 1);
    }
    Some(acc)
}

/// All `α ∈ N^a` with `|α| ≤ max_degree`, ordered by degree and, within a
/// degree, lexicographically descending: for `a = 2, max_degree = 2` that is
/// `(0,0), (1,0), (0,1), (2,0), (1,1), (0,2)`.
pub fn enumerate_multi_indices(
    a: usize,
    max_degree: u32,
) -> Result<Vec<MultiIndex>, MultisetError> {
    if a == 0 {
        return Err(MultisetError::ZeroWidth);
    }
    let count = binomial(max_degree as u64 + a as u64, a as u64)
        .filter(|&c| c <= MAX_MULTI_INDICES as u64)
        .ok_or_else(|| MultisetError::TooLarge {
            what: format!("enumeration of width {a} up to degree {max_degree}"),
        })? as usize;
    let mut out = Vec::with_capacity(count);
    let mut cur = vec![0u32; a];
    for d in 0..=max_degree {
        fill(&mut cur, 0, d, &mut out);
    }
    debug_assert_eq!(out.len(), count);
    Ok(out)
}

fn fill(cur: &mut [u32], pos: usize, remaining: u32, out: &mut Vec<MultiIndex>) {
    if pos + 1 == cur.len() {
        cur[pos] = remaining;
        out.push(MultiIndex(cur.to_vec()));
        return;
    }
    for e in (0..=remaining).rev() {
        cur[pos] = e;
        fill(cur, pos + 1, remaining - e, out);
    }
}

/// Every `α ∈ N^{2a}` with `|α| ≤ n`, split into its first and last `a`
/// exponents, in the order of [`enumerate_multi_indices`].
pub fn split_multi_indices(
    a: usize,
    n: u32,
) -> Result<Vec<(MultiIndex, MultiIndex)>, MultisetError> {
    Ok(enumerate_multi_indices(2 * a, n)?
        .into_iter()
        .map(|al| al.split_at(a))
        .collect())
}

/// Dense row-major matrix; rows are multiset elements.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Scalar> Matrix<T> {
    pub fn new(rows: usize, cols: usize, data: Vec<T>) -> Result<Self, MultisetError> {
        if data.len() != rows * cols {
            return Err(MultisetError::Length {
                len: data.len(),
                rows,
                cols,
            });
        }
        Ok(Self { rows, cols, data })
    }

    /// From a list of rows; an empty list gives a `0 × 0` matrix.
    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self, MultisetError> {
        let cols = rows.first().map_or(0, Vec::len);
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for (i, r) in rows.into_iter().enumerate() {
            if r.len() != cols {
                return Err(MultisetError::Ragged {
                    row: i,
                    expected: cols,
                    found: r.len(),
                });
            }
            data.extend(r);
        }
        Ok(Self {
            rows: n,
            cols,
            data,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }

    pub fn data(&self) -> &[T] {
        &self.data
    }

    /// Row `i` moves to row `g(i)`.
    pub fn permute_rows(&self, g: &Permutation) -> Result<Self, MultisetError> {
        if g.len() != self.rows {
            return Err(MultisetError::Shape(
                (g.len(), self.cols),
                (self.rows, self.cols),
            ));
        }
        let mut data = self.data.clone();
        for i in 0..self.rows {
            let d = g.apply(i) * self.cols;
            data[d..d + self.cols].clone_from_slice(self.row(i));
        }
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }
}

/// `Π_j x_j^α_j` for one row.
pub(crate) fn monomial<T: Scalar>(row: &[T], alpha: &[u32]) -> T {
    row.iter()
        .zip(alpha)
        .filter(|(_, &e)| e > 0)
        .fold(T::one(), |acc, (x, &e)| acc * powi(x, e))
}

/// `p_α(X)`.
pub fn pmp<T: Scalar>(x: &Matrix<T>, alpha: &MultiIndex) -> Result<T, MultisetError> {
    if alpha.width() != x.cols() {
        return Err(MultisetError::Width {
            expected: x.cols(),
            found: alpha.width(),
        });
    }
    Ok((0..x.rows()).fold(T::zero(), |acc, i| acc + monomial(x.row(i), &alpha.0)))
}

/// `u(X)`: `p_α(X)` for every `|α| ≤ n` in graded-lex order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PmpVector<T> {
    pub values: Vec<T>,
}

impl<T: fmt::Display> PmpVector<T> {
    /// Debug dump as a JSON array of decimal strings (`"p/q"` for fractions).
    pub fn to_json(&self) -> String {
        let strings: Vec<String> = self.values.iter().map(|v| v.to_string()).collect();
        serde_json::to_string(&strings).expect("strings serialize")
    }
}

pub fn u_vector<T: Scalar>(x: &Matrix<T>) -> Result<PmpVector<T>, MultisetError> {
    if x.rows() > MAX_ROWS || x.cols() > MAX_COLS {
        return Err(MultisetError::TooLarge {
            what: format!("{}x{} matrix", x.rows(), x.cols()),
        });
    }
    if x.cols() == 0 {
        return Err(MultisetError::ZeroWidth);
    }
    let indices = enumerate_multi_indices(x.cols(), x.rows() as u32)?;
    let values = indices
        .iter()
        .map(|al| pmp(x, al))
        .collect::<Result<_, _>>()?;
    Ok(PmpVector { values })
}

/// Brute-force multiset equality of the rows: compares the sorted row lists.
pub fn multiset_equal_oracle<T: Scalar + Ord>(
    x: &Matrix<T>,
    y: &Matrix<T>,
) -> Result<bool, MultisetError> {
    if (x.rows(), x.cols()) != (y.rows(), y.cols()) {
        return Err(MultisetError::Shape(
            (x.rows(), x.cols()),
            (y.rows(), y.cols()),
        ));
    }
    let sorted = |m: &Matrix<T>| {
        let mut rows: Vec<&[T]> = (0..m.rows()).map(|i| m.row(i)).collect();
        rows.sort();
        rows.into_iter().map(<[T]>::to_vec).collect::<Vec<_>>()
    };
    Ok(sorted(x) == sorted(y))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;

    fn int_matrix(rows: &[&[i64]]) -> Matrix<Rational> {
        Matrix::from_rows(
            rows.iter()
                .map(|r| {
                    r.iter()
                        .map(|&v| Rational::from_integer(v.into()))
                        .collect()
                })
                .collect(),
        )
        .unwrap()
    }

    fn ints(v: &[i64]) -> Vec<Rational> {
        v.iter()
            .map(|&x| Rational::from_integer(x.into()))
            .collect()
    }

    #[test]
    fn graded_lex_order() {
        let got: Vec<Vec<u32>> = enumerate_multi_indices(2, 2)
            .unwrap()
            .into_iter()
            .map(|m| m.0)
            .collect();
        assert_eq!(
            got,
            vec![
                vec![0, 0],
                vec![1, 0],
                vec![0, 1],
                vec![2, 0],
                vec![1, 1],
                vec![0, 2]
            ]
        );
        assert_eq!(enumerate_multi_indices(1, 7).unwrap().len(), 8);
        assert_eq!(
            enumerate_multi_indices(3, 0).unwrap(),
            vec![MultiIndex(vec![0, 0, 0])]
        );
        assert!(enumerate_multi_indices(0, 3).is_err());
        assert!(enumerate_multi_indices(40, 40).is_err());
    }

    #[test]
    fn counts_are_binomial() {
        for a in 1..=4 {
            for d in 0..=6u32 {
                let got = enumerate_multi_indices(a, d).unwrap();
                assert_eq!(
                    got.len() as u64,
                    binomial(d as u64 + a as u64, a as u64).unwrap()
                );
                assert!(got.windows(2).all(|w| w[0].degree() <= w[1].degree()));
            }
        }
        assert_eq!(binomial(4, 2), Some(6));
        assert_eq!(binomial(3, 5), Some(0));
    }

    #[test]
    fn split_indices() {
        let s = split_multi_indices(1, 2).unwrap();
        let flat: Vec<(u32, u32)> = s.iter().map(|(b, g)| (b.0[0], g.0[0])).collect();
        assert_eq!(flat, vec![(0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2)]);
        for a in 1..=3 {
            for n in 0..=6 {
                let s = split_multi_indices(a, n).unwrap();
                assert_eq!(s.len(), enumerate_multi_indices(2 * a, n).unwrap().len());
                assert_eq!(s[0], (MultiIndex(vec![0; a]), MultiIndex(vec![0; a])));
            }
        }
    }

    #[test]
    fn pmp_examples() {
        let x = int_matrix(&[&[1, 2], &[3, 4]]);
        assert_eq!(
            pmp(&x, &MultiIndex(vec![1, 1])).unwrap(),
            Rational::from_integer(14.into())
        );
        assert_eq!(
            pmp(&x, &MultiIndex(vec![0, 0])).unwrap(),
            Rational::from_integer(2.into())
        );
        assert!(pmp(&x, &MultiIndex(vec![1])).is_err());
        let z = int_matrix(&[&[0, 5], &[2, 1]]);
        // the zero in row 0 kills that row's term
        assert_eq!(
            pmp(&z, &MultiIndex(vec![1, 3])).unwrap(),
            Rational::from_integer(2.into())
        );
    }

    // p_α by hand: (0,0)=2, (1,0)=1+3, (0,1)=2+4, (2,0)=1+9, (1,1)=2+12, (0,2)=4+16
    #[test]
    fn u_vector_of_small_matrix() {
        let x = int_matrix(&[&[1, 2], &[3, 4]]);
        assert_eq!(u_vector(&x).unwrap().values, ints(&[2, 4, 6, 10, 14, 20]));
        let swapped = int_matrix(&[&[3, 4], &[1, 2]]);
        assert_eq!(u_vector(&swapped).unwrap(), u_vector(&x).unwrap());
        let single = int_matrix(&[&[7, -2, 5]]);
        let u = u_vector(&single).unwrap().values;
        assert_eq!(&u[1..4], &ints(&[7, -2, 5])[..]);
        assert_eq!(
            u_vector(&x).unwrap().to_json(),
            r#"["2","4","6","10","14","20"]"#
        );
    }

    #[test]
    fn u_vector_bounds() {
        let big = Matrix::new(9, 1, vec![Rational::from_integer(1.into()); 9]).unwrap();
        assert!(matches!(
            u_vector(&big),
            Err(MultisetError::TooLarge { .. })
        ));
    }

    #[test]
    fn oracle_examples() {
        let x = int_matrix(&[&[1, 2], &[3, 4]]);
        let y = int_matrix(&[&[3, 4], &[1, 2]]);
        assert!(multiset_equal_oracle(&x, &y).unwrap());
        assert!(multiset_equal_oracle(&x, &x).unwrap());
        let p = int_matrix(&[&[1, 1], &[2, 2]]);
        let q = int_matrix(&[&[1, 2], &[2, 1]]);
        assert!(!multiset_equal_oracle(&p, &q).unwrap());
        assert_ne!(u_vector(&p).unwrap(), u_vector(&q).unwrap());
        assert!(multiset_equal_oracle(&x, &int_matrix(&[&[1, 2]])).is_err());
    }

    #[test]
    fn row_permutation() {
        let x = int_matrix(&[&[1], &[2], &[3]]);
        let g = Permutation::new(vec![2, 0, 1]).unwrap();
        assert_eq!(x.permute_rows(&g).unwrap(), int_matrix(&[&[2], &[3], &[1]]));
    }
}
