//! Scalar traits shared by the exact and floating point code paths.

use std::fmt::Debug;
use std::iter::Sum;
use std::ops::{AddAssign, MulAssign};

use num_traits::{Float, FromPrimitive, Num, ToPrimitive};

/// A commutative ring element that can be stored in tensors.
///
/// Implemented for every `Num + Clone` type, which covers `f32`, `f64`, the
/// primitive integers and [`crate::Rational`].
pub trait Scalar: Clone + PartialEq + Debug + Num + Send + Sync + 'static {}

impl<T> Scalar for T where T: Clone + PartialEq + Debug + Num + Send + Sync + 'static {}

/// Floating point scalar used by the network runtime.
pub trait Real:
    Scalar + Float + FromPrimitive + ToPrimitive + AddAssign + MulAssign + Sum + Copy
{
    /// Lossless conversion from a small integer count.
    fn from_usize_exact(v: usize) -> Self {
        Self::from_usize(v).expect("count representable")
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Integer power by repeated squaring, valid for any ring scalar.
pub fn powi<T: Scalar>(base: &T, exp: u32) -> T {
    let mut acc = T::one();
    let mut b = base.clone();
    let mut e = exp;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b.clone();
        }
        e >>= 1;
        if e > 0 {
            b = b.clone() * b;
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;
    use num_bigint::BigInt;

    #[test]
    fn powi_matches_repeated_multiplication() {
        for e in 0..12 {
            assert_eq!(powi(&3i64, e), 3i64.pow(e));
        }
        let half = Rational::new(BigInt::from(1), BigInt::from(2));
        assert_eq!(
            powi(&half, 3),
            Rational::new(BigInt::from(1), BigInt::from(8))
        );
        assert_eq!(powi(&0.0f64, 0), 1.0);
    }
}
