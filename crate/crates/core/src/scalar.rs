//! Coefficient fields for series, polynomials and linear algebra.
//!
//! Everything in this crate is generic over [`Scalar`]. The verification
//! routines only make sense over an exact field, so the crate root aliases
//! pin [`num_rational::BigRational`]; the floating-point and `Rational64`
//! impls exist for cheap experiments and property tests.

use std::fmt::{Debug, Display};
use std::ops::Neg;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Rational64};
use num_traits::{FromPrimitive, NumAssignRef, NumRef, One, ToPrimitive, Zero};

use crate::linalg::LinearSolution;

pub trait Scalar:
    Clone
    + Debug
    + Display
    + PartialOrd
    + NumRef
    + NumAssignRef
    + Neg<Output = Self>
    + FromPrimitive
    + Send
    + Sync
    + 'static
{
    /// The value as a machine integer, when it is one.
    fn as_integer(&self) -> Option<i64>;

    fn from_int(n: i64) -> Self {
        Self::from_i64(n).expect("every scalar type holds small integers")
    }

    fn ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Self::from_int(num) / Self::from_int(den)
    }

    fn mul_ref(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        out *= rhs;
        out
    }

    /// First `len` coefficients of the Cauchy product of `a` and `b`
    /// (missing entries count as zero).
    fn convolve(a: &[Self], b: &[Self], len: usize) -> Vec<Self> {
        let mut out = vec![Self::zero(); len];
        for (i, x) in a.iter().enumerate().take(len) {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate().take(len - i) {
                out[i + j] += &x.mul_ref(y);
            }
        }
        out
    }

    /// Fast exact solve of `matrix · x = rhs`, when the type has one that can
    /// certify its answer. `None` defers to plain elimination.
    fn certified_solve(_matrix: &[Vec<Self>], _rhs: &[Self]) -> Option<LinearSolution<Self>> {
        None
    }
}

impl Scalar for BigRational {
    fn as_integer(&self) -> Option<i64> {
        if self.is_integer() {
            self.numer().to_i64()
        } else {
            None
        }
    }

    fn from_int(n: i64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }

    fn ratio(num: i64, den: i64) -> Self {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }

    fn mul_ref(&self, rhs: &Self) -> Self {
        self * rhs
    }

    // Clearing denominators first turns the O(len^2) rational additions into
    // integer ones; a single gcd per output coefficient remains.
    fn convolve(a: &[Self], b: &[Self], len: usize) -> Vec<Self> {
        let a = &a[..a.len().min(len)];
        let b = &b[..b.len().min(len)];
        let (ia, da) = clear_denominators(a);
        let (ib, db) = clear_denominators(b);
        let mut acc = vec![BigInt::zero(); len];
        for (i, x) in ia.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in ib.iter().enumerate().take(len - i) {
                if !y.is_zero() {
                    acc[i + j] += x * y;
                }
            }
        }
        let den = da * db;
        acc.into_iter()
            .map(|n| BigRational::new(n, den.clone()))
            .collect()
    }

    fn certified_solve(matrix: &[Vec<Self>], rhs: &[Self]) -> Option<LinearSolution<Self>> {
        crate::linalg::modular::solve(matrix, rhs)
    }
}

/// Scale a slice of rationals by the lcm of its denominators.
fn clear_denominators(xs: &[BigRational]) -> (Vec<BigInt>, BigInt) {
    let den = xs
        .iter()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints = xs
        .iter()
        .map(|x| x.numer() * (&den / x.denom()))
        .collect();
    (ints, den)
}

impl Scalar for Rational64 {
    fn as_integer(&self) -> Option<i64> {
        self.is_integer().then(|| self.to_integer())
    }

    fn ratio(num: i64, den: i64) -> Self {
        Rational64::new(num, den)
    }
}

macro_rules! float_scalar {
    ($t:ty) => {
        impl Scalar for $t {
            fn as_integer(&self) -> Option<i64> {
                if self.fract() == 0.0 && self.abs() < 9.0e15 {
                    Some(*self as i64)
                } else {
                    None
                }
            }
        }
    };
}

float_scalar!(f64);
float_scalar!(f32);
