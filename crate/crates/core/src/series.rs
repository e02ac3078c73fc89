//! Truncated power series in `q` with explicit precision bookkeeping.
//!
//! A [`Series`] knows its coefficients exactly for every exponent below
//! [`Series::prec`]. Coefficients below [`Series::ord`] are zero; the
//! coefficient at `ord` is nonzero unless the series is zero to precision, in
//! which case `ord == prec` and nothing is stored.

use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq)]
pub struct Series<T> {
    ord: i64,
    coeffs: Vec<T>,
}

/// Outcome of comparing two series below a given exponent.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Agreement {
    pub equal: bool,
    /// Every exponent below this one was compared.
    pub certified_below: i64,
    pub first_mismatch: Option<i64>,
}

impl<T: Scalar> Series<T> {
    /// Series with coefficient `coeffs[i]` at exponent `ord + i`, known
    /// exactly below `ord + coeffs.len()`.
    pub fn from_coeffs(ord: i64, coeffs: Vec<T>) -> Self {
        let mut s = Series { ord, coeffs };
        s.normalize();
        s
    }

    /// Builds from integer coefficients starting at `ord`.
    pub fn from_ints(ord: i64, coeffs: &[i64]) -> Self {
        Self::from_coeffs(ord, coeffs.iter().map(|&c| T::from_int(c)).collect())
    }

    pub fn zero(prec: i64) -> Self {
        Series {
            ord: prec,
            coeffs: Vec::new(),
        }
    }

    pub fn constant(c: T, prec: i64) -> Self {
        if prec <= 0 {
            return Self::zero(prec);
        }
        let mut coeffs = vec![T::zero(); prec as usize];
        coeffs[0] = c;
        Self::from_coeffs(0, coeffs)
    }

    pub fn one(prec: i64) -> Self {
        Self::constant(T::one(), prec)
    }

    /// `c * q^e`, known below `prec`.
    pub fn monomial(c: T, e: i64, prec: i64) -> Self {
        if e >= prec {
            return Self::zero(prec);
        }
        let mut coeffs = vec![T::zero(); (prec - e) as usize];
        coeffs[0] = c;
        Self::from_coeffs(e, coeffs)
    }

    fn normalize(&mut self) {
        let lead = self
            .coeffs
            .iter()
            .position(|c| !c.is_zero())
            .unwrap_or(self.coeffs.len());
        if lead > 0 {
            self.coeffs.drain(..lead);
            self.ord += lead as i64;
        }
    }

    /// Exponent of the first nonzero coefficient, or `prec` when the series
    /// is zero to precision.
    pub fn ord(&self) -> i64 {
        self.ord
    }

    pub fn prec(&self) -> i64 {
        self.ord + self.coeffs.len() as i64
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Effective order, or `None` when zero to precision.
    pub fn valuation(&self) -> Option<i64> {
        (!self.is_zero()).then_some(self.ord)
    }

    pub fn leading_coefficient(&self) -> Option<&T> {
        self.coeffs.first()
    }

    /// Stored window `[ord, prec)`.
    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    /// Coefficient at exponent `e`, or `None` if `e` is outside the certified
    /// range.
    pub fn coeff(&self, e: i64) -> Option<T> {
        if e >= self.prec() {
            None
        } else if e < self.ord {
            Some(T::zero())
        } else {
            Some(self.coeffs[(e - self.ord) as usize].clone())
        }
    }

    /// `(exponent, coefficient)` pairs over the stored window.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &T)> {
        self.coeffs
            .iter()
            .enumerate()
            .map(move |(i, c)| (self.ord + i as i64, c))
    }

    /// Drop everything at or above `prec`. Never raises precision.
    pub fn truncate(&self, prec: i64) -> Self {
        if prec >= self.prec() {
            return self.clone();
        }
        if prec <= self.ord {
            return Self::zero(prec);
        }
        Series {
            ord: self.ord,
            coeffs: self.coeffs[..(prec - self.ord) as usize].to_vec(),
        }
    }

    /// Multiply by `q^s`.
    pub fn shift(&self, s: i64) -> Self {
        Series {
            ord: self.ord + s,
            coeffs: self.coeffs.clone(),
        }
    }

    /// Dense coefficients for exponents in `[from, to)`, zero-filled below
    /// `ord`. Caller guarantees `to <= prec`.
    fn window(&self, from: i64, to: i64) -> Vec<T> {
        (from..to)
            .map(|e| self.coeff(e).expect("window inside certified range"))
            .collect()
    }

    pub fn add(&self, other: &Self) -> Self {
        let prec = self.prec().min(other.prec());
        let ord = self.ord.min(other.ord).min(prec);
        let mut coeffs = self.window(ord, prec);
        for (e, c) in other.terms() {
            if e >= prec {
                break;
            }
            coeffs[(e - ord) as usize] += c;
        }
        Self::from_coeffs(ord, coeffs)
    }

    pub fn neg(&self) -> Self {
        Series {
            ord: self.ord,
            coeffs: self.coeffs.iter().map(|c| -c.clone()).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, r: &T) -> Self {
        if r.is_zero() {
            return Self::zero(self.prec());
        }
        Series {
            ord: self.ord,
            coeffs: self.coeffs.iter().map(|c| c.mul_ref(r)).collect(),
        }
    }

    /// Cauchy product. Known below `min(f.prec + g.ord, g.prec + f.ord)`.
    pub fn mul(&self, other: &Self) -> Self {
        let ord = self.ord + other.ord;
        let prec = (self.prec() + other.ord).min(other.prec() + self.ord);
        if self.is_zero() || other.is_zero() {
            return Self::zero(prec);
        }
        let len = (prec - ord) as usize;
        Self::from_coeffs(ord, T::convolve(&self.coeffs, &other.coeffs, len))
    }

    /// `q d/dq`: the coefficient at `e` is multiplied by `e`.
    pub fn theta(&self) -> Self {
        let coeffs = self
            .terms()
            .map(|(e, c)| c.mul_ref(&T::from_int(e)))
            .collect();
        Self::from_coeffs(self.ord, coeffs)
    }

    /// Multiplicative inverse. For `f = q^v u` with `u(0) != 0` the result is
    /// `q^-v u^-1`, known below `prec(f) - 2v`.
    pub fn invert(&self) -> Result<Self> {
        let lead = self.leading_coefficient().ok_or(Error::ZeroLeadingCoefficient)?;
        let n = self.coeffs.len();
        let inv_lead = T::one() / lead.clone();
        let mut out: Vec<T> = Vec::with_capacity(n);
        out.push(inv_lead.clone());
        for m in 1..n {
            let mut acc = T::zero();
            for j in 1..=m {
                if !self.coeffs[j].is_zero() {
                    acc += &self.coeffs[j].mul_ref(&out[m - j]);
                }
            }
            out.push(-(acc * &inv_lead));
        }
        Ok(Self::from_coeffs(-self.ord, out))
    }

    /// Integer power by repeated squaring; negative exponents invert first.
    pub fn pow(&self, m: i64) -> Result<Self> {
        if m < 0 {
            return self.invert()?.pow(-m);
        }
        if m == 0 {
            return Ok(Self::one((self.prec() - self.ord).max(0)));
        }
        let mut base = self.clone();
        let mut acc: Option<Self> = None;
        let mut e = m;
        loop {
            if e & 1 == 1 {
                acc = Some(match acc {
                    Some(a) => a.mul(&base),
                    None => base.clone(),
                });
            }
            e >>= 1;
            if e == 0 {
                break;
            }
            base = base.mul(&base);
        }
        Ok(acc.expect("m > 0"))
    }

    /// Substitute `q -> q^factor`. Precision scales by `factor`.
    pub fn dilate(&self, factor: i64) -> Self {
        assert!(factor >= 1, "dilation factor must be positive");
        if factor == 1 || self.is_zero() {
            return Series {
                ord: self.ord * factor,
                coeffs: self.coeffs.clone(),
            };
        }
        let f = factor as usize;
        let mut coeffs = vec![T::zero(); (self.coeffs.len() - 1) * f + f];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[i * f] = c.clone();
        }
        Self::from_coeffs(self.ord * factor, coeffs)
    }

    /// Compare coefficients at every exponent below `upto`.
    pub fn eq_to(&self, other: &Self, upto: i64) -> Result<Agreement> {
        let available = self.prec().min(other.prec());
        if upto > available {
            return Err(Error::PrecisionExceeded {
                requested: upto,
                available,
            });
        }
        let start = self.ord.min(other.ord);
        let first_mismatch = (start..upto).find(|&e| self.coeff(e) != other.coeff(e));
        Ok(Agreement {
            equal: first_mismatch.is_none(),
            certified_below: upto,
            first_mismatch,
        })
    }

    /// Whether the series vanishes below `upto`.
    pub fn is_zero_to(&self, upto: i64) -> Result<Agreement> {
        self.eq_to(&Self::zero(self.prec()), upto)
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident) => {
        impl<T: Scalar> $tr<&Series<T>> for &Series<T> {
            type Output = Series<T>;
            fn $method(self, rhs: &Series<T>) -> Series<T> {
                Series::$method(self, rhs)
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);

impl<T: Scalar> Neg for &Series<T> {
    type Output = Series<T>;
    fn neg(self) -> Series<T> {
        Series::neg(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    type S = Series<BigRational>;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::ratio(n, d)
    }

    #[test]
    fn cancellation_raises_order() {
        let f = S::from_ints(0, &[1, 24]);
        let g = S::from_ints(0, &[-1, 0]);
        let s = &f + &g;
        assert_eq!(s.ord(), 1);
        assert_eq!(s.prec(), 2);
        assert_eq!(s.coeff(1), Some(r(24, 1)));
    }

    #[test]
    fn sum_takes_min_precision() {
        let f = S::from_ints(0, &[1, 2, 3, 4]);
        let g = S::from_ints(1, &[5]);
        let s = &f + &g;
        assert_eq!(s.prec(), 2);
        assert_eq!(s.coeffs(), &[r(1, 1), r(7, 1)]);
    }

    #[test]
    fn square_of_c_prefix() {
        // Hand convolution of 1 + 24q + 24q^2.
        let c = S::from_ints(0, &[1, 24, 24]);
        let sq = &c * &c;
        assert_eq!(sq.prec(), 3);
        assert_eq!(sq.coeffs(), &[r(1, 1), r(48, 1), r(624, 1)]);
    }

    #[test]
    fn product_precision_uses_orders() {
        let f = S::from_ints(1, &[1, 0, 0]); // q + O(q^4)
        let g = S::from_ints(0, &[1, 1]); // 1 + q + O(q^2)
        let p = &f * &g;
        assert_eq!(p.ord(), 1);
        assert_eq!(p.prec(), 3);
        let z = S::zero(5);
        assert!((&z * &f).is_zero());
        assert_eq!((&z * &f).prec(), 6);
    }

    #[test]
    fn scale_by_third() {
        let f = S::from_ints(0, &[3, -24, -120, -96]);
        let g = f.scale(&r(1, 3));
        assert_eq!(g, S::from_ints(0, &[1, -8, -40, -32]));
        assert!(f.scale(&r(0, 1)).is_zero());
        assert!((&f.scale(&r(-1, 1)) + &f).is_zero());
    }

    #[test]
    fn theta_kills_constant() {
        let c = S::constant(r(5, 1), 10);
        let t = c.theta();
        assert!(t.is_zero());
        assert_eq!(t.prec(), 10);
        let f = S::from_ints(0, &[1, 24, 24, 96, 24]);
        assert_eq!(f.theta().scale(&r(1, 24)), S::from_ints(1, &[1, 2, 12, 4]));
    }

    #[test]
    fn geometric_inverse() {
        let f = S::from_ints(0, &[1, -1, 0, 0, 0, 0]);
        assert_eq!(f.invert().unwrap(), S::from_ints(0, &[1; 6]));
    }

    #[test]
    fn inverse_of_shifted_series() {
        let f = S::from_ints(1, &[2, 1, 0]); // 2q + q^2 + O(q^4)
        let g = f.invert().unwrap();
        assert_eq!(g.ord(), -1);
        assert_eq!(g.prec(), 2);
        let one = &f * &g;
        assert_eq!(one, S::one(one.prec()));
        assert_eq!(S::zero(4).invert(), Err(Error::ZeroLeadingCoefficient));
    }

    #[test]
    fn small_powers() {
        let f = S::from_ints(0, &[1, -1, 0, 0]);
        assert_eq!(f.pow(2).unwrap(), S::from_ints(0, &[1, -2, 1, 0]));
        assert_eq!(f.pow(0).unwrap(), S::one(4));
        assert_eq!(f.pow(-1).unwrap(), S::from_ints(0, &[1, 1, 1, 1]));
    }

    #[test]
    fn dilation() {
        let f = S::from_ints(0, &[1, -24]);
        let g = f.dilate(2);
        assert_eq!(g.prec(), 4);
        assert_eq!(g, S::from_ints(0, &[1, 0, -24, 0]));
        assert!(S::zero(3).dilate(2).is_zero());
        assert_eq!(S::zero(3).dilate(2).prec(), 6);
    }

    #[test]
    fn certified_equality() {
        let c = S::from_ints(0, &[1, 24, 24, 96]);
        let e = S::from_ints(0, &[1, -8, -40, -32]);
        assert!(c.eq_to(&c, 4).unwrap().equal);
        assert!(c.eq_to(&e, 1).unwrap().equal);
        let a = c.eq_to(&e, 2).unwrap();
        assert!(!a.equal);
        assert_eq!(a.first_mismatch, Some(1));
        assert!(matches!(
            c.eq_to(&e, 5),
            Err(Error::PrecisionExceeded { requested: 5, available: 4 })
        ));
    }

    #[test]
    fn coefficient_outside_window_is_unknown() {
        let f = S::from_ints(2, &[3, 4]);
        assert_eq!(f.coeff(0), Some(r(0, 1)));
        assert_eq!(f.coeff(3), Some(r(4, 1)));
        assert_eq!(f.coeff(4), None);
    }

    #[test]
    fn generic_over_floats() {
        let f = Series::<f64>::from_ints(0, &[1, -1, 0, 0]);
        let g = f.invert().unwrap();
        assert_eq!(g.coeffs(), &[1.0, 1.0, 1.0, 1.0]);
    }
}
