//! Dense univariate polynomials, the `P_n`/`Q_n` three-term families, and
//! terminating Gauss hypergeometric polynomials.

use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::series::Series;

/// Coefficients from degree 0 upward; no trailing zeros.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial<T> {
    coeffs: Vec<T>,
}

impl<T: Scalar> Polynomial<T> {
    pub fn new(mut coeffs: Vec<T>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Polynomial { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| T::from_int(c)).collect())
    }

    pub fn zero() -> Self {
        Polynomial { coeffs: Vec::new() }
    }

    pub fn constant(c: T) -> Self {
        Self::new(vec![c])
    }

    /// The polynomial `x`.
    pub fn x() -> Self {
        Self::new(vec![T::zero(), T::one()])
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> T {
        self.coeffs.get(i).cloned().unwrap_or_else(T::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading_coefficient(&self) -> Option<&T> {
        self.coeffs.last()
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|i| self.coeff(i) + other.coeff(i)).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-T::one()))
    }

    pub fn scale(&self, r: &T) -> Self {
        Self::new(self.coeffs.iter().map(|c| c.mul_ref(r)).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let len = self.coeffs.len() + other.coeffs.len() - 1;
        Self::new(T::convolve(&self.coeffs, &other.coeffs, len))
    }

    /// `x · p(x)`.
    pub fn mul_x(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(T::zero());
        coeffs.extend(self.coeffs.iter().cloned());
        Polynomial { coeffs }
    }

    /// `p(−x)`.
    pub fn reflect(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| if i % 2 == 1 { -c.clone() } else { c.clone() })
                .collect(),
        )
    }

    /// True when every nonzero term has degree of the given parity (0 = even).
    pub fn has_parity(&self, parity: usize) -> bool {
        self.coeffs
            .iter()
            .enumerate()
            .all(|(i, c)| c.is_zero() || i % 2 == parity % 2)
    }

    pub fn eval(&self, x: &T) -> T {
        self.coeffs
            .iter()
            .rev()
            .fold(T::zero(), |acc, c| acc.mul_ref(x) + c)
    }

    /// Horner evaluation at a series argument.
    pub fn eval_series(&self, f: &Series<T>) -> Series<T> {
        let base = f.prec();
        let mut iter = self.coeffs.iter().rev();
        let Some(lead) = iter.next() else {
            return Series::zero(base);
        };
        let mut acc = Series::constant(lead.clone(), base);
        for c in iter {
            acc = acc.mul(f);
            acc = acc.add(&Series::constant(c.clone(), acc.prec()));
        }
        acc
    }

    /// `Σ p_i x^i y^{(degree − i)/2}`, i.e. `√y^degree · p(x/√y)` with the
    /// square root eliminated. Fails if some nonzero term has
    /// `degree − i` odd or negative.
    pub fn eval_homogenized(&self, degree: usize, x: &Series<T>, y: &Series<T>) -> Result<Series<T>> {
        for (i, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() && (i > degree || (degree - i) % 2 == 1) {
                return Err(Error::Domain(format!(
                    "term of degree {i} does not homogenize to total degree {degree}"
                )));
            }
        }
        let prec = x.prec().min(y.prec());
        let mut total = Series::zero(prec);
        let mut x_pow = Series::one(prec);
        let mut y_pows = vec![Series::one(prec)];
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                x_pow = x_pow.mul(x);
            }
            if c.is_zero() {
                continue;
            }
            let j = (degree - i) / 2;
            while y_pows.len() <= j {
                let next = y_pows.last().expect("nonempty").mul(y);
                y_pows.push(next);
            }
            total = total.add(&x_pow.mul(&y_pows[j]).scale(c));
        }
        Ok(total)
    }
}

impl<T: Scalar> fmt::Display for Polynomial<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let negative = *c < T::zero();
            let mag = if negative { -c.clone() } else { c.clone() };
            match (first, negative) {
                (true, true) => f.write_str("-")?,
                (true, false) => {}
                (false, true) => f.write_str(" - ")?,
                (false, false) => f.write_str(" + ")?,
            }
            first = false;
            let text = mag.to_string();
            let unit = mag.is_one();
            match i {
                0 => f.write_str(&text)?,
                _ => {
                    if !unit {
                        if text.contains('/') {
                            write!(f, "({text})")?;
                        } else {
                            f.write_str(&text)?;
                        }
                    }
                    if i == 1 {
                        f.write_str("x")?;
                    } else {
                        write!(f, "x^{i}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

/// `λ_n = 4(4n+1)(4n+3) / (n(n+1))`.
pub fn lambda_n<T: Scalar>(n: i64) -> Result<T> {
    if n < 1 {
        return Err(Error::Domain(format!("lambda_n needs n >= 1, got {n}")));
    }
    Ok(T::ratio(4 * (4 * n + 1) * (4 * n + 3), n * (n + 1)))
}

/// `(P_0, Q_0), …, (P_n, Q_n)` from
/// `R_{m+1} = x R_m + λ_m R_{m−1}` with `P_0 = 1, P_1 = x, Q_0 = 0, Q_1 = 1`.
pub fn pq_sequence<T: Scalar>(n: usize) -> Vec<(Polynomial<T>, Polynomial<T>)> {
    let mut out = vec![(Polynomial::constant(T::one()), Polynomial::zero())];
    if n >= 1 {
        out.push((Polynomial::x(), Polynomial::constant(T::one())));
    }
    for m in 1..n {
        let lambda: T = lambda_n(m as i64).expect("m >= 1");
        let (p, q) = &out[m];
        let (p_prev, q_prev) = &out[m - 1];
        let next = (
            p.mul_x().add(&p_prev.scale(&lambda)),
            q.mul_x().add(&q_prev.scale(&lambda)),
        );
        out.push(next);
    }
    out
}

/// The pair `(P_n, Q_n)`.
pub fn pq_polys<T: Scalar>(n: usize) -> (Polynomial<T>, Polynomial<T>) {
    pq_sequence(n).pop().expect("sequence is nonempty")
}

#[derive(Debug, Clone, PartialEq)]
pub struct HypergeomParams<T> {
    pub a: T,
    pub b: T,
    pub c: T,
}

impl<T: Scalar> HypergeomParams<T> {
    /// Degree at which the series terminates, if `a` or `b` is a
    /// non-positive integer.
    pub fn terminating_degree(&self) -> Option<usize> {
        [&self.a, &self.b]
            .into_iter()
            .filter_map(|v| v.as_integer())
            .filter(|&v| v <= 0)
            .map(|v| (-v) as usize)
            .min()
    }
}

/// `F(a, b; c; x) = Σ (a)_m (b)_m / ((c)_m m!) x^m` for terminating
/// parameters.
pub fn hypergeom_poly<T: Scalar>(p: &HypergeomParams<T>) -> Result<Polynomial<T>> {
    let degree = p.terminating_degree().ok_or(Error::NonTerminating)?;
    let mut term = T::one();
    let mut coeffs = vec![term.clone()];
    for m in 0..degree {
        let mt = T::from_int(m as i64);
        let c_m = p.c.clone() + &mt;
        if c_m.is_zero() {
            return Err(Error::PochhammerPole { step: m + 1 });
        }
        let num = (p.a.clone() + &mt) * (p.b.clone() + &mt);
        term = term * num / (c_m * T::from_int(m as i64 + 1));
        coeffs.push(term.clone());
    }
    Ok(Polynomial::new(coeffs))
}
