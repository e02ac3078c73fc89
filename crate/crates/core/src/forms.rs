//! Named q-expansions: Eisenstein series, eta products, and the generators of
//! the graded rings on Γ₀(2) and Γ₀*(2).
//!
//! Each catalog entry has one canonical construction ([`get_form`]); the
//! divisor-sum expansions [`divisor_form_c`] and [`divisor_form_d`] are kept
//! separate so the two routes can be checked against each other.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, RwLock};

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::series::Series;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[allow(non_camel_case_types)]
pub enum FormName {
    E2,
    E2_2TAU,
    E4,
    E4_2TAU,
    E6,
    E6_2TAU,
    E2A,
    C,
    D,
    DELTA_2A,
    G,
    DELTA,
    J_INV_1728,
}

impl FormName {
    pub const ALL: [FormName; 13] = [
        FormName::E2,
        FormName::E2_2TAU,
        FormName::E4,
        FormName::E4_2TAU,
        FormName::E6,
        FormName::E6_2TAU,
        FormName::E2A,
        FormName::C,
        FormName::D,
        FormName::DELTA_2A,
        FormName::G,
        FormName::DELTA,
        FormName::J_INV_1728,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            FormName::E2 => "E2",
            FormName::E2_2TAU => "E2_2TAU",
            FormName::E4 => "E4",
            FormName::E4_2TAU => "E4_2TAU",
            FormName::E6 => "E6",
            FormName::E6_2TAU => "E6_2TAU",
            FormName::E2A => "E2A",
            FormName::C => "C",
            FormName::D => "D",
            FormName::DELTA_2A => "DELTA_2A",
            FormName::G => "G",
            FormName::DELTA => "DELTA",
            FormName::J_INV_1728 => "J_INV_1728",
        }
    }

    /// Weight as a (quasi)modular form; `1728/j` has weight 0.
    pub fn weight(self) -> i64 {
        match self {
            FormName::E2 | FormName::E2_2TAU | FormName::E2A | FormName::C => 2,
            FormName::E4 | FormName::E4_2TAU | FormName::D | FormName::G => 4,
            FormName::E6 | FormName::E6_2TAU => 6,
            FormName::DELTA_2A => 8,
            FormName::DELTA => 12,
            FormName::J_INV_1728 => 0,
        }
    }
}

impl fmt::Display for FormName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for FormName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        FormName::ALL
            .into_iter()
            .find(|n| n.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Domain(format!("unknown form name `{s}`")))
    }
}

/// `η(τ)^a η(2τ)^b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EtaProductSpec {
    pub a: i64,
    pub b: i64,
}

impl EtaProductSpec {
    pub fn new(a: i64, b: i64) -> Result<Self> {
        if (a + 2 * b).rem_euclid(24) != 0 {
            return Err(Error::FractionalPrefactor { a, b });
        }
        Ok(EtaProductSpec { a, b })
    }

    /// Exponent of the `q` prefactor.
    pub fn order(&self) -> i64 {
        (self.a + 2 * self.b) / 24
    }
}

/// `∏_{n≥1} (1 − qⁿ)` below `prec`.
pub fn euler_product<T: Scalar>(prec: i64) -> Series<T> {
    if prec <= 0 {
        return Series::zero(prec);
    }
    let len = prec as usize;
    let mut c = vec![T::zero(); len];
    c[0] = T::one();
    for n in 1..len {
        for e in (n..len).rev() {
            let lower = c[e - n].clone();
            c[e] -= &lower;
        }
    }
    Series::from_coeffs(0, c)
}

/// `q^{(a+2b)/24} ∏(1−qⁿ)^a ∏(1−q²ⁿ)^b` below `prec`.
pub fn eta_product<T: Scalar>(spec: EtaProductSpec, prec: i64) -> Result<Series<T>> {
    let spec = EtaProductSpec::new(spec.a, spec.b)?;
    let shift = spec.order();
    let unit_prec = prec - shift;
    if unit_prec <= 0 {
        return Ok(Series::zero(prec));
    }
    let euler = euler_product::<T>(unit_prec);
    let euler2 = euler_product::<T>((unit_prec + 1) / 2).dilate(2);
    let unit = euler.pow(spec.a)?.mul(&euler2.pow(spec.b)?);
    Ok(unit.shift(shift).truncate(prec))
}

/// `σ_r(n)` for `0 ≤ n < len`, optionally restricted to odd divisors; entry 0
/// is 0.
fn divisor_sums(len: usize, power: u32, odd_only: bool, cofactor: bool) -> Vec<i64> {
    let mut out = vec![0i64; len];
    for d in 1..len {
        if odd_only && d % 2 == 0 {
            continue;
        }
        for n in (d..len).step_by(d) {
            let base = if cofactor { n / d } else { d } as i64;
            out[n] += base.pow(power);
        }
    }
    out
}

/// `constant + scale · Σ σ_power(n) qⁿ`.
fn eisenstein<T: Scalar>(scale: i64, power: u32, prec: i64) -> Series<T> {
    if prec <= 0 {
        return Series::zero(prec);
    }
    let sums = divisor_sums(prec as usize, power, false, false);
    let coeffs = sums
        .iter()
        .enumerate()
        .map(|(n, &s)| if n == 0 { T::one() } else { T::from_int(scale * s) })
        .collect();
    Series::from_coeffs(0, coeffs)
}

/// `E₂ = 1 − 24 Σ σ₁(n) qⁿ`.
pub fn eisenstein_e2<T: Scalar>(prec: i64) -> Series<T> {
    eisenstein(-24, 1, prec)
}

/// `E₄ = 1 + 240 Σ σ₃(n) qⁿ`.
pub fn eisenstein_e4<T: Scalar>(prec: i64) -> Series<T> {
    eisenstein(240, 3, prec)
}

/// `E₆ = 1 − 504 Σ σ₅(n) qⁿ`.
pub fn eisenstein_e6<T: Scalar>(prec: i64) -> Series<T> {
    eisenstein(-504, 5, prec)
}

/// `f(τ) ↦ f(2τ)`.
pub fn subst_q2<T: Scalar>(f: &Series<T>) -> Series<T> {
    f.dilate(2)
}

/// `f(2τ)` for a form given by its constructor, truncated at `prec`.
fn at_two_tau<T: Scalar>(prec: i64, make: impl Fn(i64) -> Series<T>) -> Series<T> {
    subst_q2(&make((prec + 1) / 2)).truncate(prec)
}

/// `C = 1 + 24 Σ (Σ_{d|n, d odd} d) qⁿ`.
pub fn divisor_form_c<T: Scalar>(prec: i64) -> Series<T> {
    if prec <= 0 {
        return Series::zero(prec);
    }
    let sums = divisor_sums(prec as usize, 1, true, false);
    let coeffs = sums
        .iter()
        .enumerate()
        .map(|(n, &s)| if n == 0 { T::one() } else { T::from_int(24 * s) })
        .collect();
    Series::from_coeffs(0, coeffs)
}

/// `D = Σ (Σ_{d|n, d odd} (n/d)³) qⁿ`.
pub fn divisor_form_d<T: Scalar>(prec: i64) -> Series<T> {
    if prec <= 0 {
        return Series::zero(prec);
    }
    let sums = divisor_sums(prec as usize, 3, true, true);
    Series::from_coeffs(0, sums.into_iter().map(T::from_int).collect())
}

/// Canonical construction of a catalog form, known exactly below `prec`.
pub fn get_form<T: Scalar>(name: FormName, prec: i64) -> Series<T> {
    let scaled = |s: Series<T>, n: i64, d: i64| s.scale(&T::ratio(n, d));
    match name {
        FormName::E2 => eisenstein_e2(prec),
        FormName::E4 => eisenstein_e4(prec),
        FormName::E6 => eisenstein_e6(prec),
        FormName::E2_2TAU => at_two_tau(prec, eisenstein_e2),
        FormName::E4_2TAU => at_two_tau(prec, eisenstein_e4),
        FormName::E6_2TAU => at_two_tau(prec, eisenstein_e6),
        FormName::E2A => {
            let e2 = eisenstein_e2(prec);
            let e2_2 = get_form(FormName::E2_2TAU, prec);
            scaled(e2.add(&e2_2.scale(&T::from_int(2))), 1, 3)
        }
        FormName::C => {
            let e2 = eisenstein_e2(prec);
            let e2_2 = get_form(FormName::E2_2TAU, prec);
            e2_2.scale(&T::from_int(2)).sub(&e2)
        }
        FormName::D => eta_product(EtaProductSpec { a: -8, b: 16 }, prec)
            .expect("(-8 + 32) is divisible by 24"),
        FormName::DELTA_2A => eta_product(EtaProductSpec { a: 8, b: 8 }, prec)
            .expect("(8 + 16) is divisible by 24"),
        FormName::G => {
            let c = get_form::<T>(FormName::C, prec);
            let d = get_form::<T>(FormName::D, prec);
            c.mul(&c).sub(&d.scale(&T::from_int(128)))
        }
        FormName::DELTA => {
            let e4 = eisenstein_e4::<T>(prec);
            let e6 = eisenstein_e6::<T>(prec);
            let cube = e4.mul(&e4).mul(&e4);
            scaled(cube.sub(&e6.mul(&e6)), 1, 1728)
        }
        FormName::J_INV_1728 => {
            let delta = get_form::<T>(FormName::DELTA, prec);
            let e4 = eisenstein_e4::<T>(prec);
            let cube_inv = e4
                .pow(3)
                .and_then(|c| c.invert())
                .expect("E4 has constant term 1");
            delta
                .mul(&cube_inv)
                .scale(&T::from_int(1728))
                .truncate(prec)
        }
    }
}

/// Memoizing front end to [`get_form`].
///
/// Keeps the highest-precision expansion computed per form and serves lower
/// requests by truncation; concurrent misses may compute the same series
/// twice, which is harmless since construction is deterministic.
#[derive(Debug, Default)]
pub struct FormLibrary<T> {
    cache: RwLock<HashMap<FormName, Arc<Series<T>>>>,
}

impl<T: Scalar> FormLibrary<T> {
    pub fn new() -> Self {
        FormLibrary {
            cache: RwLock::new(HashMap::new()),
        }
    }

    pub fn get(&self, name: FormName, prec: i64) -> Series<T> {
        if let Some(hit) = self.cached(name, prec) {
            return hit;
        }
        let fresh = Arc::new(get_form::<T>(name, prec));
        let mut cache = self.cache.write().unwrap_or_else(|e| e.into_inner());
        let slot = cache.entry(name).or_insert_with(|| fresh.clone());
        if slot.prec() < fresh.prec() {
            *slot = fresh.clone();
        }
        fresh.truncate(prec)
    }

    fn cached(&self, name: FormName, prec: i64) -> Option<Series<T>> {
        let cache = self.cache.read().unwrap_or_else(|e| e.into_inner());
        cache
            .get(&name)
            .filter(|s| s.prec() >= prec)
            .map(|s| s.truncate(prec))
    }
}
