//! Membership certificates in graded rings of (quasi)modular forms.
//!
//! A weight-`w` series is matched coefficient by coefficient against the
//! monomials of weight `w` in the ring's generators and the resulting
//! overdetermined system is solved exactly. A unique solution certifies the
//! expansion on the rows used, nothing more.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::forms::{FormLibrary, FormName};
use crate::linalg::{exact_linear_solve, LinearSolution};
use crate::scalar::Scalar;
use crate::series::Series;

/// Extra coefficient rows demanded beyond the basis size.
pub const DEFAULT_MARGIN: i64 = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RingTag {
    /// `Q[E₂, C, D]`, generator weights 2, 2, 4.
    QmGamma02,
    /// `Q[C, D]`.
    ModGamma02,
    /// Free on `C²`, `Δ_2A`, plus the module generator `C³ − 128CD`.
    ModGamma02Star,
}

impl RingTag {
    pub fn as_str(self) -> &'static str {
        match self {
            RingTag::QmGamma02 => "QM_GAMMA02",
            RingTag::ModGamma02 => "MOD_GAMMA02",
            RingTag::ModGamma02Star => "MOD_GAMMA02_STAR",
        }
    }

    pub fn generator_names(self) -> &'static [&'static str] {
        match self {
            RingTag::QmGamma02 => &["E2", "C", "D"],
            RingTag::ModGamma02 => &["C", "D"],
            RingTag::ModGamma02Star => &["C^2", "DELTA_2A", "(C^3-128CD)"],
        }
    }

    fn generator_weights(self) -> &'static [i64] {
        match self {
            RingTag::QmGamma02 => &[2, 2, 4],
            RingTag::ModGamma02 => &[2, 4],
            RingTag::ModGamma02Star => &[4, 8, 6],
        }
    }

    /// Generator expansions, known below `prec`.
    pub fn generators<T: Scalar>(self, lib: &FormLibrary<T>, prec: i64) -> Vec<Series<T>> {
        let c = lib.get(FormName::C, prec);
        let d = lib.get(FormName::D, prec);
        match self {
            RingTag::QmGamma02 => vec![lib.get(FormName::E2, prec), c, d],
            RingTag::ModGamma02 => vec![c, d],
            RingTag::ModGamma02Star => {
                let c2 = c.mul(&c);
                let odd = c2.mul(&c).sub(&c.mul(&d).scale(&T::from_int(128)));
                vec![c2, lib.get(FormName::DELTA_2A, prec), odd]
            }
        }
    }
}

impl fmt::Display for RingTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for RingTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "QM_GAMMA02" | "QM" => Ok(RingTag::QmGamma02),
            "MOD_GAMMA02" | "MOD" => Ok(RingTag::ModGamma02),
            "MOD_GAMMA02_STAR" | "STAR" => Ok(RingTag::ModGamma02Star),
            _ => Err(Error::Domain(format!("unknown ring `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonomialBasis {
    pub ring: RingTag,
    pub weight: i64,
    /// One exponent per generator of `ring`, in generator order.
    pub exponents: Vec<Vec<u32>>,
}

impl MonomialBasis {
    pub fn len(&self) -> usize {
        self.exponents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exponents.is_empty()
    }

    /// Human-readable monomial, e.g. `E2^2*C`.
    pub fn label(&self, i: usize) -> String {
        let names = self.ring.generator_names();
        let parts: Vec<String> = self.exponents[i]
            .iter()
            .zip(names)
            .filter(|(&e, _)| e > 0)
            .map(|(&e, n)| if e == 1 { n.to_string() } else { format!("{n}^{e}") })
            .collect();
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }

    /// Expansions of every basis monomial below `prec`.
    pub fn expansions<T: Scalar>(&self, lib: &FormLibrary<T>, prec: i64) -> Vec<Series<T>> {
        let gens = self.ring.generators(lib, prec);
        let mut powers: Vec<Vec<Series<T>>> = gens.iter().map(|_| vec![Series::one(prec)]).collect();
        self.exponents
            .iter()
            .map(|exps| {
                let mut acc = Series::one(prec);
                for (g, &e) in exps.iter().enumerate() {
                    while powers[g].len() <= e as usize {
                        let next = powers[g].last().expect("nonempty").mul(&gens[g]);
                        powers[g].push(next);
                    }
                    if e > 0 {
                        acc = acc.mul(&powers[g][e as usize]);
                    }
                }
                acc.truncate(prec)
            })
            .collect()
    }
}

/// All monomials of the given weight.
pub fn enumerate_basis(ring: RingTag, weight: i64) -> Result<MonomialBasis> {
    if weight < 0 || weight % 2 != 0 {
        return Err(Error::Domain(format!(
            "basis weight must be even and non-negative, got {weight}"
        )));
    }
    let w = weight;
    let mut exponents = Vec::new();
    match ring {
        RingTag::QmGamma02 => {
            for a in (0..=w / 2).rev() {
                for b in (0..=(w - 2 * a) / 2).rev() {
                    let rest = w - 2 * a - 2 * b;
                    if rest % 4 == 0 {
                        exponents.push(vec![a as u32, b as u32, (rest / 4) as u32]);
                    }
                }
            }
        }
        RingTag::ModGamma02 => {
            for b in (0..=w / 2).rev() {
                let rest = w - 2 * b;
                if rest % 4 == 0 {
                    exponents.push(vec![b as u32, (rest / 4) as u32]);
                }
            }
        }
        RingTag::ModGamma02Star => {
            let (odd, even_weight) = if w % 4 == 0 { (0, w) } else { (1, w - 6) };
            if even_weight >= 0 {
                for i in (0..=even_weight / 4).rev() {
                    let rest = even_weight - 4 * i;
                    if rest % 8 == 0 {
                        exponents.push(vec![i as u32, (rest / 8) as u32, odd]);
                    }
                }
            }
        }
    }
    debug_assert!(exponents.iter().all(|e| {
        e.iter()
            .zip(ring.generator_weights())
            .map(|(&x, &gw)| x as i64 * gw)
            .sum::<i64>()
            == w
    }));
    Ok(MonomialBasis {
        ring,
        weight,
        exponents,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DecompositionStatus {
    Unique,
    NotInSpan,
    Underdetermined,
}

impl DecompositionStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            DecompositionStatus::Unique => "UNIQUE",
            DecompositionStatus::NotInSpan => "NOT_IN_SPAN",
            DecompositionStatus::Underdetermined => "UNDERDETERMINED",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecompositionReport<T> {
    pub basis: MonomialBasis,
    /// Aligned with `basis.exponents`; empty unless the status is `Unique`.
    pub coefficients: Vec<T>,
    pub status: DecompositionStatus,
    /// Exponents below this were matched.
    pub certified_prec: i64,
}

impl<T: Scalar> DecompositionReport<T> {
    /// Largest `E₂` exponent carrying a nonzero coefficient (quasimodular
    /// ring only).
    pub fn e2_degree(&self) -> Option<u32> {
        if self.basis.ring != RingTag::QmGamma02 {
            return None;
        }
        self.basis
            .exponents
            .iter()
            .zip(&self.coefficients)
            .filter(|(_, c)| !c.is_zero())
            .map(|(e, _)| e[0])
            .max()
    }
}

/// Decompose with the default overdetermination margin.
pub fn decompose<T: Scalar>(
    lib: &FormLibrary<T>,
    f: &Series<T>,
    basis: &MonomialBasis,
) -> Result<DecompositionReport<T>> {
    decompose_with_margin(lib, f, basis, DEFAULT_MARGIN)
}

pub fn decompose_with_margin<T: Scalar>(
    lib: &FormLibrary<T>,
    f: &Series<T>,
    basis: &MonomialBasis,
    margin: i64,
) -> Result<DecompositionReport<T>> {
    let start = f.ord().min(0);
    let prec = f.prec();
    let needed = basis.len() as i64 + margin;
    if prec - start < needed {
        return Err(Error::PrecisionExceeded {
            requested: start + needed,
            available: prec,
        });
    }
    let columns = basis.expansions(lib, prec);
    let matrix: Vec<Vec<T>> = (start..prec)
        .map(|e| {
            columns
                .iter()
                .map(|col| col.coeff(e).expect("basis expanded to full precision"))
                .collect()
        })
        .collect();
    let rhs: Vec<T> = (start..prec)
        .map(|e| f.coeff(e).expect("row inside certified window"))
        .collect();
    let (status, coefficients) = match exact_linear_solve(&matrix, &rhs) {
        LinearSolution::Unique(x) => (DecompositionStatus::Unique, x),
        LinearSolution::Inconsistent { .. } => (DecompositionStatus::NotInSpan, Vec::new()),
        LinearSolution::Underdetermined { .. } => {
            (DecompositionStatus::Underdetermined, Vec::new())
        }
    };
    Ok(DecompositionReport {
        basis: basis.clone(),
        coefficients,
        status,
        certified_prec: prec,
    })
}

/// `Σ coefficient_i · monomial_i` below `prec`.
pub fn reconstruct<T: Scalar>(
    lib: &FormLibrary<T>,
    basis: &MonomialBasis,
    coefficients: &[T],
    prec: i64,
) -> Series<T> {
    basis
        .expansions(lib, prec)
        .iter()
        .zip(coefficients)
        .fold(Series::zero(prec), |acc, (m, c)| acc.add(&m.scale(c)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn lib() -> FormLibrary<BigRational> {
        FormLibrary::new()
    }

    #[test]
    fn small_bases() {
        let qm4 = enumerate_basis(RingTag::QmGamma02, 4).unwrap();
        assert_eq!(qm4.exponents, vec![vec![2, 0, 0], vec![1, 1, 0], vec![0, 2, 0], vec![0, 0, 1]]);
        let labels: Vec<String> = (0..4).map(|i| qm4.label(i)).collect();
        assert_eq!(labels, ["E2^2", "E2*C", "C^2", "D"]);
        let mod2 = enumerate_basis(RingTag::ModGamma02, 2).unwrap();
        assert_eq!(mod2.exponents, vec![vec![1, 0]]);
        let star6 = enumerate_basis(RingTag::ModGamma02Star, 6).unwrap();
        assert_eq!(star6.exponents, vec![vec![0, 0, 1]]);
        let star2 = enumerate_basis(RingTag::ModGamma02Star, 2).unwrap();
        assert!(star2.is_empty());
        assert!(enumerate_basis(RingTag::QmGamma02, 5).is_err());
    }

    #[test]
    fn basis_enumeration_is_complete() {
        for w in (0..=40).step_by(2) {
            let qm = enumerate_basis(RingTag::QmGamma02, w).unwrap();
            let mut brute = 0;
            for a in 0..=w / 2 {
                for b in 0..=w / 2 {
                    for c in 0..=w / 4 {
                        if 2 * a + 2 * b + 4 * c == w {
                            brute += 1;
                        }
                    }
                }
            }
            assert_eq!(qm.len(), brute, "weight {w}");
            let mut sorted = qm.exponents.clone();
            sorted.dedup();
            assert_eq!(sorted.len(), qm.len());
        }
    }

    #[test]
    fn generator_decomposes_as_itself() {
        let lib = lib();
        let delta = lib.get(FormName::DELTA_2A, 40);
        let basis = enumerate_basis(RingTag::ModGamma02Star, 8).unwrap();
        let rep = decompose(&lib, &delta, &basis).unwrap();
        assert_eq!(rep.status, DecompositionStatus::Unique);
        assert_eq!(rep.coefficients, vec![BigRational::from_int(0), BigRational::from_int(1)]);
        assert_eq!(rep.e2_degree(), None);
    }

    #[test]
    fn insufficient_rows_is_an_error() {
        let lib = lib();
        let basis = enumerate_basis(RingTag::QmGamma02, 8).unwrap();
        let f = lib.get(FormName::G, 12);
        assert!(matches!(
            decompose(&lib, &f, &basis),
            Err(Error::PrecisionExceeded { .. })
        ));
    }

    #[test]
    fn e2_is_not_modular() {
        let lib = lib();
        let e2 = lib.get(FormName::E2, 30);
        let mod2 = enumerate_basis(RingTag::ModGamma02, 2).unwrap();
        assert_eq!(decompose(&lib, &e2, &mod2).unwrap().status, DecompositionStatus::NotInSpan);
        let qm2 = enumerate_basis(RingTag::QmGamma02, 2).unwrap();
        let rep = decompose(&lib, &e2, &qm2).unwrap();
        assert_eq!(rep.status, DecompositionStatus::Unique);
        assert_eq!(rep.e2_degree(), Some(1));
    }

    #[test]
    fn dependent_columns_are_underdetermined() {
        let lib = lib();
        let basis = MonomialBasis {
            ring: RingTag::ModGamma02,
            weight: 4,
            exponents: vec![vec![2, 0], vec![2, 0]],
        };
        let c2 = lib.get(FormName::C, 20).pow(2).unwrap();
        assert_eq!(
            decompose(&lib, &c2, &basis).unwrap().status,
            DecompositionStatus::Underdetermined
        );
    }
}
