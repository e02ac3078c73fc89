//! Hypergeometric-type second-order equations in `θ = q d/dq`:
//!
//! ```text
//! f'' − ((k+1)/h)·E·f' + (k(k+1)/(2h))·E'·f = 0
//! ```
//!
//! with `(h, E) = (4, E_2A)` for Γ₀*(2) and `(6, E₂)` for SL₂(Z).
//!
//! For `k ≡ 3 mod 4` the Γ₀*(2) equation has the quasimodular solution
//! `F_k = √Δ^n P_n(G/√Δ) C'/24 − √Δ^{n+1} Q_n(G/√Δ)`, `n = (k−3)/4`, where
//! `Δ = Δ_2A`. [`build_fk`] produces it square-root free through
//! `F_{k+4} = G F_k + λ_n Δ F_{k−4}`; [`fk_closed_form`] expands the
//! closed form by parity and serves as the independent check.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::forms::{FormLibrary, FormName};
use crate::polys::{hypergeom_poly, lambda_n, pq_polys, HypergeomParams};
use crate::scalar::Scalar;
use crate::series::Series;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FamilyLabel {
    TwoA,
    Sl2z,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct OdeFamily {
    pub label: FamilyLabel,
    pub h: i64,
    pub e_series: FormName,
}

impl OdeFamily {
    pub const TWO_A: OdeFamily = OdeFamily {
        label: FamilyLabel::TwoA,
        h: 4,
        e_series: FormName::E2A,
    };

    pub const SL2Z: OdeFamily = OdeFamily {
        label: FamilyLabel::Sl2z,
        h: 6,
        e_series: FormName::E2,
    };

    pub fn as_str(&self) -> &'static str {
        match self.label {
            FamilyLabel::TwoA => "TWO_A",
            FamilyLabel::Sl2z => "SL2Z",
        }
    }

    /// `(k+1)/h`, the nonzero indicial root.
    fn shift<T: Scalar>(&self, k: &T) -> T {
        (k.clone() + T::one()) / T::from_int(self.h)
    }

    /// Indicial roots `{0, (k+1)/h}`.
    pub fn indicial_roots<T: Scalar>(&self, k: &T) -> [T; 2] {
        [T::zero(), self.shift(k)]
    }

    /// `I(s) = s² − ((k+1)/h)s`.
    pub fn indicial_polynomial<T: Scalar>(&self, k: &T, s: &T) -> T {
        s.clone() * s - self.shift(k) * s
    }
}

impl fmt::Display for OdeFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for OdeFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "2A" | "TWO_A" | "GAMMA0STAR2" => Ok(OdeFamily::TWO_A),
            "SL2Z" | "SL2" => Ok(OdeFamily::SL2Z),
            _ => Err(Error::Domain(format!("unknown ODE family `{s}`"))),
        }
    }
}

/// A series together with the index `k` the θ_k operator should use.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedSeries<T> {
    pub series: Series<T>,
    pub weight: T,
}

/// Precision at which the `E`-series must be known so that products with a
/// series of window `[f.ord, f.prec)` keep precision `f.prec`.
fn companion_prec<T: Scalar>(f: &Series<T>) -> i64 {
    (f.prec() - f.ord()).max(1)
}

/// `θ_k f = f' − (k/(2h)) E f`, raising the weight by 2.
pub fn theta_k<T: Scalar>(
    lib: &FormLibrary<T>,
    f: &WeightedSeries<T>,
    family: OdeFamily,
) -> WeightedSeries<T> {
    let e = lib.get(family.e_series, companion_prec(&f.series));
    let factor = f.weight.clone() / T::from_int(2 * family.h);
    let series = f.series.theta().sub(&e.mul(&f.series).scale(&factor));
    WeightedSeries {
        series,
        weight: f.weight.clone() + T::from_int(2),
    }
}

/// Left-hand side of the family's equation applied to `f`.
pub fn ode_residual<T: Scalar>(
    lib: &FormLibrary<T>,
    f: &Series<T>,
    k: &T,
    family: OdeFamily,
) -> Result<Series<T>> {
    if f.prec() < 1 {
        return Err(Error::PrecisionExceeded {
            requested: 1,
            available: f.prec(),
        });
    }
    let e = lib.get(family.e_series, companion_prec(f));
    let e1 = e.theta();
    let f1 = f.theta();
    let f2 = f1.theta();
    let h = T::from_int(family.h);
    let first = (k.clone() + T::one()) / h.clone();
    let zeroth = k.clone() * (k.clone() + T::one()) / (h * T::from_int(2));
    Ok(f2
        .sub(&e.mul(&f1).scale(&first))
        .add(&e1.mul(f).scale(&zeroth)))
}

/// `θ_{k+2} θ_k f − (k(k+2)/64) C² f` for the Γ₀*(2) family.
pub fn sharp_prime_residual<T: Scalar>(
    lib: &FormLibrary<T>,
    f: &Series<T>,
    k: &T,
) -> Result<Series<T>> {
    if f.prec() < 1 {
        return Err(Error::PrecisionExceeded {
            requested: 1,
            available: f.prec(),
        });
    }
    let family = OdeFamily::TWO_A;
    let once = theta_k(
        lib,
        &WeightedSeries {
            series: f.clone(),
            weight: k.clone(),
        },
        family,
    );
    let twice = theta_k(lib, &once, family);
    let c = lib.get(FormName::C, companion_prec(f));
    let factor = k.clone() * (k.clone() + T::from_int(2)) / T::from_int(64);
    Ok(twice.series.sub(&c.mul(&c).mul(f).scale(&factor)))
}

fn check_fk_index(k: i64) -> Result<usize> {
    if k < 3 || k % 4 != 3 {
        return Err(Error::Domain(format!(
            "F_k is defined for k >= 3 with k = 3 (mod 4), got {k}"
        )));
    }
    Ok(((k - 3) / 4) as usize)
}

/// `C'/24`, the common factor of every `F_k`.
fn c_prime_over_24<T: Scalar>(lib: &FormLibrary<T>, prec: i64) -> Series<T> {
    lib.get(FormName::C, prec).theta().scale(&T::ratio(1, 24))
}

/// `F_k` from the closed form, with `P_n`, `Q_n` split by parity so that only
/// integral powers of `Δ_2A` occur.
pub fn fk_closed_form<T: Scalar>(lib: &FormLibrary<T>, k: i64, prec: i64) -> Result<Series<T>> {
    let n = check_fk_index(k)?;
    let (p, q) = pq_polys::<T>(n);
    let g = lib.get(FormName::G, prec);
    let delta = lib.get(FormName::DELTA_2A, prec);
    let cp = c_prime_over_24(lib, prec);
    let first = p.eval_homogenized(n, &g, &delta)?.mul(&cp);
    let second = q.eval_homogenized(n + 1, &g, &delta)?;
    Ok(first.sub(&second).truncate(prec))
}

/// `[F_3, F_7, …, F_{k_max}]` by the three-term recurrence, seeded from the
/// closed form at `n = 0, 1`.
pub fn build_fk_sequence<T: Scalar>(
    lib: &FormLibrary<T>,
    k_max: i64,
    prec: i64,
) -> Result<Vec<Series<T>>> {
    let n_max = check_fk_index(k_max)?;
    let mut out = vec![fk_closed_form(lib, 3, prec)?];
    if n_max == 0 {
        return Ok(out);
    }
    out.push(fk_closed_form(lib, 7, prec)?);
    let g = lib.get(FormName::G, prec);
    let delta = lib.get(FormName::DELTA_2A, prec);
    for n in 1..n_max {
        let lambda: T = lambda_n(n as i64)?;
        let next = g
            .mul(&out[n])
            .add(&delta.mul(&out[n - 1]).scale(&lambda))
            .truncate(prec);
        out.push(next);
    }
    Ok(out)
}

/// The quasimodular solution `F_k`, known below `prec`.
pub fn build_fk<T: Scalar>(lib: &FormLibrary<T>, k: i64, prec: i64) -> Result<Series<T>> {
    Ok(build_fk_sequence(lib, k, prec)?
        .pop()
        .expect("sequence is nonempty"))
}

/// `F_{k+4} − G F_k − λ_n Δ_2A F_{k−4}` with `n = (k−3)/4`.
pub fn recurrence_defect<T: Scalar>(
    lib: &FormLibrary<T>,
    k: i64,
    next: &Series<T>,
    current: &Series<T>,
    previous: &Series<T>,
) -> Result<Series<T>> {
    let n = check_fk_index(k)?;
    if n == 0 {
        return Err(Error::Domain("recurrence starts at k = 7".into()));
    }
    let prec = next.prec().min(current.prec()).min(previous.prec());
    let lambda: T = lambda_n(n as i64)?;
    let g = lib.get(FormName::G, prec);
    let delta = lib.get(FormName::DELTA_2A, prec);
    Ok(next
        .sub(&g.mul(current))
        .sub(&delta.mul(previous).scale(&lambda)))
}

/// `(k/8) G F_k + C θ_k(F_k) + ((k+1)/4) λ_n Δ_2A F_{k−4}`, `n = (k−3)/4`.
///
/// Vanishes when `fk`, `fk_minus_4` are the genuine solutions.
pub fn key_lemma_defect<T: Scalar>(
    lib: &FormLibrary<T>,
    k: i64,
    fk: &Series<T>,
    fk_minus_4: &Series<T>,
) -> Result<Series<T>> {
    let n = check_fk_index(k)?;
    if n == 0 {
        return Err(Error::Domain("key lemma needs k >= 7".into()));
    }
    let prec = fk.prec().min(fk_minus_4.prec());
    let lambda: T = lambda_n(n as i64)?;
    let kt = T::from_int(k);
    let g = lib.get(FormName::G, prec);
    let c = lib.get(FormName::C, prec);
    let delta = lib.get(FormName::DELTA_2A, prec);
    let theta = theta_k(
        lib,
        &WeightedSeries {
            series: fk.clone(),
            weight: kt.clone(),
        },
        OdeFamily::TWO_A,
    );
    let rhs_factor = (kt.clone() + T::one()) / T::from_int(4) * lambda;
    Ok(g
        .mul(fk)
        .scale(&(kt / T::from_int(8)))
        .add(&c.mul(&theta.series))
        .add(&delta.mul(fk_minus_4).scale(&rhs_factor)))
}

/// Whether the key-lemma identity holds for the genuine `F_k` below `prec`.
pub fn key_lemma_check<T: Scalar>(lib: &FormLibrary<T>, k: i64, prec: i64) -> Result<bool> {
    let seq = build_fk_sequence(lib, k, prec)?;
    let n = seq.len() - 1;
    if n == 0 {
        return Err(Error::Domain("key lemma needs k >= 7".into()));
    }
    let defect = key_lemma_defect(lib, k, &seq[n], &seq[n - 1])?;
    Ok(defect.is_zero_to(prec)?.equal)
}

/// Which indicial root to expand around.
#[derive(Debug, Clone, PartialEq)]
pub enum RootChoice<T> {
    /// The larger root.
    Auto,
    Given(T),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FrobeniusStatus {
    Clean,
    FreeParameter,
    Obstructed,
}

impl FrobeniusStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            FrobeniusStatus::Clean => "CLEAN",
            FrobeniusStatus::FreeParameter => "FREE_PARAMETER",
            FrobeniusStatus::Obstructed => "OBSTRUCTED",
        }
    }
}

/// A step `m` where `I(ρ+m) = 0`, with the right-hand side found there.
#[derive(Debug, Clone, PartialEq)]
pub struct ResonanceEvent<T> {
    pub step: usize,
    pub obstruction: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FrobeniusReport<T> {
    pub rho: T,
    /// `c_0 = 1, c_1, …` with `f = q^ρ Σ c_m q^m`; `None` when obstructed.
    pub coefficients: Option<Vec<T>>,
    pub resonance_events: Vec<ResonanceEvent<T>>,
    pub status: FrobeniusStatus,
}

impl<T: Scalar> FrobeniusReport<T> {
    /// `q^ρ Σ c_m q^m` as a series; only available for integral `ρ`.
    pub fn solution(&self) -> Option<Series<T>> {
        let rho = self.rho.as_integer()?;
        let coeffs = self.coefficients.clone()?;
        Some(Series::from_coeffs(rho, coeffs))
    }
}

/// Power-series solution `q^ρ Σ_{m < terms} c_m q^m`, `c_0 = 1`.
///
/// At a resonant step a nonzero right-hand side means no power-series
/// solution exists at this root (a `log q` term would be needed) and the
/// report is `Obstructed`; a zero right-hand side leaves `c_m` free, and it
/// is set to 0.
pub fn frobenius_solve<T: Scalar>(
    lib: &FormLibrary<T>,
    family: OdeFamily,
    k: &T,
    rho: RootChoice<T>,
    terms: usize,
) -> Result<FrobeniusReport<T>> {
    let shift = family.shift(k);
    let rho = match rho {
        RootChoice::Auto => {
            if shift > T::zero() {
                shift.clone()
            } else {
                T::zero()
            }
        }
        RootChoice::Given(r) => {
            if !family.indicial_polynomial(k, &r).is_zero() {
                return Err(Error::NotAnIndicialRoot { rho: r.to_string() });
            }
            r
        }
    };
    let e = lib.get(family.e_series, terms.max(1) as i64);
    let e_coeffs: Vec<T> = (0..terms as i64)
        .map(|j| e.coeff(j).expect("E known below terms"))
        .collect();
    let half_k_shift = k.clone() * &shift / T::from_int(2);

    let mut c: Vec<T> = Vec::with_capacity(terms);
    let mut events = Vec::new();
    if terms > 0 {
        c.push(T::one());
    }
    for m in 1..terms {
        let mt = T::from_int(m as i64);
        let mut rhs = T::zero();
        for j in 1..=m {
            if e_coeffs[j].is_zero() || c[m - j].is_zero() {
                continue;
            }
            let jt = T::from_int(j as i64);
            let weight = shift.clone() * (rho.clone() + &mt - &jt) - half_k_shift.clone() * &jt;
            rhs += &(e_coeffs[j].mul_ref(&c[m - j]) * weight);
        }
        let ind = family.indicial_polynomial(k, &(rho.clone() + &mt));
        if ind.is_zero() {
            let obstructed = !rhs.is_zero();
            events.push(ResonanceEvent {
                step: m,
                obstruction: rhs,
            });
            if obstructed {
                return Ok(FrobeniusReport {
                    rho,
                    coefficients: None,
                    resonance_events: events,
                    status: FrobeniusStatus::Obstructed,
                });
            }
            c.push(T::zero());
        } else {
            c.push(rhs / ind);
        }
    }
    let status = if events.is_empty() {
        FrobeniusStatus::Clean
    } else {
        FrobeniusStatus::FreeParameter
    };
    Ok(FrobeniusReport {
        rho,
        coefficients: Some(c),
        resonance_events: events,
        status,
    })
}

/// `E₄^{k/4} · F(−k/12, −(k−4)/12; −(k−5)/6; 1728/j)`, the modular solution
/// of the SL₂(Z) equation for `k ≡ 0, 4 (mod 12)`.
pub fn sl2z_hypergeometric_solution<T: Scalar>(
    lib: &FormLibrary<T>,
    k: i64,
    prec: i64,
) -> Result<Series<T>> {
    if k < 0 || !matches!(k % 12, 0 | 4) {
        return Err(Error::Domain(format!(
            "hypergeometric solution needs k >= 0 with k = 0, 4 (mod 12), got {k}"
        )));
    }
    let params = HypergeomParams {
        a: T::ratio(-k, 12),
        b: T::ratio(-(k - 4), 12),
        c: T::ratio(-(k - 5), 6),
    };
    let poly = hypergeom_poly(&params)?;
    let x = lib.get(FormName::J_INV_1728, prec);
    let e4 = lib.get(FormName::E4, prec);
    Ok(e4.pow(k / 4)?.mul(&poly.eval_series(&x)).truncate(prec))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;
    use num_traits::Zero;

    type S = Series<BigRational>;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::ratio(n, d)
    }

    fn weighted(series: S, k: i64) -> WeightedSeries<BigRational> {
        WeightedSeries {
            series,
            weight: r(k, 1),
        }
    }

    #[test]
    fn theta_examples() {
        let lib = FormLibrary::new();
        let c = lib.get(FormName::C, 30);
        let g = lib.get(FormName::G, 30);
        let t = theta_k(&lib, &weighted(c.clone(), 2), OdeFamily::TWO_A);
        assert_eq!(t.weight, r(4, 1));
        assert_eq!(t.series, g.scale(&r(-1, 4)));
        assert_eq!(t.series.truncate(3), S::from_coeffs(0, vec![r(-1, 4), r(20, 1), r(100, 1)]));

        let delta = lib.get(FormName::DELTA_2A, 30);
        let t = theta_k(&lib, &weighted(delta, 8), OdeFamily::TWO_A);
        assert!(t.series.is_zero_to(30).unwrap().equal);

        let t = theta_k(&lib, &weighted(g, 4), OdeFamily::TWO_A);
        let c3 = c.pow(3).unwrap().scale(&r(-1, 2));
        assert_eq!(t.series, c3);
    }

    #[test]
    fn f3_and_f7_prefixes() {
        let lib = FormLibrary::<BigRational>::new();
        assert_eq!(build_fk(&lib, 3, 5).unwrap(), S::from_ints(1, &[1, 2, 12, 4]));
        // G·F3 − Δ_2A by hand: (1 − 80q − 400q²)(q + 2q² + 12q³) − (q − 8q² + 12q³).
        assert_eq!(build_fk(&lib, 7, 4).unwrap(), S::from_ints(2, &[-70, -560]));
        assert!(build_fk(&lib, 6, 5).is_err());
        assert!(build_fk(&lib, -1, 5).is_err());
    }

    #[test]
    fn residual_examples() {
        let lib = FormLibrary::new();
        let f3 = build_fk(&lib, 3, 40).unwrap();
        let res = ode_residual(&lib, &f3, &r(3, 1), OdeFamily::TWO_A).unwrap();
        assert!(res.is_zero_to(40).unwrap().equal);

        let e4 = lib.get(FormName::E4, 40);
        let res = ode_residual(&lib, &e4, &r(4, 1), OdeFamily::SL2Z).unwrap();
        assert!(res.is_zero_to(40).unwrap().equal);

        let c = lib.get(FormName::C, 40);
        let res = ode_residual(&lib, &c, &r(3, 1), OdeFamily::TWO_A).unwrap();
        assert!(!res.is_zero_to(40).unwrap().equal);

        assert!(ode_residual(&lib, &S::zero(0), &r(3, 1), OdeFamily::TWO_A).is_err());
    }

    #[test]
    fn sharp_prime_examples() {
        let lib = FormLibrary::new();
        let f7 = build_fk(&lib, 7, 40).unwrap();
        let res = sharp_prime_residual(&lib, &f7, &r(7, 1)).unwrap();
        assert!(res.is_zero_to(40).unwrap().equal);
        let one = S::one(20);
        let res = sharp_prime_residual(&lib, &one, &r(0, 1)).unwrap();
        assert!(res.is_zero_to(20).unwrap().equal);
    }

    #[test]
    fn sharp_prime_equals_ode_residual_for_arbitrary_input() {
        let lib = FormLibrary::new();
        let f = S::from_coeffs(0, (0..25).map(|i| r(i * i - 7, i + 2)).collect());
        for k in [r(3, 1), r(1, 2), r(-5, 3)] {
            let a = ode_residual(&lib, &f, &k, OdeFamily::TWO_A).unwrap();
            let b = sharp_prime_residual(&lib, &f, &k).unwrap();
            assert!(a.eq_to(&b, 25).unwrap().equal);
        }
    }

    #[test]
    fn key_lemma_small_cases() {
        let lib = FormLibrary::<BigRational>::new();
        assert!(key_lemma_check(&lib, 7, 40).unwrap());
        assert!(key_lemma_check(&lib, 11, 40).unwrap());
        assert!(key_lemma_check(&lib, 3, 40).is_err());
    }

    #[test]
    fn indicial_roots() {
        let roots = OdeFamily::TWO_A.indicial_roots(&r(11, 1));
        assert_eq!(roots, [r(0, 1), r(3, 1)]);
        for root in roots {
            assert!(OdeFamily::TWO_A.indicial_polynomial(&r(11, 1), &root).is_zero());
        }
    }

    #[test]
    fn frobenius_obstruction_at_k3() {
        let lib = FormLibrary::new();
        let rep = frobenius_solve(&lib, OdeFamily::TWO_A, &r(3, 1), RootChoice::Given(r(0, 1)), 10)
            .unwrap();
        assert_eq!(rep.status, FrobeniusStatus::Obstructed);
        // I(1) = 0; right-hand side −(k/2)(k+1)/4 · e_1 = −(3/2)(−8) = 12.
        assert_eq!(rep.resonance_events, vec![ResonanceEvent { step: 1, obstruction: r(12, 1) }]);
        assert!(rep.solution().is_none());
    }

    #[test]
    fn frobenius_rejects_non_root() {
        let lib = FormLibrary::new();
        let err = frobenius_solve(&lib, OdeFamily::TWO_A, &r(3, 1), RootChoice::Given(r(2, 1)), 5);
        assert!(matches!(err, Err(Error::NotAnIndicialRoot { .. })));
    }

    #[test]
    fn frobenius_auto_picks_larger_root() {
        let lib = FormLibrary::new();
        let rep = frobenius_solve(&lib, OdeFamily::TWO_A, &r(6, 1), RootChoice::Auto, 5).unwrap();
        assert_eq!(rep.rho, r(7, 4));
        assert_eq!(rep.status, FrobeniusStatus::Clean);
        assert!(rep.solution().is_none());
        assert_eq!(rep.coefficients.unwrap().len(), 5);
    }

    #[test]
    fn sl2z_e4_degenerate_case() {
        let lib = FormLibrary::<BigRational>::new();
        let s = sl2z_hypergeometric_solution(&lib, 4, 20).unwrap();
        assert_eq!(s, lib.get(FormName::E4, 20));
        assert!(sl2z_hypergeometric_solution(&lib, 8, 20).is_err());
    }

    #[test]
    fn family_names() {
        assert_eq!("2A".parse::<OdeFamily>().unwrap(), OdeFamily::TWO_A);
        assert_eq!("sl2z".parse::<OdeFamily>().unwrap(), OdeFamily::SL2Z);
        assert!("3B".parse::<OdeFamily>().is_err());
    }
}
