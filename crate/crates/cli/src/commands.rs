use std::str::FromStr;
use std::time::Instant;

use num_traits::Zero;
use qmf_core::decompose::{
    decompose as decompose_series, enumerate_basis, DecompositionStatus, RingTag, DEFAULT_MARGIN,
};
use qmf_core::forms::FormName;
use qmf_core::identities::identity_suite;
use qmf_core::ode::{
    build_fk_sequence, fk_closed_form, frobenius_solve, key_lemma_defect, ode_residual,
    recurrence_defect, sharp_prime_residual, OdeFamily, RootChoice,
};
use qmf_core::polys::pq_polys;
use qmf_core::{FormLibrary, QSeries, Rational};
use rayon::prelude::*;
use serde::Serialize;

use crate::report::{
    elapsed_us, rational_string, terms_of, to_json, BasisCoefficient, CheckRecord,
    DecompositionRecord, ExpansionReport, FrobeniusRecord, PolynomialReport, ResonanceRecord,
    Term, VerificationReport, SCHEMA_VERSION,
};
use crate::{Failure, Format, GlobalArgs, MIN_TERMS};

type Output = Result<String, Failure>;

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

fn require_terms(global: &GlobalArgs) -> Result<i64, Failure> {
    if global.terms < MIN_TERMS {
        return Err(usage(format!("--terms must be at least {MIN_TERMS}")));
    }
    Ok(global.terms)
}

fn check_fk_domain(k: i64) -> Result<(), Failure> {
    if k < 3 || k % 4 != 3 {
        return Err(usage(format!("F_k needs k = 3, 7, 11, ...; got {k}")));
    }
    Ok(())
}

fn parse_rational(flag: &str, s: &str) -> Result<Rational, Failure> {
    Rational::from_str(s.trim()).map_err(|_| usage(format!("--{flag}: not a rational number: {s}")))
}

fn thread_pool(global: &GlobalArgs) -> Result<rayon::ThreadPool, Failure> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(global.jobs.unwrap_or(0))
        .build()
        .map_err(|e| usage(format!("--jobs: {e}")))
}

/// Render, then succeed or fail according to `pass`.
fn finish(pass: bool, text: String) -> Output {
    if pass {
        Ok(text)
    } else {
        Err(Failure::Math(text))
    }
}

fn render<S: Serialize>(global: &GlobalArgs, doc: &S, text: impl FnOnce() -> String) -> String {
    match global.format {
        Format::Json => to_json(doc),
        Format::Text => text(),
    }
}

fn terms_text(terms: &[Term]) -> String {
    terms
        .iter()
        .map(|t| format!("{}:{}\n", t.exponent, t.value))
        .collect()
}

pub fn expand(global: &GlobalArgs, form: &str) -> Output {
    let name = FormName::from_str(form).map_err(|e| usage(e.to_string()))?;
    if global.terms < 1 {
        return Err(usage("--terms must be positive"));
    }
    let lib = FormLibrary::new();
    let series = lib.get(name, global.terms);
    let doc = ExpansionReport {
        version: SCHEMA_VERSION,
        command: "expand".into(),
        name: name.as_str().into(),
        weight: name.weight(),
        terms: global.terms,
        coefficients: terms_of(&series),
    };
    Ok(render(global, &doc, || terms_text(&doc.coefficients)))
}

#[derive(Serialize)]
struct FkReport {
    version: u32,
    command: String,
    k: i64,
    weight: i64,
    order: Option<i64>,
    terms: i64,
    pass: bool,
    coefficients: Vec<Term>,
    checks: Vec<CheckRecord>,
}

pub fn fk(global: &GlobalArgs, k: i64) -> Output {
    let terms = require_terms(global)?;
    check_fk_domain(k)?;
    let lib = FormLibrary::new();
    let fks = build_fk_sequence(&lib, k, terms)?;
    let n = fks.len() - 1;
    let fk = &fks[n];
    let mut checks = vec![
        zero_check("ode_residual", Some(k), terms, Instant::now(), || {
            ode_residual(&lib, fk, &Rational::from_integer(k.into()), OdeFamily::TWO_A)
        }),
    ];
    checks.push(order_check(k, fk, terms));
    let doc = FkReport {
        version: SCHEMA_VERSION,
        command: "fk".into(),
        k,
        weight: k + 1,
        order: fk.valuation(),
        terms,
        pass: checks.iter().all(|c| c.pass),
        coefficients: terms_of(fk),
        checks,
    };
    let text = render(global, &doc, || {
        let mut out = format!("F_{k}, weight {}\n", k + 1);
        out.push_str(&terms_text(&doc.coefficients));
        out.push_str(&VerificationReport::new("fk", terms, doc.checks.clone(), Instant::now()).text());
        out
    });
    finish(doc.pass, text)
}

/// Compare `make()` against zero below `terms`.
fn zero_check(
    name: &str,
    k: Option<i64>,
    terms: i64,
    started: Instant,
    make: impl FnOnce() -> qmf_core::Result<QSeries>,
) -> CheckRecord {
    match make() {
        Ok(s) => agreement_check(name, k, terms, started, &s, &QSeries::zero(s.prec())),
        Err(e) => CheckRecord::failed(name, k, e.to_string(), started),
    }
}

/// Compare two series below `terms`, or below what they actually carry if
/// that is less (and then fail).
fn agreement_check(
    name: &str,
    k: Option<i64>,
    terms: i64,
    started: Instant,
    a: &QSeries,
    b: &QSeries,
) -> CheckRecord {
    let upto = terms.min(a.prec()).min(b.prec());
    match a.eq_to(b, upto) {
        Ok(agr) => {
            let mut rec = CheckRecord::from_agreement(name, k, &agr, started);
            if upto < terms {
                rec.pass = false;
                rec.detail = Some(format!("only known below q^{upto}"));
            }
            rec
        }
        Err(e) => CheckRecord::failed(name, k, e.to_string(), started),
    }
}

fn order_check(k: i64, fk: &QSeries, terms: i64) -> CheckRecord {
    let started = Instant::now();
    let expected = (k + 1) / 4;
    let found = fk.valuation();
    let pass = found == Some(expected);
    CheckRecord {
        check: "order".into(),
        k: Some(k),
        certified_below: terms.min(fk.prec()),
        pass,
        first_failure: if pass { None } else { found },
        detail: (!pass).then(|| format!("expected order {expected}")),
        wall_time_us: elapsed_us(started),
    }
}

fn frobenius_check(lib: &FormLibrary, k: i64, fk: &QSeries, terms: i64) -> CheckRecord {
    let started = Instant::now();
    let name = "frobenius_reproduces";
    let ord = (k + 1) / 4;
    let count = (terms - ord).max(0) as usize;
    let kq = Rational::from_integer(k.into());
    let rep = match frobenius_solve(lib, OdeFamily::TWO_A, &kq, RootChoice::Auto, count) {
        Ok(rep) => rep,
        Err(e) => return CheckRecord::failed(name, Some(k), e.to_string(), started),
    };
    let (Some(sol), Some(lead)) = (rep.solution(), fk.leading_coefficient()) else {
        return CheckRecord::failed(name, Some(k), format!("status {}", rep.status.as_str()), started);
    };
    agreement_check(name, Some(k), terms, started, &sol.scale(lead), fk)
}

fn quasimodular_check(lib: &FormLibrary, k: i64, fk: &QSeries) -> CheckRecord {
    let started = Instant::now();
    let name = "quasimodular";
    let run = || -> qmf_core::Result<Result<(), String>> {
        let qm = enumerate_basis(RingTag::QmGamma02, k + 1)?;
        let rep = decompose_series(lib, fk, &qm)?;
        if rep.status != DecompositionStatus::Unique {
            return Ok(Err(format!("QM_GAMMA02 status {}", rep.status.as_str())));
        }
        if !rep.e2_degree().is_some_and(|d| d >= 1) {
            return Ok(Err("no E2 part".into()));
        }
        let star = enumerate_basis(RingTag::ModGamma02Star, k + 1)?;
        let rep = decompose_series(lib, fk, &star)?;
        if rep.status != DecompositionStatus::NotInSpan {
            return Ok(Err(format!("MOD_GAMMA02_STAR status {}", rep.status.as_str())));
        }
        Ok(Ok(()))
    };
    match run() {
        Ok(Ok(())) => CheckRecord {
            check: name.into(),
            k: Some(k),
            certified_below: fk.prec(),
            pass: true,
            first_failure: None,
            detail: None,
            wall_time_us: elapsed_us(started),
        },
        Ok(Err(detail)) | Err(qmf_core::Error::Domain(detail)) => {
            CheckRecord::failed(name, Some(k), detail, started)
        }
        Err(e) => CheckRecord::failed(name, Some(k), e.to_string(), started),
    }
}

/// Precision at which `F_k` can be decomposed over the quasimodular ring.
fn decomposition_terms(k: i64) -> Result<i64, Failure> {
    Ok(enumerate_basis(RingTag::QmGamma02, k + 1)?.len() as i64 + DEFAULT_MARGIN)
}

fn checks_for(lib: &FormLibrary, fks: &[QSeries], n: usize, terms: i64) -> Vec<CheckRecord> {
    let k = 3 + 4 * n as i64;
    let kq = Rational::from_integer(k.into());
    let fk = &fks[n];
    let window = fk.truncate(terms);
    let mut out = vec![
        zero_check("ode_residual", Some(k), terms, Instant::now(), || {
            ode_residual(lib, &window, &kq, OdeFamily::TWO_A)
        }),
        zero_check("sharp_prime_residual", Some(k), terms, Instant::now(), || {
            sharp_prime_residual(lib, &window, &kq)
        }),
    ];
    let started = Instant::now();
    out.push(match fk_closed_form(lib, k, terms) {
        Ok(closed) => agreement_check("closed_form", Some(k), terms, started, &window, &closed),
        Err(e) => CheckRecord::failed("closed_form", Some(k), e.to_string(), started),
    });
    if n >= 2 {
        out.push(zero_check("recurrence", Some(k), terms, Instant::now(), || {
            recurrence_defect(lib, k - 4, &window, &fks[n - 1].truncate(terms), &fks[n - 2].truncate(terms))
        }));
    }
    if n >= 1 {
        out.push(zero_check("key_lemma", Some(k), terms, Instant::now(), || {
            key_lemma_defect(lib, k, &window, &fks[n - 1].truncate(terms))
        }));
    }
    out.push(order_check(k, &window, terms));
    out.push(frobenius_check(lib, k, &window, terms));
    out.push(quasimodular_check(lib, k, fk));
    out
}

pub fn verify(global: &GlobalArgs, k_min: i64, k_max: i64) -> Output {
    let started = Instant::now();
    let terms = require_terms(global)?;
    check_fk_domain(k_min)?;
    check_fk_domain(k_max)?;
    if k_min > k_max {
        return Err(usage(format!("--k-min {k_min} exceeds --k-max {k_max}")));
    }
    let pool = thread_pool(global)?;
    let lib = FormLibrary::new();
    let seq_terms = terms.max(decomposition_terms(k_max)?);
    let fks = build_fk_sequence(&lib, k_max, seq_terms)?;
    let first = ((k_min - 3) / 4) as usize;
    let checks: Vec<CheckRecord> = pool.install(|| {
        (first..fks.len())
            .into_par_iter()
            .flat_map_iter(|n| checks_for(&lib, &fks, n, terms))
            .collect()
    });
    let report = VerificationReport::new("verify", terms, checks, started);
    let text = render(global, &report, || report.text());
    finish(report.pass, text)
}

pub fn identities(global: &GlobalArgs) -> Output {
    let started = Instant::now();
    let terms = require_terms(global)?;
    let pool = thread_pool(global)?;
    let lib = FormLibrary::new();
    let suite = identity_suite(&lib, terms);
    let checks: Vec<CheckRecord> = pool.install(|| {
        suite
            .par_iter()
            .map(|id| agreement_check(id.name, None, terms, Instant::now(), &id.lhs, &id.rhs))
            .collect()
    });
    let report = VerificationReport::new("identities", terms, checks, started);
    let text = render(global, &report, || report.text());
    finish(report.pass, text)
}

pub fn poly(global: &GlobalArgs, family: &str, n: usize) -> Output {
    let (p, q) = pq_polys::<Rational>(n);
    let (label, poly) = match family.to_ascii_uppercase().as_str() {
        "P" => ("P", p),
        "Q" => ("Q", q),
        _ => return Err(usage(format!("--family for poly is P or Q, not {family}"))),
    };
    let doc = PolynomialReport {
        version: SCHEMA_VERSION,
        command: "poly".into(),
        family: label.into(),
        n,
        polynomial: poly.to_string(),
        coefficients: poly.coeffs().iter().map(rational_string).collect(),
    };
    Ok(render(global, &doc, || format!("{}\n", doc.polynomial)))
}

pub fn frobenius(global: &GlobalArgs, family: &str, k: &str, rho: Option<&str>) -> Output {
    let terms = require_terms(global)?;
    let fam = OdeFamily::from_str(family).map_err(|e| usage(e.to_string()))?;
    let kq = parse_rational("k", k)?;
    let choice = match rho {
        Some(r) => RootChoice::Given(parse_rational("rho", r)?),
        None => RootChoice::Auto,
    };
    let lib = FormLibrary::new();
    let rep = frobenius_solve(&lib, fam, &kq, choice, terms as usize)?;
    let doc = FrobeniusRecord {
        version: SCHEMA_VERSION,
        command: "frobenius".into(),
        family: fam.as_str().into(),
        k: rational_string(&kq),
        rho: rational_string(&rep.rho),
        status: rep.status.as_str().into(),
        resonance_events: rep
            .resonance_events
            .iter()
            .map(|ev| ResonanceRecord {
                step: ev.step,
                obstruction: rational_string(&ev.obstruction),
            })
            .collect(),
        coefficients: rep
            .coefficients
            .as_ref()
            .map(|cs| cs.iter().map(rational_string).collect()),
    };
    Ok(render(global, &doc, || {
        let mut out = format!("rho: {}\nstatus: {}\n", doc.rho, doc.status);
        for ev in &doc.resonance_events {
            out.push_str(&format!("resonance at m={}: right-hand side {}\n", ev.step, ev.obstruction));
        }
        if let Some(cs) = &doc.coefficients {
            for (m, c) in cs.iter().enumerate() {
                out.push_str(&format!("c_{m}: {c}\n"));
            }
        }
        out
    }))
}

pub fn decompose(
    global: &GlobalArgs,
    form: Option<&str>,
    k: Option<i64>,
    ring: &str,
    weight: Option<i64>,
) -> Output {
    let terms = require_terms(global)?;
    let ring = RingTag::from_str(ring).map_err(|e| usage(e.to_string()))?;
    let lib = FormLibrary::new();
    let (target, series, natural_weight) = match (form, k) {
        (Some(f), _) => {
            let name = FormName::from_str(f).map_err(|e| usage(e.to_string()))?;
            (name.as_str().to_string(), lib.get(name, terms), name.weight())
        }
        (None, Some(k)) => {
            check_fk_domain(k)?;
            let fks = build_fk_sequence(&lib, k, terms)?;
            (format!("F_{k}"), fks.last().expect("nonempty").clone(), k + 1)
        }
        (None, None) => return Err(usage("give --form or --k")),
    };
    let weight = weight.unwrap_or(natural_weight);
    let basis = enumerate_basis(ring, weight)?;
    let needed = basis.len() as i64 + DEFAULT_MARGIN;
    if terms < needed {
        return Err(usage(format!(
            "a basis of {} monomials needs --terms {needed} or more",
            basis.len()
        )));
    }
    let rep = decompose_series(&lib, &series, &basis)?;
    let labels: Vec<String> = (0..basis.len()).map(|i| basis.label(i)).collect();
    let doc = DecompositionRecord {
        version: SCHEMA_VERSION,
        command: "decompose".into(),
        target,
        ring: ring.as_str().into(),
        weight,
        basis: labels.clone(),
        status: rep.status.as_str().into(),
        certified_below: rep.certified_prec,
        e2_degree: rep.e2_degree(),
        coefficients: labels
            .iter()
            .zip(&rep.coefficients)
            .map(|(m, c)| BasisCoefficient {
                monomial: m.clone(),
                value: rational_string(c),
            })
            .collect(),
    };
    let text = render(global, &doc, || {
        let mut out = format!(
            "{} in {} at weight {}: {}\n",
            doc.target, doc.ring, doc.weight, doc.status
        );
        for (label, c) in labels.iter().zip(&rep.coefficients) {
            if !c.is_zero() {
                out.push_str(&format!("{c} * {label}\n"));
            }
        }
        out
    });
    // A rank-deficient system certifies nothing about membership.
    finish(rep.status != DecompositionStatus::Underdetermined, text)
}
