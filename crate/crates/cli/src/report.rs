//! Serializable output records. Every document carries `version`, and keys
//! are emitted in sorted order so that parsing and re-serializing is
//! byte-identical.

use std::time::Instant;

use qmf_core::series::Agreement;
use qmf_core::{QSeries, Rational};
use serde::Serialize;

pub const SCHEMA_VERSION: u32 = 1;

/// One exponent and its exact coefficient.
#[derive(Debug, Clone, Serialize)]
pub struct Term {
    pub exponent: i64,
    pub value: String,
}

pub fn terms_of(s: &QSeries) -> Vec<Term> {
    (s.ord()..s.prec())
        .map(|e| Term {
            exponent: e,
            value: s.coeff(e).expect("inside window").to_string(),
        })
        .collect()
}

pub fn rational_string(r: &Rational) -> String {
    r.to_string()
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckRecord {
    pub check: String,
    pub k: Option<i64>,
    /// Every exponent below this one was compared.
    pub certified_below: i64,
    pub pass: bool,
    pub first_failure: Option<i64>,
    pub detail: Option<String>,
    pub wall_time_us: u64,
}

impl CheckRecord {
    pub fn from_agreement(check: &str, k: Option<i64>, agr: &Agreement, started: Instant) -> Self {
        CheckRecord {
            check: check.to_string(),
            k,
            certified_below: agr.certified_below,
            pass: agr.equal,
            first_failure: agr.first_mismatch,
            detail: None,
            wall_time_us: elapsed_us(started),
        }
    }

    pub fn failed(check: &str, k: Option<i64>, detail: String, started: Instant) -> Self {
        CheckRecord {
            check: check.to_string(),
            k,
            certified_below: 0,
            pass: false,
            first_failure: None,
            detail: Some(detail),
            wall_time_us: elapsed_us(started),
        }
    }
}

pub fn elapsed_us(started: Instant) -> u64 {
    started.elapsed().as_micros().try_into().unwrap_or(u64::MAX)
}

#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub version: u32,
    pub command: String,
    pub terms: i64,
    pub pass: bool,
    pub checks: Vec<CheckRecord>,
    pub wall_time_us: u64,
}

impl VerificationReport {
    pub fn new(command: &str, terms: i64, checks: Vec<CheckRecord>, started: Instant) -> Self {
        VerificationReport {
            version: SCHEMA_VERSION,
            command: command.to_string(),
            terms,
            pass: checks.iter().all(|c| c.pass),
            checks,
            wall_time_us: elapsed_us(started),
        }
    }

    pub fn text(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let status = if c.pass { "PASS" } else { "FAIL" };
            let k = c.k.map(|k| format!(" k={k}")).unwrap_or_default();
            out.push_str(&format!(
                "{status} {}{k} below q^{} ({}us)",
                c.check, c.certified_below, c.wall_time_us
            ));
            if let Some(e) = c.first_failure {
                out.push_str(&format!(" first failure at q^{e}"));
            }
            if let Some(d) = &c.detail {
                out.push_str(&format!(": {d}"));
            }
            out.push('\n');
        }
        let passed = self.checks.iter().filter(|c| c.pass).count();
        out.push_str(&format!("{passed} of {} checks passed\n", self.checks.len()));
        out
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ExpansionReport {
    pub version: u32,
    pub command: String,
    pub name: String,
    pub weight: i64,
    pub terms: i64,
    pub coefficients: Vec<Term>,
}

#[derive(Debug, Clone, Serialize)]
pub struct PolynomialReport {
    pub version: u32,
    pub command: String,
    pub family: String,
    pub n: usize,
    pub polynomial: String,
    /// Coefficients by ascending power of `x`.
    pub coefficients: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ResonanceRecord {
    pub step: usize,
    pub obstruction: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct FrobeniusRecord {
    pub version: u32,
    pub command: String,
    pub family: String,
    pub k: String,
    pub rho: String,
    pub status: String,
    pub resonance_events: Vec<ResonanceRecord>,
    /// `c_0, c_1, …`; absent when obstructed.
    pub coefficients: Option<Vec<String>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct BasisCoefficient {
    pub monomial: String,
    pub value: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct DecompositionRecord {
    pub version: u32,
    pub command: String,
    pub target: String,
    pub ring: String,
    pub weight: i64,
    pub basis: Vec<String>,
    pub status: String,
    pub certified_below: i64,
    pub e2_degree: Option<u32>,
    pub coefficients: Vec<BasisCoefficient>,
}

/// Canonical JSON: sorted keys, two-space indentation, trailing newline.
pub fn to_json<S: Serialize>(doc: &S) -> String {
    let value = serde_json::to_value(doc).expect("report types serialize");
    canonical(&value)
}

pub fn canonical(value: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("values serialize");
    s.push('\n');
    s
}
