//! Exact q-expansion arithmetic for quasimodular forms on Γ₀(2) and Γ₀*(2).
//!
//! The crate builds the quasimodular solutions `F_k` (`k ≡ 3 mod 4`) of the
//! weight-`k` hypergeometric-type equation attached to Γ₀*(2), checks the
//! identities behind them as truncated series identities, solves the
//! equations by the Frobenius method, and certifies membership of forms in
//! the graded rings generated by `E₂`, `C`, `D` and friends.
//!
//! All algorithms are generic over [`Scalar`]; the aliases below fix the
//! exact rational field used for verification.

pub mod decompose;
pub mod error;
pub mod forms;
pub mod identities;
pub mod linalg;
pub mod ode;
pub mod polys;
pub mod scalar;
pub mod series;

pub use error::{Error, Result};
pub use scalar::Scalar;

pub type Rational = num_rational::BigRational;
pub type QSeries = series::Series<Rational>;
pub type RationalPolynomial = polys::Polynomial<Rational>;
pub type FormLibrary = forms::FormLibrary<Rational>;
pub type WeightedSeries = ode::WeightedSeries<Rational>;
pub type FrobeniusReport = ode::FrobeniusReport<Rational>;
pub type DecompositionReport = decompose::DecompositionReport<Rational>;
pub type HypergeomParams = polys::HypergeomParams<Rational>;
