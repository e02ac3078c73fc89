use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("series is zero to its precision; no leading coefficient to invert")]
    ZeroLeadingCoefficient,

    #[error("requested precision {requested} exceeds available precision {available}")]
    PrecisionExceeded { requested: i64, available: i64 },

    #[error("eta product q-prefactor ({a} + 2*{b})/24 is not an integer")]
    FractionalPrefactor { a: i64, b: i64 },

    #[error("hypergeometric series does not terminate (neither a nor b is a non-positive integer)")]
    NonTerminating,

    #[error("Pochhammer symbol (c)_{step} vanishes before the series terminates")]
    PochhammerPole { step: usize },

    #[error("{rho} is not a root of the indicial polynomial")]
    NotAnIndicialRoot { rho: String },

    #[error("domain error: {0}")]
    Domain(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
