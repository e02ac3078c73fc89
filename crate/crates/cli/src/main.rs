//! `qmf`: expand catalog forms, build and verify `F_k`, solve by Frobenius
//! and decompose over graded rings.
//!
//! Exit codes: 0 success, 1 a mathematical check failed, 2 usage or domain
//! error.

mod commands;
mod report;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Smallest precision accepted by the verifying subcommands.
pub const MIN_TERMS: i64 = 8;

#[derive(Debug, Parser)]
#[command(name = "qmf", version, about = "Exact q-expansions of quasimodular forms on Γ₀(2)")]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct GlobalArgs {
    /// Work with coefficients of q^0 .. q^(terms-1).
    #[arg(long, global = true, env = "QMF_DEFAULT_TERMS", default_value_t = 150)]
    pub terms: i64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Worker threads for sweeps; defaults to the number of cores.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the q-expansion of a catalog form.
    Expand {
        #[arg(long)]
        form: String,
    },
    /// Build F_k and check that it solves its equation.
    Fk {
        #[arg(long)]
        k: i64,
    },
    /// Check every F_k with k_min <= k <= k_max.
    Verify {
        #[arg(long)]
        k: Option<i64>,
        #[arg(long, conflicts_with = "k")]
        k_min: Option<i64>,
        #[arg(long, conflicts_with = "k")]
        k_max: Option<i64>,
    },
    /// Check the relations among the catalog forms.
    Identities,
    /// Print P_n or Q_n.
    Poly {
        #[arg(long)]
        family: String,
        #[arg(long)]
        n: usize,
    },
    /// Power-series solution at an indicial root.
    Frobenius {
        #[arg(long, default_value = "2A")]
        family: String,
        /// Integer or fraction `a/b`.
        #[arg(long, allow_hyphen_values = true)]
        k: String,
        /// Indicial root; defaults to the larger one when it is positive.
        #[arg(long, allow_hyphen_values = true)]
        rho: Option<String>,
    },
    /// Write a catalog form or F_k in a monomial basis of a graded ring.
    Decompose {
        #[arg(long, conflicts_with = "k", required_unless_present = "k")]
        form: Option<String>,
        #[arg(long)]
        k: Option<i64>,
        #[arg(long, default_value = "QM")]
        ring: String,
        /// Defaults to the weight of the target.
        #[arg(long)]
        weight: Option<i64>,
    },
}

/// Why a command did not succeed.
#[derive(Debug)]
pub enum Failure {
    /// Bad input or a request outside an operation's domain.
    Usage(String),
    /// The computation ran and some check did not hold.
    Math(String),
}

impl From<qmf_core::Error> for Failure {
    fn from(e: qmf_core::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let global = cli.global;
    let result = match cli.command {
        Command::Expand { form } => commands::expand(&global, &form),
        Command::Fk { k } => commands::fk(&global, k),
        Command::Verify { k, k_min, k_max } => {
            let lo = k.or(k_min).unwrap_or(3);
            let hi = k.or(k_max).unwrap_or(lo);
            commands::verify(&global, lo, hi)
        }
        Command::Identities => commands::identities(&global),
        Command::Poly { family, n } => commands::poly(&global, &family, n),
        Command::Frobenius { family, k, rho } => {
            commands::frobenius(&global, &family, &k, rho.as_deref())
        }
        Command::Decompose {
            form,
            k,
            ring,
            weight,
        } => commands::decompose(&global, form.as_deref(), k, &ring, weight),
    };
    match result {
        Ok(output) => {
            print!("{output}");
            ExitCode::SUCCESS
        }
        Err(Failure::Math(output)) => {
            print!("{output}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
