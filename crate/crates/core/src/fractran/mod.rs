//! Exact Fractran semantics.

mod collatz;
mod factor;
mod program;
mod run;

use thiserror::Error;

pub use collatz::{Branch, CollatzForm};
pub use factor::{factorize, factorize_u64, is_prime, primes, ExponentVector};
pub use program::{
    parse_program, primegame, Fraction, FractranProgram, ResidueEntry, EAGER_TABLE_LIMIT,
    PRIMEGAME,
};
pub use run::{Orbit, Outcome, Trace};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FractranError {
    #[error("program has no fractions")]
    EmptyProgram,
    #[error("zero numerator or denominator in `{0}`")]
    ZeroPart(String),
    #[error("malformed fraction `{0}`")]
    Malformed(String),
    #[error("cannot factor zero")]
    ZeroInput,
    #[error("{0} has a prime factor beyond trial-division range")]
    FactorTooLarge(String),
}
