//! Lazy stream specifications and their outermost evaluation.

mod engine;
mod probe;
mod spec;
mod term;

use thiserror::Error;

pub use engine::{element_of, rewrite_nth, rewrite_nth_traced, Evaluation, Evaluator, PartialTerm};
pub use probe::{probe_productivity, ProbeEntry, ProbeReport};
pub use spec::{
    collatz_spec, critical_overlaps, induce_spec, is_orthogonal, phi, predicted_step, Rule,
    StreamSpec, RENDER_LIMIT,
};
pub use term::{unify, Sort, Symbol, Term};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StreamError {
    #[error("fuel must be positive")]
    FuelZero,
    #[error("specification too large to write out")]
    TooLarge,
    #[error("ill-formed stream term `{0}`")]
    IllFormed(String),
}
