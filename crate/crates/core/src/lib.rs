//! Fractran programs, unary Turing machines, and lazy stream specifications.
//!
//! - [`fractran`]: exact interpreter with big-integer and exponent-vector
//!   backends, residue tables, and the Collatz-function view of a program.
//! - [`turing`]: two-symbol Turing machines on `(L, H, R)` tapes.
//! - [`compile`]: the machine-to-Fractran compiler and a side-by-side
//!   simulation check.
//! - [`stream`]: the Fractran-to-stream translation, an outermost evaluator,
//!   and bounded productivity probes.
//! - [`cli`]: the command-line front end used by the `fractran` binary.

pub mod cli;
pub mod compile;
pub mod fractran;
pub mod stream;
pub mod turing;
