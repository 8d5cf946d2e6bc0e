//! Exact coefficients in ℚ(i) and sparse multivariate polynomials over them.
//!
//! Every identity the engine checks is an equality in some polynomial ring
//! over ℚ(i); deformation parameters are ordinary variables, never numbers.

mod coeff;
pub(crate) mod parse;
mod polynomial;

pub use coeff::GaussRat;
pub use parse::parse_poly;
pub use polynomial::{grlex_cmp, ArithKind, Poly, PolyJson, TermJson};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("`{num}` is not divisible by `{den}` (remainder starts with `{remainder}`)")]
    NotDivisible { num: String, den: String, remainder: String },
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("variable `{0}` is not in the declared variable list")]
    UnknownVariable(String),
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

/// Shorthand used throughout the crate and its tests: parse a polynomial
/// literal, panicking on malformed input.
pub fn p(s: &str) -> Poly {
    parse_poly(s).unwrap_or_else(|e| panic!("bad polynomial literal `{s}`: {e}"))
}
