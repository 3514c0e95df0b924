//! Exact coefficient arithmetic and sparse multivariate polynomials.

mod domain;
mod matrix;
mod monomial;
mod poly;
pub mod text;

pub use domain::{is_prime, CoefficientDomain, Domain, FieldDomain, Integers, PrimeField, Rationals};
pub use matrix::PolyMatrix2;
pub use monomial::{Monomial, MonomialOrder};
pub use poly::{poly_arith, EvalRing, IntPoly, PolyOp, PolyRing, Polynomial, RatPoly};
pub use text::{format_poly, parse_expr, parse_rational, read_poly_file, write_poly_file};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgError {
    #[error("polynomial ring mismatch: {0}")]
    RingMismatch(String),
    #[error("monomial length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("division by the zero polynomial")]
    ZeroDivisor,
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("operation needs a field, got {0}")]
    NotAField(CoefficientDomain),
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("parse error: {0}")]
    Parse(String),
}
