//! Prime fields, monomials, monomial orders and sparse polynomials.

mod field;
mod monomial;
mod order;
mod poly;
mod text;

pub use field::{field_inverse, PrimeField};
pub use monomial::{binomial, monomials_of_degree, Monomial, MAX_VARS};
pub use order::MonomialOrder;
pub use poly::{PolyRing, Polynomial};
pub use text::{format_ring_header, parse_ring_header};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PolyError {
    #[error("{0} is not a prime below 2^31")]
    NotPrime(u32),
    #[error("division by zero in the coefficient field")]
    DivisionByZero,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("polynomials belong to different rings")]
    RingMismatch,
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("{0} variables exceed the supported maximum")]
    TooManyVariables(usize),
}
