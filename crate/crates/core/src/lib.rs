//! Exact symbolic engine for the formal side of K-theoretic quasimap
//! wall-crossing: coefficient rings with λ-structure, rational functions in
//! the loop variable `q` and their residues, q-hypergeometric I-functions,
//! permutation-equivariant bracket bookkeeping, wall-crossing transforms and
//! the inflated projective bundle pushforward formulas.
//!
//! Everything is exact rational arithmetic; there is no floating point.

pub mod ifun;
pub mod inflated;
pub mod novikov;
pub mod perm;
pub mod qfun;
pub mod random;
pub mod ring;
pub mod verify;
pub mod wallcross;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("operands live in different coefficient rings")]
    SpecMismatch,
    #[error("operands live over different cones")]
    ConeMismatch,
    #[error("unknown generator {0:?}")]
    UnknownGenerator(String),
    #[error("not a unit: {0}")]
    NotAUnit(String),
    #[error("element has a nonzero constant part: {0}")]
    NotNilpotent(String),
    #[error("twist summand has a t-order-0 part, exp would not truncate: {0}")]
    NonTruncatingTwist(String),
    #[error("monomial is not housed by the Euler characteristic preset: {0}")]
    UnhousedMonomial(String),
    #[error("invalid denominator factor: {0}")]
    InvalidFactor(String),
    #[error("invalid ring spec: {0}")]
    InvalidSpec(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("pole: {0}")]
    Pole(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("cutoff exceeded: {0}")]
    Overflow(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub use num_rational::BigRational;
pub use ring::{Monomial, RingElem, RingSpec};
