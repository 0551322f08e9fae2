//! Finite-dimensional quotient coefficient rings with λ-ring structure.

mod elem;
mod euler;
pub mod json;
mod lambda;
mod parse;
mod spec;

pub use elem::{fmt_rational, RingElem};
pub use euler::{euler_class, euler_class_in, mukai_pairing, twist_class, EulerCharPreset, TwistData};
pub use parse::parse_elem;
pub use spec::{GenKind, LambdaCutoff, Monomial, RingSpec, RingSpecBuilder};

use num_bigint::BigInt;
use num_rational::BigRational;

pub(crate) fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub(crate) fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Binomial coefficient `C(n, k)` for nonnegative `k` and arbitrary integer
/// `n`, read as a polynomial in `n`.
pub(crate) fn binomial_poly(n: i64, k: u32) -> BigRational {
    let mut num = BigInt::from(1);
    let mut den = BigInt::from(1);
    for i in 0..k as i64 {
        num *= BigInt::from(n - i);
        den *= BigInt::from(i + 1);
    }
    BigRational::new(num, den)
}
