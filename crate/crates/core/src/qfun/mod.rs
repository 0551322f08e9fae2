//! Rational functions of the loop variable `q` over a coefficient ring.

pub mod json;
mod laurent;
mod rational;
mod split;

pub use laurent::QLaurent;
pub use rational::{DenFactor, QRational};
pub use split::{check_split, lau, residue, residue_via_split, split, Split};
