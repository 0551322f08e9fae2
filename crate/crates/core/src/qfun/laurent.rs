use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::sync::Arc;

use crate::ring::{RingElem, RingSpec};
use crate::{Error, Result};

/// Laurent polynomial in `q` with ring coefficients. Also used for
/// truncated Laurent expansions, where the caller tracks the precision.
#[derive(Clone, PartialEq, Eq)]
pub struct QLaurent {
    spec: Arc<RingSpec>,
    coeffs: BTreeMap<i64, RingElem>,
}

impl QLaurent {
    pub fn zero(spec: &Arc<RingSpec>) -> Self {
        QLaurent {
            spec: spec.clone(),
            coeffs: BTreeMap::new(),
        }
    }

    pub fn one(spec: &Arc<RingSpec>) -> Self {
        Self::constant(RingElem::one(spec))
    }

    pub fn constant(c: RingElem) -> Self {
        Self::monomial(0, c)
    }

    /// `c·q^e`.
    pub fn monomial(e: i64, c: RingElem) -> Self {
        let mut out = QLaurent::zero(c.spec());
        if !c.is_zero() {
            out.coeffs.insert(e, c);
        }
        out
    }

    /// `q^e`.
    pub fn q_pow(spec: &Arc<RingSpec>, e: i64) -> Self {
        Self::monomial(e, RingElem::one(spec))
    }

    pub fn from_coeffs<I: IntoIterator<Item = (i64, RingElem)>>(spec: &Arc<RingSpec>, it: I) -> Self {
        let mut out = QLaurent::zero(spec);
        for (e, c) in it {
            out.add_term(e, &c);
        }
        out
    }

    pub fn spec(&self) -> &Arc<RingSpec> {
        &self.spec
    }

    pub fn coeffs(&self) -> &BTreeMap<i64, RingElem> {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficient of `q^e`.
    pub fn coeff(&self, e: i64) -> RingElem {
        self.coeffs
            .get(&e)
            .cloned()
            .unwrap_or_else(|| RingElem::zero(&self.spec))
    }

    /// Lowest exponent with a nonzero coefficient.
    pub fn order(&self) -> Option<i64> {
        self.coeffs.keys().next().copied()
    }

    /// Highest exponent with a nonzero coefficient.
    pub fn degree(&self) -> Option<i64> {
        self.coeffs.keys().next_back().copied()
    }

    pub fn add_term(&mut self, e: i64, c: &RingElem) {
        if c.is_zero() {
            return;
        }
        assert!(c.spec().same_as(&self.spec), "ring mismatch");
        match self.coeffs.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c.clone());
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn checked_add(&self, other: &QLaurent) -> Result<QLaurent> {
        if !self.spec.same_as(&other.spec) {
            return Err(Error::SpecMismatch);
        }
        let mut out = self.clone();
        for (e, c) in &other.coeffs {
            out.add_term(*e, c);
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &QLaurent) -> Result<QLaurent> {
        if !self.spec.same_as(&other.spec) {
            return Err(Error::SpecMismatch);
        }
        let mut out = QLaurent::zero(&self.spec);
        for (ea, ca) in &self.coeffs {
            for (eb, cb) in &other.coeffs {
                out.add_term(ea + eb, &(ca * cb));
            }
        }
        Ok(out)
    }

    /// Product keeping only exponents `≤ max_exp`.
    pub fn mul_truncated(&self, other: &QLaurent, max_exp: i64) -> QLaurent {
        let mut out = QLaurent::zero(&self.spec);
        for (ea, ca) in &self.coeffs {
            for (eb, cb) in &other.coeffs {
                if ea + eb > max_exp {
                    break;
                }
                out.add_term(ea + eb, &(ca * cb));
            }
        }
        out
    }

    pub fn scale(&self, c: &RingElem) -> QLaurent {
        QLaurent::from_coeffs(&self.spec, self.coeffs.iter().map(|(e, x)| (*e, x * c)))
    }

    /// Multiply by `q^s`.
    pub fn shift(&self, s: i64) -> QLaurent {
        QLaurent {
            spec: self.spec.clone(),
            coeffs: self.coeffs.iter().map(|(e, c)| (e + s, c.clone())).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> QLaurent {
        let mut acc = QLaurent::one(&self.spec);
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Keep only exponents in `lo..=hi`.
    pub fn window(&self, lo: i64, hi: i64) -> QLaurent {
        QLaurent {
            spec: self.spec.clone(),
            coeffs: self
                .coeffs
                .range(lo..=hi)
                .map(|(e, c)| (*e, c.clone()))
                .collect(),
        }
    }

    /// Value at `q = 1`.
    pub fn eval_at_one(&self) -> RingElem {
        let mut acc = RingElem::zero(&self.spec);
        for c in self.coeffs.values() {
            acc += c;
        }
        acc
    }

    /// `q ↦ q^r·u`: `c·q^e ↦ c·u^e·q^{re}`.
    pub fn substitute(&self, r: i64, u: &RingElem) -> Result<QLaurent> {
        assert!(r != 0, "substitution exponent must be nonzero");
        let mut out = QLaurent::zero(&self.spec);
        for (e, c) in &self.coeffs {
            out.add_term(r * e, &(c * &u.pow_i(*e)?));
        }
        Ok(out)
    }

    /// Apply a map to every coefficient.
    pub fn map_coeffs<F: FnMut(&RingElem) -> RingElem>(&self, mut f: F) -> QLaurent {
        QLaurent::from_coeffs(&self.spec, self.coeffs.iter().map(|(e, c)| (*e, f(c))))
    }
}

impl PartialOrd for QLaurent {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for QLaurent {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.coeffs.cmp(&other.coeffs)
    }
}

impl std::hash::Hash for QLaurent {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.coeffs.hash(state);
    }
}

impl Add<&QLaurent> for &QLaurent {
    type Output = QLaurent;
    fn add(self, rhs: &QLaurent) -> QLaurent {
        self.checked_add(rhs).expect("ring mismatch")
    }
}

impl Sub<&QLaurent> for &QLaurent {
    type Output = QLaurent;
    fn sub(self, rhs: &QLaurent) -> QLaurent {
        self.checked_add(&-rhs).expect("ring mismatch")
    }
}

impl Mul<&QLaurent> for &QLaurent {
    type Output = QLaurent;
    fn mul(self, rhs: &QLaurent) -> QLaurent {
        self.checked_mul(rhs).expect("ring mismatch")
    }
}

impl AddAssign<&QLaurent> for QLaurent {
    fn add_assign(&mut self, rhs: &QLaurent) {
        for (e, c) in &rhs.coeffs {
            self.add_term(*e, c);
        }
    }
}

impl SubAssign<&QLaurent> for QLaurent {
    fn sub_assign(&mut self, rhs: &QLaurent) {
        for (e, c) in &rhs.coeffs {
            self.add_term(*e, &-c);
        }
    }
}

impl Neg for &QLaurent {
    type Output = QLaurent;
    fn neg(self) -> QLaurent {
        QLaurent {
            spec: self.spec.clone(),
            coeffs: self.coeffs.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }
}

impl fmt::Display for QLaurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .map(|(e, c)| match e {
                0 => format!("({c})"),
                1 => format!("({c})*q"),
                _ => format!("({c})*q^{e}"),
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Debug for QLaurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QLaurent({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn q_times_q_inverse() {
        let s = RingSpec::rationals();
        let p = &QLaurent::q_pow(&s, 1) * &QLaurent::q_pow(&s, -1);
        assert_eq!(p, QLaurent::one(&s));
    }

    #[test]
    fn substitution_of_generator() {
        let s = RingSpec::builder().unit("L").build().unwrap();
        let l = RingElem::gen(&s, "L").unwrap();
        let q = QLaurent::q_pow(&s, 1);
        assert_eq!(q.substitute(2, &l).unwrap(), QLaurent::monomial(2, l));
    }
}
