use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::spec::{GenKind, Monomial, RingSpec};
use crate::{Error, Result};

/// Normal-form element of the coefficient ring described by a [`RingSpec`]:
/// a finite map from admissible monomials to nonzero exact rationals.
#[derive(Clone)]
pub struct RingElem {
    spec: Arc<RingSpec>,
    terms: BTreeMap<Monomial, BigRational>,
}

impl RingElem {
    pub fn zero(spec: &Arc<RingSpec>) -> Self {
        RingElem {
            spec: spec.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(spec: &Arc<RingSpec>) -> Self {
        Self::constant(spec, BigRational::one())
    }

    pub fn constant(spec: &Arc<RingSpec>, c: BigRational) -> Self {
        let mut e = Self::zero(spec);
        if !c.is_zero() {
            e.terms.insert(Monomial::zeros(spec.len()), c);
        }
        e
    }

    pub fn from_int(spec: &Arc<RingSpec>, n: i64) -> Self {
        Self::constant(spec, BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_ratio(spec: &Arc<RingSpec>, num: i64, den: i64) -> Self {
        Self::constant(
            spec,
            BigRational::new(BigInt::from(num), BigInt::from(den)),
        )
    }

    /// `c · mono`, zero if the monomial is truncated away.
    pub fn monomial(spec: &Arc<RingSpec>, mono: Monomial, c: BigRational) -> Self {
        let mut e = Self::zero(spec);
        if !c.is_zero() && spec.admits(&mono) {
            e.terms.insert(mono, c);
        }
        e
    }

    /// A named generator: nilpotent `ν`, unit `u`, Newton `N_m` or `t`.
    pub fn gen(spec: &Arc<RingSpec>, name: &str) -> Result<Self> {
        Self::gen_pow(spec, name, 1)
    }

    /// Generator to an integer power. Negative powers are only allowed for
    /// unit generators (for other generators use [`RingElem::pow_i`]).
    pub fn gen_pow(spec: &Arc<RingSpec>, name: &str, exp: i32) -> Result<Self> {
        let (idx, kind) = spec
            .index_of(name)
            .ok_or_else(|| Error::UnknownGenerator(name.to_string()))?;
        if exp < 0 && kind != GenKind::Unit {
            return Self::gen(spec, name)?.pow_i(exp as i64);
        }
        let mut m = Monomial::zeros(spec.len());
        m.0[idx] = exp;
        Ok(Self::monomial(spec, m, BigRational::one()))
    }

    pub fn spec(&self) -> &Arc<RingSpec> {
        &self.spec
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, BigRational> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .iter()
                .all(|(m, c)| c.is_one() && m.0.iter().all(|e| *e == 0))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Rational coefficient of the monomial `1`.
    pub fn scalar_part(&self) -> BigRational {
        self.terms
            .get(&Monomial::zeros(self.spec.len()))
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    /// `Some(c)` if the element is the constant `c`.
    pub fn as_scalar(&self) -> Option<BigRational> {
        match self.terms.len() {
            0 => Some(BigRational::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                m.0.iter().all(|e| *e == 0).then(|| c.clone())
            }
            _ => None,
        }
    }

    fn check_spec(&self, other: &RingElem) -> Result<()> {
        if self.spec.same_as(&other.spec) {
            Ok(())
        } else {
            Err(Error::SpecMismatch)
        }
    }

    pub(crate) fn insert_add(&mut self, mono: Monomial, c: BigRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(mono) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn checked_add(&self, other: &RingElem) -> Result<RingElem> {
        self.check_spec(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.insert_add(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &RingElem) -> Result<RingElem> {
        self.check_spec(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.insert_add(m.clone(), -c.clone());
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &RingElem) -> Result<RingElem> {
        self.check_spec(other)?;
        let mut out = RingElem::zero(&self.spec);
        if self.is_zero() || other.is_zero() {
            return Ok(out);
        }
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                if let Some(m) = self.spec.mul_monomials(ma, mb) {
                    out.insert_add(m, ca * cb);
                }
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &BigRational) -> RingElem {
        if c.is_zero() {
            return RingElem::zero(&self.spec);
        }
        RingElem {
            spec: self.spec.clone(),
            terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect(),
        }
    }

    pub fn scale_int(&self, n: i64) -> RingElem {
        self.scale(&BigRational::from_integer(BigInt::from(n)))
    }

    pub fn pow(&self, n: u32) -> RingElem {
        let mut acc = RingElem::one(&self.spec);
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = &acc * &base;
            }
            n >>= 1;
            if n > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Integer power; negative exponents require a unit.
    pub fn pow_i(&self, n: i64) -> Result<RingElem> {
        if n >= 0 {
            Ok(self.pow(n as u32))
        } else {
            Ok(self.invert()?.pow((-n) as u32))
        }
    }

    /// The part of the element supported on unit-generator monomials.
    pub fn constant_part(&self) -> RingElem {
        RingElem {
            spec: self.spec.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| self.spec.is_unit_monomial(m))
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn is_unit(&self) -> bool {
        self.constant_part().terms.len() == 1
    }

    /// Two-sided inverse of a unit: the constant part `c·u^b` is inverted
    /// directly and the nilpotent remainder by a terminating geometric
    /// series.
    pub fn invert(&self) -> Result<RingElem> {
        let cp = self.constant_part();
        if cp.terms.len() != 1 {
            return Err(Error::NotAUnit(self.to_string()));
        }
        let (m0, c0) = cp.terms.iter().next().unwrap();
        let mut inv_mono = m0.clone();
        for e in inv_mono.0.iter_mut() {
            *e = -*e;
        }
        let lead_inv = RingElem::monomial(&self.spec, inv_mono, c0.recip());
        // a = lead·(1 + x) with x nilpotent
        let x = &(&lead_inv * self) - &RingElem::one(&self.spec);
        if x.is_zero() {
            return Ok(lead_inv);
        }
        let neg_x = -&x;
        let mut sum = RingElem::one(&self.spec);
        let mut power = RingElem::one(&self.spec);
        for _ in 0..=self.spec.nilpotency_bound() {
            power = &power * &neg_x;
            if power.is_zero() {
                break;
            }
            sum = &sum + &power;
        }
        debug_assert!(power.is_zero(), "remainder failed to be nilpotent");
        Ok(&sum * &lead_inv)
    }

    /// Exponential of an element with zero constant part, summed until the
    /// powers truncate.
    pub fn exp_nilpotent(&self) -> Result<RingElem> {
        if !self.constant_part().is_zero() {
            return Err(Error::NotNilpotent(self.to_string()));
        }
        let mut sum = RingElem::one(&self.spec);
        let mut term = RingElem::one(&self.spec);
        for i in 1..=self.spec.nilpotency_bound() + 1 {
            term = (&term * self).scale(&BigRational::new(BigInt::one(), BigInt::from(i)));
            if term.is_zero() {
                break;
            }
            sum = &sum + &term;
        }
        Ok(sum)
    }

    /// Coefficient of `gen^exp` viewed as a polynomial in that generator;
    /// the generator's exponent is cleared in the result.
    pub fn coefficient_of(&self, gen: &str, exp: i32) -> Result<RingElem> {
        let (idx, _) = self
            .spec
            .index_of(gen)
            .ok_or_else(|| Error::UnknownGenerator(gen.to_string()))?;
        let mut out = RingElem::zero(&self.spec);
        for (m, c) in &self.terms {
            if m.0[idx] == exp {
                let mut m2 = m.clone();
                m2.0[idx] = 0;
                out.insert_add(m2, c.clone());
            }
        }
        Ok(out)
    }

    /// Re-label unit generators: unit `i` (counted within the unit block)
    /// becomes unit `perm[i]`.
    pub fn permute_units(&self, perm: &[usize]) -> RingElem {
        let base = self.spec.unit_range().start;
        let mut out = RingElem::zero(&self.spec);
        for (m, c) in &self.terms {
            let mut m2 = m.clone();
            for (i, &p) in perm.iter().enumerate() {
                m2.0[base + p] = m.0[base + i];
            }
            out.insert_add(m2, c.clone());
        }
        out
    }

    /// Rewrite term by term; `None` drops a term, and rewritten monomials
    /// outside the truncation are dropped.
    pub fn map_terms<F>(&self, mut f: F) -> RingElem
    where
        F: FnMut(&Monomial, &BigRational) -> Option<(Monomial, BigRational)>,
    {
        let mut out = RingElem::zero(&self.spec);
        for (m, c) in &self.terms {
            if let Some((m2, c2)) = f(m, c) {
                if self.spec.admits(&m2) {
                    out.insert_add(m2, c2);
                }
            }
        }
        out
    }

    /// Evaluate with every unit generator set to `1` and nothing else
    /// changed.
    pub fn forget_units(&self) -> RingElem {
        let ur = self.spec.unit_range();
        self.map_terms(|m, c| {
            let mut m2 = m.clone();
            for i in ur.clone() {
                m2.0[i] = 0;
            }
            Some((m2, c.clone()))
        })
    }
}

impl PartialEq for RingElem {
    fn eq(&self, other: &Self) -> bool {
        self.spec.same_as(&other.spec) && self.terms == other.terms
    }
}

impl Eq for RingElem {}

impl PartialOrd for RingElem {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for RingElem {
    fn cmp(&self, other: &Self) -> Ordering {
        self.terms.cmp(&other.terms)
    }
}

impl std::hash::Hash for RingElem {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        for (m, c) in &self.terms {
            m.hash(state);
            c.hash(state);
        }
    }
}

macro_rules! binop {
    ($tr:ident, $f:ident, $checked:ident) => {
        impl $tr<&RingElem> for &RingElem {
            type Output = RingElem;
            fn $f(self, rhs: &RingElem) -> RingElem {
                self.$checked(rhs)
                    .expect("ring elements from different specs")
            }
        }
        impl $tr<RingElem> for RingElem {
            type Output = RingElem;
            fn $f(self, rhs: RingElem) -> RingElem {
                (&self).$f(&rhs)
            }
        }
        impl $tr<&RingElem> for RingElem {
            type Output = RingElem;
            fn $f(self, rhs: &RingElem) -> RingElem {
                (&self).$f(rhs)
            }
        }
    };
}

binop!(Add, add, checked_add);
binop!(Sub, sub, checked_sub);
binop!(Mul, mul, checked_mul);

impl AddAssign<&RingElem> for RingElem {
    fn add_assign(&mut self, rhs: &RingElem) {
        assert!(self.spec.same_as(&rhs.spec), "ring elements from different specs");
        for (m, c) in &rhs.terms {
            self.insert_add(m.clone(), c.clone());
        }
    }
}

impl SubAssign<&RingElem> for RingElem {
    fn sub_assign(&mut self, rhs: &RingElem) {
        assert!(self.spec.same_as(&rhs.spec), "ring elements from different specs");
        for (m, c) in &rhs.terms {
            self.insert_add(m.clone(), -c.clone());
        }
    }
}

impl Neg for &RingElem {
    type Output = RingElem;
    fn neg(self) -> RingElem {
        RingElem {
            spec: self.spec.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Neg for RingElem {
    type Output = RingElem;
    fn neg(self) -> RingElem {
        -&self
    }
}

pub fn fmt_rational(c: &BigRational) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

impl fmt::Display for RingElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in &self.terms {
            let mut factors = Vec::new();
            for (i, e) in m.0.iter().enumerate() {
                if *e == 0 {
                    continue;
                }
                let name = self.spec.name_at(i);
                if *e == 1 {
                    factors.push(name);
                } else {
                    factors.push(format!("{name}^{e}"));
                }
            }
            let neg = c.is_negative();
            let abs = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            first = false;
            if factors.is_empty() {
                write!(f, "{}", fmt_rational(&abs))?;
            } else if abs.is_one() {
                write!(f, "{}", factors.join("*"))?;
            } else {
                write!(f, "{}*{}", fmt_rational(&abs), factors.join("*"))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for RingElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RingElem({self})")
    }
}
