//! Effective curve classes, walls, decompositions of classes and
//! degree-truncated Novikov series.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::qfun::{QLaurent, QRational};
use crate::ring::RingSpec;
use crate::{Error, Result};

/// Serde helper: rationals as `"p/q"` strings (integers also accepted).
pub mod rational_str {
    use num_rational::BigRational;
    use serde::{de::Error as _, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(c: &BigRational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&crate::ring::fmt_rational(c))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigRational, D::Error> {
        let v = serde_json::Value::deserialize(d)?;
        crate::ring::json::rational_from_json(&v).map_err(D::Error::custom)
    }

    pub mod vec {
        use super::*;
        use serde::ser::SerializeSeq;

        pub fn serialize<S: Serializer>(cs: &[BigRational], s: S) -> Result<S::Ok, S::Error> {
            let mut seq = s.serialize_seq(Some(cs.len()))?;
            for c in cs {
                seq.serialize_element(&crate::ring::fmt_rational(c))?;
            }
            seq.end()
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigRational>, D::Error> {
            let v: Vec<serde_json::Value> = Vec::deserialize(d)?;
            v.iter()
                .map(|x| crate::ring::json::rational_from_json(x).map_err(D::Error::custom))
                .collect()
        }
    }
}

/// Effective cone `ℕ^r` with positive rational degree weights and a degree
/// bound for truncation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConeSpec {
    #[serde(with = "rational_str::vec")]
    pub weights: Vec<BigRational>,
    #[serde(with = "rational_str")]
    pub bound: BigRational,
}

/// A curve class, an exponent vector in the cone.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CurveClass(pub Vec<u32>);

impl CurveClass {
    pub fn zero(rank: usize) -> Self {
        CurveClass(vec![0; rank])
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|x| *x == 0)
    }

    pub fn checked_add(&self, other: &CurveClass) -> CurveClass {
        CurveClass(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `self − other` if it stays effective.
    pub fn checked_sub(&self, other: &CurveClass) -> Option<CurveClass> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<_>>>()
            .map(CurveClass)
    }

    pub fn scaled(&self, r: u32) -> CurveClass {
        CurveClass(self.0.iter().map(|a| a * r).collect())
    }
}

impl fmt::Display for CurveClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

/// `(β′, [β_1, …, β_k])` with `β = β′ + Σ β_i`.
pub type Decomposition = (CurveClass, Vec<CurveClass>);

impl ConeSpec {
    pub fn new(weights: Vec<BigRational>, bound: BigRational) -> Result<Self> {
        let c = ConeSpec { weights, bound };
        c.validate()?;
        Ok(c)
    }

    /// Rank-`r` cone with integer weights.
    pub fn integral(weights: &[i64], bound: i64) -> Result<Self> {
        Self::new(
            weights.iter().map(|w| BigRational::from_integer(BigInt::from(*w))).collect(),
            BigRational::from_integer(BigInt::from(bound)),
        )
    }

    pub fn validate(&self) -> Result<()> {
        if self.weights.is_empty() {
            return Err(Error::InvalidArgument("cone of rank 0".into()));
        }
        if self.weights.iter().any(|w| !w.is_positive()) {
            return Err(Error::InvalidArgument("degree weights must be positive".into()));
        }
        if self.bound.is_negative() {
            return Err(Error::InvalidArgument("degree bound must be ≥ 0".into()));
        }
        Ok(())
    }

    pub fn rank(&self) -> usize {
        self.weights.len()
    }

    pub fn degree(&self, b: &CurveClass) -> BigRational {
        self.weights
            .iter()
            .zip(&b.0)
            .map(|(w, x)| w * BigRational::from_integer(BigInt::from(*x)))
            .fold(BigRational::zero(), |a, b| a + b)
    }

    pub fn with_bound(&self, bound: BigRational) -> ConeSpec {
        ConeSpec {
            weights: self.weights.clone(),
            bound,
        }
    }

    /// All classes of degree `≤ d`, in lexicographic order.
    pub fn classes_up_to(&self, d: &BigRational) -> Vec<CurveClass> {
        let mut out = Vec::new();
        let mut cur = vec![0u32; self.rank()];
        self.enumerate(0, &mut cur, &BigRational::zero(), d, &mut out);
        out
    }

    fn enumerate(
        &self,
        i: usize,
        cur: &mut Vec<u32>,
        deg: &BigRational,
        d: &BigRational,
        out: &mut Vec<CurveClass>,
    ) {
        if i == self.rank() {
            out.push(CurveClass(cur.clone()));
            return;
        }
        let mut x = 0u32;
        let mut dd = deg.clone();
        while &dd <= d {
            cur[i] = x;
            self.enumerate(i + 1, cur, &dd, d, out);
            x += 1;
            dd += &self.weights[i];
        }
        cur[i] = 0;
    }

    /// All classes within the truncation bound.
    pub fn classes(&self) -> Vec<CurveClass> {
        self.classes_up_to(&self.bound)
    }

    /// Degrees of nonzero classes `≤ d`, ascending.
    pub fn attainable_degrees(&self, d: &BigRational) -> Vec<BigRational> {
        let set: BTreeSet<BigRational> = self
            .classes_up_to(d)
            .iter()
            .filter(|b| !b.is_zero())
            .map(|b| self.degree(b))
            .collect();
        set.into_iter().collect()
    }

    /// Walls `1/d′` over attainable degrees `d′ ≤ d`, descending.
    pub fn walls(&self, d: &BigRational) -> Vec<BigRational> {
        self.attainable_degrees(d).iter().map(|x| x.recip()).collect()
    }

    /// Nonzero classes `γ ≤ β` (componentwise) with `deg γ = d0`.
    fn parts_of_degree(&self, beta: &CurveClass, d0: &BigRational) -> Vec<CurveClass> {
        self.classes_up_to(d0)
            .into_iter()
            .filter(|g| !g.is_zero() && &self.degree(g) == d0 && beta.checked_sub(g).is_some())
            .collect()
    }

    /// All `(β′, [β_1..β_k])`, `k ≥ 1`, with `deg β_i = d0`, ordered by `k`
    /// and then lexicographically by the tuple.
    pub fn ordered_decompositions(&self, beta: &CurveClass, d0: &BigRational) -> Vec<Decomposition> {
        assert!(d0.is_positive(), "wall degree must be positive");
        let parts = self.parts_of_degree(beta, d0);
        let mut out = Vec::new();
        if parts.is_empty() {
            return out;
        }
        let max_k = (self.degree(beta) / d0).floor().to_integer().to_usize().unwrap_or(0);
        for k in 1..=max_k {
            let mut tuple = Vec::with_capacity(k);
            Self::ordered_rec(&parts, beta, k, &mut tuple, &mut out);
        }
        out
    }

    fn ordered_rec(
        parts: &[CurveClass],
        rest: &CurveClass,
        k: usize,
        tuple: &mut Vec<CurveClass>,
        out: &mut Vec<Decomposition>,
    ) {
        if tuple.len() == k {
            out.push((rest.clone(), tuple.clone()));
            return;
        }
        for p in parts {
            if let Some(r) = rest.checked_sub(p) {
                tuple.push(p.clone());
                Self::ordered_rec(parts, &r, k, tuple, out);
                tuple.pop();
            }
        }
    }

    /// Decompositions with the tail taken as a sorted multiset, one per
    /// `S_k`-orbit.
    pub fn unordered_decompositions(&self, beta: &CurveClass, d0: &BigRational) -> Vec<Decomposition> {
        assert!(d0.is_positive(), "wall degree must be positive");
        let parts = self.parts_of_degree(beta, d0);
        let mut out = Vec::new();
        if parts.is_empty() {
            return out;
        }
        let max_k = (self.degree(beta) / d0).floor().to_integer().to_usize().unwrap_or(0);
        for k in 1..=max_k {
            let mut tuple = Vec::with_capacity(k);
            Self::unordered_rec(&parts, 0, beta, k, &mut tuple, &mut out);
        }
        out
    }

    fn unordered_rec(
        parts: &[CurveClass],
        start: usize,
        rest: &CurveClass,
        k: usize,
        tuple: &mut Vec<CurveClass>,
        out: &mut Vec<Decomposition>,
    ) {
        if tuple.len() == k {
            out.push((rest.clone(), tuple.clone()));
            return;
        }
        for (i, p) in parts.iter().enumerate().skip(start) {
            if let Some(r) = rest.checked_sub(p) {
                tuple.push(p.clone());
                Self::unordered_rec(parts, i, &r, k, tuple, out);
                tuple.pop();
            }
        }
    }
}

fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |a, i| a * BigInt::from(i))
}

/// `(k!/∏ mult!, ∏ mult!)` for a tail multiset.
pub fn orbit_stabilizer(tail: &[CurveClass]) -> (BigInt, BigInt) {
    let mut counts: BTreeMap<&CurveClass, usize> = BTreeMap::new();
    for b in tail {
        *counts.entry(b).or_insert(0) += 1;
    }
    let stab = counts.values().fold(BigInt::one(), |a, m| a * factorial(*m));
    (factorial(tail.len()) / &stab, stab)
}

/// Coefficients a Novikov series can carry.
pub trait NovikovCoeff: Clone {
    fn add(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn is_zero(&self) -> bool;
    fn one(spec: &Arc<RingSpec>) -> Self;
    fn same(&self, other: &Self) -> bool;
}

impl NovikovCoeff for QRational {
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn is_zero(&self) -> bool {
        QRational::is_zero(self)
    }
    fn one(spec: &Arc<RingSpec>) -> Self {
        QRational::one(spec)
    }
    fn same(&self, other: &Self) -> bool {
        self.equals(other)
    }
}

impl NovikovCoeff for QLaurent {
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn is_zero(&self) -> bool {
        QLaurent::is_zero(self)
    }
    fn one(spec: &Arc<RingSpec>) -> Self {
        QLaurent::one(spec)
    }
    fn same(&self, other: &Self) -> bool {
        self == other
    }
}

/// Degree-truncated series `Σ_β c_β Q^β`.
#[derive(Clone, Debug)]
pub struct NovikovSeries<C: NovikovCoeff = QRational> {
    cone: ConeSpec,
    spec: Arc<RingSpec>,
    terms: BTreeMap<CurveClass, C>,
}

impl<C: NovikovCoeff> NovikovSeries<C> {
    pub fn zero(cone: &ConeSpec, spec: &Arc<RingSpec>) -> Self {
        NovikovSeries {
            cone: cone.clone(),
            spec: spec.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(cone: &ConeSpec, spec: &Arc<RingSpec>) -> Self {
        let mut s = Self::zero(cone, spec);
        s.insert(CurveClass::zero(cone.rank()), C::one(spec));
        s
    }

    pub fn cone(&self) -> &ConeSpec {
        &self.cone
    }

    pub fn spec(&self) -> &Arc<RingSpec> {
        &self.spec
    }

    pub fn terms(&self) -> &BTreeMap<CurveClass, C> {
        &self.terms
    }

    pub fn get(&self, b: &CurveClass) -> Option<&C> {
        self.terms.get(b)
    }

    /// Add `c·Q^β`; classes beyond the bound are dropped.
    pub fn insert(&mut self, b: CurveClass, c: C) {
        assert_eq!(b.0.len(), self.cone.rank(), "class rank mismatch");
        if self.cone.degree(&b) > self.cone.bound || c.is_zero() {
            return;
        }
        let merged = match self.terms.remove(&b) {
            Some(old) => old.add(&c),
            None => c,
        };
        if !merged.is_zero() {
            self.terms.insert(b, merged);
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        if self.cone != other.cone {
            return Err(Error::ConeMismatch);
        }
        let mut out = self.clone();
        for (b, c) in &other.terms {
            out.insert(b.clone(), c.clone());
        }
        Ok(out)
    }

    /// Graded convolution, truncated at the cone bound.
    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        if self.cone != other.cone {
            return Err(Error::ConeMismatch);
        }
        let mut out = Self::zero(&self.cone, &self.spec);
        for (ba, ca) in &self.terms {
            for (bb, cb) in &other.terms {
                let b = ba.checked_add(bb);
                if self.cone.degree(&b) <= self.cone.bound {
                    out.insert(b, ca.mul(cb));
                }
            }
        }
        Ok(out)
    }

    /// Coefficientwise equality under the coefficient type's notion.
    pub fn same(&self, other: &Self) -> bool {
        if self.cone != other.cone {
            return false;
        }
        let keys: BTreeSet<&CurveClass> = self.terms.keys().chain(other.terms.keys()).collect();
        keys.into_iter().all(|k| match (self.terms.get(k), other.terms.get(k)) {
            (Some(a), Some(b)) => a.same(b),
            (Some(a), None) | (None, Some(a)) => a.is_zero(),
            (None, None) => true,
        })
    }

    pub fn map<D: NovikovCoeff, F: FnMut(&CurveClass, &C) -> D>(&self, mut f: F) -> NovikovSeries<D> {
        let mut out = NovikovSeries::<D>::zero(&self.cone, &self.spec);
        for (b, c) in &self.terms {
            out.insert(b.clone(), f(b, c));
        }
        out
    }
}
