//! Graded λ-ring elements for permutation-equivariant brackets, realized
//! through complete homogeneous symmetric powers.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};
use std::sync::Arc;

use smallvec::SmallVec;

use crate::ring::{ratio, RingElem, RingSpec};
use crate::{Error, Result};

/// Grading of a slot monomial: powers of `q`, of the bookkeeping variable
/// `w`, of the cotangent variable `L`, and a Novikov class.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Grade {
    pub q: i64,
    pub w: i64,
    pub l: i64,
    pub nov: SmallVec<[u32; 4]>,
}

impl Grade {
    pub fn new(q: i64, w: i64, l: i64, nov: &[u32]) -> Self {
        Grade {
            q,
            w,
            l,
            nov: SmallVec::from_slice(nov),
        }
    }

    fn add(&self, other: &Grade) -> Grade {
        let n = self.nov.len().max(other.nov.len());
        let nov = (0..n)
            .map(|i| self.nov.get(i).copied().unwrap_or(0) + other.nov.get(i).copied().unwrap_or(0))
            .collect();
        Grade {
            q: self.q + other.q,
            w: self.w + other.w,
            l: self.l + other.l,
            nov,
        }
    }

    fn scaled(&self, r: i64) -> Grade {
        let ar = r.unsigned_abs() as u32;
        Grade {
            q: self.q * r,
            w: self.w * r,
            l: self.l * r,
            nov: self.nov.iter().map(|x| x * ar).collect(),
        }
    }

    fn nov_trimmed(&self) -> SmallVec<[u32; 4]> {
        let mut v = self.nov.clone();
        while v.last() == Some(&0) {
            v.pop();
        }
        v
    }
}

/// Element of `A[q^±, w^±, L^±][[Q]]` with finite support, where `A` is a
/// coefficient ring with λ-structure.
#[derive(Clone)]
pub struct SlotElem {
    spec: Arc<RingSpec>,
    terms: BTreeMap<Grade, RingElem>,
}

impl SlotElem {
    pub fn zero(spec: &Arc<RingSpec>) -> Self {
        SlotElem {
            spec: spec.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(spec: &Arc<RingSpec>) -> Self {
        Self::monomial(Grade::default(), RingElem::one(spec))
    }

    pub fn monomial(g: Grade, c: RingElem) -> Self {
        let mut out = SlotElem::zero(c.spec());
        out.add_term(g, &c);
        out
    }

    pub fn constant(c: RingElem) -> Self {
        Self::monomial(Grade::default(), c)
    }

    pub fn spec(&self) -> &Arc<RingSpec> {
        &self.spec
    }

    pub fn terms(&self) -> &BTreeMap<Grade, RingElem> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, mut g: Grade, c: &RingElem) {
        if c.is_zero() {
            return;
        }
        assert!(c.spec().same_as(&self.spec), "ring mismatch");
        g.nov = g.nov_trimmed();
        match self.terms.entry(g) {
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

    pub fn scale(&self, c: &RingElem) -> SlotElem {
        let mut out = SlotElem::zero(&self.spec);
        for (g, x) in &self.terms {
            out.add_term(g.clone(), &(x * c));
        }
        out
    }

    pub fn scale_rational(&self, c: &num_rational::BigRational) -> SlotElem {
        let mut out = SlotElem::zero(&self.spec);
        for (g, x) in &self.terms {
            out.add_term(g.clone(), &x.scale(c));
        }
        out
    }

    /// Adams operation: grades are multiplied by `r`, coefficients mapped
    /// by `Ψ^r` of the coefficient ring.
    pub fn adams(&self, r: i64) -> SlotElem {
        let mut out = SlotElem::zero(&self.spec);
        for (g, c) in &self.terms {
            out.add_term(g.scaled(r), &c.adams(r));
        }
        out
    }

    /// `[h_0, …, h_k]` by the Newton recurrence.
    pub fn h_syms(&self, k: u32) -> Vec<SlotElem> {
        let mut h = vec![SlotElem::one(&self.spec)];
        let psi: Vec<SlotElem> = (1..=k as i64).map(|r| self.adams(r)).collect();
        for n in 1..=k as usize {
            let mut acc = SlotElem::zero(&self.spec);
            for r in 1..=n {
                acc += &(&psi[r - 1] * &h[n - r]);
            }
            h.push(acc.scale_rational(&ratio(1, n as i64)));
        }
        h
    }

    /// Complete homogeneous symmetric power `h_k`.
    pub fn h_sym(&self, k: u32) -> SlotElem {
        self.h_syms(k).pop().expect("nonempty")
    }

    /// The part with the given `q`- and `w`-exponents, with those grades
    /// reset to `0` (the `L` and Novikov grades are kept).
    pub fn extract_grade(&self, q: i64, w: i64) -> SlotElem {
        let mut out = SlotElem::zero(&self.spec);
        for (g, c) in &self.terms {
            if g.q == q && g.w == w {
                out.add_term(Grade { q: 0, w: 0, ..g.clone() }, c);
            }
        }
        out
    }

    /// Terms with `q`-exponent in `lo..=hi`, summed with `q` set to `1`.
    pub fn q_window_sum(&self, lo: i64, hi: i64) -> SlotElem {
        let mut out = SlotElem::zero(&self.spec);
        for (g, c) in &self.terms {
            if g.q >= lo && g.q <= hi {
                out.add_term(Grade { q: 0, ..g.clone() }, c);
            }
        }
        out
    }

    /// Terms with the given Novikov class.
    pub fn nov_part(&self, nov: &[u32]) -> SlotElem {
        let mut key: SmallVec<[u32; 4]> = SmallVec::from_slice(nov);
        while key.last() == Some(&0) {
            key.pop();
        }
        let mut out = SlotElem::zero(&self.spec);
        for (g, c) in &self.terms {
            if g.nov == key {
                out.add_term(g.clone(), c);
            }
        }
        out
    }

    /// Apply a map to each term.
    pub fn map_terms<F: FnMut(&Grade, &RingElem) -> Option<(Grade, RingElem)>>(&self, mut f: F) -> SlotElem {
        let mut out = SlotElem::zero(&self.spec);
        for (g, c) in &self.terms {
            if let Some((g2, c2)) = f(g, c) {
                out.add_term(g2, &c2);
            }
        }
        out
    }

    /// `Some((grade, coefficient))` if the element has a single grade.
    pub fn as_single_grade(&self) -> Option<(&Grade, &RingElem)> {
        (self.terms.len() == 1).then(|| self.terms.iter().next().unwrap())
    }
}

impl PartialEq for SlotElem {
    fn eq(&self, other: &Self) -> bool {
        self.spec.same_as(&other.spec) && self.terms == other.terms
    }
}

impl Eq for SlotElem {}

impl AddAssign<&SlotElem> for SlotElem {
    fn add_assign(&mut self, rhs: &SlotElem) {
        for (g, c) in &rhs.terms {
            self.add_term(g.clone(), c);
        }
    }
}

impl Add<&SlotElem> for &SlotElem {
    type Output = SlotElem;
    fn add(self, rhs: &SlotElem) -> SlotElem {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub<&SlotElem> for &SlotElem {
    type Output = SlotElem;
    fn sub(self, rhs: &SlotElem) -> SlotElem {
        let mut out = self.clone();
        out += &-rhs;
        out
    }
}

impl Neg for &SlotElem {
    type Output = SlotElem;
    fn neg(self) -> SlotElem {
        SlotElem {
            spec: self.spec.clone(),
            terms: self.terms.iter().map(|(g, c)| (g.clone(), -c)).collect(),
        }
    }
}

impl Mul<&SlotElem> for &SlotElem {
    type Output = SlotElem;
    fn mul(self, rhs: &SlotElem) -> SlotElem {
        assert!(self.spec.same_as(&rhs.spec), "ring mismatch");
        let mut out = SlotElem::zero(&self.spec);
        for (ga, ca) in &self.terms {
            for (gb, cb) in &rhs.terms {
                out.add_term(ga.add(gb), &(ca * cb));
            }
        }
        out
    }
}

impl fmt::Display for SlotElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(g, c)| {
                let nov: Vec<String> = g.nov.iter().map(|x| x.to_string()).collect();
                format!("({c})*q^{}*w^{}*L^{}*Q^[{}]", g.q, g.w, g.l, nov.join(","))
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Debug for SlotElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SlotElem({self})")
    }
}

/// Linear functional `T` applied to an input series before symmetrizing.
/// It is extended `L`-, `w`- and Novikov-linearly.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Functional {
    Identity,
    /// `Σ_{lo ≤ a ≤ hi} [f]_a`, the coefficients of `q^a` summed.
    Window { lo: i64, hi: i64 },
}

impl Functional {
    pub fn apply(&self, f: &SlotElem) -> SlotElem {
        match self {
            Functional::Identity => f.clone(),
            Functional::Window { lo, hi } => f.q_window_sum(*lo, *hi),
        }
    }
}

/// One factor `h_k(T(f_series))` of a bracket monomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BracketFactor {
    pub series: usize,
    pub functional: Functional,
    pub power: u32,
}

/// `coeff · ∏ h_{k_i}(T_i(f_{s_i}))`.
#[derive(Clone, Debug)]
pub struct BracketTerm {
    pub coeff: SlotElem,
    pub factors: Vec<BracketFactor>,
}

/// Sum of bracket monomials, evaluated on a tuple of input series.
#[derive(Clone, Debug, Default)]
pub struct BracketExpr {
    pub terms: Vec<BracketTerm>,
}

/// A monomial increment `δ·q^l` of one input series.
#[derive(Clone, Debug)]
pub struct Direction {
    pub series: usize,
    pub delta: SlotElem,
}

impl BracketExpr {
    pub fn evaluate(&self, spec: &Arc<RingSpec>, inputs: &[SlotElem]) -> Result<SlotElem> {
        let mut out = SlotElem::zero(spec);
        for t in &self.terms {
            let mut acc = t.coeff.clone();
            for f in &t.factors {
                let x = inputs.get(f.series).ok_or_else(|| {
                    Error::InvalidArgument(format!("bracket refers to missing series {}", f.series))
                })?;
                acc = &acc * &f.functional.apply(x).h_sym(f.power);
            }
            out += &acc;
        }
        Ok(out)
    }

    /// Directional derivative: each factor `h_k(T(f))` of a series being
    /// moved is replaced by `T(δq^l)·h_{k−1}(T(f))`, summed over factors.
    pub fn directional_derivative(&self, dirs: &[Direction]) -> Result<BracketExpr> {
        for d in dirs {
            if d.delta.as_single_grade().is_none() {
                return Err(Error::InvalidArgument(
                    "direction must be a single monomial increment δ·q^l".into(),
                ));
            }
        }
        let mut out = BracketExpr::default();
        for t in &self.terms {
            for (idx, f) in t.factors.iter().enumerate() {
                if f.power == 0 {
                    continue;
                }
                for d in dirs.iter().filter(|d| d.series == f.series) {
                    let mut factors = t.factors.clone();
                    factors[idx].power -= 1;
                    out.terms.push(BracketTerm {
                        coeff: &t.coeff * &f.functional.apply(&d.delta),
                        factors,
                    });
                }
            }
        }
        Ok(out)
    }
}
