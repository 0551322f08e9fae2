//! Correlators as free symbols and the wall-crossing transforms acting on
//! formal combinations of them.

use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::novikov::{rational_str, ConeSpec, CurveClass, NovikovSeries};
use crate::qfun::QLaurent;
use crate::{Error, Result};

/// One insertion of a correlator: a named input or the series `μ_γ(L)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Insertion {
    Input(String),
    Mu(CurveClass),
}

impl fmt::Display for Insertion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Insertion::Input(s) => write!(f, "{s}"),
            Insertion::Mu(c) => write!(f, "mu{c}"),
        }
    }
}

/// `⟨insertions⟩_{g, n, β}` with the insertions kept as a sorted multiset;
/// repeated insertions form one symmetrized group.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Symbol {
    pub genus: u32,
    pub class: CurveClass,
    pub insertions: Vec<Insertion>,
}

impl Symbol {
    pub fn new(genus: u32, class: CurveClass, mut insertions: Vec<Insertion>) -> Self {
        insertions.sort();
        Symbol {
            genus,
            class,
            insertions,
        }
    }

    pub fn n(&self) -> usize {
        self.insertions.len()
    }

    /// Number of copies of the input `var`.
    pub fn count_input(&self, var: &str) -> usize {
        self.insertions
            .iter()
            .filter(|x| matches!(x, Insertion::Input(s) if s == var))
            .count()
    }

    /// The class weighting this symbol in a potential: its own class plus
    /// the classes of its `μ` insertions.
    pub fn total_class(&self) -> CurveClass {
        self.insertions.iter().fold(self.class.clone(), |acc, x| match x {
            Insertion::Mu(c) => acc.checked_add(c),
            Insertion::Input(_) => acc,
        })
    }

    fn with_extra(&self, class: CurveClass, extra: &[Insertion]) -> Symbol {
        let mut ins = self.insertions.clone();
        ins.extend_from_slice(extra);
        Symbol::new(self.genus, class, ins)
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ins: Vec<String> = self.insertions.iter().map(|x| x.to_string()).collect();
        write!(f, "<{}>_{{g={},n={},b={}}}", ins.join(","), self.genus, self.n(), self.class)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct TermRepr {
    symbol: Symbol,
    #[serde(with = "rational_str")]
    coeff: BigRational,
}

/// Finite ℚ-linear combination of [`Symbol`]s, truncated at the cone's
/// degree bound (applied to [`Symbol::total_class`]).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "SeriesRepr", try_from = "SeriesRepr")]
pub struct CorrelatorSeries {
    cone: ConeSpec,
    terms: BTreeMap<Symbol, BigRational>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct SeriesRepr {
    cone: ConeSpec,
    terms: Vec<TermRepr>,
}

impl From<CorrelatorSeries> for SeriesRepr {
    fn from(s: CorrelatorSeries) -> Self {
        SeriesRepr {
            cone: s.cone,
            terms: s
                .terms
                .into_iter()
                .map(|(symbol, coeff)| TermRepr { symbol, coeff })
                .collect(),
        }
    }
}

impl TryFrom<SeriesRepr> for CorrelatorSeries {
    type Error = Error;
    fn try_from(r: SeriesRepr) -> Result<Self> {
        r.cone.validate()?;
        let mut out = CorrelatorSeries::zero(&r.cone);
        for t in r.terms {
            if t.symbol.class.0.len() != r.cone.rank() {
                return Err(Error::InvalidArgument(format!("class rank mismatch in {}", t.symbol)));
            }
            out.add_term(Symbol::new(t.symbol.genus, t.symbol.class, t.symbol.insertions), &t.coeff);
        }
        Ok(out)
    }
}

impl CorrelatorSeries {
    pub fn zero(cone: &ConeSpec) -> Self {
        CorrelatorSeries {
            cone: cone.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn cone(&self) -> &ConeSpec {
        &self.cone
    }

    pub fn terms(&self) -> &BTreeMap<Symbol, BigRational> {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, s: Symbol, c: &BigRational) {
        if c.is_zero() || self.cone.degree(&s.total_class()) > self.cone.bound {
            return;
        }
        let entry = self.terms.entry(s.clone()).or_insert_with(BigRational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&s);
        }
    }

    pub fn add(&self, other: &CorrelatorSeries) -> CorrelatorSeries {
        let mut out = self.clone();
        for (s, c) in &other.terms {
            out.add_term(s.clone(), c);
        }
        out
    }

    pub fn scale(&self, c: &BigRational) -> CorrelatorSeries {
        let mut out = CorrelatorSeries::zero(&self.cone);
        for (s, x) in &self.terms {
            out.add_term(s.clone(), &(x * c));
        }
        out
    }

    /// `self − other`.
    pub fn diff(&self, other: &CorrelatorSeries) -> CorrelatorSeries {
        self.add(&other.scale(&-BigRational::one()))
    }
}

impl fmt::Display for CorrelatorSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(s, c)| format!("{}*{s}", crate::ring::fmt_rational(c)))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Classes carrying a nonzero `μ`, optionally restricted to one degree.
fn mu_classes(mu: &NovikovSeries<QLaurent>, degree: Option<&BigRational>) -> Vec<CurveClass> {
    mu.terms()
        .iter()
        .filter(|(b, c)| !b.is_zero() && !c.is_zero() && degree.is_none_or(|d| &mu.cone().degree(b) == d))
        .map(|(b, _)| b.clone())
        .collect()
}

/// `2g − 2 + n + deg(β)/d0 > 0`.
fn stable_at(cone: &ConeSpec, s: &Symbol, d0: &BigRational) -> bool {
    let base = BigRational::from_integer((2 * s.genus as i64 - 2 + s.n() as i64).into());
    (base + cone.degree(&s.class) / d0).is_positive()
}

/// Crossing the wall of degree `d0`: every symbol `⟨…⟩_{g,β}` on the side
/// of smaller `ε` becomes `Σ_k Σ ⟨…, μ_{β_1}, …, μ_{β_k}⟩_{g,β′}` over the
/// unordered decompositions `β = β′ + Σβ_i`, `deg β_i = d0`, with
/// coefficient `1` per orbit (the symmetrized group absorbs the
/// stabilizer). Symbols with `2g − 2 + n + deg(β)/d0 ≤ 0`, among them
/// `(0, 1, d0)`, are passed through unchanged.
pub fn single_wall_transform(
    f: &CorrelatorSeries,
    mu: &NovikovSeries<QLaurent>,
    d0: &BigRational,
) -> Result<CorrelatorSeries> {
    if !d0.is_positive() {
        return Err(Error::InvalidArgument("wall degree must be positive".into()));
    }
    if mu.cone() != f.cone() {
        return Err(Error::ConeMismatch);
    }
    let live = mu_classes(mu, Some(d0));
    let mut out = CorrelatorSeries::zero(f.cone());
    for (s, c) in f.terms() {
        out.add_term(s.clone(), c);
        if live.is_empty() || !stable_at(f.cone(), s, d0) {
            continue;
        }
        for (rest, tail) in f.cone().unordered_decompositions(&s.class, d0) {
            if tail.iter().any(|t| !live.contains(t)) {
                continue;
            }
            let extra: Vec<Insertion> = tail.into_iter().map(Insertion::Mu).collect();
            out.add_term(s.with_extra(rest, &extra), c);
        }
    }
    Ok(out)
}

/// Every multiset of size `k` over `0..n`, as multiplicity vectors.
fn multiplicity_vectors(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(i: usize, n: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if i + 1 == n {
            cur.push(left);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for m in 0..=left {
            cur.push(m);
            rec(i + 1, n, left - m, cur, out);
            cur.pop();
        }
    }
    if n == 0 {
        return if k == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// `𝐭 ↦ 𝐭 + Σ_γ μ_γ Q^γ` in every symbol, for the input named `var`. By the
/// multinomial formula the `n` copies of `var` split as `i` copies of `var`
/// and a multiset of `μ`'s of size `n − i`, each with coefficient `1`.
pub fn potential_transform(f: &CorrelatorSeries, mu: &NovikovSeries<QLaurent>, var: &str) -> Result<CorrelatorSeries> {
    if mu.cone() != f.cone() {
        return Err(Error::ConeMismatch);
    }
    let live = mu_classes(mu, None);
    let mut out = CorrelatorSeries::zero(f.cone());
    for (s, c) in f.terms() {
        let n = s.count_input(var);
        let kept: Vec<Insertion> = s
            .insertions
            .iter()
            .filter(|x| !matches!(x, Insertion::Input(v) if v == var))
            .cloned()
            .collect();
        for j in 0..=n {
            for mults in multiplicity_vectors(live.len(), j) {
                let mut ins = kept.clone();
                ins.extend(std::iter::repeat_n(Insertion::Input(var.to_string()), n - j));
                for (cls, m) in live.iter().zip(&mults) {
                    ins.extend(std::iter::repeat_n(Insertion::Mu(cls.clone()), *m));
                }
                out.add_term(Symbol::new(s.genus, s.class.clone(), ins), c);
            }
        }
    }
    Ok(out)
}

/// Both routes from the `ε` side to the `∞` side.
#[derive(Clone, Debug)]
pub struct TelescopeReport {
    /// Single-wall transforms over every wall `1/d0 ≥ ε`, nearest first.
    pub iterated: CorrelatorSeries,
    /// One substitution of `μ^{≥ε}`, read off coefficientwise.
    pub substituted: CorrelatorSeries,
    pub equal: bool,
}

/// Walls crossed going from `ε` to `∞`: attainable degrees `d0 ≤ 1/ε`,
/// largest first.
pub fn walls_between(cone: &ConeSpec, eps: &BigRational) -> Vec<BigRational> {
    let mut ds = cone.attainable_degrees(&eps.recip());
    ds.reverse();
    ds
}

/// Rewrite a combination of `ε`-side symbols in `∞`-side symbols in two
/// ways. `F^ε(𝐭) = F^∞(𝐭 + μ^{≥ε})` says the `Q^β 𝐭^n` coefficient on the
/// left is the same coefficient on the right: the substitution route
/// expands `⟨𝐭^{n+j}, …⟩_{g,β′}` for all `β′ ≤ β`, `j ≥ 0` and keeps the
/// terms with `n` copies of `𝐭` and total class `β`. Inputs must have
/// genus `≥ 1`.
pub fn telescope(f_eps: &CorrelatorSeries, mu: &NovikovSeries<QLaurent>, eps: &BigRational, var: &str) -> Result<TelescopeReport> {
    if !eps.is_positive() {
        return Err(Error::InvalidArgument("ε must be positive".into()));
    }
    let cone = f_eps.cone();
    if let Some(s) = f_eps.terms().keys().find(|s| s.genus == 0) {
        return Err(Error::InvalidArgument(format!("telescoping needs genus ≥ 1, got {s}")));
    }
    let mut restricted = NovikovSeries::<QLaurent>::zero(mu.cone(), mu.spec());
    for (b, c) in mu.terms() {
        if !b.is_zero() && cone.degree(b) <= eps.recip() {
            restricted.insert(b.clone(), c.clone());
        }
    }
    let mut iterated = f_eps.clone();
    for d0 in walls_between(cone, eps) {
        iterated = single_wall_transform(&iterated, &restricted, &d0)?;
    }
    let live = mu_classes(&restricted, None);
    let min_deg = live.iter().map(|b| cone.degree(b)).min();
    let mut substituted = CorrelatorSeries::zero(cone);
    for (s, c) in f_eps.terms() {
        let n = s.count_input(var);
        let beta = s.total_class();
        let dbeta = cone.degree(&beta);
        for bp in cone.classes_up_to(&dbeta) {
            let Some(gap) = beta.checked_sub(&bp) else { continue };
            let jmax = match &min_deg {
                Some(d) if !gap.is_zero() => (cone.degree(&gap) / d).floor().to_integer().to_usize().unwrap_or(0),
                _ => 0,
            };
            for j in 0..=jmax {
                let mut ins: Vec<Insertion> = s
                    .insertions
                    .iter()
                    .filter(|x| !matches!(x, Insertion::Input(v) if v == var))
                    .cloned()
                    .collect();
                ins.extend(std::iter::repeat_n(Insertion::Input(var.to_string()), n + j));
                let mut single = CorrelatorSeries::zero(cone);
                single.add_term(Symbol::new(s.genus, bp.clone(), ins), &BigRational::one());
                for (t, x) in potential_transform(&single, &restricted, var)?.terms() {
                    if t.count_input(var) == n && t.total_class() == beta {
                        substituted.add_term(t.clone(), &(x * c));
                    }
                }
            }
        }
    }
    let equal = iterated == substituted;
    Ok(TelescopeReport {
        iterated,
        substituted,
        equal,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{RingElem, RingSpec};
    use std::sync::Arc;

    fn setup() -> (ConeSpec, Arc<RingSpec>) {
        (ConeSpec::integral(&[1], 4).unwrap(), RingSpec::rationals())
    }

    fn t(n: usize) -> Vec<Insertion> {
        vec![Insertion::Input("t".into()); n]
    }

    fn mu_series(cone: &ConeSpec, spec: &Arc<RingSpec>, classes: &[u32]) -> NovikovSeries<QLaurent> {
        let mut mu = NovikovSeries::<QLaurent>::zero(cone, spec);
        for d in classes {
            mu.insert(CurveClass(vec![*d]), QLaurent::constant(RingElem::from_int(spec, 1)));
        }
        mu
    }

    fn one_symbol(cone: &ConeSpec, g: u32, d: u32, n: usize) -> CorrelatorSeries {
        let mut f = CorrelatorSeries::zero(cone);
        f.add_term(Symbol::new(g, CurveClass(vec![d]), t(n)), &BigRational::one());
        f
    }

    #[test]
    fn zero_mu_is_identity() {
        let (cone, spec) = setup();
        let f = one_symbol(&cone, 1, 2, 1);
        let mu = NovikovSeries::<QLaurent>::zero(&cone, &spec);
        let one = BigRational::one();
        assert_eq!(single_wall_transform(&f, &mu, &one).unwrap(), f);
        assert_eq!(potential_transform(&f, &mu, "t").unwrap(), f);
    }

    #[test]
    fn one_decomposition_appends_one_mu() {
        let (cone, spec) = setup();
        let f = one_symbol(&cone, 1, 1, 1);
        let mu = mu_series(&cone, &spec, &[1]);
        let out = single_wall_transform(&f, &mu, &BigRational::one()).unwrap();
        let extra = Symbol::new(1, CurveClass(vec![0]), vec![Insertion::Input("t".into()), Insertion::Mu(CurveClass(vec![1]))]);
        assert_eq!(out.len(), 2);
        assert_eq!(out.terms().get(&extra), Some(&BigRational::one()));
    }

    #[test]
    fn double_tail_is_one_orbit() {
        let (cone, spec) = setup();
        let f = one_symbol(&cone, 1, 2, 0);
        let mu = mu_series(&cone, &spec, &[1]);
        let out = single_wall_transform(&f, &mu, &BigRational::one()).unwrap();
        let m1 = Insertion::Mu(CurveClass(vec![1]));
        let double = Symbol::new(1, CurveClass(vec![0]), vec![m1.clone(), m1]);
        assert_eq!(out.terms().get(&double), Some(&BigRational::one()));
        assert_eq!(out.len(), 3);
    }

    #[test]
    fn degenerate_genus_zero_symbol_passes_through() {
        let (cone, spec) = setup();
        let f = one_symbol(&cone, 0, 1, 1);
        let mu = mu_series(&cone, &spec, &[1]);
        assert_eq!(single_wall_transform(&f, &mu, &BigRational::one()).unwrap(), f);
    }

    #[test]
    fn substitution_composes() {
        let (cone, spec) = setup();
        let f = one_symbol(&cone, 1, 1, 3);
        let both = mu_series(&cone, &spec, &[1, 2]);
        let a = mu_series(&cone, &spec, &[2]);
        let b = mu_series(&cone, &spec, &[1]);
        let stepwise = potential_transform(&potential_transform(&f, &a, "t").unwrap(), &b, "t").unwrap();
        assert_eq!(stepwise, potential_transform(&f, &both, "t").unwrap());
    }

    #[test]
    fn telescoping_one_symbol() {
        let (cone, spec) = setup();
        let mut f = one_symbol(&cone, 1, 3, 1);
        f.add_term(Symbol::new(2, CurveClass(vec![2]), t(2)), &BigRational::from_integer(3.into()));
        let mu = mu_series(&cone, &spec, &[1, 2, 3]);
        let eps = BigRational::new(1.into(), 3.into());
        let rep = telescope(&f, &mu, &eps, "t").unwrap();
        assert!(rep.equal, "{}\nvs\n{}", rep.iterated, rep.substituted);
        assert!(rep.iterated.len() > f.len());
    }

    #[test]
    fn serde_round_trip() {
        let (cone, _) = setup();
        let f = one_symbol(&cone, 1, 2, 2);
        let text = serde_json::to_string(&f).unwrap();
        let back: CorrelatorSeries = serde_json::from_str(&text).unwrap();
        assert_eq!(back, f);
    }
}
