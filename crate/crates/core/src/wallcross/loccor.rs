//! The localized residue expression `Loc` and the corrected expression `Cor`
//! of a single wall, realized in the h-model: a bracket
//! `⟨T₁(f)^{⊗k₁}⋯⟩^{S_{k₁}×⋯}` summed over tail classes is `∏ h_{kᵢ}(Tᵢ(F))`
//! with `F = Σ_γ Q^γ f_γ`.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};
use serde_json::{json, Value};

use crate::novikov::{ConeSpec, CurveClass, NovikovSeries};
use crate::perm::{Grade, SlotElem};
use crate::qfun::json::{laurent_from_json, laurent_to_json};
use crate::qfun::{QLaurent, QRational};
use crate::ring::json::{spec_from_json, spec_to_json};
use crate::ring::{RingElem, RingSpec};
use crate::{Error, Result};

const NEG_INF: i64 = i64::MIN / 4;

/// Data of one wall: the classes `γ` of wall degree below `β`, for each a
/// window of the expansion at `q = 0` (`g0`) and in the `∞`-chart (`ginf`)
/// of `f_γ`, the number of tail slots `m` and the substitution exponent `r`.
///
/// The slot series are `(f_γ)_0 = Σ_a g0_a q^{ra} L^a` and
/// `(f_γ)_∞ = Σ_a ginf_a q^{ra} L^{−a}`.
#[derive(Clone, Debug)]
pub struct WallInput {
    pub ring: Arc<RingSpec>,
    pub classes: Vec<CurveClass>,
    pub g0: Vec<QLaurent>,
    pub ginf: Vec<QLaurent>,
    pub m: u32,
    pub r: i64,
}

impl WallInput {
    pub fn new(
        ring: &Arc<RingSpec>,
        classes: Vec<CurveClass>,
        g0: Vec<QLaurent>,
        ginf: Vec<QLaurent>,
        m: u32,
        r: i64,
    ) -> Result<Self> {
        let w = WallInput {
            ring: ring.clone(),
            classes,
            g0,
            ginf,
            m,
            r,
        };
        w.validate()?;
        Ok(w)
    }

    pub fn validate(&self) -> Result<()> {
        if self.r < 1 {
            return Err(Error::InvalidArgument(format!("substitution exponent r = {} must be ≥ 1", self.r)));
        }
        if self.classes.is_empty() {
            return Err(Error::InvalidArgument("wall input needs at least one class".into()));
        }
        if self.g0.len() != self.classes.len() || self.ginf.len() != self.classes.len() {
            return Err(Error::InvalidArgument("one g0 and one ginf window per class".into()));
        }
        let rank = self.rank();
        for (i, c) in self.classes.iter().enumerate() {
            if c.0.len() != rank || c.is_zero() {
                return Err(Error::InvalidArgument(format!("bad class {c}")));
            }
            if self.classes[..i].contains(c) {
                return Err(Error::InvalidArgument(format!("class {c} listed twice")));
            }
        }
        for p in self.g0.iter().chain(&self.ginf) {
            if !p.spec().same_as(&self.ring) {
                return Err(Error::SpecMismatch);
            }
        }
        Ok(())
    }

    pub fn rank(&self) -> usize {
        self.classes[0].0.len()
    }

    /// Wall data read off an I-function: `D_β` are the classes `γ ≤ β` of
    /// degree `d0`, `f_γ = (1 − q)I_γ`, expanded at `0` and `∞` up to
    /// `q^window`.
    pub fn from_ifun(
        i: &NovikovSeries,
        beta: &CurveClass,
        d0: &BigRational,
        r: i64,
        window: i64,
    ) -> Result<Self> {
        let cone: &ConeSpec = i.cone();
        if !d0.is_positive() {
            return Err(Error::InvalidArgument("wall degree must be positive".into()));
        }
        let classes: Vec<CurveClass> = cone
            .classes_up_to(d0)
            .into_iter()
            .filter(|g| !g.is_zero() && &cone.degree(g) == d0 && beta.checked_sub(g).is_some())
            .collect();
        if classes.is_empty() {
            return Err(Error::InvalidArgument(format!("no class of degree {d0} below {beta}")));
        }
        let m = (cone.degree(beta) / d0).floor().to_integer().to_u32().unwrap_or(0);
        let omq = crate::ifun::one_minus_q(i.spec());
        let mut g0 = Vec::new();
        let mut ginf = Vec::new();
        for g in &classes {
            let f = i
                .get(g)
                .cloned()
                .unwrap_or_else(|| QRational::zero(i.spec()))
                .mul_laurent(&omq);
            g0.push(f.expand_at_zero(window));
            ginf.push(f.expand_at_infinity(window));
        }
        WallInput::new(i.spec(), classes, g0, ginf, m, r)
    }

    fn nov(&self, idx: usize) -> &[u32] {
        &self.classes[idx].0
    }

    /// `Σ_γ Q^γ (f_γ)_0`.
    pub fn slot_zero(&self) -> SlotElem {
        let mut out = SlotElem::zero(&self.ring);
        for (i, p) in self.g0.iter().enumerate() {
            for (a, c) in p.coeffs() {
                out.add_term(Grade::new(self.r * a, 0, *a, self.nov(i)), c);
            }
        }
        out
    }

    /// `Σ_γ Q^γ (f_γ)_∞`.
    pub fn slot_infinity(&self) -> SlotElem {
        let mut out = SlotElem::zero(&self.ring);
        for (i, p) in self.ginf.iter().enumerate() {
            for (a, c) in p.coeffs() {
                out.add_term(Grade::new(self.r * a, 0, -a, self.nov(i)), c);
            }
        }
        out
    }

    /// `Σ_γ Q^γ Lau(f_γ)`, read directly off the windows.
    pub fn lau_slot(&self) -> SlotElem {
        let mut out = SlotElem::zero(&self.ring);
        for i in 0..self.classes.len() {
            for (a, c) in self.g0[i].coeffs() {
                if self.r * a < 0 {
                    out.add_term(Grade::new(0, 0, *a, self.nov(i)), c);
                }
            }
            for (a, c) in self.ginf[i].coeffs() {
                if self.r * a <= 0 {
                    out.add_term(Grade::new(0, 0, -a, self.nov(i)), c);
                }
            }
        }
        out
    }

    /// `Lau(f_γ)` as a Laurent polynomial in `L` (the exponent of `q` stands
    /// for the exponent of `L`).
    pub fn lau_of(&self, idx: usize) -> QLaurent {
        let mut out = QLaurent::zero(&self.ring);
        for (a, c) in self.g0[idx].coeffs() {
            if *a < 0 {
                out.add_term(*a, c);
            }
        }
        for (a, c) in self.ginf[idx].coeffs() {
            if *a <= 0 {
                out.add_term(-a, c);
            }
        }
        out
    }

    pub fn to_json(&self) -> Value {
        json!({
            "ring": spec_to_json(&self.ring),
            "classes": self.classes.iter().map(|c| c.0.clone()).collect::<Vec<_>>(),
            "g0": self.g0.iter().map(laurent_to_json).collect::<Vec<_>>(),
            "ginf": self.ginf.iter().map(laurent_to_json).collect::<Vec<_>>(),
            "m": self.m,
            "r": self.r,
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let field = |k: &str| v.get(k).ok_or_else(|| Error::Parse(format!("wall input lacks {k:?}")));
        let ring = spec_from_json(field("ring")?)?;
        let classes: Vec<CurveClass> = serde_json::from_value(field("classes")?.clone())
            .map_err(|e| Error::Parse(e.to_string()))?;
        let list = |k: &str| -> Result<Vec<QLaurent>> {
            field(k)?
                .as_array()
                .ok_or_else(|| Error::Parse(format!("{k:?} must be a list")))?
                .iter()
                .map(|x| laurent_from_json(&ring, x))
                .collect()
        };
        let g0 = list("g0")?;
        let ginf = list("ginf")?;
        let m = field("m")?.as_u64().ok_or_else(|| Error::Parse("m must be an integer".into()))? as u32;
        let r = v.get("r").and_then(Value::as_i64).unwrap_or(1);
        WallInput::new(&ring, classes, g0, ginf, m, r)
    }
}

/// Key of a ledger entry: number of tail slots, total tail class and the
/// exponent of the shared cotangent variable `L`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Shape {
    pub k: u32,
    pub tail: CurveClass,
    pub l: i64,
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "k={} Q^{} L^{}", self.k, self.tail, self.l)
    }
}

/// Bracket values indexed by [`Shape`]; zero entries are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Ledger {
    entries: BTreeMap<Shape, RingElem>,
}

impl Ledger {
    pub fn entries(&self) -> &BTreeMap<Shape, RingElem> {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, s: &Shape) -> Option<&RingElem> {
        self.entries.get(s)
    }

    pub fn add_entry(&mut self, s: Shape, c: &RingElem) {
        if c.is_zero() {
            return;
        }
        match self.entries.entry(s) {
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

    /// Add the slot-free element `x` (only `L` and Novikov grades) under
    /// `k` tail slots.
    pub fn add_slot(&mut self, k: u32, x: &SlotElem, rank: usize) {
        for (g, c) in x.terms() {
            debug_assert!(g.q == 0 && g.w == 0, "ledger values carry no q or w grade");
            let mut tail = vec![0; rank];
            for (i, v) in g.nov.iter().enumerate() {
                tail[i] = *v;
            }
            self.add_entry(
                Shape {
                    k,
                    tail: CurveClass(tail),
                    l: g.l,
                },
                c,
            );
        }
    }

    pub fn add(&self, other: &Ledger) -> Ledger {
        let mut out = self.clone();
        for (s, c) in &other.entries {
            out.add_entry(s.clone(), c);
        }
        out
    }

    /// `self − other`, the nonzero differences only.
    pub fn diff(&self, other: &Ledger) -> Ledger {
        let mut out = self.clone();
        for (s, c) in &other.entries {
            out.add_entry(s.clone(), &-c);
        }
        out
    }

    pub fn map_values<F: FnMut(&RingElem) -> RingElem>(&self, mut f: F) -> Ledger {
        let mut out = Ledger::default();
        for (s, c) in &self.entries {
            out.add_entry(s.clone(), &f(c));
        }
        out
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            self.entries
                .iter()
                .map(|(s, c)| json!({"k": s.k, "tail": s.tail.0, "L": s.l, "value": c.to_string()}))
                .collect(),
        )
    }
}

impl fmt::Display for Ledger {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.entries.is_empty() {
            return write!(f, "(empty)");
        }
        for (s, c) in &self.entries {
            writeln!(f, "{s}: {c}")?;
        }
        Ok(())
    }
}

/// The four slot series of the h-model: `F0`, `F∞`,
/// `G = Σ_{j≥0} w^j(−Res(q^{−j}f))` and `H = Σ_{j>0} w^j Res(q^j f)`.
struct Slots {
    f0: SlotElem,
    finf: SlotElem,
    g: SlotElem,
    h: SlotElem,
}

impl Slots {
    fn new(w: &WallInput) -> Self {
        let f0 = w.slot_zero();
        let finf = w.slot_infinity();
        Slots {
            g: residue_generator(&f0, &finf, false),
            h: residue_generator(&f0, &finf, true),
            f0,
            finf,
        }
    }
}

/// `Res(q^j f) = [(f)_0]_{−j} − [(f)_∞]_{j}`, resummed in `w`. With
/// `positive = false` this is `Σ_{j≥0} w^j(−Res(q^{−j} f))`, otherwise
/// `Σ_{j>0} w^j Res(q^j f)`.
fn residue_generator(f0: &SlotElem, finf: &SlotElem, positive: bool) -> SlotElem {
    let mut out = SlotElem::zero(f0.spec());
    for (g, c) in f0.terms() {
        let j = if positive { -g.q } else { g.q };
        if (positive && j > 0) || (!positive && j >= 0) {
            let c = if positive { c.clone() } else { -c };
            out.add_term(Grade { q: 0, w: j, ..g.clone() }, &c);
        }
    }
    for (g, c) in finf.terms() {
        let j = if positive { g.q } else { -g.q };
        if (positive && j > 0) || (!positive && j >= 0) {
            let c = if positive { -c } else { c.clone() };
            out.add_term(Grade { q: 0, w: j, ..g.clone() }, &c);
        }
    }
    out
}

/// `Σ_{t≥0} [a]_{q ≤ −t−1} · [b]_{w^{t+shift}}`: the double sum over
/// `t ≥ 0`, `s ≥ 1` of `[a]_{−t−s}[b]_{t+shift}`.
fn mixed_sum(a: &SlotElem, b: &SlotElem, shift: i64) -> SlotElem {
    let mut out = SlotElem::zero(a.spec());
    let ws: std::collections::BTreeSet<i64> = b.terms().keys().map(|g| g.w).collect();
    for wv in ws {
        let t = wv - shift;
        if t < 0 {
            continue;
        }
        let left = a.q_window_sum(NEG_INF, -t - 1);
        if left.is_zero() {
            continue;
        }
        out += &(&left * &b.extract_grade(0, wv));
    }
    out
}

/// The four groups of `Loc` for `k` tail slots, each already carrying its
/// minus sign.
fn loc_parts(k: usize, h0: &[SlotElem], hinf: &[SlotElem], hg: &[SlotElem], hh: &[SlotElem]) -> [SlotElem; 4] {
    let spec = h0[0].spec().clone();
    let first = -&h0[k].q_window_sum(NEG_INF, -1);
    let second = -&hinf[k].q_window_sum(NEG_INF, 0);
    let mut third = SlotElem::zero(&spec);
    let mut fourth = SlotElem::zero(&spec);
    for r in 1..k {
        third += &mixed_sum(&h0[k - r], &hg[r], 0);
        fourth += &mixed_sum(&hinf[k - r], &hh[r], 1);
    }
    [first, second, -&third, -&fourth]
}

/// The four groups of `Loc` (zero-chart, ∞-chart, and the two mixed residue
/// sums), each as a ledger over all `k = 1..m`.
pub fn loc_parts_ledgers(w: &WallInput) -> Result<[Ledger; 4]> {
    w.validate()?;
    let s = Slots::new(w);
    let m = w.m;
    let h0 = s.f0.h_syms(m);
    let hinf = s.finf.h_syms(m);
    let hg = s.g.h_syms(m);
    let hh = s.h.h_syms(m);
    let mut out: [Ledger; 4] = Default::default();
    for k in 1..=m as usize {
        for (i, part) in loc_parts(k, &h0, &hinf, &hg, &hh).iter().enumerate() {
            out[i].add_slot(k as u32, part, w.rank());
        }
    }
    Ok(out)
}

/// The localized expression: the sum of the four groups.
pub fn loc_expression(w: &WallInput) -> Result<Ledger> {
    let parts = loc_parts_ledgers(w)?;
    Ok(parts.iter().fold(Ledger::default(), |a, b| a.add(b)))
}

/// The corrected expression `−Σ_k h_k(Σ_γ Q^γ Lau(f_γ))`.
pub fn cor_expression(w: &WallInput) -> Result<Ledger> {
    w.validate()?;
    let hs = w.lau_slot().h_syms(w.m);
    let mut out = Ledger::default();
    for k in 1..=w.m as usize {
        out.add_slot(k as u32, &-&hs[k], w.rank());
    }
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct LocCorReport {
    pub equal: bool,
    pub loc: Ledger,
    pub cor: Ledger,
    /// `Loc − Cor`.
    pub diff: Ledger,
}

pub fn verify_loc_eq_cor(w: &WallInput) -> Result<LocCorReport> {
    let loc = loc_expression(w)?;
    let cor = cor_expression(w)?;
    let diff = loc.diff(&cor);
    Ok(LocCorReport {
        equal: diff.is_zero(),
        loc,
        cor,
        diff,
    })
}

/// Homogeneous pieces of a slot element, one per `(q, w, Novikov)` grade,
/// with `q` and `w` reset to `0`.
fn components(x: &SlotElem) -> Vec<(i64, i64, SlotElem)> {
    let mut map: BTreeMap<(i64, i64, Vec<u32>), SlotElem> = BTreeMap::new();
    for (g, c) in x.terms() {
        map.entry((g.q, g.w, g.nov.to_vec()))
            .or_insert_with(|| SlotElem::zero(x.spec()))
            .add_term(Grade { q: 0, w: 0, ..g.clone() }, c);
    }
    map.into_iter().map(|((q, w, _), v)| (q, w, v)).collect()
}

/// Every multiset of size `k` over `comps`, as `(Σ q, Σ w, ∏ h_{mult}(x))`.
fn multisets(comps: &[(i64, i64, SlotElem)], k: usize) -> Vec<(i64, i64, SlotElem)> {
    fn rec(
        comps: &[(i64, i64, SlotElem)],
        start: usize,
        left: usize,
        acc: (i64, i64, SlotElem),
        out: &mut Vec<(i64, i64, SlotElem)>,
    ) {
        if left == 0 {
            out.push(acc);
            return;
        }
        for i in start..comps.len() {
            let (q, w, x) = &comps[i];
            let hs = x.h_syms(left as u32);
            for mult in 1..=left {
                let next = (
                    acc.0 + q * mult as i64,
                    acc.1 + w * mult as i64,
                    &acc.2 * &hs[mult],
                );
                rec(comps, i + 1, left - mult, next, out);
            }
        }
    }
    let spec = comps.first().map(|c| c.2.spec().clone());
    let mut out = Vec::new();
    if let Some(spec) = spec {
        rec(comps, 0, k, (0, 0, SlotElem::one(&spec)), &mut out);
    } else if k == 0 {
        return Vec::new();
    }
    out
}

/// `Loc` by explicit enumeration: each symmetrized group is expanded as a
/// sum over multisets of homogeneous slot pieces, and the `s`-, `t`- and
/// `j`-sums are taken over the enumerated total degrees. Used as an
/// independent check of the `w`-resummed construction.
pub fn loc_expression_enumerated(w: &WallInput) -> Result<Ledger> {
    w.validate()?;
    let s = Slots::new(w);
    let spec = w.ring.clone();
    let c0 = components(&s.f0);
    let cinf = components(&s.finf);
    let cg = components(&s.g);
    let ch = components(&s.h);
    let sets = |c: &[(i64, i64, SlotElem)], k: usize| -> Vec<(i64, i64, SlotElem)> {
        if k == 0 {
            vec![(0, 0, SlotElem::one(&spec))]
        } else {
            multisets(c, k)
        }
    };
    let mut out = Ledger::default();
    for k in 1..=w.m as usize {
        let mut acc = SlotElem::zero(&spec);
        for (q, _, x) in sets(&c0, k) {
            if q <= -1 {
                acc += &-&x;
            }
        }
        for (q, _, x) in sets(&cinf, k) {
            if q <= 0 {
                acc += &-&x;
            }
        }
        for r in 1..k {
            let left0 = sets(&c0, k - r);
            let leftinf = sets(&cinf, k - r);
            for (_, t, y) in sets(&cg, r) {
                for (q, _, x) in &left0 {
                    if *q < -t {
                        acc += &-&(x * &y);
                    }
                }
            }
            for (_, t1, y) in sets(&ch, r) {
                let t = t1 - 1;
                for (q, _, x) in &leftinf {
                    if *q < -t {
                        acc += &-&(x * &y);
                    }
                }
            }
        }
        out.add_slot(k as u32, &acc, w.rank());
    }
    Ok(out)
}

/// A monomial increment `δ·q^{lr}L^{±l}` of the slot series of class
/// `classes[class]`: `l ≥ 0` in the zero chart, `l > 0` in the `∞`-chart.
#[derive(Clone, Debug)]
pub struct Increment {
    pub class: usize,
    pub l: i64,
    pub delta: RingElem,
}

/// The input with every increment added, scaled by `h`: to `g0` at `q^l`,
/// or to `ginf` when `infinity` is set.
pub fn perturbed(w: &WallInput, incs: &[Increment], h: &RingElem, infinity: bool) -> Result<WallInput> {
    let mut out = w.clone();
    for inc in incs {
        check_increment(w, inc, infinity)?;
        let target = if infinity { &mut out.ginf[inc.class] } else { &mut out.g0[inc.class] };
        target.add_term(inc.l, &(&inc.delta * h));
    }
    Ok(out)
}

fn check_increment(w: &WallInput, inc: &Increment, infinity: bool) -> Result<()> {
    if inc.class >= w.classes.len() {
        return Err(Error::InvalidArgument(format!("no class with index {}", inc.class)));
    }
    if (infinity && inc.l <= 0) || (!infinity && inc.l < 0) {
        return Err(Error::InvalidArgument(format!(
            "increment exponent {} outside the admissible range",
            inc.l
        )));
    }
    Ok(())
}

/// First-order change of `(Loc, Cor)` along the increments, computed with
/// the nilpotent parameter named `h` (which must have order 2 in the ring).
pub fn first_order_change(w: &WallInput, incs: &[Increment], h: &str, infinity: bool) -> Result<(Ledger, Ledger)> {
    let hv = RingElem::gen(&w.ring, h)?;
    if !hv.pow(2).is_zero() || hv.is_zero() {
        return Err(Error::InvalidArgument(format!("{h} must satisfy {h}^2 = 0")));
    }
    let moved = perturbed(w, incs, &hv, infinity)?;
    let strip = |l: Ledger| -> Result<Ledger> {
        let mut out = Ledger::default();
        for (s, c) in l.entries() {
            out.add_entry(s.clone(), &c.coefficient_of(h, 1)?);
        }
        Ok(out)
    };
    let dloc = strip(loc_expression(&moved)?.diff(&loc_expression(w)?))?;
    let dcor = strip(cor_expression(&moved)?.diff(&cor_expression(w)?))?;
    Ok((dloc, dcor))
}

/// The four groups of the directional derivative of `Loc` along zero-chart
/// increments: `δ` against `h_{k−1}(F0)` in the first sum, the `r = 1`
/// residue factor, `δ` inside the mixed sum, and the derivative of a
/// residue factor with `r ≥ 2`. The first two cancel, as do the last two.
pub fn direction_zero_lines(w: &WallInput, incs: &[Increment]) -> Result<[Ledger; 4]> {
    w.validate()?;
    for inc in incs {
        check_increment(w, inc, false)?;
    }
    let spec = w.ring.clone();
    let mut delta = SlotElem::zero(&spec);
    let mut dg = SlotElem::zero(&spec);
    for inc in incs {
        let nov = &w.classes[inc.class].0;
        delta.add_term(Grade::new(inc.l * w.r, 0, inc.l, nov), &inc.delta);
        dg.add_term(Grade::new(0, inc.l * w.r, inc.l, nov), &-&inc.delta);
    }
    let s = Slots::new(w);
    let m = w.m as usize;
    let h0 = s.f0.h_syms(w.m);
    let hg = s.g.h_syms(w.m);
    let mut lines: [Ledger; 4] = Default::default();
    for k in 2..=m {
        let l1 = -&(&delta * &h0[k - 1]).q_window_sum(NEG_INF, -1);
        let l2 = -&mixed_sum(&h0[k - 1], &dg, 0);
        let mut l3 = SlotElem::zero(&spec);
        let mut l4 = SlotElem::zero(&spec);
        for r in 1..k.saturating_sub(1) {
            l3 += &mixed_sum(&(&delta * &h0[k - r - 1]), &hg[r], 0);
        }
        for r in 2..k {
            l4 += &mixed_sum(&h0[k - r], &(&dg * &hg[r - 1]), 0);
        }
        for (i, x) in [l1, l2, -&l3, -&l4].iter().enumerate() {
            lines[i].add_slot(k as u32, x, w.rank());
        }
    }
    Ok(lines)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::parse_elem;

    fn spec() -> Arc<RingSpec> {
        RingSpec::builder().lambda(4, 4).t_var("h", 2).build().unwrap()
    }

    fn lp(s: &Arc<RingSpec>, terms: &[(i64, &str)]) -> QLaurent {
        QLaurent::from_coeffs(s, terms.iter().map(|(e, c)| (*e, parse_elem(s, c).unwrap())))
    }

    fn single(s: &Arc<RingSpec>, g0: QLaurent, ginf: QLaurent, m: u32, r: i64) -> WallInput {
        WallInput::new(s, vec![CurveClass(vec![1])], vec![g0], vec![ginf], m, r).unwrap()
    }

    #[test]
    fn zero_input_gives_empty_ledgers() {
        let s = spec();
        let z = QLaurent::zero(&s);
        let w = single(&s, z.clone(), z, 3, 1);
        assert!(loc_expression(&w).unwrap().is_zero());
        assert!(cor_expression(&w).unwrap().is_zero());
        assert!(verify_loc_eq_cor(&w).unwrap().equal);
    }

    #[test]
    fn one_slot_is_lau() {
        let s = spec();
        let w = single(&s, lp(&s, &[(-2, "3"), (-1, "N1"), (0, "5"), (2, "7")]), lp(&s, &[(-1, "2"), (0, "N2"), (1, "11")]), 1, 1);
        let cor = cor_expression(&w).unwrap();
        let shape = |l| Shape { k: 1, tail: CurveClass(vec![1]), l };
        assert_eq!(cor.get(&shape(-2)), Some(&parse_elem(&s, "-3").unwrap()));
        assert_eq!(cor.get(&shape(-1)), Some(&parse_elem(&s, "-N1").unwrap()));
        assert_eq!(cor.get(&shape(1)), Some(&parse_elem(&s, "-2").unwrap()));
        assert_eq!(cor.get(&shape(0)), Some(&parse_elem(&s, "-N2").unwrap()));
        assert_eq!(cor.entries().len(), 4);
        assert_eq!(loc_expression(&w).unwrap(), cor);
    }

    #[test]
    fn pole_at_infinity_side_has_no_lau() {
        let s = spec();
        let w = single(&s, lp(&s, &[(0, "1"), (3, "2")]), lp(&s, &[(1, "N1")]), 2, 1);
        assert!(cor_expression(&w).unwrap().is_zero());
        assert!(verify_loc_eq_cor(&w).unwrap().equal);
    }

    #[test]
    fn two_slots_single_negative_coefficient() {
        let s = spec();
        let w = single(&s, lp(&s, &[(-1, "N1")]), QLaurent::zero(&s), 2, 1);
        let loc = loc_expression(&w).unwrap();
        let x = parse_elem(&s, "N1").unwrap();
        let h2 = (&x * &x + x.adams(2)).scale(&crate::ring::ratio(1, 2));
        assert_eq!(loc.get(&Shape { k: 1, tail: CurveClass(vec![1]), l: -1 }), Some(&-&x));
        assert_eq!(loc.get(&Shape { k: 2, tail: CurveClass(vec![2]), l: -2 }), Some(&-&h2));
        assert!(verify_loc_eq_cor(&w).unwrap().equal);
    }

    #[test]
    fn enumeration_agrees_and_directions_cancel() {
        let s = spec();
        let w = WallInput::new(
            &s,
            vec![CurveClass(vec![1, 0]), CurveClass(vec![0, 1])],
            vec![lp(&s, &[(-2, "1"), (-1, "N1"), (1, "2")]), lp(&s, &[(-1, "3"), (2, "N2")])],
            vec![lp(&s, &[(-1, "N1"), (0, "1"), (2, "-1")]), lp(&s, &[(0, "2"), (1, "N1")])],
            3,
            2,
        )
        .unwrap();
        let rep = verify_loc_eq_cor(&w).unwrap();
        assert!(rep.equal, "diff:\n{}", rep.diff);
        assert_eq!(loc_expression_enumerated(&w).unwrap(), rep.loc);
        let incs = [
            Increment { class: 0, l: 1, delta: parse_elem(&s, "N1 + 2").unwrap() },
            Increment { class: 1, l: 0, delta: parse_elem(&s, "5").unwrap() },
        ];
        let lines = direction_zero_lines(&w, &incs).unwrap();
        assert!(lines[0].add(&lines[1]).is_zero());
        assert!(lines[2].add(&lines[3]).is_zero());
        let (dloc, dcor) = first_order_change(&w, &incs, "h", false).unwrap();
        let total = lines.iter().fold(Ledger::default(), |a, b| a.add(b));
        assert_eq!(dloc, total);
        assert!(dcor.is_zero());
        let inf = [Increment { class: 1, l: 2, delta: parse_elem(&s, "N2").unwrap() }];
        let (dloc, dcor) = first_order_change(&w, &inf, "h", true).unwrap();
        assert!(dloc.is_zero() && dcor.is_zero());
    }

    #[test]
    fn json_round_trip() {
        let s = spec();
        let w = single(&s, lp(&s, &[(-1, "N1")]), lp(&s, &[(0, "2")]), 2, 2);
        let back = WallInput::from_json(&w.to_json()).unwrap();
        assert_eq!(back.g0, w.g0);
        assert_eq!(back.ginf, w.ginf);
        assert_eq!((back.m, back.r), (2, 2));
    }
}
