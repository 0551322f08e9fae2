//! Pushforwards along inflated projective bundles: the staircase sum over
//! permutations, the ring `ℚ[Θ^±][L]/∏(L − Θ_i)` and the closed forms of
//! `p_*(L^t)`.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use itertools::Itertools;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow, Zero};

use crate::ring::{ratio, Monomial, RingElem, RingSpec};
use crate::{Error, Result};

/// All `(j_1, …, j_r)` with `Σ j_i = n` and every `j_i ≥ min`.
pub fn compositions(n: i64, r: usize, min: i64) -> Vec<Vec<i64>> {
    fn rec(left: i64, slots: usize, min: i64, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if slots == 1 {
            if left >= min {
                cur.push(left);
                out.push(cur.clone());
                cur.pop();
            }
            return;
        }
        let mut j = min;
        while left - j >= min * (slots as i64 - 1) {
            cur.push(j);
            rec(left - j, slots - 1, min, cur, out);
            cur.pop();
            j += 1;
        }
    }
    let mut out = Vec::new();
    if r == 0 {
        if n == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    rec(n, r, min, &mut Vec::new(), &mut out);
    out
}

fn check_points(xs: &[BigRational]) -> Result<()> {
    if xs.is_empty() {
        return Err(Error::InvalidArgument("staircase sum needs at least one variable".into()));
    }
    for (i, x) in xs.iter().enumerate() {
        if x.is_zero() {
            return Err(Error::Pole(format!("x{} = 0", i + 1)));
        }
        if xs[..i].contains(x) {
            return Err(Error::Pole(format!("x{} coincides with an earlier point", i + 1)));
        }
    }
    Ok(())
}

/// `Σ_{σ ∈ S_r} x_{σ(1)}^s / ∏_{i<r} (1 − x_{σ(i)}^{-1} x_{σ(i+1)})` at
/// rational points.
pub fn staircase_sum(s: i64, xs: &[BigRational]) -> Result<BigRational> {
    check_points(xs)?;
    let mut total = BigRational::zero();
    for p in (0..xs.len()).permutations(xs.len()) {
        let mut den = BigRational::one();
        for w in p.windows(2) {
            den *= BigRational::one() - &xs[w[1]] / &xs[w[0]];
        }
        total += Pow::pow(&xs[p[0]], s as i32) / den;
    }
    Ok(total)
}

/// `h_s(x)` for `s ≥ 0`, `(−1)^{r−1} Σ_{Σj_i = −s, j_i > 0} x^{−j}` for
/// `s < 0`.
pub fn staircase_closed_form(s: i64, xs: &[BigRational]) -> Result<BigRational> {
    check_points(xs)?;
    let r = xs.len();
    let (n, min, sign) = if s >= 0 { (s, 0, 1) } else { (-s, 1, if r % 2 == 1 { 1 } else { -1 }) };
    let mut total = BigRational::zero();
    for js in compositions(n, r, min) {
        let mut term = BigRational::one();
        for (x, j) in xs.iter().zip(&js) {
            let e = if s >= 0 { *j } else { -*j };
            term *= Pow::pow(x, e as i32);
        }
        total += term;
    }
    Ok(total * BigRational::from_integer(BigInt::from(sign)))
}

/// Laurent ring in unit generators `x1..xr`.
pub fn variables_ring(r: usize, prefix: &str) -> Result<Arc<RingSpec>> {
    let mut b = RingSpec::builder();
    for i in 1..=r {
        b = b.unit(&format!("{prefix}{i}"));
    }
    b.build()
}

fn var(spec: &Arc<RingSpec>, i: usize, e: i32) -> RingElem {
    let mut m = Monomial::zeros(spec.len());
    m.0[spec.unit_range().start + i] = e;
    RingElem::monomial(spec, m, BigRational::one())
}

/// The staircase identity over the fraction field of `ℚ[x_1^±..x_r^±]`,
/// checked after clearing the Vandermonde denominator `∏_{i<j}(x_i − x_j)`:
/// each permutation contributes
/// `x_{σ(1)}^s ∏_{i<r} x_{σ(i)} · ∏_{pairs not consecutive in σ} (x_a − x_b)` up to
/// sign, a Laurent polynomial.
pub fn staircase_symbolic(s: i64, r: usize) -> Result<bool> {
    if r == 0 {
        return Err(Error::InvalidArgument("r must be positive".into()));
    }
    let spec = variables_ring(r, "x")?;
    let x = |i: usize| var(&spec, i, 1);
    let pairs: Vec<(usize, usize)> = (0..r).tuple_combinations().collect();
    let vandermonde = pairs
        .iter()
        .fold(RingElem::one(&spec), |acc, (a, b)| &acc * &(&x(*a) - &x(*b)));
    let mut lhs = RingElem::zero(&spec);
    for p in (0..r).permutations(r) {
        // 1/(1 − x_a^{-1} x_b) = x_a/(x_a − x_b)
        let mut term = var(&spec, p[0], s as i32);
        let mut sign = 1i64;
        let mut used = Vec::new();
        for w in p.windows(2) {
            let (a, b) = (w[0], w[1]);
            term = &term * &x(a);
            if a > b {
                sign = -sign;
            }
            used.push((a.min(b), a.max(b)));
        }
        for (a, b) in &pairs {
            if !used.contains(&(*a, *b)) {
                term = &term * &(&x(*a) - &x(*b));
            }
        }
        lhs += &term.scale_int(sign);
    }
    let (n, min) = if s >= 0 { (s, 0) } else { (-s, 1) };
    let mut closed = RingElem::zero(&spec);
    for js in compositions(n, r, min) {
        let mut term = RingElem::one(&spec);
        for (i, j) in js.iter().enumerate() {
            term = &term * &var(&spec, i, if s >= 0 { *j as i32 } else { -*j as i32 });
        }
        closed += &term;
    }
    if s < 0 && r.is_multiple_of(2) {
        closed = -closed;
    }
    Ok(lhs == &closed * &vandermonde)
}

/// `ℚ[Θ_1^±..Θ_k^±][L] / ∏(L − Θ_i)`, with normal forms of `L`-degree `< k`.
#[derive(Debug)]
pub struct KoszulRing {
    k: usize,
    spec: Arc<RingSpec>,
    /// Elementary symmetric functions `e_0..e_k` of the `Θ_i`.
    e: Vec<RingElem>,
}

impl KoszulRing {
    pub fn new(k: usize) -> Result<Arc<Self>> {
        if k == 0 {
            return Err(Error::InvalidArgument("Koszul ring needs k ≥ 1".into()));
        }
        let spec = variables_ring(k, "Theta")?;
        // ∏(1 + Θ_i z) expanded in z
        let mut e = vec![RingElem::one(&spec)];
        for i in 0..k {
            let th = var(&spec, i, 1);
            let mut next = e.clone();
            next.push(RingElem::zero(&spec));
            for j in 0..e.len() {
                next[j + 1] = &next[j + 1] + &(&e[j] * &th);
            }
            e = next;
        }
        Ok(Arc::new(KoszulRing { k, spec, e }))
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn spec(&self) -> &Arc<RingSpec> {
        &self.spec
    }

    /// `Θ_{i+1}`; the index is zero-based.
    pub fn theta(&self, i: usize) -> RingElem {
        var(&self.spec, i, 1)
    }

    pub fn elementary(&self, j: usize) -> &RingElem {
        &self.e[j]
    }
}

/// Element of a [`KoszulRing`] in normal form `Σ_{j<k} c_j L^j`.
#[derive(Clone)]
pub struct KoszulElem {
    ring: Arc<KoszulRing>,
    coeffs: Vec<RingElem>,
}

impl KoszulElem {
    pub fn zero(ring: &Arc<KoszulRing>) -> Self {
        KoszulElem {
            ring: ring.clone(),
            coeffs: vec![RingElem::zero(&ring.spec); ring.k],
        }
    }

    pub fn constant(ring: &Arc<KoszulRing>, c: RingElem) -> Self {
        let mut out = Self::zero(ring);
        out.coeffs[0] = c;
        out
    }

    pub fn one(ring: &Arc<KoszulRing>) -> Self {
        Self::constant(ring, RingElem::one(&ring.spec))
    }

    /// `L` itself (reduced when `k = 1`).
    pub fn l(ring: &Arc<KoszulRing>) -> Self {
        koszul_reduce(ring, &BTreeMap::from([(1, RingElem::one(&ring.spec))]))
    }

    /// `L^{-1} = (−1)^{k+1} e_k^{-1} Σ_{j<k} (−1)^j e_j L^{k−1−j}`.
    pub fn l_inverse(ring: &Arc<KoszulRing>) -> Self {
        let k = ring.k;
        let ek_inv = ring.e[k].invert().expect("e_k is a monomial unit");
        let sign = if k % 2 == 1 { 1 } else { -1 };
        let mut out = Self::zero(ring);
        for j in 0..k {
            let s = if j % 2 == 0 { sign } else { -sign };
            out.coeffs[k - 1 - j] = (&ring.e[j] * &ek_inv).scale_int(s);
        }
        out
    }

    /// `L^t` for any integer `t`.
    pub fn l_pow(ring: &Arc<KoszulRing>, t: i64) -> Self {
        if t >= 0 {
            return koszul_reduce(ring, &BTreeMap::from([(t, RingElem::one(&ring.spec))]));
        }
        let inv = Self::l_inverse(ring);
        (0..-t).fold(Self::one(ring), |acc, _| acc.mul(&inv))
    }

    pub fn coeffs(&self) -> &[RingElem] {
        &self.coeffs
    }

    pub fn add(&self, other: &KoszulElem) -> KoszulElem {
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect();
        KoszulElem {
            ring: self.ring.clone(),
            coeffs,
        }
    }

    pub fn sub(&self, other: &KoszulElem) -> KoszulElem {
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect();
        KoszulElem {
            ring: self.ring.clone(),
            coeffs,
        }
    }

    pub fn scale(&self, c: &RingElem) -> KoszulElem {
        KoszulElem {
            ring: self.ring.clone(),
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    pub fn mul(&self, other: &KoszulElem) -> KoszulElem {
        let mut poly: BTreeMap<i64, RingElem> = BTreeMap::new();
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                let e = poly.entry((i + j) as i64).or_insert_with(|| RingElem::zero(&self.ring.spec));
                *e += &(a * b);
            }
        }
        koszul_reduce(&self.ring, &poly)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(RingElem::is_zero)
    }

    /// `p_*`: the linear map with `L^j ↦ h_j(Θ_1, …, Θ_k)` for `j < k`.
    pub fn pushforward(&self) -> RingElem {
        let theta_sum = (0..self.ring.k).fold(RingElem::zero(&self.ring.spec), |acc, i| &acc + &self.ring.theta(i));
        let h = theta_sum.sym_powers(self.ring.k as u32 - 1);
        self.coeffs.iter().zip(&h).fold(RingElem::zero(&self.ring.spec), |acc, (c, hj)| &acc + &(c * hj))
    }
}

impl PartialEq for KoszulElem {
    fn eq(&self, other: &Self) -> bool {
        self.ring.k == other.ring.k && self.coeffs == other.coeffs
    }
}

impl fmt::Display for KoszulElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(j, c)| format!("({c})*L^{j}"))
            .collect();
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

impl fmt::Debug for KoszulElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "KoszulElem({self})")
    }
}

/// Normal form of a Laurent polynomial in `L`: top powers are lowered with
/// `L^k = Σ_{j=1..k} (−1)^{j−1} e_j L^{k−j}`, negative powers are expanded
/// through `L^{-1}`.
pub fn koszul_reduce(ring: &Arc<KoszulRing>, poly: &BTreeMap<i64, RingElem>) -> KoszulElem {
    let k = ring.k as i64;
    let mut work: BTreeMap<i64, RingElem> = poly
        .iter()
        .filter(|(e, c)| **e >= 0 && !c.is_zero())
        .map(|(e, c)| (*e, c.clone()))
        .collect();
    while let Some((&top, _)) = work.iter().next_back() {
        if top < k {
            break;
        }
        let c = work.remove(&top).expect("present");
        for j in 1..=k {
            let s = if j % 2 == 1 { 1 } else { -1 };
            let add = (&c * &ring.e[j as usize]).scale_int(s);
            let entry = work.entry(top - j).or_insert_with(|| RingElem::zero(&ring.spec));
            *entry += &add;
        }
    }
    let mut out = KoszulElem::zero(ring);
    for (e, c) in work {
        out.coeffs[e as usize] += &c;
    }
    let negative: Vec<(i64, &RingElem)> = poly.iter().filter(|(e, c)| **e < 0 && !c.is_zero()).map(|(e, c)| (*e, c)).collect();
    if !negative.is_empty() {
        let inv = KoszulElem::l_inverse(ring);
        let mut pow = KoszulElem::one(ring);
        let mut depth = 0;
        for (e, c) in negative.into_iter().rev() {
            while depth < -e {
                pow = pow.mul(&inv);
                depth += 1;
            }
            out = out.add(&pow.scale(c));
        }
    }
    out
}

/// `p_*(L^t)` through the Koszul normal form.
pub fn pushforward(ring: &Arc<KoszulRing>, t: i64) -> RingElem {
    KoszulElem::l_pow(ring, t).pushforward()
}

/// `Σ_{Σj_i = t, j_i ≥ 0} Θ^j` for `t ≥ 0` and
/// `−Σ_{Σj_i = −t, j_i > 0} ∏(−Θ_i^{−j_i})` for `t < 0`.
pub fn pushforward_closed_form(ring: &Arc<KoszulRing>, t: i64) -> RingElem {
    let k = ring.k;
    let spec = &ring.spec;
    let mut out = RingElem::zero(spec);
    if t >= 0 {
        for js in compositions(t, k, 0) {
            out += &js.iter().enumerate().fold(RingElem::one(spec), |acc, (i, j)| &acc * &var(spec, i, *j as i32));
        }
    } else {
        for js in compositions(-t, k, 1) {
            let term = js
                .iter()
                .enumerate()
                .fold(RingElem::one(spec), |acc, (i, j)| &acc * &-var(spec, i, -*j as i32));
            out -= &term;
        }
    }
    out
}

/// The classes `α_i = Σ_{j≤i} L^j h_{i−j}(−Θ_1 − … − Θ_k)`, `i = 0..k−1`.
pub fn alphas(ring: &Arc<KoszulRing>) -> Vec<KoszulElem> {
    let k = ring.k;
    let minus_theta = (0..k).fold(RingElem::zero(&ring.spec), |acc, i| &acc - &ring.theta(i));
    let h = minus_theta.sym_powers(k as u32);
    let l = KoszulElem::l(ring);
    (0..k)
        .map(|i| {
            let mut acc = KoszulElem::zero(ring);
            let mut lj = KoszulElem::one(ring);
            for j in 0..=i {
                acc = acc.add(&lj.scale(&h[i - j]));
                lj = lj.mul(&l);
            }
            acc
        })
        .collect()
}

/// `(1 − λ^{-1}L)·Σ_{i<k} λ^{-i} α_i = ∏(1 − λ^{-1}Θ_i)`, compared
/// coefficientwise in `λ^{-1}` over the Koszul ring.
pub fn generating_identity(ring: &Arc<KoszulRing>) -> bool {
    let k = ring.k;
    let a = alphas(ring);
    let l = KoszulElem::l(ring);
    let zero = KoszulElem::zero(ring);
    (0..=k).all(|i| {
        let cur = if i < k { a[i].clone() } else { zero.clone() };
        let prev = if i > 0 { l.mul(&a[i - 1]) } else { zero.clone() };
        let sign = if i % 2 == 0 { 1 } else { -1 };
        let rhs = KoszulElem::constant(ring, ring.e[i].scale_int(sign));
        cur.sub(&prev) == rhs
    })
}

/// `p_*(α_i) = 0` for `1 ≤ i < k`.
pub fn alphas_push_to_zero(ring: &Arc<KoszulRing>) -> bool {
    alphas(ring).iter().skip(1).all(|a| a.pushforward().is_zero())
}

/// `p_*(L^t)` is unchanged by every permutation of the `Θ_i`.
pub fn pushforward_is_symmetric(ring: &Arc<KoszulRing>, t: i64) -> bool {
    let p = pushforward(ring, t);
    (0..ring.k).permutations(ring.k).all(|perm| p.permute_units(&perm) == p)
}

/// A rational point with pairwise distinct nonzero coordinates, used to
/// evaluate the staircase sum away from its poles.
pub fn distinct_points<R: rand::Rng>(rng: &mut R, r: usize) -> Vec<BigRational> {
    let mut xs: Vec<BigRational> = Vec::with_capacity(r);
    while xs.len() < r {
        let x = ratio(rng.gen_range(-9..=9), rng.gen_range(1..=5));
        if !x.is_zero() && !xs.contains(&x) {
            xs.push(x);
        }
    }
    xs
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{parse_elem, rat};

    #[test]
    fn staircase_examples() {
        let xs = [rat(3), ratio(1, 2)];
        assert_eq!(staircase_sum(1, &xs).unwrap(), rat(3) + ratio(1, 2));
        assert_eq!(staircase_sum(-2, &xs).unwrap(), -(ratio(1, 3) * rat(2)));
        let ys = [rat(2), rat(-1), ratio(2, 3), rat(5)];
        assert_eq!(staircase_sum(0, &ys).unwrap(), rat(1));
        assert!(staircase_sum(1, &[rat(1), rat(1)]).is_err());
        assert!(staircase_sum(1, &[rat(0), rat(1)]).is_err());
    }

    #[test]
    fn symbolic_small_cases() {
        for r in 1..=3 {
            for s in -4..=4 {
                assert!(staircase_symbolic(s, r).unwrap(), "r={r} s={s}");
            }
        }
    }

    #[test]
    fn koszul_examples() {
        let ring = KoszulRing::new(2).unwrap();
        let s = ring.spec().clone();
        let sq = KoszulElem::l_pow(&ring, 2);
        assert_eq!(sq.coeffs()[1], parse_elem(&s, "Theta1 + Theta2").unwrap());
        assert_eq!(sq.coeffs()[0], parse_elem(&s, "-Theta1*Theta2").unwrap());
        let inv = KoszulElem::l_inverse(&ring);
        assert_eq!(inv.coeffs()[0], parse_elem(&s, "Theta2^-1 + Theta1^-1").unwrap());
        assert_eq!(inv.coeffs()[1], parse_elem(&s, "-Theta1^-1*Theta2^-1").unwrap());
        assert_eq!(inv.mul(&KoszulElem::l(&ring)), KoszulElem::one(&ring));
        let low = koszul_reduce(&ring, &BTreeMap::from([(1, rat_elem(&s, 3))]));
        assert_eq!(low.coeffs()[1], rat_elem(&s, 3));
    }

    fn rat_elem(s: &Arc<RingSpec>, n: i64) -> RingElem {
        RingElem::from_int(s, n)
    }

    #[test]
    fn pushforward_examples() {
        let ring = KoszulRing::new(2).unwrap();
        let s = ring.spec().clone();
        assert_eq!(pushforward(&ring, 1), parse_elem(&s, "Theta1 + Theta2").unwrap());
        assert!(pushforward(&ring, -1).is_zero());
        assert_eq!(pushforward(&ring, -2), parse_elem(&s, "-Theta1^-1*Theta2^-1").unwrap());
    }

    #[test]
    fn closed_forms_and_generating_identity() {
        for k in 1..=3 {
            let ring = KoszulRing::new(k).unwrap();
            for t in -4..=4 {
                assert_eq!(pushforward(&ring, t), pushforward_closed_form(&ring, t), "k={k} t={t}");
            }
            assert!(generating_identity(&ring));
            assert!(alphas_push_to_zero(&ring));
            assert!(pushforward_is_symmetric(&ring, -3));
        }
    }

    #[test]
    fn composition_counts() {
        assert_eq!(compositions(3, 2, 0).len(), 4);
        assert_eq!(compositions(3, 2, 1).len(), 2);
        assert_eq!(compositions(1, 2, 1).len(), 0);
        assert_eq!(compositions(0, 0, 0).len(), 1);
    }
}
