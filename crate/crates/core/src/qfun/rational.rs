use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use super::laurent::QLaurent;
use crate::ring::{binomial_poly, RingElem, RingSpec};
use crate::{Error, Result};

/// Denominator factor `1 − q^a·u` with `a > 0` and `u` a unit.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DenFactor {
    a: i64,
    u: RingElem,
}

impl DenFactor {
    pub fn new(a: i64, u: RingElem) -> Result<Self> {
        if a <= 0 {
            return Err(Error::InvalidFactor(format!(
                "exponent of q must be positive after normalization, got {a}"
            )));
        }
        if !u.is_unit() {
            return Err(Error::InvalidFactor(format!("{u} is not a unit")));
        }
        Ok(DenFactor { a, u })
    }

    pub fn a(&self) -> i64 {
        self.a
    }

    pub fn u(&self) -> &RingElem {
        &self.u
    }

    /// `1 − q^a·u` as a Laurent polynomial.
    pub fn poly(&self) -> QLaurent {
        let spec = self.u.spec();
        let mut p = QLaurent::one(spec);
        p.add_term(self.a, &-&self.u);
        p
    }

    /// `Σ_{i} C(i+m−1, m−1)·u^i·q^{ai}`, the expansion of `(1 − q^a u)^{−m}`
    /// at `q = 0`, up to `q^max_exp`.
    pub fn inverse_series(&self, mult: u32, max_exp: i64) -> QLaurent {
        let spec = self.u.spec();
        let mut out = QLaurent::zero(spec);
        if max_exp < 0 {
            return out;
        }
        let mut upow = RingElem::one(spec);
        let mut i = 0i64;
        while self.a * i <= max_exp {
            let c = binomial_poly(i + mult as i64 - 1, mult - 1);
            out.add_term(self.a * i, &upow.scale(&c));
            upow = &upow * &self.u;
            i += 1;
        }
        out
    }
}

/// Rational function `num / ∏ (1 − q^a u)^mult` in the loop variable `q`.
/// The representation is not canonical; equality is by cross-multiplication.
#[derive(Clone)]
pub struct QRational {
    num: QLaurent,
    den: BTreeMap<DenFactor, u32>,
}

impl QRational {
    pub fn zero(spec: &Arc<RingSpec>) -> Self {
        QLaurent::zero(spec).into()
    }

    pub fn one(spec: &Arc<RingSpec>) -> Self {
        QLaurent::one(spec).into()
    }

    pub fn constant(c: RingElem) -> Self {
        QLaurent::constant(c).into()
    }

    /// `1 / (1 − q^a u)`, normalized when `a < 0` via
    /// `1 − q^{−b}u = −q^{−b}u(1 − q^b u⁻¹)`.
    pub fn pole(a: i64, u: &RingElem) -> Result<Self> {
        Self::from_factors(QLaurent::one(u.spec()), &[(a, u.clone(), 1)])
    }

    /// `num / ∏ (1 − q^{a_i} u_i)^{m_i}` with arbitrary nonzero `a_i`.
    pub fn from_factors(num: QLaurent, factors: &[(i64, RingElem, u32)]) -> Result<Self> {
        let mut out: QRational = num.into();
        for (a, u, m) in factors {
            if !u.spec().same_as(out.spec()) {
                return Err(Error::SpecMismatch);
            }
            if *m == 0 {
                continue;
            }
            if *a == 0 {
                return Err(Error::InvalidFactor("factor 1 − u has no q-dependence".into()));
            }
            if !u.is_unit() {
                return Err(Error::InvalidFactor(format!("{u} is not a unit")));
            }
            if *a > 0 {
                *out.den.entry(DenFactor::new(*a, u.clone())?).or_insert(0) += m;
            } else {
                let b = -a;
                let uinv = u.invert()?;
                // (1 − q^{−b}u)^{−m} = (−q^b u⁻¹)^m (1 − q^b u⁻¹)^{−m}
                let pref = QLaurent::monomial(b * *m as i64, (-&uinv).pow(*m));
                out.num = &out.num * &pref;
                *out.den.entry(DenFactor::new(b, uinv)?).or_insert(0) += m;
            }
        }
        Ok(out)
    }

    pub fn spec(&self) -> &Arc<RingSpec> {
        self.num.spec()
    }

    pub fn num(&self) -> &QLaurent {
        &self.num
    }

    pub fn den(&self) -> &BTreeMap<DenFactor, u32> {
        &self.den
    }

    /// Same numerator over the denominator of `f`.
    pub(crate) fn with_den_of(mut self, f: &QRational) -> QRational {
        self.den = f.den.clone();
        self
    }

    pub fn is_laurent(&self) -> bool {
        self.den.is_empty()
    }

    /// `∏ (1 − q^a u)^m` expanded.
    pub fn den_poly(&self) -> QLaurent {
        let mut p = QLaurent::one(self.spec());
        for (f, m) in &self.den {
            p = &p * &f.poly().pow(*m);
        }
        p
    }

    /// q-degree `Δ = Σ a·m` of the denominator.
    pub fn den_degree(&self) -> i64 {
        self.den.iter().map(|(f, m)| f.a * *m as i64).sum()
    }

    /// Leading coefficient `∏ (−u)^m` of the denominator, a unit.
    pub fn den_leading(&self) -> RingElem {
        let mut c = RingElem::one(self.spec());
        for (f, m) in &self.den {
            c = &c * &(-&f.u).pow(*m);
        }
        c
    }

    fn common_den(&self, other: &QRational) -> BTreeMap<DenFactor, u32> {
        let mut den = self.den.clone();
        for (f, m) in &other.den {
            let e = den.entry(f.clone()).or_insert(0);
            *e = (*e).max(*m);
        }
        den
    }

    /// Numerator after rewriting over the (larger) denominator `den`.
    fn num_over(&self, den: &BTreeMap<DenFactor, u32>) -> QLaurent {
        let mut num = self.num.clone();
        for (f, m) in den {
            let have = self.den.get(f).copied().unwrap_or(0);
            debug_assert!(have <= *m);
            if *m > have {
                num = &num * &f.poly().pow(m - have);
            }
        }
        num
    }

    pub fn checked_add(&self, other: &QRational) -> Result<QRational> {
        if !self.spec().same_as(other.spec()) {
            return Err(Error::SpecMismatch);
        }
        if self.den == other.den {
            return Ok(QRational {
                num: &self.num + &other.num,
                den: self.den.clone(),
            });
        }
        let den = self.common_den(other);
        let num = &self.num_over(&den) + &other.num_over(&den);
        Ok(QRational { num, den })
    }

    pub fn checked_mul(&self, other: &QRational) -> Result<QRational> {
        if !self.spec().same_as(other.spec()) {
            return Err(Error::SpecMismatch);
        }
        let mut den = self.den.clone();
        for (f, m) in &other.den {
            *den.entry(f.clone()).or_insert(0) += m;
        }
        Ok(QRational {
            num: self.num.checked_mul(&other.num)?,
            den,
        })
    }

    pub fn scale(&self, c: &RingElem) -> QRational {
        QRational {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    pub fn mul_laurent(&self, p: &QLaurent) -> QRational {
        QRational {
            num: &self.num * p,
            den: self.den.clone(),
        }
    }

    /// Multiply by `q^s`.
    pub fn shift(&self, s: i64) -> QRational {
        QRational {
            num: self.num.shift(s),
            den: self.den.clone(),
        }
    }

    /// Exact equality by cross-multiplication. Denominators have constant
    /// term `1`, so they are not zero divisors and this is sound.
    pub fn equals(&self, other: &QRational) -> bool {
        if !self.spec().same_as(other.spec()) {
            return false;
        }
        let den = self.common_den(other);
        self.num_over(&den) == other.num_over(&den)
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// `q ↦ q^r·u`.
    pub fn substitute(&self, r: i64, u: &RingElem) -> Result<QRational> {
        if r == 0 {
            return Err(Error::InvalidArgument("substitution exponent must be nonzero".into()));
        }
        if !u.is_unit() {
            return Err(Error::NotAUnit(u.to_string()));
        }
        let num = self.num.substitute(r, u)?;
        let factors: Vec<(i64, RingElem, u32)> = self
            .den
            .iter()
            .map(|(f, m)| Ok((r * f.a, &f.u * &u.pow_i(f.a)?, *m)))
            .collect::<Result<_>>()?;
        QRational::from_factors(num, &factors)
    }

    /// Apply a ring endomorphism to every coefficient and denominator unit.
    pub fn map_coeffs<F: FnMut(&RingElem) -> RingElem>(&self, mut f: F) -> Result<QRational> {
        let num = self.num.map_coeffs(&mut f);
        let factors: Vec<(i64, RingElem, u32)> =
            self.den.iter().map(|(d, m)| (d.a, f(&d.u), *m)).collect();
        QRational::from_factors(num, &factors)
    }

    /// Laurent expansion at `q = 0`, exact through `q^n`.
    pub fn expand_at_zero(&self, n: i64) -> QLaurent {
        let spec = self.spec();
        let Some(ord) = self.num.order() else {
            return QLaurent::zero(spec);
        };
        let need = n - ord;
        if need < 0 {
            return QLaurent::zero(spec);
        }
        let mut series = QLaurent::one(spec);
        for (f, m) in &self.den {
            series = series.mul_truncated(&f.inverse_series(*m, need), need);
        }
        self.num.mul_truncated(&series, n)
    }

    /// `f(1/w)`, as a rational function of `w` (reported in the same `q`
    /// variable).
    pub fn at_infinity(&self) -> QRational {
        self.substitute(-1, &RingElem::one(self.spec()))
            .expect("q ↦ 1/q is always defined")
    }

    /// Laurent expansion in `w = 1/q` at `w = 0`, exact through `w^n`.
    pub fn expand_at_infinity(&self, n: i64) -> QLaurent {
        self.at_infinity().expand_at_zero(n)
    }

    /// Value at `q = 0` of a function regular there: the constant term of
    /// the numerator, since every denominator factor is `1` at `q = 0`.
    pub fn value_at_zero(&self) -> Result<RingElem> {
        match self.num.order() {
            Some(o) if o < 0 => Err(Error::Pole("function has a pole at q = 0".into())),
            _ => Ok(self.num.coeff(0)),
        }
    }
}

impl From<QLaurent> for QRational {
    fn from(num: QLaurent) -> Self {
        QRational {
            num,
            den: BTreeMap::new(),
        }
    }
}

impl PartialEq for QRational {
    fn eq(&self, other: &Self) -> bool {
        self.equals(other)
    }
}

impl Add<&QRational> for &QRational {
    type Output = QRational;
    fn add(self, rhs: &QRational) -> QRational {
        self.checked_add(rhs).expect("ring mismatch")
    }
}

impl Sub<&QRational> for &QRational {
    type Output = QRational;
    fn sub(self, rhs: &QRational) -> QRational {
        self.checked_add(&-rhs).expect("ring mismatch")
    }
}

impl Mul<&QRational> for &QRational {
    type Output = QRational;
    fn mul(self, rhs: &QRational) -> QRational {
        self.checked_mul(rhs).expect("ring mismatch")
    }
}

impl Neg for &QRational {
    type Output = QRational;
    fn neg(self) -> QRational {
        QRational {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl fmt::Display for QRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_empty() {
            return write!(f, "{}", self.num);
        }
        let den: Vec<String> = self
            .den
            .iter()
            .map(|(d, m)| {
                let qa = if d.a == 1 { "q".to_string() } else { format!("q^{}", d.a) };
                let base = if d.u.is_one() {
                    format!("(1 - {qa})")
                } else {
                    format!("(1 - {qa}*({}))", d.u)
                };
                if *m == 1 {
                    base
                } else {
                    format!("{base}^{m}")
                }
            })
            .collect();
        write!(f, "[{}] / [{}]", self.num, den.join(" * "))
    }
}

impl fmt::Debug for QRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QRational({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec() -> Arc<RingSpec> {
        RingSpec::builder().nilpotent("nu", 3).unit("L").unit("M").build().unwrap()
    }

    #[test]
    fn opposite_poles_cancel() {
        let s = spec();
        let l = RingElem::gen(&s, "L").unwrap();
        let f = QRational::pole(1, &l).unwrap();
        assert!((&f + &(-&f)).is_zero());
    }

    #[test]
    fn pole_times_its_factor() {
        let s = spec();
        let l = RingElem::gen(&s, "L").unwrap();
        let f = QRational::pole(1, &l).unwrap();
        let mut d = QLaurent::one(&s);
        d.add_term(1, &-&l);
        assert_eq!(&f * &QRational::from(d), QRational::one(&s));
    }

    #[test]
    fn negative_exponent_is_normalized() {
        let s = spec();
        let l = RingElem::gen(&s, "L").unwrap();
        let f = QRational::pole(-1, &l).unwrap();
        assert!(f.den().keys().all(|d| d.a() > 0));
        // (1 − q⁻¹L)·f = 1
        let mut d = QLaurent::one(&s);
        d.add_term(-1, &-&l);
        assert_eq!(&f * &QRational::from(d), QRational::one(&s));
    }

    #[test]
    fn expansion_examples() {
        let s = spec();
        let l = RingElem::gen(&s, "L").unwrap();
        let f = QRational::pole(1, &l).unwrap();
        let e = f.expand_at_zero(2);
        let expected = QLaurent::from_coeffs(&s, [(0, RingElem::one(&s)), (1, l.clone()), (2, &l * &l)]);
        assert_eq!(e, expected);
        let g = f.shift(-1).expand_at_zero(1);
        let expected = QLaurent::from_coeffs(&s, [(-1, RingElem::one(&s)), (0, l.clone()), (1, &l * &l)]);
        assert_eq!(g, expected);
        // g/(1 − q⁻¹L) → −g(qL⁻¹ + q²L⁻²)
        let gc = &RingElem::one(&s) + &RingElem::gen(&s, "nu").unwrap();
        let h = QRational::pole(-1, &l).unwrap().scale(&gc);
        let linv = l.invert().unwrap();
        let expected = QLaurent::from_coeffs(&s, [(1, -(&gc * &linv)), (2, -(&gc * &(&linv * &linv)))]);
        assert_eq!(h.expand_at_zero(2), expected);
    }

    #[test]
    fn expansion_at_infinity_examples() {
        let s = spec();
        let l = RingElem::gen(&s, "L").unwrap();
        let linv = l.invert().unwrap();
        let f = QRational::pole(1, &l).unwrap();
        let expected = QLaurent::from_coeffs(&s, [(1, -&linv), (2, -(&linv * &linv))]);
        assert_eq!(f.expand_at_infinity(2), expected);
        let q: QRational = QLaurent::q_pow(&s, 1).into();
        assert_eq!(q.expand_at_infinity(3), QLaurent::q_pow(&s, -1));
    }

    #[test]
    fn substitute_examples() {
        let s = spec();
        let l = RingElem::gen(&s, "L").unwrap();
        let m = RingElem::gen(&s, "M").unwrap();
        let p = &RingElem::one(&s) - &RingElem::gen(&s, "nu").unwrap();
        let f = QRational::pole(1, &p).unwrap();
        assert_eq!(f.substitute(1, &l).unwrap(), QRational::pole(1, &(&l * &p)).unwrap());
        let g = QRational::pole(-1, &m).unwrap();
        assert_eq!(
            g.substitute(-1, &RingElem::one(&s)).unwrap(),
            QRational::pole(1, &m).unwrap()
        );
    }

    #[test]
    fn bad_factors_rejected() {
        let s = spec();
        let nu = RingElem::gen(&s, "nu").unwrap();
        assert!(QRational::pole(1, &nu).is_err());
        assert!(QRational::pole(0, &RingElem::one(&s)).is_err());
    }
}
