//! Small I-functions as q-hypergeometric Novikov series and the mirror-map
//! truncations `μ_β = [(1−q)I_β]_+`.

use std::sync::Arc;

use num_rational::BigRational;
use num_traits::Signed;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::novikov::{ConeSpec, CurveClass, NovikovSeries};
use crate::qfun::{residue, split, QLaurent, QRational};
use crate::ring::json::elem_from_json;
use crate::ring::{RingElem, RingSpec};
use crate::{Error, Result};

/// Integer linear form `β ↦ Σ c_i β_i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LinearForm(pub Vec<i64>);

impl LinearForm {
    pub fn eval(&self, b: &CurveClass) -> i64 {
        self.0.iter().zip(&b.0).map(|(c, x)| c * *x as i64).sum()
    }

    pub fn zero(rank: usize) -> Self {
        LinearForm(vec![0; rank])
    }
}

/// Per-class monomial `q^{a(β)} ∏ u_j^{ℓ_j(β)}`.
#[derive(Clone, Debug)]
pub struct Prefactor {
    pub q_exp: LinearForm,
    pub units: Vec<(RingElem, LinearForm)>,
}

impl Prefactor {
    pub fn identity(rank: usize) -> Self {
        Prefactor {
            q_exp: LinearForm::zero(rank),
            units: Vec::new(),
        }
    }

    fn eval(&self, spec: &Arc<RingSpec>, b: &CurveClass) -> Result<QLaurent> {
        let mut c = RingElem::one(spec);
        for (u, l) in &self.units {
            c = &c * &u.pow_i(l.eval(b))?;
        }
        Ok(QLaurent::monomial(self.q_exp.eval(b), c))
    }

    /// Product of two prefactor rules.
    pub fn compose(&self, other: &Prefactor) -> Prefactor {
        Prefactor {
            q_exp: LinearForm(self.q_exp.0.iter().zip(&other.q_exp.0).map(|(a, b)| a + b).collect()),
            units: self.units.iter().chain(&other.units).cloned().collect(),
        }
    }
}

/// `ℓ = steps(β)`: for `ℓ ≥ 0` the family contributes
/// `∏_{i=1}^{ℓ} (1 − q^i u)^{−e}`, for `ℓ < 0` it contributes
/// `∏_{i=ℓ+1}^{0} (1 − q^i u)^{e}`.
#[derive(Clone, Debug)]
pub struct FactorFamily {
    pub base: RingElem,
    pub steps: LinearForm,
    pub exponent: i64,
}

/// Factor rule of a q-hypergeometric I-function.
#[derive(Clone, Debug)]
pub struct HypergeomSpec {
    pub ring: Arc<RingSpec>,
    pub cone: ConeSpec,
    pub prefactor: Prefactor,
    pub families: Vec<FactorFamily>,
}

impl HypergeomSpec {
    pub fn validate(&self) -> Result<()> {
        let r = self.cone.rank();
        let forms = std::iter::once(&self.prefactor.q_exp)
            .chain(self.prefactor.units.iter().map(|(_, l)| l))
            .chain(self.families.iter().map(|f| &f.steps));
        for l in forms {
            if l.0.len() != r {
                return Err(Error::InvalidSpec(format!(
                    "linear form of length {} on a cone of rank {r}",
                    l.0.len()
                )));
            }
        }
        for (u, _) in &self.prefactor.units {
            if !u.is_unit() {
                return Err(Error::NotAUnit(u.to_string()));
            }
        }
        for f in &self.families {
            if !f.base.is_unit() {
                return Err(Error::InvalidFactor(format!("family base {} is not a unit", f.base)));
            }
        }
        Ok(())
    }

    /// The coefficient `I_β`.
    pub fn coefficient(&self, b: &CurveClass) -> Result<QRational> {
        let spec = &self.ring;
        let mut num = self.prefactor.eval(spec, b)?;
        let mut scalar = RingElem::one(spec);
        let mut factors: Vec<(i64, RingElem, u32)> = Vec::new();
        for f in &self.families {
            let l = f.steps.eval(b);
            let (range, power) = if l >= 0 {
                (1..=l, -f.exponent)
            } else {
                (l + 1..=0, f.exponent)
            };
            if power == 0 {
                continue;
            }
            for i in range {
                if power > 0 {
                    let mut p = QLaurent::one(spec);
                    p.add_term(i, &-&f.base);
                    num = &num * &p.pow(power as u32);
                } else if i == 0 {
                    let c = &RingElem::one(spec) - &f.base;
                    let inv = c.invert().map_err(|_| {
                        Error::InvalidFactor(format!("constant factor 1 − ({}) in a denominator", f.base))
                    })?;
                    scalar = &scalar * &inv.pow((-power) as u32);
                } else {
                    factors.push((i, f.base.clone(), (-power) as u32));
                }
            }
        }
        QRational::from_factors(num.scale(&scalar), &factors)
    }

    /// `I(Q, q) = Σ_{deg β ≤ D} I_β Q^β`.
    pub fn evaluate(&self, d: &BigRational) -> Result<NovikovSeries> {
        self.validate()?;
        let cone = self.cone.with_bound(d.clone());
        let mut out = NovikovSeries::zero(&cone, &self.ring);
        for b in cone.classes() {
            let c = self.coefficient(&b)?;
            if b.is_zero() && !c.equals(&QRational::one(&self.ring)) {
                return Err(Error::InvalidSpec(format!("I_0 must be 1, got {c}")));
            }
            out.insert(b, c);
        }
        Ok(out)
    }

    /// Compose an extra per-degree monomial factor into the rule.
    pub fn twist(&self, extra: &Prefactor) -> HypergeomSpec {
        HypergeomSpec {
            prefactor: self.prefactor.compose(extra),
            ..self.clone()
        }
    }
}

/// `twist_I`: [`HypergeomSpec::twist`] as a free function.
pub fn twist_i(spec: &HypergeomSpec, extra: &Prefactor) -> HypergeomSpec {
    spec.twist(extra)
}

/// `ℚ[ν]/(ν^n)` with `P = 1 − ν` and `I_d = ∏_{i=1}^{d} (1 − q^i P)^{−n}`.
pub fn preset_projective(n: u32) -> Result<HypergeomSpec> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("projective preset needs n ≥ 2, got {n}")));
    }
    let ring = RingSpec::builder().nilpotent("nu", n).build()?;
    let p = &RingElem::one(&ring) - &RingElem::gen(&ring, "nu")?;
    Ok(HypergeomSpec {
        cone: ConeSpec::integral(&[1], 0)?,
        prefactor: Prefactor::identity(1),
        families: vec![FactorFamily {
            base: p,
            steps: LinearForm(vec![1]),
            exponent: n as i64,
        }],
        ring,
    })
}

/// The projective line with the extra factor `q^d` in degree `d`.
pub fn preset_toy_p1() -> Result<HypergeomSpec> {
    let base = preset_projective(2)?;
    Ok(base.twist(&Prefactor {
        q_exp: LinearForm(vec![1]),
        units: Vec::new(),
    }))
}

/// Presets by name: `P<k>` is `P^k` (so `n = k+1`), `toy-P1` the twisted
/// projective line.
pub fn preset_by_name(name: &str) -> Result<HypergeomSpec> {
    match name {
        "toy-P1" => preset_toy_p1(),
        _ => {
            let k = name
                .strip_prefix('P')
                .and_then(|s| s.parse::<u32>().ok())
                .filter(|k| *k >= 1)
                .ok_or_else(|| Error::InvalidArgument(format!("unknown preset {name:?}")))?;
            preset_projective(k + 1)
        }
    }
}

/// `(1 − q)` as a Laurent polynomial.
pub fn one_minus_q(spec: &Arc<RingSpec>) -> QLaurent {
    QLaurent::from_coeffs(spec, [(0, RingElem::one(spec)), (1, RingElem::from_int(spec, -1))])
}

/// `J = (1 − q)·I`, termwise.
pub fn small_j_from_i(i: &NovikovSeries) -> NovikovSeries {
    let omq = one_minus_q(i.spec());
    i.map(|_, c| c.mul_laurent(&omq))
}

/// `μ_β = [(1 − q) I_β]_+`.
pub fn mu_beta(i: &NovikovSeries, b: &CurveClass) -> Result<QLaurent> {
    if b.is_zero() {
        return Err(Error::InvalidArgument("μ_β is only defined for β ≠ 0".into()));
    }
    if i.cone().degree(b) > i.cone().bound {
        return Err(Error::Overflow(format!("class {b} beyond the truncation of I")));
    }
    let ib = i.get(b).cloned().unwrap_or_else(|| QRational::zero(i.spec()));
    Ok(split(&ib.mul_laurent(&one_minus_q(i.spec()))).plus)
}

/// `μ^{≥ε} = Σ_{0 < deg β ≤ 1/ε} μ_β Q^β`.
pub fn mu_geq_epsilon(i: &NovikovSeries, eps: &BigRational) -> Result<NovikovSeries<QLaurent>> {
    if !eps.is_positive() {
        return Err(Error::InvalidArgument("ε must be positive".into()));
    }
    let top = eps.recip();
    let mut out = NovikovSeries::<QLaurent>::zero(i.cone(), i.spec());
    for b in i.cone().classes_up_to(&top) {
        if b.is_zero() || i.cone().degree(&b) > i.cone().bound {
            continue;
        }
        out.insert(b.clone(), mu_beta(i, &b)?);
    }
    Ok(out)
}

/// Both sides of the single-wall genus-0 identity at wall degree `d0`,
/// class by class: `(1−q)I_β` against `[(1−q)I_β]_- + μ_β`.
#[derive(Clone, Debug)]
pub struct WallIdentity {
    pub d0: BigRational,
    pub lhs: NovikovSeries,
    pub rhs: NovikovSeries,
}

impl WallIdentity {
    pub fn holds(&self) -> bool {
        self.lhs.same(&self.rhs)
    }
}

pub fn wall_identity(i: &NovikovSeries, d0: &BigRational) -> Result<WallIdentity> {
    let omq = one_minus_q(i.spec());
    let mut lhs = NovikovSeries::zero(i.cone(), i.spec());
    let mut rhs = NovikovSeries::zero(i.cone(), i.spec());
    for b in i.cone().classes() {
        if i.cone().degree(&b) != *d0 {
            continue;
        }
        let ib = i.get(&b).cloned().unwrap_or_else(|| QRational::zero(i.spec()));
        let j = ib.mul_laurent(&omq);
        let sp = split(&j);
        lhs.insert(b.clone(), j);
        rhs.insert(b.clone(), &sp.minus + &QRational::from(mu_beta(i, &b)?));
    }
    Ok(WallIdentity {
        d0: d0.clone(),
        lhs,
        rhs,
    })
}

/// `Res(q^{−ℓ}(1−q)I_β)` for `ℓ = 0..n` next to the expansion coefficients
/// of `[(1−q)I_β]_-` at `q = 0`.
pub fn special_evaluation(i: &NovikovSeries, b: &CurveClass, n: i64) -> Vec<(RingElem, RingElem)> {
    let ib = i.get(b).cloned().unwrap_or_else(|| QRational::zero(i.spec()));
    let j = ib.mul_laurent(&one_minus_q(i.spec()));
    let minus = split(&j).minus.expand_at_zero(n);
    (0..=n)
        .map(|l| (residue(&j.shift(-l)), minus.coeff(l)))
        .collect()
}

/// Configuration form of a [`HypergeomSpec`]: ring elements are given as
/// expressions or canonical JSON.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct HypergeomConfig {
    pub ring: RingSpec,
    pub cone: ConeSpec,
    #[serde(default)]
    pub prefactor: PrefactorConfig,
    #[serde(default)]
    pub families: Vec<FamilyConfig>,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct PrefactorConfig {
    #[serde(default)]
    pub q: Option<LinearForm>,
    #[serde(default)]
    pub units: Vec<(Value, LinearForm)>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FamilyConfig {
    pub base: Value,
    pub steps: LinearForm,
    pub exponent: i64,
}

impl HypergeomConfig {
    pub fn build(&self) -> Result<HypergeomSpec> {
        self.ring.validate()?;
        self.cone.validate()?;
        let ring = Arc::new(self.ring.clone());
        let r = self.cone.rank();
        let prefactor = Prefactor {
            q_exp: self.prefactor.q.clone().unwrap_or_else(|| LinearForm::zero(r)),
            units: self
                .prefactor
                .units
                .iter()
                .map(|(u, l)| Ok((elem_from_json(&ring, u)?, l.clone())))
                .collect::<Result<_>>()?,
        };
        let families = self
            .families
            .iter()
            .map(|f| {
                Ok(FactorFamily {
                    base: elem_from_json(&ring, &f.base)?,
                    steps: f.steps.clone(),
                    exponent: f.exponent,
                })
            })
            .collect::<Result<_>>()?;
        let spec = HypergeomSpec {
            ring,
            cone: self.cone.clone(),
            prefactor,
            families,
        };
        spec.validate()?;
        Ok(spec)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{parse_elem, ratio};
    use num_bigint::BigInt;

    fn r(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    #[test]
    fn projective_low_degrees() {
        let spec = preset_projective(2).unwrap();
        let i0 = spec.evaluate(&r(0)).unwrap();
        assert_eq!(i0.terms().len(), 1);
        let i1 = spec.evaluate(&r(1)).unwrap();
        let p = parse_elem(&spec.ring, "1 - nu").unwrap();
        let expected = QRational::from_factors(QLaurent::one(&spec.ring), &[(1, p.clone(), 2)]).unwrap();
        assert_eq!(i1.get(&CurveClass(vec![1])).unwrap(), &expected);

        let spec3 = preset_projective(3).unwrap();
        let i2 = spec3.evaluate(&r(2)).unwrap();
        let p3 = parse_elem(&spec3.ring, "1 - nu").unwrap();
        let expected =
            QRational::from_factors(QLaurent::one(&spec3.ring), &[(1, p3.clone(), 3), (2, p3, 3)]).unwrap();
        assert_eq!(i2.get(&CurveClass(vec![2])).unwrap(), &expected);
        assert!(preset_projective(1).is_err());
    }

    #[test]
    fn toy_twist_degree_one() {
        let spec = preset_toy_p1().unwrap();
        let i = spec.evaluate(&r(1)).unwrap();
        let p = parse_elem(&spec.ring, "1 - nu").unwrap();
        let expected = QRational::from_factors(QLaurent::q_pow(&spec.ring, 1), &[(1, p, 2)]).unwrap();
        assert_eq!(i.get(&CurveClass(vec![1])).unwrap(), &expected);
        let mu = mu_beta(&i, &CurveClass(vec![1])).unwrap();
        assert_eq!(mu, QLaurent::constant(parse_elem(&spec.ring, "-1 - 2*nu").unwrap()));
        let m = mu_geq_epsilon(&i, &r(1)).unwrap();
        assert_eq!(m.terms().len(), 1);
        assert!(mu_geq_epsilon(&i, &r(2)).unwrap().terms().is_empty());
        assert!(mu_beta(&i, &CurveClass(vec![0])).is_err());
    }

    #[test]
    fn untwisted_mu_vanishes() {
        let spec = preset_projective(2).unwrap();
        let i = spec.evaluate(&r(3)).unwrap();
        assert!(mu_geq_epsilon(&i, &ratio(1, 3)).unwrap().terms().is_empty());
    }

    #[test]
    fn j_from_i() {
        let spec = preset_projective(2).unwrap();
        let i = spec.evaluate(&r(1)).unwrap();
        let j = small_j_from_i(&i);
        assert_eq!(
            j.get(&CurveClass(vec![0])).unwrap(),
            &QRational::from(one_minus_q(&spec.ring))
        );
    }

    #[test]
    fn unit_prefactor_twist() {
        let spec = preset_projective(2).unwrap();
        let pinv = parse_elem(&spec.ring, "(1 - nu)^-1").unwrap();
        let tw = spec.twist(&Prefactor {
            q_exp: LinearForm(vec![0]),
            units: vec![(pinv.clone(), LinearForm(vec![1]))],
        });
        let a = spec.evaluate(&r(2)).unwrap();
        let b = tw.evaluate(&r(2)).unwrap();
        for (cls, c) in a.terms() {
            let factor = pinv.pow(cls.0[0]);
            assert_eq!(&c.scale(&factor), b.get(cls).unwrap());
        }
        let same = spec.twist(&Prefactor::identity(1)).evaluate(&r(2)).unwrap();
        assert!(same.same(&a));
    }

    #[test]
    fn negative_steps_give_numerator_factors() {
        // steps(β) = −β with exponent 1: I_β = ∏_{i=1−β}^{0} (1 − q^i u)
        let ring = RingSpec::builder().unit("u").build().unwrap();
        let u = RingElem::gen(&ring, "u").unwrap();
        let spec = HypergeomSpec {
            ring: ring.clone(),
            cone: ConeSpec::integral(&[1], 0).unwrap(),
            prefactor: Prefactor::identity(1),
            families: vec![FactorFamily {
                base: u.clone(),
                steps: LinearForm(vec![-1]),
                exponent: 1,
            }],
        };
        let c = spec.coefficient(&CurveClass(vec![2])).unwrap();
        let mut f0 = QLaurent::one(&ring);
        f0.add_term(0, &-&u);
        let mut f1 = QLaurent::one(&ring);
        f1.add_term(-1, &-&u);
        assert_eq!(c, QRational::from(&f0 * &f1));
    }

    #[test]
    fn config_round_trip() {
        let cfg: HypergeomConfig = serde_json::from_value(serde_json::json!({
            "ring": {"nilpotent": [["nu", 2]]},
            "cone": {"weights": ["1"], "bound": "0"},
            "prefactor": {"q": [1]},
            "families": [{"base": "1 - nu", "steps": [1], "exponent": 2}]
        }))
        .unwrap();
        let spec = cfg.build().unwrap();
        let a = spec.evaluate(&r(2)).unwrap();
        let b = preset_toy_p1().unwrap().evaluate(&r(2)).unwrap();
        for (cls, c) in a.terms() {
            // same ring presentation, so coefficients compare directly
            assert_eq!(c.to_string(), b.get(cls).unwrap().to_string());
        }
    }
}
