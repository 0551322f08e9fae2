use serde::{Deserialize, Serialize};

use super::elem::RingElem;
use super::spec::GenKind;
use super::{binomial_poly, rat};
use crate::{Error, Result};

/// `λ_{-1}` of the dual of a sum of line classes: `∏ (1 − line⁻¹)`.
pub fn euler_class(lines: &[RingElem]) -> Result<RingElem> {
    let mut iter = lines.iter();
    let Some(first) = iter.next() else {
        return Err(Error::InvalidArgument(
            "euler_class of an empty list needs a ring; use euler_class_in".into(),
        ));
    };
    let one = RingElem::one(first.spec());
    let mut acc = &one - &first.invert()?;
    for l in iter {
        acc = &acc * &(&one - &l.invert()?);
    }
    Ok(acc)
}

/// [`euler_class`] with an explicit ring, so the empty list gives `1`.
pub fn euler_class_in(spec: &std::sync::Arc<super::RingSpec>, lines: &[RingElem]) -> Result<RingElem> {
    if lines.is_empty() {
        Ok(RingElem::one(spec))
    } else {
        euler_class(lines)
    }
}

/// Data of a twisting class: summands `E^{(m)}`, a determinant given as an
/// integer combination of unit generators, and a level.
#[derive(Clone, Debug)]
pub struct TwistData {
    pub summands: Vec<(i64, RingElem)>,
    pub det: Vec<(String, i64)>,
    pub level: i64,
}

/// `exp(Σ_m Ψ^m(E^{(m)})/m) · det^{−l}`.
pub fn twist_class(spec: &std::sync::Arc<super::RingSpec>, d: &TwistData) -> Result<RingElem> {
    let mut exponent = RingElem::zero(spec);
    for (m, e) in &d.summands {
        if *m == 0 {
            return Err(Error::InvalidArgument("twist summand with m = 0".into()));
        }
        if !e.spec().same_as(spec) {
            return Err(Error::SpecMismatch);
        }
        let tr = spec.t_range();
        let t_free = e
            .terms()
            .keys()
            .any(|mono| tr.clone().all(|i| mono.0[i] == 0));
        if t_free {
            return Err(Error::NonTruncatingTwist(e.to_string()));
        }
        exponent += &e.adams(*m).scale(&super::ratio(1, *m));
    }
    let mut out = exponent.exp_nilpotent()?;
    if d.level != 0 {
        let mut det = RingElem::one(spec);
        for (name, c) in &d.det {
            match spec.index_of(name) {
                Some((_, GenKind::Unit)) => {
                    det = &det * &RingElem::gen_pow(spec, name, *c as i32)?;
                }
                Some(_) => {
                    return Err(Error::InvalidArgument(format!(
                        "determinant must be built from unit generators, got {name}"
                    )))
                }
                None => return Err(Error::UnknownGenerator(name.clone())),
            }
        }
        out = &out * &det.pow_i(-d.level)?;
    }
    Ok(out)
}

/// Linear functional `χ` on the nilpotent part of the ring.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum EulerCharPreset {
    /// A point: only scalars (and Newton/`t` monomials) are housed.
    Point,
    /// `P^{n−1}` with `ν = 1 − P` the named nilpotent generator of order
    /// `n`; `χ(P^i) = C(n−1−i, n−1)` read as a polynomial in `i`.
    Projective { n: u32, gen: String },
}

impl EulerCharPreset {
    fn chi_nu_power(n: u32, a: i32) -> num_rational::BigRational {
        // χ(ν^a) = Σ_i C(a,i)(−1)^i χ(P^i)
        let mut acc = rat(0);
        for i in 0..=a as i64 {
            let sign = if i % 2 == 0 { rat(1) } else { rat(-1) };
            acc += sign * binomial_poly(a as i64, i as u32) * binomial_poly(n as i64 - 1 - i, n - 1);
        }
        acc
    }

    /// `χ(a)`: a rational multiple of the residual Newton and `t` monomials.
    pub fn euler_char(&self, a: &RingElem) -> Result<RingElem> {
        let spec = a.spec();
        let housed = match self {
            EulerCharPreset::Point => None,
            EulerCharPreset::Projective { n, gen } => match spec.index_of(gen) {
                Some((idx, GenKind::Nilpotent)) => {
                    if spec.nilpotent[idx].1 != *n {
                        return Err(Error::InvalidArgument(format!(
                            "preset P^{} needs {gen}^{n} = 0",
                            n - 1
                        )));
                    }
                    Some((idx, *n))
                }
                _ => return Err(Error::UnknownGenerator(gen.clone())),
            },
        };
        let mut out = RingElem::zero(spec);
        for (m, c) in a.terms() {
            let mut residual = m.clone();
            let mut value = c.clone();
            for idx in spec.nil_range().chain(spec.unit_range()) {
                if m.0[idx] == 0 {
                    continue;
                }
                match housed {
                    Some((h, n)) if h == idx => {
                        value *= Self::chi_nu_power(n, m.0[idx]);
                        residual.0[idx] = 0;
                    }
                    _ => return Err(Error::UnhousedMonomial(spec.name_at(idx))),
                }
            }
            out += &RingElem::monomial(spec, residual, value);
        }
        Ok(out)
    }
}

/// Mukai pairing `(α, β) = χ(α·β)` on manifold presets.
pub fn mukai_pairing(preset: &EulerCharPreset, a: &RingElem, b: &RingElem) -> Result<RingElem> {
    preset.euler_char(&a.checked_mul(b)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{ratio, RingSpec};

    #[test]
    fn euler_class_examples() {
        let s = RingSpec::builder().nilpotent("nu", 2).unit("L").build().unwrap();
        let one = RingElem::one(&s);
        let l = RingElem::gen(&s, "L").unwrap();
        let linv = RingElem::gen_pow(&s, "L", -1).unwrap();
        assert_eq!(euler_class(std::slice::from_ref(&l)).unwrap(), &one - &linv);
        assert!(euler_class_in(&s, &[]).unwrap().is_one());
        let p = &one - &RingElem::gen(&s, "nu").unwrap();
        assert!(euler_class(&[p.clone(), p]).unwrap().is_zero());
        let nu = RingElem::gen(&s, "nu").unwrap();
        assert!(matches!(euler_class(&[nu]), Err(Error::NotAUnit(_))));
    }

    #[test]
    fn twist_examples() {
        let s = RingSpec::builder().unit("L").unit("u").t_var("tp", 3).build().unwrap();
        let det = TwistData {
            summands: vec![],
            det: vec![("L".into(), 1)],
            level: 1,
        };
        assert_eq!(twist_class(&s, &det).unwrap(), RingElem::gen_pow(&s, "L", -1).unwrap());
        let trivial = TwistData {
            summands: vec![],
            det: vec![("L".into(), 1)],
            level: 0,
        };
        assert!(twist_class(&s, &trivial).unwrap().is_one());
        let tu = &RingElem::gen(&s, "tp").unwrap() * &RingElem::gen(&s, "u").unwrap();
        let e = TwistData {
            summands: vec![(1, tu.clone())],
            det: vec![],
            level: 0,
        };
        let expected = &(&RingElem::one(&s) + &tu) + &(&tu * &tu).scale(&ratio(1, 2));
        assert_eq!(twist_class(&s, &e).unwrap(), expected);
        let bad = TwistData {
            summands: vec![(1, RingElem::gen(&s, "u").unwrap())],
            det: vec![],
            level: 0,
        };
        assert!(matches!(twist_class(&s, &bad), Err(Error::NonTruncatingTwist(_))));
    }

    #[test]
    fn projective_euler_characteristic() {
        let s = RingSpec::builder().nilpotent("nu", 2).build().unwrap();
        let chi = EulerCharPreset::Projective { n: 2, gen: "nu".into() };
        let one = RingElem::one(&s);
        let p = &one - &RingElem::gen(&s, "nu").unwrap();
        assert!(chi.euler_char(&one).unwrap().is_one());
        assert!(chi.euler_char(&p).unwrap().is_zero());
        assert!(mukai_pairing(&chi, &one, &one).unwrap().is_one());
    }

    #[test]
    fn hilbert_polynomial_oracle() {
        // χ(O(j)) = C(j+n−1, n−1) with O(j) = P^{−j}
        for n in 2..=5u32 {
            let s = RingSpec::builder().nilpotent("nu", n).build().unwrap();
            let chi = EulerCharPreset::Projective { n, gen: "nu".into() };
            let p = &RingElem::one(&s) - &RingElem::gen(&s, "nu").unwrap();
            for j in -6i64..=6 {
                let v = chi.euler_char(&p.pow_i(-j).unwrap()).unwrap();
                assert_eq!(v.as_scalar().unwrap(), binomial_poly(j + n as i64 - 1, n - 1), "n={n} j={j}");
            }
        }
    }

    #[test]
    fn units_are_unhoused() {
        let s = RingSpec::builder().nilpotent("nu", 2).unit("L").build().unwrap();
        let chi = EulerCharPreset::Projective { n: 2, gen: "nu".into() };
        let l = RingElem::gen(&s, "L").unwrap();
        assert!(matches!(chi.euler_char(&l), Err(Error::UnhousedMonomial(_))));
    }
}
