use super::laurent::QLaurent;
use super::rational::QRational;
use crate::ring::RingElem;
use crate::Result;

/// Decomposition `f = plus + minus` with `plus` a Laurent polynomial and
/// `minus` regular at `q = 0` and vanishing at `q = ∞`.
#[derive(Clone, Debug)]
pub struct Split {
    pub plus: QLaurent,
    pub minus: QRational,
}

/// Polarization of `f`: the top degree of the numerator is reduced against
/// the unit leading coefficient of the denominator, then the negative
/// orders against its constant term `1`.
pub fn split(f: &QRational) -> Split {
    let spec = f.spec();
    let d = f.den_poly();
    let delta = f.den_degree();
    let lead_inv = f
        .den_leading()
        .invert()
        .expect("denominator leading coefficient is a unit");
    let mut num = f.num().clone();
    let mut plus = QLaurent::zero(spec);
    while let Some(top) = num.degree() {
        if top < delta {
            break;
        }
        let e = top - delta;
        let c = &num.coeff(top) * &lead_inv;
        plus.add_term(e, &c);
        num -= &d.scale(&c).shift(e);
        debug_assert!(num.degree().is_none_or(|t| t < top));
    }
    while let Some(low) = num.order() {
        if low >= 0 {
            break;
        }
        let c = num.coeff(low);
        plus.add_term(low, &c);
        num -= &d.scale(&c).shift(low);
        debug_assert!(num.order().is_none_or(|o| o > low));
    }
    let minus = QRational::from_factors(num, &[])
        .expect("no factors")
        .with_den_of(f);
    Split { plus, minus }
}

/// `Res_{q=0} + Res_{q=∞}` of `f(q) dq/q`: the constant term of the
/// expansion at `0` minus the constant term of the expansion at `∞`.
pub fn residue(f: &QRational) -> RingElem {
    let at0 = f.expand_at_zero(0).coeff(0);
    let atinf = f.expand_at_infinity(0).coeff(0);
    &at0 - &atinf
}

/// The residue read off the polarization: `minus` evaluated at `q = 0`.
pub fn residue_via_split(f: &QRational) -> RingElem {
    split(f)
        .minus
        .value_at_zero()
        .expect("minus part is regular at 0")
}

/// Value at `q = 1` of the Laurent part of `f`.
pub fn lau(f: &QRational) -> RingElem {
    split(f).plus.eval_at_one()
}

/// Check of the structural properties of a split: round trip, the minus
/// part has numerator order `≥ 0` and degree below the denominator degree.
pub fn check_split(f: &QRational, s: &Split) -> Result<bool> {
    let recombined = QRational::from(s.plus.clone()).checked_add(&s.minus)?;
    let regular_at_zero = s.minus.num().order().is_none_or(|o| o >= 0);
    let vanishes_at_inf = s
        .minus
        .num()
        .degree()
        .is_none_or(|t| t < s.minus.den_degree());
    Ok(recombined.equals(f) && regular_at_zero && vanishes_at_inf)
}
