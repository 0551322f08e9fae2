//! Seeded random generators for ring elements, Laurent polynomials and
//! rational functions. Every trial gets its own ChaCha stream derived from a
//! master seed, so results do not depend on scheduling.

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::perm::{Grade, SlotElem};
use crate::qfun::{QLaurent, QRational};
use crate::ring::{Monomial, RingElem, RingSpec};

/// Generator for trial `stream` under `master`.
pub fn trial_rng(master: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master);
    rng.set_stream(stream);
    rng
}

/// `n/d` with `|n| ≤ max_num`, `1 ≤ d ≤ max_den`.
pub fn rational<R: Rng>(rng: &mut R, max_num: i64, max_den: i64) -> BigRational {
    let n = rng.gen_range(-max_num..=max_num);
    let d = rng.gen_range(1..=max_den);
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Nonzero rational.
pub fn nonzero_rational<R: Rng>(rng: &mut R, max_num: i64, max_den: i64) -> BigRational {
    loop {
        let c = rational(rng, max_num, max_den);
        if c != BigRational::from_integer(0.into()) {
            return c;
        }
    }
}

/// A monomial that survives the truncations of `spec`. Unit exponents lie
/// in `-unit_range..=unit_range`.
pub fn monomial<R: Rng>(rng: &mut R, spec: &RingSpec, unit_range: i32) -> Monomial {
    loop {
        let mut m = Monomial::zeros(spec.len());
        for (i, (_, order)) in spec.nilpotent.iter().enumerate() {
            m.0[i] = rng.gen_range(0..*order as i32);
        }
        for i in spec.unit_range() {
            m.0[i] = rng.gen_range(-unit_range..=unit_range);
        }
        let mut budget = spec.lambda.weight_cutoff as i64;
        for (j, idx) in spec.newton_range().enumerate() {
            let w = j as i64 + 1;
            if budget >= w && rng.gen_bool(0.4) {
                let e = rng.gen_range(1..=budget / w);
                m.0[idx] = e as i32;
                budget -= e * w;
            }
        }
        let ts = spec.t_range().start;
        for (j, (_, order)) in spec.t_vars.iter().enumerate() {
            m.0[ts + j] = rng.gen_range(0..*order as i32);
        }
        if spec.admits(&m) {
            return m;
        }
    }
}

/// Sum of up to `max_terms` random monomials with small rational
/// coefficients.
pub fn elem<R: Rng>(rng: &mut R, spec: &Arc<RingSpec>, max_terms: usize) -> RingElem {
    let n = rng.gen_range(1..=max_terms.max(1));
    let mut out = RingElem::zero(spec);
    for _ in 0..n {
        let m = monomial(rng, spec, 2);
        out += &RingElem::monomial(spec, m, rational(rng, 5, 3));
    }
    out
}

/// [`elem`] with every `t`-variable set to zero.
pub fn elem_constant_in_t<R: Rng>(rng: &mut R, spec: &Arc<RingSpec>, max_terms: usize) -> RingElem {
    let ts = spec.t_range();
    elem(rng, spec, max_terms).map_terms(|m, c| {
        if m.0[ts.clone()].iter().all(|e| *e == 0) {
            Some((m.clone(), c.clone()))
        } else {
            None
        }
    })
}

/// Graded slot element with `terms` random terms; grades have
/// `q, l ∈ [−2, 2]`, `w ∈ [0, 2]` and one Novikov entry in `[0, 2]`.
/// Coefficients do not involve `t`-variables.
pub fn slot<R: Rng>(rng: &mut R, spec: &Arc<RingSpec>, terms: usize) -> SlotElem {
    let mut out = SlotElem::zero(spec);
    for _ in 0..terms {
        let g = Grade::new(
            rng.gen_range(-2..=2),
            rng.gen_range(0..=2),
            rng.gen_range(-2..=2),
            &[rng.gen_range(0..=2)],
        );
        out.add_term(g, &elem_constant_in_t(rng, spec, 2));
    }
    out
}

/// `c·u` with `u` a unit-generator monomial and `c` a nonzero rational.
pub fn unit<R: Rng>(rng: &mut R, spec: &Arc<RingSpec>, unit_range: i32) -> RingElem {
    let mut m = Monomial::zeros(spec.len());
    for i in spec.unit_range() {
        m.0[i] = rng.gen_range(-unit_range..=unit_range);
    }
    RingElem::monomial(spec, m, nonzero_rational(rng, 3, 2))
}

/// Laurent polynomial with exponents in `lo..=hi`; each exponent is present
/// with probability `density`.
pub fn laurent<R: Rng>(
    rng: &mut R,
    spec: &Arc<RingSpec>,
    lo: i64,
    hi: i64,
    density: f64,
    max_terms: usize,
) -> QLaurent {
    let mut out = QLaurent::zero(spec);
    for e in lo..=hi {
        if rng.gen_bool(density) {
            out.add_term(e, &elem(rng, spec, max_terms));
        }
    }
    out
}

/// Rational function with a random numerator and between `1` and
/// `max_factors` denominator factors `(1 − q^a u)^m`, `a ∈ ±{1, 2}`,
/// `m ∈ {1, 2}`.
pub fn qrational<R: Rng>(rng: &mut R, spec: &Arc<RingSpec>, max_factors: usize) -> QRational {
    let num = laurent(rng, spec, -2, 2, 0.6, 2);
    let n = rng.gen_range(1..=max_factors.max(1));
    let factors: Vec<(i64, RingElem, u32)> = (0..n)
        .map(|_| {
            let a = rng.gen_range(1..=2) * if rng.gen_bool(0.5) { 1 } else { -1 };
            (a, unit(rng, spec, 1), rng.gen_range(1..=2))
        })
        .collect();
    QRational::from_factors(num, &factors).expect("random factors are valid")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let a: u64 = trial_rng(7, 3).gen();
        let b: u64 = trial_rng(7, 3).gen();
        let c: u64 = trial_rng(7, 4).gen();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn monomials_are_admissible() {
        let spec = RingSpec::builder()
            .nilpotent("nu", 3)
            .unit("L")
            .lambda(6, 6)
            .t_var("h", 2)
            .build()
            .unwrap();
        let mut rng = trial_rng(1, 0);
        for _ in 0..200 {
            assert!(spec.admits(&monomial(&mut rng, &spec, 2)));
        }
    }
}
