mod common;

use proptest::prelude::*;
use qkwc_core::inflated::compositions;
use qkwc_core::perm::{BracketExpr, BracketFactor, BracketTerm, Direction, Functional, Grade, SlotElem};
use qkwc_core::random;
use qkwc_core::{RingElem, RingSpec};

use common::seeded;

fn ring() -> std::sync::Arc<RingSpec> {
    RingSpec::builder().unit("a").unit("b").lambda(4, 4).t_var("h", 2).build().unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn multinomial((_, fs) in seeded(|rng| {
        let s = ring();
        let m = rand::Rng::gen_range(rng, 1..=3);
        (0..m).map(|_| random::slot(rng, &s, 2)).collect::<Vec<_>>()
    }), n in 0u32..=4) {
        let s = ring();
        let total = fs.iter().fold(SlotElem::zero(&s), |a, b| &a + b);
        let hs: Vec<Vec<SlotElem>> = fs.iter().map(|f| f.h_syms(n)).collect();
        let mut rhs = SlotElem::zero(&s);
        for ks in compositions(n as i64, fs.len(), 0) {
            let mut term = SlotElem::one(&s);
            for (i, k) in ks.iter().enumerate() {
                term = &term * &hs[i][*k as usize];
            }
            rhs += &term;
        }
        prop_assert_eq!(total.h_sym(n), rhs);
    }

    /// `h_k(F + hδ) − h_k(F) − h·δ·h_{k−1}(F)` vanishes when `h² = 0`.
    #[test]
    fn leibniz_first_order((_, (f, c)) in seeded(|rng| {
        let s = ring();
        let mut c = random::elem_constant_in_t(rng, &s, 2);
        while c.is_zero() {
            c = random::elem_constant_in_t(rng, &s, 2);
        }
        (random::slot(rng, &s, 3), c)
    }), k in 1u32..=4, q in -2i64..=2, l in -1i64..=1) {
        let s = ring();
        let h = RingElem::gen(&s, "h").unwrap();
        let delta = SlotElem::monomial(Grade::new(q, 0, l, &[0]), c);
        let moved = &f + &delta.scale(&h);
        let rest = &(&moved.h_sym(k) - &f.h_sym(k)) - &(&delta * &f.h_sym(k - 1)).scale(&h);
        prop_assert!(rest.is_zero());
        let expr = BracketExpr {
            terms: vec![BracketTerm {
                coeff: SlotElem::one(&s),
                factors: vec![
                    BracketFactor { series: 0, functional: Functional::Identity, power: k },
                    BracketFactor { series: 0, functional: Functional::Window { lo: -100, hi: -1 }, power: 1 },
                ],
            }],
        };
        let d = expr
            .directional_derivative(&[Direction { series: 0, delta: delta.clone() }])
            .unwrap()
            .evaluate(&s, std::slice::from_ref(&f))
            .unwrap();
        let before = expr.evaluate(&s, std::slice::from_ref(&f)).unwrap();
        let after = expr.evaluate(&s, &[moved]).unwrap();
        prop_assert_eq!(&after - &before, d.scale(&h));
    }

    #[test]
    fn adams_commutes_with_symmetric_powers((_, f) in seeded(|rng| random::slot(rng, &ring(), 2)), k in 0u32..=3, r in 1i64..=2) {
        prop_assert_eq!(f.h_sym(k).adams(r), f.adams(r).h_sym(k));
    }

    /// For a sum of distinct line monomials, `h_k` is the sum over
    /// multisets; each `q`-degree of it matches the multiset count.
    #[test]
    fn grading_matches_orbit_enumeration(lines in prop::collection::btree_set((-2i64..=2, -1i32..=1), 1..=4), k in 1usize..=3) {
        let s = ring();
        let lines: Vec<(i64, i32)> = lines.into_iter().collect();
        let mono = |e: i32| RingElem::gen_pow(&s, "a", e).unwrap();
        let mut f = SlotElem::zero(&s);
        for (q, e) in &lines {
            f.add_term(Grade::new(*q, 0, 0, &[]), &mono(*e));
        }
        let hk = f.h_sym(k as u32);
        let mut orbit = SlotElem::zero(&s);
        let mut stack = vec![(0usize, 0usize, 0i64, 0i32)];
        while let Some((start, used, q, e)) = stack.pop() {
            if used == k {
                orbit.add_term(Grade::new(q, 0, 0, &[]), &mono(e));
                continue;
            }
            for i in start..lines.len() {
                stack.push((i, used + 1, q + lines[i].0, e + lines[i].1));
            }
        }
        for q in -6..=6 {
            prop_assert_eq!(hk.extract_grade(q, 0), orbit.extract_grade(q, 0));
        }
    }
}
