use proptest::prelude::*;
use qkwc_core::inflated::{
    alphas_push_to_zero, distinct_points, generating_identity, koszul_reduce, pushforward, pushforward_closed_form,
    pushforward_is_symmetric, staircase_closed_form, staircase_sum, staircase_symbolic, KoszulElem, KoszulRing,
};
use qkwc_core::random::trial_rng;
use qkwc_core::{BigRational, RingElem};
use std::collections::BTreeMap;

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn staircase_at_random_points(seed in any::<u64>(), r in 1usize..=5, s in -6i64..=6) {
        let xs = distinct_points(&mut trial_rng(seed, 0), r);
        prop_assert_eq!(staircase_sum(s, &xs).unwrap(), staircase_closed_form(s, &xs).unwrap());
    }
}

#[test]
fn staircase_small_cases() {
    let xs = [q(2, 1), q(-1, 3)];
    assert_eq!(staircase_sum(1, &xs).unwrap(), q(5, 3));
    assert_eq!(staircase_sum(-2, &xs).unwrap(), q(3, 2));
    for r in 1..=4 {
        let xs: Vec<BigRational> = (1..=r as i64).map(|i| q(i + 1, i)).collect();
        assert_eq!(staircase_sum(0, &xs).unwrap(), q(1, 1));
    }
    assert!(staircase_sum(1, &[q(1, 2), q(1, 2)]).is_err());
}

#[test]
fn staircase_symbolically() {
    for r in 1..=3 {
        for s in -4..=4 {
            assert!(staircase_symbolic(s, r).unwrap(), "r = {r}, s = {s}");
        }
    }
}

#[test]
fn koszul_reduction_rank_two() {
    let ring = KoszulRing::new(2).unwrap();
    let (t1, t2) = (ring.theta(0), ring.theta(1));
    let l2 = KoszulElem::l_pow(&ring, 2);
    assert_eq!(l2.coeffs(), &[-(&t1 * &t2), &t1 + &t2]);
    let inv = KoszulElem::l_inverse(&ring);
    let e2inv = (&t1 * &t2).invert().unwrap();
    assert_eq!(inv.coeffs(), &[&(&t1 + &t2) * &e2inv, -&e2inv]);
    assert!(inv.mul(&KoszulElem::l(&ring)).sub(&KoszulElem::one(&ring)).is_zero());
    let low: BTreeMap<i64, RingElem> = [(1, t1.clone())].into_iter().collect();
    assert_eq!(koszul_reduce(&ring, &low).coeffs(), &[RingElem::zero(ring.spec()), t1.clone()]);
}

#[test]
fn pushforward_examples_rank_two() {
    let ring = KoszulRing::new(2).unwrap();
    let (t1, t2) = (ring.theta(0), ring.theta(1));
    assert_eq!(pushforward(&ring, 1), &t1 + &t2);
    assert!(pushforward(&ring, -1).is_zero());
    assert_eq!(pushforward(&ring, -2), -(&t1 * &t2).invert().unwrap());
}

#[test]
fn pushforward_closed_forms_and_symmetry() {
    for k in 1..=4 {
        let ring = KoszulRing::new(k).unwrap();
        assert!(generating_identity(&ring), "k = {k}");
        assert!(alphas_push_to_zero(&ring), "k = {k}");
        for t in -6..=6 {
            assert_eq!(pushforward(&ring, t), pushforward_closed_form(&ring, t), "k = {k}, t = {t}");
            assert!(pushforward_is_symmetric(&ring, t), "k = {k}, t = {t}");
        }
    }
}
