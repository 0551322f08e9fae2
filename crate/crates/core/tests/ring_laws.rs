mod common;

use proptest::prelude::*;
use qkwc_core::random;
use qkwc_core::ring::euler_class;
use qkwc_core::RingElem;

use common::{full_ring, seeded};

fn triple() -> impl Strategy<Value = (u64, (RingElem, RingElem, RingElem))> {
    seeded(|rng| {
        let s = full_ring();
        (random::elem(rng, &s, 3), random::elem(rng, &s, 3), random::elem(rng, &s, 3))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn commutative_ring_axioms((_, (a, b, c)) in triple()) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&a - &a, RingElem::zero(a.spec()));
    }

    #[test]
    fn invert_is_two_sided((_, (u, n)) in seeded(|rng| {
        let s = full_ring();
        (random::unit(rng, &s, 2), random::elem(rng, &s, 2))
    })) {
        let s = u.spec().clone();
        let nu = RingElem::gen(&s, "nu").unwrap();
        // A unit plus a nilpotent is still a unit.
        let a = &u + &(&nu * &n);
        let inv = a.invert().unwrap();
        prop_assert!((&a * &inv).is_one());
        prop_assert!((&inv * &a).is_one());
    }

    #[test]
    fn adams_is_a_ring_map((_, (a, b, _)) in triple(), r in 1i64..=3) {
        prop_assert_eq!((&a * &b).adams(r), &a.adams(r) * &b.adams(r));
        prop_assert_eq!((&a + &b).adams(r), &a.adams(r) + &b.adams(r));
        prop_assert!(RingElem::one(a.spec()).adams(r).is_one());
    }

    #[test]
    fn adams_composes_below_cutoff((_, a) in seeded(|rng| {
        let s = qkwc_core::RingSpec::builder().nilpotent("nu", 3).unit("L").lambda(12, 12).build().unwrap();
        let n1 = RingElem::gen(&s, "N1").unwrap();
        let n2 = RingElem::gen(&s, "N2").unwrap();
        let base = random::elem(rng, &s, 2);
        &(&base + &n1.scale(&random::rational(rng, 3, 2))) + &n2
    }), r in 1i64..=2, t in 1i64..=3) {
        prop_assert_eq!(a.adams(r).adams(t), a.adams(r * t));
    }

    #[test]
    fn binomial_law((_, (a, b, _)) in triple(), n in 0u32..=5) {
        let ha = a.sym_powers(n);
        let hb = b.sym_powers(n);
        let mut rhs = RingElem::zero(a.spec());
        for i in 0..=n as usize {
            rhs += &(&ha[i] * &hb[n as usize - i]);
        }
        prop_assert_eq!((&a + &b).sym_power(n), rhs);
    }

    #[test]
    fn multinomial_law((_, (a, b, c)) in triple(), n in 0u32..=4) {
        let hs = [a.sym_powers(n), b.sym_powers(n), c.sym_powers(n)];
        let mut rhs = RingElem::zero(a.spec());
        for i in 0..=n {
            for j in 0..=n - i {
                let k = n - i - j;
                rhs += &(&(&hs[0][i as usize] * &hs[1][j as usize]) * &hs[2][k as usize]);
            }
        }
        prop_assert_eq!((&(&a + &b) + &c).sym_power(n), rhs);
    }

    #[test]
    fn euler_class_is_multiplicative((_, (xs, ys)) in seeded(|rng| {
        let s = full_ring();
        let nu = RingElem::gen(&s, "nu").unwrap();
        let line = |rng: &mut rand_chacha::ChaCha8Rng| {
            let u = RingElem::gen_pow(&s, "L", rand::Rng::gen_range(rng, -2..=2)).unwrap();
            &u * &(&RingElem::one(&s) - &nu.scale(&random::rational(rng, 3, 1)))
        };
        let xs: Vec<RingElem> = (0..2).map(|_| line(rng)).collect();
        let ys: Vec<RingElem> = (0..2).map(|_| line(rng)).collect();
        (xs, ys)
    })) {
        let both: Vec<RingElem> = xs.iter().chain(ys.iter()).cloned().collect();
        prop_assert_eq!(
            euler_class(&both).unwrap(),
            &euler_class(&xs).unwrap() * &euler_class(&ys).unwrap()
        );
    }
}
