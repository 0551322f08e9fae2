use proptest::prelude::*;
use qkwc_core::novikov::{ConeSpec, CurveClass, NovikovSeries};
use qkwc_core::qfun::QLaurent;
use qkwc_core::random::trial_rng;
use qkwc_core::verify::{loccor_ring, random_potential, random_wall_input};
use qkwc_core::wallcross::{
    cor_expression, direction_zero_lines, first_order_change, loc_expression, loc_expression_enumerated,
    potential_transform, single_wall_transform, telescope, verify_loc_eq_cor, CorrelatorSeries, Increment, Insertion,
    Ledger, Symbol, WallInput,
};
use qkwc_core::{BigRational, RingElem, RingSpec};

fn config() -> impl Strategy<Value = (u32, usize, i64, u64)> {
    (1u32..=3, 1usize..=2, 1i64..=2, any::<u64>())
}

fn int(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn loc_equals_cor((m, d, r, seed) in config()) {
        let s = loccor_ring(false);
        let w = random_wall_input(&mut trial_rng(seed, 0), &s, m, d, r);
        let rep = verify_loc_eq_cor(&w).unwrap();
        prop_assert!(rep.equal, "{}", rep.diff);
        prop_assert_eq!(loc_expression_enumerated(&w).unwrap(), rep.loc);
    }

    #[test]
    fn zero_direction_cancels_in_pairs((m, d, r, seed) in config(), l in 0i64..=3) {
        let s = loccor_ring(true);
        let mut rng = trial_rng(seed, 0);
        let w = random_wall_input(&mut rng, &s, m, d, r);
        let incs = vec![Increment { class: 0, l, delta: RingElem::from_ratio(&s, 3, 2) }];
        let lines = direction_zero_lines(&w, &incs).unwrap();
        prop_assert!(lines[0].add(&lines[1]).is_zero());
        prop_assert!(lines[2].add(&lines[3]).is_zero());
        let (dloc, dcor) = first_order_change(&w, &incs, "h", false).unwrap();
        prop_assert!(dloc.is_zero());
        prop_assert!(dcor.is_zero());
    }

    #[test]
    fn infinity_direction_leaves_both_sides((m, d, r, seed) in config(), l in 1i64..=3) {
        let s = loccor_ring(true);
        let w = random_wall_input(&mut trial_rng(seed, 0), &s, m, d, r);
        let incs = vec![Increment { class: d - 1, l, delta: RingElem::from_int(&s, -2) }];
        let (dloc, dcor) = first_order_change(&w, &incs, "h", true).unwrap();
        prop_assert!(dloc.is_zero());
        prop_assert!(dcor.is_zero());
    }

    #[test]
    fn telescoping(seed in any::<u64>()) {
        let (f, mu, eps) = random_potential(&mut trial_rng(seed, 0));
        let rep = telescope(&f, &mu, &eps, "t").unwrap();
        prop_assert!(rep.equal, "iterated {} substituted {}", rep.iterated, rep.substituted);
    }

    #[test]
    fn zero_mu_is_identity(seed in any::<u64>()) {
        let (f, mu, _) = random_potential(&mut trial_rng(seed, 0));
        let zero = NovikovSeries::<QLaurent>::zero(mu.cone(), mu.spec());
        prop_assert_eq!(potential_transform(&f, &zero, "t").unwrap(), f.clone());
        for d0 in 1..=4 {
            prop_assert_eq!(single_wall_transform(&f, &zero, &int(d0)).unwrap(), f.clone());
        }
    }
}

fn line_ring() -> std::sync::Arc<RingSpec> {
    RingSpec::builder().unit("L").build().unwrap()
}

fn mu_at(cone: &ConeSpec, classes: &[Vec<u32>]) -> NovikovSeries<QLaurent> {
    let s = line_ring();
    let mut mu = NovikovSeries::<QLaurent>::zero(cone, &s);
    for c in classes {
        mu.insert(CurveClass(c.clone()), QLaurent::one(&s));
    }
    mu
}

#[test]
fn single_decomposition_adds_one_insertion() {
    let cone = ConeSpec::integral(&[1], 1).unwrap();
    let mut f = CorrelatorSeries::zero(&cone);
    let t = Insertion::Input("t".into());
    f.add_term(Symbol::new(1, CurveClass(vec![1]), vec![t.clone()]), &int(1));
    let g = single_wall_transform(&f, &mu_at(&cone, &[vec![1]]), &int(1)).unwrap();
    let mut expected = f.clone();
    expected.add_term(
        Symbol::new(1, CurveClass(vec![0]), vec![t, Insertion::Mu(CurveClass(vec![1]))]),
        &int(1),
    );
    assert_eq!(g, expected);
}

#[test]
fn repeated_tail_class_is_one_symmetrized_group() {
    let cone = ConeSpec::integral(&[1], 2).unwrap();
    let mut f = CorrelatorSeries::zero(&cone);
    f.add_term(Symbol::new(1, CurveClass(vec![2]), vec![]), &int(1));
    let g = single_wall_transform(&f, &mu_at(&cone, &[vec![1]]), &int(1)).unwrap();
    let mu1 = Insertion::Mu(CurveClass(vec![1]));
    let double = Symbol::new(1, CurveClass(vec![0]), vec![mu1.clone(), mu1.clone()]);
    let single = Symbol::new(1, CurveClass(vec![1]), vec![mu1]);
    assert_eq!(g.terms().get(&double), Some(&int(1)));
    assert_eq!(g.terms().get(&single), Some(&int(1)));
    assert_eq!(g.len(), 3);
}

#[test]
fn lowest_genus_zero_symbols_pass_through() {
    let cone = ConeSpec::integral(&[1], 2).unwrap();
    let mut f = CorrelatorSeries::zero(&cone);
    let sym = Symbol::new(0, CurveClass(vec![1]), vec![Insertion::Input("t".into())]);
    f.add_term(sym, &int(1));
    let g = single_wall_transform(&f, &mu_at(&cone, &[vec![1]]), &int(1)).unwrap();
    assert_eq!(g, f);
}

#[test]
fn two_slot_example_with_single_negative_coefficient() {
    // m = 2, g⁰ = c·q⁻¹, g^∞ = 0: Lau is c·L⁻¹ and the two symmetric
    // powers of it are all that remains.
    let s = loccor_ring(false);
    let c = RingElem::from_int(&s, 5);
    let g0 = QLaurent::monomial(-1, c.clone());
    let w = WallInput::new(&s, vec![CurveClass(vec![1])], vec![g0], vec![QLaurent::zero(&s)], 2, 1).unwrap();
    let loc = loc_expression(&w).unwrap();
    let cor = cor_expression(&w).unwrap();
    assert_eq!(loc, cor);
    assert!(!loc.is_zero());
    assert!(loc.entries().keys().all(|k| k.l < 0));
    assert_eq!(w.lau_of(0), QLaurent::from_coeffs(&s, [(-1, c)]));
    assert_eq!(loc.entries().keys().map(|k| k.k).max(), Some(2));
}

#[test]
fn vanishing_data_gives_empty_ledgers() {
    let s = loccor_ring(false);
    let z = QLaurent::zero(&s);
    let w = WallInput::new(&s, vec![CurveClass(vec![1])], vec![z.clone()], vec![z], 3, 2).unwrap();
    assert_eq!(loc_expression(&w).unwrap(), Ledger::default());
    assert!(verify_loc_eq_cor(&w).unwrap().equal);
}
