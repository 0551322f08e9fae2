//! Randomized and exhaustive verification suites. Each check runs a number
//! of trials with per-trial seeds derived from the master seed; trials run
//! in parallel and are collected in index order, so a report depends only
//! on the seed and the trial count.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::ifun::{mu_beta, preset_projective, preset_toy_p1, special_evaluation, small_j_from_i};
use crate::inflated::{
    alphas_push_to_zero, distinct_points, generating_identity, pushforward, pushforward_closed_form,
    pushforward_is_symmetric, staircase_closed_form, staircase_sum, staircase_symbolic, KoszulRing,
};
use crate::novikov::{ConeSpec, CurveClass, NovikovSeries};
use crate::perm::{BracketExpr, BracketFactor, BracketTerm, Direction, Functional, Grade, SlotElem};
use crate::qfun::{check_split, lau, residue, residue_via_split, split, QLaurent, QRational, Split};
use crate::random;
use crate::ring::{ratio, RingElem, RingSpec};
use crate::wallcross::{
    cor_expression, direction_zero_lines, first_order_change, j_transform, loc_expression_enumerated, telescope,
    verify_loc_eq_cor, CorrelatorSeries, Increment, Insertion, Ledger, Shape, Symbol, WallInput,
};
use crate::{Error, Result};

/// Trials per check when none are requested.
pub const DEFAULT_TRIALS: usize = 200;

/// A suite of related checks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Suite {
    Residues,
    Split,
    Lambda,
    LocCor,
    Inflated,
    Wall,
}

impl Suite {
    pub const ALL: [Suite; 6] = [
        Suite::Residues,
        Suite::Split,
        Suite::Lambda,
        Suite::LocCor,
        Suite::Inflated,
        Suite::Wall,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Suite::Residues => "residues",
            Suite::Split => "split",
            Suite::Lambda => "lambda",
            Suite::LocCor => "loccor",
            Suite::Inflated => "inflated",
            Suite::Wall => "wall",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .iter()
            .copied()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown suite {s:?}")))
    }
}

/// Deliberate corruption used as a negative control.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Fault {
    /// Every split gets a spurious `q`-term moved from `minus` to `plus`.
    Split,
}

impl FromStr for Fault {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "split" => Ok(Fault::Split),
            _ => Err(Error::InvalidArgument(format!("unknown fault {s:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct Context {
    pub fault: Option<Fault>,
}

impl Context {
    fn split(&self, f: &QRational) -> Split {
        let mut s = split(f);
        if self.fault == Some(Fault::Split) {
            let spec = f.spec().clone();
            let bump = QLaurent::q_pow(&spec, 1);
            s.plus += &bump;
        }
        s
    }
}

type TrialFn = fn(&mut ChaCha8Rng, usize, &Context) -> std::result::Result<(), String>;

/// One named identity, checked over `count(trials)` trials.
#[derive(Clone, Copy)]
pub struct Check {
    pub name: &'static str,
    /// Trials for a requested trial count.
    pub count: fn(usize) -> usize,
    pub run: TrialFn,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub name: String,
    pub trials: usize,
    pub passed: usize,
    pub failed: usize,
    /// The failing trial with the smallest index.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<String>,
}

impl CheckReport {
    pub fn ok(&self) -> bool {
        self.failed == 0
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub seed: u64,
    pub trials: usize,
    pub passed: bool,
    pub checks: Vec<CheckReport>,
}

fn check_stream(seed: u64, name: &str) -> u64 {
    // FNV-1a over the check name keeps streams of different checks apart.
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in name.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x0100_0000_01b3);
    }
    seed ^ h
}

/// Run one check for exactly `n` trials.
pub fn run_check_n(check: &Check, seed: u64, n: usize, ctx: &Context) -> CheckReport {
    let master = check_stream(seed, check.name);
    let outcomes: Vec<std::result::Result<(), String>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut rng = random::trial_rng(master, i as u64);
            (check.run)(&mut rng, i, ctx)
        })
        .collect();
    let failed = outcomes.iter().filter(|o| o.is_err()).count();
    let counterexample = outcomes
        .iter()
        .enumerate()
        .find_map(|(i, o)| o.as_ref().err().map(|e| format!("trial {i}: {e}")));
    CheckReport {
        name: check.name.to_string(),
        trials: n,
        passed: n - failed,
        failed,
        counterexample,
    }
}

pub fn run_check(check: &Check, seed: u64, trials: usize, ctx: &Context) -> CheckReport {
    run_check_n(check, seed, (check.count)(trials), ctx)
}

/// Look a check up by suite and name.
pub fn find_check(suite: Suite, name: &str) -> Option<Check> {
    checks(suite).into_iter().find(|c| c.name == name)
}

pub fn run_suite(suite: Suite, seed: u64, trials: usize, ctx: &Context) -> SuiteReport {
    let checks: Vec<CheckReport> = checks(suite).iter().map(|c| run_check(c, seed, trials, ctx)).collect();
    SuiteReport {
        suite: suite.name().to_string(),
        seed,
        trials,
        passed: checks.iter().all(CheckReport::ok),
        checks,
    }
}

fn same(n: usize) -> usize {
    n
}

fn once(_: usize) -> usize {
    1
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err_str(e: Error) -> String {
    e.to_string()
}

pub fn checks(suite: Suite) -> Vec<Check> {
    match suite {
        Suite::Residues => vec![
            Check { name: "laurent_residue_vanishes", count: same, run: residue_of_laurent },
            Check { name: "change_of_variable", count: same, run: change_of_variable },
            Check { name: "inversion_flips_sign", count: same, run: inversion_flips_sign },
            Check { name: "constant_over_pole", count: same, run: constant_over_pole },
            Check { name: "geometric_expansion", count: same, run: geometric_expansion },
            Check { name: "two_routes", count: same, run: residue_two_routes },
            Check { name: "linearity", count: same, run: residue_linearity },
        ],
        Suite::Split => vec![
            Check { name: "recombination", count: same, run: split_recombination },
            Check { name: "negative_projection", count: same, run: negative_projection },
            Check { name: "lau_from_expansions", count: same, run: lau_from_expansions },
        ],
        Suite::Lambda => vec![
            Check { name: "adams_homomorphism", count: same, run: adams_homomorphism },
            Check { name: "multinomial", count: same, run: multinomial },
            Check { name: "leibniz", count: same, run: leibniz },
            Check { name: "grading_additivity", count: same, run: grading_additivity },
        ],
        Suite::LocCor => vec![
            Check { name: "loc_eq_cor", count: per_config, run: loc_eq_cor },
            Check { name: "enumeration_oracle", count: same, run: enumeration_oracle },
            Check { name: "direction_zero", count: same, run: direction_zero },
            Check { name: "direction_infinity", count: same, run: direction_infinity },
        ],
        Suite::Inflated => vec![
            Check { name: "staircase", count: same, run: staircase },
            Check { name: "staircase_symbolic", count: once, run: staircase_symbolic_all },
            Check { name: "pushforward_closed_form", count: once, run: pushforward_closed_forms },
            Check { name: "generating_identity", count: once, run: generating_identities },
        ],
        Suite::Wall => vec![
            Check { name: "q_difference", count: once, run: q_difference },
            Check { name: "untwisted_mu_vanishes", count: once, run: untwisted_mu_vanishes },
            Check { name: "mu_consistency", count: once, run: mu_consistency },
            Check { name: "wall_identity", count: once, run: wall_identities },
            Check { name: "special_evaluation", count: once, run: special_evaluations },
            Check { name: "ifun_wall_input", count: once, run: ifun_wall_input },
            Check { name: "telescoping", count: same, run: telescoping },
        ],
    }
}

fn residue_ring() -> Arc<RingSpec> {
    RingSpec::builder()
        .nilpotent("nu", 3)
        .unit("L")
        .unit("M")
        .build()
        .expect("valid ring")
}

fn residue_of_laurent(rng: &mut ChaCha8Rng, _: usize, _: &Context) -> std::result::Result<(), String> {
    let s = residue_ring();
    let p = random::laurent(rng, &s, -4, 4, 0.6, 3);
    let f = QRational::from(p.clone());
    let r = residue(&f);
    ensure(r.is_zero(), || format!("Res({p}) = {r}"))
}

fn random_substitution(rng: &mut ChaCha8Rng, s: &Arc<RingSpec>) -> RingElem {
    let mut u = random::unit(rng, s, 1);
    if rng.gen_bool(0.3) {
        u = &u * &(&RingElem::one(s) - &RingElem::gen(s, "nu").expect("nu"));
    }
    u
}

fn change_of_variable(rng: &mut ChaCha8Rng, _: usize, _: &Context) -> std::result::Result<(), String> {
    let s = residue_ring();
    let f = random::qrational(rng, &s, 3);
    let r = rng.gen_range(1..=3);
    let u = random_substitution(rng, &s);
    let g = f.substitute(r, &u).map_err(err_str)?;
    let (a, b) = (residue(&f), residue(&g));
    ensure(a == b, || format!("f = {f}, r = {r}, u = {u}: Res(f) = {a}, Res(f(q^r u)) = {b}"))
}

/// `q ↦ q^{-1}` reverses the orientation of `dq/q`, so negative exponents
/// flip the sign of the residue.
fn inversion_flips_sign(rng: &mut ChaCha8Rng, _: usize, _: &Context) -> std::result::Result<(), String> {
    let s = residue_ring();
    let f = random::qrational(rng, &s, 3);
    let r = -rng.gen_range(1..=3);
    let u = random_substitution(rng, &s);
    let g = f.substitute(r, &u).map_err(err_str)?;
    let (a, b) = (residue(&f), residue(&g));
    ensure(a == -&b, || format!("f = {f}, r = {r}, u = {u}: Res(f) = {a}, Res(f(q^r u)) = {b}"))
}

fn nilpotent_coefficient(rng: &mut ChaCha8Rng, s: &Arc<RingSpec>) -> RingElem {
    let nu = RingElem::gen(s, "nu").expect("nu");
    let mut g = RingElem::zero(s);
    for e in 0..3 {
        g += &nu.pow(e).scale(&random::rational(rng, 6, 4));
    }
    g
}

fn constant_over_pole(rng: &mut ChaCha8Rng, _: usize, _: &Context) -> std::result::Result<(), String> {
    let s = residue_ring();
    let g = nilpotent_coefficient(rng, &s);
    let l = RingElem::gen(&s, "L").map_err(err_str)?;
    let minus = QRational::pole(-1, &l).map_err(err_str)?.scale(&g);
    let plus = QRational::pole(1, &l).map_err(err_str)?.scale(&g);
    let (a, b) = (residue(&minus), residue(&plus));
    ensure(a == -&g && b == g, || format!("g = {g}: Res(g/(1-q^-1 L)) = {a}, Res(g/(1-qL)) = {b}"))
}

/// `Res(g/(1 − q^{-1}L)) = −Σ_{i≥1} [g]_{−i} L^{−i} − Σ_{i≥0} [g(1/q)]_{−i} L^i`
/// for a Laurent polynomial `g`.
fn geometric_expansion(rng: &mut ChaCha8Rng, _: usize, _: &Context) -> std::result::Result<(), String> {
    let s = residue_ring();
    let g = random::laurent(rng, &s, -3, 3, 0.6, 2);
    let l = RingElem::gen(&s, "L").map_err(err_str)?;
    let f = QRational::pole(-1, &l).map_err(err_str)?.mul_laurent(&g);
    let mut expected = RingElem::zero(&s);
    for (e, c) in g.coeffs() {
        // [g]_{−i} L^{−i} for i ≥ 1 and [g(1/q)]_{−i} L^i = [g]_i L^i for i ≥ 0.
        expected -= &(c * &l.pow_i(*e).map_err(err_str)?);
    }
    let got = residue(&f);
    ensure(got == expected, || format!("g = {g}: Res = {got}, expected {expected}"))
}

fn residue_two_routes(rng: &mut ChaCha8Rng, _: usize, _: &Context) -> std::result::Result<(), String> {
    let s = residue_ring();
    let f = random::qrational(rng, &s, 3);
    let (a, b) = (residue(&f), residue_via_split(&f));
    ensure(a == b, || format!("f = {f}: expansions give {a}, split gives {b}"))
}

fn residue_linearity(rng: &mut ChaCha8Rng, _: usize, _: &Context) -> std::result::Result<(), String> {
    let s = residue_ring();
    let f = random::qrational(rng, &s, 2);
    let g = random::qrational(rng, &s, 2);
    let c = random::elem(rng, &s, 2);
    let lhs = residue(&(&f.scale(&c) + &g));
    let rhs = &(&residue(&f) * &c) + &residue(&g);
    ensure(lhs == rhs, || format!("f = {f}, g = {g}, c = {c}"))
}

fn split_recombination(rng: &mut ChaCha8Rng, _: usize, ctx: &Context) -> std::result::Result<(), String> {
    let s = residue_ring();
    let f = random::qrational(rng, &s, 3);
    let sp = ctx.split(&f);
    let ok = check_split(&f, &sp).map_err(err_str)?;
    ensure(ok, || format!("f = {f}: plus = {}, minus = {}", sp.plus, sp.minus))
}

fn negative_projection(rng: &mut ChaCha8Rng, _: usize, ctx: &Context) -> std::result::Result<(), String> {
    let s = residue_ring();
    let h = random::qrational(rng, &s, 3);
    let minus = ctx.split(&h).minus;
    let ex = minus.expand_at_zero(24);
    for i in 0..25 {
        let res = residue(&h.shift(-i));
        if res != ex.coeff(i) {
            return Err(format!("h = {h}, i = {i}: Res(q^-i h) = {res}, [h]_- coefficient {}", ex.coeff(i)));
        }
    }
    Ok(())
}

/// `Lau(f) = Σ_{s≥1} [(f)_0]_{−s} + Σ_{t≥0} [(f)_∞]_{−t}`.
fn lau_from_expansions(rng: &mut ChaCha8Rng, _: usize, ctx: &Context) -> std::result::Result<(), String> {
    let s = residue_ring();
    let f = random::qrational(rng, &s, 3);
    let at0 = f.expand_at_zero(0);
    let atinf = f.expand_at_infinity(0);
    let mut expected = RingElem::zero(&s);
    for (e, c) in at0.coeffs() {
        if *e < 0 {
            expected += c;
        }
    }
    for c in atinf.coeffs().values() {
        expected += c;
    }
    let got = lau(&f);
    ensure(got == expected, || format!("f = {f}: Lau = {got}, from expansions {expected}"))?;
    let via_split = ctx.split(&f).plus.eval_at_one();
    ensure(via_split == expected, || format!("f = {f}: [f]_+(1) = {via_split}, from expansions {expected}"))
}

fn lambda_ring() -> Arc<RingSpec> {
    RingSpec::builder()
        .unit("a")
        .unit("b")
        .lambda(4, 4)
        .t_var("h", 2)
        .build()
        .expect("valid ring")
}

fn adams_homomorphism(rng: &mut ChaCha8Rng, _: usize, _: &Context) -> std::result::Result<(), String> {
    let s = RingSpec::builder()
        .nilpotent("nu", 3)
        .unit("a")
        .lambda(6, 6)
        .build()
        .map_err(err_str)?;
    let x = random::elem(rng, &s, 3);
    let y = random::elem(rng, &s, 3);
    let r = rng.gen_range(1..=3);
    let t = rng.gen_range(1..=2);
    ensure((&x * &y).adams(r) == &x.adams(r) * &y.adams(r), || format!("Ψ^{r} not multiplicative on {x}, {y}"))?;
    ensure((&x + &y).adams(r) == &x.adams(r) + &y.adams(r), || format!("Ψ^{r} not additive on {x}, {y}"))?;
    ensure(x.adams(r).adams(t) == x.adams(r * t), || format!("Ψ^{t}Ψ^{r} ≠ Ψ^{} on {x}", r * t))
}

/// `h_n(Σ F_i) = Σ_{Σk_i = n} ∏ h_{k_i}(F_i)`.
fn multinomial(rng: &mut ChaCha8Rng, _: usize, _: &Context) -> std::result::Result<(), String> {
    let s = lambda_ring();
    let m = rng.gen_range(2..=3);
    let n = rng.gen_range(1..=5) as u32;
    let fs: Vec<SlotElem> = (0..m).map(|_| random::slot(rng, &s, 2)).collect();
    let total = fs.iter().fold(SlotElem::zero(&s), |a, b| &a + b);
    let lhs = total.h_sym(n);
    let hs: Vec<Vec<SlotElem>> = fs.iter().map(|f| f.h_syms(n)).collect();
    let mut rhs = SlotElem::zero(&s);
    for ks in crate::inflated::compositions(n as i64, m, 0) {
        let term = ks
            .iter()
            .enumerate()
            .fold(SlotElem::one(&s), |acc, (i, k)| &acc * &hs[i][*k as usize]);
        rhs += &term;
    }
    ensure(lhs == rhs, || format!("n = {n}, inputs {fs:?}"))
}

/// First order in a nilpotent `h`: `h_k(F + hδ) = h_k(F) + h·δ·h_{k−1}(F)`,
/// against the bracket directional derivative.
fn leibniz(rng: &mut ChaCha8Rng, _: usize, _: &Context) -> std::result::Result<(), String> {
    let s = lambda_ring();
    let h = RingElem::gen(&s, "h").map_err(err_str)?;
    let k = rng.gen_range(1..=4) as u32;
    let f = random::slot(rng, &s, 3);
    let g = Grade::new(rng.gen_range(-2..=2), 0, rng.gen_range(-1..=1), &[rng.gen_range(0..=1)]);
    let mut dc = random::elem_constant_in_t(rng, &s, 2);
    while dc.is_zero() {
        dc = random::elem_constant_in_t(rng, &s, 2);
    }
    let delta = SlotElem::monomial(g, dc);
    let moved = &f + &delta.scale(&h);
    let brute = &moved.h_sym(k) - &f.h_sym(k);
    let expected = (&delta * &f.h_sym(k - 1)).scale(&h);
    ensure(brute == expected, || format!("k = {k}, F = {f:?}, δ = {delta:?}"))?;
    let expr = BracketExpr {
        terms: vec![BracketTerm {
            coeff: SlotElem::one(&s),
            factors: vec![BracketFactor { series: 0, functional: Functional::Identity, power: k }],
        }],
    };
    let d = expr
        .directional_derivative(&[Direction { series: 0, delta: delta.clone() }])
        .map_err(err_str)?
        .evaluate(&s, std::slice::from_ref(&f))
        .map_err(err_str)?;
    ensure(d.scale(&h) == brute, || format!("bracket derivative differs for k = {k}"))
}

/// For sums of distinct line monomials `h_k` is the sum over multisets of
/// products; extracting a `q`-degree commutes with that enumeration.
fn grading_additivity(rng: &mut ChaCha8Rng, _: usize, _: &Context) -> std::result::Result<(), String> {
    let s = lambda_ring();
    let k = rng.gen_range(1..=3);
    let mut lines: Vec<(i64, i32, i32)> = Vec::new();
    let want = rng.gen_range(1..=4);
    while lines.len() < want {
        let x = (rng.gen_range(-2..=2), rng.gen_range(-1..=1), rng.gen_range(-1..=1));
        if !lines.contains(&x) {
            lines.push(x);
        }
    }
    let mono = |ea: i32, eb: i32| {
        let a = RingElem::gen_pow(&s, "a", ea).expect("a");
        let b = RingElem::gen_pow(&s, "b", eb).expect("b");
        &a * &b
    };
    let mut f = SlotElem::zero(&s);
    for (q, ea, eb) in &lines {
        f.add_term(Grade::new(*q, 0, 0, &[]), &mono(*ea, *eb));
    }
    let hk = f.h_sym(k as u32);
    let mut orbit = SlotElem::zero(&s);
    let idx: Vec<usize> = (0..lines.len()).collect();
    for ms in itertools::Itertools::combinations_with_replacement(idx.into_iter(), k) {
        let (mut q, mut ea, mut eb) = (0, 0, 0);
        for i in ms {
            q += lines[i].0;
            ea += lines[i].1;
            eb += lines[i].2;
        }
        orbit.add_term(Grade::new(q, 0, 0, &[]), &mono(ea, eb));
    }
    for q in -2 * k as i64..=2 * k as i64 {
        ensure(hk.extract_grade(q, 0) == orbit.extract_grade(q, 0), || {
            format!("k = {k}, lines {lines:?}, degree {q}")
        })?;
    }
    ensure(hk == orbit, || format!("k = {k}, lines {lines:?}"))
}

/// `m ∈ {1,2,3}`, `|D| ∈ {1,2}`, `r ∈ {1,2}`.
pub const LOCCOR_CONFIGS: [(u32, usize, i64); 12] = [
    (1, 1, 1),
    (1, 1, 2),
    (1, 2, 1),
    (1, 2, 2),
    (2, 1, 1),
    (2, 1, 2),
    (2, 2, 1),
    (2, 2, 2),
    (3, 1, 1),
    (3, 1, 2),
    (3, 2, 1),
    (3, 2, 2),
];

fn per_config(n: usize) -> usize {
    n * LOCCOR_CONFIGS.len()
}

/// `Λ` with `N_1..N_6` and weight cutoff 6.
pub fn loccor_ring(nilpotent_h: bool) -> Arc<RingSpec> {
    let b = RingSpec::builder().lambda(6, 6);
    let b = if nilpotent_h { b.t_var("h", 2) } else { b };
    b.build().expect("valid ring")
}

/// Random wall data with windows `q^{-3..3}`.
pub fn random_wall_input(rng: &mut ChaCha8Rng, spec: &Arc<RingSpec>, m: u32, classes: usize, r: i64) -> WallInput {
    let cls: Vec<CurveClass> = if classes == 1 {
        vec![CurveClass(vec![1])]
    } else {
        (0..classes)
            .map(|i| {
                let mut v = vec![0; classes];
                v[i] = 1;
                CurveClass(v)
            })
            .collect()
    };
    let window = |rng: &mut ChaCha8Rng| {
        let mut p = QLaurent::zero(spec);
        for e in -3..=3 {
            if rng.gen_bool(0.5) {
                p.add_term(e, &random::elem_constant_in_t(rng, spec, 2));
            }
        }
        p
    };
    let g0 = (0..classes).map(|_| window(rng)).collect();
    let ginf = (0..classes).map(|_| window(rng)).collect();
    WallInput::new(spec, cls, g0, ginf, m, r).expect("valid wall input")
}

fn loc_eq_cor(rng: &mut ChaCha8Rng, i: usize, _: &Context) -> std::result::Result<(), String> {
    let (m, d, r) = LOCCOR_CONFIGS[i % LOCCOR_CONFIGS.len()];
    let s = loccor_ring(false);
    let w = random_wall_input(rng, &s, m, d, r);
    let rep = verify_loc_eq_cor(&w).map_err(err_str)?;
    ensure(rep.equal, || format!("m = {m}, |D| = {d}, r = {r}, input {}\nLoc − Cor:\n{}", w.to_json(), rep.diff))
}

fn enumeration_oracle(rng: &mut ChaCha8Rng, i: usize, _: &Context) -> std::result::Result<(), String> {
    let (m, d, r) = LOCCOR_CONFIGS[i % LOCCOR_CONFIGS.len()];
    let s = loccor_ring(false);
    let w = random_wall_input(rng, &s, m, d, r);
    let fast = verify_loc_eq_cor(&w).map_err(err_str)?.loc;
    let slow = loc_expression_enumerated(&w).map_err(err_str)?;
    ensure(fast == slow, || format!("input {}\nresummed − enumerated:\n{}", w.to_json(), fast.diff(&slow)))
}

fn random_increments(rng: &mut ChaCha8Rng, w: &WallInput, s: &Arc<RingSpec>, min_l: i64) -> Vec<Increment> {
    let n = rng.gen_range(1..=w.classes.len());
    let mut idx: Vec<usize> = (0..w.classes.len()).collect();
    idx.shuffle(rng);
    idx.into_iter()
        .take(n)
        .map(|class| Increment {
            class,
            l: rng.gen_range(min_l..=3),
            delta: random::elem_constant_in_t(rng, s, 2),
        })
        .collect()
}

fn direction_zero(rng: &mut ChaCha8Rng, i: usize, _: &Context) -> std::result::Result<(), String> {
    let (m, d, r) = LOCCOR_CONFIGS[i % LOCCOR_CONFIGS.len()];
    let s = loccor_ring(true);
    let w = random_wall_input(rng, &s, m, d, r);
    let incs = random_increments(rng, &w, &s, 0);
    let lines = direction_zero_lines(&w, &incs).map_err(err_str)?;
    let ctx = || format!("m = {m}, |D| = {d}, r = {r}, increments {incs:?}");
    ensure(lines[0].add(&lines[1]).is_zero(), || format!("first pair does not cancel: {}", ctx()))?;
    ensure(lines[2].add(&lines[3]).is_zero(), || format!("second pair does not cancel: {}", ctx()))?;
    let (dloc, dcor) = first_order_change(&w, &incs, "h", false).map_err(err_str)?;
    let total = lines.iter().fold(Ledger::default(), |a, b| a.add(b));
    ensure(dloc == total, || format!("∇Loc differs from the four groups: {}", ctx()))?;
    ensure(dcor.is_zero(), || format!("∇Cor ≠ 0: {}", ctx()))
}

fn direction_infinity(rng: &mut ChaCha8Rng, i: usize, _: &Context) -> std::result::Result<(), String> {
    let (m, d, r) = LOCCOR_CONFIGS[i % LOCCOR_CONFIGS.len()];
    let s = loccor_ring(true);
    let w = random_wall_input(rng, &s, m, d, r);
    let incs = random_increments(rng, &w, &s, 1);
    let (dloc, dcor) = first_order_change(&w, &incs, "h", true).map_err(err_str)?;
    ensure(dloc == dcor, || format!("m = {m}, |D| = {d}, r = {r}, increments {incs:?}: ∇(Loc − Cor) ≠ 0"))?;
    ensure(dcor.is_zero(), || format!("∇Cor ≠ 0 along ∞-chart increments {incs:?}"))
}

fn staircase(rng: &mut ChaCha8Rng, _: usize, _: &Context) -> std::result::Result<(), String> {
    for r in 1..=5 {
        for s in -6..=6 {
            let xs = distinct_points(rng, r);
            let a = staircase_sum(s, &xs).map_err(err_str)?;
            let b = staircase_closed_form(s, &xs).map_err(err_str)?;
            if a != b {
                return Err(format!("r = {r}, s = {s}, x = {xs:?}: sum {a}, closed form {b}"));
            }
        }
    }
    Ok(())
}

fn staircase_symbolic_all(_: &mut ChaCha8Rng, _: usize, _: &Context) -> std::result::Result<(), String> {
    for r in 1..=3 {
        for s in -6..=6 {
            ensure(staircase_symbolic(s, r).map_err(err_str)?, || format!("r = {r}, s = {s}"))?;
        }
    }
    Ok(())
}

fn pushforward_closed_forms(_: &mut ChaCha8Rng, _: usize, _: &Context) -> std::result::Result<(), String> {
    for k in 1..=4 {
        let ring = KoszulRing::new(k).map_err(err_str)?;
        for t in -6..=6 {
            let a = pushforward(&ring, t);
            let b = pushforward_closed_form(&ring, t);
            ensure(a == b, || format!("k = {k}, t = {t}: Koszul route {a}, closed form {b}"))?;
            ensure(pushforward_is_symmetric(&ring, t), || format!("k = {k}, t = {t}: not symmetric"))?;
        }
    }
    Ok(())
}

fn generating_identities(_: &mut ChaCha8Rng, _: usize, _: &Context) -> std::result::Result<(), String> {
    for k in 1..=4 {
        let ring = KoszulRing::new(k).map_err(err_str)?;
        ensure(generating_identity(&ring), || format!("k = {k}: generating identity fails"))?;
        ensure(alphas_push_to_zero(&ring), || format!("k = {k}: p_*(α_i) ≠ 0"))?;
    }
    Ok(())
}

fn projective_series(n: u32, d: i64) -> Result<NovikovSeries> {
    preset_projective(n)?.evaluate(&ratio(d, 1))
}

/// `(1 − q^d P)^n I_d = I_{d−1}`.
fn q_difference(_: &mut ChaCha8Rng, _: usize, _: &Context) -> std::result::Result<(), String> {
    for n in 2..=4u32 {
        let i = projective_series(n, 4).map_err(err_str)?;
        let s = i.spec().clone();
        let p = &RingElem::one(&s) - &RingElem::gen(&s, "nu").map_err(err_str)?;
        for d in 1..=4u32 {
            let mut fac = QLaurent::one(&s);
            fac.add_term(d as i64, &-&p);
            let lhs = i.get(&CurveClass(vec![d])).ok_or("missing I_d")?.mul_laurent(&fac.pow(n));
            let rhs = i.get(&CurveClass(vec![d - 1])).ok_or("missing I_{d-1}")?;
            ensure(lhs.equals(rhs), || format!("n = {n}, d = {d}"))?;
        }
    }
    Ok(())
}

fn untwisted_mu_vanishes(_: &mut ChaCha8Rng, _: usize, _: &Context) -> std::result::Result<(), String> {
    for n in 2..=4u32 {
        let i = projective_series(n, 4).map_err(err_str)?;
        for d in 1..=4u32 {
            let mu = mu_beta(&i, &CurveClass(vec![d])).map_err(err_str)?;
            ensure(mu.is_zero(), || format!("n = {n}, d = {d}: μ = {mu}"))?;
        }
    }
    Ok(())
}

fn preset_series() -> Result<Vec<(String, NovikovSeries)>> {
    let mut out = Vec::new();
    for n in 2..=4u32 {
        out.push((format!("P{}", n - 1), projective_series(n, 4)?));
    }
    out.push(("toy-P1".to_string(), preset_toy_p1()?.evaluate(&ratio(4, 1))?));
    Ok(out)
}

fn mu_consistency(_: &mut ChaCha8Rng, _: usize, _: &Context) -> std::result::Result<(), String> {
    for (name, i) in preset_series().map_err(err_str)? {
        let j = small_j_from_i(&i);
        for (b, jb) in j.terms() {
            if b.is_zero() {
                continue;
            }
            let mu = QRational::from(mu_beta(&i, b).map_err(err_str)?);
            let back = &mu + &split(jb).minus;
            ensure(back.equals(jb), || format!("{name}, β = {b}"))?;
        }
    }
    Ok(())
}

fn wall_identities(_: &mut ChaCha8Rng, _: usize, _: &Context) -> std::result::Result<(), String> {
    for (name, i) in preset_series().map_err(err_str)? {
        for k in 1..=4 {
            let eps = ratio(1, k);
            let t = QLaurent::zero(i.spec());
            let rep = j_transform(&t, &i, &eps).map_err(err_str)?;
            ensure(rep.holds, || format!("{name}, ε = 1/{k}"))?;
        }
    }
    Ok(())
}

fn special_evaluations(_: &mut ChaCha8Rng, _: usize, _: &Context) -> std::result::Result<(), String> {
    for (name, i) in preset_series().map_err(err_str)? {
        for d in 1..=4u32 {
            for (l, (res, coeff)) in special_evaluation(&i, &CurveClass(vec![d]), 12).into_iter().enumerate() {
                ensure(res == coeff, || format!("{name}, d = {d}, ℓ = {l}: {res} vs {coeff}"))?;
            }
        }
    }
    Ok(())
}

/// Wall data read off the twisted line: the one-slot corrected value is
/// `−μ_γ(L)` and `Loc = Cor` at every class and wall.
fn ifun_wall_input(_: &mut ChaCha8Rng, _: usize, _: &Context) -> std::result::Result<(), String> {
    let i = preset_toy_p1().and_then(|p| p.evaluate(&ratio(4, 1))).map_err(err_str)?;
    for beta in 1..=4u32 {
        for d0 in 1..=beta {
            for r in 1..=2 {
                let w = WallInput::from_ifun(&i, &CurveClass(vec![beta]), &ratio(d0 as i64, 1), r, 8)
                    .map_err(err_str)?;
                let rep = verify_loc_eq_cor(&w).map_err(err_str)?;
                ensure(rep.equal, || format!("β = {beta}, d0 = {d0}, r = {r}:\n{}", rep.diff))?;
                let cor = cor_expression(&w).map_err(err_str)?;
                let gamma = CurveClass(vec![d0]);
                let mu = mu_beta(&i, &gamma).map_err(err_str)?;
                for (e, c) in mu.coeffs() {
                    let got = cor.get(&Shape { k: 1, tail: gamma.clone(), l: *e }).cloned();
                    ensure(got == Some(-c), || format!("β = {beta}, d0 = {d0}: L^{e} entry {got:?}, μ coefficient {c}"))?;
                }
                let ones = cor.entries().keys().filter(|s| s.k == 1).count();
                ensure(ones == mu.coeffs().len(), || format!("β = {beta}, d0 = {d0}: extra one-slot entries"))?;
                ensure(w.lau_of(0) == mu, || format!("Lau differs from μ at d0 = {d0}"))?;
                let f = i.get(&gamma).cloned().expect("present").mul_laurent(&crate::ifun::one_minus_q(i.spec()));
                ensure(lau(&f) == mu.eval_at_one(), || format!("Lau(f) ≠ μ(1) at d0 = {d0}"))?;
            }
        }
    }
    Ok(())
}

/// A random potential of one or two symbols of genus `≥ 1` over a rank-1
/// or rank-2 cone with degree bound 4, and random nonzero `μ`'s.
pub fn random_potential(rng: &mut ChaCha8Rng) -> (CorrelatorSeries, NovikovSeries<QLaurent>, num_rational::BigRational) {
    let rank = rng.gen_range(1..=2);
    let weights: Vec<i64> = (0..rank).map(|_| rng.gen_range(1..=2)).collect();
    let cone = ConeSpec::integral(&weights, 4).expect("valid cone");
    let spec = RingSpec::builder().unit("L").build().expect("valid ring");
    let classes: Vec<CurveClass> = cone.classes().into_iter().filter(|c| !c.is_zero()).collect();
    let mut mu = NovikovSeries::<QLaurent>::zero(&cone, &spec);
    for c in &classes {
        if rng.gen_bool(0.6) {
            mu.insert(c.clone(), random::laurent(rng, &spec, -1, 1, 0.7, 1));
        }
    }
    let mut f = CorrelatorSeries::zero(&cone);
    for _ in 0..rng.gen_range(1..=2) {
        let class = classes.choose(rng).cloned().unwrap_or_else(|| CurveClass::zero(rank));
        let mut ins = vec![Insertion::Input("t".into()); rng.gen_range(0..=2)];
        if rng.gen_bool(0.3) {
            ins.push(Insertion::Input("s".into()));
        }
        let sym = Symbol::new(rng.gen_range(1..=2), class, ins);
        f.add_term(sym, &random::nonzero_rational(rng, 5, 3));
    }
    let degs = cone.attainable_degrees(&cone.bound);
    let top = degs.choose(rng).cloned().unwrap_or_else(|| ratio(1, 1));
    (f, mu, top.recip())
}

fn telescoping(rng: &mut ChaCha8Rng, _: usize, _: &Context) -> std::result::Result<(), String> {
    let (f, mu, eps) = random_potential(rng);
    let rep = telescope(&f, &mu, &eps, "t").map_err(err_str)?;
    ensure(rep.equal, || {
        format!(
            "F = {f}, ε = {eps}:\niterated {}\nsubstituted {}",
            rep.iterated, rep.substituted
        )
    })
}
