#![allow(dead_code)]

use std::sync::Arc;

use proptest::prelude::*;
use rand_chacha::ChaCha8Rng;

use qkwc_core::random::trial_rng;
use qkwc_core::RingSpec;

/// A strategy whose values are built from a seeded generator. Values carry
/// the seed so failures are reproducible.
pub fn seeded<T: std::fmt::Debug>(f: impl Fn(&mut ChaCha8Rng) -> T + Clone + 'static) -> impl Strategy<Value = (u64, T)> {
    any::<u64>().prop_map(move |s| {
        let mut rng = trial_rng(s, 0);
        (s, f(&mut rng))
    })
}

pub fn nil_units() -> Arc<RingSpec> {
    RingSpec::builder().nilpotent("nu", 3).unit("L").unit("M").build().unwrap()
}

pub fn full_ring() -> Arc<RingSpec> {
    RingSpec::builder()
        .nilpotent("nu", 3)
        .unit("L")
        .lambda(6, 6)
        .t_var("h", 2)
        .build()
        .unwrap()
}
