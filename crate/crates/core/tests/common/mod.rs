#![allow(dead_code)]

use mdslab_core::exact::{rat, Rational};
use mdslab_core::Slopes;
use num_traits::One;
use proptest::prelude::*;
use proptest::test_runner::{Config, RngSeed};

pub fn config(cases: u32, seed: u64) -> Config {
    Config { cases, rng_seed: RngSeed::Fixed(seed), failure_persistence: None, ..Config::default() }
}

pub fn q(n: i64, d: i64) -> Rational {
    rat(n, d)
}

/// Rationals `n/d` with small numerator and denominator.
pub fn small_rational(num: i64, den: i64) -> impl Strategy<Value = Rational> {
    (-num..=num, 1..=den).prop_map(|(n, d)| rat(n, d))
}

/// A gap `1 + n/d > 1`.
fn gap(max: i64) -> impl Strategy<Value = Rational> {
    (1..=max, 1..=max).prop_map(|(n, d)| Rational::one() + rat(n, d))
}

/// Slope triples with `w < 1` and moderately small denominators.
pub fn slopes_w_lt_1() -> impl Strategy<Value = Slopes> {
    (small_rational(6, 5), gap(7), gap(7))
        .prop_map(|(s2, d1, d2)| Slopes::new(&s2 - d1, s2.clone(), &s2 + d2).unwrap())
        .prop_filter("w < 1", |s| s.width() < Rational::one())
}

/// Slope triples with `w < 1` and integral `s2`.
pub fn slopes_integral_s2() -> impl Strategy<Value = Slopes> {
    (-4i64..=4, gap(7), gap(7))
        .prop_map(|(s2, d1, d2)| {
            let s2 = rat(s2, 1);
            Slopes::new(&s2 - d1, s2.clone(), &s2 + d2).unwrap()
        })
        .prop_filter("w < 1", |s| s.width() < Rational::one())
}

/// Slope triples with `w <= 1/2`.
pub fn slopes_w_le_half() -> impl Strategy<Value = Slopes> {
    (small_rational(6, 5), (2i64..=12, 1i64..=4), (2i64..=12, 1i64..=4))
        .prop_map(|(s2, (n1, d1), (n2, d2))| {
            Slopes::new(&s2 - rat(n1 * 2 + d1, d1), s2.clone(), &s2 + rat(n2 * 2 + d2, d2)).unwrap()
        })
        .prop_filter("w <= 1/2", |s| s.width() <= rat(1, 2))
}
