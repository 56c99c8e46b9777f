mod common;

use common::{config, q, small_rational};
use mdslab_core::exact::*;
use mdslab_core::linalg::det_rational;
use mdslab_core::poly::{bivariate_reconstruct, BivariatePoly};
use mdslab_core::MdsError;
use num_bigint::BigInt;
use num_traits::{One, Zero};
use proptest::prelude::*;

fn ff(x: &Rational, n: i64) -> Rational {
    falling_factorial(x, n).unwrap()
}

/// `sum_{i=0}^n (-1)^i C(n, i) f(i)`.
fn alternating(n: u64, f: impl Fn(i64) -> Rational) -> Rational {
    let mut acc = Rational::zero();
    for i in 0..=n {
        let term = Rational::from_integer(binomial(n, i)) * f(i as i64);
        if i % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    acc
}

fn non_pole(x: &Rational, lo: i64, hi: i64) -> bool {
    !(x.is_integer() && (lo..=hi).contains(&to_i64(&x.to_integer()).unwrap()))
}

#[test]
fn falling_factorial_examples() {
    assert_eq!(ff(&int(5), 2), int(20));
    assert_eq!(ff(&q(7, 2), 0), int(1));
    assert_eq!(ff(&q(3, 2), -2), q(4, 35));
    assert!(matches!(falling_factorial(&int(-2), -3), Err(MdsError::Pole(_))));
    assert_eq!(ff(&int(-4), -3), q(-1, 6));
    assert_eq!(ff(&int(3), 5), int(0));
}

#[test]
fn crt_examples() {
    let c = |v: &[(i64, i64)]| crt_solve_i64(v);
    assert_eq!(c(&[(1, 2), (2, 3)]), Some(5));
    assert_eq!(c(&[(0, 4), (2, 4)]), None);
    assert_eq!(c(&[(2, 3), (2, 3)]), Some(2));
    assert_eq!(c(&[]), Some(0));
    let x = crt_solve(&[(big(3), big(1_000_000_007)), (big(5), big(998_244_353))]).unwrap();
    assert_eq!(&x % BigInt::from(1_000_000_007), big(3));
    assert_eq!(&x % BigInt::from(998_244_353), big(5));
}

#[test]
fn crt_matches_brute_force() {
    for m1 in 1..=12i64 {
        for m2 in 1..=12i64 {
            for r1 in 0..m1 {
                for r2 in 0..m2 {
                    let l = m1 * m2 / gcd(m1, m2);
                    let brute = (0..l).find(|x| x % m1 == r1 && x % m2 == r2);
                    assert_eq!(crt_solve_i64(&[(r1, m1), (r2, m2)]), brute, "{r1} mod {m1}, {r2} mod {m2}");
                }
            }
        }
    }
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Number of set partitions of `{0..n}` into `k` blocks, via restricted growth strings.
fn partitions_brute(n: usize, k: usize) -> u64 {
    fn go(pos: usize, n: usize, k: usize, max: usize) -> u64 {
        if pos == n {
            return u64::from(max == k);
        }
        (0..=max.min(k.saturating_sub(1)))
            .map(|b| go(pos + 1, n, k, if b == max { max + 1 } else { max }))
            .sum()
    }
    if n == 0 {
        return u64::from(k == 0);
    }
    go(0, n, k, 0)
}

#[test]
fn stirling_examples_and_oracle() {
    for n in 0..=9 {
        assert_eq!(stirling2(n, n), BigInt::one());
    }
    for n in 1..=9 {
        assert_eq!(stirling2(n, 0), BigInt::zero());
    }
    assert_eq!(stirling2(4, 2), BigInt::from(7));
    for n in 0..=8 {
        for k in 0..=8 {
            assert_eq!(stirling2(n, k), BigInt::from(partitions_brute(n, k)), "S({n},{k})");
        }
    }
    for n in 1..=12 {
        for k in 1..=12 {
            assert_eq!(stirling2(n, k), BigInt::from(k) * stirling2(n - 1, k) + stirling2(n - 1, k - 1));
        }
    }
}

#[test]
fn stirling_converts_falling_factorials_to_powers() {
    for n in 1..=7usize {
        for x in [-3i64, 0, 2, 5] {
            let x = int(x);
            let sum: Rational =
                (0..=n).map(|i| Rational::from_integer(stirling2(n, i)) * ff(&x, i as i64)).sum();
            assert_eq!(sum, num_traits::pow(x.clone(), n));
        }
    }
}

#[test]
fn reconstruct_examples() {
    let ab = bivariate_reconstruct(|a, b| Ok(a * b), 1, 1).unwrap();
    assert_eq!(ab, BivariatePoly::a() * BivariatePoly::b());
    let seven = bivariate_reconstruct(|_, _| Ok(int(7)), 0, 0).unwrap();
    assert_eq!(seven, BivariatePoly::constant(int(7)));
    let lin = bivariate_reconstruct(|a, b| Ok(int(8) * a + int(5) * b - int(24)), 1, 1).unwrap();
    assert_eq!(lin, BivariatePoly::linear(int(8), int(5), int(-24)));
    assert_eq!(lin.factor().to_text(), "(8A+5B-24)");
}

#[test]
fn reconstruct_detects_low_degree_bounds() {
    let r = bivariate_reconstruct(|a, b| Ok(a * a * b), 1, 1);
    assert!(matches!(r, Err(MdsError::ReconstructionMismatch { .. })));
}

#[test]
fn reconstruct_shifts_past_poles() {
    let r = bivariate_reconstruct(
        |a, b| if a.is_zero() { Err(MdsError::Pole("a = 0".into())) } else { Ok(a + b) },
        1,
        1,
    )
    .unwrap();
    assert_eq!(r, BivariatePoly::linear(int(1), int(1), int(0)));
}

#[test]
fn rational_text_roundtrip() {
    for s in ["0", "-3/4", "9/2", "17", "-1"] {
        assert_eq!(fmt_rational(&parse_rational(s).unwrap()), s);
    }
    assert_eq!(parse_rational("6/8").unwrap(), q(3, 4));
    assert_eq!(parse_rational("3/-4").map(|x| fmt_rational(&x)).ok(), None);
    for bad in ["", "1.5", "1/0", "a/2", "1//2"] {
        assert!(parse_rational(bad).is_err(), "{bad}");
    }
}

#[test]
fn floor_ceil_frac() {
    assert_eq!(floor(&q(-3, 4)), big(-1));
    assert_eq!(ceil(&q(-3, 4)), big(0));
    assert_eq!(frac(&q(-3, 4)), q(1, 4));
    assert_eq!(lcd(&[q(1, 4), q(5, 6), int(2)]), big(12));
}

fn rat_strategy() -> impl Strategy<Value = Rational> {
    small_rational(60, 9)
}

proptest! {
    #![proptest_config(config(128, 0x6d64_0001))]

    #[test]
    fn falling_factorial_recurrence_and_difference(x in rat_strategy(), n in -7i64..=7) {
        prop_assume!(n != 0);
        // avoid every pole of (x)_n, (x)_{n-1}, (x+1)_n
        prop_assume!(non_pole(&x, -9, -1) );
        let x1 = &x + int(1);
        if n >= 1 {
            prop_assert_eq!(ff(&x, n), (&x - int(n - 1)) * ff(&x, n - 1));
        }
        prop_assert_eq!(ff(&x1, n) - ff(&x, n), int(n) * ff(&x, n - 1));
    }

    #[test]
    fn polyvanish(n in 1u64..=8, coeffs in proptest::collection::vec(small_rational(20, 5), 8)) {
        let p = |i: i64| -> Rational {
            coeffs.iter().take(n as usize).rev().fold(Rational::zero(), |acc, c| acc * int(i) + c)
        };
        prop_assert_eq!(alternating(n, p), Rational::zero());
    }

    #[test]
    fn logsum(n in 0u64..=8, x in rat_strategy()) {
        prop_assume!(non_pole(&x, -(n as i64), 0));
        let lhs = alternating(n, |i| (&x + int(i)).recip());
        prop_assert_eq!(lhs, Rational::from_integer(factorial(n)) * ff(&(&x - int(1)), -(n as i64) - 1));
    }

    #[test]
    fn stirling_sums(n in 1i64..=6, m in 1i64..=6, x in rat_strategy()) {
        prop_assume!(non_pole(&x, -m, n - 1));
        let g = |s: u32| alternating(n as u64, |i| num_traits::pow(int(i), s as usize) * ff(&(&x - int(i)), -m));
        let sign = if n % 2 == 0 { int(1) } else { int(-1) };
        let base = sign * ff(&(&x - int(n)), -n - m);
        let nm = int(n + m);
        prop_assert_eq!(g(0), &base * ff(&(&nm - int(1)), n));
        prop_assert_eq!(g(1), &base * ff(&(&nm - int(2)), n - 1) * int(n) * (&x + int(m)));
        let tail = (int(n - 1) * &x) + int(m * n - 1);
        // n = m = 1 is a removable 0 * pole in the closed form
        prop_assume!(n + m > 2);
        prop_assert_eq!(g(2), &base * ff(&(&nm - int(3)), n - 2) * int(n) * (&x + int(m)) * tail);
    }

    #[test]
    fn vandermonde_inverse(m in 1i64..=5, n in 1i64..=5, x in rat_strategy()) {
        let sigma: Vec<Rational> = (0..=n)
            .map(|j| {
                let sign = if j % 2 == 0 { int(1) } else { int(-1) };
                sign * Rational::from_integer(binomial(n as u64, j as u64)) * ff(&int(n + m), n + 1)
                    / (Rational::from_integer(factorial(n as u64)) * int(m + j))
            })
            .collect();
        for i in 0..=n {
            let row: Rational = (0..=n).map(|j| ff(&(&x - int(m + j)), i) * &sigma[j as usize]).sum();
            prop_assert_eq!(row, ff(&x, i));
        }
    }

    #[test]
    fn falling_vandermonde_nonsingular(points in proptest::collection::btree_set((-40i64..=40, 1i64..=6), 1..=7)) {
        let mut pts: Vec<Rational> = points.into_iter().map(|(n, d)| q(n, d)).collect();
        pts.sort();
        pts.dedup();
        let u: Vec<Vec<Rational>> =
            pts.iter().map(|a| (0..pts.len()).map(|j| ff(a, j as i64)).collect()).collect();
        prop_assert_ne!(det_rational(&u), Rational::zero());
    }
}
