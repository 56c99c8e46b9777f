//! Exact scalars: rationals, floors, generalized falling factorials,
//! binomials, Stirling numbers and the Chinese remainder theorem.

use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt::Write;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{MdsError, Result};

/// Arbitrary-precision fraction, always in lowest terms with positive denominator.
pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn big(n: i64) -> BigInt {
    BigInt::from(n)
}

/// Parses `p/q` (sign on `p` only) or a bare integer `p`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || MdsError::Parse(alloc::format!("not a rational: {s:?}"));
    let parse_int = |t: &str, signed: bool| -> Result<BigInt> {
        let digits = if signed { t.strip_prefix(['-', '+']).unwrap_or(t) } else { t };
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        t.parse::<BigInt>().map_err(|_| bad())
    };
    match s.split_once('/') {
        None => Ok(Rational::from_integer(parse_int(s, true)?)),
        Some((p, q)) => {
            let p = parse_int(p, true)?;
            let q = parse_int(q, false)?;
            if q.is_zero() {
                return Err(MdsError::Parse(alloc::format!("zero denominator in {s:?}")));
            }
            Ok(Rational::new(p, q))
        }
    }
}

/// `p/q`, or `p` when the denominator is one.
pub fn fmt_rational(x: &Rational) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        let mut s = String::new();
        let _ = write!(s, "{}/{}", x.numer(), x.denom());
        s
    }
}

pub fn floor(x: &Rational) -> BigInt {
    x.numer().div_floor(x.denom())
}

pub fn ceil(x: &Rational) -> BigInt {
    -((-x.numer()).div_floor(x.denom()))
}

/// `{x} = x - floor(x)`, in `[0, 1)`.
pub fn frac(x: &Rational) -> Rational {
    x - Rational::from_integer(floor(x))
}

pub fn is_integer(x: &Rational) -> bool {
    x.denom().is_one()
}

/// Least common denominator of a list of rationals.
pub fn lcd<'a>(xs: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    xs.into_iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
}

pub fn lcm_int(a: &BigInt, b: &BigInt) -> BigInt {
    a.lcm(b)
}

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

/// Generalized falling factorial.
///
/// `(x)_n = x(x-1)...(x-n+1)` for `n >= 0`, and `1/((x+1)...(x-n))` for `n < 0`.
pub fn falling_factorial(x: &Rational, n: i64) -> Result<Rational> {
    if n >= 0 {
        let mut acc = Rational::one();
        let mut t = x.clone();
        for _ in 0..n {
            acc *= &t;
            t -= Rational::one();
        }
        Ok(acc)
    } else {
        let mut den = Rational::one();
        let mut t = x.clone();
        for _ in 0..(-n) {
            t += Rational::one();
            den *= &t;
        }
        if den.is_zero() {
            return Err(MdsError::Pole(alloc::format!(
                "({})_{} has a zero factor in its denominator",
                fmt_rational(x),
                n
            )));
        }
        Ok(den.recip())
    }
}

/// Falling factorial of an integer, `n >= 0`.
pub fn falling_factorial_int(x: &BigInt, n: u32) -> BigInt {
    let mut acc = BigInt::one();
    let mut t = x.clone();
    for _ in 0..n {
        acc *= &t;
        t -= 1;
    }
    acc
}

/// `C(x, n) = (x)_n / n!` for rational `x`.
pub fn binomial_rat(x: &Rational, n: u32) -> Rational {
    let num = falling_factorial(x, n as i64).expect("nonnegative order has no pole");
    num / Rational::from_integer(factorial(n as u64))
}

pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// Stirling numbers of the second kind by the `S(n,k) = k S(n-1,k) + S(n-1,k-1)` table.
pub fn stirling2(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let mut row = vec![BigInt::zero(); k + 1];
    row[0] = BigInt::one();
    for i in 1..=n {
        let top = i.min(k);
        for j in (1..=top).rev() {
            let prev = core::mem::take(&mut row[j]);
            row[j] = prev * BigInt::from(j) + &row[j - 1];
        }
        row[0] = BigInt::zero();
    }
    row.swap_remove(k)
}

/// Extended gcd: returns `(g, x, y)` with `a x + b y = g >= 0`.
pub fn ext_gcd(a: &BigInt, b: &BigInt) -> (BigInt, BigInt, BigInt) {
    let e = a.extended_gcd(b);
    if e.gcd.is_negative() {
        (-e.gcd, -e.x, -e.y)
    } else {
        (e.gcd, e.x, e.y)
    }
}

/// Inverse of `a` modulo `m`, if it exists.
pub fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let (g, x, _) = ext_gcd(&a.mod_floor(m), m);
    if g.is_one() {
        Some(x.mod_floor(m))
    } else {
        None
    }
}

/// Solves `x = r_i (mod m_i)` for all `i`, moduli not necessarily coprime.
///
/// Returns the unique solution in `[0, lcm m_i)`, or `None` if inconsistent.
pub fn crt_solve(congruences: &[(BigInt, BigInt)]) -> Option<BigInt> {
    let mut x = BigInt::zero();
    let mut m = BigInt::one();
    for (r, n) in congruences {
        assert!(n.is_positive(), "crt_solve: moduli must be positive");
        let (g, p, _) = ext_gcd(&m, n);
        let diff = r - &x;
        if !diff.is_multiple_of(&g) {
            return None;
        }
        let step = (diff / &g * p).mod_floor(&(n / &g));
        x += &m * step;
        m = &m / &g * n;
        x = x.mod_floor(&m);
    }
    Some(x)
}

pub fn crt_solve_i64(congruences: &[(i64, i64)]) -> Option<i64> {
    let big: Vec<(BigInt, BigInt)> =
        congruences.iter().map(|&(r, m)| (BigInt::from(r), BigInt::from(m))).collect();
    crt_solve(&big).map(|x| i64::try_from(x).expect("crt solution fits i64"))
}

pub fn to_i64(x: &BigInt) -> Result<i64> {
    i64::try_from(x).map_err(|_| MdsError::Precondition(alloc::format!("integer {x} out of range")))
}
