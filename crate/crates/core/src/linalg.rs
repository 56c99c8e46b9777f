//! Fraction-free exact linear algebra over the integers and rationals.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::exact::{lcd, Rational};

pub type IntMatrix = Vec<Vec<BigInt>>;

/// Bareiss determinant of a square integer matrix.
pub fn det_bareiss(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a: IntMatrix = m.to_vec();
    let mut sign = false;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(k, i);
                    sign = !sign;
                }
                None => return BigInt::zero(),
            }
        }
        let (top, bottom) = a.split_at_mut(k + 1);
        let pivot_row = &top[k];
        for row in bottom.iter_mut() {
            for j in k + 1..n {
                let v = &pivot_row[k] * &row[j] - &row[k] * &pivot_row[j];
                row[j] = v / &prev;
            }
            row[k] = BigInt::zero();
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if sign {
        -d
    } else {
        d
    }
}

/// Rank by fraction-free elimination, pivoting on the first nonzero entry in column order.
pub fn rank_bareiss(m: &[Vec<BigInt>]) -> usize {
    let rows = m.len();
    if rows == 0 {
        return 0;
    }
    let cols = m[0].len();
    let mut a: IntMatrix = m.to_vec();
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else { continue };
        a.swap(r, p);
        let (top, bottom) = a.split_at_mut(r + 1);
        let pivot_row = &top[r];
        for row in bottom.iter_mut() {
            for j in c + 1..cols {
                let v = &pivot_row[c] * &row[j] - &row[c] * &pivot_row[j];
                row[j] = v / &prev;
            }
            row[c] = BigInt::zero();
        }
        prev = a[r][c].clone();
        r += 1;
    }
    r
}

/// Scales each row of a rational matrix to integers; returns the integer
/// matrix and the product of the row scale factors.
pub fn clear_denominators(m: &[Vec<Rational>]) -> (IntMatrix, BigInt) {
    let mut scale = BigInt::one();
    let rows = m
        .iter()
        .map(|row| {
            let d = lcd(row.iter());
            scale *= &d;
            row.iter().map(|v| (v * Rational::from_integer(d.clone())).to_integer()).collect()
        })
        .collect();
    (rows, scale)
}

pub fn det_rational(m: &[Vec<Rational>]) -> Rational {
    let (ints, scale) = clear_denominators(m);
    Rational::new(det_bareiss(&ints), scale)
}

pub fn rank_rational(m: &[Vec<Rational>]) -> usize {
    rank_bareiss(&clear_denominators(m).0)
}

/// Bit length of the Hadamard bound `prod_i ||row_i||_2`, rounded up.
pub fn hadamard_bits(m: &[Vec<BigInt>]) -> u64 {
    m.iter()
        .map(|row| {
            let s: BigInt = row.iter().map(|v| v * v).sum();
            if s.is_zero() {
                0
            } else {
                s.bits().div_ceil(2)
            }
        })
        .sum::<u64>()
        + 1
}
