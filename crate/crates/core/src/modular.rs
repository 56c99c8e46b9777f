//! Word-size modular arithmetic: primes, determinants and ranks modulo a
//! prime, and multi-modular exact determinants.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::linalg::hadamard_bits;

#[inline]
pub fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1u64 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, a, p);
        }
        a = mul_mod(a, a, p);
        e >>= 1;
    }
    r
}

#[inline]
pub fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

/// Deterministic Miller-Rabin for 64-bit integers.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &b in &BASES {
        if n % b == 0 {
            return n == b;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'outer: for &b in &BASES {
        let mut x = pow_mod(b, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

/// The `count` largest primes below `2^62`, descending.
pub fn primes_below_2_62(count: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(count);
    let mut n = (1u64 << 62) - 1;
    while out.len() < count {
        if is_prime_u64(n) {
            out.push(n);
        }
        n -= 2;
    }
    out
}

/// Residue of a big integer modulo `p`, in `[0, p)`.
pub fn reduce_big(x: &BigInt, p: u64) -> u64 {
    x.mod_floor(&BigInt::from(p)).to_u64().expect("residue below p")
}

#[inline]
pub fn reduce_i128(x: i128, p: u64) -> u64 {
    x.rem_euclid(p as i128) as u64
}

/// Montgomery arithmetic modulo an odd prime `p < 2^62` with `R = 2^64`.
#[derive(Clone, Copy, Debug)]
pub struct Mont {
    pub p: u64,
    /// `-p^-1 mod 2^64`.
    pinv: u64,
    /// `R^2 mod p`.
    r2: u64,
}

impl Mont {
    pub fn new(p: u64) -> Self {
        assert!(p % 2 == 1 && p < (1 << 62), "Mont: odd modulus below 2^62 required");
        let mut inv: u64 = 1;
        for _ in 0..6 {
            inv = inv.wrapping_mul(2u64.wrapping_sub(p.wrapping_mul(inv)));
        }
        let r = ((1u128 << 64) % p as u128) as u64;
        let r2 = mul_mod(r, r, p);
        Self { p, pinv: inv.wrapping_neg(), r2 }
    }

    #[inline(always)]
    fn redc(&self, t: u128) -> u64 {
        let m = (t as u64).wrapping_mul(self.pinv);
        let u = ((t + m as u128 * self.p as u128) >> 64) as u64;
        if u >= self.p {
            u - self.p
        } else {
            u
        }
    }

    #[inline(always)]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        self.redc(a as u128 * b as u128)
    }

    #[inline(always)]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline(always)]
    pub fn to_mont(&self, a: u64) -> u64 {
        self.mul(a % self.p, self.r2)
    }

    #[inline(always)]
    pub fn from_mont(&self, a: u64) -> u64 {
        self.redc(a as u128)
    }

    pub fn one(&self) -> u64 {
        self.to_mont(1)
    }

    pub fn pow(&self, mut a: u64, mut e: u64) -> u64 {
        let mut r = self.one();
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        r
    }

    pub fn inv(&self, a: u64) -> u64 {
        self.pow(a, self.p - 2)
    }
}

/// Determinant of a matrix already in Montgomery form; returns a plain
/// residue. The matrix is consumed as scratch space.
pub fn det_mont(a: &mut [Vec<u64>], mt: &Mont) -> u64 {
    let n = a.len();
    let mut det = mt.one();
    for k in 0..n {
        let Some(piv) = (k..n).find(|&i| a[i][k] != 0) else { return 0 };
        if piv != k {
            a.swap(piv, k);
            det = mt.sub(0, det);
        }
        det = mt.mul(det, a[k][k]);
        let inv = mt.inv(a[k][k]);
        let (top, bottom) = a.split_at_mut(k + 1);
        let pivot_row = &top[k];
        for row in bottom.iter_mut() {
            if row[k] == 0 {
                continue;
            }
            let f = mt.mul(row[k], inv);
            for j in k + 1..n {
                row[j] = mt.sub(row[j], mt.mul(f, pivot_row[j]));
            }
            row[k] = 0;
        }
    }
    mt.from_mont(det)
}

/// Determinant modulo a prime of a matrix of plain residues.
pub fn det_mod_p(a: &mut [Vec<u64>], p: u64) -> u64 {
    let mt = Mont::new(p);
    for row in a.iter_mut() {
        for v in row.iter_mut() {
            *v = mt.to_mont(*v);
        }
    }
    det_mont(a, &mt)
}

/// Row echelon form modulo a prime, in Montgomery form, pivoting on the
/// first nonzero entry in column order.
pub struct Echelon {
    pub mt: Mont,
    /// Reduced pivot rows with their pivot column.
    pub rows: Vec<(usize, Vec<u64>)>,
}

impl Echelon {
    pub fn new(mut a: Vec<Vec<u64>>, mt: Mont) -> Self {
        let rows_n = a.len();
        let cols = a.first().map_or(0, Vec::len);
        let mut r = 0;
        let mut pivots = Vec::new();
        for c in 0..cols {
            if r == rows_n {
                break;
            }
            let Some(piv) = (r..rows_n).find(|&i| a[i][c] != 0) else { continue };
            a.swap(piv, r);
            let inv = mt.inv(a[r][c]);
            let (top, bottom) = a.split_at_mut(r + 1);
            let pivot_row = &mut top[r];
            for v in pivot_row.iter_mut().skip(c) {
                *v = mt.mul(*v, inv);
            }
            for row in bottom.iter_mut() {
                let f = row[c];
                if f == 0 {
                    continue;
                }
                for j in c + 1..cols {
                    row[j] = mt.sub(row[j], mt.mul(f, pivot_row[j]));
                }
                row[c] = 0;
            }
            pivots.push(c);
            r += 1;
        }
        a.truncate(r);
        Self { mt, rows: pivots.into_iter().zip(a).collect() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Whether `v` (Montgomery form) lies outside the row span.
    pub fn is_independent(&self, mut v: Vec<u64>) -> bool {
        for (c, row) in &self.rows {
            let f = v[*c];
            if f == 0 {
                continue;
            }
            for j in *c..v.len() {
                v[j] = self.mt.sub(v[j], self.mt.mul(f, row[j]));
            }
        }
        v.iter().any(|&x| x != 0)
    }
}

/// Rank modulo a prime of a matrix of plain residues.
pub fn rank_mod_p(a: &mut [Vec<u64>], p: u64) -> usize {
    let mt = Mont::new(p);
    let m: Vec<Vec<u64>> = a.iter().map(|row| row.iter().map(|&v| mt.to_mont(v)).collect()).collect();
    Echelon::new(m, mt).rank()
}

/// Incremental CRT over distinct primes, returning the symmetric
/// representative in `(-M/2, M/2]`.
pub fn crt_symmetric(residues: &[u64], primes: &[u64]) -> BigInt {
    let mut x = BigInt::zero();
    let mut m = BigInt::one();
    for (&r, &p) in residues.iter().zip(primes) {
        let xm = reduce_big(&x, p);
        let mm = reduce_big(&m, p);
        let diff = (r + p - xm) % p;
        let t = mul_mod(diff, inv_mod(mm, p), p);
        x += &m * BigInt::from(t);
        m *= BigInt::from(p);
    }
    let half = &m >> 1u32;
    if x > half {
        x - m
    } else {
        x
    }
}

/// Matrix entries narrowed to `i128` when they all fit.
pub enum Narrowed {
    Small(Vec<Vec<i128>>),
    Big,
}

pub fn narrow(m: &[Vec<BigInt>]) -> Narrowed {
    let mut out = Vec::with_capacity(m.len());
    for row in m {
        let mut r = Vec::with_capacity(row.len());
        for v in row {
            match v.to_i128() {
                Some(x) => r.push(x),
                None => return Narrowed::Big,
            }
        }
        out.push(r);
    }
    Narrowed::Small(out)
}

/// Exact integer determinant via residues modulo enough primes to exceed
/// twice the Hadamard bound. `primes` must contain enough entries.
pub fn det_multimodular(m: &[Vec<BigInt>], primes: &[u64]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let bits = hadamard_bits(m) + 1;
    let needed = (bits / 61 + 1) as usize;
    assert!(needed <= primes.len(), "det_multimodular: need {needed} primes");
    let narrowed = narrow(m);
    let mut residues = Vec::with_capacity(needed);
    for &p in &primes[..needed] {
        let mut a: Vec<Vec<u64>> = match &narrowed {
            Narrowed::Small(s) => {
                s.iter().map(|row| row.iter().map(|&v| reduce_i128(v, p)).collect()).collect()
            }
            Narrowed::Big => {
                m.iter().map(|row| row.iter().map(|v| reduce_big(v, p)).collect()).collect()
            }
        };
        residues.push(det_mod_p(&mut a, p));
    }
    crt_symmetric(&residues, &primes[..needed])
}

/// Rank over the rationals, estimated as the maximum rank modulo the given
/// primes. Exact unless every prime divides some nonzero maximal minor.
pub fn rank_multiprime(m: &[Vec<BigInt>], primes: &[u64]) -> usize {
    let narrowed = narrow(m);
    primes
        .iter()
        .map(|&p| {
            let mut a: Vec<Vec<u64>> = match &narrowed {
                Narrowed::Small(s) => {
                    s.iter().map(|row| row.iter().map(|&v| reduce_i128(v, p)).collect()).collect()
                }
                Narrowed::Big => {
                    m.iter().map(|row| row.iter().map(|v| reduce_big(v, p)).collect()).collect()
                }
            };
            rank_mod_p(&mut a, p)
        })
        .max()
        .unwrap_or(0)
}
