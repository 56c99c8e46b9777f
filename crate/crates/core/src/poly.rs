//! Bivariate polynomials in the indeterminates `A`, `B` with rational
//! coefficients, grid reconstruction, and the pretty-printing factorizer.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{MdsError, Result};
use crate::exact::{factorial, fmt_rational, lcd, Rational};

/// Sparse polynomial `sum c_ij A^i B^j`; zero coefficients are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BivariatePoly {
    terms: BTreeMap<(u32, u32), Rational>,
}

impl BivariatePoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::from_terms([((0, 0), c)])
    }

    pub fn a() -> Self {
        Self::from_terms([((1, 0), Rational::one())])
    }

    pub fn b() -> Self {
        Self::from_terms([((0, 1), Rational::one())])
    }

    /// `ca A + cb B + c0`.
    pub fn linear(ca: Rational, cb: Rational, c0: Rational) -> Self {
        Self::from_terms([((1, 0), ca), ((0, 1), cb), ((0, 0), c0)])
    }

    pub fn from_terms(terms: impl IntoIterator<Item = ((u32, u32), Rational)>) -> Self {
        let mut p = Self::zero();
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    fn add_term(&mut self, e: (u32, u32), c: Rational) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(e).or_insert_with(Rational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, i: u32, j: u32) -> Rational {
        self.terms.get(&(i, j)).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &Rational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn deg_a(&self) -> u32 {
        self.terms.keys().map(|e| e.0).max().unwrap_or(0)
    }

    pub fn deg_b(&self) -> u32 {
        self.terms.keys().map(|e| e.1).max().unwrap_or(0)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self { terms: self.terms.iter().map(|(e, v)| (*e, v * c)).collect() }
    }

    pub fn pow(&self, n: u32) -> Self {
        (0..n).fold(Self::one(), |acc, _| &acc * self)
    }

    /// `(A + dx)_u`.
    pub fn falling_a(dx: i64, u: u32) -> Self {
        Self::falling_linear(Self::a(), dx, u)
    }

    /// `(B + dy)_v`.
    pub fn falling_b(dy: i64, v: u32) -> Self {
        Self::falling_linear(Self::b(), dy, v)
    }

    fn falling_linear(var: Self, shift: i64, n: u32) -> Self {
        let mut acc = Self::one();
        for t in 0..n as i64 {
            let f = &var + &Self::constant(Rational::from_integer(BigInt::from(shift - t)));
            acc = &acc * &f;
        }
        acc
    }

    pub fn eval(&self, a: &Rational, b: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for (&(i, j), c) in &self.terms {
            acc += c * num_traits::pow(a.clone(), i as usize) * num_traits::pow(b.clone(), j as usize);
        }
        acc
    }

    pub fn eval_int(&self, a: i64, b: i64) -> Rational {
        self.eval(&Rational::from_integer(a.into()), &Rational::from_integer(b.into()))
    }

    /// Terms in display order: descending total degree, then descending `A` degree.
    fn display_order(&self) -> Vec<((u32, u32), &Rational)> {
        let mut v: Vec<_> = self.terms.iter().map(|(e, c)| (*e, c)).collect();
        v.sort_by(|x, y| (y.0 .0 + y.0 .1, y.0 .0).cmp(&(x.0 .0 + x.0 .1, x.0 .0)));
        v
    }

    /// Exact division by `(A - c)`, or `None` when it does not divide.
    pub fn div_linear_a(&self, c: &Rational) -> Option<Self> {
        if self.is_zero() {
            return Some(Self::zero());
        }
        let n = self.deg_a();
        let mut rows: Vec<BTreeMap<u32, Rational>> = vec![BTreeMap::new(); n as usize + 1];
        for (&(i, j), v) in &self.terms {
            rows[i as usize].insert(j, v.clone());
        }
        let mut q: Vec<BTreeMap<u32, Rational>> = vec![BTreeMap::new(); n as usize];
        let mut carry: BTreeMap<u32, Rational> = BTreeMap::new();
        for k in (1..=n as usize).rev() {
            let mut cur = core::mem::take(&mut rows[k]);
            for (j, v) in &carry {
                *cur.entry(*j).or_insert_with(Rational::zero) += v * c;
            }
            cur.retain(|_, v| !v.is_zero());
            q[k - 1] = cur.clone();
            carry = cur;
        }
        let mut rem = core::mem::take(&mut rows[0]);
        for (j, v) in &carry {
            *rem.entry(*j).or_insert_with(Rational::zero) += v * c;
        }
        if rem.values().any(|v| !v.is_zero()) {
            return None;
        }
        Some(Self::from_terms(
            q.into_iter()
                .enumerate()
                .flat_map(|(i, row)| row.into_iter().map(move |(j, v)| ((i as u32, j), v))),
        ))
    }

    /// Rational content, signed so that `self / content` is a primitive
    /// integer polynomial whose first term in display order is positive.
    pub fn content(&self) -> Rational {
        if self.is_zero() {
            return Rational::one();
        }
        let den = lcd(self.terms.values());
        let mut g = BigInt::zero();
        for v in self.terms.values() {
            g = g.gcd(&(v * Rational::from_integer(den.clone())).to_integer());
        }
        let lead = self.display_order()[0].1;
        let c = Rational::new(g, den);
        if lead.is_negative() {
            -c
        } else {
            c
        }
    }

    /// Content, linear factors `(A - c)` found by a bounded rational root
    /// search, and the remaining primitive factor.
    pub fn factor(&self) -> Factored {
        if self.is_zero() {
            return Factored { content: Rational::zero(), linear: Vec::new(), rest: Self::one() };
        }
        let mut content = self.content();
        let mut rest = self.scale(&content.recip());
        let mut linear = Vec::new();
        for root in rational_root_candidates(&rest) {
            let mut mult = 0u32;
            while let Some(q) = rest.div_linear_a(&root) {
                rest = q;
                mult += 1;
            }
            if mult > 0 {
                linear.push((root, mult));
            }
        }
        // (A - p/q) is shown as the primitive (qA - p); move q^mult into the content.
        for (c, m) in &linear {
            content /= Rational::from_integer(num_traits::pow(c.denom().clone(), *m as usize));
        }
        let c2 = rest.content();
        content *= &c2;
        rest = rest.scale(&c2.recip());
        linear.sort_by(|x, y| y.0.cmp(&x.0));
        Factored { content, linear, rest }
    }
}

/// Candidate rational roots (in `A`) of `P(A, B0)` for a `B0` where it is nonzero.
fn rational_root_candidates(p: &BivariatePoly) -> Vec<Rational> {
    if p.deg_a() == 0 {
        return Vec::new();
    }
    let mut h: Vec<Rational> = Vec::new();
    for b0 in 0..=(p.deg_b() as i64 + 1) {
        let b = Rational::from_integer(b0.into());
        let mut coeffs = vec![Rational::zero(); p.deg_a() as usize + 1];
        for (&(i, j), c) in &p.terms {
            coeffs[i as usize] += c * num_traits::pow(b.clone(), j as usize);
        }
        if coeffs.iter().any(|c| !c.is_zero()) {
            h = coeffs;
            break;
        }
    }
    while h.last().is_some_and(|c| c.is_zero()) {
        h.pop();
    }
    if h.len() < 2 {
        return Vec::new();
    }
    let den = lcd(h.iter());
    let hi: Vec<BigInt> =
        h.iter().map(|c| (c * Rational::from_integer(den.clone())).to_integer()).collect();
    let lc = hi.last().unwrap().abs();
    // Homogenized Horner: sum h_i n^i q^(deg-i) == 0.
    let vanishes = |n: &BigInt, q: &BigInt| -> bool {
        let mut acc = BigInt::zero();
        let mut qpow = BigInt::one();
        for (k, c) in hi.iter().rev().enumerate() {
            if k == 0 {
                acc = c.clone();
            } else {
                qpow *= q;
                acc = acc * n + c * &qpow;
            }
        }
        acc.is_zero()
    };
    let mut out = Vec::new();
    let one = BigInt::one();
    for n in -256i64..=256 {
        if vanishes(&BigInt::from(n), &one) {
            out.push(Rational::from_integer(BigInt::from(n)));
        }
    }
    for q in 2i64..=12 {
        let qb = BigInt::from(q);
        if !lc.is_multiple_of(&qb) {
            continue;
        }
        for n in -(32 * q)..=(32 * q) {
            if n.gcd(&q) == 1 && vanishes(&BigInt::from(n), &qb) {
                out.push(Rational::new(BigInt::from(n), qb.clone()));
            }
        }
    }
    out
}

/// `content * prod (A - c)^m * rest`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factored {
    pub content: Rational,
    /// Roots `c` of the linear factors `(A - c)` with multiplicities, `c` descending.
    pub linear: Vec<(Rational, u32)>,
    pub rest: BivariatePoly,
}

impl Factored {
    /// Primitive integer form of the factor for root `c`: `(qA - p)`.
    pub fn linear_poly(c: &Rational) -> BivariatePoly {
        BivariatePoly::linear(
            Rational::from_integer(c.denom().clone()),
            Rational::zero(),
            -Rational::from_integer(c.numer().clone()),
        )
    }

    pub fn expand(&self) -> BivariatePoly {
        let mut p = self.rest.scale(&self.content);
        for (c, m) in &self.linear {
            p = &p * &Self::linear_poly(c).pow(*m);
        }
        p
    }

    /// Factors as `(poly text, multiplicity)`, excluding the content.
    pub fn factor_list(&self) -> Vec<(String, u32)> {
        let mut v: Vec<(String, u32)> =
            self.linear.iter().map(|(c, m)| (alloc::format!("{}", Self::linear_poly(c)), *m)).collect();
        if self.rest != BivariatePoly::one() {
            v.push((alloc::format!("{}", self.rest), 1));
        }
        v
    }

    /// E.g. `-2^10*3^3*5*(A-2)*(A-1)^3*A^5*(8A+5B-24)`.
    pub fn to_text(&self) -> String {
        let mut parts: Vec<String> = Vec::new();
        let content_txt = factor_rational_text(&self.content);
        let factors = self.factor_list();
        let (sign, mag) = match content_txt.strip_prefix('-') {
            Some(m) => ("-", String::from(m)),
            None => ("", content_txt),
        };
        if mag != "1" || factors.is_empty() {
            parts.push(mag);
        }
        for (p, m) in factors {
            let base = if p == "A" { p } else { alloc::format!("({p})") };
            if m == 1 {
                parts.push(base);
            } else {
                parts.push(alloc::format!("{base}^{m}"));
            }
        }
        alloc::format!("{sign}{}", parts.join("*"))
    }
}

/// Prime-power text of an integer by trial division up to 10^5; any
/// remaining cofactor is printed as is.
pub fn factor_integer_text(n: &BigInt) -> String {
    if n.is_zero() {
        return String::from("0");
    }
    let sign = if n.is_negative() { "-" } else { "" };
    let mut m = n.abs();
    if m.is_one() {
        return alloc::format!("{sign}1");
    }
    let mut parts = Vec::new();
    let mut p = 2u64;
    while p <= 100_000 && !m.is_one() {
        let pb = BigInt::from(p);
        let mut e = 0;
        while m.is_multiple_of(&pb) {
            m /= &pb;
            e += 1;
        }
        if e == 1 {
            parts.push(alloc::format!("{p}"));
        } else if e > 1 {
            parts.push(alloc::format!("{p}^{e}"));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if !m.is_one() {
        parts.push(alloc::format!("{m}"));
    }
    alloc::format!("{sign}{}", parts.join("*"))
}

pub fn factor_rational_text(x: &Rational) -> String {
    let num = factor_integer_text(x.numer());
    if x.denom().is_one() {
        num
    } else {
        alloc::format!("{num}/({})", factor_integer_text(x.denom()))
    }
}

impl fmt::Display for BivariatePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (k, ((i, j), c)) in self.display_order().into_iter().enumerate() {
            let neg = c.is_negative();
            if k > 0 {
                f.write_str(if neg { "-" } else { "+" })?;
            } else if neg {
                f.write_str("-")?;
            }
            let mag = c.abs();
            let mono = monomial(i, j);
            if mono.is_empty() {
                f.write_str(&fmt_rational(&mag))?;
            } else if mag.is_one() {
                f.write_str(&mono)?;
            } else if mag.denom().is_one() {
                write!(f, "{}{}", mag.numer(), mono)?;
            } else {
                write!(f, "({}){}", fmt_rational(&mag), mono)?;
            }
        }
        Ok(())
    }
}

fn monomial(i: u32, j: u32) -> String {
    let mut s = String::new();
    let mut push = |v: &str, e: u32| match e {
        0 => {}
        1 => s.push_str(v),
        _ => s.push_str(&alloc::format!("{v}^{e}")),
    };
    push("A", i);
    push("B", j);
    s
}

impl Add for &BivariatePoly {
    type Output = BivariatePoly;
    fn add(self, rhs: &BivariatePoly) -> BivariatePoly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, c.clone());
        }
        out
    }
}

impl Sub for &BivariatePoly {
    type Output = BivariatePoly;
    fn sub(self, rhs: &BivariatePoly) -> BivariatePoly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, -c.clone());
        }
        out
    }
}

impl Neg for &BivariatePoly {
    type Output = BivariatePoly;
    fn neg(self) -> BivariatePoly {
        BivariatePoly { terms: self.terms.iter().map(|(e, c)| (*e, -c.clone())).collect() }
    }
}

impl Mul for &BivariatePoly {
    type Output = BivariatePoly;
    fn mul(self, rhs: &BivariatePoly) -> BivariatePoly {
        let mut out = BivariatePoly::zero();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                out.add_term((e1.0 + e2.0, e1.1 + e2.1), c1 * c2);
            }
        }
        out
    }
}

impl Add for BivariatePoly {
    type Output = BivariatePoly;
    fn add(self, rhs: BivariatePoly) -> BivariatePoly {
        &self + &rhs
    }
}

impl Sub for BivariatePoly {
    type Output = BivariatePoly;
    fn sub(self, rhs: BivariatePoly) -> BivariatePoly {
        &self - &rhs
    }
}

impl Mul for BivariatePoly {
    type Output = BivariatePoly;
    fn mul(self, rhs: BivariatePoly) -> BivariatePoly {
        &self * &rhs
    }
}

impl Neg for BivariatePoly {
    type Output = BivariatePoly;
    fn neg(self) -> BivariatePoly {
        -&self
    }
}

/// Forward differences in place: afterwards `v[k]` holds the k-th difference at `v[0]`.
fn forward_differences(v: &mut [BigInt]) {
    let n = v.len();
    for k in 1..n {
        for i in (k..n).rev() {
            let prev = v[i - 1].clone();
            v[i] -= prev;
        }
    }
}

/// `p(X) <- p(X) * (X - s)` for a dense ascending coefficient vector.
fn mul_linear(p: &mut Vec<BigInt>, s: i64) {
    p.push(BigInt::zero());
    for i in (0..p.len()).rev() {
        let lower = if i > 0 { p[i - 1].clone() } else { BigInt::zero() };
        let cur = core::mem::take(&mut p[i]);
        p[i] = lower - cur * s;
    }
}

/// Interpolates the polynomial taking integer values `values[i][j]` at
/// `(a0 + i, b0 + j)`, with degrees below the grid dimensions.
pub fn reconstruct_grid_int(a0: i64, b0: i64, values: &[Vec<BigInt>]) -> BivariatePoly {
    let na = values.len();
    if na == 0 {
        return BivariatePoly::zero();
    }
    let nb = values[0].len();
    let deg_a = na - 1;
    let deg_b = nb - 1;
    // d[i][j] -> differences in A first, then in B.
    let mut d: Vec<Vec<BigInt>> = values.to_vec();
    for j in 0..nb {
        let mut col: Vec<BigInt> = (0..na).map(|i| core::mem::take(&mut d[i][j])).collect();
        forward_differences(&mut col);
        for (i, v) in col.into_iter().enumerate() {
            d[i][j] = v;
        }
    }
    for row in d.iter_mut() {
        forward_differences(row);
    }
    // f = sum_{k,l} d[k][l] / (k! l!) (A-a0)_k (B-b0)_l; scale by deg_a! deg_b!.
    let fa = factorial(deg_a as u64);
    let fb = factorial(deg_b as u64);
    let fact_ratio = |n: usize, k: usize| -> BigInt {
        // n! / k!
        ((k + 1)..=n).fold(BigInt::one(), |acc, t| acc * BigInt::from(t))
    };
    let mut coeff_b: Vec<Vec<BigInt>> = Vec::with_capacity(na);
    for row in d.iter() {
        // G_k(B) = sum_l row[l] (deg_b!/l!) (B-b0)_l via nested Horner.
        let mut p: Vec<BigInt> = vec![&row[deg_b] * fact_ratio(deg_b, deg_b)];
        for l in (0..deg_b).rev() {
            mul_linear(&mut p, b0 + l as i64);
            p[0] += &row[l] * fact_ratio(deg_b, l);
        }
        p.resize(nb, BigInt::zero());
        coeff_b.push(p);
    }
    // Horner in A with polynomial-in-B coefficients: e_k = G_k * deg_a!/k!.
    let mut acc: Vec<Vec<BigInt>> =
        vec![coeff_b[deg_a].iter().map(|c| c * fact_ratio(deg_a, deg_a)).collect()];
    for k in (0..deg_a).rev() {
        let s = a0 + k as i64;
        // acc <- acc * (A - s)
        acc.push(vec![BigInt::zero(); nb]);
        for i in (0..acc.len()).rev() {
            for j in 0..nb {
                let lower = if i > 0 { acc[i - 1][j].clone() } else { BigInt::zero() };
                let cur = core::mem::take(&mut acc[i][j]);
                acc[i][j] = lower - cur * s;
            }
        }
        let r = fact_ratio(deg_a, k);
        for j in 0..nb {
            acc[0][j] += &coeff_b[k][j] * &r;
        }
    }
    let scale = Rational::from_integer(fa * fb);
    let mut out = BivariatePoly::zero();
    for (i, row) in acc.into_iter().enumerate() {
        for (j, c) in row.into_iter().enumerate() {
            if !c.is_zero() {
                out.add_term((i as u32, j as u32), Rational::from_integer(c) / &scale);
            }
        }
    }
    out
}

/// Rational-valued grid variant of [`reconstruct_grid_int`].
pub fn reconstruct_grid(a0: i64, b0: i64, values: &[Vec<Rational>]) -> BivariatePoly {
    let den = lcd(values.iter().flatten());
    let ints: Vec<Vec<BigInt>> = values
        .iter()
        .map(|row| row.iter().map(|v| (v * Rational::from_integer(den.clone())).to_integer()).collect())
        .collect();
    reconstruct_grid_int(a0, b0, &ints).scale(&Rational::from_integer(den).recip())
}

/// Reconstructs a polynomial of degree `<= deg_a` in `A` and `<= deg_b` in `B`
/// from an evaluation oracle on the grid `{0..deg_a} x {0..deg_b}`.
///
/// The grid is shifted diagonally while the oracle reports a pole. The result
/// is checked against the oracle at a fresh point outside the grid.
pub fn bivariate_reconstruct<F>(mut oracle: F, deg_a: u32, deg_b: u32) -> Result<BivariatePoly>
where
    F: FnMut(&Rational, &Rational) -> Result<Rational>,
{
    const MAX_SHIFTS: i64 = 64;
    let q = |n: i64| Rational::from_integer(BigInt::from(n));
    'shift: for shift in 0..MAX_SHIFTS {
        let mut values = Vec::with_capacity(deg_a as usize + 1);
        for i in 0..=deg_a as i64 {
            let mut row = Vec::with_capacity(deg_b as usize + 1);
            for j in 0..=deg_b as i64 {
                match oracle(&q(shift + i), &q(shift + j)) {
                    Ok(v) => row.push(v),
                    Err(MdsError::Pole(_)) => continue 'shift,
                    Err(e) => return Err(e),
                }
            }
            values.push(row);
        }
        let poly = reconstruct_grid(shift, shift, &values);
        let mut checked = false;
        for extra in 1..=MAX_SHIFTS {
            let (a, b) = (shift + deg_a as i64 + extra, shift + deg_b as i64 + extra);
            match oracle(&q(a), &q(b)) {
                Ok(v) => {
                    if poly.eval(&q(a), &q(b)) != v {
                        return Err(MdsError::ReconstructionMismatch { a, b });
                    }
                    checked = true;
                    break;
                }
                Err(MdsError::Pole(_)) => continue,
                Err(e) => return Err(e),
            }
        }
        if !checked {
            return Err(MdsError::Internal("no pole-free self-check point".into()));
        }
        return Ok(poly);
    }
    Err(MdsError::Internal("no pole-free reconstruction grid".into()))
}

