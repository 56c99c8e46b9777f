//! Slope triples, the smallest good lattice triangle, column counts,
//! `pi(n)`, reduced and minimal degrees, `gamma` and the S/T shape.

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive};

use crate::error::{MdsError, Result};
use crate::exact::{floor, fmt_rational, int, lcd, parse_rational, to_i64, Rational};

/// Three rational slopes `s1 < s2 < s3`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Slopes {
    s1: Rational,
    s2: Rational,
    s3: Rational,
}

impl Slopes {
    pub fn new(s1: Rational, s2: Rational, s3: Rational) -> Result<Self> {
        if s1 < s2 && s2 < s3 {
            Ok(Self { s1, s2, s3 })
        } else {
            Err(MdsError::SlopeOrder)
        }
    }

    /// Parses `"s1,s2,s3"`.
    pub fn parse(text: &str) -> Result<Self> {
        let parts: Vec<&str> = text.split(',').collect();
        if parts.len() != 3 {
            return Err(MdsError::Parse(alloc::format!("expected three slopes, got {text:?}")));
        }
        Self::new(parse_rational(parts[0])?, parse_rational(parts[1])?, parse_rational(parts[2])?)
    }

    pub fn s1(&self) -> &Rational {
        &self.s1
    }
    pub fn s2(&self) -> &Rational {
        &self.s2
    }
    pub fn s3(&self) -> &Rational {
        &self.s3
    }

    pub fn width(&self) -> Rational {
        width(self)
    }

    /// Adds `t` to every slope.
    pub fn shear(&self, t: i64) -> Self {
        let t = int(t);
        Self { s1: &self.s1 + &t, s2: &self.s2 + &t, s3: &self.s3 + &t }
    }

    /// Mirror image about the y-axis: `(-s3, -s2, -s1)`.
    pub fn reflect(&self) -> Self {
        Self { s1: -&self.s3, s2: -&self.s2, s3: -&self.s1 }
    }

    pub fn to_strings(&self) -> [String; 3] {
        [fmt_rational(&self.s1), fmt_rational(&self.s2), fmt_rational(&self.s3)]
    }
}

impl fmt::Display for Slopes {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c] = self.to_strings();
        write!(f, "{a},{b},{c}")
    }
}

/// `w = 1/(s2 - s1) + 1/(s3 - s2)`.
pub fn width(s: &Slopes) -> Rational {
    (&s.s2 - &s.s1).recip() + (&s.s3 - &s.s2).recip()
}

pub fn require_width(s: &Slopes) -> Result<Rational> {
    let w = width(s);
    if w >= Rational::one() {
        Err(MdsError::WidthOutOfRange(w))
    } else {
        Ok(w)
    }
}

pub type Point = (i64, i64);

/// The multiplier `m` and vertices `p`, `q` of `Delta_1 = m Delta_0`.
pub fn smallest_good_triangle(s: &Slopes) -> Result<(i64, Point, Point)> {
    require_width(s)?;
    let x1 = (&s.s1 - &s.s2).recip();
    let y1 = &s.s1 * &x1;
    let x2 = (&s.s3 - &s.s2).recip();
    let y2 = &s.s3 * &x2;
    let m = lcd([&x1, &y1, &x2, &y2]);
    // Independent derivation: m = lcm(alpha (s2 - s1), beta (s3 - s2)).
    let alpha = s.s1.denom().lcm(s.s2.denom());
    let beta = s.s2.denom().lcm(s.s3.denom());
    let u = (&s.s2 - &s.s1) * Rational::from_integer(alpha);
    let v = (&s.s3 - &s.s2) * Rational::from_integer(beta);
    if !u.is_integer() || !v.is_integer() {
        return Err(MdsError::Internal("alpha(s2-s1) or beta(s3-s2) not integral".into()));
    }
    let m2 = u.to_integer().abs().lcm(&v.to_integer().abs());
    if m != m2 {
        return Err(MdsError::Internal(alloc::format!("lcd multiplier {m} differs from lcm formula {m2}")));
    }
    let mr = Rational::from_integer(m.clone());
    let coord = |x: &Rational| to_i64(&(x * &mr).to_integer());
    Ok((to_i64(&m)?, (coord(&x1)?, coord(&y1)?), (coord(&x2)?, coord(&y2)?)))
}

fn small(s: &Rational) -> Option<(i128, i128)> {
    Some((s.numer().to_i128()?, s.denom().to_i128()?))
}

fn floor_mul(k: i64, s: &Rational) -> i64 {
    if let Some((n, d)) = small(s) {
        if let Some(kn) = n.checked_mul(k as i128) {
            return kn.div_euclid(d) as i64;
        }
    }
    to_i64(&floor(&(s * Rational::from_integer(BigInt::from(k))))).expect("column count fits i64")
}

fn ceil_mul(k: i64, s: &Rational) -> i64 {
    -floor_mul(-k, s)
}

/// `l_k = floor(k s2) - ceil(k s1) + 1`, `r_k = floor(k s3) - ceil(k s2) + 1`.
pub fn column_counts(s: &Slopes, k: i64) -> (i64, i64) {
    (
        floor_mul(k, &s.s2) - ceil_mul(k, &s.s1) + 1,
        floor_mul(k, &s.s3) - ceil_mul(k, &s.s2) + 1,
    )
}

pub fn l_k(s: &Slopes, k: i64) -> i64 {
    column_counts(s, k).0
}

pub fn r_k(s: &Slopes, k: i64) -> i64 {
    column_counts(s, k).1
}

/// Number of entries of `{l_k}` and `{r_k}` that are `<= n`.
pub fn pi(s: &Slopes, n: i64) -> Result<i64> {
    require_width(s)?;
    Ok(pi_unchecked(s, n))
}

fn pi_unchecked(s: &Slopes, n: i64) -> i64 {
    let count = |f: &dyn Fn(i64) -> i64| {
        let mut k = 1;
        while f(k) <= n {
            k += 1;
        }
        k - 1
    };
    count(&|k| l_k(s, k)) + count(&|k| r_k(s, k))
}

/// Largest admissible candidate for `d`: `min(floor(w/(1-w)) (strict), m w - 1)`.
pub fn degree_search_bound(w: &Rational, mw: i64) -> i64 {
    let ratio = w / (Rational::one() - w);
    let mut b = to_i64(&floor(&ratio)).unwrap_or(i64::MAX);
    if ratio.is_integer() {
        b -= 1;
    }
    b.min(mw - 1).max(0)
}

/// One column of a lattice triangle: abscissa and inclusive ordinate range.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Column {
    pub x: i64,
    pub y_lo: i64,
    pub y_hi: i64,
}

impl Column {
    pub fn count(&self) -> i64 {
        self.y_hi - self.y_lo + 1
    }
}

/// Columns of `k Delta_1` (strictly between the two nonzero vertices),
/// enumerated directly from the edge lines, left to right.
pub fn lattice_columns(s: &Slopes, k: i64) -> Result<Vec<Column>> {
    let (m, p, q) = smallest_good_triangle(s)?;
    let mut cols = Vec::new();
    for x in (k * p.0 + 1)..(k * q.0) {
        let low = match x.cmp(&0) {
            core::cmp::Ordering::Less => ceil_mul(x, &s.s1),
            core::cmp::Ordering::Greater => ceil_mul(x, &s.s3),
            core::cmp::Ordering::Equal => 0,
        };
        cols.push(Column { x, y_lo: low, y_hi: k * m + floor_mul(x, &s.s2) });
    }
    Ok(cols)
}

/// All lattice points of `k Delta_1`, vertices included.
pub fn lattice_points(s: &Slopes, k: i64) -> Result<Vec<Point>> {
    let (_, p, q) = smallest_good_triangle(s)?;
    let mut pts = alloc::vec![(k * p.0, k * p.1)];
    for c in lattice_columns(s, k)? {
        pts.extend((c.y_lo..=c.y_hi).map(|y| (c.x, y)));
    }
    pts.push((k * q.0, k * q.1));
    Ok(pts)
}

/// Reduced degree by direct counting: the largest `n` such that exactly `n`
/// of the given columns have at most `n` points.
pub fn reduced_degree_of_columns(counts: &[i64]) -> i64 {
    let mut sorted = counts.to_vec();
    sorted.sort_unstable();
    let mut best = 0;
    let mut below = 0usize;
    for n in 0..=counts.len() as i64 {
        while below < sorted.len() && sorted[below] <= n {
            below += 1;
        }
        if below as i64 == n {
            best = n;
        }
    }
    best
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PeelStep {
    pub x: i64,
    pub count: i64,
    pub degree_before: i64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PeelTrace {
    pub k: i64,
    pub initial_degree: i64,
    pub steps: Vec<PeelStep>,
    pub remaining: Vec<Column>,
    pub final_degree: i64,
}

/// Bezout peeling of `k Delta_1`: starting at degree `k m w - 1`, a column
/// with more points than the current degree lies on every curve of that
/// degree through it, so it is removed and the degree drops by one.
pub fn bezout_peel(s: &Slopes, k: i64) -> Result<PeelTrace> {
    if k < 1 {
        return Err(MdsError::InvalidParameters(alloc::format!("k must be positive, got {k}")));
    }
    let w = require_width(s)?;
    let (m, _, _) = smallest_good_triangle(s)?;
    let mw = to_i64(&(w * int(m)).to_integer())?;
    let mut remaining = lattice_columns(s, k)?;
    let initial_degree = k * mw - 1;
    let mut degree = initial_degree;
    let mut steps = Vec::new();
    // Fattest column first; ties broken by the smallest abscissa.
    while let Some((idx, col)) = remaining
        .iter()
        .enumerate()
        .filter(|(_, c)| c.count() > degree)
        .max_by(|a, b| a.1.count().cmp(&b.1.count()).then(b.1.x.cmp(&a.1.x)))
    {
        steps.push(PeelStep { x: col.x, count: col.count(), degree_before: degree });
        remaining.remove(idx);
        degree -= 1;
    }
    Ok(PeelTrace { k, initial_degree, steps, remaining, final_degree: degree })
}

/// Everything derived from a slope triple with `w < 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColumnProfile {
    pub slopes: Slopes,
    pub w: Rational,
    pub m: i64,
    pub p: Point,
    pub q: Point,
    /// `l_1, ..., l_{-p.x}`: column counts from the left vertex up to the column `x = 0`.
    pub l: Vec<i64>,
    /// `r_1, ..., r_{q.x - 1}`: column counts from the right vertex, stopping before `x = 0`.
    pub r: Vec<i64>,
    pub d: i64,
    pub d_min: i64,
    pub gamma: i64,
    pub shape: Option<(Vec<i64>, Vec<i64>)>,
}

impl ColumnProfile {
    pub fn new(s: &Slopes) -> Result<Self> {
        let w = require_width(s)?;
        let (m, p, q) = smallest_good_triangle(s)?;
        let mw_r = &w * int(m);
        if !mw_r.is_integer() || !mw_r.is_positive() {
            return Err(MdsError::Internal(alloc::format!("m w = {} is not a positive integer", fmt_rational(&mw_r))));
        }
        let mw = to_i64(&mw_r.to_integer())?;
        let l: Vec<i64> = (1..=-p.0).map(|k| l_k(s, k)).collect();
        let r: Vec<i64> = (1..q.0).map(|k| r_k(s, k)).collect();

        let cols = lattice_columns(s, 1)?;
        let direct: Vec<i64> = cols.iter().map(Column::count).collect();
        let mut from_formula = l.clone();
        from_formula.extend(r.iter().rev());
        if direct != from_formula || direct.len() as i64 != mw - 1 {
            return Err(MdsError::Internal("column counts disagree with direct enumeration".into()));
        }
        if l.last() != Some(&(m + 1)) {
            return Err(MdsError::Internal("the x = 0 column must have m + 1 points".into()));
        }

        let bound = degree_search_bound(&w, mw);
        // pi(n) from the prefix scans of l and r, against a direct tally of
        // the enumerated columns; both sweeps are monotone in n.
        let mut sorted = direct.clone();
        sorted.sort_unstable();
        let (mut il, mut ir, mut id) = (0usize, 0usize, 0usize);
        let mut d = 0;
        let mut d_min = 0;
        for n in 0..=bound {
            while il < l.len() && l[il] <= n {
                il += 1;
            }
            while ir < r.len() && r[ir] <= n {
                ir += 1;
            }
            while id < sorted.len() && sorted[id] <= n {
                id += 1;
            }
            let (pn, direct_n) = ((il + ir) as i64, id as i64);
            if pn != direct_n {
                return Err(MdsError::Internal(alloc::format!(
                    "pi({n}) = {pn} but {direct_n} columns have <= {n} points"
                )));
            }
            if pn == n {
                d = n;
                if d_min == 0 && n >= 1 {
                    d_min = n;
                }
            }
        }
        if d != reduced_degree_of_columns(&direct) {
            return Err(MdsError::Internal("reduced degree disagrees with direct column count".into()));
        }
        let gamma = gamma(s);
        let mut prof =
            Self { slopes: s.clone(), w, m, p, q, l, r, d, d_min, gamma, shape: None };
        prof.shape = prof.compute_shape()?;
        Ok(prof)
    }

    pub fn mw(&self) -> i64 {
        to_i64(&(&self.w * int(self.m)).to_integer()).expect("m w fits i64")
    }

    /// Column counts of `Delta_1` from left to right.
    pub fn columns(&self) -> Vec<i64> {
        let mut v = self.l.clone();
        v.extend(self.r.iter().rev());
        v
    }

    /// Number of columns of `Delta_1` with at most `n` points. Agrees with
    /// `pi(n)` for `n < m w`.
    pub fn columns_at_most(&self, n: i64) -> i64 {
        self.l.iter().chain(&self.r).filter(|&&c| c <= n).count() as i64
    }

    fn compute_shape(&self) -> Result<Option<(Vec<i64>, Vec<i64>)>> {
        if self.d_min < 2 {
            return Ok(None);
        }
        let dm = self.d_min;
        let side = |f: &dyn Fn(i64) -> i64| {
            let mut v = Vec::new();
            let mut k = 1;
            while f(k) < dm {
                v.push(f(k));
                k += 1;
            }
            v
        };
        let sl = side(&|k| l_k(&self.slopes, k));
        let tl = side(&|k| r_k(&self.slopes, k));
        let strictly_increasing = |v: &[i64]| v.windows(2).all(|w| w[0] < w[1]);
        let mut all: Vec<i64> = sl.iter().chain(tl.iter()).copied().collect();
        all.sort_unstable();
        let expected: Vec<i64> = (2..dm).collect();
        if !strictly_increasing(&sl) || !strictly_increasing(&tl) || all != expected {
            return Err(MdsError::Internal(alloc::format!(
                "column counts below d' = {dm} do not partition 2..{}",
                dm - 1
            )));
        }
        Ok(Some((sl, tl)))
    }
}

pub fn reduced_degree(s: &Slopes) -> Result<i64> {
    Ok(ColumnProfile::new(s)?.d)
}

pub fn minimal_degree(s: &Slopes) -> Result<i64> {
    Ok(ColumnProfile::new(s)?.d_min)
}

pub fn shape_partition(s: &Slopes) -> Result<Option<(Vec<i64>, Vec<i64>)>> {
    Ok(ColumnProfile::new(s)?.shape)
}

/// Least `gamma >= 1` with `gamma s2^2`, `gamma s3`, `gamma s2 s3` all integral.
pub fn gamma(s: &Slopes) -> i64 {
    gamma_of(&s.s2, &s.s3)
}

pub fn gamma_of(s2: &Rational, s3: &Rational) -> i64 {
    let g = lcd([&(s2 * s2), s3, &(s2 * s3)]);
    to_i64(&g).expect("gamma fits i64")
}

/// Sorted set view, handy for comparisons.
pub fn as_set(v: &[i64]) -> BTreeSet<i64> {
    v.iter().copied().collect()
}
