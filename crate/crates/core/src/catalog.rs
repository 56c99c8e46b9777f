//! The classes `Phi(a, f, g, r)`: their `b/c` intervals per minimal-degree
//! class, the two tables for small `a`, example triples and the `(a, b, c)`
//! grid.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use crate::classify::{classify_triple, gk_pattern_match, ThresholdData};
use crate::error::{MdsError, Result};
use crate::exact::{fmt_rational, int, is_integer, Rational};
use crate::profile::{ColumnProfile, Slopes};
use crate::wpp::{gap_to_ratio, ratio_to_s1, relation_search, Relation, Triple};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PhiKind {
    D0,
    D1,
    Ge2,
}

impl PhiKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            PhiKind::D0 => "d0",
            PhiKind::D1 => "d1",
            PhiKind::Ge2 => "ge2",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "d0" => Ok(PhiKind::D0),
            "d1" => Ok(PhiKind::D1),
            "ge2" | "d2" => Ok(PhiKind::Ge2),
            _ => Err(MdsError::Parse(format!("unknown class {s:?} (expected d0, d1 or ge2)"))),
        }
    }

    /// The class of a minimal degree.
    pub fn of(d_min: i64) -> Self {
        match d_min {
            0 => PhiKind::D0,
            1 => PhiKind::D1,
            _ => PhiKind::Ge2,
        }
    }
}

impl fmt::Display for PhiKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// An interval of `rho = b/c` with tracked endpoint closedness. `all` marks
/// the whole admissible range `(g^2/a, g/f)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RhoInterval {
    pub lo: Rational,
    pub lo_closed: bool,
    pub hi: Rational,
    pub hi_closed: bool,
    pub all: bool,
}

impl RhoInterval {
    pub fn contains(&self, x: &Rational) -> bool {
        let lo_ok = if self.lo_closed { *x >= self.lo } else { *x > self.lo };
        let hi_ok = if self.hi_closed { *x <= self.hi } else { *x < self.hi };
        lo_ok && hi_ok
    }

    pub fn is_empty(&self) -> bool {
        self.lo > self.hi || (self.lo == self.hi && !(self.lo_closed && self.hi_closed))
    }

    /// `"All"` or e.g. `"4/5 < b/c < 17/21"`.
    pub fn range_text(&self) -> String {
        if self.all {
            return "All".into();
        }
        let op = |closed: bool| if closed { "<=" } else { "<" };
        format!(
            "{} {} b/c {} {}",
            fmt_rational(&self.lo),
            op(self.lo_closed),
            op(self.hi_closed),
            fmt_rational(&self.hi)
        )
    }

    /// Inverse of [`RhoInterval::range_text`] given the admissible range.
    pub fn parse_range(text: &str, admissible: (&Rational, &Rational)) -> Result<Self> {
        let text = text.trim();
        if text == "All" {
            return Ok(Self {
                lo: admissible.0.clone(),
                lo_closed: false,
                hi: admissible.1.clone(),
                hi_closed: false,
                all: true,
            });
        }
        let parts: Vec<&str> = text.split_whitespace().collect();
        let bad = || MdsError::Parse(format!("malformed range {text:?}"));
        if parts.len() != 5 || parts[2] != "b/c" {
            return Err(bad());
        }
        let closed = |op: &str| match op {
            "<" => Ok(false),
            "<=" => Ok(true),
            _ => Err(bad()),
        };
        Ok(Self {
            lo: crate::exact::parse_rational(parts[0])?,
            lo_closed: closed(parts[1])?,
            hi: crate::exact::parse_rational(parts[4])?,
            hi_closed: closed(parts[3])?,
            all: false,
        })
    }
}

/// One nonempty class `Phi(a, f, g, r)` restricted to a minimal-degree class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PhiClass {
    pub a: u64,
    pub f: u64,
    pub g: u64,
    pub r: u64,
    pub cls: PhiKind,
    pub interval: RhoInterval,
    /// Whether the auxiliary condition of the `d = 0` criterion holds.
    pub condition4: bool,
    /// Set when the `d0`/`ge2` boundary had to be located by bisection.
    pub boundary_by_search: bool,
    /// The first pairwise coprime triple found in the class, if any within
    /// the search budget. Some classes have a nonempty interval but no
    /// realizing triple at all.
    pub witness: Option<Triple>,
}

impl PhiClass {
    /// `"(a; f, g; r)"`.
    pub fn label(&self) -> String {
        format!("({}; {}, {}; {})", self.a, self.f, self.g, self.r)
    }

    /// The congruence `a | c g - b f`.
    pub fn divisibility(&self) -> String {
        let coef = |k: u64, v: &str| if k == 1 { String::from(v) } else { format!("{k}{v}") };
        format!("{} | {} - {}", self.a, coef(self.g, "c"), coef(self.f, "b"))
    }

    /// `(g^2/a, g/f)`.
    pub fn admissible(&self) -> (Rational, Rational) {
        admissible(self.a, self.f, self.g)
    }

    pub fn sort_key(&self) -> (u64, u64, u64, u64) {
        (self.a, self.g, self.f, self.r)
    }
}

fn q(n: u64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

fn admissible(a: u64, f: u64, g: u64) -> (Rational, Rational) {
    (q(g * g) / q(a), q(g) / q(f))
}

/// Minimal-degree class of the slopes attached to `rho`.
fn class_at(a: u64, f: u64, g: u64, r: u64, rho: &Rational) -> Result<PhiKind> {
    let s2 = Rational::new(BigInt::from(r), BigInt::from(g));
    let s3 = q(f * r + a) / q(f * g);
    let s1 = ratio_to_s1(a, f, g, r, rho)?;
    let prof = ColumnProfile::new(&Slopes::new(s1, s2, s3)?)?;
    Ok(PhiKind::of(prof.d_min))
}

/// Interval of the gap `D = s2 - s1`; `hi = None` is unbounded.
#[derive(Clone, Debug)]
struct GapInterval {
    lo: Rational,
    lo_closed: bool,
    hi: Option<Rational>,
}

const SEARCH_STEPS: usize = 48;

/// Least gap in `(lo, hi]` where the class becomes `d0`, assuming a single
/// change, located by bisection and rounded to the simplest rational.
fn bisect_boundary(a: u64, f: u64, g: u64, r: u64, lo: &Rational, hi: &Rational) -> Result<Rational> {
    let class = |d: &Rational| class_at(a, f, g, r, &gap_to_ratio(a, f, g, d));
    let (mut l, mut h) = (lo.clone(), hi.clone());
    for _ in 0..SEARCH_STEPS {
        let mid = (&l + &h) / int(2);
        if class(&mid)? == PhiKind::D0 {
            h = mid;
        } else {
            l = mid;
        }
    }
    let simple = simplest_between(&l, &h);
    if class(&simple)? == PhiKind::D0 {
        Ok(simple)
    } else {
        Ok(h)
    }
}

/// The rational with the smallest denominator in `[lo, hi]`, `lo <= hi`.
pub fn simplest_between(lo: &Rational, hi: &Rational) -> Rational {
    let c = Rational::from_integer(lo.ceil().to_integer());
    if c <= *hi {
        return c;
    }
    let fl = Rational::from_integer(lo.floor().to_integer());
    let inner = simplest_between(&(hi - &fl).recip(), &(lo - &fl).recip());
    fl + inner.recip()
}

/// `rho`-interval of a class, with its endpoints, before the emptiness check.
pub fn phi_range(a: u64, f: u64, g: u64, r: u64, cls: PhiKind) -> Result<Option<(RhoInterval, bool, bool)>> {
    validate(a, f, g, r)?;
    if f * g >= a {
        return Ok(None);
    }
    let s2 = Rational::new(BigInt::from(r), BigInt::from(g));
    let s3 = q(f * r + a) / q(f * g);
    let data = ThresholdData::new(&s2, &s3);
    // w < 1 iff D > (s3 - s2) / (s3 - s2 - 1).
    let spread = &s3 - &s2;
    let d_min = &spread / (&spread - int(1));
    let (lo_adm, hi_adm) = admissible(a, f, g);
    if gap_to_ratio(a, f, g, &d_min) != lo_adm {
        return Err(MdsError::Internal("w = 1 boundary does not map to g^2/a".into()));
    }
    let open_from_dmin = |lo: Rational, closed: bool| {
        if lo > d_min {
            GapInterval { lo, lo_closed: closed, hi: None }
        } else {
            GapInterval { lo: d_min.clone(), lo_closed: false, hi: None }
        }
    };
    let mut by_search = false;
    let gap_iv = if data.r1 == 1 {
        match cls {
            PhiKind::D1 => Some(GapInterval { lo: d_min.clone(), lo_closed: false, hi: None }),
            _ => None,
        }
    } else {
        let one = data.one_gap.clone();
        let mut upper = data.threshold().ok_or_else(|| {
            MdsError::Internal(format!("no d = 0 threshold for ({a}; {f}, {g}; {r})"))
        })?;
        if !data.c4 {
            let lo = one.clone().max(d_min.clone());
            if upper > lo {
                upper = bisect_boundary(a, f, g, r, &lo, &upper)?;
            }
            by_search = true;
        }
        match cls {
            PhiKind::D1 => {
                (one > d_min).then(|| GapInterval { lo: d_min.clone(), lo_closed: false, hi: Some(one.clone()) })
            }
            PhiKind::D0 => Some(open_from_dmin(upper.clone(), true)),
            PhiKind::Ge2 => {
                let lo = open_from_dmin(one.clone(), true);
                (upper > lo.lo).then(|| GapInterval { hi: Some(upper.clone()), ..lo })
            }
        }
    };
    let Some(iv) = gap_iv else { return Ok(None) };
    let all = iv.lo == d_min && !iv.lo_closed && iv.hi.is_none();
    let interval = RhoInterval {
        lo: gap_to_ratio(a, f, g, &iv.lo),
        lo_closed: iv.lo_closed,
        hi: iv.hi.as_ref().map_or(hi_adm.clone(), |h| gap_to_ratio(a, f, g, h)),
        hi_closed: false,
        all,
    };
    if interval.is_empty() {
        return Ok(None);
    }
    verify_interval(a, f, g, r, cls, &interval)?;
    Ok(Some((interval, data.c4, by_search)))
}

fn validate(a: u64, f: u64, g: u64, r: u64) -> Result<()> {
    if a == 0 || f == 0 || g == 0 {
        return Err(MdsError::InvalidParameters("a, f, g must be positive".into()));
    }
    if r < 1 || r > g {
        return Err(MdsError::InvalidParameters(format!("r = {r} is not in 1..={g}")));
    }
    if (f * r + a) % g != 0 {
        return Err(MdsError::InvalidParameters(format!("{g} does not divide {f}*{r} + {a}")));
    }
    Ok(())
}

const SAMPLES: i64 = 20;

/// Checks the class at interior samples, at closed endpoints, and that it
/// changes just outside open endpoints inside the admissible range.
fn verify_interval(a: u64, f: u64, g: u64, r: u64, cls: PhiKind, iv: &RhoInterval) -> Result<()> {
    let (lo_adm, hi_adm) = admissible(a, f, g);
    let width = &iv.hi - &iv.lo;
    let check = |rho: &Rational, expect_same: bool| -> Result<()> {
        let got = class_at(a, f, g, r, rho)?;
        if (got == cls) != expect_same {
            return Err(MdsError::Internal(format!(
                "({a}; {f}, {g}; {r}) {cls}: b/c = {} gives class {got}",
                fmt_rational(rho)
            )));
        }
        Ok(())
    };
    let step = &width / int(2 * SAMPLES + 2);
    for i in 1..=SAMPLES {
        let from = &iv.lo + &step * int(2 * i);
        check(&simplest_between(&from, &(&from + &step)), true)?;
    }
    let eps = &width / int(1000);
    for (end, closed, dir) in [(&iv.lo, iv.lo_closed, -1i64), (&iv.hi, iv.hi_closed, 1)] {
        if closed {
            check(end, true)?;
        }
        let near = end + &eps * int(dir);
        let (x, y) = if dir < 0 { (near, end - &eps / int(2)) } else { (end + &eps / int(2), near) };
        let outside = simplest_between(&x, &y);
        let inside_adm = outside > lo_adm && outside < hi_adm;
        if !closed && *end > lo_adm && *end < hi_adm {
            check(end, false)?;
        }
        if inside_adm {
            check(&outside, false)?;
        }
    }
    Ok(())
}

/// Search budget for the first triple of a class.
pub const WITNESS_MAX_C: u64 = 400_000;
pub const WITNESS_MAX_CANDIDATES: u64 = 2_000_000;

/// Triples `(a, b, c)` of the class, by increasing `c` then `b`.
fn triples_in(a: u64, f: u64, g: u64, r: u64, iv: &RhoInterval, limit: usize) -> Vec<(Triple, Relation)> {
    let mut out = Vec::new();
    let h = f.gcd(&a);
    let a_red = a / h;
    let f_inv = if a_red == 1 {
        0
    } else {
        let inv = crate::exact::mod_inverse(&BigInt::from(f / h), &BigInt::from(a_red)).expect("coprime");
        inv.to_u64().expect("small")
    };
    let (ln, ld) = (iv.lo.numer().to_i128().expect("small"), iv.lo.denom().to_i128().expect("small"));
    let (hn, hd) = (iv.hi.numer().to_i128().expect("small"), iv.hi.denom().to_i128().expect("small"));
    let mut candidates = 0u64;
    for c in 1..=WITNESS_MAX_C {
        if (c * g) % h != 0 {
            continue;
        }
        let residue = if a_red == 1 { 0 } else { ((c * g / h) % a_red) * f_inv % a_red };
        // b in the interval: lo * c (<|<=) b (<|<=) hi * c.
        let c_i = c as i128;
        let mut b_lo = (ln * c_i).div_euclid(ld);
        if !(iv.lo_closed && (ln * c_i).rem_euclid(ld) == 0) {
            b_lo += 1;
        }
        let mut b_hi = (hn * c_i).div_euclid(hd);
        if (hn * c_i).rem_euclid(hd) == 0 && !iv.hi_closed {
            b_hi -= 1;
        }
        let b_lo = b_lo.max(1) as u64;
        if b_hi < b_lo as i128 {
            continue;
        }
        let b_hi = b_hi as u64;
        let start = b_lo + (residue + a_red - b_lo % a_red) % a_red;
        let mut b = start;
        while b <= b_hi {
            candidates += 1;
            if let Some(hit) = accept(a, b, c, f, g, r) {
                out.push(hit);
                if out.len() >= limit {
                    return out;
                }
            }
            b += a_red;
        }
        if candidates > WITNESS_MAX_CANDIDATES {
            break;
        }
    }
    out
}

fn accept(a: u64, b: u64, c: u64, f: u64, g: u64, r: u64) -> Option<(Triple, Relation)> {
    let cg = c as u128 * g as u128;
    let bf = b as u128 * f as u128;
    if cg <= bf || (cg - bf) % a as u128 != 0 {
        return None;
    }
    let e = ((cg - bf) / a as u128) as u64;
    if e.gcd(&f).gcd(&g) != 1 {
        return None;
    }
    let t = Triple::new(a, b, c).ok()?;
    let rel = Relation::new(a, b, c, e, f, g).ok()?;
    (rel.r == r).then_some((t, rel))
}

/// The class `Phi(a, f, g, r)` of the given kind, if its interval is
/// nonempty and `gcd(r, g) = 1`.
pub fn phi_interval(a: u64, f: u64, g: u64, r: u64, cls: PhiKind) -> Result<Option<PhiClass>> {
    validate(a, f, g, r)?;
    if r.gcd(&g) != 1 {
        return Ok(None);
    }
    let Some((interval, condition4, boundary_by_search)) = phi_range(a, f, g, r, cls)? else { return Ok(None) };
    let witness = if g % f.gcd(&a) == 0 {
        triples_in(a, f, g, r, &interval, 1).into_iter().next().map(|(t, _)| t)
    } else {
        None
    };
    Ok(Some(PhiClass { a, f, g, r, cls, interval, condition4, boundary_by_search, witness }))
}

/// Nonempty classes of kind `d1` and `ge2` for all `a <= a_max`, each sorted
/// by `(a, g, f, r)`.
pub fn generate_tables(a_max: u64) -> Result<(Vec<PhiClass>, Vec<PhiClass>)> {
    let mut d1 = Vec::new();
    let mut d2 = Vec::new();
    for (a, f, g, r) in sweep(a_max) {
        if let Some(p) = phi_interval(a, f, g, r, PhiKind::D1)? {
            d1.push(p);
        }
        if let Some(p) = phi_interval(a, f, g, r, PhiKind::Ge2)? {
            d2.push(p);
        }
    }
    d1.sort_by_key(PhiClass::sort_key);
    d2.sort_by_key(PhiClass::sort_key);
    Ok((d1, d2))
}

/// All `(a, f, g, r)` with `a <= a_max`, `f g < a`, `1 <= r <= g`, `g | f r + a`.
pub fn sweep(a_max: u64) -> Vec<(u64, u64, u64, u64)> {
    let mut out = Vec::new();
    for a in 1..=a_max {
        for g in 1..a {
            for f in 1..=(a - 1) / g {
                for r in 1..=g {
                    if (f * r + a) % g == 0 {
                        out.push((a, f, g, r));
                    }
                }
            }
        }
    }
    out
}

/// The first `limit` triples of a class by increasing `c` then `b`, each
/// re-classified from scratch.
pub fn enumerate_triples(phi: &PhiClass, limit: usize) -> Result<Vec<Triple>> {
    if limit == 0 {
        return Err(MdsError::InvalidParameters("limit must be at least 1".into()));
    }
    let found = triples_in(phi.a, phi.f, phi.g, phi.r, &phi.interval, limit);
    let mut out = Vec::with_capacity(found.len());
    for (t, rel) in found {
        let c = classify_triple(&t)?;
        let matches = c.relation.map_or(false, |x| x == rel) || c.mirror.map_or(false, |x| x == rel);
        if !matches {
            return Err(MdsError::Internal(format!("{t} does not carry the relation {rel:?}")));
        }
        let prof = ColumnProfile::new(&rel.slopes()?)?;
        if PhiKind::of(prof.d_min) != phi.cls {
            return Err(MdsError::Internal(format!("{t} has d' = {}, outside class {}", prof.d_min, phi.cls)));
        }
        out.push(t);
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GridCategory {
    CutkoskyBig,
    NotCoprime,
    NoRelation,
    AnticanonicalBig,
    GkNonexample,
    Rest,
    Excluded,
}

impl GridCategory {
    pub const ALL: [GridCategory; 7] = [
        GridCategory::CutkoskyBig,
        GridCategory::NotCoprime,
        GridCategory::NoRelation,
        GridCategory::AnticanonicalBig,
        GridCategory::GkNonexample,
        GridCategory::Rest,
        GridCategory::Excluded,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            GridCategory::CutkoskyBig => "cutkosky-big",
            GridCategory::NotCoprime => "not-coprime",
            GridCategory::NoRelation => "no-relation",
            GridCategory::AnticanonicalBig => "anticanonical-big",
            GridCategory::GkNonexample => "gk-nonexample",
            GridCategory::Rest => "rest",
            GridCategory::Excluded => "b-gt-c-excluded",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Self::ALL
            .iter()
            .copied()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| MdsError::Parse(format!("unknown grid category {s:?}")))
    }
}

impl fmt::Display for GridCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GridCell {
    pub b: u64,
    pub c: u64,
    pub category: GridCategory,
    pub relation: Option<Relation>,
    pub gk_n: Option<i64>,
}

/// Category of one cell, in priority order.
pub fn grid_cell(a: u64, b: u64, c: u64) -> Result<GridCell> {
    let mut cell = GridCell { b, c, category: GridCategory::Rest, relation: None, gk_n: None };
    if b > c {
        cell.category = GridCategory::Excluded;
        return Ok(cell);
    }
    let s = (a + b + c) as u128;
    if s * s > a as u128 * b as u128 * c as u128 {
        cell.category = GridCategory::CutkoskyBig;
        return Ok(cell);
    }
    let Ok(t) = Triple::new(a, b, c) else {
        cell.category = GridCategory::NotCoprime;
        return Ok(cell);
    };
    let search = relation_search(&t)?;
    let Some(rel) = search.canonical else {
        cell.category = GridCategory::NoRelation;
        return Ok(cell);
    };
    cell.relation = Some(rel);
    if (rel.c as u128) * (rel.g as u128) < s {
        cell.category = GridCategory::AnticanonicalBig;
        return Ok(cell);
    }
    let slopes = rel.slopes()?;
    if let Some(n) = gk_pattern_match(&slopes)? {
        cell.gk_n = Some(n);
        if !is_integer(&(int(n) * slopes.s2())) {
            cell.category = GridCategory::GkNonexample;
        }
    }
    Ok(cell)
}

/// Every `(b, c)` with `a <= b, c <= max_bc`, row-major in `b`.
pub fn grid_classification(a: u64, max_bc: u64) -> Result<Vec<GridCell>> {
    if max_bc < a || a == 0 {
        return Err(MdsError::InvalidParameters(format!("need 1 <= a <= max, got a = {a}, max = {max_bc}")));
    }
    let mut out = Vec::new();
    for b in a..=max_bc {
        for c in a..=max_bc {
            out.push(grid_cell(a, b, c)?);
        }
    }
    Ok(out)
}

/// Category counts in [`GridCategory::ALL`] order.
pub fn grid_counts(cells: &[GridCell]) -> Vec<(GridCategory, usize)> {
    GridCategory::ALL.iter().map(|&k| (k, cells.iter().filter(|c| c.category == k).count())).collect()
}
