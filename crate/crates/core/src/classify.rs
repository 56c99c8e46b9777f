//! Verdicts for blow-ups, from slopes or from weighted projective planes.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive};

use crate::error::{MdsError, Result};
use crate::exact::{floor, fmt_rational, frac, int, is_integer, Rational};
use crate::profile::{r_k, require_width, ColumnProfile, Slopes};
use crate::wpp::{relation_search, Relation, Triple};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Verdict {
    Mds,
    NotMds,
    Unknown,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Mds => "MDS",
            Verdict::NotMds => "NotMDS",
            Verdict::Unknown => "Unknown",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

pub const RULE_D_ZERO: &str = "thm-main01-1";
pub const RULE_D_PRIME_ONE: &str = "thm-main01-2";
pub const RULE_LOW_D_PRIME: &str = "thm-main03";
pub const RULE_INTEGRAL_S2: &str = "cor-zs2";
pub const RULE_THRESHOLDS: &str = "prop-main02";
pub const RULE_G_ONE: &str = "cor-g1";
pub const RULE_CUTKOSKY: &str = "cutkosky";
pub const RULE_NO_RELATION: &str = "no-relation";
pub const RULE_ANTICANONICAL: &str = "anticanonical-big";
pub const RULE_OPEN_INTEGRAL: &str = "open-dprime-s2-integral";
pub const RULE_OPEN_LARGE: &str = "open-dprime-above-9";
pub const SUB_GK: &str = "gk-pattern";
pub const SUB_MAIN04: &str = "main04-pattern";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Classification {
    pub verdict: Verdict,
    /// Deciding rule; `rules` lists every rule that applies, primary first.
    pub rule: String,
    pub rules: Vec<String>,
    pub subrule: Option<String>,
    pub d: Option<i64>,
    pub d_min: Option<i64>,
    pub w: Option<Rational>,
    pub m: Option<i64>,
    pub slopes: Option<Slopes>,
    pub gamma: Option<i64>,
    pub shape: Option<(Vec<i64>, Vec<i64>)>,
    pub relation: Option<Relation>,
    pub mirror: Option<Relation>,
    pub evidence: Vec<(String, String)>,
    pub warnings: Vec<String>,
}

impl Classification {
    fn bare(verdict: Verdict, rule: &str) -> Self {
        Self {
            verdict,
            rule: rule.into(),
            rules: vec![rule.into()],
            subrule: None,
            d: None,
            d_min: None,
            w: None,
            m: None,
            slopes: None,
            gamma: None,
            shape: None,
            relation: None,
            mirror: None,
            evidence: Vec::new(),
            warnings: Vec::new(),
        }
    }

    fn push_rule(&mut self, rule: &str) {
        if !self.rules.iter().any(|r| r == rule) {
            self.rules.push(rule.into());
        }
    }

    fn note(&mut self, key: &str, value: impl ToString) {
        self.evidence.push((key.into(), value.to_string()));
    }

    pub fn evidence_value(&self, key: &str) -> Option<&str> {
        self.evidence.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }
}

/// The four conditions of the `d = 0` criterion and what they certify.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThresholdCheck {
    pub c1: bool,
    pub c2: bool,
    pub c3: bool,
    pub c4: bool,
    pub d_zero_certified: bool,
    pub d_nonzero_certified: bool,
    pub gamma: i64,
    /// `max_t (r_t + {(r_t - t) s2}) / (r_t - t)`; `None` when some
    /// `r_t = t` makes the bound infinite, or when `gamma = 1`.
    pub c2_bound: Option<Rational>,
    pub c2_argmax: Vec<i64>,
    pub c3_bound: Rational,
}

fn gap(s: &Slopes) -> Rational {
    s.s2() - s.s1()
}

/// The `c2` maximum and its maximizers over `1 <= t < gamma`.
/// `Err(())` signals an infinite term (`r_t = t`).
fn c2_terms(s2: &Rational, s3: &Rational, gamma: i64) -> core::result::Result<Option<(Rational, Vec<i64>)>, ()> {
    let probe = Slopes::new(s2 - int(1), s2.clone(), s3.clone()).expect("ordered");
    let mut best: Option<(Rational, Vec<i64>)> = None;
    for t in 1..gamma {
        let rt = r_k(&probe, t);
        if rt - t <= 0 {
            return Err(());
        }
        let v = (int(rt) + frac(&(int(rt - t) * s2))) / int(rt - t);
        best = match best {
            Some((b, mut ts)) if b == v => {
                ts.push(t);
                Some((b, ts))
            }
            Some((b, ts)) if b > v => Some((b, ts)),
            _ => Some((v, vec![t])),
        };
    }
    Ok(best)
}

/// `(gamma (s3 - s2) + 1 + {s2}) / (gamma (s3 - s2 - 1) + 1)`.
fn c3_bound(s2: &Rational, s3: &Rational, gamma: i64) -> Rational {
    let g = int(gamma);
    (&g * (s3 - s2) + int(1) + frac(s2)) / (&g * (s3 - s2 - int(1)) + int(1))
}

/// The auxiliary condition at one maximizing `t`.
fn c4_at(s2: &Rational, s3: &Rational, gamma: i64, t: i64, rt: i64) -> bool {
    let g = int(gamma);
    let lhs = &g * (s3 - s2 - int(1)) * (int(rt - 1) + frac(&(int(rt - t) * s2)))
        - int(rt - t) * (&g * (s3 - s2) + int(1));
    !lhs.is_positive()
}

/// Pieces of the criterion that do not depend on `s1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThresholdData {
    pub gamma: i64,
    pub r1: i64,
    /// `1 + {s2}`; `l_1 = 1` iff `s2 - s1 < 1 + {s2}`.
    pub one_gap: Rational,
    pub c2: core::result::Result<Option<(Rational, Vec<i64>)>, ()>,
    pub c3: Rational,
    pub c4: bool,
}

impl ThresholdData {
    pub fn new(s2: &Rational, s3: &Rational) -> Self {
        let gamma = crate::profile::gamma_of(s2, s3);
        let probe = Slopes::new(s2 - int(1), s2.clone(), s3.clone()).expect("ordered");
        let r1 = r_k(&probe, 1);
        let c2 = c2_terms(s2, s3, gamma);
        let c3 = c3_bound(s2, s3, gamma);
        let c4 = match &c2 {
            Ok(Some((_, ts))) => ts.iter().any(|&t| c4_at(s2, s3, gamma, t, r_k(&probe, t))),
            Ok(None) => true,
            Err(()) => false,
        };
        Self { gamma, r1, one_gap: int(1) + frac(s2), c2, c3, c4 }
    }

    pub fn c1(&self, gap: &Rational) -> bool {
        self.r1 != 1 && *gap >= self.one_gap
    }

    pub fn c2(&self, gap: &Rational) -> bool {
        match &self.c2 {
            Ok(None) => true,
            Ok(Some((b, _))) => gap >= b,
            Err(()) => false,
        }
    }

    pub fn c3(&self, gap: &Rational) -> bool {
        *gap >= self.c3
    }

    /// Least gap certifying `d = 0`, when `r_1 != 1`.
    pub fn threshold(&self) -> Option<Rational> {
        if self.r1 == 1 {
            return None;
        }
        let mut t = self.one_gap.clone().max(self.c3.clone());
        match &self.c2 {
            Ok(None) => {}
            Ok(Some((b, _))) => t = t.max(b.clone()),
            Err(()) => return None,
        }
        Some(t)
    }
}

/// Evaluates the four conditions and cross-checks them against the
/// directly computed reduced degree.
pub fn prop_main02_check(s: &Slopes) -> Result<ThresholdCheck> {
    require_width(s)?;
    let data = ThresholdData::new(s.s2(), s.s3());
    let g = gap(s);
    let (c1, c2, c3) = (data.c1(&g), data.c2(&g), data.c3(&g));
    let d_zero_certified = c1 && c2 && c3;
    let d_nonzero_certified = data.c4 && !d_zero_certified;
    let prof = ColumnProfile::new(s)?;
    let d = prof.d;
    if c1 != (prof.l[0] != 1 && prof.r.first() != Some(&1)) {
        return Err(MdsError::Internal(format!("first-column test disagrees with the column counts for {s}")));
    }
    if d_zero_certified && d != 0 {
        return Err(MdsError::Internal(format!("criterion certifies d = 0 for {s} but d = {d}")));
    }
    if d_nonzero_certified && d == 0 {
        return Err(MdsError::Internal(format!("criterion certifies d != 0 for {s} but d = 0")));
    }
    let (c2_bound, c2_argmax) = match data.c2 {
        Ok(Some((b, ts))) => (Some(b), ts),
        _ => (None, Vec::new()),
    };
    Ok(ThresholdCheck {
        c1,
        c2,
        c3,
        c4: data.c4,
        d_zero_certified,
        d_nonzero_certified,
        gamma: data.gamma,
        c2_bound,
        c2_argmax,
        c3_bound: data.c3,
    })
}

/// `n` such that the first column from one side has `n` points and the
/// `i`-th column from the other side has `i + 1` points for `i < n`.
pub fn gk_pattern_match(s: &Slopes) -> Result<Option<i64>> {
    for o in [s.clone(), s.reflect()] {
        let prof = ColumnProfile::new(&o)?;
        let n = prof.l[0];
        if n >= 1 && (1..n).all(|i| prof.r.get(i as usize - 1) == Some(&(i + 1))) {
            if n != prof.d_min {
                return Err(MdsError::Internal(format!("pattern length {n} differs from d' = {}", prof.d_min)));
            }
            return Ok(Some(n));
        }
    }
    Ok(None)
}

/// `d'` in `{5, 7, 9}` whose inequality system the slopes satisfy, up to an
/// integer shear and a reflection.
pub fn main04_pattern_match(s: &Slopes) -> Result<Option<i64>> {
    require_width(s)?;
    for o in [s.clone(), s.reflect()] {
        if is_integer(o.s2()) {
            continue;
        }
        let shift = -floor(o.s2()).to_i64().expect("slope fits");
        let o = o.shear(shift);
        for n in 2..=4i64 {
            let inv = |k: i64| Rational::new(BigInt::one(), BigInt::from(k));
            let s1_ok = *o.s1() > int(-2) - inv(n) && *o.s1() <= int(-2);
            let s2_ok = *o.s2() > inv(n + 1) && *o.s2() < inv(n);
            let s3_ok = *o.s3() >= int(2) && *o.s3() < int(2) + inv(n + 1);
            if s1_ok && s2_ok && s3_ok {
                return Ok(Some(2 * n + 1));
            }
        }
    }
    Ok(None)
}

fn fill_profile(c: &mut Classification, prof: &ColumnProfile) {
    c.d = Some(prof.d);
    c.d_min = Some(prof.d_min);
    c.w = Some(prof.w.clone());
    c.m = Some(prof.m);
    c.slopes = Some(prof.slopes.clone());
    c.gamma = Some(prof.gamma);
    c.shape = prof.shape.clone();
}

pub fn classify_slopes(s: &Slopes) -> Result<Classification> {
    let prof = ColumnProfile::new(s)?;
    let s2 = s.s2();
    let dprime_s2 = int(prof.d_min) * s2;
    let integral = is_integer(&dprime_s2);
    let thresholds = prop_main02_check(s)?;

    let mut c = if prof.d == 0 {
        let mut c = Classification::bare(Verdict::Mds, RULE_D_ZERO);
        if is_integer(s2) {
            c.push_rule(RULE_INTEGRAL_S2);
        }
        if thresholds.d_zero_certified {
            c.push_rule(RULE_THRESHOLDS);
        }
        c
    } else if prof.d_min == 1 {
        let mut c = Classification::bare(Verdict::NotMds, RULE_D_PRIME_ONE);
        c.subrule = Some(SUB_GK.into());
        c.note("pattern_n", 1);
        c
    } else if (2..=9).contains(&prof.d_min) && !integral {
        let gk = gk_pattern_match(s)?;
        let main04 = main04_pattern_match(s)?;
        if gk == Some(prof.d_min) {
            let mut c = Classification::bare(Verdict::NotMds, RULE_LOW_D_PRIME);
            c.subrule = Some(SUB_GK.into());
            c.note("pattern_n", prof.d_min);
            c
        } else if main04 == Some(prof.d_min) {
            let mut c = Classification::bare(Verdict::NotMds, RULE_LOW_D_PRIME);
            c.subrule = Some(SUB_MAIN04.into());
            c.note("matched_system", format!("d'={}", prof.d_min));
            c
        } else {
            let mut c = Classification::bare(Verdict::Unknown, RULE_LOW_D_PRIME);
            c.warnings.push(format!(
                "d' = {} with d' s2 not integral, but neither known corner pattern matches",
                prof.d_min
            ));
            c
        }
    } else if integral {
        Classification::bare(Verdict::Unknown, RULE_OPEN_INTEGRAL)
    } else {
        Classification::bare(Verdict::Unknown, RULE_OPEN_LARGE)
    };
    fill_profile(&mut c, &prof);
    c.note("w", fmt_rational(&prof.w));
    c.note("m", prof.m);
    c.note("mw", prof.mw());
    c.note("gamma", prof.gamma);
    c.note("l1", prof.l[0]);
    c.note("r1", prof.r.first().copied().unwrap_or(0));
    c.note("dprime_s2", fmt_rational(&dprime_s2));
    c.note("dprime_s2_integral", integral);
    c.note("c1", thresholds.c1);
    c.note("c2", thresholds.c2);
    c.note("c3", thresholds.c3);
    c.note("c4", thresholds.c4);
    if let Some((sl, tl)) = &prof.shape {
        c.note("S", join(sl));
        c.note("T", join(tl));
    }
    Ok(c)
}

fn join(v: &[i64]) -> String {
    v.iter().map(i64::to_string).collect::<Vec<_>>().join(",")
}

pub fn classify_triple(t: &Triple) -> Result<Classification> {
    if !t.is_pairwise_coprime() {
        return Err(MdsError::NotCoprime(t.a, t.b, t.c));
    }
    let search = relation_search(t)?;
    let anti = search.canonical.map(|r| (r.c as u128) * (r.g as u128) < (r.a + r.b + r.c) as u128);
    let slopes_c = match &search.canonical {
        Some(rel) => Some(classify_relation(rel, search.mirror.as_ref())?),
        None => None,
    };

    let mut out = if t.cutkosky_big() {
        Classification::bare(Verdict::Mds, RULE_CUTKOSKY)
    } else if search.canonical.is_none() {
        Classification::bare(Verdict::Unknown, RULE_NO_RELATION)
    } else if anti == Some(true) {
        Classification::bare(Verdict::Mds, RULE_ANTICANONICAL)
    } else {
        let mut c = slopes_c.clone().expect("relation present");
        c.relation = search.canonical;
        c.mirror = search.mirror;
        add_relation_evidence(&mut c, t, anti);
        return Ok(c);
    };

    if anti == Some(true) {
        out.push_rule(RULE_ANTICANONICAL);
    }
    if let Some(sc) = slopes_c {
        if sc.verdict != Verdict::Unknown && sc.verdict != out.verdict {
            return Err(MdsError::Internal(format!(
                "{t}: {} gives {} but {} gives {}",
                out.rule, out.verdict, sc.rule, sc.verdict
            )));
        }
        if sc.verdict == out.verdict {
            for r in &sc.rules {
                out.push_rule(r);
            }
        }
        out.subrule = sc.subrule.clone();
        out.d = sc.d;
        out.d_min = sc.d_min;
        out.w = sc.w.clone();
        out.m = sc.m;
        out.slopes = sc.slopes.clone();
        out.gamma = sc.gamma;
        out.shape = sc.shape.clone();
        out.evidence = sc.evidence.clone();
        out.warnings = sc.warnings.clone();
    }
    out.relation = search.canonical;
    out.mirror = search.mirror;
    add_relation_evidence(&mut out, t, anti);
    Ok(out)
}

fn add_relation_evidence(c: &mut Classification, t: &Triple, anti: Option<bool>) {
    c.note("cutkosky_big", t.cutkosky_big());
    if let Some(a) = anti {
        c.note("anticanonical_big", a);
    }
    if let Some(rel) = c.relation {
        if rel.g == 1 && c.verdict == Verdict::Mds {
            c.push_rule(RULE_G_ONE);
        }
    }
}

/// Classifies the slopes of a relation and, if given, of its mirror; the
/// two must agree.
pub fn classify_relation(rel: &Relation, mirror: Option<&Relation>) -> Result<Classification> {
    let c = classify_slopes(&rel.slopes()?)?;
    if let Some(m) = mirror {
        let cm = classify_slopes(&m.slopes()?)?;
        if (cm.verdict, cm.d, cm.d_min) != (c.verdict, c.d, c.d_min) {
            return Err(MdsError::Internal(format!(
                "mirror relations disagree: {} (d={:?}, d'={:?}) vs {} (d={:?}, d'={:?})",
                c.verdict, c.d, c.d_min, cm.verdict, cm.d, cm.d_min
            )));
        }
    }
    Ok(c)
}

/// Whether `d' s2` is an integer.
pub fn dprime_s2_integral(s: &Slopes) -> Result<bool> {
    let prof = ColumnProfile::new(s)?;
    Ok(is_integer(&(int(prof.d_min) * s.s2())))
}
