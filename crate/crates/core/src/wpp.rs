//! Weighted projective planes: relations `ae + bf = cg`, the residue `r`,
//! and conversion to slopes.

use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use crate::error::{MdsError, Result};
use crate::exact::{crt_solve, mod_inverse, Rational};
use crate::profile::Slopes;

/// Positive weights `(a, b, c)`, pairwise coprime when built with [`Triple::new`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Triple {
    pub a: u64,
    pub b: u64,
    pub c: u64,
}

impl Triple {
    pub fn new(a: u64, b: u64, c: u64) -> Result<Self> {
        if a == 0 || b == 0 || c == 0 {
            return Err(MdsError::InvalidParameters("weights must be positive".into()));
        }
        let t = Self { a, b, c };
        if !t.is_pairwise_coprime() {
            return Err(MdsError::NotCoprime(a, b, c));
        }
        Ok(t)
    }

    /// Parses `"a,b,c"`.
    pub fn parse(text: &str) -> Result<Self> {
        let parts: Vec<&str> = text.split(',').map(str::trim).collect();
        let bad = || MdsError::Parse(alloc::format!("expected a,b,c positive integers, got {text:?}"));
        if parts.len() != 3 {
            return Err(bad());
        }
        let mut w = [0u64; 3];
        for (slot, p) in w.iter_mut().zip(&parts) {
            if p.is_empty() || !p.bytes().all(|c| c.is_ascii_digit()) {
                return Err(bad());
            }
            *slot = p.parse().map_err(|_| bad())?;
        }
        Self::new(w[0], w[1], w[2])
    }

    pub fn is_pairwise_coprime(&self) -> bool {
        self.a.gcd(&self.b) == 1 && self.a.gcd(&self.c) == 1 && self.b.gcd(&self.c) == 1
    }

    /// Cutkosky's criterion `(a+b+c)^2 > abc`.
    pub fn cutkosky_big(&self) -> bool {
        let s = (self.a + self.b + self.c) as u128;
        s * s > self.a as u128 * self.b as u128 * self.c as u128
    }
}

impl fmt::Display for Triple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.a, self.b, self.c)
    }
}

/// `a e + b f = c g` with `gcd(e, f, g) = 1` and residue `1 <= r <= g`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Relation {
    pub a: u64,
    pub b: u64,
    pub c: u64,
    pub e: u64,
    pub f: u64,
    pub g: u64,
    pub r: u64,
}

impl Relation {
    /// Builds a relation, solving for `r` and checking the defining identities.
    pub fn new(a: u64, b: u64, c: u64, e: u64, f: u64, g: u64) -> Result<Self> {
        if [a, b, c, e, f, g].contains(&0) {
            return Err(MdsError::InvalidParameters("relation entries must be positive".into()));
        }
        if a as u128 * e as u128 + b as u128 * f as u128 != c as u128 * g as u128 {
            return Err(MdsError::InvalidParameters(alloc::format!(
                "{a}*{e} + {b}*{f} != {c}*{g}"
            )));
        }
        if e.gcd(&f).gcd(&g) != 1 {
            return Err(MdsError::InvalidParameters("gcd(e, f, g) must be 1".into()));
        }
        let r = residue_r(a, b, c, e, f, g)?;
        Ok(Self { a, b, c, e, f, g, r })
    }

    pub fn triple(&self) -> Triple {
        Triple { a: self.a, b: self.b, c: self.c }
    }

    /// `w = c g^2 / (a b)`.
    pub fn width(&self) -> Rational {
        Rational::new(
            BigInt::from(self.c) * BigInt::from(self.g) * BigInt::from(self.g),
            BigInt::from(self.a) * BigInt::from(self.b),
        )
    }

    /// The same relation read with `a` and `b` exchanged.
    pub fn mirror(&self) -> Result<Self> {
        Self::new(self.b, self.a, self.c, self.f, self.e, self.g)
    }

    pub fn slopes(&self) -> Result<Slopes> {
        slopes_from_relation(self)
    }

    /// Sort key used to pick the canonical relation of a mirror pair.
    pub fn canonical_key(&self) -> (u64, u64, u64) {
        (self.g, self.e, self.f)
    }

    fn is_mirror_of(&self, other: &Relation) -> bool {
        (self.b, self.a, self.c, self.f, self.e, self.g)
            == (other.a, other.b, other.c, other.e, other.f, other.g)
    }
}

/// The unique `1 <= r <= g` with `g | e r - b` and `g | f r + a`.
///
/// With `alpha = gcd(e, g)` and `beta = gcd(f, g)` the system reduces to
/// `r = (e/alpha)^-1 (b/alpha) mod g/alpha` and `r = -(f/beta)^-1 (a/beta) mod g/beta`.
pub fn residue_r(a: u64, b: u64, c: u64, e: u64, f: u64, g: u64) -> Result<u64> {
    let fail = || MdsError::Internal(alloc::format!("no residue r for relation ({a},{b},{c};{e},{f},{g})"));
    let alpha = e.gcd(&g);
    let beta = f.gcd(&g);
    if b % alpha != 0 || a % beta != 0 {
        return Err(fail());
    }
    let m1 = BigInt::from(g / alpha);
    let m2 = BigInt::from(g / beta);
    let r1 = mod_inverse(&BigInt::from(e / alpha), &m1).ok_or_else(fail)? * BigInt::from(b / alpha);
    let r2 = -(mod_inverse(&BigInt::from(f / beta), &m2).ok_or_else(fail)? * BigInt::from(a / beta));
    let x = crt_solve(&[(r1.mod_floor(&m1), m1), (r2.mod_floor(&m2), m2)]).ok_or_else(fail)?;
    let mut r = u64::try_from(x).map_err(|_| fail())?;
    if r == 0 {
        r = g;
    }
    let ok1 = (e as i128 * r as i128 - b as i128).rem_euclid(g as i128) == 0;
    let ok2 = (f as i128 * r as i128 + a as i128).rem_euclid(g as i128) == 0;
    if !(ok1 && ok2) {
        return Err(fail());
    }
    Ok(r)
}

/// `s1 = (e r - b)/(e g)`, `s2 = r/g`, `s3 = (f r + a)/(f g)`.
pub fn slopes_from_relation(rel: &Relation) -> Result<Slopes> {
    let q = |n: i128, d: i128| Rational::new(BigInt::from(n), BigInt::from(d));
    let (a, b, e, f, g, r) =
        (rel.a as i128, rel.b as i128, rel.e as i128, rel.f as i128, rel.g as i128, rel.r as i128);
    let s = Slopes::new(q(e * r - b, e * g), q(r, g), q(f * r + a, f * g))?;
    if s.width() != rel.width() {
        return Err(MdsError::Internal("slope width differs from c g^2/(a b)".into()));
    }
    Ok(s)
}

/// All relations with `w < 1` over the six orderings, in a fixed order.
pub fn find_relations(t: &Triple) -> Result<Vec<Relation>> {
    if !t.is_pairwise_coprime() {
        return Err(MdsError::NotCoprime(t.a, t.b, t.c));
    }
    let (a, b, c) = (t.a, t.b, t.c);
    let orders = [(a, b, c), (b, a, c), (a, c, b), (c, a, b), (b, c, a), (c, b, a)];
    let mut out: Vec<Relation> = Vec::new();
    for (x, y, z) in orders {
        let (x, y, z) = (x as u128, y as u128, z as u128);
        let mut g = 1u128;
        while z * g * g < x * y {
            let mut e = 1u128;
            while x * e < z * g {
                let rest = z * g - x * e;
                if rest % y == 0 {
                    let f = rest / y;
                    if e.gcd(&f).gcd(&g) == 1 {
                        let rel = Relation::new(x as u64, y as u64, z as u64, e as u64, f as u64, g as u64)?;
                        if !out.contains(&rel) {
                            out.push(rel);
                        }
                    }
                }
                e += 1;
            }
            g += 1;
        }
    }
    Ok(out)
}

/// Outcome of the relation search for one triple.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationSearch {
    pub relations: Vec<Relation>,
    /// The lexicographically smaller `(g, e, f)` of the mirror pair.
    pub canonical: Option<Relation>,
    pub mirror: Option<Relation>,
}

/// Searches relations and checks that at most one mirror pair exists.
pub fn relation_search(t: &Triple) -> Result<RelationSearch> {
    let relations = find_relations(t)?;
    let Some(first) = relations.iter().min_by_key(|r| r.canonical_key()).copied() else {
        return Ok(RelationSearch { relations, canonical: None, mirror: None });
    };
    let mut mirror = None;
    for r in &relations {
        if *r == first {
            continue;
        }
        if r.is_mirror_of(&first) {
            mirror = Some(*r);
        } else {
            return Err(MdsError::Internal(alloc::format!(
                "triple {t} has two essentially different relations: {first:?} and {r:?}"
            )));
        }
    }
    Ok(RelationSearch { relations, canonical: Some(first), mirror })
}

/// `s1 = r/g - a rho / (g (g - f rho))` for `rho = b/c`.
pub fn ratio_to_s1(a: u64, f: u64, g: u64, r: u64, rho: &Rational) -> Result<Rational> {
    let q = |n: u64| Rational::from_integer(BigInt::from(n));
    let den = q(g) * (q(g) - q(f) * rho);
    if den.is_zero() {
        return Err(MdsError::DivisionByZero);
    }
    Ok(Rational::new(BigInt::from(r), BigInt::from(g)) - q(a) * rho / den)
}

/// Inverse of [`ratio_to_s1`] in terms of the gap `D = s2 - s1`:
/// `rho = D g^2 / (a + D g f)`.
pub fn gap_to_ratio(a: u64, f: u64, g: u64, gap: &Rational) -> Rational {
    let q = |n: u64| Rational::from_integer(BigInt::from(n));
    gap * q(g * g) / (q(a) + gap * q(g * f))
}

/// `(cutkosky, anticanonical)`; the second is present only with a relation.
pub fn bigness_checks(t: &Triple, rel: Option<&Relation>) -> (bool, Option<bool>) {
    let anti = rel.map(|r| (r.c as u128) * (r.g as u128) < (r.a + r.b + r.c) as u128);
    (t.cutkosky_big(), anti)
}
