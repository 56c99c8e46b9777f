mod common;

use std::collections::BTreeMap;

use common::q;
use mdslab_core::catalog::*;
use mdslab_core::exact::{int, Rational};
use mdslab_core::profile::ColumnProfile;
use mdslab_core::wpp::{find_relations, gap_to_ratio, ratio_to_s1, Triple};
use mdslab_core::Slopes;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Key = (u64, u64, u64, u64);

fn fixture(text: &str) -> BTreeMap<Key, String> {
    text.lines()
        .map(|line| {
            let (key, range) = line.split_once(':').unwrap();
            let k: Vec<u64> = key.split_whitespace().map(|x| x.parse().unwrap()).collect();
            ((k[0], k[1], k[2], k[3]), range.trim().to_string())
        })
        .collect()
}

fn tables() -> (Vec<PhiClass>, Vec<PhiClass>) {
    generate_tables(15).unwrap()
}

fn as_map(rows: &[PhiClass]) -> BTreeMap<Key, String> {
    rows.iter().map(|p| ((p.a, p.f, p.g, p.r), p.interval.range_text())).collect()
}

/// Minimal-degree class recomputed from the slope formulas.
fn class_of(a: u64, f: u64, g: u64, r: u64, rho: &Rational) -> PhiKind {
    let s2 = q(r as i64, g as i64);
    let s3 = q((f * r + a) as i64, (f * g) as i64);
    let s1 = ratio_to_s1(a, f, g, r, rho).unwrap();
    PhiKind::of(ColumnProfile::new(&Slopes::new(s1, s2, s3).unwrap()).unwrap().d_min)
}

#[test]
fn tables_match_fixtures() {
    let (d1, d2) = tables();
    assert_eq!(d1.len(), 25);
    assert_eq!(d2.len(), 50);
    assert_eq!(as_map(&d1), fixture(include_str!("data/table_d1.txt")));
    assert_eq!(as_map(&d2), fixture(include_str!("data/table_ge2.txt")));
    for rows in [&d1, &d2] {
        assert!(rows.windows(2).all(|w| w[0].sort_key() < w[1].sort_key()));
        assert!(rows.iter().all(|p| !p.boundary_by_search));
        assert!(rows.iter().filter(|p| !p.interval.all).all(|p| p.condition4));
    }
    let odd = d2.iter().find(|p| p.label() == "(13; 3, 2; 1)").unwrap();
    assert_eq!(odd.interval.range_text(), "4/13 < b/c < 5/14");
}

#[test]
fn interval_examples() {
    let p = phi_interval(5, 1, 2, 1, PhiKind::Ge2).unwrap().unwrap();
    assert_eq!(p.interval.range_text(), "4/5 < b/c < 17/21");
    assert_eq!(p.divisibility(), "5 | 2c - b");
    let p = phi_interval(11, 1, 7, 3, PhiKind::Ge2).unwrap().unwrap();
    assert_eq!(p.interval.range_text(), "49/11 < b/c < 41/9");
    let p = phi_interval(7, 1, 2, 1, PhiKind::D1).unwrap().unwrap();
    assert_eq!(p.interval.range_text(), "4/7 < b/c < 3/5");
    assert!(phi_interval(5, 1, 2, 1, PhiKind::D1).unwrap().is_none());
    let p = phi_interval(5, 1, 2, 1, PhiKind::D0).unwrap().unwrap();
    assert_eq!(p.interval.range_text(), "17/21 <= b/c < 2");
    assert!(phi_interval(4, 1, 2, 1, PhiKind::Ge2).is_err() || phi_interval(4, 1, 2, 1, PhiKind::Ge2).unwrap().is_none());
}

#[test]
fn smallest_tables() {
    let (d1, d2) = generate_tables(5).unwrap();
    assert!(d1.is_empty());
    let labels: Vec<String> = d2.iter().map(PhiClass::label).collect();
    assert_eq!(labels, ["(5; 1, 2; 1)", "(5; 1, 3; 1)"]);
}

#[test]
fn range_text_roundtrip() {
    let (d1, d2) = tables();
    for p in d1.iter().chain(&d2) {
        let (lo, hi) = p.admissible();
        let back = RhoInterval::parse_range(&p.interval.range_text(), (&lo, &hi)).unwrap();
        assert_eq!(back.range_text(), p.interval.range_text());
        let (x, y) = if p.interval.all { (lo, hi) } else { (p.interval.lo.clone(), p.interval.hi.clone()) };
        let inner = simplest_between(&((&x + &x + &y) / int(3)), &((&x + &y + &y) / int(3)));
        assert!(p.interval.contains(&inner));
        assert_eq!(back.contains(&inner), p.interval.contains(&inner));
    }
}

/// Class members straight from the definition: pairwise coprime, `b/c` in
/// the interval and `a | c g - b f`, ordered by `c` then `b`.
fn brute_members(p: &PhiClass, count: usize) -> Vec<Triple> {
    let mut out = Vec::new();
    for c in 1u64.. {
        for b in 1..=c * 20 {
            let rho = q(b as i64, c as i64);
            let divisible = ((c * p.g) as i64 - (b * p.f) as i64).rem_euclid(p.a as i64) == 0;
            if !divisible || !p.interval.contains(&rho) {
                continue;
            }
            if let Ok(t) = Triple::new(p.a, b, c) {
                out.push(t);
                if out.len() == count {
                    return out;
                }
            }
        }
    }
    unreachable!()
}

fn is_subsequence(small: &[Triple], big: &[Triple]) -> bool {
    let mut it = big.iter();
    small.iter().all(|x| it.any(|y| y == x))
}

#[test]
fn enumerations() {
    let cases: [(Key, [(u64, u64, u64); 3]); 5] = [
        ((5, 1, 2, 1), [(5, 37, 46), (5, 54, 67), (5, 57, 71)]),
        ((5, 1, 3, 1), [(5, 83, 46), (5, 121, 67), (5, 128, 71)]),
        ((13, 1, 8, 3), [(13, 84, 17), (13, 149, 30), (13, 157, 31)]),
        ((11, 1, 7, 3), [(11, 58, 13), (11, 140, 31), (11, 157, 35)]),
        ((14, 1, 9, 4), [(14, 181, 31), (14, 309, 53), (14, 331, 57)]),
    ];
    for ((a, f, g, r), listed) in cases {
        let p = phi_interval(a, f, g, r, PhiKind::Ge2).unwrap().unwrap();
        let got = enumerate_triples(&p, 5).unwrap();
        assert_eq!(got, brute_members(&p, 5), "{}", p.label());
        let listed: Vec<Triple> = listed.iter().map(|&(a, b, c)| Triple::new(a, b, c).unwrap()).collect();
        assert!(is_subsequence(&listed, &got), "{}", p.label());
        assert_eq!(p.witness, Some(got[0]));
    }
    // (13, 111, 22) sits between the first two listed members of (13; 1, 8; 3)
    let p = phi_interval(13, 1, 8, 3, PhiKind::Ge2).unwrap().unwrap();
    assert_eq!(enumerate_triples(&p, 2).unwrap()[1], Triple::new(13, 111, 22).unwrap());
    let p = phi_interval(5, 1, 2, 1, PhiKind::Ge2).unwrap().unwrap();
    assert_eq!(enumerate_triples(&p, 4).unwrap()[3], Triple::new(5, 71, 88).unwrap());
    assert!(enumerate_triples(&p, 0).is_err());
}

#[test]
fn threshold_equivalences() {
    // b/c = 17/21 <=> s1 = -6/5 <=> w = 84/85 for (5; 1, 2; 1)
    let rho = q(17, 21);
    assert_eq!(ratio_to_s1(5, 1, 2, 1, &rho).unwrap(), q(-6, 5));
    assert_eq!(gap_to_ratio(5, 1, 2, &(q(1, 2) - q(-6, 5))), rho);
    let w = |a: u64, f: u64, g: u64, r: u64, rho: &Rational| {
        let s1 = ratio_to_s1(a, f, g, r, rho).unwrap();
        Slopes::new(s1, q(r as i64, g as i64), q((f * r + a) as i64, (f * g) as i64)).unwrap().width()
    };
    assert_eq!(w(5, 1, 2, 1, &rho), q(84, 85));
    let rho = q(38, 21);
    assert_eq!(ratio_to_s1(5, 1, 3, 1, &rho).unwrap(), q(-11, 5));
    assert_eq!(w(5, 1, 3, 1, &rho), q(189, 190));
    assert_eq!(class_of(5, 1, 2, 1, &q(17, 21)), PhiKind::D0);
    assert_eq!(class_of(5, 1, 2, 1, &q(33, 41)), PhiKind::Ge2);

    // every admissible rho of (5; 1, 4; 3) is d0
    assert!(phi_interval(5, 1, 4, 3, PhiKind::Ge2).unwrap().is_none());
    assert!(phi_interval(5, 1, 4, 3, PhiKind::D1).unwrap().is_none());
    let p = phi_interval(5, 1, 4, 3, PhiKind::D0).unwrap().unwrap();
    assert!(p.interval.all);
}

/// The simplest rational in a random slice of the interval, so the
/// triangles stay small.
fn random_inside(rng: &mut ChaCha8Rng, iv: &RhoInterval) -> Rational {
    let n: i64 = rng.gen_range(3..=60);
    let k: i64 = rng.gen_range(1..n - 1);
    let span = &iv.hi - &iv.lo;
    simplest_between(&(&iv.lo + &span * q(k, n)), &(&iv.lo + &span * q(k + 1, n)))
}

#[test]
fn random_points_lie_in_class() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x6d64_5a11);
    let (d1, d2) = tables();
    for p in d1.iter().chain(&d2) {
        let (lo, hi) = p.admissible();
        let iv = if p.interval.all {
            RhoInterval { lo, lo_closed: false, hi, hi_closed: false, all: false }
        } else {
            p.interval.clone()
        };
        for _ in 0..50 {
            let rho = random_inside(&mut rng, &iv);
            assert_eq!(class_of(p.a, p.f, p.g, p.r, &rho), p.cls, "{} at {rho}", p.label());
        }
    }
}

#[test]
fn tables_cover_every_small_triple() {
    let (d1, d2) = tables();
    let lookup = |rows: &[PhiClass], a, f, g, r, rho: &Rational| {
        rows.iter().any(|p| (p.a, p.f, p.g, p.r) == (a, f, g, r) && p.interval.contains(rho))
    };
    let mut seen = [0usize; 3];
    for a in 1..=15u64 {
        for b in 1..=120u64 {
            for c in 1..=120u64 {
                let Ok(t) = Triple::new(a, b, c) else { continue };
                for rel in find_relations(&t).unwrap() {
                    if rel.a != a || rel.b != b {
                        continue;
                    }
                    let rho = q(b as i64, c as i64);
                    let cls = PhiKind::of(ColumnProfile::new(&rel.slopes().unwrap()).unwrap().d_min);
                    let (in1, in2) = (
                        lookup(&d1, a, rel.f, rel.g, rel.r, &rho),
                        lookup(&d2, a, rel.f, rel.g, rel.r, &rho),
                    );
                    assert_eq!((in1, in2), (cls == PhiKind::D1, cls == PhiKind::Ge2), "{t} {rel:?}");
                    seen[cls as usize] += 1;
                }
            }
        }
    }
    assert!(seen.iter().all(|&n| n > 0), "{seen:?}");
}

#[test]
fn grid_spot_checks() {
    let cell = grid_cell(7, 31, 54).unwrap();
    assert_eq!(cell.category, GridCategory::GkNonexample);
    assert_eq!(cell.gk_n, Some(1));
    assert_eq!(grid_cell(7, 8, 9).unwrap().category, GridCategory::CutkoskyBig);
    assert_eq!(grid_cell(7, 14, 21).unwrap().category, GridCategory::NotCoprime);
    assert_eq!(grid_cell(7, 21, 14).unwrap().category, GridCategory::Excluded);

    let cells = grid_classification(7, 40).unwrap();
    assert_eq!(cells.len(), 34 * 34);
    assert_eq!(cells, grid_classification(7, 40).unwrap());
    let counts = grid_counts(&cells);
    assert_eq!(counts.iter().map(|c| c.1).sum::<usize>(), cells.len());
    for (k, _) in &counts {
        assert_eq!(GridCategory::parse(k.as_str()).unwrap(), *k);
    }
    for cell in &cells {
        if cell.category == GridCategory::GkNonexample {
            let s = cell.relation.unwrap().slopes().unwrap();
            assert!(ColumnProfile::new(&s).unwrap().d_min >= 1);
        }
    }
    assert!(grid_classification(0, 5).is_err());
}
