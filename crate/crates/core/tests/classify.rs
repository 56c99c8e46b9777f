mod common;

use common::{config, q, slopes_integral_s2, slopes_w_le_half, slopes_w_lt_1};
use mdslab_core::classify::*;
use mdslab_core::exact::{int, is_integer, Rational};
use mdslab_core::profile::ColumnProfile;
use mdslab_core::wpp::{relation_search, Relation, Triple};
use mdslab_core::{MdsError, Slopes};
use proptest::prelude::*;

fn sl(text: &str) -> Slopes {
    Slopes::parse(text).unwrap()
}

fn triple(a: u64, b: u64, c: u64) -> Classification {
    classify_triple(&Triple::new(a, b, c).unwrap()).unwrap()
}

#[test]
fn slope_verdicts() {
    let c = classify_slopes(&sl("-3/4,1,9/2")).unwrap();
    assert_eq!((c.verdict, c.rule.as_str()), (Verdict::Mds, RULE_D_ZERO));
    assert!(c.rules.iter().any(|r| r == RULE_INTEGRAL_S2));
    let c = classify_slopes(&sl("-10/11,1/2,4")).unwrap();
    assert_eq!((c.verdict, c.rule.as_str(), c.d_min), (Verdict::NotMds, RULE_D_PRIME_ONE, Some(1)));
    let c = classify_slopes(&sl("-13/11,1/2,3")).unwrap();
    assert_eq!((c.verdict, c.rule.as_str(), c.d_min), (Verdict::Unknown, RULE_OPEN_INTEGRAL, Some(8)));
    assert_eq!(c.evidence_value("dprime_s2"), Some("4"));
    let c = classify_slopes(&sl("-7/3,3/7,2")).unwrap();
    assert_eq!((c.verdict, c.rule.as_str()), (Verdict::NotMds, RULE_LOW_D_PRIME));
    assert_eq!(c.subrule.as_deref(), Some(SUB_MAIN04));
    let c = classify_slopes(&sl("-2,2/3,7/3")).unwrap();
    assert_eq!((c.verdict, c.d_min), (Verdict::Unknown, Some(3)));
    assert!(matches!(classify_slopes(&sl("1,2,3")), Err(MdsError::WidthOutOfRange(w)) if w == int(2)));
}

#[test]
fn threshold_examples() {
    let t = prop_main02_check(&sl("-5/4,1/2,3")).unwrap();
    assert!(t.c1 && t.c2 && t.c3 && t.d_zero_certified);
    assert_eq!(t.gamma, 4);
    assert_eq!(t.c2_bound, Some(q(17, 10)));
    assert_eq!(t.c2_argmax, vec![3]);
    assert_eq!(q(1, 2) - t.c2_bound.unwrap(), q(-6, 5));
    assert_eq!(q(1, 2) - t.c3_bound, q(-8, 7));

    let t = prop_main02_check(&sl("-13/11,1/2,3")).unwrap();
    assert!(!t.c2 && t.c4 && t.d_nonzero_certified && !t.d_zero_certified);

    // s2 = 3/4, s3 = 2: every admissible s1 has d = 0
    for s1 in ["-3", "-5/2", "-9/4", "-2", "-7/4"] {
        let s = Slopes::new(s1.parse::<Rational>().unwrap(), q(3, 4), int(2)).unwrap();
        if s.width() >= int(1) {
            continue;
        }
        let t = prop_main02_check(&s).unwrap();
        assert!(t.d_zero_certified, "{s}");
        assert_eq!(ColumnProfile::new(&s).unwrap().d, 0);
    }
}

#[test]
fn pattern_examples() {
    assert_eq!(gk_pattern_match(&sl("-10/11,1/2,4")).unwrap(), Some(1));
    assert_eq!(gk_pattern_match(&sl("-2,2/3,7/3")).unwrap(), Some(3));
    assert_eq!(gk_pattern_match(&sl("-7/3,3/7,2")).unwrap(), None);
    assert_eq!(main04_pattern_match(&sl("-7/3,3/7,2")).unwrap(), Some(5));
    assert_eq!(main04_pattern_match(&sl("-3/4,1,9/2")).unwrap(), None);
    let rel = Relation::new(13, 84, 17, 4, 1, 8).unwrap();
    assert_eq!(rel.r, 3);
    assert_eq!(main04_pattern_match(&rel.slopes().unwrap()).unwrap(), Some(5));
}

#[test]
fn triple_verdicts() {
    let c = triple(11, 58, 13);
    assert_eq!((c.verdict, c.rule.as_str(), c.d_min), (Verdict::NotMds, RULE_LOW_D_PRIME, Some(5)));
    assert_eq!(c.subrule.as_deref(), Some(SUB_MAIN04));
    let c = triple(8, 13, 15);
    assert_eq!((c.verdict, c.d, c.d_min), (Verdict::Unknown, Some(3), Some(3)));
    let c = triple(5, 37, 46);
    assert_eq!((c.verdict, c.rule.as_str(), c.d_min), (Verdict::Unknown, RULE_OPEN_INTEGRAL, Some(8)));
    assert_eq!(c.evidence_value("cutkosky_big"), Some("false"));
    assert_eq!(c.evidence_value("anticanonical_big"), Some("false"));
    let c = triple(2, 3, 5);
    assert_eq!((c.verdict, c.rule.as_str()), (Verdict::Mds, RULE_CUTKOSKY));
    assert!(matches!(classify_triple(&Triple { a: 14, b: 21, c: 5 }), Err(MdsError::NotCoprime(..))));
}

#[test]
fn open_cases_with_large_minimal_degree() {
    let c = triple(5, 83, 46);
    assert_eq!((c.verdict, c.d_min), (Verdict::Unknown, Some(12)));
    assert_eq!(c.rule, RULE_OPEN_INTEGRAL);
}

#[test]
fn remark_table_fixtures() {
    for ((a, b, cc), d, s2) in [
        ((8, 13, 15), 3, q(2, 3)),
        ((8, 13, 25), 2, q(1, 2)),
        ((15, 19, 29), 3, q(2, 3)),
        ((15, 26, 29), 4, q(3, 4)),
    ] {
        let c = triple(a, b, cc);
        assert_eq!((c.verdict, c.d, c.d_min), (Verdict::Unknown, Some(d), Some(d)), "{a},{b},{cc}");
        let s2_here = c.slopes.as_ref().unwrap().s2().clone();
        assert!(s2_here == s2 || s2_here == int(1) - &s2, "{a},{b},{cc}: s2 = {s2_here}");
        assert!(is_integer(&(int(d) * s2)));
        assert_eq!(c.rule, RULE_OPEN_INTEGRAL);
    }
}

#[test]
fn rule_coverage_for_triples() {
    let mut seen = std::collections::BTreeSet::new();
    for a in 1..=40u64 {
        for b in a..=40 {
            for c in 1..=40 {
                let Ok(t) = Triple::new(a, b, c) else { continue };
                let cls = classify_triple(&t).expect("mirror relations agree");
                match cls.rule.as_str() {
                    RULE_NO_RELATION => assert!(relation_search(&t).unwrap().canonical.is_none()),
                    RULE_ANTICANONICAL => assert_eq!(cls.verdict, Verdict::Mds),
                    RULE_CUTKOSKY => assert!(t.cutkosky_big()),
                    _ => {}
                }
                if let (Some(r), Some(m)) = (&cls.relation, &cls.mirror) {
                    let (x, y) = (
                        classify_relation(r, None).unwrap(),
                        classify_relation(m, None).unwrap(),
                    );
                    assert_eq!((x.verdict, x.d, x.d_min), (y.verdict, y.d, y.d_min));
                }
                seen.insert(cls.rule.clone());
            }
        }
    }
    for rule in [RULE_CUTKOSKY, RULE_NO_RELATION, RULE_ANTICANONICAL] {
        assert!(seen.contains(rule), "{rule} never fired");
    }
}

fn rule_class(c: &Classification) -> (Verdict, String, Option<i64>, Option<i64>) {
    (c.verdict, c.rule.clone(), c.d, c.d_min)
}

proptest! {
    #![proptest_config(config(128, 0x6d64_0007))]

    #[test]
    fn thresholds_agree_with_degree(s in slopes_w_lt_1()) {
        let t = prop_main02_check(&s).unwrap();
        let d = ColumnProfile::new(&s).unwrap().d;
        if t.d_zero_certified {
            prop_assert_eq!(d, 0);
        }
        if t.c4 {
            prop_assert_eq!(t.d_zero_certified, d == 0);
        }
    }

    #[test]
    fn integral_middle_slope_is_mds(s in slopes_integral_s2()) {
        let c = classify_slopes(&s).unwrap();
        prop_assert_eq!(c.verdict, Verdict::Mds);
        prop_assert!(c.rules.iter().any(|r| r == RULE_INTEGRAL_S2));
    }

    #[test]
    fn narrow_triangles_are_mds(s in slopes_w_le_half()) {
        prop_assert_eq!(classify_slopes(&s).unwrap().verdict, Verdict::Mds);
    }

    #[test]
    fn moderate_width_decides(s in slopes_w_lt_1()) {
        let c = classify_slopes(&s).unwrap();
        let dm = c.d_min.unwrap();
        let integral = is_integer(&(int(dm) * s.s2()));
        if s.width() <= q(10, 11) && dm >= 1 && !integral {
            prop_assert_eq!(c.verdict, Verdict::NotMds);
        }
        match c.verdict {
            Verdict::Mds => prop_assert_eq!(c.d, Some(0)),
            Verdict::NotMds => prop_assert!(dm >= 1 && dm <= 9 && !integral),
            Verdict::Unknown => prop_assert!(dm > 9 || integral),
        }
        prop_assert!(c.warnings.is_empty(), "{:?}", c.warnings);
    }

    #[test]
    fn verdict_invariant_under_shear_and_reflection(s in slopes_w_lt_1(), t in -3i64..=3) {
        let base = rule_class(&classify_slopes(&s).unwrap());
        prop_assert_eq!(rule_class(&classify_slopes(&s.shear(t)).unwrap()), base.clone());
        prop_assert_eq!(rule_class(&classify_slopes(&s.reflect()).unwrap()), base);
    }
}
