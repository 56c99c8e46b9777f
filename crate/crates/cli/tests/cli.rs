use std::process::{Command, Output};

use mdslab::formats::*;
use mdslab_core::catalog::GridCategory;
use proptest::prelude::*;
use serde_json::Value;

fn mdslab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mdslab")).args(args).output().expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = mdslab(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn json(args: &[&str]) -> Value {
    serde_json::from_str(&stdout(args)).unwrap()
}

fn in_process(args: &[&str]) -> (i32, String, String) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let mut argv = vec!["mdslab"];
    argv.extend_from_slice(args);
    let code = mdslab::run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

#[test]
fn classify_figure_one() {
    let v = json(&["classify", "--slopes", "-3/4,1,9/2"]);
    assert_eq!(v["verdict"], "MDS");
    assert_eq!(v["rule"], "thm-main01-1");
    assert_eq!(v["w"], "6/7");
    assert_eq!(v["m"], 7);
    assert_eq!(v["s"], serde_json::json!(["-3/4", "1", "9/2"]));
    assert_eq!((v["d"].as_i64(), v["d_min"].as_i64()), (Some(0), Some(0)));
    assert_eq!(v["evidence"]["l1"], "2");
}

#[test]
fn classify_triples() {
    let v = json(&["classify", "--triple", "11,58,13"]);
    assert_eq!((v["verdict"].as_str(), v["rule"].as_str()), (Some("NotMDS"), Some("thm-main03")));
    assert_eq!(v["subrule"], "main04-pattern");
    assert_eq!(v["evidence"]["matched_system"], "d'=5");
    let v = json(&["classify", "--triple", "5,37,46"]);
    assert_eq!((v["verdict"].as_str(), v["d_min"].as_i64()), (Some("Unknown"), Some(8)));
    let text = stdout(&["classify", "--triple", "2,3,5", "--format", "text"]);
    assert!(text.contains("verdict: MDS") && text.contains("rule: cutkosky"), "{text}");
}

#[test]
fn exit_codes() {
    let out = mdslab(&["classify", "--slopes", "1,2,3"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("width 2 \u{2265} 1"));
    assert_eq!(mdslab(&["classify", "--triple", "14,21,5"]).status.code(), Some(3));
    assert_eq!(mdslab(&["classify", "--slopes", "3,2,1"]).status.code(), Some(2));
    assert_eq!(mdslab(&["classify", "--slopes", "a,b,c"]).status.code(), Some(2));
    assert_eq!(mdslab(&["classify"]).status.code(), Some(2));
    assert_eq!(mdslab(&["classify", "--slopes", "-1,0,1", "--triple", "2,3,5"]).status.code(), Some(2));
    assert_eq!(mdslab(&["triangle", "--slopes", "-3/4,1,9/2", "--k", "0"]).status.code(), Some(2));
    assert_eq!(mdslab(&["detm", "--dprime", "6"]).status.code(), Some(2));
    assert_eq!(mdslab(&["table", "--a-max", "4"]).status.code(), Some(2));
    assert_eq!(mdslab(&["oracle", "--points", "/nonexistent", "--avoid", "0,0", "--degree", "1"]).status.code(), Some(2));
    assert_eq!(mdslab(&["reduce", "--slopes", "-3/4,1,9/2", "--k", "1", "--check"]).status.code(), Some(0));
    assert_eq!(mdslab(&["nonsense"]).status.code(), Some(2));
    assert_eq!(mdslab(&["--help"]).status.code(), Some(0));
}

#[test]
fn verbose_prints_version_to_stderr_only() {
    let (code, out, err) = in_process(&["--verbose", "classify", "--slopes", "-3/4,1,9/2"]);
    assert_eq!(code, 0);
    assert!(err.starts_with("mdslab "));
    assert!(!out.contains(env!("CARGO_PKG_VERSION")));
    let (_, quiet, err) = in_process(&["classify", "--slopes", "-3/4,1,9/2"]);
    assert_eq!(out, quiet);
    assert!(err.is_empty());
}

#[test]
fn detm_five() {
    let text = stdout(&["detm", "--dprime", "5"]);
    assert!(text.contains("(8A+5B-24)"), "{text}");
    assert!(text.contains("I- = (1^0, 3^-4, 5^-8) + (A, B)"), "{text}");
    let v = json(&["detm", "--dprime", "5", "--format", "json"]);
    assert_eq!(v["content"], "-138240");
    let mult: Vec<(String, u64)> = v["factors"]
        .as_array()
        .unwrap()
        .iter()
        .map(|f| (f["poly"].as_str().unwrap().to_string(), f["multiplicity"].as_u64().unwrap()))
        .collect();
    let want = [("A-2", 1), ("A-1", 3), ("A", 5), ("A+1", 6), ("A+2", 4), ("8A+5B-24", 1)];
    assert_eq!(mult, want.map(|(p, m)| (p.to_string(), m)));
}

#[test]
fn table_formats_round_trip() {
    let md = stdout(&["table", "--a-max", "9"]);
    let csv = stdout(&["table", "--a-max", "9", "--format", "csv"]);
    let js = stdout(&["table", "--a-max", "9", "--format", "json"]);
    let a = read_table_md(&md).unwrap();
    assert_eq!(a, read_table_csv(&csv).unwrap());
    assert_eq!(a, read_table_json(&js).unwrap());
    assert!(a.iter().any(|r| r.label() == "(5; 1, 2; 1)" && r.range == "4/5 < b/c < 17/21"));
    assert!(a.iter().any(|r| r.label() == "(7; 1, 2; 1)" && r.range == "4/7 < b/c < 3/5"));
    for row in &a {
        row.revalidate().unwrap();
    }
    let d1 = read_table_md(&stdout(&["table", "--a-max", "9", "--class", "d1"])).unwrap();
    assert!(!d1.is_empty() && d1.iter().all(|r| r.cls.as_str() == "d1"));
    assert_eq!(md, stdout(&["table", "--a-max", "9"]));
}

#[test]
fn phi_round_trip() {
    let text = stdout(&["phi", "5", "1", "2", "1", "--class", "ge2", "--limit", "4"]);
    let (row, triples) = read_phi_text(&text).unwrap();
    row.revalidate().unwrap();
    let listed: Vec<(u64, u64, u64)> = triples.iter().map(|t| (t.a, t.b, t.c)).collect();
    assert_eq!(listed, [(5, 37, 46), (5, 54, 67), (5, 57, 71), (5, 71, 88)]);
    let v = json(&["phi", "5", "1", "2", "1", "--class", "ge2", "--limit", "2", "--format", "json"]);
    read_phi_value(&v).unwrap().revalidate().unwrap();
    assert_eq!(v["triples"], serde_json::json!([[5, 37, 46], [5, 54, 67]]));
    assert_eq!(v["divisibility"], "5 | 2c - b");
    let empty = stdout(&["phi", "5", "1", "2", "1", "--class", "d1"]);
    assert!(empty.ends_with("empty\n"));
    assert_eq!(mdslab(&["phi", "5", "1", "2", "1", "--class", "x"]).status.code(), Some(2));
}

#[test]
fn grid_outputs() {
    let csv = stdout(&["grid", "--a", "7", "--max", "40"]);
    let cells = read_grid_csv(&csv).unwrap();
    assert_eq!(cells.len(), 34 * 34);
    assert!(cells.contains(&(31, 54, GridCategory::GkNonexample)) || 54 > 40);
    assert!(cells.contains(&(8, 9, GridCategory::CutkoskyBig)));
    assert!(cells.contains(&(14, 21, GridCategory::NotCoprime)));
    let svg = stdout(&["grid", "--a", "7", "--max", "40", "--format", "svg"]);
    assert_eq!(svg.matches("<rect").count(), cells.len());
    let dir = std::env::temp_dir().join(format!("mdslab-grid-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("grid.csv");
    stdout(&["grid", "--a", "7", "--max", "40", "--out", path.to_str().unwrap()]);
    assert_eq!(std::fs::read_to_string(&path).unwrap(), csv);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn triangle_svg() {
    let svg = stdout(&["triangle", "--slopes", "-3/4,1,9/2"]);
    assert_eq!(svg.matches("<circle").count(), 26);
    assert!(svg.contains("p = (-4, 3)") && svg.contains("q = (2, 9)"));
    assert!(!svg.contains("point thin"));
    let svg2 = stdout(&["triangle", "--slopes", "-3/4,1,9/2", "--k", "2"]);
    assert!(svg2.contains("2p = (-8, 6)"));
    let pts = read_points(&stdout(&["triangle", "--slopes", "-3/4,1,9/2", "--points"])).unwrap();
    assert_eq!(pts.len(), 26);

    // thin columns of (-7/3, 3/7, 2): 3 and 5 points on the left, 5, 4, 2 on the right
    let svg = stdout(&["triangle", "--slopes", "-7/3,3/7,2"]);
    let mut per_column: Vec<(i64, usize)> = Vec::new();
    for line in svg.lines().filter(|l| l.contains("point thin")) {
        let x: i64 = line.split("cx=\"").nth(1).unwrap().split('"').next().unwrap().parse().unwrap();
        match per_column.last_mut() {
            Some((px, n)) if *px == x => *n += 1,
            _ => per_column.push((x, 1)),
        }
    }
    let counts: Vec<usize> = per_column.iter().map(|c| c.1).collect();
    assert_eq!(counts, [3, 5, 5, 4, 2]);
}

#[test]
fn oracle_reads_point_files() {
    let pts = read_points(&stdout(&["triangle", "--slopes", "-3/4,1,9/2", "--points"])).unwrap();
    let dir = std::env::temp_dir().join(format!("mdslab-oracle-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("points.txt");
    let without_p: Vec<_> = pts.iter().copied().filter(|&p| p != (-4, 3)).collect();
    std::fs::write(&path, format!("# figure one\n{}", points_text(&without_p))).unwrap();
    let file = path.to_str().unwrap();
    assert_eq!(stdout(&["oracle", "--points", file, "--avoid", "-4,3", "--degree", "5"]), "false\n");
    assert_eq!(stdout(&["oracle", "--points", file, "--avoid", "-4,3", "--degree", "7"]), "true\n");
    std::fs::write(&path, "1,2\nthree\n").unwrap();
    assert_eq!(mdslab(&["oracle", "--points", file, "--avoid", "0,0", "--degree", "1"]).status.code(), Some(2));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn reduce_trace() {
    let text = stdout(&["reduce", "--slopes", "-3/4,1,9/2", "--k", "2", "--check"]);
    assert!(text.contains("start degree: 11"), "{text}");
    assert!(text.contains("final degree: 0"), "{text}");
    assert!(text.contains("equivalent: true"), "{text}");
    let v = json(&["reduce", "--slopes", "-3/4,1,9/2", "--format", "json"]);
    assert_eq!(v["final_degree"], 0);
    assert_eq!(v["steps"].as_array().unwrap().len(), 5);
}

#[test]
fn relation_listing() {
    let v = json(&["relation", "5,37,46"]);
    assert_eq!(v["canonical"]["g"], 2);
    assert_eq!(v["relations"].as_array().unwrap().len(), 2);
    assert_eq!(v["cutkosky_big"], false);
}

#[test]
fn thread_count_does_not_change_output() {
    let run = |threads: &str| {
        let out = Command::new(env!("CARGO_BIN_EXE_mdslab"))
            .args(["table", "--a-max", "11", "--format", "csv"])
            .env("MDSLAB_THREADS", threads)
            .output()
            .unwrap();
        assert!(out.status.success());
        out.stdout
    };
    assert_eq!(run("1"), run("0"));
    assert_eq!(run("1"), run("3"));
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 128, rng_seed: proptest::test_runner::RngSeed::Fixed(0x6d64_c11), failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn points_round_trip(pts in proptest::collection::vec((-1000i64..=1000, -1000i64..=1000), 0..40)) {
        prop_assert_eq!(read_points(&points_text(&pts)).unwrap(), pts);
    }

    #[test]
    fn labels_round_trip(a in 1u64..500, f in 1u64..500, g in 1u64..500, r in 1u64..500) {
        prop_assert_eq!(parse_label(&format!("({a}; {f}, {g}; {r})")).unwrap(), (a, f, g, r));
    }

    #[test]
    fn classify_json_is_stable(n in -6i64..=6, d in 1i64..=5, g1 in 1i64..=9, g2 in 1i64..=9) {
        let s = format!("{}/{d},{n}/{d},{}/{d}", n - d - g1, n + d + g2);
        let (c1, o1, _) = in_process(&["classify", "--slopes", &s]);
        let (c2, o2, _) = in_process(&["classify", "--slopes", &s]);
        prop_assert_eq!((c1, &o1), (c2, &o2));
        if c1 == 0 {
            let v: Value = serde_json::from_str(&o1).unwrap();
            prop_assert!(["MDS", "NotMDS", "Unknown"].contains(&v["verdict"].as_str().unwrap()));
        } else {
            prop_assert_eq!(c1, 3);
        }
    }
}
