//! Text, CSV, Markdown and JSON writers, and readers for the formats that
//! have to round-trip.

use std::fmt::Write as _;

use mdslab_core::catalog::{phi_interval, GridCategory, GridCell, PhiClass, PhiKind};
use mdslab_core::classify::Classification;
use mdslab_core::exact::fmt_rational;
use mdslab_core::poly::Factored;
use mdslab_core::profile::{PeelTrace, Point};
use mdslab_core::wpp::{Relation, RelationSearch, Triple};
use mdslab_core::{MdsError, Result};
use serde_json::{json, Map, Value};

fn parse_err(msg: impl Into<String>) -> MdsError {
    MdsError::Parse(msg.into())
}

fn relation_json(r: &Relation) -> Value {
    json!({ "a": r.a, "b": r.b, "c": r.c, "e": r.e, "f": r.f, "g": r.g, "r": r.r })
}

pub fn classification_json(input: &str, c: &Classification) -> Value {
    let mut evidence = Map::new();
    for (k, v) in &c.evidence {
        evidence.insert(k.clone(), Value::String(v.clone()));
    }
    json!({
        "input": input,
        "verdict": c.verdict.as_str(),
        "rule": c.rule,
        "rules": c.rules,
        "subrule": c.subrule,
        "d": c.d,
        "d_min": c.d_min,
        "w": c.w.as_ref().map(fmt_rational),
        "m": c.m,
        "s": c.slopes.as_ref().map(|s| s.to_strings().to_vec()),
        "gamma": c.gamma,
        "shape": c.shape.as_ref().map(|(s, t)| json!({ "S": s, "T": t })),
        "relation": c.relation.as_ref().map(relation_json),
        "mirror": c.mirror.as_ref().map(relation_json),
        "evidence": evidence,
        "warnings": c.warnings,
    })
}

pub fn classification_text(input: &str, c: &Classification) -> String {
    let mut out = String::new();
    let opt = |v: Option<i64>| v.map_or("-".to_string(), |x| x.to_string());
    let _ = writeln!(out, "input: {input}");
    let _ = writeln!(out, "verdict: {}", c.verdict);
    let _ = writeln!(out, "rule: {}", c.rule);
    if let Some(sub) = &c.subrule {
        let _ = writeln!(out, "subrule: {sub}");
    }
    let _ = writeln!(out, "rules: {}", c.rules.join(", "));
    if let Some(s) = &c.slopes {
        let _ = writeln!(out, "slopes: {s}");
    }
    let _ = writeln!(out, "d: {}  d': {}", opt(c.d), opt(c.d_min));
    if let Some(r) = &c.relation {
        let _ = writeln!(out, "relation: {}*{} + {}*{} = {}*{}  (r = {})", r.a, r.e, r.b, r.f, r.c, r.g, r.r);
    }
    for (k, v) in &c.evidence {
        let _ = writeln!(out, "  {k} = {v}");
    }
    for w in &c.warnings {
        let _ = writeln!(out, "warning: {w}");
    }
    out
}

pub fn relation_search_json(t: &Triple, search: &RelationSearch) -> Result<Value> {
    let mut rels = Vec::new();
    for r in &search.relations {
        let s = r.slopes()?;
        rels.push(json!({
            "relation": relation_json(r),
            "w": fmt_rational(&r.width()),
            "slopes": s.to_strings().to_vec(),
        }));
    }
    Ok(json!({
        "triple": [t.a, t.b, t.c],
        "cutkosky_big": t.cutkosky_big(),
        "relations": rels,
        "canonical": search.canonical.as_ref().map(relation_json),
        "mirror": search.mirror.as_ref().map(relation_json),
    }))
}

/// One row of a table as printed: class, key and canonical range text.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableRow {
    pub cls: PhiKind,
    pub a: u64,
    pub f: u64,
    pub g: u64,
    pub r: u64,
    pub range: String,
}

impl TableRow {
    pub fn of(p: &PhiClass) -> Self {
        Self { cls: p.cls, a: p.a, f: p.f, g: p.g, r: p.r, range: p.interval.range_text() }
    }

    pub fn label(&self) -> String {
        format!("({}; {}, {}; {})", self.a, self.f, self.g, self.r)
    }

    /// Recomputes the class and checks that it still prints the same range.
    pub fn revalidate(&self) -> Result<()> {
        let p = phi_interval(self.a, self.f, self.g, self.r, self.cls)?
            .ok_or_else(|| MdsError::Internal(format!("{} {} is empty", self.label(), self.cls)))?;
        let now = p.interval.range_text();
        if now != self.range {
            return Err(MdsError::Internal(format!("{} {}: {} vs {}", self.label(), self.cls, self.range, now)));
        }
        Ok(())
    }
}

pub fn table_md(sections: &[(PhiKind, &[PhiClass])]) -> String {
    let mut out = String::new();
    for (i, (cls, rows)) in sections.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        let _ = writeln!(out, "## {cls}\n");
        out.push_str("| (a; f, g; r) | range of b/c |\n|---|---|\n");
        for p in rows.iter() {
            let _ = writeln!(out, "| {} | {} |", p.label(), p.interval.range_text());
        }
    }
    out
}

pub fn table_csv(sections: &[(PhiKind, &[PhiClass])]) -> String {
    let mut out = String::from("class,a,f,g,r,range,lo,lo_closed,hi,hi_closed,all,condition4,witness\n");
    for (_, rows) in sections {
        for p in rows.iter() {
            let iv = &p.interval;
            let witness = p.witness.map_or(String::new(), |t| format!("{}:{}:{}", t.a, t.b, t.c));
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{},{},{},{},{},{}",
                p.cls,
                p.a,
                p.f,
                p.g,
                p.r,
                iv.range_text(),
                fmt_rational(&iv.lo),
                iv.lo_closed,
                fmt_rational(&iv.hi),
                iv.hi_closed,
                iv.all,
                p.condition4,
                witness
            );
        }
    }
    out
}

pub fn phi_json(p: &PhiClass) -> Value {
    let iv = &p.interval;
    json!({
        "class": p.cls.as_str(),
        "a": p.a,
        "f": p.f,
        "g": p.g,
        "r": p.r,
        "label": p.label(),
        "range": iv.range_text(),
        "lo": fmt_rational(&iv.lo),
        "lo_closed": iv.lo_closed,
        "hi": fmt_rational(&iv.hi),
        "hi_closed": iv.hi_closed,
        "all": iv.all,
        "divisibility": p.divisibility(),
        "condition4": p.condition4,
        "boundary_by_search": p.boundary_by_search,
        "witness": p.witness.map(|t| vec![t.a, t.b, t.c]),
    })
}

pub fn table_json(sections: &[(PhiKind, &[PhiClass])]) -> String {
    let rows: Vec<Value> = sections.iter().flat_map(|(_, rows)| rows.iter().map(phi_json)).collect();
    pretty(&Value::Array(rows))
}

pub fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values always serialize");
    s.push('\n');
    s
}

fn parse_u64(s: &str) -> Result<u64> {
    s.trim().parse().map_err(|_| parse_err(format!("expected a non-negative integer, got {s:?}")))
}

/// `"(a; f, g; r)"` back to its four numbers.
pub fn parse_label(s: &str) -> Result<(u64, u64, u64, u64)> {
    let inner = s
        .trim()
        .strip_prefix('(')
        .and_then(|x| x.strip_suffix(')'))
        .ok_or_else(|| parse_err(format!("bad label {s:?}")))?;
    let parts: Vec<&str> = inner.split(';').collect();
    if parts.len() != 3 {
        return Err(parse_err(format!("bad label {s:?}")));
    }
    let (f, g) = parts[1].split_once(',').ok_or_else(|| parse_err(format!("bad label {s:?}")))?;
    Ok((parse_u64(parts[0])?, parse_u64(f)?, parse_u64(g)?, parse_u64(parts[2])?))
}

pub fn read_table_md(text: &str) -> Result<Vec<TableRow>> {
    let mut cls = None;
    let mut out = Vec::new();
    for line in text.lines() {
        let line = line.trim();
        if let Some(name) = line.strip_prefix("## ") {
            cls = Some(PhiKind::parse(name.trim())?);
            continue;
        }
        let is_row = line.strip_prefix("| (").is_some_and(|r| r.starts_with(|c: char| c.is_ascii_digit()));
        if !is_row {
            continue;
        }
        let cells: Vec<&str> = line.trim_matches('|').split('|').map(str::trim).collect();
        if cells.len() != 2 {
            return Err(parse_err(format!("bad table row {line:?}")));
        }
        let (a, f, g, r) = parse_label(cells[0])?;
        let cls = cls.ok_or_else(|| parse_err("table row before any section heading"))?;
        out.push(TableRow { cls, a, f, g, r, range: cells[1].to_string() });
    }
    Ok(out)
}

pub fn read_table_csv(text: &str) -> Result<Vec<TableRow>> {
    let mut lines = text.lines();
    let header = lines.next().ok_or_else(|| parse_err("empty csv"))?;
    if !header.starts_with("class,a,f,g,r,range") {
        return Err(parse_err(format!("unexpected csv header {header:?}")));
    }
    lines
        .filter(|l| !l.trim().is_empty())
        .map(|line| {
            let cells: Vec<&str> = line.split(',').collect();
            if cells.len() < 6 {
                return Err(parse_err(format!("bad csv row {line:?}")));
            }
            Ok(TableRow {
                cls: PhiKind::parse(cells[0])?,
                a: parse_u64(cells[1])?,
                f: parse_u64(cells[2])?,
                g: parse_u64(cells[3])?,
                r: parse_u64(cells[4])?,
                range: cells[5].to_string(),
            })
        })
        .collect()
}

fn field<'a>(v: &'a Value, key: &str) -> Result<&'a Value> {
    v.get(key).ok_or_else(|| parse_err(format!("missing field {key:?}")))
}

fn field_u64(v: &Value, key: &str) -> Result<u64> {
    field(v, key)?.as_u64().ok_or_else(|| parse_err(format!("field {key:?} is not an integer")))
}

fn field_str<'a>(v: &'a Value, key: &str) -> Result<&'a str> {
    field(v, key)?.as_str().ok_or_else(|| parse_err(format!("field {key:?} is not a string")))
}

pub fn read_phi_value(v: &Value) -> Result<TableRow> {
    Ok(TableRow {
        cls: PhiKind::parse(field_str(v, "class")?)?,
        a: field_u64(v, "a")?,
        f: field_u64(v, "f")?,
        g: field_u64(v, "g")?,
        r: field_u64(v, "r")?,
        range: field_str(v, "range")?.to_string(),
    })
}

pub fn read_table_json(text: &str) -> Result<Vec<TableRow>> {
    let v: Value = serde_json::from_str(text).map_err(|e| parse_err(e.to_string()))?;
    v.as_array().ok_or_else(|| parse_err("expected a json array"))?.iter().map(read_phi_value).collect()
}

pub fn phi_text(p: &PhiClass, triples: &[Triple]) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "class: {} {}", p.label(), p.cls);
    let _ = writeln!(out, "divisibility: {}", p.divisibility());
    let _ = writeln!(out, "range: {}", p.interval.range_text());
    let _ = writeln!(out, "condition4: {}", p.condition4);
    let _ = writeln!(out, "triples:");
    for t in triples {
        let _ = writeln!(out, "{},{},{}", t.a, t.b, t.c);
    }
    out
}

/// Reads [`phi_text`] output back: the row and the listed triples.
pub fn read_phi_text(text: &str) -> Result<(TableRow, Vec<Triple>)> {
    let mut head = None;
    let mut range = None;
    let mut triples = Vec::new();
    let mut in_triples = false;
    for line in text.lines() {
        if in_triples {
            if !line.trim().is_empty() {
                triples.push(Triple::parse(line)?);
            }
        } else if let Some(rest) = line.strip_prefix("class: ") {
            let (label, cls) = rest.rsplit_once(' ').ok_or_else(|| parse_err(format!("bad class line {line:?}")))?;
            head = Some((parse_label(label)?, PhiKind::parse(cls)?));
        } else if let Some(rest) = line.strip_prefix("range: ") {
            range = Some(rest.to_string());
        } else if line == "triples:" {
            in_triples = true;
        }
    }
    let ((a, f, g, r), cls) = head.ok_or_else(|| parse_err("missing class line"))?;
    let range = range.ok_or_else(|| parse_err("missing range line"))?;
    Ok((TableRow { cls, a, f, g, r, range }, triples))
}

pub fn grid_csv(cells: &[GridCell]) -> String {
    let mut out = String::from("b,c,category,gk_n\n");
    for c in cells {
        let n = c.gk_n.map_or(String::new(), |n| n.to_string());
        let _ = writeln!(out, "{},{},{},{}", c.b, c.c, c.category, n);
    }
    out
}

pub fn read_grid_csv(text: &str) -> Result<Vec<(u64, u64, GridCategory)>> {
    let mut lines = text.lines();
    if lines.next() != Some("b,c,category,gk_n") {
        return Err(parse_err("unexpected grid csv header"));
    }
    lines
        .filter(|l| !l.trim().is_empty())
        .map(|line| {
            let cells: Vec<&str> = line.split(',').collect();
            if cells.len() != 4 {
                return Err(parse_err(format!("bad grid row {line:?}")));
            }
            Ok((parse_u64(cells[0])?, parse_u64(cells[1])?, GridCategory::parse(cells[2])?))
        })
        .collect()
}

pub fn grid_counts_text(counts: &[(GridCategory, usize)]) -> String {
    counts.iter().map(|(k, n)| format!("{k},{n}\n")).collect()
}

pub fn det_json(dprime: u32, frame_minus: &str, frame_plus: &str, f: &Factored) -> Value {
    let factors: Vec<Value> =
        f.factor_list().into_iter().map(|(poly, m)| json!({ "poly": poly, "multiplicity": m })).collect();
    json!({
        "dprime": dprime,
        "i_minus": frame_minus,
        "i_plus": frame_plus,
        "content": fmt_rational(&f.content),
        "factors": factors,
        "text": f.to_text(),
    })
}

/// One `x,y` integer pair per line; blank lines and `#` comments are skipped.
pub fn read_points(text: &str) -> Result<Vec<Point>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        out.push(parse_point(line).map_err(|_| parse_err(format!("line {}: expected x,y, got {line:?}", i + 1)))?);
    }
    Ok(out)
}

pub fn parse_point(s: &str) -> Result<Point> {
    let (x, y) = s.split_once(',').ok_or_else(|| parse_err(format!("expected x,y, got {s:?}")))?;
    let num = |t: &str| t.trim().parse::<i64>().map_err(|_| parse_err(format!("expected an integer, got {t:?}")));
    Ok((num(x)?, num(y)?))
}

pub fn points_text(points: &[Point]) -> String {
    points.iter().map(|(x, y)| format!("{x},{y}\n")).collect()
}

pub fn peel_text(input: &str, trace: &PeelTrace) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "slopes: {input}");
    let _ = writeln!(out, "k: {}", trace.k);
    let _ = writeln!(out, "start degree: {}", trace.initial_degree);
    for s in &trace.steps {
        let _ = writeln!(out, "peel x = {} ({} points > degree {})", s.x, s.count, s.degree_before);
    }
    let counts: Vec<String> = trace.remaining.iter().map(|c| c.count().to_string()).collect();
    let _ = writeln!(out, "remaining columns: [{}]", counts.join(", "));
    let _ = writeln!(out, "final degree: {}", trace.final_degree);
    out
}

pub fn peel_json(input: &str, trace: &PeelTrace) -> Value {
    let steps: Vec<Value> = trace
        .steps
        .iter()
        .map(|s| json!({ "x": s.x, "count": s.count, "degree_before": s.degree_before }))
        .collect();
    let remaining: Vec<Value> =
        trace.remaining.iter().map(|c| json!({ "x": c.x, "y_lo": c.y_lo, "y_hi": c.y_hi })).collect();
    json!({
        "slopes": input,
        "k": trace.k,
        "initial_degree": trace.initial_degree,
        "steps": steps,
        "remaining": remaining,
        "final_degree": trace.final_degree,
    })
}
