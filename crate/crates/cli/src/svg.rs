//! SVG rendering of lattice triangles and of the `(b, c)` grid.

use std::fmt::Write as _;

use mdslab_core::catalog::{GridCategory, GridCell};
use mdslab_core::profile::{lattice_columns, ColumnProfile, Slopes};
use mdslab_core::Result;

/// Lattice unit in pixels.
pub const UNIT: i64 = 32;
const MARGIN: i64 = 40;

const OUTLINE: &str = "#222222";
const DOT: &str = "#1f4e79";
const HIGHLIGHT: &str = "#c0392b";

fn vertex_label(k: i64, name: &str) -> String {
    if k == 1 {
        name.to_string()
    } else {
        format!("{k}{name}")
    }
}

/// `k Delta_1` with its lattice points; the columns with at most `d'` points
/// are drawn in the highlight colour.
pub fn render_triangle(slopes: &Slopes, k: i64) -> Result<String> {
    let prof = ColumnProfile::new(slopes)?;
    let cols = lattice_columns(slopes, k)?;
    let kp = (k * prof.p.0, k * prof.p.1);
    let kq = (k * prof.q.0, k * prof.q.1);
    let (xmin, xmax) = (kp.0, kq.0);
    let ymin = 0.min(kp.1).min(kq.1).min(cols.iter().map(|c| c.y_lo).min().unwrap_or(0));
    let ymax = kp.1.max(kq.1).max(0);
    let width = (xmax - xmin) * UNIT + 2 * MARGIN;
    let height = (ymax - ymin) * UNIT + 2 * MARGIN;
    let px = |x: i64| (x - xmin) * UNIT + MARGIN;
    let py = |y: i64| (ymax - y) * UNIT + MARGIN;

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}">"#
    );
    let _ = writeln!(s, "<title>k = {k}, slopes {slopes}, d = {}, d' = {}</title>", prof.d, prof.d_min);
    let _ = writeln!(s, r#"<rect width="{width}" height="{height}" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<polygon points="{},{} {},{} {},{}" fill="none" stroke="{OUTLINE}" stroke-width="2"/>"#,
        px(0),
        py(0),
        px(kp.0),
        py(kp.1),
        px(kq.0),
        py(kq.1)
    );
    let dot = |s: &mut String, x: i64, y: i64, class: &str, fill: &str| {
        let _ = writeln!(s, r#"<circle class="{class}" cx="{}" cy="{}" r="4" fill="{fill}"/>"#, px(x), py(y));
    };
    dot(&mut s, kp.0, kp.1, "vertex", DOT);
    for c in &cols {
        let thin = c.count() <= prof.d_min;
        let (class, fill) = if thin { ("point thin", HIGHLIGHT) } else { ("point", DOT) };
        for y in c.y_lo..=c.y_hi {
            dot(&mut s, c.x, y, class, fill);
        }
    }
    dot(&mut s, kq.0, kq.1, "vertex", DOT);
    for (v, name) in [(kp, vertex_label(k, "p")), (kq, vertex_label(k, "q"))] {
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{}" font-family="sans-serif" font-size="14">{name} = ({}, {})</text>"#,
            px(v.0) + 6,
            py(v.1) - 6,
            v.0,
            v.1
        );
    }
    let _ = writeln!(s, r#"<text x="{}" y="{}" font-family="sans-serif" font-size="14">0</text>"#, px(0) + 6, py(0) + 16);
    s.push_str("</svg>\n");
    Ok(s)
}

pub fn category_color(c: GridCategory) -> &'static str {
    match c {
        GridCategory::CutkoskyBig => "#9ecae1",
        GridCategory::NotCoprime => "#d9d9d9",
        GridCategory::NoRelation => "#a1d99b",
        GridCategory::AnticanonicalBig => "#fdd0a2",
        GridCategory::GkNonexample => "#de2d26",
        GridCategory::Rest => "#756bb1",
        GridCategory::Excluded => "#ffffff",
    }
}

/// One square per cell, `b` to the right and `c` upwards.
pub fn render_grid(a: u64, max_bc: u64, cells: &[GridCell]) -> String {
    let cell = 8i64;
    let n = (max_bc - a + 1) as i64;
    let side = n * cell + 2 * MARGIN;
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{side}" height="{side}" viewBox="0 0 {side} {side}">"#
    );
    let _ = writeln!(s, "<title>a = {a}, {a} &lt;= b, c &lt;= {max_bc}</title>");
    for c in cells {
        let x = (c.b - a) as i64 * cell + MARGIN;
        let y = (n - 1 - (c.c - a) as i64) * cell + MARGIN;
        let _ = writeln!(
            s,
            r#"<rect x="{x}" y="{y}" width="{cell}" height="{cell}" fill="{}" data-b="{}" data-c="{}" data-category="{}"/>"#,
            category_color(c.category),
            c.b,
            c.c,
            c.category
        );
    }
    s.push_str("</svg>\n");
    s
}
