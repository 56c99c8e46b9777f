//! The `mdslab` command line.
//!
//! Exit codes: 0 success, 2 parse or validation error, 3 precondition
//! violation (w >= 1, weights not coprime, ...), 4 internal consistency
//! failure.

pub mod formats;
pub mod svg;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use mdslab_core::catalog::{
    enumerate_triples, grid_cell, grid_counts, phi_interval, sweep, GridCell, PhiClass, PhiKind,
};
use mdslab_core::classify::{classify_slopes, classify_triple};
use mdslab_core::interp::{curve_exists, paper_corner_frame, reduction_report, DetPlan};
use mdslab_core::profile::bezout_peel;
use mdslab_core::wpp::relation_search;
use mdslab_core::{MdsError, Slopes, Triple};
use rayon::prelude::*;

use formats::pretty;

#[derive(Parser, Debug)]
#[command(name = "mdslab", about = "Classify blow-ups of toric surfaces as Mori dream spaces")]
struct Cli {
    /// Print the version to stderr before running.
    #[arg(long, global = true)]
    verbose: bool,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum TableFormat {
    Md,
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum GridFormat {
    Csv,
    Svg,
    Counts,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum TableClass {
    D1,
    D2,
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct Input {
    /// Slopes s1,s2,s3 (rationals such as -3/4).
    #[arg(long, allow_hyphen_values = true)]
    slopes: Option<String>,
    /// Weights a,b,c of a weighted projective plane.
    #[arg(long)]
    triple: Option<String>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Classify a slope triple or a weight triple.
    Classify {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// List the relations a e + b f = c g with w < 1 of a triple.
    Relation { triple: String },
    /// Regenerate the tables of nonempty d1 / ge2 classes.
    Table {
        #[arg(long, default_value_t = 15)]
        a_max: u64,
        #[arg(long, value_enum)]
        class: Option<TableClass>,
        #[arg(long, value_enum, default_value = "md")]
        format: TableFormat,
    },
    /// One class: its b/c range and its first triples.
    Phi {
        a: u64,
        f: u64,
        g: u64,
        r: u64,
        #[arg(long)]
        class: String,
        #[arg(long, default_value_t = 5, value_parser = clap::value_parser!(u64).range(1..))]
        limit: u64,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Categories of the (b, c) grid for a fixed a.
    Grid {
        #[arg(long)]
        a: u64,
        #[arg(long)]
        max: u64,
        #[arg(long, value_enum, default_value = "csv")]
        format: GridFormat,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Symbolic corner determinant for d' = 5, 7 or 9.
    Detm {
        #[arg(long, value_parser = ["5", "7", "9"])]
        dprime: String,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Is there a curve of the given degree through the points, avoiding one?
    Oracle {
        #[arg(long)]
        points: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        avoid: String,
        #[arg(long)]
        degree: u32,
    },
    /// Draw k Delta_1 as SVG.
    Triangle {
        #[arg(long, allow_hyphen_values = true)]
        slopes: String,
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(i64).range(1..))]
        k: i64,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Write the lattice points as x,y lines instead of SVG.
        #[arg(long)]
        points: bool,
    },
    /// Bezout peeling trace of k Delta_1.
    Reduce {
        #[arg(long, allow_hyphen_values = true)]
        slopes: String,
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(i64).range(1..))]
        k: i64,
        /// Also compare the full and reduced interpolation problems.
        #[arg(long)]
        check: bool,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
}

#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl From<MdsError> for CliError {
    fn from(e: MdsError) -> Self {
        Self { code: e.exit_code(), message: e.to_string() }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        Self { code: 2, message: format!("io error: {e}") }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

/// Runs the CLI, writing to the given streams, and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    if cli.verbose {
        let _ = writeln!(err, "mdslab {}", env!("CARGO_PKG_VERSION"));
    }
    configure_threads();
    match dispatch(cli.cmd, out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {}", e.message);
            e.code
        }
    }
}

/// `MDSLAB_THREADS` caps the worker pool; 0 or unset means automatic.
fn configure_threads() {
    let n = std::env::var("MDSLAB_THREADS").ok().and_then(|v| v.trim().parse::<usize>().ok()).unwrap_or(0);
    if n > 0 {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
}

fn emit(out: &mut dyn Write, text: &str) -> CliResult<()> {
    match out.write_all(text.as_bytes()).and_then(|()| out.flush()) {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(e.into()),
        _ => Ok(()),
    }
}

fn emit_to(out: &mut dyn Write, path: Option<&PathBuf>, text: &str) -> CliResult<()> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(CliError::from),
        None => emit(out, text),
    }
}

fn dispatch(cmd: Command, out: &mut dyn Write) -> CliResult<()> {
    match cmd {
        Command::Classify { input, format } => {
            let (label, c) = match (&input.slopes, &input.triple) {
                (Some(s), _) => (s.clone(), classify_slopes(&Slopes::parse(s)?)?),
                (_, Some(t)) => (t.clone(), classify_triple(&Triple::parse(t)?)?),
                _ => unreachable!("clap enforces exactly one input"),
            };
            match format {
                Format::Json => emit(out, &pretty(&formats::classification_json(&label, &c))),
                Format::Text => emit(out, &formats::classification_text(&label, &c)),
            }
        }
        Command::Relation { triple } => {
            let t = Triple::parse(&triple)?;
            let search = relation_search(&t)?;
            emit(out, &pretty(&formats::relation_search_json(&t, &search)?))
        }
        Command::Table { a_max, class, format } => {
            if a_max < 5 {
                return Err(MdsError::InvalidParameters(format!("--a-max must be at least 5, got {a_max}")).into());
            }
            let (d1, d2) = tables(a_max)?;
            let mut sections: Vec<(PhiKind, &[PhiClass])> = Vec::new();
            if !matches!(class, Some(TableClass::D2)) {
                sections.push((PhiKind::D1, &d1));
            }
            if !matches!(class, Some(TableClass::D1)) {
                sections.push((PhiKind::Ge2, &d2));
            }
            let text = match format {
                TableFormat::Md => formats::table_md(&sections),
                TableFormat::Csv => formats::table_csv(&sections),
                TableFormat::Json => formats::table_json(&sections),
            };
            emit(out, &text)
        }
        Command::Phi { a, f, g, r, class, limit, format } => {
            let cls = PhiKind::parse(&class)?;
            let Some(p) = phi_interval(a, f, g, r, cls)? else {
                return match format {
                    Format::Text => emit(out, &format!("class: ({a}; {f}, {g}; {r}) {cls}\nempty\n")),
                    Format::Json => emit(out, &pretty(&serde_json::json!({ "class": cls.as_str(), "a": a, "f": f, "g": g, "r": r, "empty": true }))),
                };
            };
            let triples = enumerate_triples(&p, limit as usize)?;
            match format {
                Format::Text => emit(out, &formats::phi_text(&p, &triples)),
                Format::Json => {
                    let mut v = formats::phi_json(&p);
                    v["triples"] = serde_json::json!(triples.iter().map(|t| [t.a, t.b, t.c]).collect::<Vec<_>>());
                    emit(out, &pretty(&v))
                }
            }
        }
        Command::Grid { a, max, format, out: path } => {
            let cells = grid(a, max)?;
            let text = match format {
                GridFormat::Csv => formats::grid_csv(&cells),
                GridFormat::Svg => svg::render_grid(a, max, &cells),
                GridFormat::Counts => formats::grid_counts_text(&grid_counts(&cells)),
            };
            emit_to(out, path.as_ref(), &text)
        }
        Command::Detm { dprime, format } => {
            let dprime: u32 = dprime.parse().expect("validated by clap");
            let frame = paper_corner_frame(dprime)?;
            let plan = DetPlan::new(&frame);
            let values: Vec<_> = plan.nodes().into_par_iter().map(|(a, b)| plan.eval(a, b)).collect();
            let det = plan.finish(&values)?;
            let factored = det.factor();
            let (im, ip) = (frame.i_minus.to_string(), frame.i_plus.to_string());
            match format {
                Format::Text => emit(
                    out,
                    &format!("d' = {dprime}\nI- = {im} + (A, B)\nI+ = {ip}\ndet M = {}\n", factored.to_text()),
                ),
                Format::Json => emit(out, &pretty(&formats::det_json(dprime, &im, &ip, &factored))),
            }
        }
        Command::Oracle { points, avoid, degree } => {
            let text = std::fs::read_to_string(&points)?;
            let pts = formats::read_points(&text)?;
            let avoid = formats::parse_point(&avoid)?;
            let exists = curve_exists(&pts, avoid, degree)?;
            emit(out, &format!("{exists}\n"))
        }
        Command::Triangle { slopes, k, out: path, points } => {
            let s = Slopes::parse(&slopes)?;
            let text = if points {
                formats::points_text(&mdslab_core::profile::lattice_points(&s, k)?)
            } else {
                svg::render_triangle(&s, k)?
            };
            emit_to(out, path.as_ref(), &text)
        }
        Command::Reduce { slopes, k, check, format } => {
            let s = Slopes::parse(&slopes)?;
            let trace = bezout_peel(&s, k)?;
            let report = if check { Some(reduction_report(&s, k)?) } else { None };
            match format {
                Format::Text => {
                    let mut text = formats::peel_text(&slopes, &trace);
                    if let Some(r) = &report {
                        text.push_str(&format!(
                            "full vs reduced, avoiding kp: {} / {}\nfull vs reduced, avoiding kq: {} / {}\nequivalent: {}\n",
                            r.avoid_left.0, r.avoid_left.1, r.avoid_right.0, r.avoid_right.1, r.equivalent()
                        ));
                    }
                    emit(out, &text)
                }
                Format::Json => {
                    let mut v = formats::peel_json(&slopes, &trace);
                    if let Some(r) = &report {
                        v["check"] = serde_json::json!({
                            "d": r.d,
                            "full_degree": r.full_degree,
                            "avoid_left": [r.avoid_left.0, r.avoid_left.1],
                            "avoid_right": [r.avoid_right.0, r.avoid_right.1],
                            "equivalent": r.equivalent(),
                        });
                    }
                    emit(out, &pretty(&v))
                }
            }
        }
    }
}

/// Parallel version of `generate_tables`; the order is fixed by sort keys.
pub fn tables(a_max: u64) -> mdslab_core::Result<(Vec<PhiClass>, Vec<PhiClass>)> {
    let jobs: Vec<_> = sweep(a_max)
        .into_iter()
        .flat_map(|(a, f, g, r)| [PhiKind::D1, PhiKind::Ge2].map(|k| (a, f, g, r, k)))
        .collect();
    let found: Vec<Option<PhiClass>> =
        jobs.into_par_iter().map(|(a, f, g, r, k)| phi_interval(a, f, g, r, k)).collect::<Result<_, _>>()?;
    let (mut d1, mut d2): (Vec<_>, Vec<_>) = found.into_iter().flatten().partition(|p| p.cls == PhiKind::D1);
    d1.sort_by_key(PhiClass::sort_key);
    d2.sort_by_key(PhiClass::sort_key);
    Ok((d1, d2))
}

/// Parallel version of `grid_classification`, same order.
pub fn grid(a: u64, max_bc: u64) -> mdslab_core::Result<Vec<GridCell>> {
    if max_bc < a || a == 0 {
        return Err(MdsError::InvalidParameters(format!("need 1 <= a <= max, got a = {a}, max = {max_bc}")));
    }
    let coords: Vec<(u64, u64)> = (a..=max_bc).flat_map(|b| (a..=max_bc).map(move |c| (b, c))).collect();
    coords.into_par_iter().map(|(b, c)| grid_cell(a, b, c)).collect()
}
