//! Lattice point sets in Dumnicki notation, falling-factorial interpolation
//! matrices, exact and symbolic determinants, and a rank-based oracle for
//! the existence of interpolating curves.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive};

use crate::error::{MdsError, Result};
use crate::exact::{binomial, falling_factorial, falling_factorial_int, int, Rational};
use crate::linalg::{det_bareiss, det_rational, hadamard_bits, rank_bareiss};
use crate::modular::{crt_symmetric, det_mont, primes_below_2_62, Echelon, Mont};
use crate::poly::{reconstruct_grid_int, BivariatePoly};
use crate::profile::{lattice_columns, smallest_good_triangle, ColumnProfile, Point, Slopes};

/// `(a_1^{u_1}, ..., a_n^{u_n})`: column `i - 1` holds `a_i` points starting
/// at height `u_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeSet {
    pub spec: Vec<(u32, i64)>,
    pub points: Vec<Point>,
}

impl LatticeSet {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Points column by column, each column from the top down.
    pub fn points_top_down(&self) -> Vec<Point> {
        let mut out = Vec::with_capacity(self.points.len());
        for (i, &(a, u)) in self.spec.iter().enumerate() {
            let x = i as i64;
            out.extend((0..a as i64).rev().map(|j| (x, u + j)));
        }
        out
    }

    pub fn max_x(&self) -> i64 {
        self.spec.len() as i64 - 1
    }
}

impl fmt::Display for LatticeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, (a, u)) in self.spec.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{a}^{u}")?;
        }
        write!(f, ")")
    }
}

/// Builds `(a_1^{u_1}, ..., a_n^{u_n})`.
pub fn dumnicki_set(spec: &[(u32, i64)]) -> Result<LatticeSet> {
    if let Some((a, _)) = spec.iter().find(|(a, _)| *a == 0) {
        return Err(MdsError::InvalidParameters(format!("column counts must be positive, got {a}")));
    }
    let mut points = Vec::new();
    for (i, &(a, u)) in spec.iter().enumerate() {
        points.extend((u..u + a as i64).map(|y| (i as i64, y)));
    }
    Ok(LatticeSet { spec: spec.to_vec(), points })
}

/// The staircase `((d+1)^0, d^0, ..., 1^0)` minus `i_plus`, as exponent
/// pairs `(u, v)` ordered by total degree descending, then `u` ascending.
pub fn staircase_basis(i_plus: &LatticeSet, d: u32) -> Result<Vec<(u32, u32)>> {
    if i_plus.spec.iter().any(|&(_, u)| u != 0) {
        return Err(MdsError::MalformedStaircase(format!("{i_plus} is not anchored at zero offsets")));
    }
    if i_plus.spec.len() > d as usize + 1 {
        return Err(MdsError::MalformedStaircase(format!("{i_plus} has more than {} columns", d + 1)));
    }
    for (i, w) in i_plus.spec.windows(2).enumerate() {
        if w[1].0 > w[0].0 {
            return Err(MdsError::MalformedStaircase(format!("{i_plus}: column {} grows", i + 1)));
        }
    }
    for (i, &(a, _)) in i_plus.spec.iter().enumerate() {
        if a as usize > d as usize + 1 - i {
            return Err(MdsError::MalformedStaircase(format!("{i_plus} does not fit the degree-{d} staircase")));
        }
    }
    let height = |u: u32| i_plus.spec.get(u as usize).map_or(0, |&(a, _)| a);
    let mut basis = Vec::new();
    for total in (0..=d).rev() {
        for u in 0..=total {
            let v = total - u;
            if v >= height(u) {
                basis.push((u, v));
            }
        }
    }
    Ok(basis)
}

/// A row of an interpolation matrix: either a concrete point or a point
/// `(A + dx, B + dy)` with `A`, `B` indeterminate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RowPoint {
    Concrete(Rational, Rational),
    Symbolic { dx: i64, dy: i64 },
}

impl RowPoint {
    pub fn int(x: i64, y: i64) -> Self {
        Self::Concrete(int(x), int(y))
    }

    /// Coordinates at a given `(A, B)`.
    pub fn at(&self, a: i64, b: i64) -> (i64, i64) {
        match self {
            Self::Symbolic { dx, dy } => (a + dx, b + dy),
            Self::Concrete(x, y) => (
                x.to_integer().to_i64().expect("concrete coordinate"),
                y.to_integer().to_i64().expect("concrete coordinate"),
            ),
        }
    }
}

impl fmt::Display for RowPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let off = |name: &str, d: i64| match d.cmp(&0) {
            core::cmp::Ordering::Equal => String::from(name),
            core::cmp::Ordering::Greater => format!("{name}+{d}"),
            core::cmp::Ordering::Less => format!("{name}{d}"),
        };
        match self {
            Self::Symbolic { dx, dy } => write!(f, "({},{})", off("A", *dx), off("B", *dy)),
            Self::Concrete(x, y) => write!(f, "({x},{y})"),
        }
    }
}

/// Interpolation conditions of a corner of `k Delta_1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CornerFrame {
    /// Left corner, relative to the vertex `(A, B)`.
    pub i_minus: LatticeSet,
    /// Right corner, vertex at `(t, 0)`.
    pub i_plus: LatticeSet,
    pub degree: u32,
    pub s: usize,
    pub t: usize,
    pub basis: Vec<(u32, u32)>,
    /// Concrete slopes the frame was read off from, if any.
    pub source: Option<Slopes>,
}

impl CornerFrame {
    fn assemble(i_minus: LatticeSet, i_plus: LatticeSet, degree: u32, source: Option<Slopes>) -> Result<Self> {
        let basis = staircase_basis(&i_plus, degree)?;
        let s = i_minus.spec.len() - 1;
        let t = i_plus.spec.len() - 1;
        let staircase = ((degree + 1) * (degree + 2) / 2) as usize;
        if basis.len() != staircase - i_plus.len() || basis.len() != i_minus.len() {
            return Err(MdsError::Internal(format!(
                "frame {i_minus} / {i_plus}: {} basis elements for {} conditions",
                basis.len(),
                i_minus.len()
            )));
        }
        Ok(Self { i_minus, i_plus, degree, s, t, basis, source })
    }

    /// Rows of `M`: the vertex `(A, B)`, then each further column of
    /// `I^-` from the top down.
    pub fn rows(&self) -> Vec<RowPoint> {
        self.i_minus.points_top_down().into_iter().map(|(dx, dy)| RowPoint::Symbolic { dx, dy }).collect()
    }

    pub fn matrix(&self) -> InterpMatrix {
        build_matrix(&self.rows(), &self.basis)
    }

    /// Rows in determinant orientation: by `y`, then `x`, ascending.
    pub fn det_rows(&self) -> Vec<RowPoint> {
        let mut pts = self.i_minus.points_top_down();
        pts.sort_by_key(|&(x, y)| (y, x));
        pts.into_iter().map(|(dx, dy)| RowPoint::Symbolic { dx, dy }).collect()
    }

    /// Basis in determinant orientation: by `u`, then `v`, ascending.
    pub fn det_basis(&self) -> Vec<(u32, u32)> {
        let mut b = self.basis.clone();
        b.sort_unstable();
        b
    }

    /// `M` with rows and columns in determinant orientation; it differs
    /// from [`CornerFrame::matrix`] by a row and a column permutation.
    pub fn det_matrix(&self) -> InterpMatrix {
        build_matrix(&self.det_rows(), &self.det_basis())
    }
}

/// `I^- = (1^0, n^{-n-1}) + (A, B)`, `I^+ = (n^0, ..., 1^0)`.
pub fn gk_corner_frame(n: u32) -> Result<CornerFrame> {
    if n == 0 {
        return Err(MdsError::InvalidParameters("n must be at least 1".into()));
    }
    let i_minus = dumnicki_set(&[(1, 0), (n, -(n as i64) - 1)])?;
    let plus: Vec<(u32, i64)> = (1..=n).rev().map(|a| (a, 0)).collect();
    CornerFrame::assemble(i_minus, dumnicki_set(&plus)?, n, None)
}

/// Corner frame for `d' = 2n + 1` with `S = {3, 5, ..., 2n - 1}` and
/// `T = {2, 4, ..., 2n}`, read off from a concrete triangle of that shape.
pub fn paper_corner_frame(dprime: u32) -> Result<CornerFrame> {
    if !matches!(dprime, 5 | 7 | 9) {
        return Err(MdsError::UnsupportedDprime(dprime));
    }
    let n = (dprime - 1) / 2;
    let slopes = shape_witness(n)?;
    frame_from_slopes(&slopes, dprime)
}

/// Slopes in the normalized window `-2 - 1/n < s1 <= -2`,
/// `1/(n+1) < s2 < 1/n`, `2 <= s3 < 2 + 1/(n+1)` with `w < 1` and the
/// expected column shape.
fn shape_witness(n: u32) -> Result<Slopes> {
    let n = n as i64;
    let want_s: Vec<i64> = (1..n).map(|j| 2 * j + 1).collect();
    let want_t: Vec<i64> = (1..=n).map(|j| 2 * j).collect();
    for den in 2..=64i64 {
        let s1 = int(-2) - Rational::new(BigInt::from(den - 1), BigInt::from(n * den));
        let s3 = int(2) + Rational::new(BigInt::from(den - 1), BigInt::from((n + 1) * den));
        for q in 2..=64i64 {
            for p in 1..q {
                let s2 = Rational::new(BigInt::from(p), BigInt::from(q));
                if s2 <= Rational::new(BigInt::one(), BigInt::from(n + 1)) || s2 >= Rational::new(BigInt::one(), BigInt::from(n)) {
                    continue;
                }
                if (&s2 * int(2 * n + 1)).is_integer() {
                    continue;
                }
                let Ok(s) = Slopes::new(s1.clone(), s2, s3.clone()) else { continue };
                if s.width() >= Rational::one() {
                    continue;
                }
                let prof = ColumnProfile::new(&s)?;
                if prof.d_min == 2 * n + 1 && prof.shape.as_ref() == Some(&(want_s.clone(), want_t.clone())) {
                    return Ok(s);
                }
            }
        }
    }
    Err(MdsError::Internal(format!("no triangle with d' = {} found in the search window", 2 * n + 1)))
}

/// Reads the two corners of `Delta_1` for the given slopes. The slopes are
/// first sheared so that `0 <= s3 < 1/t`, which puts the right vertex at
/// `(t, 0)` once translated.
pub fn frame_from_slopes(slopes: &Slopes, dprime: u32) -> Result<CornerFrame> {
    let prof = ColumnProfile::new(slopes)?;
    if prof.d_min != dprime as i64 {
        return Err(MdsError::Precondition(format!("minimal degree is {}, not {dprime}", prof.d_min)));
    }
    let dp = dprime as i64;
    let t = prof.r.iter().take_while(|&&c| c <= dp).count();
    let s = prof.l.iter().take_while(|&&c| c <= dp).count();
    if s + t != dprime as usize {
        return Err(MdsError::Internal(format!("corner columns {s} + {t} do not add up to {dprime}")));
    }
    let sheared = sheared_to_window(slopes, t as i64)?;
    let (_, p, q) = smallest_good_triangle(&sheared)?;
    let cols = lattice_columns(&sheared, 1)?;

    let right: Vec<_> = cols.iter().rev().take(t).collect();
    let mut plus = Vec::with_capacity(t + 1);
    for c in right.iter().rev() {
        plus.push((c.count() as u32, c.y_lo - q.1));
        if c.x - q.0 + t as i64 != plus.len() as i64 - 1 {
            return Err(MdsError::Internal("right corner columns are not contiguous".into()));
        }
    }
    plus.push((1, 0));
    let mut minus = vec![(1u32, 0i64)];
    for c in cols.iter().take(s) {
        minus.push((c.count() as u32, c.y_lo - p.1));
    }
    let frame = CornerFrame::assemble(dumnicki_set(&minus)?, dumnicki_set(&plus)?, dprime, Some(sheared))?;
    if frame.i_plus.spec.iter().any(|&(_, u)| u != 0) {
        return Err(MdsError::Internal(format!("right corner {} is not anchored", frame.i_plus)));
    }
    Ok(frame)
}

fn sheared_to_window(slopes: &Slopes, t: i64) -> Result<Slopes> {
    // The integer shear with 0 <= s3 < 1 is unique; 0 <= s3 < 1/t must then hold.
    let shift = -slopes.s3().floor().to_integer().to_i64().expect("shear fits");
    let sheared = slopes.shear(shift);
    let bound = Rational::new(BigInt::one(), BigInt::from(t));
    if sheared.s3().is_negative() || *sheared.s3() >= bound {
        return Err(MdsError::Precondition(format!("s3 = {} is not in [0, 1/{t}) after shearing", sheared.s3())));
    }
    Ok(sheared)
}

/// Rows are points, columns basis pairs; entry `(x)_u (y)_v`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InterpMatrix {
    pub rows: Vec<RowPoint>,
    pub basis: Vec<(u32, u32)>,
    pub entries: Vec<Vec<BivariatePoly>>,
}

impl InterpMatrix {
    pub fn is_concrete(&self) -> bool {
        self.rows.iter().all(|r| matches!(r, RowPoint::Concrete(..)))
    }

    /// Substitutes integers for `A`, `B`.
    pub fn evaluate(&self, a: i64, b: i64) -> Vec<Vec<Rational>> {
        let (ar, br) = (int(a), int(b));
        self.entries.iter().map(|row| row.iter().map(|e| e.eval(&ar, &br)).collect()).collect()
    }
}

pub fn build_matrix(points: &[RowPoint], basis: &[(u32, u32)]) -> InterpMatrix {
    let entries = points
        .iter()
        .map(|pt| {
            basis
                .iter()
                .map(|&(u, v)| match pt {
                    RowPoint::Symbolic { dx, dy } => &BivariatePoly::falling_a(*dx, u) * &BivariatePoly::falling_b(*dy, v),
                    RowPoint::Concrete(x, y) => {
                        let fx = falling_factorial(x, u as i64).expect("nonnegative index");
                        let fy = falling_factorial(y, v as i64).expect("nonnegative index");
                        BivariatePoly::constant(fx * fy)
                    }
                })
                .collect()
        })
        .collect();
    InterpMatrix { rows: points.to_vec(), basis: basis.to_vec(), entries }
}

/// Exact determinant of a concrete square matrix.
pub fn det_exact(m: &InterpMatrix) -> Result<Rational> {
    if m.rows.len() != m.basis.len() {
        return Err(MdsError::InvalidParameters(format!("{}x{} matrix is not square", m.rows.len(), m.basis.len())));
    }
    if !m.is_concrete() {
        return Err(MdsError::InvalidParameters("matrix has symbolic rows".into()));
    }
    let vals: Vec<Vec<Rational>> = m.entries.iter().map(|row| row.iter().map(|e| e.coeff(0, 0)).collect()).collect();
    Ok(det_rational(&vals))
}

/// Integer matrix of a frame at a concrete `(A, B)`, in determinant
/// orientation.
pub fn frame_matrix_at(frame: &CornerFrame, a: i64, b: i64) -> Vec<Vec<BigInt>> {
    int_matrix(&frame.det_rows(), &frame.det_basis(), a, b)
}

fn int_matrix(rows: &[RowPoint], basis: &[(u32, u32)], a: i64, b: i64) -> Vec<Vec<BigInt>> {
    rows.iter()
        .map(|r| {
            let (x, y) = r.at(a, b);
            let (x, y) = (BigInt::from(x), BigInt::from(y));
            basis.iter().map(|&(u, v)| falling_factorial_int(&x, u) * falling_factorial_int(&y, v)).collect()
        })
        .collect()
}

/// Evaluation plan for `det M(A, B)`: a grid of integer nodes large enough
/// for the per-variable degree bounds, placed where `I^-` and `I^+` cannot
/// collide.
#[derive(Clone, Debug)]
pub struct DetPlan {
    pub frame: CornerFrame,
    pub deg_a: u32,
    pub deg_b: u32,
    pub a0: i64,
    pub b0: i64,
    primes: Vec<u64>,
}

impl DetPlan {
    pub fn new(frame: &CornerFrame) -> Self {
        let deg_a = frame.basis.iter().map(|&(u, _)| u).sum();
        let deg_b = frame.basis.iter().map(|&(_, v)| v).sum();
        let a0 = frame.i_plus.max_x() + 1;
        let b0 = 0;
        let far = (a0 + deg_a as i64 + 2, b0 + deg_b as i64 + 2);
        let bits = hadamard_bits(&frame_matrix_at(frame, far.0, far.1)) + 2;
        let primes = primes_below_2_62((bits / 61 + 2) as usize);
        Self { frame: frame.clone(), deg_a, deg_b, a0, b0, primes }
    }

    pub fn nodes(&self) -> Vec<(i64, i64)> {
        let mut out = Vec::with_capacity(((self.deg_a + 1) * (self.deg_b + 1)) as usize);
        for i in 0..=self.deg_a as i64 {
            for j in 0..=self.deg_b as i64 {
                out.push((self.a0 + i, self.b0 + j));
            }
        }
        out
    }

    /// `det M(a, b)` by residues modulo enough primes for every node of the
    /// grid. Residues are computed directly from the coordinates.
    pub fn eval(&self, a: i64, b: i64) -> BigInt {
        let rows = self.frame.det_rows();
        let basis = self.frame.det_basis();
        let pts: Vec<(i64, i64)> = rows.iter().map(|r| r.at(a, b)).collect();
        let residues: Vec<u64> = self
            .primes
            .iter()
            .map(|&p| {
                let mt = Mont::new(p);
                let mut m = mont_matrix(&pts, &basis, &mt);
                det_mont(&mut m, &mt)
            })
            .collect();
        crt_symmetric(&residues, &self.primes)
    }

    /// Interpolates the grid values (row-major as in [`DetPlan::nodes`]) and
    /// checks the result at a node outside the grid with exact elimination.
    pub fn finish(&self, values: &[BigInt]) -> Result<BivariatePoly> {
        let cols = self.deg_b as usize + 1;
        if values.len() != (self.deg_a as usize + 1) * cols {
            return Err(MdsError::Internal("wrong number of node values".into()));
        }
        let grid: Vec<Vec<BigInt>> = values.chunks(cols).map(<[BigInt]>::to_vec).collect();
        let poly = reconstruct_grid_int(self.a0, self.b0, &grid);
        let (ca, cb) = (self.a0 + self.deg_a as i64 + 1, self.b0 + self.deg_b as i64 + 3);
        let exact = det_bareiss(&frame_matrix_at(&self.frame, ca, cb));
        let got = poly.eval_int(ca, cb);
        if got != Rational::from_integer(exact.clone()) {
            return Err(MdsError::ReconstructionMismatch { a: ca, b: cb });
        }
        Ok(poly)
    }
}

fn mont_matrix(pts: &[(i64, i64)], basis: &[(u32, u32)], mt: &Mont) -> Vec<Vec<u64>> {
    let max_u = basis.iter().map(|&(u, _)| u).max().unwrap_or(0) as usize;
    let max_v = basis.iter().map(|&(_, v)| v).max().unwrap_or(0) as usize;
    pts.iter()
        .map(|&(x, y)| {
            let fx = falling_table(x, max_u, mt);
            let fy = falling_table(y, max_v, mt);
            basis.iter().map(|&(u, v)| mt.mul(fx[u as usize], fy[v as usize])).collect()
        })
        .collect()
}

/// `(x)_0, ..., (x)_n` in Montgomery form.
fn falling_table(x: i64, n: usize, mt: &Mont) -> Vec<u64> {
    let p = mt.p as i128;
    let mut out = Vec::with_capacity(n + 1);
    let mut acc = mt.one();
    out.push(acc);
    for i in 0..n as i64 {
        let f = (x as i128 - i as i128).rem_euclid(p) as u64;
        acc = mt.mul(acc, mt.to_mont(f));
        out.push(acc);
    }
    out
}

/// `det M(A, B)` of a frame as a polynomial.
pub fn det_symbolic(frame: &CornerFrame) -> Result<BivariatePoly> {
    let plan = DetPlan::new(frame);
    let values: Vec<BigInt> = plan.nodes().into_iter().map(|(a, b)| plan.eval(a, b)).collect();
    plan.finish(&values)
}

/// `xi_i = (-1)^i C(n, i) (A + 1 - n + i)_i (B - 2 - i)_{n - i}`.
pub fn gk_kernel_vector(n: u32) -> Vec<BivariatePoly> {
    (0..=n)
        .map(|i| {
            let sign = if i % 2 == 0 { BigInt::one() } else { -BigInt::one() };
            let c = Rational::from_integer(sign * binomial(n as u64, i as u64));
            let fa = BivariatePoly::falling_a(1 - n as i64 + i as i64, i);
            let fb = BivariatePoly::falling_b(-2 - i as i64, n - i);
            (&fa * &fb).scale(&c)
        })
        .collect()
}

/// `M_1`: rows `(A + 1, B - 2 - j)` for `j < n`, columns `(x)_{n-i} (y)_i`.
pub fn gk_m1(n: u32) -> InterpMatrix {
    let rows: Vec<RowPoint> = (0..n as i64).map(|j| RowPoint::Symbolic { dx: 1, dy: -2 - j }).collect();
    let basis: Vec<(u32, u32)> = (0..=n).map(|i| (n - i, i)).collect();
    build_matrix(&rows, &basis)
}

/// `M_1 xi` as polynomials.
pub fn gk_kernel_residual(n: u32) -> Vec<BivariatePoly> {
    let m1 = gk_m1(n);
    let xi = gk_kernel_vector(n);
    m1.entries
        .iter()
        .map(|row| row.iter().zip(&xi).fold(BivariatePoly::zero(), |acc, (e, x)| &acc + &(e * x)))
        .collect()
}

/// Number of rows above which curve existence switches from exact
/// fraction-free elimination to elimination modulo several large primes.
pub const EXACT_RANK_LIMIT: usize = 48;
const ORACLE_PRIMES: usize = 3;

/// Whether a curve of degree at most `degree` passes through every point
/// of `points` but not through `avoid`.
pub fn curve_exists(points: &[Point], avoid: Point, degree: u32) -> Result<bool> {
    if points.contains(&avoid) {
        return Err(MdsError::Precondition(format!("avoided point {avoid:?} is among the points")));
    }
    let basis: Vec<(u32, u32)> = (0..=degree).flat_map(|t| (0..=t).map(move |u| (u, t - u))).collect();
    if points.len() <= EXACT_RANK_LIMIT {
        let rows: Vec<RowPoint> = points.iter().map(|&(x, y)| RowPoint::int(x, y)).collect();
        let mut m = int_matrix(&rows, &basis, 0, 0);
        let r0 = rank_bareiss(&m);
        m.extend(int_matrix(&[RowPoint::int(avoid.0, avoid.1)], &basis, 0, 0));
        return Ok(rank_bareiss(&m) > r0);
    }
    // The avoided point escapes the span iff its row is independent of the
    // point rows. Trust the primes that see the largest rank.
    let mut best: Option<(usize, bool)> = None;
    for &p in primes_below_2_62(ORACLE_PRIMES).iter() {
        let mt = Mont::new(p);
        let ech = Echelon::new(mont_matrix(points, &basis, &mt), mt);
        let indep = ech.is_independent(mont_matrix(&[avoid], &basis, &mt).remove(0));
        let rank = ech.rank();
        best = match best {
            Some((r, ans)) if r > rank || (r == rank && ans) => Some((r, ans)),
            _ => Some((rank, indep)),
        };
    }
    Ok(best.map_or(false, |(_, ans)| ans))
}

/// Outcome of comparing the full and the reduced interpolation problems.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionReport {
    pub k: i64,
    pub d: i64,
    pub full_degree: i64,
    /// `(full, reduced)` answers when the left vertex `kp` is avoided.
    pub avoid_left: (bool, bool),
    /// Same for the right vertex `kq`.
    pub avoid_right: (bool, bool),
}

impl ReductionReport {
    pub fn equivalent(&self) -> bool {
        self.avoid_left.0 == self.avoid_left.1 && self.avoid_right.0 == self.avoid_right.1
    }
}

pub fn reduction_report(slopes: &Slopes, k: i64) -> Result<ReductionReport> {
    if k < 1 {
        return Err(MdsError::Precondition(format!("k must be positive, got {k}")));
    }
    let prof = ColumnProfile::new(slopes)?;
    let full_degree = k * prof.mw() - 1;
    if k * prof.mw() < prof.d + 2 {
        return Err(MdsError::Precondition(format!("k m w = {} < d + 2 = {}", k * prof.mw(), prof.d + 2)));
    }
    let (kp, kq) = ((k * prof.p.0, k * prof.p.1), (k * prof.q.0, k * prof.q.1));
    let cols = lattice_columns(slopes, k)?;
    let mut all: Vec<Point> = vec![kp, kq];
    for c in &cols {
        all.extend((c.y_lo..=c.y_hi).map(|y| (c.x, y)));
    }
    let thin: Vec<Point> =
        cols.iter().filter(|c| c.count() <= prof.d).flat_map(|c| (c.y_lo..=c.y_hi).map(move |y| (c.x, y))).collect();
    let d = prof.d as u32;
    let side = |avoid: Point, other: Point| -> Result<(bool, bool)> {
        let full: Vec<Point> = all.iter().copied().filter(|&pt| pt != avoid).collect();
        let mut reduced = thin.clone();
        reduced.push(other);
        Ok((curve_exists(&full, avoid, full_degree as u32)?, curve_exists(&reduced, avoid, d)?))
    };
    Ok(ReductionReport {
        k,
        d: prof.d,
        full_degree,
        avoid_left: side(kp, kq)?,
        avoid_right: side(kq, kp)?,
    })
}

pub fn reduction_equivalence(slopes: &Slopes, k: i64) -> Result<bool> {
    Ok(reduction_report(slopes, k)?.equivalent())
}

/// `det M` of a GK frame at a concrete point, by exact elimination.
pub fn gk_det_at(n: u32, a: i64, b: i64) -> Result<BigInt> {
    let frame = gk_corner_frame(n)?;
    Ok(det_bareiss(&frame_matrix_at(&frame, a, b)))
}
