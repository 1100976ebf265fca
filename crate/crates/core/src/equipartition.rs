//! Weighted L1-equipartitions of a function on a convex polygon by straight cuts.
//!
//! Each cut halves the `|u| phi` mass of its cell and gives both halves zero `u phi`
//! mean. For each direction the balancing offset is found by bracketed root finding;
//! the direction is then found by sign-change search over `[0, pi]` followed by bisection.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::convex2d::{clip_half_plane, polygon_area, ConvexBody2D, Point, DEFAULT_RESOLUTION};
use crate::error::{Error, Result};

/// Absolute tolerance of the accurate mass integrals.
pub const MASS_TOL: f64 = 1e-8;
/// Absolute tolerance used while scanning directions.
pub const SCAN_TOL: f64 = 1e-6;
/// Number of direction samples over `[0, pi)`.
pub const ANGLE_SAMPLES: usize = 720;
/// Relative zero-mean tolerance required of an input cell.
pub const MEAN_TOL: f64 = 1e-6;
const CHUNK: usize = 24;

/// A density `u` with a positive weight `phi`.
pub trait ScalarField: Sync {
    fn u(&self, p: Point) -> f64;

    fn phi(&self, _p: Point) -> f64 {
        1.0
    }

    /// Gradient of `u`; central differences unless overridden.
    fn grad_u(&self, p: Point) -> Point {
        let h = 1e-6;
        Point::new(
            (self.u(p + Point::new(h, 0.0)) - self.u(p - Point::new(h, 0.0))) / (2.0 * h),
            (self.u(p + Point::new(0.0, h)) - self.u(p - Point::new(0.0, h))) / (2.0 * h),
        )
    }
}

/// `u = sin(2 pi x) sin(2 pi y)`, `phi = 1`.
#[derive(Debug, Clone, Copy, Default)]
pub struct SinSinField;

impl ScalarField for SinSinField {
    fn u(&self, p: Point) -> f64 {
        (2.0 * PI * p.x).sin() * (2.0 * PI * p.y).sin()
    }
    fn grad_u(&self, p: Point) -> Point {
        let (sx, cx) = (2.0 * PI * p.x).sin_cos();
        let (sy, cy) = (2.0 * PI * p.y).sin_cos();
        Point::new(2.0 * PI * cx * sy, 2.0 * PI * sx * cy)
    }
}

/// `u = a . x + b` with weight `phi`.
#[derive(Debug, Clone, Copy)]
pub struct AffineField {
    pub a: Point,
    pub b: f64,
}

impl ScalarField for AffineField {
    fn u(&self, p: Point) -> f64 {
        self.a.dot(p) + self.b
    }
    fn grad_u(&self, _p: Point) -> Point {
        self.a
    }
}

/// Field given by closures.
pub struct FnField<U, W> {
    pub u: U,
    pub phi: W,
}

impl<U, W> ScalarField for FnField<U, W>
where
    U: Fn(Point) -> f64 + Sync,
    W: Fn(Point) -> f64 + Sync,
{
    fn u(&self, p: Point) -> f64 {
        (self.u)(p)
    }
    fn phi(&self, p: Point) -> f64 {
        (self.phi)(p)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Cell {
    pub polygon: ConvexBody2D,
    pub mass_u: f64,
    pub mass_abs: f64,
    pub mass_phi: f64,
}

impl Cell {
    pub fn vertices(&self) -> &[Point] {
        match &self.polygon {
            ConvexBody2D::Polygon { vertices } => vertices,
            _ => unreachable!("cells are polygons"),
        }
    }
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [0.129_484_966_168_869_7, 0.279_705_391_489_276_7, 0.381_830_050_505_118_9, 0.417_959_183_673_469_4];
const MAX_DEPTH: u32 = 40;

/// Gauss-Kronrod 7/15 estimate on `[a, b]` and its error bound over all components.
fn gk15<const N: usize>(f: &impl Fn(f64) -> [f64; N], a: f64, b: f64) -> ([f64; N], f64) {
    let (c, h) = (0.5 * (a + b), 0.5 * (b - a));
    let mut k = [0.0; N];
    let mut g = [0.0; N];
    for i in 0..8 {
        let pts: &[f64] = if i == 7 { &[0.0] } else { &[-1.0, 1.0] };
        for &sgn in pts {
            let v = f(c + sgn * h * XGK[i]);
            for j in 0..N {
                k[j] += WGK[i] * v[j];
                if i % 2 == 1 {
                    g[j] += WG[i / 2] * v[j];
                }
            }
        }
    }
    let mut err = 0.0f64;
    for j in 0..N {
        k[j] *= h;
        err = err.max((k[j] - h * g[j]).abs());
    }
    (k, err)
}

/// Adaptive bisection; accepted panels are appended to `leaves`.
fn adapt<const N: usize>(
    f: &impl Fn(f64) -> [f64; N],
    a: f64,
    b: f64,
    tol: f64,
    depth: u32,
    leaves: &mut Vec<(f64, f64, [f64; N])>,
) {
    let (v, err) = gk15(f, a, b);
    if err <= tol || depth >= MAX_DEPTH || b - a <= 1e-15 * (1.0 + a.abs()) {
        leaves.push((a, b, v));
        return;
    }
    let m = 0.5 * (a + b);
    adapt(f, a, m, 0.5 * tol, depth + 1, leaves);
    adapt(f, m, b, 0.5 * tol, depth + 1, leaves);
}

fn integrate_1d<const N: usize>(f: &impl Fn(f64) -> [f64; N], a: f64, b: f64, tol: f64) -> [f64; N] {
    let mut leaves = Vec::new();
    if b > a {
        adapt(f, a, b, tol, 0, &mut leaves);
    }
    let mut out = [0.0; N];
    for (_, _, v) in &leaves {
        for j in 0..N {
            out[j] += v[j];
        }
    }
    out
}

/// Slices of a convex polygon by lines `normal . x = tau`.
struct Slicer<'a> {
    poly: &'a [Point],
    normal: Point,
    along: Point,
    lo: f64,
    hi: f64,
}

impl<'a> Slicer<'a> {
    fn new(poly: &'a [Point], alpha: f64) -> Self {
        let normal = Point::polar(1.0, alpha);
        let proj = poly.iter().map(|p| normal.dot(*p));
        let lo = proj.clone().fold(f64::INFINITY, f64::min);
        let hi = proj.fold(f64::NEG_INFINITY, f64::max);
        Slicer { poly, normal, along: normal.perp(), lo, hi }
    }

    fn chord(&self, tau: f64) -> Option<(f64, f64)> {
        let n = self.poly.len();
        let (mut s0, mut s1) = (f64::INFINITY, f64::NEG_INFINITY);
        for i in 0..n {
            let (p, q) = (self.poly[i], self.poly[(i + 1) % n]);
            let (a, b) = (self.normal.dot(p) - tau, self.normal.dot(q) - tau);
            if (a <= 0.0 && b >= 0.0) || (a >= 0.0 && b <= 0.0) {
                let x = if a == b { p } else { p.lerp(q, a / (a - b)) };
                let s = self.along.dot(x);
                s0 = s0.min(s);
                s1 = s1.max(s);
            }
        }
        (s1 > s0).then_some((s0, s1))
    }

    /// Integral of `f` over the chord at `tau`.
    fn line<const N: usize>(&self, f: &impl Fn(Point) -> [f64; N], tau: f64, tol: f64) -> [f64; N] {
        match self.chord(tau) {
            Some((s0, s1)) => integrate_1d(&|s| f(self.normal * tau + self.along * s), s0, s1, tol),
            None => [0.0; N],
        }
    }

    fn inner_tol(&self, tol: f64) -> f64 {
        0.1 * tol / (self.hi - self.lo).max(1e-300)
    }

    /// Accepted outer panels over the whole polygon.
    fn panels<const N: usize>(&self, f: &impl Fn(Point) -> [f64; N], tol: f64) -> Vec<(f64, f64, [f64; N])> {
        let ti = self.inner_tol(tol);
        let mut leaves = Vec::new();
        if self.hi > self.lo {
            adapt(&|t| self.line(f, t, ti), self.lo, self.hi, 0.5 * tol, 0, &mut leaves);
        }
        leaves
    }
}

/// Adaptive iterated integral of a vector integrand over a convex polygon.
pub fn integrate_polygon<const N: usize>(poly: &[Point], f: &impl Fn(Point) -> [f64; N], tol: f64) -> [f64; N] {
    let mut out = [0.0; N];
    if poly.len() < 3 {
        return out;
    }
    for (_, _, v) in Slicer::new(poly, 0.0).panels(f, tol) {
        for j in 0..N {
            out[j] += v[j];
        }
    }
    out
}

fn weighted(field: &dyn ScalarField) -> impl Fn(Point) -> [f64; 3] + '_ {
    move |p| {
        let w = field.phi(p);
        let u = field.u(p);
        [u * w, u.abs() * w, w]
    }
}

fn masses(field: &dyn ScalarField, poly: &[Point], tol: f64) -> [f64; 3] {
    integrate_polygon(poly, &weighted(field), tol)
}

fn make_cell(field: &dyn ScalarField, poly: Vec<Point>) -> Cell {
    let [mu, ma, mp] = masses(field, &poly, MASS_TOL);
    Cell { polygon: ConvexBody2D::Polygon { vertices: poly }, mass_u: mu, mass_abs: ma, mass_phi: mp }
}

fn polygon_of(body: &ConvexBody2D) -> Vec<Point> {
    body.boundary_polygon(DEFAULT_RESOLUTION)
}

/// Offset `c` where `{n . x <= c}` carries half the `|u| phi` mass, and the `u phi` mass there.
fn balance(field: &dyn ScalarField, poly: &[Point], alpha: f64, half: f64, tol: f64) -> (f64, f64) {
    let sl = Slicer::new(poly, alpha);
    let f = weighted(field);
    let panels = sl.panels(&f, tol);
    let mut cum = [0.0; 3];
    for &(a, b, v) in &panels {
        if cum[1] + v[1] < half {
            for j in 0..3 {
                cum[j] += v[j];
            }
            continue;
        }
        // The crossing panel: solve for the offset with partial panel integrals.
        let ti = sl.inner_tol(tol);
        let partial = |c: f64| integrate_1d(&|t| sl.line(&f, t, ti), a, c, 0.5 * tol);
        let (mut lo, mut hi) = (a, b);
        let (mut glo, mut ghi) = (cum[1] - half, cum[1] + v[1] - half);
        let mut side = 0i8;
        let mut best = (a, cum[0], glo.abs());
        for _ in 0..100 {
            let mut c = (lo * ghi - hi * glo) / (ghi - glo);
            if !(c > lo && c < hi) {
                c = 0.5 * (lo + hi);
            }
            let m = partial(c);
            let g = cum[1] + m[1] - half;
            if g.abs() < best.2 {
                best = (c, cum[0] + m[0], g.abs());
            }
            if g.abs() <= 1e-13 * half || hi - lo <= 1e-15 * (1.0 + hi.abs()) {
                break;
            }
            if g > 0.0 {
                hi = c;
                ghi = g;
                if side == 1 {
                    glo *= 0.5;
                }
                side = 1;
            } else {
                lo = c;
                glo = g;
                if side == -1 {
                    ghi *= 0.5;
                }
                side = -1;
            }
        }
        return (best.0, best.1);
    }
    (sl.hi, cum[0])
}

/// `int u phi / int phi` over the body, for centering a field.
pub fn weighted_mean(body: &ConvexBody2D, field: &dyn ScalarField) -> f64 {
    let [mu, _, mp] = masses(field, &polygon_of(body), MASS_TOL);
    mu / mp
}

/// Split a cell by a straight line into two cells of equal `|u| phi` mass and zero `u phi` mean.
pub fn bisect_balanced(body: &ConvexBody2D, field: &dyn ScalarField) -> Result<(Cell, Cell)> {
    let poly = polygon_of(body);
    let [total_u, total_abs, _] = masses(field, &poly, MASS_TOL);
    if !(total_abs > 0.0) {
        return Err(Error::Precondition("the |u| phi mass vanishes".into()));
    }
    if total_u.abs() > MEAN_TOL * total_abs {
        return Err(Error::Precondition(format!("u phi mean {total_u:e} is not zero (|u| phi mass {total_abs:e})")));
    }
    let half = 0.5 * total_abs;
    let scan_tol = SCAN_TOL * total_abs;
    let acc_tol = MASS_TOL;
    let angles: Vec<f64> = (0..=ANGLE_SAMPLES).map(|k| PI * k as f64 / ANGLE_SAMPLES as f64).collect();
    let accurate = |a: f64| balance(field, &poly, a, half, acc_tol);
    let target = 1e-9 * total_abs;
    let mut found = None;
    let f0 = accurate(0.0);
    if f0.1.abs() <= target {
        found = Some((0.0, f0.0));
    }
    // Coarse samples are computed lazily in chunks so that an early root stops the scan.
    let mut coarse: Vec<f64> = Vec::with_capacity(ANGLE_SAMPLES + 1);
    let mut k = 0;
    while found.is_none() && k < ANGLE_SAMPLES {
        while coarse.len() < k + 2 {
            let from = coarse.len();
            let to = (from + CHUNK).min(ANGLE_SAMPLES + 1);
            let chunk: Vec<f64> =
                angles[from..to].par_iter().map(|&a| balance(field, &poly, a, half, scan_tol).1).collect();
            coarse.extend(chunk);
        }
        if coarse[k] * coarse[k + 1] > 0.0 {
            k += 1;
            continue;
        }
        let (mut a, mut b) = (angles[k], angles[k + 1]);
        k += 1;
        let (fa, fb) = (accurate(a), accurate(b));
        if fa.1.abs() <= target {
            found = Some((a, fa.0));
            break;
        }
        if fa.1 * fb.1 > 0.0 {
            continue;
        }
        let mut best = if fa.1.abs() < fb.1.abs() { (a, fa) } else { (b, fb) };
        for _ in 0..80 {
            let mid = 0.5 * (a + b);
            let fm = accurate(mid);
            if fm.1.abs() < best.1 .1.abs() {
                best = (mid, fm);
            }
            if fm.1.abs() <= target || b - a <= 1e-14 {
                break;
            }
            if fm.1.signum() == fa.1.signum() {
                a = mid;
            } else {
                b = mid;
            }
        }
        found = Some((best.0, best.1 .0));
    }
    let (alpha, c) = found.ok_or_else(|| Error::NoBalancedCut("no sign change of the signed mass over directions".into()))?;
    let n = Point::polar(1.0, alpha);
    let left = clip_half_plane(&poly, n, c, 0.0);
    let right = clip_half_plane(&poly, -n, -c, 0.0);
    Ok((make_cell(field, left), make_cell(field, right)))
}

/// Recursive bisection to `2^depth` cells, listed left-first.
pub fn equipartition(body: &ConvexBody2D, field: &dyn ScalarField, depth: u32) -> Result<Vec<Cell>> {
    if depth == 0 {
        let poly = polygon_of(body);
        return Ok(vec![make_cell(field, poly)]);
    }
    let (a, b) = bisect_balanced(body, field)?;
    let (ra, rb) = rayon::join(
        || equipartition(&a.polygon, field, depth - 1),
        || equipartition(&b.polygon, field, depth - 1),
    );
    let mut out = ra?;
    out.extend(rb?);
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DecompositionReport {
    /// `int |grad u| phi / int |u| phi` over the union of cells.
    pub whole: f64,
    /// Mean over cells of the same ratio, using each cell's recorded `|u| phi` mass.
    pub cell_mean: f64,
    pub rel_defect: f64,
}

/// Compare the global gradient ratio with the mean of the per-cell ratios.
pub fn decomposition_identity(cells: &[Cell], field: &dyn ScalarField) -> DecompositionReport {
    let per: Vec<[f64; 2]> = cells
        .par_iter()
        .map(|c| {
            integrate_polygon(
                c.vertices(),
                &|p| {
                    let w = field.phi(p);
                    [field.grad_u(p).norm() * w, field.u(p).abs() * w]
                },
                MASS_TOL,
            )
        })
        .collect();
    let grad: f64 = per.iter().map(|v| v[0]).sum();
    let abs: f64 = per.iter().map(|v| v[1]).sum();
    let whole = grad / abs;
    let cell_mean = per.iter().zip(cells).map(|(v, c)| v[0] / c.mass_abs).sum::<f64>() / cells.len() as f64;
    DecompositionReport { whole, cell_mean, rel_defect: (cell_mean - whole).abs() / whole }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellAreaReport {
    /// `min_i |cell_i| n / |union|`.
    pub min_fraction: f64,
    pub fractions: Vec<f64>,
}

pub fn cell_area_report(cells: &[Cell]) -> CellAreaReport {
    let areas: Vec<f64> = cells.iter().map(|c| polygon_area(c.vertices()).abs()).collect();
    let total: f64 = areas.iter().sum();
    let n = cells.len() as f64;
    let fractions: Vec<f64> = areas.iter().map(|a| a * n / total).collect();
    let min_fraction = fractions.iter().cloned().fold(f64::INFINITY, f64::min);
    CellAreaReport { min_fraction, fractions }
}
