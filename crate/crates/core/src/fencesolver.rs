//! Shortest-fence constants of convex planar bodies.
//!
//! A fence is a straight chord or a circular arc whose endpoints lie on the boundary.
//! The boundary is held exactly as a chain of segments and circular arcs, so areas and
//! lengths of split regions are closed-form. Boundary positions are arc-length
//! parameters measured counter-clockwise from the first vertex (polygons), from the
//! point at angle 0 (discs), or from the point at angle `-asin(rho / R)` (truncated discs).

use std::cmp::Ordering;
use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::convex2d::{ConvexBody2D, Point};
use crate::error::{Error, Result};

/// Relative tolerance for the arc-inside-body test.
pub const CONTAINMENT_TOL: f64 = 1e-9;

/// A chord (`sagitta == 0`) or circular arc between two boundary positions.
/// Positive sagitta bulges to the left of the direction from `s1` to `s2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Fence {
    pub s1: f64,
    pub s2: f64,
    pub sagitta: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Which {
    Sigma1,
    Mu1,
}

impl Which {
    pub fn name(self) -> &'static str {
        match self {
            Which::Sigma1 => "sigma1",
            Which::Mu1 => "mu1",
        }
    }
}

/// Optimal fence with its split measurements. `area_e` is the smaller side.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FenceResult {
    pub which: Which,
    pub value: f64,
    pub fence: Fence,
    pub area_e: f64,
    pub area_comp: f64,
    pub fence_length: f64,
    /// Angles in `[0, pi/2]` between the fence and the boundary tangent at each endpoint.
    pub contact_angles: [f64; 2],
}

/// Multistart settings: a lattice of `grid_s` boundary positions (all pairs) times
/// `grid_t` normalized sagittas in `[-1, 1]`, then pattern descent from the best `starts`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverOptions {
    pub grid_s: usize,
    pub grid_t: usize,
    pub starts: usize,
    pub max_sweeps: usize,
    pub tol: f64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions { grid_s: 64, grid_t: 33, starts: 16, max_sweeps: 200, tol: 1e-10 }
    }
}

#[derive(Debug, Clone, Copy)]
enum Piece {
    Segment { a: Point, b: Point },
    Arc { center: Point, radius: f64, from: f64, to: f64 },
}

impl Piece {
    fn length(&self) -> f64 {
        match *self {
            Piece::Segment { a, b } => a.dist(b),
            Piece::Arc { radius, from, to, .. } => radius * (to - from),
        }
    }

    fn point(&self, l: f64) -> Point {
        match *self {
            Piece::Segment { a, b } => {
                let len = a.dist(b);
                if len > 0.0 {
                    a.lerp(b, l / len)
                } else {
                    a
                }
            }
            Piece::Arc { center, radius, from, .. } => center + Point::polar(radius, from + l / radius),
        }
    }

    fn tangent(&self, l: f64) -> Point {
        match *self {
            Piece::Segment { a, b } => (b - a) * (1.0 / a.dist(b)),
            Piece::Arc { radius, from, .. } => Point::polar(1.0, from + l / radius).perp(),
        }
    }

    /// Integral of `p x dp` from the piece start to local length `l`.
    fn cross_to(&self, l: f64) -> f64 {
        match *self {
            Piece::Segment { a, .. } => a.cross(self.point(l)),
            Piece::Arc { center: c, radius: r, from: a, .. } => {
                let b = a + l / r;
                r * r * (b - a) + r * (c.x * (b.sin() - a.sin()) - c.y * (b.cos() - a.cos()))
            }
        }
    }

    fn sub(&self, l0: f64, l1: f64) -> Piece {
        match *self {
            Piece::Segment { .. } => Piece::Segment { a: self.point(l0), b: self.point(l1) },
            Piece::Arc { center, radius, from, .. } => {
                Piece::Arc { center, radius, from: from + l0 / radius, to: from + l1 / radius }
            }
        }
    }

    fn dist_to(&self, q: Point) -> f64 {
        match *self {
            Piece::Segment { a, b } => {
                let e = b - a;
                let ee = e.dot(e);
                let t = if ee > 0.0 { ((q - a).dot(e) / ee).clamp(0.0, 1.0) } else { 0.0 };
                q.dist(a + e * t)
            }
            Piece::Arc { center, radius, from, to } => {
                let v = q - center;
                let ang = v.y.atan2(v.x);
                let k = ((from - ang) / (2.0 * PI)).ceil();
                let ang = ang + 2.0 * PI * k;
                if ang <= to {
                    (v.norm() - radius).abs()
                } else {
                    q.dist(center + Point::polar(radius, from)).min(q.dist(center + Point::polar(radius, to)))
                }
            }
        }
    }
}

/// Exact boundary of a body as an arc-length parametrized chain.
#[derive(Debug, Clone)]
pub struct Boundary {
    pieces: Vec<Piece>,
    starts: Vec<f64>,
    cross: Vec<f64>,
    perimeter: f64,
    area: f64,
}

impl Boundary {
    pub fn new(body: &ConvexBody2D) -> Boundary {
        let pieces = match body {
            ConvexBody2D::Polygon { vertices } => {
                let n = vertices.len();
                (0..n).map(|i| Piece::Segment { a: vertices[i], b: vertices[(i + 1) % n] }).collect()
            }
            ConvexBody2D::Disc { center, radius } => {
                vec![Piece::Arc { center: *center, radius: *radius, from: 0.0, to: 2.0 * PI }]
            }
            ConvexBody2D::TruncatedDisc { center, radius, half_strip_width } => {
                let (c, r) = (*center, *radius);
                let beta = (half_strip_width / r).min(1.0).asin();
                if beta >= PI / 2.0 {
                    vec![Piece::Arc { center: c, radius: r, from: -PI / 2.0, to: 1.5 * PI }]
                } else {
                    let at = |a: f64| c + Point::polar(r, a);
                    vec![
                        Piece::Arc { center: c, radius: r, from: -beta, to: beta },
                        Piece::Segment { a: at(beta), b: at(PI - beta) },
                        Piece::Arc { center: c, radius: r, from: PI - beta, to: PI + beta },
                        Piece::Segment { a: at(PI + beta), b: at(2.0 * PI - beta) },
                    ]
                }
            }
        };
        let mut starts = vec![0.0];
        let mut cross = vec![0.0];
        for p in &pieces {
            let len = p.length();
            starts.push(starts.last().unwrap() + len);
            cross.push(cross.last().unwrap() + p.cross_to(len));
        }
        let perimeter = *starts.last().unwrap();
        let area = 0.5 * cross.last().unwrap();
        Boundary { pieces, starts, cross, perimeter, area }
    }

    pub fn perimeter(&self) -> f64 {
        self.perimeter
    }

    pub fn area(&self) -> f64 {
        self.area
    }

    fn wrap(&self, s: f64) -> f64 {
        let w = s.rem_euclid(self.perimeter);
        if w >= self.perimeter {
            0.0
        } else {
            w
        }
    }

    fn locate(&self, s: f64) -> (usize, f64) {
        let s = self.wrap(s);
        let i = (self.starts.partition_point(|&x| x <= s) - 1).min(self.pieces.len() - 1);
        (i, s - self.starts[i])
    }

    pub fn point(&self, s: f64) -> Point {
        let (i, l) = self.locate(s);
        self.pieces[i].point(l)
    }

    /// Unit counter-clockwise tangent (right-sided at corners).
    pub fn tangent(&self, s: f64) -> Point {
        let (i, l) = self.locate(s);
        self.pieces[i].tangent(l)
    }

    fn cumulative_cross(&self, s: f64) -> f64 {
        let (i, l) = self.locate(s);
        self.cross[i] + self.pieces[i].cross_to(l)
    }

    /// Integral of `p x dp` along the counter-clockwise path from `s1` to `s2`.
    fn path_cross(&self, s1: f64, s2: f64) -> f64 {
        let (f1, f2) = (self.cumulative_cross(s1), self.cumulative_cross(s2));
        if self.wrap(s2) >= self.wrap(s1) {
            f2 - f1
        } else {
            2.0 * self.area - f1 + f2
        }
    }

    /// Distance from `q` to the counter-clockwise path from `s1` to `s2`.
    fn path_distance(&self, q: Point, s1: f64, s2: f64) -> f64 {
        let mut remaining = (self.wrap(s2) - self.wrap(s1)).rem_euclid(self.perimeter);
        let (mut i, mut l0) = self.locate(s1);
        let mut best = f64::INFINITY;
        for _ in 0..self.pieces.len() + 2 {
            let len = self.pieces[i].length();
            let l1 = len.min(l0 + remaining);
            best = best.min(self.pieces[i].sub(l0, l1).dist_to(q));
            remaining -= l1 - l0;
            if remaining <= 1e-15 * self.perimeter {
                break;
            }
            i = (i + 1) % self.pieces.len();
            l0 = 0.0;
        }
        best
    }
}

/// `x - sin x` without cancellation near zero.
pub(crate) fn x_minus_sin(x: f64) -> f64 {
    if x.abs() < 0.1 {
        let x2 = x * x;
        let mut term = x * x2 / 6.0;
        let mut sum = 0.0;
        for k in 1..8 {
            sum += term;
            let a = (2 * k + 2) as f64;
            term *= -x2 / (a * (a + 1.0));
        }
        sum
    } else {
        x - x.sin()
    }
}

/// Measurements of the two sides of a fence. Side A is bounded by the counter-clockwise
/// path from `s1` to `s2`; side B lies to the left of the direction from `s1` to `s2`.
#[derive(Debug, Clone, Copy)]
struct Split {
    area_a: f64,
    area_b: f64,
    length: f64,
}

fn split_exact(b: &Boundary, f: Fence) -> Result<Split> {
    let (p1, p2) = (b.point(f.s1), b.point(f.s2));
    let d = p2 - p1;
    let c = d.norm();
    if !(c > 1e-12 * b.perimeter) {
        return Err(Error::InvalidFence("endpoints coincide".into()));
    }
    let t = f.sagitta / (0.5 * c);
    if !(t.abs() <= 1.0 + 1e-12) {
        return Err(Error::InvalidFence(format!("sagitta {} exceeds half chord {}", f.sagitta, 0.5 * c)));
    }
    let t = t.clamp(-1.0, 1.0);
    let chord_a = 0.5 * (b.path_cross(f.s1, f.s2) + p2.cross(p1));
    let (mut area_a, mut length) = (chord_a, c);
    if t != 0.0 {
        let alpha = 4.0 * t.abs().atan();
        let r = 0.5 * c / (0.5 * alpha).sin();
        let sign = t.signum();
        let normal = d.perp() * (1.0 / c);
        let center = (p1 + p2) * 0.5 + normal * (f.sagitta - r * sign);
        let (from, to) = if t > 0.0 { (f.s2, f.s1) } else { (f.s1, f.s2) };
        if b.path_distance(center, from, to) < r * (1.0 - CONTAINMENT_TOL) {
            return Err(Error::InvalidFence("arc leaves the body".into()));
        }
        area_a += sign * 0.5 * r * r * x_minus_sin(alpha);
        length = r * alpha;
    }
    let area_b = b.area - area_a;
    if !(area_a > 0.0 && area_b > 0.0) {
        return Err(Error::InvalidFence("fence does not separate the body".into()));
    }
    Ok(Split { area_a, area_b, length })
}

fn split_value(which: Which, area: f64, s: &Split) -> f64 {
    let (e, comp) = if s.area_a <= s.area_b { (s.area_a, s.area_b) } else { (s.area_b, s.area_a) };
    match which {
        Which::Sigma1 => area * s.length / (2.0 * e * comp),
        Which::Mu1 => s.length / e,
    }
}

/// Areas of the smaller and larger side and the fence length.
pub fn split(body: &ConvexBody2D, fence: &Fence) -> Result<(f64, f64, f64)> {
    let s = split_exact(&Boundary::new(body), *fence)?;
    Ok((s.area_a.min(s.area_b), s.area_a.max(s.area_b), s.length))
}

/// `area * length / (2 |E| |complement|)`.
pub fn sigma1_objective(body: &ConvexBody2D, fence: &Fence) -> Result<f64> {
    let b = Boundary::new(body);
    Ok(split_value(Which::Sigma1, b.area, &split_exact(&b, *fence)?))
}

/// `length / min(|E|, |complement|)`.
pub fn mu1_objective(body: &ConvexBody2D, fence: &Fence) -> Result<f64> {
    let b = Boundary::new(body);
    Ok(split_value(Which::Mu1, b.area, &split_exact(&b, *fence)?))
}

/// Search coordinates: boundary fractions `u1, u2` and normalized sagitta `t`.
type Coord = [f64; 3];

fn to_fence(b: &Boundary, x: Coord) -> Fence {
    let (s1, s2) = (b.wrap(x[0] * b.perimeter), b.wrap(x[1] * b.perimeter));
    let c = b.point(s1).dist(b.point(s2));
    Fence { s1, s2, sagitta: x[2].clamp(-1.0, 1.0) * 0.5 * c }
}

fn objective(b: &Boundary, which: Which, x: Coord) -> f64 {
    split_exact(b, to_fence(b, x)).map_or(f64::INFINITY, |s| split_value(which, b.area, &s))
}

fn candidate_cmp(a: &(f64, Coord), b: &(f64, Coord)) -> Ordering {
    a.0.total_cmp(&b.0)
        .then(a.1[0].total_cmp(&b.1[0]))
        .then(a.1[1].total_cmp(&b.1[1]))
        .then(a.1[2].total_cmp(&b.1[2]))
}

fn lattice(b: &Boundary, which: Which, ns: usize, nt: usize) -> Vec<(f64, Coord)> {
    let nt = nt.max(1);
    let pairs: Vec<(usize, usize)> = (0..ns).flat_map(|i| (i + 1..ns).map(move |j| (i, j))).collect();
    pairs
        .par_iter()
        .flat_map_iter(|&(i, j)| {
            (0..nt).map(move |k| {
                let t = if nt == 1 { 0.0 } else { -1.0 + 2.0 * k as f64 / (nt - 1) as f64 };
                let x = [i as f64 / ns as f64, j as f64 / ns as f64, t];
                (objective(b, which, x), x)
            })
        })
        .collect()
}

fn pattern_descent(f: impl Fn(Coord) -> f64, start: (f64, Coord), dirs: &[Coord], opts: &SolverOptions) -> (f64, Coord) {
    let (mut fx, mut x) = start;
    let mut step_u = 1.0 / opts.grid_s.max(1) as f64;
    let mut step_t = 2.0 / opts.grid_t.max(2) as f64;
    for _ in 0..opts.max_sweeps {
        let mut best = (fx, x);
        for d in dirs {
            for sgn in [1.0, -1.0] {
                let y = [
                    x[0] + sgn * d[0] * step_u,
                    x[1] + sgn * d[1] * step_u,
                    (x[2] + sgn * d[2] * step_t).clamp(-1.0, 1.0),
                ];
                let fy = f(y);
                if fy < best.0 {
                    best = (fy, y);
                }
            }
        }
        if best.0 < fx - opts.tol * fx.abs() {
            (fx, x) = best;
        } else {
            if best.0 < fx {
                (fx, x) = best;
            }
            step_u *= 0.5;
            step_t *= 0.5;
            if step_u < 1e-13 && step_t < 1e-13 {
                break;
            }
        }
    }
    (fx, x)
}

const R: f64 = std::f64::consts::FRAC_1_SQRT_2;
const FULL_DIRS: [Coord; 5] = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0], [R, R, 0.0], [R, -R, 0.0]];
const ENDPOINT_DIRS: [Coord; 4] = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [R, R, 0.0], [R, -R, 0.0]];

/// Normalized sagitta splitting the area in half for the given endpoints, if any.
/// Side A grows with the sagitta; arcs leaving the body count as overshooting.
fn half_area_sagitta(b: &Boundary, u1: f64, u2: f64) -> Option<f64> {
    let half = 0.5 * b.area;
    let side_a = |t: f64| split_exact(b, to_fence(b, [u1, u2, t])).ok().map(|s| s.area_a);
    let (mut lo, mut hi) = (-1.0f64, 1.0f64);
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        let above = match side_a(mid) {
            Some(a) => a > half,
            None => mid > 0.0,
        };
        if above {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let t = 0.5 * (lo + hi);
    let a = side_a(t)?;
    ((a - half).abs() <= 1e-9 * b.area).then_some(t)
}

/// Mu objective restricted to equal-area fences; the returned coordinate carries the solved sagitta.
fn equal_area_objective(b: &Boundary, x: Coord) -> (f64, Coord) {
    match half_area_sagitta(b, x[0], x[1]) {
        Some(t) => {
            let y = [x[0], x[1], t];
            (objective(b, Which::Mu1, y), y)
        }
        None => (f64::INFINITY, x),
    }
}

fn finish(b: &Boundary, which: Which, x: Coord) -> Result<FenceResult> {
    let (u1, u2) = (x[0].rem_euclid(1.0), x[1].rem_euclid(1.0));
    let x = if u1 <= u2 { [u1, u2, x[2]] } else { [u2, u1, -x[2]] };
    let fence = to_fence(b, x);
    let s = split_exact(b, fence)?;
    let value = split_value(which, b.area, &s);
    Ok(FenceResult {
        which,
        value,
        fence,
        area_e: s.area_a.min(s.area_b),
        area_comp: s.area_a.max(s.area_b),
        fence_length: s.length,
        contact_angles: contact_angles(b, &fence),
    })
}

fn contact_angles(b: &Boundary, f: &Fence) -> [f64; 2] {
    let d = b.point(f.s2) - b.point(f.s1);
    let c = d.norm();
    let half = 2.0 * (f.sagitta / (0.5 * c)).atan();
    let u = d * (1.0 / c);
    let line_angle = |v: Point, w: Point| v.dot(w).abs().min(1.0).acos();
    [line_angle(u.rotate(half), b.tangent(f.s1)), line_angle(u.rotate(-half), b.tangent(f.s2))]
}

/// Minimize the chosen objective over chords and arcs.
pub fn solve(body: &ConvexBody2D, which: Which, opts: &SolverOptions) -> Result<FenceResult> {
    body.validate()?;
    let b = Boundary::new(body);
    let mut cands = lattice(&b, which, opts.grid_s.max(3), opts.grid_t);
    cands.retain(|c| c.0.is_finite());
    if cands.is_empty() {
        return Err(Error::SolverFailed("no valid fence on the start lattice".into()));
    }
    cands.sort_by(candidate_cmp);
    cands.truncate(opts.starts.max(1));
    let mut refined: Vec<(f64, Coord)> = cands
        .par_iter()
        .map(|&c| pattern_descent(|y| objective(&b, which, y), c, &FULL_DIRS, opts))
        .collect();
    if which == Which::Mu1 {
        // The mu objective has a kink where both sides have equal area; search that ridge directly.
        let ridge: Vec<(f64, Coord)> = cands
            .par_iter()
            .map(|&(_, x)| {
                let start = equal_area_objective(&b, x);
                let (_, y) = pattern_descent(|y| equal_area_objective(&b, y).0, (start.0, x), &ENDPOINT_DIRS, opts);
                equal_area_objective(&b, y)
            })
            .collect();
        refined.extend(ridge);
    }
    let best = refined.into_iter().min_by(candidate_cmp).unwrap();
    if !best.0.is_finite() {
        return Err(Error::SolverFailed("refinement lost every candidate".into()));
    }
    finish(&b, which, best.1)
}

pub fn solve_sigma1(body: &ConvexBody2D, opts: &SolverOptions) -> Result<FenceResult> {
    solve(body, Which::Sigma1, opts)
}

pub fn solve_mu1(body: &ConvexBody2D, opts: &SolverOptions) -> Result<FenceResult> {
    solve(body, Which::Mu1, opts)
}

/// Exhaustive lattice minimum of the sigma objective: `resolution` boundary positions
/// (all pairs) times `resolution + 1` normalized sagittas, no refinement.
pub fn grid_oracle_sigma1(body: &ConvexBody2D, resolution: usize) -> f64 {
    let b = Boundary::new(body);
    lattice(&b, Which::Sigma1, resolution.max(3), resolution + 1)
        .into_iter()
        .map(|c| c.0)
        .fold(f64::INFINITY, f64::min)
}

/// Sigma constant of the unit-diameter disc truncated by a centered strip of half-width `rho`.
pub fn truncated_disc_sigma1_exact(rho: f64) -> Result<f64> {
    if !(rho > 0.0 && rho <= 0.5) {
        return Err(Error::DomainError(format!("rho = {rho} must lie in (0, 1/2]")));
    }
    let s = 2.0 * rho;
    Ok(8.0 * rho / (s * (1.0 - s * s).max(0.0).sqrt() + s.asin()))
}

/// Normalized excess `(sigma - 2) / rho^2` of the truncated disc as a function of
/// `theta = asin(2 rho)`.
pub fn truncated_disc_e_theta(theta: f64) -> Result<f64> {
    if !(theta > 0.0 && theta <= PI / 2.0) {
        return Err(Error::DomainError(format!("theta = {theta} must lie in (0, pi/2]")));
    }
    let (s, c) = theta.sin_cos();
    let half = (0.5 * theta).sin();
    let num = s * 2.0 * half * half - x_minus_sin(theta);
    Ok(8.0 * num / (s * s * (s * c + theta)))
}

/// The two auxiliary functions whose nonnegativity drives the monotonicity of the
/// truncated-disc excess. Returns `(f, g)`.
pub fn excess_auxiliaries(theta: f64) -> (f64, f64) {
    let (s, c) = theta.sin_cos();
    let f = 12.0 * s - 6.0 * s * c - 6.0 * theta - s.powi(3) * c - theta * s * s;
    let half = (0.5 * theta).sin();
    let g = 12.0 * half * half / s - 2.0 * s * c - theta;
    (f, g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn square() -> ConvexBody2D {
        ConvexBody2D::polygon(vec![
            Point::new(0.0, 0.0),
            Point::new(1.0, 0.0),
            Point::new(1.0, 1.0),
            Point::new(0.0, 1.0),
        ])
        .unwrap()
    }

    #[test]
    fn square_half_split() {
        let f = Fence { s1: 0.5, s2: 2.5, sagitta: 0.0 };
        let (e, c, l) = split(&square(), &f).unwrap();
        assert_abs_diff_eq!(e, 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(c, 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(l, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(sigma1_objective(&square(), &f).unwrap(), 2.0, epsilon = 1e-14);
    }

    #[test]
    fn disc_diameter_split() {
        let disc = ConvexBody2D::disc(Point::default(), 0.5).unwrap();
        let f = Fence { s1: 0.0, s2: PI / 2.0, sagitta: 0.0 };
        let (e, c, l) = split(&disc, &f).unwrap();
        assert_abs_diff_eq!(e, PI / 8.0, epsilon = 1e-14);
        assert_abs_diff_eq!(c, PI / 8.0, epsilon = 1e-14);
        assert_abs_diff_eq!(l, 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(sigma1_objective(&disc, &f).unwrap(), 8.0 / PI, epsilon = 1e-13);
        assert_abs_diff_eq!(mu1_objective(&disc, &f).unwrap(), 8.0 / PI, epsilon = 1e-13);
    }

    #[test]
    fn arc_areas_sum_to_disc_area() {
        let disc = ConvexBody2D::disc(Point::default(), 0.5).unwrap();
        let f = Fence { s1: 0.1, s2: 1.0, sagitta: -0.05 };
        let (e, c, _) = split(&disc, &f).unwrap();
        assert_abs_diff_eq!(e + c, PI / 4.0, epsilon = 1e-14);
    }

    #[test]
    fn arc_leaving_body_is_rejected() {
        // A full half-circle bulge on a short chord near a square edge pokes out.
        let f = Fence { s1: 0.2, s2: 3.8, sagitta: 0.3 };
        assert!(matches!(split(&square(), &f), Err(Error::InvalidFence(_))));
    }

    #[test]
    fn x_minus_sin_is_continuous() {
        for x in [1e-6, 1e-3, 0.0999999, 0.1, 0.5] {
            assert_abs_diff_eq!(x_minus_sin(x), x - x.sin(), epsilon = 1e-15_f64.max(1e-12 * x * x * x));
        }
    }

    #[test]
    fn truncated_boundary_matches_body() {
        let body = ConvexBody2D::truncated_disc(Point::new(0.3, -0.2), 0.5, 0.2).unwrap();
        let b = Boundary::new(&body);
        assert_abs_diff_eq!(b.area(), body.area(), epsilon = 1e-14);
        assert_abs_diff_eq!(b.perimeter(), body.perimeter(), epsilon = 1e-14);
    }
}
