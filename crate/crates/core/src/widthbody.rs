//! Unit-width bodies described by their curvature function.
//!
//! A [`CurvatureFn`] is piecewise constant on the cells `[θ_k, θ_{k+1})` of a uniform
//! angle grid. Each cell is then an exact circular arc of radius `r_k`, so the boundary,
//! support function, area and shape derivative are all evaluated in closed form per cell.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::convex2d::{polygon_from_points, ConvexBody2D, Point};
use crate::error::{Error, Result};

pub const DEFAULT_GRID: usize = 4096;
pub const ANTISYMMETRY_TOL: f64 = 1e-12;
pub const BARYCENTER_TOL: f64 = 1e-10;
pub const CLOSURE_TOL: f64 = 1e-8;
/// Highest harmonic kept in [`SupportFn::coefficients`].
pub const FOURIER_ORDER: usize = 64;
const PROJECTION_BUDGET: usize = 500;

fn unit(angle: f64) -> Point {
    Point::new(angle.cos(), angle.sin())
}

/// `∫_a^b (cos t, sin t) dt`.
fn unit_integral(a: f64, b: f64) -> Point {
    Point::new(b.sin() - a.sin(), a.cos() - b.cos())
}

/// Sampled curvature function of a unit-width body.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurvatureFn {
    samples: Vec<f64>,
}

impl CurvatureFn {
    /// Validated constructor: grid even, values in `[0,1]`, antisymmetric and centered.
    pub fn new(samples: Vec<f64>) -> Result<Self> {
        let r = CurvatureFn::from_samples_unchecked(samples)?;
        r.check()?;
        Ok(r)
    }

    /// Builds a sampled function without the class checks (grid shape is still checked).
    pub fn from_samples_unchecked(samples: Vec<f64>) -> Result<Self> {
        if samples.len() < 4 || samples.len() % 2 != 0 {
            return Err(Error::DegenerateInput(format!("grid size {} must be even and >= 4", samples.len())));
        }
        if samples.iter().any(|v| !v.is_finite()) {
            return Err(Error::DegenerateInput("non-finite curvature sample".into()));
        }
        Ok(CurvatureFn { samples })
    }

    /// The ball of unit diameter.
    pub fn ball(m: usize) -> Result<Self> {
        CurvatureFn::new(vec![0.5; m])
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Angular cell size `2π/M`.
    pub fn step(&self) -> f64 {
        2.0 * PI / self.len() as f64
    }

    pub fn angle(&self, k: usize) -> f64 {
        2.0 * PI * k as f64 / self.len() as f64
    }

    /// Point-sum barycenter `Σ r_k (cos θ_k, sin θ_k)·(2π/M)`.
    pub fn barycenter(&self) -> Point {
        let d = self.step();
        self.samples
            .iter()
            .enumerate()
            .fold(Point::default(), |acc, (k, &v)| acc + unit(self.angle(k)) * (v * d))
    }

    /// Barycenter of the piecewise-constant function integrated exactly over cells.
    pub fn barycenter_exact(&self) -> Point {
        self.samples.iter().enumerate().fold(Point::default(), |acc, (k, &v)| {
            acc + unit_integral(self.angle(k), self.angle(k + 1)) * v
        })
    }

    pub fn antisymmetry_defect(&self) -> f64 {
        let h = self.len() / 2;
        (0..h).map(|k| (self.samples[k] + self.samples[k + h] - 1.0).abs()).fold(0.0, f64::max)
    }

    /// `∫ r dθ`, equal to π for class members.
    pub fn integral(&self) -> f64 {
        self.samples.iter().sum::<f64>() * self.step()
    }

    /// `∫ |r − 1/2| dθ`, the L¹ distance to the ball.
    pub fn l1_distance_to_ball(&self) -> f64 {
        self.samples.iter().map(|v| (v - 0.5).abs()).sum::<f64>() * self.step()
    }

    pub fn check(&self) -> Result<()> {
        if self.samples.iter().any(|&v| !(0.0..=1.0).contains(&v)) {
            return Err(Error::DegenerateInput("curvature samples must lie in [0,1]".into()));
        }
        let a = self.antisymmetry_defect();
        if a > ANTISYMMETRY_TOL {
            return Err(Error::DegenerateInput(format!("antisymmetry defect {a:e}")));
        }
        let b = self.barycenter();
        if b.x.abs() > BARYCENTER_TOL || b.y.abs() > BARYCENTER_TOL {
            return Err(Error::DegenerateInput(format!("barycenter ({:e}, {:e})", b.x, b.y)));
        }
        Ok(())
    }
}

/// Clamp, symmetrize and re-center raw samples until they form a class member.
pub fn project_to_unit_width(raw: &[f64]) -> Result<CurvatureFn> {
    let mut r = CurvatureFn::from_samples_unchecked(raw.iter().map(|v| v.clamp(0.0, 1.0)).collect())?;
    let m = r.len();
    let h = m / 2;
    let symmetrize = |s: &mut Vec<f64>| {
        for k in 0..h {
            let v = 0.5 * (s[k] + 1.0 - s[k + h]);
            s[k] = v;
            s[k + h] = 1.0 - v;
        }
    };
    symmetrize(&mut r.samples);
    for _ in 0..PROJECTION_BUDGET {
        let b = r.barycenter();
        if b.x.abs() <= 0.01 * BARYCENTER_TOL && b.y.abs() <= 0.01 * BARYCENTER_TOL {
            break;
        }
        // Removing the first harmonic keeps antisymmetry since cos and sin are odd under θ ↦ θ+π.
        let (ax, ay) = (b.x / PI, b.y / PI);
        for k in 0..m {
            let t = r.angle(k);
            r.samples[k] = (r.samples[k] - ax * t.cos() - ay * t.sin()).clamp(0.0, 1.0);
        }
        symmetrize(&mut r.samples);
    }
    r.check().map_err(|e| Error::ProjectionFailed(e.to_string()))?;
    Ok(r)
}

/// Grid used by [`reuleaux`]: the smallest multiple of `4n` not below [`DEFAULT_GRID`],
/// so arcs align with cells and corner bisectors fall on grid angles.
pub fn reuleaux_grid(n: usize) -> usize {
    DEFAULT_GRID.div_ceil(4 * n) * 4 * n
}

pub fn reuleaux(n: usize) -> Result<CurvatureFn> {
    if n < 3 || n % 2 == 0 {
        return Err(Error::InvalidOrder(n));
    }
    reuleaux_with_grid(n, reuleaux_grid(n))
}

/// Reuleaux polygon: `r = 1` on `n` arcs of length `π/n` alternating with `r = 0`.
pub fn reuleaux_with_grid(n: usize, m: usize) -> Result<CurvatureFn> {
    if n < 3 || n % 2 == 0 {
        return Err(Error::InvalidOrder(n));
    }
    if m % (2 * n) != 0 {
        return Err(Error::DegenerateInput(format!("grid {m} is not a multiple of {}", 2 * n)));
    }
    let per_arc = m / (2 * n);
    CurvatureFn::new((0..m).map(|k| if (k / per_arc) % 2 == 0 { 1.0 } else { 0.0 }).collect())
}

/// Grid index of the bisector of the first corner of [`reuleaux`]`(n)`.
pub fn reuleaux_corner_index(n: usize, m: usize) -> usize {
    // First corner spans normals [π/n, 2π/n).
    3 * m / (4 * n)
}

/// Random class member: the ball plus random odd harmonics of order ≥ 3, projected.
pub fn random_unit_width(seed: u64, m: usize, max_harmonic: usize, amplitude: f64) -> Result<CurvatureFn> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let harmonics: Vec<(f64, f64, f64)> = (3..=max_harmonic.max(3))
        .step_by(2)
        .map(|n| {
            let a = amplitude * (2.0 * rng.random::<f64>() - 1.0) / n as f64;
            let b = amplitude * (2.0 * rng.random::<f64>() - 1.0) / n as f64;
            (n as f64, a, b)
        })
        .collect();
    let raw: Vec<f64> = (0..m)
        .map(|k| {
            let t = 2.0 * PI * k as f64 / m as f64;
            0.5 + harmonics.iter().map(|&(n, a, b)| a * (n * t).cos() + b * (n * t).sin()).sum::<f64>()
        })
        .collect();
    project_to_unit_width(&raw)
}

/// Boundary points `γ(θ_k)`, integrating each cell exactly as an arc of radius `r_k`.
/// Returns the open list `γ_0 … γ_{M−1}` and checks the closure defect.
pub fn reconstruct_boundary(r: &CurvatureFn, start: Point) -> Result<Vec<Point>> {
    reconstruct_boundary_with_tol(r, start, CLOSURE_TOL)
}

pub fn reconstruct_boundary_with_tol(r: &CurvatureFn, start: Point, tol: f64) -> Result<Vec<Point>> {
    let (pts, end) = integrate_boundary(r, start);
    let defect = end.dist(start);
    if !(defect <= tol) {
        return Err(Error::ClosureViolation { defect, tol });
    }
    Ok(pts)
}

fn integrate_boundary(r: &CurvatureFn, start: Point) -> (Vec<Point>, Point) {
    let m = r.len();
    let mut pts = Vec::with_capacity(m);
    let mut p = start;
    let mut prev = unit(0.0);
    for k in 0..m {
        pts.push(p);
        let next = unit(r.angle(k + 1));
        // ∫ r (−sin t, cos t) dt over the cell.
        p = p + (next - prev) * r.samples[k];
        prev = next;
    }
    (pts, p)
}

/// The body bounded by the reconstructed boundary, as a polygon on the grid vertices.
pub fn to_body(r: &CurvatureFn) -> Result<ConvexBody2D> {
    polygon_from_points(&reconstruct_boundary(r, Point::default())?)
}

/// A circular arc (or a corner when `radius == 0`) parameterized by the outward normal angle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ArcPiece {
    pub center: Point,
    pub radius: f64,
    pub from: f64,
    pub to: f64,
}

impl ArcPiece {
    pub fn point(&self, angle: f64) -> Point {
        self.center + unit(angle) * self.radius
    }
    pub fn start(&self) -> Point {
        self.point(self.from)
    }
    pub fn end(&self) -> Point {
        self.point(self.to)
    }
    /// `∫ (x − o) × dx` along the piece.
    pub fn cross_integral(&self, origin: Point) -> f64 {
        let c = self.center - origin;
        let (a, b, rr) = (self.from, self.to, self.radius);
        rr * rr * (b - a) + rr * (c.x * (b.sin() - a.sin()) - c.y * (b.cos() - a.cos()))
    }
}

/// A boundary curve made of arcs and corners, listed by increasing normal angle.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
pub struct ArcChain {
    pub pieces: Vec<ArcPiece>,
}

impl ArcChain {
    pub fn cross_integral(&self, origin: Point) -> f64 {
        self.pieces.iter().map(|p| p.cross_integral(origin)).sum()
    }

    /// Enclosed area of a closed chain.
    pub fn area(&self) -> f64 {
        let o = self.pieces.first().map(|p| p.start()).unwrap_or_default();
        0.5 * self.cross_integral(o)
    }

    /// Polyline through the chain with at most `max_step` radians between samples on arcs.
    pub fn sample(&self, max_step: f64) -> Vec<Point> {
        let mut pts: Vec<Point> = Vec::new();
        for p in &self.pieces {
            let span = p.to - p.from;
            let n = if p.radius > 0.0 { (span / max_step).ceil().max(1.0) as usize } else { 0 };
            for i in 0..=n {
                let t = if n == 0 { p.from } else { p.from + span * i as f64 / n as f64 };
                let q = p.point(t);
                if pts.last().is_none_or(|l| l.dist(q) > 1e-15) {
                    pts.push(q);
                }
            }
        }
        if pts.len() > 1 && pts[0].dist(*pts.last().unwrap()) <= 1e-15 {
            pts.pop();
        }
        pts
    }
}

/// Exact arc decomposition of the body, one piece per cell.
pub fn arc_chain(r: &CurvatureFn, start: Point) -> ArcChain {
    let (pts, _) = integrate_boundary(r, start);
    ArcChain {
        pieces: (0..r.len())
            .map(|k| {
                let rad = r.samples[k];
                ArcPiece { center: pts[k] - unit(r.angle(k)) * rad, radius: rad, from: r.angle(k), to: r.angle(k + 1) }
            })
            .collect(),
    }
}

/// Sampled support function with cached low-order Fourier coefficients.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SupportFn {
    samples: Vec<f64>,
    /// `(a_n, b_n)` for `n = 0..=FOURIER_ORDER`, with `h ≈ a_0 + Σ a_n cos nθ + b_n sin nθ`.
    coefficients: Vec<(f64, f64)>,
}

impl SupportFn {
    pub fn samples(&self) -> &[f64] {
        &self.samples
    }
    pub fn coefficients(&self) -> &[(f64, f64)] {
        &self.coefficients
    }
    /// Truncated Fourier evaluation.
    pub fn value_fourier(&self, theta: f64) -> f64 {
        self.coefficients
            .iter()
            .enumerate()
            .map(|(n, &(a, b))| a * (n as f64 * theta).cos() + b * (n as f64 * theta).sin())
            .sum()
    }
}

/// Cell data shared by the support function, volume and shape derivative:
/// arc centers relative to the Steiner point.
struct CenteredCells {
    centers: Vec<Point>,
    vertices: Vec<Point>,
}

fn centered_cells(r: &CurvatureFn) -> CenteredCells {
    let chain = arc_chain(r, Point::default());
    let d = r.step();
    let mut steiner = Point::default();
    for p in &chain.pieces {
        steiner = steiner + p.center * d + unit_integral(p.from, p.to) * p.radius;
    }
    steiner = steiner * (1.0 / (2.0 * PI));
    CenteredCells {
        centers: chain.pieces.iter().map(|p| p.center - steiner).collect(),
        vertices: chain.pieces.iter().map(|p| p.start() - steiner).collect(),
    }
}

/// `∫_cell h dθ` for the support function centered at the Steiner point.
fn cell_support_integrals(r: &CurvatureFn, cells: &CenteredCells) -> Vec<f64> {
    (0..r.len())
        .map(|k| cells.centers[k].dot(unit_integral(r.angle(k), r.angle(k + 1))) + r.samples[k] * r.step())
        .collect()
}

/// Solution of `h + h'' = r` with vanishing first harmonics (Steiner-point gauge).
pub fn support_function(r: &CurvatureFn) -> SupportFn {
    let cells = centered_cells(r);
    let samples = (0..r.len()).map(|k| cells.vertices[k].dot(unit(r.angle(k)))).collect();
    let mut coefficients = vec![(0.0, 0.0); FOURIER_ORDER + 1];
    coefficients[0] = (r.integral() / (2.0 * PI), 0.0);
    for (n, c) in coefficients.iter_mut().enumerate().skip(2) {
        let nf = n as f64;
        let (mut a, mut b) = (0.0, 0.0);
        for (k, &v) in r.samples.iter().enumerate() {
            let (t0, t1) = (nf * r.angle(k), nf * r.angle(k + 1));
            a += v * (t1.sin() - t0.sin());
            b += v * (t0.cos() - t1.cos());
        }
        let scale = 1.0 / (PI * nf * (1.0 - nf * nf));
        *c = (a * scale, b * scale);
    }
    SupportFn { samples, coefficients }
}

/// Pointwise convex combination `(1 − eps) r1 + eps r2`.
pub fn blaschke_combine(r1: &CurvatureFn, r2: &CurvatureFn, eps: f64) -> Result<CurvatureFn> {
    if r1.len() != r2.len() {
        return Err(Error::DegenerateInput("curvature grids differ".into()));
    }
    if !(0.0..=1.0).contains(&eps) {
        return Err(Error::DomainError(format!("eps = {eps} outside [0,1]")));
    }
    let samples = r1.samples.iter().zip(&r2.samples).map(|(a, b)| (1.0 - eps) * a + eps * b).collect();
    Ok(CurvatureFn { samples })
}

/// Area `(1/2)∫ h r dθ`, exact for the arc body.
pub fn volume(r: &CurvatureFn) -> f64 {
    let cells = centered_cells(r);
    0.5 * cell_support_integrals(r, &cells).iter().zip(&r.samples).map(|(i, v)| i * v).sum::<f64>()
}

/// First variation `∫ h_r (φ − r) dθ` of the area along the combination towards `phi`.
pub fn volume_shape_derivative(r: &CurvatureFn, phi: &CurvatureFn) -> Result<f64> {
    if r.len() != phi.len() {
        return Err(Error::DegenerateInput("curvature grids differ".into()));
    }
    let cells = centered_cells(r);
    Ok(cell_support_integrals(r, &cells)
        .iter()
        .zip(r.samples.iter().zip(&phi.samples))
        .map(|(i, (a, b))| i * (b - a))
        .sum())
}

/// Balancing profile: `r̄ = a_E²/(a_E² + a_C²)` on the normals within `theta` of 0,
/// `1 − r̄` on those within `theta` of π, and `1/2` elsewhere. Returned without projection;
/// its exact barycenter is `(2(2r̄ − 1) sin θ_q, 0)` with `θ_q` the grid-rounded angle.
pub fn balancing_profile(area_e: f64, area_comp: f64, theta: f64, m: usize) -> Result<CurvatureFn> {
    if !(area_e > 0.0 && area_comp > 0.0) {
        return Err(Error::DomainError("areas must be positive".into()));
    }
    if !(theta > 0.0 && theta < PI) {
        return Err(Error::DomainError(format!("theta = {theta} outside (0, π)")));
    }
    if m < 4 || m % 2 != 0 {
        return Err(Error::DegenerateInput(format!("grid size {m}")));
    }
    let rbar = area_e * area_e / (area_e * area_e + area_comp * area_comp);
    let q = ((theta / (2.0 * PI / m as f64)).round() as usize).min(m / 2);
    let h = m / 2;
    let samples = (0..m)
        .map(|k| {
            if k < q || k >= m - q {
                rbar
            } else if (h - q..h + q).contains(&k) {
                1.0 - rbar
            } else {
                0.5
            }
        })
        .collect();
    CurvatureFn::from_samples_unchecked(samples)
}

/// Angles and areas measured by [`singular_perturb`]. Angles are in the frame where the
/// chosen zero direction is `(1,0)` and its diametral point is the origin.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PerturbDiagnostics {
    /// Polar angle of the upper contact point about the shifted center `(−eps, 0)`.
    pub theta_eps: f64,
    /// Outward normal angle of the original boundary at the upper contact point.
    pub normal_theta_eps: f64,
    /// Solution of `cos(ω + θ) = cos θ − eps`.
    pub omega_eps: f64,
    pub lower_theta_eps: f64,
    pub lower_normal_theta_eps: f64,
    /// `|Ω_ε ∖ Ω|`.
    pub area_gain: f64,
    /// `|Ω ∖ Ω_ε|`.
    pub area_loss: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PerturbResult {
    pub diagnostics: PerturbDiagnostics,
    pub original: ArcChain,
    pub perturbed: ArcChain,
    /// Sampled boundary of the perturbed body.
    pub boundary: Vec<Point>,
}

/// Circle-circle intersection point closest to the angular window `[a, b]` about `c1`.
fn circle_meet(c1: Point, r1: f64, c2: Point, r2: f64, a: f64, b: f64) -> Option<Point> {
    let e = c2 - c1;
    let d = e.norm();
    if !(d > 0.0) {
        return None;
    }
    let along = (r1 * r1 - r2 * r2 + d * d) / (2.0 * d);
    let h2 = r1 * r1 - along * along;
    if h2 < -1e-14 {
        return None;
    }
    let h = h2.max(0.0).sqrt();
    let u = e * (1.0 / d);
    let base = c1 + u * along;
    let mid = 0.5 * (a + b);
    let miss = |p: Point| {
        let ang = (p - c1).y.atan2((p - c1).x);
        let mut diff = (ang - mid).rem_euclid(2.0 * PI);
        if diff > PI {
            diff -= 2.0 * PI;
        }
        (diff.abs() - 0.5 * (b - a)).max(0.0)
    };
    let p1 = base + u.perp() * h;
    let p2 = base - u.perp() * h;
    Some(if miss(p1) <= miss(p2) { p1 } else { p2 })
}

/// Corner-cutting perturbation at a zero of the curvature function.
///
/// The corner at the normal `ξ₀ = ξ(θ_{xi0_index})` is cut by the unit circle centered at
/// `(−eps, 0)` (frame: `ξ₀ = (1,0)`, diametral point at the origin), and the opposite side
/// gains a new corner at `(−eps, 0)` joined by unit arcs centered at the two contact points.
/// The result again has constant width 1. Areas are exact arc integrals.
pub fn singular_perturb(r: &CurvatureFn, xi0_index: usize, eps: f64) -> Result<PerturbResult> {
    let m = r.len();
    if xi0_index >= m {
        return Err(Error::DomainError(format!("index {xi0_index} outside grid of {m}")));
    }
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::DomainError(format!("eps = {eps} must lie in (0, 1)")));
    }
    let window: f64 = (0..4).map(|i| r.samples[(xi0_index + m - 2 + i) % m]).sum::<f64>() / 4.0;
    if window >= 1e-3 {
        return Err(Error::NotAZeroPoint(format!("mean curvature {window:e} near index {xi0_index}")));
    }
    let d = r.step();
    let half = m / 2;
    // Boundary in the perturbation frame, indexed by the cell offset j from xi0_index.
    let (raw, end) = integrate_boundary(r, Point::default());
    let defect = end.norm();
    if defect > CLOSURE_TOL {
        return Err(Error::ClosureViolation { defect, tol: CLOSURE_TOL });
    }
    let rot = -r.angle(xi0_index);
    let origin = raw[(xi0_index + half) % m];
    let vertex = |j: i64| -> Point {
        let k = (xi0_index as i64 + j).rem_euclid(m as i64) as usize;
        (raw[k] - origin).rotate(rot)
    };
    let radius = |j: i64| -> f64 { r.samples[(xi0_index as i64 + j).rem_euclid(m as i64) as usize] };
    let cell = |j: i64| -> ArcPiece {
        let rad = radius(j);
        let from = j as f64 * d;
        ArcPiece { center: vertex(j) - unit(from) * rad, radius: rad, from, to: from + d }
    };
    let original = ArcChain { pieces: (0..m as i64).map(cell).collect() };
    let shifted = Point::new(-eps, 0.0);
    let outside = |p: Point| (p - shifted).dot(p - shifted) - 1.0;

    let quarter = (m / 4) as i64;
    let upper = (0..quarter)
        .find(|&j| radius(j) > 0.0 && outside(vertex(j)) > 0.0 && outside(vertex(j + 1)) <= 0.0)
        .ok_or_else(|| Error::NoIntersection(format!("upper side, eps = {eps}")))?;
    let lower = (1..=quarter)
        .map(|i| -i)
        .find(|&j| radius(j) > 0.0 && outside(vertex(j + 1)) > 0.0 && outside(vertex(j)) <= 0.0)
        .ok_or_else(|| Error::NoIntersection(format!("lower side, eps = {eps}")))?;
    let meet = |j: i64| -> Result<(Point, f64)> {
        let c = cell(j);
        let p = circle_meet(c.center, c.radius, shifted, 1.0, c.from, c.to)
            .ok_or_else(|| Error::NoIntersection(format!("cell {j}, eps = {eps}")))?;
        let ang = (p - c.center).y.atan2((p - c.center).x);
        let ang = ang + 2.0 * PI * ((c.from - ang) / (2.0 * PI)).round();
        Ok((p, ang.clamp(c.from, c.to)))
    };
    let (p_up, normal_up) = meet(upper)?;
    let (p_lo, normal_lo) = meet(lower)?;
    let theta_up = p_up.y.atan2(p_up.x + eps);
    let theta_lo = p_lo.y.atan2(p_lo.x + eps);
    let in_quadrant = |a: f64| a > 0.0 && a < 0.5 * PI;
    if !(in_quadrant(theta_up) && in_quadrant(normal_up) && in_quadrant(-theta_lo) && in_quadrant(-normal_lo)) {
        return Err(Error::NoIntersection(format!("contact angles leave (0, π/2) at eps = {eps}")));
    }
    let omega = ((theta_up.cos() - eps).clamp(-1.0, 1.0)).acos() - theta_up;

    // Original boundary between two normal angles, splitting cells at the ends.
    let between = |a: f64, b: f64| -> Vec<ArcPiece> {
        let j0 = (a / d).floor() as i64;
        let j1 = (b / d).ceil() as i64;
        (j0..j1)
            .filter_map(|j| {
                let mut c = cell(j);
                c.from = c.from.max(a);
                c.to = c.to.min(b);
                (c.to > c.from).then_some(c)
            })
            .collect()
    };
    let corner = |p: Point, from: f64, to: f64| ArcPiece { center: p, radius: 0.0, from, to };
    let unit_arc = |c: Point, from: f64, to: f64| ArcPiece { center: c, radius: 1.0, from, to };

    let cut_arc = unit_arc(shifted, theta_lo, theta_up);
    let arc_lo = unit_arc(p_lo, normal_lo + PI, theta_lo + PI);
    let arc_up = unit_arc(p_up, theta_up + PI, normal_up + PI);
    let mut pieces = vec![corner(p_lo, normal_lo, theta_lo), cut_arc, corner(p_up, theta_up, normal_up)];
    pieces.extend(between(normal_up, normal_lo + PI));
    pieces.extend([arc_lo, corner(shifted, theta_lo + PI, theta_up + PI), arc_up]);
    pieces.extend(between(normal_up + PI, normal_lo + 2.0 * PI));
    let perturbed = ArcChain { pieces };

    let tip = Point::new(1.0, 0.0);
    let tip_path = ArcChain { pieces: between(normal_lo, normal_up) };
    let area_loss = 0.5 * (tip_path.cross_integral(tip) - cut_arc.cross_integral(tip));
    let back_path = ArcChain { pieces: between(normal_lo + PI, normal_up + PI) };
    let new_back = arc_lo.cross_integral(Point::default()) + arc_up.cross_integral(Point::default());
    let area_gain = 0.5 * (new_back - back_path.cross_integral(Point::default()));

    let boundary = perturbed.sample(d.min(omega.max(1e-9) / 64.0).max(1e-7));
    Ok(PerturbResult {
        diagnostics: PerturbDiagnostics {
            theta_eps: theta_up,
            normal_theta_eps: normal_up,
            omega_eps: omega,
            lower_theta_eps: theta_lo,
            lower_normal_theta_eps: normal_lo,
            area_gain,
            area_loss,
        },
        original,
        perturbed,
        boundary,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn constant_half_is_fixed_point() {
        let r = project_to_unit_width(&vec![0.5; 64]).unwrap();
        assert!(r.samples().iter().all(|&v| v == 0.5));
    }

    #[test]
    fn constant_seven_tenths_symmetrizes_to_half() {
        let r = project_to_unit_width(&vec![0.7; 64]).unwrap();
        assert!(r.samples().iter().all(|&v| (v - 0.5).abs() < 1e-15));
    }

    #[test]
    fn reuleaux_pattern_is_fixed() {
        let r = reuleaux(3).unwrap();
        let p = project_to_unit_width(r.samples()).unwrap();
        assert_eq!(p, r);
    }

    #[test]
    fn reuleaux_rejects_even_order() {
        assert_eq!(reuleaux(4), Err(Error::InvalidOrder(4)));
        assert_eq!(reuleaux(1), Err(Error::InvalidOrder(1)));
    }

    #[test]
    fn ball_reconstructs_circle() {
        let r = CurvatureFn::ball(512).unwrap();
        let pts = reconstruct_boundary(&r, Point::new(0.5, 0.0)).unwrap();
        for p in pts {
            assert_abs_diff_eq!(p.norm(), 0.5, epsilon = 1e-12);
        }
    }

    #[test]
    fn reuleaux_triangle_area_and_width() {
        let r = reuleaux(3).unwrap();
        let exact = (PI - 3f64.sqrt()) / 2.0;
        assert_abs_diff_eq!(volume(&r), exact, epsilon = 1e-12);
        assert_abs_diff_eq!(arc_chain(&r, Point::default()).area(), exact, epsilon = 1e-12);
        let body = to_body(&r).unwrap();
        let ConvexBody2D::Polygon { vertices } = &body else { panic!() };
        assert_eq!(vertices.len(), r.len() / 2);
        assert_abs_diff_eq!(body.diameter(), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(body.min_width(), 1.0, epsilon = 2.0 * PI / r.len() as f64);
    }

    #[test]
    fn broken_barycenter_does_not_close() {
        let mut s = vec![0.5; 256];
        for v in s.iter_mut().take(32) {
            *v = 0.9;
        }
        for v in s.iter_mut().skip(128).take(32) {
            *v = 0.1;
        }
        let r = CurvatureFn::from_samples_unchecked(s).unwrap();
        assert!(matches!(reconstruct_boundary(&r, Point::default()), Err(Error::ClosureViolation { .. })));
    }

    #[test]
    fn support_of_ball_is_half() {
        let h = support_function(&CurvatureFn::ball(256).unwrap());
        assert!(h.samples().iter().all(|v| (v - 0.5).abs() < 1e-12));
    }

    #[test]
    fn reuleaux_support_extremes_match_vertex_maximization() {
        let r = reuleaux(3).unwrap();
        let h = support_function(&r);
        let lo = h.samples().iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = h.samples().iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        assert_abs_diff_eq!(lo, 1.0 - 1.0 / 3f64.sqrt(), epsilon = 1e-6);
        assert_abs_diff_eq!(hi, 1.0 / 3f64.sqrt(), epsilon = 1e-12);
        // Direct oracle: maximize x·ξ over the Steiner-centered boundary vertices.
        let pts = reconstruct_boundary(&r, Point::default()).unwrap();
        let c = pts.iter().fold(Point::default(), |a, &p| a + p) * (1.0 / pts.len() as f64);
        for k in (0..r.len()).step_by(37) {
            let u = unit(r.angle(k));
            let direct = pts.iter().map(|&p| (p - c).dot(u)).fold(f64::NEG_INFINITY, f64::max);
            assert_abs_diff_eq!(direct, h.samples()[k], epsilon = 1e-9);
        }
    }

    #[test]
    fn blaschke_midpoint_values() {
        let r = reuleaux(3).unwrap();
        let b = CurvatureFn::ball(r.len()).unwrap();
        let mid = blaschke_combine(&r, &b, 0.5).unwrap();
        assert!(mid.samples().iter().all(|&v| v == 0.25 || v == 0.75));
        assert_eq!(blaschke_combine(&r, &b, 0.0).unwrap(), r);
        assert_eq!(blaschke_combine(&r, &b, 1.0).unwrap(), b);
        let (vr, vb, vm) = (volume(&r), volume(&b), volume(&mid));
        assert!(vr < vm && vm < vb);
    }

    #[test]
    fn shape_derivative_trivial_cases() {
        let r = reuleaux(3).unwrap();
        let b = CurvatureFn::ball(r.len()).unwrap();
        assert_eq!(volume_shape_derivative(&r, &r).unwrap(), 0.0);
        assert_abs_diff_eq!(volume_shape_derivative(&b, &r).unwrap(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn profile_balanced_is_ball() {
        let p = balancing_profile(1.0, 1.0, PI / 3.0, 600).unwrap();
        assert!(p.samples().iter().all(|&v| v == 0.5));
        assert!(p.check().is_ok());
    }

    #[test]
    fn profile_residual_formula() {
        let m = 600;
        let p = balancing_profile(1.0, 2.0, PI / 3.0, m).unwrap();
        assert!(p.antisymmetry_defect() < 1e-15);
        let rbar = 0.2;
        let b = p.barycenter_exact();
        assert_abs_diff_eq!(b.x, 2.0 * (2.0 * rbar - 1.0) * (PI / 3.0).sin(), epsilon = 1e-12);
        assert_abs_diff_eq!(b.y, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn perturbation_frame_sanity() {
        let r = reuleaux(3).unwrap();
        let k0 = reuleaux_corner_index(3, r.len());
        let out = singular_perturb(&r, k0, 1e-3).unwrap();
        let dg = out.diagnostics;
        assert_abs_diff_eq!(dg.normal_theta_eps, PI / 6.0, epsilon = 5e-3);
        assert_abs_diff_eq!(dg.theta_eps, -dg.lower_theta_eps, epsilon = 1e-12);
        assert_abs_diff_eq!(out.original.area(), volume(&r), epsilon = 1e-12);
        // Net change equals gain minus loss.
        assert_abs_diff_eq!(
            out.perturbed.area() - out.original.area(),
            dg.area_gain - dg.area_loss,
            epsilon = 1e-12
        );
        assert!(dg.area_gain > dg.area_loss);
    }

    #[test]
    fn perturbation_rejects_nonzero_point() {
        let r = reuleaux(3).unwrap();
        assert!(matches!(singular_perturb(&r, 5, 1e-3), Err(Error::NotAZeroPoint(_))));
    }
}
