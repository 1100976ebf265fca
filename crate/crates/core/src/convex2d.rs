//! Convex planar bodies and their scalar functionals.

use std::f64::consts::PI;
use std::ops::{Add, Mul, Neg, Sub};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default number of boundary samples used when a disc kind is polygonized.
pub const DEFAULT_RESOLUTION: usize = 1024;
/// Boundary samples used by [`clip_with_strip`] for disc kinds.
pub const CLIP_RESOLUTION: usize = 8192;
/// Bodies thinner than this are rejected.
pub const MIN_INRADIUS: f64 = 1e-8;
/// Attempts made by [`random_convex`] before giving up.
pub const RANDOM_RETRY_BUDGET: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }
    pub fn polar(r: f64, angle: f64) -> Self {
        Point::new(r * angle.cos(), r * angle.sin())
    }
    pub fn dot(self, o: Point) -> f64 {
        self.x * o.x + self.y * o.y
    }
    pub fn cross(self, o: Point) -> f64 {
        self.x * o.y - self.y * o.x
    }
    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }
    pub fn dist(self, o: Point) -> f64 {
        (self - o).norm()
    }
    /// Counter-clockwise rotation by a quarter turn.
    pub fn perp(self) -> Point {
        Point::new(-self.y, self.x)
    }
    pub fn rotate(self, angle: f64) -> Point {
        let (s, c) = angle.sin_cos();
        Point::new(c * self.x - s * self.y, s * self.x + c * self.y)
    }
    pub fn lerp(self, o: Point, t: f64) -> Point {
        self + (o - self) * t
    }
}

impl Add for Point {
    type Output = Point;
    fn add(self, o: Point) -> Point {
        Point::new(self.x + o.x, self.y + o.y)
    }
}
impl Sub for Point {
    type Output = Point;
    fn sub(self, o: Point) -> Point {
        Point::new(self.x - o.x, self.y - o.y)
    }
}
impl Mul<f64> for Point {
    type Output = Point;
    fn mul(self, t: f64) -> Point {
        Point::new(self.x * t, self.y * t)
    }
}
impl Neg for Point {
    type Output = Point;
    fn neg(self) -> Point {
        Point::new(-self.x, -self.y)
    }
}

/// Twice the signed area of a closed polyline.
pub fn shoelace2(points: &[Point]) -> f64 {
    let n = points.len();
    (0..n).map(|i| points[i].cross(points[(i + 1) % n])).sum()
}

/// Signed area of a closed polyline (positive when counter-clockwise).
pub fn polygon_area(points: &[Point]) -> f64 {
    0.5 * shoelace2(points)
}

/// A convex planar domain.
///
/// The truncated disc is the disc intersected with the horizontal strip
/// `|y - center.y| <= half_strip_width`, so its diameter lies along the x axis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ConvexBody2D {
    Polygon {
        vertices: Vec<Point>,
    },
    Disc {
        center: Point,
        radius: f64,
    },
    TruncatedDisc {
        center: Point,
        radius: f64,
        half_strip_width: f64,
    },
}

/// Two half-planes `normal · x <= offset` whose intersection is the strip.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Strip {
    pub lines: [(Point, f64); 2],
    pub parallel: bool,
}

impl Strip {
    /// The region `lo <= normal · x <= hi`; `normal` need not be unit.
    pub fn parallel(normal: Point, lo: f64, hi: f64) -> Result<Self> {
        let len = normal.norm();
        if !(len > 0.0) || !(lo < hi) {
            return Err(Error::DegenerateInput("strip needs a nonzero normal and lo < hi".into()));
        }
        let n = normal * (1.0 / len);
        Ok(Strip { lines: [(n, hi / len), (-n, -lo / len)], parallel: true })
    }

    /// Two arbitrary half-planes `n_i · x <= c_i` (normals are normalized).
    pub fn from_half_planes(n1: Point, c1: f64, n2: Point, c2: f64) -> Result<Self> {
        let (l1, l2) = (n1.norm(), n2.norm());
        if !(l1 > 0.0 && l2 > 0.0) {
            return Err(Error::DegenerateInput("zero strip normal".into()));
        }
        let (u1, u2) = (n1 * (1.0 / l1), n2 * (1.0 / l2));
        let parallel = u1.cross(u2).abs() < 1e-14;
        Ok(Strip { lines: [(u1, c1 / l1), (u2, c2 / l2)], parallel })
    }

    /// Intersection point of the two boundary lines, if they are not parallel.
    pub fn incidence_point(&self) -> Option<Point> {
        if self.parallel {
            return None;
        }
        let [(a, c1), (b, c2)] = self.lines;
        let det = a.cross(b);
        Some(Point::new((c1 * b.y - c2 * a.y) / det, (a.x * c2 - b.x * c1) / det))
    }
}

fn validate_polygon(vertices: &[Point]) -> Result<()> {
    let n = vertices.len();
    if n < 3 {
        return Err(Error::DegenerateInput(format!("polygon needs 3 vertices, got {n}")));
    }
    if vertices.iter().any(|p| !p.x.is_finite() || !p.y.is_finite()) {
        return Err(Error::DegenerateInput("non-finite vertex".into()));
    }
    for i in 0..n {
        let a = vertices[i];
        let b = vertices[(i + 1) % n];
        let c = vertices[(i + 2) % n];
        if (b - a).cross(c - b) <= 0.0 {
            return Err(Error::DegenerateInput(format!(
                "vertices are not strictly convex counter-clockwise at index {}",
                (i + 1) % n
            )));
        }
    }
    Ok(())
}

/// Convex hull (counter-clockwise, collinear and duplicate points removed).
pub fn convex_hull(points: &[Point]) -> Vec<Point> {
    let mut pts: Vec<Point> = points
        .iter()
        .copied()
        .filter(|p| p.x.is_finite() && p.y.is_finite())
        .collect();
    pts.sort_by(|a, b| a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y)));
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let mut hull: Vec<Point> = Vec::with_capacity(2 * pts.len());
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &Point>> =
            if pass == 0 { Box::new(pts.iter()) } else { Box::new(pts.iter().rev()) };
        for &p in iter {
            while hull.len() >= start + 2 {
                let a = hull[hull.len() - 2];
                let b = hull[hull.len() - 1];
                if (b - a).cross(p - b) <= 0.0 {
                    hull.pop();
                } else {
                    break;
                }
            }
            hull.push(p);
        }
        hull.pop();
    }
    hull
}

/// Build a polygon body from the convex hull of a point cloud.
pub fn polygon_from_points(points: &[Point]) -> Result<ConvexBody2D> {
    let hull = convex_hull(points);
    if hull.len() < 3 {
        return Err(Error::DegenerateInput(format!("hull has {} vertices", hull.len())));
    }
    ConvexBody2D::polygon(hull)
}

impl ConvexBody2D {
    /// Validated polygon constructor (vertices strictly convex, counter-clockwise).
    pub fn polygon(vertices: Vec<Point>) -> Result<Self> {
        validate_polygon(&vertices)?;
        let body = ConvexBody2D::Polygon { vertices };
        let (r, _) = body.inradius();
        if r < MIN_INRADIUS {
            return Err(Error::DegenerateInput(format!("inradius {r:e} below {MIN_INRADIUS:e}")));
        }
        Ok(body)
    }

    pub fn disc(center: Point, radius: f64) -> Result<Self> {
        if !(radius.is_finite() && radius > MIN_INRADIUS) {
            return Err(Error::DegenerateInput(format!("disc radius {radius}")));
        }
        Ok(ConvexBody2D::Disc { center, radius })
    }

    pub fn truncated_disc(center: Point, radius: f64, half_strip_width: f64) -> Result<Self> {
        if !(radius.is_finite() && radius > 0.0) {
            return Err(Error::DegenerateInput(format!("disc radius {radius}")));
        }
        if !(half_strip_width >= MIN_INRADIUS && half_strip_width <= radius) {
            return Err(Error::DegenerateInput(format!(
                "half strip width {half_strip_width} must lie in (0, {radius}]"
            )));
        }
        Ok(ConvexBody2D::TruncatedDisc { center, radius, half_strip_width })
    }

    /// Check the structural invariants of an already-built value.
    pub fn validate(&self) -> Result<()> {
        match self {
            ConvexBody2D::Polygon { vertices } => ConvexBody2D::polygon(vertices.clone()).map(|_| ()),
            ConvexBody2D::Disc { center, radius } => ConvexBody2D::disc(*center, *radius).map(|_| ()),
            ConvexBody2D::TruncatedDisc { center, radius, half_strip_width } => {
                ConvexBody2D::truncated_disc(*center, *radius, *half_strip_width).map(|_| ())
            }
        }
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            ConvexBody2D::Polygon { .. } => "polygon",
            ConvexBody2D::Disc { .. } => "disc",
            ConvexBody2D::TruncatedDisc { .. } => "truncated_disc",
        }
    }

    pub fn area(&self) -> f64 {
        match self {
            ConvexBody2D::Polygon { vertices } => polygon_area(vertices),
            ConvexBody2D::Disc { radius, .. } => PI * radius * radius,
            ConvexBody2D::TruncatedDisc { radius: r, half_strip_width: rho, .. } => {
                2.0 * (rho * (r * r - rho * rho).max(0.0).sqrt() + r * r * (rho / r).min(1.0).asin())
            }
        }
    }

    pub fn perimeter(&self) -> f64 {
        match self {
            ConvexBody2D::Polygon { vertices } => {
                let n = vertices.len();
                (0..n).map(|i| vertices[i].dist(vertices[(i + 1) % n])).sum()
            }
            ConvexBody2D::Disc { radius, .. } => 2.0 * PI * radius,
            ConvexBody2D::TruncatedDisc { radius: r, half_strip_width: rho, .. } => {
                let half_chord = (r * r - rho * rho).max(0.0).sqrt();
                4.0 * half_chord + 4.0 * r * (rho / r).min(1.0).asin()
            }
        }
    }

    /// Support function `max_{x in body} x · u` for a direction `u` (any length).
    pub fn support(&self, u: Point) -> f64 {
        match self {
            ConvexBody2D::Polygon { vertices } => {
                vertices.iter().map(|v| v.dot(u)).fold(f64::NEG_INFINITY, f64::max)
            }
            ConvexBody2D::Disc { center, radius } => center.dot(u) + radius * u.norm(),
            ConvexBody2D::TruncatedDisc { center, radius: r, half_strip_width: rho } => {
                let len = u.norm();
                if r * u.y.abs() <= rho * len {
                    center.dot(u) + r * len
                } else {
                    let half_chord = (r * r - rho * rho).max(0.0).sqrt();
                    center.dot(u) + half_chord * u.x.abs() + rho * u.y.abs()
                }
            }
        }
    }

    /// Width in the direction `u` (unit vector).
    pub fn width(&self, u: Point) -> f64 {
        self.support(u) + self.support(-u)
    }

    /// Minimal width; exact over edge normals for polygons, closed form otherwise.
    pub fn min_width(&self) -> f64 {
        match self {
            ConvexBody2D::Polygon { vertices } => {
                let n = vertices.len();
                (0..n)
                    .map(|i| {
                        let e = vertices[(i + 1) % n] - vertices[i];
                        let u = e.perp() * (1.0 / e.norm());
                        self.width(u)
                    })
                    .fold(f64::INFINITY, f64::min)
            }
            ConvexBody2D::Disc { radius, .. } => 2.0 * radius,
            ConvexBody2D::TruncatedDisc { half_strip_width, .. } => 2.0 * half_strip_width,
        }
    }

    /// Maximal width, which equals the diameter for a convex body.
    pub fn max_width(&self) -> f64 {
        self.diameter()
    }

    pub fn diameter(&self) -> f64 {
        match self {
            ConvexBody2D::Polygon { vertices } => polygon_diameter(vertices),
            ConvexBody2D::Disc { radius, .. } | ConvexBody2D::TruncatedDisc { radius, .. } => 2.0 * radius,
        }
    }

    /// Radius and center of a largest inscribed disc.
    pub fn inradius(&self) -> (f64, Point) {
        match self {
            ConvexBody2D::Polygon { vertices } => polygon_inradius(vertices),
            ConvexBody2D::Disc { center, radius } => (*radius, *center),
            ConvexBody2D::TruncatedDisc { center, half_strip_width, .. } => (*half_strip_width, *center),
        }
    }

    pub fn centroid(&self) -> Point {
        match self {
            ConvexBody2D::Polygon { vertices } => polygon_centroid(vertices),
            ConvexBody2D::Disc { center, .. } | ConvexBody2D::TruncatedDisc { center, .. } => *center,
        }
    }

    /// Copy scaled by `t` about the origin.
    pub fn scaled(&self, t: f64) -> ConvexBody2D {
        match self {
            ConvexBody2D::Polygon { vertices } => {
                ConvexBody2D::Polygon { vertices: vertices.iter().map(|&v| v * t).collect() }
            }
            ConvexBody2D::Disc { center, radius } => ConvexBody2D::Disc { center: *center * t, radius: radius * t },
            ConvexBody2D::TruncatedDisc { center, radius, half_strip_width } => ConvexBody2D::TruncatedDisc {
                center: *center * t,
                radius: radius * t,
                half_strip_width: half_strip_width * t,
            },
        }
    }

    pub fn translated(&self, d: Point) -> ConvexBody2D {
        match self {
            ConvexBody2D::Polygon { vertices } => {
                ConvexBody2D::Polygon { vertices: vertices.iter().map(|&v| v + d).collect() }
            }
            ConvexBody2D::Disc { center, radius } => ConvexBody2D::Disc { center: *center + d, radius: *radius },
            ConvexBody2D::TruncatedDisc { center, radius, half_strip_width } => ConvexBody2D::TruncatedDisc {
                center: *center + d,
                radius: *radius,
                half_strip_width: *half_strip_width,
            },
        }
    }

    /// Uniformly scaled copy with unit diameter.
    pub fn normalize_diameter(&self) -> ConvexBody2D {
        let d = self.diameter();
        if d == 1.0 {
            return self.clone();
        }
        self.scaled(1.0 / d)
    }

    /// Counter-clockwise boundary vertices. Disc kinds are sampled with vertices on
    /// the true boundary and, for truncated discs, the four corners included exactly.
    pub fn boundary_polygon(&self, resolution: usize) -> Vec<Point> {
        let res = resolution.max(8);
        match self {
            ConvexBody2D::Polygon { vertices } => vertices.clone(),
            ConvexBody2D::Disc { center, radius } => (0..res)
                .map(|k| *center + Point::polar(*radius, 2.0 * PI * k as f64 / res as f64))
                .collect(),
            ConvexBody2D::TruncatedDisc { center, radius: r, half_strip_width: rho } => {
                let beta = (rho / r).min(1.0).asin();
                let segs = ((res as f64 * beta / PI).ceil() as usize).max(1);
                let mut pts = Vec::with_capacity(2 * segs + 2);
                for side in 0..2 {
                    let mid = if side == 0 { 0.0 } else { PI };
                    for k in 0..=segs {
                        let a = mid - beta + 2.0 * beta * k as f64 / segs as f64;
                        let p = *center + Point::polar(*r, a);
                        if pts.last().is_none_or(|q: &Point| q.dist(p) > 1e-15 * r) {
                            pts.push(p);
                        }
                    }
                }
                if pts.len() > 1 && pts[0].dist(*pts.last().unwrap()) <= 1e-15 * r {
                    pts.pop();
                }
                pts
            }
        }
    }

    /// Polygonal view at the given resolution (identity for polygons).
    pub fn polygon_view(&self, resolution: usize) -> ConvexBody2D {
        match self {
            ConvexBody2D::Polygon { .. } => self.clone(),
            _ => ConvexBody2D::Polygon { vertices: self.boundary_polygon(resolution) },
        }
    }

    /// Point membership with an absolute tolerance.
    pub fn contains(&self, p: Point, tol: f64) -> bool {
        match self {
            ConvexBody2D::Polygon { vertices } => {
                let n = vertices.len();
                (0..n).all(|i| {
                    let a = vertices[i];
                    let e = vertices[(i + 1) % n] - a;
                    e.cross(p - a) >= -tol * e.norm()
                })
            }
            ConvexBody2D::Disc { center, radius } => p.dist(*center) <= radius + tol,
            ConvexBody2D::TruncatedDisc { center, radius, half_strip_width } => {
                p.dist(*center) <= radius + tol && (p.y - center.y).abs() <= half_strip_width + tol
            }
        }
    }
}

fn polygon_centroid(v: &[Point]) -> Point {
    let n = v.len();
    let mut a2 = 0.0;
    let mut c = Point::default();
    for i in 0..n {
        let cr = v[i].cross(v[(i + 1) % n]);
        a2 += cr;
        c = c + (v[i] + v[(i + 1) % n]) * cr;
    }
    c * (1.0 / (3.0 * a2))
}

/// Diameter of a strictly convex counter-clockwise polygon by rotating calipers.
pub fn polygon_diameter(v: &[Point]) -> f64 {
    let n = v.len();
    if n < 3 {
        return if n == 2 { v[0].dist(v[1]) } else { 0.0 };
    }
    let twice_area = |a: Point, b: Point, c: Point| (b - a).cross(c - a);
    let mut j = 1;
    let mut best: f64 = 0.0;
    for i in 0..n {
        let ni = (i + 1) % n;
        let mut steps = 0;
        while twice_area(v[i], v[ni], v[(j + 1) % n]) > twice_area(v[i], v[ni], v[j]) && steps < n {
            j = (j + 1) % n;
            steps += 1;
        }
        best = best.max(v[i].dist(v[j])).max(v[ni].dist(v[j]));
    }
    best
}

fn golden_max<F: FnMut(f64) -> f64>(mut f: F, mut lo: f64, mut hi: f64, tol: f64) -> (f64, f64) {
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = hi - g * (hi - lo);
    let mut x2 = lo + g * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    for _ in 0..200 {
        if hi - lo <= tol {
            break;
        }
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + g * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - g * (hi - lo);
            f1 = f(x1);
        }
    }
    if f1 >= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// Largest inscribed disc of a convex polygon: maximizes the concave function
/// `min_i (b_i - n_i · c)` over the edge half-planes by nested golden sections.
pub fn polygon_inradius(v: &[Point]) -> (f64, Point) {
    let n = v.len();
    let planes: Vec<(Point, f64)> = (0..n)
        .map(|i| {
            let e = v[(i + 1) % n] - v[i];
            let nrm = Point::new(e.y, -e.x) * (1.0 / e.norm());
            (nrm, nrm.dot(v[i]))
        })
        .collect();
    let depth = |c: Point| planes.iter().map(|&(nr, b)| b - nr.dot(c)).fold(f64::INFINITY, f64::min);
    let (xmin, xmax) = v.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), p| (a.min(p.x), b.max(p.x)));
    let (ymin, ymax) = v.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), p| (a.min(p.y), b.max(p.y)));
    let scale = (xmax - xmin).max(ymax - ymin);
    let tol = 1e-13 * scale;
    let inner = |x: f64| golden_max(|y| depth(Point::new(x, y)), ymin, ymax, tol);
    let (bx, _) = golden_max(|x| inner(x).1, xmin, xmax, tol);
    let (by, r) = inner(bx);
    (r.max(0.0), Point::new(bx, by))
}

/// Deterministic random convex polygon with unit diameter and inradius at least
/// `min_inradius`, from hulls of `n` uniform points in the unit disc.
pub fn random_convex(seed: u64, n: usize, min_inradius: f64) -> Result<ConvexBody2D> {
    if n < 3 {
        return Err(Error::DegenerateInput(format!("need n >= 3, got {n}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..RANDOM_RETRY_BUDGET {
        let pts: Vec<Point> = (0..n)
            .map(|_| {
                let r = rng.random::<f64>().sqrt();
                let a = 2.0 * PI * rng.random::<f64>();
                Point::polar(r, a)
            })
            .collect();
        let Ok(body) = polygon_from_points(&pts) else { continue };
        let body = body.normalize_diameter();
        if body.inradius().0 >= min_inradius {
            return Ok(body);
        }
    }
    Err(Error::GenerationFailed {
        attempts: RANDOM_RETRY_BUDGET,
        reason: format!("no hull of {n} points reached inradius {min_inradius}"),
    })
}

/// Sutherland–Hodgman clip of a polygon by the half-plane `normal · x <= offset + tol`.
pub fn clip_half_plane(poly: &[Point], normal: Point, offset: f64, tol: f64) -> Vec<Point> {
    let n = poly.len();
    let mut out = Vec::with_capacity(n + 2);
    for i in 0..n {
        let a = poly[i];
        let b = poly[(i + 1) % n];
        let da = normal.dot(a) - offset;
        let db = normal.dot(b) - offset;
        let a_in = da <= tol;
        let b_in = db <= tol;
        if a_in {
            out.push(a);
        }
        if a_in != b_in && (da - db).abs() > 0.0 {
            let t = da / (da - db);
            if t > 0.0 && t < 1.0 {
                out.push(a.lerp(b, t));
            }
        }
    }
    out
}

/// Intersection of a polygon with a convex counter-clockwise polygon.
pub fn clip_convex(subject: &[Point], clip: &[Point]) -> Vec<Point> {
    let n = clip.len();
    let mut out = subject.to_vec();
    for i in 0..n {
        if out.len() < 3 {
            return Vec::new();
        }
        let a = clip[i];
        let e = clip[(i + 1) % n] - a;
        let normal = Point::new(e.y, -e.x);
        out = clip_half_plane(&out, normal, normal.dot(a), 0.0);
    }
    out
}

/// Intersection of a body with a strip. Disc kinds are polygonized at
/// [`CLIP_RESOLUTION`] samples; a strip that already contains the body returns it unchanged.
pub fn clip_with_strip(body: &ConvexBody2D, strip: &Strip) -> Result<ConvexBody2D> {
    let scale = body.diameter();
    let tol = 1e-12 * scale;
    if let Some(p) = strip.incidence_point() {
        if body.contains(p, -tol) {
            return Err(Error::DegenerateInput("strip lines cross inside the body".into()));
        }
    }
    if strip.lines.iter().all(|&(n, c)| body.support(n) <= c + tol) {
        return Ok(body.clone());
    }
    if strip.lines.iter().any(|&(n, c)| -body.support(-n) >= c - tol) {
        return Err(Error::EmptyIntersection);
    }
    let mut poly = body.boundary_polygon(CLIP_RESOLUTION);
    for &(n, c) in &strip.lines {
        poly = clip_half_plane(&poly, n, c, tol);
        if poly.len() < 3 {
            return Err(Error::EmptyIntersection);
        }
    }
    polygon_from_points(&poly).map_err(|_| Error::EmptyIntersection)
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

    fn triangle() -> ConvexBody2D {
        ConvexBody2D::polygon(vec![
            Point::new(0.0, 0.0),
            Point::new(1.0, 0.0),
            Point::new(0.5, 3f64.sqrt() / 2.0),
        ])
        .unwrap()
    }

    #[test]
    fn hull_drops_interior_point() {
        let b = polygon_from_points(&[
            Point::new(0.0, 0.0),
            Point::new(1.0, 0.0),
            Point::new(0.0, 1.0),
            Point::new(0.2, 0.2),
        ])
        .unwrap();
        let ConvexBody2D::Polygon { vertices } = b else { panic!() };
        assert_eq!(vertices, vec![Point::new(0.0, 0.0), Point::new(1.0, 0.0), Point::new(0.0, 1.0)]);
    }

    #[test]
    fn hull_rejects_collinear() {
        let r = polygon_from_points(&[Point::new(0.0, 0.0), Point::new(1.0, 1.0), Point::new(2.0, 2.0)]);
        assert!(matches!(r, Err(Error::DegenerateInput(_))));
    }

    #[test]
    fn clockwise_polygon_rejected() {
        let r = ConvexBody2D::polygon(vec![Point::new(0.0, 0.0), Point::new(0.0, 1.0), Point::new(1.0, 0.0)]);
        assert!(r.is_err());
    }

    #[test]
    fn square_functionals() {
        let s = square();
        assert_abs_diff_eq!(s.area(), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(s.perimeter(), 4.0, epsilon = 1e-15);
        assert_abs_diff_eq!(s.diameter(), 2f64.sqrt(), epsilon = 1e-15);
        let (r, c) = s.inradius();
        assert_abs_diff_eq!(r, 0.5, epsilon = 1e-10);
        assert_abs_diff_eq!(c.x, 0.5, epsilon = 1e-6);
        assert_abs_diff_eq!(c.y, 0.5, epsilon = 1e-6);
        assert_abs_diff_eq!(s.width(Point::new(1.0, 0.0)), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(s.min_width(), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn disc_functionals() {
        let d = ConvexBody2D::disc(Point::default(), 0.5).unwrap();
        assert_abs_diff_eq!(d.area(), PI / 4.0, epsilon = 1e-15);
        assert_abs_diff_eq!(d.perimeter(), PI, epsilon = 1e-15);
        assert_abs_diff_eq!(d.diameter(), 1.0);
        assert_abs_diff_eq!(d.width(Point::polar(1.0, 0.7)), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn truncated_disc_functionals() {
        let t = ConvexBody2D::truncated_disc(Point::default(), 0.5, 0.1).unwrap();
        assert_eq!(t.diameter(), 1.0);
        assert_eq!(t.inradius().0, 0.1);
        let full = ConvexBody2D::truncated_disc(Point::default(), 0.5, 0.5).unwrap();
        assert_abs_diff_eq!(full.area(), PI / 4.0, epsilon = 1e-15);
        assert_abs_diff_eq!(full.perimeter(), PI, epsilon = 1e-15);
        // The polygonal view converges to the closed forms.
        let view = t.polygon_view(1 << 14);
        assert_abs_diff_eq!(view.area(), t.area(), epsilon = 1e-7);
        assert_abs_diff_eq!(view.perimeter(), t.perimeter(), epsilon = 1e-7);
        assert_abs_diff_eq!(t.min_width(), view.min_width(), epsilon = 1e-12);
    }

    #[test]
    fn triangle_inradius_matches_incircle_and_tangent_triples() {
        let t = triangle();
        let (r, _) = t.inradius();
        assert_abs_diff_eq!(r, 1.0 / (2.0 * 3f64.sqrt()), epsilon = 1e-10);
        assert_abs_diff_eq!(r, brute_force_inradius(&t), epsilon = 1e-10);
    }

    /// Oracle: the optimal inscribed disc touches three edge lines; enumerate triples.
    fn brute_force_inradius(body: &ConvexBody2D) -> f64 {
        let ConvexBody2D::Polygon { vertices: v } = body else { unreachable!() };
        let n = v.len();
        let planes: Vec<(Point, f64)> = (0..n)
            .map(|i| {
                let e = v[(i + 1) % n] - v[i];
                let nr = Point::new(e.y, -e.x) * (1.0 / e.norm());
                (nr, nr.dot(v[i]))
            })
            .collect();
        let mut best: f64 = 0.0;
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    // Solve n·c + r = b for three planes (3x3 Cramer).
                    let rows = [planes[i], planes[j], planes[k]];
                    let m = |a: usize, b: usize| -> f64 {
                        let (nr, _) = rows[a];
                        [nr.x, nr.y, 1.0][b]
                    };
                    let det3 = |c: [[f64; 3]; 3]| {
                        c[0][0] * (c[1][1] * c[2][2] - c[1][2] * c[2][1])
                            - c[0][1] * (c[1][0] * c[2][2] - c[1][2] * c[2][0])
                            + c[0][2] * (c[1][0] * c[2][1] - c[1][1] * c[2][0])
                    };
                    let a = [[m(0, 0), m(0, 1), m(0, 2)], [m(1, 0), m(1, 1), m(1, 2)], [m(2, 0), m(2, 1), m(2, 2)]];
                    let d = det3(a);
                    if d.abs() < 1e-14 {
                        continue;
                    }
                    let mut ar = a;
                    for (row, p) in ar.iter_mut().zip(rows.iter()) {
                        row[2] = p.1;
                    }
                    let mut ax = a;
                    for (row, p) in ax.iter_mut().zip(rows.iter()) {
                        row[0] = p.1;
                    }
                    let mut ay = a;
                    for (row, p) in ay.iter_mut().zip(rows.iter()) {
                        row[1] = p.1;
                    }
                    let c = Point::new(det3(ax) / d, det3(ay) / d);
                    let r = det3(ar) / d;
                    let feasible = planes.iter().all(|&(nr, b)| b - nr.dot(c) >= r - 1e-12);
                    if feasible && r > best {
                        best = r;
                    }
                }
            }
        }
        best
    }

    #[test]
    fn random_polygon_inradius_matches_triples_oracle() {
        for seed in 0..20 {
            let b = random_convex(seed, 9, 0.0).unwrap();
            assert_abs_diff_eq!(b.inradius().0, brute_force_inradius(&b), epsilon = 1e-10);
        }
    }

    #[test]
    fn normalize_square() {
        let s = square().normalize_diameter();
        assert_abs_diff_eq!(s.diameter(), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(s.area(), 0.5, epsilon = 1e-12);
        let d = ConvexBody2D::disc(Point::default(), 0.5).unwrap();
        assert_eq!(d.normalize_diameter(), d);
    }

    #[test]
    fn random_convex_is_deterministic() {
        let a = random_convex(1, 8, 0.0).unwrap();
        let b = random_convex(1, 8, 0.0).unwrap();
        assert_eq!(a, b);
        assert_abs_diff_eq!(a.diameter(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn random_convex_respects_inradius() {
        let b = random_convex(2, 16, 0.3).unwrap();
        assert!(b.inradius().0 >= 0.3);
    }

    #[test]
    fn random_triangle_cannot_be_near_disc() {
        // A unit-diameter triangle has inradius at most 1/(2*sqrt(3)) < 0.49.
        assert!(matches!(random_convex(3, 3, 0.49), Err(Error::GenerationFailed { .. })));
    }

    #[test]
    fn random_hull_inside_unit_disc() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let pts: Vec<Point> = (0..100)
            .map(|_| Point::polar(rng.random::<f64>().sqrt(), 2.0 * PI * rng.random::<f64>()))
            .collect();
        let hull = polygon_from_points(&pts).unwrap();
        assert!(hull.area() <= PI);
        // Monte-Carlo containment: the hull fraction of the bounding square matches its area.
        let hits = (0..200_000)
            .filter(|_| {
                let p = Point::new(2.0 * rng.random::<f64>() - 1.0, 2.0 * rng.random::<f64>() - 1.0);
                hull.contains(p, 0.0)
            })
            .count();
        assert_abs_diff_eq!(4.0 * hits as f64 / 200_000.0, hull.area(), epsilon = 0.02);
    }

    #[test]
    fn clip_disc_gives_truncated_disc_area() {
        let d = ConvexBody2D::disc(Point::default(), 0.5).unwrap();
        for rho in [0.05, 0.1, 0.3, 0.45] {
            let s = Strip::parallel(Point::new(0.0, 1.0), -rho, rho).unwrap();
            let c = clip_with_strip(&d, &s).unwrap();
            let exact = ConvexBody2D::truncated_disc(Point::default(), 0.5, rho).unwrap().area();
            assert_abs_diff_eq!(c.area(), exact, epsilon = 1e-6);
        }
    }

    #[test]
    fn clip_square_and_identity() {
        let s = square();
        let strip = Strip::parallel(Point::new(1.0, 0.0), 0.25, 0.75).unwrap();
        let c = clip_with_strip(&s, &strip).unwrap();
        assert_abs_diff_eq!(c.area(), 0.5, epsilon = 1e-15);
        assert_eq!(clip_with_strip(&c, &strip).unwrap(), c);
        let wide = Strip::parallel(Point::new(1.0, 0.0), -3.0, 3.0).unwrap();
        assert_eq!(clip_with_strip(&s, &wide).unwrap(), s);
        let far = Strip::parallel(Point::new(1.0, 0.0), 5.0, 6.0).unwrap();
        assert_eq!(clip_with_strip(&s, &far), Err(Error::EmptyIntersection));
    }

    #[test]
    fn clip_rejects_incidence_inside() {
        let s = square();
        let strip =
            Strip::from_half_planes(Point::new(1.0, 0.0), 0.5, Point::new(0.0, 1.0), 0.5).unwrap();
        assert!(clip_with_strip(&s, &strip).is_err());
    }
}
