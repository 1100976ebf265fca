//! Weighted one-dimensional Poincaré constants on an interval.
//!
//! A weight is sampled at `K` uniform nodes of `[0, 1]`; the physical interval has
//! length `d`. Integrals use the trapezoidal rule with prefix sums, and point values
//! use linear interpolation.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default number of sample nodes.
pub const DEFAULT_SAMPLES: usize = 100_001;
/// Tolerance on discrete second differences for concavity checks.
pub const CONCAVITY_TOL: f64 = 1e-10;
/// Boundary positions of the two-cut oracle lattice.
pub const ORACLE_LATTICE: usize = 64;

/// Concavity class of a weight: `rho^(1/m)` concave, or `log rho` concave.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Concavity {
    Power(u32),
    Log,
}

/// Affine factor `h(x) = intercept + slope * x` of a weight `rho = phi * h` on `[delta, 1 - delta]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AffinePart {
    pub delta: f64,
    pub intercept: f64,
    pub slope: f64,
}

impl AffinePart {
    pub fn value(&self, x: f64) -> f64 {
        self.intercept + self.slope * x
    }

    /// `min (h'/h)^2` over `[a, b]`.
    pub fn min_log_slope_sq(&self, a: f64, b: f64) -> f64 {
        let hmax = self.value(a).abs().max(self.value(b).abs());
        (self.slope / hmax).powi(2)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Weight1D {
    samples: Vec<f64>,
    prefix: Vec<f64>,
    length: f64,
    concavity: Option<Concavity>,
    affine: Option<AffinePart>,
}

impl Weight1D {
    /// Nonnegative samples with positive interior values.
    pub fn new(samples: Vec<f64>) -> Result<Self> {
        let k = samples.len();
        if k < 3 {
            return Err(Error::DegenerateInput("a weight needs at least 3 samples".into()));
        }
        if samples.iter().any(|v| !v.is_finite() || *v < 0.0) || samples[1..k - 1].iter().any(|&v| v <= 0.0) {
            return Err(Error::DegenerateInput("weight must be finite, nonnegative, and positive inside".into()));
        }
        let h = 1.0 / (k - 1) as f64;
        let mut prefix = Vec::with_capacity(k);
        prefix.push(0.0);
        for j in 1..k {
            prefix.push(prefix[j - 1] + 0.5 * h * (samples[j - 1] + samples[j]));
        }
        Ok(Weight1D { samples, prefix, length: 1.0, concavity: None, affine: None })
    }

    pub fn from_fn(f: impl Fn(f64) -> f64, k: usize) -> Result<Self> {
        let k = k.max(3);
        Weight1D::new((0..k).map(|j| f(j as f64 / (k - 1) as f64)).collect())
    }

    /// Same profile on an interval of length `d`.
    pub fn with_length(mut self, d: f64) -> Result<Self> {
        if !(d.is_finite() && d > 0.0) {
            return Err(Error::DomainError(format!("interval length {d}")));
        }
        self.length = d;
        Ok(self)
    }

    /// Attach a concavity class after checking it on the samples.
    pub fn with_concavity(mut self, c: Concavity) -> Result<Self> {
        let worst = self.concavity_defect(c);
        if worst > CONCAVITY_TOL {
            return Err(match c {
                Concavity::Log => Error::NotLogConcave(worst),
                Concavity::Power(m) => Error::Precondition(format!("rho^(1/{m}) not concave (defect {worst:e})")),
            });
        }
        self.concavity = Some(c);
        Ok(self)
    }

    /// Attach an affine factor; `h` must be positive on `[delta, 1 - delta]`.
    pub fn with_affine(mut self, part: AffinePart) -> Result<Self> {
        if !(part.delta > 0.0 && part.delta < 0.5) {
            return Err(Error::DomainError(format!("delta = {} must lie in (0, 1/2)", part.delta)));
        }
        if part.value(part.delta) <= 0.0 || part.value(1.0 - part.delta) <= 0.0 {
            return Err(Error::DegenerateInput("affine factor must be positive on [delta, 1 - delta]".into()));
        }
        self.affine = Some(part);
        Ok(self)
    }

    /// Largest discrete second difference of `rho^(1/m)` or `log rho` over the positive samples.
    pub fn concavity_defect(&self, c: Concavity) -> f64 {
        let tr: Vec<f64> = match c {
            Concavity::Power(m) => self.samples.iter().map(|v| v.powf(1.0 / m.max(1) as f64)).collect(),
            Concavity::Log => self.samples.iter().map(|v| v.ln()).collect(),
        };
        tr.windows(3)
            .filter(|w| w.iter().all(|v| v.is_finite()))
            .map(|w| w[0] - 2.0 * w[1] + w[2])
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Divide by the maximum sample.
    pub fn normalized(&self) -> Self {
        let mx = self.samples.iter().cloned().fold(0.0, f64::max);
        let mut w = Weight1D::new(self.samples.iter().map(|v| v / mx).collect()).expect("scaling keeps validity");
        w.length = self.length;
        w.concavity = self.concavity;
        w.affine = self.affine.map(|a| AffinePart { intercept: a.intercept / mx, slope: a.slope / mx, ..a });
        w
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn concavity(&self) -> Option<Concavity> {
        self.concavity
    }

    pub fn affine(&self) -> Option<AffinePart> {
        self.affine
    }

    pub fn step(&self) -> f64 {
        1.0 / (self.samples.len() - 1) as f64
    }

    pub fn node(&self, j: usize) -> f64 {
        j as f64 * self.step()
    }

    fn cell(&self, x: f64) -> (usize, f64) {
        let k = self.samples.len();
        let y = x.clamp(0.0, 1.0) * (k - 1) as f64;
        let j = (y.floor() as usize).min(k - 2);
        (j, y - j as f64)
    }

    /// Linearly interpolated value at `x` in `[0, 1]`.
    pub fn value(&self, x: f64) -> f64 {
        let (j, f) = self.cell(x);
        self.samples[j] * (1.0 - f) + self.samples[j + 1] * f
    }

    /// Integral over `[0, x]` in unit coordinates.
    pub fn mass(&self, x: f64) -> f64 {
        let (j, f) = self.cell(x);
        let v = self.samples[j] * (1.0 - f) + self.samples[j + 1] * f;
        self.prefix[j] + 0.5 * f * self.step() * (self.samples[j] + v)
    }

    pub fn total(&self) -> f64 {
        *self.prefix.last().unwrap()
    }

    fn j_unchecked(&self, x: f64) -> f64 {
        let left = self.mass(x);
        let total = self.total();
        left * (total - left) / (total * self.value(x))
    }

    /// `J(x) = (int_0^x rho)(int_x^1 rho) / ((int_0^1 rho) rho(x))` for interior `x`.
    pub fn j_rho(&self, x: f64) -> Result<f64> {
        if !(x > 0.0 && x < 1.0) {
            return Err(Error::DomainError(format!("x = {x} must lie in (0, 1)")));
        }
        Ok(self.j_unchecked(x))
    }

    /// Central-difference derivative at node `j` (one-sided at the ends), unit coordinates.
    fn derivative(&self, j: usize) -> f64 {
        let k = self.samples.len();
        let h = self.step();
        if j == 0 {
            (self.samples[1] - self.samples[0]) / h
        } else if j == k - 1 {
            (self.samples[k - 1] - self.samples[k - 2]) / h
        } else {
            (self.samples[j + 1] - self.samples[j - 1]) / (2.0 * h)
        }
    }

    fn interior_nodes(&self, a: f64, b: f64) -> impl Iterator<Item = usize> + '_ {
        let k = self.samples.len();
        (1..k - 1).filter(move |&j| {
            let x = self.node(j);
            x > a && x < b
        })
    }
}

/// Exact `J` for `rho(t) = exp(a t)`.
pub fn j_exponential(a: f64, x: f64) -> f64 {
    if a == 0.0 {
        return x * (1.0 - x);
    }
    (a * x).exp_m1() * (a.exp() - (a * x).exp()) / (a * a.exp_m1() * (a * x).exp())
}

fn golden_max(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> f64 {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while b - a > tol {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    0.5 * (a + b)
}

/// Point of maximal `J` and its value.
pub fn max_j(rho: &Weight1D) -> (f64, f64) {
    let k = rho.samples.len();
    let (mut best, mut bj) = (f64::NEG_INFINITY, 1);
    for j in 1..k - 1 {
        let v = rho.j_unchecked(rho.node(j));
        if v > best {
            best = v;
            bj = j;
        }
    }
    let (a, b) = (rho.node(bj - 1).max(1e-15), rho.node(bj + 1).min(1.0 - 1e-15));
    let x = golden_max(|x| rho.j_unchecked(x), a, b, 1e-14);
    let v = rho.j_unchecked(x);
    if v >= best {
        (x, v)
    } else {
        (rho.node(bj), best)
    }
}

/// Sigma objective of the two-interval competitor `E = (a, b)` in unit coordinates.
fn two_cut_value(rho: &Weight1D, a: f64, b: f64) -> f64 {
    let total = rho.total();
    let e = rho.mass(b) - rho.mass(a);
    total * (rho.value(a) + rho.value(b)) / (2.0 * e * (total - e))
}

/// Best two-cut competitor over the oracle lattice, on the physical interval.
pub fn two_cut_oracle(rho: &Weight1D, lattice: usize) -> f64 {
    let n = lattice.max(3);
    let mut best = f64::INFINITY;
    for i in 1..n {
        for j in i + 1..n {
            best = best.min(two_cut_value(rho, i as f64 / n as f64, j as f64 / n as f64));
        }
    }
    best / rho.length
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Sigma1D {
    /// Constant on the physical interval.
    pub value: f64,
    /// Optimal cut in unit coordinates.
    pub cut: f64,
    /// Best two-cut lattice value (physical interval).
    pub two_cut: f64,
}

/// Single-cut weighted constant `1 / (2 d max J)`, cross-checked against two-cut competitors.
pub fn sigma1_1d(rho: &Weight1D) -> Result<Sigma1D> {
    let (cut, jmax) = max_j(rho);
    let value = 1.0 / (2.0 * jmax * rho.length);
    let two_cut = two_cut_oracle(rho, ORACLE_LATTICE);
    if two_cut < value * (1.0 - 1e-9) {
        return Err(Error::OracleViolation { single: value, two_cut });
    }
    Ok(Sigma1D { value, cut, two_cut })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogConcaveReport {
    /// Largest `J(x) - x(1 - x)` over interior nodes.
    pub max_margin: f64,
    pub worst_x: f64,
    pub constant: bool,
}

/// Compare `J` with `x(1 - x)` for a log-concave weight.
pub fn logconcave_bound_check(rho: &Weight1D) -> Result<LogConcaveReport> {
    let defect = rho.concavity_defect(Concavity::Log);
    if defect > CONCAVITY_TOL {
        return Err(Error::NotLogConcave(defect));
    }
    let mx = rho.samples.iter().cloned().fold(0.0, f64::max);
    let constant = rho.samples.iter().all(|v| (v - mx).abs() <= 1e-12 * mx);
    let (mut max_margin, mut worst_x) = (f64::NEG_INFINITY, 0.5);
    for j in rho.interior_nodes(0.0, 1.0) {
        let x = rho.node(j);
        let m = rho.j_unchecked(x) - x * (1.0 - x);
        if m > max_margin {
            max_margin = m;
            worst_x = x;
        }
    }
    Ok(LogConcaveReport { max_margin, worst_x, constant })
}

/// Smallest coefficient and where it occurs; `INFINITY` when the denominator vanishes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Margin {
    pub value: f64,
    pub worst_x: f64,
}

/// Largest `L` with `J(x) <= x(1-x) - L min_[delta,1-delta] (h'/h)^2` on `(2 delta, 1 - 2 delta)`.
pub fn parabola_margin(rho: &Weight1D, delta: f64) -> Result<Margin> {
    let part = rho.affine.ok_or_else(|| Error::Precondition("weight has no affine factor".into()))?;
    if !(delta > 0.0 && delta < 0.25) {
        return Err(Error::DomainError(format!("delta = {delta} must lie in (0, 1/4)")));
    }
    let c = part.min_log_slope_sq(delta, 1.0 - delta);
    if c == 0.0 {
        return Ok(Margin { value: f64::INFINITY, worst_x: f64::NAN });
    }
    let mut out = Margin { value: f64::INFINITY, worst_x: f64::NAN };
    for j in rho.interior_nodes(2.0 * delta, 1.0 - 2.0 * delta) {
        let x = rho.node(j);
        let v = (x * (1.0 - x) - rho.j_unchecked(x)) / c;
        if v < out.value {
            out = Margin { value: v, worst_x: x };
        }
    }
    if !(out.value > 0.0) {
        return Err(Error::NonpositiveMargin { value: out.value, x: out.worst_x });
    }
    Ok(out)
}

/// Largest `L` with `J(x) <= 1/4 - L (rho'/rho)^2` on `(delta, 1 - delta)` for a normalized weight.
pub fn quarter_margin(rho: &Weight1D, delta: f64) -> Result<Margin> {
    if rho.concavity.is_none() {
        return Err(Error::Precondition("weight has no concavity tag".into()));
    }
    let mx = rho.samples.iter().cloned().fold(0.0, f64::max);
    if (mx - 1.0).abs() > 1e-9 {
        return Err(Error::Precondition(format!("weight must have maximum 1, found {mx}")));
    }
    if !(delta > 0.0 && delta < 0.5) {
        return Err(Error::DomainError(format!("delta = {delta} must lie in (0, 1/2)")));
    }
    let mut out = Margin { value: f64::INFINITY, worst_x: f64::NAN };
    for j in rho.interior_nodes(delta, 1.0 - delta) {
        let q = (rho.derivative(j) / rho.samples[j]).powi(2);
        if q <= 1e-20 {
            continue;
        }
        let x = rho.node(j);
        let v = (0.25 - rho.j_unchecked(x)) / q;
        if v < out.value {
            out = Margin { value: v, worst_x: x };
        }
    }
    if !(out.value > 0.0) {
        return Err(Error::NonpositiveMargin { value: out.value, x: out.worst_x });
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SlopeExcessReport {
    pub sigma1: f64,
    /// `sigma1 <= 5 / (2 d)`.
    pub hypothesis_met: bool,
    /// `min (h'/h)^2` over `[delta0, 1 - delta0]` in unit coordinates.
    pub slope_term: f64,
    /// `(d sigma1 - 2) / slope_term` when the hypothesis holds and the slope term is positive.
    pub c_tilde: Option<f64>,
    pub pass: bool,
}

/// Quantitative one-dimensional inequality: when `sigma1 <= 5/(2d)`, the excess over `2/d`
/// must be positive relative to the affine slope term.
pub fn slope_excess_check(rho: &Weight1D, delta0: f64) -> Result<SlopeExcessReport> {
    let part = rho.affine.ok_or_else(|| Error::Precondition("weight has no affine factor".into()))?;
    if !(delta0 > 0.0 && delta0 < 0.5) {
        return Err(Error::DomainError(format!("delta0 = {delta0} must lie in (0, 1/2)")));
    }
    let s = sigma1_1d(rho)?;
    let d = rho.length;
    let hypothesis_met = s.value <= 2.5 / d;
    let slope_term = part.min_log_slope_sq(delta0, 1.0 - delta0);
    let excess = d * s.value - 2.0;
    let c_tilde = (hypothesis_met && slope_term > 0.0).then(|| excess / slope_term);
    let pass = match c_tilde {
        Some(c) => c > 0.0,
        None => excess >= -1e-8,
    };
    Ok(SlopeExcessReport { sigma1: s.value, hypothesis_met, slope_term, c_tilde, pass })
}

/// `rho = g^m` with `g` a random positive concave piecewise-linear function.
pub fn random_power_concave(seed: u64, m: u32, k: usize) -> Result<Weight1D> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let lines: Vec<(f64, f64, f64)> = (0..rng.random_range(1..=4))
        .map(|_| (rng.random_range(0.0..1.0), rng.random_range(0.3..1.0), rng.random_range(-3.0..3.0)))
        .collect();
    let g = |t: f64| lines.iter().map(|&(x0, c, s)| c + s * (t - x0)).fold(f64::INFINITY, f64::min);
    let floor = rng.random_range(0.02..0.5);
    let shift = (floor - g(0.0).min(g(1.0))).max(0.0);
    Weight1D::from_fn(|t| (g(t) + shift).powi(m as i32), k)?.with_concavity(Concavity::Power(m))
}

/// `rho = exp(psi)` with `psi` a random concave quadratic plus a concave piecewise-linear part.
pub fn random_log_concave(seed: u64, k: usize) -> Result<Weight1D> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let curv = rng.random_range(0.0..6.0);
    let center = rng.random_range(-0.5..1.5);
    let lines: Vec<(f64, f64)> =
        (0..rng.random_range(1..=3)).map(|_| (rng.random_range(0.0..1.0), rng.random_range(-4.0..4.0))).collect();
    let psi = |t: f64| {
        -curv * (t - center).powi(2) + lines.iter().map(|&(x0, s)| s * (t - x0)).fold(f64::INFINITY, f64::min)
    };
    Weight1D::from_fn(|t| psi(t).exp(), k)?.with_concavity(Concavity::Log)
}

/// `pi_p = 2 pi (p-1)^(1/p) / (p sin(pi/p))`, with the sine taken in its
/// cancellation-free form `sin(pi (p-1)/p)`. Tends to 2 at both ends.
pub fn pi_p(p: f64) -> Result<f64> {
    Ok(ln_pi_p(p)?.exp())
}

fn ln_pi_p(p: f64) -> Result<f64> {
    if !(p > 1.0 && p.is_finite()) {
        return Err(Error::DomainError(format!("p = {p} must exceed 1")));
    }
    let q = p - 1.0;
    Ok((2.0 * PI).ln() + q.ln() / p - p.ln() - (PI * q / p).sin().ln())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AppendixParams {
    pub p: f64,
    pub n: u32,
    pub m: u32,
    pub k_infinity: f64,
}

impl AppendixParams {
    pub fn new(p: f64) -> Self {
        AppendixParams { p, n: 2, m: 1, k_infinity: 1.0 }
    }
}

/// Natural logarithms of the constant and its intermediates; the constant itself
/// underflows double precision for every `p` of interest.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct K0Logs {
    pub k0: f64,
    pub k1: f64,
    pub k2: f64,
    pub gamma: f64,
    pub m_term: f64,
    pub b0: f64,
    pub a: f64,
    pub s: f64,
    pub t: f64,
    pub k_kroger: f64,
    pub pi_p: f64,
}

/// The nonlinear-eigenvalue constant `K1 K2^2 / (6 (7*16*256)^2)` and its intermediates, in log space.
pub fn k0_constant(params: &AppendixParams) -> Result<K0Logs> {
    let AppendixParams { p, n, m, k_infinity } = *params;
    if !(k_infinity > 0.0 && k_infinity.is_finite()) {
        return Err(Error::DomainError(format!("K_infinity = {k_infinity} must be positive")));
    }
    if n == 0 {
        return Err(Error::DomainError("dimension must be positive".into()));
    }
    let lpp = ln_pi_p(p)?;
    let (mf, nf) = (m as f64, n as f64);
    let ln2 = 2f64.ln();
    let ln4 = 4f64.ln();
    let q = p - 1.0;
    let ln_pp1 = (p * lpp).exp().ln_1p();
    // Integral of min(x, 1-x)^(m+1) over the unit interval.
    let ln_integral = -(mf + 1.0) * ln2 - (mf + 2.0).ln();
    let gamma = k_infinity.ln() + (mf + 1.0) / p * ln_pp1 - ln_integral / p;
    let a = -ln4 - p * gamma;
    let s = -(ln4 + gamma) / q;
    let t = (mf + 1.0) * (ln4 + p * gamma) + ln_pp1;
    let b0 = (a - ln2).min((p / q) * (-ln2 + (q / p).ln() + s - t));
    let m_term = q * (q / p).ln() + (2.0 * b0 - ln2).min(b0 - ln2 + (p / q) * s);
    let k1 = -ln2 / q - (mf + 1.0) * 2f64.powi(m as i32 + 3) * (p * (mf + 2.0) * gamma).exp()
        - ((2.0 * p * p - p) / q) * gamma
        + m_term;
    let k_kroger = (p + 1.0).ln() + ((nf + 3.0 * p) / 2.0) * ln2 + (nf + p) * nf.ln();
    let k2 = -(nf + mf) * ln2 - p * k_infinity.ln() - (nf + mf) * k_kroger;
    let k0 = k1 + 2.0 * k2 - 6f64.ln() - 2.0 * (7.0f64 * 16.0 * 256.0).ln();
    Ok(K0Logs { k0, k1, k2, gamma, m_term, b0, a, s, t, k_kroger, pi_p: lpp })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn constant_weight() {
        let w = Weight1D::from_fn(|_| 1.0, 1001).unwrap();
        assert_abs_diff_eq!(w.j_rho(0.3).unwrap(), 0.21, epsilon = 1e-14);
        let s = sigma1_1d(&w).unwrap();
        assert_abs_diff_eq!(s.value, 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(s.cut, 0.5, epsilon = 1e-6);
        assert!(w.j_rho(0.0).is_err());
    }

    #[test]
    fn pi_p_values() {
        assert_abs_diff_eq!(pi_p(2.0).unwrap(), PI, epsilon = 1e-14);
        assert_abs_diff_eq!(pi_p(1.0 + 1e-9).unwrap(), 2.0, epsilon = 1e-6);
        assert_abs_diff_eq!(pi_p(1e7).unwrap(), 2.0, epsilon = 1e-5);
        assert!(pi_p(1.0).is_err());
    }

    #[test]
    fn b0_is_at_most_half_a() {
        for p in [1.01, 1.1, 1.5, 2.0, 3.0] {
            let k = k0_constant(&AppendixParams::new(p)).unwrap();
            assert!(k.b0 <= k.a - 2f64.ln() + 1e-15);
        }
    }

    #[test]
    fn rejects_bad_samples() {
        assert!(Weight1D::new(vec![1.0, 0.0, 1.0]).is_err());
        assert!(Weight1D::new(vec![1.0, 1.0]).is_err());
        assert!(Weight1D::new(vec![0.0, 1.0, 0.0]).is_ok());
    }
}
