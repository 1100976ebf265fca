//! Body specifications, verification campaigns and result emission.
//!
//! Every campaign is deterministic in its seed: instances are generated sequentially from
//! one seeded stream, evaluated in parallel, and collected in instance order.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::convex2d::{convex_hull, random_convex, ConvexBody2D, Point};
use crate::equipartition::{cell_area_report, equipartition, decomposition_identity, AffineField, ScalarField, SinSinField};
use crate::error::{Error, Result};
use crate::fencesolver::{
    grid_oracle_sigma1, solve, truncated_disc_e_theta, truncated_disc_sigma1_exact, SolverOptions, Which,
};
use crate::weighted1d::{
    j_exponential, k0_constant, logconcave_bound_check, max_j, pi_p, slope_excess_check, random_log_concave,
    random_power_concave, parabola_margin, quarter_margin, sigma1_1d, AffinePart, AppendixParams, Weight1D,
    DEFAULT_SAMPLES,
};
use crate::widthbody::{
    blaschke_combine, balancing_profile, project_to_unit_width, random_unit_width, reuleaux, reuleaux_corner_index,
    reuleaux_with_grid, singular_perturb, to_body, volume, volume_shape_derivative, CurvatureFn,
};

/// Default seed of every campaign.
pub const DEFAULT_SEED: u64 = 7;
/// Default lattice resolution of the fence oracle.
pub const DEFAULT_ORACLE_GRID: usize = 64;
/// Default tolerance of the quantitative lower bound sweep.
pub const BONNESEN_TOL: f64 = 5e-3;
/// Default tolerance of the constant-width sweep.
pub const CONSTWIDTH_TOL: f64 = 2e-3;
/// Curvature grid of random constant-width instances.
pub const CONSTWIDTH_GRID: usize = 1024;
/// Number of even powers fitted by the series campaign.
pub const SERIES_TERMS: usize = 6;
/// Reference coefficients of the small-inradius expansion of the truncated-disc constant.
pub const SERIES_REFERENCE: [f64; 3] = [4.0 / 3.0, 76.0 / 45.0, 2648.0 / 945.0];

// ---------------------------------------------------------------- body specifications

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BodyKind {
    Polygon,
    Disc,
    TruncatedDisc,
    Reuleaux,
    CurvatureSamples,
    Random,
}

impl BodyKind {
    pub fn name(self) -> &'static str {
        match self {
            BodyKind::Polygon => "polygon",
            BodyKind::Disc => "disc",
            BodyKind::TruncatedDisc => "truncated_disc",
            BodyKind::Reuleaux => "reuleaux",
            BodyKind::CurvatureSamples => "curvature_samples",
            BodyKind::Random => "random",
        }
    }
}

/// A body description as stored in spec files.
///
/// `params` by kind: `polygon {vertices: [[x, y], ...]}`, `disc {radius, center?}`,
/// `truncated_disc {rho, radius = 0.5, center?}` (strip half-width `rho`),
/// `reuleaux {n, grid?}`, `curvature_samples {samples, project = false}`,
/// `random {seed, n, min_inradius = 0.02}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BodySpec {
    pub kind: BodyKind,
    #[serde(default)]
    pub params: Value,
    #[serde(default)]
    pub normalize: bool,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PolygonParams {
    vertices: Vec<[f64; 2]>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct DiscParams {
    radius: f64,
    #[serde(default)]
    center: [f64; 2],
}

fn half() -> f64 {
    0.5
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TruncatedParams {
    rho: f64,
    #[serde(default = "half")]
    radius: f64,
    #[serde(default)]
    center: [f64; 2],
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ReuleauxParams {
    n: usize,
    #[serde(default)]
    grid: Option<usize>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SamplesParams {
    samples: Vec<f64>,
    #[serde(default)]
    project: bool,
}

fn default_min_inradius() -> f64 {
    0.02
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RandomParams {
    seed: u64,
    n: usize,
    #[serde(default = "default_min_inradius")]
    min_inradius: f64,
}

fn params<T: DeserializeOwned>(spec: &BodySpec) -> Result<T> {
    serde_json::from_value(spec.params.clone())
        .map_err(|e| Error::Parse(format!("{} params: {e}", spec.kind.name())))
}

/// A parsed specification: a planar body, or a curvature function of a unit-width body.
#[derive(Debug, Clone, PartialEq)]
pub enum ParsedBody {
    Body(ConvexBody2D),
    Width(CurvatureFn),
}

impl BodySpec {
    pub fn new(kind: BodyKind, params: Value, normalize: bool) -> Self {
        BodySpec { kind, params, normalize }
    }

    pub fn polygon(vertices: &[Point], normalize: bool) -> Self {
        let v: Vec<[f64; 2]> = vertices.iter().map(|p| [p.x, p.y]).collect();
        BodySpec::new(BodyKind::Polygon, serde_json::json!({ "vertices": v }), normalize)
    }

    pub fn disc(radius: f64) -> Self {
        BodySpec::new(BodyKind::Disc, serde_json::json!({ "radius": radius }), false)
    }

    /// Unit-diameter disc cut by the centered strip of half-width `rho`.
    pub fn truncated_disc(rho: f64) -> Self {
        BodySpec::new(BodyKind::TruncatedDisc, serde_json::json!({ "rho": rho }), false)
    }

    pub fn reuleaux(n: usize) -> Self {
        BodySpec::new(BodyKind::Reuleaux, serde_json::json!({ "n": n }), false)
    }

    pub fn curvature_samples(samples: &[f64]) -> Self {
        BodySpec::new(BodyKind::CurvatureSamples, serde_json::json!({ "samples": samples }), false)
    }

    pub fn random(seed: u64, n: usize, min_inradius: f64) -> Self {
        BodySpec::new(
            BodyKind::Random,
            serde_json::json!({ "seed": seed, "n": n, "min_inradius": min_inradius }),
            true,
        )
    }

    pub fn parse(&self) -> Result<ParsedBody> {
        Ok(match self.kind {
            BodyKind::Polygon => {
                let p: PolygonParams = params(self)?;
                ParsedBody::Body(ConvexBody2D::polygon(p.vertices.iter().map(|v| Point::new(v[0], v[1])).collect())?)
            }
            BodyKind::Disc => {
                let p: DiscParams = params(self)?;
                ParsedBody::Body(ConvexBody2D::disc(Point::new(p.center[0], p.center[1]), p.radius)?)
            }
            BodyKind::TruncatedDisc => {
                let p: TruncatedParams = params(self)?;
                let c = Point::new(p.center[0], p.center[1]);
                ParsedBody::Body(ConvexBody2D::truncated_disc(c, p.radius, p.rho)?)
            }
            BodyKind::Reuleaux => {
                let p: ReuleauxParams = params(self)?;
                ParsedBody::Width(match p.grid {
                    Some(m) => reuleaux_with_grid(p.n, m)?,
                    None => reuleaux(p.n)?,
                })
            }
            BodyKind::CurvatureSamples => {
                let p: SamplesParams = params(self)?;
                ParsedBody::Width(if p.project { project_to_unit_width(&p.samples)? } else { CurvatureFn::new(p.samples)? })
            }
            BodyKind::Random => {
                let p: RandomParams = params(self)?;
                ParsedBody::Body(random_convex(p.seed, p.n, p.min_inradius)?)
            }
        })
    }

    /// The planar body, rescaled to unit diameter when `normalize` is set.
    pub fn to_body(&self) -> Result<ConvexBody2D> {
        let body = match self.parse()? {
            ParsedBody::Body(b) => b,
            ParsedBody::Width(r) => to_body(&r)?,
        };
        Ok(if self.normalize { body.normalize_diameter() } else { body })
    }
}

/// Parse a spec document holding one body or an array of bodies.
pub fn parse_specs(text: &str) -> Result<Vec<BodySpec>> {
    let v: Value = serde_json::from_str(text)?;
    let specs = match v {
        Value::Array(items) => items.into_iter().map(serde_json::from_value::<BodySpec>).collect::<serde_json::Result<Vec<_>>>()?,
        other => vec![serde_json::from_value(other)?],
    };
    for s in &specs {
        s.parse()?;
    }
    Ok(specs)
}

/// Read a spec file; an unreadable file is an input error.
pub fn read_specs(path: &Path) -> Result<Vec<BodySpec>> {
    let text = fs::read_to_string(path).map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))?;
    parse_specs(&text)
}

// ---------------------------------------------------------------- records

/// Columns of the fence CSV, in order.
pub const FENCE_COLUMNS: [&str; 13] = [
    "instance_id",
    "kind",
    "diameter",
    "inradius",
    "value",
    "fence_s1",
    "fence_s2",
    "sagitta",
    "area_E",
    "area_comp",
    "fence_length",
    "oracle_gap",
    "margin",
];

/// One row of the fence CSV. `oracle_gap` is the lattice oracle minus the solver value;
/// `margin` is the value minus the bound checked by the producing command.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FenceRecord {
    pub instance_id: String,
    pub kind: String,
    pub diameter: f64,
    pub inradius: f64,
    pub value: f64,
    pub fence_s1: f64,
    pub fence_s2: f64,
    pub sagitta: f64,
    #[serde(rename = "area_E")]
    pub area_e: f64,
    pub area_comp: f64,
    pub fence_length: f64,
    pub oracle_gap: Option<f64>,
    pub margin: Option<f64>,
}

/// A fence row with the diagnostics kept in the JSON manifest.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FenceEntry {
    #[serde(flatten)]
    pub row: FenceRecord,
    pub which: Which,
    pub contact_angles: [f64; 2],
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub l1_distance: Option<f64>,
}

/// `2/D + (4/3) rho^2 / D^3`, the quantitative lower bound for planar convex bodies.
pub fn bonnesen_bound(diameter: f64, inradius: f64) -> f64 {
    2.0 / diameter + 4.0 / 3.0 * inradius * inradius / diameter.powi(3)
}

/// Solve one fence problem; `margin` is measured against [`bonnesen_bound`] and the oracle
/// is skipped when `oracle_grid` is 0.
pub fn run_fence(
    instance_id: &str,
    spec: &BodySpec,
    which: Which,
    opts: &SolverOptions,
    oracle_grid: usize,
) -> Result<FenceEntry> {
    let body = spec.to_body()?;
    let res = solve(&body, which, opts)?;
    let diameter = body.diameter();
    let (inradius, _) = body.inradius();
    let oracle_gap =
        (oracle_grid > 0 && which == Which::Sigma1).then(|| grid_oracle_sigma1(&body, oracle_grid) - res.value);
    let l1_distance = match spec.parse()? {
        ParsedBody::Width(r) => Some(r.l1_distance_to_ball()),
        ParsedBody::Body(_) => None,
    };
    Ok(FenceEntry {
        row: FenceRecord {
            instance_id: instance_id.to_string(),
            kind: spec.kind.name().to_string(),
            diameter,
            inradius,
            value: res.value,
            fence_s1: res.fence.s1,
            fence_s2: res.fence.s2,
            sagitta: res.fence.sagitta,
            area_e: res.area_e,
            area_comp: res.area_comp,
            fence_length: res.fence_length,
            oracle_gap,
            margin: Some(res.value - bonnesen_bound(diameter, inradius)),
        },
        which: res.which,
        contact_angles: res.contact_angles,
        l1_distance,
    })
}

// ---------------------------------------------------------------- campaign results

/// A named check. Informational checks are reported but do not affect `pass`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub asserted: bool,
    pub detail: String,
}

impl Check {
    pub fn new(name: &str, pass: bool, detail: impl Into<String>) -> Self {
        Check { name: name.to_string(), pass, asserted: true, detail: detail.into() }
    }

    pub fn info(name: &str, detail: impl Into<String>) -> Self {
        Check { name: name.to_string(), pass: true, asserted: false, detail: detail.into() }
    }
}

/// A failed instance with everything needed to replay it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Failure {
    pub instance_id: String,
    pub check: String,
    pub detail: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spec: Option<BodySpec>,
}

/// Plot-ready `(x, y)` pairs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Series {
    pub name: String,
    pub x_label: String,
    pub y_label: String,
    pub points: Vec<(f64, f64)>,
}

/// Output of a campaign. The manifest is the serialized form; the CSV table, series and
/// wall time are kept aside so manifests are byte-identical across runs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CampaignResult {
    pub campaign: String,
    pub seed: u64,
    pub tolerances: BTreeMap<String, f64>,
    pub pass: bool,
    pub checks: Vec<Check>,
    pub failures: Vec<Failure>,
    pub records: Vec<Value>,
    #[serde(skip)]
    pub csv: String,
    #[serde(skip)]
    pub series: Vec<Series>,
    #[serde(skip)]
    pub wall_time_s: f64,
}

impl CampaignResult {
    fn new(campaign: &str, seed: u64) -> Self {
        CampaignResult {
            campaign: campaign.to_string(),
            seed,
            tolerances: BTreeMap::new(),
            pass: true,
            checks: Vec::new(),
            failures: Vec::new(),
            records: Vec::new(),
            csv: String::new(),
            series: Vec::new(),
            wall_time_s: 0.0,
        }
    }

    fn finish(mut self, start: Instant) -> Self {
        self.pass = self.checks.iter().all(|c| c.pass || !c.asserted);
        self.wall_time_s = start.elapsed().as_secs_f64();
        self
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    fn set_records<R: Serialize, C: Serialize>(&mut self, json: &[R], csv_rows: &[C], header: &[&str]) -> Result<()> {
        self.records = json.iter().map(serde_json::to_value).collect::<serde_json::Result<_>>()?;
        self.csv = to_csv(csv_rows, header)?;
        Ok(())
    }
}

/// CSV text with an explicit header, so empty tables still carry their columns.
pub fn to_csv<T: Serialize>(rows: &[T], header: &[&str]) -> Result<String> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
    w.write_record(header)?;
    for r in rows {
        w.serialize(r)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Io(e.to_string()))
}

/// Settings shared by the campaigns.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CampaignConfig {
    pub seed: u64,
    /// Overrides the campaign's default tolerance.
    pub tol: Option<f64>,
    /// Oracle lattice resolution; 0 disables the oracle.
    pub grid: usize,
    pub solver: SolverOptions,
}

impl Default for CampaignConfig {
    fn default() -> Self {
        CampaignConfig { seed: DEFAULT_SEED, tol: None, grid: DEFAULT_ORACLE_GRID, solver: SolverOptions::default() }
    }
}

fn fmt_list(v: &[f64]) -> String {
    let items: Vec<String> = v.iter().map(|x| format!("{x:.6e}")).collect();
    format!("[{}]", items.join(", "))
}

fn strictly_increasing(v: &[f64]) -> bool {
    v.windows(2).all(|w| w[1] > w[0])
}

fn strictly_decreasing(v: &[f64]) -> bool {
    v.windows(2).all(|w| w[1] < w[0])
}

/// Evaluate fence instances in parallel, in instance order.
fn fence_batch(
    specs: &[(String, BodySpec)],
    cfg: &CampaignConfig,
) -> Result<Vec<FenceEntry>> {
    specs
        .par_iter()
        .map(|(id, spec)| run_fence(id, spec, Which::Sigma1, &cfg.solver, cfg.grid))
        .collect()
}

fn fence_rows(entries: &[FenceEntry]) -> Vec<FenceRecord> {
    entries.iter().map(|e| e.row.clone()).collect()
}

// ---------------------------------------------------------------- fence

/// Solve every spec and check the quantitative lower bound at tolerance `tol`.
pub fn campaign_fence(specs: &[BodySpec], which: Which, cfg: &CampaignConfig) -> Result<CampaignResult> {
    let start = Instant::now();
    let tol = cfg.tol.unwrap_or(BONNESEN_TOL);
    let mut out = CampaignResult::new("fence", cfg.seed);
    out.tolerances.insert("bound".into(), tol);
    let entries: Vec<FenceEntry> = specs
        .par_iter()
        .enumerate()
        .map(|(i, s)| run_fence(&format!("body-{i:04}"), s, which, &cfg.solver, cfg.grid))
        .collect::<Result<_>>()?;
    if which == Which::Sigma1 {
        for (e, s) in entries.iter().zip(specs) {
            let m = e.row.margin.unwrap_or(0.0);
            if m < -tol {
                out.failures.push(Failure {
                    instance_id: e.row.instance_id.clone(),
                    check: "lower_bound".into(),
                    detail: format!("margin {m:.6e}"),
                    spec: Some(s.clone()),
                });
            }
        }
        out.checks.push(Check::new("lower_bound", out.failures.is_empty(), format!("{} bodies", entries.len())));
    }
    out.set_records(&entries, &fence_rows(&entries), &FENCE_COLUMNS)?;
    Ok(out.finish(start))
}

// ---------------------------------------------------------------- quantitative bound sweep

/// Thin slab along the x axis, from the hull of points within 2% of two parallel lines.
/// Nearly constant thickness keeps the one-dimensional excess small, so the margin vanishes
/// with the thickness.
fn slab_spec(seed: u64) -> BodySpec {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let thickness = 10f64.powf(rng.random_range(-3.0..-1.3));
    let k = rng.random_range(2..=5);
    let mut pts = Vec::new();
    for side in [-1.0, 1.0] {
        pts.push(Point::new(0.0, side * 0.5 * thickness * rng.random_range(0.98..1.0)));
        pts.push(Point::new(1.0, side * 0.5 * thickness * rng.random_range(0.98..1.0)));
        for _ in 0..k {
            pts.push(Point::new(rng.random_range(0.0..1.0), side * 0.5 * thickness * rng.random_range(0.98..1.0)));
        }
    }
    BodySpec::polygon(&convex_hull(&pts), true)
}

/// Instances of the lower-bound sweep: random hulls, with every tenth a thin slab.
pub fn bonnesen_specs(seed: u64, count: usize) -> Vec<(String, BodySpec)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|i| {
            let s: u64 = rng.random();
            let spec = if i % 10 == 9 {
                slab_spec(s)
            } else {
                let n = rng.random_range(3..=12);
                BodySpec::random(s, n, 0.01)
            };
            (format!("bonnesen-{i:04}"), spec)
        })
        .collect()
}

/// Check `sigma1 >= 2 + (4/3) rho^2 - tol` on `count` random unit-diameter polygons.
pub fn campaign_bonnesen(cfg: &CampaignConfig, count: usize) -> Result<CampaignResult> {
    let start = Instant::now();
    let tol = cfg.tol.unwrap_or(BONNESEN_TOL);
    let mut out = CampaignResult::new("bonnesen", cfg.seed);
    out.tolerances.insert("bound".into(), tol);
    out.tolerances.insert("oracle".into(), 1e-9);
    let specs = bonnesen_specs(cfg.seed, count);
    let entries = fence_batch(&specs, cfg)?;
    let mut bad_bound = 0;
    let mut bad_oracle = 0;
    for (e, (_, spec)) in entries.iter().zip(&specs) {
        let m = e.row.margin.unwrap_or(f64::NAN);
        if !(m >= -tol) || e.row.value < 2.0 - 1e-9 {
            bad_bound += 1;
            out.failures.push(Failure {
                instance_id: e.row.instance_id.clone(),
                check: "lower_bound".into(),
                detail: format!("value {:.9} margin {m:.6e}", e.row.value),
                spec: Some(spec.clone()),
            });
        }
        if e.row.oracle_gap.is_some_and(|g| g < -1e-9) {
            bad_oracle += 1;
            out.failures.push(Failure {
                instance_id: e.row.instance_id.clone(),
                check: "oracle".into(),
                detail: format!("oracle gap {:.6e}", e.row.oracle_gap.unwrap_or(0.0)),
                spec: Some(spec.clone()),
            });
        }
    }
    let margins: Vec<f64> = entries.iter().filter_map(|e| e.row.margin).collect();
    let min_margin = margins.iter().cloned().fold(f64::INFINITY, f64::min);
    out.checks.push(Check::new(
        "lower_bound",
        bad_bound == 0,
        format!("{} bodies, {bad_bound} failures, min margin {min_margin:.6e}", entries.len()),
    ));
    out.checks.push(Check::new("oracle_dominates", bad_oracle == 0, format!("{bad_oracle} solver values above the oracle")));
    // Near-degenerate bodies: the thinnest instance must have a vanishing margin.
    if let Some(thin) = entries.iter().min_by(|a, b| a.row.inradius.total_cmp(&b.row.inradius)) {
        let m = thin.row.margin.unwrap_or(f64::NAN);
        let slabs: Vec<f64> = entries.iter().filter(|e| e.row.kind == "polygon").filter_map(|e| e.row.margin).collect();
        let hulls: Vec<f64> = entries.iter().filter(|e| e.row.kind == "random").filter_map(|e| e.row.margin).collect();
        let detail = format!("thinnest {} inradius {:.3e} margin {m:.3e}", thin.row.instance_id, thin.row.inradius);
        // Only corpora containing a slab have a near-degenerate member to test.
        out.checks.push(if slabs.is_empty() {
            Check::info("degenerate_margin", format!("{detail} (no slab in the corpus)"))
        } else {
            Check::new("degenerate_margin", m.abs() <= 1e-3, detail)
        });
        let mean = |v: &[f64]| {
            if v.is_empty() { "n/a".to_string() } else { format!("{:.4e}", v.iter().sum::<f64>() / v.len() as f64) }
        };
        out.checks.push(Check::info(
            "margin_by_family",
            format!("mean margin: slabs {} ({}), hulls {} ({})", mean(&slabs), slabs.len(), mean(&hulls), hulls.len()),
        ));
    }
    out.series.push(Series {
        name: "sigma_vs_rho".into(),
        x_label: "inradius".into(),
        y_label: "sigma1".into(),
        points: entries.iter().map(|e| (e.row.inradius, e.row.value)).collect(),
    });
    out.set_records(&entries, &fence_rows(&entries), &FENCE_COLUMNS)?;
    Ok(out.finish(start))
}

// ---------------------------------------------------------------- constant width

/// Instances of the constant-width sweep: the ball, Reuleaux 3, 5, 7, and `count` random
/// class members.
pub fn constwidth_specs(seed: u64, count: usize) -> Result<Vec<(String, BodySpec)>> {
    let mut specs = vec![("ball".to_string(), BodySpec::curvature_samples(&vec![0.5; CONSTWIDTH_GRID]))];
    for n in [3, 5, 7] {
        specs.push((format!("reuleaux-{n}"), BodySpec::reuleaux(n)));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for i in 0..count {
        let s: u64 = rng.random();
        let amplitude = rng.random_range(0.2..1.0);
        let harmonics = 2 * rng.random_range(1..=7) + 1;
        let r = random_unit_width(s, CONSTWIDTH_GRID, harmonics, amplitude)?;
        specs.push((format!("width-{i:04}"), BodySpec::curvature_samples(r.samples())));
    }
    Ok(specs)
}

/// Spearman rank correlation.
fn rank_correlation(x: &[f64], y: &[f64]) -> f64 {
    let ranks = |v: &[f64]| {
        let mut idx: Vec<usize> = (0..v.len()).collect();
        idx.sort_by(|&a, &b| v[a].total_cmp(&v[b]));
        let mut r = vec![0.0; v.len()];
        for (k, &i) in idx.iter().enumerate() {
            r[i] = k as f64;
        }
        r
    };
    let (rx, ry) = (ranks(x), ranks(y));
    let n = x.len() as f64;
    let (mx, my) = (rx.iter().sum::<f64>() / n, ry.iter().sum::<f64>() / n);
    let cov: f64 = rx.iter().zip(&ry).map(|(a, b)| (a - mx) * (b - my)).sum();
    let vx: f64 = rx.iter().map(|a| (a - mx).powi(2)).sum();
    let vy: f64 = ry.iter().map(|b| (b - my).powi(2)).sum();
    cov / (vx * vy).sqrt()
}

/// Check `sigma1 >= 8/pi - tol` on constant-width bodies, equality only at the ball.
pub fn campaign_constwidth(cfg: &CampaignConfig, count: usize) -> Result<CampaignResult> {
    let specs = constwidth_specs(cfg.seed, count)?;
    constwidth_on(cfg, &specs)
}

/// The constant-width checks on given unit-width instances; an instance named `ball` is
/// the equality case.
pub fn constwidth_on(cfg: &CampaignConfig, specs: &[(String, BodySpec)]) -> Result<CampaignResult> {
    let start = Instant::now();
    let tol = cfg.tol.unwrap_or(CONSTWIDTH_TOL);
    let target = 8.0 / PI;
    let mut out = CampaignResult::new("constwidth", cfg.seed);
    out.tolerances.insert("bound".into(), tol);
    let mut entries = fence_batch(specs, cfg)?;
    for e in &mut entries {
        e.row.margin = Some(e.row.value * e.row.diameter - target);
    }
    let mut below = 0;
    let mut not_strict = 0;
    let mut ball_ok = None;
    for (e, (id, spec)) in entries.iter().zip(specs) {
        let m = e.row.margin.unwrap_or(f64::NAN);
        if id == "ball" {
            ball_ok = Some((m.abs() <= tol, m));
            continue;
        }
        let fence = format!(
            "value {:.9} margin {m:.6e} fence s1 {:.9} s2 {:.9} sagitta {:.9}",
            e.row.value, e.row.fence_s1, e.row.fence_s2, e.row.sagitta
        );
        if !(m >= -tol) {
            below += 1;
            out.failures.push(Failure {
                instance_id: id.clone(),
                check: "lower_bound".into(),
                detail: fence,
                spec: Some(spec.clone()),
            });
        } else if !(m > 0.0) {
            not_strict += 1;
            out.failures.push(Failure {
                instance_id: id.clone(),
                check: "strict_for_non_balls".into(),
                detail: fence,
                spec: Some(spec.clone()),
            });
        }
    }
    let margins: Vec<f64> = entries.iter().filter_map(|e| e.row.margin).collect();
    let min_margin = margins.iter().cloned().fold(f64::INFINITY, f64::min);
    out.checks.push(Check::new(
        "lower_bound",
        below == 0,
        format!("{} bodies, {below} below 8/pi - tol, min margin {min_margin:.6e}", entries.len()),
    ));
    if let Some((ok, m)) = ball_ok {
        out.checks.push(Check::new("ball_equality", ok, format!("ball margin {m:.6e}")));
    }
    let non_ball = entries.len() - usize::from(ball_ok.is_some());
    out.checks.push(Check::new(
        "strict_for_non_balls",
        below == 0 && not_strict == 0,
        format!("{} of {non_ball} non-ball bodies strictly above 8/pi", non_ball - below - not_strict),
    ));
    let pts: Vec<(f64, f64)> =
        entries.iter().filter_map(|e| Some((e.l1_distance?, e.row.margin?))).collect();
    if pts.len() >= 3 {
        let (x, y): (Vec<f64>, Vec<f64>) = pts.iter().cloned().unzip();
        out.checks.push(Check::info("gap_trend", format!("rank correlation of gap vs L1 distance {:.4}", rank_correlation(&x, &y))));
    }
    out.series.push(Series {
        name: "gap_vs_l1".into(),
        x_label: "l1_distance_to_ball".into(),
        y_label: "sigma1_minus_8_over_pi".into(),
        points: pts,
    });
    out.set_records(&entries, &fence_rows(&entries), &FENCE_COLUMNS)?;
    Ok(out.finish(start))
}

// ---------------------------------------------------------------- series coefficients

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeriesFit {
    /// Coefficients of `rho^2, rho^4, ...` in `sigma1 - 2`.
    pub coefficients: Vec<f64>,
    /// Root-mean-square residual of `(sigma1 - 2) / rho^2`.
    pub rms_residual: f64,
}

/// Default grid: 40 equally spaced radii in `(0, 0.2]`.
pub fn default_series_grid() -> Vec<f64> {
    (1..=40).map(|k| 0.2 * k as f64 / 40.0).collect()
}

/// Least-squares fit of `sigma1(rho) - 2` by `terms` even powers starting at `rho^2`.
///
/// The fit is done on `(sigma1 - 2) / rho^2`, evaluated in cancellation-free form, against
/// powers of `(rho / rho_max)^2` by Householder-free modified Gram-Schmidt.
pub fn fit_series(rhos: &[f64], terms: usize) -> Result<SeriesFit> {
    if rhos.len() < 6 || terms < 3 || rhos.len() <= terms {
        return Err(Error::IllConditioned(format!("{} radii for {terms} terms", rhos.len())));
    }
    if rhos.iter().any(|&r| !(r > 0.0 && r <= 0.2)) {
        return Err(Error::DomainError("radii must lie in (0, 0.2]".into()));
    }
    let rmax = rhos.iter().cloned().fold(0.0, f64::max);
    let y: Vec<f64> = rhos.iter().map(|&r| truncated_disc_e_theta((2.0 * r).asin())).collect::<Result<_>>()?;
    let n = rhos.len();
    let mut q: Vec<Vec<f64>> =
        (0..terms).map(|k| rhos.iter().map(|&r| ((r / rmax).powi(2)).powi(k as i32)).collect()).collect();
    let mut rmat = vec![vec![0.0; terms]; terms];
    for k in 0..terms {
        for j in 0..k {
            let d: f64 = (0..n).map(|i| q[j][i] * q[k][i]).sum();
            rmat[j][k] = d;
            for i in 0..n {
                q[k][i] -= d * q[j][i];
            }
        }
        let norm = q[k].iter().map(|v| v * v).sum::<f64>().sqrt();
        rmat[k][k] = norm;
        if !(norm > 1e-10 * rmat[0][0]) {
            return Err(Error::IllConditioned(format!("grid spans too little to separate {terms} powers")));
        }
        for v in &mut q[k] {
            *v /= norm;
        }
    }
    let qty: Vec<f64> = (0..terms).map(|k| (0..n).map(|i| q[k][i] * y[i]).sum()).collect();
    let mut a = vec![0.0; terms];
    for k in (0..terms).rev() {
        let s: f64 = (k + 1..terms).map(|j| rmat[k][j] * a[j]).sum();
        a[k] = (qty[k] - s) / rmat[k][k];
    }
    let coefficients: Vec<f64> = a.iter().enumerate().map(|(k, c)| c / rmax.powi(2 * k as i32)).collect();
    let rms = (rhos
        .iter()
        .zip(&y)
        .map(|(&r, &v)| {
            let fit: f64 = coefficients.iter().enumerate().map(|(k, c)| c * r.powi(2 * k as i32)).sum();
            (fit - v).powi(2)
        })
        .sum::<f64>()
        / n as f64)
        .sqrt();
    Ok(SeriesFit { coefficients, rms_residual: rms })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeriesRow {
    pub rho: f64,
    pub sigma1: f64,
    pub excess_over_rho_sq: f64,
    pub fitted: f64,
}

/// Recover the leading expansion coefficients of the truncated-disc constant.
pub fn campaign_series(rhos: &[f64]) -> Result<CampaignResult> {
    let start = Instant::now();
    let tols = [1e-4, 1e-3, 1e-2];
    let mut out = CampaignResult::new("series", 0);
    for (k, t) in tols.iter().enumerate() {
        out.tolerances.insert(format!("c{}", k + 1), *t);
    }
    let fit = fit_series(rhos, SERIES_TERMS)?;
    for (k, (&reference, &t)) in SERIES_REFERENCE.iter().zip(&tols).enumerate() {
        let c = fit.coefficients[k];
        let rel = (c / reference - 1.0).abs();
        out.checks.push(Check::new(
            &format!("c{}", k + 1),
            rel <= t,
            format!("fitted {c:.10} reference {reference:.10} relative error {rel:.3e}"),
        ));
    }
    out.checks.push(Check::info("fit", format!("coefficients {} rms {:.3e}", fmt_list(&fit.coefficients), fit.rms_residual)));
    let rows: Vec<SeriesRow> = rhos
        .iter()
        .map(|&r| {
            let sigma1 = truncated_disc_sigma1_exact(r)?;
            Ok(SeriesRow {
                rho: r,
                sigma1,
                excess_over_rho_sq: truncated_disc_e_theta((2.0 * r).asin())?,
                fitted: 2.0 + fit.coefficients.iter().enumerate().map(|(k, c)| c * r.powi(2 * k as i32 + 2)).sum::<f64>(),
            })
        })
        .collect::<Result<_>>()?;
    out.series.push(Series {
        name: "sigma_vs_rho".into(),
        x_label: "rho".into(),
        y_label: "sigma1".into(),
        points: rows.iter().map(|r| (r.rho, r.sigma1)).collect(),
    });
    out.set_records(&rows, &rows, &["rho", "sigma1", "excess_over_rho_sq", "fitted"])?;
    Ok(out.finish(start))
}

// ---------------------------------------------------------------- one-dimensional suite

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OneDRow {
    pub instance_id: String,
    pub family: String,
    pub seed: u64,
    pub m: u32,
    pub max_j: f64,
    pub sigma1: Option<f64>,
    pub two_cut: Option<f64>,
    /// Largest `J(x) - x(1 - x)` (log-concave family).
    pub log_margin: Option<f64>,
    pub parabola_margin: Option<f64>,
    pub quarter_margin: Option<f64>,
    pub c_tilde: Option<f64>,
    pub pass: bool,
}

const ONED_COLUMNS: [&str; 12] = [
    "instance_id",
    "family",
    "seed",
    "m",
    "max_j",
    "sigma1",
    "two_cut",
    "log_margin",
    "parabola_margin",
    "quarter_margin",
    "c_tilde",
    "pass",
];

/// Inner margin width of the refined one-dimensional checks.
pub const ONED_DELTA: f64 = 0.1;

fn finite(v: f64) -> Option<f64> {
    v.is_finite().then_some(v)
}

fn oned_power(id: String, seed: u64, m: u32, k: usize) -> Result<OneDRow> {
    let w = random_power_concave(seed, m, k)?;
    let (_, jmax) = max_j(&w);
    let s = sigma1_1d(&w);
    let lam = quarter_margin(&w.normalized(), ONED_DELTA);
    let pass = jmax <= 0.25 + 1e-9 && s.is_ok() && lam.is_ok();
    Ok(OneDRow {
        instance_id: id,
        family: "power".into(),
        seed,
        m,
        max_j: jmax,
        sigma1: s.as_ref().ok().map(|s| s.value),
        two_cut: s.as_ref().ok().map(|s| s.two_cut),
        log_margin: None,
        parabola_margin: None,
        quarter_margin: lam.ok().and_then(|l| finite(l.value)),
        c_tilde: None,
        pass,
    })
}

fn oned_log(id: String, seed: u64, k: usize) -> Result<OneDRow> {
    let w = random_log_concave(seed, k)?;
    let (_, jmax) = max_j(&w);
    let r = logconcave_bound_check(&w)?;
    let s = sigma1_1d(&w);
    Ok(OneDRow {
        instance_id: id,
        family: "log".into(),
        seed,
        m: 0,
        max_j: jmax,
        sigma1: s.as_ref().ok().map(|s| s.value),
        two_cut: s.as_ref().ok().map(|s| s.two_cut),
        log_margin: Some(r.max_margin),
        parabola_margin: None,
        quarter_margin: None,
        c_tilde: None,
        pass: r.max_margin <= 1e-9 && s.is_ok(),
    })
}

/// `rho = phi h` with `phi` power concave and `h(t) = 1 + slope t`, normalized to maximum 1.
fn oned_affine(id: String, seed: u64, m: u32, k: usize) -> Result<OneDRow> {
    let phi = random_power_concave(seed, m, k)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    let slope = rng.random_range(0.05..0.8) * if rng.random::<bool>() { 1.0 } else { -1.0 };
    let samples: Vec<f64> = (0..k).map(|j| phi.samples()[j] * (1.0 + slope * phi.node(j))).collect();
    let w = Weight1D::new(samples)?
        .with_affine(AffinePart { delta: ONED_DELTA, intercept: 1.0, slope })?
        .normalized();
    let (_, jmax) = max_j(&w);
    let lam = parabola_margin(&w, ONED_DELTA);
    let prop = slope_excess_check(&w, ONED_DELTA);
    let pass = lam.is_ok() && prop.as_ref().is_ok_and(|p| p.pass);
    Ok(OneDRow {
        instance_id: id,
        family: "affine".into(),
        seed,
        m,
        max_j: jmax,
        sigma1: prop.as_ref().ok().map(|p| p.sigma1),
        two_cut: None,
        log_margin: None,
        parabola_margin: lam.ok().and_then(|l| finite(l.value)),
        quarter_margin: None,
        c_tilde: prop.ok().and_then(|p| p.c_tilde),
        pass,
    })
}

/// Largest relative error of the sampled exponential weights against the closed form.
pub fn exponential_regression(k: usize) -> Result<f64> {
    let mut worst = 0.0f64;
    for a in [-3.0, -0.5, 1.0, 2.5, 6.0] {
        let w = Weight1D::from_fn(|t| (a * t).exp(), k)?;
        for x in [0.01, 0.1, 0.3, 0.5, 0.77, 0.99] {
            let exact = j_exponential(a, x);
            worst = worst.max((w.j_rho(x)? - exact).abs() / exact);
        }
    }
    Ok(worst)
}

/// One-dimensional property suite: `count` power-concave weights cycling through
/// `m_values`, `count` log-concave weights, and `count` affine-factor weights.
pub fn campaign_oned(cfg: &CampaignConfig, count: usize, m_values: &[u32]) -> Result<CampaignResult> {
    let start = Instant::now();
    if m_values.is_empty() || m_values.contains(&0) {
        return Err(Error::DomainError("m values must be positive".into()));
    }
    let k = DEFAULT_SAMPLES;
    let mut out = CampaignResult::new("oned", cfg.seed);
    out.tolerances.insert("max_j".into(), 1e-9);
    out.tolerances.insert("log_margin".into(), 1e-9);
    out.tolerances.insert("exponential".into(), 1e-8);
    out.tolerances.insert("two_cut".into(), 1e-9);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut jobs: Vec<(String, u64, u32, u8)> = Vec::new();
    for (fam, tag) in [("power", 0u8), ("log", 1), ("affine", 2)] {
        for i in 0..count {
            jobs.push((format!("{fam}-{i:04}"), rng.random(), m_values[i % m_values.len()], tag));
        }
    }
    let rows: Vec<OneDRow> = jobs
        .into_par_iter()
        .map(|(id, s, m, tag)| match tag {
            0 => oned_power(id, s, m, k),
            1 => oned_log(id, s, k),
            _ => oned_affine(id, s, m, k),
        })
        .collect::<Result<_>>()?;
    fn fam<'a>(rows: &'a [OneDRow], f: &'a str) -> impl Iterator<Item = &'a OneDRow> + 'a {
        rows.iter().filter(move |r| r.family == f)
    }
    let count_bad = |f: &str, p: &dyn Fn(&OneDRow) -> bool| fam(&rows, f).filter(|r| !p(r)).count();
    let ad = count_bad("power", &|r| r.max_j <= 0.25 + 1e-9);
    let worst_j = fam(&rows, "power").map(|r| r.max_j).fold(0.0, f64::max);
    out.checks.push(Check::new("power_max_j", ad == 0, format!("{ad} violations, largest max J {worst_j:.12}")));
    let lc = count_bad("log", &|r| r.log_margin.is_some_and(|m| m <= 1e-9));
    let worst_l = fam(&rows, "log").filter_map(|r| r.log_margin).fold(f64::NEG_INFINITY, f64::max);
    out.checks.push(Check::new("log_concave_parabola", lc == 0, format!("{lc} violations, largest J - x(1-x) {worst_l:.3e}")));
    let tc = rows.iter().filter(|r| r.family != "affine" && r.sigma1.is_none()).count();
    out.checks.push(Check::new("two_cut_oracle", tc == 0, format!("{tc} weights where two cuts beat one")));
    let err = exponential_regression(k)?;
    out.checks.push(Check::new("exponential_closed_form", err <= 1e-8, format!("largest relative error {err:.3e}")));
    let l3 = count_bad("power", &|r| r.quarter_margin.is_none_or(|v| v > 0.0) && r.pass);
    let l2 = count_bad("affine", &|r| r.parabola_margin.is_some_and(|v| v > 0.0));
    let ct = count_bad("affine", &|r| r.pass);
    let minf = |it: &mut dyn Iterator<Item = f64>| it.fold(f64::INFINITY, f64::min);
    out.checks.push(Check::new(
        "parabola_margin",
        l2 == 0,
        format!("{l2} nonpositive, smallest {:.3e}", minf(&mut fam(&rows, "affine").filter_map(|r| r.parabola_margin))),
    ));
    out.checks.push(Check::new(
        "quarter_margin",
        l3 == 0,
        format!("{l3} nonpositive, smallest {:.3e}", minf(&mut fam(&rows, "power").filter_map(|r| r.quarter_margin))),
    ));
    out.checks.push(Check::new(
        "slope_excess",
        ct == 0,
        format!("{ct} failures, smallest C {:.3e}", minf(&mut fam(&rows, "affine").filter_map(|r| r.c_tilde))),
    ));
    for r in rows.iter().filter(|r| !r.pass) {
        out.failures.push(Failure {
            instance_id: r.instance_id.clone(),
            check: r.family.clone(),
            detail: format!("seed {} m {}", r.seed, r.m),
            spec: None,
        });
    }
    out.set_records(&rows, &rows, &ONED_COLUMNS)?;
    Ok(out.finish(start))
}

// ---------------------------------------------------------------- constant-width calculus

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PerturbRow {
    pub eps: f64,
    pub theta_eps: f64,
    pub normal_theta_eps: f64,
    pub omega_eps: f64,
    pub area_gain: f64,
    pub area_loss: f64,
    pub gain_over_loss: f64,
    pub omega_sq_over_eps: f64,
    pub theta_sq_over_eps: f64,
    pub loss_over_eps_theta: f64,
    pub gain_over_eps: f64,
}

const PERTURB_COLUMNS: [&str; 11] = [
    "eps",
    "theta_eps",
    "normal_theta_eps",
    "omega_eps",
    "area_gain",
    "area_loss",
    "gain_over_loss",
    "omega_sq_over_eps",
    "theta_sq_over_eps",
    "loss_over_eps_theta",
    "gain_over_eps",
];

/// Band required of `omega^2 / eps` along the ladder.
pub const OMEGA_BAND: (f64, f64) = (0.5, 4.0);
/// Band required of `loss / (eps theta)` along the ladder.
pub const LOSS_BAND: (f64, f64) = (0.05, 20.0);

pub fn default_eps_ladder() -> Vec<f64> {
    vec![1e-2, 1e-3, 1e-4, 1e-5]
}

/// Forward-difference errors of the volume derivative along the Reuleaux-to-ball combination.
pub fn shape_derivative_errors(eps: &[f64]) -> Result<Vec<f64>> {
    let r = reuleaux(3)?;
    let ball = CurvatureFn::ball(r.len())?;
    let exact = volume_shape_derivative(&r, &ball)?;
    let v0 = volume(&r);
    eps.iter().map(|&e| Ok(((volume(&blaschke_combine(&r, &ball, e)?) - v0) / e - exact).abs())).collect()
}

/// Barycenter residuals of the balancing profile for increasing area imbalance.
pub fn balancing_residuals(ratios: &[f64]) -> Result<Vec<f64>> {
    ratios
        .iter()
        .map(|&q| Ok(balancing_profile(1.0, q, PI / 3.0, 3000)?.barycenter_exact().norm()))
        .collect()
}

/// Shape-derivative convergence and balancing-profile checks.
pub fn calculus_checks() -> Result<Vec<Check>> {
    let eps = [1e-2, 1e-3, 1e-4];
    let errs = shape_derivative_errors(&eps)?;
    let ratios = [1.0, 1.1, 1.5, 2.0, 4.0, 10.0];
    let res = balancing_residuals(&ratios)?;
    Ok(vec![
        Check::new("shape_derivative", strictly_decreasing(&errs), format!("errors at eps {}: {}", fmt_list(&eps), fmt_list(&errs))),
        Check::new(
            "balancing_profile",
            res[0] < 1e-12 && res[1..].iter().all(|&v| v > 1e-12) && strictly_increasing(&res),
            format!("residuals at area ratios {}: {}", fmt_list(&ratios), fmt_list(&res)),
        ),
    ])
}

/// Corner perturbations of the Reuleaux triangle along a decreasing eps ladder, plus the
/// constant-width calculus checks.
pub fn campaign_perturb(ladder: &[f64]) -> Result<CampaignResult> {
    let start = Instant::now();
    if ladder.is_empty() || !strictly_decreasing(ladder) {
        return Err(Error::DomainError("eps ladder must be strictly decreasing".into()));
    }
    let mut out = CampaignResult::new("perturb", 0);
    out.tolerances.insert("omega_band_lo".into(), OMEGA_BAND.0);
    out.tolerances.insert("omega_band_hi".into(), OMEGA_BAND.1);
    out.tolerances.insert("loss_band_lo".into(), LOSS_BAND.0);
    out.tolerances.insert("loss_band_hi".into(), LOSS_BAND.1);
    let r = reuleaux(3)?;
    let corner = reuleaux_corner_index(3, r.len());
    let rows: Vec<PerturbRow> = ladder
        .par_iter()
        .map(|&eps| {
            let d = singular_perturb(&r, corner, eps)?.diagnostics;
            Ok(PerturbRow {
                eps,
                theta_eps: d.theta_eps,
                normal_theta_eps: d.normal_theta_eps,
                omega_eps: d.omega_eps,
                area_gain: d.area_gain,
                area_loss: d.area_loss,
                gain_over_loss: d.area_gain / d.area_loss,
                omega_sq_over_eps: d.omega_eps.powi(2) / eps,
                theta_sq_over_eps: d.theta_eps.powi(2) / eps,
                loss_over_eps_theta: d.area_loss / (eps * d.theta_eps),
                gain_over_eps: d.area_gain / eps,
            })
        })
        .collect::<Result<_>>()?;
    let col = |f: fn(&PerturbRow) -> f64| rows.iter().map(f).collect::<Vec<f64>>();
    let ratio = col(|r| r.gain_over_loss);
    let omega = col(|r| r.omega_sq_over_eps);
    let theta = col(|r| r.theta_sq_over_eps);
    let loss = col(|r| r.loss_over_eps_theta);
    out.checks.push(Check::new("ratio_increasing", strictly_increasing(&ratio), format!("gain/loss {}", fmt_list(&ratio))));
    out.checks.push(Check::new(
        "omega_band",
        omega.iter().all(|v| (OMEGA_BAND.0..=OMEGA_BAND.1).contains(v)),
        format!("omega^2/eps {}", fmt_list(&omega)),
    ));
    out.checks.push(Check::new("theta_decreasing", strictly_decreasing(&theta), format!("theta^2/eps {}", fmt_list(&theta))));
    out.checks.push(Check::new(
        "gain_exceeds_loss",
        rows.iter().all(|r| r.area_gain > r.area_loss),
        format!("gain {}", fmt_list(&col(|r| r.area_gain))),
    ));
    out.checks.push(Check::new(
        "loss_bounded",
        loss.iter().all(|v| (LOSS_BAND.0..=LOSS_BAND.1).contains(v)),
        format!("loss/(eps theta) {}", fmt_list(&loss)),
    ));
    out.checks.push(Check::info("gain_rate", format!("gain/eps {}", fmt_list(&col(|r| r.gain_over_eps)))));
    out.checks.extend(calculus_checks()?);
    out.set_records(&rows, &rows, &PERTURB_COLUMNS)?;
    Ok(out.finish(start))
}

// ---------------------------------------------------------------- nonlinear-eigenvalue constant

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AppendixRow {
    pub p: f64,
    pub k_infinity: f64,
    pub ln_k0: f64,
    pub ln_k1: f64,
    pub ln_k2: f64,
    pub ln_gamma: f64,
    pub ln_m_term: f64,
    pub ln_b0: f64,
    pub ln_a: f64,
    pub ln_s: f64,
    pub ln_t: f64,
    pub ln_k_kroger: f64,
    pub pi_p: f64,
}

const APPENDIX_COLUMNS: [&str; 13] = [
    "p",
    "k_infinity",
    "ln_k0",
    "ln_k1",
    "ln_k2",
    "ln_gamma",
    "ln_m_term",
    "ln_b0",
    "ln_a",
    "ln_s",
    "ln_t",
    "ln_k_kroger",
    "pi_p",
];

pub fn default_p_ladder() -> Vec<f64> {
    vec![1.5, 1.3, 1.1, 1.05, 1.01]
}

/// Ratio `K0(min p) / K0(max p)` required by the appendix campaign.
pub const APPENDIX_RATIO: f64 = 1e-6;

fn appendix_row(p: f64, k_infinity: f64) -> Result<AppendixRow> {
    let k = k0_constant(&AppendixParams { k_infinity, ..AppendixParams::new(p) })?;
    Ok(AppendixRow {
        p,
        k_infinity,
        ln_k0: k.k0,
        ln_k1: k.k1,
        ln_k2: k.k2,
        ln_gamma: k.gamma,
        ln_m_term: k.m_term,
        ln_b0: k.b0,
        ln_a: k.a,
        ln_s: k.s,
        ln_t: k.t,
        ln_k_kroger: k.k_kroger,
        pi_p: k.pi_p.exp(),
    })
}

/// Table of the constant along a decreasing `p` ladder, with monotonicity and ratio checks.
/// All values are natural logarithms since the constant underflows.
pub fn campaign_appendix(ladder: &[f64], k_infinity: f64, ratio: f64) -> Result<CampaignResult> {
    let start = Instant::now();
    if ladder.len() < 2 || !strictly_decreasing(ladder) || ladder.iter().any(|&p| !(p > 1.0)) {
        return Err(Error::DomainError("p ladder must decrease strictly and stay above 1".into()));
    }
    if !(ratio > 0.0 && ratio < 1.0) {
        return Err(Error::DomainError(format!("ratio threshold {ratio} must lie in (0, 1)")));
    }
    let mut out = CampaignResult::new("appendix", 0);
    out.tolerances.insert("ratio".into(), ratio);
    out.tolerances.insert("k_infinity".into(), k_infinity);
    let rows: Vec<AppendixRow> = ladder.iter().map(|&p| appendix_row(p, k_infinity)).collect::<Result<_>>()?;
    let logs: Vec<f64> = rows.iter().map(|r| r.ln_k0).collect();
    out.checks.push(Check::new("strictly_decreasing", strictly_decreasing(&logs), format!("ln K0 {}", fmt_list(&logs))));
    let ln_ratio = logs[logs.len() - 1] - logs[0];
    out.checks.push(Check::new(
        "ratio_below_threshold",
        ln_ratio < ratio.ln(),
        format!("ln(K0(p_min)/K0(p_max)) = {ln_ratio:.6e}, threshold ln {ratio:e} = {:.4}", ratio.ln()),
    ));
    let pi2 = pi_p(2.0)?;
    out.checks.push(Check::new("pi_p_at_two", (pi2 - PI).abs() <= 1e-12, format!("pi_p(2) = {pi2:.15}")));
    let doubled: Vec<f64> = ladder.iter().map(|&p| appendix_row(p, 2.0 * k_infinity).map(|r| r.ln_k0)).collect::<Result<_>>()?;
    let pattern = |v: &[f64]| v.windows(2).map(|w| w[1] < w[0]).collect::<Vec<bool>>();
    let changed = doubled.iter().zip(&logs).any(|(a, b)| a != b);
    out.checks.push(Check::new(
        "k_infinity_invariance",
        changed && pattern(&doubled) == pattern(&logs),
        format!("ln K0 at doubled K_infinity {}", fmt_list(&doubled)),
    ));
    let tail: Vec<f64> = (9..=20).map(|k| k0_constant(&AppendixParams { k_infinity, ..AppendixParams::new(1.0 + 0.5f64.powi(k)) }).map(|r| r.k0)).collect::<Result<_>>()?;
    out.checks.push(Check::info(
        "tail_toward_one",
        format!(
            "ln K0 at p = 1 + 2^-k, k = 9..20: {} (strictly decreasing: {})",
            fmt_list(&tail),
            strictly_decreasing(&tail)
        ),
    ));
    out.set_records(&rows, &rows, &APPENDIX_COLUMNS)?;
    Ok(out.finish(start))
}

// ---------------------------------------------------------------- equipartition

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellRow {
    pub index: usize,
    pub area: f64,
    pub mass_u: f64,
    pub mass_abs: f64,
    pub mass_phi: f64,
    pub vertices: String,
}

/// Fields available to the partition campaign on the unit square.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PartitionField {
    /// `sin(2 pi x) sin(2 pi y)`.
    SinSin,
    /// `x - 1/2`.
    Uniform,
}

/// Tolerance of the cell mass constraints.
pub const PARTITION_TOL: f64 = 1e-5;
/// Tolerance of the gradient-ratio decomposition.
pub const DECOMPOSITION_TOL: f64 = 1e-4;

/// Equipartition of a field on the unit square into `2^depth` cells.
pub fn campaign_partition(depth: u32, field: PartitionField) -> Result<CampaignResult> {
    let start = Instant::now();
    let mut out = CampaignResult::new("partition", 0);
    out.tolerances.insert("mass".into(), PARTITION_TOL);
    out.tolerances.insert("decomposition".into(), DECOMPOSITION_TOL);
    let square =
        ConvexBody2D::polygon(vec![Point::new(0.0, 0.0), Point::new(1.0, 0.0), Point::new(1.0, 1.0), Point::new(0.0, 1.0)])?;
    let uniform = AffineField { a: Point::new(1.0, 0.0), b: -0.5 };
    let f: &dyn ScalarField = match field {
        PartitionField::SinSin => &SinSinField,
        PartitionField::Uniform => &uniform,
    };
    let cells = equipartition(&square, f, depth)?;
    let total: f64 = cells.iter().map(|c| c.mass_abs).sum();
    let target = total / cells.len() as f64;
    let mean_dev = cells.iter().map(|c| c.mass_u.abs() / c.mass_abs).fold(0.0, f64::max);
    let mass_dev = cells.iter().map(|c| (c.mass_abs - target).abs() / target).fold(0.0, f64::max);
    out.checks.push(Check::new("zero_mean", mean_dev <= PARTITION_TOL, format!("largest |mean|/mass {mean_dev:.3e}")));
    out.checks.push(Check::new("equal_mass", mass_dev <= PARTITION_TOL, format!("largest relative deviation {mass_dev:.3e}")));
    let rep = decomposition_identity(&cells, f);
    out.checks.push(Check::new(
        "decomposition",
        rep.rel_defect <= DECOMPOSITION_TOL,
        format!("whole {:.10} cell mean {:.10} relative defect {:.3e}", rep.whole, rep.cell_mean, rep.rel_defect),
    ));
    let areas = cell_area_report(&cells);
    let area_sum: f64 = areas.fractions.iter().sum::<f64>() / cells.len() as f64;
    out.checks.push(Check::new(
        "tiling",
        (area_sum - 1.0).abs() <= 1e-12 && areas.min_fraction > 0.0,
        format!("smallest area fraction {:.4}", areas.min_fraction),
    ));
    let rows: Vec<CellRow> = cells
        .iter()
        .enumerate()
        .map(|(i, c)| CellRow {
            index: i,
            area: crate::convex2d::polygon_area(c.vertices()).abs(),
            mass_u: c.mass_u,
            mass_abs: c.mass_abs,
            mass_phi: c.mass_phi,
            vertices: c.vertices().iter().map(|p| format!("{} {}", p.x, p.y)).collect::<Vec<_>>().join(";"),
        })
        .collect();
    out.set_records(&rows, &rows, &["index", "area", "mass_u", "mass_abs", "mass_phi", "vertices"])?;
    Ok(out.finish(start))
}

// ---------------------------------------------------------------- emission

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Csv,
    Json,
}

/// Pretty-printed manifest `{campaign, seed, tolerances, pass, checks, failures, records}`.
pub fn manifest_json(result: &CampaignResult) -> Result<String> {
    let mut s = serde_json::to_string_pretty(result)?;
    s.push('\n');
    Ok(s)
}

/// Two-column CSV of a series.
pub fn series_csv(series: &Series) -> Result<String> {
    to_csv(&series.points, &[series.x_label.as_str(), series.y_label.as_str()])
}

/// Write `<campaign>.json`, plus `<campaign>.csv` in CSV format, plus one
/// `<campaign>_<series>.csv` per plot-ready series. Returns the written paths.
pub fn emit(result: &CampaignResult, format: Format, dir: &Path) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let mut written = Vec::new();
    let manifest = dir.join(format!("{}.json", result.campaign));
    fs::write(&manifest, manifest_json(result)?)?;
    written.push(manifest);
    if format == Format::Csv {
        let table = dir.join(format!("{}.csv", result.campaign));
        fs::write(&table, &result.csv)?;
        written.push(table);
    }
    for s in &result.series {
        let path = dir.join(format!("{}_{}.csv", result.campaign, s.name));
        fs::write(&path, series_csv(s)?)?;
        written.push(path);
    }
    Ok(written)
}
