//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit when any criterion fails.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::Instant;

use poincare_core::convex2d::Point;
use poincare_core::fencesolver::{truncated_disc_sigma1_exact, SolverOptions, Which};
use poincare_core::harness::*;
use poincare_core::Result;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Result<Outcome> {
    Ok(Outcome { pass, detail: detail.into() })
}

/// Pass when every named check of the campaign passed.
fn from_checks(r: &CampaignResult, names: &[&str]) -> Result<Outcome> {
    let mut pass = true;
    let mut parts = Vec::new();
    for name in names {
        match r.check(name) {
            Some(c) => {
                pass &= c.pass;
                parts.push(format!("{} {}: {}", if c.pass { "ok" } else { "FAILED" }, c.name, c.detail));
            }
            None => {
                pass = false;
                parts.push(format!("missing check {name}"));
            }
        }
    }
    for f in r.failures.iter().take(5) {
        parts.push(format!("replay {} [{}]: {}", f.instance_id, f.check, f.detail));
    }
    outcome(pass, parts.join("\n      "))
}

fn within(value: f64, target: f64, tol: f64) -> bool {
    (value - target).abs() <= tol
}

fn disc(cfg: &CampaignConfig) -> Result<Outcome> {
    let start = Instant::now();
    let spec = BodySpec::disc(0.5);
    let s = run_fence("disc", &spec, Which::Sigma1, &cfg.solver, 0)?.row.value;
    let m = run_fence("disc", &spec, Which::Mu1, &cfg.solver, 0)?.row.value;
    let t = start.elapsed().as_secs_f64();
    let target = 8.0 / PI;
    outcome(
        within(s, target, 1e-4) && within(m, target, 2e-3) && t < 10.0,
        format!("sigma1 {s:.8} mu1 {m:.8} target {target:.8}, {t:.2} s"),
    )
}

fn triangle(cfg: &CampaignConfig) -> Result<Outcome> {
    let start = Instant::now();
    let h = 3f64.sqrt() / 2.0;
    let spec = BodySpec::polygon(&[Point::new(0.0, 0.0), Point::new(1.0, 0.0), Point::new(0.5, h)], false);
    let s = run_fence("triangle", &spec, Which::Sigma1, &cfg.solver, 0)?.row.value;
    let m = run_fence("triangle", &spec, Which::Mu1, &cfg.solver, 0)?.row.value;
    let t = start.elapsed().as_secs_f64();
    let mu_target = 4.0 * (PI / (3.0 * 3f64.sqrt())).sqrt();
    let sigma_cap = 3f64.powf(0.75) * (PI / 2.0).sqrt();
    outcome(
        within(m, mu_target, 1e-3) && s < m && s <= sigma_cap + 1e-3 && t < 30.0,
        format!("sigma1 {s:.6} (cap {sigma_cap:.6}) mu1 {m:.6} (target {mu_target:.6}), {t:.2} s"),
    )
}

fn truncated(cfg: &CampaignConfig) -> Result<Outcome> {
    let mut worst: f64 = 0.0;
    for rho in [0.05, 0.1, 0.2, 0.3, 0.4, 0.5] {
        let v = run_fence("truncated", &BodySpec::truncated_disc(rho), Which::Sigma1, &cfg.solver, 0)?.row.value;
        worst = worst.max((v - truncated_disc_sigma1_exact(rho)?).abs());
    }
    outcome(worst <= 1e-3, format!("largest deviation from the closed form {worst:.3e}"))
}

type Criterion = fn(&CampaignConfig) -> Result<Outcome>;

fn main() -> ExitCode {
    let cfg = CampaignConfig { seed: DEFAULT_SEED, tol: None, grid: DEFAULT_ORACLE_GRID, solver: SolverOptions::default() };
    // Campaigns shared by several criteria run once, when first needed.
    let oned = std::cell::OnceCell::new();
    let perturb = std::cell::OnceCell::new();
    let oned_run = || oned.get_or_init(|| campaign_oned(&cfg, 200, &[1, 2, 3]));
    let perturb_run = || perturb.get_or_init(|| campaign_perturb(&default_eps_ladder()));

    let mut failed = 0;
    let mut report = |n: usize, name: &str, run: &dyn Fn() -> Result<Outcome>| {
        let start = Instant::now();
        let res = run();
        let t = start.elapsed().as_secs_f64();
        let (pass, detail) = match res {
            Ok(o) => (o.pass, o.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        if !pass {
            failed += 1;
        }
        println!("{} criterion {n:2} {name} ({t:.1} s)\n      {detail}", if pass { "PASS" } else { "FAIL" });
    };

    let direct: [(&str, Criterion); 3] =
        [("disc sharp constant", disc), ("triangle constants", triangle), ("truncated-disc closed form", truncated)];
    for (i, (name, f)) in direct.iter().enumerate() {
        report(i + 1, name, &|| f(&cfg));
    }
    report(4, "series coefficients", &|| from_checks(&campaign_series(&default_series_grid())?, &["c1", "c2", "c3"]));
    report(5, "bonnesen sweep", &|| {
        let r = campaign_bonnesen(&cfg, 200)?;
        let o = from_checks(&r, &["lower_bound", "oracle_dominates", "degenerate_margin"])?;
        outcome(o.pass && r.wall_time_s < 600.0, o.detail)
    });
    report(6, "constant-width sweep", &|| {
        let r = campaign_constwidth(&cfg, 50)?;
        let o = from_checks(&r, &["lower_bound", "ball_equality", "strict_for_non_balls"])?;
        outcome(o.pass && r.wall_time_s < 600.0, o.detail)
    });
    report(7, "one-dimensional property suite", &|| {
        let r = oned_run().clone()?;
        from_checks(&r, &["power_max_j", "log_concave_parabola", "exponential_closed_form", "two_cut_oracle"])
    });
    report(8, "refined one-dimensional margins", &|| {
        from_checks(&oned_run().clone()?, &["parabola_margin", "quarter_margin", "slope_excess"])
    });
    report(9, "singular perturbation", &|| {
        let r = perturb_run().clone()?;
        let o = from_checks(&r, &["ratio_increasing", "omega_band", "theta_decreasing"])?;
        outcome(o.pass && r.wall_time_s < 60.0, o.detail)
    });
    report(10, "shape derivative", &|| from_checks(&perturb_run().clone()?, &["shape_derivative"]));
    report(11, "balancing profile", &|| from_checks(&perturb_run().clone()?, &["balancing_profile"]));
    report(12, "exponent ladder", &|| {
        from_checks(
            &campaign_appendix(&default_p_ladder(), 1.0, APPENDIX_RATIO)?,
            &["strictly_decreasing", "ratio_below_threshold"],
        )
    });
    report(13, "equipartition", &|| {
        from_checks(&campaign_partition(3, PartitionField::SinSin)?, &["zero_mean", "equal_mass", "decomposition"])
    });

    println!("{failed} of 13 criteria failed");
    if failed == 0 { ExitCode::SUCCESS } else { ExitCode::FAILURE }
}
