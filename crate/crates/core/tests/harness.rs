use std::f64::consts::PI;
use std::process::Command;

use poincare_core::convex2d::Point;
use poincare_core::fencesolver::{truncated_disc_sigma1_exact, SolverOptions, Which};
use poincare_core::harness::*;
use poincare_core::Error;

fn cfg() -> CampaignConfig {
    CampaignConfig { seed: 11, tol: None, grid: 16, solver: SolverOptions::default() }
}

#[test]
fn every_kind_parses() {
    let text = r#"[
        {"kind": "polygon", "params": {"vertices": [[0,0],[1,0],[0,1]]}, "normalize": true},
        {"kind": "disc", "params": {"radius": 0.5, "center": [1, 2]}, "normalize": false},
        {"kind": "truncated_disc", "params": {"rho": 0.25}, "normalize": false},
        {"kind": "reuleaux", "params": {"n": 5}, "normalize": false},
        {"kind": "curvature_samples", "params": {"samples": [0.5, 0.5, 0.5, 0.5]}, "normalize": false},
        {"kind": "random", "params": {"seed": 3, "n": 6}, "normalize": true}
    ]"#;
    let specs = parse_specs(text).unwrap();
    assert_eq!(specs.len(), 6);
    for s in &specs {
        let body = s.to_body().unwrap();
        assert!(body.area() > 0.0, "{:?}", s.kind);
    }
    let tri = specs[0].to_body().unwrap();
    assert!((tri.diameter() - 1.0).abs() < 1e-12);
    let single = parse_specs(r#"{"kind": "disc", "params": {"radius": 1.0}, "normalize": false}"#).unwrap();
    assert_eq!(single, vec![BodySpec::disc(1.0)]);
}

#[test]
fn malformed_specs_are_input_errors() {
    let bad = [
        "not json",
        r#"{"kind": "hexagon", "params": {}, "normalize": false}"#,
        r#"{"kind": "disc", "params": {"diameter": 1}, "normalize": false}"#,
        r#"{"kind": "disc", "params": {"radius": 1}, "normalize": false, "extra": 1}"#,
        r#"{"kind": "reuleaux", "params": {"n": 4}, "normalize": false}"#,
        r#"{"kind": "polygon", "params": {"vertices": [[0,0],[1,0],[2,0]]}, "normalize": false}"#,
    ];
    for text in bad {
        let err = parse_specs(text).and_then(|s| s[0].to_body().map(|_| ())).unwrap_err();
        assert!(err.is_input_error(), "{text}: {err:?}");
    }
    let missing = read_specs(std::path::Path::new("/nonexistent/spec.json")).unwrap_err();
    assert!(missing.is_input_error());
}

#[test]
fn spec_round_trips_through_json() {
    let specs = vec![
        BodySpec::polygon(&[Point::new(0.0, 0.0), Point::new(1.0, 0.0), Point::new(0.3, 0.7)], true),
        BodySpec::truncated_disc(0.1),
        BodySpec::reuleaux(3),
        BodySpec::random(9, 5, 0.05),
    ];
    let text = serde_json::to_string(&specs).unwrap();
    assert_eq!(parse_specs(&text).unwrap(), specs);
}

#[test]
fn disc_and_truncated_disc_match_closed_forms() {
    let opts = SolverOptions::default();
    let disc = run_fence("d", &BodySpec::disc(0.5), Which::Sigma1, &opts, 16).unwrap();
    assert!((disc.row.value - 8.0 / PI).abs() < 1e-4);
    assert!(disc.row.oracle_gap.unwrap() >= 0.0);
    let t = run_fence("t", &BodySpec::truncated_disc(0.3), Which::Sigma1, &opts, 0).unwrap();
    assert!((t.row.value - truncated_disc_sigma1_exact(0.3).unwrap()).abs() < 1e-4);
    assert!(t.row.oracle_gap.is_none());
    assert!(t.row.margin.unwrap() > 0.0);
}

#[test]
fn fence_csv_has_the_documented_columns() {
    let r = campaign_fence(&[BodySpec::disc(0.5)], Which::Sigma1, &cfg()).unwrap();
    let header = r.csv.lines().next().unwrap();
    assert_eq!(header, FENCE_COLUMNS.join(","));
    assert_eq!(r.csv.lines().count(), 2);
}

#[test]
fn same_seed_gives_identical_bytes() {
    let a = campaign_bonnesen(&cfg(), 4).unwrap();
    let b = campaign_bonnesen(&cfg(), 4).unwrap();
    assert_eq!(a.csv, b.csv);
    assert_eq!(manifest_json(&a).unwrap(), manifest_json(&b).unwrap());
    let other = campaign_bonnesen(&CampaignConfig { seed: 12, ..cfg() }, 4).unwrap();
    assert_ne!(a.csv, other.csv);
}

#[test]
fn manifest_parses_back_unchanged() {
    let r = campaign_bonnesen(&cfg(), 3).unwrap();
    let text = manifest_json(&r).unwrap();
    let back: CampaignResult = serde_json::from_str(&text).unwrap();
    assert_eq!(back.records, r.records);
    assert_eq!(back.checks, r.checks);
    assert_eq!(back.seed, r.seed);
    assert_eq!(manifest_json(&back).unwrap(), text);
}

#[test]
fn emit_writes_manifest_csv_and_series() {
    let dir = std::env::temp_dir().join(format!("poincare-emit-{}", std::process::id()));
    let r = campaign_series(&default_series_grid()).unwrap();
    let files = emit(&r, Format::Csv, &dir).unwrap();
    assert!(files.iter().any(|p| p.ends_with("series.json")));
    assert!(files.iter().any(|p| p.ends_with("series.csv")));
    assert!(files.len() >= 2 + r.series.len());
    for f in &files {
        assert!(f.exists());
    }
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn empty_campaigns_pass_with_headers() {
    let r = campaign_bonnesen(&cfg(), 0).unwrap();
    assert!(r.pass);
    assert!(r.records.is_empty());
    assert_eq!(r.csv.lines().count(), 1);
    let f = campaign_fence(&[], Which::Sigma1, &cfg()).unwrap();
    assert!(f.pass);
}

#[test]
fn narrow_series_grid_is_ill_conditioned() {
    let rhos: Vec<f64> = (0..10).map(|i| 0.1 + 1e-7 * i as f64).collect();
    assert!(matches!(fit_series(&rhos, SERIES_TERMS), Err(Error::IllConditioned(_))));
}

#[test]
fn perturb_rejects_non_decreasing_ladder() {
    assert!(matches!(campaign_perturb(&[1e-3, 1e-2]), Err(Error::DomainError(_))));
}

#[test]
fn small_oned_campaign_passes() {
    let r = campaign_oned(&cfg(), 3, &[1, 2]).unwrap();
    assert!(r.pass, "{:?}", r.checks);
}

fn cli(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_poincare-fence")).args(args).output().unwrap();
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap())
}

#[test]
fn cli_exit_codes() {
    let dir = std::env::temp_dir().join(format!("poincare-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let good = dir.join("good.json");
    std::fs::write(&good, r#"{"kind": "disc", "params": {"radius": 0.5}, "normalize": false}"#).unwrap();
    let bad = dir.join("bad.json");
    std::fs::write(&bad, r#"{"kind": "disc", "params": {"radius": -1}, "normalize": false}"#).unwrap();

    let (code, out) = cli(&["fence", good.to_str().unwrap(), "--grid", "8"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("instance_id,kind,diameter"));
    let (code, out) = cli(&["--format", "json", "fence", good.to_str().unwrap(), "--grid", "8"]);
    assert_eq!(code, 0);
    assert_eq!(serde_json::from_str::<serde_json::Value>(&out).unwrap()["campaign"], "fence");
    assert_eq!(cli(&["fence", bad.to_str().unwrap()]).0, 2);
    assert_eq!(cli(&["fence", dir.join("missing.json").to_str().unwrap()]).0, 2);
    assert_eq!(cli(&["--tol", "-1", "verify", "series"]).0, 2);
    assert_eq!(cli(&["bogus-command"]).0, 2);
    assert_eq!(cli(&["verify", "series"]).0, 0);
    assert_eq!(cli(&["perturb", "--eps", "0.001,0.01"]).0, 2);
    // The exponent ladder is not monotone at these exponents, so the check fails.
    assert_eq!(cli(&["appendix"]).0, 1);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn cli_output_is_deterministic() {
    let a = cli(&["--seed", "5", "--grid", "8", "verify", "bonnesen", "--count", "3"]);
    let b = cli(&["--seed", "5", "--grid", "8", "verify", "bonnesen", "--count", "3"]);
    assert_eq!(a, b);
    assert_eq!(a.0, 0);
}
