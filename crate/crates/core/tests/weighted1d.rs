use approx::assert_abs_diff_eq;
use poincare_core::weighted1d::*;
use poincare_core::Error;
use proptest::prelude::*;

const K: usize = DEFAULT_SAMPLES;

#[test]
fn exponential_weight_matches_closed_form() {
    for a in [-3.0, -0.5, 1.0, 2.5, 6.0] {
        let w = Weight1D::from_fn(|t| (a * t).exp(), K).unwrap();
        for x in [0.01, 0.1, 0.3, 0.5, 0.77, 0.99] {
            let exact = j_exponential(a, x);
            let got = w.j_rho(x).unwrap();
            assert!((got - exact).abs() <= 1e-8 * exact, "a {a} x {x}: {got} vs {exact}");
        }
    }
}

#[test]
fn linear_weight_constant() {
    let w = Weight1D::from_fn(|t| t, K).unwrap().with_concavity(Concavity::Power(1)).unwrap();
    let s = sigma1_1d(&w).unwrap();
    // Dense scan of the analytic J(x) = x (1 - x^2) / 2.
    let n = 1_000_000;
    let jmax = (1..n).map(|i| i as f64 / n as f64).map(|x| x * (1.0 - x * x) / 2.0).fold(0.0, f64::max);
    assert_abs_diff_eq!(s.value, 1.0 / (2.0 * jmax), epsilon = 1e-8);
    assert_abs_diff_eq!(s.value, 1.5 * 3f64.sqrt(), epsilon = 1e-8);
    assert_abs_diff_eq!(s.cut, 1.0 / 3f64.sqrt(), epsilon = 1e-4);
}

#[test]
fn rescaled_interval() {
    let w = Weight1D::from_fn(|t| 1.0 + t - 0.5 * t * t, 20_001).unwrap();
    let base = sigma1_1d(&w).unwrap().value;
    let scaled = sigma1_1d(&w.clone().with_length(0.8).unwrap()).unwrap().value;
    assert_abs_diff_eq!(scaled, base / 0.8, epsilon = 1e-8 * base);
}

#[test]
fn log_concave_equality_and_strictness() {
    let c = Weight1D::from_fn(|_| 3.0, 10_001).unwrap();
    let r = logconcave_bound_check(&c).unwrap();
    assert!(r.constant);
    assert!(r.max_margin.abs() <= 1e-12);
    let g = Weight1D::from_fn(|t| (-t * t).exp(), 10_001).unwrap();
    let r = logconcave_bound_check(&g).unwrap();
    assert!(!r.constant);
    assert!(r.max_margin < 0.0);
    let bad = Weight1D::from_fn(|t| 2.0 + (2.0 * std::f64::consts::PI * t).cos(), 10_001).unwrap();
    assert!(matches!(logconcave_bound_check(&bad), Err(Error::NotLogConcave(_))));
}

#[test]
fn margin_ii_cases() {
    let flat = Weight1D::from_fn(|_| 1.0, 10_001)
        .unwrap()
        .with_affine(AffinePart { delta: 0.1, intercept: 1.0, slope: 0.0 })
        .unwrap();
    assert_eq!(parabola_margin(&flat, 0.1).unwrap().value, f64::INFINITY);
    let w = Weight1D::from_fn(|t| 1.0 + t, 10_001)
        .unwrap()
        .with_affine(AffinePart { delta: 0.1, intercept: 1.0, slope: 1.0 })
        .unwrap();
    let m = parabola_margin(&w, 0.1).unwrap();
    assert!(m.value > 0.0 && m.value.is_finite());
    let m2 = parabola_margin(&w.normalized(), 0.1).unwrap();
    assert_abs_diff_eq!(m.value, m2.value, epsilon = 1e-9 * m.value);
    assert!(parabola_margin(&Weight1D::from_fn(|t| 1.0 + t, 101).unwrap(), 0.1).is_err());
}

#[test]
fn margin_iii_cases() {
    let one = Weight1D::from_fn(|_| 1.0, 10_001).unwrap().with_concavity(Concavity::Power(1)).unwrap();
    assert_eq!(quarter_margin(&one, 0.2).unwrap().value, f64::INFINITY);
    let tent = Weight1D::from_fn(|t| (std::f64::consts::PI * t).sin(), 10_001)
        .unwrap()
        .with_concavity(Concavity::Power(1))
        .unwrap();
    let m = quarter_margin(&tent, 0.2).unwrap();
    assert!(m.value > 0.0);
    // Exponential weight: the margin is the infimum of (1/4 - J) / a^2 in closed form.
    let a: f64 = 2.0;
    let w = Weight1D::from_fn(|t| (a * (t - 1.0)).exp(), K).unwrap().with_concavity(Concavity::Log).unwrap();
    let m = quarter_margin(&w, 0.1).unwrap();
    let exact = (1..K - 1)
        .map(|j| j as f64 / (K - 1) as f64)
        .filter(|&x| x > 0.1 && x < 0.9)
        .map(|x| (0.25 - j_exponential(a, x)) / (a * a))
        .fold(f64::INFINITY, f64::min);
    assert_abs_diff_eq!(m.value, exact, epsilon = 1e-6 * exact);
}

#[test]
fn slope_excess_cases() {
    let flat = Weight1D::from_fn(|_| 1.0, 10_001)
        .unwrap()
        .with_affine(AffinePart { delta: 0.1, intercept: 1.0, slope: 0.0 })
        .unwrap();
    let r = slope_excess_check(&flat, 0.1).unwrap();
    assert!(r.pass && r.c_tilde.is_none());
    let w = Weight1D::from_fn(|t| 1.0 + 0.3 * t, 20_001)
        .unwrap()
        .with_affine(AffinePart { delta: 0.1, intercept: 1.0, slope: 0.3 })
        .unwrap();
    let r = slope_excess_check(&w, 0.1).unwrap();
    assert!(r.hypothesis_met && r.c_tilde.unwrap() > 0.0);
    let scaled = slope_excess_check(&w.clone().with_length(0.8).unwrap(), 0.1).unwrap();
    assert!(scaled.hypothesis_met);
    assert_abs_diff_eq!(scaled.c_tilde.unwrap(), r.c_tilde.unwrap(), epsilon = 1e-6);
}

#[test]
fn power_concave_corpus() {
    for seed in 0..60 {
        for m in 1..=3 {
            let w = random_power_concave(seed, m, K).unwrap();
            let (_, jmax) = max_j(&w);
            assert!(jmax <= 0.25 + 1e-9, "seed {seed} m {m}: {jmax}");
            let s = sigma1_1d(&w).unwrap();
            assert!(s.value >= 2.0 - 1e-8);
            assert_abs_diff_eq!(s.value * 2.0 * jmax, 1.0, epsilon = 1e-12);
        }
    }
}

#[test]
fn log_concave_corpus() {
    for seed in 0..60 {
        let w = random_log_concave(seed, K).unwrap();
        let r = logconcave_bound_check(&w).unwrap();
        assert!(r.max_margin <= 1e-9, "seed {seed}: {}", r.max_margin);
        sigma1_1d(&w).unwrap();
    }
}

#[test]
fn k0_tends_to_zero_near_one() {
    let logs: Vec<f64> =
        (9..=20).map(|k| k0_constant(&AppendixParams::new(1.0 + 0.5f64.powi(k))).unwrap().k0).collect();
    assert!(logs.windows(2).all(|w| w[1] < w[0]), "{logs:?}");
    assert!(*logs.last().unwrap() < -1e12);
    for kinf in [0.5, 2.0] {
        let p = AppendixParams { k_infinity: kinf, ..AppendixParams::new(1.0) };
        let logs: Vec<f64> =
            (10..=20).map(|k| k0_constant(&AppendixParams { p: 1.0 + 0.5f64.powi(k), ..p }).unwrap().k0).collect();
        assert!(logs.windows(2).all(|w| w[1] < w[0]));
    }
    assert!(k0_constant(&AppendixParams::new(1.0)).is_err());
}

#[test]
fn k0_intermediates_are_consistent() {
    let k = k0_constant(&AppendixParams::new(2.0)).unwrap();
    assert_abs_diff_eq!(k.pi_p.exp(), std::f64::consts::PI, epsilon = 1e-13);
    // With p = 2 and m = 1: gamma = (pi^2 + 1) / (1/12)^(1/2).
    let gamma = (std::f64::consts::PI.powi(2) + 1.0) * 12f64.sqrt();
    assert_abs_diff_eq!(k.gamma.exp(), gamma, epsilon = 1e-10 * gamma);
    assert_abs_diff_eq!(k.k_kroger.exp(), 3.0 * 2f64.powf(4.0) * 16.0, epsilon = 1e-10);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn acosta_duran_bound(seed in 0u64..1_000_000, m in 1u32..=3) {
        let w = random_power_concave(seed, m, 20_001).unwrap();
        let (_, jmax) = max_j(&w);
        prop_assert!(jmax <= 0.25 + 1e-9);
    }

    #[test]
    fn single_cut_dominates(seed in 0u64..1_000_000, m in 1u32..=3) {
        let w = random_power_concave(seed, m, 20_001).unwrap();
        let s = sigma1_1d(&w).unwrap();
        prop_assert!(s.two_cut >= s.value * (1.0 - 1e-9));
    }

    #[test]
    fn log_concave_below_parabola(seed in 0u64..1_000_000) {
        let w = random_log_concave(seed, 20_001).unwrap();
        prop_assert!(logconcave_bound_check(&w).unwrap().max_margin <= 1e-9);
    }

    #[test]
    fn j_is_scale_invariant(seed in 0u64..1_000_000, c in 0.01f64..100.0, x in 0.01f64..0.99) {
        let w = random_log_concave(seed, 2001).unwrap();
        let v = Weight1D::new(w.samples().iter().map(|s| s * c).collect()).unwrap();
        let (a, b) = (w.j_rho(x).unwrap(), v.j_rho(x).unwrap());
        prop_assert!((a - b).abs() <= 1e-12 * a);
    }

    #[test]
    fn affine_weights_have_positive_margins(slope in -0.8f64..0.8, delta in 0.05f64..0.2) {
        prop_assume!(slope.abs() > 1e-3);
        let w = Weight1D::from_fn(|t| 1.0 + slope * t, 20_001)
            .unwrap()
            .with_affine(AffinePart { delta, intercept: 1.0, slope })
            .unwrap();
        prop_assert!(parabola_margin(&w, delta).unwrap().value > 0.0);
        let r = slope_excess_check(&w, delta).unwrap();
        prop_assert!(r.pass);
    }
}
