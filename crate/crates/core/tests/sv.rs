use volstat::dist::quad::integrate;
use volstat::sv::{
    autocovariance_theory, estimate_params, fit_decay, simulate, simulate_paths, var_rv_reduced,
    var_rv_theory, InitialVariance, Model, Preset, SVParams, SvError,
};
use volstat::stats::{mean, pairwise_sum};

#[test]
fn closed_form_matches_double_integral() {
    // E[(T⁻¹∫v − θ)²] = (2/T²) ∫₀ᵀ (T − τ) C(τ) dτ
    for preset in [Preset::Heston, Preset::Multiplicative] {
        let p = preset.params();
        for t in [0.5, 5.0, 21.0, 63.0, 500.0] {
            let q = integrate(
                |tau| (t - tau) * autocovariance_theory(&p, tau).unwrap(),
                0.0,
                t,
                0.0,
                1e-13,
                200,
            );
            let oracle = 2.0 * q.value / (t * t);
            let closed = var_rv_theory(&p, t).unwrap();
            assert!((closed / oracle - 1.0).abs() < 1e-11, "{preset:?} T={t}");
        }
    }
}

#[test]
fn reduced_curve_is_decreasing_and_bounded() {
    let mut prev = 1.0;
    for i in 0..400 {
        let x = 1e-4 * 1.05f64.powi(i);
        let r = var_rv_reduced(x);
        assert!(r > 0.0 && r < 1.0 && r < prev, "x = {x}");
        prev = r;
    }
}

#[test]
fn independent_seeds_are_uncorrelated() {
    let p = Preset::Heston.params();
    let steps = 40_000;
    let a = simulate(p, p.theta, 0.1, steps, 1).unwrap();
    let b = simulate(p, p.theta, 0.1, steps, 2).unwrap();
    let incr = |v: &[f64]| v.windows(2).map(|w| w[1] - w[0]).collect::<Vec<_>>();
    let (da, db) = (incr(&a.values), incr(&b.values));
    let (ma, mb) = (mean(&da), mean(&db));
    let cov = pairwise_sum(&da.iter().zip(&db).map(|(x, y)| (x - ma) * (y - mb)).collect::<Vec<_>>());
    let va = pairwise_sum(&da.iter().map(|x| (x - ma).powi(2)).collect::<Vec<_>>());
    let vb = pairwise_sum(&db.iter().map(|y| (y - mb).powi(2)).collect::<Vec<_>>());
    let corr = cov / (va * vb).sqrt();
    assert!(corr.abs() < 3.0 / (steps as f64).sqrt(), "{corr}");
    assert_eq!(a, simulate(p, p.theta, 0.1, steps, 1).unwrap());
}

#[test]
fn heston_paths_stay_nonnegative_without_feller() {
    let p = SVParams::new(Model::Heston, 1e-4, 0.05, 1e-2).unwrap();
    assert!(!p.feller());
    let paths = simulate_paths(p, InitialVariance::Fixed(1e-4), 0.1, 5000, 16, 3).unwrap();
    assert!(paths.iter().flat_map(|p| &p.values).all(|&v| v >= 0.0));
    assert!(paths.iter().flat_map(|p| &p.values).any(|&v| v == 0.0));
}

#[test]
fn short_or_flat_proxies_rejected() {
    assert!(matches!(
        estimate_params(&[1e-4; 10], Model::Heston),
        Err(SvError::TooShort { .. })
    ));
    let flat = vec![1e-4; 2000];
    assert!(estimate_params(&flat, Model::Heston).is_err());
}

#[test]
fn decay_fit_recovers_daily_rate() {
    // unit steps: autocovariance decays as (1 − γ)^τ
    let p = Preset::Heston.params();
    let path = simulate(p, p.theta, 1.0, 200_000, 17).unwrap();
    let fit = fit_decay(&path.values).unwrap();
    assert!((fit.gamma / p.gamma - 1.0).abs() < 0.1, "{}", fit.gamma);
}
