use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Gamma, LogNormal, StandardNormal};
use volstat::dist::quad::integrate;
use volstat::dist::{
    fit_mle, ks_one_sample, ks_two_sample, normalize_by_mean, rank_families, Dist, Family,
};

fn brute_one(sample: &[f64], dist: &Dist) -> f64 {
    let n = sample.len() as f64;
    let mut d: f64 = 0.0;
    for &x in sample {
        let le = sample.iter().filter(|&&y| y <= x).count() as f64 / n;
        let lt = sample.iter().filter(|&&y| y < x).count() as f64 / n;
        let f = dist.cdf(x).unwrap();
        d = d.max((le - f).abs()).max((lt - f).abs());
    }
    d
}

fn brute_two(a: &[f64], b: &[f64]) -> f64 {
    let ecdf = |s: &[f64], x: f64| s.iter().filter(|&&v| v <= x).count() as f64 / s.len() as f64;
    a.iter()
        .chain(b)
        .map(|&x| (ecdf(a, x) - ecdf(b, x)).abs())
        .fold(0.0, f64::max)
}

fn lognormal_draws(n: usize, mu: f64, sigma: f64, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let d = LogNormal::new(mu, sigma).unwrap();
    (0..n).map(|_| d.sample(&mut rng)).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn one_sample_matches_brute_force(seed in any::<u64>(), n in 2usize..300) {
        let xs = lognormal_draws(n, 0.1, 0.7, seed);
        let dist = Dist::new(Family::Gamma, &[2.0, 0.6]).unwrap();
        let fast = ks_one_sample(&xs, &dist).unwrap();
        prop_assert!((fast - brute_one(&xs, &dist)).abs() < 1e-12);
        prop_assert!((0.0..=1.0).contains(&fast));
    }

    #[test]
    fn two_sample_matches_brute_force(
        a in prop::collection::vec(0i32..40, 2..200),
        b in prop::collection::vec(0i32..40, 2..200),
    ) {
        // small integer support forces ties
        let a: Vec<f64> = a.into_iter().map(f64::from).collect();
        let b: Vec<f64> = b.into_iter().map(f64::from).collect();
        let d = ks_two_sample(&a, &b).unwrap();
        prop_assert!((d - brute_two(&a, &b)).abs() < 1e-12);
        prop_assert_eq!(ks_two_sample(&a, &a).unwrap(), 0.0);
    }

    #[test]
    fn ks_invariant_under_increasing_transform(seed in any::<u64>(), n in 5usize..200) {
        // x ↦ ln x maps LogNormal(μ, σ) onto Normal(μ, σ)
        let xs = lognormal_draws(n, -0.2, 0.6, seed);
        let logs: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
        let ln_dist = Dist::new(Family::LogNormal, &[0.0, 0.5]).unwrap();
        let n_dist = Dist::new(Family::Normal, &[0.0, 0.5]).unwrap();
        let a = ks_one_sample(&xs, &ln_dist).unwrap();
        let b = ks_one_sample(&logs, &n_dist).unwrap();
        prop_assert!((a - b).abs() < 1e-12);
        let ys = lognormal_draws(n, 0.0, 0.6, seed ^ 1);
        let cubed = |v: &[f64]| v.iter().map(|x| x.powi(3)).collect::<Vec<_>>();
        prop_assert_eq!(ks_two_sample(&xs, &ys).unwrap(), ks_two_sample(&cubed(&xs), &cubed(&ys)).unwrap());
    }

    #[test]
    fn lognormal_inverse_symmetry(seed in any::<u64>()) {
        let xs = lognormal_draws(200, 0.3, 0.4, seed);
        let inv: Vec<f64> = xs.iter().map(|x| 1.0 / x).collect();
        let a = fit_mle(&xs, Family::LogNormal).unwrap();
        let b = fit_mle(&inv, Family::LogNormal).unwrap();
        prop_assert!((a.params[0] + b.params[0]).abs() < 1e-12);
        prop_assert!((a.params[1] - b.params[1]).abs() < 1e-12);
    }

    #[test]
    fn gamma_inverse_gamma_duality(seed in any::<u64>()) {
        let xs = lognormal_draws(300, 0.0, 0.5, seed);
        let inv: Vec<f64> = xs.iter().map(|x| 1.0 / x).collect();
        let iga = fit_mle(&xs, Family::InverseGamma).unwrap();
        let ga = fit_mle(&inv, Family::Gamma).unwrap();
        prop_assert!((iga.params[0] - ga.params[0]).abs() < 1e-9 * ga.params[0]);
        prop_assert!((iga.params[1] * ga.params[1] - 1.0).abs() < 1e-9);
        prop_assert!((iga.ks - ga.ks).abs() < 1e-12);
    }
}

#[test]
fn normalization_preserves_shape_and_ks() {
    let xs = lognormal_draws(500, 1.7, 0.45, 21);
    let (scaled, m) = normalize_by_mean(&xs);
    assert!((scaled.iter().sum::<f64>() / 500.0 - 1.0).abs() < 1e-12);
    for family in Family::CORE {
        let raw = fit_mle(&xs, family).unwrap();
        let norm = fit_mle(&scaled, family).unwrap();
        assert!((raw.ks - norm.ks).abs() < 1e-9, "{family}");
        match family {
            Family::Gamma | Family::InverseGamma => {
                assert!((raw.params[0] - norm.params[0]).abs() < 1e-9 * raw.params[0]);
                assert!((raw.params[1] / norm.params[1] - m).abs() < 1e-9 * m);
            }
            Family::Weibull => assert!((raw.params[1] - norm.params[1]).abs() < 1e-9),
            _ => {}
        }
    }
}

#[test]
fn gradient_at_mle_matches_finite_differences() {
    let xs = lognormal_draws(1000, -0.2, 0.59, 8);
    for family in Family::CORE {
        let fit = fit_mle(&xs, family).unwrap();
        let dist = fit.dist();
        let score = dist.mean_score(&xs).unwrap();
        // at the optimum both routes give ≈ 0; compare against a curvature scale
        for (i, s) in score.iter().enumerate() {
            let p = fit.params[i];
            let h = 1e-5 * p.abs().max(1e-2);
            let eval = |delta: f64| {
                let mut q = fit.params.clone();
                q[i] += delta;
                Dist::new(family, &q).unwrap().mean_log_likelihood(&xs).unwrap()
            };
            let fd = (eval(h) - eval(-h)) / (2.0 * h);
            let curvature = ((eval(h) - 2.0 * eval(0.0) + eval(-h)) / (h * h)).abs();
            assert!((fd - s).abs() <= 1e-4 * curvature * p.abs().max(1e-2), "{family} {i}: {fd} vs {s}");
            assert!(s.abs() * p.abs().max(1e-2) < 1e-8, "{family} {i}: {s}");
        }
    }
}

#[test]
fn degenerate_sample_reported() {
    let flat = vec![0.7; 50];
    for family in Family::CORE {
        assert_eq!(fit_mle(&flat, family).unwrap_err(), volstat::DistError::DegenerateSample);
    }
}

#[test]
fn lognormal_data_ranks_lognormal_first() {
    let xs = lognormal_draws(10_000, -0.2, 0.59, 42);
    let ranking = rank_families(&xs, &Family::CORE).unwrap();
    assert_eq!(ranking.best().family, Family::LogNormal);
}

#[test]
fn gamma_product_density_normalizes() {
    let dist = Dist::new(Family::GammaProduct, &[1.8, 5.5e-5]).unwrap();
    // substitute x = e^u to cover many decades
    let q = integrate(|u: f64| dist.pdf(u.exp()).unwrap() * u.exp(), -60.0, 0.0, 1e-12, 1e-10, 2000);
    assert!(q.converged);
    assert!((q.value - 1.0).abs() < 1e-6, "{}", q.value);
}

#[test]
fn gamma_product_matches_monte_carlo_histogram() {
    let (shape, scale) = (1.8, 5.5e-5);
    let dist = Dist::new(Family::GammaProduct, &[shape, scale]).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let g = Gamma::new(shape, scale).unwrap();
    let n = 1_000_000;
    let draws: Vec<f64> = (0..n)
        .map(|_| {
            let z: f64 = rng.sample(StandardNormal);
            g.sample(&mut rng) * z * z
        })
        .collect();
    let edges: Vec<f64> = (0..=20).map(|i| 1e-6 * 1.45f64.powi(i)).collect();
    for w in edges.windows(2) {
        let count = draws.iter().filter(|&&x| x > w[0] && x <= w[1]).count() as f64;
        let p = integrate(|x| dist.pdf(x).unwrap(), w[0], w[1], 0.0, 1e-10, 200).value;
        let expected = n as f64 * p;
        let se = (n as f64 * p * (1.0 - p)).sqrt();
        assert!((count - expected).abs() < 3.0 * se, "bin {:?}: {count} vs {expected} ± {se}", w);
    }
}

#[test]
fn support_violation_in_ks() {
    let dist = Dist::new(Family::Weibull, &[1.0, 1.0]).unwrap();
    assert!(matches!(
        ks_one_sample(&[0.5, 0.0], &dist),
        Err(volstat::DistError::SupportViolation { .. })
    ));
}
