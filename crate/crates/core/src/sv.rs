//! Mean-reverting stochastic-variance models.
//!
//! Both models share the drift `−γ(v − θ)`; the diffusion is `κ√v dW`
//! (Heston) or `κ v dW` (multiplicative). Time is measured in trading days.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Gamma, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dist::special::{gamma_lr, gamma_ur};
use crate::realized::{mean_squared_return_samples, RealizedError, ReturnSeries};
use crate::stats::{autocovariance, mean, sample_variance, wls};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SvError {
    #[error("parameters must be positive and finite (θ = {theta}, γ = {gamma}, κ = {kappa})")]
    InvalidParams { theta: f64, gamma: f64, kappa: f64 },
    #[error("invalid step: {0}")]
    InvalidStep(String),
    #[error("second moment diverges: 2γ = {two_gamma} ≤ κ² = {kappa_sq}")]
    MomentDivergence { two_gamma: f64, kappa_sq: f64 },
    #[error("autocovariance does not decay")]
    NonPositiveDecay,
    #[error("series has {got} points, at least {needed} required")]
    TooShort { needed: usize, got: usize },
    #[error("horizons must be positive and strictly increasing")]
    InvalidHorizons,
    #[error(transparent)]
    Realized(#[from] RealizedError),
}

pub type Result<T> = std::result::Result<T, SvError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Model {
    Heston,
    #[serde(alias = "mult")]
    Multiplicative,
}

impl FromStr for Model {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "heston" => Ok(Model::Heston),
            "mult" | "multiplicative" => Ok(Model::Multiplicative),
            _ => Err(format!("unknown model {s:?} (expected heston or mult)")),
        }
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Model::Heston => "heston",
            Model::Multiplicative => "mult",
        })
    }
}

/// Validated model parameters. `κ = 0` is accepted as the noise-free limit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SVParams {
    pub theta: f64,
    /// Mean-reversion rate per trading day.
    pub gamma: f64,
    pub kappa: f64,
    pub model: Model,
}

impl SVParams {
    pub fn new(model: Model, theta: f64, gamma: f64, kappa: f64) -> Result<Self> {
        let ok = [theta, gamma, kappa].iter().all(|v| v.is_finite())
            && theta > 0.0
            && gamma > 0.0
            && kappa >= 0.0;
        if !ok {
            return Err(SvError::InvalidParams { theta, gamma, kappa });
        }
        let p = SVParams {
            theta,
            gamma,
            kappa,
            model,
        };
        if model == Model::Multiplicative && 2.0 * gamma <= kappa * kappa {
            return Err(p.divergence());
        }
        Ok(p)
    }

    fn divergence(&self) -> SvError {
        SvError::MomentDivergence {
            two_gamma: 2.0 * self.gamma,
            kappa_sq: self.kappa * self.kappa,
        }
    }

    /// Heston: `2γθ ≥ κ²`, under which zero is unattainable. Always true for
    /// the multiplicative model.
    pub fn feller(&self) -> bool {
        match self.model {
            Model::Heston => 2.0 * self.gamma * self.theta >= self.kappa * self.kappa,
            Model::Multiplicative => true,
        }
    }

    /// Stationary variance of `v`.
    pub fn stationary_variance(&self) -> Result<f64> {
        let (t, g, k2) = (self.theta, self.gamma, self.kappa * self.kappa);
        match self.model {
            Model::Heston => Ok(k2 * t / (2.0 * g)),
            Model::Multiplicative => {
                if 2.0 * g <= k2 {
                    Err(self.divergence())
                } else {
                    Ok(k2 * t * t / (2.0 * g - k2))
                }
            }
        }
    }
}

/// Named parameter sets estimated from S&P 500 daily data.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Preset {
    /// Fitted to the autocovariance of daily squared returns.
    Heston,
    Multiplicative,
    /// Taken from single-day return distributions.
    HestonSingleDay,
    MultiplicativeSingleDay,
}

impl Preset {
    pub const ALL: [Preset; 4] = [
        Preset::Heston,
        Preset::Multiplicative,
        Preset::HestonSingleDay,
        Preset::MultiplicativeSingleDay,
    ];

    pub fn params(self) -> SVParams {
        let (model, theta, kappa) = match self {
            Preset::Heston => (Model::Heston, 9.81e-5, 2.32e-3),
            Preset::Multiplicative => (Model::Multiplicative, 9.81e-5, 0.25),
            Preset::HestonSingleDay => (Model::Heston, 1.02e-4, 2.80e-3),
            Preset::MultiplicativeSingleDay => (Model::Multiplicative, 1.10e-4, 0.25),
        };
        SVParams::new(model, theta, 0.041, kappa).expect("preset parameters are valid")
    }

    pub fn name(self) -> &'static str {
        match self {
            Preset::Heston => "heston",
            Preset::Multiplicative => "mult",
            Preset::HestonSingleDay => "heston-single-day",
            Preset::MultiplicativeSingleDay => "mult-single-day",
        }
    }
}

impl FromStr for Preset {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Preset::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| format!("unknown preset {s:?}"))
    }
}

/// Simulated variance path; `values[0]` is the initial variance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SVPath {
    pub dt: f64,
    pub values: Vec<f64>,
    pub seed: u64,
}

impl SVPath {
    /// Every `stride`-th value starting from the first.
    pub fn sampled(&self, stride: usize) -> Vec<f64> {
        self.values.iter().step_by(stride.max(1)).copied().collect()
    }
}

/// Generator for path `stream` of a run seeded with `seed`.
pub fn path_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn check_step(dt: f64, steps: usize) -> Result<()> {
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(SvError::InvalidStep(format!("dt = {dt}")));
    }
    if steps == 0 {
        return Err(SvError::InvalidStep("zero steps".into()));
    }
    Ok(())
}

/// One Euler step. Heston keeps an internal state that may go negative
/// (full truncation); the observable variance is its positive part.
struct Stepper {
    params: SVParams,
    dt: f64,
    sqrt_dt: f64,
}

impl Stepper {
    fn new(params: SVParams, dt: f64) -> Self {
        Stepper {
            params,
            dt,
            sqrt_dt: dt.sqrt(),
        }
    }

    #[inline]
    fn step(&self, state: f64, z: f64) -> f64 {
        let SVParams {
            theta,
            gamma,
            kappa,
            model,
        } = self.params;
        match model {
            Model::Heston => {
                let vp = state.max(0.0);
                state - gamma * (vp - theta) * self.dt + kappa * vp.sqrt() * self.sqrt_dt * z
            }
            Model::Multiplicative => {
                (state - gamma * (state - theta) * self.dt + kappa * state * self.sqrt_dt * z).abs()
            }
        }
    }
}

fn simulate_with(params: SVParams, v0: f64, dt: f64, steps: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let stepper = Stepper::new(params, dt);
    let mut values = Vec::with_capacity(steps + 1);
    let mut state = v0;
    values.push(v0);
    for _ in 0..steps {
        let z: f64 = rng.sample(StandardNormal);
        state = stepper.step(state, z);
        values.push(state.max(0.0));
    }
    values
}

/// Euler–Maruyama path of `steps` steps of length `dt` days from `v0`.
pub fn simulate(params: SVParams, v0: f64, dt: f64, steps: usize, seed: u64) -> Result<SVPath> {
    check_step(dt, steps)?;
    if !(v0 > 0.0 && v0.is_finite()) {
        return Err(SvError::InvalidStep(format!("v0 = {v0}")));
    }
    let mut rng = path_rng(seed, 0);
    Ok(SVPath {
        dt,
        values: simulate_with(params, v0, dt, steps, &mut rng),
        seed,
    })
}

/// How the initial variance of each path is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum InitialVariance {
    Fixed(f64),
    /// Independent draws from the stationary law.
    Stationary,
    /// Stationary law, one draw per equal-probability stratum.
    Stratified,
}

/// Stationary law of `v`: Gamma for Heston, inverse gamma for multiplicative.
/// Returns `None` when `κ = 0` (the law is a point mass at θ).
fn stationary_law(p: &SVParams) -> Option<(f64, f64)> {
    if p.kappa == 0.0 {
        return None;
    }
    let k2 = p.kappa * p.kappa;
    Some(match p.model {
        // (shape, scale)
        Model::Heston => (2.0 * p.gamma * p.theta / k2, k2 / (2.0 * p.gamma)),
        // (α, β)
        Model::Multiplicative => (1.0 + 2.0 * p.gamma / k2, 2.0 * p.gamma * p.theta / k2),
    })
}

/// Unit-scale gamma quantile given both tails `p` and `q = 1 − p`, so that
/// extreme upper quantiles keep full precision.
fn gamma_quantile(shape: f64, p: f64, q: f64) -> f64 {
    let below = |x: f64| {
        if p < 0.5 {
            gamma_lr(shape, x) < p
        } else {
            gamma_ur(shape, x) > q
        }
    };
    let (mut lo, mut hi) = (-800.0_f64, 10.0_f64);
    while below(hi.exp()) {
        hi += 10.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if below(mid.exp()) {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-14 {
            break;
        }
    }
    (0.5 * (lo + hi)).exp()
}

fn stationary_draw(p: &SVParams, rng: &mut ChaCha8Rng) -> f64 {
    let Some((a, b)) = stationary_law(p) else {
        return p.theta;
    };
    let g = Gamma::new(a, 1.0).expect("positive shape").sample(rng);
    match p.model {
        Model::Heston => g * b,
        Model::Multiplicative => b / g,
    }
}

fn stratified_draw(p: &SVParams, index: usize, count: usize, rng: &mut ChaCha8Rng) -> f64 {
    let Some((a, b)) = stationary_law(p) else {
        return p.theta;
    };
    let u: f64 = rng.random();
    let n = count as f64;
    let prob = (index as f64 + u) / n;
    let tail = ((count - index) as f64 - u) / n;
    match p.model {
        Model::Heston => b * gamma_quantile(a, prob, tail),
        Model::Multiplicative => b / gamma_quantile(a, tail, prob),
    }
}

fn initial_value(
    p: &SVParams,
    init: InitialVariance,
    index: usize,
    count: usize,
    rng: &mut ChaCha8Rng,
) -> f64 {
    match init {
        InitialVariance::Fixed(v) => v,
        InitialVariance::Stationary => stationary_draw(p, rng),
        InitialVariance::Stratified => stratified_draw(p, index, count, rng),
    }
}

/// `n_paths` independent paths; path `i` uses generator stream `i`.
pub fn simulate_paths(
    params: SVParams,
    init: InitialVariance,
    dt: f64,
    steps: usize,
    n_paths: usize,
    seed: u64,
) -> Result<Vec<SVPath>> {
    check_step(dt, steps)?;
    if let InitialVariance::Fixed(v) = init {
        if !(v > 0.0 && v.is_finite()) {
            return Err(SvError::InvalidStep(format!("v0 = {v}")));
        }
    }
    Ok((0..n_paths)
        .into_par_iter()
        .map(|i| {
            let mut rng = path_rng(seed, i as u64);
            let v0 = initial_value(&params, init, i, n_paths, &mut rng);
            SVPath {
                dt,
                values: simulate_with(params, v0, dt, steps, &mut rng),
                seed,
            }
        })
        .collect())
}

/// `(E[v], Var[v])` under the stationary law.
pub fn stationary_moments(params: &SVParams) -> Result<(f64, f64)> {
    Ok((params.theta, params.stationary_variance()?))
}

/// `E[v_t v_{t+τ}] − θ²`.
pub fn autocovariance_theory(params: &SVParams, tau: f64) -> Result<f64> {
    if !(tau >= 0.0) {
        return Err(SvError::InvalidStep(format!("tau = {tau}")));
    }
    Ok(params.stationary_variance()? * (-params.gamma * tau).exp())
}

/// `2h(x)/x²` with `h(x) = x − 1 + e^{−x}`: the variance of the time-averaged
/// variance over a window of `x` relaxation times, relative to the
/// stationary variance. Decreases from 1 at 0 towards `2/x`.
pub fn var_rv_reduced(gamma_t: f64) -> f64 {
    let x = gamma_t;
    if x < 0.1 {
        // Σ 2(−x)ᵏ/(k+2)!
        let mut term = 1.0;
        let mut sum = 1.0;
        for k in 1..14 {
            term *= -x / (k as f64 + 2.0);
            sum += term;
        }
        sum
    } else {
        2.0 * (x + (-x).exp_m1()) / (x * x)
    }
}

/// `E[(T⁻¹∫₀ᵀ v dt − θ)²]` under the stationary law, `T` in days.
pub fn var_rv_theory(params: &SVParams, horizon: f64) -> Result<f64> {
    if !(horizon > 0.0) {
        return Err(SvError::InvalidHorizons);
    }
    Ok(params.stationary_variance()? * var_rv_reduced(params.gamma * horizon))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CurveKind {
    TheoryHeston,
    TheoryMult,
    Reduced,
    Empirical,
    MonteCarlo,
}

impl fmt::Display for CurveKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CurveKind::TheoryHeston => "theory_heston",
            CurveKind::TheoryMult => "theory_mult",
            CurveKind::Reduced => "reduced",
            CurveKind::Empirical => "empirical",
            CurveKind::MonteCarlo => "monte_carlo",
        })
    }
}

/// Variance of realized variance against horizon.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VarRVCurve {
    pub horizons: Vec<f64>,
    pub values: Vec<f64>,
    pub kind: CurveKind,
}

impl VarRVCurve {
    /// Divides every value by the first one.
    pub fn normalized(&self) -> VarRVCurve {
        let first = self.values.first().copied().unwrap_or(1.0);
        VarRVCurve {
            horizons: self.horizons.clone(),
            values: self.values.iter().map(|v| v / first).collect(),
            kind: self.kind,
        }
    }
}

fn check_horizons(horizons: &[f64]) -> Result<()> {
    let increasing = horizons.windows(2).all(|w| w[0] < w[1]);
    if horizons.is_empty() || !increasing || !(horizons[0] > 0.0) {
        return Err(SvError::InvalidHorizons);
    }
    Ok(())
}

pub fn theory_curve(params: &SVParams, horizons: &[f64]) -> Result<VarRVCurve> {
    check_horizons(horizons)?;
    let values = horizons
        .iter()
        .map(|&t| var_rv_theory(params, t))
        .collect::<Result<Vec<_>>>()?;
    Ok(VarRVCurve {
        horizons: horizons.to_vec(),
        values,
        kind: match params.model {
            Model::Heston => CurveKind::TheoryHeston,
            Model::Multiplicative => CurveKind::TheoryMult,
        },
    })
}

/// The reduced curve on the given `γT` grid.
pub fn reduced_curve(gamma_ts: &[f64]) -> Result<VarRVCurve> {
    check_horizons(gamma_ts)?;
    Ok(VarRVCurve {
        horizons: gamma_ts.to_vec(),
        values: gamma_ts.iter().map(|&x| var_rv_reduced(x)).collect(),
        kind: CurveKind::Reduced,
    })
}

/// For each `n`, sample variance across non-overlapping `n`-day windows of
/// the window-mean squared return.
pub fn empirical_var_rv(returns: &ReturnSeries, horizons: &[usize]) -> Result<VarRVCurve> {
    let as_f64: Vec<f64> = horizons.iter().map(|&n| n as f64).collect();
    check_horizons(&as_f64)?;
    let mut values = Vec::with_capacity(horizons.len());
    for &n in horizons {
        let samples = mean_squared_return_samples(returns, n)?;
        if samples.len() < 2 {
            return Err(SvError::TooShort {
                needed: 2 * n,
                got: returns.len(),
            });
        }
        values.push(sample_variance(&samples));
    }
    Ok(VarRVCurve {
        horizons: as_f64,
        values,
        kind: CurveKind::Empirical,
    })
}

/// Monte Carlo variance of the trapezoidal path average of `v` over each
/// horizon, with stratified stationary starts. Horizons are rounded to whole
/// steps.
pub fn monte_carlo_var_rv(
    params: SVParams,
    horizons: &[f64],
    n_paths: usize,
    dt: f64,
    seed: u64,
) -> Result<VarRVCurve> {
    check_horizons(horizons)?;
    let marks: Vec<usize> = horizons
        .iter()
        .map(|&t| ((t / dt).round() as usize).max(1))
        .collect();
    let steps = *marks.last().expect("non-empty");
    check_step(dt, steps)?;
    if n_paths < 2 {
        return Err(SvError::TooShort {
            needed: 2,
            got: n_paths,
        });
    }
    let stepper = Stepper::new(params, dt);
    let averages: Vec<Vec<f64>> = (0..n_paths)
        .into_par_iter()
        .map(|i| {
            let mut rng = path_rng(seed, i as u64);
            let v0 = stratified_draw(&params, i, n_paths, &mut rng);
            let mut state = v0;
            let mut integral = 0.0;
            let mut prev = v0;
            let mut out = Vec::with_capacity(marks.len());
            let mut next_mark = 0;
            for step in 1..=steps {
                let z: f64 = rng.sample(StandardNormal);
                state = stepper.step(state, z);
                let v = state.max(0.0);
                integral += 0.5 * (prev + v) * dt;
                prev = v;
                if step == marks[next_mark] {
                    out.push(integral / (step as f64 * dt));
                    next_mark += 1;
                }
            }
            out
        })
        .collect();
    let values = (0..marks.len())
        .map(|h| {
            let column: Vec<f64> = averages.iter().map(|a| a[h]).collect();
            sample_variance(&column)
        })
        .collect();
    Ok(VarRVCurve {
        horizons: marks.iter().map(|&m| m as f64 * dt).collect(),
        values,
        kind: CurveKind::MonteCarlo,
    })
}

/// Daily squared returns implied by a path: for each whole day the return is
/// `√(∫v dt)·z` with an independent standard normal `z`.
pub fn daily_squared_returns(path: &SVPath, seed: u64) -> Vec<f64> {
    let per_day = (1.0 / path.dt).round().max(1.0) as usize;
    let mut rng = path_rng(seed, u64::MAX);
    path.values
        .windows(2)
        .collect::<Vec<_>>()
        .chunks_exact(per_day)
        .map(|day| {
            let integrated: f64 = day.iter().map(|w| 0.5 * (w[0] + w[1]) * path.dt).sum();
            let z: f64 = rng.sample(StandardNormal);
            integrated * z * z
        })
        .collect()
}

/// Exponential fit `C(τ) ≈ A·e^{−γτ}` to the sample autocovariance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecayFit {
    pub gamma: f64,
    pub amplitude: f64,
    /// Lags used in the final fit.
    pub lags: usize,
}

/// Fits the autocovariance at lags `1..=L` by least squares on its log,
/// weighting each lag by `C(τ)²` since the estimation noise of `C` is
/// roughly lag-independent. Lags are taken in order until the
/// autocovariance falls to the noise level `2·C(0)/√N`; `L` is then reset
/// to `⌈3/γ⌉` and the fit repeated until it stabilizes.
pub fn fit_decay(values: &[f64]) -> Result<DecayFit> {
    let n = values.len();
    if n < 20 {
        return Err(SvError::TooShort { needed: 20, got: n });
    }
    let m = mean(values);
    let c0 = autocovariance(values, m, 0);
    if values.iter().all(|&v| v == values[0]) {
        return Err(SvError::NonPositiveDecay);
    }
    let floor = 2.0 * c0 / (n as f64).sqrt();
    let cap = n / 4;
    let mut max_lag = (n / 10).clamp(2, 250);
    let mut cache: Vec<f64> = Vec::new();
    let mut fit = None;
    for _ in 0..10 {
        while cache.len() < max_lag {
            cache.push(autocovariance(values, m, cache.len() + 1));
        }
        let (mut xs, mut ys, mut ws) = (Vec::new(), Vec::new(), Vec::new());
        for (i, &c) in cache[..max_lag].iter().enumerate() {
            if c <= floor {
                break;
            }
            xs.push((i + 1) as f64);
            ys.push(c.ln());
            ws.push((c / c0).powi(2));
        }
        let line = wls(&xs, &ys, &ws).ok_or(SvError::NonPositiveDecay)?;
        if !(line.slope < 0.0) {
            return Err(SvError::NonPositiveDecay);
        }
        let gamma = -line.slope;
        fit = Some(DecayFit {
            gamma,
            amplitude: line.intercept.exp(),
            lags: xs.len(),
        });
        let next = ((3.0 / gamma).ceil() as usize).clamp(2, cap.max(2));
        if next == max_lag {
            break;
        }
        max_lag = next;
    }
    fit.ok_or(SvError::NonPositiveDecay)
}

/// Minimum length of a variance proxy accepted by [`estimate_params`].
pub const MIN_PROXY_LEN: usize = 1000;

/// Estimates `(θ, γ, κ)` from de-annualized daily squared returns: θ is the
/// sample mean, `(γ, A)` come from [`fit_decay`] and κ inverts
/// `A = Var[v]`.
pub fn estimate_params(proxy: &[f64], model: Model) -> Result<SVParams> {
    if proxy.len() < MIN_PROXY_LEN {
        return Err(SvError::TooShort {
            needed: MIN_PROXY_LEN,
            got: proxy.len(),
        });
    }
    let theta = mean(proxy);
    let DecayFit {
        gamma, amplitude, ..
    } = fit_decay(proxy)?;
    let kappa = match model {
        Model::Heston => (2.0 * gamma * amplitude / theta).sqrt(),
        Model::Multiplicative => (2.0 * gamma * amplitude / (theta * theta + amplitude)).sqrt(),
    };
    SVParams::new(model, theta, gamma, kappa)
}
