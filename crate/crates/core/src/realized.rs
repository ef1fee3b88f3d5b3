//! Realized variance from daily log returns, index-squared variance series,
//! mean-ratio rescaling and the n-day aggregation statistics.
//!
//! Windows are non-overlapping blocks of `n` consecutive returns starting at
//! the first return. Each window is dated by its last return and carries an
//! *anchor*: the trading day immediately before its first return, i.e. the
//! close from which the window's price moves are measured.

use log::warn;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::market_data::{
    align, DatedSeries, IndexSeries, Period, PriceSeries, TradingDate,
};
use crate::stats::{self, LineFit};

/// Trading days per year used to annualize realized variance.
pub const TRADING_DAYS_PER_YEAR: f64 = 252.0;
/// Standard comparison window, one trading month.
pub const MONTH_WINDOW: usize = 21;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RealizedError {
    #[error("series too short: need {needed}, have {got}")]
    TooShort { needed: usize, got: usize },
    #[error("window length must be positive")]
    ZeroWindow,
    #[error("series do not overlap in the requested period")]
    EmptyOverlap,
    #[error("denominator series has zero mean")]
    ZeroDenominatorMean,
    #[error("scaling ratio must be positive, got {0}")]
    NonPositiveRatio(f64),
    #[error("log-log slope undefined: fewer than two positive variances")]
    SlopeUndefined,
}

pub type Result<T> = std::result::Result<T, RealizedError>;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReturnPoint {
    pub date: TradingDate,
    pub r: f64,
}

/// Daily log returns, each dated by the later of its two closes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReturnSeries {
    base_date: TradingDate,
    observations: Vec<ReturnPoint>,
}

impl ReturnSeries {
    /// Builds a series from raw values; `base_date` is the date of the close
    /// preceding the first return.
    pub fn from_parts(base_date: TradingDate, observations: Vec<ReturnPoint>) -> Self {
        ReturnSeries {
            base_date,
            observations,
        }
    }

    pub fn base_date(&self) -> TradingDate {
        self.base_date
    }

    pub fn observations(&self) -> &[ReturnPoint] {
        &self.observations
    }

    pub fn values(&self) -> Vec<f64> {
        self.observations.iter().map(|p| p.r).collect()
    }

    pub fn len(&self) -> usize {
        self.observations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.observations.is_empty()
    }

    /// Date of the close preceding return `i`.
    fn anchor_of(&self, i: usize) -> TradingDate {
        if i == 0 {
            self.base_date
        } else {
            self.observations[i - 1].date
        }
    }
}

impl DatedSeries for ReturnSeries {
    fn dated_values(&self) -> Vec<(TradingDate, f64)> {
        self.observations.iter().map(|p| (p.date, p.r)).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VarianceObs {
    pub date: TradingDate,
    /// Close preceding the window, for realized windows only.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub anchor: Option<TradingDate>,
    pub value: f64,
}

/// Annualized variance in percent² per annum.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VarianceSeries {
    observations: Vec<VarianceObs>,
    /// `None` when not derived from a return window (e.g. squared index).
    window_n: Option<usize>,
    annualization: f64,
}

impl VarianceSeries {
    pub fn new(observations: Vec<VarianceObs>, window_n: Option<usize>, annualization: f64) -> Self {
        debug_assert!(observations.iter().all(|o| o.value >= 0.0));
        VarianceSeries {
            observations,
            window_n,
            annualization,
        }
    }

    pub fn observations(&self) -> &[VarianceObs] {
        &self.observations
    }

    pub fn values(&self) -> Vec<f64> {
        self.observations.iter().map(|o| o.value).collect()
    }

    pub fn window_n(&self) -> Option<usize> {
        self.window_n
    }

    pub fn annualization(&self) -> f64 {
        self.annualization
    }

    pub fn len(&self) -> usize {
        self.observations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.observations.is_empty()
    }

    pub fn restrict(&self, period: Period) -> VarianceSeries {
        VarianceSeries {
            observations: self
                .observations
                .iter()
                .copied()
                .filter(|o| period.contains(o.date))
                .collect(),
            ..self.clone()
        }
    }
}

impl DatedSeries for VarianceSeries {
    fn dated_values(&self) -> Vec<(TradingDate, f64)> {
        self.observations.iter().map(|o| (o.date, o.value)).collect()
    }
}

/// `r_i = ln(S_i / S_{i-1})`, dated by day `i`.
pub fn log_returns(prices: &PriceSeries) -> Result<ReturnSeries> {
    let obs = prices.observations();
    if obs.len() < 2 {
        return Err(RealizedError::TooShort {
            needed: 2,
            got: obs.len(),
        });
    }
    let observations = obs
        .windows(2)
        .map(|w| ReturnPoint {
            date: w[1].date,
            r: (w[1].close / w[0].close).ln(),
        })
        .collect();
    Ok(ReturnSeries {
        base_date: obs[0].date,
        observations,
    })
}

/// Realized variance `100² · (days/n) · Σ r²` on consecutive non-overlapping
/// `n`-return windows. A trailing partial window is dropped.
pub fn realized_variance(
    returns: &ReturnSeries,
    n: usize,
    trading_days_per_year: f64,
) -> Result<VarianceSeries> {
    if n == 0 {
        return Err(RealizedError::ZeroWindow);
    }
    if returns.len() < n {
        return Err(RealizedError::TooShort {
            needed: n,
            got: returns.len(),
        });
    }
    let scale = 100.0 * 100.0 * trading_days_per_year / n as f64;
    let observations = returns
        .observations
        .chunks_exact(n)
        .enumerate()
        .map(|(k, chunk)| {
            let sum_sq: f64 = chunk.iter().map(|p| p.r * p.r).sum();
            VarianceObs {
                date: chunk[n - 1].date,
                anchor: Some(returns.anchor_of(k * n)),
                value: scale * sum_sq,
            }
        })
        .collect();
    Ok(VarianceSeries {
        observations,
        window_n: Some(n),
        annualization: trading_days_per_year / n as f64,
    })
}

/// Element-wise square of index levels (VIX → VIX²).
pub fn squared_index(index: &IndexSeries) -> VarianceSeries {
    VarianceSeries {
        observations: index
            .observations()
            .iter()
            .map(|p| VarianceObs {
                date: p.date,
                anchor: None,
                value: p.level * p.level,
            })
            .collect(),
        window_n: None,
        annualization: 1.0,
    }
}

/// Mean of one series over the mean of another, on common dates in a period.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScalingReport {
    pub numerator_mean: f64,
    pub denominator_mean: f64,
    pub ratio: f64,
    pub period: Period,
    pub count: usize,
}

pub fn mean_ratio(
    numer: &VarianceSeries,
    denom: &VarianceSeries,
    period: Period,
) -> Result<ScalingReport> {
    let a = numer.restrict(period);
    let b = denom.restrict(period);
    if a.is_empty() || b.is_empty() {
        return Err(RealizedError::EmptyOverlap);
    }
    let panel = align(&[("numer", &a as &dyn DatedSeries), ("denom", &b)])
        .map_err(|_| RealizedError::EmptyOverlap)?;
    let numerator_mean = stats::mean(panel.column_at(0).unwrap_or_default());
    let denominator_mean = stats::mean(panel.column_at(1).unwrap_or_default());
    if denominator_mean == 0.0 {
        return Err(RealizedError::ZeroDenominatorMean);
    }
    Ok(ScalingReport {
        numerator_mean,
        denominator_mean,
        ratio: numerator_mean / denominator_mean,
        period,
        count: panel.len(),
    })
}

pub fn scale_series(series: &VarianceSeries, ratio: f64) -> Result<VarianceSeries> {
    if !(ratio > 0.0) || !ratio.is_finite() {
        return Err(RealizedError::NonPositiveRatio(ratio));
    }
    let mut out = series.clone();
    for o in &mut out.observations {
        o.value *= ratio;
    }
    Ok(out)
}

/// How realized variance is rescaled before comparison with an index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScalingMode {
    /// Calendar-day over trading-day annualization, 365/252.
    Theory365Over252,
    /// Index horizon over window length, 30/21.
    Theory30Over21,
    /// Ratio of sample means over the compared period.
    EmpiricalMeanRatio,
}

impl ScalingMode {
    /// Fixed ratio for the theory modes; `None` for the empirical mode.
    pub fn fixed_ratio(self) -> Option<f64> {
        match self {
            ScalingMode::Theory365Over252 => Some(365.0 / 252.0),
            ScalingMode::Theory30Over21 => Some(30.0 / 21.0),
            ScalingMode::EmpiricalMeanRatio => None,
        }
    }
}

/// Which realized window an index observation is compared against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Alignment {
    /// Index observed at the close before the window: the window it forecasts.
    Concurrent,
    /// Index observed at the window's last close: the window already known.
    Preceding,
}

/// Realized and implied variance paired one-to-one and re-dated on the
/// index observation date.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairedVariance {
    pub realized: VarianceSeries,
    pub implied: VarianceSeries,
    pub alignment: Alignment,
}

impl PairedVariance {
    pub fn len(&self) -> usize {
        self.realized.len()
    }

    pub fn is_empty(&self) -> bool {
        self.realized.is_empty()
    }

    /// Pairs whose pairing date falls in `period`.
    pub fn restrict(&self, period: Period) -> PairedVariance {
        PairedVariance {
            realized: self.realized.restrict(period),
            implied: self.implied.restrict(period),
            alignment: self.alignment,
        }
    }

    /// Mean implied variance over mean realized variance across the pairs.
    pub fn scaling_report(&self, period: Period) -> Result<ScalingReport> {
        let pairs = self.restrict(period);
        if pairs.is_empty() {
            return Err(RealizedError::EmptyOverlap);
        }
        let numerator_mean = stats::mean(&pairs.implied.values());
        let denominator_mean = stats::mean(&pairs.realized.values());
        if denominator_mean == 0.0 {
            return Err(RealizedError::ZeroDenominatorMean);
        }
        Ok(ScalingReport {
            numerator_mean,
            denominator_mean,
            ratio: numerator_mean / denominator_mean,
            period,
            count: pairs.len(),
        })
    }

    /// `realized / implied` for each pair; pairs with zero implied are dropped.
    pub fn ratios(&self) -> Vec<f64> {
        self.realized
            .observations
            .iter()
            .zip(&self.implied.observations)
            .filter(|(_, i)| i.value > 0.0)
            .map(|(r, i)| r.value / i.value)
            .collect()
    }
}

/// Pairs each realized window with the squared index on its anchor
/// (concurrent) or its last day (preceding). Windows whose pairing date has
/// no index observation are skipped.
pub fn pair_with_index(
    realized: &VarianceSeries,
    index: &IndexSeries,
    alignment: Alignment,
) -> Result<PairedVariance> {
    let mut rv = Vec::new();
    let mut iv = Vec::new();
    for obs in &realized.observations {
        let date = match alignment {
            Alignment::Concurrent => match obs.anchor {
                Some(a) => a,
                None => continue,
            },
            Alignment::Preceding => obs.date,
        };
        if let Some(level) = index.level_on(date) {
            rv.push(VarianceObs {
                date,
                anchor: obs.anchor,
                value: obs.value,
            });
            iv.push(VarianceObs {
                date,
                anchor: None,
                value: level * level,
            });
        }
    }
    if rv.is_empty() {
        return Err(RealizedError::EmptyOverlap);
    }
    Ok(PairedVariance {
        realized: VarianceSeries {
            observations: rv,
            ..realized.clone()
        },
        implied: VarianceSeries {
            observations: iv,
            window_n: None,
            annualization: 1.0,
        },
        alignment,
    })
}

/// `(1/n) Σ r²` over consecutive non-overlapping windows.
pub fn mean_squared_return_samples(returns: &ReturnSeries, n: usize) -> Result<Vec<f64>> {
    if n == 0 {
        return Err(RealizedError::ZeroWindow);
    }
    if returns.len() < n {
        return Err(RealizedError::TooShort {
            needed: n,
            got: returns.len(),
        });
    }
    Ok(returns
        .observations
        .chunks_exact(n)
        .map(|c| c.iter().map(|p| p.r * p.r).sum::<f64>() / n as f64)
        .collect())
}

/// Sample variance of the n-day mean squared return as a function of `n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VarianceScaling {
    /// `(n, variance)`; zero-variance points included but not fitted.
    pub points: Vec<(usize, f64)>,
    pub slope: f64,
    pub intercept: f64,
}

pub fn variance_vs_n(returns: &ReturnSeries, n_values: &[usize]) -> Result<VarianceScaling> {
    let mut points = Vec::with_capacity(n_values.len());
    for &n in n_values {
        let samples = mean_squared_return_samples(returns, n)?;
        if samples.len() < 2 {
            return Err(RealizedError::TooShort {
                needed: 2 * n,
                got: returns.len(),
            });
        }
        points.push((n, stats::sample_variance(&samples)));
    }
    let fit = loglog_fit(&points)?;
    Ok(VarianceScaling {
        points,
        slope: fit.slope,
        intercept: fit.intercept,
    })
}

/// OLS on `(ln n, ln v)`, skipping non-positive variances with a warning.
pub fn loglog_fit(points: &[(usize, f64)]) -> Result<LineFit> {
    let (mut xs, mut ys) = (Vec::new(), Vec::new());
    for &(n, v) in points {
        if v > 0.0 && v.is_finite() {
            xs.push((n as f64).ln());
            ys.push(v.ln());
        } else {
            warn!("excluding n = {n} from log-log fit: variance {v}");
        }
    }
    stats::ols(&xs, &ys).ok_or(RealizedError::SlopeUndefined)
}
