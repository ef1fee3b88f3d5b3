//! Realized versus implied volatility analytics.
//!
//! * [`market_data`]: CSV ingestion and date alignment
//! * [`realized`]: log returns, realized variance, rescaling and pairing
//! * [`implied`]: model-free implied variance from option chains
//! * [`dist`]: maximum-likelihood fits and Kolmogorov–Smirnov statistics
//! * [`sv`]: Heston and multiplicative stochastic-variance models

// `!(x > 0.0)` is used on purpose so that NaN is rejected too
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod dist;
pub mod implied;
pub mod market_data;
pub mod realized;
pub mod stats;
pub mod sv;

pub use dist::{
    fit_mle, ks_one_sample, ks_two_sample, rank_families, Dist, DistError, Family, FitRanking,
    FitResult,
};
pub use implied::{
    blend_terms, implied_variance, ImpliedError, ImpliedVarianceResult, OptionChainSnapshot,
    OptionQuote, OptionRight, TermVariance,
};
pub use market_data::{
    align, parse_index_csv, parse_price_csv, AlignedPanel, ColumnMapping, DateFormat, IndexKind,
    IndexSeries, MarketDataError, Period, PriceSeries, TradingDate,
};
pub use realized::{
    log_returns, mean_ratio, realized_variance, scale_series, squared_index, Alignment,
    RealizedError, ReturnSeries, ScalingMode, ScalingReport, VarianceSeries,
};
pub use sv::{
    estimate_params, simulate, simulate_paths, stationary_moments, var_rv_reduced, var_rv_theory,
    Model, Preset, SVParams, SVPath, SvError, VarRVCurve,
};
