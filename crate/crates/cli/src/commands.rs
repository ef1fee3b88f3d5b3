//! Subcommand implementations. Each builds a [`Document`]; nothing is
//! written here.

use volstat::dist::{ks_two_sample, rank_normalized, DistError, Family, FitRanking, SkippedFit};
use volstat::implied::{blend_terms, implied_variance, OptionChainSnapshot};
use volstat::market_data::{Period, PriceSeries};
use volstat::realized::{
    log_returns, pair_with_index, realized_variance, Alignment, PairedVariance, ScalingMode,
    VarianceSeries, TRADING_DAYS_PER_YEAR,
};
use volstat::sv::{
    estimate_params, fit_decay, monte_carlo_var_rv, reduced_curve,
    simulate_paths, theory_curve, InitialVariance, Model, Preset, SVParams, VarRVCurve,
};

use crate::args::*;
use crate::error::{CliError, Result};
use crate::inputs::{load_index, load_prices, period, read_input};
use crate::output::{Cell, Document, Table};

pub fn realized(prices: &PriceSeries, window: Period, n: usize) -> Result<VarianceSeries> {
    let returns = log_returns(&prices.restrict(window))?;
    Ok(realized_variance(&returns, n, TRADING_DAYS_PER_YEAR)?)
}

fn alignment(a: AlignmentArg) -> Alignment {
    match a {
        AlignmentArg::Concurrent => Alignment::Concurrent,
        AlignmentArg::Preceding => Alignment::Preceding,
    }
}

fn scaling(s: ScalingArg) -> ScalingMode {
    match s {
        ScalingArg::Theory365252 => ScalingMode::Theory365Over252,
        ScalingArg::Theory3021 => ScalingMode::Theory30Over21,
        ScalingArg::EmpiricalMeanRatio => ScalingMode::EmpiricalMeanRatio,
    }
}

fn window_period(w: &WindowOpts) -> Result<Period> {
    if w.n == 0 {
        return Err(CliError::input("--n must be at least 1"));
    }
    period(w.from.as_deref(), w.to.as_deref())
}

fn load_pairs(doc: &mut Document, opts: &PairOpts) -> Result<(PairedVariance, Period)> {
    let window = window_period(&opts.window)?;
    let prices = load_prices(doc, &opts.prices, &opts.series)?;
    let index = load_index(doc, &opts.index, opts.kind, &opts.series)?;
    let rv = realized(&prices, window, opts.window.n)?;
    let pairs = pair_with_index(&rv, &index, alignment(opts.alignment))?;
    Ok((pairs, window))
}

pub fn rv(doc: &mut Document, args: &RvArgs) -> Result<()> {
    let window = window_period(&args.window)?;
    let prices = load_prices(doc, &args.prices, &args.series)?;
    let series = realized(&prices, window, args.window.n)?;
    let mut table = Table::new("realized_variance", &["date", "anchor", "rv2"]);
    for o in series.observations() {
        table.push(vec![
            o.date.to_string().into(),
            o.anchor.map(|a| a.to_string()).into(),
            o.value.into(),
        ]);
    }
    let values = series.values();
    let mut summary = Table::new("summary", &["windows", "n", "mean_rv2"]);
    summary.push(vec![
        values.len().into(),
        args.window.n.into(),
        (values.iter().sum::<f64>() / values.len() as f64).into(),
    ]);
    doc.tables.push(table);
    doc.tables.push(summary);
    Ok(())
}

fn parse_families(names: &[String]) -> Result<Vec<Family>> {
    if names.is_empty() {
        return Ok(Family::CORE.to_vec());
    }
    names
        .iter()
        .map(|n| n.parse().map_err(|e: DistError| CliError::input(e.to_string())))
        .collect()
}

fn join_params(params: &[f64]) -> String {
    params
        .iter()
        .map(|p| crate::output::format_num(*p))
        .collect::<Vec<_>>()
        .join(" ")
}

/// Ranks the families, turning a total failure into an empty ranking so the
/// reasons can still be reported.
pub fn rank_or_skip(sample: &[f64], families: &[Family]) -> Result<FitRanking> {
    match rank_normalized(sample, families) {
        Ok(r) => Ok(r),
        Err(DistError::AllFitsFailed(skipped)) => Ok(FitRanking {
            results: Vec::new(),
            skipped,
        }),
        Err(DistError::EmptySample) | Err(DistError::NonFinite(_)) => Ok(FitRanking {
            results: Vec::new(),
            skipped: families
                .iter()
                .map(|&family| SkippedFit {
                    family,
                    reason: "ratio sample is empty or non-finite".into(),
                })
                .collect(),
        }),
        Err(e) => Err(e.into()),
    }
}

const FIT_COLUMNS: [&str; 9] = [
    "rank",
    "family",
    "abbrev",
    "params",
    "ks",
    "loglik",
    "n",
    "method",
    "normalized_by",
];

fn fit_rows(ranking: &FitRanking) -> Vec<Vec<Cell>> {
    ranking
        .results
        .iter()
        .enumerate()
        .map(|(i, r)| {
            vec![
                (i + 1).into(),
                r.family.to_string().into(),
                r.family.abbreviation().into(),
                join_params(&r.params).into(),
                r.ks.into(),
                r.log_likelihood.into(),
                r.n.into(),
                serde_json::to_value(r.method)
                    .ok()
                    .and_then(|v| v.as_str().map(String::from))
                    .into(),
                r.normalized_by.into(),
            ]
        })
        .collect()
}

fn ratio_sample(pairs: &PairedVariance, direction: DirectionArg) -> Vec<f64> {
    let ratios = pairs.ratios();
    match direction {
        DirectionArg::RvOverIndex => ratios,
        DirectionArg::IndexOverRv => ratios
            .into_iter()
            .filter(|&r| r > 0.0)
            .map(|r| 1.0 / r)
            .collect(),
    }
}

pub fn ratio(doc: &mut Document, args: &RatioArgs) -> Result<()> {
    let families = parse_families(&args.families)?;
    let (pairs, _) = load_pairs(doc, &args.pair)?;
    let sample = ratio_sample(&pairs, args.direction);
    let ranking = rank_or_skip(&sample, &families)?;

    let mut ratios = Table::new("ratios", &["date", "rv2", "index2", "ratio"]);
    let inverted = args.direction == DirectionArg::IndexOverRv;
    for (r, i) in pairs
        .realized
        .observations()
        .iter()
        .zip(pairs.implied.observations())
    {
        let value = if inverted {
            (r.value > 0.0).then(|| i.value / r.value)
        } else {
            (i.value > 0.0).then(|| r.value / i.value)
        };
        ratios.push(vec![
            r.date.to_string().into(),
            r.value.into(),
            i.value.into(),
            value.into(),
        ]);
    }
    let mut fits = Table::new("fits", &FIT_COLUMNS);
    for row in fit_rows(&ranking) {
        fits.push(row);
    }
    let mut skipped = Table::new("skipped", &["family", "reason"]);
    for s in &ranking.skipped {
        skipped.push(vec![s.family.to_string().into(), s.reason.clone().into()]);
    }
    doc.tables.extend([ratios, fits, skipped]);
    Ok(())
}

/// Two-sample KS of `ratio·RV²` against index² on the paired dates.
pub fn compare_pairs(pairs: &PairedVariance, ratio: f64) -> Result<f64> {
    let scaled: Vec<f64> = pairs.realized.values().iter().map(|v| v * ratio).collect();
    Ok(ks_two_sample(&scaled, &pairs.implied.values())?)
}

pub fn scaling_ratio(pairs: &PairedVariance, mode: ScalingMode, window: Period) -> Result<f64> {
    match mode.fixed_ratio() {
        Some(r) => Ok(r),
        None => Ok(pairs.scaling_report(window)?.ratio),
    }
}

pub fn compare(doc: &mut Document, args: &CompareArgs) -> Result<()> {
    let (pairs, window) = load_pairs(doc, &args.pair)?;
    let ratio = scaling_ratio(&pairs, scaling(args.scaling), window)?;
    let ks = compare_pairs(&pairs, ratio)?;
    let mut table = Table::new("compare", &["scaling", "ratio", "pairs", "ks"]);
    table.push(vec![
        serde_json::to_value(args.scaling)
            .ok()
            .and_then(|v| v.as_str().map(String::from))
            .into(),
        ratio.into(),
        pairs.len().into(),
        ks.into(),
    ]);
    doc.tables.push(table);
    Ok(())
}

pub fn vix(doc: &mut Document, args: &VixArgs) -> Result<()> {
    if args.chain.len() > 2 {
        return Err(CliError::input("at most two --chain files (near, next)"));
    }
    let mut terms = Table::new(
        "terms",
        &["chain", "expiry_years", "forward", "k0", "strikes", "variance", "vol"],
    );
    let mut contributions = Table::new("contributions", &["chain", "strike", "delta_k", "q", "term"]);
    let mut results = Vec::new();
    for path in &args.chain {
        let bytes = read_input(doc, path)?;
        let chain = OptionChainSnapshot::from_reader(&bytes[..])
            .map_err(|e| CliError::input(format!("{path}: {e}")))?;
        let result = implied_variance(&chain)?;
        terms.push(vec![
            path.as_str().into(),
            result.expiry_time_years.into(),
            chain.forward().into(),
            result.k0.into(),
            result.contributions.len().into(),
            result.variance.into(),
            result.vol().into(),
        ]);
        for c in &result.contributions {
            contributions.push(vec![
                path.as_str().into(),
                c.strike.into(),
                c.delta_k.into(),
                c.q.into(),
                c.term.into(),
            ]);
        }
        results.push(result);
    }
    let mut index = Table::new("index", &["target_days", "variance", "vol"]);
    let (days, variance) = match results.as_slice() {
        [single] => (single.expiry_time_years * volstat::implied::CALENDAR_DAYS, single.variance),
        [near, next] => (
            args.target_days,
            blend_terms(near.term(), next.term(), args.target_days, args.allow_extrapolation)?,
        ),
        _ => unreachable!("clap requires one or two chains"),
    };
    if variance < 0.0 {
        return Err(CliError::Compute(format!("blended variance {variance} is negative")));
    }
    index.push(vec![days.into(), variance.into(), variance.sqrt().into()]);
    doc.tables.extend([terms, contributions, index]);
    Ok(())
}

pub fn model_params(opts: &ModelOpts) -> Result<SVParams> {
    let base = match (&opts.preset, opts.model) {
        (Some(name), _) => name.parse::<Preset>().map_err(CliError::input)?.params(),
        (None, Some(ModelArg::Mult)) => Preset::Multiplicative.params(),
        (None, _) => Preset::Heston.params(),
    };
    let model = match opts.model {
        Some(ModelArg::Heston) => Model::Heston,
        Some(ModelArg::Mult) => Model::Multiplicative,
        None => base.model,
    };
    Ok(SVParams::new(
        model,
        opts.theta.unwrap_or(base.theta),
        opts.gamma.unwrap_or(base.gamma),
        opts.kappa.unwrap_or(base.kappa),
    )?)
}

fn params_table(p: &SVParams) -> Table {
    let mut t = Table::new(
        "params",
        &["model", "theta", "gamma", "kappa", "feller", "stationary_variance"],
    );
    t.push(vec![
        p.model.to_string().into(),
        p.theta.into(),
        p.gamma.into(),
        p.kappa.into(),
        p.feller().to_string().into(),
        p.stationary_variance().ok().into(),
    ]);
    t
}

fn mean_var(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let m = xs.iter().sum::<f64>() / n;
    let v = if xs.len() > 1 {
        xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (n - 1.0)
    } else {
        0.0
    };
    (m, v)
}

pub fn simulate(doc: &mut Document, args: &SimulateArgs) -> Result<()> {
    let params = model_params(&args.model)?;
    if args.paths == 0 || args.steps == 0 {
        return Err(CliError::input("--paths and --steps must be at least 1"));
    }
    let init = match args.v0 {
        Some(v0) => InitialVariance::Fixed(v0),
        None => InitialVariance::Stationary,
    };
    let paths = simulate_paths(params, init, args.dt, args.steps, args.paths, args.seed)?;
    let stride = (1.0 / args.dt).round().max(1.0) as usize;
    let mut summary = Table::new(
        "paths",
        &["path", "v0", "v_end", "mean", "variance", "decay_gamma"],
    );
    for (i, p) in paths.iter().enumerate() {
        let (m, v) = mean_var(&p.values);
        let daily = p.sampled(stride);
        let gamma = fit_decay(&daily).ok().map(|f| f.gamma);
        summary.push(vec![
            i.into(),
            p.values[0].into(),
            p.values[p.values.len() - 1].into(),
            m.into(),
            v.into(),
            gamma.into(),
        ]);
    }
    doc.tables.push(params_table(&params));
    doc.tables.push(summary);
    if let Some(every) = args.emit_path {
        let mut t = Table::new("path", &["t", "v"]);
        let every = every.max(1);
        for (k, v) in paths[0].values.iter().enumerate().step_by(every) {
            t.push(vec![(k as f64 * args.dt).into(), (*v).into()]);
        }
        doc.tables.push(t);
    }
    Ok(())
}

pub fn push_curve(table: &mut Table, curve: &VarRVCurve, label: &str) {
    let kind = curve.kind.to_string();
    for (h, v) in curve.horizons.iter().zip(&curve.values) {
        table.push(vec![
            kind.as_str().into(),
            label.into(),
            (*h).into(),
            (*v).into(),
        ]);
    }
}

pub const CURVE_COLUMNS: [&str; 4] = ["kind", "label", "horizon", "value"];

/// `points` values spaced evenly in log between `lo` and `hi`.
pub fn log_grid(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    if points < 2 {
        return vec![lo];
    }
    let (a, b) = (lo.ln(), hi.ln());
    (0..points)
        .map(|i| (a + (b - a) * i as f64 / (points - 1) as f64).exp())
        .collect()
}

pub fn varrv(doc: &mut Document, args: &VarrvArgs) -> Result<()> {
    let params = model_params(&args.model)?;
    let mut curves = Table::new("curves", &CURVE_COLUMNS);
    push_curve(&mut curves, &theory_curve(&params, &args.horizons)?, "theory");
    if args.paths > 0 {
        let mc = monte_carlo_var_rv(params, &args.horizons, args.paths, args.dt, args.seed)?;
        push_curve(&mut curves, &mc, "monte_carlo");
    }
    if args.reduced {
        let curve = reduced_curve(&log_grid(1e-2, 1e2, args.points))?;
        push_curve(&mut curves, &curve, "gamma_t");
    }
    if let Some(path) = &args.prices {
        let prices = load_prices(doc, path, &args.series)?;
        let returns = log_returns(&prices)?;
        let mut days = Vec::with_capacity(args.horizons.len());
        for &h in &args.horizons {
            if h.fract() != 0.0 || h < 1.0 {
                return Err(CliError::input(format!(
                    "empirical curve needs whole-day horizons, got {h}"
                )));
            }
            days.push(h as usize);
        }
        let curve = volstat::sv::empirical_var_rv(&returns, &days)?;
        push_curve(&mut curves, &curve, path);
    }
    doc.tables.push(params_table(&params));
    doc.tables.push(curves);
    Ok(())
}

/// De-annualized daily squared log returns.
pub fn squared_returns(prices: &PriceSeries) -> Result<Vec<f64>> {
    Ok(log_returns(prices)?
        .values()
        .into_iter()
        .map(|r| r * r)
        .collect())
}

pub fn estimate(doc: &mut Document, args: &EstimateArgs) -> Result<()> {
    let window = period(args.from.as_deref(), args.to.as_deref())?;
    let prices = load_prices(doc, &args.prices, &args.series)?.restrict(window);
    let proxy = squared_returns(&prices)?;
    let model = match args.model {
        ModelArg::Heston => Model::Heston,
        ModelArg::Mult => Model::Multiplicative,
    };
    let params = estimate_params(&proxy, model)?;
    let decay = fit_decay(&proxy)?;
    let mut fit = Table::new("decay_fit", &["gamma", "amplitude", "lags", "days"]);
    fit.push(vec![
        decay.gamma.into(),
        decay.amplitude.into(),
        decay.lags.into(),
        proxy.len().into(),
    ]);
    doc.tables.push(params_table(&params));
    doc.tables.push(fit);
    Ok(())
}
