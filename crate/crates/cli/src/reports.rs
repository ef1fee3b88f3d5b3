//! Named reports regenerating each table and figure dataset from
//! `sp500.csv`, `vix.csv` and `vxo.csv` in the data directory.

use volstat::dist::Family;
use volstat::market_data::{periods, IndexSeries, PriceSeries};
use volstat::realized::{log_returns, loglog_fit, pair_with_index, variance_vs_n, Alignment};
use volstat::sv::{empirical_var_rv, reduced_curve, theory_curve, Preset, VarRVCurve};

use crate::args::{KindArg, ReportArgs, ReportName};
use crate::commands::{
    compare_pairs, push_curve, rank_or_skip, realized, CURVE_COLUMNS,
};
use crate::error::Result;
use crate::inputs::{load_index, load_prices};
use crate::output::{Cell, Document, Table};

const N: usize = 21;
/// Horizons (days) of the low- and high-`n` straight-line fits in fig13.
const SHORT_BRANCH: (usize, usize) = (1, 6);
const LONG_BRANCH: (usize, usize) = (74, 252);
const REPORT_GAMMA: f64 = 0.041;

struct Data {
    prices: PriceSeries,
    indices: Vec<(KindArg, IndexSeries)>,
}

fn data_path(args: &ReportArgs, file: &str) -> String {
    std::path::Path::new(&args.data_dir)
        .join(file)
        .to_string_lossy()
        .into_owned()
}

fn load(doc: &mut Document, args: &ReportArgs, with_index: bool) -> Result<Data> {
    let prices = load_prices(doc, &data_path(args, "sp500.csv"), &args.series)?;
    let mut indices = Vec::new();
    if with_index {
        for (kind, file) in [(KindArg::Vix, "vix.csv"), (KindArg::Vxo, "vxo.csv")] {
            indices.push((kind, load_index(doc, &data_path(args, file), kind, &args.series)?));
        }
    }
    Ok(Data { prices, indices })
}

fn kind_label(kind: KindArg) -> &'static str {
    match kind {
        KindArg::Vix => "VIX",
        KindArg::Vxo => "VXO",
    }
}

pub fn run(doc: &mut Document, args: &ReportArgs) -> Result<()> {
    match args.name {
        ReportName::Table1 => table1(doc, args),
        ReportName::Table2 => table2(doc, args),
        ReportName::Table3Concurrent => ratio_tables(doc, args, Alignment::Concurrent),
        ReportName::TablePreceding => ratio_tables(doc, args, Alignment::Preceding),
        ReportName::Fig2Slope => fig2_slope(doc, args),
        ReportName::Fig13 => fig13(doc, args),
        ReportName::Fig14 => fig14(doc, args),
    }
}

fn table1(doc: &mut Document, args: &ReportArgs) -> Result<()> {
    let data = load(doc, args, true)?;
    let mut table = Table::new(
        "scaling",
        &["index", "period", "ratio", "index2_mean", "rv2_mean", "pairs"],
    );
    for (kind, index) in &data.indices {
        for (label, window) in periods::standard() {
            let rv = realized(&data.prices, window, N)?;
            let pairs = pair_with_index(&rv, index, Alignment::Concurrent)?;
            let report = pairs.scaling_report(window)?;
            table.push(vec![
                kind_label(*kind).into(),
                label.into(),
                report.ratio.into(),
                report.numerator_mean.into(),
                report.denominator_mean.into(),
                report.count.into(),
            ]);
        }
    }
    let mut theory = Table::new("theory", &["label", "ratio"]);
    theory.push(vec!["365/252".into(), (365.0 / 252.0).into()]);
    theory.push(vec!["30/21".into(), (30.0 / 21.0).into()]);
    doc.tables.extend([table, theory]);
    Ok(())
}

fn table2(doc: &mut Document, args: &ReportArgs) -> Result<()> {
    let data = load(doc, args, true)?;
    let mut table = Table::new("ks", &["index", "period", "ratio", "pairs", "ks"]);
    for (kind, index) in &data.indices {
        for (label, window) in periods::standard() {
            let rv = realized(&data.prices, window, N)?;
            let pairs = pair_with_index(&rv, index, Alignment::Concurrent)?;
            let ratio = pairs.scaling_report(window)?.ratio;
            table.push(vec![
                kind_label(*kind).into(),
                label.into(),
                ratio.into(),
                pairs.len().into(),
                compare_pairs(&pairs, ratio)?.into(),
            ]);
        }
    }
    doc.tables.push(table);
    Ok(())
}

fn ratio_tables(doc: &mut Document, args: &ReportArgs, alignment: Alignment) -> Result<()> {
    let data = load(doc, args, true)?;
    let mut fits = Table::new(
        "fits",
        &[
            "index", "period", "direction", "rank", "family", "params", "ks", "loglik", "n",
            "normalized_by",
        ],
    );
    let mut skipped = Table::new("skipped", &["index", "period", "direction", "family", "reason"]);
    for (kind, index) in &data.indices {
        for (label, window) in periods::standard() {
            let rv = realized(&data.prices, window, N)?;
            let pairs = pair_with_index(&rv, index, alignment)?;
            let forward = pairs.ratios();
            let inverse: Vec<f64> = forward.iter().filter(|&&r| r > 0.0).map(|r| 1.0 / r).collect();
            for (direction, sample) in [("rv_over_index", forward), ("index_over_rv", inverse)] {
                let ranking = rank_or_skip(&sample, &Family::CORE)?;
                for (i, r) in ranking.results.iter().enumerate() {
                    let params: Vec<String> =
                        r.params.iter().map(|p| crate::output::format_num(*p)).collect();
                    fits.push(vec![
                        kind_label(*kind).into(),
                        label.into(),
                        direction.into(),
                        (i + 1).into(),
                        r.family.abbreviation().into(),
                        params.join(" ").into(),
                        r.ks.into(),
                        r.log_likelihood.into(),
                        r.n.into(),
                        r.normalized_by.into(),
                    ]);
                }
                for s in &ranking.skipped {
                    skipped.push(vec![
                        kind_label(*kind).into(),
                        label.into(),
                        direction.into(),
                        s.family.abbreviation().into(),
                        s.reason.clone().into(),
                    ]);
                }
            }
        }
    }
    doc.tables.extend([fits, skipped]);
    Ok(())
}

fn fig2_slope(doc: &mut Document, args: &ReportArgs) -> Result<()> {
    let data = load(doc, args, false)?;
    let returns = log_returns(&data.prices.restrict(periods::full()))?;
    let ns: Vec<usize> = (1..=N).collect();
    let scaling = variance_vs_n(&returns, &ns)?;
    let mut points = Table::new("variance_vs_n", &["n", "variance"]);
    for (n, v) in &scaling.points {
        points.push(vec![(*n).into(), (*v).into()]);
    }
    let mut fit = Table::new("fit", &["slope", "intercept"]);
    fit.push(vec![scaling.slope.into(), scaling.intercept.into()]);
    doc.tables.extend([points, fit]);
    Ok(())
}

fn empirical_curve(data: &Data) -> Result<VarRVCurve> {
    let returns = log_returns(&data.prices.restrict(periods::full()))?;
    let horizons: Vec<usize> = (1..=252).collect();
    Ok(empirical_var_rv(&returns, &horizons)?)
}

fn branch_slopes(curve: &VarRVCurve, x_scale: f64) -> Result<Table> {
    let mut table = Table::new("slopes", &["branch", "from", "to", "slope"]);
    for (name, (lo, hi)) in [("short", SHORT_BRANCH), ("long", LONG_BRANCH)] {
        let points: Vec<(usize, f64)> = curve
            .horizons
            .iter()
            .zip(&curve.values)
            .filter(|(h, _)| (lo as f64..=hi as f64).contains(*h))
            .map(|(h, v)| (*h as usize, *v))
            .collect();
        let fit = loglog_fit(&points)?;
        table.push(vec![
            name.into(),
            (lo as f64 * x_scale).into(),
            (hi as f64 * x_scale).into(),
            fit.slope.into(),
        ]);
    }
    Ok(table)
}

fn fig13(doc: &mut Document, args: &ReportArgs) -> Result<()> {
    let data = load(doc, args, false)?;
    let empirical = empirical_curve(&data)?;
    let mut curves = Table::new("curves", &CURVE_COLUMNS);
    push_curve(&mut curves, &empirical, "sp500");
    for preset in Preset::ALL {
        let curve = theory_curve(&preset.params(), &empirical.horizons)?;
        push_curve(&mut curves, &curve, preset.name());
    }
    let slopes = branch_slopes(&empirical, 1.0)?;
    doc.tables.extend([curves, slopes]);
    Ok(())
}

fn fig14(doc: &mut Document, args: &ReportArgs) -> Result<()> {
    let data = load(doc, args, false)?;
    let empirical = empirical_curve(&data)?;
    let normalized = empirical.normalized();
    let rescaled = VarRVCurve {
        horizons: normalized.horizons.iter().map(|h| h * REPORT_GAMMA).collect(),
        ..normalized
    };
    let mut curves = Table::new("curves", &CURVE_COLUMNS);
    push_curve(&mut curves, &rescaled, "sp500");
    push_curve(&mut curves, &reduced_curve(&rescaled.horizons)?, "gamma_t");
    let mut gamma = Table::new("scale", &["gamma"]);
    gamma.push(vec![Cell::from(REPORT_GAMMA)]);
    let slopes = branch_slopes(&empirical, REPORT_GAMMA)?;
    doc.tables.extend([curves, slopes, gamma]);
    Ok(())
}
