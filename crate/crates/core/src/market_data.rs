//! Ingestion of dated price and volatility-index series from delimited text,
//! plus inner-join alignment of several series onto a common date grid.

use std::collections::BTreeMap;
use std::fmt;
use std::io::{Read, Write};
use std::str::FromStr;

use chrono::{Datelike, NaiveDate};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MarketDataError {
    #[error("input contains no data rows")]
    EmptyInput,
    #[error("header has no column named `{0}`")]
    MissingColumn(String),
    #[error("line {line}: malformed row ({reason})")]
    MalformedRow { line: u64, reason: String },
    #[error("line {line}: non-positive price {value}")]
    NonPositivePrice { line: u64, value: f64 },
    #[error("line {line}: negative index level {value}")]
    NegativeLevel { line: u64, value: f64 },
    #[error("duplicate date {0}")]
    DuplicateDate(TradingDate),
    #[error("dates are not strictly increasing at {0}")]
    Unordered(TradingDate),
    #[error("series `{0}` is empty")]
    EmptySeries(String),
    #[error("no series to align")]
    NothingToAlign,
    #[error("series share no common dates")]
    EmptyIntersection,
    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, MarketDataError>;

/// A calendar date on which a market observation was recorded.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TradingDate(NaiveDate);

impl TradingDate {
    pub fn from_ymd(year: i32, month: u32, day: u32) -> Option<Self> {
        NaiveDate::from_ymd_opt(year, month, day).map(TradingDate)
    }

    pub fn parse(text: &str, format: DateFormat) -> Option<Self> {
        let text = text.trim();
        let pattern = match format {
            DateFormat::Iso => "%Y-%m-%d",
            DateFormat::Us => "%m/%d/%Y",
        };
        NaiveDate::parse_from_str(text, pattern).ok().map(TradingDate)
    }

    /// Calendar date `days` days later (earlier if negative).
    pub fn plus_days(self, days: i64) -> Self {
        TradingDate(self.0 + chrono::Duration::days(days))
    }

    pub fn year(&self) -> i32 {
        self.0.year()
    }

    pub fn month(&self) -> u32 {
        self.0.month()
    }

    pub fn day(&self) -> u32 {
        self.0.day()
    }
}

impl fmt::Display for TradingDate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0.format("%Y-%m-%d"))
    }
}

impl FromStr for TradingDate {
    type Err = MarketDataError;

    fn from_str(s: &str) -> Result<Self> {
        TradingDate::parse(s, DateFormat::Iso)
            .or_else(|| TradingDate::parse(s, DateFormat::Us))
            .ok_or_else(|| MarketDataError::MalformedRow {
                line: 0,
                reason: format!("unparsable date `{s}`"),
            })
    }
}

impl Serialize for TradingDate {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for TradingDate {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Inclusive date range.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Period {
    pub start: TradingDate,
    pub end: TradingDate,
}

impl Period {
    pub fn new(start: TradingDate, end: TradingDate) -> Self {
        Period { start, end }
    }

    pub fn contains(&self, date: TradingDate) -> bool {
        self.start <= date && date <= self.end
    }
}

impl fmt::Display for Period {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}..{}", self.start, self.end)
    }
}

/// Default sub-period splits for the 1990–2016 study window.
pub mod periods {
    use super::{Period, TradingDate};

    fn d(y: i32, m: u32, day: u32) -> TradingDate {
        TradingDate::from_ymd(y, m, day).expect("valid constant date")
    }

    pub fn full() -> Period {
        Period::new(d(1990, 1, 2), d(2016, 12, 30))
    }

    /// Archive era, before the methodology change of September 2003.
    pub fn archive() -> Period {
        Period::new(d(1990, 1, 2), d(2003, 9, 19))
    }

    pub fn current() -> Period {
        Period::new(d(2003, 9, 22), d(2016, 12, 30))
    }

    pub fn current_early() -> Period {
        Period::new(d(2003, 9, 22), d(2010, 8, 30))
    }

    pub fn current_late() -> Period {
        Period::new(d(2010, 8, 31), d(2016, 12, 30))
    }

    /// Labelled list in table order.
    pub fn standard() -> Vec<(&'static str, Period)> {
        vec![
            ("1990-2016", full()),
            ("1990-2003", archive()),
            ("2003-2016", current()),
            ("2003-2010", current_early()),
            ("2010-2016", current_late()),
        ]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
pub enum DateFormat {
    /// `YYYY-MM-DD`
    #[default]
    Iso,
    /// `M/D/YYYY`, zero padding optional
    Us,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
pub enum Delimiter {
    Comma,
    Tab,
    /// Tab if the header line contains a tab and no comma, else comma.
    #[default]
    Auto,
}

/// Which header columns hold the date and the value, and how to read them.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColumnMapping {
    pub date_column: String,
    pub value_column: String,
    pub date_format: DateFormat,
    pub delimiter: Delimiter,
}

impl ColumnMapping {
    pub fn new(date_column: impl Into<String>, value_column: impl Into<String>) -> Self {
        ColumnMapping {
            date_column: date_column.into(),
            value_column: value_column.into(),
            date_format: DateFormat::Iso,
            delimiter: Delimiter::Auto,
        }
    }

    pub fn with_date_format(mut self, format: DateFormat) -> Self {
        self.date_format = format;
        self
    }

    pub fn with_delimiter(mut self, delimiter: Delimiter) -> Self {
        self.delimiter = delimiter;
        self
    }
}

impl Default for ColumnMapping {
    fn default() -> Self {
        ColumnMapping::new("Date", "Close")
    }
}

/// Anything that can be viewed as a dated sequence of reals.
pub trait DatedSeries {
    fn dated_values(&self) -> Vec<(TradingDate, f64)>;
}

impl DatedSeries for Vec<(TradingDate, f64)> {
    fn dated_values(&self) -> Vec<(TradingDate, f64)> {
        self.clone()
    }
}

impl DatedSeries for [(TradingDate, f64)] {
    fn dated_values(&self) -> Vec<(TradingDate, f64)> {
        self.to_vec()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PricePoint {
    pub date: TradingDate,
    pub close: f64,
}

/// Closing prices, strictly increasing in date, all strictly positive.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PriceSeries {
    observations: Vec<PricePoint>,
}

impl PriceSeries {
    /// Sorts by date and validates. Rejects duplicates and non-positive closes.
    pub fn new(mut points: Vec<(TradingDate, f64)>) -> Result<Self> {
        points.sort_by_key(|p| p.0);
        check_unique(&points)?;
        for (i, &(_, close)) in points.iter().enumerate() {
            if !(close > 0.0) || !close.is_finite() {
                return Err(MarketDataError::NonPositivePrice {
                    line: i as u64 + 1,
                    value: close,
                });
            }
        }
        Ok(PriceSeries {
            observations: points
                .into_iter()
                .map(|(date, close)| PricePoint { date, close })
                .collect(),
        })
    }

    pub fn observations(&self) -> &[PricePoint] {
        &self.observations
    }

    pub fn len(&self) -> usize {
        self.observations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.observations.is_empty()
    }

    pub fn dates(&self) -> impl Iterator<Item = TradingDate> + '_ {
        self.observations.iter().map(|p| p.date)
    }

    /// Observations falling inside `period`.
    pub fn restrict(&self, period: Period) -> PriceSeries {
        PriceSeries {
            observations: self
                .observations
                .iter()
                .copied()
                .filter(|p| period.contains(p.date))
                .collect(),
        }
    }

    /// Writes `Date,Close` CSV with ISO dates and shortest round-trip floats.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        write_two_column(out, "Close", self.observations.iter().map(|p| (p.date, p.close)))
    }
}

impl DatedSeries for PriceSeries {
    fn dated_values(&self) -> Vec<(TradingDate, f64)> {
        self.observations.iter().map(|p| (p.date, p.close)).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum IndexKind {
    Vix,
    Vxo,
    Other,
}

impl fmt::Display for IndexKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            IndexKind::Vix => "VIX",
            IndexKind::Vxo => "VXO",
            IndexKind::Other => "INDEX",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IndexPoint {
    pub date: TradingDate,
    pub level: f64,
}

/// Volatility-index levels (annualized volatility in percent).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IndexSeries {
    kind: IndexKind,
    observations: Vec<IndexPoint>,
}

impl IndexSeries {
    pub fn new(kind: IndexKind, mut points: Vec<(TradingDate, f64)>) -> Result<Self> {
        points.sort_by_key(|p| p.0);
        check_unique(&points)?;
        for (i, &(_, level)) in points.iter().enumerate() {
            if !(level >= 0.0) || !level.is_finite() {
                return Err(MarketDataError::NegativeLevel {
                    line: i as u64 + 1,
                    value: level,
                });
            }
        }
        Ok(IndexSeries {
            kind,
            observations: points
                .into_iter()
                .map(|(date, level)| IndexPoint { date, level })
                .collect(),
        })
    }

    pub fn kind(&self) -> IndexKind {
        self.kind
    }

    pub fn observations(&self) -> &[IndexPoint] {
        &self.observations
    }

    pub fn len(&self) -> usize {
        self.observations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.observations.is_empty()
    }

    pub fn level_on(&self, date: TradingDate) -> Option<f64> {
        self.observations
            .binary_search_by_key(&date, |p| p.date)
            .ok()
            .map(|i| self.observations[i].level)
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        write_two_column(out, "Close", self.observations.iter().map(|p| (p.date, p.level)))
    }
}

impl DatedSeries for IndexSeries {
    fn dated_values(&self) -> Vec<(TradingDate, f64)> {
        self.observations.iter().map(|p| (p.date, p.level)).collect()
    }
}

/// Result of a lenient scan: accepted rows plus one error per rejected row.
#[derive(Debug, Clone, PartialEq)]
pub struct ParseOutcome {
    pub accepted: Vec<(TradingDate, f64)>,
    pub rejected: Vec<MarketDataError>,
    pub row_count: usize,
}

/// Reads every data row, classifying each as accepted or rejected.
///
/// `validate` sees the 1-based file line and the parsed value. Header-level
/// problems (missing column, unreadable stream) abort the scan.
pub fn scan_rows<R, F>(mut raw: R, mapping: &ColumnMapping, validate: F) -> Result<ParseOutcome>
where
    R: Read,
    F: Fn(u64, f64) -> std::result::Result<(), MarketDataError>,
{
    let mut bytes = Vec::new();
    raw.read_to_end(&mut bytes)
        .map_err(|e| MarketDataError::Io(e.to_string()))?;
    let delimiter = match mapping.delimiter {
        Delimiter::Comma => b',',
        Delimiter::Tab => b'\t',
        Delimiter::Auto => {
            let first = bytes.split(|&b| b == b'\n').next().unwrap_or(&[]);
            if first.contains(&b'\t') && !first.contains(&b',') {
                b'\t'
            } else {
                b','
            }
        }
    };
    let mut reader = csv::ReaderBuilder::new()
        .delimiter(delimiter)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(bytes.as_slice());
    let headers = reader
        .headers()
        .map_err(|e| MarketDataError::Io(e.to_string()))?
        .clone();
    let find = |name: &str| {
        headers
            .iter()
            .position(|h| h.trim_start_matches('\u{feff}').eq_ignore_ascii_case(name))
            .ok_or_else(|| MarketDataError::MissingColumn(name.to_string()))
    };
    let date_idx = find(&mapping.date_column)?;
    let value_idx = find(&mapping.value_column)?;

    let mut outcome = ParseOutcome {
        accepted: Vec::new(),
        rejected: Vec::new(),
        row_count: 0,
    };
    for (i, record) in reader.records().enumerate() {
        outcome.row_count += 1;
        // header is line 1
        let fallback_line = i as u64 + 2;
        let record = match record {
            Ok(r) => r,
            Err(e) => {
                outcome.rejected.push(MarketDataError::MalformedRow {
                    line: fallback_line,
                    reason: e.to_string(),
                });
                continue;
            }
        };
        let line = record.position().map(|p| p.line()).unwrap_or(fallback_line);
        let row = parse_row(&record, line, date_idx, value_idx, mapping.date_format)
            .and_then(|(date, value)| validate(line, value).map(|_| (date, value)));
        match row {
            Ok(pair) => outcome.accepted.push(pair),
            Err(e) => outcome.rejected.push(e),
        }
    }
    Ok(outcome)
}

fn parse_row(
    record: &csv::StringRecord,
    line: u64,
    date_idx: usize,
    value_idx: usize,
    format: DateFormat,
) -> Result<(TradingDate, f64)> {
    let malformed = |reason: String| MarketDataError::MalformedRow { line, reason };
    let date_text = record
        .get(date_idx)
        .filter(|s| !s.is_empty())
        .ok_or_else(|| malformed("missing date".into()))?;
    let value_text = record
        .get(value_idx)
        .filter(|s| !s.is_empty())
        .ok_or_else(|| malformed("missing value".into()))?;
    let date = TradingDate::parse(date_text, format)
        .ok_or_else(|| malformed(format!("unparsable date `{date_text}`")))?;
    let value: f64 = value_text
        .parse()
        .map_err(|_| malformed(format!("unparsable number `{value_text}`")))?;
    if !value.is_finite() {
        return Err(malformed(format!("non-finite number `{value_text}`")));
    }
    Ok((date, value))
}

fn strict(outcome: ParseOutcome) -> Result<Vec<(TradingDate, f64)>> {
    if let Some(err) = outcome.rejected.into_iter().next() {
        return Err(err);
    }
    if outcome.accepted.is_empty() {
        return Err(MarketDataError::EmptyInput);
    }
    Ok(outcome.accepted)
}

fn price_check(line: u64, value: f64) -> Result<()> {
    if value > 0.0 {
        Ok(())
    } else {
        Err(MarketDataError::NonPositivePrice { line, value })
    }
}

fn level_check(line: u64, value: f64) -> Result<()> {
    if value >= 0.0 {
        Ok(())
    } else {
        Err(MarketDataError::NegativeLevel { line, value })
    }
}

/// Lenient variant of [`parse_price_csv`] reporting every row's fate.
pub fn scan_price_csv<R: Read>(raw: R, mapping: &ColumnMapping) -> Result<ParseOutcome> {
    scan_rows(raw, mapping, price_check)
}

/// Parses closing prices. Fails on the first rejected row.
pub fn parse_price_csv<R: Read>(raw: R, mapping: &ColumnMapping) -> Result<PriceSeries> {
    let rows = strict(scan_price_csv(raw, mapping)?)?;
    PriceSeries::new(rows)
}

pub fn scan_index_csv<R: Read>(raw: R, mapping: &ColumnMapping) -> Result<ParseOutcome> {
    scan_rows(raw, mapping, level_check)
}

/// Parses index levels. Fails on the first rejected row.
pub fn parse_index_csv<R: Read>(
    raw: R,
    kind: IndexKind,
    mapping: &ColumnMapping,
) -> Result<IndexSeries> {
    let rows = strict(scan_index_csv(raw, mapping)?)?;
    IndexSeries::new(kind, rows)
}

fn check_unique(points: &[(TradingDate, f64)]) -> Result<()> {
    for pair in points.windows(2) {
        if pair[0].0 == pair[1].0 {
            return Err(MarketDataError::DuplicateDate(pair[0].0));
        }
    }
    Ok(())
}

fn write_two_column<W, I>(out: W, value_name: &str, rows: I) -> Result<()>
where
    W: Write,
    I: Iterator<Item = (TradingDate, f64)>,
{
    let mut w = csv::Writer::from_writer(out);
    let io = |e: csv::Error| MarketDataError::Io(e.to_string());
    w.write_record(["Date", value_name]).map_err(io)?;
    for (date, value) in rows {
        w.write_record([date.to_string(), value.to_string()]).map_err(io)?;
    }
    w.flush().map_err(|e| MarketDataError::Io(e.to_string()))
}

/// Several series restricted to their common dates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlignedPanel {
    dates: Vec<TradingDate>,
    columns: Vec<(String, Vec<f64>)>,
}

impl AlignedPanel {
    pub fn dates(&self) -> &[TradingDate] {
        &self.dates
    }

    pub fn len(&self) -> usize {
        self.dates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dates.is_empty()
    }

    pub fn column_names(&self) -> impl Iterator<Item = &str> {
        self.columns.iter().map(|(n, _)| n.as_str())
    }

    pub fn column(&self, name: &str) -> Option<&[f64]> {
        self.columns
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, v)| v.as_slice())
    }

    pub fn column_at(&self, index: usize) -> Option<&[f64]> {
        self.columns.get(index).map(|(_, v)| v.as_slice())
    }

    /// Column `index` re-paired with the panel dates.
    pub fn series(&self, index: usize) -> Option<Vec<(TradingDate, f64)>> {
        self.column_at(index)
            .map(|values| self.dates.iter().copied().zip(values.iter().copied()).collect())
    }
}

/// Inner join of the named series on date. Column order follows input order.
pub fn align<S: AsRef<str>>(series: &[(S, &dyn DatedSeries)]) -> Result<AlignedPanel> {
    if series.is_empty() {
        return Err(MarketDataError::NothingToAlign);
    }
    let mut maps: Vec<BTreeMap<TradingDate, f64>> = Vec::with_capacity(series.len());
    for (name, s) in series {
        let map: BTreeMap<_, _> = s.dated_values().into_iter().collect();
        if map.is_empty() {
            return Err(MarketDataError::EmptySeries(name.as_ref().to_string()));
        }
        maps.push(map);
    }
    let dates: Vec<TradingDate> = maps[0]
        .keys()
        .copied()
        .filter(|d| maps[1..].iter().all(|m| m.contains_key(d)))
        .collect();
    if dates.is_empty() {
        return Err(MarketDataError::EmptyIntersection);
    }
    let columns = series
        .iter()
        .zip(&maps)
        .map(|((name, _), map)| {
            (
                name.as_ref().to_string(),
                dates.iter().map(|d| map[d]).collect(),
            )
        })
        .collect();
    Ok(AlignedPanel { dates, columns })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(s: &str) -> TradingDate {
        s.parse().unwrap()
    }

    #[test]
    fn parses_two_rows_ascending() {
        let raw = "Date,Close\n2016-12-29,2249.26\n2016-12-30,2238.83\n";
        let s = parse_price_csv(raw.as_bytes(), &ColumnMapping::default()).unwrap();
        assert_eq!(s.len(), 2);
        assert_eq!(s.observations()[0].date, d("2016-12-29"));
        assert_eq!(s.observations()[1].close, 2238.83);
    }

    #[test]
    fn zero_price_rejected() {
        let raw = "Date,Close\n2016-12-29,2249.26\n2016-12-30,0.0\n";
        let err = parse_price_csv(raw.as_bytes(), &ColumnMapping::default()).unwrap_err();
        assert_eq!(err, MarketDataError::NonPositivePrice { line: 3, value: 0.0 });
    }

    #[test]
    fn negative_level_rejected() {
        let raw = "Date,Close\n1990-01-02,-1.0\n";
        let err =
            parse_index_csv(raw.as_bytes(), IndexKind::Vix, &ColumnMapping::default()).unwrap_err();
        assert!(matches!(err, MarketDataError::NegativeLevel { line: 2, .. }));
    }

    #[test]
    fn single_index_row() {
        let raw = "Date,Close\n1990-01-02,17.24\n";
        let s = parse_index_csv(raw.as_bytes(), IndexKind::Vix, &ColumnMapping::default()).unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!(s.level_on(d("1990-01-02")), Some(17.24));
    }

    #[test]
    fn us_dates_and_tabs() {
        let raw = "DATE\tOPEN\tCLOSE\n1/2/1990\t17.24\t17.24\n01/03/1990\t18.19\t18.19\n";
        let mapping = ColumnMapping::new("DATE", "CLOSE").with_date_format(DateFormat::Us);
        let s = parse_index_csv(raw.as_bytes(), IndexKind::Vix, &mapping).unwrap();
        assert_eq!(s.len(), 2);
        assert_eq!(s.observations()[1].date, d("1990-01-03"));
    }

    #[test]
    fn missing_cell_is_row_error() {
        let raw = "Date,Close\n2016-12-29,\n2016-12-30,5\n";
        let out = scan_price_csv(raw.as_bytes(), &ColumnMapping::default()).unwrap();
        assert_eq!(out.accepted.len(), 1);
        assert!(matches!(
            out.rejected[0],
            MarketDataError::MalformedRow { line: 2, .. }
        ));
    }

    #[test]
    fn duplicate_date_rejected() {
        let raw = "Date,Close\n2016-12-29,1\n2016-12-29,2\n";
        let err = parse_price_csv(raw.as_bytes(), &ColumnMapping::default()).unwrap_err();
        assert_eq!(err, MarketDataError::DuplicateDate(d("2016-12-29")));
    }

    #[test]
    fn header_only_is_empty_input() {
        let err = parse_price_csv("Date,Close\n".as_bytes(), &ColumnMapping::default()).unwrap_err();
        assert_eq!(err, MarketDataError::EmptyInput);
    }

    #[test]
    fn missing_column() {
        let err = parse_price_csv("Day,Px\n".as_bytes(), &ColumnMapping::default()).unwrap_err();
        assert_eq!(err, MarketDataError::MissingColumn("Date".into()));
    }

    #[test]
    fn align_identity_and_disjoint() {
        let a = vec![(d("2020-01-02"), 1.0), (d("2020-01-03"), 2.0)];
        let b = vec![(d("2020-01-02"), 3.0), (d("2020-01-03"), 4.0)];
        let p = align(&[("a", &a as &dyn DatedSeries), ("b", &b)]).unwrap();
        assert_eq!(p.len(), 2);
        assert_eq!(p.column("b"), Some(&[3.0, 4.0][..]));

        let c = vec![(d("2021-01-04"), 1.0)];
        assert_eq!(
            align(&[("a", &a as &dyn DatedSeries), ("c", &c)]).unwrap_err(),
            MarketDataError::EmptyIntersection
        );
    }

    #[test]
    fn align_drops_holiday() {
        let a = vec![(d("2020-01-02"), 1.0), (d("2020-01-03"), 2.0), (d("2020-01-06"), 3.0)];
        let b = vec![(d("2020-01-02"), 1.0), (d("2020-01-06"), 3.0)];
        let p = align(&[("a", &a as &dyn DatedSeries), ("b", &b)]).unwrap();
        assert_eq!(p.dates(), &[d("2020-01-02"), d("2020-01-06")]);
    }
}
