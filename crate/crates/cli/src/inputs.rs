//! Input file resolution, hashing and parsing.

use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

use volstat::market_data::{
    parse_index_csv, parse_price_csv, ColumnMapping, DateFormat, IndexKind, IndexSeries, Period,
    PriceSeries, TradingDate,
};

use crate::args::{DateFormatArg, KindArg, SeriesOpts};
use crate::error::{in_file, CliError, Result};
use crate::output::{Document, InputFile};

/// Environment variable consulted when a relative input path does not exist.
pub const DATA_DIR_ENV: &str = "VOLSTAT_DATA_DIR";

/// Returns `path` if it exists, else `$VOLSTAT_DATA_DIR/path`, else
/// `$VOLSTAT_DATA_DIR/<file name>`.
pub fn resolve(path: &str) -> Result<PathBuf> {
    let direct = PathBuf::from(path);
    if direct.exists() {
        return Ok(direct);
    }
    if let Some(dir) = std::env::var_os(DATA_DIR_ENV) {
        let dir = PathBuf::from(dir);
        let mut candidates = vec![dir.join(path)];
        if let Some(name) = Path::new(path).file_name() {
            candidates.push(dir.join(name));
        }
        if let Some(found) = candidates.into_iter().find(|c| c.exists()) {
            return Ok(found);
        }
    }
    Err(CliError::input(format!("{path}: file not found")))
}

/// Reads an input file and records its hash in the document provenance.
pub fn read_input(doc: &mut Document, path: &str) -> Result<Vec<u8>> {
    let resolved = resolve(path)?;
    let bytes = std::fs::read(&resolved)
        .map_err(|e| CliError::input(format!("{}: {e}", resolved.display())))?;
    doc.inputs.push(InputFile {
        path: path.to_string(),
        sha256: hex::encode(Sha256::digest(&bytes)),
    });
    Ok(bytes)
}

pub fn mapping(opts: &SeriesOpts) -> ColumnMapping {
    let format = match opts.date_format {
        DateFormatArg::Iso => DateFormat::Iso,
        DateFormatArg::Us => DateFormat::Us,
    };
    ColumnMapping::new(opts.date_column.as_str(), opts.value_column.as_str()).with_date_format(format)
}

pub fn load_prices(doc: &mut Document, path: &str, opts: &SeriesOpts) -> Result<PriceSeries> {
    let bytes = read_input(doc, path)?;
    parse_price_csv(&bytes[..], &mapping(opts)).map_err(in_file(path))
}

pub fn index_kind(kind: KindArg) -> IndexKind {
    match kind {
        KindArg::Vix => IndexKind::Vix,
        KindArg::Vxo => IndexKind::Vxo,
    }
}

pub fn load_index(
    doc: &mut Document,
    path: &str,
    kind: KindArg,
    opts: &SeriesOpts,
) -> Result<IndexSeries> {
    let bytes = read_input(doc, path)?;
    parse_index_csv(&bytes[..], index_kind(kind), &mapping(opts)).map_err(in_file(path))
}

pub fn parse_date(text: &str) -> Result<TradingDate> {
    text.parse()
        .map_err(|_| CliError::input(format!("invalid date {text:?} (expected YYYY-MM-DD)")))
}

/// Period from optional bounds; open ends extend to the extremes.
pub fn period(from: Option<&str>, to: Option<&str>) -> Result<Period> {
    let start = match from {
        Some(s) => parse_date(s)?,
        None => TradingDate::from_ymd(1, 1, 1).expect("valid"),
    };
    let end = match to {
        Some(s) => parse_date(s)?,
        None => TradingDate::from_ymd(9999, 12, 31).expect("valid"),
    };
    if start > end {
        return Err(CliError::input(format!("--from {start} is after --to {end}")));
    }
    Ok(Period::new(start, end))
}
