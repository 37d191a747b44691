//! Price series ingestion, window enumeration, and pairwise alignment.
//!
//! Two input layouts are accepted: a single CSV with `date,ticker,close`
//! columns, or a directory of `<TICKER>.csv` files with `date,close` columns
//! (the file stem is the ticker). Dates are ISO-8601. Malformed rows are
//! skipped and reported as diagnostics; duplicate `(ticker, date)` rows are a
//! fatal error.
//!
//! Windows are laid out on the union calendar of all tickers at offsets
//! `0, shift, 2*shift, ...`. Each pair of tickers is aligned separately on the
//! intersection of its observation dates inside a window; a pair is rejected
//! when those common dates cover less than a configurable fraction of the
//! window length.

use std::collections::BTreeMap;
use std::collections::BTreeSet;
use std::path::Path;

use chrono::NaiveDate;

use crate::error::{Error, Result};

/// Default minimum fraction of a window the common dates of a pair must
/// cover.
pub const DEFAULT_COVERAGE_THRESHOLD: f64 = 0.8;

/// One ticker's close series, dates strictly increasing, closes positive.
#[derive(Debug, Clone)]
pub struct PriceSeries {
    ticker: String,
    observations: Vec<(NaiveDate, f64)>,
}

impl PriceSeries {
    /// Build a series from raw observations. Observations are sorted by date;
    /// duplicate dates are rejected. Closes must already be positive and
    /// finite (the CSV loader filters offending rows before this point).
    pub fn new(ticker: impl Into<String>, mut observations: Vec<(NaiveDate, f64)>) -> Result<Self> {
        let ticker = ticker.into();
        observations.sort_by_key(|(d, _)| *d);
        for pair in observations.windows(2) {
            if pair[0].0 == pair[1].0 {
                return Err(Error::DuplicateObservation {
                    ticker,
                    date: pair[0].0.to_string(),
                });
            }
        }
        for (date, close) in &observations {
            assert!(
                close.is_finite() && *close > 0.0,
                "non-positive close {close} for {ticker} on {date} reached PriceSeries::new"
            );
        }
        Ok(Self {
            ticker,
            observations,
        })
    }

    pub fn ticker(&self) -> &str {
        &self.ticker
    }

    pub fn observations(&self) -> &[(NaiveDate, f64)] {
        &self.observations
    }

    pub fn len(&self) -> usize {
        self.observations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.observations.is_empty()
    }

    /// Observations with `start <= date <= end`.
    pub fn slice(&self, start: NaiveDate, end: NaiveDate) -> &[(NaiveDate, f64)] {
        let lo = self.observations.partition_point(|(d, _)| *d < start);
        let hi = self.observations.partition_point(|(d, _)| *d <= end);
        &self.observations[lo..hi]
    }
}

/// A skipped input row and why it was skipped.
#[derive(Debug, Clone)]
pub struct RowDiagnostic {
    pub file: String,
    pub line: u64,
    pub message: String,
}

/// Loader result: series sorted by ticker, plus per-row diagnostics.
#[derive(Debug)]
pub struct LoadOutcome {
    pub series: Vec<PriceSeries>,
    pub diagnostics: Vec<RowDiagnostic>,
}

fn parse_close(raw: &str) -> std::result::Result<f64, String> {
    let v: f64 = raw
        .parse()
        .map_err(|_| format!("close {raw:?} is not a number"))?;
    if !v.is_finite() || v <= 0.0 {
        return Err(format!("close {raw} is not a positive finite price"));
    }
    Ok(v)
}

fn parse_date(raw: &str) -> std::result::Result<NaiveDate, String> {
    raw.parse::<NaiveDate>()
        .map_err(|_| format!("date {raw:?} is not ISO-8601"))
}

fn read_rows(
    path: &Path,
    ticker_from_file: Option<&str>,
    rows: &mut BTreeMap<String, Vec<(NaiveDate, f64)>>,
    diagnostics: &mut Vec<RowDiagnostic>,
) -> Result<()> {
    let display = path.display().to_string();
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .flexible(true)
        .from_path(path)
        .map_err(|source| Error::Csv {
            path: display.clone(),
            source,
        })?;

    let expected: &[&str] = if ticker_from_file.is_some() {
        &["date", "close"]
    } else {
        &["date", "ticker", "close"]
    };
    let headers = reader.headers().map_err(|source| Error::Csv {
        path: display.clone(),
        source,
    })?;
    let found: Vec<String> = headers.iter().map(|h| h.to_ascii_lowercase()).collect();
    if found != expected {
        return Err(Error::BadHeader {
            path: display,
            expected: expected.join(","),
            found: found.join(","),
        });
    }

    for record in reader.records() {
        let record = record.map_err(|source| Error::Csv {
            path: display.clone(),
            source,
        })?;
        let line = record.position().map(|p| p.line()).unwrap_or(0);
        let mut diag = |message: String| {
            diagnostics.push(RowDiagnostic {
                file: display.clone(),
                line,
                message,
            })
        };
        if record.len() != expected.len() {
            diag(format!(
                "expected {} fields, found {}",
                expected.len(),
                record.len()
            ));
            continue;
        }
        let (date_raw, ticker, close_raw) = match ticker_from_file {
            Some(t) => (&record[0], t.to_string(), &record[1]),
            None => (&record[0], record[1].to_string(), &record[2]),
        };
        let date = match parse_date(date_raw) {
            Ok(d) => d,
            Err(m) => {
                diag(m);
                continue;
            }
        };
        if ticker.is_empty() {
            diag("empty ticker".to_string());
            continue;
        }
        let close = match parse_close(close_raw) {
            Ok(c) => c,
            Err(m) => {
                diag(m);
                continue;
            }
        };
        rows.entry(ticker).or_default().push((date, close));
    }
    Ok(())
}

/// Load price data from a combined CSV file or a directory of per-ticker
/// CSVs. Returns series sorted by ticker, with diagnostics for every skipped
/// row. Unreadable files and duplicate `(ticker, date)` rows fail the load.
pub fn load_price_csv(path: impl AsRef<Path>) -> Result<LoadOutcome> {
    let path = path.as_ref();
    let mut rows: BTreeMap<String, Vec<(NaiveDate, f64)>> = BTreeMap::new();
    let mut diagnostics = Vec::new();

    let meta = std::fs::metadata(path).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })?;
    if meta.is_dir() {
        let mut files: Vec<_> = std::fs::read_dir(path)
            .map_err(|source| Error::Io {
                path: path.display().to_string(),
                source,
            })?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| {
                p.extension()
                    .map(|e| e.eq_ignore_ascii_case("csv"))
                    .unwrap_or(false)
            })
            .collect();
        files.sort();
        for file in files {
            let ticker = file
                .file_stem()
                .map(|s| s.to_string_lossy().to_string())
                .unwrap_or_default();
            read_rows(&file, Some(&ticker), &mut rows, &mut diagnostics)?;
        }
    } else {
        read_rows(path, None, &mut rows, &mut diagnostics)?;
    }

    let mut series = Vec::with_capacity(rows.len());
    for (ticker, obs) in rows {
        if obs.is_empty() {
            continue;
        }
        series.push(PriceSeries::new(ticker, obs)?);
    }
    if series.is_empty() {
        return Err(Error::EmptyInput {
            path: path.display().to_string(),
        });
    }
    Ok(LoadOutcome {
        series,
        diagnostics,
    })
}

/// Sorted union of all observation dates across the given series.
pub fn union_calendar(series: &[PriceSeries]) -> Vec<NaiveDate> {
    let mut set = BTreeSet::new();
    for s in series {
        for (d, _) in s.observations() {
            set.insert(*d);
        }
    }
    set.into_iter().collect()
}

/// One analysis window on the union calendar.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WindowSpec {
    pub index: usize,
    pub offset: usize,
    pub length_days: usize,
    pub shift_days: usize,
    pub start_date: NaiveDate,
    pub end_date: NaiveDate,
    /// Date at ordinal position `length_days / 2` within the window.
    pub center_date: NaiveDate,
}

/// Windows of `length` calendar entries at offsets `0, shift, 2*shift, ...`
/// on the (sorted) union calendar. Fewer dates than one window yields an
/// empty list.
pub fn enumerate_windows(
    global_dates: &[NaiveDate],
    length: usize,
    shift: usize,
) -> Vec<WindowSpec> {
    assert!(length >= 1 && shift >= 1, "window length and shift must be positive");
    debug_assert!(global_dates.windows(2).all(|w| w[0] < w[1]));
    let mut out = Vec::new();
    let mut offset = 0usize;
    let mut index = 0usize;
    while offset + length <= global_dates.len() {
        out.push(WindowSpec {
            index,
            offset,
            length_days: length,
            shift_days: shift,
            start_date: global_dates[offset],
            end_date: global_dates[offset + length - 1],
            center_date: global_dates[offset + length / 2],
        });
        offset += shift;
        index += 1;
    }
    out
}

/// Two windowed series restricted to their common dates.
#[derive(Debug, Clone)]
pub struct AlignedPair {
    pub ticker_a: String,
    pub ticker_b: String,
    pub dates: Vec<NaiveDate>,
    pub closes_a: Vec<f64>,
    pub closes_b: Vec<f64>,
    /// `dates.len() / window_length`.
    pub coverage: f64,
    /// Positions of the common dates inside the two input slices.
    pub index_a: Vec<u32>,
    pub index_b: Vec<u32>,
}

/// Align two windowed slices on their common dates. Returns `None` when the
/// common dates cover less than `min_coverage` of the window length.
pub fn align_pair(
    ticker_a: &str,
    a: &[(NaiveDate, f64)],
    ticker_b: &str,
    b: &[(NaiveDate, f64)],
    window_length: usize,
    min_coverage: f64,
) -> Option<AlignedPair> {
    assert!(window_length >= 1);
    let mut dates = Vec::new();
    let mut closes_a = Vec::new();
    let mut closes_b = Vec::new();
    let mut index_a = Vec::new();
    let mut index_b = Vec::new();
    let (mut i, mut j) = (0usize, 0usize);
    while i < a.len() && j < b.len() {
        match a[i].0.cmp(&b[j].0) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                dates.push(a[i].0);
                closes_a.push(a[i].1);
                closes_b.push(b[j].1);
                index_a.push(i as u32);
                index_b.push(j as u32);
                i += 1;
                j += 1;
            }
        }
    }
    let coverage = dates.len() as f64 / window_length as f64;
    if coverage < min_coverage {
        return None;
    }
    Some(AlignedPair {
        ticker_a: ticker_a.to_string(),
        ticker_b: ticker_b.to_string(),
        dates,
        closes_a,
        closes_b,
        coverage,
        index_a,
        index_b,
    })
}
