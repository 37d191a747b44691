//! On-disk artifact formats: matrix CSVs, report roll-ups, the run manifest,
//! and the checksums used to verify deterministic reruns.
//!
//! All floats are written with Rust's shortest round-trip formatting, so a
//! file parsed back yields bit-identical values and regenerated roll-ups are
//! byte-identical to the originals. Invalid matrix cells are empty fields.

use std::path::{Path, PathBuf};

use chrono::NaiveDate;
use sha2::{Digest, Sha256};

use crate::config::RunConfig;
use crate::entropy::TEMatrix;
use crate::error::{Error, Result};
use crate::metrics::WindowReport;
use crate::validation::FlowMatrix;

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> Error + '_ {
    move |source| Error::Io {
        path: path.display().to_string(),
        source,
    }
}

fn bad(path: &Path, detail: impl Into<String>) -> Error {
    Error::BadArtifact {
        path: path.display().to_string(),
        detail: detail.into(),
    }
}

/// Subdirectory holding every artifact of one lag.
pub fn delta_dir(out: &Path, delta: usize) -> PathBuf {
    out.join(format!("delta_{delta}"))
}

pub fn te_matrix_path(out: &Path, delta: usize, window: usize) -> PathBuf {
    delta_dir(out, delta).join(format!("te_w{window:04}.csv"))
}

pub fn surrogate_matrix_path(out: &Path, delta: usize, window: usize, realization: usize) -> PathBuf {
    delta_dir(out, delta).join(format!("surrogate_te_w{window:04}_r{realization:03}.csv"))
}

pub fn flow_matrix_path(out: &Path, delta: usize, window: usize) -> PathBuf {
    delta_dir(out, delta).join(format!("flow_w{window:04}.csv"))
}

/// Write a square matrix: header row of tickers, one labeled row per ticker,
/// invalid cells empty.
pub fn write_matrix_csv(
    path: &Path,
    tickers: &[String],
    cell: impl Fn(usize, usize) -> Option<f64>,
) -> Result<()> {
    let n = tickers.len();
    let mut text = String::new();
    for t in tickers {
        text.push(',');
        text.push_str(t);
    }
    text.push('\n');
    for (i, ticker) in tickers.iter().enumerate() {
        text.push_str(ticker);
        for j in 0..n {
            text.push(',');
            if let Some(v) = cell(i, j) {
                text.push_str(&format!("{v}"));
            }
        }
        text.push('\n');
    }
    std::fs::write(path, text).map_err(io_err(path))
}

/// A matrix read back from disk: `cells` is row-major, `None` = invalid.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixFile {
    pub tickers: Vec<String>,
    pub cells: Vec<Option<f64>>,
}

impl MatrixFile {
    pub fn n(&self) -> usize {
        self.tickers.len()
    }

    /// Rebuild a TE matrix; cells must be finite and nonnegative.
    pub fn to_te_matrix(
        &self,
        path: &Path,
        window: usize,
        delta: usize,
        k: usize,
    ) -> Result<TEMatrix> {
        let n = self.n();
        let mut te = TEMatrix::new_invalid(n, window, delta, k);
        for i in 0..n {
            for j in 0..n {
                if let Some(v) = self.cells[i * n + j] {
                    if i == j {
                        return Err(bad(path, "diagonal cell carries a value"));
                    }
                    if !v.is_finite() || v < 0.0 {
                        return Err(bad(path, format!("cell ({i},{j}) out of range: {v}")));
                    }
                    te.set(i, j, v);
                }
            }
        }
        Ok(te)
    }
}

pub fn read_matrix_csv(path: &Path) -> Result<MatrixFile> {
    let text = std::fs::read_to_string(path).map_err(io_err(path))?;
    let mut lines = text.lines();
    let header = lines.next().ok_or_else(|| bad(path, "empty file"))?;
    let mut cols = header.split(',');
    if cols.next() != Some("") {
        return Err(bad(path, "header must start with an empty field"));
    }
    let tickers: Vec<String> = cols.map(str::to_string).collect();
    let n = tickers.len();
    let mut cells = vec![None; n * n];
    let mut rows = 0usize;
    for (i, line) in lines.enumerate() {
        if i >= n {
            return Err(bad(path, format!("more than {n} rows")));
        }
        let mut fields = line.split(',');
        let label = fields.next().unwrap_or("");
        if label != tickers[i] {
            return Err(bad(
                path,
                format!("row {i} labeled {label:?}, expected {:?}", tickers[i]),
            ));
        }
        let mut count = 0usize;
        for (j, field) in fields.enumerate() {
            if j >= n {
                return Err(bad(path, format!("row {i} has more than {n} cells")));
            }
            if !field.is_empty() {
                let v: f64 = field
                    .parse()
                    .map_err(|_| bad(path, format!("cell ({i},{j}): bad number {field:?}")))?;
                cells[i * n + j] = Some(v);
            }
            count += 1;
        }
        if count != n {
            return Err(bad(path, format!("row {i} has {count} cells, expected {n}")));
        }
        rows += 1;
    }
    if rows != n {
        return Err(bad(path, format!("{rows} rows for {n} tickers")));
    }
    Ok(MatrixFile { tickers, cells })
}

pub fn write_te_matrix(path: &Path, tickers: &[String], te: &TEMatrix) -> Result<()> {
    assert_eq!(tickers.len(), te.n());
    write_matrix_csv(path, tickers, |i, j| te.get(i, j))
}

pub fn write_flow_matrix(path: &Path, tickers: &[String], flow: &FlowMatrix) -> Result<()> {
    assert_eq!(tickers.len(), flow.n());
    write_matrix_csv(path, tickers, |i, j| flow.get(i, j))
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| format!("{x}")).unwrap_or_default()
}

/// Roll-up of every (window, delta) report, one row each, in sweep order.
pub fn write_reports_csv(path: &Path, reports: &[WindowReport]) -> Result<()> {
    let mut text = String::from("w,center_date,delta,total_flow,drift,link_ratio\n");
    for r in reports {
        text.push_str(&format!(
            "{},{},{},{},{},{}\n",
            r.window,
            r.center_date.format("%Y-%m-%d"),
            r.delta,
            r.total_flow,
            opt(r.drift),
            opt(r.link_ratio),
        ));
    }
    std::fs::write(path, text).map_err(io_err(path))
}

/// Directionality heat-map: one row per window, one column per ticker.
pub fn write_directionality_csv(
    path: &Path,
    tickers: &[String],
    rows: &[(usize, Vec<f64>)],
) -> Result<()> {
    let mut text = String::from("w");
    for t in tickers {
        text.push(',');
        text.push_str(t);
    }
    text.push('\n');
    for (w, values) in rows {
        assert_eq!(values.len(), tickers.len());
        text.push_str(&w.to_string());
        for v in values {
            text.push(',');
            text.push_str(&format!("{v}"));
        }
        text.push('\n');
    }
    std::fs::write(path, text).map_err(io_err(path))
}

/// Directionality after grouped averaging: one row per tick.
pub fn write_smoothed_csv(path: &Path, tickers: &[String], ticks: &[Vec<f64>]) -> Result<()> {
    let mut text = String::from("tick");
    for t in tickers {
        text.push(',');
        text.push_str(t);
    }
    text.push('\n');
    for (idx, values) in ticks.iter().enumerate() {
        assert_eq!(values.len(), tickers.len());
        text.push_str(&idx.to_string());
        for v in values {
            text.push(',');
            text.push_str(&format!("{v}"));
        }
        text.push('\n');
    }
    std::fs::write(path, text).map_err(io_err(path))
}

/// Stocks ordered by overall influence (descending summed directionality).
pub fn write_ranking_csv(
    path: &Path,
    tickers: &[String],
    ranking: &[(usize, f64)],
) -> Result<()> {
    let mut text = String::from("rank,ticker,total_directionality\n");
    for (rank, (stock, total)) in ranking.iter().enumerate() {
        text.push_str(&format!("{},{},{}\n", rank + 1, tickers[*stock], total));
    }
    std::fs::write(path, text).map_err(io_err(path))
}

/// Everything needed to reproduce and post-process a run.
#[derive(Debug, Clone, PartialEq)]
pub struct Manifest {
    pub version: String,
    pub input_sha256: String,
    pub stocks: usize,
    pub windows: usize,
    pub config: RunConfig,
    /// Center date per window, index order.
    pub window_centers: Vec<NaiveDate>,
    /// `delta=D window=W: message` entries for cells that failed.
    pub failures: Vec<String>,
}

pub fn write_manifest(path: &Path, manifest: &Manifest) -> Result<()> {
    let mut text = String::from("# analysis run manifest\n");
    text.push_str(&format!("version = {}\n", manifest.version));
    text.push_str(&format!("input_sha256 = {}\n", manifest.input_sha256));
    text.push_str(&format!("stocks = {}\n", manifest.stocks));
    text.push_str(&format!("windows = {}\n", manifest.windows));
    text.push_str("config:\n");
    for line in manifest.config.manifest_lines() {
        text.push_str("  ");
        text.push_str(&line);
        text.push('\n');
    }
    text.push_str("window_centers:\n");
    for (w, d) in manifest.window_centers.iter().enumerate() {
        text.push_str(&format!("  {w} = {}\n", d.format("%Y-%m-%d")));
    }
    text.push_str("failures:\n");
    for f in &manifest.failures {
        text.push_str("  ");
        text.push_str(f);
        text.push('\n');
    }
    std::fs::write(path, text).map_err(io_err(path))
}

pub fn read_manifest(path: &Path) -> Result<Manifest> {
    let text = std::fs::read_to_string(path).map_err(io_err(path))?;
    let mut version = None;
    let mut input_sha256 = None;
    let mut stocks = None;
    let mut windows = None;
    let mut config = RunConfig::default();
    let mut window_centers: Vec<NaiveDate> = Vec::new();
    let mut failures = Vec::new();
    #[derive(PartialEq)]
    enum Section {
        Top,
        Config,
        Centers,
        Failures,
    }
    let mut section = Section::Top;
    for raw in text.lines() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        match line {
            "config:" => {
                section = Section::Config;
                continue;
            }
            "window_centers:" => {
                section = Section::Centers;
                continue;
            }
            "failures:" => {
                section = Section::Failures;
                continue;
            }
            _ => {}
        }
        match section {
            Section::Top => {
                let Some((key, value)) = line.split_once('=') else {
                    return Err(bad(path, format!("unparseable line {raw:?}")));
                };
                let value = value.trim();
                match key.trim() {
                    "version" => version = Some(value.to_string()),
                    "input_sha256" => input_sha256 = Some(value.to_string()),
                    "stocks" => {
                        stocks = Some(value.parse().map_err(|_| bad(path, "bad stocks count"))?)
                    }
                    "windows" => {
                        windows = Some(value.parse().map_err(|_| bad(path, "bad window count"))?)
                    }
                    other => return Err(bad(path, format!("unknown manifest key {other:?}"))),
                }
            }
            Section::Config => {
                let Some((key, value)) = line.split_once('=') else {
                    return Err(bad(path, format!("unparseable config line {raw:?}")));
                };
                config.apply_kv(key.trim(), value.trim())?;
            }
            Section::Centers => {
                let Some((w, date)) = line.split_once('=') else {
                    return Err(bad(path, format!("unparseable window line {raw:?}")));
                };
                let w: usize = w
                    .trim()
                    .parse()
                    .map_err(|_| bad(path, "bad window index"))?;
                if w != window_centers.len() {
                    return Err(bad(path, format!("window centers out of order at {w}")));
                }
                let date = NaiveDate::parse_from_str(date.trim(), "%Y-%m-%d")
                    .map_err(|_| bad(path, format!("bad center date {date:?}")))?;
                window_centers.push(date);
            }
            Section::Failures => failures.push(line.to_string()),
        }
    }
    let manifest = Manifest {
        version: version.ok_or_else(|| bad(path, "missing version"))?,
        input_sha256: input_sha256.ok_or_else(|| bad(path, "missing input_sha256"))?,
        stocks: stocks.ok_or_else(|| bad(path, "missing stocks"))?,
        windows: windows.ok_or_else(|| bad(path, "missing windows"))?,
        config,
        window_centers,
        failures,
    };
    if manifest.window_centers.len() != manifest.windows {
        return Err(bad(path, "window_centers count disagrees with windows"));
    }
    Ok(manifest)
}

/// Wall-clock timings per (delta, window). Kept out of the manifest and out
/// of determinism checksums: timings change run to run by nature.
pub fn write_timings(path: &Path, rows: &[(usize, usize, u128)], total_ms: u128) -> Result<()> {
    let mut text = String::from("delta,window,millis\n");
    for (delta, window, ms) in rows {
        text.push_str(&format!("{delta},{window},{ms}\n"));
    }
    text.push_str(&format!("total,,{total_ms}\n"));
    std::fs::write(path, text).map_err(io_err(path))
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

pub fn hash_file(path: &Path) -> Result<String> {
    let bytes = std::fs::read(path).map_err(io_err(path))?;
    Ok(sha256_hex(&bytes))
}

/// Checksum of the input data: a file hashes directly; a directory hashes
/// the sorted list of (file name, file hash) pairs.
pub fn hash_input(path: &Path) -> Result<String> {
    let meta = std::fs::metadata(path).map_err(io_err(path))?;
    if meta.is_file() {
        return hash_file(path);
    }
    let mut entries: Vec<(String, PathBuf)> = std::fs::read_dir(path)
        .map_err(io_err(path))?
        .filter_map(|e| e.ok())
        .filter(|e| e.path().is_file())
        .map(|e| (e.file_name().to_string_lossy().into_owned(), e.path()))
        .collect();
    entries.sort();
    let mut hasher = Sha256::new();
    for (name, file) in entries {
        hasher.update(name.as_bytes());
        hasher.update(b":");
        hasher.update(hash_file(&file)?.as_bytes());
        hasher.update(b"\n");
    }
    Ok(hex::encode(hasher.finalize()))
}

fn collect_files(dir: &Path, base: &Path, out: &mut Vec<(String, PathBuf)>) -> Result<()> {
    for entry in std::fs::read_dir(dir).map_err(io_err(dir))? {
        let entry = entry.map_err(io_err(dir))?;
        let path = entry.path();
        if path.is_dir() {
            collect_files(&path, base, out)?;
        } else {
            let rel = path
                .strip_prefix(base)
                .expect("walk stays under base")
                .to_string_lossy()
                .replace('\\', "/");
            out.push((rel, path));
        }
    }
    Ok(())
}

/// Checksum of a whole output tree: sorted relative paths and their file
/// hashes. File names listed in `exclude` are skipped (timings).
pub fn hash_tree(dir: &Path, exclude: &[&str]) -> Result<String> {
    let mut files = Vec::new();
    collect_files(dir, dir, &mut files)?;
    files.sort();
    let mut hasher = Sha256::new();
    for (rel, path) in files {
        let name = Path::new(&rel)
            .file_name()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default();
        if exclude.contains(&name.as_str()) {
            continue;
        }
        hasher.update(rel.as_bytes());
        hasher.update(b":");
        hasher.update(hash_file(&path)?.as_bytes());
        hasher.update(b"\n");
    }
    Ok(hex::encode(hasher.finalize()))
}

/// Create a directory tree, mapping failures onto the artifact error type.
pub fn ensure_dir(path: &Path) -> Result<()> {
    std::fs::create_dir_all(path).map_err(io_err(path))
}
