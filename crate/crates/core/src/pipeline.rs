//! End-to-end sweep: load prices, carve windows, align pairs, measure
//! transfer entropy on real and surrogate data, filter against the pooled
//! null, aggregate window metrics, and write every artifact.
//!
//! The unit of parallelism is one (window, lag) cell: cells share only
//! read-only inputs and the seed-derivation function, each writes only its
//! own matrix files, and roll-ups are produced single-threaded afterwards.
//! Surrogate draws are seeded per (window, stock, realization) — with no lag
//! coordinate — so every lag sees identical surrogate prices and removing a
//! lag from the sweep leaves the other lag directories byte-identical.
//!
//! Per lag `d`, `delta_<d>/` holds the real, surrogate, and flow matrices
//! per window plus directionality tables; `reports.csv`, `manifest.txt`, and
//! `timings.txt` sit at the top level. Surrogate matrices are computed once
//! per (window, lag) and cached on disk, so the bracket pooling reuses them
//! across all consuming windows and `report` can re-derive every roll-up
//! without touching price data.

use std::path::{Path, PathBuf};
use std::time::Instant;

use chrono::NaiveDate;
use rayon::prelude::*;

use crate::artifacts::{self, Manifest};
use crate::config::RunConfig;
use crate::entropy::{te_matrix, PairGrid, TEMatrix};
use crate::error::{Error, Result};
use crate::market_data::{
    align_pair, enumerate_windows, load_price_csv, union_calendar, AlignedPair, PriceSeries,
    RowDiagnostic, WindowSpec,
};
use crate::metrics::{self, WindowReport, SMOOTHING_GROUP};
use crate::surrogate::surrogate_window_set;
use crate::validation::{flow_matrix, link_count_ratio, BenchmarkPool, FlowMatrix};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Price data ready for a sweep, with tickers in deterministic order.
pub struct LoadedData {
    pub tickers: Vec<String>,
    pub series: Vec<PriceSeries>,
    pub diagnostics: Vec<RowDiagnostic>,
}

pub fn load_input(path: &Path) -> Result<LoadedData> {
    let outcome = load_price_csv(path)?;
    let mut series = outcome.series;
    series.sort_by(|a, b| a.ticker().cmp(b.ticker()));
    let tickers = series.iter().map(|s| s.ticker().to_string()).collect();
    Ok(LoadedData {
        tickers,
        series,
        diagnostics: outcome.diagnostics,
    })
}

/// What a finished run hands back to the caller (artifacts are on disk).
pub struct RunSummary {
    pub tickers: Vec<String>,
    pub windows: Vec<WindowSpec>,
    /// All window reports in sweep order (lag by lag, windows ascending).
    pub reports: Vec<WindowReport>,
    pub diagnostics: Vec<RowDiagnostic>,
    /// `delta=D window=W: message` entries for cells that failed.
    pub failures: Vec<String>,
    pub out_dir: PathBuf,
}

pub fn run(config: &RunConfig) -> Result<RunSummary> {
    config.validate()?;
    let data = load_input(&config.input)?;
    let input_sha256 = artifacts::hash_input(&config.input)?;
    run_with_data(config, data, input_sha256)
}

struct WindowUnit {
    te_real: TEMatrix,
    te_surrogates: Vec<TEMatrix>,
    millis: u128,
}

fn build_grid(
    n: usize,
    aligned: &[Option<AlignedPair>],
    mut values: impl FnMut(usize, usize, &AlignedPair) -> (Vec<f64>, Vec<f64>),
) -> PairGrid {
    let mut grid = PairGrid::new(n);
    let mut idx = 0usize;
    for i in 0..n {
        for j in i + 1..n {
            if let Some(pair) = &aligned[idx] {
                let (a, b) = values(i, j, pair);
                grid.set(i, j, a, b);
            }
            idx += 1;
        }
    }
    grid
}

fn compute_window(
    config: &RunConfig,
    tickers: &[String],
    series: &[PriceSeries],
    window: &WindowSpec,
    delta: usize,
    out: &Path,
) -> Result<WindowUnit> {
    let start = Instant::now();
    let n = tickers.len();
    let slices: Vec<&[(NaiveDate, f64)]> = series
        .iter()
        .map(|s| s.slice(window.start_date, window.end_date))
        .collect();

    let mut aligned: Vec<Option<AlignedPair>> = Vec::with_capacity(n * n.saturating_sub(1) / 2);
    for i in 0..n {
        for j in i + 1..n {
            aligned.push(align_pair(
                &tickers[i],
                slices[i],
                &tickers[j],
                slices[j],
                config.window_length,
                config.coverage,
            ));
        }
    }

    let grid = build_grid(n, &aligned, |_, _, pair| {
        (pair.closes_a.clone(), pair.closes_b.clone())
    });
    let te_real = te_matrix(&grid, config.k, delta, config.domain, window.index);
    drop(grid);

    // surrogates randomize each stock's full window slice; the pair-aligned
    // views are then pulled through the stored index maps, so a surrogate
    // pair visits exactly the dates its real counterpart did
    let window_closes: Vec<Vec<f64>> = slices
        .iter()
        .map(|s| s.iter().map(|(_, c)| *c).collect())
        .collect();
    let sets = surrogate_window_set(
        &window_closes,
        config.surrogate_domain,
        config.surrogate_n,
        config.seed,
        window.index,
    );
    let te_surrogates: Vec<TEMatrix> = (0..config.surrogate_n)
        .map(|r| {
            let grid = build_grid(n, &aligned, |i, j, pair| {
                let a: Vec<f64> = pair
                    .index_a
                    .iter()
                    .map(|&t| sets[i][r].values[t as usize])
                    .collect();
                let b: Vec<f64> = pair
                    .index_b
                    .iter()
                    .map(|&t| sets[j][r].values[t as usize])
                    .collect();
                (a, b)
            });
            te_matrix(&grid, config.k, delta, config.domain, window.index)
        })
        .collect();

    artifacts::write_te_matrix(
        &artifacts::te_matrix_path(out, delta, window.index),
        tickers,
        &te_real,
    )?;
    for (r, m) in te_surrogates.iter().enumerate() {
        artifacts::write_te_matrix(
            &artifacts::surrogate_matrix_path(out, delta, window.index, r),
            tickers,
            m,
        )?;
    }
    Ok(WindowUnit {
        te_real,
        te_surrogates,
        millis: start.elapsed().as_millis(),
    })
}

struct DeltaOutputs {
    reports: Vec<WindowReport>,
    failures: Vec<String>,
}

/// Pool, filter, aggregate, and serialize one lag's windows. Shared between
/// a fresh run and roll-up regeneration from cached matrices, which is what
/// makes regenerated outputs byte-identical.
fn postprocess_delta(
    config: &RunConfig,
    tickers: &[String],
    centers: &[NaiveDate],
    delta: usize,
    units: &[(TEMatrix, Vec<TEMatrix>)],
    out: &Path,
) -> Result<DeltaOutputs> {
    let n_windows = units.len();
    let per_window_surr: Vec<Vec<f64>> = units
        .iter()
        .map(|(_, surrs)| surrs.iter().flat_map(|m| m.valid_values()).collect())
        .collect();

    let mut failures = Vec::new();
    let mut flows: Vec<Option<(FlowMatrix, usize)>> = Vec::with_capacity(n_windows);
    for (w, unit) in units.iter().enumerate() {
        let te = &unit.0;
        let has_real_values = te.valid_values().next().is_some();
        match BenchmarkPool::assemble(w, config.validation.bracket, &per_window_surr) {
            Ok(pool) => {
                match flow_matrix(te, &pool, config.validation.a, config.validation.r_star) {
                    Ok(flow) => flows.push(Some((flow, pool.len()))),
                    Err(e) => {
                        failures.push(format!("delta={delta} window={w}: {e}"));
                        flows.push(None);
                    }
                }
            }
            // nothing measured and nothing to grade: an empty window, not a
            // failure — every aggregate is zero
            Err(_) if !has_real_values => flows.push(Some((
                FlowMatrix::new_invalid(
                    te.n(),
                    w,
                    delta,
                    config.validation.a,
                    config.validation.r_star,
                ),
                0,
            ))),
            Err(e) => {
                failures.push(format!("delta={delta} window={w}: {e}"));
                flows.push(None);
            }
        }
    }

    let mut reports = Vec::new();
    let mut dir_rows: Vec<(usize, Vec<f64>)> = Vec::new();
    for w in 0..n_windows {
        let Some((flow, pool_size)) = &flows[w] else {
            continue;
        };
        artifacts::write_flow_matrix(&artifacts::flow_matrix_path(out, delta, w), tickers, flow)?;
        let drift = match flows.get(w + 1) {
            Some(Some((next, _))) => Some(metrics::window_drift(flow, next)?),
            _ => None,
        };
        let directionality = metrics::directionality(flow);
        dir_rows.push((w, directionality.clone()));
        reports.push(WindowReport {
            window: w,
            center_date: centers[w],
            delta,
            total_flow: metrics::total_flow(flow),
            drift,
            directionality,
            link_ratio: link_count_ratio(
                &units[w].0,
                &units[w].1,
                config.validation.link_threshold,
            ),
            valid_pairs: units[w].0.valid_values().count(),
            pool_size: *pool_size,
        });
    }

    let delta_values: Vec<Vec<f64>> = dir_rows.iter().map(|(_, v)| v.clone()).collect();
    let dir = artifacts::delta_dir(out, delta);
    artifacts::write_directionality_csv(&dir.join("directionality.csv"), tickers, &dir_rows)?;
    artifacts::write_smoothed_csv(
        &dir.join("directionality_smoothed.csv"),
        tickers,
        &metrics::smooth_directionality(&delta_values, SMOOTHING_GROUP)?,
    )?;
    artifacts::write_ranking_csv(
        &dir.join("ranking.csv"),
        tickers,
        &metrics::influence_ranking(&delta_values),
    )?;
    Ok(DeltaOutputs { reports, failures })
}

/// Run the sweep on already-loaded data. `input_sha256` goes verbatim into
/// the manifest.
pub fn run_with_data(
    config: &RunConfig,
    data: LoadedData,
    input_sha256: String,
) -> Result<RunSummary> {
    config.validate()?;
    let calendar = union_calendar(&data.series);
    let windows = enumerate_windows(&calendar, config.window_length, config.window_shift);
    let centers: Vec<NaiveDate> = windows.iter().map(|w| w.center_date).collect();
    let out = config.out_dir.clone();
    artifacts::ensure_dir(&out)?;

    let total_start = Instant::now();
    let mut all_reports = Vec::new();
    let mut failures = Vec::new();
    let mut timing_rows: Vec<(usize, usize, u128)> = Vec::new();
    for &delta in &config.deltas {
        artifacts::ensure_dir(&artifacts::delta_dir(&out, delta))?;
        let units: Vec<Result<WindowUnit>> = windows
            .par_iter()
            .map(|w| compute_window(config, &data.tickers, &data.series, w, delta, &out))
            .collect();
        let mut collected = Vec::with_capacity(units.len());
        for (w, unit) in units.into_iter().enumerate() {
            let unit = unit?;
            timing_rows.push((delta, w, unit.millis));
            collected.push((unit.te_real, unit.te_surrogates));
        }
        let outputs = postprocess_delta(config, &data.tickers, &centers, delta, &collected, &out)?;
        all_reports.extend(outputs.reports);
        failures.extend(outputs.failures);
    }

    artifacts::write_reports_csv(&out.join("reports.csv"), &all_reports)?;
    let manifest = Manifest {
        version: VERSION.to_string(),
        input_sha256,
        stocks: data.tickers.len(),
        windows: windows.len(),
        config: config.clone(),
        window_centers: centers,
        failures: failures.clone(),
    };
    artifacts::write_manifest(&out.join("manifest.txt"), &manifest)?;
    artifacts::write_timings(
        &out.join("timings.txt"),
        &timing_rows,
        total_start.elapsed().as_millis(),
    )?;
    Ok(RunSummary {
        tickers: data.tickers,
        windows,
        reports: all_reports,
        diagnostics: data.diagnostics,
        failures,
        out_dir: out,
    })
}

/// Rebuild flow matrices, roll-ups, `reports.csv`, and the manifest from the
/// cached TE matrices of a previous run — no price data needed. Output files
/// are byte-identical to the original run's.
pub fn regenerate_reports(out: &Path) -> Result<RunSummary> {
    let manifest = artifacts::read_manifest(&out.join("manifest.txt"))?;
    let config = &manifest.config;
    let mut tickers: Option<Vec<String>> = None;
    let mut all_reports = Vec::new();
    let mut failures = Vec::new();
    for &delta in &config.deltas {
        let mut collected: Vec<(TEMatrix, Vec<TEMatrix>)> = Vec::with_capacity(manifest.windows);
        for w in 0..manifest.windows {
            let path = artifacts::te_matrix_path(out, delta, w);
            let file = artifacts::read_matrix_csv(&path)?;
            match &tickers {
                None => tickers = Some(file.tickers.clone()),
                Some(t) if *t != file.tickers => {
                    return Err(Error::BadArtifact {
                        path: path.display().to_string(),
                        detail: "ticker set differs between matrices".into(),
                    })
                }
                _ => {}
            }
            let te = file.to_te_matrix(&path, w, delta, config.k)?;
            let mut surrs = Vec::with_capacity(config.surrogate_n);
            for r in 0..config.surrogate_n {
                let sp = artifacts::surrogate_matrix_path(out, delta, w, r);
                let sf = artifacts::read_matrix_csv(&sp)?;
                surrs.push(sf.to_te_matrix(&sp, w, delta, config.k)?);
            }
            collected.push((te, surrs));
        }
        let names = tickers.clone().unwrap_or_default();
        let outputs = postprocess_delta(
            config,
            &names,
            &manifest.window_centers,
            delta,
            &collected,
            out,
        )?;
        all_reports.extend(outputs.reports);
        failures.extend(outputs.failures);
    }
    artifacts::write_reports_csv(&out.join("reports.csv"), &all_reports)?;
    let rewritten = Manifest {
        failures: failures.clone(),
        ..manifest.clone()
    };
    artifacts::write_manifest(&out.join("manifest.txt"), &rewritten)?;
    Ok(RunSummary {
        tickers: tickers.unwrap_or_default(),
        windows: Vec::new(),
        reports: all_reports,
        diagnostics: Vec::new(),
        failures,
        out_dir: out.to_path_buf(),
    })
}
