//! Command-line front end: `analyze` runs the full sweep, `report` rebuilds
//! roll-ups from cached matrices, `surrogate-check` verifies spectrum
//! preservation of the surrogate generator on real input.

use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};

use stenet_core::pipeline::{self, RunSummary};
use stenet_core::surrogate::{spectrum_relative_error, surrogate_window_set, SurrogateDomain};
use stenet_core::RunConfig;

const SPECTRUM_TOLERANCE: f64 = 1e-9;

#[derive(Parser)]
#[command(
    name = "stenet",
    version,
    about = "Directed information-flow networks between financial time series"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the full sweep and write matrices, reports, and the manifest
    Analyze {
        /// Flat key=value config file; flags below override its values
        #[arg(long)]
        config: Option<PathBuf>,
        /// Price CSV file or directory of per-ticker CSVs
        #[arg(long)]
        input: Option<PathBuf>,
        /// Output directory
        #[arg(long)]
        out: Option<PathBuf>,
        /// Comma-separated lag list, e.g. 1,2,3
        #[arg(long)]
        delta: Option<String>,
        /// Master seed for surrogate generation
        #[arg(long)]
        seed: Option<u64>,
        /// Analysis signal: returns | prices
        #[arg(long)]
        domain: Option<String>,
        /// Worker threads (default: all cores)
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Regenerate flow matrices and roll-ups from a previous run's output
    Report {
        /// Output directory of the previous run
        #[arg(long)]
        out: PathBuf,
    },
    /// Check surrogate spectrum preservation on an input dataset
    SurrogateCheck {
        /// Price CSV file or directory of per-ticker CSVs
        #[arg(long)]
        input: PathBuf,
        /// Surrogate draws per series
        #[arg(long, default_value_t = 3)]
        realizations: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Signal to randomize: log-price | price
        #[arg(long, default_value = "log-price")]
        domain: String,
    },
}

fn print_summary(summary: &RunSummary) {
    for d in &summary.diagnostics {
        eprintln!("warning: {}:{}: {}", d.file, d.line, d.message);
    }
    for f in &summary.failures {
        eprintln!("failed cell: {f}");
    }
    println!("stocks: {}", summary.tickers.len());
    println!("windows: {}", summary.windows.len());
    println!("reports: {}", summary.reports.len());
    println!("output: {}", summary.out_dir.display());
}

#[allow(clippy::too_many_arguments)]
fn analyze(
    config: Option<PathBuf>,
    input: Option<PathBuf>,
    out: Option<PathBuf>,
    delta: Option<String>,
    seed: Option<u64>,
    domain: Option<String>,
    threads: Option<usize>,
) -> Result<()> {
    let mut rc = match config {
        Some(path) => RunConfig::from_file(&path)
            .with_context(|| format!("reading config {}", path.display()))?,
        None => RunConfig::default(),
    };
    if let Some(path) = input {
        rc.input = path;
    }
    if let Some(path) = out {
        rc.out_dir = path;
    }
    if let Some(list) = delta {
        rc.apply_kv("delta", &list)?;
    }
    if let Some(s) = seed {
        rc.seed = s;
    }
    if let Some(d) = domain {
        rc.apply_kv("analysis.domain", &d)?;
    }
    if rc.input.as_os_str().is_empty() {
        bail!("no input data: pass --input or set `input` in the config file");
    }
    if let Some(t) = threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .context("building the thread pool")?;
    }
    let summary = pipeline::run(&rc)?;
    print_summary(&summary);
    Ok(())
}

fn report(out: PathBuf) -> Result<()> {
    let summary = pipeline::regenerate_reports(&out)
        .with_context(|| format!("regenerating reports in {}", out.display()))?;
    for f in &summary.failures {
        eprintln!("failed cell: {f}");
    }
    println!("reports: {}", summary.reports.len());
    println!("output: {}", summary.out_dir.display());
    Ok(())
}

fn surrogate_check(input: PathBuf, realizations: usize, seed: u64, domain: String) -> Result<()> {
    if realizations == 0 {
        bail!("need at least one realization");
    }
    let domain = SurrogateDomain::parse(&domain)?;
    let data = pipeline::load_input(&input)?;
    for d in &data.diagnostics {
        eprintln!("warning: {}:{}: {}", d.file, d.line, d.message);
    }
    let closes: Vec<Vec<f64>> = data
        .series
        .iter()
        .map(|s| s.observations().iter().map(|o| o.1).collect())
        .collect();
    let sets = surrogate_window_set(&closes, domain, realizations, seed, 0);
    let mut worst_spectrum = 0.0f64;
    let mut worst_residue = 0.0f64;
    let mut checked = 0usize;
    for (idx, per_stock) in sets.iter().enumerate() {
        if closes[idx].len() < 2 {
            eprintln!("skipping {}: fewer than 2 observations", data.tickers[idx]);
            continue;
        }
        let source: Vec<f64> = match domain {
            SurrogateDomain::LogPrice => closes[idx].iter().map(|p| p.ln()).collect(),
            SurrogateDomain::Price => closes[idx].clone(),
        };
        let peak = source.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let mut stock_spectrum = 0.0f64;
        let mut stock_residue = 0.0f64;
        for s in per_stock {
            let signal: Vec<f64> = match domain {
                SurrogateDomain::LogPrice => s.values.iter().map(|p| p.ln()).collect(),
                SurrogateDomain::Price => s.values.clone(),
            };
            stock_spectrum = stock_spectrum.max(spectrum_relative_error(&source, &signal));
            stock_residue = stock_residue.max(s.imag_residue / peak.max(f64::MIN_POSITIVE));
        }
        println!(
            "{}: spectrum error {:.3e}, residue ratio {:.3e} ({} realizations)",
            data.tickers[idx], stock_spectrum, stock_residue, realizations
        );
        worst_spectrum = worst_spectrum.max(stock_spectrum);
        worst_residue = worst_residue.max(stock_residue);
        checked += 1;
    }
    if checked == 0 {
        bail!("no series long enough to check");
    }
    let pass = worst_spectrum <= SPECTRUM_TOLERANCE && worst_residue <= SPECTRUM_TOLERANCE;
    println!(
        "worst: spectrum error {worst_spectrum:.3e}, residue ratio {worst_residue:.3e} -> {} (tolerance {SPECTRUM_TOLERANCE:e})",
        if pass { "PASS" } else { "FAIL" }
    );
    if !pass {
        bail!("spectrum preservation tolerance exceeded");
    }
    Ok(())
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::Analyze {
            config,
            input,
            out,
            delta,
            seed,
            domain,
            threads,
        } => analyze(config, input, out, delta, seed, domain, threads),
        Command::Report { out } => report(out),
        Command::SurrogateCheck {
            input,
            realizations,
            seed,
            domain,
        } => surrogate_check(input, realizations, seed, domain),
    }
}
