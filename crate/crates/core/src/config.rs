//! Run configuration: tunables of the sweep plus the flat key=value file
//! format the CLI consumes.

use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::returns::AnalysisDomain;
use crate::surrogate::SurrogateDomain;
use crate::symbolic::MAX_PATTERN_LEN;
use crate::validation::ValidationParams;

/// Full parameter set of an analysis run. `Default` carries the reference
/// protocol: 500-day windows shifted by 25, pattern length 2, lags 1–10,
/// 80% coverage, logistic filter at (a=100, r*=0.03) over a 21-window
/// surrogate pool, one log-price surrogate realization per window, and
/// log-returns as the analysis signal.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub input: PathBuf,
    pub out_dir: PathBuf,
    /// Window length in trading days of the union calendar.
    pub window_length: usize,
    /// Offset between consecutive window starts.
    pub window_shift: usize,
    /// Ordinal pattern length.
    pub k: usize,
    /// Return/symbol lags to sweep, each analyzed independently.
    pub deltas: Vec<usize>,
    /// Minimum fraction of the window two stocks must share.
    pub coverage: f64,
    pub validation: ValidationParams,
    pub surrogate_n: usize,
    pub surrogate_domain: SurrogateDomain,
    pub seed: u64,
    pub domain: AnalysisDomain,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            input: PathBuf::new(),
            out_dir: PathBuf::from("out"),
            window_length: 500,
            window_shift: 25,
            k: 2,
            deltas: (1..=10).collect(),
            coverage: 0.8,
            validation: ValidationParams::default(),
            surrogate_n: 1,
            surrogate_domain: SurrogateDomain::LogPrice,
            seed: 0,
            domain: AnalysisDomain::Returns,
        }
    }
}

fn parse_num<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .trim()
        .parse()
        .map_err(|_| Error::Config(format!("key {key:?}: cannot parse {value:?}")))
}

/// Parse a comma-separated lag list such as `1,2,3`.
pub fn parse_delta_list(value: &str) -> Result<Vec<usize>> {
    let deltas: Vec<usize> = value
        .split(',')
        .map(|part| parse_num("delta", part))
        .collect::<Result<_>>()?;
    if deltas.is_empty() {
        return Err(Error::Config("delta list is empty".into()));
    }
    Ok(deltas)
}

impl RunConfig {
    /// Read a flat key=value file: one pair per line, `#` starts a comment,
    /// blank lines ignored. Unknown keys are errors.
    pub fn from_file(path: &Path) -> Result<RunConfig> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.display().to_string(),
            source,
        })?;
        let mut config = RunConfig::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(Error::Config(format!(
                    "{}:{}: expected key = value, found {raw:?}",
                    path.display(),
                    lineno + 1
                )));
            };
            config.apply_kv(key.trim(), value.trim())?;
        }
        Ok(config)
    }

    /// Apply one key=value pair (config file lines and CLI overrides share
    /// this path).
    pub fn apply_kv(&mut self, key: &str, value: &str) -> Result<()> {
        match key {
            "input" => self.input = PathBuf::from(value),
            "out" => self.out_dir = PathBuf::from(value),
            "window.length" => self.window_length = parse_num(key, value)?,
            "window.shift" => self.window_shift = parse_num(key, value)?,
            "k" => self.k = parse_num(key, value)?,
            "delta" => self.deltas = parse_delta_list(value)?,
            "coverage" => self.coverage = parse_num(key, value)?,
            "validation.a" => self.validation.a = parse_num(key, value)?,
            "validation.r_star" => self.validation.r_star = parse_num(key, value)?,
            "validation.bracket" => self.validation.bracket = parse_num(key, value)?,
            "validation.link_threshold" => {
                self.validation.link_threshold = parse_num(key, value)?
            }
            "surrogate.n_realizations" => self.surrogate_n = parse_num(key, value)?,
            "surrogate.domain" => self.surrogate_domain = SurrogateDomain::parse(value)?,
            "seed" => self.seed = parse_num(key, value)?,
            "analysis.domain" => self.domain = AnalysisDomain::parse(value)?,
            other => return Err(Error::Config(format!("unknown config key {other:?}"))),
        }
        Ok(())
    }

    /// Reject impossible parameter combinations before any work starts.
    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::Config(msg));
        if self.window_length == 0 {
            return fail("window.length must be >= 1".into());
        }
        if self.window_shift == 0 || self.window_shift > self.window_length {
            return fail(format!(
                "window.shift must be in 1..=window.length, got {}",
                self.window_shift
            ));
        }
        if self.k == 0 || self.k + 1 > MAX_PATTERN_LEN {
            return fail(format!(
                "k must be in 1..={}, got {}",
                MAX_PATTERN_LEN - 1,
                self.k
            ));
        }
        if self.deltas.is_empty() {
            return fail("delta list is empty".into());
        }
        if self.deltas.contains(&0) {
            return fail("every delta must be >= 1".into());
        }
        let mut seen = std::collections::HashSet::new();
        for d in &self.deltas {
            if !seen.insert(*d) {
                return fail(format!("duplicate delta {d}"));
            }
        }
        if !(0.0..=1.0).contains(&self.coverage) {
            return fail(format!("coverage must be in [0,1], got {}", self.coverage));
        }
        let v = &self.validation;
        if !(v.a.is_finite() && v.a > 0.0) {
            return fail(format!("validation.a must be positive, got {}", v.a));
        }
        if !(v.r_star.is_finite() && v.r_star >= 0.0) {
            return fail(format!("validation.r_star must be >= 0, got {}", v.r_star));
        }
        if !v.link_threshold.is_finite() {
            return fail("validation.link_threshold must be finite".into());
        }
        if self.surrogate_n == 0 {
            return fail("surrogate.n_realizations must be >= 1".into());
        }
        Ok(())
    }

    /// Deterministic `key = value` snapshot for the run manifest; parsing
    /// these lines back recovers the config exactly, except for the output
    /// directory, which is omitted: the manifest lives inside that directory,
    /// and recording it would make otherwise identical runs differ.
    pub fn manifest_lines(&self) -> Vec<String> {
        let deltas = self
            .deltas
            .iter()
            .map(|d| d.to_string())
            .collect::<Vec<_>>()
            .join(",");
        vec![
            format!("input = {}", self.input.display()),
            format!("window.length = {}", self.window_length),
            format!("window.shift = {}", self.window_shift),
            format!("k = {}", self.k),
            format!("delta = {deltas}"),
            format!("coverage = {}", self.coverage),
            format!("validation.a = {}", self.validation.a),
            format!("validation.r_star = {}", self.validation.r_star),
            format!("validation.bracket = {}", self.validation.bracket),
            format!(
                "validation.link_threshold = {}",
                self.validation.link_threshold
            ),
            format!("surrogate.n_realizations = {}", self.surrogate_n),
            format!("surrogate.domain = {}", self.surrogate_domain.as_str()),
            format!("seed = {}", self.seed),
            format!("analysis.domain = {}", self.domain.as_str()),
        ]
    }
}
