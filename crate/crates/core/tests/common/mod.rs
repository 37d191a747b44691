//! Shared fixtures for the integration suites: an independent reference
//! implementation of the entropy estimator, seeded synthetic-data generators,
//! disk fixtures for the pipeline, and a two-sample KS test.
//!
//! The reference estimator deliberately shares no code with the library: it
//! stores literal rank patterns in hash maps and evaluates the conditional
//! KL sum term by term, so agreement with the optimized code-path is
//! meaningful evidence.
#![allow(dead_code)]

use chrono::{Datelike, NaiveDate};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use std::collections::HashMap;
use std::ops::Range;
use std::path::Path;

use stenet_core::RunConfig;

// ---- Independent reference estimator ----

/// (future pattern, target past pattern, source past pattern) -> count.
type JointTable = HashMap<(Vec<u8>, Vec<u8>, Vec<u8>), u64>;

/// Rank pattern of `vals` (oldest first): positions `1..=len` listed in
/// ascending order of their values, ties toward the earlier position.
pub fn rank_pattern(vals: &[f64]) -> Vec<u8> {
    let mut order: Vec<usize> = (0..vals.len()).collect();
    order.sort_by(|&i, &j| vals[i].partial_cmp(&vals[j]).unwrap().then(i.cmp(&j)));
    order.iter().map(|&i| (i + 1) as u8).collect()
}

/// The `k` values spaced `delta` apart ending at index `t`, oldest first.
fn lagged_window(series: &[f64], t: usize, k: usize, delta: usize) -> Vec<f64> {
    (0..k).map(|m| series[t - (k - 1 - m) * delta]).collect()
}

/// Plug-in transfer entropy in bits from `y` into `x`: hash-map tabulation of
/// (extended pattern of `x` at `t`, pattern of `x` at `t-delta`, pattern of
/// `y` at `t-delta`) over `t = k*delta ..= len-2`, then the literal
/// conditional KL sum.
pub fn naive_transfer_entropy(x: &[f64], y: &[f64], k: usize, delta: usize) -> f64 {
    assert_eq!(x.len(), y.len());
    let len = x.len();
    assert!(len >= k * delta + 2, "series too short for any sample");
    let mut joint: JointTable = HashMap::new();
    for t in k * delta..=len - 2 {
        let f = rank_pattern(&lagged_window(x, t, k + 1, delta));
        let a = rank_pattern(&lagged_window(x, t - delta, k, delta));
        let b = rank_pattern(&lagged_window(y, t - delta, k, delta));
        *joint.entry((f, a, b)).or_insert(0) += 1;
    }
    naive_te_from_joint(&joint)
}

/// Same estimator with the future object being the target's own k-pattern at
/// `t` instead of the extended (k+1)-pattern.
pub fn naive_transfer_entropy_ste(x: &[f64], y: &[f64], k: usize, delta: usize) -> f64 {
    assert_eq!(x.len(), y.len());
    let len = x.len();
    assert!(len >= k * delta + 2, "series too short for any sample");
    let mut joint: JointTable = HashMap::new();
    for t in k * delta..=len - 2 {
        let f = rank_pattern(&lagged_window(x, t, k, delta));
        let a = rank_pattern(&lagged_window(x, t - delta, k, delta));
        let b = rank_pattern(&lagged_window(y, t - delta, k, delta));
        *joint.entry((f, a, b)).or_insert(0) += 1;
    }
    naive_te_from_joint(&joint)
}

fn naive_te_from_joint(joint: &JointTable) -> f64 {
    let total: u64 = joint.values().sum();
    let mut n_a: HashMap<&[u8], u64> = HashMap::new();
    let mut n_ab: HashMap<(&[u8], &[u8]), u64> = HashMap::new();
    let mut n_fa: HashMap<(&[u8], &[u8]), u64> = HashMap::new();
    for ((f, a, b), c) in joint {
        *n_a.entry(a).or_insert(0) += c;
        *n_ab.entry((a.as_slice(), b.as_slice())).or_insert(0) += c;
        *n_fa.entry((f.as_slice(), a.as_slice())).or_insert(0) += c;
    }
    let mut sum = 0.0;
    for ((f, a, b), &c) in joint {
        let p_fab = c as f64 / total as f64;
        let p_f_given_ab = c as f64 / n_ab[&(a.as_slice(), b.as_slice())] as f64;
        let p_f_given_a =
            n_fa[&(f.as_slice(), a.as_slice())] as f64 / n_a[a.as_slice()] as f64;
        sum += p_fab * (p_f_given_ab / p_f_given_a).log2();
    }
    sum.max(0.0)
}

// ---- Seeded generators ----

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn normals(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.sample(StandardNormal)).collect()
}

/// A pair of log-price series where the first tracks the second with the
/// given lag: `zx(t) = coupling * zy(t - lag) + noise_sd * eps(t)`, `zy` and
/// `eps` i.i.d. standard normal.
pub fn coupled_log_prices(
    rng: &mut ChaCha8Rng,
    len: usize,
    coupling: f64,
    lag: usize,
    noise_sd: f64,
) -> (Vec<f64>, Vec<f64>) {
    let zy = normals(rng, len);
    let eps = normals(rng, len);
    let zx = (0..len)
        .map(|t| {
            let driver = if t >= lag { coupling * zy[t - lag] } else { 0.0 };
            driver + noise_sd * eps[t]
        })
        .collect();
    (zx, zy)
}

/// Market of lag-`lag` random-walk log-prices: every series accumulates
/// `z(t) = z(t - lag) + w(t)`, so its horizon-`lag` returns are the i.i.d.
/// increments `w`. Tickers `P0..` are independent; `X`'s increments copy
/// `Y`'s at the given lag, `wx(t) = coupling * wy(t - lag) + noise_sd *
/// scale * eps(t)`, making the directed dependence visible only at that
/// horizon. Returns (tickers, closes) with `X` and `Y` last.
pub fn lagged_walk_market(
    rng: &mut ChaCha8Rng,
    pad: usize,
    len: usize,
    coupling: f64,
    lag: usize,
    noise_sd: f64,
) -> (Vec<String>, Vec<Vec<f64>>) {
    let scale = 0.02;
    let accumulate = |w: &[f64]| -> Vec<f64> {
        let mut z = vec![0.0; w.len()];
        for t in 0..w.len() {
            let prev = if t >= lag { z[t - lag] } else { 0.0 };
            z[t] = prev + w[t];
        }
        to_prices(&z)
    };
    let mut tickers = Vec::new();
    let mut closes = Vec::new();
    for p in 0..pad {
        tickers.push(format!("P{p}"));
        let g = normals(rng, len);
        let w: Vec<f64> = g.iter().map(|v| scale * v).collect();
        closes.push(accumulate(&w));
    }
    let gy = normals(rng, len);
    let ex = normals(rng, len);
    let wy: Vec<f64> = gy.iter().map(|v| scale * v).collect();
    let wx: Vec<f64> = (0..len)
        .map(|t| {
            let drive = if t >= lag { coupling * gy[t - lag] } else { 0.0 };
            scale * (drive + noise_sd * ex[t])
        })
        .collect();
    tickers.push("X".to_string());
    closes.push(accumulate(&wx));
    tickers.push("Y".to_string());
    closes.push(accumulate(&wy));
    (tickers, closes)
}

/// Exponentiate log-prices into a price series around 100.
pub fn to_prices(z: &[f64]) -> Vec<f64> {
    z.iter().map(|v| 100.0 * v.exp()).collect()
}

/// `n` consecutive weekdays starting at the first weekday on or after
/// `start` (ISO date).
pub fn weekdays(start: &str, n: usize) -> Vec<NaiveDate> {
    let mut d: NaiveDate = start.parse().unwrap();
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        if d.weekday().number_from_monday() <= 5 {
            out.push(d);
        }
        d = d.succ_opt().unwrap();
    }
    out
}

/// Synthetic market on a shared calendar. Every stock's log-price follows an
/// independent Gaussian random walk. Inside `block` the daily increments of
/// stocks `1..` mix in stock 0's increment from `lag` days back with weight
/// `gamma` (unit variance preserved), so stock 0 leads the whole market at
/// exactly that lag during the block and everything is independent elsewhere.
pub struct BlockMarket {
    pub tickers: Vec<String>,
    pub closes: Vec<Vec<f64>>,
}

pub fn block_market(
    seed: u64,
    stocks: usize,
    days: usize,
    block: Range<usize>,
    lag: usize,
    gamma: f64,
) -> BlockMarket {
    let mut r = rng(seed);
    let innovations: Vec<Vec<f64>> = (0..stocks).map(|_| normals(&mut r, days)).collect();
    let sigma = 0.02;
    let mix = (1.0 - gamma * gamma).sqrt();
    let mut closes = Vec::with_capacity(stocks);
    for (stock, own) in innovations.iter().enumerate() {
        let mut z = Vec::with_capacity(days);
        let mut level = 0.0;
        for t in 0..days {
            let driven = stock > 0 && block.contains(&t) && t >= lag;
            let innovation = if driven {
                gamma * innovations[0][t - lag] + mix * own[t]
            } else {
                own[t]
            };
            level += sigma * innovation;
            z.push(level);
        }
        closes.push(to_prices(&z));
    }
    BlockMarket {
        tickers: (0..stocks).map(|i| format!("S{i:02}")).collect(),
        closes,
    }
}

// ---- Disk fixtures ----

/// Write a combined `date,ticker,close` CSV covering every stock on the
/// shared calendar.
pub fn write_long_csv(
    path: &Path,
    tickers: &[String],
    dates: &[NaiveDate],
    closes: &[Vec<f64>],
) {
    assert_eq!(tickers.len(), closes.len());
    let mut text = String::from("date,ticker,close\n");
    for (ticker, series) in tickers.iter().zip(closes) {
        assert_eq!(series.len(), dates.len());
        for (date, close) in dates.iter().zip(series) {
            text.push_str(&format!("{date},{ticker},{close}\n"));
        }
    }
    std::fs::write(path, text).unwrap();
}

/// Baseline pipeline configuration for tests; callers override what they
/// need.
pub fn base_config(input: &Path, out: &Path) -> RunConfig {
    RunConfig {
        input: input.to_path_buf(),
        out_dir: out.to_path_buf(),
        ..RunConfig::default()
    }
}

// ---- Statistics ----

/// Asymptotic two-sample Kolmogorov-Smirnov p-value (sorts its inputs).
pub fn ks_p_value(a: &mut [f64], b: &mut [f64]) -> f64 {
    assert!(!a.is_empty() && !b.is_empty());
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let (n, m) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j) = (0usize, 0usize);
    let mut d: f64 = 0.0;
    while i < a.len() && j < b.len() {
        let (xa, xb) = (a[i], b[j]);
        if xa <= xb {
            i += 1;
        }
        if xb <= xa {
            j += 1;
        }
        d = d.max((i as f64 / n - j as f64 / m).abs());
    }
    let en = (n * m / (n + m)).sqrt();
    let lambda = (en + 0.12 + 0.11 / en) * d;
    let mut p = 0.0;
    let mut sign = 1.0;
    for k in 1..=100 {
        let term = sign * (-2.0 * (k as f64 * lambda).powi(2)).exp();
        p += term;
        if term.abs() < 1e-12 {
            break;
        }
        sign = -sign;
    }
    (2.0 * p).clamp(0.0, 1.0)
}

pub fn median(values: &mut [f64]) -> f64 {
    assert!(!values.is_empty());
    values.sort_by(f64::total_cmp);
    let n = values.len();
    if n % 2 == 1 {
        values[n / 2]
    } else {
        0.5 * (values[n / 2 - 1] + values[n / 2])
    }
}
