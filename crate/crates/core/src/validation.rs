//! Null-model filtering of raw transfer-entropy matrices.
//!
//! A raw plug-in estimate is biased upward on finite samples, so a value by
//! itself says nothing. Each real value `x` is instead scored by the survival
//! ratio `r(x)`: the fraction of pooled surrogate values at or above `x`,
//! divided by the fraction of the window's own real values at or above `x`.
//! Small `r` means the value sits far out in the surrogate tail and is
//! unlikely under the no-interaction null. A steep logistic then converts
//! `r` into a soft link weight in `[0, 1]` centered at `r* = 0.03` — roughly
//! a p-value cut of 0.05 — with steepness `a = 100`.
//!
//! The surrogate pool for window `w` gathers values from the windows
//! bracketing `w` (10 on each side by default, truncated at the edges), which
//! grows the null sample without drawing many realizations per window.

use crate::entropy::TEMatrix;
use crate::error::{Error, Result};

/// Tunables of the filtering stage. Defaults: steepness `a = 100`, midpoint
/// `r* = 0.03`, bracket of 10 windows on each side, and a 0.03-bit threshold
/// for the link-count cross-check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ValidationParams {
    pub a: f64,
    pub r_star: f64,
    pub bracket: usize,
    pub link_threshold: f64,
}

impl Default for ValidationParams {
    fn default() -> Self {
        ValidationParams {
            a: 100.0,
            r_star: 0.03,
            bracket: 10,
            link_threshold: 0.03,
        }
    }
}

/// Pooled surrogate transfer-entropy values forming the null sample for one
/// window. Values are kept sorted ascending.
#[derive(Debug, Clone)]
pub struct BenchmarkPool {
    window: usize,
    first_window: usize,
    last_window: usize,
    values: Vec<f64>,
}

impl BenchmarkPool {
    /// Gather the pool for `window` from per-window surrogate values,
    /// spanning `window - bracket ..= window + bracket` truncated to the
    /// available range.
    pub fn assemble(
        window: usize,
        bracket: usize,
        per_window: &[Vec<f64>],
    ) -> Result<BenchmarkPool> {
        assert!(window < per_window.len(), "window out of range");
        let first = window.saturating_sub(bracket);
        let last = (window + bracket).min(per_window.len() - 1);
        let mut values = Vec::new();
        for vals in &per_window[first..=last] {
            values.extend_from_slice(vals);
        }
        Self::build(window, first, last, values)
    }

    /// Pool from an explicit value list (single-window pools, tests).
    pub fn from_values(window: usize, values: Vec<f64>) -> Result<BenchmarkPool> {
        Self::build(window, window, window, values)
    }

    fn build(
        window: usize,
        first: usize,
        last: usize,
        mut values: Vec<f64>,
    ) -> Result<BenchmarkPool> {
        if values.is_empty() {
            return Err(Error::EmptyBenchmark);
        }
        for v in &values {
            assert!(v.is_finite() && *v >= 0.0, "pool values must be finite and >= 0");
        }
        values.sort_unstable_by(f64::total_cmp);
        Ok(BenchmarkPool {
            window,
            first_window: first,
            last_window: last,
            values,
        })
    }

    pub fn window(&self) -> usize {
        self.window
    }

    /// Inclusive window span the pool was drawn from.
    pub fn span(&self) -> (usize, usize) {
        (self.first_window, self.last_window)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Pool values, sorted ascending.
    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

fn tail_count(sorted: &[f64], x: f64) -> usize {
    sorted.len() - sorted.partition_point(|v| *v < x)
}

/// Survival ratio `r(x)`: the surrogate tail fraction at `x` over the real
/// tail fraction at `x`. Both slices must be sorted ascending. `x` must sit
/// at or below the largest real value (it is one of them in normal use), so
/// the denominator is positive.
pub fn survival_ratio(x: f64, real_sorted: &[f64], surrogate_sorted: &[f64]) -> Result<f64> {
    if real_sorted.is_empty() {
        return Err(Error::EmptySample);
    }
    if surrogate_sorted.is_empty() {
        return Err(Error::EmptyBenchmark);
    }
    assert!(x.is_finite(), "survival ratio of a non-finite value");
    let real_tail = tail_count(real_sorted, x);
    if real_tail == 0 {
        return Err(Error::ValueAboveRealSet(x));
    }
    let surr_tail = tail_count(surrogate_sorted, x);
    let num = surr_tail as f64 / surrogate_sorted.len() as f64;
    let den = real_tail as f64 / real_sorted.len() as f64;
    Ok(num / den)
}

/// Logistic link weight `1 / (e^{2a(r - r*)} + 1)`: strictly decreasing in
/// `r`, exactly 0.5 at `r = r*`. Overflow of the exponential for large `r`
/// degrades gracefully to 0.
pub fn flow_weight(r: f64, a: f64, r_star: f64) -> f64 {
    assert!(r.is_finite() && r >= 0.0, "survival ratio must be finite and >= 0");
    1.0 / ((2.0 * a * (r - r_star)).exp() + 1.0)
}

/// Filtered directed-link weights for one window: `weights[i][j]` grades the
/// flow from stock `i` to stock `j` against the surrogate pool. Invalid
/// cells (diagonal, rejected pairs) carry weight 0 and count as 0 in every
/// aggregation.
#[derive(Debug, Clone)]
pub struct FlowMatrix {
    n: usize,
    window: usize,
    delta: usize,
    a: f64,
    r_star: f64,
    weights: Vec<f64>,
    valid: Vec<bool>,
}

impl FlowMatrix {
    pub fn new_invalid(n: usize, window: usize, delta: usize, a: f64, r_star: f64) -> Self {
        FlowMatrix {
            n,
            window,
            delta,
            a,
            r_star,
            weights: vec![0.0; n * n],
            valid: vec![false; n * n],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn window(&self) -> usize {
        self.window
    }

    pub fn delta(&self) -> usize {
        self.delta
    }

    pub fn params(&self) -> (f64, f64) {
        (self.a, self.r_star)
    }

    pub fn set(&mut self, i: usize, j: usize, weight: f64) {
        assert!(i != j, "diagonal cells stay invalid");
        assert!((0.0..=1.0).contains(&weight), "weight outside [0,1]: {weight}");
        self.weights[i * self.n + j] = weight;
        self.valid[i * self.n + j] = true;
    }

    pub fn is_valid(&self, i: usize, j: usize) -> bool {
        self.valid[i * self.n + j]
    }

    /// Weight with the invalid-cells-are-zero convention.
    pub fn weight(&self, i: usize, j: usize) -> f64 {
        self.weights[i * self.n + j]
    }

    pub fn get(&self, i: usize, j: usize) -> Option<f64> {
        self.valid[i * self.n + j].then(|| self.weights[i * self.n + j])
    }

    pub fn valid_count(&self) -> usize {
        self.valid.iter().filter(|v| **v).count()
    }

    /// Sum of row `i` under the zero convention.
    pub fn row_sum(&self, i: usize) -> f64 {
        self.weights[i * self.n..(i + 1) * self.n].iter().sum()
    }

    /// Sum of column `j` under the zero convention.
    pub fn col_sum(&self, j: usize) -> f64 {
        (0..self.n).map(|i| self.weights[i * self.n + j]).sum()
    }
}

/// Grade every valid cell of a real TE matrix against the pool. The real
/// sample for the survival ratio is the matrix's own valid values; a matrix
/// with no valid cells yields an all-invalid flow matrix.
pub fn flow_matrix(te: &TEMatrix, pool: &BenchmarkPool, a: f64, r_star: f64) -> Result<FlowMatrix> {
    if pool.is_empty() {
        return Err(Error::EmptyBenchmark);
    }
    let n = te.n();
    let mut real: Vec<f64> = te.valid_values().collect();
    real.sort_unstable_by(f64::total_cmp);
    let mut flow = FlowMatrix::new_invalid(n, te.window(), te.delta(), a, r_star);
    if real.is_empty() {
        return Ok(flow);
    }
    for i in 0..n {
        for j in 0..n {
            if let Some(x) = te.get(i, j) {
                let r = survival_ratio(x, &real, pool.values())?;
                flow.set(i, j, flow_weight(r, a, r_star));
            }
        }
    }
    Ok(flow)
}

fn cells_above(te: &TEMatrix, threshold: f64) -> usize {
    te.valid_values().filter(|v| *v > threshold).count()
}

/// Link-count cross-check: real cells above the threshold over the mean
/// surrogate count across realizations (strict `>` on both sides). `None`
/// when no surrogate cell clears the threshold — the ratio is undefined and
/// reported as empty downstream.
pub fn link_count_ratio(
    te_real: &TEMatrix,
    te_surrogates: &[TEMatrix],
    threshold: f64,
) -> Option<f64> {
    if te_surrogates.is_empty() {
        return None;
    }
    let real = cells_above(te_real, threshold);
    let surr_total: usize = te_surrogates.iter().map(|m| cells_above(m, threshold)).sum();
    if surr_total == 0 {
        return None;
    }
    let mean_surr = surr_total as f64 / te_surrogates.len() as f64;
    Some(real as f64 / mean_surr)
}
