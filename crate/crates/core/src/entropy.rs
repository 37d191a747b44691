//! Transfer entropy between ordinal-symbol streams.
//!
//! The directed measure from source `Y` to target `X` at pattern length `k`
//! and lag `delta` is
//!
//! ```text
//! T(Y->X) = sum p(f, a, b) * log2[ p(f | a, b) / p(f | a) ]
//! ```
//!
//! where `f` is the (k+1)-value ordinal pattern of `X` ending at index `t`,
//! and `a`, `b` are the k-value patterns of `X` and `Y` ending at index
//! `t - delta`, so the future pattern extends the target's own past pattern
//! by exactly one newer observation. Probabilities are plug-in frequencies
//! with no bias correction; the estimate is a conditional mutual information
//! and therefore non-negative. A classic variant that predicts the future
//! k-pattern instead of the extended one is provided as
//! [`transfer_entropy_ste`].
//!
//! Samples are tabulated for future end indices `t` in
//! `[k*delta, len - 2]`, giving `len - k*delta - 1` triples.

use crate::error::{Error, Result};
use crate::returns::{log_returns, AnalysisDomain};
use crate::symbolic::{assert_all_finite, factorial, ordinal_codes};

/// Joint occurrence counts over (future pattern, target past pattern, source
/// past pattern) code triples.
#[derive(Debug, Clone)]
pub struct JointCountTable {
    future_arity: usize,
    past_arity: usize,
    counts: Vec<u32>,
    total: u64,
    k: usize,
    delta: usize,
}

impl JointCountTable {
    fn idx(&self, f: usize, a: usize, b: usize) -> usize {
        (f * self.past_arity + a) * self.past_arity + b
    }

    pub fn count(&self, f: usize, a: usize, b: usize) -> u32 {
        self.counts[self.idx(f, a, b)]
    }

    /// Number of tabulated triples.
    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn future_arity(&self) -> usize {
        self.future_arity
    }

    pub fn past_arity(&self) -> usize {
        self.past_arity
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn delta(&self) -> usize {
        self.delta
    }

    /// Non-empty cells as `(future, past_x, past_y, count)`.
    pub fn iter_nonzero(&self) -> impl Iterator<Item = (usize, usize, usize, u32)> + '_ {
        let pa = self.past_arity;
        self.counts
            .iter()
            .enumerate()
            .filter(|&(_, &c)| c > 0)
            .map(move |(i, &c)| {
                let b = i % pa;
                let a = (i / pa) % pa;
                let f = i / (pa * pa);
                (f, a, b, c)
            })
    }

    /// Relabel all three code axes through bijections. Transfer entropy only
    /// depends on the partition, so this must not change the measure; exposed
    /// for that diagnostic.
    pub fn permute(&self, future_map: &[usize], past_x_map: &[usize], past_y_map: &[usize]) -> Self {
        assert_eq!(future_map.len(), self.future_arity);
        assert_eq!(past_x_map.len(), self.past_arity);
        assert_eq!(past_y_map.len(), self.past_arity);
        let mut out = Self {
            future_arity: self.future_arity,
            past_arity: self.past_arity,
            counts: vec![0; self.counts.len()],
            total: self.total,
            k: self.k,
            delta: self.delta,
        };
        for (f, a, b, c) in self.iter_nonzero() {
            let j = out.idx(future_map[f], past_x_map[a], past_y_map[b]);
            out.counts[j] = c;
        }
        out
    }
}

fn count_samples(len: usize, k: usize, delta: usize) -> Result<usize> {
    let need = k * delta + 2;
    if len < need {
        return Err(Error::InsufficientSamples { len, k, delta });
    }
    Ok(len - k * delta - 1)
}

#[allow(clippy::too_many_arguments)]
fn tabulate(
    fut: &[u32],
    fut_offset: usize,
    past_x: &[u32],
    past_y: &[u32],
    future_arity: usize,
    past_arity: usize,
    samples: usize,
    k: usize,
    delta: usize,
) -> JointCountTable {
    let mut table = JointCountTable {
        future_arity,
        past_arity,
        counts: vec![0; future_arity * past_arity * past_arity],
        total: samples as u64,
        k,
        delta,
    };
    for i in 0..samples {
        let f = fut[fut_offset + i] as usize;
        let a = past_x[i] as usize;
        let b = past_y[i] as usize;
        table.counts[(f * past_arity + a) * past_arity + b] += 1;
    }
    table
}

/// Tabulate (future (k+1)-pattern of `x` ending at `t`, k-pattern of `x`
/// ending at `t - delta`, k-pattern of `y` ending at `t - delta`) for every
/// admissible `t`. Inputs must be aligned (equal length) and finite.
pub fn joint_counts(x: &[f64], y: &[f64], k: usize, delta: usize) -> Result<JointCountTable> {
    assert_eq!(x.len(), y.len(), "joint_counts inputs must be aligned");
    assert!(k >= 1 && delta >= 1);
    let samples = count_samples(x.len(), k, delta)?;
    assert_all_finite(x, "joint_counts x");
    assert_all_finite(y, "joint_counts y");
    let fut = ordinal_codes(x, k + 1, delta);
    let past_x = ordinal_codes(x, k, delta);
    let past_y = ordinal_codes(y, k, delta);
    // all three sequences line up: entry i of `fut` ends at t = k*delta + i,
    // entry i of the past sequences ends at t - delta
    Ok(tabulate(
        &fut,
        0,
        &past_x,
        &past_y,
        factorial(k + 1),
        factorial(k),
        samples,
        k,
        delta,
    ))
}

/// Plug-in transfer entropy in bits from a count table.
pub fn transfer_entropy_from_counts(table: &JointCountTable) -> f64 {
    assert!(table.total > 0);
    let fa_len = table.future_arity * table.past_arity;
    let ab_len = table.past_arity * table.past_arity;
    let mut n_a = vec![0u64; table.past_arity];
    let mut n_ab = vec![0u64; ab_len];
    let mut n_fa = vec![0u64; fa_len];
    for (f, a, b, c) in table.iter_nonzero() {
        let c = c as u64;
        n_a[a] += c;
        n_ab[a * table.past_arity + b] += c;
        n_fa[f * table.past_arity + a] += c;
    }
    let total = table.total as f64;
    let mut sum = 0.0;
    for (f, a, b, c) in table.iter_nonzero() {
        let c = c as f64;
        let ratio = (c * n_a[a] as f64) / (n_ab[a * table.past_arity + b] as f64
            * n_fa[f * table.past_arity + a] as f64);
        sum += c * ratio.log2();
    }
    let te = sum / total;
    debug_assert!(te > -1e-9, "plug-in transfer entropy went negative: {te}");
    te.max(0.0)
}

/// Transfer entropy from `y` into `x` (how much the source's past patterns
/// sharpen the prediction of the target's extended future pattern).
pub fn transfer_entropy(x: &[f64], y: &[f64], k: usize, delta: usize) -> Result<f64> {
    Ok(transfer_entropy_from_counts(&joint_counts(x, y, k, delta)?))
}

/// Classic symbolic variant: the future object is the target's k-pattern
/// ending at `t` rather than the extended (k+1)-pattern. Sample range matches
/// [`transfer_entropy`].
pub fn transfer_entropy_ste(x: &[f64], y: &[f64], k: usize, delta: usize) -> Result<f64> {
    assert_eq!(x.len(), y.len(), "transfer_entropy_ste inputs must be aligned");
    assert!(k >= 1 && delta >= 1);
    let samples = count_samples(x.len(), k, delta)?;
    assert_all_finite(x, "transfer_entropy_ste x");
    assert_all_finite(y, "transfer_entropy_ste y");
    let codes_x = ordinal_codes(x, k, delta);
    let codes_y = ordinal_codes(y, k, delta);
    // k-pattern ending at t sits `delta` entries after the one ending at
    // t - delta
    let table = tabulate(
        &codes_x,
        delta,
        &codes_x,
        &codes_y,
        factorial(k),
        factorial(k),
        samples,
        k,
        delta,
    );
    Ok(transfer_entropy_from_counts(&table))
}

/// Both directions for one aligned pair, sharing the symbol streams:
/// returns `(T(a->b), T(b->a))`.
pub fn pair_transfer_entropy(a: &[f64], b: &[f64], k: usize, delta: usize) -> Result<(f64, f64)> {
    assert_eq!(a.len(), b.len(), "pair inputs must be aligned");
    assert!(k >= 1 && delta >= 1);
    let samples = count_samples(a.len(), k, delta)?;
    assert_all_finite(a, "pair_transfer_entropy a");
    assert_all_finite(b, "pair_transfer_entropy b");
    let fut_a = ordinal_codes(a, k + 1, delta);
    let fut_b = ordinal_codes(b, k + 1, delta);
    let past_a = ordinal_codes(a, k, delta);
    let past_b = ordinal_codes(b, k, delta);
    let fa = factorial(k + 1);
    let pa = factorial(k);
    // a -> b: b is the target
    let t_ab = transfer_entropy_from_counts(&tabulate(
        &fut_b, 0, &past_b, &past_a, fa, pa, samples, k, delta,
    ));
    let t_ba = transfer_entropy_from_counts(&tabulate(
        &fut_a, 0, &past_a, &past_b, fa, pa, samples, k, delta,
    ));
    Ok((t_ab, t_ba))
}

// ---- All-pairs sweep ----

/// Aligned value sequences for the unordered ticker pairs of one window.
/// `None` cells are pairs rejected by alignment.
#[derive(Debug, Clone)]
pub struct PairGrid {
    n: usize,
    cells: Vec<Option<(Vec<f64>, Vec<f64>)>>,
}

impl PairGrid {
    pub fn new(n: usize) -> Self {
        let cells = (0..n * (n - 1) / 2).map(|_| None).collect();
        Self { n, cells }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    fn idx(&self, i: usize, j: usize) -> usize {
        debug_assert!(i < j && j < self.n);
        i * self.n - i * (i + 1) / 2 + (j - i - 1)
    }

    /// Store the aligned close sequences of pair `(i, j)`, `i < j`; `a`
    /// belongs to ticker `i`.
    pub fn set(&mut self, i: usize, j: usize, a: Vec<f64>, b: Vec<f64>) {
        assert_eq!(a.len(), b.len());
        let idx = self.idx(i, j);
        self.cells[idx] = Some((a, b));
    }

    pub fn get(&self, i: usize, j: usize) -> Option<(&[f64], &[f64])> {
        self.cells[self.idx(i, j)]
            .as_ref()
            .map(|(a, b)| (a.as_slice(), b.as_slice()))
    }
}

/// Directed transfer-entropy matrix of one window: entry `(i, j)` carries the
/// flow from ticker `i` into ticker `j`. Diagonal and rejected/failed pairs
/// are invalid.
#[derive(Debug, Clone)]
pub struct TEMatrix {
    n: usize,
    window: usize,
    delta: usize,
    k: usize,
    values: Vec<f64>,
    valid: Vec<bool>,
}

impl TEMatrix {
    pub fn new_invalid(n: usize, window: usize, delta: usize, k: usize) -> Self {
        Self {
            n,
            window,
            delta,
            k,
            values: vec![0.0; n * n],
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

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn set(&mut self, i: usize, j: usize, value: f64) {
        assert!(i != j, "diagonal cells stay invalid");
        self.values[i * self.n + j] = value;
        self.valid[i * self.n + j] = true;
    }

    pub fn is_valid(&self, i: usize, j: usize) -> bool {
        self.valid[i * self.n + j]
    }

    /// `Some(flow i -> j)` when the cell is valid.
    pub fn get(&self, i: usize, j: usize) -> Option<f64> {
        self.valid[i * self.n + j].then(|| self.values[i * self.n + j])
    }

    /// Valid off-diagonal values in row-major order.
    pub fn valid_values(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n * self.n)
            .filter(move |idx| self.valid[*idx])
            .map(move |idx| self.values[idx])
    }
}

/// Per-pair analysis values under a domain: log returns of the aligned
/// closes, or the closes themselves.
fn domain_values(closes: &[f64], delta: usize, domain: AnalysisDomain) -> Result<Vec<f64>> {
    match domain {
        AnalysisDomain::Returns => Ok(log_returns(closes, delta)?.values),
        AnalysisDomain::Prices => Ok(closes.to_vec()),
    }
}

/// Transfer entropy for every ordered ticker pair of one window. Pairs whose
/// values cannot be processed (rejected alignment, too short after the return
/// transform, non-finite values) are marked invalid, never fatal.
pub fn te_matrix(
    grid: &PairGrid,
    k: usize,
    delta: usize,
    domain: AnalysisDomain,
    window: usize,
) -> TEMatrix {
    let n = grid.n();
    let mut out = TEMatrix::new_invalid(n, window, delta, k);
    for i in 0..n {
        for j in i + 1..n {
            let Some((closes_i, closes_j)) = grid.get(i, j) else {
                continue;
            };
            let Ok(vi) = domain_values(closes_i, delta, domain) else {
                continue;
            };
            let Ok(vj) = domain_values(closes_j, delta, domain) else {
                continue;
            };
            // surrogate prices in raw-price mode can go non-positive and make
            // log returns non-finite; such pairs are masked, not propagated
            if !vi.iter().all(|v| v.is_finite()) || !vj.iter().all(|v| v.is_finite()) {
                continue;
            }
            match pair_transfer_entropy(&vi, &vj, k, delta) {
                Ok((t_ij, t_ji)) => {
                    out.set(i, j, t_ij);
                    out.set(j, i, t_ji);
                }
                Err(_) => continue,
            }
        }
    }
    out
}
