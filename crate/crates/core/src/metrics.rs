//! Window-level observables aggregated from flow matrices.
//!
//! Three readouts per window: the total flow (sum of every valid link
//! weight — the market-susceptibility curve), the drift between consecutive
//! windows (mean absolute change of per-stock outgoing flow — structural
//! readjustment speed), and the directionality vector (outgoing minus
//! incoming flow per stock — positive values lead the market).
//!
//! Invalid cells count as zero everywhere; sums always run in ascending
//! index order so results are identical across runs and thread counts.

use chrono::NaiveDate;

use crate::error::{Error, Result};
use crate::validation::FlowMatrix;

/// Consecutive windows averaged together in the smoothed directionality
/// table (three windows per tick).
pub const SMOOTHING_GROUP: usize = 3;

/// Everything reported for one (window, delta) cell of the sweep.
#[derive(Debug, Clone)]
pub struct WindowReport {
    pub window: usize,
    pub center_date: NaiveDate,
    pub delta: usize,
    pub total_flow: f64,
    /// Change toward the next window; `None` at the last window.
    pub drift: Option<f64>,
    pub directionality: Vec<f64>,
    /// Real-over-surrogate link-count ratio; `None` when undefined.
    pub link_ratio: Option<f64>,
    pub valid_pairs: usize,
    pub pool_size: usize,
}

/// Sum of all valid link weights.
pub fn total_flow(flow: &FlowMatrix) -> f64 {
    (0..flow.n()).map(|i| flow.row_sum(i)).sum()
}

/// Mean over stocks of the absolute change in outgoing flow between a window
/// and its successor. The absolute value sits outside the row sum, so
/// opposite-sign changes across rows do not cancel.
pub fn window_drift(flow_w: &FlowMatrix, flow_next: &FlowMatrix) -> Result<f64> {
    if flow_w.n() != flow_next.n() {
        return Err(Error::ShapeMismatch {
            left: format!("{0}x{0}", flow_w.n()),
            right: format!("{0}x{0}", flow_next.n()),
        });
    }
    let n = flow_w.n();
    if n == 0 {
        return Ok(0.0);
    }
    let sum: f64 = (0..n)
        .map(|i| (flow_next.row_sum(i) - flow_w.row_sum(i)).abs())
        .sum();
    Ok(sum / n as f64)
}

/// Outgoing minus incoming flow per stock; positive entries lead.
pub fn directionality(flow: &FlowMatrix) -> Vec<f64> {
    (0..flow.n())
        .map(|i| flow.row_sum(i) - flow.col_sum(i))
        .collect()
}

/// Average consecutive directionality vectors in non-overlapping groups; a
/// trailing partial group is averaged over its actual size. Every vector
/// must have the same length.
pub fn smooth_directionality(deltas: &[Vec<f64>], group: usize) -> Result<Vec<Vec<f64>>> {
    if group == 0 {
        return Err(Error::Config("smoothing group must be >= 1".into()));
    }
    let Some(first) = deltas.first() else {
        return Ok(Vec::new());
    };
    let n = first.len();
    for d in deltas {
        if d.len() != n {
            return Err(Error::ShapeMismatch {
                left: format!("vector of length {n}"),
                right: format!("vector of length {}", d.len()),
            });
        }
    }
    Ok(deltas
        .chunks(group)
        .map(|chunk| {
            (0..n)
                .map(|j| chunk.iter().map(|d| d[j]).sum::<f64>() / chunk.len() as f64)
                .collect()
        })
        .collect())
}

/// Stocks ordered by overall influence: descending sum of directionality
/// over all windows, ties broken by stock index. Returns (stock, total).
pub fn influence_ranking(deltas: &[Vec<f64>]) -> Vec<(usize, f64)> {
    let Some(first) = deltas.first() else {
        return Vec::new();
    };
    let mut totals: Vec<(usize, f64)> = (0..first.len())
        .map(|j| (j, deltas.iter().map(|d| d[j]).sum()))
        .collect();
    totals.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
    totals
}
