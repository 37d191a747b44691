//! Geometric returns at a configurable horizon.
//!
//! `r(t) = ln p(t+delta) - ln p(t)` on consecutive positions of an aligned
//! series; calendar gaps inside a window are treated as consecutive
//! observations, matching the pairwise alignment convention.

use crate::error::{Error, Result};

/// Whether the analysis symbolizes returns (the standard protocol) or raw
/// price levels.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AnalysisDomain {
    Returns,
    Prices,
}

impl AnalysisDomain {
    pub fn as_str(&self) -> &'static str {
        match self {
            AnalysisDomain::Returns => "returns",
            AnalysisDomain::Prices => "prices",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s.trim() {
            "returns" => Ok(AnalysisDomain::Returns),
            "prices" => Ok(AnalysisDomain::Prices),
            other => Err(Error::Config(format!(
                "unknown analysis domain {other:?} (expected returns|prices)"
            ))),
        }
    }
}

/// Log-return series derived from one price sequence.
#[derive(Debug, Clone)]
pub struct ReturnSeries {
    pub values: Vec<f64>,
    pub delta: usize,
    pub parent_length: usize,
}

/// Log returns at horizon `delta`: `values[i] = ln(prices[i+delta]) -
/// ln(prices[i])`. Prices must be positive; the series must be longer than
/// `delta`.
pub fn log_returns(prices: &[f64], delta: usize) -> Result<ReturnSeries> {
    assert!(delta >= 1, "delta must be at least 1");
    if prices.len() <= delta {
        return Err(Error::SeriesTooShort {
            len: prices.len(),
            delta,
        });
    }
    let values = (0..prices.len() - delta)
        .map(|i| prices[i + delta].ln() - prices[i].ln())
        .collect();
    Ok(ReturnSeries {
        values,
        delta,
        parent_length: prices.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_log_steps() {
        use std::f64::consts::E;
        let r = log_returns(&[1.0, E, E * E], 1).unwrap();
        assert_eq!(r.values.len(), 2);
        for v in &r.values {
            assert!((v - 1.0).abs() < 1e-12, "log step {v} should be 1");
        }
    }

    #[test]
    fn horizon_two_sample() {
        let r = log_returns(&[13.0, 22.0, 45.0, 60.0], 2).unwrap();
        let expect = [1.241713132308783, 1.0033021088637848];
        assert_eq!(r.values.len(), 2);
        for (v, e) in r.values.iter().zip(expect) {
            assert!((v - e).abs() < 1e-12, "got {v}, expected {e}");
        }
        assert_eq!(r.parent_length, 4);
        assert_eq!(r.delta, 2);
    }

    #[test]
    fn too_short_errors() {
        assert!(matches!(
            log_returns(&[1.0, 2.0], 2),
            Err(Error::SeriesTooShort { len: 2, delta: 2 })
        ));
        assert!(log_returns(&[], 1).is_err());
    }

    #[test]
    fn scale_invariance_and_additivity() {
        let prices = [13.0, 22.0, 45.0, 60.0, 12.5, 33.0, 70.0];
        let scaled: Vec<f64> = prices.iter().map(|p| p * 7.25).collect();
        let a = log_returns(&prices, 3).unwrap();
        let b = log_returns(&scaled, 3).unwrap();
        for (x, y) in a.values.iter().zip(&b.values) {
            assert!((x - y).abs() < 1e-12, "scaling the series changed returns");
        }
        // r_{2delta}(t) = r_delta(t) + r_delta(t+delta)
        let r1 = log_returns(&prices, 1).unwrap();
        let r2 = log_returns(&prices, 2).unwrap();
        for i in 0..r2.values.len() {
            let sum = r1.values[i] + r1.values[i + 1];
            assert!((r2.values[i] - sum).abs() < 1e-12);
        }
    }

    #[test]
    fn length_formula() {
        for len in 2..40usize {
            let prices: Vec<f64> = (0..len).map(|i| 1.0 + i as f64).collect();
            for delta in 1..len {
                let r = log_returns(&prices, delta).unwrap();
                assert_eq!(r.values.len(), len - delta);
            }
        }
    }
}
