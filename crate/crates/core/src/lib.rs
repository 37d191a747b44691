//! Reconstruction of time-evolving directed information-flow networks
//! between financial time series.
//!
//! The measurement chain: closing prices are pairwise-aligned inside sliding
//! windows, turned into lag-δ log returns, symbolized into ordinal patterns,
//! and scored with plug-in symbolic transfer entropy in both directions of
//! every pair. Because the raw estimator is biased on finite samples, each
//! value is graded against phase-randomized surrogate data pooled over
//! neighboring windows; a steep logistic turns that comparison into a link
//! weight in `[0, 1]`. Window-level aggregates — total flow, drift between
//! windows, per-stock directionality — trace how tightly coupled the market
//! is over time.
//!
//! Modules follow the pipeline order:
//!
//! - [`market_data`]: CSV loading, calendars, windows, pairwise alignment
//! - [`returns`]: lag-δ geometric (log) returns
//! - [`symbolic`]: ordinal patterns and their integer codes
//! - [`entropy`]: joint counting and transfer-entropy matrices
//! - [`surrogate`]: spectrum-preserving phase-randomized null series
//! - [`validation`]: survival ratios, logistic flow weights, link counts
//! - [`metrics`]: total flow, drift, directionality, smoothing
//! - [`config`] / [`artifacts`] / [`pipeline`]: run configuration, on-disk
//!   formats, and the orchestrated sweep

pub mod artifacts;
pub mod config;
pub mod entropy;
pub mod error;
pub mod market_data;
pub mod metrics;
pub mod pipeline;
pub mod returns;
pub mod surrogate;
pub mod symbolic;
pub mod validation;

pub use config::RunConfig;
pub use entropy::{JointCountTable, PairGrid, TEMatrix};
pub use error::{Error, Result};
pub use market_data::{AlignedPair, PriceSeries, WindowSpec};
pub use metrics::WindowReport;
pub use returns::{AnalysisDomain, ReturnSeries};
pub use surrogate::{SeedLineage, SurrogateDomain, SurrogateSeries};
pub use symbolic::{OrdinalSymbol, SymbolSequence};
pub use validation::{BenchmarkPool, FlowMatrix, ValidationParams};
