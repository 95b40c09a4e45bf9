//! Small-space estimation of a graph's complementary cumulative degree
//! histogram (ccdh) from a single pass over an edge stream, plus the
//! Relative Hausdorff distance for judging how close two such curves are.
//!
//! The pieces:
//!
//! * [`histogram`] — degree histograms, the ccdh view, exact one-pass
//!   counting, and TSV round-tripping.
//! * [`tgmath`] — truncated-geometric helpers: the law of a tail counter's
//!   undercount, its expected-loss correction, and a smooth approximation
//!   to scaled step functions.
//! * [`sketch`] — the head/tail sketch itself: hash-sampled head with
//!   exact counters, coin-sampled tail with undercounting counters, and
//!   the spliced ccdh estimate.
//! * [`rh`] — Relative Hausdorff distance, per-degree discrepancy
//!   profiles, and a KS statistic for comparison.
//! * [`baselines`] — heavy-hitter summaries (Misra-Gries, lossy counting,
//!   space saving), head-only estimation, and hybrid head-plus-heavy-hitter
//!   estimators to compare against.
//! * [`stream`] — edge-list parsing, synthetic generators, and replayable
//!   reorderings for robustness studies.
//! * [`harness`] — parameter sweeps, run records, and plot-ready output
//!   for the command-line tool.

pub mod baselines;
pub mod cli;
mod error;
mod exec;
pub mod harness;
mod hashing;
pub mod histogram;
pub mod rh;
pub mod sketch;
pub mod stream;
pub mod tgmath;

pub use error::{Error, Result};
