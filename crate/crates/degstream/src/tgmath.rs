//! Truncated-geometric arithmetic for the tail estimator.
//!
//! A vertex of degree `d` that enters the tail sample at its `b`-th
//! endpoint occurrence ends with counter `d - (b - 1)`. Conditioned on
//! being sampled at all (per-occurrence probability `p`), the undercount
//! `b - 1` follows a geometric distribution truncated to `0..=s-1` with
//! `s = d`. This module evaluates that distribution, the induced counter
//! correction, and the closed-form approximation of its cdf used for
//! plotting.
//!
//! All formulas route powers of `1 - p` through `ln_1p`/`exp_m1`, so they
//! stay accurate for sampling rates as small as 1e-6 and supports as large
//! as 1e7.

use crate::{Error, Result};

/// Parameters of a geometric distribution truncated to `{0, ..., s - 1}`:
/// success probability `p` in `(0, 1]` and support size `s >= 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncGeomParams {
    p: f64,
    s: u64,
}

impl TruncGeomParams {
    pub fn new(p: f64, s: u64) -> Result<Self> {
        check_probability("p", p)?;
        if s == 0 {
            return Err(Error::invalid("s", "support size must be at least 1"));
        }
        Ok(TruncGeomParams { p, s })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn support(&self) -> u64 {
        self.s
    }
}

/// Which way [`loss_correction`] rounds the expected undercount.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LossRounding {
    /// Round up (the default used by the estimator).
    #[default]
    Ceil,
    /// Round down; kept available for sensitivity experiments.
    Floor,
}

pub(crate) fn check_probability(name: &'static str, p: f64) -> Result<()> {
    if !(p > 0.0 && p <= 1.0) || p.is_nan() {
        return Err(Error::invalid(name, format!("{p} is not in (0, 1]")));
    }
    Ok(())
}

/// `(1 - p)^e` for integral `e`, with `e = 0` pinned to 1 so that `p = 1`
/// (where `ln_1p` returns -inf) stays well-defined.
#[inline]
fn q_pow(log_q: f64, e: u64) -> f64 {
    if e == 0 {
        1.0
    } else {
        (e as f64 * log_q).exp()
    }
}

/// `1 - (1 - p)^e`, evaluated as `-expm1(e * ln(1 - p))`.
#[inline]
fn one_minus_q_pow(log_q: f64, e: u64) -> f64 {
    if e == 0 {
        0.0
    } else {
        -(e as f64 * log_q).exp_m1()
    }
}

fn check_support(params: &TruncGeomParams, k: u64) -> Result<()> {
    if k >= params.s {
        return Err(Error::OutsideSupport {
            k,
            max: params.s - 1,
        });
    }
    Ok(())
}

/// Probability mass at `k`: `p (1-p)^k / (1 - (1-p)^s)`.
///
/// `k` outside `0..=s-1` is an error, not a silent zero.
pub fn tg_pdf(params: &TruncGeomParams, k: u64) -> Result<f64> {
    check_support(params, k)?;
    let log_q = (-params.p).ln_1p();
    Ok(params.p * q_pow(log_q, k) / one_minus_q_pow(log_q, params.s))
}

/// Cumulative mass through `k`: `(1 - (1-p)^(k+1)) / (1 - (1-p)^s)`.
pub fn tg_cdf(params: &TruncGeomParams, k: u64) -> Result<f64> {
    check_support(params, k)?;
    let log_q = (-params.p).ln_1p();
    Ok(one_minus_q_pow(log_q, k + 1) / one_minus_q_pow(log_q, params.s))
}

/// Closed-form mean of the truncated geometric.
///
/// Algebraically `(1-p)/p - s*(1-p)^s / (1 - (1-p)^s)`, a rearrangement
/// that avoids the catastrophic cancellation the textbook form suffers for
/// small `p`.
pub fn tg_expectation(params: &TruncGeomParams) -> f64 {
    let (p, s) = (params.p, params.s);
    if p == 1.0 {
        return 0.0;
    }
    let log_q = (-p).ln_1p();
    let qs = q_pow(log_q, s);
    (1.0 - p) / p - s as f64 * qs / one_minus_q_pow(log_q, s)
}

/// Pull an almost-integer float onto the integer so that a rounding
/// direction is not flipped by last-bit noise in the closed form.
fn snap(x: f64) -> f64 {
    let r = x.round();
    if (x - r).abs() < 1e-9 {
        r
    } else {
        x
    }
}

/// Counter correction `ℓ(r)`: the expected undercount of a tail counter
/// that reads `r`, rounded up.
pub fn loss_correction(tail_prob: f64, r: u64) -> Result<u64> {
    loss_correction_with(tail_prob, r, LossRounding::Ceil)
}

/// [`loss_correction`] with an explicit rounding direction.
pub fn loss_correction_with(tail_prob: f64, r: u64, rounding: LossRounding) -> Result<u64> {
    check_probability("tail_prob", tail_prob)?;
    if r == 0 {
        return Err(Error::invalid("r", "counter values start at 1"));
    }
    Ok(loss_unchecked(tail_prob, r, rounding))
}

/// Hot-path variant without parameter validation; callers have already
/// vetted `tail_prob` and `r >= 1`.
pub(crate) fn loss_unchecked(tail_prob: f64, r: u64, rounding: LossRounding) -> u64 {
    let mean = tg_expectation(&TruncGeomParams { p: tail_prob, s: r });
    let snapped = snap(mean);
    let rounded = match rounding {
        LossRounding::Ceil => snapped.ceil(),
        LossRounding::Floor => snapped.floor(),
    };
    rounded.max(0.0) as u64
}

/// Reduced degree `d - ℓ(d)`: where a typical tail counter for a vertex of
/// degree `d` actually lands.
pub fn reduced_degree(tail_prob: f64, d: u64) -> Result<u64> {
    reduced_degree_with(tail_prob, d, LossRounding::Ceil)
}

pub fn reduced_degree_with(tail_prob: f64, d: u64, rounding: LossRounding) -> Result<u64> {
    let loss = loss_correction_with(tail_prob, d, rounding)?;
    Ok(d - loss)
}

/// Smallest `x` where [`step_cdf_approx`] is defined (and equals zero):
/// `k - 1 + k e^{-k}`.
pub fn step_transition_min(k: f64) -> f64 {
    k - 1.0 + k * (-k).exp()
}

/// Small-rate limit of the truncated-geometric cdf as a function of the
/// rescaled support `x`, for a fixed rescaled offset `k`:
///
/// `(1 - exp(-(x - k + 1 - k e^{-k}))) / (1 - exp(-x))`.
///
/// Zero at `x = k - 1 + k e^{-k}`, approaching one as `x` grows; `x` below
/// the transition minimum is an error.
pub fn step_cdf_approx(k: f64, x: f64) -> Result<f64> {
    if !(k > 0.0) || !k.is_finite() {
        return Err(Error::invalid("k", format!("{k} is not a positive real")));
    }
    if !x.is_finite() || x <= 0.0 {
        return Err(Error::invalid("x", format!("{x} is not a positive real")));
    }
    let min = step_transition_min(k);
    let t = x - min;
    // Tolerate float dust when the caller evaluates exactly at the minimum.
    let t = if t < 0.0 && t > -1e-9 { 0.0 } else { t };
    if t < 0.0 {
        return Err(Error::BelowTransition { x, min });
    }
    Ok((-t).exp_m1() / (-x).exp_m1())
}
