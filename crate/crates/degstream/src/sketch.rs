//! The head/tail degree sketch.
//!
//! One pass over the edge stream maintains two independent samples keyed
//! by vertex label:
//!
//! * **head** — a uniform vertex sample: a label belongs whenever its
//!   keyed hash falls below `head_prob`. Membership is decided the same
//!   way at every occurrence, so the sample and its counters are a pure
//!   function of the edge multiset — replay order cannot change them.
//!   Counters count every occurrence from the first one, i.e. exact
//!   degrees. Scaling by `1 / head_prob` estimates the ccdh body.
//! * **tail** — an occurrence-triggered sample: each endpoint occurrence
//!   of a label not yet present flips a coin with probability
//!   `tail_prob`. High-degree vertices get many chances, so the tail
//!   retains them with probability `1 - (1 - tail_prob)^degree` at a
//!   fraction of the space a uniform sample would need. The price is a
//!   truncated-geometric undercount, corrected at estimate time by the
//!   expected-loss shift from [`crate::tgmath`].
//!
//! Estimation splices the two: scaled head suffix sums where the head
//! still has enough sampled mass, shifted and rescaled tail suffix sums
//! beyond. The crossover is the largest degree whose raw head suffix
//! count clears `threshold_constant`.

use std::collections::{BTreeMap, HashMap};

use crate::hashing::{coin_unit, label_unit};
use crate::histogram::{Ccdh, VertexLabel};
use crate::stream::EdgeStream;
use crate::tgmath::{check_probability, loss_unchecked, LossRounding};
use crate::{Error, Result};

/// Streaming head/tail sketch. Single-writer: one stream is fed through
/// `update`; estimation reads a finished (or paused) sketch.
#[derive(Debug, Clone)]
pub struct HeadTailSketch {
    head_prob: f64,
    tail_prob: f64,
    seed: u64,
    head: HashMap<VertexLabel, u64>,
    tail: HashMap<VertexLabel, u64>,
    endpoints_seen: u64,
    peak_entries: usize,
}

/// Counter histograms of both samples: counter value to the number of
/// sampled vertices holding it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ObservedCounts {
    pub head: BTreeMap<u64, u64>,
    pub tail: BTreeMap<u64, u64>,
}

/// Knobs for [`HeadTailSketch::estimate`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EstimateConfig {
    /// Minimum raw head-sample mass (vertex count at or above a degree)
    /// for the head estimate to be trusted at that degree.
    pub threshold_constant: f64,
    /// Post-process the estimate into a monotone curve via suffix maxima.
    pub monotone_clamp: bool,
    /// Rounding direction for the tail counter correction.
    pub loss_rounding: LossRounding,
}

impl Default for EstimateConfig {
    fn default() -> Self {
        EstimateConfig {
            threshold_constant: 50.0,
            monotone_clamp: false,
            loss_rounding: LossRounding::Ceil,
        }
    }
}

impl EstimateConfig {
    fn validate(&self) -> Result<()> {
        if !(self.threshold_constant > 0.0) || !self.threshold_constant.is_finite() {
            return Err(Error::invalid(
                "threshold_constant",
                format!("{} must be a finite positive value", self.threshold_constant),
            ));
        }
        Ok(())
    }
}

/// Output of [`HeadTailSketch::estimate`].
#[derive(Debug, Clone)]
pub struct EstimateResult {
    /// The estimated ccdh (real-valued; monotone only if clamped).
    pub estimate: Ccdh,
    /// Crossover degree: head estimate used through here, tail beyond.
    /// Zero means the head never had enough mass and the tail is used
    /// everywhere.
    pub threshold_degree: u64,
    /// Scaled per-degree head masses `C_h(r) / head_prob`, `r = 1` first.
    pub head_component: Vec<f64>,
    /// Corrected, rescaled per-degree tail masses, `r = 1` first.
    pub tail_component: Vec<f64>,
    /// Labels retained across both samples when the estimate was taken.
    pub storage_used: usize,
}

impl HeadTailSketch {
    /// Create an empty sketch. Both probabilities must lie in `(0, 1]`.
    pub fn new(head_prob: f64, tail_prob: f64, seed: u64) -> Result<Self> {
        check_probability("head_prob", head_prob)?;
        check_probability("tail_prob", tail_prob)?;
        Ok(HeadTailSketch {
            head_prob,
            tail_prob,
            seed,
            head: HashMap::new(),
            tail: HashMap::new(),
            endpoints_seen: 0,
            peak_entries: 0,
        })
    }

    pub fn head_prob(&self) -> f64 {
        self.head_prob
    }

    pub fn tail_prob(&self) -> f64 {
        self.tail_prob
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Endpoint occurrences processed so far (two per edge).
    pub fn endpoints_seen(&self) -> u64 {
        self.endpoints_seen
    }

    /// Feed one edge. Both endpoints are processed, first `u` then `v`;
    /// a self-loop therefore bumps its vertex twice.
    #[inline]
    pub fn update(&mut self, u: &str, v: &str) {
        self.touch(u);
        self.touch(v);
        let entries = self.head.len() + self.tail.len();
        if entries > self.peak_entries {
            self.peak_entries = entries;
        }
    }

    #[inline]
    fn touch(&mut self, w: &str) {
        if let Some(c) = self.head.get_mut(w) {
            *c += 1;
        } else if label_unit(self.seed, w) < self.head_prob {
            self.head.insert(VertexLabel::from_token(w), 1);
        }
        if let Some(c) = self.tail.get_mut(w) {
            *c += 1;
        } else if coin_unit(self.seed, self.endpoints_seen) < self.tail_prob {
            self.tail.insert(VertexLabel::from_token(w), 1);
        }
        self.endpoints_seen += 1;
    }

    /// Feed a whole stream.
    pub fn process_stream(&mut self, stream: &EdgeStream) -> Result<()> {
        stream.for_each_edge(|u, v| self.update(u, v))
    }

    /// `(head entries, tail entries)` currently retained.
    pub fn storage(&self) -> (usize, usize) {
        (self.head.len(), self.tail.len())
    }

    /// Largest combined entry count ever observed. Entries are never
    /// evicted, so this equals the final size; it exists so tests can
    /// assert the sketch never buffered more than its samples.
    pub fn peak_entries(&self) -> usize {
        self.peak_entries
    }

    /// Counter kept for `w` in the head sample, if `w` was sampled.
    pub fn head_count(&self, w: &str) -> Option<u64> {
        self.head.get(w).copied()
    }

    /// Counter kept for `w` in the tail sample, if `w` was sampled.
    pub fn tail_count(&self, w: &str) -> Option<u64> {
        self.tail.get(w).copied()
    }

    /// Bucket both samples' counters.
    pub fn observed_counts(&self) -> ObservedCounts {
        let mut head = BTreeMap::new();
        for &c in self.head.values() {
            *head.entry(c).or_insert(0u64) += 1;
        }
        let mut tail = BTreeMap::new();
        for &c in self.tail.values() {
            *tail.entry(c).or_insert(0u64) += 1;
        }
        ObservedCounts { head, tail }
    }

    /// Estimate the ccdh of the streamed graph.
    pub fn estimate(&self, config: &EstimateConfig) -> Result<EstimateResult> {
        config.validate()?;
        let counts = self.observed_counts();

        // Head side: dense per-counter masses and raw suffix counts.
        let max_h = counts.head.keys().next_back().copied().unwrap_or(0) as usize;
        let mut head_component = vec![0.0; max_h];
        let mut head_suffix_raw = vec![0u64; max_h + 1]; // index by degree, 1-based
        for (&r, &c) in &counts.head {
            head_component[r as usize - 1] = c as f64 / self.head_prob;
        }
        for r in (1..=max_h).rev() {
            let here = counts.head.get(&(r as u64)).copied().unwrap_or(0);
            head_suffix_raw[r] = here + if r < max_h { head_suffix_raw[r + 1] } else { 0 };
        }
        let threshold_degree = (1..=max_h)
            .rev()
            .find(|&d| head_suffix_raw[d] as f64 >= config.threshold_constant)
            .unwrap_or(0) as u64;
        if threshold_degree == 0 {
            log::warn!(
                "head sample holds {} vertices, below threshold_constant {}; \
                 using the tail estimate at every degree",
                head_suffix_raw.get(1).copied().unwrap_or(0),
                config.threshold_constant
            );
        }

        // Tail side: a stored count of `c` predicts a degree of `r` where
        // `r - loss(r) = c`, so bucket `c` is read at report index `r` and
        // rescaled by the inclusion probability at that degree. The shift
        // map `r - loss(r)` climbs in steps of 0 or 1 (the mean loss grows
        // by less than one per degree), so consecutive indices can point at
        // the same bucket; each bucket is consumed at the first index that
        // reaches it, leaving later duplicates at zero. That keeps every
        // stored vertex counted exactly once — re-reading a bucket at each
        // index of a flat run would roughly double the low-degree tail.
        let max_t = counts.tail.keys().next_back().copied().unwrap_or(0);
        let mut tail_dense = vec![0.0; max_t as usize]; // raw C_t by counter
        for (&r, &c) in &counts.tail {
            tail_dense[r as usize - 1] = c as f64;
        }
        let log_q = (-self.tail_prob).ln_1p();
        let mut tail_component: Vec<f64> = Vec::new();
        if max_t > 0 {
            let mut consumed = 0u64; // sources at or below this are spent
            let mut r = 1u64;
            loop {
                let loss = loss_unchecked(self.tail_prob, r, config.loss_rounding);
                let source = r - loss; // always >= 1: the mean loss is below r
                if source > max_t {
                    break;
                }
                if source > consumed {
                    consumed = source;
                    let raw = tail_dense[source as usize - 1];
                    let inclusion = -(r as f64 * log_q).exp_m1();
                    tail_component.push(raw / inclusion);
                } else {
                    tail_component.push(0.0);
                }
                r += 1;
            }
        }

        // Splice suffix sums: head through the threshold, tail beyond.
        let len = (threshold_degree as usize).max(tail_component.len());
        let mut tail_suffix = vec![0.0; tail_component.len() + 1];
        for r in (0..tail_component.len()).rev() {
            tail_suffix[r] = tail_component[r] + tail_suffix[r + 1];
        }
        let mut values = vec![0.0; len];
        for d in 1..=len {
            values[d - 1] = if d as u64 <= threshold_degree {
                head_suffix_raw[d] as f64 / self.head_prob
            } else {
                tail_suffix.get(d - 1).copied().unwrap_or(0.0)
            };
        }
        let mut estimate = Ccdh::from_values(values)?;
        if config.monotone_clamp {
            estimate = estimate.monotone_clamp();
        }
        Ok(EstimateResult {
            estimate,
            threshold_degree,
            head_component,
            tail_component,
            storage_used: self.head.len() + self.tail.len(),
        })
    }
}
