//! Competing estimators: classic heavy-hitter summaries, the plain
//! uniform-vertex head estimator, and the oracle-tuned hybrid of the two.
//!
//! The item stream a summary consumes is the sequence of endpoint
//! occurrences (two per edge), so an item's frequency is exactly a
//! vertex's degree. Three standard summaries are provided, each per its
//! original published semantics:
//!
//! * **frequent** — Misra-Gries: on a miss with all counters taken,
//!   every counter is decremented (the new item is dropped);
//!   any item's undercount is at most `items / (capacity + 1)`.
//! * **lossy counting** — Manku-Motwani: entries carry their insertion
//!   bucket as an error term and are pruned at window boundaries; the
//!   window width is `capacity`, i.e. the error parameter is
//!   `1 / capacity` of the stream length.
//! * **space saving** — Metwally-Agrawal-El Abbadi: a full summary
//!   recycles the minimum counter, so counters overcount, stored counts
//!   sum exactly to the stream length, and the per-entry error bound is
//!   the evicted minimum.
//!
//! The hybrid estimator splices the head estimate below a threshold
//! degree with a heavy-hitter-derived tail above it, choosing the
//! threshold that scores best against the exact ccdh. That uses ground
//! truth — it is an evaluation device, deliberately generous to the
//! competition, and is not a streaming algorithm.

use std::collections::{BTreeSet, HashMap};

use crate::histogram::{dh_to_ccdh, Ccdh, DegreeHistogram, VertexLabel};
use crate::rh::{is_close, rh_distance};
use crate::stream::EdgeStream;
use crate::tgmath::check_probability;
use crate::{Error, Result};

/// Which heavy-hitter algorithm a summary runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HhKind {
    Frequent,
    LossyCounting,
    SpaceSaving,
}

#[derive(Debug, Clone)]
struct Slot {
    label: VertexLabel,
    count: u64,
    err: u64,
}

#[derive(Debug, Clone)]
enum State {
    Frequent {
        counts: HashMap<VertexLabel, u64>,
    },
    Lossy {
        /// label → (observed count, bucket error term)
        entries: HashMap<VertexLabel, (u64, u64)>,
    },
    SpaceSaving {
        slots: Vec<Slot>,
        index: HashMap<VertexLabel, usize>,
        /// (count, slot) ordered set for O(log capacity) minimum lookup.
        order: BTreeSet<(u64, usize)>,
    },
}

/// One tracked item of a finished summary.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HhEntry {
    pub label: VertexLabel,
    pub estimate: u64,
    /// Overcount bound where the algorithm defines one per entry
    /// (lossy counting's bucket term, space saving's evicted minimum).
    pub error_bound: Option<u64>,
}

/// A bounded-size frequency summary over a label stream.
#[derive(Debug, Clone)]
pub struct HeavyHitterSummary {
    kind: HhKind,
    capacity: usize,
    items_processed: u64,
    peak_entries: usize,
    state: State,
}

impl HeavyHitterSummary {
    pub fn new(kind: HhKind, capacity: usize) -> Result<Self> {
        if capacity == 0 {
            return Err(Error::invalid("capacity", "at least one counter is required"));
        }
        let state = match kind {
            HhKind::Frequent => State::Frequent {
                counts: HashMap::new(),
            },
            HhKind::LossyCounting => State::Lossy {
                entries: HashMap::new(),
            },
            HhKind::SpaceSaving => State::SpaceSaving {
                slots: Vec::with_capacity(capacity),
                index: HashMap::new(),
                order: BTreeSet::new(),
            },
        };
        Ok(HeavyHitterSummary {
            kind,
            capacity,
            items_processed: 0,
            peak_entries: 0,
            state,
        })
    }

    pub fn kind(&self) -> HhKind {
        self.kind
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn items_processed(&self) -> u64 {
        self.items_processed
    }

    /// Entries currently stored.
    pub fn storage(&self) -> usize {
        match &self.state {
            State::Frequent { counts } => counts.len(),
            State::Lossy { entries } => entries.len(),
            State::SpaceSaving { slots, .. } => slots.len(),
        }
    }

    /// Largest entry count ever held (lossy counting can transiently
    /// exceed `capacity` between prunes).
    pub fn peak_entries(&self) -> usize {
        self.peak_entries
    }

    /// Observe one item.
    pub fn update(&mut self, w: &str) {
        self.items_processed += 1;
        let capacity = self.capacity;
        let items = self.items_processed;
        match &mut self.state {
            State::Frequent { counts } => {
                if let Some(c) = counts.get_mut(w) {
                    *c += 1;
                } else if counts.len() < capacity {
                    counts.insert(VertexLabel::from_token(w), 1);
                } else {
                    counts.retain(|_, c| {
                        *c -= 1;
                        *c > 0
                    });
                }
            }
            State::Lossy { entries } => {
                let bucket = items.div_ceil(capacity as u64);
                if let Some((f, _)) = entries.get_mut(w) {
                    *f += 1;
                } else {
                    entries.insert(VertexLabel::from_token(w), (1, bucket - 1));
                }
                if items % capacity as u64 == 0 {
                    entries.retain(|_, &mut (f, delta)| f + delta > bucket);
                }
            }
            State::SpaceSaving {
                slots,
                index,
                order,
            } => {
                if let Some(&i) = index.get(w) {
                    order.remove(&(slots[i].count, i));
                    slots[i].count += 1;
                    order.insert((slots[i].count, i));
                } else if slots.len() < capacity {
                    let i = slots.len();
                    slots.push(Slot {
                        label: VertexLabel::from_token(w),
                        count: 1,
                        err: 0,
                    });
                    index.insert(slots[i].label.clone(), i);
                    order.insert((1, i));
                } else {
                    let &(min_count, i) = order.iter().next().expect("summary is full");
                    order.remove(&(min_count, i));
                    index.remove(slots[i].label.as_str());
                    slots[i] = Slot {
                        label: VertexLabel::from_token(w),
                        count: min_count + 1,
                        err: min_count,
                    };
                    index.insert(slots[i].label.clone(), i);
                    order.insert((min_count + 1, i));
                }
            }
        }
        self.peak_entries = self.peak_entries.max(self.storage());
    }

    /// Feed a whole edge stream, one update per endpoint occurrence.
    pub fn process_stream(&mut self, stream: &EdgeStream) -> Result<()> {
        stream.for_each_edge(|u, v| {
            self.update(u);
            self.update(v);
        })
    }

    /// Estimated count for one label (0 when untracked).
    pub fn estimate(&self, w: &str) -> u64 {
        match &self.state {
            State::Frequent { counts } => counts.get(w).copied().unwrap_or(0),
            State::Lossy { entries } => entries.get(w).map(|&(f, _)| f).unwrap_or(0),
            State::SpaceSaving { slots, index, .. } => {
                index.get(w).map(|&i| slots[i].count).unwrap_or(0)
            }
        }
    }

    /// Tracked items, highest estimate first, ties by label.
    pub fn entries(&self) -> Vec<HhEntry> {
        let mut out: Vec<HhEntry> = match &self.state {
            State::Frequent { counts } => counts
                .iter()
                .map(|(label, &estimate)| HhEntry {
                    label: label.clone(),
                    estimate,
                    error_bound: None,
                })
                .collect(),
            State::Lossy { entries } => entries
                .iter()
                .map(|(label, &(f, delta))| HhEntry {
                    label: label.clone(),
                    estimate: f,
                    error_bound: Some(delta),
                })
                .collect(),
            State::SpaceSaving { slots, .. } => slots
                .iter()
                .map(|slot| HhEntry {
                    label: slot.label.clone(),
                    estimate: slot.count,
                    error_bound: Some(slot.err),
                })
                .collect(),
        };
        out.sort_by(|a, b| {
            b.estimate
                .cmp(&a.estimate)
                .then_with(|| a.label.cmp(&b.label))
        });
        out
    }
}

/// Build the (unscaled) ccdh of the summary's own estimates: each
/// tracked entry's count is treated as a vertex degree. This is the
/// tail view a head+heavy-hitter hybrid splices in above its threshold.
pub fn hh_to_tail_ccdh(summary: &HeavyHitterSummary) -> Result<Ccdh> {
    let entries = summary.entries();
    if entries.is_empty() {
        return Err(Error::TrivialCcdh);
    }
    let mut dh = DegreeHistogram::new();
    for e in &entries {
        dh.add(e.estimate, 1)?;
    }
    dh_to_ccdh(&dh)
}

/// The head half of the sketch on its own: a uniform hash-thresholded
/// vertex sample with exact occurrence counters.
#[derive(Debug, Clone)]
pub struct HeadSampler {
    prob: f64,
    seed: u64,
    counts: HashMap<VertexLabel, u64>,
}

impl HeadSampler {
    pub fn new(prob: f64, seed: u64) -> Result<Self> {
        check_probability("head_prob", prob)?;
        Ok(HeadSampler {
            prob,
            seed,
            counts: HashMap::new(),
        })
    }

    pub fn update(&mut self, w: &str) {
        if let Some(c) = self.counts.get_mut(w) {
            *c += 1;
        } else if crate::hashing::label_unit(self.seed, w) < self.prob {
            self.counts.insert(VertexLabel::from_token(w), 1);
        }
    }

    pub fn process_stream(&mut self, stream: &EdgeStream) -> Result<()> {
        stream.for_each_edge(|u, v| {
            self.update(u);
            self.update(v);
        })
    }

    /// Sampled vertices currently stored.
    pub fn storage(&self) -> usize {
        self.counts.len()
    }

    /// Scaled suffix sums of the sampled counter histogram over every
    /// degree — no threshold cutoff. Trivial when nothing was sampled.
    pub fn estimate(&self) -> Result<Ccdh> {
        let max = self.counts.values().max().copied().unwrap_or(0) as usize;
        let mut per_degree = vec![0.0; max];
        for &c in self.counts.values() {
            per_degree[c as usize - 1] += 1.0 / self.prob;
        }
        let mut values = per_degree;
        for d in (0..values.len().saturating_sub(1)).rev() {
            values[d] += values[d + 1];
        }
        Ccdh::from_values(values)
    }
}

/// One-call head-only estimate of a stream's ccdh.
pub fn head_estimate(stream: &EdgeStream, prob: f64, seed: u64) -> Result<Ccdh> {
    let mut sampler = HeadSampler::new(prob, seed)?;
    sampler.process_stream(stream)?;
    sampler.estimate()
}

/// An oracle-tuned splice of a head estimate and a heavy-hitter tail.
#[derive(Debug, Clone)]
pub struct HybridEstimate {
    pub nhat: Ccdh,
    /// Chosen splice point: head below and at, tail above.
    pub d_thr: u64,
    /// RH distance of `nhat` against the truth it was tuned on.
    pub rh_distance: f64,
    pub head_storage: usize,
    pub hh_storage: usize,
}

/// Try every splice point and keep the one closest to `truth` in RH
/// distance (ties to the smallest threshold). Needs ground truth, so
/// this lives on the evaluation side, never in a streaming path.
///
/// Most splices are disposed of without a full distance computation:
/// closeness is monotone in both slacks, so a candidate that is not even
/// `(best, best)`-close to the truth — one cheap predicate call — is
/// strictly farther than the best already seen. Survivors are scored
/// with the same full computation an exhaustive scan would use, and ties
/// keep the earliest (smallest) threshold, so the chosen splice, its
/// distance, and the tie rule are exactly the exhaustive scan's.
pub fn hybrid_estimate(
    head: &Ccdh,
    tail: &Ccdh,
    truth: &Ccdh,
    tolerance: f64,
    head_storage: usize,
    hh_storage: usize,
) -> Result<HybridEstimate> {
    for (name, c) in [("head", head), ("tail", tail), ("truth", truth)] {
        if c.is_trivial() {
            return Err(Error::invalid(name, "trivial ccdh has no splice"));
        }
    }
    if !(tolerance > 0.0) || !tolerance.is_finite() {
        return Err(Error::invalid(
            "tolerance",
            format!("{tolerance} must be a finite positive value"),
        ));
    }
    let d_union = head.d_max().max(tail.d_max());
    let mut best: Option<(u64, f64, Ccdh)> = None;
    for d_thr in 1..=d_union {
        let values: Vec<f64> = (1..=d_union)
            .map(|d| if d <= d_thr { head.get(d) } else { tail.get(d) })
            .collect();
        let Ok(nhat) = Ccdh::from_values(values) else {
            continue;
        };
        if nhat.is_trivial() {
            continue;
        }
        if let Some((_, bound, _)) = &best {
            if !is_close(&nhat, truth, *bound, *bound)? {
                continue;
            }
        }
        let report = rh_distance(&nhat, truth, tolerance)?;
        if best
            .as_ref()
            .map_or(true, |(_, bound, _)| report.distance < *bound)
        {
            best = Some((d_thr, report.distance, nhat));
        }
    }
    let (d_thr, rh, nhat) =
        best.ok_or_else(|| Error::invalid("splice", "no candidate produced a usable curve"))?;
    Ok(HybridEstimate {
        nhat,
        d_thr,
        rh_distance: rh,
        head_storage,
        hh_storage,
    })
}
