//! Degree histograms and their complementary cumulative form.
//!
//! The two views of a degree distribution used throughout the crate:
//!
//! * [`DegreeHistogram`] — sparse counts `n(d)` = number of vertices with
//!   degree exactly `d`;
//! * [`Ccdh`] — dense values `N(d)` = number of vertices with degree at
//!   least `d`, stored for `d = 1..=d_max`.
//!
//! A vertex's degree is its number of endpoint occurrences in the stream:
//! parallel edges count each time they appear and a self-loop contributes
//! two occurrences to its vertex. Exact ccdhs are monotone non-increasing
//! by construction; estimated ones are real-valued and may dip or jump, so
//! [`Ccdh`] itself does not force monotonicity — operations that need it
//! check and report the first offending degree.

use std::borrow::Borrow;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use crate::stream::EdgeStream;
use crate::{Error, Result};

/// An opaque, non-empty vertex token.
///
/// Labels carry no numeric meaning; `"007"` and `"7"` are distinct
/// vertices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexLabel(Box<str>);

impl VertexLabel {
    pub fn new(token: impl Into<Box<str>>) -> Result<Self> {
        let token = token.into();
        if token.is_empty() {
            return Err(Error::EmptyLabel);
        }
        Ok(VertexLabel(token))
    }

    /// Internal constructor for tokens that are non-empty by construction
    /// (e.g. produced by `split_whitespace`).
    #[inline]
    pub(crate) fn from_token(token: &str) -> Self {
        debug_assert!(!token.is_empty());
        VertexLabel(token.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl Borrow<str> for VertexLabel {
    fn borrow(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for VertexLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Sparse histogram: degree (≥ 1) to the number of vertices holding it.
///
/// Zero-count entries are never stored. Iteration is in increasing degree
/// order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DegreeHistogram {
    counts: BTreeMap<u64, u64>,
}

impl DegreeHistogram {
    pub fn new() -> Self {
        Self::default()
    }

    /// Record `count` additional vertices of degree `degree`.
    pub fn add(&mut self, degree: u64, count: u64) -> Result<()> {
        if degree == 0 {
            return Err(Error::invalid("degree", "degrees start at 1"));
        }
        if count > 0 {
            *self.counts.entry(degree).or_insert(0) += count;
        }
        Ok(())
    }

    /// Build from one degree per vertex.
    pub fn from_degrees(degrees: impl IntoIterator<Item = u64>) -> Result<Self> {
        let mut dh = Self::new();
        for d in degrees {
            dh.add(d, 1)?;
        }
        Ok(dh)
    }

    pub fn count(&self, degree: u64) -> u64 {
        self.counts.get(&degree).copied().unwrap_or(0)
    }

    /// `(degree, count)` pairs in increasing degree order.
    pub fn iter(&self) -> impl Iterator<Item = (u64, u64)> + '_ {
        self.counts.iter().map(|(&d, &c)| (d, c))
    }

    pub fn max_degree(&self) -> u64 {
        self.counts.keys().next_back().copied().unwrap_or(0)
    }

    /// Total number of vertices recorded.
    pub fn vertices(&self) -> u64 {
        self.counts.values().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }
}

/// Dense complementary cumulative degree histogram.
///
/// `values[i]` holds `N(i + 1)`; reads beyond the stored range return 0.
/// Trailing zeros are trimmed on construction so `N(d_max) > 0` whenever
/// the ccdh is non-trivial. Values are real: estimators produce scaled,
/// non-integral ccdhs that are compared as-is, without rounding.
#[derive(Debug, Clone, PartialEq)]
pub struct Ccdh {
    values: Vec<f64>,
}

impl Ccdh {
    /// Wrap raw values, `values[0]` being `N(1)`. Rejects negative and
    /// non-finite entries; trims trailing zeros. An all-zero input yields
    /// the trivial (empty) ccdh.
    pub fn from_values(mut values: Vec<f64>) -> Result<Self> {
        for (i, v) in values.iter().enumerate() {
            if !v.is_finite() || *v < 0.0 {
                return Err(Error::invalid(
                    "ccdh",
                    format!("value {v} at degree {} (values must be finite and >= 0)", i + 1),
                ));
            }
        }
        while values.last() == Some(&0.0) {
            values.pop();
        }
        Ok(Ccdh { values })
    }

    /// `N(d)`, reading 0 beyond the stored range. `N(0)` reads 0: the
    /// domain starts at degree 1.
    #[inline]
    pub fn get(&self, d: u64) -> f64 {
        if d == 0 || d > self.values.len() as u64 {
            0.0
        } else {
            self.values[(d - 1) as usize]
        }
    }

    /// Largest degree with a positive value; 0 for the trivial ccdh.
    pub fn d_max(&self) -> u64 {
        self.values.len() as u64
    }

    /// `N(1)`: the number of vertices (scaled, for estimates).
    pub fn total(&self) -> f64 {
        self.get(1)
    }

    pub fn is_trivial(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// First degree `d` where `N(d) < N(d + 1)`, if any.
    pub fn first_increase(&self) -> Option<u64> {
        self.values
            .windows(2)
            .position(|w| w[0] < w[1])
            .map(|i| (i + 1) as u64)
    }

    /// Running suffix maximum: the least monotone non-increasing curve
    /// dominating this one. Applied to estimates only on request.
    pub fn monotone_clamp(&self) -> Ccdh {
        let mut values = self.values.clone();
        let mut best = 0.0_f64;
        for v in values.iter_mut().rev() {
            best = best.max(*v);
            *v = best;
        }
        Ccdh { values }
    }

    /// Write as TSV: a `degree<TAB>count` header, then one dense row per
    /// degree from 1 to `d_max`.
    pub fn write_tsv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "degree\tcount")?;
        for (i, v) in self.values.iter().enumerate() {
            writeln!(out, "{}\t{}", i + 1, v)?;
        }
        Ok(())
    }

    pub fn write_tsv_path(&self, path: &Path) -> Result<()> {
        let file = File::create(path).map_err(|e| Error::io(path, e))?;
        let mut w = BufWriter::new(file);
        self.write_tsv(&mut w).map_err(|e| Error::io(path, e))?;
        w.flush().map_err(|e| Error::io(path, e))
    }

    /// Read the TSV format produced by [`Ccdh::write_tsv`]. Rows may be
    /// sparse or unordered; missing degrees read as 0 and duplicate
    /// degrees are rejected.
    pub fn read_tsv_path(path: &Path) -> Result<Ccdh> {
        let file = File::open(path).map_err(|e| Error::io(path, e))?;
        let reader = BufReader::new(file);
        let mut rows: BTreeMap<u64, f64> = BTreeMap::new();
        for (idx, line) in reader.lines().enumerate() {
            let line = line.map_err(|e| Error::io(path, e))?;
            let lineno = idx as u64 + 1;
            let text = line.trim();
            if text.is_empty() || text.starts_with('#') {
                continue;
            }
            if lineno == 1 && text.starts_with("degree") {
                continue;
            }
            let mut parts = text.split_whitespace();
            let degree = parts
                .next()
                .and_then(|t| t.parse::<u64>().ok())
                .filter(|&d| d >= 1)
                .ok_or_else(|| bad_row(path, lineno, "expected a degree >= 1"))?;
            let value = parts
                .next()
                .and_then(|t| t.parse::<f64>().ok())
                .ok_or_else(|| bad_row(path, lineno, "expected a numeric count"))?;
            if rows.insert(degree, value).is_some() {
                return Err(bad_row(path, lineno, &format!("duplicate degree {degree}")));
            }
        }
        let d_max = rows.keys().next_back().copied().unwrap_or(0);
        let mut values = vec![0.0; d_max as usize];
        for (d, v) in rows {
            values[(d - 1) as usize] = v;
        }
        Ccdh::from_values(values)
    }
}

fn bad_row(path: &Path, line: u64, reason: &str) -> Error {
    Error::MalformedTable {
        path: path.to_path_buf(),
        line,
        reason: reason.to_string(),
    }
}

/// Exact degree histogram of a stream: one full pass counting endpoint
/// occurrences per label. This is the ground-truth oracle the estimators
/// are judged against, and it shares no state with any sketch.
pub fn exact_dh(stream: &EdgeStream) -> Result<DegreeHistogram> {
    let mut occurrences: HashMap<VertexLabel, u64> = HashMap::new();
    stream.for_each_edge(|u, v| {
        for w in [u, v] {
            if let Some(c) = occurrences.get_mut(w) {
                *c += 1;
            } else {
                occurrences.insert(VertexLabel::from_token(w), 1);
            }
        }
    })?;
    if occurrences.is_empty() {
        return Err(Error::TrivialHistogram);
    }
    let mut dh = DegreeHistogram::new();
    for (_, d) in occurrences {
        dh.add(d, 1)?;
    }
    Ok(dh)
}

/// Suffix-sum a histogram into its complementary cumulative form.
pub fn dh_to_ccdh(dh: &DegreeHistogram) -> Result<Ccdh> {
    if dh.is_empty() {
        return Err(Error::TrivialHistogram);
    }
    let d_max = dh.max_degree();
    let mut values = vec![0.0; d_max as usize];
    let mut running = 0.0;
    for d in (1..=d_max).rev() {
        running += dh.count(d) as f64;
        values[(d - 1) as usize] = running;
    }
    Ccdh::from_values(values)
}

/// Difference a monotone ccdh back into per-degree counts.
///
/// Only meaningful for exact (integral) ccdhs; differences are rounded to
/// the nearest integer to absorb float formatting noise from round trips
/// through files. A monotonicity violation is an error naming the degree.
pub fn ccdh_to_dh(ccdh: &Ccdh) -> Result<DegreeHistogram> {
    if ccdh.is_trivial() {
        return Err(Error::TrivialCcdh);
    }
    if let Some(degree) = ccdh.first_increase() {
        return Err(Error::NonMonotoneCcdh { degree });
    }
    let mut dh = DegreeHistogram::new();
    for d in 1..=ccdh.d_max() {
        let diff = ccdh.get(d) - ccdh.get(d + 1);
        let count = diff.round();
        if count > 0.0 {
            dh.add(d, count as u64)?;
        }
    }
    Ok(dh)
}
