//! Fixtures and statistics helpers shared by the integration suites.
//!
//! Everything here is deliberately independent of the library's internals:
//! the truncated-geometric moments are brute-force sums over the raw pdf
//! formula, and the relative-Hausdorff oracle re-derives closeness with
//! plain nested loops plus an exhaustive breakpoint scan. That keeps these
//! helpers usable as ground truth for the code under test.
#![allow(dead_code)]

use degstream::histogram::Ccdh;
use degstream::stream::EdgeStream;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use statrs::distribution::{ChiSquared, ContinuousCDF};

// ---------------------------------------------------------------------------
// Fixed degree-class fixture
// ---------------------------------------------------------------------------

/// Degree of vertex `i` in the fixed four-class test graph.
pub fn fixed_class_degree(i: u64) -> u64 {
    match i {
        0..=119 => 1,
        120..=177 => 5,
        178..=197 => 20,
        _ => 100,
    }
}

/// A fixed 200-vertex multigraph whose degree sequence has the classes
/// n(1)=120, n(5)=58, n(20)=20, n(100)=2 — 1010 endpoints, 505 edges.
///
/// Edges come from a seeded pairing of degree stubs. Self-loops are
/// possible and harmless: a vertex's degree is its number of endpoint
/// occurrences in the stream, which any pairing of the stubs preserves
/// exactly. Vertex `i` is labeled `v{i}`.
pub fn fixed_class_graph() -> (EdgeStream, Vec<u64>) {
    let degrees: Vec<u64> = (0u64..200).map(fixed_class_degree).collect();
    let mut stubs: Vec<u32> = Vec::new();
    for (i, &d) in degrees.iter().enumerate() {
        stubs.extend(std::iter::repeat(i as u32).take(d as usize));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x57AB_5EED);
    stubs.shuffle(&mut rng);
    let labels: Vec<String> = (0..200).map(|i| format!("v{i}")).collect();
    let edges: Vec<[u32; 2]> = stubs.chunks(2).map(|c| [c[0], c[1]]).collect();
    (EdgeStream::from_edges(labels, edges), degrees)
}

// ---------------------------------------------------------------------------
// Summation and basic statistics
// ---------------------------------------------------------------------------

/// Kahan compensated accumulator, for sums that must hold ~1e-12 accuracy
/// across tens of thousands of terms.
#[derive(Debug, Default, Clone, Copy)]
pub struct KahanSum {
    total: f64,
    carry: f64,
}

impl KahanSum {
    pub fn add(&mut self, x: f64) {
        let y = x - self.carry;
        let t = self.total + y;
        self.carry = (t - self.total) - y;
        self.total = t;
    }

    pub fn total(&self) -> f64 {
        self.total
    }
}

pub fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Sample standard deviation (n − 1 denominator).
pub fn sample_std(xs: &[f64]) -> f64 {
    let m = mean(xs);
    let ss: f64 = xs.iter().map(|x| (x - m) * (x - m)).sum();
    (ss / (xs.len() as f64 - 1.0)).sqrt()
}

pub fn median(xs: &[f64]) -> f64 {
    let mut v = xs.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        (v[n / 2 - 1] + v[n / 2]) / 2.0
    }
}

/// Average ranks, ties sharing their mean rank (1-based).
fn ranks(v: &[f64]) -> Vec<f64> {
    let mut idx: Vec<usize> = (0..v.len()).collect();
    idx.sort_by(|&a, &b| v[a].total_cmp(&v[b]));
    let mut out = vec![0.0; v.len()];
    let mut i = 0;
    while i < idx.len() {
        let mut j = i;
        while j + 1 < idx.len() && v[idx[j + 1]] == v[idx[i]] {
            j += 1;
        }
        let avg = (i + j) as f64 / 2.0 + 1.0;
        for k in i..=j {
            out[idx[k]] = avg;
        }
        i = j + 1;
    }
    out
}

fn pearson(x: &[f64], y: &[f64]) -> f64 {
    let (mx, my) = (mean(x), mean(y));
    let mut num = 0.0;
    let mut dx = 0.0;
    let mut dy = 0.0;
    for (a, b) in x.iter().zip(y) {
        num += (a - mx) * (b - my);
        dx += (a - mx) * (a - mx);
        dy += (b - my) * (b - my);
    }
    num / (dx * dy).sqrt()
}

/// Spearman rank correlation with average-rank tie handling.
pub fn spearman(xs: &[f64], ys: &[f64]) -> f64 {
    pearson(&ranks(xs), &ranks(ys))
}

/// Critical value of the chi-squared distribution: the statistic that a
/// true-null fit exceeds with probability `alpha`.
pub fn chi_square_threshold(dof: usize, alpha: f64) -> f64 {
    ChiSquared::new(dof as f64)
        .expect("valid degrees of freedom")
        .inverse_cdf(1.0 - alpha)
}

/// Pearson goodness-of-fit statistic after greedily merging adjacent cells
/// until every merged cell expects at least `min_expected` observations.
/// Returns `(statistic, merged_cell_count)`.
pub fn chi_square_stat_merged(
    observed: &[f64],
    expected: &[f64],
    min_expected: f64,
) -> (f64, usize) {
    assert_eq!(observed.len(), expected.len());
    let mut cells: Vec<(f64, f64)> = Vec::new();
    let mut o_acc = 0.0;
    let mut e_acc = 0.0;
    for (&o, &e) in observed.iter().zip(expected) {
        o_acc += o;
        e_acc += e;
        if e_acc >= min_expected {
            cells.push((o_acc, e_acc));
            o_acc = 0.0;
            e_acc = 0.0;
        }
    }
    if o_acc > 0.0 || e_acc > 0.0 {
        if let Some(last) = cells.last_mut() {
            last.0 += o_acc;
            last.1 += e_acc;
        } else {
            cells.push((o_acc, e_acc));
        }
    }
    let stat = cells.iter().map(|&(o, e)| (o - e) * (o - e) / e).sum();
    (stat, cells.len())
}

// ---------------------------------------------------------------------------
// Truncated-geometric brute-force moments
// ---------------------------------------------------------------------------

/// Total mass, mean, and variance of the truncated geometric on
/// `{0, .., s-1}` by direct summation of `p(1-p)^k / (1 - (1-p)^s)`.
/// Uses `powi` (exact repeated squaring) and Kahan sums, so the results
/// are trustworthy to ~1e-12 even at `s = 10^4`.
pub fn brute_tg_moments(p: f64, s: u64) -> (f64, f64, f64) {
    let q = 1.0 - p;
    let norm = 1.0 - q.powi(s as i32);
    let mut mass = KahanSum::default();
    let mut m1 = KahanSum::default();
    let mut m2 = KahanSum::default();
    for k in 0..s {
        let pdf = p * q.powi(k as i32) / norm;
        mass.add(pdf);
        m1.add(k as f64 * pdf);
        m2.add((k * k) as f64 * pdf);
    }
    let mean = m1.total();
    (mass.total(), mean, m2.total() - mean * mean)
}

/// Pull an almost-integer float onto its integer so last-bit noise in the
/// brute-force sum cannot flip the subsequent ceiling; the tolerance
/// mirrors the library's own rounding convention.
pub fn snap_to_integer(x: f64) -> f64 {
    let r = x.round();
    if (x - r).abs() < 1e-9 {
        r
    } else {
        x
    }
}

// ---------------------------------------------------------------------------
// Relative-Hausdorff oracle
// ---------------------------------------------------------------------------

/// One direction of the closeness predicate, written as the definition
/// reads: every degree of `f`'s support must find an integer candidate
/// within relative slack `eps` whose value gap fits the `delta` budget.
/// Exhaustive over the whole candidate interval — no search shortcuts.
fn oracle_directed_close(f: &Ccdh, g: &Ccdh, eps: f64, delta: f64) -> bool {
    for d in 1..=f.d_max() {
        let fd = f.get(d);
        let lo = (((1.0 - eps) * d as f64).ceil()).max(1.0) as u64;
        let hi = ((1.0 + eps) * d as f64).floor() as u64;
        let mut matched = false;
        for cand in lo..=hi {
            if (fd - g.get(cand)).abs() <= delta * fd {
                matched = true;
                break;
            }
        }
        if !matched {
            return false;
        }
    }
    true
}

/// Symmetric closeness at equal degree and value slack.
pub fn oracle_close(f: &Ccdh, g: &Ccdh, slack: f64) -> bool {
    oracle_directed_close(f, g, slack, slack) && oracle_directed_close(g, f, slack, slack)
}

/// Exhaustive breakpoint-scan oracle for the relative-Hausdorff distance.
///
/// Feasibility of a slack value only changes where the candidate interval
/// gains an integer (`|1 - d'/d|`) or where a value gap becomes affordable
/// (`|F(d) - G(d')| / F(d)`), so the infimum is one of those finitely many
/// breakpoints. The predicate is monotone in the slack, so a binary search
/// over the sorted breakpoints finds the smallest feasible one. Each probe
/// is nudged up by a hair so that float dust on an exactly-attained closed
/// bound cannot hide the hit; the nudge is orders of magnitude below the
/// 1e-4 comparison tolerance.
pub fn rh_breakpoint_oracle(f: &Ccdh, g: &Ccdh) -> f64 {
    let d_top = f.d_max().max(g.d_max());
    let cand_top = 2 * d_top + 2;
    let mut bps: Vec<f64> = vec![0.0];
    for d in 1..=d_top {
        for cand in 1..=cand_top {
            bps.push((1.0 - cand as f64 / d as f64).abs());
        }
    }
    for (a, b) in [(f, g), (g, f)] {
        for d in 1..=a.d_max() {
            let ad = a.get(d);
            if ad <= 0.0 {
                continue;
            }
            for cand in 1..=cand_top {
                bps.push((ad - b.get(cand)).abs() / ad);
            }
        }
    }
    bps.sort_by(f64::total_cmp);
    bps.dedup();
    let feasible = |slack: f64| oracle_close(f, g, slack * (1.0 + 1e-12) + 1e-15);
    assert!(
        feasible(*bps.last().expect("breakpoint list is never empty")),
        "slack beyond both supports must always be feasible"
    );
    let mut lo = 0usize; // unknown
    let mut hi = bps.len() - 1; // known feasible
    if feasible(bps[0]) {
        return bps[0];
    }
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if feasible(bps[mid]) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    bps[hi]
}

/// A random ccdh with `d_max ≤ 30` and integer values in `[1, 50]`; half
/// the draws are sorted into a genuine non-increasing ccdh, the rest stay
/// jagged the way unclamped estimates are.
pub fn random_ccdh(rng: &mut ChaCha8Rng) -> Ccdh {
    let d_max = rng.gen_range(1..=30usize);
    let mut values: Vec<f64> = (0..d_max).map(|_| rng.gen_range(1..=50u32) as f64).collect();
    if rng.gen_bool(0.5) {
        values.sort_by(|a, b| b.total_cmp(a));
    }
    Ccdh::from_values(values).expect("positive values form a valid ccdh")
}
