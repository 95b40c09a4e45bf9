//! Relative Hausdorff (RH) distance between ccdhs.
//!
//! Two curves are `(ε, δ)`-close when every point of each can be matched
//! by some point of the other at an integer degree within relative slack
//! `ε` and value within relative slack `δ`. The RH distance is the
//! smallest `ε` for which the curves are `(ε, ε)`-close. Unlike the KS
//! statistic — which normalizes away total mass and concentrates on the
//! body of a skewed distribution — RH distance holds every degree,
//! including the sparse tail, to the same relative standard.
//!
//! Conventions (they matter at the edges):
//!
//! * Matching degrees `d'` are integers at least 1 in the closed interval
//!   `[(1-ε)d, (1+ε)d]`; no interpolation between degrees.
//! * The per-point test quantifies `d` over `[1, d_max]` of the source
//!   curve only — beyond its support a ccdh is zero and would force
//!   degenerate exact matches.
//! * Values beyond the *target's* support read as zero and are legal
//!   match candidates; matching a positive source value against such a
//!   zero needs `δ ≥ 1`.
//! * Real-valued (estimated) curves are compared as-is, without rounding.

use std::collections::BTreeMap;

use crate::exec;
use crate::histogram::Ccdh;
use crate::{Error, Result};

/// Validated slack pair for the closeness predicate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClosenessParams {
    pub epsilon: f64,
    pub delta: f64,
}

impl ClosenessParams {
    /// Both slacks must be finite and non-negative; there is no upper
    /// bound (the distance can exceed 1).
    pub fn new(epsilon: f64, delta: f64) -> Result<Self> {
        for (name, v) in [("epsilon", epsilon), ("delta", delta)] {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::invalid(
                    name,
                    format!("{v} must be finite and non-negative"),
                ));
            }
        }
        Ok(ClosenessParams { epsilon, delta })
    }
}

/// Result of [`rh_distance`].
#[derive(Debug, Clone, PartialEq)]
pub struct RhReport {
    /// Smallest ε with `(ε, ε)`-closeness, bracketed to `tolerance`:
    /// the curves are close at `distance` and not close at any value
    /// below `distance - tolerance`.
    pub distance: f64,
    pub tolerance: f64,
    /// Per-degree minimal δ at a fixed ε, attached on request via
    /// [`RhReport::attach_profile`]; [`rh_distance`] leaves it empty.
    pub delta_profile: Option<BTreeMap<u64, f64>>,
}

impl RhReport {
    /// Compute and attach the per-degree δ profile at slack `eps`.
    pub fn attach_profile(mut self, f: &Ccdh, g: &Ccdh, eps: f64) -> Result<Self> {
        self.delta_profile = Some(delta_profile(f, g, eps)?);
        Ok(self)
    }
}

fn check_nontrivial(f: &Ccdh, g: &Ccdh) -> Result<()> {
    if f.is_trivial() || g.is_trivial() {
        return Err(Error::TrivialCcdh);
    }
    Ok(())
}

/// Integer candidate window for degree `d` at slack `eps`: the degrees
/// in `[(1-eps)d, (1+eps)d]`, clipped to a floor of 1. For `eps >= 0`
/// and `d >= 1` the window always contains `d` itself.
fn window(d: u64, eps: f64) -> (u64, u64) {
    let df = d as f64;
    let lo = ((1.0 - eps) * df).ceil().max(1.0) as u64;
    let hi = ((1.0 + eps) * df).floor() as u64;
    (lo, hi)
}

/// Reference window minimum of the matching gap `|fd - g(c)|`: the plain
/// scan every fast path must agree with (see the equivalence tests).
fn scan_min_gap(g: &Ccdh, fd: f64, lo: u64, hi: u64) -> f64 {
    (lo..=hi)
        .map(|c| (fd - g.get(c)).abs())
        .fold(f64::INFINITY, f64::min)
}

/// Answers window minima of the matching gap `|fd - g(c)|` for one fixed
/// curve `g` in logarithmic time per non-increasing run of `g`.
///
/// Exact ccdhs never step up, estimated ones rarely do, so a curve is a
/// handful of non-increasing runs. Within a run the gap `fd - g(c)` only
/// grows with `c`; its magnitude is therefore V-shaped, and the run's
/// minimum sits where the sign flips, found by bisection. Rounding the
/// subtraction keeps order (it is a monotone map of the exact value), so
/// the result is bit-identical to the linear scan — a stretch so dense
/// in ascents that bisection would probe more points than the scan falls
/// back to the scan itself. Without this structure the scan degenerates
/// on the long flat plateaus of a skewed ccdh's tail, where a window
/// holds thousands of candidates sharing a handful of values.
struct GapOracle<'a> {
    curve: &'a Ccdh,
    /// Degrees whose value exceeds the previous degree's — the starts of
    /// the maximal non-increasing runs (other than degree 1), ascending.
    /// Reads beyond the support are 0 and never start a run.
    ascents: Vec<u64>,
}

impl<'a> GapOracle<'a> {
    fn new(g: &'a Ccdh) -> Self {
        let ascents = (2..=g.d_max()).filter(|&c| g.get(c) > g.get(c - 1)).collect();
        GapOracle { curve: g, ascents }
    }

    /// Gap minimum over one non-increasing run `[a, b]` of `g` (`b` may
    /// run past the support; values there read 0 and stay monotone).
    fn run_min_gap(&self, fd: f64, a: u64, b: u64) -> f64 {
        let gap = |c: u64| fd - self.curve.get(c);
        if gap(a) >= 0.0 {
            // The values only fall from here, so the gap only widens.
            return gap(a).abs();
        }
        if gap(b) < 0.0 {
            // Even the run's smallest value is still above fd.
            return gap(b).abs();
        }
        // gap(a) < 0 <= gap(b): bisect to the sign flip.
        let (mut neg, mut pos) = (a, b);
        while pos - neg > 1 {
            let mid = neg + (pos - neg) / 2;
            if gap(mid) >= 0.0 {
                pos = mid;
            } else {
                neg = mid;
            }
        }
        gap(neg).abs().min(gap(pos).abs())
    }

    /// Minimal `|fd - g(c)|` over integer `c` in `[lo, hi]`.
    fn min_gap(&self, fd: f64, lo: u64, hi: u64) -> f64 {
        debug_assert!(1 <= lo && lo <= hi);
        let from = self.ascents.partition_point(|&c| c <= lo);
        let to = self.ascents.partition_point(|&c| c <= hi);
        let starts = &self.ascents[from..to];
        if starts.len() as u64 >= (hi - lo) / 4 {
            return scan_min_gap(self.curve, fd, lo, hi);
        }
        let mut best = f64::INFINITY;
        let mut a = lo;
        for &start in starts {
            best = best.min(self.run_min_gap(fd, a, start - 1));
            a = start;
        }
        best.min(self.run_min_gap(fd, a, hi))
    }
}

/// Does some candidate for `d` match `f`'s value there within `delta`?
fn point_close(f: &Ccdh, g: &GapOracle<'_>, d: u64, eps: f64, delta: f64) -> bool {
    let fd = f.get(d);
    let budget = delta * fd;
    if (fd - g.curve.get(d)).abs() <= budget {
        return true; // curves that track each other match at d itself
    }
    let (lo, hi) = window(d, eps);
    g.min_gap(fd, lo, hi) <= budget
}

fn directed_close(f: &Ccdh, g: &GapOracle<'_>, eps: f64, delta: f64) -> bool {
    (1..=f.d_max()).all(|d| point_close(f, g, d, eps, delta))
}

/// Smallest δ at which some candidate matches `f`'s value at `d`.
fn directed_min_delta(f: &Ccdh, g: &GapOracle<'_>, d: u64, eps: f64) -> f64 {
    let fd = f.get(d);
    if fd == 0.0 {
        // No relative slack is defined against a zero value; the
        // candidate quotients are all infinite or indeterminate.
        return f64::INFINITY;
    }
    let (lo, hi) = window(d, eps);
    g.min_gap(fd, lo, hi) / fd
}

/// Are `f` and `g` `(eps, delta)`-close, in both directions?
pub fn is_close(f: &Ccdh, g: &Ccdh, eps: f64, delta: f64) -> Result<bool> {
    check_nontrivial(f, g)?;
    let p = ClosenessParams::new(eps, delta)?;
    let (fo, go) = (GapOracle::new(f), GapOracle::new(g));
    Ok(directed_close(f, &go, p.epsilon, p.delta) && directed_close(g, &fo, p.epsilon, p.delta))
}

/// RH distance: the smallest ε with `(ε, ε)`-closeness, found by
/// doubling for an upper bound and then bisecting to `tolerance`.
/// The returned distance is the certified-close end of the bracket.
pub fn rh_distance(f: &Ccdh, g: &Ccdh, tolerance: f64) -> Result<RhReport> {
    check_nontrivial(f, g)?;
    if !(tolerance > 0.0) || !tolerance.is_finite() {
        return Err(Error::invalid(
            "tolerance",
            format!("{tolerance} must be a finite positive value"),
        ));
    }
    let (fo, go) = (GapOracle::new(f), GapOracle::new(g));
    let close = |e: f64| directed_close(f, &go, e, e) && directed_close(g, &fo, e, e);
    if close(0.0) {
        return Ok(RhReport {
            distance: 0.0,
            tolerance,
            delta_profile: None,
        });
    }
    let mut hi = 1.0;
    // Always bounded: once ε reaches the larger d_max plus one, every
    // degree has an out-of-support zero candidate and δ = ε ≥ 1 accepts
    // it, so the doubling terminates.
    while !close(hi) {
        hi *= 2.0;
    }
    let mut lo = if hi == 1.0 { 0.0 } else { hi / 2.0 };
    while hi - lo > tolerance {
        let mid = 0.5 * (lo + hi);
        if close(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(RhReport {
        distance: hi,
        tolerance,
        delta_profile: None,
    })
}

/// Minimal δ making both directions of the closeness test hold at
/// degree `d` with slack `eps`. Degrees outside a curve's support do
/// not constrain that direction.
pub fn delta_at_degree(f: &Ccdh, g: &Ccdh, d: u64, eps: f64) -> Result<f64> {
    check_nontrivial(f, g)?;
    let p = ClosenessParams::new(eps, eps)?;
    if d == 0 {
        return Err(Error::invalid("d", "degree 0 is outside every ccdh"));
    }
    let (fo, go) = (GapOracle::new(f), GapOracle::new(g));
    let mut delta: f64 = 0.0;
    if d <= f.d_max() {
        delta = delta.max(directed_min_delta(f, &go, d, p.epsilon));
    }
    if d <= g.d_max() {
        delta = delta.max(directed_min_delta(g, &fo, d, p.epsilon));
    }
    Ok(delta)
}

/// Per-degree minimal δ at fixed `eps`, over the union of both curves'
/// supports. Its maximum is the minimal δ for `(eps, δ)`-closeness.
pub fn delta_profile(f: &Ccdh, g: &Ccdh, eps: f64) -> Result<BTreeMap<u64, f64>> {
    check_nontrivial(f, g)?;
    ClosenessParams::new(eps, eps)?;
    let d_max = f.d_max().max(g.d_max());
    let (fo, go) = (GapOracle::new(f), GapOracle::new(g));
    let deltas = exec::map_range(d_max as usize, |i| {
        let d = i as u64 + 1;
        let mut delta: f64 = 0.0;
        if d <= f.d_max() {
            delta = delta.max(directed_min_delta(f, &go, d, eps));
        }
        if d <= g.d_max() {
            delta = delta.max(directed_min_delta(g, &fo, d, eps));
        }
        delta
    });
    Ok(deltas
        .into_iter()
        .enumerate()
        .map(|(i, delta)| (i as u64 + 1, delta))
        .collect())
}

/// Kolmogorov-Smirnov statistic: normalize each curve by its total
/// `N(1)` and take the largest pointwise gap, reading zeros beyond
/// support.
pub fn ks_statistic(f: &Ccdh, g: &Ccdh) -> Result<f64> {
    check_nontrivial(f, g)?;
    let fe = f.total();
    let ge = g.total();
    let mut worst: f64 = 0.0;
    for d in 1..=f.d_max().max(g.d_max()) {
        worst = worst.max((f.get(d) / fe - g.get(d) / ge).abs());
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::histogram::{dh_to_ccdh, exact_dh};
    use crate::stream::{generate, SyntheticSpec};

    fn ccdh_of(spec: &SyntheticSpec) -> Ccdh {
        let stream = generate(spec).unwrap();
        dh_to_ccdh(&exact_dh(&stream).unwrap()).unwrap()
    }

    #[test]
    fn window_bounds_clip_and_contain_the_degree() {
        assert_eq!(window(10, 0.25), (8, 12));
        // Clipped at degree 1 on the low side.
        assert_eq!(window(2, 0.9), (1, 3));
        // eps = 0 leaves only the degree itself.
        assert_eq!(window(7, 0.0), (7, 7));
        // Slack past 1 still floors at degree 1, never below.
        assert_eq!(window(3, 2.0), (1, 9));
    }

    /// Random curve with plateaus, ascents, and internal zeros — the
    /// shapes estimates can take, which the gap oracle must handle.
    fn wobbly_curve(rng: &mut rand_chacha::ChaCha8Rng) -> Option<Ccdh> {
        use rand::Rng;
        let len = rng.gen_range(1..=48usize);
        let mut values = Vec::with_capacity(len);
        let mut v: f64 = (1.0 + 60.0 * rng.gen::<f64>()).round();
        for _ in 0..len {
            values.push(v);
            v = match rng.gen_range(0..10u32) {
                0..=3 => v,                                                // plateau
                4..=6 => (v * rng.gen_range(0.2..0.95)).floor().max(0.0), // drop
                7..=8 => v * rng.gen_range(1.02..1.6),                    // ascent
                _ => 0.0,                                                 // dip to zero
            };
        }
        let curve = Ccdh::from_values(values).unwrap();
        (!curve.is_trivial()).then_some(curve)
    }

    #[test]
    fn gap_oracle_matches_the_linear_scan_bit_for_bit() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x6A90);
        let mut checked = 0u32;
        for case in 0..300 {
            let Some(g) = wobbly_curve(&mut rng) else {
                continue;
            };
            let oracle = GapOracle::new(&g);
            for _ in 0..40 {
                let d = rng.gen_range(1..=g.d_max() + 3);
                let eps = [0.0, 0.02, 0.3, 0.8, 2.5][rng.gen_range(0..5usize)];
                let (lo, hi) = window(d, eps);
                // Values off the curve and values exactly on it, the
                // latter forcing zero gaps and boundary ties.
                let fd = if rng.gen_bool(0.5) {
                    g.get(rng.gen_range(1..=g.d_max()))
                } else {
                    70.0 * rng.gen::<f64>()
                };
                let fast = oracle.min_gap(fd, lo, hi);
                let slow = scan_min_gap(&g, fd, lo, hi);
                assert_eq!(
                    fast.to_bits(),
                    slow.to_bits(),
                    "case {case}: d = {d}, eps = {eps}, fd = {fd}"
                );
                checked += 1;
            }
        }
        assert!(checked > 5_000, "only {checked} comparisons ran");
    }

    #[test]
    fn closeness_primitives_match_their_reference_scan() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0xD1CE);
        for case in 0..120 {
            let (Some(f), Some(g)) = (wobbly_curve(&mut rng), wobbly_curve(&mut rng)) else {
                continue;
            };
            let go = GapOracle::new(&g);
            for d in 1..=f.d_max() {
                let fd = f.get(d);
                for &eps in &[0.0, 0.1, 0.6] {
                    let (lo, hi) = window(d, eps);
                    for &delta in &[0.0, 0.05, 0.4, 1.0] {
                        let reference =
                            (lo..=hi).any(|c| (fd - g.get(c)).abs() <= delta * fd);
                        assert_eq!(
                            point_close(&f, &go, d, eps, delta),
                            reference,
                            "case {case}: d = {d}, eps = {eps}, delta = {delta}"
                        );
                    }
                    let reference = (lo..=hi)
                        .map(|c| (fd - g.get(c)).abs() / fd)
                        .fold(f64::INFINITY, f64::min);
                    assert_eq!(
                        directed_min_delta(&f, &go, d, eps).to_bits(),
                        reference.to_bits(),
                        "case {case}: d = {d}, eps = {eps}"
                    );
                }
            }
        }
    }

    #[test]
    fn identity_is_at_distance_zero() {
        let f = ccdh_of(&SyntheticSpec::Clique { n: 40 });
        assert!(is_close(&f, &f, 0.0, 0.0).unwrap());
        let report = rh_distance(&f, &f, 1e-4).unwrap();
        assert_eq!(report.distance, 0.0);
    }

    #[test]
    fn trivial_inputs_are_an_error() {
        let f = ccdh_of(&SyntheticSpec::Clique { n: 5 });
        let empty = Ccdh::from_values(vec![0.0, 0.0]).unwrap();
        assert!(empty.is_trivial());
        assert!(is_close(&f, &empty, 0.5, 0.5).is_err());
        assert!(rh_distance(&empty, &f, 1e-4).is_err());
        assert!(ks_statistic(&f, &empty).is_err());
        assert!(delta_profile(&empty, &empty, 0.1).is_err());
    }

    #[test]
    fn slacks_must_be_non_negative() {
        let f = ccdh_of(&SyntheticSpec::Clique { n: 5 });
        assert!(is_close(&f, &f, -0.1, 0.0).is_err());
        assert!(is_close(&f, &f, 0.0, f64::NAN).is_err());
        assert!(rh_distance(&f, &f, 0.0).is_err());
    }

    #[test]
    fn neighboring_cliques_differ_by_one_part_in_ninety_nine() {
        let f = ccdh_of(&SyntheticSpec::Clique { n: 100 });
        let g = ccdh_of(&SyntheticSpec::Clique { n: 99 });
        assert!(is_close(&f, &g, 0.02, 0.02).unwrap());
        assert!(!is_close(&f, &g, 0.005, 0.005).unwrap());
        let report = rh_distance(&f, &g, 1e-4).unwrap();
        assert!(
            (report.distance - 1.0 / 99.0).abs() <= 1e-4,
            "got {}",
            report.distance
        );
        // Symmetry of the definition.
        let sym = rh_distance(&g, &f, 1e-4).unwrap();
        assert!((report.distance - sym.distance).abs() <= 2e-4);
    }

    #[test]
    fn neighboring_cliques_max_out_the_ks_statistic() {
        let f = ccdh_of(&SyntheticSpec::Clique { n: 100 });
        let g = ccdh_of(&SyntheticSpec::Clique { n: 99 });
        // Normalized curves are both 1 through degree 98; at 99 one is
        // 1 and the other 0.
        assert_eq!(ks_statistic(&f, &g).unwrap(), 1.0);
        assert_eq!(ks_statistic(&f, &f).unwrap(), 0.0);
    }

    #[test]
    fn star_and_matching_disagree_in_rh_but_not_ks() {
        let f = ccdh_of(&SyntheticSpec::Star { edges: 100 });
        let g = ccdh_of(&SyntheticSpec::Matching { edges: 100 });
        let ks = ks_statistic(&f, &g).unwrap();
        assert!(ks <= 2.0 / 100.0, "ks = {ks}");
        let rh = rh_distance(&f, &g, 1e-4).unwrap().distance;
        // The hub's tail point can only match out-of-support zeros,
        // which takes δ = 1.
        assert!((rh - 1.0).abs() <= 1e-4, "rh = {rh}");
    }

    #[test]
    fn support_gap_costs_exactly_the_degree_slack() {
        // F lives on degree 1 only; G extends to degree 2 with equal
        // mass. Matching G's point at 2 against F needs to reach down
        // to degree 1, i.e. ε = 0.5; values then agree exactly.
        let f = Ccdh::from_values(vec![5.0]).unwrap();
        let g = Ccdh::from_values(vec![5.0, 5.0]).unwrap();
        assert!(is_close(&f, &g, 0.5, 0.5).unwrap());
        assert!(!is_close(&f, &g, 0.45, 0.45).unwrap());
        let rh = rh_distance(&f, &g, 1e-4).unwrap().distance;
        assert!((rh - 0.5).abs() <= 1e-4, "rh = {rh}");
    }

    #[test]
    fn clique_profile_by_hand() {
        let f = ccdh_of(&SyntheticSpec::Clique { n: 100 });
        let g = ccdh_of(&SyntheticSpec::Clique { n: 99 });
        let profile = delta_profile(&f, &g, 0.1).unwrap();
        assert_eq!(profile.len(), 99);
        for d in 1..=98u64 {
            // Both directions live: 1/100 against F's value, 1/99
            // against G's; the worse direction wins.
            assert!((profile[&d] - 1.0 / 99.0).abs() < 1e-12, "at {d}");
        }
        // Degree 99 is beyond G's support: only the F direction
        // constrains, and d' = 98 matches at 1/100.
        assert!((profile[&99] - 0.01).abs() < 1e-12);
        // The profile maximum is the minimal δ at this ε.
        let max = profile.values().cloned().fold(0.0, f64::max);
        assert!(is_close(&f, &g, 0.1, max + 1e-12).unwrap());
        assert!(!is_close(&f, &g, 0.1, max - 1e-6).unwrap());
    }

    #[test]
    fn profile_of_identical_curves_is_zero() {
        let f = ccdh_of(&SyntheticSpec::Star { edges: 50 });
        let profile = delta_profile(&f, &f, 0.1).unwrap();
        assert!(profile.values().all(|&v| v == 0.0));
    }

    #[test]
    fn closeness_is_monotone_in_both_slacks() {
        let f = ccdh_of(&SyntheticSpec::Star { edges: 60 });
        let g = ccdh_of(&SyntheticSpec::ChungLu {
            n: 150,
            exponent: 2.5,
            avg_degree: 3.0,
            seed: 5,
        });
        let grid = [0.0, 0.05, 0.2, 0.5, 1.0, 2.0];
        for (i, &e) in grid.iter().enumerate() {
            for (j, &dl) in grid.iter().enumerate() {
                if is_close(&f, &g, e, dl).unwrap() {
                    for &e2 in &grid[i..] {
                        for &d2 in &grid[j..] {
                            assert!(
                                is_close(&f, &g, e2, d2).unwrap(),
                                "close at ({e},{dl}) but not ({e2},{d2})"
                            );
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn distance_bracket_is_certified() {
        let f = ccdh_of(&SyntheticSpec::ChungLu {
            n: 300,
            exponent: 2.3,
            avg_degree: 4.0,
            seed: 1,
        });
        let g = ccdh_of(&SyntheticSpec::ChungLu {
            n: 300,
            exponent: 2.8,
            avg_degree: 4.0,
            seed: 2,
        });
        let report = rh_distance(&f, &g, 1e-4).unwrap();
        let d = report.distance;
        assert!(is_close(&f, &g, d, d).unwrap());
        if d > report.tolerance {
            let below = d - report.tolerance;
            assert!(!is_close(&f, &g, below, below).unwrap());
        }
    }

    #[test]
    fn report_can_carry_a_profile() {
        let f = ccdh_of(&SyntheticSpec::Clique { n: 10 });
        let g = ccdh_of(&SyntheticSpec::Clique { n: 9 });
        let report = rh_distance(&f, &g, 1e-4)
            .unwrap()
            .attach_profile(&f, &g, 0.1)
            .unwrap();
        assert_eq!(report.delta_profile.as_ref().unwrap().len(), 9);
    }
}
