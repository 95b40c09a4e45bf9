//! Experiment harness: single runs, parameter sweeps, ordering studies,
//! and the plot-ready files the command-line tool emits.
//!
//! Ground truth is always computed in its own pass over the stream,
//! never sharing state with the sketch pass, so the sketch's storage
//! accounting stays honest. Sweep cells are independent; they may run
//! in parallel and are merged back in grid order, so output files are
//! reproducible for identical inputs, flags, and seeds (wall-clock
//! fields are the one exception — they measure, they are never compared).

use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;
use std::time::Instant;

use serde::Serialize;

use crate::exec;
use crate::hashing::derive_seed;
use crate::histogram::{dh_to_ccdh, exact_dh, Ccdh};
use crate::rh::{ks_statistic, rh_distance};
use crate::sketch::{EstimateConfig, EstimateResult, HeadTailSketch};
use crate::stream::{EdgeStream, StreamOrder};
use crate::tgmath::check_probability;
use crate::{Error, Result};

/// Settings shared by every harness entry point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HarnessConfig {
    pub estimate: EstimateConfig,
    /// Binary-search tolerance for RH distances in reports.
    pub rh_tolerance: f64,
}

impl Default for HarnessConfig {
    fn default() -> Self {
        HarnessConfig {
            estimate: EstimateConfig::default(),
            rh_tolerance: 1e-4,
        }
    }
}

/// One sketch run scored against ground truth.
#[derive(Debug, Clone, Serialize)]
pub struct RunRecord {
    pub ph: f64,
    pub pt: f64,
    pub seed: u64,
    /// Total labels retained, head plus tail, at stream end.
    pub storage: u64,
    pub rh_distance: f64,
    pub ks: f64,
    pub d_thr: u64,
    pub wall_time_ms: u64,
}

/// A run's record together with the estimate that produced it.
#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub record: RunRecord,
    pub result: EstimateResult,
}

/// Grid of sweep cells, each executed `runs_per_cell` times with
/// deterministically derived seeds.
#[derive(Debug, Clone)]
pub struct SweepSpec {
    pub ph_grid: Vec<f64>,
    pub pt_grid: Vec<f64>,
    pub runs_per_cell: u32,
    pub seed_base: u64,
}

impl SweepSpec {
    fn validate(&self) -> Result<()> {
        if self.ph_grid.is_empty() || self.pt_grid.is_empty() {
            return Err(Error::invalid("sweep grid", "both grids need at least one value"));
        }
        if self.runs_per_cell == 0 {
            return Err(Error::invalid("runs_per_cell", "at least one run per cell"));
        }
        for &p in self.ph_grid.iter().chain(&self.pt_grid) {
            check_probability("sweep probability", p)?;
        }
        Ok(())
    }
}

/// Run the sketch once against a precomputed truth. The timed section
/// covers the sketch pass and estimate only.
pub fn run_once_with_truth(
    stream: &EdgeStream,
    truth: &Ccdh,
    ph: f64,
    pt: f64,
    seed: u64,
    config: &HarnessConfig,
) -> Result<RunOutcome> {
    let start = Instant::now();
    let mut sketch = HeadTailSketch::new(ph, pt, seed)?;
    sketch.process_stream(stream)?;
    let result = sketch.estimate(&config.estimate)?;
    let wall_time_ms = start.elapsed().as_millis() as u64;
    let (head, tail) = sketch.storage();
    let rh = rh_distance(&result.estimate, truth, config.rh_tolerance)?.distance;
    let ks = ks_statistic(&result.estimate, truth)?;
    Ok(RunOutcome {
        record: RunRecord {
            ph,
            pt,
            seed,
            storage: (head + tail) as u64,
            rh_distance: rh,
            ks,
            d_thr: result.threshold_degree,
            wall_time_ms,
        },
        result,
    })
}

/// Run the sketch once, computing ground truth in a separate pass.
pub fn run_once(
    stream: &EdgeStream,
    ph: f64,
    pt: f64,
    seed: u64,
    config: &HarnessConfig,
) -> Result<RunOutcome> {
    let truth = dh_to_ccdh(&exact_dh(stream)?)?;
    run_once_with_truth(stream, &truth, ph, pt, seed, config)
}

/// Execute the full grid. Records come back ordered by
/// (ph index, pt index, run index); cell seeds are derived from
/// `seed_base` and the same triple, so reruns are reproducible and
/// parallel execution cannot change the output.
pub fn sweep(stream: &EdgeStream, spec: &SweepSpec, config: &HarnessConfig) -> Result<Vec<RunRecord>> {
    spec.validate()?;
    let truth = dh_to_ccdh(&exact_dh(stream)?)?;
    let mut cells = Vec::new();
    for (i, &ph) in spec.ph_grid.iter().enumerate() {
        for (j, &pt) in spec.pt_grid.iter().enumerate() {
            for r in 0..spec.runs_per_cell {
                cells.push((i as u64, j as u64, r as u64, ph, pt));
            }
        }
    }
    let outcomes = exec::map_collect(cells, |(i, j, r, ph, pt)| {
        let seed = derive_seed(spec.seed_base, &[i, j, r]);
        run_once_with_truth(stream, &truth, ph, pt, seed, config).map(|o| o.record)
    });
    outcomes.into_iter().collect()
}

fn median(mut values: Vec<f64>) -> f64 {
    assert!(!values.is_empty());
    values.sort_by(f64::total_cmp);
    let n = values.len();
    if n % 2 == 1 {
        values[n / 2]
    } else {
        0.5 * (values[n / 2 - 1] + values[n / 2])
    }
}

/// CSV of raw run records, one line per run.
pub fn write_records_csv<W: Write>(records: &[RunRecord], mut out: W) -> std::io::Result<()> {
    writeln!(out, "ph,pt,seed,storage,rh_distance,ks,d_thr,wall_time_ms")?;
    for r in records {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            r.ph, r.pt, r.seed, r.storage, r.rh_distance, r.ks, r.d_thr, r.wall_time_ms
        )?;
    }
    Ok(())
}

/// Scatter TSV: one (storage, RH) point per run.
pub fn write_scatter_tsv<W: Write>(records: &[RunRecord], mut out: W) -> std::io::Result<()> {
    writeln!(out, "storage\trh_distance")?;
    for r in records {
        writeln!(out, "{}\t{}", r.storage, r.rh_distance)?;
    }
    Ok(())
}

/// Per-cell medians, one line per (ph, pt): plotted with one line per
/// fixed ph, these show convergence as the tail rate grows.
pub fn write_lines_tsv<W: Write>(records: &[RunRecord], mut out: W) -> std::io::Result<()> {
    writeln!(out, "ph\tpt\tmedian_storage\tmedian_rh")?;
    let mut cells: BTreeMap<(u64, u64), Vec<&RunRecord>> = BTreeMap::new();
    for r in records {
        cells
            .entry((r.ph.to_bits(), r.pt.to_bits()))
            .or_default()
            .push(r);
    }
    for rows in cells.values() {
        let storage = median(rows.iter().map(|r| r.storage as f64).collect());
        let rh = median(rows.iter().map(|r| r.rh_distance).collect());
        writeln!(out, "{}\t{}\t{}\t{}", rows[0].ph, rows[0].pt, storage, rh)?;
    }
    Ok(())
}

/// Per-degree δ profile TSV.
pub fn write_profile_tsv<W: Write>(profile: &BTreeMap<u64, f64>, mut out: W) -> std::io::Result<()> {
    writeln!(out, "degree\tdelta")?;
    for (d, delta) in profile {
        writeln!(out, "{d}\t{delta}")?;
    }
    Ok(())
}

fn write_with_path<F>(path: &Path, f: F) -> Result<()>
where
    F: FnOnce(&mut std::io::BufWriter<std::fs::File>) -> std::io::Result<()>,
{
    let file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
    let mut out = std::io::BufWriter::new(file);
    f(&mut out).and_then(|()| out.flush()).map_err(|e| Error::io(path, e))
}

pub fn write_records_csv_path(records: &[RunRecord], path: &Path) -> Result<()> {
    write_with_path(path, |out| write_records_csv(records, out))
}

pub fn write_scatter_tsv_path(records: &[RunRecord], path: &Path) -> Result<()> {
    write_with_path(path, |out| write_scatter_tsv(records, out))
}

pub fn write_lines_tsv_path(records: &[RunRecord], path: &Path) -> Result<()> {
    write_with_path(path, |out| write_lines_tsv(records, out))
}

pub fn write_profile_tsv_path(profile: &BTreeMap<u64, f64>, path: &Path) -> Result<()> {
    write_with_path(path, |out| write_profile_tsv(profile, out))
}

/// One ordering's scored run.
#[derive(Debug, Clone, Serialize)]
pub struct OrderingRow {
    pub name: String,
    #[serde(flatten)]
    pub record: RunRecord,
}

/// RH across stream orderings at a fixed sketch seed.
#[derive(Debug, Clone, Serialize)]
pub struct OrderingStudy {
    pub rows: Vec<OrderingRow>,
    pub mean_rh: f64,
    /// Sample standard deviation across the orderings.
    pub std_rh: f64,
}

/// The six replay regimes: three independent edge shuffles, both
/// degree-sorted node-block orders, and a random node-block order.
fn study_orders(seed_base: u64) -> Vec<(String, StreamOrder)> {
    vec![
        ("random1".into(), StreamOrder::Shuffled { seed: derive_seed(seed_base, &[1]) }),
        ("random2".into(), StreamOrder::Shuffled { seed: derive_seed(seed_base, &[2]) }),
        ("random3".into(), StreamOrder::Shuffled { seed: derive_seed(seed_base, &[3]) }),
        ("degree-desc".into(), StreamOrder::DegreeDescBlocks),
        ("degree-asc".into(), StreamOrder::DegreeAscBlocks),
        (
            "node-random".into(),
            StreamOrder::ShuffledBlocks { seed: derive_seed(seed_base, &[4]) },
        ),
    ]
}

/// Replay the same stream through the six orderings with one fixed
/// sketch seed, so any spread in RH is the ordering's doing alone.
pub fn ordering_study(
    stream: &EdgeStream,
    ph: f64,
    pt: f64,
    sketch_seed: u64,
    order_seed_base: u64,
    config: &HarnessConfig,
) -> Result<OrderingStudy> {
    let truth = dh_to_ccdh(&exact_dh(stream)?)?;
    let outcomes = exec::map_collect(study_orders(order_seed_base), |(name, order)| {
        let reordered = stream.reorder(&order)?;
        let outcome = run_once_with_truth(&reordered, &truth, ph, pt, sketch_seed, config)?;
        Ok::<_, Error>(OrderingRow {
            name,
            record: outcome.record,
        })
    });
    let rows = outcomes.into_iter().collect::<Result<Vec<_>>>()?;
    let n = rows.len() as f64;
    let mean_rh = rows.iter().map(|r| r.record.rh_distance).sum::<f64>() / n;
    let var = rows
        .iter()
        .map(|r| (r.record.rh_distance - mean_rh).powi(2))
        .sum::<f64>()
        / (n - 1.0);
    Ok(OrderingStudy {
        rows,
        mean_rh,
        std_rh: var.sqrt(),
    })
}

/// TSV of an ordering study: per-ordering rows, then summary lines.
pub fn write_ordering_tsv<W: Write>(study: &OrderingStudy, mut out: W) -> std::io::Result<()> {
    writeln!(out, "ordering\tstorage\trh_distance\tks\td_thr")?;
    for row in &study.rows {
        let r = &row.record;
        writeln!(
            out,
            "{}\t{}\t{}\t{}\t{}",
            row.name, r.storage, r.rh_distance, r.ks, r.d_thr
        )?;
    }
    writeln!(out, "# mean_rh\t{}", study.mean_rh)?;
    writeln!(out, "# std_rh\t{}", study.std_rh)?;
    Ok(())
}

pub fn write_ordering_tsv_path(study: &OrderingStudy, path: &Path) -> Result<()> {
    write_with_path(path, |out| write_ordering_tsv(study, out))
}
