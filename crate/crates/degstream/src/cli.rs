//! Command-line interface.
//!
//! Subcommands mirror the library: `headtail run`/`headtail sweep` for
//! the sketch, `rh compare` and `profile` for curve comparison,
//! `baseline run`/`baseline hybrid` for the competition, `stream
//! gen`/`stream reorder` for inputs, `ordering-study` for replay
//! robustness, and `step-plot` for the step-approximation curve.
//!
//! Data outputs are TSV (stdout by default where a single table is the
//! product); summaries go to stderr via logging; `--json-report` writes
//! a machine-readable summary of any subcommand. Exit codes: 0 success,
//! 1 usage or parameter errors, 2 I/O or parse errors.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::baselines::{self, HeavyHitterSummary, HhKind};
use crate::harness::{
    self, HarnessConfig, OrderingStudy, SweepSpec,
};
use crate::histogram::Ccdh;
use crate::rh;
use crate::sketch::{EstimateConfig, HeadTailSketch};
use crate::stream::{self, EdgeStream, StreamOrder, SyntheticSpec};
use crate::tgmath::{self, LossRounding, TruncGeomParams};
use crate::{Error, Result};

#[derive(Parser, Debug)]
#[command(
    name = "degstream",
    version,
    about = "Estimate a graph's complementary cumulative degree histogram from an edge stream",
    propagate_version = true
)]
struct Cli {
    /// Base RNG seed for anything randomized.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Only log errors.
    #[arg(long, global = true)]
    quiet: bool,
    /// Write a JSON summary of the subcommand's outcome here.
    #[arg(long, global = true, value_name = "PATH")]
    json_report: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// The head/tail sketch.
    Headtail {
        #[command(subcommand)]
        cmd: HeadtailCmd,
    },
    /// Relative Hausdorff distance between two ccdh tables.
    Rh {
        #[command(subcommand)]
        cmd: RhCmd,
    },
    /// Heavy-hitter and head-only competitors.
    Baseline {
        #[command(subcommand)]
        cmd: BaselineCmd,
    },
    /// Edge-stream generation and reordering.
    Stream {
        #[command(subcommand)]
        cmd: StreamCmd,
    },
    /// Per-degree δ profile of an estimate against a reference.
    Profile(ProfileArgs),
    /// RH spread of one sketch across six stream orderings.
    OrderingStudy(OrderingArgs),
    /// Plot data for the step-shaped counter-coefficient approximation.
    StepPlot(StepPlotArgs),
}

#[derive(Subcommand, Debug)]
enum HeadtailCmd {
    /// One single-pass run: read the stream once, emit the estimated ccdh.
    Run(RunArgs),
    /// Grid of runs with derived seeds, scored against the exact ccdh.
    Sweep(SweepArgs),
}

#[derive(Args, Debug)]
struct RunArgs {
    /// Head sampling probability in (0, 1].
    #[arg(long)]
    ph: f64,
    /// Tail coin probability in (0, 1].
    #[arg(long)]
    pt: f64,
    /// Minimum raw head mass to trust the head at a degree.
    #[arg(long, default_value_t = 50.0)]
    threshold_constant: f64,
    /// Clamp the estimate to a monotone curve (off by default).
    #[arg(long)]
    monotone_clamp: bool,
    /// Rounding of the tail counter correction.
    #[arg(long, value_enum, default_value_t = RoundingArg::Ceil)]
    loss_rounding: RoundingArg,
    /// Edge-list path, or '-' for standard input.
    #[arg(long)]
    input: String,
    /// Estimated ccdh TSV (stdout when omitted).
    #[arg(long)]
    output: Option<PathBuf>,
    /// JSON run report: threshold degree, sample sizes, wall time.
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum RoundingArg {
    Ceil,
    Floor,
}

impl From<RoundingArg> for LossRounding {
    fn from(r: RoundingArg) -> Self {
        match r {
            RoundingArg::Ceil => LossRounding::Ceil,
            RoundingArg::Floor => LossRounding::Floor,
        }
    }
}

#[derive(Args, Debug)]
struct SweepArgs {
    /// Head probabilities, comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    ph_grid: Vec<f64>,
    /// Tail probabilities, comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    pt_grid: Vec<f64>,
    /// Runs per grid cell.
    #[arg(long, default_value_t = 5)]
    runs: u32,
    #[arg(long, default_value_t = 50.0)]
    threshold_constant: f64,
    /// Edge-list path (the sweep needs a replayable file).
    #[arg(long)]
    input: PathBuf,
    /// All run records as CSV.
    #[arg(long)]
    records: Option<PathBuf>,
    /// (storage, RH) scatter TSV.
    #[arg(long)]
    scatter: Option<PathBuf>,
    /// Per-cell median TSV, one line per (ph, pt).
    #[arg(long)]
    lines: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum RhCmd {
    /// RH distance (and optionally KS) between two ccdh TSV files.
    Compare(CompareArgs),
}

#[derive(Args, Debug)]
struct CompareArgs {
    /// First ccdh table.
    #[arg(long)]
    a: PathBuf,
    /// Second ccdh table.
    #[arg(long)]
    b: PathBuf,
    /// Binary-search bracket width.
    #[arg(long, default_value_t = 1e-4)]
    tolerance: f64,
    /// Also compute the KS statistic.
    #[arg(long)]
    ks: bool,
    /// Emit the per-degree δ profile at this ε.
    #[arg(long)]
    profile_eps: Option<f64>,
    /// Where the profile TSV goes (required with --profile-eps).
    #[arg(long)]
    profile_out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum BaselineCmd {
    /// Run one baseline estimator over a stream and emit its ccdh.
    Run(BaselineRunArgs),
    /// Oracle-tuned splice of a head estimate and a heavy-hitter tail.
    Hybrid(HybridArgs),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum BaselineKind {
    /// Misra-Gries frequent-items counters.
    Frequent,
    /// Lossy counting with window width = capacity.
    Lossy,
    /// Space saving with min-counter recycling.
    Spacesaving,
    /// Uniform hash-sampled head with exact counters.
    Head,
}

#[derive(Args, Debug)]
struct BaselineRunArgs {
    #[arg(long, value_enum)]
    kind: BaselineKind,
    /// Counter budget for the heavy-hitter kinds.
    #[arg(long)]
    capacity: Option<usize>,
    /// Sampling probability for the head kind.
    #[arg(long)]
    ph: Option<f64>,
    /// Edge-list path, or '-' for standard input.
    #[arg(long)]
    input: String,
    /// Output ccdh TSV (stdout when omitted).
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct HybridArgs {
    /// Head-estimate ccdh TSV.
    #[arg(long)]
    head: PathBuf,
    /// Heavy-hitter tail ccdh TSV.
    #[arg(long)]
    tail: PathBuf,
    /// Exact ccdh TSV the splice is tuned against.
    #[arg(long)]
    truth: PathBuf,
    #[arg(long, default_value_t = 1e-4)]
    tolerance: f64,
    /// Spliced ccdh TSV (stdout when omitted).
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum StreamCmd {
    /// Generate a synthetic edge list.
    Gen(GenArgs),
    /// Rewrite an edge list in a different replay order.
    Reorder(ReorderArgs),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum FamilyArg {
    Clique,
    Star,
    Matching,
    ChungLu,
}

#[derive(Args, Debug)]
struct GenArgs {
    #[arg(long, value_enum)]
    family: FamilyArg,
    /// Vertex count (clique, chung-lu).
    #[arg(long)]
    n: Option<u64>,
    /// Edge count (star, matching).
    #[arg(long)]
    edges: Option<u64>,
    /// Power-law exponent (chung-lu).
    #[arg(long)]
    exponent: Option<f64>,
    /// Target average degree (chung-lu).
    #[arg(long)]
    avg_degree: Option<f64>,
    /// Output edge-list path.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum OrderArg {
    Asis,
    Random,
    DegDesc,
    DegAsc,
    NodeRandom,
}

#[derive(Args, Debug)]
struct ReorderArgs {
    #[arg(long, value_enum)]
    order: OrderArg,
    /// Input edge-list path.
    #[arg(long)]
    input: PathBuf,
    /// Output edge-list path.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct ProfileArgs {
    /// Estimated ccdh TSV.
    #[arg(long)]
    estimate: PathBuf,
    /// Reference ccdh TSV.
    #[arg(long)]
    truth: PathBuf,
    /// Degree slack ε for the profile.
    #[arg(long, default_value_t = 0.1)]
    eps: f64,
    /// Profile TSV (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct OrderingArgs {
    #[arg(long)]
    ph: f64,
    #[arg(long)]
    pt: f64,
    #[arg(long, default_value_t = 50.0)]
    threshold_constant: f64,
    /// Edge-list path (replayed six ways; needs a file).
    #[arg(long)]
    input: PathBuf,
    /// Study TSV (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct StepPlotArgs {
    /// Step position parameter (the transition sits near x = k).
    #[arg(long)]
    k: f64,
    /// Tail probability; adds a column with the exact counter cdf at
    /// the integer degrees x/pt.
    #[arg(long)]
    pt: Option<f64>,
    /// Grid start (default: the transition point, where the curve is 0).
    #[arg(long)]
    x_min: Option<f64>,
    /// Grid end (default: transition point + 8).
    #[arg(long)]
    x_max: Option<f64>,
    /// Grid size.
    #[arg(long, default_value_t = 1000)]
    points: usize,
    /// Plot TSV (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Parse arguments, run, and translate the outcome to an exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp
                | ErrorKind::DisplayVersion
                | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => 0,
                _ => 1,
            };
            let _ = e.print();
            return code;
        }
    };
    let filter = if cli.quiet { "error" } else { "info" };
    let _ = env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(filter))
        .format_timestamp(None)
        .try_init();
    match execute(&cli) {
        Ok(()) => 0,
        Err(e) => {
            log::error!("{e}");
            e.exit_code()
        }
    }
}

fn write_json(path: &Path, value: &serde_json::Value) -> Result<()> {
    let text = serde_json::to_string_pretty(value).expect("json values serialize");
    std::fs::write(path, text + "\n").map_err(|e| Error::io(path, e))
}

fn finish(cli: &Cli, summary: serde_json::Value) -> Result<()> {
    if let Some(path) = &cli.json_report {
        write_json(path, &summary)?;
    }
    Ok(())
}

/// Write a ccdh to a path, or stdout when no path was given.
fn emit_ccdh(ccdh: &Ccdh, output: Option<&Path>) -> Result<()> {
    match output {
        Some(path) => ccdh.write_tsv_path(path),
        None => {
            let stdout = std::io::stdout();
            ccdh.write_tsv(stdout.lock())
                .map_err(|e| Error::io(Path::new("<stdout>"), e))
        }
    }
}

fn emit_table<F>(out: Option<&Path>, write: F) -> Result<()>
where
    F: Fn(&mut dyn Write) -> std::io::Result<()>,
{
    match out {
        Some(path) => {
            let file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
            let mut buf = std::io::BufWriter::new(file);
            write(&mut buf)
                .and_then(|()| buf.flush())
                .map_err(|e| Error::io(path, e))
        }
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            write(&mut lock).map_err(|e| Error::io(Path::new("<stdout>"), e))
        }
    }
}

/// Feed every edge of `input` ('-' for stdin) to `f`, single pass.
fn for_each_input_edge<F: FnMut(&str, &str)>(input: &str, f: F) -> Result<()> {
    if input == "-" {
        let stdin = std::io::stdin();
        stream::for_each_edge_in_reader(stdin.lock(), Path::new("<stdin>"), f)
    } else {
        EdgeStream::from_path(input).for_each_edge(f)
    }
}

fn execute(cli: &Cli) -> Result<()> {
    match &cli.command {
        Command::Headtail { cmd } => match cmd {
            HeadtailCmd::Run(args) => headtail_run(cli, args),
            HeadtailCmd::Sweep(args) => headtail_sweep(cli, args),
        },
        Command::Rh { cmd } => match cmd {
            RhCmd::Compare(args) => rh_compare(cli, args),
        },
        Command::Baseline { cmd } => match cmd {
            BaselineCmd::Run(args) => baseline_run(cli, args),
            BaselineCmd::Hybrid(args) => baseline_hybrid(cli, args),
        },
        Command::Stream { cmd } => match cmd {
            StreamCmd::Gen(args) => stream_gen(cli, args),
            StreamCmd::Reorder(args) => stream_reorder(cli, args),
        },
        Command::Profile(args) => profile(cli, args),
        Command::OrderingStudy(args) => ordering_study(cli, args),
        Command::StepPlot(args) => step_plot(cli, args),
    }
}

fn headtail_run(cli: &Cli, args: &RunArgs) -> Result<()> {
    let start = std::time::Instant::now();
    let mut sketch = HeadTailSketch::new(args.ph, args.pt, cli.seed)?;
    for_each_input_edge(&args.input, |u, v| sketch.update(u, v))?;
    let config = EstimateConfig {
        threshold_constant: args.threshold_constant,
        monotone_clamp: args.monotone_clamp,
        loss_rounding: args.loss_rounding.into(),
    };
    let result = sketch.estimate(&config)?;
    let wall_time_ms = start.elapsed().as_millis() as u64;
    let (head_size, tail_size) = sketch.storage();
    emit_ccdh(&result.estimate, args.output.as_deref())?;
    let report = json!({
        "d_thr": result.threshold_degree,
        "head_size": head_size,
        "tail_size": tail_size,
        "wall_time_ms": wall_time_ms,
    });
    if let Some(path) = &args.report {
        write_json(path, &report)?;
    }
    log::info!(
        "estimated {} degrees from {} endpoint occurrences (head {head_size}, tail {tail_size}, d_thr {})",
        result.estimate.d_max(),
        sketch.endpoints_seen(),
        result.threshold_degree
    );
    finish(cli, report)
}

fn headtail_sweep(cli: &Cli, args: &SweepArgs) -> Result<()> {
    let spec = SweepSpec {
        ph_grid: args.ph_grid.clone(),
        pt_grid: args.pt_grid.clone(),
        runs_per_cell: args.runs,
        seed_base: cli.seed,
    };
    let config = HarnessConfig {
        estimate: EstimateConfig {
            threshold_constant: args.threshold_constant,
            ..EstimateConfig::default()
        },
        ..HarnessConfig::default()
    };
    let stream = EdgeStream::from_path(&args.input).materialize()?;
    let records = harness::sweep(&stream, &spec, &config)?;
    if let Some(path) = &args.records {
        harness::write_records_csv_path(&records, path)?;
    }
    if let Some(path) = &args.scatter {
        harness::write_scatter_tsv_path(&records, path)?;
    }
    if let Some(path) = &args.lines {
        harness::write_lines_tsv_path(&records, path)?;
    }
    if args.records.is_none() && args.scatter.is_none() && args.lines.is_none() {
        emit_table(None, |out| harness::write_records_csv(&records, out))?;
    }
    log::info!(
        "swept {} cells x {} runs over {} edges",
        spec.ph_grid.len() * spec.pt_grid.len(),
        spec.runs_per_cell,
        stream.edge_count().unwrap_or(0)
    );
    finish(
        cli,
        json!({
            "runs": records.len(),
            "records": args.records,
            "scatter": args.scatter,
            "lines": args.lines,
        }),
    )
}

fn rh_compare(cli: &Cli, args: &CompareArgs) -> Result<()> {
    let a = Ccdh::read_tsv_path(&args.a)?;
    let b = Ccdh::read_tsv_path(&args.b)?;
    let report = rh::rh_distance(&a, &b, args.tolerance)?;
    let ks = if args.ks {
        Some(rh::ks_statistic(&a, &b)?)
    } else {
        None
    };
    let profile_path = match (args.profile_eps, &args.profile_out) {
        (Some(eps), Some(path)) => {
            let profile = rh::delta_profile(&a, &b, eps)?;
            harness::write_profile_tsv_path(&profile, path)?;
            Some(path.clone())
        }
        (Some(_), None) => {
            return Err(Error::invalid(
                "profile_out",
                "--profile-eps needs --profile-out for the table",
            ))
        }
        _ => None,
    };
    println!("rh_distance\t{}", report.distance);
    if let Some(ks) = ks {
        println!("ks\t{ks}");
    }
    finish(
        cli,
        json!({
            "distance": report.distance,
            "tolerance": report.tolerance,
            "ks": ks,
            "profile_path": profile_path,
        }),
    )
}

fn baseline_run(cli: &Cli, args: &BaselineRunArgs) -> Result<()> {
    match args.kind {
        BaselineKind::Head => {
            let ph = args.ph.ok_or_else(|| {
                Error::invalid("ph", "the head baseline needs --ph")
            })?;
            let mut sampler = baselines::HeadSampler::new(ph, cli.seed)?;
            for_each_input_edge(&args.input, |u, v| {
                sampler.update(u);
                sampler.update(v);
            })?;
            let ccdh = sampler.estimate()?;
            emit_ccdh(&ccdh, args.output.as_deref())?;
            finish(
                cli,
                json!({"kind": "head", "storage": sampler.storage(), "d_max": ccdh.d_max()}),
            )
        }
        kind => {
            let capacity = args.capacity.ok_or_else(|| {
                Error::invalid("capacity", "heavy-hitter baselines need --capacity")
            })?;
            let hh_kind = match kind {
                BaselineKind::Frequent => HhKind::Frequent,
                BaselineKind::Lossy => HhKind::LossyCounting,
                BaselineKind::Spacesaving => HhKind::SpaceSaving,
                BaselineKind::Head => unreachable!("handled above"),
            };
            let mut summary = HeavyHitterSummary::new(hh_kind, capacity)?;
            for_each_input_edge(&args.input, |u, v| {
                summary.update(u);
                summary.update(v);
            })?;
            let ccdh = baselines::hh_to_tail_ccdh(&summary)?;
            emit_ccdh(&ccdh, args.output.as_deref())?;
            finish(
                cli,
                json!({
                    "kind": format!("{hh_kind:?}"),
                    "capacity": capacity,
                    "storage": summary.storage(),
                    "items": summary.items_processed(),
                }),
            )
        }
    }
}

fn baseline_hybrid(cli: &Cli, args: &HybridArgs) -> Result<()> {
    let head = Ccdh::read_tsv_path(&args.head)?;
    let tail = Ccdh::read_tsv_path(&args.tail)?;
    let truth = Ccdh::read_tsv_path(&args.truth)?;
    let hybrid = baselines::hybrid_estimate(&head, &tail, &truth, args.tolerance, 0, 0)?;
    emit_ccdh(&hybrid.nhat, args.output.as_deref())?;
    log::info!(
        "hybrid splice at d_thr {} scored rh {}",
        hybrid.d_thr,
        hybrid.rh_distance
    );
    finish(
        cli,
        json!({"d_thr": hybrid.d_thr, "rh_distance": hybrid.rh_distance}),
    )
}

fn stream_gen(cli: &Cli, args: &GenArgs) -> Result<()> {
    let need = |name: &'static str, v: Option<u64>| {
        v.ok_or_else(|| Error::invalid(name, format!("required for {:?}", args.family)))
    };
    let spec = match args.family {
        FamilyArg::Clique => SyntheticSpec::Clique {
            n: need("n", args.n)?,
        },
        FamilyArg::Star => SyntheticSpec::Star {
            edges: need("edges", args.edges)?,
        },
        FamilyArg::Matching => SyntheticSpec::Matching {
            edges: need("edges", args.edges)?,
        },
        FamilyArg::ChungLu => SyntheticSpec::ChungLu {
            n: need("n", args.n)?,
            exponent: args.exponent.ok_or_else(|| {
                Error::invalid("exponent", "required for chung-lu")
            })?,
            avg_degree: args.avg_degree.ok_or_else(|| {
                Error::invalid("avg_degree", "required for chung-lu")
            })?,
            seed: cli.seed,
        },
    };
    let stream = stream::generate(&spec)?;
    stream.write_edgelist(&args.out)?;
    let edges = stream.edge_count().unwrap_or(0);
    log::info!("wrote {} edges to {}", edges, args.out.display());
    finish(cli, json!({"edges": edges, "out": args.out}))
}

fn stream_reorder(cli: &Cli, args: &ReorderArgs) -> Result<()> {
    let order = match args.order {
        OrderArg::Asis => StreamOrder::AsIs,
        OrderArg::Random => StreamOrder::Shuffled { seed: cli.seed },
        OrderArg::DegDesc => StreamOrder::DegreeDescBlocks,
        OrderArg::DegAsc => StreamOrder::DegreeAscBlocks,
        OrderArg::NodeRandom => StreamOrder::ShuffledBlocks { seed: cli.seed },
    };
    let stream = EdgeStream::from_path(&args.input).reorder(&order)?;
    stream.write_edgelist(&args.out)?;
    finish(
        cli,
        json!({"edges": stream.edge_count().unwrap_or(0), "out": args.out}),
    )
}

fn profile(cli: &Cli, args: &ProfileArgs) -> Result<()> {
    let estimate = Ccdh::read_tsv_path(&args.estimate)?;
    let truth = Ccdh::read_tsv_path(&args.truth)?;
    let profile = rh::delta_profile(&estimate, &truth, args.eps)?;
    emit_table(args.out.as_deref(), |out| {
        harness::write_profile_tsv(&profile, out)
    })?;
    let peak = profile
        .iter()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .map(|(&d, &v)| (d, v));
    if let Some((d, v)) = peak {
        log::info!("profile peak delta {v} at degree {d}");
    }
    finish(
        cli,
        json!({
            "eps": args.eps,
            "degrees": profile.len(),
            "peak": peak.map(|(d, v)| json!({"degree": d, "delta": v})),
        }),
    )
}

fn ordering_study(cli: &Cli, args: &OrderingArgs) -> Result<()> {
    let config = HarnessConfig {
        estimate: EstimateConfig {
            threshold_constant: args.threshold_constant,
            ..EstimateConfig::default()
        },
        ..HarnessConfig::default()
    };
    let stream = EdgeStream::from_path(&args.input).materialize()?;
    let study: OrderingStudy =
        harness::ordering_study(&stream, args.ph, args.pt, cli.seed, cli.seed, &config)?;
    emit_table(args.out.as_deref(), |out| {
        harness::write_ordering_tsv(&study, out)
    })?;
    log::info!(
        "rh across orderings: mean {} std {}",
        study.mean_rh,
        study.std_rh
    );
    finish(cli, serde_json::to_value(&study).expect("study serializes"))
}

fn step_plot(cli: &Cli, args: &StepPlotArgs) -> Result<()> {
    if args.points < 2 {
        return Err(Error::invalid("points", "need at least two grid points"));
    }
    let transition = tgmath::step_transition_min(args.k);
    let x_min = args.x_min.unwrap_or(transition);
    let x_max = args.x_max.unwrap_or(transition + 8.0);
    if !(x_max > x_min) {
        return Err(Error::invalid(
            "x_max",
            format!("{x_max} must exceed x_min {x_min}"),
        ));
    }
    if let Some(pt) = args.pt {
        tgmath::check_probability("pt", pt)?;
    }
    let mut rows = Vec::with_capacity(args.points);
    for i in 0..args.points {
        let t = i as f64 / (args.points - 1) as f64;
        let x = x_min + t * (x_max - x_min);
        let approx = tgmath::step_cdf_approx(args.k, x)?;
        let exact = match args.pt {
            Some(pt) => Some(exact_counter_cdf(args.k, pt, x)?),
            None => None,
        };
        rows.push((x, approx, exact));
    }
    emit_table(args.out.as_deref(), |out| {
        if args.pt.is_some() {
            writeln!(out, "x\tapprox\texact")?;
        } else {
            writeln!(out, "x\tapprox")?;
        }
        for (x, approx, exact) in &rows {
            match exact {
                Some(e) => writeln!(out, "{x}\t{approx}\t{e}")?,
                None => writeln!(out, "{x}\t{approx}")?,
            }
        }
        Ok(())
    })?;
    finish(
        cli,
        json!({"k": args.k, "points": args.points, "x_min": x_min, "x_max": x_max}),
    )
}

/// The quantity the step curve approximates: the probability that a
/// tail counter of a degree-(k/pt) vertex reaches the corrected reading,
/// evaluated at the integer degree nearest x/pt.
fn exact_counter_cdf(k: f64, pt: f64, x: f64) -> Result<f64> {
    let d = (k / pt).round().max(1.0) as u64;
    let r = (x / pt).round().max(1.0) as u64;
    let red = tgmath::reduced_degree(pt, d)?;
    if r < red {
        return Ok(0.0);
    }
    let idx = r - red;
    if idx >= r {
        return Ok(1.0);
    }
    tgmath::tg_cdf(&TruncGeomParams::new(pt, r)?, idx)
}
