use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use hardcsp::dataset::{
    self, discretize, drop_redundant, select_for_mining, ClassifyMode, TransactionDb,
};
use hardcsp::deduce::{closure_with, pattern_report, DeduceOptions, DeductionCaps, PatternReport};
use hardcsp::generator::{
    generate_with, sweep_grid, FloatAxis, GenParams, IntAxis, TightnessConvention,
};
use hardcsp::miner::{mine_rules, read_rules, write_rules, MiningThresholds};
use hardcsp::model::CspInstance;
use hardcsp::numfmt::fmt_sig6;
use hardcsp::par::Parallelism;
use hardcsp::pipeline::{self, PipelineConfig};
use hardcsp::solver::{SolveLimits, Solver};
use hardcsp::Error;

#[derive(Parser)]
#[command(
    name = "hardcsp",
    version,
    about = "Random CSP hardness sweeps and rule mining"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Write one random instance in text form.
    Generate(GenerateArgs),
    /// Solve an instance file and print `status,backtracks,nodes,elapsed_s`.
    Solve(SolveArgs),
    /// Print the phase-1 sweep as CSV `n,d,e,nf,t,bif_share,seed`.
    SweepPlan(PipelineArgs),
    /// Run the coarse sweep and print the refined sweep as JSON.
    Phase1(PipelineArgs),
    /// Run the whole cascade.
    Pipeline(PipelineArgs),
    /// Mine association rules from transactions or an instance CSV.
    Mine(MineArgs),
    /// Close a rule set under the deduction axioms and report on a focal item.
    Deduce(DeduceArgs),
    /// Print the pattern report for a rule file.
    Report(ReportArgs),
    /// Continue an interrupted pipeline run.
    Resume(ResumeArgs),
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    d: usize,
    #[arg(long)]
    e: usize,
    #[arg(long, default_value_t = 0)]
    nf: usize,
    #[arg(long)]
    t: f64,
    #[arg(long, default_value_t = 0.0)]
    bif_share: f64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long)]
    tightness_means_forbidden: bool,
    /// Output file (stdout if absent).
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct SolveArgs {
    instance: PathBuf,
    #[arg(long)]
    time_budget: Option<f64>,
    #[arg(long)]
    backtrack_budget: Option<u64>,
    #[arg(long)]
    no_mac: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    WallClock,
    Backtracks,
}

/// Pipeline configuration: the JSON file (or the desk-scale defaults) with
/// any flags applied on top.
#[derive(Args)]
struct PipelineArgs {
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    output_dir: Option<PathBuf>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    d: Option<usize>,
    /// `start:end:step` or a single value.
    #[arg(long)]
    e: Option<String>,
    #[arg(long)]
    nf: Option<String>,
    #[arg(long)]
    t: Option<String>,
    #[arg(long)]
    seed: Option<String>,
    #[arg(long)]
    instances_per_point: Option<usize>,
    #[arg(long)]
    bif_share: Option<f64>,
    #[arg(long)]
    time_budget: Option<f64>,
    #[arg(long)]
    backtrack_budget: Option<u64>,
    #[arg(long, value_enum)]
    mode: Option<Mode>,
    #[arg(long)]
    easy_below: Option<f64>,
    #[arg(long)]
    hard_above: Option<f64>,
    #[arg(long)]
    easy_below_backtracks: Option<u64>,
    #[arg(long)]
    hard_above_backtracks: Option<u64>,
    #[arg(long)]
    bins: Option<usize>,
    #[arg(long)]
    min_support: Option<f64>,
    #[arg(long)]
    min_confidence: Option<f64>,
    #[arg(long)]
    min_lift: Option<f64>,
    #[arg(long)]
    max_rules: Option<usize>,
    /// `max_side_items,max_generations`
    #[arg(long)]
    caps: Option<String>,
    #[arg(long)]
    no_decomposition: bool,
    #[arg(long)]
    workers: Option<usize>,
    #[arg(long)]
    checkpoint_interval: Option<usize>,
    #[arg(long)]
    no_mac: bool,
    #[arg(long)]
    tightness_means_forbidden: bool,
    #[arg(long)]
    focal: Option<String>,
    #[arg(long)]
    refine_padding: Option<u64>,
}

#[derive(Args)]
struct MineArgs {
    #[arg(
        long,
        conflicts_with = "instances",
        required_unless_present = "instances"
    )]
    transactions: Option<PathBuf>,
    /// Instance CSV; Medium and Hard rows are discretized first.
    #[arg(long)]
    instances: Option<PathBuf>,
    #[arg(long, default_value_t = dataset::DEFAULT_BINS)]
    bins: usize,
    /// Where to write the transactions built from `--instances`.
    #[arg(long)]
    write_transactions: Option<PathBuf>,
    #[arg(long, default_value_t = 0.1)]
    min_support: f64,
    #[arg(long, default_value_t = 0.0)]
    min_confidence: f64,
    #[arg(long, default_value_t = 1.1)]
    min_lift: f64,
    #[arg(long)]
    max_rules: Option<usize>,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct DeduceArgs {
    #[arg(long)]
    rules: PathBuf,
    #[arg(long)]
    transactions: PathBuf,
    #[arg(long, default_value = "4,8")]
    caps: String,
    #[arg(long, default_value = "class=Hard")]
    focal: String,
    #[arg(long)]
    no_decomposition: bool,
    #[arg(short, long)]
    output: Option<PathBuf>,
    /// PatternReport JSON destination.
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Args)]
struct ReportArgs {
    #[arg(long)]
    rules: PathBuf,
    #[arg(long)]
    transactions: PathBuf,
    #[arg(long, default_value = "class=Hard")]
    focal: String,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct ResumeArgs {
    /// Defaults to `checkpoint.json` in the output directory.
    #[arg(long)]
    checkpoint: Option<PathBuf>,
    #[command(flatten)]
    pipeline: PipelineArgs,
}

enum Failure {
    Config(String),
    Stage(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_config_error() {
            Failure::Config(e.to_string())
        } else {
            Failure::Stage(e)
        }
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

fn config_err(msg: impl Into<String>) -> Failure {
    Failure::Config(msg.into())
}

fn parse_int_axis(s: &str) -> CliResult<IntAxis> {
    let bad = || config_err(format!("bad axis `{s}`, want start:end:step or a value"));
    let parts: Vec<u64> = s
        .split(':')
        .map(|p| p.trim().parse().map_err(|_| bad()))
        .collect::<CliResult<_>>()?;
    match parts[..] {
        [v] => Ok(IntAxis::single(v)),
        [a, b, c] => Ok(IntAxis::new(a, b, c)),
        _ => Err(bad()),
    }
}

fn parse_float_axis(s: &str) -> CliResult<FloatAxis> {
    let bad = || config_err(format!("bad axis `{s}`, want start:end:step or a value"));
    let parts: Vec<f64> = s
        .split(':')
        .map(|p| p.trim().parse().map_err(|_| bad()))
        .collect::<CliResult<_>>()?;
    match parts[..] {
        [v] => Ok(FloatAxis::single(v)),
        [a, b, c] => Ok(FloatAxis::new(a, b, c)),
        _ => Err(bad()),
    }
}

fn parse_caps(s: &str) -> CliResult<DeductionCaps> {
    let bad = || config_err(format!("bad caps `{s}`, want side,generations"));
    let (a, b) = s.split_once(',').ok_or_else(bad)?;
    let caps = DeductionCaps {
        max_side_items: a.trim().parse().map_err(|_| bad())?,
        max_generations: b.trim().parse().map_err(|_| bad())?,
    };
    caps.validate()?;
    Ok(caps)
}

impl PipelineArgs {
    fn build(&self) -> CliResult<PipelineConfig> {
        let mut c = match &self.config {
            Some(p) => PipelineConfig::load(p).map_err(|e| config_err(e.to_string()))?,
            None => PipelineConfig::desk_scale("hardcsp-out"),
        };
        let p1 = &mut c.phase1;
        if let Some(v) = self.n {
            p1.n = v;
        }
        if let Some(v) = self.d {
            p1.d = v;
        }
        if let Some(s) = &self.e {
            p1.e = parse_int_axis(s)?;
        }
        if let Some(s) = &self.nf {
            p1.nf = parse_int_axis(s)?;
        }
        if let Some(s) = &self.t {
            p1.t = parse_float_axis(s)?;
        }
        if let Some(s) = &self.seed {
            p1.seed = parse_int_axis(s)?;
        }
        if let Some(v) = self.instances_per_point {
            p1.instances_per_point = v;
        }
        if let Some(v) = self.bif_share {
            p1.bif_share = v;
        }
        if let Some(v) = &self.output_dir {
            c.output_dir = v.clone();
        }
        if let Some(v) = self.time_budget {
            c.limits.time_budget = Some(v);
        }
        if let Some(v) = self.backtrack_budget {
            c.limits.backtrack_budget = Some(v);
        }
        if let Some(m) = self.mode {
            c.thresholds.mode = match m {
                Mode::WallClock => ClassifyMode::WallClock,
                Mode::Backtracks => ClassifyMode::Backtracks,
            };
        }
        if let Some(v) = self.easy_below {
            c.thresholds.easy_below = v;
        }
        if let Some(v) = self.hard_above {
            c.thresholds.hard_above = v;
        }
        if let Some(v) = self.easy_below_backtracks {
            c.thresholds.easy_below_backtracks = v;
        }
        if let Some(v) = self.hard_above_backtracks {
            c.thresholds.hard_above_backtracks = v;
        }
        if let Some(v) = self.bins {
            c.bins = v;
        }
        if let Some(v) = self.min_support {
            c.mining.min_support = v;
        }
        if let Some(v) = self.min_confidence {
            c.mining.min_confidence = v;
        }
        if let Some(v) = self.min_lift {
            c.mining.min_lift = v;
        }
        if self.max_rules.is_some() {
            c.mining.max_rules = self.max_rules;
        }
        if let Some(s) = &self.caps {
            c.caps = parse_caps(s)?;
        }
        if self.no_decomposition {
            c.decomposition = false;
        }
        if let Some(v) = self.workers {
            c.workers = v;
        }
        if let Some(v) = self.checkpoint_interval {
            c.checkpoint_interval = v;
        }
        if self.no_mac {
            c.mac = false;
        }
        if self.tightness_means_forbidden {
            c.tightness_means_forbidden = true;
        }
        if let Some(v) = &self.focal {
            c.focal = v.clone();
        }
        if let Some(v) = self.refine_padding {
            c.refine_padding = v;
        }
        c.validate()?;
        Ok(c)
    }
}

fn out_writer(path: Option<&Path>) -> CliResult<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).map_err(|e| Error::io(p, e))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn io_err(e: io::Error) -> Failure {
    Failure::Stage(Error::io("<stdout>", e))
}

fn read_instance(path: &Path) -> CliResult<CspInstance> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    Ok(CspInstance::from_text(&text)?)
}

fn read_rule_file(
    path: &Path,
    db: &TransactionDb,
) -> CliResult<Vec<hardcsp::miner::AssociationRule>> {
    let f = File::open(path).map_err(|e| Error::io(path, e))?;
    Ok(read_rules(BufReader::new(f), db)?)
}

fn run(cmd: Cmd) -> CliResult<()> {
    match cmd {
        Cmd::Generate(a) => {
            let p = GenParams {
                n: a.n,
                d: a.d,
                e: a.e,
                nf: a.nf,
                t: a.t,
                bif_share: a.bif_share,
                seed: a.seed,
            };
            let conv = if a.tightness_means_forbidden {
                TightnessConvention::Forbidden
            } else {
                TightnessConvention::Allowed
            };
            let inst = generate_with(&p, conv)?;
            let mut w = out_writer(a.output.as_deref())?;
            w.write_all(inst.to_text().as_bytes()).map_err(io_err)?;
            w.flush().map_err(io_err)
        }
        Cmd::Solve(a) => {
            let inst = read_instance(&a.instance)?;
            let r = Solver::new(&inst)
                .limits(SolveLimits {
                    time_budget: a.time_budget,
                    backtrack_budget: a.backtrack_budget,
                })
                .mac(!a.no_mac)
                .solve();
            println!("{}", r.csv_row());
            Ok(())
        }
        Cmd::SweepPlan(a) => {
            let cfg = a.build()?;
            let grid = sweep_grid(&cfg.phase1)?;
            let mut w = out_writer(None)?;
            writeln!(w, "n,d,e,nf,t,bif_share,seed").map_err(io_err)?;
            for p in grid {
                writeln!(
                    w,
                    "{},{},{},{},{},{},{}",
                    p.n,
                    p.d,
                    p.e,
                    p.nf,
                    fmt_sig6(p.t),
                    fmt_sig6(p.bif_share),
                    p.seed
                )
                .map_err(io_err)?;
            }
            w.flush().map_err(io_err)
        }
        Cmd::Phase1(a) => {
            let cfg = a.build()?;
            let (records, refined) = pipeline::run_phase1(&cfg)?;
            eprintln!(
                "{} instances written to {}",
                records.len(),
                cfg.output_dir.join(pipeline::PHASE1_CSV).display()
            );
            match refined {
                Some(r) => println!("{}", serde_json::to_string_pretty(&r).map_err(Error::from)?),
                None => println!("null"),
            }
            Ok(())
        }
        Cmd::Pipeline(a) => {
            let cfg = a.build()?;
            let s = pipeline::run_pipeline(&cfg)?;
            print_summary(&s);
            Ok(())
        }
        Cmd::Resume(a) => {
            let cfg = a.pipeline.build()?;
            let cp = a
                .checkpoint
                .unwrap_or_else(|| cfg.output_dir.join(pipeline::CHECKPOINT));
            let s = pipeline::resume(&cp, &cfg)?;
            print_summary(&s);
            Ok(())
        }
        Cmd::Mine(a) => {
            let th = MiningThresholds {
                min_support: a.min_support,
                min_confidence: a.min_confidence,
                min_lift: a.min_lift,
                max_rules: a.max_rules,
            };
            th.validate()?;
            let db = match (&a.transactions, &a.instances) {
                (Some(t), _) => TransactionDb::read(t)?,
                (None, Some(i)) => {
                    let records = select_for_mining(&dataset::read_csv(i)?);
                    let (db, _) = discretize(&drop_redundant(&records), a.bins)?;
                    if let Some(p) = &a.write_transactions {
                        db.write(p)?;
                    }
                    db
                }
                (None, None) => unreachable!("clap requires one input"),
            };
            let rules = mine_rules(&db, &th)?;
            write_rules(&rules, &db, false, out_writer(a.output.as_deref())?)?;
            Ok(())
        }
        Cmd::Deduce(a) => {
            let caps = parse_caps(&a.caps)?;
            let db = TransactionDb::read(&a.transactions)?;
            let rules = read_rule_file(&a.rules, &db)?;
            let opts = DeduceOptions {
                caps,
                decomposition: !a.no_decomposition,
            };
            let closed = closure_with(&rules, &db, &opts, Parallelism::Parallel);
            write_rules(&closed, &db, true, out_writer(a.output.as_deref())?)?;
            let report = match pattern_report(&closed, &a.focal, &db) {
                Ok(r) => r,
                Err(Error::UnknownItem(item)) => {
                    eprintln!("focal item `{item}` appears in no rule; report is empty");
                    PatternReport::empty(&a.focal)
                }
                Err(e) => return Err(e.into()),
            };
            if let Some(p) = &a.report {
                let json = serde_json::to_vec_pretty(&report).map_err(Error::from)?;
                std::fs::write(p, json).map_err(|e| Error::io(p, e))?;
            }
            Ok(())
        }
        Cmd::Report(a) => {
            let db = TransactionDb::read(&a.transactions)?;
            let rules = read_rule_file(&a.rules, &db)?;
            let report = pattern_report(&rules, &a.focal, &db)?;
            if a.json {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&report).map_err(Error::from)?
                );
            } else {
                print!("{}", report.to_text());
            }
            Ok(())
        }
    }
}

fn print_summary(s: &pipeline::RunSummary) {
    println!(
        "phase 1: {} points, phase 2: {} points, selected {}, mined {} rules, closure {} rules -> {}",
        s.phase1_points,
        s.phase2_points,
        s.selected,
        s.mined_rules,
        s.closure_rules,
        s.output_dir.display()
    );
    if s.stopped_after_phase1 {
        println!("every phase-1 instance was Easy; no refined sweep was run");
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Config(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Stage(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(3)
        }
    }
}
