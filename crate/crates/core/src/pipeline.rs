//! End-to-end run: a coarse sweep, automatic refinement, a refined sweep,
//! then classification, selection, discretization, mining, deduction and
//! the pattern report. Sweeps checkpoint as they go so a killed run can be
//! resumed without re-solving finished points.

use std::fs::{self, File, OpenOptions};
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::dataset::{
    self, discretize, drop_redundant, select_for_mining, BinningScheme, ClassifyMode, Hardness,
    HardnessThresholds, InstanceRecord,
};
use crate::deduce::{closure_with, pattern_report, DeduceOptions, DeductionCaps, PatternReport};
use crate::error::{Error, Result};
use crate::generator::{
    generate_with, sweep_grid, FloatAxis, GenParams, IntAxis, SweepConfig, SweepKey,
    TightnessConvention,
};
use crate::miner::{mine_rules_with, write_rules, MiningThresholds};
use crate::numfmt::{fmt_sig6, round_sig6};
use crate::par::{self, Parallelism};
use crate::solver::{SolveLimits, Solver};

pub const INSTANCES_CSV: &str = "instances.csv";
pub const PHASE1_CSV: &str = "phase1.csv";
pub const TRANSACTIONS: &str = "transactions.txt";
pub const RULES_MINED: &str = "rules_mined.csv";
pub const RULES_DEDUCED: &str = "rules_deduced.csv";
pub const REPORT_JSON: &str = "pattern_report.json";
pub const REPORT_TXT: &str = "pattern_report.txt";
pub const MANIFEST: &str = "manifest.json";
pub const TIMINGS: &str = "timings.csv";
pub const CHECKPOINT: &str = "checkpoint.json";

fn default_true() -> bool {
    true
}

fn default_workers() -> usize {
    0
}

fn default_interval() -> usize {
    64
}

fn default_focal() -> String {
    "class=Hard".into()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PipelineConfig {
    pub phase1: SweepConfig,
    /// Manual phase-2 sweep. When absent it is derived from phase 1.
    #[serde(default)]
    pub phase2: Option<SweepConfig>,
    #[serde(default)]
    pub limits: SolveLimits,
    #[serde(default)]
    pub thresholds: HardnessThresholds,
    #[serde(default = "default_bins")]
    pub bins: usize,
    #[serde(default)]
    pub mining: MiningThresholds,
    #[serde(default)]
    pub caps: DeductionCaps,
    #[serde(default = "default_true")]
    pub decomposition: bool,
    pub output_dir: PathBuf,
    /// Solver threads; 0 lets the pool pick.
    #[serde(default = "default_workers")]
    pub workers: usize,
    /// Sweep points solved between checkpoint writes.
    #[serde(default = "default_interval")]
    pub checkpoint_interval: usize,
    #[serde(default = "default_true")]
    pub mac: bool,
    #[serde(default)]
    pub tightness_means_forbidden: bool,
    #[serde(default = "default_focal")]
    pub focal: String,
    /// Axis steps added on each side of the non-Easy range when refining.
    #[serde(default)]
    pub refine_padding: u64,
}

fn default_bins() -> usize {
    dataset::DEFAULT_BINS
}

impl PipelineConfig {
    /// Small sweep that finishes in seconds: n = 15, d = 8, e ∈ 30..84 step
    /// 18, nf ∈ 0..4, t ∈ 0.30..0.75 step 0.05, three seeds per point,
    /// classified by backtracks.
    pub fn desk_scale(output_dir: impl Into<PathBuf>) -> Self {
        PipelineConfig {
            phase1: SweepConfig {
                n: 15,
                d: 8,
                e: IntAxis::new(30, 84, 18),
                nf: IntAxis::new(0, 4, 1),
                t: FloatAxis::new(0.30, 0.75, 0.05),
                seed: IntAxis::new(1, 3, 1),
                instances_per_point: 1,
                bif_share: 0.0,
            },
            phase2: None,
            limits: SolveLimits {
                time_budget: Some(10.0),
                backtrack_budget: Some(1_000_000),
            },
            thresholds: HardnessThresholds {
                mode: ClassifyMode::Backtracks,
                easy_below_backtracks: 2,
                hard_above_backtracks: 5,
                ..HardnessThresholds::default()
            },
            bins: dataset::DEFAULT_BINS,
            mining: MiningThresholds::default(),
            caps: DeductionCaps::default(),
            decomposition: true,
            output_dir: output_dir.into(),
            workers: 0,
            checkpoint_interval: default_interval(),
            mac: true,
            tightness_means_forbidden: false,
            focal: default_focal(),
            refine_padding: 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.phase1.validate()?;
        if let Some(p2) = &self.phase2 {
            p2.validate()?;
        }
        self.thresholds.validate()?;
        self.mining.validate()?;
        self.caps.validate()?;
        if self.bins == 0 {
            return Err(Error::InvalidParams("bins must be >= 1".into()));
        }
        if self.checkpoint_interval == 0 {
            return Err(Error::InvalidParams(
                "checkpoint_interval must be >= 1".into(),
            ));
        }
        if let Some(b) = self.limits.time_budget {
            if !(b > 0.0) {
                return Err(Error::InvalidParams("time_budget must be > 0".into()));
            }
        }
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        let f = File::open(path).map_err(|e| Error::io(path, e))?;
        Ok(serde_json::from_reader(BufReader::new(f))?)
    }

    /// The configuration fields that determine results: everything except
    /// the output location, the worker count and the checkpoint interval.
    pub fn result_fields(&self) -> serde_json::Value {
        let mut v = serde_json::to_value(self).expect("config serializes");
        if let Some(m) = v.as_object_mut() {
            for k in ["output_dir", "workers", "checkpoint_interval"] {
                m.remove(k);
            }
        }
        v
    }

    /// SHA-256 of [`result_fields`](Self::result_fields) as compact JSON
    /// with sorted keys.
    pub fn hash(&self) -> String {
        let text = serde_json::to_string(&self.result_fields()).expect("config serializes");
        hex::encode(Sha256::digest(text.as_bytes()))
    }

    pub fn solve_options(&self) -> SolveOptions {
        SolveOptions {
            limits: self.limits,
            thresholds: self.thresholds,
            mac: self.mac,
            convention: if self.tightness_means_forbidden {
                TightnessConvention::Forbidden
            } else {
                TightnessConvention::Allowed
            },
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SolveOptions {
    pub limits: SolveLimits,
    pub thresholds: HardnessThresholds,
    pub mac: bool,
    pub convention: TightnessConvention,
}

impl SolveOptions {
    /// Limits actually applied. Backtrack-mode runs ignore the time budget so
    /// their outcome does not depend on machine speed.
    pub fn effective_limits(&self) -> SolveLimits {
        match self.thresholds.mode {
            ClassifyMode::Backtracks => SolveLimits {
                time_budget: None,
                ..self.limits
            },
            ClassifyMode::WallClock => self.limits,
        }
    }
}

/// Generates, solves and classifies one sweep point.
pub fn solve_point(p: &GenParams, opts: &SolveOptions) -> Result<InstanceRecord> {
    let inst = generate_with(p, opts.convention)?;
    let limits = opts.effective_limits();
    let r = Solver::new(&inst).limits(limits).mac(opts.mac).solve();
    Ok(InstanceRecord::from_solve(
        p,
        &r,
        &opts.thresholds,
        limits.time_budget,
    ))
}

/// Solves a batch, results in input order.
pub fn solve_batch(
    params: &[GenParams],
    opts: &SolveOptions,
    mode: Parallelism,
) -> Result<Vec<InstanceRecord>> {
    par::map(params, mode, |p| solve_point(p, opts))
        .into_iter()
        .collect()
}

fn non_easy_span<T>(values: &[T], hit: impl Fn(&T) -> bool, pad: u64) -> Option<(usize, usize)> {
    let lo = values.iter().position(&hit)?;
    let hi = values.iter().rposition(&hit)?;
    let pad = pad as usize;
    Some((lo.saturating_sub(pad), (hi + pad).min(values.len() - 1)))
}

/// Refined sweep: each of the `e`, `nf` and `t` axes is cut to the smallest
/// contiguous range covering every non-Easy record, widened by `padding`
/// steps and clipped to the coarse range. Seeds continue after the last
/// phase-1 seed so no instance repeats. `None` when every record is Easy.
pub fn refine(cfg: &SweepConfig, records: &[InstanceRecord], padding: u64) -> Option<SweepConfig> {
    let hot: Vec<&InstanceRecord> = records
        .iter()
        .filter(|r| r.class != Hardness::Easy)
        .collect();
    if hot.is_empty() {
        return None;
    }
    let int_axis = |axis: &IntAxis, get: &dyn Fn(&InstanceRecord) -> usize| {
        let values = axis.values();
        let (lo, hi) = non_easy_span(
            &values,
            |&v| hot.iter().any(|r| get(r) as u64 == v),
            padding,
        )?;
        Some(IntAxis::new(values[lo], values[hi], axis.step))
    };
    let e = int_axis(&cfg.e, &|r| r.e)?;
    let nf = int_axis(&cfg.nf, &|r| r.nf)?;
    let tv = cfg.t.values();
    let (lo, hi) = non_easy_span(
        &tv,
        |&v| hot.iter().any(|r| (r.t - round_sig6(v)).abs() < 1e-9),
        padding,
    )?;
    let t = FloatAxis::new(tv[lo], tv[hi], cfg.t.step);

    let used = sweep_grid(cfg).map(|g| g.len() as u64).unwrap_or(0);
    let start = cfg
        .seed
        .start
        .wrapping_add(cfg.seed.step.wrapping_mul(used));
    let seed = IntAxis::new(
        start,
        start + (cfg.seed.end - cfg.seed.start),
        cfg.seed.step,
    );
    Some(SweepConfig {
        e,
        nf,
        t,
        seed,
        ..cfg.clone()
    })
}

/// Progress of one sweep: keys already solved and how many rows of the
/// partial results file are valid. Rows past `rows` (a write cut short by a
/// kill) are ignored on resume.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct PhaseProgress {
    pub completed: Vec<SweepKey>,
    pub partial_csv: Option<PathBuf>,
    pub rows: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Checkpoint {
    pub config_hash: String,
    #[serde(default)]
    pub phase1: PhaseProgress,
    #[serde(default)]
    pub phase2: PhaseProgress,
}

impl Checkpoint {
    pub fn new(cfg: &PipelineConfig) -> Self {
        Checkpoint {
            config_hash: cfg.hash(),
            ..Default::default()
        }
    }

    /// Reads a checkpoint. A missing or empty file is an empty checkpoint.
    pub fn load(path: &Path) -> Result<Option<Self>> {
        match fs::read_to_string(path) {
            Ok(text) if text.trim().is_empty() => Ok(None),
            Ok(text) => Ok(Some(serde_json::from_str(&text)?)),
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(None),
            Err(e) => Err(Error::io(path, e)),
        }
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let tmp = path.with_extension("json.tmp");
        fs::write(&tmp, serde_json::to_vec_pretty(self)?).map_err(|e| Error::io(&tmp, e))?;
        fs::rename(&tmp, path).map_err(|e| Error::io(path, e))
    }

    pub fn completed_points(&self) -> usize {
        self.phase1.completed.len() + self.phase2.completed.len()
    }
}

/// Test and tooling hook: stop cleanly after this many newly solved points.
#[derive(Clone, Copy, Debug, Default)]
pub struct RunControl {
    pub stop_after_points: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    pub output_dir: PathBuf,
    pub phase1_points: usize,
    pub phase2_points: usize,
    pub selected: usize,
    pub mined_rules: usize,
    pub closure_rules: usize,
    /// True when phase 1 found nothing but Easy instances.
    pub stopped_after_phase1: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub enum RunOutcome {
    Completed(RunSummary),
    Interrupted { completed_points: usize },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhaseManifest {
    pub config: SweepConfig,
    pub points: usize,
    pub first_seed: Option<u64>,
    pub last_seed: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub crate_name: String,
    pub crate_version: String,
    pub config_hash: String,
    pub config: serde_json::Value,
    pub phase1: PhaseManifest,
    pub phase2: Option<PhaseManifest>,
    pub binning: Option<BinningScheme>,
    pub summary: RunSummary,
}

struct Sweep<'a> {
    cfg: &'a PipelineConfig,
    opts: SolveOptions,
    checkpoint: Checkpoint,
    control: RunControl,
    solved_now: usize,
}

enum PhaseResult {
    Done(Vec<InstanceRecord>),
    Interrupted,
}

impl Sweep<'_> {
    fn dir(&self) -> &Path {
        &self.cfg.output_dir
    }

    fn progress(&mut self, phase: u8) -> &mut PhaseProgress {
        if phase == 1 {
            &mut self.checkpoint.phase1
        } else {
            &mut self.checkpoint.phase2
        }
    }

    fn run(&mut self, phase: u8, grid: &[GenParams]) -> Result<PhaseResult> {
        let name = format!("phase{phase}.partial.csv");
        let partial = self.dir().join(&name);
        let prog = self.progress(phase).clone();

        let mut done: Vec<InstanceRecord> = match &prog.partial_csv {
            Some(_) if prog.rows > 0 => {
                let mut rows = dataset::read_csv(&partial)?;
                if rows.len() < prog.rows {
                    return Err(Error::parse(
                        rows.len() + 1,
                        format!("{name} holds fewer rows than the checkpoint records"),
                    ));
                }
                rows.truncate(prog.rows);
                rows
            }
            _ => Vec::new(),
        };
        // rewrite so the file holds exactly the valid rows before appending
        {
            let f = File::create(&partial).map_err(|e| Error::io(&partial, e))?;
            dataset::write_csv_rows(&done, BufWriter::new(f), true)?;
        }
        let p = self.progress(phase);
        p.partial_csv = Some(PathBuf::from(&name));
        p.rows = done.len();
        p.completed = done.iter().map(key_of).collect();

        let mut finished: Vec<SweepKey> = p.completed.clone();
        finished.sort_by(|a, b| a.cmp_canonical(b));
        let todo: Vec<GenParams> = grid
            .iter()
            .filter(|g| {
                finished
                    .binary_search_by(|k| k.cmp_canonical(&key_of_params(g)))
                    .is_err()
            })
            .cloned()
            .collect();

        let chunk = self.cfg.checkpoint_interval;
        let mut next = 0;
        while next < todo.len() {
            let mut end = (next + chunk).min(todo.len());
            if let Some(limit) = self.control.stop_after_points {
                let left = limit.saturating_sub(self.solved_now);
                if left == 0 {
                    self.save()?;
                    return Ok(PhaseResult::Interrupted);
                }
                end = end.min(next + left);
            }
            let opts = self.opts;
            let batch = &todo[next..end];
            let records = par::with_workers(self.cfg.workers, || {
                solve_batch(batch, &opts, Parallelism::Parallel)
            })?;
            let f = OpenOptions::new()
                .append(true)
                .open(&partial)
                .map_err(|e| Error::io(&partial, e))?;
            dataset::write_csv_rows(&records, BufWriter::new(f), false)?;
            let p = self.progress(phase);
            p.rows += records.len();
            p.completed.extend(records.iter().map(key_of));
            self.solved_now += records.len();
            done.extend(records);
            self.save()?;
            log::info!("phase {phase}: {}/{} points", done.len(), grid.len());
            next = end;
        }
        done.sort_by(|a, b| a.cmp_key(b));
        Ok(PhaseResult::Done(done))
    }

    fn save(&self) -> Result<()> {
        self.checkpoint.save(&self.dir().join(CHECKPOINT))
    }
}

fn key_of(r: &InstanceRecord) -> SweepKey {
    SweepKey {
        e: r.e,
        nf: r.nf,
        t: r.t,
        seed: r.seed,
    }
}

fn key_of_params(p: &GenParams) -> SweepKey {
    SweepKey {
        t: round_sig6(p.t),
        ..p.key()
    }
}

fn phase_manifest(cfg: &SweepConfig, grid: &[GenParams]) -> PhaseManifest {
    PhaseManifest {
        config: cfg.clone(),
        points: grid.len(),
        first_seed: grid.first().map(|p| p.seed),
        last_seed: grid.last().map(|p| p.seed),
    }
}

fn create_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))
}

/// Instance CSV as published. Backtrack-mode runs blank the wall time so the
/// file is reproducible; real times go to the timings file.
fn published(records: &[InstanceRecord], mode: ClassifyMode) -> Vec<InstanceRecord> {
    records
        .iter()
        .map(|r| match mode {
            ClassifyMode::Backtracks => InstanceRecord {
                elapsed: 0.0,
                ..r.clone()
            },
            ClassifyMode::WallClock => r.clone(),
        })
        .collect()
}

fn write_timings(records: &[InstanceRecord], path: &Path) -> Result<()> {
    let f = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = csv::Writer::from_writer(BufWriter::new(f));
    w.write_record(["e", "nf", "t", "seed", "elapsed_s"])?;
    let mut sorted: Vec<&InstanceRecord> = records.iter().collect();
    sorted.sort_by(|a, b| a.cmp_key(b));
    for r in sorted {
        w.write_record([
            r.e.to_string(),
            r.nf.to_string(),
            fmt_sig6(r.t),
            r.seed.to_string(),
            fmt_sig6(r.elapsed),
        ])?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    fs::write(path, bytes).map_err(|e| Error::io(path, e))
}

/// Phase 1 alone: solves the coarse sweep, writes its results CSV and
/// returns the records with the refined sweep (`None` if all were Easy).
pub fn run_phase1(cfg: &PipelineConfig) -> Result<(Vec<InstanceRecord>, Option<SweepConfig>)> {
    cfg.validate()?;
    create_dir(&cfg.output_dir)?;
    let grid = sweep_grid(&cfg.phase1)?;
    let records = solve_batch_in_pool(cfg, &grid).map_err(|e| e.in_stage("solve"))?;
    dataset::write_csv(
        &published(&records, cfg.thresholds.mode),
        &cfg.output_dir.join(PHASE1_CSV),
    )
    .map_err(|e| e.in_stage("write"))?;
    let refined = refine(&cfg.phase1, &records, cfg.refine_padding);
    Ok((records, refined))
}

fn solve_batch_in_pool(cfg: &PipelineConfig, grid: &[GenParams]) -> Result<Vec<InstanceRecord>> {
    let opts = cfg.solve_options();
    let mut records = par::with_workers(cfg.workers, || {
        solve_batch(grid, &opts, Parallelism::Parallel)
    })?;
    records.sort_by(|a, b| a.cmp_key(b));
    Ok(records)
}

/// Full run from scratch. Any earlier checkpoint in the output directory is
/// discarded.
pub fn run_pipeline(cfg: &PipelineConfig) -> Result<RunSummary> {
    match run_pipeline_with(cfg, None, RunControl::default())? {
        RunOutcome::Completed(s) => Ok(s),
        RunOutcome::Interrupted { .. } => unreachable!("no stop requested"),
    }
}

/// Continues the run recorded in `checkpoint`. Refuses a checkpoint written
/// for a different configuration; an empty one starts a full run.
pub fn resume(checkpoint: &Path, cfg: &PipelineConfig) -> Result<RunSummary> {
    match resume_with(checkpoint, cfg, RunControl::default())? {
        RunOutcome::Completed(s) => Ok(s),
        RunOutcome::Interrupted { .. } => unreachable!("no stop requested"),
    }
}

pub fn resume_with(
    checkpoint: &Path,
    cfg: &PipelineConfig,
    control: RunControl,
) -> Result<RunOutcome> {
    let cp = Checkpoint::load(checkpoint)?;
    if let Some(cp) = &cp {
        let expected = cfg.hash();
        if cp.config_hash != expected {
            return Err(Error::CheckpointMismatch {
                expected,
                found: cp.config_hash.clone(),
            });
        }
    }
    run_pipeline_with(cfg, cp, control)
}

pub fn run_pipeline_with(
    cfg: &PipelineConfig,
    checkpoint: Option<Checkpoint>,
    control: RunControl,
) -> Result<RunOutcome> {
    cfg.validate()?;
    let dir = cfg.output_dir.clone();
    create_dir(&dir)?;
    let mut sweep = Sweep {
        cfg,
        opts: cfg.solve_options(),
        checkpoint: checkpoint.unwrap_or_else(|| Checkpoint::new(cfg)),
        control,
        solved_now: 0,
    };

    let grid1 = sweep_grid(&cfg.phase1).map_err(|e| e.in_stage("generate"))?;
    let phase1 = match sweep.run(1, &grid1).map_err(|e| e.in_stage("solve"))? {
        PhaseResult::Done(r) => r,
        PhaseResult::Interrupted => {
            return Ok(RunOutcome::Interrupted {
                completed_points: sweep.checkpoint.completed_points(),
            })
        }
    };
    dataset::write_csv(
        &published(&phase1, cfg.thresholds.mode),
        &dir.join(PHASE1_CSV),
    )
    .map_err(|e| e.in_stage("write"))?;

    let phase2_cfg = match &cfg.phase2 {
        Some(manual) => Some(manual.clone()),
        None => refine(&cfg.phase1, &phase1, cfg.refine_padding),
    };
    let (grid2, phase2) = match &phase2_cfg {
        Some(c) => {
            let grid = sweep_grid(c).map_err(|e| e.in_stage("generate"))?;
            match sweep.run(2, &grid).map_err(|e| e.in_stage("solve"))? {
                PhaseResult::Done(r) => (grid, r),
                PhaseResult::Interrupted => {
                    return Ok(RunOutcome::Interrupted {
                        completed_points: sweep.checkpoint.completed_points(),
                    })
                }
            }
        }
        None => (Vec::new(), Vec::new()),
    };

    let mut all = phase1.clone();
    all.extend(phase2.iter().cloned());
    all.sort_by(|a, b| a.cmp_key(b));
    all.dedup_by(|a, b| a.cmp_key(b).is_eq());

    let artifacts = finish(cfg, &all).map_err(|e| {
        log::error!("{e}");
        e
    })?;
    let summary = RunSummary {
        output_dir: dir.clone(),
        phase1_points: grid1.len(),
        phase2_points: grid2.len(),
        selected: artifacts.selected,
        mined_rules: artifacts.mined,
        closure_rules: artifacts.closure,
        stopped_after_phase1: phase2_cfg.is_none(),
    };
    let manifest = Manifest {
        crate_name: env!("CARGO_PKG_NAME").into(),
        crate_version: env!("CARGO_PKG_VERSION").into(),
        config_hash: cfg.hash(),
        config: cfg.result_fields(),
        phase1: phase_manifest(&cfg.phase1, &grid1),
        phase2: phase2_cfg.as_ref().map(|c| phase_manifest(c, &grid2)),
        binning: artifacts.binning,
        summary: RunSummary {
            output_dir: PathBuf::new(),
            ..summary.clone()
        },
    };
    write_file(&dir.join(MANIFEST), &serde_json::to_vec_pretty(&manifest)?)
        .map_err(|e| e.in_stage("write"))?;

    for f in [CHECKPOINT, "phase1.partial.csv", "phase2.partial.csv"] {
        let _ = fs::remove_file(dir.join(f));
    }
    Ok(RunOutcome::Completed(summary))
}

struct Artifacts {
    selected: usize,
    mined: usize,
    closure: usize,
    binning: Option<BinningScheme>,
}

/// Everything after the sweeps: writes the instance and timing files, then
/// select, discretize, mine, deduce and report.
fn finish(cfg: &PipelineConfig, all: &[InstanceRecord]) -> Result<Artifacts> {
    let dir = &cfg.output_dir;
    dataset::write_csv(
        &published(all, cfg.thresholds.mode),
        &dir.join(INSTANCES_CSV),
    )
    .map_err(|e| e.in_stage("write"))?;
    write_timings(all, &dir.join(TIMINGS)).map_err(|e| e.in_stage("write"))?;

    let selected = select_for_mining(all);
    if selected.is_empty() {
        // nothing but Easy instances: header-only rule files, empty report
        let empty = dataset::TransactionDb::default();
        empty
            .write(&dir.join(TRANSACTIONS))
            .map_err(|e| e.in_stage("write"))?;
        write_rule_files(cfg, &[], &[], &empty)?;
        write_report(dir, &PatternReport::empty(&cfg.focal))?;
        return Ok(Artifacts {
            selected: 0,
            mined: 0,
            closure: 0,
            binning: None,
        });
    }

    let table = drop_redundant(&selected);
    let (db, scheme) = discretize(&table, cfg.bins).map_err(|e| e.in_stage("discretize"))?;
    db.write(&dir.join(TRANSACTIONS))
        .map_err(|e| e.in_stage("write"))?;

    let mined =
        mine_rules_with(&db, &cfg.mining, Parallelism::Parallel).map_err(|e| e.in_stage("mine"))?;
    let opts = DeduceOptions {
        caps: cfg.caps,
        decomposition: cfg.decomposition,
    };
    let closed = closure_with(&mined, &db, &opts, Parallelism::Parallel);
    write_rule_files(cfg, &mined, &closed, &db)?;

    let report = match pattern_report(&closed, &cfg.focal, &db) {
        Ok(r) => r,
        Err(Error::UnknownItem(_)) => PatternReport::empty(&cfg.focal),
        Err(e) => return Err(e.in_stage("report")),
    };
    write_report(dir, &report)?;
    Ok(Artifacts {
        selected: selected.len(),
        mined: mined.len(),
        closure: closed.len(),
        binning: Some(scheme),
    })
}

fn write_rule_files(
    cfg: &PipelineConfig,
    mined: &[crate::miner::AssociationRule],
    closed: &[crate::miner::AssociationRule],
    db: &dataset::TransactionDb,
) -> Result<()> {
    let dir = &cfg.output_dir;
    let open = |name: &str| -> Result<BufWriter<File>> {
        let p = dir.join(name);
        File::create(&p)
            .map(BufWriter::new)
            .map_err(|e| Error::io(p, e))
    };
    write_rules(mined, db, false, open(RULES_MINED)?).map_err(|e| e.in_stage("write"))?;
    write_rules(closed, db, true, open(RULES_DEDUCED)?).map_err(|e| e.in_stage("write"))
}

fn write_report(dir: &Path, report: &PatternReport) -> Result<()> {
    let mut json = serde_json::to_vec_pretty(report)?;
    json.push(b'\n');
    write_file(&dir.join(REPORT_JSON), &json).map_err(|e| e.in_stage("write"))?;
    let mut f = open_text(&dir.join(REPORT_TXT))?;
    f.write_all(report.to_text().as_bytes())
        .map_err(|e| Error::io(dir.join(REPORT_TXT), e))
}

fn open_text(path: &Path) -> Result<BufWriter<File>> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| Error::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::SatStatus;

    fn rec(e: usize, nf: usize, t: f64, class: Hardness) -> InstanceRecord {
        InstanceRecord {
            n: 15,
            d: 8,
            e,
            nf,
            t,
            seed: 1,
            sat: SatStatus::No,
            backtracks: 0,
            nodes: 0,
            elapsed: 0.0,
            class,
        }
    }

    fn coarse() -> SweepConfig {
        SweepConfig {
            n: 50,
            d: 50,
            e: IntAxis::new(100, 1076, 122),
            nf: IntAxis::new(0, 10, 2),
            t: FloatAxis::new(0.2, 0.9, 0.05),
            seed: IntAxis::new(1, 10, 1),
            instances_per_point: 1,
            bif_share: 0.0,
        }
    }

    #[test]
    fn refine_trims_easy_edges() {
        let cfg = coarse();
        let records = vec![
            rec(100, 0, 0.2, Hardness::Easy),
            rec(344, 2, 0.3, Hardness::Medium),
            rec(710, 4, 0.75, Hardness::Hard),
            rec(1076, 10, 0.9, Hardness::Easy),
        ];
        let r = refine(&cfg, &records, 0).unwrap();
        assert_eq!((r.e.start, r.e.end), (344, 710));
        assert_eq!(r.e.values(), vec![344, 466, 588, 710]);
        assert_eq!((r.nf.start, r.nf.end), (2, 4));
        assert_eq!(r.t.len(), 10);
        assert!((r.t.start - 0.3).abs() < 1e-9 && (r.t.end - 0.75).abs() < 1e-9);
        // seeds continue after the coarse grid
        let used = sweep_grid(&cfg).unwrap().len() as u64;
        assert_eq!(r.seed.start, 1 + used);
        assert_eq!(r.seed.len(), cfg.seed.len());

        let padded = refine(&cfg, &records, 1).unwrap();
        assert_eq!((padded.e.start, padded.e.end), (222, 832));
        let wide = refine(&cfg, &records, 100).unwrap();
        assert_eq!((wide.e.start, wide.e.end), (100, 1076));
    }

    #[test]
    fn refine_all_easy_is_none() {
        let records = vec![rec(100, 0, 0.2, Hardness::Easy)];
        assert!(refine(&coarse(), &records, 0).is_none());
    }

    #[test]
    fn hash_ignores_placement_fields() {
        let a = PipelineConfig::desk_scale("/tmp/a");
        let mut b = PipelineConfig::desk_scale("/tmp/b");
        b.workers = 7;
        b.checkpoint_interval = 3;
        assert_eq!(a.hash(), b.hash());
        b.bins = 10;
        assert_ne!(a.hash(), b.hash());
    }

    #[test]
    fn config_json_round_trip_with_defaults() {
        let cfg = PipelineConfig::desk_scale("out");
        let text = serde_json::to_string(&cfg).unwrap();
        assert_eq!(serde_json::from_str::<PipelineConfig>(&text).unwrap(), cfg);
        let minimal = r#"{"phase1": {"n": 4, "d": 2, "e": {"start": 1, "end": 3, "step": 1},
            "nf": {"start": 0, "end": 0, "step": 1}, "t": {"start": 0.5, "end": 0.5, "step": 0.1},
            "seed": {"start": 1, "end": 1, "step": 1}, "instances_per_point": 1},
            "output_dir": "x"}"#;
        let c: PipelineConfig = serde_json::from_str(minimal).unwrap();
        assert!(c.mac && c.decomposition);
        assert_eq!(c.focal, "class=Hard");
        c.validate().unwrap();
    }
}
