//! From solve outcomes to a mining-ready transaction database.

use std::collections::BTreeSet;
use std::fmt;
use std::io::{Read, Write};
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::generator::GenParams;
use crate::numfmt::{fmt_sig6, round_sig6};
use crate::solver::{SolveResult, SolveStatus};

pub const CSV_HEADER: [&str; 11] = [
    "n",
    "d",
    "e",
    "nf",
    "t",
    "seed",
    "sat",
    "backtracks",
    "nodes",
    "elapsed_s",
    "class",
];

pub const DEFAULT_BINS: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SatStatus {
    Yes,
    No,
    Timeout,
}

impl SatStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            SatStatus::Yes => "YES",
            SatStatus::No => "NO",
            SatStatus::Timeout => "TIMEOUT",
        }
    }
}

impl From<SolveStatus> for SatStatus {
    fn from(s: SolveStatus) -> Self {
        match s {
            SolveStatus::Sat => SatStatus::Yes,
            SolveStatus::Unsat => SatStatus::No,
            SolveStatus::Timeout => SatStatus::Timeout,
        }
    }
}

impl FromStr for SatStatus {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "YES" => Ok(SatStatus::Yes),
            "NO" => Ok(SatStatus::No),
            "TIMEOUT" => Ok(SatStatus::Timeout),
            _ => Err(format!("unknown sat value `{s}`")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Hardness {
    Easy,
    Medium,
    Hard,
}

impl Hardness {
    pub fn as_str(self) -> &'static str {
        match self {
            Hardness::Easy => "Easy",
            Hardness::Medium => "Medium",
            Hardness::Hard => "Hard",
        }
    }
}

impl fmt::Display for Hardness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Hardness {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "Easy" => Ok(Hardness::Easy),
            "Medium" => Ok(Hardness::Medium),
            "Hard" => Ok(Hardness::Hard),
            _ => Err(format!("unknown class `{s}`")),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum ClassifyMode {
    /// Classify on solve time in seconds.
    #[default]
    WallClock,
    /// Classify on backtrack count; reproducible across machines.
    Backtracks,
}

/// Easy below the lower bound, Hard above the upper bound, Medium on the
/// closed interval between them.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HardnessThresholds {
    pub mode: ClassifyMode,
    pub easy_below: f64,
    pub hard_above: f64,
    pub easy_below_backtracks: u64,
    pub hard_above_backtracks: u64,
}

impl Default for HardnessThresholds {
    fn default() -> Self {
        HardnessThresholds {
            mode: ClassifyMode::WallClock,
            easy_below: 5.0,
            hard_above: 60.0,
            easy_below_backtracks: 1_000,
            hard_above_backtracks: 100_000,
        }
    }
}

impl HardnessThresholds {
    pub fn validate(&self) -> Result<()> {
        if !(self.easy_below >= 0.0 && self.easy_below < self.hard_above) {
            return Err(Error::InvalidParams(format!(
                "need 0 <= easy_below < hard_above, got {} and {}",
                self.easy_below, self.hard_above
            )));
        }
        if self.easy_below_backtracks >= self.hard_above_backtracks {
            return Err(Error::InvalidParams(format!(
                "need easy_below_backtracks < hard_above_backtracks, got {} and {}",
                self.easy_below_backtracks, self.hard_above_backtracks
            )));
        }
        Ok(())
    }

    /// Class of a solve outcome under the configured mode. Timeouts are Hard.
    pub fn classify_outcome(&self, sat: SatStatus, backtracks: u64, elapsed: f64) -> Hardness {
        if sat == SatStatus::Timeout {
            return Hardness::Hard;
        }
        match self.mode {
            ClassifyMode::WallClock => classify(elapsed, self),
            ClassifyMode::Backtracks => classify_backtracks(backtracks, self),
        }
    }
}

pub fn classify(elapsed: f64, th: &HardnessThresholds) -> Hardness {
    if elapsed < th.easy_below {
        Hardness::Easy
    } else if elapsed > th.hard_above {
        Hardness::Hard
    } else {
        Hardness::Medium
    }
}

pub fn classify_backtracks(backtracks: u64, th: &HardnessThresholds) -> Hardness {
    if backtracks < th.easy_below_backtracks {
        Hardness::Easy
    } else if backtracks > th.hard_above_backtracks {
        Hardness::Hard
    } else {
        Hardness::Medium
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InstanceRecord {
    pub n: usize,
    pub d: usize,
    pub e: usize,
    pub nf: usize,
    pub t: f64,
    pub seed: u64,
    pub sat: SatStatus,
    pub backtracks: u64,
    pub nodes: u64,
    pub elapsed: f64,
    pub class: Hardness,
}

impl InstanceRecord {
    /// Builds a record from a solve. Timeouts record the time budget as their
    /// elapsed time when one was set. Floats are kept at six significant
    /// digits so the CSV form is exact.
    pub fn from_solve(
        p: &GenParams,
        r: &SolveResult,
        th: &HardnessThresholds,
        time_budget: Option<f64>,
    ) -> Self {
        let sat = SatStatus::from(r.status);
        let elapsed = match (sat, time_budget) {
            (SatStatus::Timeout, Some(b)) => b,
            _ => r.elapsed,
        };
        InstanceRecord {
            n: p.n,
            d: p.d,
            e: p.e,
            nf: p.nf,
            t: round_sig6(p.t),
            seed: p.seed,
            sat,
            backtracks: r.backtracks,
            nodes: r.nodes,
            elapsed: round_sig6(elapsed),
            class: th.classify_outcome(sat, r.backtracks, elapsed),
        }
    }

    pub fn key(&self) -> (usize, usize, f64, u64) {
        (self.e, self.nf, self.t, self.seed)
    }

    pub fn cmp_key(&self, other: &Self) -> std::cmp::Ordering {
        (self.e, self.nf)
            .cmp(&(other.e, other.nf))
            .then(self.t.total_cmp(&other.t))
            .then(self.seed.cmp(&other.seed))
    }

    fn to_fields(&self) -> [String; 11] {
        [
            self.n.to_string(),
            self.d.to_string(),
            self.e.to_string(),
            self.nf.to_string(),
            fmt_sig6(self.t),
            self.seed.to_string(),
            self.sat.as_str().to_string(),
            self.backtracks.to_string(),
            self.nodes.to_string(),
            fmt_sig6(self.elapsed),
            self.class.as_str().to_string(),
        ]
    }
}

/// Keeps Medium and Hard records, in input order.
pub fn select_for_mining(records: &[InstanceRecord]) -> Vec<InstanceRecord> {
    records
        .iter()
        .filter(|r| r.class != Hardness::Easy)
        .cloned()
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub enum ColumnData {
    Numeric(Vec<f64>),
    Categorical(Vec<String>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Column {
    pub name: String,
    pub data: ColumnData,
}

impl Column {
    pub fn len(&self) -> usize {
        match &self.data {
            ColumnData::Numeric(v) => v.len(),
            ColumnData::Categorical(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FeatureTable {
    pub columns: Vec<Column>,
}

impl FeatureTable {
    pub fn rows(&self) -> usize {
        self.columns.first().map_or(0, Column::len)
    }

    pub fn column(&self, name: &str) -> Option<&Column> {
        self.columns.iter().find(|c| c.name == name)
    }
}

/// Mining features: `e, nf, t, sat, class`. Backtracks and time are dropped
/// (time grows monotonically with backtracks and class already encodes it),
/// as is the seed. `n` and `d` are kept only if they vary.
pub fn drop_redundant(records: &[InstanceRecord]) -> FeatureTable {
    let numeric = |name: &str, f: &dyn Fn(&InstanceRecord) -> f64| Column {
        name: name.to_string(),
        data: ColumnData::Numeric(records.iter().map(f).collect()),
    };
    let varies = |f: &dyn Fn(&InstanceRecord) -> usize| {
        records.iter().map(f).collect::<BTreeSet<_>>().len() > 1
    };

    let mut columns = Vec::new();
    if varies(&|r| r.n) {
        columns.push(numeric("n", &|r| r.n as f64));
    }
    if varies(&|r| r.d) {
        columns.push(numeric("d", &|r| r.d as f64));
    }
    columns.push(numeric("e", &|r| r.e as f64));
    columns.push(numeric("nf", &|r| r.nf as f64));
    columns.push(numeric("t", &|r| r.t));
    columns.push(Column {
        name: "sat".into(),
        data: ColumnData::Categorical(records.iter().map(|r| r.sat.as_str().into()).collect()),
    });
    columns.push(Column {
        name: "class".into(),
        data: ColumnData::Categorical(records.iter().map(|r| r.class.as_str().into()).collect()),
    });
    FeatureTable { columns }
}

/// Equal-width bins over the observed range of one attribute.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AttributeBins {
    pub attribute: String,
    pub bins: usize,
    pub min: f64,
    pub max: f64,
    /// `bins + 1` edges from `min` to `max`; empty for a constant column.
    pub boundaries: Vec<f64>,
}

impl AttributeBins {
    fn new(attribute: &str, bins: usize, values: &[f64]) -> Self {
        let min = values.iter().copied().fold(f64::INFINITY, f64::min);
        let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let boundaries = if min == max {
            Vec::new()
        } else {
            let width = (max - min) / bins as f64;
            let mut b: Vec<f64> = (0..bins).map(|k| min + k as f64 * width).collect();
            b.push(max);
            b
        };
        AttributeBins {
            attribute: attribute.to_string(),
            bins,
            min,
            max,
            boundaries,
        }
    }

    /// Bin index: the first bin whose upper edge is `>= v`, so intervals are
    /// `[b0, b1]`, `(b1, b2]`, …, `(b_{k-1}, max]`.
    pub fn bin_of(&self, v: f64) -> usize {
        if self.boundaries.is_empty() {
            return 0;
        }
        let upper = &self.boundaries[1..];
        upper.iter().position(|&b| v <= b).unwrap_or(self.bins - 1)
    }

    pub fn label(&self, bin: usize) -> String {
        if self.boundaries.is_empty() {
            return format!("{}={}", self.attribute, fmt_sig6(self.min));
        }
        let lo = fmt_sig6(self.boundaries[bin]);
        let hi = fmt_sig6(self.boundaries[bin + 1]);
        if bin == 0 {
            format!("{}=[{lo}-{hi}]", self.attribute)
        } else {
            format!("{}=({lo}-{hi}]", self.attribute)
        }
    }

    pub fn item_for(&self, v: f64) -> String {
        self.label(self.bin_of(v))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BinningScheme {
    pub attributes: Vec<AttributeBins>,
}

/// Item universe and one itemset per record. Item ids index `items`, which is
/// sorted, so id order equals label order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TransactionDb {
    items: Vec<String>,
    transactions: Vec<Vec<u32>>,
}

impl TransactionDb {
    pub fn from_labels<S: AsRef<str>>(rows: &[Vec<S>]) -> Self {
        let items: Vec<String> = rows
            .iter()
            .flatten()
            .map(|s| s.as_ref().to_string())
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let transactions = rows
            .iter()
            .map(|row| {
                let mut ids: Vec<u32> = row
                    .iter()
                    .map(|s| {
                        items
                            .binary_search_by(|x| x.as_str().cmp(s.as_ref()))
                            .unwrap() as u32
                    })
                    .collect();
                ids.sort_unstable();
                ids.dedup();
                ids
            })
            .collect();
        TransactionDb {
            items,
            transactions,
        }
    }

    pub fn items(&self) -> &[String] {
        &self.items
    }

    pub fn transactions(&self) -> &[Vec<u32>] {
        &self.transactions
    }

    pub fn len(&self) -> usize {
        self.transactions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.transactions.is_empty()
    }

    pub fn item_id(&self, label: &str) -> Option<u32> {
        self.items
            .binary_search_by(|x| x.as_str().cmp(label))
            .ok()
            .map(|i| i as u32)
    }

    pub fn label(&self, id: u32) -> &str {
        &self.items[id as usize]
    }

    /// One line per transaction, items space-separated in label order.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for t in &self.transactions {
            let line: Vec<&str> = t.iter().map(|&i| self.label(i)).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        out
    }

    pub fn from_text(text: &str) -> Self {
        let rows: Vec<Vec<&str>> = text
            .lines()
            .filter(|l| !l.trim().is_empty())
            .map(|l| l.split_whitespace().collect())
            .collect();
        Self::from_labels(&rows)
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_text()).map_err(|e| Error::io(path, e))
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Ok(Self::from_text(&text))
    }
}

/// Equal-width discretization of the numeric columns into `bins` bins over
/// the observed range; categorical columns pass through as `attr=value`.
pub fn discretize(table: &FeatureTable, bins: usize) -> Result<(TransactionDb, BinningScheme)> {
    if bins == 0 {
        return Err(Error::InvalidParams("bins must be >= 1".into()));
    }
    let rows = table.rows();
    if rows == 0 || table.columns.is_empty() {
        return Err(Error::Empty("feature table"));
    }
    let mut scheme = BinningScheme {
        attributes: Vec::new(),
    };
    let mut labels: Vec<Vec<String>> = vec![Vec::with_capacity(table.columns.len()); rows];
    for col in &table.columns {
        match &col.data {
            ColumnData::Numeric(values) => {
                let ab = AttributeBins::new(&col.name, bins, values);
                for (row, &v) in labels.iter_mut().zip(values) {
                    row.push(ab.item_for(v));
                }
                scheme.attributes.push(ab);
            }
            ColumnData::Categorical(values) => {
                for (row, v) in labels.iter_mut().zip(values) {
                    row.push(format!("{}={v}", col.name));
                }
            }
        }
    }
    Ok((TransactionDb::from_labels(&labels), scheme))
}

/// Writes records sorted by `(e, nf, t, seed)`.
pub fn write_csv_to<W: Write>(records: &[InstanceRecord], out: W) -> Result<()> {
    let mut sorted: Vec<&InstanceRecord> = records.iter().collect();
    sorted.sort_by(|a, b| a.cmp_key(b));
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in sorted {
        w.write_record(r.to_fields())?;
    }
    w.flush().map_err(|e| Error::io("<csv>", e))?;
    Ok(())
}

/// Writes records in the given order, with the header only when asked.
/// Used for append-only partial results.
pub fn write_csv_rows<W: Write>(records: &[InstanceRecord], out: W, header: bool) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    if header {
        w.write_record(CSV_HEADER)?;
    }
    for r in records {
        w.write_record(r.to_fields())?;
    }
    w.flush().map_err(|e| Error::io("<csv>", e))?;
    Ok(())
}

pub fn read_csv_from<R: Read>(input: R) -> Result<Vec<InstanceRecord>> {
    let mut rd = csv::ReaderBuilder::new()
        .has_headers(false)
        .from_reader(input);
    let mut out = Vec::new();
    let mut header_seen = false;
    for rec in rd.records() {
        let rec = rec?;
        let line = rec.position().map_or(0, |p| p.line() as usize);
        if !header_seen {
            if rec.iter().ne(CSV_HEADER.iter().copied()) {
                return Err(Error::parse(
                    line,
                    format!("header must be `{}`", CSV_HEADER.join(",")),
                ));
            }
            header_seen = true;
            continue;
        }
        if rec.len() != CSV_HEADER.len() {
            return Err(Error::parse(
                line,
                format!("expected {} fields, found {}", CSV_HEADER.len(), rec.len()),
            ));
        }
        out.push(parse_row(&rec, line)?);
    }
    if !header_seen {
        return Err(Error::parse(1, "missing header"));
    }
    Ok(out)
}

fn parse_row(rec: &csv::StringRecord, line: usize) -> Result<InstanceRecord> {
    fn field<T: FromStr>(rec: &csv::StringRecord, k: usize, line: usize) -> Result<T> {
        rec[k]
            .parse()
            .map_err(|_| Error::parse(line, format!("bad `{}` value `{}`", CSV_HEADER[k], &rec[k])))
    }
    Ok(InstanceRecord {
        n: field(rec, 0, line)?,
        d: field(rec, 1, line)?,
        e: field(rec, 2, line)?,
        nf: field(rec, 3, line)?,
        t: field(rec, 4, line)?,
        seed: field(rec, 5, line)?,
        sat: field(rec, 6, line)?,
        backtracks: field(rec, 7, line)?,
        nodes: field(rec, 8, line)?,
        elapsed: field(rec, 9, line)?,
        class: field(rec, 10, line)?,
    })
}

pub fn write_csv(records: &[InstanceRecord], path: &Path) -> Result<()> {
    let f = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
    write_csv_to(records, std::io::BufWriter::new(f))
}

pub fn read_csv(path: &Path) -> Result<Vec<InstanceRecord>> {
    let f = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    read_csv_from(std::io::BufReader::new(f))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn wall() -> HardnessThresholds {
        HardnessThresholds::default()
    }

    fn record(e: usize, nf: usize, t: f64, seed: u64, class: Hardness) -> InstanceRecord {
        InstanceRecord {
            n: 50,
            d: 50,
            e,
            nf,
            t,
            seed,
            sat: SatStatus::No,
            backtracks: 12,
            nodes: 40,
            elapsed: 0.25,
            class,
        }
    }

    #[test]
    fn wall_clock_classes() {
        let th = wall();
        assert_eq!(classify(0.3, &th), Hardness::Easy);
        assert_eq!(classify(30.0, &th), Hardness::Medium);
        assert_eq!(classify(120.0, &th), Hardness::Hard);
        assert_eq!(classify(5.0, &th), Hardness::Medium);
        assert_eq!(classify(60.0, &th), Hardness::Medium);
        assert_eq!(classify(4.999, &th), Hardness::Easy);
        assert_eq!(classify(60.001, &th), Hardness::Hard);
        assert_eq!(classify(0.0, &th), Hardness::Easy);
    }

    #[test]
    fn timeout_is_hard() {
        let th = wall();
        assert_eq!(
            th.classify_outcome(SatStatus::Timeout, 0, 0.1),
            Hardness::Hard
        );
        let bt = HardnessThresholds {
            mode: ClassifyMode::Backtracks,
            easy_below_backtracks: 10,
            hard_above_backtracks: 100,
            ..th
        };
        assert_eq!(bt.classify_outcome(SatStatus::Yes, 9, 1e9), Hardness::Easy);
        assert_eq!(
            bt.classify_outcome(SatStatus::Yes, 10, 0.0),
            Hardness::Medium
        );
        assert_eq!(
            bt.classify_outcome(SatStatus::No, 100, 0.0),
            Hardness::Medium
        );
        assert_eq!(bt.classify_outcome(SatStatus::No, 101, 0.0), Hardness::Hard);
        assert_eq!(
            bt.classify_outcome(SatStatus::Timeout, 0, 0.0),
            Hardness::Hard
        );
    }

    #[test]
    fn thresholds_validate() {
        assert!(wall().validate().is_ok());
        let bad = HardnessThresholds {
            easy_below: 60.0,
            hard_above: 5.0,
            ..wall()
        };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn selection_drops_easy() {
        let all_easy = vec![record(1, 0, 0.5, 1, Hardness::Easy); 3];
        assert!(select_for_mining(&all_easy).is_empty());
        let mixed = vec![
            record(1, 0, 0.5, 1, Hardness::Easy),
            record(2, 0, 0.5, 2, Hardness::Medium),
            record(3, 0, 0.5, 3, Hardness::Hard),
            record(4, 0, 0.5, 4, Hardness::Easy),
        ];
        let kept = select_for_mining(&mixed);
        assert_eq!(
            kept.iter().map(|r| (r.e, r.class)).collect::<Vec<_>>(),
            vec![(2, Hardness::Medium), (3, Hardness::Hard)]
        );
    }

    #[test]
    fn redundant_columns_removed() {
        let recs = vec![
            record(344, 2, 0.6, 1, Hardness::Hard),
            record(466, 3, 0.61, 2, Hardness::Medium),
        ];
        let table = drop_redundant(&recs);
        let names: Vec<&str> = table.columns.iter().map(|c| c.name.as_str()).collect();
        assert_eq!(names, ["e", "nf", "t", "sat", "class"]);
        assert_eq!(table.rows(), 2);

        let mut varied = recs.clone();
        varied[1].n = 40;
        let names: Vec<String> = drop_redundant(&varied)
            .columns
            .into_iter()
            .map(|c| c.name)
            .collect();
        assert_eq!(names[0], "n");
    }

    fn numeric_table(name: &str, values: Vec<f64>) -> FeatureTable {
        FeatureTable {
            columns: vec![Column {
                name: name.into(),
                data: ColumnData::Numeric(values),
            }],
        }
    }

    #[test]
    fn two_equal_width_bins() {
        let table = numeric_table("x", (0..=10).map(f64::from).collect());
        let (db, scheme) = discretize(&table, 2).unwrap();
        assert_eq!(scheme.attributes[0].boundaries, vec![0.0, 5.0, 10.0]);
        assert_eq!(db.items(), ["x=(5-10]", "x=[0-5]"]);
        let lo = db.item_id("x=[0-5]").unwrap();
        // 0..=5 in the closed lowest bin, 6..=10 in the upper one
        let counts = db.transactions().iter().filter(|t| t[0] == lo).count();
        assert_eq!(counts, 6);
    }

    #[test]
    fn constant_column_single_item() {
        let table = numeric_table("t", vec![0.5; 4]);
        let (db, _) = discretize(&table, 20).unwrap();
        assert_eq!(db.items(), ["t=0.5"]);
        assert!(db.transactions().iter().all(|t| t.len() == 1));
    }

    #[test]
    fn maximum_goes_to_top_bin() {
        let ab = AttributeBins::new("e", 20, &[344.0, 710.0, 500.0]);
        assert_eq!(ab.bin_of(710.0), 19);
        assert_eq!(ab.bin_of(344.0), 0);
        assert_eq!(ab.label(19), "e=(691.7-710]");
    }

    #[test]
    fn discretize_rejects_empty() {
        let table = numeric_table("x", vec![]);
        assert!(matches!(discretize(&table, 3), Err(Error::Empty(_))));
    }

    #[test]
    fn one_item_per_attribute() {
        let recs: Vec<_> = (0..30)
            .map(|k| {
                record(
                    300 + k,
                    k % 7,
                    0.3 + k as f64 * 0.01,
                    k as u64,
                    Hardness::Medium,
                )
            })
            .collect();
        let (db, _) = discretize(&drop_redundant(&recs), 20).unwrap();
        assert_eq!(db.len(), 30);
        assert!(db.transactions().iter().all(|t| t.len() == 5));
    }

    #[test]
    fn csv_round_trip_and_order() {
        let recs = vec![
            record(466, 3, 0.61, 2, Hardness::Medium),
            record(344, 2, 0.6, 1, Hardness::Hard),
        ];
        let mut buf = Vec::new();
        write_csv_to(&recs, &mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("n,d,e,nf,t,seed,sat,backtracks,nodes,elapsed_s,class\n"));
        assert_eq!(
            text.lines().nth(1).unwrap(),
            "50,50,344,2,0.6,1,NO,12,40,0.25,Hard"
        );
        let back = read_csv_from(&buf[..]).unwrap();
        assert_eq!(back, vec![recs[1].clone(), recs[0].clone()]);
    }

    #[test]
    fn csv_errors() {
        let err = read_csv_from("n,d,e\n".as_bytes()).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }), "{err}");
        let text = format!(
            "{}\n50,50,1,0,0.5,1,NO,0,0,0.1,Easy\n50,50,x,0,0.5,1,NO,0,0,0.1,Easy\n",
            CSV_HEADER.join(",")
        );
        let err = read_csv_from(text.as_bytes()).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }), "{err}");
    }

    #[test]
    fn transactions_text_round_trip() {
        let db = TransactionDb::from_labels(&[vec!["b=1", "a=2"], vec!["a=2"]]);
        assert_eq!(db.to_text(), "a=2 b=1\na=2\n");
        assert_eq!(TransactionDb::from_text(&db.to_text()), db);
    }
}
