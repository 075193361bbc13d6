//! Level-wise Apriori mining and rule generation with support, confidence,
//! lift and conviction. Counts stay integral and measures are exact
//! rationals until converted for display, so symmetric rules get bitwise
//! identical lift.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashSet};
use std::io::{Read, Write};

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::dataset::TransactionDb;
use crate::deduce::Derivation;
use crate::error::{Error, Result};
use crate::numfmt::fmt_sig6;
use crate::par::{self, Parallelism};

pub type ItemId = u32;
pub type Rational = Ratio<u128>;

/// Sorted, duplicate-free set of item ids. Ids are assigned in label order,
/// so the derived ordering is the lexicographic label ordering.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ItemSet(Vec<ItemId>);

impl ItemSet {
    pub fn new(items: impl IntoIterator<Item = ItemId>) -> Self {
        let mut v: Vec<ItemId> = items.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        ItemSet(v)
    }

    pub fn empty() -> Self {
        ItemSet(Vec::new())
    }

    pub fn items(&self) -> &[ItemId] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, item: ItemId) -> bool {
        self.0.binary_search(&item).is_ok()
    }

    /// `self ⊆ sorted`, by merge.
    pub fn is_subset_of(&self, sorted: &[ItemId]) -> bool {
        let mut it = sorted.iter();
        self.0.iter().all(|x| it.by_ref().any(|y| y == x))
    }

    pub fn is_subset(&self, other: &ItemSet) -> bool {
        self.is_subset_of(&other.0)
    }

    pub fn union(&self, other: &ItemSet) -> ItemSet {
        ItemSet::new(self.0.iter().chain(&other.0).copied())
    }

    pub fn difference(&self, other: &ItemSet) -> ItemSet {
        ItemSet(
            self.0
                .iter()
                .copied()
                .filter(|&x| !other.contains(x))
                .collect(),
        )
    }

    pub fn intersects(&self, other: &ItemSet) -> bool {
        self.0.iter().any(|&x| other.contains(x))
    }

    pub fn labels<'a>(&self, db: &'a TransactionDb) -> Vec<&'a str> {
        self.0.iter().map(|&i| db.label(i)).collect()
    }

    /// Items joined by a space.
    pub fn display(&self, db: &TransactionDb) -> String {
        self.labels(db).join(" ")
    }

    pub fn parse(text: &str, db: &TransactionDb) -> Result<ItemSet> {
        text.split_whitespace()
            .map(|l| {
                db.item_id(l)
                    .ok_or_else(|| Error::UnknownItem(l.to_string()))
            })
            .collect::<Result<Vec<_>>>()
            .map(ItemSet::new)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MiningThresholds {
    pub min_support: f64,
    pub min_confidence: f64,
    pub min_lift: f64,
    pub max_rules: Option<usize>,
}

impl Default for MiningThresholds {
    fn default() -> Self {
        MiningThresholds {
            min_support: 0.1,
            min_confidence: 0.0,
            min_lift: 1.1,
            max_rules: None,
        }
    }
}

impl MiningThresholds {
    pub fn validate(&self) -> Result<()> {
        if !(self.min_support > 0.0) {
            return Err(Error::InvalidParams(format!(
                "min_support must be > 0, got {}",
                self.min_support
            )));
        }
        if !(0.0..=1.0).contains(&self.min_confidence) {
            return Err(Error::InvalidParams(format!(
                "min_confidence must lie in [0, 1], got {}",
                self.min_confidence
            )));
        }
        if !(self.min_lift >= 0.0) {
            return Err(Error::InvalidParams(format!(
                "min_lift must be >= 0, got {}",
                self.min_lift
            )));
        }
        Ok(())
    }
}

/// Smallest count meeting `min_support`: `ceil(min_support · |db|)`, at
/// least 1. A 1e-9 slack absorbs products like `0.1 · 30`.
pub fn min_count(min_support: f64, db_len: usize) -> u64 {
    let x = min_support * db_len as f64;
    ((x - 1e-9).ceil().max(1.0)) as u64
}

/// Frequent itemsets grouped by size, with exact occurrence counts.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FrequentItemsets {
    db_len: usize,
    /// `levels[k - 1]` holds the frequent k-itemsets.
    levels: Vec<BTreeMap<ItemSet, u64>>,
}

impl FrequentItemsets {
    pub fn db_len(&self) -> usize {
        self.db_len
    }

    pub fn level(&self, k: usize) -> Option<&BTreeMap<ItemSet, u64>> {
        k.checked_sub(1).and_then(|i| self.levels.get(i))
    }

    pub fn max_level(&self) -> usize {
        self.levels.len()
    }

    pub fn count(&self, s: &ItemSet) -> Option<u64> {
        self.level(s.len()).and_then(|l| l.get(s)).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&ItemSet, u64)> {
        self.levels
            .iter()
            .flat_map(|l| l.iter().map(|(s, &c)| (s, c)))
    }

    pub fn len(&self) -> usize {
        self.levels.iter().map(BTreeMap::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

pub fn frequent_itemsets(db: &TransactionDb, min_support: f64) -> Result<FrequentItemsets> {
    frequent_itemsets_with(db, min_support, Parallelism::default())
}

pub fn frequent_itemsets_with(
    db: &TransactionDb,
    min_support: f64,
    mode: Parallelism,
) -> Result<FrequentItemsets> {
    if db.is_empty() {
        return Err(Error::Empty("transaction database"));
    }
    if !(min_support > 0.0) {
        return Err(Error::InvalidParams(format!(
            "min_support must be > 0, got {min_support}"
        )));
    }
    let threshold = min_count(min_support, db.len());

    let singles: Vec<ItemSet> = (0..db.items().len() as ItemId)
        .map(|i| ItemSet(vec![i]))
        .collect();
    let mut levels = Vec::new();
    let mut current = count_and_filter(db, singles, threshold, mode);
    while !current.is_empty() {
        let candidates = next_candidates(&current);
        levels.push(current);
        current = count_and_filter(db, candidates, threshold, mode);
    }
    Ok(FrequentItemsets {
        db_len: db.len(),
        levels,
    })
}

/// Joins pairs of frequent (k-1)-itemsets sharing their first k-2 items and
/// drops candidates with an infrequent (k-1)-subset.
fn next_candidates(prev: &BTreeMap<ItemSet, u64>) -> Vec<ItemSet> {
    let sets: Vec<&ItemSet> = prev.keys().collect();
    let mut out = Vec::new();
    for (a_idx, a) in sets.iter().enumerate() {
        let k1 = a.len();
        let prefix = &a.0[..k1 - 1];
        for b in &sets[a_idx + 1..] {
            if &b.0[..k1 - 1] != prefix {
                // sorted order keeps equal prefixes adjacent
                break;
            }
            let mut cand = a.0.clone();
            cand.push(b.0[k1 - 1]);
            let all_frequent = (0..cand.len() - 2).all(|skip| {
                let sub: Vec<ItemId> = cand
                    .iter()
                    .enumerate()
                    .filter(|&(k, _)| k != skip)
                    .map(|(_, &x)| x)
                    .collect();
                prev.contains_key(&ItemSet(sub))
            });
            if all_frequent {
                out.push(ItemSet(cand));
            }
        }
    }
    out
}

const COUNT_CHUNK: usize = 512;

fn count_and_filter(
    db: &TransactionDb,
    candidates: Vec<ItemSet>,
    threshold: u64,
    mode: Parallelism,
) -> BTreeMap<ItemSet, u64> {
    if candidates.is_empty() {
        return BTreeMap::new();
    }
    let chunks: Vec<&[Vec<ItemId>]> = db.transactions().chunks(COUNT_CHUNK).collect();
    let partial = par::map(&chunks, mode, |chunk| {
        let mut counts = vec![0u64; candidates.len()];
        for t in chunk.iter() {
            for (c, cand) in counts.iter_mut().zip(&candidates) {
                if cand.is_subset_of(t) {
                    *c += 1;
                }
            }
        }
        counts
    });
    let mut totals = vec![0u64; candidates.len()];
    for counts in partial {
        for (t, c) in totals.iter_mut().zip(counts) {
            *t += c;
        }
    }
    candidates
        .into_iter()
        .zip(totals)
        .filter(|&(_, c)| c >= threshold)
        .collect()
}

pub fn support_count(db: &TransactionDb, s: &ItemSet) -> u64 {
    db.transactions()
        .iter()
        .filter(|t| s.is_subset_of(t))
        .count() as u64
}

/// Fraction of transactions containing `s`; 1 for the empty set.
pub fn support(db: &TransactionDb, s: &ItemSet) -> f64 {
    if db.is_empty() {
        return 0.0;
    }
    support_count(db, s) as f64 / db.len() as f64
}

/// Raw counts behind a rule `X ⇒ Y`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RuleCounts {
    pub total: u64,
    pub antecedent: u64,
    pub consequent: u64,
    pub both: u64,
}

impl RuleCounts {
    fn r(n: u64, d: u64) -> Rational {
        Ratio::new(n as u128, d as u128)
    }

    pub fn support(&self) -> Rational {
        Self::r(self.both, self.total)
    }

    pub fn confidence(&self) -> Rational {
        Self::r(self.both, self.antecedent)
    }

    /// `P(XY) / (P(X) P(Y))`.
    pub fn lift(&self) -> Rational {
        Ratio::new(
            self.both as u128 * self.total as u128,
            self.antecedent as u128 * self.consequent as u128,
        )
    }

    /// `P(X) P(¬Y) / P(X¬Y)`; `None` stands for +∞ (confidence 1).
    pub fn conviction(&self) -> Option<Rational> {
        let denom = (self.antecedent - self.both) as u128 * self.total as u128;
        (denom != 0).then(|| {
            Ratio::new(
                self.antecedent as u128 * (self.total - self.consequent) as u128,
                denom,
            )
        })
    }
}

fn to_f64(r: Rational) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RuleMeasures {
    pub support: f64,
    pub confidence: f64,
    pub lift: f64,
    /// +∞ when the rule never fails.
    pub conviction: f64,
    pub counts: RuleCounts,
}

impl RuleMeasures {
    pub fn from_counts(counts: RuleCounts) -> Result<Self> {
        if counts.antecedent == 0 || counts.consequent == 0 {
            return Err(Error::InvalidParams(
                "rule measures need non-zero antecedent and consequent support".into(),
            ));
        }
        Ok(RuleMeasures {
            support: to_f64(counts.support()),
            confidence: to_f64(counts.confidence()),
            lift: to_f64(counts.lift()),
            conviction: counts.conviction().map_or(f64::INFINITY, to_f64),
            counts,
        })
    }
}

/// Measures of `X ⇒ Y` counted directly on `db`.
pub fn rule_measures(db: &TransactionDb, x: &ItemSet, y: &ItemSet) -> Result<RuleMeasures> {
    if x.is_empty() || y.is_empty() {
        return Err(Error::InvalidParams("rule sides must be non-empty".into()));
    }
    if x.intersects(y) {
        return Err(Error::InvalidParams("rule sides must be disjoint".into()));
    }
    let mut counts = RuleCounts {
        total: db.len() as u64,
        antecedent: 0,
        consequent: 0,
        both: 0,
    };
    for t in db.transactions() {
        let hx = x.is_subset_of(t);
        let hy = y.is_subset_of(t);
        counts.antecedent += hx as u64;
        counts.consequent += hy as u64;
        counts.both += (hx && hy) as u64;
    }
    if counts.antecedent == 0 {
        return Err(Error::InvalidParams("antecedent has zero support".into()));
    }
    RuleMeasures::from_counts(counts)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    Mined,
    Deduced,
}

impl Provenance {
    pub fn as_str(self) -> &'static str {
        match self {
            Provenance::Mined => "mined",
            Provenance::Deduced => "deduced",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct AssociationRule {
    pub antecedent: ItemSet,
    pub consequent: ItemSet,
    pub measures: RuleMeasures,
    pub provenance: Provenance,
    /// How a deduced rule was obtained.
    pub derivation: Option<std::sync::Arc<Derivation>>,
}

impl AssociationRule {
    pub fn mined(db: &TransactionDb, x: ItemSet, y: ItemSet) -> Result<Self> {
        let measures = rule_measures(db, &x, &y)?;
        Ok(AssociationRule {
            antecedent: x,
            consequent: y,
            measures,
            provenance: Provenance::Mined,
            derivation: None,
        })
    }

    pub fn key(&self) -> (ItemSet, ItemSet) {
        (self.antecedent.clone(), self.consequent.clone())
    }

    pub fn display(&self, db: &TransactionDb) -> String {
        format!(
            "{} => {}",
            self.antecedent.display(db),
            self.consequent.display(db)
        )
    }

    /// Lift descending, support descending, then antecedent and consequent
    /// in label order.
    pub fn rank_cmp(&self, other: &Self) -> Ordering {
        other
            .measures
            .counts
            .lift()
            .cmp(&self.measures.counts.lift())
            .then_with(|| {
                other
                    .measures
                    .counts
                    .support()
                    .cmp(&self.measures.counts.support())
            })
            .then_with(|| self.antecedent.cmp(&other.antecedent))
            .then_with(|| self.consequent.cmp(&other.consequent))
    }
}

/// Every rule `X ⇒ Z∖X` over frequent itemsets `Z` (|Z| ≥ 2) that meets the
/// thresholds, ranked by [`AssociationRule::rank_cmp`].
pub fn mine_rules(db: &TransactionDb, th: &MiningThresholds) -> Result<Vec<AssociationRule>> {
    mine_rules_with(db, th, Parallelism::default())
}

pub fn mine_rules_with(
    db: &TransactionDb,
    th: &MiningThresholds,
    mode: Parallelism,
) -> Result<Vec<AssociationRule>> {
    th.validate()?;
    let freq = frequent_itemsets_with(db, th.min_support, mode)?;
    let total = db.len() as u64;
    let mut rules = Vec::new();
    for (z, both) in freq.iter().filter(|(z, _)| z.len() >= 2) {
        let k = z.len();
        for mask in 1..(1u32 << k) - 1 {
            let (x, y): (Vec<ItemId>, Vec<ItemId>) = {
                let mut x = Vec::new();
                let mut y = Vec::new();
                for (bit, &item) in z.items().iter().enumerate() {
                    if mask >> bit & 1 == 1 {
                        x.push(item);
                    } else {
                        y.push(item);
                    }
                }
                (x, y)
            };
            let (x, y) = (ItemSet(x), ItemSet(y));
            // subsets of a frequent itemset are frequent, so both lookups hit
            let counts = RuleCounts {
                total,
                antecedent: freq.count(&x).expect("antecedent is frequent"),
                consequent: freq.count(&y).expect("consequent is frequent"),
                both,
            };
            let measures = RuleMeasures::from_counts(counts)?;
            if measures.confidence >= th.min_confidence && measures.lift >= th.min_lift {
                rules.push(AssociationRule {
                    antecedent: x,
                    consequent: y,
                    measures,
                    provenance: Provenance::Mined,
                    derivation: None,
                });
            }
        }
    }
    rules.sort_by(AssociationRule::rank_cmp);
    if let Some(max) = th.max_rules {
        rules.truncate(max);
    }
    Ok(rules)
}

pub const RULE_HEADER: [&str; 6] = [
    "antecedent",
    "consequent",
    "support",
    "confidence",
    "lift",
    "conviction",
];

/// Rule CSV; with `provenance` an extra `provenance` column is appended.
pub fn write_rules<W: Write>(
    rules: &[AssociationRule],
    db: &TransactionDb,
    provenance: bool,
    out: W,
) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let mut header: Vec<&str> = RULE_HEADER.to_vec();
    if provenance {
        header.push("provenance");
    }
    w.write_record(&header)?;
    for r in rules {
        let m = &r.measures;
        let mut row = vec![
            r.antecedent.display(db),
            r.consequent.display(db),
            fmt_sig6(m.support),
            fmt_sig6(m.confidence),
            fmt_sig6(m.lift),
            fmt_sig6(m.conviction),
        ];
        if provenance {
            row.push(r.provenance.as_str().to_string());
        }
        w.write_record(&row)?;
    }
    w.flush().map_err(|e| Error::io("<rules csv>", e))?;
    Ok(())
}

/// Reads a rule CSV, resolving labels against `db` and recomputing the
/// measures from it. A `provenance` column, when present, is honoured.
pub fn read_rules<R: Read>(input: R, db: &TransactionDb) -> Result<Vec<AssociationRule>> {
    let mut rd = csv::ReaderBuilder::new()
        .has_headers(false)
        .from_reader(input);
    let mut rules = Vec::new();
    let mut with_provenance = None;
    let mut seen = HashSet::new();
    for rec in rd.records() {
        let rec = rec?;
        let line = rec.position().map_or(0, |p| p.line() as usize);
        let Some(prov) = with_provenance else {
            let cols: Vec<&str> = rec.iter().collect();
            if cols[..cols.len().min(6)] != RULE_HEADER[..] {
                return Err(Error::parse(
                    line,
                    format!("header must start with `{}`", RULE_HEADER.join(",")),
                ));
            }
            with_provenance = Some(cols.get(6) == Some(&"provenance"));
            continue;
        };
        let x = ItemSet::parse(&rec[0], db).map_err(|e| Error::parse(line, e.to_string()))?;
        let y = ItemSet::parse(&rec[1], db).map_err(|e| Error::parse(line, e.to_string()))?;
        let mut rule =
            AssociationRule::mined(db, x, y).map_err(|e| Error::parse(line, e.to_string()))?;
        if prov {
            rule.provenance = match rec.get(6) {
                Some("mined") => Provenance::Mined,
                Some("deduced") => Provenance::Deduced,
                other => {
                    return Err(Error::parse(line, format!("bad provenance {other:?}")));
                }
            };
        }
        if seen.insert(rule.key()) {
            rules.push(rule);
        }
    }
    Ok(rules)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn worked_db() -> TransactionDb {
        TransactionDb::from_labels(&[vec!["A", "B"], vec!["A", "B"], vec!["A", "C"], vec!["B"]])
    }

    fn set(db: &TransactionDb, labels: &[&str]) -> ItemSet {
        ItemSet::new(labels.iter().map(|l| db.item_id(l).unwrap()))
    }

    #[test]
    fn worked_frequent_itemsets() {
        let db = worked_db();
        let f = frequent_itemsets(&db, 0.5).unwrap();
        let all: Vec<(Vec<&str>, u64)> = f.iter().map(|(s, c)| (s.labels(&db), c)).collect();
        assert_eq!(
            all,
            vec![(vec!["A"], 3), (vec!["B"], 3), (vec!["A", "B"], 2)]
        );
        assert_eq!(f.max_level(), 2);
    }

    #[test]
    fn support_threshold_above_every_item() {
        let db = worked_db();
        assert!(frequent_itemsets(&db, 0.8).unwrap().is_empty());
        assert!(frequent_itemsets(&db, 1.1).unwrap().is_empty());
        assert!(frequent_itemsets(&db, 0.0).is_err());
        assert!(frequent_itemsets(&TransactionDb::default(), 0.5).is_err());
    }

    #[test]
    fn min_count_rounding() {
        assert_eq!(min_count(0.1, 30), 3);
        assert_eq!(min_count(0.1, 266), 27);
        assert_eq!(min_count(0.25, 4), 1);
        assert_eq!(min_count(0.01, 4), 1);
    }

    #[test]
    fn support_examples() {
        let db = worked_db();
        assert_eq!(support(&db, &ItemSet::empty()), 1.0);
        assert_eq!(support(&db, &set(&db, &["A"])), 0.75);
        let other = TransactionDb::from_labels(&[vec!["Z"]]);
        // an id not present in any transaction of `db`
        let absent = ItemSet::new([other.item_id("Z").unwrap() + 10]);
        assert_eq!(support(&db, &absent), 0.0);
    }

    #[test]
    fn worked_measures() {
        let db = worked_db();
        let m = rule_measures(&db, &set(&db, &["A"]), &set(&db, &["B"])).unwrap();
        assert_eq!(m.counts.support(), Ratio::new(1, 2));
        assert_eq!(m.counts.confidence(), Ratio::new(2, 3));
        assert_eq!(m.counts.lift(), Ratio::new(8, 9));
        assert_eq!(m.counts.conviction(), Some(Ratio::new(3, 4)));
        assert_eq!(m.support, 0.5);
        assert_eq!(m.lift, 8.0 / 9.0);
    }

    #[test]
    fn independence_and_certainty() {
        let db = TransactionDb::from_labels(&[vec!["X", "Y"], vec!["X"], vec!["Y"], vec!["W"]]);
        let m = rule_measures(&db, &set(&db, &["X"]), &set(&db, &["Y"])).unwrap();
        assert_eq!(m.counts.lift(), Ratio::from_integer(1));

        let db = TransactionDb::from_labels(&[vec!["X", "Y"], vec!["Y"]]);
        let m = rule_measures(&db, &set(&db, &["X"]), &set(&db, &["Y"])).unwrap();
        assert_eq!(m.conviction, f64::INFINITY);
        assert_eq!(m.counts.conviction(), None);
    }

    #[test]
    fn measures_reject_zero_antecedent() {
        let db = TransactionDb::from_labels(&[vec!["X"], vec!["Y"]]);
        assert!(rule_measures(&db, &set(&db, &["X", "Y"]), &ItemSet::new([0])).is_err());
        let db = TransactionDb::from_labels(&[vec!["X"], vec!["Y"], vec!["Z", "Q"]]);
        let r = rule_measures(&db, &set(&db, &["X", "Y"]), &set(&db, &["Z"]));
        assert!(r.is_err());
    }

    #[test]
    fn worked_rules() {
        let db = worked_db();
        let th = MiningThresholds {
            min_support: 0.5,
            min_confidence: 0.0,
            min_lift: 0.0,
            max_rules: None,
        };
        let rules = mine_rules(&db, &th).unwrap();
        let shown: Vec<String> = rules.iter().map(|r| r.display(&db)).collect();
        assert_eq!(shown, ["A => B", "B => A"]);
        for r in &rules {
            assert_eq!(r.measures.lift, 8.0 / 9.0);
            assert_eq!(r.measures.counts.confidence(), Ratio::new(2, 3));
        }
    }

    #[test]
    fn universal_item_gives_no_rules_at_full_support() {
        let db = TransactionDb::from_labels(&[vec!["U", "P"], vec!["U"], vec!["U", "P"]]);
        let th = MiningThresholds {
            min_support: 1.0,
            min_lift: 0.0,
            ..Default::default()
        };
        assert!(mine_rules(&db, &th).unwrap().is_empty());
    }

    #[test]
    fn max_rules_truncates() {
        let db = worked_db();
        let th = MiningThresholds {
            min_support: 0.25,
            min_lift: 0.0,
            max_rules: Some(1),
            ..Default::default()
        };
        assert_eq!(mine_rules(&db, &th).unwrap().len(), 1);
    }

    #[test]
    fn rule_csv_round_trip() {
        let db = worked_db();
        let th = MiningThresholds {
            min_support: 0.25,
            min_lift: 0.0,
            ..Default::default()
        };
        let rules = mine_rules(&db, &th).unwrap();
        let mut buf = Vec::new();
        write_rules(&rules, &db, false, &mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("antecedent,consequent,support,confidence,lift,conviction\n"));
        assert!(text.contains("inf"));
        let back = read_rules(&buf[..], &db).unwrap();
        assert_eq!(back, rules);
    }

    #[test]
    fn rule_csv_unknown_item() {
        let db = worked_db();
        let text = "antecedent,consequent,support,confidence,lift,conviction\nQ,A,0,0,0,0\n";
        let err = read_rules(text.as_bytes(), &db).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }), "{err}");
    }
}
