//! Rule deduction with Armstrong's axioms: derive new rules from mined ones
//! by transitivity and augmentation, close the set under bounded
//! application, reduce it to a non-redundant cover, and summarize the items
//! that travel with a focal item.
//!
//! Deduced rules take their form from the axiom and their measures from the
//! transaction database, so a deduced rule reports its own empirical
//! support, which may be low.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::Write as _;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::bitset::BitSet;
use crate::dataset::TransactionDb;
use crate::error::{Error, Result};
use crate::miner::{rule_measures, AssociationRule, ItemSet, Provenance};
use crate::numfmt::fmt_sig6;
use crate::par::{self, Parallelism};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeductionCaps {
    pub max_side_items: usize,
    pub max_generations: usize,
}

impl Default for DeductionCaps {
    fn default() -> Self {
        DeductionCaps {
            max_side_items: 4,
            max_generations: 8,
        }
    }
}

impl DeductionCaps {
    pub fn validate(&self) -> Result<()> {
        if self.max_side_items == 0 || self.max_generations == 0 {
            return Err(Error::InvalidParams(
                "deduction caps must both be >= 1".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Axiom {
    Transitivity,
    Augmentation,
    Decomposition,
}

/// `(antecedent, consequent)`
pub type Form = (ItemSet, ItemSet);

/// How a deduced rule was obtained: the axiom and its premises. Premises
/// carry their own derivations, so the chain back to the input rules can be
/// replayed even when an intermediate rule is not part of the final set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Derivation {
    pub axiom: Axiom,
    pub premises: Vec<Premise>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Premise {
    pub antecedent: ItemSet,
    pub consequent: ItemSet,
    /// `None` for an input rule.
    pub derivation: Option<Arc<Derivation>>,
}

impl Premise {
    pub fn of(r: &AssociationRule) -> Self {
        Premise {
            antecedent: r.antecedent.clone(),
            consequent: r.consequent.clone(),
            derivation: r.derivation.clone(),
        }
    }

    pub fn key(&self) -> Form {
        (self.antecedent.clone(), self.consequent.clone())
    }
}

impl Derivation {
    /// Replays the derivation of `form` down to the input rules. Returns the
    /// input rules it rests on, or `None` if some step does not follow from
    /// its premises.
    pub fn replay(&self, form: &Form) -> Option<BTreeSet<Form>> {
        let p = &self.premises;
        let side = |k: usize| p.get(k).map(|q| (&q.antecedent, &q.consequent));
        let ok = match self.axiom {
            Axiom::Transitivity => transitivity_form(side(0)?, side(1)?).as_ref() == Some(form),
            Axiom::Augmentation => {
                augmentation_form(side(0)?, side(1)?, usize::MAX).as_ref() == Some(form)
            }
            Axiom::Decomposition => decomposition_forms(side(0)?).contains(form),
        };
        if !ok {
            return None;
        }
        let mut leaves = BTreeSet::new();
        for q in p {
            match &q.derivation {
                Some(d) => leaves.extend(d.replay(&q.key())?),
                None => {
                    leaves.insert(q.key());
                }
            }
        }
        Some(leaves)
    }
}

/// `X ⇒ Y, Y ⇒ Z ⊢ X ⇒ Z`, requiring `Y` to match exactly and `X ∩ Z = ∅`.
pub fn transitivity_form(r1: (&ItemSet, &ItemSet), r2: (&ItemSet, &ItemSet)) -> Option<Form> {
    let ((x, y), (y2, z)) = (r1, r2);
    if y != y2 || x.intersects(z) || x.is_empty() || z.is_empty() {
        return None;
    }
    Some((x.clone(), z.clone()))
}

/// `X ⇒ Y, Z ⇒ W ⊢ X∪Z ⇒ (Y∪W) ∖ (X∪Z)`. Items on both sides stay in the
/// antecedent. No result when the consequent empties or a side exceeds
/// `max_side`.
pub fn augmentation_form(
    r1: (&ItemSet, &ItemSet),
    r2: (&ItemSet, &ItemSet),
    max_side: usize,
) -> Option<Form> {
    let ant = r1.0.union(r2.0);
    let cons = r1.1.union(r2.1).difference(&ant);
    if ant.is_empty() || cons.is_empty() || ant.len() > max_side || cons.len() > max_side {
        return None;
    }
    Some((ant, cons))
}

/// `X ⇒ Y∪W ⊢ X ⇒ Y` for every non-empty proper subset of the consequent.
pub fn decomposition_forms(r: (&ItemSet, &ItemSet)) -> Vec<Form> {
    let items = r.1.items();
    let k = items.len();
    if !(2..=16).contains(&k) {
        return Vec::new();
    }
    (1..(1u32 << k) - 1)
        .map(|mask| {
            let sub = ItemSet::new(
                items
                    .iter()
                    .enumerate()
                    .filter(|&(b, _)| mask >> b & 1 == 1)
                    .map(|(_, &i)| i),
            );
            (r.0.clone(), sub)
        })
        .collect()
}

fn sides(r: &AssociationRule) -> (&ItemSet, &ItemSet) {
    (&r.antecedent, &r.consequent)
}

fn deduced(
    db: &TransactionDb,
    form: Form,
    axiom: Axiom,
    premises: Vec<Premise>,
) -> Option<AssociationRule> {
    // a deduced antecedent that never occurs has no measures and is dropped
    let measures = rule_measures(db, &form.0, &form.1).ok()?;
    Some(AssociationRule {
        antecedent: form.0,
        consequent: form.1,
        measures,
        provenance: Provenance::Deduced,
        derivation: Some(Arc::new(Derivation { axiom, premises })),
    })
}

pub fn transitivity(
    r1: &AssociationRule,
    r2: &AssociationRule,
    db: &TransactionDb,
) -> Option<AssociationRule> {
    let form = transitivity_form(sides(r1), sides(r2))?;
    deduced(
        db,
        form,
        Axiom::Transitivity,
        vec![Premise::of(r1), Premise::of(r2)],
    )
}

pub fn augmentation(
    r1: &AssociationRule,
    r2: &AssociationRule,
    db: &TransactionDb,
    caps: &DeductionCaps,
) -> Option<AssociationRule> {
    let form = augmentation_form(sides(r1), sides(r2), caps.max_side_items)?;
    deduced(
        db,
        form,
        Axiom::Augmentation,
        vec![Premise::of(r1), Premise::of(r2)],
    )
}

/// Antecedent → consequents of every rule seen so far, for the weakening
/// test.
#[derive(Default)]
struct ByAntecedent(HashMap<ItemSet, Vec<ItemSet>>);

impl ByAntecedent {
    fn insert(&mut self, (a, c): &Form) {
        self.0.entry(a.clone()).or_default().push(c.clone());
    }

    /// True when a known rule has a strictly smaller antecedent and a
    /// consequent covering `form`'s, making `form` a weakening of it.
    fn dominates(&self, form: &Form) -> bool {
        let (ant, cons) = form;
        let covers = |a: &ItemSet| {
            self.0
                .get(a)
                .is_some_and(|cs| cs.iter().any(|c| cons.is_subset(c)))
        };
        let items = ant.items();
        if items.len() <= 16 {
            let full = (1u32 << items.len()) - 1;
            (1..full).any(|mask| {
                covers(&ItemSet::new(
                    items
                        .iter()
                        .enumerate()
                        .filter(|&(b, _)| mask >> b & 1 == 1)
                        .map(|(_, &i)| i),
                ))
            })
        } else {
            self.0.iter().any(|(a, cs)| {
                a.len() < ant.len() && a.is_subset(ant) && cs.iter().any(|c| cons.is_subset(c))
            })
        }
    }
}

/// Transactions containing each item, for quick co-occurrence tests.
struct Tidsets(Vec<BitSet>);

impl Tidsets {
    fn new(db: &TransactionDb) -> Self {
        let mut sets = vec![BitSet::new(db.len()); db.items().len()];
        for (t, items) in db.transactions().iter().enumerate() {
            for &i in items {
                sets[i as usize].insert(t);
            }
        }
        Tidsets(sets)
    }

    fn of(&self, s: &ItemSet, len: usize) -> BitSet {
        let mut out = BitSet::full(len);
        for &i in s.items() {
            out.intersect_with(&self.0[i as usize]);
        }
        out
    }

    fn of_form(&self, (a, c): &Form, len: usize) -> BitSet {
        self.of(&a.union(c), len)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeduceOptions {
    pub caps: DeductionCaps,
    /// Also split consequents (`X ⇒ YW` gives `X ⇒ Y` and `X ⇒ W`).
    pub decomposition: bool,
}

impl Default for DeduceOptions {
    fn default() -> Self {
        DeduceOptions {
            caps: DeductionCaps::default(),
            decomposition: true,
        }
    }
}

pub fn closure(
    rules: &[AssociationRule],
    db: &TransactionDb,
    caps: &DeductionCaps,
) -> Vec<AssociationRule> {
    closure_with(
        rules,
        db,
        &DeduceOptions {
            caps: *caps,
            ..Default::default()
        },
        Parallelism::default(),
    )
}

/// Applies transitivity and augmentation (and decomposition when enabled) to
/// every pair of rules until nothing new appears or the generation cap is
/// reached. A candidate is kept only if its two sides occur together in at
/// least one transaction, and only if it is not a weakening of a known rule
/// (larger antecedent, covered consequent). Returns the input rules followed
/// by the deduced ones, each group in key order.
pub fn closure_with(
    rules: &[AssociationRule],
    db: &TransactionDb,
    opts: &DeduceOptions,
    mode: Parallelism,
) -> Vec<AssociationRule> {
    let mut set: BTreeMap<Form, AssociationRule> = BTreeMap::new();
    let mut index = ByAntecedent::default();
    for r in rules {
        if let std::collections::btree_map::Entry::Vacant(slot) = set.entry(r.key()) {
            index.insert(slot.key());
            slot.insert(r.clone());
        }
    }
    let max_side = opts.caps.max_side_items;
    let tids = Tidsets::new(db);
    let n = db.len();

    for _ in 0..opts.caps.max_generations {
        let current: Vec<&AssociationRule> = set.values().collect();
        let joint: Vec<BitSet> = current.iter().map(|r| tids.of_form(&r.key(), n)).collect();
        let mut by_ant: HashMap<&ItemSet, Vec<usize>> = HashMap::new();
        for (k, r) in current.iter().enumerate() {
            by_ant.entry(&r.antecedent).or_default().push(k);
        }
        let idx: Vec<usize> = (0..current.len()).collect();
        let proposals: Vec<Vec<(Form, Axiom, Vec<usize>)>> = par::map(&idx, mode, |&i| {
            let r1 = current[i];
            let mut out = Vec::new();
            let mut local = BTreeSet::new();
            let mut push = |f: Form, axiom, premises: Vec<usize>, out: &mut Vec<_>| {
                if !set.contains_key(&f) && local.insert(f.clone()) {
                    out.push((f, axiom, premises));
                }
            };
            for &j in by_ant.get(&r1.consequent).into_iter().flatten() {
                let r2 = current[j];
                if let Some(f) = transitivity_form(sides(r1), sides(r2)) {
                    if !tids.of_form(&f, n).is_empty() {
                        push(f, Axiom::Transitivity, vec![i, j], &mut out);
                    }
                }
            }
            // augmentation is symmetric, so each unordered pair once
            for j in i..current.len() {
                if !joint[i].intersects(&joint[j]) {
                    continue;
                }
                let r2 = current[j];
                if let Some(f) = augmentation_form(sides(r1), sides(r2), max_side) {
                    push(f, Axiom::Augmentation, vec![i, j], &mut out);
                }
            }
            if opts.decomposition {
                for f in decomposition_forms(sides(r1)) {
                    push(f, Axiom::Decomposition, vec![i], &mut out);
                }
            }
            out
        });

        let mut fresh: BTreeMap<Form, AssociationRule> = BTreeMap::new();
        for (form, axiom, premises) in proposals.into_iter().flatten() {
            if fresh.contains_key(&form) || index.dominates(&form) {
                continue;
            }
            let premises = premises.iter().map(|&k| Premise::of(current[k])).collect();
            if let Some(rule) = deduced(db, form.clone(), axiom, premises) {
                index.insert(&form);
                fresh.insert(form, rule);
            }
        }
        if fresh.is_empty() {
            break;
        }
        set.extend(fresh);
    }

    // Which weakenings got in above depends on the order rules appeared;
    // dropping every deduced rule that a final rule dominates makes the
    // result independent of it. Domination is transitive, so each dropped
    // rule has an undominated dominator that stays.
    let mut final_index = ByAntecedent::default();
    for k in set.keys() {
        final_index.insert(k);
    }
    let (mut mined, deduced): (Vec<_>, Vec<_>) = set
        .into_values()
        .filter(|r| r.provenance == Provenance::Mined || !final_index.dominates(&r.key()))
        .partition(|r| r.provenance == Provenance::Mined);
    mined.extend(deduced);
    mined
}

/// Whether `target` follows from `pool` by one transitivity or augmentation
/// step (no side cap).
fn derivable(target: &Form, pool: &[&Form]) -> bool {
    let (ant, cons) = target;
    let by_key: BTreeSet<&Form> = pool.iter().copied().collect();
    // transitivity: (A ⇒ Y) and (Y ⇒ C)
    for (a1, y) in pool {
        if a1 == ant && by_key.contains(&(y.clone(), cons.clone())) {
            return true;
        }
    }
    // augmentation: both premises must live inside the target's items
    let scope = ant.union(cons);
    let fits: Vec<&&Form> = pool
        .iter()
        .filter(|(a, c)| a.is_subset(ant) && c.is_subset(&scope))
        .collect();
    for (k, r1) in fits.iter().enumerate() {
        for r2 in &fits[k..] {
            if let Some(f) = augmentation_form((&r1.0, &r1.1), (&r2.0, &r2.1), usize::MAX) {
                if &f == target {
                    return true;
                }
            }
        }
    }
    false
}

/// Greedy non-redundant cover: repeatedly drops any rule that one
/// transitivity or augmentation step rebuilds from the others. Rules that
/// weaken another rule of the input are kept, since the closure would not
/// re-derive them. Rules are visited largest first (total items, then
/// antecedent size), then in key order, so the result is reproducible.
pub fn minimize(rules: &[AssociationRule]) -> Vec<AssociationRule> {
    let mut kept: Vec<AssociationRule> = Vec::new();
    let mut seen = BTreeSet::new();
    let mut index = ByAntecedent::default();
    for r in rules {
        if seen.insert(r.key()) {
            index.insert(&r.key());
            kept.push(r.clone());
        }
    }
    kept.sort_by(|a, b| {
        let size = |r: &AssociationRule| r.antecedent.len() + r.consequent.len();
        size(b)
            .cmp(&size(a))
            .then(b.antecedent.len().cmp(&a.antecedent.len()))
            .then_with(|| a.key().cmp(&b.key()))
    });

    loop {
        let mut changed = false;
        let mut k = 0;
        while k < kept.len() {
            let target = kept[k].key();
            let pool: Vec<Form> = kept
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != k)
                .map(|(_, r)| r.key())
                .collect();
            let pool_refs: Vec<&Form> = pool.iter().collect();
            if !index.dominates(&target) && derivable(&target, &pool_refs) {
                kept.remove(k);
                changed = true;
            } else {
                k += 1;
            }
        }
        if !changed {
            break;
        }
    }
    kept
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RuleSummary {
    pub antecedent: Vec<String>,
    pub consequent: Vec<String>,
    pub support: f64,
    pub confidence: f64,
    pub lift: f64,
    /// `null` stands for +∞.
    pub conviction: Option<f64>,
    pub provenance: Provenance,
}

impl RuleSummary {
    fn of(r: &AssociationRule, db: &TransactionDb) -> Self {
        let round = crate::numfmt::round_sig6;
        let m = &r.measures;
        RuleSummary {
            antecedent: r
                .antecedent
                .labels(db)
                .into_iter()
                .map(String::from)
                .collect(),
            consequent: r
                .consequent
                .labels(db)
                .into_iter()
                .map(String::from)
                .collect(),
            support: round(m.support),
            confidence: round(m.confidence),
            lift: round(m.lift),
            conviction: m.conviction.is_finite().then(|| round(m.conviction)),
            provenance: r.provenance,
        }
    }

    fn display(&self) -> String {
        format!(
            "{} => {}",
            self.antecedent.join(" "),
            self.consequent.join(" ")
        )
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PatternItem {
    pub item: String,
    pub lift: f64,
    /// Highest-lift rule in which the item appears with the focal item.
    pub rule: RuleSummary,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AttributePattern {
    pub attribute: String,
    pub items: Vec<PatternItem>,
}

/// Items that co-occur with a focal item across a rule set, grouped by
/// attribute, with the supporting rules.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PatternReport {
    pub focal: String,
    pub attributes: Vec<AttributePattern>,
    /// Rules mentioning the focal item, best first.
    pub rules: Vec<RuleSummary>,
}

impl PatternReport {
    pub fn empty(focal: &str) -> Self {
        PatternReport {
            focal: focal.to_string(),
            attributes: Vec::new(),
            rules: Vec::new(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.attributes.is_empty()
    }

    /// Focal item in the centre, one line per surrounding attribute.
    pub fn to_text(&self) -> String {
        let mut out = format!("{}\n", self.focal);
        for a in &self.attributes {
            let _ = writeln!(out, "  {}:", a.attribute);
            for it in &a.items {
                let _ = writeln!(
                    out,
                    "    {}  lift {}  via {}",
                    it.item,
                    fmt_sig6(it.lift),
                    it.rule.display()
                );
            }
        }
        out
    }
}

fn attribute_of(label: &str) -> &str {
    label.split_once('=').map_or(label, |(a, _)| a)
}

pub fn pattern_report(
    rules: &[AssociationRule],
    focal: &str,
    db: &TransactionDb,
) -> Result<PatternReport> {
    let focal_id = db
        .item_id(focal)
        .ok_or_else(|| Error::UnknownItem(focal.to_string()))?;
    let mut with_focal: Vec<&AssociationRule> = rules
        .iter()
        .filter(|r| r.antecedent.contains(focal_id) || r.consequent.contains(focal_id))
        .collect();
    if with_focal.is_empty() {
        return Err(Error::UnknownItem(focal.to_string()));
    }
    with_focal.sort_by(|a, b| a.rank_cmp(b));

    // first hit in rank order is the highest-lift rule for that item
    let mut best: HashMap<u32, &AssociationRule> = HashMap::new();
    for r in &with_focal {
        for &item in r.antecedent.items().iter().chain(r.consequent.items()) {
            if item != focal_id {
                best.entry(item).or_insert(r);
            }
        }
    }
    let mut grouped: BTreeMap<&str, Vec<PatternItem>> = BTreeMap::new();
    let mut items: Vec<_> = best.into_iter().collect();
    items.sort_by_key(|&(id, _)| id);
    for (id, r) in items {
        let label = db.label(id);
        grouped
            .entry(attribute_of(label))
            .or_default()
            .push(PatternItem {
                item: label.to_string(),
                lift: crate::numfmt::round_sig6(r.measures.lift),
                rule: RuleSummary::of(r, db),
            });
    }
    Ok(PatternReport {
        focal: focal.to_string(),
        attributes: grouped
            .into_iter()
            .map(|(a, items)| AttributePattern {
                attribute: a.to_string(),
                items,
            })
            .collect(),
        rules: with_focal.iter().map(|r| RuleSummary::of(r, db)).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const T: &str = "Tightness=0.620";
    const H: &str = "Classification=Hard";
    const N: &str = "Satisfiability=No";

    fn db() -> TransactionDb {
        TransactionDb::from_labels(&[
            vec![T, H, N],
            vec![T, H, N],
            vec![T, "Classification=Medium", N],
            vec!["Tightness=0.300", H, N],
            vec![
                "Tightness=0.300",
                "Classification=Medium",
                "Satisfiability=Yes",
            ],
        ])
    }

    fn set(db: &TransactionDb, labels: &[&str]) -> ItemSet {
        ItemSet::new(labels.iter().map(|l| db.item_id(l).unwrap()))
    }

    fn rule(db: &TransactionDb, x: &[&str], y: &[&str]) -> AssociationRule {
        AssociationRule::mined(db, set(db, x), set(db, y)).unwrap()
    }

    #[test]
    fn transitivity_chains_exact_match() {
        let db = db();
        let r1 = rule(&db, &[H], &[N]);
        let r2 = rule(&db, &[T], &[H]);
        let r3 = transitivity(&r2, &r1, &db).unwrap();
        assert_eq!(r3.display(&db), format!("{T} => {N}"));
        assert_eq!(r3.provenance, Provenance::Deduced);
        assert_eq!(
            r3.measures,
            rule_measures(&db, &set(&db, &[T]), &set(&db, &[N])).unwrap()
        );
        assert!(transitivity(&r1, &r2, &db).is_none());
        // X ⇒ Y, Y ⇒ X would give X ⇒ X
        let back = rule(&db, &[N], &[H]);
        assert!(transitivity(&r1, &back, &db).is_none());
    }

    #[test]
    fn augmentation_merges_shared_antecedent() {
        let db = db();
        let caps = DeductionCaps::default();
        let r2 = rule(&db, &[T], &[H]);
        let r3 = rule(&db, &[T], &[N]);
        let r4 = augmentation(&r2, &r3, &db, &caps).unwrap();
        assert_eq!(r4.display(&db), format!("{T} => {H} {N}"));
        let same = augmentation(&r2, &r2, &db, &caps).unwrap();
        assert_eq!(same.key(), r2.key());
        let tiny = DeductionCaps {
            max_side_items: 1,
            ..caps
        };
        assert!(augmentation(&r2, &r3, &db, &tiny).is_none());
    }

    #[test]
    fn worked_closure_and_minimize() {
        let db = db();
        let r1 = rule(&db, &[H], &[N]);
        let r2 = rule(&db, &[T], &[H]);
        let closed = closure(&[r1.clone(), r2.clone()], &db, &DeductionCaps::default());
        let mut shown: Vec<String> = closed.iter().map(|r| r.display(&db)).collect();
        shown.sort();
        let mut expect = vec![
            format!("{H} => {N}"),
            format!("{T} => {H}"),
            format!("{T} => {N}"),
            format!("{T} => {H} {N}"),
        ];
        expect.sort();
        assert_eq!(shown, expect);

        let min = minimize(&closed);
        let keys: BTreeSet<Form> = min.iter().map(|r| r.key()).collect();
        assert_eq!(keys, BTreeSet::from([r1.key(), r2.key()]));

        let reclosed = closure(&min, &db, &DeductionCaps::default());
        assert_eq!(reclosed, closed);
    }

    #[test]
    fn closure_of_nothing() {
        assert!(closure(&[], &db(), &DeductionCaps::default()).is_empty());
    }

    #[test]
    fn minimize_singleton() {
        let db = db();
        let r = rule(&db, &[T], &[H]);
        assert_eq!(minimize(std::slice::from_ref(&r)), vec![r]);
    }

    #[test]
    fn derivations_replay() {
        let db = db();
        let mined = vec![
            rule(&db, &[H], &[N]),
            rule(&db, &[T], &[H]),
            rule(&db, &[N], &[T]),
        ];
        let closed = closure(&mined, &db, &DeductionCaps::default());
        let inputs: BTreeSet<Form> = mined.iter().map(|r| r.key()).collect();
        let mut deduced = 0;
        for r in closed
            .iter()
            .filter(|r| r.provenance == Provenance::Deduced)
        {
            let d = r.derivation.as_ref().unwrap();
            let leaves = d.replay(&r.key()).expect("derivation replays");
            assert!(!leaves.is_empty() && leaves.is_subset(&inputs));
            assert!(!r.antecedent.intersects(&r.consequent));
            deduced += 1;
        }
        assert!(deduced > 0);

        // a derivation claiming the wrong form does not replay
        let r = closed.iter().find(|r| r.derivation.is_some()).unwrap();
        let wrong = (r.consequent.clone(), r.antecedent.clone());
        assert!(r.derivation.as_ref().unwrap().replay(&wrong).is_none());
    }

    #[test]
    fn report_lists_co_occurring_items() {
        let db = db();
        let rules = vec![rule(&db, &[T], &[H])];
        let rep = pattern_report(&rules, H, &db).unwrap();
        assert_eq!(rep.attributes.len(), 1);
        assert_eq!(rep.attributes[0].attribute, "Tightness");
        assert_eq!(rep.attributes[0].items[0].item, T);
        assert!(rep.to_text().starts_with(H));

        assert!(pattern_report(&rules, N, &db).is_err());
        assert!(pattern_report(&rules, "nope=1", &db).is_err());
    }
}
