//! Seeded random instance generation and sweep-grid enumeration.
//!
//! Randomness is consumed from one [`Lcg`] seeded with `GenParams::seed`, in
//! this order:
//!
//! 1. scope selection: partial Fisher–Yates over the canonical pair list
//!    `(0,1), (0,2), …, (n-2,n-1)`, one draw per sampled pair;
//! 2. for each sampled pair, in sampled order:
//!    * functional (first `nf` pairs): one unit-float draw deciding
//!      bi-functional, then either `d` draws `below(d)` (one partner per
//!      value) or a Fisher–Yates permutation of `0..d`;
//!    * general: partial Fisher–Yates over the `d²` tuple indices.
//!
//! The resulting constraints are sorted by scope.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Constraint, ConstraintKind, CspInstance};
use crate::rng::Lcg;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GenParams {
    pub n: usize,
    pub d: usize,
    pub e: usize,
    pub nf: usize,
    /// Fraction of allowed tuples in each general constraint.
    pub t: f64,
    #[serde(default)]
    pub bif_share: f64,
    pub seed: u64,
}

/// How `t` is read. The default counts allowed tuples; `Forbidden` counts
/// disallowed ones, as most of the random-CSP literature does.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum TightnessConvention {
    #[default]
    Allowed,
    Forbidden,
}

pub fn pair_count(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// Number of allowed tuples in a general constraint: `round(t·d²)`, ties
/// away from zero. The product is snapped to 1e-9 first so decimal inputs
/// such as `0.35` round the way their decimal value would.
pub fn general_tuple_count(t: f64, d: usize) -> usize {
    let x = t * (d * d) as f64;
    let snapped = (x * 1e9).round() / 1e9;
    snapped.round() as usize
}

impl GenParams {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParams(msg));
        if self.n == 0 || self.d == 0 {
            return bad(format!(
                "need n >= 1 and d >= 1 (n={}, d={})",
                self.n, self.d
            ));
        }
        let pairs = pair_count(self.n);
        if self.e == 0 || self.e > pairs {
            return bad(format!("e={} outside 1..={pairs} for n={}", self.e, self.n));
        }
        if self.nf > self.e {
            return bad(format!("nf={} exceeds e={}", self.nf, self.e));
        }
        if !(0.0..=1.0).contains(&self.t) {
            return bad(format!("t={} outside [0, 1]", self.t));
        }
        if !(0.0..=1.0).contains(&self.bif_share) {
            return bad(format!("bif_share={} outside [0, 1]", self.bif_share));
        }
        Ok(())
    }

    /// Key identifying a sweep point: `(e, nf, t, seed)`.
    pub fn key(&self) -> SweepKey {
        SweepKey {
            e: self.e,
            nf: self.nf,
            t: self.t,
            seed: self.seed,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepKey {
    pub e: usize,
    pub nf: usize,
    pub t: f64,
    pub seed: u64,
}

impl SweepKey {
    pub fn cmp_canonical(&self, other: &Self) -> std::cmp::Ordering {
        (self.e, self.nf)
            .cmp(&(other.e, other.nf))
            .then(self.t.total_cmp(&other.t))
            .then(self.seed.cmp(&other.seed))
    }
}

pub fn generate(p: &GenParams) -> Result<CspInstance> {
    generate_with(p, TightnessConvention::Allowed)
}

pub fn generate_with(p: &GenParams, convention: TightnessConvention) -> Result<CspInstance> {
    p.validate()?;
    let (n, d) = (p.n, p.d);
    let mut rng = Lcg::new(p.seed);

    let mut pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .collect();
    for k in 0..p.e {
        let pick = k + rng.below_usize(pairs.len() - k);
        pairs.swap(k, pick);
    }

    let general_count = match convention {
        TightnessConvention::Allowed => general_tuple_count(p.t, d),
        // t counts forbidden tuples; allowed is the exact complement
        TightnessConvention::Forbidden => d * d - general_tuple_count(p.t, d),
    };

    let mut constraints = Vec::with_capacity(p.e);
    let mut tuples: Vec<usize> = Vec::with_capacity(d * d);
    for (k, &(i, j)) in pairs[..p.e].iter().enumerate() {
        let c = if k < p.nf {
            let bifunctional = rng.next_f64() < p.bif_share;
            if bifunctional {
                let mut perm: Vec<usize> = (0..d).collect();
                for a in 0..d.saturating_sub(1) {
                    let pick = a + rng.below_usize(d - a);
                    perm.swap(a, pick);
                }
                Constraint::new(
                    i,
                    j,
                    d,
                    ConstraintKind::BiFunctional,
                    perm.into_iter().enumerate(),
                )?
            } else {
                let image: Vec<usize> = (0..d).map(|_| rng.below_usize(d)).collect();
                Constraint::new(
                    i,
                    j,
                    d,
                    ConstraintKind::Functional,
                    image.into_iter().enumerate(),
                )?
            }
        } else {
            tuples.clear();
            tuples.extend(0..d * d);
            for s in 0..general_count {
                let pick = s + rng.below_usize(tuples.len() - s);
                tuples.swap(s, pick);
            }
            Constraint::new(
                i,
                j,
                d,
                ConstraintKind::General,
                tuples[..general_count].iter().map(|&x| (x / d, x % d)),
            )?
        };
        constraints.push(c);
    }
    constraints.sort_by_key(|c| c.scope());

    let mut inst = CspInstance::new(n, d, constraints)?;
    inst.meta = Some(p.clone());
    Ok(inst)
}

/// Inclusive integer range `start, start+step, …, <= end`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntAxis {
    pub start: u64,
    pub end: u64,
    pub step: u64,
}

impl IntAxis {
    pub fn new(start: u64, end: u64, step: u64) -> Self {
        IntAxis { start, end, step }
    }

    pub fn single(v: u64) -> Self {
        IntAxis::new(v, v, 1)
    }

    pub fn len(&self) -> usize {
        if self.start > self.end || self.step == 0 {
            0
        } else {
            ((self.end - self.start) / self.step + 1) as usize
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn value(&self, k: usize) -> u64 {
        self.start + self.step * k as u64
    }

    pub fn values(&self) -> Vec<u64> {
        (0..self.len()).map(|k| self.value(k)).collect()
    }
}

/// Inclusive float range generated as `start + k·step` (integer `k`), with
/// `end` included when within 1e-9.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FloatAxis {
    pub start: f64,
    pub end: f64,
    pub step: f64,
}

impl FloatAxis {
    pub fn new(start: f64, end: f64, step: f64) -> Self {
        FloatAxis { start, end, step }
    }

    pub fn single(v: f64) -> Self {
        FloatAxis::new(v, v, 1.0)
    }

    pub fn len(&self) -> usize {
        if !(self.step > 0.0) || self.start > self.end + 1e-9 {
            return 0;
        }
        ((self.end - self.start) / self.step + 1e-9).floor() as usize + 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn value(&self, k: usize) -> f64 {
        let v = self.start + k as f64 * self.step;
        (v * 1e9).round() / 1e9
    }

    pub fn values(&self) -> Vec<f64> {
        (0..self.len()).map(|k| self.value(k)).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub n: usize,
    pub d: usize,
    pub e: IntAxis,
    pub nf: IntAxis,
    pub t: FloatAxis,
    /// Seed start and step (`stps`); the number of seed values per point is
    /// the axis length.
    pub seed: IntAxis,
    pub instances_per_point: usize,
    #[serde(default)]
    pub bif_share: f64,
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::InvalidParams(msg.to_string()));
        if self.e.step == 0 || self.nf.step == 0 || self.seed.step == 0 {
            return bad("sweep steps must be > 0");
        }
        if !(self.t.step > 0.0) {
            return bad("tightness step must be > 0");
        }
        if self.n == 0 || self.d == 0 {
            return bad("n and d must be >= 1");
        }
        if !self.e.is_empty()
            && self.e.values().last().copied().unwrap_or(0) as usize > pair_count(self.n)
        {
            return bad("e axis exceeds the number of variable pairs");
        }
        if !(0.0..=1.0).contains(&self.t.start)
            || self.t.value(self.t.len().saturating_sub(1)) > 1.0 + 1e-9
        {
            return bad("tightness axis must lie in [0, 1]");
        }
        Ok(())
    }

    /// Number of parameter sets the grid will emit.
    pub fn point_count(&self) -> usize {
        sweep_grid(self).map(|g| g.len()).unwrap_or(0)
    }
}

/// Cartesian product of the axes, `e` outermost, then `nf`, `t`, seed value
/// and instance index. The k-th emitted parameter set gets seed
/// `seed.start + seed.step · k`, so every instance in the sweep has its own
/// seed. Points with `nf > e` or `e == 0` are skipped.
pub fn sweep_grid(cfg: &SweepConfig) -> Result<Vec<GenParams>> {
    cfg.validate()?;
    let seeds_per_point = cfg.seed.len() * cfg.instances_per_point;
    let mut out = Vec::new();
    for e in cfg.e.values() {
        for nf in cfg.nf.values() {
            if nf > e || e == 0 {
                continue;
            }
            for t in cfg.t.values() {
                for _ in 0..seeds_per_point {
                    let k = out.len() as u64;
                    out.push(GenParams {
                        n: cfg.n,
                        d: cfg.d,
                        e: e as usize,
                        nf: nf as usize,
                        t,
                        bif_share: cfg.bif_share,
                        seed: cfg.seed.start.wrapping_add(cfg.seed.step.wrapping_mul(k)),
                    });
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Direction;

    fn params(n: usize, d: usize, e: usize, nf: usize, t: f64, seed: u64) -> GenParams {
        GenParams {
            n,
            d,
            e,
            nf,
            t,
            bif_share: 0.0,
            seed,
        }
    }

    #[test]
    fn full_tightness_gives_full_relations() {
        let inst = generate(&params(3, 2, 3, 0, 1.0, 42)).unwrap();
        assert_eq!(inst.constraints().len(), 3);
        for c in inst.constraints() {
            assert_eq!(c.allowed_count(), 4);
            assert_eq!(c.kind(), ConstraintKind::General);
        }
    }

    #[test]
    fn functional_constraints_have_d_tuples() {
        let inst = generate(&params(4, 3, 2, 2, 0.5, 7)).unwrap();
        for c in inst.constraints() {
            assert_eq!(c.allowed_count(), 3);
            assert!(c.is_functional(Direction::OnJ));
            assert_eq!(c.kind(), ConstraintKind::Functional);
        }
    }

    #[test]
    fn deterministic_text() {
        let p = params(10, 5, 12, 3, 0.4, 1);
        assert_eq!(
            generate(&p).unwrap().to_text(),
            generate(&p).unwrap().to_text()
        );
    }

    #[test]
    fn golden_ratio_rounding() {
        // 0.618 * 25 = 15.45
        assert_eq!(general_tuple_count(0.618, 5), 15);
        // exact ties round away from zero
        assert_eq!(general_tuple_count(0.5, 3), 5);
        assert_eq!(general_tuple_count(0.125, 2), 1);
    }

    #[test]
    fn bifunctional_share_one() {
        let mut p = params(6, 5, 8, 8, 0.3, 3);
        p.bif_share = 1.0;
        let inst = generate(&p).unwrap();
        for c in inst.constraints() {
            assert_eq!(c.kind(), ConstraintKind::BiFunctional);
            assert!(c.stats().bifunctional);
            assert_eq!(c.allowed_count(), 5);
        }
    }

    #[test]
    fn forbidden_convention_inverts() {
        let p = params(5, 4, 4, 0, 0.25, 11);
        let inst = generate_with(&p, TightnessConvention::Forbidden).unwrap();
        for c in inst.constraints() {
            assert_eq!(c.allowed_count(), 12);
        }
    }

    #[test]
    fn rejects_invalid_params() {
        assert!(generate(&params(3, 2, 4, 0, 0.5, 0)).is_err());
        assert!(generate(&params(3, 2, 2, 3, 0.5, 0)).is_err());
        assert!(generate(&params(3, 2, 0, 0, 0.5, 0)).is_err());
        assert!(generate(&params(3, 2, 2, 0, 1.5, 0)).is_err());
    }

    #[test]
    fn axis_lengths() {
        assert_eq!(FloatAxis::new(0.30, 0.75, 0.01).len(), 46);
        assert_eq!(
            IntAxis::new(344, 710, 122).values(),
            vec![344, 466, 588, 710]
        );
        assert_eq!(IntAxis::new(100, 1076, 122).len(), 9);
        assert_eq!(FloatAxis::new(0.30, 0.75, 0.05).values()[9], 0.75);
        assert!(IntAxis::new(5, 4, 1).is_empty());
    }

    fn small_sweep() -> SweepConfig {
        SweepConfig {
            n: 6,
            d: 3,
            e: IntAxis::new(2, 4, 2),
            nf: IntAxis::new(0, 1, 1),
            t: FloatAxis::new(0.3, 0.4, 0.1),
            seed: IntAxis::new(100, 106, 3),
            instances_per_point: 2,
            bif_share: 0.0,
        }
    }

    #[test]
    fn grid_order_and_seeds() {
        let g = sweep_grid(&small_sweep()).unwrap();
        // 2 e × 2 nf × 2 t × (3 seeds × 2 instances)
        assert_eq!(g.len(), 48);
        assert_eq!((g[0].e, g[0].nf, g[0].t), (2, 0, 0.3));
        assert_eq!((g[6].e, g[6].nf, g[6].t), (2, 0, 0.4));
        assert_eq!((g[12].e, g[12].nf), (2, 1));
        assert_eq!(g[24].e, 4);
        for (k, p) in g.iter().enumerate() {
            assert_eq!(p.seed, 100 + 3 * k as u64);
        }
    }

    #[test]
    fn empty_grid() {
        let mut cfg = small_sweep();
        cfg.instances_per_point = 0;
        assert!(sweep_grid(&cfg).unwrap().is_empty());
        let mut cfg = small_sweep();
        cfg.e = IntAxis::new(5, 4, 1);
        assert!(sweep_grid(&cfg).unwrap().is_empty());
        let mut cfg = small_sweep();
        cfg.e.step = 0;
        assert!(sweep_grid(&cfg).is_err());
    }
}
