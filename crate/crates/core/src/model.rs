//! Binary CSP instances: variables over `0..d`, constraints as explicit
//! allowed-tuple relations, and the structural predicates (tightness,
//! functionality) used for statistics.
//!
//! Text format, one instance per file:
//!
//! ```text
//! csp <n> <d> <e>
//! c <i> <j> <G|F|B> <k>
//! <a> <b>        (k lines)
//! ...
//! ```

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::generator::GenParams;

/// Kind declared at generation time. Structural predicates are authoritative
/// for statistics; a `General` constraint may still happen to be functional.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ConstraintKind {
    General,
    Functional,
    BiFunctional,
}

impl ConstraintKind {
    pub fn code(self) -> char {
        match self {
            ConstraintKind::General => 'G',
            ConstraintKind::Functional => 'F',
            ConstraintKind::BiFunctional => 'B',
        }
    }

    pub fn from_code(s: &str) -> Option<Self> {
        match s {
            "G" => Some(ConstraintKind::General),
            "F" => Some(ConstraintKind::Functional),
            "B" => Some(ConstraintKind::BiFunctional),
            _ => None,
        }
    }
}

/// Side on which functionality is checked. `OnJ`: every value of `i` has at
/// most one partner in `j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    OnJ,
    OnI,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Constraint {
    i: usize,
    j: usize,
    d: usize,
    kind: ConstraintKind,
    /// Bit `a * d + b` is set iff `(a, b)` is allowed.
    allowed: BitSet,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConstraintStats {
    pub tightness: f64,
    pub functional_on_j: bool,
    pub functional_on_i: bool,
    pub bifunctional: bool,
}

impl Constraint {
    /// Builds a constraint over scope `{x, y}`. The scope is canonicalized to
    /// `i < j`; when `x > y` the pairs are read as `(value of x, value of y)`
    /// and transposed.
    pub fn new(
        x: usize,
        y: usize,
        d: usize,
        kind: ConstraintKind,
        pairs: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self> {
        if x == y {
            return Err(Error::InvalidParams(format!(
                "constraint scope must be two distinct variables, got ({x}, {y})"
            )));
        }
        if d == 0 {
            return Err(Error::InvalidParams("domain size must be >= 1".into()));
        }
        let swap = x > y;
        let (i, j) = if swap { (y, x) } else { (x, y) };
        let mut allowed = BitSet::new(d * d);
        for (p, q) in pairs {
            let (a, b) = if swap { (q, p) } else { (p, q) };
            if a >= d || b >= d {
                return Err(Error::InvalidParams(format!(
                    "tuple ({p}, {q}) outside domain 0..{d}"
                )));
            }
            if !allowed.insert(a * d + b) {
                return Err(Error::InvalidParams(format!(
                    "duplicate tuple ({p}, {q}) in constraint ({i}, {j})"
                )));
            }
        }
        let c = Constraint {
            i,
            j,
            d,
            kind,
            allowed,
        };
        let ok = match kind {
            ConstraintKind::General => true,
            ConstraintKind::Functional => {
                c.is_functional(Direction::OnJ) || c.is_functional(Direction::OnI)
            }
            ConstraintKind::BiFunctional => c.stats().bifunctional,
        };
        if !ok {
            return Err(Error::InvalidParams(format!(
                "constraint ({i}, {j}) declared {kind:?} but is not"
            )));
        }
        Ok(c)
    }

    pub fn scope(&self) -> (usize, usize) {
        (self.i, self.j)
    }

    pub fn i(&self) -> usize {
        self.i
    }

    pub fn j(&self) -> usize {
        self.j
    }

    pub fn domain_size(&self) -> usize {
        self.d
    }

    pub fn kind(&self) -> ConstraintKind {
        self.kind
    }

    #[inline]
    pub fn allows(&self, a: usize, b: usize) -> bool {
        a < self.d && b < self.d && self.allowed.contains(a * self.d + b)
    }

    pub fn allowed_count(&self) -> usize {
        self.allowed.count()
    }

    /// Allowed pairs in ascending `(a, b)` order.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let d = self.d;
        self.allowed.iter().map(move |k| (k / d, k % d))
    }

    /// Allowed fraction `|allowed| / d²`.
    pub fn tightness(&self) -> f64 {
        self.allowed_count() as f64 / (self.d * self.d) as f64
    }

    pub fn is_functional(&self, dir: Direction) -> bool {
        let d = self.d;
        (0..d).all(|x| {
            let partners = (0..d)
                .filter(|&y| match dir {
                    Direction::OnJ => self.allows(x, y),
                    Direction::OnI => self.allows(y, x),
                })
                .take(2)
                .count();
            partners <= 1
        })
    }

    pub fn stats(&self) -> ConstraintStats {
        let functional_on_j = self.is_functional(Direction::OnJ);
        let functional_on_i = self.is_functional(Direction::OnI);
        ConstraintStats {
            tightness: self.tightness(),
            functional_on_j,
            functional_on_i,
            bifunctional: functional_on_j && functional_on_i,
        }
    }
}

pub fn tightness(c: &Constraint) -> f64 {
    c.tightness()
}

pub fn is_functional(c: &Constraint, dir: Direction) -> bool {
    c.is_functional(dir)
}

pub fn constraint_stats(c: &Constraint) -> ConstraintStats {
    c.stats()
}

#[derive(Clone, Debug, PartialEq)]
pub struct CspInstance {
    n: usize,
    d: usize,
    constraints: Vec<Constraint>,
    pub meta: Option<GenParams>,
}

impl CspInstance {
    pub fn new(n: usize, d: usize, constraints: Vec<Constraint>) -> Result<Self> {
        if n == 0 || d == 0 {
            return Err(Error::InvalidParams(format!(
                "need n >= 1 and d >= 1, got n={n} d={d}"
            )));
        }
        let mut seen = std::collections::HashSet::with_capacity(constraints.len());
        for c in &constraints {
            if c.j >= n {
                return Err(Error::InvalidParams(format!(
                    "constraint ({}, {}) references a variable >= n={n}",
                    c.i, c.j
                )));
            }
            if c.d != d {
                return Err(Error::InvalidParams(format!(
                    "constraint ({}, {}) has domain size {} but instance has {d}",
                    c.i, c.j, c.d
                )));
            }
            if !seen.insert((c.i, c.j)) {
                return Err(Error::InvalidParams(format!(
                    "duplicate constraint scope ({}, {})",
                    c.i, c.j
                )));
            }
        }
        Ok(CspInstance {
            n,
            d,
            constraints,
            meta: None,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    /// Static degree of each variable in the constraint graph.
    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.n];
        for c in &self.constraints {
            deg[c.i] += 1;
            deg[c.j] += 1;
        }
        deg
    }

    /// Checks a complete assignment against every constraint.
    pub fn satisfies(&self, assignment: &[usize]) -> bool {
        assignment.len() == self.n
            && self
                .constraints
                .iter()
                .all(|c| c.allows(assignment[c.i], assignment[c.j]))
    }

    /// Copy without the constraint at `idx`.
    pub fn without_constraint(&self, idx: usize) -> Self {
        let mut constraints = self.constraints.clone();
        constraints.remove(idx);
        CspInstance {
            n: self.n,
            d: self.d,
            constraints,
            meta: self.meta.clone(),
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "csp {} {} {}", self.n, self.d, self.constraints.len());
        for c in &self.constraints {
            let _ = writeln!(
                out,
                "c {} {} {} {}",
                c.i,
                c.j,
                c.kind.code(),
                c.allowed_count()
            );
            for (a, b) in c.pairs() {
                let _ = writeln!(out, "{a} {b}");
            }
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate().map(|(k, l)| (k + 1, l));
        let (ln, header) = lines
            .next()
            .ok_or_else(|| Error::parse(1, "empty instance file"))?;
        let h: Vec<&str> = header.split_whitespace().collect();
        if h.len() != 4 || h[0] != "csp" {
            return Err(Error::parse(ln, "expected `csp <n> <d> <e>`"));
        }
        let n = parse_usize(h[1], ln)?;
        let d = parse_usize(h[2], ln)?;
        let e = parse_usize(h[3], ln)?;
        let mut constraints = Vec::with_capacity(e);
        for _ in 0..e {
            let (ln, line) = lines
                .next()
                .ok_or_else(|| Error::parse(ln + 1, "missing constraint header"))?;
            let f: Vec<&str> = line.split_whitespace().collect();
            if f.len() != 5 || f[0] != "c" {
                return Err(Error::parse(ln, "expected `c <i> <j> <kind> <k>`"));
            }
            let i = parse_usize(f[1], ln)?;
            let j = parse_usize(f[2], ln)?;
            let kind = ConstraintKind::from_code(f[3])
                .ok_or_else(|| Error::parse(ln, format!("unknown kind `{}`", f[3])))?;
            let k = parse_usize(f[4], ln)?;
            let mut pairs = Vec::with_capacity(k);
            for _ in 0..k {
                let (ln, line) = lines
                    .next()
                    .ok_or_else(|| Error::parse(ln + 1, "missing tuple line"))?;
                let mut it = line.split_whitespace();
                let (Some(a), Some(b), None) = (it.next(), it.next(), it.next()) else {
                    return Err(Error::parse(ln, "expected `<a> <b>`"));
                };
                pairs.push((parse_usize(a, ln)?, parse_usize(b, ln)?));
            }
            let c = Constraint::new(i, j, d, kind, pairs)
                .map_err(|err| Error::parse(ln, err.to_string()))?;
            constraints.push(c);
        }
        if let Some((ln, extra)) = lines.find(|(_, l)| !l.trim().is_empty()) {
            return Err(Error::parse(ln, format!("trailing content `{extra}`")));
        }
        CspInstance::new(n, d, constraints).map_err(|err| Error::parse(1, err.to_string()))
    }
}

fn parse_usize(s: &str, line: usize) -> Result<usize> {
    s.parse()
        .map_err(|_| Error::parse(line, format!("expected a non-negative integer, got `{s}`")))
}
