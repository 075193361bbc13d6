use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use super::ac::ac2001;
use super::domain::DomainState;
use super::network::Network;
use crate::model::CspInstance;

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SolveLimits {
    /// Wall-clock budget in seconds.
    pub time_budget: Option<f64>,
    pub backtrack_budget: Option<u64>,
}

impl SolveLimits {
    pub fn unlimited() -> Self {
        SolveLimits::default()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SolveStatus {
    Sat,
    Unsat,
    Timeout,
}

impl SolveStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            SolveStatus::Sat => "sat",
            SolveStatus::Unsat => "unsat",
            SolveStatus::Timeout => "timeout",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolveResult {
    pub status: SolveStatus,
    pub assignment: Option<Vec<usize>>,
    /// Times the search retreated from a variable after exhausting its values.
    pub backtracks: u64,
    /// Assignments tried.
    pub nodes: u64,
    /// Seconds spent in the solve (monotonic clock).
    pub elapsed: f64,
}

impl SolveResult {
    /// `status,backtracks,nodes,elapsed_s`
    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{}",
            self.status.as_str(),
            self.backtracks,
            self.nodes,
            crate::numfmt::fmt_sig6(self.elapsed)
        )
    }
}

/// Maintaining-arc-consistency search by default; `mac(false)` gives plain
/// chronological backtracking after a single root propagation.
#[derive(Clone, Debug)]
pub struct Solver<'a> {
    inst: &'a CspInstance,
    limits: SolveLimits,
    mac: bool,
}

pub fn solve(inst: &CspInstance, limits: SolveLimits) -> SolveResult {
    Solver::new(inst).limits(limits).solve()
}

enum Flow {
    Sat,
    Unsat,
    Timeout,
}

struct Search<'a> {
    inst: &'a CspInstance,
    net: Network,
    order: Vec<usize>,
    /// Position of each variable in `order`.
    rank: Vec<usize>,
    mac: bool,
    deadline: Option<Instant>,
    backtrack_budget: Option<u64>,
    values: Vec<usize>,
    nodes: u64,
    backtracks: u64,
}

impl<'a> Solver<'a> {
    pub fn new(inst: &'a CspInstance) -> Self {
        Solver {
            inst,
            limits: SolveLimits::default(),
            mac: true,
        }
    }

    pub fn limits(mut self, limits: SolveLimits) -> Self {
        self.limits = limits;
        self
    }

    pub fn mac(mut self, mac: bool) -> Self {
        self.mac = mac;
        self
    }

    pub fn solve(self) -> SolveResult {
        let start = Instant::now();
        let net = Network::new(self.inst);
        let order = net.max_degree_order();
        let mut rank = vec![0; order.len()];
        for (k, &v) in order.iter().enumerate() {
            rank[v] = k;
        }
        let mut search = Search {
            inst: self.inst,
            order,
            rank,
            mac: self.mac,
            deadline: self
                .limits
                .time_budget
                .map(|s| start + Duration::from_secs_f64(s.max(0.0))),
            backtrack_budget: self.limits.backtrack_budget,
            values: vec![0; self.inst.n()],
            nodes: 0,
            backtracks: 0,
            net,
        };

        let mut root = DomainState::new(self.inst);
        let flow = if ac2001(&search.net, &mut root, 0..search.net.arc_count()).is_consistent() {
            search.descend(0, &root)
        } else {
            Flow::Unsat
        };

        let (status, assignment) = match flow {
            Flow::Sat => {
                assert!(
                    self.inst.satisfies(&search.values),
                    "search returned an assignment that violates a constraint"
                );
                (SolveStatus::Sat, Some(search.values.clone()))
            }
            Flow::Unsat => (SolveStatus::Unsat, None),
            Flow::Timeout => (SolveStatus::Timeout, None),
        };
        SolveResult {
            status,
            assignment,
            backtracks: search.backtracks,
            nodes: search.nodes,
            elapsed: start.elapsed().as_secs_f64(),
        }
    }
}

impl Search<'_> {
    fn out_of_budget(&self) -> bool {
        if let Some(b) = self.backtrack_budget {
            if self.backtracks > b {
                return true;
            }
        }
        matches!(self.deadline, Some(t) if Instant::now() >= t)
    }

    fn descend(&mut self, depth: usize, dom: &DomainState) -> Flow {
        if depth == self.order.len() {
            return Flow::Sat;
        }
        let var = self.order[depth];
        for value in dom.values(var) {
            if self.out_of_budget() {
                return Flow::Timeout;
            }
            self.nodes += 1;
            self.values[var] = value;

            let child = if self.mac {
                let mut child = dom.clone();
                child.assign(var, value);
                let watchers = self.net.watchers(var).to_vec();
                ac2001(&self.net, &mut child, watchers)
                    .is_consistent()
                    .then_some(child)
            } else if self.compatible_with_past(var, value, depth) {
                let mut child = dom.clone();
                child.assign(var, value);
                Some(child)
            } else {
                None
            };

            if let Some(child) = child {
                match self.descend(depth + 1, &child) {
                    Flow::Unsat => {}
                    done => return done,
                }
            }
        }
        self.backtracks += 1;
        Flow::Unsat
    }

    fn compatible_with_past(&self, var: usize, value: usize, depth: usize) -> bool {
        self.inst.constraints().iter().all(|c| {
            let (i, j) = c.scope();
            if i == var && self.rank[j] < depth {
                c.allows(value, self.values[j])
            } else if j == var && self.rank[i] < depth {
                c.allows(self.values[i], value)
            } else {
                true
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generator::{generate, GenParams};
    use crate::model::{Constraint, ConstraintKind};

    #[test]
    fn zero_tightness_is_unsat_at_root() {
        let p = GenParams {
            n: 5,
            d: 3,
            e: 4,
            nf: 1,
            t: 0.0,
            bif_share: 0.0,
            seed: 3,
        };
        let r = solve(&generate(&p).unwrap(), SolveLimits::unlimited());
        assert_eq!(r.status, SolveStatus::Unsat);
        assert_eq!(r.nodes, 0);
        assert_eq!(r.backtracks, 0);
        assert!(r.assignment.is_none());
    }

    #[test]
    fn full_relations_solve_without_backtracking() {
        let p = GenParams {
            n: 6,
            d: 4,
            e: 15,
            nf: 0,
            t: 1.0,
            bif_share: 0.0,
            seed: 1,
        };
        let r = solve(&generate(&p).unwrap(), SolveLimits::unlimited());
        assert_eq!(r.status, SolveStatus::Sat);
        assert_eq!(r.backtracks, 0);
        assert_eq!(r.assignment, Some(vec![0; 6]));
        assert_eq!(r.nodes, 6);
    }

    #[test]
    fn max_degree_variable_goes_first() {
        // star centred on 2 with x2 != 0 forced by every edge
        let d = 2;
        let cons = [0usize, 1, 3]
            .iter()
            .map(|&v| Constraint::new(v, 2, d, ConstraintKind::General, [(0, 1), (1, 1)]).unwrap())
            .collect();
        let inst = CspInstance::new(4, d, cons).unwrap();
        let net = Network::new(&inst);
        assert_eq!(net.max_degree_order(), vec![2, 0, 1, 3]);
        let r = solve(&inst, SolveLimits::unlimited());
        assert_eq!(r.assignment, Some(vec![0, 0, 1, 0]));
    }

    #[test]
    fn backtrack_budget_times_out() {
        // pigeonhole: 4 variables pairwise different over 3 values
        let d = 3;
        let ne: Vec<_> = (0..d)
            .flat_map(|a| (0..d).filter(move |&b| b != a).map(move |b| (a, b)))
            .collect();
        let mut cons = Vec::new();
        for i in 0..4 {
            for j in i + 1..4 {
                cons.push(Constraint::new(i, j, d, ConstraintKind::General, ne.clone()).unwrap());
            }
        }
        let inst = CspInstance::new(4, d, cons).unwrap();
        let full = Solver::new(&inst).mac(false).solve();
        assert_eq!(full.status, SolveStatus::Unsat);
        assert!(full.backtracks > 1);
        let limited = Solver::new(&inst)
            .mac(false)
            .limits(SolveLimits {
                time_budget: None,
                backtrack_budget: Some(1),
            })
            .solve();
        assert_eq!(limited.status, SolveStatus::Timeout);
        assert!(limited.assignment.is_none());
    }

    #[test]
    fn plain_backtracking_agrees_with_mac() {
        for seed in 0..40 {
            let p = GenParams {
                n: 6,
                d: 3,
                e: 9,
                nf: 2,
                t: 0.5,
                bif_share: 0.5,
                seed,
            };
            let inst = generate(&p).unwrap();
            let a = Solver::new(&inst).solve();
            let b = Solver::new(&inst).mac(false).solve();
            assert_eq!(a.status, b.status, "seed {seed}");
            assert!(a.backtracks <= a.nodes && b.backtracks <= b.nodes);
        }
    }

    #[test]
    fn csv_row_format() {
        let r = SolveResult {
            status: SolveStatus::Sat,
            assignment: None,
            backtracks: 3,
            nodes: 10,
            elapsed: 0.5,
        };
        assert_eq!(r.csv_row(), "sat,3,10,0.5");
    }
}
