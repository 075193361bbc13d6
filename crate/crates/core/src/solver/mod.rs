//! Complete solver for binary CSPs: AC-2001/3.1 propagation maintained during
//! chronological backtracking search, plus the AC-3 and brute-force oracles
//! used to check it.

mod ac;
mod domain;
mod network;
mod oracle;
mod search;

pub use ac::{ac2001, ac2001_propagate, ac3_propagate, Propagation};
pub use domain::DomainState;
pub use network::Network;
pub use oracle::{brute_force_satisfiable, BRUTE_FORCE_LIMIT};
pub use search::{solve, SolveLimits, SolveResult, SolveStatus, Solver};
