use crate::error::{Error, Result};
use crate::model::CspInstance;

/// Largest `dⁿ` the exhaustive oracle will enumerate.
pub const BRUTE_FORCE_LIMIT: u64 = 10_000_000;

/// Enumerates every assignment. Independent of the propagation code.
pub fn brute_force_satisfiable(inst: &CspInstance) -> Result<bool> {
    let (n, d) = (inst.n(), inst.d());
    let space = (d as u64)
        .checked_pow(n as u32)
        .filter(|&s| s <= BRUTE_FORCE_LIMIT);
    if space.is_none() {
        return Err(Error::OracleGuard(format!(
            "d^n = {d}^{n} exceeds {BRUTE_FORCE_LIMIT}"
        )));
    }
    let mut values = vec![0usize; n];
    loop {
        if inst.satisfies(&values) {
            return Ok(true);
        }
        // odometer increment
        let mut k = 0;
        loop {
            if k == n {
                return Ok(false);
            }
            values[k] += 1;
            if values[k] < d {
                break;
            }
            values[k] = 0;
            k += 1;
        }
    }
}
