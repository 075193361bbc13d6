use crate::bitset::BitSet;
use crate::model::CspInstance;

pub(crate) const NO_SUPPORT: u32 = u32::MAX;

/// Current domains plus the AC-2001 last-support table, indexed by
/// `arc * d + value`. The search clones the state at every node, so support
/// pointers never outlive the domains they were verified against.
#[derive(Clone, Debug)]
pub struct DomainState {
    d: usize,
    pub(crate) domains: Vec<BitSet>,
    pub(crate) last: Vec<u32>,
}

impl DomainState {
    pub fn new(inst: &CspInstance) -> Self {
        let d = inst.d();
        DomainState {
            d,
            domains: vec![BitSet::full(d); inst.n()],
            last: vec![NO_SUPPORT; 2 * inst.constraints().len() * d],
        }
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn var_count(&self) -> usize {
        self.domains.len()
    }

    pub fn contains(&self, var: usize, value: usize) -> bool {
        self.domains[var].contains(value)
    }

    pub fn size(&self, var: usize) -> usize {
        self.domains[var].count()
    }

    pub fn is_empty(&self, var: usize) -> bool {
        self.domains[var].is_empty()
    }

    /// Remaining values of `var`, ascending.
    pub fn values(&self, var: usize) -> Vec<usize> {
        self.domains[var].iter().collect()
    }

    pub fn remove(&mut self, var: usize, value: usize) -> bool {
        self.domains[var].remove(value)
    }

    /// Reduces the domain of `var` to `{value}`.
    pub fn assign(&mut self, var: usize, value: usize) {
        let dom = &mut self.domains[var];
        let had = dom.contains(value);
        dom.clear();
        if had {
            dom.insert(value);
        }
    }

    /// Domains as sorted value lists, for comparisons across algorithms.
    pub fn snapshot(&self) -> Vec<Vec<usize>> {
        self.domains.iter().map(|s| s.iter().collect()).collect()
    }
}
