use crate::bitset::BitSet;
use crate::model::CspInstance;

/// Directed view of an instance for propagation. Constraint `c` yields arc
/// `2c` (revise `i` against `j`) and arc `2c + 1` (revise `j` against `i`).
#[derive(Clone, Debug)]
pub struct Network {
    n: usize,
    d: usize,
    /// Revised variable of each arc.
    target: Vec<usize>,
    /// Supporting variable of each arc.
    source: Vec<usize>,
    /// `rows[arc][a]`: values of `source` compatible with `target = a`.
    rows: Vec<Vec<BitSet>>,
    /// Arcs whose supporting variable is `v`; these need revision when the
    /// domain of `v` shrinks.
    watchers: Vec<Vec<usize>>,
    degrees: Vec<usize>,
}

impl Network {
    pub fn new(inst: &CspInstance) -> Self {
        let (n, d) = (inst.n(), inst.d());
        let arcs = 2 * inst.constraints().len();
        let mut target = Vec::with_capacity(arcs);
        let mut source = Vec::with_capacity(arcs);
        let mut rows = Vec::with_capacity(arcs);
        let mut watchers = vec![Vec::new(); n];
        for c in inst.constraints() {
            let (i, j) = c.scope();
            let mut fwd = vec![BitSet::new(d); d];
            let mut bwd = vec![BitSet::new(d); d];
            for (a, b) in c.pairs() {
                fwd[a].insert(b);
                bwd[b].insert(a);
            }
            let base = target.len();
            target.extend([i, j]);
            source.extend([j, i]);
            rows.push(fwd);
            rows.push(bwd);
            watchers[j].push(base);
            watchers[i].push(base + 1);
        }
        Network {
            n,
            d,
            target,
            source,
            rows,
            watchers,
            degrees: inst.degrees(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn arc_count(&self) -> usize {
        self.target.len()
    }

    #[inline]
    pub fn target(&self, arc: usize) -> usize {
        self.target[arc]
    }

    #[inline]
    pub fn source(&self, arc: usize) -> usize {
        self.source[arc]
    }

    #[inline]
    pub fn row(&self, arc: usize, value: usize) -> &BitSet {
        &self.rows[arc][value]
    }

    #[inline]
    pub fn watchers(&self, var: usize) -> &[usize] {
        &self.watchers[var]
    }

    pub fn degrees(&self) -> &[usize] {
        &self.degrees
    }

    /// Static ordering: maximum degree first, ties by smallest index.
    pub fn max_degree_order(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.n).collect();
        order.sort_by_key(|&v| (std::cmp::Reverse(self.degrees[v]), v));
        order
    }
}
