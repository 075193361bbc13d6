use std::collections::VecDeque;

use super::domain::{DomainState, NO_SUPPORT};
use super::network::Network;
use crate::model::CspInstance;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Propagation {
    Consistent,
    /// First variable whose domain became empty.
    Wipeout(usize),
}

impl Propagation {
    pub fn is_consistent(self) -> bool {
        self == Propagation::Consistent
    }
}

/// Enforces arc consistency with AC-2001/3.1 starting from every arc.
pub fn ac2001_propagate(inst: &CspInstance, dom: &mut DomainState) -> Propagation {
    let net = Network::new(inst);
    ac2001(&net, dom, 0..net.arc_count())
}

/// AC-2001/3.1 over `net`, seeded with the arcs in `initial`. Each value's
/// search for a support resumes after its last recorded support instead of
/// rescanning the neighbour's domain.
pub fn ac2001(
    net: &Network,
    dom: &mut DomainState,
    initial: impl IntoIterator<Item = usize>,
) -> Propagation {
    let d = net.d();
    let mut queued = vec![false; net.arc_count()];
    let mut queue = VecDeque::new();
    for arc in initial {
        if !queued[arc] {
            queued[arc] = true;
            queue.push_back(arc);
        }
    }

    let mut removed = Vec::with_capacity(d);
    while let Some(arc) = queue.pop_front() {
        queued[arc] = false;
        let x = net.target(arc);
        let y = net.source(arc);

        removed.clear();
        let (domains, last_support) = (&dom.domains, &mut dom.last);
        let support_dom = &domains[y];
        for a in domains[x].iter() {
            let slot = arc * d + a;
            let last = last_support[slot];
            if last != NO_SUPPORT && support_dom.contains(last as usize) {
                continue;
            }
            let from = if last == NO_SUPPORT {
                0
            } else {
                last as usize + 1
            };
            match net.row(arc, a).next_common_from(support_dom, from) {
                Some(b) => last_support[slot] = b as u32,
                None => removed.push(a),
            }
        }
        if removed.is_empty() {
            continue;
        }
        for &a in &removed {
            dom.remove(x, a);
        }
        if dom.is_empty(x) {
            return Propagation::Wipeout(x);
        }
        for &w in net.watchers(x) {
            // values removed from x had no support in y, so y keeps all of its
            // supports on this constraint
            if net.target(w) != y && !queued[w] {
                queued[w] = true;
                queue.push_back(w);
            }
        }
    }
    Propagation::Consistent
}

/// Plain AC-3 with naive revision. Kept as an independent oracle: it reads
/// the constraint relations directly and ignores the last-support table.
pub fn ac3_propagate(inst: &CspInstance, dom: &mut DomainState) -> Propagation {
    let cons = inst.constraints();
    // (constraint, revise_i): revise i against j when true, j against i otherwise
    let mut queue: VecDeque<(usize, bool)> = (0..cons.len())
        .flat_map(|k| [(k, true), (k, false)])
        .collect();

    for v in 0..dom.var_count() {
        if dom.is_empty(v) {
            return Propagation::Wipeout(v);
        }
    }

    while let Some((k, revise_i)) = queue.pop_front() {
        let c = &cons[k];
        let (x, y) = if revise_i {
            (c.i(), c.j())
        } else {
            (c.j(), c.i())
        };
        let mut changed = false;
        for a in dom.values(x) {
            let supported = dom.values(y).into_iter().any(|b| {
                if revise_i {
                    c.allows(a, b)
                } else {
                    c.allows(b, a)
                }
            });
            if !supported {
                dom.remove(x, a);
                changed = true;
            }
        }
        if !changed {
            continue;
        }
        if dom.is_empty(x) {
            return Propagation::Wipeout(x);
        }
        for (k2, c2) in cons.iter().enumerate() {
            if k2 == k {
                continue;
            }
            if c2.j() == x {
                queue.push_back((k2, true));
            } else if c2.i() == x {
                queue.push_back((k2, false));
            }
        }
    }
    Propagation::Consistent
}
