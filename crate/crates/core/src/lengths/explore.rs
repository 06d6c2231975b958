//! Cayley-graph exploration: layered BFS for word lengths, Dijkstra for
//! edge-weighted (smoothed) lengths and best-first flooding for closed forms.
//!
//! All explorers move by right multiplication from the identity, so the
//! value reached at `x` is the cost of the cheapest factorisation
//! `x = a₁⋯a_k`.

use std::cmp::Reverse;
use std::collections::hash_map::Entry;
use std::collections::{BinaryHeap, HashMap, HashSet};

use ordered_float::OrderedFloat;

use super::{Budget, LengthError, TOL};
use crate::groups::{GroupDescriptor, GroupElement};

type Heap = BinaryHeap<Reverse<(OrderedFloat<f64>, GroupElement)>>;

fn budget_error(reached: f64, nodes: usize, upper_bound: Option<f64>) -> LengthError {
    LengthError::BudgetExceeded {
        radius_reached: reached,
        nodes,
        upper_bound,
    }
}

struct Bfs {
    seen: HashMap<GroupElement, u32>,
    frontier: Vec<GroupElement>,
    depth: u32,
}

impl Bfs {
    fn new(group: GroupDescriptor) -> Self {
        let id = group.identity();
        Bfs {
            seen: HashMap::from([(id.clone(), 0)]),
            frontier: vec![id],
            depth: 0,
        }
    }

    /// Expands one layer. Returns false once the group is exhausted.
    fn step(
        &mut self,
        group: GroupDescriptor,
        gens: &[GroupElement],
        budget: Budget,
    ) -> Result<bool, LengthError> {
        if self.frontier.is_empty() {
            return Ok(false);
        }
        let next_depth = self.depth + 1;
        let mut next = Vec::new();
        for x in &self.frontier {
            for a in gens {
                let y = group.multiply(x, a)?;
                if let Entry::Vacant(v) = self.seen.entry(y) {
                    next.push(v.key().clone());
                    v.insert(next_depth);
                }
            }
            if self.seen.len() > budget.max_nodes {
                return Err(budget_error(f64::from(self.depth), self.seen.len(), None));
            }
        }
        self.frontier = next;
        self.depth = next_depth;
        Ok(!self.frontier.is_empty())
    }
}

pub(crate) fn bfs_ball(
    group: GroupDescriptor,
    gens: &[GroupElement],
    radius: f64,
    budget: Budget,
) -> Result<Vec<(GroupElement, f64)>, LengthError> {
    let mut bfs = Bfs::new(group);
    while f64::from(bfs.depth + 1) < radius - TOL {
        if !bfs.step(group, gens, budget)? {
            break;
        }
    }
    Ok(bfs
        .seen
        .into_iter()
        .filter(|(_, d)| f64::from(*d) < radius - TOL)
        .map(|(x, d)| (x, f64::from(d)))
        .collect())
}

pub(crate) fn bfs_lengths(
    group: GroupDescriptor,
    gens: &[GroupElement],
    targets: &[GroupElement],
    budget: Budget,
) -> Result<Vec<f64>, LengthError> {
    let mut bfs = Bfs::new(group);
    let mut pending: HashSet<&GroupElement> = targets.iter().filter(|t| !bfs.seen.contains_key(*t)).collect();
    while !pending.is_empty() {
        if !bfs.step(group, gens, budget)? {
            let missing = pending.iter().min().expect("nonempty");
            return Err(LengthError::NotGenerated {
                element: missing.to_string(),
            });
        }
        for x in &bfs.frontier {
            pending.remove(x);
        }
    }
    Ok(targets.iter().map(|t| f64::from(bfs.seen[t])).collect())
}

struct Dijkstra {
    best: HashMap<GroupElement, (f64, bool)>,
    heap: Heap,
    last: f64,
}

impl Dijkstra {
    fn new(group: GroupDescriptor) -> Self {
        let id = group.identity();
        let mut heap = BinaryHeap::new();
        heap.push(Reverse((OrderedFloat(0.0), id.clone())));
        Dijkstra {
            best: HashMap::from([(id, (0.0, false))]),
            heap,
            last: 0.0,
        }
    }

    fn peek(&self) -> Option<f64> {
        self.heap.peek().map(|Reverse((d, _))| d.0)
    }

    /// Settles the next vertex. `prune` drops tentative values at or beyond it.
    fn settle(
        &mut self,
        group: GroupDescriptor,
        edges: &[(GroupElement, f64)],
        prune: f64,
        budget: Budget,
    ) -> Result<Option<(GroupElement, f64)>, LengthError> {
        while let Some(Reverse((OrderedFloat(d), x))) = self.heap.pop() {
            let entry = self.best.get_mut(&x).expect("pushed vertices are recorded");
            if entry.1 || entry.0 < d {
                continue;
            }
            entry.1 = true;
            self.last = d;
            for (a, w) in edges {
                let y = group.multiply(&x, a)?;
                let nd = d + w;
                if nd >= prune {
                    continue;
                }
                match self.best.entry(y) {
                    Entry::Occupied(mut o) => {
                        let (old, settled) = *o.get();
                        if !settled && nd < old {
                            o.insert((nd, false));
                            self.heap.push(Reverse((OrderedFloat(nd), o.key().clone())));
                        }
                    }
                    Entry::Vacant(v) => {
                        self.heap.push(Reverse((OrderedFloat(nd), v.key().clone())));
                        v.insert((nd, false));
                    }
                }
            }
            if self.best.len() > budget.max_nodes {
                return Err(budget_error(self.last, self.best.len(), None));
            }
            return Ok(Some((x, d)));
        }
        Ok(None)
    }
}

pub(crate) fn dijkstra_ball(
    group: GroupDescriptor,
    edges: &[(GroupElement, f64)],
    radius: f64,
    budget: Budget,
) -> Result<Vec<(GroupElement, f64)>, LengthError> {
    let mut dj = Dijkstra::new(group);
    let cut = radius - TOL;
    let mut out = Vec::new();
    while dj.peek().is_some_and(|d| d < cut) {
        match dj.settle(group, edges, cut, budget)? {
            Some(entry) => out.push(entry),
            None => break,
        }
    }
    Ok(out)
}

pub(crate) fn dijkstra_lengths(
    group: GroupDescriptor,
    edges: &[(GroupElement, f64)],
    targets: &[GroupElement],
    budget: Budget,
) -> Result<Vec<f64>, LengthError> {
    let mut dj = Dijkstra::new(group);
    let mut pending: HashSet<&GroupElement> = targets.iter().collect();
    let mut found: HashMap<GroupElement, f64> = HashMap::new();
    while !pending.is_empty() {
        let step = dj.settle(group, edges, f64::INFINITY, budget);
        match step {
            Ok(Some((x, d))) => {
                if pending.remove(&x) {
                    found.insert(x, d);
                }
            }
            Ok(None) => {
                let missing = pending.iter().min().expect("nonempty");
                return Err(LengthError::NotGenerated {
                    element: missing.to_string(),
                });
            }
            Err(LengthError::BudgetExceeded {
                radius_reached, nodes, ..
            }) => {
                // A single unresolved target may already carry a tentative path.
                let upper_bound = if pending.len() == 1 {
                    let t = *pending.iter().next().expect("one target");
                    dj.best.get(t).map(|(d, _)| *d)
                } else {
                    None
                };
                return Err(budget_error(radius_reached, nodes, upper_bound));
            }
            Err(e) => return Err(e),
        }
    }
    Ok(targets.iter().map(|t| found[t]).collect())
}

/// Elements adjacent to `x` under coordinate moves, rotations/reflections and
/// letter extensions. Each element of a closed-form ball has a neighbour of no
/// larger length, so best-first flooding pops elements in length order.
fn structural_neighbours(group: GroupDescriptor, x: &GroupElement) -> Vec<GroupElement> {
    let mut out = Vec::new();
    match x {
        GroupElement::Z(n) => {
            out.extend([n.checked_add(1), n.checked_sub(1)].into_iter().flatten().map(GroupElement::Z));
        }
        GroupElement::Zd(v) => {
            for i in 0..v.len() {
                for delta in [1, -1] {
                    if let Some(c) = v[i].checked_add(delta) {
                        let mut w = v.clone();
                        w[i] = c;
                        out.push(GroupElement::Zd(w));
                    }
                }
            }
        }
        GroupElement::Dinf { flip, shift } => {
            out.push(GroupElement::Dinf {
                flip: !flip,
                shift: *shift,
            });
            for delta in [1, -1] {
                if let Some(c) = shift.checked_add(delta) {
                    out.push(GroupElement::Dinf {
                        flip: *flip,
                        shift: c,
                    });
                }
            }
        }
        GroupElement::CmZ2 { rot, shift } => {
            let GroupDescriptor::CmZ2(m) = group else { unreachable!() };
            for r in [(rot + 1) % m, (rot + m - 1) % m] {
                out.push(GroupElement::CmZ2 { rot: r, shift: *shift });
            }
            for i in 0..2 {
                for delta in [1, -1] {
                    if let Some(c) = shift[i].checked_add(delta) {
                        let mut w = *shift;
                        w[i] = c;
                        out.push(GroupElement::CmZ2 { rot: *rot, shift: w });
                    }
                }
            }
        }
        GroupElement::Free(w) => {
            let GroupDescriptor::Free(k) = group else { unreachable!() };
            for l in (1..=k as i8).flat_map(|l| [l, -l]) {
                if w.last() != Some(&-l) {
                    let mut w2 = w.clone();
                    w2.push(l);
                    out.push(GroupElement::Free(w2));
                }
            }
        }
    }
    out
}

pub(crate) fn flood_ball(
    group: GroupDescriptor,
    length: impl Fn(&GroupElement) -> f64,
    radius: f64,
    budget: Budget,
) -> Result<Vec<(GroupElement, f64)>, LengthError> {
    let cut = radius - TOL;
    let id = group.identity();
    let mut seen: HashSet<GroupElement> = HashSet::from([id.clone()]);
    let mut heap: Heap = BinaryHeap::new();
    if length(&id) < cut {
        heap.push(Reverse((OrderedFloat(length(&id)), id)));
    }
    let mut out = Vec::new();
    while let Some(Reverse((OrderedFloat(d), x))) = heap.pop() {
        for y in structural_neighbours(group, &x) {
            if seen.contains(&y) {
                continue;
            }
            let dy = length(&y);
            if dy < cut {
                seen.insert(y.clone());
                heap.push(Reverse((OrderedFloat(dy), y)));
            }
        }
        out.push((x, d));
        if seen.len() > budget.max_nodes {
            return Err(budget_error(d, seen.len(), None));
        }
    }
    Ok(out)
}
