//! Turns an improper or non-covering assignment into a proper covering one:
//! overload removal followed by repeated semi-alternating-path reassignment.
//!
//! A semi-alternating path walks the graph (augmented with a self-loop at
//! every vertex) from a vertex with unmet demand to a vertex with spare
//! capacity, alternating free steps with assignment arcs, starting and
//! ending on free steps. An arc step consumes an existing arc; a free step
//! may run along any edge or self-loop, whether or not an arc happens to sit
//! there, because the reassignment below never depends on that. Reversing
//! the free steps into new arcs and deleting the consumed arcs moves one
//! unit of coverage to the unmet vertex while adding at most one new
//! facility. If no such path exists, no proper covering assignment exists at
//! all, so the failure doubles as an infeasibility certificate.

use std::collections::{BTreeMap, VecDeque};

use thiserror::Error;

use crate::assignment::{Assignment, SolveOutcome};
use crate::graph::Instance;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SmoothingError {
    #[error("malformed path: {0}")]
    MalformedPath(String),
}

/// Directed view of an assignment with degree caches, the working form of
/// every operation in this module.
struct AssignmentGraph<'a> {
    inst: &'a Instance,
    arcs: BTreeMap<(usize, usize), usize>,
    out_deg: Vec<usize>,
    in_deg: Vec<usize>,
}

impl<'a> AssignmentGraph<'a> {
    fn new(inst: &'a Instance, a: &Assignment) -> Self {
        let n = inst.vertex_count();
        let mut out_deg = vec![0; n];
        let mut in_deg = vec![0; n];
        let mut arcs = BTreeMap::new();
        for ((u, v), m) in a.iter() {
            arcs.insert((u, v), m);
            out_deg[u] += m;
            in_deg[v] += m;
        }
        Self {
            inst,
            arcs,
            out_deg,
            in_deg,
        }
    }

    fn into_assignment(self) -> Assignment {
        Assignment::from_pairs(self.arcs)
    }

    fn mult(&self, u: usize, v: usize) -> usize {
        self.arcs.get(&(u, v)).copied().unwrap_or(0)
    }

    fn add_unit(&mut self, u: usize, v: usize) {
        *self.arcs.entry((u, v)).or_insert(0) += 1;
        self.out_deg[u] += 1;
        self.in_deg[v] += 1;
    }

    fn remove_unit(&mut self, u: usize, v: usize) {
        let m = self.arcs.get_mut(&(u, v)).expect("arc to remove exists");
        *m -= 1;
        if *m == 0 {
            self.arcs.remove(&(u, v));
        }
        self.out_deg[u] -= 1;
        self.in_deg[v] -= 1;
    }

    /// Clients of `u` in ascending order.
    fn clients_of(&self, u: usize) -> Vec<usize> {
        self.arcs
            .range((u, 0)..=(u, usize::MAX))
            .map(|(&(_, v), _)| v)
            .collect()
    }

    /// The arc out of `u` to remove first: largest multiplicity, then
    /// smallest client.
    fn heaviest_arc_of(&self, u: usize) -> Option<usize> {
        let mut best: Option<(usize, usize)> = None;
        for (&(_, v), &m) in self.arcs.range((u, 0)..=(u, usize::MAX)) {
            if best.is_none_or(|(bm, _)| m > bm) {
                best = Some((m, v));
            }
        }
        best.map(|(_, v)| v)
    }

    /// The arc into `v` to remove first: largest multiplicity, then smallest
    /// facility.
    fn heaviest_arc_into(&self, v: usize) -> Option<usize> {
        let mut best: Option<(usize, usize)> = None;
        for (&(u, c), &m) in &self.arcs {
            if c == v && best.is_none_or(|(bm, _)| m > bm) {
                best = Some((m, u));
            }
        }
        best.map(|(_, u)| u)
    }

    fn unmet(&self, v: usize) -> usize {
        self.inst.demand(v).saturating_sub(self.in_deg[v])
    }
}

/// Removes units from overloaded facilities until the assignment is proper,
/// then trims client over-coverage down to each demand. Removal is
/// deterministic: vertices ascending, largest-multiplicity arc first,
/// smallest partner on ties.
pub fn remove_overloads(a: &Assignment, inst: &Instance) -> Assignment {
    let n = inst.vertex_count();
    let mut ag = AssignmentGraph::new(inst, a);
    for u in 0..n {
        while ag.out_deg[u] > inst.capacity(u) {
            let v = ag.heaviest_arc_of(u).expect("overloaded vertex has arcs");
            ag.remove_unit(u, v);
        }
    }
    for v in 0..n {
        while ag.in_deg[v] > inst.demand(v) {
            let u = ag.heaviest_arc_into(v).expect("over-covered vertex has arcs");
            ag.remove_unit(u, v);
        }
    }
    ag.into_assignment()
}

/// Rewrites the assignment into the form the path search assumes: no
/// directed cycles other than self-loops, and every vertex that still has
/// unmet demand is at full capacity with all of it self-directed. Neither
/// step increases unmet demand; self-assignments may add a facility, one per
/// unit of unmet demand they cure.
pub fn normalize_for_search(a: &Assignment, inst: &Instance) -> Assignment {
    debug_assert!(a.is_proper(inst));
    let n = inst.vertex_count();
    let mut ag = AssignmentGraph::new(inst, a);

    // arcs on a directed cycle all become self-loops; degrees are unchanged
    while let Some(cycle) = find_cycle(&ag) {
        let len = cycle.len();
        for i in 0..len {
            let from = cycle[i];
            let to = cycle[(i + 1) % len];
            ag.remove_unit(from, to);
            ag.add_unit(from, from);
        }
    }

    // unmet vertices first self-assign spare capacity, then redirect their
    // outgoing arcs to themselves; redirection can uncover another vertex,
    // so sweep until stable
    loop {
        let mut changed = false;
        for v in 0..n {
            while ag.unmet(v) > 0 {
                if ag.out_deg[v] < inst.capacity(v) {
                    ag.add_unit(v, v);
                    changed = true;
                } else if let Some(&x) = ag.clients_of(v).iter().find(|&&x| x != v) {
                    ag.remove_unit(v, x);
                    ag.add_unit(v, v);
                    changed = true;
                } else {
                    break;
                }
            }
        }
        if !changed {
            break;
        }
    }
    ag.into_assignment()
}

/// A directed cycle (ignoring self-loops) as its vertex sequence, or None.
fn find_cycle(ag: &AssignmentGraph) -> Option<Vec<usize>> {
    let n = ag.inst.vertex_count();
    let mut color = vec![0u8; n]; // 0 unvisited, 1 on stack, 2 done
    for start in 0..n {
        if color[start] != 0 {
            continue;
        }
        let mut stack: Vec<(usize, Vec<usize>, usize)> = Vec::new();
        color[start] = 1;
        let succ =
            |v: usize| -> Vec<usize> { ag.clients_of(v).into_iter().filter(|&x| x != v).collect() };
        stack.push((start, succ(start), 0));
        while let Some(top) = stack.last_mut() {
            let (v, ref next, ref mut idx) = *top;
            if *idx < next.len() {
                let w = next[*idx];
                *idx += 1;
                if color[w] == 0 {
                    color[w] = 1;
                    stack.push((w, succ(w), 0));
                } else if color[w] == 1 {
                    let pos = stack
                        .iter()
                        .position(|s| s.0 == w)
                        .expect("gray vertex is on the stack");
                    return Some(stack[pos..].iter().map(|s| s.0).collect());
                }
            } else {
                color[v] = 2;
                stack.pop();
            }
        }
    }
    None
}

/// Finds a semi-alternating path from an unmet vertex to a vertex with spare
/// capacity, by breadth-first search over (vertex, parity) states. The path
/// is returned as its vertex sequence; consecutive vertices may coincide
/// (self-loop steps). Returns None when no such path exists, which
/// certifies that the instance is infeasible.
pub fn find_semi_alternating_path(a: &Assignment, inst: &Instance) -> Option<Vec<usize>> {
    let n = inst.vertex_count();
    let ag = AssignmentGraph::new(inst, a);
    let in_w = |v: usize| ag.out_deg[v] < inst.capacity(v);

    // state 2v: at v, next step is free; 2v+1: next step consumes an arc
    let state = |v: usize, expects_arc: bool| 2 * v + usize::from(expects_arc);
    let mut parent: Vec<Option<usize>> = vec![None; 2 * n];
    let mut visited = vec![false; 2 * n];
    let mut queue = VecDeque::new();
    for u in 0..n {
        if ag.unmet(u) > 0 {
            visited[state(u, false)] = true;
            queue.push_back(state(u, false));
        }
    }

    // closed neighborhood in ascending order: self-loop steps stay in place
    let closed = |v: usize| -> Vec<usize> {
        let mut out = inst.graph().neighbors(v).to_vec();
        let pos = out.partition_point(|&x| x < v);
        out.insert(pos, v);
        out
    };

    let reconstruct = |end_state: usize, w: usize, parent: &[Option<usize>]| -> Vec<usize> {
        let mut rev = vec![w];
        let mut cur = Some(end_state);
        while let Some(s) = cur {
            rev.push(s / 2);
            cur = parent[s];
        }
        rev.reverse();
        rev
    };

    while let Some(s) = queue.pop_front() {
        let v = s / 2;
        let expects_arc = s % 2 == 1;
        for w in closed(v) {
            if expects_arc {
                if ag.mult(v, w) >= 1 {
                    let t = state(w, false);
                    if !visited[t] {
                        visited[t] = true;
                        parent[t] = Some(s);
                        queue.push_back(t);
                    }
                }
            } else {
                // free step: no condition on (v, w); the reassignment adds
                // the reverse arc regardless of what sits on the edge
                if in_w(w) {
                    return Some(reconstruct(s, w, &parent));
                }
                let t = state(w, true);
                if !visited[t] {
                    visited[t] = true;
                    parent[t] = Some(s);
                    queue.push_back(t);
                }
            }
        }
    }
    None
}

/// Applies the reassignment along a semi-alternating path: the arcs at odd
/// steps are removed and every free (even) step is reversed into a new arc.
/// One unit of unmet demand at the start of the path is now covered; the end
/// of the path spends one more unit of capacity and is the only vertex that
/// can newly enter the dominating set.
pub fn augment(a: &Assignment, path: &[usize], inst: &Instance) -> Result<Assignment, SmoothingError> {
    let err = |msg: String| Err(SmoothingError::MalformedPath(msg));
    if path.len() < 2 {
        return err("needs at least two vertices".into());
    }
    let l = path.len() - 1;
    if l % 2 == 0 {
        return err("needs an odd number of steps".into());
    }
    let n = inst.vertex_count();
    if let Some(&v) = path.iter().find(|&&v| v >= n) {
        return err(format!("vertex {v} out of range"));
    }
    if a.incoming(path[0]) >= inst.demand(path[0]) {
        return err(format!("start {} has no unmet demand", path[0]));
    }
    let last = path[l];
    if a.outgoing(last) >= inst.capacity(last) {
        return err(format!("end {last} has no spare capacity"));
    }
    let mut removals: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for i in 0..l {
        let (x, y) = (path[i], path[i + 1]);
        if x != y && !inst.graph().has_edge(x, y) {
            return err(format!("step {x}->{y} is not an edge or self-loop"));
        }
        if i % 2 == 1 {
            *removals.entry((x, y)).or_insert(0) += 1;
        }
    }
    for (&(x, y), &count) in &removals {
        if a.multiplicity(x, y) < count {
            return err(format!(
                "path removes ({x},{y}) {count} times but only {} present",
                a.multiplicity(x, y)
            ));
        }
    }

    let mut out = a.clone();
    for ((x, y), count) in removals {
        out.remove(x, y, count);
    }
    for i in (0..l).step_by(2) {
        out.add(path[i + 1], path[i], 1);
    }
    debug_assert!(out.is_proper(inst));
    Ok(out)
}

/// Full smoothing: make the assignment proper, then reassign until covering.
/// Terminates within total-demand many augmentations. Returns Infeasible iff
/// some unmet demand cannot be rerouted anywhere, which only happens when the
/// instance itself is infeasible.
pub fn smooth(a: &Assignment, inst: &Instance) -> SolveOutcome {
    let mut cur = remove_overloads(a, inst);
    for _ in 0..=inst.total_demand() {
        if cur.unmet_demand(inst) == 0 {
            return SolveOutcome::Feasible(cur);
        }
        cur = normalize_for_search(&cur, inst);
        if cur.unmet_demand(inst) == 0 {
            return SolveOutcome::Feasible(cur);
        }
        match find_semi_alternating_path(&cur, inst) {
            None => return SolveOutcome::Infeasible,
            Some(path) => {
                cur = augment(&cur, &path, inst).expect("search produces valid paths");
            }
        }
    }
    unreachable!("every augmentation covers at least one unit of demand");
}
