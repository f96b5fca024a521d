//! The multiset assignment object: (facility, client) pairs with
//! multiplicities, plus the proper/covering predicates and multiset union.

use std::collections::{BTreeMap, BTreeSet};

use crate::graph::Instance;

/// A multiset of ordered (facility, client) pairs along edges or self-loops.
///
/// Iteration over pairs is lexicographic by (facility, client), so every
/// algorithm built on top of this type is reproducible. The per-client bound
/// (incoming ≤ demand) is deliberately not enforced on construction or union:
/// the approximation scheme forms unions that violate it transiently and
/// repairs them by smoothing. [`Assignment::strict_validate`] enforces the
/// full definition and is applied to final outputs.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Assignment {
    pairs: BTreeMap<(usize, usize), usize>,
}

impl Assignment {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_pairs<I: IntoIterator<Item = ((usize, usize), usize)>>(iter: I) -> Self {
        let mut a = Self::new();
        for ((u, v), m) in iter {
            a.add(u, v, m);
        }
        a
    }

    /// Adds `mult` units of (facility, client). Zero multiplicities are
    /// never stored.
    pub fn add(&mut self, facility: usize, client: usize, mult: usize) {
        if mult > 0 {
            *self.pairs.entry((facility, client)).or_insert(0) += mult;
        }
    }

    /// Removes up to `mult` units of (facility, client); returns how many
    /// were actually removed.
    pub fn remove(&mut self, facility: usize, client: usize, mult: usize) -> usize {
        match self.pairs.get_mut(&(facility, client)) {
            None => 0,
            Some(m) => {
                let removed = mult.min(*m);
                *m -= removed;
                if *m == 0 {
                    self.pairs.remove(&(facility, client));
                }
                removed
            }
        }
    }

    pub fn multiplicity(&self, facility: usize, client: usize) -> usize {
        self.pairs.get(&(facility, client)).copied().unwrap_or(0)
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Pairs in lexicographic order.
    pub fn iter(&self) -> impl Iterator<Item = ((usize, usize), usize)> + '_ {
        self.pairs.iter().map(|(&k, &m)| (k, m))
    }

    pub fn pair_count(&self) -> usize {
        self.pairs.len()
    }

    pub fn unit_count(&self) -> usize {
        self.pairs.values().sum()
    }

    /// Multiset union: multiplicities are additive.
    pub fn uplus(&self, other: &Assignment) -> Assignment {
        let mut out = self.clone();
        for (&(u, v), &m) in &other.pairs {
            out.add(u, v, m);
        }
        out
    }

    /// Units assigned out of `u` (capacity used).
    pub fn outgoing(&self, u: usize) -> usize {
        self.pairs
            .range((u, 0)..=(u, usize::MAX))
            .map(|(_, &m)| m)
            .sum()
    }

    /// Units assigned into `v` (demand covered).
    pub fn incoming(&self, v: usize) -> usize {
        self.pairs
            .iter()
            .filter(|(&(_, c), _)| c == v)
            .map(|(_, &m)| m)
            .sum()
    }

    /// Per-vertex outgoing totals for an instance with `n` vertices.
    pub fn outgoing_table(&self, n: usize) -> Vec<usize> {
        let mut out = vec![0; n];
        for (&(u, _), &m) in &self.pairs {
            out[u] += m;
        }
        out
    }

    /// Per-vertex incoming totals for an instance with `n` vertices.
    pub fn incoming_table(&self, n: usize) -> Vec<usize> {
        let mut inc = vec![0; n];
        for (&(_, v), &m) in &self.pairs {
            inc[v] += m;
        }
        inc
    }

    /// True iff no facility exceeds its capacity.
    pub fn is_proper(&self, inst: &Instance) -> bool {
        self.outgoing_table(inst.vertex_count())
            .iter()
            .enumerate()
            .all(|(u, &o)| o <= inst.capacity(u))
    }

    /// True iff every vertex receives exactly its demand.
    pub fn is_covering(&self, inst: &Instance) -> bool {
        self.incoming_table(inst.vertex_count())
            .iter()
            .enumerate()
            .all(|(v, &i)| i == inst.demand(v))
    }

    /// Total unmet demand, with over-coverage clamped to zero per vertex.
    pub fn unmet_demand(&self, inst: &Instance) -> usize {
        self.incoming_table(inst.vertex_count())
            .iter()
            .enumerate()
            .map(|(v, &i)| inst.demand(v).saturating_sub(i))
            .sum()
    }

    /// Vertices with at least one outgoing pair.
    pub fn dominating_set(&self) -> BTreeSet<usize> {
        self.pairs.keys().map(|&(u, _)| u).collect()
    }

    /// Size of the dominating set.
    pub fn size(&self) -> usize {
        self.dominating_set().len()
    }

    /// Checks the full definition: every pair runs along an edge or is a
    /// self-loop, no client is over-covered, the assignment is proper, and it
    /// is covering. Returns every violation found.
    pub fn strict_validate(&self, inst: &Instance) -> Result<(), Vec<String>> {
        let n = inst.vertex_count();
        let mut violations = Vec::new();
        for (&(u, v), &m) in &self.pairs {
            if u >= n || v >= n {
                violations.push(format!("pair ({u},{v})^{m} references a missing vertex"));
            } else if u != v && !inst.graph().has_edge(u, v) {
                violations.push(format!("pair ({u},{v})^{m} is not an edge or self-loop"));
            }
        }
        if violations.is_empty() {
            for (u, &o) in self.outgoing_table(n).iter().enumerate() {
                if o > inst.capacity(u) {
                    violations.push(format!(
                        "facility {u} uses {o} units but has capacity {}",
                        inst.capacity(u)
                    ));
                }
            }
            for (v, &i) in self.incoming_table(n).iter().enumerate() {
                if i != inst.demand(v) {
                    violations.push(format!(
                        "client {v} receives {i} units but demands {}",
                        inst.demand(v)
                    ));
                }
            }
        }
        if violations.is_empty() {
            Ok(())
        } else {
            Err(violations)
        }
    }

    /// Lexicographic comparison of the serialized pair lists, used to break
    /// ties among equal-size assignments deterministically.
    pub fn cmp_lex(&self, other: &Assignment) -> std::cmp::Ordering {
        self.pairs.iter().cmp(other.pairs.iter())
    }
}

/// Result of a solver: either a feasible assignment or a certificate that
/// none exists. Infeasibility is a value, not an error.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SolveOutcome {
    Feasible(Assignment),
    Infeasible,
}

impl SolveOutcome {
    pub fn is_infeasible(&self) -> bool {
        matches!(self, SolveOutcome::Infeasible)
    }

    pub fn assignment(&self) -> Option<&Assignment> {
        match self {
            SolveOutcome::Feasible(a) => Some(a),
            SolveOutcome::Infeasible => None,
        }
    }

    pub fn into_assignment(self) -> Option<Assignment> {
        match self {
            SolveOutcome::Feasible(a) => Some(a),
            SolveOutcome::Infeasible => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::PlanarGraph;

    fn tiny_instance() -> Instance {
        // triangle u=0, v=1, w=2
        let g = PlanarGraph::new(3, &[(0, 1), (0, 2), (1, 2)]).unwrap();
        Instance::new(g, vec![1, 1, 1], vec![2, 2, 2]).unwrap()
    }

    #[test]
    fn uplus_adds_multiplicities() {
        let (u, v, w) = (0, 1, 2);
        let a1 = Assignment::from_pairs([((u, v), 2), ((u, w), 1)]);
        let a2 = Assignment::from_pairs([((u, v), 3), ((w, v), 1)]);
        let sum = a1.uplus(&a2);
        let expect = Assignment::from_pairs([((u, v), 5), ((u, w), 1), ((w, v), 1)]);
        assert_eq!(sum, expect);
    }

    #[test]
    fn uplus_identity_and_self_loops() {
        let a = Assignment::from_pairs([((0, 1), 2)]);
        assert_eq!(a.uplus(&Assignment::new()), a);
        let s = Assignment::from_pairs([((1, 1), 1)]);
        assert_eq!(s.uplus(&s), Assignment::from_pairs([((1, 1), 2)]));
    }

    #[test]
    fn uplus_is_associative_and_commutative() {
        let mut rng = crate::generate::SplitMix64::new(3);
        for _ in 0..100 {
            let mut rand_assignment = || {
                let mut a = Assignment::new();
                for _ in 0..(rng.next_u64() % 6) {
                    let u = (rng.next_u64() % 4) as usize;
                    let v = (rng.next_u64() % 4) as usize;
                    a.add(u, v, 1 + (rng.next_u64() % 3) as usize);
                }
                a
            };
            let (a, b, c) = (rand_assignment(), rand_assignment(), rand_assignment());
            assert_eq!(a.uplus(&b), b.uplus(&a));
            assert_eq!(a.uplus(&b).uplus(&c), a.uplus(&b.uplus(&c)));
        }
    }

    #[test]
    fn predicates_on_single_edge() {
        let g = PlanarGraph::new(2, &[(0, 1)]).unwrap();
        let inst = Instance::new(g.clone(), vec![0, 1], vec![1, 0]).unwrap();
        let a = Assignment::from_pairs([((0, 1), 1)]);
        assert!(a.is_proper(&inst));
        assert!(a.is_covering(&inst));
        assert_eq!(a.size(), 1);

        // same pairs, but u also demands 1: no longer covering
        let inst2 = Instance::new(g, vec![1, 1], vec![1, 0]).unwrap();
        assert!(!a.is_covering(&inst2));
        assert_eq!(a.unmet_demand(&inst2), 1);
    }

    #[test]
    fn empty_assignment_unmet_equals_total_demand() {
        let inst = tiny_instance();
        let a = Assignment::new();
        assert_eq!(a.unmet_demand(&inst), inst.total_demand());
        assert_eq!(a.size(), 0);
    }

    #[test]
    fn capacity_violation_detected() {
        let g = PlanarGraph::new(2, &[(0, 1)]).unwrap();
        let inst = Instance::new(g, vec![0, 5], vec![3, 0]).unwrap();
        let a = Assignment::from_pairs([((0, 1), 5)]);
        assert!(!a.is_proper(&inst));
        assert!(a.strict_validate(&inst).is_err());
    }

    #[test]
    fn covering_implies_zero_unmet() {
        let mut rng = crate::generate::SplitMix64::new(17);
        let inst = tiny_instance();
        for _ in 0..200 {
            let mut a = Assignment::new();
            for _ in 0..(rng.next_u64() % 8) {
                let u = (rng.next_u64() % 3) as usize;
                let v = (rng.next_u64() % 3) as usize;
                if u == v || inst.graph().has_edge(u, v) {
                    a.add(u, v, 1);
                }
            }
            if a.is_covering(&inst) {
                assert_eq!(a.unmet_demand(&inst), 0);
            }
            let b = Assignment::from_pairs([((0, 0), 1)]);
            let union = a.uplus(&b);
            assert_eq!(
                union.size(),
                a.dominating_set().union(&b.dominating_set()).count()
            );
            assert!(union.size() <= a.size() + b.size());
        }
    }

    #[test]
    fn strict_validate_rejects_non_edges() {
        // path 0-1-2: pair (0,2) is not an edge
        let g = PlanarGraph::new(3, &[(0, 1), (1, 2)]).unwrap();
        let inst = Instance::new(g, vec![0, 0, 1], vec![1, 0, 0]).unwrap();
        let a = Assignment::from_pairs([((0, 2), 1)]);
        let errs = a.strict_validate(&inst).unwrap_err();
        assert_eq!(errs.len(), 1);
        assert!(errs[0].contains("not an edge"));
    }

    #[test]
    fn lex_comparison_is_total_on_serialized_pairs() {
        let a = Assignment::from_pairs([((0, 1), 1)]);
        let b = Assignment::from_pairs([((0, 1), 2)]);
        let c = Assignment::from_pairs([((0, 2), 1)]);
        assert_eq!(a.cmp_lex(&a), std::cmp::Ordering::Equal);
        assert_eq!(a.cmp_lex(&b), std::cmp::Ordering::Less);
        assert_eq!(b.cmp_lex(&c), std::cmp::Ordering::Less);
    }
}
