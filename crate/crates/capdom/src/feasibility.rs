//! Feasibility certificates: the cut condition, flow-based coverage bounds,
//! and instance normalization.

use thiserror::Error;

use crate::assignment::Assignment;
use crate::graph::Instance;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FeasibilityError {
    #[error(
        "vertex {vertex} demands {demand} but its closed neighborhood only has capacity {capacity}"
    )]
    LocallyInfeasible {
        vertex: usize,
        demand: usize,
        capacity: usize,
    },
}

/// Max-flow network over facility and client copies of the vertices.
/// Facility arcs carry capacities, client arcs carry demands, and a
/// facility-client arc exists iff the client lies in the facility's closed
/// neighborhood. Plain Dinic; capacities are small at the scales we solve.
pub(crate) struct FlowNetwork {
    // (to, rev_index, residual_cap)
    arcs: Vec<Vec<(usize, usize, usize)>>,
    source: usize,
    sink: usize,
}

pub(crate) const INF_CAP: usize = usize::MAX / 4;

impl FlowNetwork {
    pub(crate) fn new(nodes: usize, source: usize, sink: usize) -> Self {
        Self {
            arcs: vec![Vec::new(); nodes],
            source,
            sink,
        }
    }

    pub(crate) fn add_arc(&mut self, from: usize, to: usize, cap: usize) {
        let rev_from = self.arcs[to].len();
        let rev_to = self.arcs[from].len();
        self.arcs[from].push((to, rev_from, cap));
        self.arcs[to].push((from, rev_to, 0));
    }

    fn bfs_levels(&self) -> Option<Vec<usize>> {
        let mut level = vec![usize::MAX; self.arcs.len()];
        level[self.source] = 0;
        let mut queue = std::collections::VecDeque::from([self.source]);
        while let Some(u) = queue.pop_front() {
            for &(to, _, cap) in &self.arcs[u] {
                if cap > 0 && level[to] == usize::MAX {
                    level[to] = level[u] + 1;
                    queue.push_back(to);
                }
            }
        }
        (level[self.sink] != usize::MAX).then_some(level)
    }

    fn dfs(&mut self, u: usize, pushed: usize, level: &[usize], it: &mut [usize]) -> usize {
        if u == self.sink {
            return pushed;
        }
        while it[u] < self.arcs[u].len() {
            let (to, rev, cap) = self.arcs[u][it[u]];
            if cap > 0 && level[to] == level[u] + 1 {
                let got = self.dfs(to, pushed.min(cap), level, it);
                if got > 0 {
                    self.arcs[u][it[u]].2 -= got;
                    self.arcs[to][rev].2 += got;
                    return got;
                }
            }
            it[u] += 1;
        }
        0
    }

    pub(crate) fn max_flow(&mut self) -> usize {
        let mut flow = 0;
        while let Some(level) = self.bfs_levels() {
            let mut it = vec![0; self.arcs.len()];
            loop {
                let pushed = self.dfs(self.source, INF_CAP, &level, &mut it);
                if pushed == 0 {
                    break;
                }
                flow += pushed;
            }
        }
        flow
    }

    /// Flow actually sent along the forward arc `index` out of `from`.
    pub(crate) fn sent(&self, from: usize, index: usize, original_cap: usize) -> usize {
        original_cap - self.arcs[from][index].2
    }

    pub(crate) fn arc_count(&self, node: usize) -> usize {
        self.arcs[node].len()
    }
}

/// Cut condition: a proper covering assignment can only exist if
/// `c(R) + d(∂(R)) >= d(R)` for every vertex set R. Returns false when R
/// certifies global infeasibility.
pub fn check_cut_condition(inst: &Instance, in_r: &[bool]) -> bool {
    let c_r: usize = (0..inst.vertex_count())
        .filter(|&v| in_r[v])
        .map(|v| inst.capacity(v))
        .sum();
    let d_r: usize = (0..inst.vertex_count())
        .filter(|&v| in_r[v])
        .map(|v| inst.demand(v))
        .sum();
    let d_boundary: usize = inst
        .graph()
        .boundary_vertices(in_r)
        .iter()
        .map(|&v| inst.demand(v))
        .sum();
    c_r + d_boundary >= d_r
}

/// Maximum total demand coverable by facilities in S, each serving only its
/// closed neighborhood within capacity, plus a proper witness assignment
/// achieving it. The witness never over-covers a client and uses facilities
/// from S only.
pub fn max_coverage(inst: &Instance, in_s: &[bool]) -> (usize, Assignment) {
    let n = inst.vertex_count();
    // nodes: 0 = source, 1 = sink, 2..2+n facilities, 2+n..2+2n clients
    let source = 0;
    let sink = 1;
    let fac = |u: usize| 2 + u;
    let cli = |v: usize| 2 + n + v;
    let mut net = FlowNetwork::new(2 + 2 * n, source, sink);

    // arc insertion order is fixed so the witness is reproducible
    let mut fac_arc_start = vec![usize::MAX; n];
    for u in 0..n {
        if in_s[u] && inst.capacity(u) > 0 {
            net.add_arc(source, fac(u), inst.capacity(u));
            fac_arc_start[u] = net.arcs[fac(u)].len();
            net.add_arc(fac(u), cli(u), INF_CAP);
            for &v in inst.graph().neighbors(u) {
                net.add_arc(fac(u), cli(v), INF_CAP);
            }
        }
    }
    for v in 0..n {
        if inst.demand(v) > 0 {
            net.add_arc(cli(v), sink, inst.demand(v));
        }
    }

    let value = net.max_flow();

    let mut witness = Assignment::new();
    for u in 0..n {
        if fac_arc_start[u] == usize::MAX {
            continue;
        }
        // forward arcs out of fac(u) were added contiguously: self first,
        // then neighbors ascending
        let clients: Vec<usize> = std::iter::once(u)
            .chain(inst.graph().neighbors(u).iter().copied())
            .collect();
        for (offset, &v) in clients.iter().enumerate() {
            let sent = net.sent(fac(u), fac_arc_start[u] + offset, INF_CAP);
            witness.add(u, v, sent);
        }
    }
    (value, witness)
}

/// True iff some proper covering assignment exists: the whole vertex set can
/// cover the whole demand.
pub fn is_instance_feasible(inst: &Instance) -> bool {
    let all = vec![true; inst.vertex_count()];
    max_coverage(inst, &all).0 == inst.total_demand()
}

/// Clamps every capacity to the demand of its closed neighborhood (more can
/// never be used), and rejects instances where some vertex's demand exceeds
/// the capacity of its closed neighborhood (no assignment can cover it).
/// The optimum is unchanged by the clamp.
pub fn normalize_instance(inst: &Instance) -> Result<Instance, FeasibilityError> {
    let n = inst.vertex_count();
    for v in 0..n {
        let cap = inst.closed_neighborhood_capacity(v);
        if inst.demand(v) > cap {
            return Err(FeasibilityError::LocallyInfeasible {
                vertex: v,
                demand: inst.demand(v),
                capacity: cap,
            });
        }
    }
    let capacity: Vec<usize> = (0..n)
        .map(|v| inst.capacity(v).min(inst.closed_neighborhood_demand(v)))
        .collect();
    Ok(Instance::new(inst.graph().clone(), inst.demands().to_vec(), capacity)
        .expect("tables match the graph"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::PlanarGraph;

    fn instance(n: usize, edges: &[(usize, usize)], d: &[usize], c: &[usize]) -> Instance {
        let g = PlanarGraph::new(n, edges).unwrap();
        Instance::new(g, d.to_vec(), c.to_vec()).unwrap()
    }

    #[test]
    fn cut_condition_examples() {
        // isolated v with d=2, c=1
        let inst = instance(1, &[], &[2], &[1]);
        assert!(!check_cut_condition(&inst, &[true]));

        // R = empty set
        assert!(check_cut_condition(&inst, &[false]));

        // path a-b-c, d=c=1, R={a,b}: c(R)=2, boundary {b} has d=1, d(R)=2
        let path = instance(3, &[(0, 1), (1, 2)], &[1, 1, 1], &[1, 1, 1]);
        assert!(check_cut_condition(&path, &[true, true, false]));
    }

    #[test]
    fn max_coverage_star_capacity_bound() {
        // star center 0 with c=2, three leaves each demanding 1
        let inst = instance(
            4,
            &[(0, 1), (0, 2), (0, 3)],
            &[0, 1, 1, 1],
            &[2, 0, 0, 0],
        );
        let (value, witness) = max_coverage(&inst, &[true, false, false, false]);
        assert_eq!(value, 2);
        assert!(witness.is_proper(&inst));
        assert_eq!(witness.dominating_set().into_iter().collect::<Vec<_>>(), vec![0]);
    }

    #[test]
    fn max_coverage_empty_candidate_set() {
        let inst = instance(2, &[(0, 1)], &[1, 1], &[1, 1]);
        let (value, witness) = max_coverage(&inst, &[false, false]);
        assert_eq!(value, 0);
        assert!(witness.is_empty());
    }

    #[test]
    fn max_coverage_grid_diagonal_covers_everything() {
        // 2x2 grid, d=1 everywhere, c=2, S = one diagonal pair {0, 3}
        let inst = instance(
            4,
            &[(0, 1), (0, 2), (1, 3), (2, 3)],
            &[1, 1, 1, 1],
            &[2, 2, 2, 2],
        );
        let (value, witness) = max_coverage(&inst, &[true, false, false, true]);
        assert_eq!(value, 4);
        for v in 0..4 {
            assert!(witness.incoming(v) <= inst.demand(v));
        }
    }

    #[test]
    fn max_coverage_monotone_in_candidate_set() {
        let inst = crate::generate::generate(
            crate::generate::Family::Grid { rows: 2, cols: 3 },
            2,
            2,
            5,
        )
        .unwrap();
        let n = inst.vertex_count();
        let mut rng = crate::generate::SplitMix64::new(8);
        for _ in 0..50 {
            let small: Vec<bool> = (0..n).map(|_| rng.next_u64() % 2 == 0).collect();
            let mut big = small.clone();
            let extra = (rng.next_u64() % n as u64) as usize;
            big[extra] = true;
            assert!(max_coverage(&inst, &small).0 <= max_coverage(&inst, &big).0);
        }
    }

    #[test]
    fn single_vertex_feasibility() {
        assert!(!is_instance_feasible(&instance(1, &[], &[1], &[0])));
        assert!(is_instance_feasible(&instance(1, &[], &[1], &[1])));
    }

    #[test]
    fn normalize_clamps_capacity_to_neighborhood_demand() {
        let inst = instance(1, &[], &[5], &[100]);
        let norm = normalize_instance(&inst).unwrap();
        assert_eq!(norm.capacity(0), 5);
    }

    #[test]
    fn normalize_is_identity_when_already_tight() {
        let inst = instance(2, &[(0, 1)], &[1, 1], &[2, 2]);
        let norm = normalize_instance(&inst).unwrap();
        assert_eq!(norm, inst);
    }

    #[test]
    fn normalize_flags_local_infeasibility() {
        // v=0 demands 3 but N[0] only has capacity 2
        let inst = instance(2, &[(0, 1)], &[3, 0], &[1, 1]);
        assert_eq!(
            normalize_instance(&inst).unwrap_err(),
            FeasibilityError::LocallyInfeasible {
                vertex: 0,
                demand: 3,
                capacity: 2
            }
        );
    }

    #[test]
    fn normalize_preserves_the_optimum() {
        use crate::generate::{generate, Family};
        use crate::oracle::brute_force_cdp;
        for seed in 0..20u64 {
            let inst = generate(Family::TriangulatedGrid { rows: 2, cols: 3 }, 2, 4, seed).unwrap();
            let Ok(norm) = normalize_instance(&inst) else {
                assert!(!is_instance_feasible(&inst));
                continue;
            };
            let before = brute_force_cdp(&inst, None).unwrap();
            let after = brute_force_cdp(&norm, None).unwrap();
            assert_eq!(before.opt_size(), after.opt_size(), "seed {seed}");
            assert_eq!(before.is_infeasible(), after.is_infeasible());
        }
    }

    #[test]
    fn violated_cut_implies_infeasible() {
        use crate::generate::{generate, Family, SplitMix64};
        let mut rng = SplitMix64::new(6);
        let mut violated = 0;
        for seed in 0..40u64 {
            let inst = generate(Family::Path { n: 7 }, 3, 2, seed).unwrap();
            let n = inst.vertex_count();
            for _ in 0..5 {
                let in_r: Vec<bool> = (0..n).map(|_| rng.next_u64() % 2 == 0).collect();
                if !check_cut_condition(&inst, &in_r) {
                    assert!(!is_instance_feasible(&inst));
                    violated += 1;
                }
            }
        }
        assert!(violated > 0, "no violated cuts sampled");
    }

    #[test]
    fn flow_feasibility_agrees_with_oracle() {
        use crate::generate::{generate, Family};
        use crate::oracle::brute_force_cdp;
        for seed in 0..15u64 {
            let inst = generate(Family::Grid { rows: 3, cols: 3 }, 2, 2, seed).unwrap();
            let oracle = brute_force_cdp(&inst, None).unwrap();
            assert_eq!(is_instance_feasible(&inst), !oracle.is_infeasible());
        }
    }

    #[test]
    fn witness_is_proper_and_within_demand() {
        let mut rng = crate::generate::SplitMix64::new(42);
        for seed in 0..30u64 {
            let inst = crate::generate::generate(
                crate::generate::Family::TriangulatedGrid { rows: 2, cols: 3 },
                2,
                2,
                seed,
            )
            .unwrap();
            let n = inst.vertex_count();
            let in_s: Vec<bool> = (0..n).map(|_| rng.next_u64() % 2 == 0).collect();
            let (value, witness) = max_coverage(&inst, &in_s);
            assert!(witness.is_proper(&inst));
            let mut covered = 0;
            for v in 0..n {
                assert!(witness.incoming(v) <= inst.demand(v));
                covered += witness.incoming(v);
            }
            assert_eq!(covered, value);
            for u in witness.dominating_set() {
                assert!(in_s[u]);
            }
        }
    }
}
