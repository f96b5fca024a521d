//! Brute-force exact solvers, used as ground truth at desk scale.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::assignment::Assignment;
use crate::cvcp::{CvcpSolution, VcInstance};
use crate::feasibility::{max_coverage, FlowNetwork, INF_CAP};
use crate::graph::Instance;

/// Largest vertex count the brute-force solvers accept by default.
pub const DEFAULT_VERTEX_LIMIT: usize = 16;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("instance has {n} vertices, brute force is limited to {limit}; use the dp or ptas solvers")]
    TooLarge { n: usize, limit: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleSolution {
    pub size: usize,
    pub witness: Assignment,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OracleOutcome {
    Optimal(OracleSolution),
    Infeasible,
    /// The instance is feasible but every solution needs more facilities
    /// than the requested cap. Only produced when a cap is given.
    SizeCapExceeded,
}

impl OracleOutcome {
    pub fn opt_size(&self) -> Option<usize> {
        match self {
            OracleOutcome::Optimal(s) => Some(s.size),
            _ => None,
        }
    }

    pub fn is_infeasible(&self) -> bool {
        matches!(self, OracleOutcome::Infeasible)
    }
}

/// Visits all `t`-subsets of `0..n` in lexicographic order.
fn for_each_subset(n: usize, t: usize, mut visit: impl FnMut(&[usize]) -> bool) {
    if t > n {
        return;
    }
    let mut comb: Vec<usize> = (0..t).collect();
    loop {
        if visit(&comb) {
            return;
        }
        // advance to the next combination
        let mut i = t;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if comb[i] != i + n - t {
                break;
            }
            if i == 0 {
                return;
            }
        }
        comb[i] += 1;
        for j in i + 1..t {
            comb[j] = comb[j - 1] + 1;
        }
    }
}

/// Exact minimum-size solver by enumeration of candidate facility sets in
/// (cardinality, lexicographic) order. A set S is good iff facilities in S
/// can cover the entire demand, checked by maximum flow; the first good set
/// found is optimal and its flow witness is returned.
pub fn brute_force_cdp(
    inst: &Instance,
    size_cap: Option<usize>,
) -> Result<OracleOutcome, OracleError> {
    brute_force_cdp_limited(inst, size_cap, DEFAULT_VERTEX_LIMIT)
}

pub fn brute_force_cdp_limited(
    inst: &Instance,
    size_cap: Option<usize>,
    limit: usize,
) -> Result<OracleOutcome, OracleError> {
    let n = inst.vertex_count();
    if n > limit {
        return Err(OracleError::TooLarge { n, limit });
    }
    let total = inst.total_demand();
    let all = vec![true; n];
    if max_coverage(inst, &all).0 < total {
        return Ok(OracleOutcome::Infeasible);
    }
    let max_card = size_cap.unwrap_or(n).min(n);
    for t in 0..=max_card {
        let mut found = None;
        for_each_subset(n, t, |subset| {
            let mut in_s = vec![false; n];
            for &v in subset {
                in_s[v] = true;
            }
            let (value, witness) = max_coverage(inst, &in_s);
            if value == total {
                found = Some(witness);
                true
            } else {
                false
            }
        });
        if let Some(witness) = found {
            return Ok(OracleOutcome::Optimal(OracleSolution { size: t, witness }));
        }
    }
    Ok(OracleOutcome::SizeCapExceeded)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CvcpOracleOutcome {
    Optimal(CvcpSolution),
    Infeasible,
    SizeCapExceeded,
}

impl CvcpOracleOutcome {
    pub fn opt_size(&self) -> Option<usize> {
        match self {
            CvcpOracleOutcome::Optimal(s) => Some(s.size()),
            _ => None,
        }
    }

    pub fn is_infeasible(&self) -> bool {
        matches!(self, CvcpOracleOutcome::Infeasible)
    }
}

/// Maximum edge demand coverable by cover candidates in S, each endpoint
/// serving only its incident edges within capacity, plus the service map of
/// an optimal flow.
fn max_edge_coverage(vc: &VcInstance, in_s: &[bool]) -> (usize, BTreeMap<(usize, usize), usize>) {
    let n = vc.graph().vertex_count();
    let m = vc.graph().edge_count();
    let source = 0;
    let sink = 1;
    let fac = |u: usize| 2 + u;
    let cli = |e: usize| 2 + n + e;
    let mut net = FlowNetwork::new(2 + n + m, source, sink);
    let mut fac_arc_start = vec![usize::MAX; n];
    let mut incident: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (e, &(u, v)) in vc.graph().edges().iter().enumerate() {
        incident[u].push(e);
        incident[v].push(e);
    }
    for u in 0..n {
        if in_s[u] && vc.capacity(u) > 0 {
            net.add_arc(source, fac(u), vc.capacity(u));
            fac_arc_start[u] = net.arc_count(fac(u));
            for &e in &incident[u] {
                net.add_arc(fac(u), cli(e), INF_CAP);
            }
        }
    }
    for e in 0..m {
        if vc.edge_demand(e) > 0 {
            net.add_arc(cli(e), sink, vc.edge_demand(e));
        }
    }
    let value = net.max_flow();
    let mut service = BTreeMap::new();
    for u in 0..n {
        if fac_arc_start[u] == usize::MAX {
            continue;
        }
        for (offset, &e) in incident[u].iter().enumerate() {
            let sent = net.sent(fac(u), fac_arc_start[u] + offset, INF_CAP);
            if sent > 0 {
                service.insert((u, e), sent);
            }
        }
    }
    (value, service)
}

/// Exact minimum vertex-cover-with-capacities by subset enumeration, the
/// direct analogue of [`brute_force_cdp`] with edges as clients. This solver
/// never goes through the bisection reduction, so it can serve as an
/// independent check of it.
pub fn brute_force_cvcp(
    vc: &VcInstance,
    size_cap: Option<usize>,
) -> Result<CvcpOracleOutcome, OracleError> {
    let n = vc.graph().vertex_count();
    if n > DEFAULT_VERTEX_LIMIT {
        return Err(OracleError::TooLarge {
            n,
            limit: DEFAULT_VERTEX_LIMIT,
        });
    }
    let total = vc.total_edge_demand();
    let all = vec![true; n];
    if max_edge_coverage(vc, &all).0 < total {
        return Ok(CvcpOracleOutcome::Infeasible);
    }
    let max_card = size_cap.unwrap_or(n).min(n);
    for t in 0..=max_card {
        let mut found = None;
        for_each_subset(n, t, |subset| {
            let mut in_s = vec![false; n];
            for &v in subset {
                in_s[v] = true;
            }
            let (value, service) = max_edge_coverage(vc, &in_s);
            if value == total {
                found = Some(service);
                true
            } else {
                false
            }
        });
        if let Some(service) = found {
            let cover = service.keys().map(|&(u, _)| u).collect();
            return Ok(CvcpOracleOutcome::Optimal(CvcpSolution { cover, service }));
        }
    }
    Ok(CvcpOracleOutcome::SizeCapExceeded)
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
    fn subset_enumeration_order() {
        let mut seen = Vec::new();
        for_each_subset(4, 2, |s| {
            seen.push(s.to_vec());
            false
        });
        assert_eq!(
            seen,
            vec![
                vec![0, 1],
                vec![0, 2],
                vec![0, 3],
                vec![1, 2],
                vec![1, 3],
                vec![2, 3]
            ]
        );
        let mut empty = Vec::new();
        for_each_subset(3, 0, |s| {
            empty.push(s.to_vec());
            false
        });
        assert_eq!(empty, vec![Vec::<usize>::new()]);
    }

    #[test]
    fn single_vertex_cases() {
        let feasible = instance(1, &[], &[1], &[1]);
        match brute_force_cdp(&feasible, None).unwrap() {
            OracleOutcome::Optimal(sol) => {
                assert_eq!(sol.size, 1);
                assert_eq!(sol.witness, Assignment::from_pairs([((0, 0), 1)]));
            }
            other => panic!("expected optimal, got {other:?}"),
        }
        let infeasible = instance(1, &[], &[1], &[0]);
        assert!(brute_force_cdp(&infeasible, None).unwrap().is_infeasible());
    }

    #[test]
    fn path_three_unit_everything_needs_all_vertices() {
        let inst = instance(3, &[(0, 1), (1, 2)], &[1, 1, 1], &[1, 1, 1]);
        let out = brute_force_cdp(&inst, None).unwrap();
        assert_eq!(out.opt_size(), Some(3));
        if let OracleOutcome::Optimal(sol) = out {
            assert!(sol.witness.strict_validate(&inst).is_ok());
        }
    }

    #[test]
    fn size_cap_early_exit() {
        let inst = instance(3, &[(0, 1), (1, 2)], &[1, 1, 1], &[1, 1, 1]);
        assert_eq!(
            brute_force_cdp(&inst, Some(2)).unwrap(),
            OracleOutcome::SizeCapExceeded
        );
        assert_eq!(brute_force_cdp(&inst, Some(3)).unwrap().opt_size(), Some(3));
    }

    #[test]
    fn limit_enforced() {
        let inst = crate::generate::generate(
            crate::generate::Family::Grid { rows: 5, cols: 4 },
            1,
            1,
            0,
        )
        .unwrap();
        assert_eq!(
            brute_force_cdp(&inst, None).unwrap_err(),
            OracleError::TooLarge { n: 20, limit: 16 }
        );
    }

    #[test]
    fn optimum_monotone_under_parameter_changes() {
        let mut rng = crate::generate::SplitMix64::new(31);
        for seed in 0..20u64 {
            let inst = crate::generate::generate(
                crate::generate::Family::Path { n: 5 },
                2,
                2,
                seed,
            )
            .unwrap();
            let v = (rng.next_u64() % 5) as usize;

            // raising one capacity never raises the optimum
            let mut caps = inst.capacities().to_vec();
            caps[v] += 1;
            let richer =
                Instance::new(inst.graph().clone(), inst.demands().to_vec(), caps).unwrap();
            let base = brute_force_cdp(&inst, None).unwrap();
            let more = brute_force_cdp(&richer, None).unwrap();
            match (base.opt_size(), more.opt_size()) {
                (Some(b), Some(m)) => assert!(m <= b),
                (None, Some(_)) | (None, None) => {}
                (Some(_), None) => panic!("extra capacity made the instance infeasible"),
            }

            // raising one demand never lowers the optimum
            let mut demands = inst.demands().to_vec();
            demands[v] += 1;
            let needier =
                Instance::new(inst.graph().clone(), demands, inst.capacities().to_vec()).unwrap();
            let harder = brute_force_cdp(&needier, None).unwrap();
            match (base.opt_size(), harder.opt_size()) {
                (Some(b), Some(h)) => assert!(h >= b),
                (Some(_), None) | (None, None) => {}
                (None, Some(_)) => panic!("extra demand made the instance feasible"),
            }
        }
    }

    #[test]
    fn cvcp_single_edge() {
        let g = PlanarGraph::new(2, &[(0, 1)]).unwrap();
        let vc = VcInstance::new(g, vec![2], vec![1, 1]).unwrap();
        let out = brute_force_cvcp(&vc, None).unwrap();
        assert_eq!(out.opt_size(), Some(2));
    }

    #[test]
    fn cvcp_triangle() {
        let g = PlanarGraph::new(3, &[(0, 1), (0, 2), (1, 2)]).unwrap();
        let vc = VcInstance::new(g, vec![1, 1, 1], vec![2, 2, 2]).unwrap();
        let out = brute_force_cvcp(&vc, None).unwrap();
        assert_eq!(out.opt_size(), Some(2));
    }

    #[test]
    fn cvcp_overloaded_edge_is_infeasible() {
        let g = PlanarGraph::new(2, &[(0, 1)]).unwrap();
        let vc = VcInstance::new(g, vec![3], vec![1, 1]).unwrap();
        assert!(brute_force_cvcp(&vc, None).unwrap().is_infeasible());
    }
}
