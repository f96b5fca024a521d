//! Capacitated vertex cover via the edge-bisection reduction to capacitated
//! domination.

use std::collections::{BTreeMap, BTreeSet};

use crate::graph::{GraphError, Instance, PlanarGraph};
use crate::ptas::{cdp_ptas, PtasConfig, PtasError};

/// A vertex-cover instance: demands sit on edges, capacities on vertices,
/// and an edge's demand can only be met by its own endpoints.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VcInstance {
    graph: PlanarGraph,
    edge_demand: Vec<usize>,
    capacity: Vec<usize>,
}

impl VcInstance {
    pub fn new(
        graph: PlanarGraph,
        edge_demand: Vec<usize>,
        capacity: Vec<usize>,
    ) -> Result<Self, GraphError> {
        if edge_demand.len() != graph.edge_count() {
            return Err(GraphError::BadTableLength {
                got: edge_demand.len(),
                want: graph.edge_count(),
            });
        }
        if capacity.len() != graph.vertex_count() {
            return Err(GraphError::BadTableLength {
                got: capacity.len(),
                want: graph.vertex_count(),
            });
        }
        Ok(Self {
            graph,
            edge_demand,
            capacity,
        })
    }

    pub fn graph(&self) -> &PlanarGraph {
        &self.graph
    }

    pub fn edge_demand(&self, edge_index: usize) -> usize {
        self.edge_demand[edge_index]
    }

    pub fn edge_demands(&self) -> &[usize] {
        &self.edge_demand
    }

    pub fn capacity(&self, v: usize) -> usize {
        self.capacity[v]
    }

    pub fn capacities(&self) -> &[usize] {
        &self.capacity
    }

    pub fn max_edge_demand(&self) -> usize {
        self.edge_demand.iter().copied().max().unwrap_or(0)
    }

    pub fn total_edge_demand(&self) -> usize {
        self.edge_demand.iter().sum()
    }
}

/// Bisects every edge: edge e = uv gains a new vertex w with capacity 0 and
/// demand d(e); u and v keep their capacities and get demand 0. A dominating
/// set of the bisected instance is exactly a vertex cover of the original,
/// and subdividing edges preserves planarity, maximum demand, and maximum
/// capacity.
///
/// Returns the bisected instance and the bisector vertex of each edge
/// (indexed like `vc.graph().edges()`).
pub fn reduce_to_cdp(vc: &VcInstance) -> (Instance, Vec<usize>) {
    let n = vc.graph.vertex_count();
    let m = vc.graph.edge_count();
    let mut edges = Vec::with_capacity(2 * m);
    let mut bisector_of_edge = Vec::with_capacity(m);
    let mut demand = vec![0; n + m];
    let mut capacity = vec![0; n + m];
    capacity[..n].copy_from_slice(&vc.capacity);
    for (e, &(u, v)) in vc.graph.edges().iter().enumerate() {
        let w = n + e;
        edges.push((u, w));
        edges.push((w, v));
        demand[w] = vc.edge_demand[e];
        bisector_of_edge.push(w);
    }
    let graph = PlanarGraph::new(n + m, &edges).expect("bisection keeps the graph simple");
    let inst = Instance::new(graph, demand, capacity).expect("tables sized for the new graph");
    (inst, bisector_of_edge)
}

/// Solution of a vertex-cover instance, expressed on the original graph:
/// the cover set and how many units of each edge's demand each endpoint
/// serves.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CvcpSolution {
    pub cover: BTreeSet<usize>,
    /// (facility, edge index) -> units served.
    pub service: BTreeMap<(usize, usize), usize>,
}

impl CvcpSolution {
    pub fn size(&self) -> usize {
        self.cover.len()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CvcpOutcome {
    Feasible(CvcpSolution),
    Infeasible,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CvcpRun {
    pub k: usize,
    pub shift: Option<usize>,
    pub outcome: CvcpOutcome,
}

/// Runs the approximation scheme on the bisected instance and maps the
/// assignment back to (facility, edge) coverage. Bisector vertices have zero
/// capacity, so they never enter the dominating set, and therefore never the
/// cover. The bisected instance is normalized first; an edge whose demand
/// exceeds its endpoints' combined capacity makes the whole problem
/// infeasible right there.
pub fn solve_cvcp(vc: &VcInstance, cfg: &PtasConfig) -> Result<CvcpRun, PtasError> {
    let (inst, bisectors) = reduce_to_cdp(vc);
    let norm = match crate::feasibility::normalize_instance(&inst) {
        Ok(norm) => norm,
        Err(_) => {
            let k = match cfg.k {
                crate::ptas::KChoice::Epsilon(eps) => {
                    crate::ptas::choose_k(eps, inst.max_capacity().max(1))?
                }
                crate::ptas::KChoice::Fixed(k) => k.max(2),
            };
            return Ok(CvcpRun {
                k,
                shift: None,
                outcome: CvcpOutcome::Infeasible,
            });
        }
    };
    let run = cdp_ptas(&norm, cfg)?;
    let outcome = match run.outcome {
        crate::assignment::SolveOutcome::Infeasible => CvcpOutcome::Infeasible,
        crate::assignment::SolveOutcome::Feasible(a) => {
            CvcpOutcome::Feasible(map_back(vc, &bisectors, &a))
        }
    };
    Ok(CvcpRun {
        k: run.k,
        shift: run.shift,
        outcome,
    })
}

/// Translates an assignment on the bisected instance into edge service on
/// the original. Self-loops at zero-demand original vertices (smoothing
/// artifacts) are dropped.
pub fn map_back(vc: &VcInstance, bisectors: &[usize], a: &crate::assignment::Assignment) -> CvcpSolution {
    let n = vc.graph.vertex_count();
    let mut edge_of_bisector = BTreeMap::new();
    for (e, &w) in bisectors.iter().enumerate() {
        edge_of_bisector.insert(w, e);
    }
    let mut service = BTreeMap::new();
    let mut cover = BTreeSet::new();
    for ((u, v), mult) in a.iter() {
        if u == v || v < n {
            // self-loops and units into zero-demand original vertices carry
            // no edge coverage
            debug_assert!(u == v, "covering assignments never feed demandless clients");
            continue;
        }
        debug_assert!(u < n, "bisectors have zero capacity and never serve");
        let e = edge_of_bisector[&v];
        *service.entry((u, e)).or_insert(0) += mult;
        cover.insert(u);
    }
    CvcpSolution { cover, service }
}
