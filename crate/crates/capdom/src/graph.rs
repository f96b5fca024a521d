//! Graph representation, BFS leveling, boundary operators, and slab/patch
//! subgraph extraction.

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("vertex id {0} out of range (n = {1})")]
    VertexOutOfRange(usize, usize),
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge {{{0}, {1}}}")]
    DuplicateEdge(usize, usize),
    #[error("demand/capacity table has {got} entries, graph has {want} vertices")]
    BadTableLength { got: usize, want: usize },
    #[error("graph is disconnected: vertex {0} is unreachable from root {1}")]
    Disconnected(usize, usize),
    #[error("shift {i} out of range for slab height {k}")]
    ShiftOutOfRange { i: usize, k: usize },
    #[error("slab index {j} out of range (max {max})")]
    SlabIndexOutOfRange { j: usize, max: usize },
    #[error("patch index {l} out of range (max {max})")]
    PatchIndexOutOfRange { l: usize, max: usize },
    #[error("patch levels {lo}..={hi} do not intersect 0..={top}")]
    EmptyLevelRange { lo: isize, hi: isize, top: usize },
    #[error("graph has no edges")]
    NoEdges,
}

/// Undirected simple graph with dense 0-based vertex ids.
///
/// Planarity is not verified; the generators produce planar graphs by
/// construction and the library accepts any simple graph. The approximation
/// guarantee of [`crate::ptas`] only holds for planar inputs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlanarGraph {
    n: usize,
    edges: Vec<(usize, usize)>,
    adj: Vec<Vec<usize>>,
}

impl PlanarGraph {
    /// Builds a graph from an edge list. Edges are normalized to `(min, max)`
    /// and stored sorted; adjacency lists are sorted ascending.
    pub fn new(n: usize, edge_list: &[(usize, usize)]) -> Result<Self, GraphError> {
        let mut edges = Vec::with_capacity(edge_list.len());
        for &(a, b) in edge_list {
            if a >= n {
                return Err(GraphError::VertexOutOfRange(a, n));
            }
            if b >= n {
                return Err(GraphError::VertexOutOfRange(b, n));
            }
            if a == b {
                return Err(GraphError::SelfLoop(a));
            }
            edges.push((a.min(b), a.max(b)));
        }
        edges.sort_unstable();
        if let Some(w) = edges.windows(2).find(|w| w[0] == w[1]) {
            return Err(GraphError::DuplicateEdge(w[0].0, w[0].1));
        }
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in &edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        Ok(Self { n, edges, adj })
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges as normalized `(min, max)` pairs, sorted.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].binary_search(&v).is_ok()
    }

    /// δ(S): edges with exactly one endpoint in S.
    pub fn cut_edges(&self, in_s: &[bool]) -> Vec<(usize, usize)> {
        self.edges
            .iter()
            .copied()
            .filter(|&(u, v)| in_s[u] != in_s[v])
            .collect()
    }

    /// ∂(S): vertices of S incident to an edge of δ(S).
    pub fn boundary_vertices(&self, in_s: &[bool]) -> Vec<usize> {
        let mut out: Vec<usize> = (0..self.n)
            .filter(|&v| in_s[v] && self.adj[v].iter().any(|&w| !in_s[w]))
            .collect();
        out.sort_unstable();
        out
    }
}

/// A problem instance: graph plus per-vertex demand and capacity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    graph: PlanarGraph,
    demand: Vec<usize>,
    capacity: Vec<usize>,
    d_max: usize,
    c_max: usize,
    total_demand: usize,
}

impl Instance {
    pub fn new(
        graph: PlanarGraph,
        demand: Vec<usize>,
        capacity: Vec<usize>,
    ) -> Result<Self, GraphError> {
        let n = graph.vertex_count();
        if demand.len() != n {
            return Err(GraphError::BadTableLength {
                got: demand.len(),
                want: n,
            });
        }
        if capacity.len() != n {
            return Err(GraphError::BadTableLength {
                got: capacity.len(),
                want: n,
            });
        }
        let d_max = demand.iter().copied().max().unwrap_or(0);
        let c_max = capacity.iter().copied().max().unwrap_or(0);
        let total_demand = demand.iter().sum();
        Ok(Self {
            graph,
            demand,
            capacity,
            d_max,
            c_max,
            total_demand,
        })
    }

    pub fn graph(&self) -> &PlanarGraph {
        &self.graph
    }

    pub fn vertex_count(&self) -> usize {
        self.graph.vertex_count()
    }

    pub fn demand(&self, v: usize) -> usize {
        self.demand[v]
    }

    pub fn capacity(&self, v: usize) -> usize {
        self.capacity[v]
    }

    pub fn demands(&self) -> &[usize] {
        &self.demand
    }

    pub fn capacities(&self) -> &[usize] {
        &self.capacity
    }

    /// d*: maximum demand over all vertices.
    pub fn max_demand(&self) -> usize {
        self.d_max
    }

    /// c*: maximum capacity over all vertices.
    pub fn max_capacity(&self) -> usize {
        self.c_max
    }

    pub fn total_demand(&self) -> usize {
        self.total_demand
    }

    /// Sum of demands over the closed neighborhood N[v].
    pub fn closed_neighborhood_demand(&self, v: usize) -> usize {
        self.demand[v] + self.graph.neighbors(v).iter().map(|&u| self.demand[u]).sum::<usize>()
    }

    /// Sum of capacities over the closed neighborhood N[v].
    pub fn closed_neighborhood_capacity(&self, v: usize) -> usize {
        self.capacity[v]
            + self.graph.neighbors(v).iter().map(|&u| self.capacity[u]).sum::<usize>()
    }
}

/// BFS levels from a root: `level_of[v]` is the hop distance from the root.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Levels {
    root: usize,
    level_of: Vec<usize>,
    m: usize,
}

impl Levels {
    pub fn root(&self) -> usize {
        self.root
    }

    pub fn level_of(&self, v: usize) -> usize {
        self.level_of[v]
    }

    /// Number of levels (1 + max level).
    pub fn level_count(&self) -> usize {
        self.m
    }
}

/// Partitions the vertices into levels by hop distance from `root`.
/// Disconnected inputs are rejected; the error names an unreachable vertex.
pub fn bfs_levels(inst: &Instance, root: usize) -> Result<Levels, GraphError> {
    let g = inst.graph();
    let n = g.vertex_count();
    if root >= n {
        return Err(GraphError::VertexOutOfRange(root, n));
    }
    let mut level_of = vec![usize::MAX; n];
    level_of[root] = 0;
    let mut queue = std::collections::VecDeque::from([root]);
    while let Some(u) = queue.pop_front() {
        for &w in g.neighbors(u) {
            if level_of[w] == usize::MAX {
                level_of[w] = level_of[u] + 1;
                queue.push_back(w);
            }
        }
    }
    if let Some(v) = (0..n).find(|&v| level_of[v] == usize::MAX) {
        return Err(GraphError::Disconnected(v, root));
    }
    let m = level_of.iter().copied().max().unwrap_or(0) + 1;
    Ok(Levels { root, level_of, m })
}

/// An induced subgraph over a contiguous level range, with the demand of some
/// levels masked to zero. Vertices keep their parent ids, so assignments on
/// different views compose by plain multiset union.
#[derive(Debug, Clone)]
pub struct SubgraphView<'a> {
    inst: &'a Instance,
    level_lo: usize,
    level_hi: usize,
    zero_demand_levels: Vec<usize>,
    vertices: Vec<usize>,
    in_view: Vec<bool>,
    masked: Vec<bool>,
    edges: Vec<(usize, usize)>,
}

impl<'a> SubgraphView<'a> {
    fn from_level_range(
        inst: &'a Instance,
        levels: &Levels,
        level_lo: usize,
        level_hi: usize,
        zero_demand_levels: Vec<usize>,
    ) -> Self {
        let n = inst.vertex_count();
        let mut in_view = vec![false; n];
        let mut vertices = Vec::new();
        for v in 0..n {
            let l = levels.level_of(v);
            if level_lo <= l && l <= level_hi {
                in_view[v] = true;
                vertices.push(v);
            }
        }
        let mut masked = vec![false; n];
        for &v in &vertices {
            if zero_demand_levels.contains(&levels.level_of(v)) {
                masked[v] = true;
            }
        }
        let edges = inst
            .graph()
            .edges()
            .iter()
            .copied()
            .filter(|&(u, v)| in_view[u] && in_view[v])
            .collect();
        Self {
            inst,
            level_lo,
            level_hi,
            zero_demand_levels,
            vertices,
            in_view,
            masked,
            edges,
        }
    }

    /// The whole instance as a view: every vertex, every edge, nothing masked.
    pub fn full(inst: &'a Instance) -> Self {
        let n = inst.vertex_count();
        Self {
            inst,
            level_lo: 0,
            level_hi: 0,
            zero_demand_levels: Vec::new(),
            vertices: (0..n).collect(),
            in_view: vec![true; n],
            masked: vec![false; n],
            edges: inst.graph().edges().to_vec(),
        }
    }

    pub fn instance(&self) -> &'a Instance {
        self.inst
    }

    pub fn level_range(&self) -> (usize, usize) {
        (self.level_lo, self.level_hi)
    }

    pub fn zero_demand_levels(&self) -> &[usize] {
        &self.zero_demand_levels
    }

    /// Vertices of the view, ascending parent ids.
    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn contains(&self, v: usize) -> bool {
        self.in_view[v]
    }

    /// Induced edges, normalized and sorted.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Demand of `v` in the modified problem: zero on masked levels.
    pub fn demand(&self, v: usize) -> usize {
        debug_assert!(self.in_view[v]);
        if self.masked[v] {
            0
        } else {
            self.inst.demand(v)
        }
    }

    /// Masked vertices keep their capacity.
    pub fn capacity(&self, v: usize) -> usize {
        debug_assert!(self.in_view[v]);
        self.inst.capacity(v)
    }

    pub fn is_masked(&self, v: usize) -> bool {
        self.masked[v]
    }

    pub fn total_demand(&self) -> usize {
        self.vertices.iter().map(|&v| self.demand(v)).sum()
    }
}

/// Extracts slab `j` for shift `i` and height `k`: the subgraph induced by
/// levels `jk+i ..= (j+1)k+i-1`, clipped to the existing levels. Slab 0 always
/// starts at level 0, so that the slabs for a fixed `(i, k)` partition the
/// vertex set. The outermost levels of the slab are masked to zero demand,
/// except level 0 in the first slab and the last level in the last slab.
///
/// Returns `Ok(None)` when the slab's level range lies entirely past the last
/// level; callers skip such slabs.
pub fn extract_slab<'a>(
    inst: &'a Instance,
    levels: &Levels,
    i: usize,
    j: usize,
    k: usize,
) -> Result<Option<SubgraphView<'a>>, GraphError> {
    if i >= k {
        return Err(GraphError::ShiftOutOfRange { i, k });
    }
    let m = levels.level_count();
    let j_max = m / k;
    if j > j_max {
        return Err(GraphError::SlabIndexOutOfRange { j, max: j_max });
    }
    let lo = if j == 0 { 0 } else { j * k + i };
    if lo > m - 1 {
        return Ok(None);
    }
    let hi = ((j + 1) * k + i - 1).min(m - 1);
    let mut mask = Vec::new();
    if lo != 0 {
        mask.push(lo);
    }
    if hi != m - 1 && hi != lo {
        mask.push(hi);
    } else if hi == m - 1 {
        // last slab: bottom level stays active even if it coincides with the top
        mask.retain(|&l| l != hi);
    }
    Ok(Some(SubgraphView::from_level_range(inst, levels, lo, hi, mask)))
}

/// Extracts patch `l` for shift `i` and height `k`: the subgraph induced by
/// levels `(l+1)k+i-2 ..= (l+1)k+i+1`, clipped to the existing levels. The
/// outermost levels of the clipped view are masked to zero demand.
pub fn extract_patch<'a>(
    inst: &'a Instance,
    levels: &Levels,
    i: usize,
    l: usize,
    k: usize,
) -> Result<SubgraphView<'a>, GraphError> {
    if i >= k {
        return Err(GraphError::ShiftOutOfRange { i, k });
    }
    let m = levels.level_count();
    if m / k == 0 {
        return Err(GraphError::PatchIndexOutOfRange { l, max: 0 });
    }
    let l_max = m / k - 1;
    if l > l_max {
        return Err(GraphError::PatchIndexOutOfRange { l, max: l_max });
    }
    let cut = ((l + 1) * k + i) as isize;
    let raw_lo = cut - 2;
    let raw_hi = cut + 1;
    let top = m - 1;
    if raw_lo > top as isize || raw_hi < 0 {
        return Err(GraphError::EmptyLevelRange {
            lo: raw_lo,
            hi: raw_hi,
            top,
        });
    }
    let lo = raw_lo.max(0) as usize;
    let hi = (raw_hi as usize).min(top);
    let mut mask = vec![lo];
    if hi != lo {
        mask.push(hi);
    }
    Ok(SubgraphView::from_level_range(inst, levels, lo, hi, mask))
}
