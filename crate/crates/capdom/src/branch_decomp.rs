//! Branch decompositions: construction, width, and validation.
//!
//! The builder is a heuristic: it computes a linear order of the edges that
//! greedily minimizes the growth of the boundary of the processed prefix,
//! then stacks the edges into a left-deep binary tree. Every internal
//! cluster is then a prefix of the order, so the width equals the largest
//! boundary seen during the sweep. Ties are broken by lowest edge id, so the
//! result is deterministic. There is no optimality guarantee; the dynamic
//! program is correct for any width, only slower for bad ones.

use crate::graph::{GraphError, PlanarGraph};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NodeKind {
    /// Leaf holding the index of an edge of the decomposed graph.
    Leaf(usize),
    /// Internal node with exactly two children.
    Internal(usize, usize),
}

#[derive(Debug, Clone)]
pub struct BdNode {
    pub kind: NodeKind,
    /// ∂(C): vertices incident to edges both inside and outside the
    /// node's cluster, sorted ascending.
    pub boundary: Vec<usize>,
}

/// A rooted binary tree whose leaves are in bijection with the edges of a
/// graph. The cluster of a node is the edge set of its descendant leaves;
/// the root cluster is the whole edge set.
#[derive(Debug, Clone)]
pub struct BranchDecomposition {
    nodes: Vec<BdNode>,
    root: usize,
    edge_count: usize,
}

impl BranchDecomposition {
    pub fn root(&self) -> usize {
        self.root
    }

    pub fn node(&self, id: usize) -> &BdNode {
        &self.nodes[id]
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn boundary(&self, id: usize) -> &[usize] {
        &self.nodes[id].boundary
    }

    /// max |∂(C)| over all clusters.
    pub fn width(&self) -> usize {
        self.nodes.iter().map(|n| n.boundary.len()).max().unwrap_or(0)
    }

    /// Node ids in an order where children precede their parents.
    pub fn bottom_up_order(&self) -> Vec<usize> {
        let mut order = Vec::with_capacity(self.nodes.len());
        let mut stack = vec![self.root];
        while let Some(id) = stack.pop() {
            order.push(id);
            if let NodeKind::Internal(a, b) = self.nodes[id].kind {
                stack.push(a);
                stack.push(b);
            }
        }
        order.reverse();
        order
    }

    /// Edge indices of the cluster of `id`.
    pub fn cluster_edges(&self, id: usize) -> Vec<usize> {
        let mut edges = Vec::new();
        let mut stack = vec![id];
        while let Some(x) = stack.pop() {
            match self.nodes[x].kind {
                NodeKind::Leaf(e) => edges.push(e),
                NodeKind::Internal(a, b) => {
                    stack.push(a);
                    stack.push(b);
                }
            }
        }
        edges.sort_unstable();
        edges
    }

    /// Checks the leaf/edge bijection, the binary structure, and every
    /// stored boundary against a recomputation from scratch.
    pub fn validate(&self, g: &PlanarGraph) -> Result<(), String> {
        if self.edge_count != g.edge_count() {
            return Err(format!(
                "decomposition built for {} edges, graph has {}",
                self.edge_count,
                g.edge_count()
            ));
        }
        let mut seen_edge = vec![false; g.edge_count()];
        let mut reached = vec![false; self.nodes.len()];
        let mut stack = vec![self.root];
        while let Some(id) = stack.pop() {
            if reached[id] {
                return Err(format!("node {id} reached twice; not a tree"));
            }
            reached[id] = true;
            match self.nodes[id].kind {
                NodeKind::Leaf(e) => {
                    if e >= g.edge_count() {
                        return Err(format!("leaf {id} names missing edge {e}"));
                    }
                    if seen_edge[e] {
                        return Err(format!("edge {e} appears in two leaves"));
                    }
                    seen_edge[e] = true;
                }
                NodeKind::Internal(a, b) => {
                    if a == b {
                        return Err(format!("node {id} lists one child twice"));
                    }
                    stack.push(a);
                    stack.push(b);
                }
            }
        }
        if let Some(e) = seen_edge.iter().position(|&s| !s) {
            return Err(format!("edge {e} has no leaf"));
        }
        if let Some(id) = reached.iter().position(|&r| !r) {
            return Err(format!("node {id} unreachable from the root"));
        }
        for id in 0..self.nodes.len() {
            let cluster = self.cluster_edges(id);
            let expect = boundary_of_edge_set(g, &cluster);
            if expect != self.nodes[id].boundary {
                return Err(format!(
                    "node {id} stores boundary {:?}, recomputation gives {expect:?}",
                    self.nodes[id].boundary
                ));
            }
        }
        let root_cluster = self.cluster_edges(self.root);
        if root_cluster.len() != g.edge_count() {
            return Err("root cluster is not the whole edge set".to_string());
        }
        Ok(())
    }

    /// Indented text rendering of the tree, for debugging.
    pub fn dump(&self, g: &PlanarGraph) -> String {
        let mut out = String::new();
        self.dump_node(g, self.root, 0, &mut out);
        out
    }

    fn dump_node(&self, g: &PlanarGraph, id: usize, depth: usize, out: &mut String) {
        let pad = "  ".repeat(depth);
        let node = &self.nodes[id];
        match node.kind {
            NodeKind::Leaf(e) => {
                let (u, v) = g.edges()[e];
                out.push_str(&format!("{pad}leaf {u}-{v} boundary {:?}\n", node.boundary));
            }
            NodeKind::Internal(a, b) => {
                out.push_str(&format!("{pad}cluster boundary {:?}\n", node.boundary));
                self.dump_node(g, a, depth + 1, out);
                self.dump_node(g, b, depth + 1, out);
            }
        }
    }

    #[cfg(test)]
    pub(crate) fn corrupt_boundary_for_test(&mut self, id: usize) {
        self.nodes[id].boundary = vec![usize::MAX - 1];
    }
}

/// ∂ of an arbitrary edge set, recomputed from scratch.
fn boundary_of_edge_set(g: &PlanarGraph, cluster: &[usize]) -> Vec<usize> {
    let mut inside = vec![false; g.edge_count()];
    for &e in cluster {
        inside[e] = true;
    }
    let mut touches_in = vec![false; g.vertex_count()];
    let mut touches_out = vec![false; g.vertex_count()];
    for (e, &(u, v)) in g.edges().iter().enumerate() {
        if inside[e] {
            touches_in[u] = true;
            touches_in[v] = true;
        } else {
            touches_out[u] = true;
            touches_out[v] = true;
        }
    }
    (0..g.vertex_count())
        .filter(|&v| touches_in[v] && touches_out[v])
        .collect()
}

/// Builds a decomposition of a connected graph with at least one edge.
pub fn build_decomposition(g: &PlanarGraph) -> Result<BranchDecomposition, GraphError> {
    let m = g.edge_count();
    if m == 0 {
        return Err(GraphError::NoEdges);
    }
    let order = greedy_edge_order(g);

    let mut nodes = Vec::with_capacity(2 * m - 1);
    // leaf boundaries: endpoints that also touch other edges
    let leaf_boundary = |e: usize| {
        let (u, v) = g.edges()[e];
        let mut b: Vec<usize> = [u, v]
            .into_iter()
            .filter(|&w| g.degree(w) >= 2)
            .collect();
        b.sort_unstable();
        b
    };

    if m == 1 {
        nodes.push(BdNode {
            kind: NodeKind::Leaf(order[0]),
            // the lone cluster is the whole edge set, so its boundary is empty
            boundary: Vec::new(),
        });
        return Ok(BranchDecomposition {
            nodes,
            root: 0,
            edge_count: m,
        });
    }

    let mut cnt = vec![0usize; g.vertex_count()];
    let prefix_boundary = |cnt: &[usize]| -> Vec<usize> {
        (0..g.vertex_count())
            .filter(|&v| cnt[v] > 0 && cnt[v] < g.degree(v))
            .collect()
    };

    let mut last: usize = 0;
    for (t, &e) in order.iter().enumerate() {
        let leaf_id = nodes.len();
        nodes.push(BdNode {
            kind: NodeKind::Leaf(e),
            boundary: leaf_boundary(e),
        });
        let (u, v) = g.edges()[e];
        cnt[u] += 1;
        cnt[v] += 1;
        if t == 0 {
            last = leaf_id;
        } else {
            let internal_id = nodes.len();
            nodes.push(BdNode {
                kind: NodeKind::Internal(last, leaf_id),
                boundary: prefix_boundary(&cnt),
            });
            last = internal_id;
        }
    }
    Ok(BranchDecomposition {
        nodes,
        root: last,
        edge_count: m,
    })
}

/// Linear edge order: repeatedly append the unused edge whose addition
/// changes the prefix boundary least, lowest edge id on ties.
fn greedy_edge_order(g: &PlanarGraph) -> Vec<usize> {
    let m = g.edge_count();
    let mut cnt = vec![0usize; g.vertex_count()];
    let mut used = vec![false; m];
    let mut order = Vec::with_capacity(m);
    for _ in 0..m {
        let mut best: Option<(isize, usize)> = None;
        for e in 0..m {
            if used[e] {
                continue;
            }
            let (u, v) = g.edges()[e];
            let mut delta = 0isize;
            for w in [u, v] {
                if cnt[w] == 0 && g.degree(w) > 1 {
                    delta += 1;
                } else if cnt[w] > 0 && cnt[w] == g.degree(w) - 1 {
                    delta -= 1;
                }
            }
            if best.is_none_or(|(bd, _)| delta < bd) {
                best = Some((delta, e));
            }
        }
        let (_, e) = best.expect("an unused edge remains");
        used[e] = true;
        let (u, v) = g.edges()[e];
        cnt[u] += 1;
        cnt[v] += 1;
        order.push(e);
    }
    order
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Exact branchwidth by exhaustive search over all decomposition trees,
    /// for graphs with few edges.
    fn exact_branchwidth(g: &PlanarGraph) -> usize {
        let m = g.edge_count();
        assert!(m >= 1 && m <= 7, "exhaustive search only at toy scale");
        let full: u32 = (1 << m) - 1;
        let mut memo = vec![usize::MAX; 1 << m];
        fn boundary_size(g: &PlanarGraph, set: u32) -> usize {
            let edges: Vec<usize> = (0..g.edge_count()).filter(|&e| set >> e & 1 == 1).collect();
            super::boundary_of_edge_set(g, &edges).len()
        }
        fn best(g: &PlanarGraph, set: u32, memo: &mut Vec<usize>) -> usize {
            if memo[set as usize] != usize::MAX {
                return memo[set as usize];
            }
            let own = boundary_size(g, set);
            let result = if set.count_ones() == 1 {
                own
            } else {
                // split off a nonempty proper subset containing the lowest bit
                let low = set & set.wrapping_neg();
                let rest = set ^ low;
                let mut sub = rest;
                let mut best_split = usize::MAX;
                loop {
                    let a = low | sub;
                    let b = set ^ a;
                    if b != 0 {
                        let w = best(g, a, memo).max(best(g, b, memo));
                        best_split = best_split.min(w);
                    }
                    if sub == 0 {
                        break;
                    }
                    sub = (sub - 1) & rest;
                }
                own.max(best_split)
            };
            memo[set as usize] = result;
            result
        }
        best(g, full, &mut memo)
    }

    #[test]
    fn single_edge_width_zero() {
        let g = PlanarGraph::new(2, &[(0, 1)]).unwrap();
        let bd = build_decomposition(&g).unwrap();
        assert_eq!(bd.node_count(), 1);
        assert_eq!(bd.width(), 0);
        assert!(bd.validate(&g).is_ok());
    }

    #[test]
    fn path_three_width_one() {
        let g = PlanarGraph::new(3, &[(0, 1), (1, 2)]).unwrap();
        let bd = build_decomposition(&g).unwrap();
        assert_eq!(bd.width(), 1);
        assert!(bd.validate(&g).is_ok());
        // root combines the two leaves; each leaf boundary is the middle vertex
        let root = bd.node(bd.root());
        match root.kind {
            NodeKind::Internal(a, b) => {
                assert_eq!(bd.boundary(a), &[1]);
                assert_eq!(bd.boundary(b), &[1]);
            }
            _ => panic!("two-edge decomposition must have an internal root"),
        }
        assert!(bd.boundary(bd.root()).is_empty());
    }

    #[test]
    fn star_width_matches_exhaustive() {
        let g = PlanarGraph::new(4, &[(0, 1), (0, 2), (0, 3)]).unwrap();
        let bd = build_decomposition(&g).unwrap();
        assert!(bd.validate(&g).is_ok());
        assert_eq!(exact_branchwidth(&g), 1);
        assert_eq!(bd.width(), 1);
    }

    #[test]
    fn heuristic_matches_exhaustive_on_toy_graphs() {
        let toys: Vec<PlanarGraph> = vec![
            PlanarGraph::new(3, &[(0, 1), (0, 2), (1, 2)]).unwrap(), // triangle
            PlanarGraph::new(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap(), // 4-cycle
            PlanarGraph::new(4, &[(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)]).unwrap(), // 4-cycle + chord
            PlanarGraph::new(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (1, 3)]).unwrap(),
            PlanarGraph::new(6, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5)]).unwrap(), // path
        ];
        for g in &toys {
            let bd = build_decomposition(g).unwrap();
            assert!(bd.validate(g).is_ok(), "{}", bd.dump(g));
            let exact = exact_branchwidth(g);
            assert!(
                bd.width() >= exact,
                "heuristic width below the exact minimum is impossible"
            );
            assert!(
                bd.width() <= exact + 1,
                "heuristic width {} far from exact {exact} on {:?}",
                bd.width(),
                g.edges()
            );
        }
    }

    #[test]
    fn grid_width_within_family_bound() {
        let inst = crate::generate::generate(
            crate::generate::Family::Grid { rows: 3, cols: 3 },
            1,
            1,
            0,
        )
        .unwrap();
        let bd = build_decomposition(inst.graph()).unwrap();
        assert!(bd.validate(inst.graph()).is_ok());
        assert!(bd.width() <= 6, "3x3 grid gave width {}", bd.width());
    }

    #[test]
    fn corrupted_boundary_fails_validation() {
        let g = PlanarGraph::new(3, &[(0, 1), (1, 2)]).unwrap();
        let mut bd = build_decomposition(&g).unwrap();
        assert!(bd.validate(&g).is_ok());
        bd.corrupt_boundary_for_test(0);
        assert!(bd.validate(&g).is_err());
    }

    #[test]
    fn children_partition_parent_cluster() {
        let inst = crate::generate::generate(
            crate::generate::Family::TriangulatedGrid { rows: 2, cols: 3 },
            1,
            1,
            1,
        )
        .unwrap();
        let g = inst.graph();
        let bd = build_decomposition(g).unwrap();
        for id in 0..bd.node_count() {
            if let NodeKind::Internal(a, b) = bd.node(id).kind {
                let mut union = bd.cluster_edges(a);
                let right = bd.cluster_edges(b);
                assert!(union.iter().all(|e| !right.contains(e)));
                union.extend(&right);
                union.sort_unstable();
                assert_eq!(union, bd.cluster_edges(id));
            }
        }
    }

    #[test]
    fn forgotten_vertices_have_all_edges_inside() {
        let inst = crate::generate::generate(
            crate::generate::Family::Grid { rows: 3, cols: 3 },
            1,
            1,
            2,
        )
        .unwrap();
        let g = inst.graph();
        let bd = build_decomposition(g).unwrap();
        for id in 0..bd.node_count() {
            if let NodeKind::Internal(a, b) = bd.node(id).kind {
                let b0 = bd.boundary(id);
                let b1 = bd.boundary(a);
                let b2 = bd.boundary(b);
                for &v in b0 {
                    assert!(
                        b1.contains(&v) || b2.contains(&v),
                        "parent boundary must come from a child"
                    );
                }
                let cluster = bd.cluster_edges(id);
                for &v in b1 {
                    if b2.contains(&v) && !b0.contains(&v) {
                        // forgotten vertex: every incident edge lies in the cluster
                        let incident: Vec<usize> = g
                            .edges()
                            .iter()
                            .enumerate()
                            .filter(|(_, &(x, y))| x == v || y == v)
                            .map(|(e, _)| e)
                            .collect();
                        assert!(incident.iter().all(|e| cluster.contains(e)));
                    }
                }
            }
        }
    }
}
