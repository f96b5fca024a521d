//! Instance generators for planar families, with seed-reproducible demands
//! and capacities.

use thiserror::Error;

use crate::cvcp::VcInstance;
use crate::graph::{GraphError, Instance, PlanarGraph};

/// SplitMix64. Hand-rolled so that identical seeds produce identical
/// instances on every platform and toolchain.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    /// Uniform draw from `lo..=hi`.
    pub fn range(&mut self, lo: usize, hi: usize) -> usize {
        debug_assert!(lo <= hi);
        lo + (self.next_u64() % (hi - lo + 1) as u64) as usize
    }
}

#[derive(Debug, Error)]
pub enum GenError {
    #[error("family {0} requires {1}")]
    BadParams(&'static str, &'static str),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// The supported graph families. All are planar by construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    /// rows x cols grid.
    Grid { rows: usize, cols: usize },
    /// Path on n vertices.
    Path { n: usize },
    /// Star: center 0 plus n-1 leaves.
    Star { n: usize },
    /// rows x cols grid with one diagonal per cell.
    TriangulatedGrid { rows: usize, cols: usize },
}

impl Family {
    pub fn build_graph(self) -> Result<PlanarGraph, GenError> {
        match self {
            Family::Grid { rows, cols } => {
                if rows == 0 || cols == 0 {
                    return Err(GenError::BadParams("grid", "rows >= 1 and cols >= 1"));
                }
                Ok(PlanarGraph::new(rows * cols, &grid_edges(rows, cols, false))?)
            }
            Family::TriangulatedGrid { rows, cols } => {
                if rows == 0 || cols == 0 {
                    return Err(GenError::BadParams(
                        "triangulated-grid",
                        "rows >= 1 and cols >= 1",
                    ));
                }
                Ok(PlanarGraph::new(rows * cols, &grid_edges(rows, cols, true))?)
            }
            Family::Path { n } => {
                if n == 0 {
                    return Err(GenError::BadParams("path", "n >= 1"));
                }
                let edges: Vec<_> = (0..n - 1).map(|v| (v, v + 1)).collect();
                Ok(PlanarGraph::new(n, &edges)?)
            }
            Family::Star { n } => {
                if n < 2 {
                    return Err(GenError::BadParams("star", "n >= 2"));
                }
                let edges: Vec<_> = (1..n).map(|v| (0, v)).collect();
                Ok(PlanarGraph::new(n, &edges)?)
            }
        }
    }
}

fn grid_edges(rows: usize, cols: usize, diagonals: bool) -> Vec<(usize, usize)> {
    let idx = |r: usize, c: usize| r * cols + c;
    let mut edges = Vec::new();
    for r in 0..rows {
        for c in 0..cols {
            if c + 1 < cols {
                edges.push((idx(r, c), idx(r, c + 1)));
            }
            if r + 1 < rows {
                edges.push((idx(r, c), idx(r + 1, c)));
            }
            if diagonals && r + 1 < rows && c + 1 < cols {
                edges.push((idx(r, c), idx(r + 1, c + 1)));
            }
        }
    }
    edges
}

/// Generates an instance of the family with demands drawn uniformly from
/// `0..=d_max` and capacities from `1..=c_max`, in vertex order, from a
/// SplitMix64 stream seeded with `seed`.
pub fn generate(family: Family, d_max: usize, c_max: usize, seed: u64) -> Result<Instance, GenError> {
    if c_max == 0 {
        return Err(GenError::BadParams("any", "cmax >= 1"));
    }
    let graph = family.build_graph()?;
    let n = graph.vertex_count();
    let mut rng = SplitMix64::new(seed);
    let demand: Vec<usize> = (0..n).map(|_| rng.range(0, d_max)).collect();
    let capacity: Vec<usize> = (0..n).map(|_| rng.range(1, c_max)).collect();
    Ok(Instance::new(graph, demand, capacity)?)
}

/// Generates a vertex-cover instance: edge demands uniform from `0..=d_max`
/// (in edge order), vertex capacities uniform from `1..=c_max`.
pub fn generate_vc(
    family: Family,
    d_max: usize,
    c_max: usize,
    seed: u64,
) -> Result<VcInstance, GenError> {
    if c_max == 0 {
        return Err(GenError::BadParams("any", "cmax >= 1"));
    }
    let graph = family.build_graph()?;
    let n = graph.vertex_count();
    let e = graph.edge_count();
    let mut rng = SplitMix64::new(seed);
    let edge_demand: Vec<usize> = (0..e).map(|_| rng.range(0, d_max)).collect();
    let capacity: Vec<usize> = (0..n).map(|_| rng.range(1, c_max)).collect();
    Ok(VcInstance::new(graph, edge_demand, capacity)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_structure_counts() {
        let inst = generate(Family::Grid { rows: 3, cols: 3 }, 1, 3, 7).unwrap();
        assert_eq!(inst.vertex_count(), 9);
        assert_eq!(inst.graph().edge_count(), 12);
        assert!(inst.max_demand() <= 1);
        assert!((1..=3).contains(&inst.max_capacity()));
    }

    #[test]
    fn identical_seeds_identical_instances() {
        let a = generate(Family::TriangulatedGrid { rows: 2, cols: 4 }, 2, 2, 99).unwrap();
        let b = generate(Family::TriangulatedGrid { rows: 2, cols: 4 }, 2, 2, 99).unwrap();
        assert_eq!(a, b);
        let c = generate(Family::TriangulatedGrid { rows: 2, cols: 4 }, 2, 2, 100).unwrap();
        assert!(a != c || a.demands() == c.demands());
    }

    #[test]
    fn families_are_connected() {
        for family in [
            Family::Grid { rows: 2, cols: 5 },
            Family::Path { n: 6 },
            Family::Star { n: 5 },
            Family::TriangulatedGrid { rows: 3, cols: 3 },
        ] {
            let inst = generate(family, 1, 1, 1).unwrap();
            assert!(crate::graph::bfs_levels(&inst, 0).is_ok());
        }
    }

    #[test]
    fn bad_params_rejected() {
        assert!(generate(Family::Star { n: 1 }, 1, 1, 0).is_err());
        assert!(generate(Family::Grid { rows: 0, cols: 3 }, 1, 1, 0).is_err());
        assert!(generate(Family::Path { n: 4 }, 1, 0, 0).is_err());
    }
}
