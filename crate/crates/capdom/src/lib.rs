//! Solver library for hard-capacitated domination on planar graphs.
//!
//! Every vertex of an instance carries an integer demand and an integer
//! capacity. A solution assigns units of demand to facilities in the closed
//! neighborhood of each client, never exceeding a facility's capacity, and
//! minimizes the number of distinct facilities used. The crate provides
//!
//! * an exact dynamic program over branch decompositions ([`dp`]),
//! * an approximation scheme that decomposes the graph into BFS-level slabs
//!   and patches, solves each exactly, and repairs capacity overloads by
//!   augmenting-path smoothing ([`ptas`], [`smoothing`]),
//! * a reduction from capacitated vertex cover ([`cvcp`]),
//! * brute-force reference solvers for small instances ([`oracle`]),
//! * instance generators, a text instance format, and a CLI (`capdom`).

pub mod assignment;
pub mod branch_decomp;
pub mod cvcp;
pub mod dp;
pub mod feasibility;
pub mod generate;
pub mod graph;
pub mod io;
pub mod oracle;
pub mod ptas;
pub mod smoothing;

pub use assignment::{Assignment, SolveOutcome};
pub use graph::{bfs_levels, Instance, Levels, PlanarGraph, SubgraphView};
