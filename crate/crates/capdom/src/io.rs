//! Text instance format and result JSON.
//!
//! Instance files are DIMACS-like, with 1-indexed vertex ids:
//!
//! ```text
//! c optional comment
//! p cdp <n> <m>
//! v <id> <demand> <capacity>     (one line per vertex)
//! e <u> <v>                      (one line per edge)
//! ```
//!
//! The vertex-cover variant uses `p cvcp <n> <m>` with `v <id> <capacity>`
//! and `e <u> <v> <demand>` lines. Writing always produces the canonical
//! form (header, vertices ascending, edges sorted), and parsing a canonical
//! file writes back byte-identically.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::assignment::{Assignment, SolveOutcome};
use crate::cvcp::{CvcpOutcome, CvcpSolution, VcInstance};
use crate::graph::{Instance, PlanarGraph};

#[derive(Debug, Error, PartialEq, Eq)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

fn fail<T>(line: usize, message: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError {
        line,
        message: message.into(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParsedInstance {
    Cdp(Instance),
    Cvcp(VcInstance),
}

/// Parses either instance format. Errors carry 1-based line numbers.
pub fn parse_instance(text: &str) -> Result<ParsedInstance, ParseError> {
    let mut header: Option<(bool, usize, usize, usize)> = None; // (is_cdp, n, m, line)
    let mut vertex_lines: Vec<(usize, Vec<usize>)> = Vec::new();
    let mut edge_lines: Vec<(usize, Vec<usize>)> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        let mut tokens = line.split_whitespace();
        let tag = tokens.next().unwrap();
        let rest: Vec<&str> = tokens.collect();
        match tag {
            "p" => {
                if header.is_some() {
                    return fail(lineno, "duplicate problem line");
                }
                if rest.len() != 3 {
                    return fail(lineno, "problem line must be `p cdp|cvcp <n> <m>`");
                }
                let is_cdp = match rest[0] {
                    "cdp" => true,
                    "cvcp" => false,
                    other => return fail(lineno, format!("unknown problem type `{other}`")),
                };
                let n = parse_number(rest[1], lineno, "vertex count")?;
                let m = parse_number(rest[2], lineno, "edge count")?;
                if n == 0 {
                    return fail(lineno, "vertex count must be positive");
                }
                header = Some((is_cdp, n, m, lineno));
            }
            "v" => {
                let nums = rest
                    .iter()
                    .map(|t| parse_number(t, lineno, "vertex field"))
                    .collect::<Result<Vec<_>, _>>()?;
                vertex_lines.push((lineno, nums));
            }
            "e" => {
                let nums = rest
                    .iter()
                    .map(|t| parse_number(t, lineno, "edge field"))
                    .collect::<Result<Vec<_>, _>>()?;
                edge_lines.push((lineno, nums));
            }
            other => return fail(lineno, format!("unknown line tag `{other}`")),
        }
    }

    let Some((is_cdp, n, m, header_line)) = header else {
        return fail(1, "missing problem line");
    };
    if vertex_lines.len() != n {
        return fail(
            header_line,
            format!("header declares {n} vertices, found {}", vertex_lines.len()),
        );
    }
    if edge_lines.len() != m {
        return fail(
            header_line,
            format!("header declares {m} edges, found {}", edge_lines.len()),
        );
    }

    let vertex_fields = if is_cdp { 3 } else { 2 };
    let mut per_vertex: Vec<Option<Vec<usize>>> = vec![None; n];
    for (lineno, nums) in vertex_lines {
        if nums.len() != vertex_fields {
            return fail(
                lineno,
                format!("vertex line needs {vertex_fields} numbers, found {}", nums.len()),
            );
        }
        let id = nums[0];
        if id == 0 || id > n {
            return fail(lineno, format!("vertex id {id} out of range 1..={n}"));
        }
        if per_vertex[id - 1].is_some() {
            return fail(lineno, format!("vertex {id} defined twice"));
        }
        per_vertex[id - 1] = Some(nums[1..].to_vec());
    }
    if let Some(missing) = per_vertex.iter().position(|v| v.is_none()) {
        return fail(header_line, format!("vertex {} has no v line", missing + 1));
    }

    let edge_fields = if is_cdp { 2 } else { 3 };
    let mut edges: Vec<(usize, usize)> = Vec::with_capacity(m);
    let mut edge_extra: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for (lineno, nums) in edge_lines {
        if nums.len() != edge_fields {
            return fail(
                lineno,
                format!("edge line needs {edge_fields} numbers, found {}", nums.len()),
            );
        }
        let (u, v) = (nums[0], nums[1]);
        for id in [u, v] {
            if id == 0 || id > n {
                return fail(lineno, format!("vertex id {id} out of range 1..={n}"));
            }
        }
        if u == v {
            return fail(lineno, format!("self-loop at vertex {u}"));
        }
        let key = ((u - 1).min(v - 1), (u - 1).max(v - 1));
        if edge_extra.contains_key(&key) {
            return fail(lineno, format!("duplicate edge {{{u}, {v}}}"));
        }
        edge_extra.insert(key, if is_cdp { 0 } else { nums[2] });
        edges.push(key);
    }

    edges.sort_unstable();
    let graph = PlanarGraph::new(n, &edges).expect("edge list validated during parsing");
    if is_cdp {
        let demand: Vec<usize> = per_vertex.iter().map(|v| v.as_ref().unwrap()[0]).collect();
        let capacity: Vec<usize> = per_vertex.iter().map(|v| v.as_ref().unwrap()[1]).collect();
        let inst = Instance::new(graph, demand, capacity).expect("tables sized to n");
        Ok(ParsedInstance::Cdp(inst))
    } else {
        let capacity: Vec<usize> = per_vertex.iter().map(|v| v.as_ref().unwrap()[0]).collect();
        let edge_demand: Vec<usize> = graph
            .edges()
            .iter()
            .map(|key| edge_extra[key])
            .collect();
        let vc = VcInstance::new(graph, edge_demand, capacity).expect("tables sized to graph");
        Ok(ParsedInstance::Cvcp(vc))
    }
}

fn parse_number(token: &str, line: usize, what: &str) -> Result<usize, ParseError> {
    token
        .parse::<usize>()
        .map_err(|_| ParseError {
            line,
            message: format!("{what} `{token}` is not a nonnegative integer"),
        })
}

/// Canonical text form of an instance.
pub fn write_instance(inst: &Instance) -> String {
    let g = inst.graph();
    let mut out = format!("p cdp {} {}\n", g.vertex_count(), g.edge_count());
    for v in 0..g.vertex_count() {
        out.push_str(&format!("v {} {} {}\n", v + 1, inst.demand(v), inst.capacity(v)));
    }
    for &(u, v) in g.edges() {
        out.push_str(&format!("e {} {}\n", u + 1, v + 1));
    }
    out
}

/// Canonical text form of a vertex-cover instance.
pub fn write_vc_instance(vc: &VcInstance) -> String {
    let g = vc.graph();
    let mut out = format!("p cvcp {} {}\n", g.vertex_count(), g.edge_count());
    for v in 0..g.vertex_count() {
        out.push_str(&format!("v {} {}\n", v + 1, vc.capacity(v)));
    }
    for (e, &(u, v)) in g.edges().iter().enumerate() {
        out.push_str(&format!("e {} {} {}\n", u + 1, v + 1, vc.edge_demand(e)));
    }
    out
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct PairRecord {
    pub facility: usize,
    pub client: usize,
    pub mult: usize,
}

/// Solve result for a `p cdp` instance. All ids are 1-indexed to match the
/// instance format.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct CdpReport {
    pub feasible: bool,
    pub size: Option<usize>,
    pub dominating_set: Vec<usize>,
    pub assignment: Vec<PairRecord>,
    pub mode: String,
    pub k: Option<usize>,
    pub shift: Option<usize>,
}

impl CdpReport {
    pub fn new(outcome: &SolveOutcome, mode: &str, k: Option<usize>, shift: Option<usize>) -> Self {
        match outcome {
            SolveOutcome::Infeasible => Self {
                feasible: false,
                size: None,
                dominating_set: Vec::new(),
                assignment: Vec::new(),
                mode: mode.to_string(),
                k,
                shift,
            },
            SolveOutcome::Feasible(a) => Self::from_assignment(a, mode, k, shift),
        }
    }

    pub fn from_assignment(
        a: &Assignment,
        mode: &str,
        k: Option<usize>,
        shift: Option<usize>,
    ) -> Self {
        Self {
            feasible: true,
            size: Some(a.size()),
            dominating_set: a.dominating_set().into_iter().map(|v| v + 1).collect(),
            assignment: a
                .iter()
                .map(|((u, v), m)| PairRecord {
                    facility: u + 1,
                    client: v + 1,
                    mult: m,
                })
                .collect(),
            mode: mode.to_string(),
            k,
            shift,
        }
    }

    pub fn to_assignment(&self) -> Assignment {
        Assignment::from_pairs(
            self.assignment
                .iter()
                .map(|r| ((r.facility - 1, r.client - 1), r.mult)),
        )
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct ServiceRecord {
    pub facility: usize,
    pub edge_u: usize,
    pub edge_v: usize,
    pub mult: usize,
}

/// Solve result for a `p cvcp` instance, expressed on the original graph.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct CvcpReport {
    pub feasible: bool,
    pub size: Option<usize>,
    pub cover: Vec<usize>,
    pub service: Vec<ServiceRecord>,
    pub mode: String,
    pub k: Option<usize>,
    pub shift: Option<usize>,
}

impl CvcpReport {
    pub fn new(
        vc: &VcInstance,
        outcome: &CvcpOutcome,
        mode: &str,
        k: Option<usize>,
        shift: Option<usize>,
    ) -> Self {
        match outcome {
            CvcpOutcome::Infeasible => Self {
                feasible: false,
                size: None,
                cover: Vec::new(),
                service: Vec::new(),
                mode: mode.to_string(),
                k,
                shift,
            },
            CvcpOutcome::Feasible(sol) => Self::from_solution(vc, sol, mode, k, shift),
        }
    }

    pub fn from_solution(
        vc: &VcInstance,
        sol: &CvcpSolution,
        mode: &str,
        k: Option<usize>,
        shift: Option<usize>,
    ) -> Self {
        Self {
            feasible: true,
            size: Some(sol.size()),
            cover: sol.cover.iter().map(|&v| v + 1).collect(),
            service: sol
                .service
                .iter()
                .map(|(&(u, e), &m)| {
                    let (a, b) = vc.graph().edges()[e];
                    ServiceRecord {
                        facility: u + 1,
                        edge_u: a + 1,
                        edge_v: b + 1,
                        mult: m,
                    }
                })
                .collect(),
            mode: mode.to_string(),
            k,
            shift,
        }
    }
}

/// Pretty JSON with a trailing newline; field order is fixed by the struct
/// definitions, so identical results serialize byte-identically.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports always serialize");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::{generate, generate_vc, Family};

    #[test]
    fn parse_write_round_trip_cdp() {
        let inst = generate(Family::Grid { rows: 3, cols: 3 }, 1, 3, 7).unwrap();
        let text = write_instance(&inst);
        match parse_instance(&text).unwrap() {
            ParsedInstance::Cdp(parsed) => {
                assert_eq!(parsed, inst);
                assert_eq!(write_instance(&parsed), text);
            }
            _ => panic!("wrong instance type"),
        }
    }

    #[test]
    fn parse_write_round_trip_cvcp() {
        let vc = generate_vc(Family::TriangulatedGrid { rows: 2, cols: 3 }, 2, 2, 3).unwrap();
        let text = write_vc_instance(&vc);
        match parse_instance(&text).unwrap() {
            ParsedInstance::Cvcp(parsed) => {
                assert_eq!(parsed, vc);
                assert_eq!(write_vc_instance(&parsed), text);
            }
            _ => panic!("wrong instance type"),
        }
    }

    #[test]
    fn comments_and_blank_lines_ignored() {
        let text = "c a comment\n\np cdp 2 1\nv 1 1 1\nv 2 0 2\ne 1 2\nc trailing\n";
        assert!(matches!(
            parse_instance(text).unwrap(),
            ParsedInstance::Cdp(_)
        ));
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let cases: Vec<(&str, usize, &str)> = vec![
            ("p cdp 1 0\nv 0 1 1\n", 2, "out of range"),
            ("p cdp 2 1\nv 1 1 1\nv 2 1 1\ne 1 1\n", 4, "self-loop"),
            ("p cdp 2 2\nv 1 1 1\nv 2 1 1\ne 1 2\ne 2 1\n", 5, "duplicate edge"),
            ("p cdp 2 1\nv 1 1 1\nv 1 1 1\ne 1 2\n", 3, "defined twice"),
            ("p cdp 2 1\nv 1 1\nv 2 1 1\ne 1 2\n", 2, "needs 3 numbers"),
            ("p cdp 1 0\nv 1 x 1\n", 2, "not a nonnegative integer"),
            ("q cdp 1 0\n", 1, "unknown line tag"),
            ("p cdp 2 0\nv 1 1 1\n", 1, "declares 2 vertices"),
            ("v 1 1 1\n", 1, "missing problem line"),
        ];
        for (text, line, needle) in cases {
            let err = parse_instance(text).unwrap_err();
            assert_eq!(err.line, line, "{text:?} -> {err}");
            assert!(err.message.contains(needle), "{text:?} -> {err}");
        }
    }

    #[test]
    fn report_json_round_trip() {
        let a = Assignment::from_pairs([((0, 1), 2), ((2, 2), 1)]);
        let report = CdpReport::from_assignment(&a, "dp", None, None);
        let json = to_json(&report);
        let back: CdpReport = serde_json::from_str(&json).unwrap();
        assert_eq!(back, report);
        assert_eq!(back.to_assignment(), a);
        assert!(json.contains("\"facility\": 1"));
    }
}
