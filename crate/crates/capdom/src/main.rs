//! Command-line front end: instance generation, solving, result
//! verification, and a benchmark harness.
//!
//! Exit codes: 0 = solved / verified, 1 = infeasible or verification
//! failure, 2 = usage or parse error.

use std::collections::BTreeSet;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use capdom::assignment::SolveOutcome;
use capdom::cvcp::{self, CvcpOutcome, VcInstance};
use capdom::dp;
use capdom::feasibility::normalize_instance;
use capdom::generate::{generate, generate_vc, Family};
use capdom::graph::{bfs_levels, Instance, SubgraphView};
use capdom::io::{
    parse_instance, to_json, write_instance, write_vc_instance, CdpReport, CvcpReport,
    ParsedInstance,
};
use capdom::oracle::{brute_force_cdp, brute_force_cvcp, CvcpOracleOutcome, OracleOutcome};
use capdom::ptas::{cdp_ptas, KChoice, PtasConfig};

#[derive(Parser)]
#[command(name = "capdom", version, about = "Hard-capacitated domination on planar graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate an instance file
    Gen(GenArgs),
    /// Solve an instance and print the result as JSON
    Solve(SolveArgs),
    /// Re-check a solve result against its instance, independently of the
    /// solver code
    Verify(VerifyArgs),
    /// Solve a built-in suite and print one CSV row per instance
    Bench(BenchArgs),
}

#[derive(Copy, Clone, ValueEnum)]
enum FamilyArg {
    Grid,
    Path,
    Star,
    TriangulatedGrid,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, value_enum)]
    family: FamilyArg,
    #[arg(long)]
    rows: Option<usize>,
    #[arg(long)]
    cols: Option<usize>,
    /// Vertex count, for the path and star families
    #[arg(long)]
    n: Option<usize>,
    /// Demands are drawn uniformly from 0..=dmax
    #[arg(long, default_value_t = 1)]
    dmax: usize,
    /// Capacities are drawn uniformly from 1..=cmax
    #[arg(long, default_value_t = 1)]
    cmax: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Emit the vertex-cover variant (demands on edges) instead
    #[arg(long)]
    cvcp: bool,
    /// Write here instead of stdout
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Copy, Clone, PartialEq, ValueEnum)]
enum ModeArg {
    Ptas,
    Dp,
    Oracle,
}

impl ModeArg {
    fn name(self) -> &'static str {
        match self {
            ModeArg::Ptas => "ptas",
            ModeArg::Dp => "dp",
            ModeArg::Oracle => "oracle",
        }
    }
}

#[derive(Args)]
struct SolveArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum)]
    mode: ModeArg,
    /// Approximation target for --mode ptas (exactly one of --epsilon/--k)
    #[arg(long, conflicts_with = "k")]
    epsilon: Option<f64>,
    /// Slab height for --mode ptas, instead of deriving it from --epsilon
    #[arg(long)]
    k: Option<usize>,
    /// Root vertex of the level decomposition, 1-indexed
    #[arg(long, default_value_t = 1)]
    root: usize,
    /// Evaluate the shifts on worker threads (the result is identical)
    #[arg(long)]
    parallel_shifts: bool,
    /// Write the JSON here instead of stdout
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    input: PathBuf,
    /// JSON produced by `solve`
    #[arg(long)]
    assignment: PathBuf,
}

#[derive(Args)]
struct BenchArgs {
    /// Approximation target passed to every ptas solve
    #[arg(long, default_value_t = 1.0)]
    epsilon: f64,
    /// Seeds 0..count per suite shape
    #[arg(long, default_value_t = 3)]
    seeds: u64,
    #[arg(long)]
    parallel_shifts: bool,
}

/// Errors that end the run with exit code 2.
struct UsageError(String);

impl<E: std::fmt::Display> From<E> for UsageError {
    fn from(e: E) -> Self {
        UsageError(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Gen(args) => run_gen(args),
        Command::Solve(args) => run_solve(args),
        Command::Verify(args) => run_verify(args),
        Command::Bench(args) => run_bench(args),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(UsageError(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn emit(text: &str, output: &Option<PathBuf>) -> Result<(), UsageError> {
    match output {
        Some(path) => fs::write(path, text).map_err(|e| UsageError(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run_gen(args: GenArgs) -> Result<u8, UsageError> {
    let need = |opt: Option<usize>, what: &str| {
        opt.ok_or_else(|| UsageError(format!("this family requires --{what}")))
    };
    let family = match args.family {
        FamilyArg::Grid => Family::Grid {
            rows: need(args.rows, "rows")?,
            cols: need(args.cols, "cols")?,
        },
        FamilyArg::TriangulatedGrid => Family::TriangulatedGrid {
            rows: need(args.rows, "rows")?,
            cols: need(args.cols, "cols")?,
        },
        FamilyArg::Path => Family::Path {
            n: need(args.n, "n")?,
        },
        FamilyArg::Star => Family::Star {
            n: need(args.n, "n")?,
        },
    };
    let text = if args.cvcp {
        write_vc_instance(&generate_vc(family, args.dmax, args.cmax, args.seed)?)
    } else {
        write_instance(&generate(family, args.dmax, args.cmax, args.seed)?)
    };
    emit(&text, &args.output)?;
    Ok(0)
}

fn ptas_config(args: &SolveArgs) -> Result<PtasConfig, UsageError> {
    let k = match (args.epsilon, args.k) {
        (Some(eps), None) => KChoice::Epsilon(eps),
        (None, Some(k)) => KChoice::Fixed(k),
        (None, None) => {
            return Err(UsageError("--mode ptas needs --epsilon or --k".into()));
        }
        (Some(_), Some(_)) => unreachable!("clap enforces the conflict"),
    };
    if args.root == 0 {
        return Err(UsageError("--root is 1-indexed".into()));
    }
    Ok(PtasConfig {
        k,
        root: args.root - 1,
        parallel_shifts: args.parallel_shifts,
    })
}

fn run_solve(args: SolveArgs) -> Result<u8, UsageError> {
    let text = fs::read_to_string(&args.input)
        .map_err(|e| UsageError(format!("{}: {e}", args.input.display())))?;
    let parsed = parse_instance(&text)?;
    let (json, feasible) = match parsed {
        ParsedInstance::Cdp(inst) => {
            let report = solve_cdp(&inst, &args)?;
            (to_json(&report), report.feasible)
        }
        ParsedInstance::Cvcp(vc) => {
            let report = solve_cvcp_file(&vc, &args)?;
            (to_json(&report), report.feasible)
        }
    };
    emit(&json, &args.output)?;
    Ok(if feasible { 0 } else { 1 })
}

fn solve_cdp(inst: &Instance, args: &SolveArgs) -> Result<CdpReport, UsageError> {
    let mode = args.mode.name();
    match args.mode {
        ModeArg::Ptas => {
            let cfg = ptas_config(args)?;
            let norm = match normalize_instance(inst) {
                Ok(norm) => norm,
                Err(e) => {
                    eprintln!("note: {e}");
                    return Ok(CdpReport::new(&SolveOutcome::Infeasible, mode, None, None));
                }
            };
            let run = cdp_ptas(&norm, &cfg)?;
            Ok(CdpReport::new(&run.outcome, mode, Some(run.k), run.shift))
        }
        ModeArg::Dp => {
            let outcome = dp::cdp_dp(&SubgraphView::full(inst));
            Ok(CdpReport::new(&outcome, mode, None, None))
        }
        ModeArg::Oracle => match brute_force_cdp(inst, None)? {
            OracleOutcome::Optimal(sol) => {
                Ok(CdpReport::from_assignment(&sol.witness, mode, None, None))
            }
            OracleOutcome::Infeasible => {
                Ok(CdpReport::new(&SolveOutcome::Infeasible, mode, None, None))
            }
            OracleOutcome::SizeCapExceeded => unreachable!("no cap given"),
        },
    }
}

fn solve_cvcp_file(vc: &VcInstance, args: &SolveArgs) -> Result<CvcpReport, UsageError> {
    let mode = args.mode.name();
    match args.mode {
        ModeArg::Ptas => {
            let cfg = ptas_config(args)?;
            let run = cvcp::solve_cvcp(vc, &cfg)?;
            Ok(CvcpReport::new(vc, &run.outcome, mode, Some(run.k), run.shift))
        }
        ModeArg::Dp => {
            let (inst, bisectors) = cvcp::reduce_to_cdp(vc);
            let outcome = match dp::cdp_dp(&SubgraphView::full(&inst)) {
                SolveOutcome::Infeasible => CvcpOutcome::Infeasible,
                SolveOutcome::Feasible(a) => {
                    CvcpOutcome::Feasible(cvcp::map_back(vc, &bisectors, &a))
                }
            };
            Ok(CvcpReport::new(vc, &outcome, mode, None, None))
        }
        ModeArg::Oracle => match brute_force_cvcp(vc, None)? {
            CvcpOracleOutcome::Optimal(sol) => Ok(CvcpReport::from_solution(
                vc,
                &sol,
                mode,
                None,
                None,
            )),
            CvcpOracleOutcome::Infeasible => Ok(CvcpReport::new(
                vc,
                &CvcpOutcome::Infeasible,
                mode,
                None,
                None,
            )),
            CvcpOracleOutcome::SizeCapExceeded => unreachable!("no cap given"),
        },
    }
}

fn run_verify(args: VerifyArgs) -> Result<u8, UsageError> {
    let instance_text = fs::read_to_string(&args.input)
        .map_err(|e| UsageError(format!("{}: {e}", args.input.display())))?;
    let report_text = fs::read_to_string(&args.assignment)
        .map_err(|e| UsageError(format!("{}: {e}", args.assignment.display())))?;
    let parsed = parse_instance(&instance_text)?;

    let violations = match parsed {
        ParsedInstance::Cdp(inst) => {
            let report: CdpReport = serde_json::from_str(&report_text)?;
            verify_cdp(&inst, &report)
        }
        ParsedInstance::Cvcp(vc) => {
            let report: CvcpReport = serde_json::from_str(&report_text)?;
            verify_cvcp(&vc, &report)
        }
    };
    match violations {
        None => {
            println!("verify: result reports infeasible; nothing to check");
            Ok(0)
        }
        Some(violations) if violations.is_empty() => {
            println!("verify: all checks passed");
            Ok(0)
        }
        Some(violations) => {
            for v in &violations {
                println!("violation: {v}");
            }
            println!("verify: {} violation(s)", violations.len());
            Ok(1)
        }
    }
}

/// Independent re-check of a CDP result: raw counting loops over the report,
/// no solver code involved. Returns None for infeasible reports.
fn verify_cdp(inst: &Instance, report: &CdpReport) -> Option<Vec<String>> {
    if !report.feasible {
        return None;
    }
    let n = inst.vertex_count();
    let mut violations = Vec::new();
    let edge_set: BTreeSet<(usize, usize)> = inst.graph().edges().iter().copied().collect();
    let mut out = vec![0usize; n];
    let mut inc = vec![0usize; n];
    for rec in &report.assignment {
        if rec.facility == 0 || rec.facility > n || rec.client == 0 || rec.client > n {
            violations.push(format!(
                "pair ({}, {}) out of vertex range 1..={n}",
                rec.facility, rec.client
            ));
            continue;
        }
        if rec.mult == 0 {
            violations.push(format!(
                "pair ({}, {}) has zero multiplicity",
                rec.facility, rec.client
            ));
            continue;
        }
        let (u, v) = (rec.facility - 1, rec.client - 1);
        if u != v && !edge_set.contains(&(u.min(v), u.max(v))) {
            violations.push(format!(
                "pair ({}, {}) is neither an edge nor a self-loop",
                rec.facility, rec.client
            ));
        }
        out[u] += rec.mult;
        inc[v] += rec.mult;
    }
    for u in 0..n {
        if out[u] > inst.capacity(u) {
            violations.push(format!(
                "vertex {} serves {} units, capacity is {}",
                u + 1,
                out[u],
                inst.capacity(u)
            ));
        }
    }
    for v in 0..n {
        if inc[v] != inst.demand(v) {
            violations.push(format!(
                "vertex {} receives {} units, demand is {}",
                v + 1,
                inc[v],
                inst.demand(v)
            ));
        }
    }
    let facilities: Vec<usize> = (0..n).filter(|&u| out[u] > 0).map(|u| u + 1).collect();
    if facilities != report.dominating_set {
        violations.push(format!(
            "dominating_set {:?} does not match the facilities used {:?}",
            report.dominating_set, facilities
        ));
    }
    if report.size != Some(facilities.len()) {
        violations.push(format!(
            "reported size {:?} does not match facility count {}",
            report.size,
            facilities.len()
        ));
    }
    Some(violations)
}

/// Independent re-check of a CVCP result on the original graph.
fn verify_cvcp(vc: &VcInstance, report: &CvcpReport) -> Option<Vec<String>> {
    if !report.feasible {
        return None;
    }
    let n = vc.graph().vertex_count();
    let mut violations = Vec::new();
    let mut out = vec![0usize; n];
    let mut edge_cover = vec![0usize; vc.graph().edge_count()];
    let edge_index: std::collections::BTreeMap<(usize, usize), usize> = vc
        .graph()
        .edges()
        .iter()
        .enumerate()
        .map(|(e, &uv)| (uv, e))
        .collect();
    for rec in &report.service {
        if rec.facility == 0 || rec.facility > n || rec.edge_u == 0 || rec.edge_u > n
            || rec.edge_v == 0 || rec.edge_v > n
        {
            violations.push(format!(
                "service ({}, {}-{}) out of vertex range",
                rec.facility, rec.edge_u, rec.edge_v
            ));
            continue;
        }
        let (a, b) = (rec.edge_u - 1, rec.edge_v - 1);
        let Some(&e) = edge_index.get(&(a.min(b), a.max(b))) else {
            violations.push(format!("service names missing edge {}-{}", rec.edge_u, rec.edge_v));
            continue;
        };
        let u = rec.facility - 1;
        if u != a && u != b {
            violations.push(format!(
                "facility {} is not an endpoint of edge {}-{}",
                rec.facility, rec.edge_u, rec.edge_v
            ));
        }
        if rec.mult == 0 {
            violations.push(format!(
                "service ({}, {}-{}) has zero multiplicity",
                rec.facility, rec.edge_u, rec.edge_v
            ));
            continue;
        }
        out[u] += rec.mult;
        edge_cover[e] += rec.mult;
    }
    for u in 0..n {
        if out[u] > vc.capacity(u) {
            violations.push(format!(
                "vertex {} serves {} units, capacity is {}",
                u + 1,
                out[u],
                vc.capacity(u)
            ));
        }
    }
    for (e, &(a, b)) in vc.graph().edges().iter().enumerate() {
        if edge_cover[e] != vc.edge_demand(e) {
            violations.push(format!(
                "edge {}-{} receives {} units, demand is {}",
                a + 1,
                b + 1,
                edge_cover[e],
                vc.edge_demand(e)
            ));
        }
    }
    let cover: Vec<usize> = (0..n).filter(|&u| out[u] > 0).map(|u| u + 1).collect();
    if cover != report.cover {
        violations.push(format!(
            "cover {:?} does not match the facilities used {:?}",
            report.cover, cover
        ));
    }
    if report.size != Some(cover.len()) {
        violations.push(format!(
            "reported size {:?} does not match cover size {}",
            report.size,
            cover.len()
        ));
    }
    Some(violations)
}

fn run_bench(args: BenchArgs) -> Result<u8, UsageError> {
    let shapes: Vec<(&str, Family)> = vec![
        ("path12", Family::Path { n: 12 }),
        ("path30", Family::Path { n: 30 }),
        ("grid3x4", Family::Grid { rows: 3, cols: 4 }),
        ("grid4x4", Family::Grid { rows: 4, cols: 4 }),
        ("grid5x6", Family::Grid { rows: 5, cols: 6 }),
        ("trigrid2x5", Family::TriangulatedGrid { rows: 2, cols: 5 }),
        ("trigrid4x5", Family::TriangulatedGrid { rows: 4, cols: 5 }),
        ("star12", Family::Star { n: 12 }),
    ];
    println!("instance,n,m,k,shift,size,oracle_size,wall_ms,max_width");
    let mut bound_violations = 0;
    for (name, family) in shapes {
        for seed in 0..args.seeds {
            let inst = generate(family, 2, 2, seed)?;
            let Ok(norm) = normalize_instance(&inst) else {
                println!("{name}-s{seed},{},-,-,-,-,-,-,-", inst.vertex_count());
                continue;
            };
            let levels = bfs_levels(&norm, 0)?;
            let cfg = PtasConfig {
                k: KChoice::Epsilon(args.epsilon),
                root: 0,
                parallel_shifts: args.parallel_shifts,
            };
            let start = Instant::now();
            let run = cdp_ptas(&norm, &cfg)?;
            let wall_ms = start.elapsed().as_secs_f64() * 1e3;
            let oracle_size = if norm.vertex_count() <= capdom::oracle::DEFAULT_VERTEX_LIMIT {
                brute_force_cdp(&norm, None)?.opt_size()
            } else {
                None
            };
            let size = match &run.outcome {
                SolveOutcome::Feasible(a) => Some(a.size()),
                SolveOutcome::Infeasible => None,
            };
            if let (Some(size), Some(opt)) = (size, oracle_size) {
                let c_star = norm.max_capacity().max(1);
                let bound = opt + 4 * c_star * opt / run.k;
                if size < opt || size > bound {
                    eprintln!(
                        "bound violated on {name}-s{seed}: opt {opt}, got {size}, bound {bound}"
                    );
                    bound_violations += 1;
                }
            }
            println!(
                "{name}-s{seed},{},{},{},{},{},{},{:.2},{}",
                norm.vertex_count(),
                levels.level_count(),
                run.k,
                run.shift.map_or("-".to_string(), |s| s.to_string()),
                size.map_or("-".to_string(), |s| s.to_string()),
                oracle_size.map_or("-".to_string(), |s| s.to_string()),
                wall_ms,
                run.max_width,
            );
        }
    }
    Ok(if bound_violations == 0 { 0 } else { 1 })
}
