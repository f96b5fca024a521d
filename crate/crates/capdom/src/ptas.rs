//! The outer approximation scheme: BFS levels are cut into slabs of `k`
//! consecutive levels, plus 4-level patches straddling each cut. Every slab
//! and patch is solved exactly with its outermost levels' demand masked, the
//! per-shift solutions are merged by multiset union, smoothing repairs the
//! capacity overloads the merge created, and the best of the `k` shifts
//! wins. On planar inputs the winner has size at most `(1 + 4c*/k) * OPT`.

use thiserror::Error;

use crate::assignment::{Assignment, SolveOutcome};
use crate::dp;
use crate::graph::{bfs_levels, extract_patch, extract_slab, GraphError, Instance, Levels, SubgraphView};
use crate::smoothing::smooth;

#[derive(Debug, Error, PartialEq)]
pub enum PtasError {
    #[error("epsilon must be positive, got {0}")]
    NonPositiveEpsilon(f64),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// How to pick the slab height.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum KChoice {
    /// Derive k from an approximation target: k = ceil(4 c* / epsilon).
    Epsilon(f64),
    /// Use this k directly (clamped to at least 2).
    Fixed(usize),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PtasConfig {
    pub k: KChoice,
    pub root: usize,
    pub parallel_shifts: bool,
}

impl Default for PtasConfig {
    fn default() -> Self {
        Self {
            k: KChoice::Epsilon(1.0),
            root: 0,
            parallel_shifts: false,
        }
    }
}

/// k = ceil(4 c* / epsilon), at least 2. Slab indexing degenerates at k = 1,
/// so smaller values are clamped.
pub fn choose_k(epsilon: f64, c_star: usize) -> Result<usize, PtasError> {
    if epsilon.is_nan() || epsilon <= 0.0 {
        return Err(PtasError::NonPositiveEpsilon(epsilon));
    }
    let raw = (4.0 * c_star as f64 / epsilon).ceil() as usize;
    Ok(raw.max(2))
}

#[derive(Debug, Clone)]
pub struct PtasRun {
    pub k: usize,
    /// Winning shift; None when the instance fit in a single exact solve or
    /// every shift was infeasible.
    pub shift: Option<usize>,
    /// Largest branch-decomposition width built anywhere in the run.
    pub max_width: usize,
    pub outcome: SolveOutcome,
}

struct ShiftRun {
    outcome: SolveOutcome,
    max_width: usize,
}

/// Union of the exact solutions of every slab and patch of shift `i`,
/// smoothed into a proper covering assignment. Any sub-solve reporting
/// Infeasible makes the whole shift Infeasible.
fn run_shift_inner(inst: &Instance, levels: &Levels, k: usize, i: usize) -> ShiftRun {
    let m = levels.level_count();
    let mut union = Assignment::new();
    let mut max_width = 0;
    let mut views: Vec<SubgraphView> = Vec::new();
    for j in 0..=m / k {
        if let Some(view) = extract_slab(inst, levels, i, j, k).expect("slab parameters in range") {
            views.push(view);
        }
    }
    for l in 0..m / k {
        match extract_patch(inst, levels, i, l, k) {
            Ok(view) => views.push(view),
            Err(GraphError::EmptyLevelRange { .. }) => {}
            Err(e) => unreachable!("patch parameters in range: {e}"),
        }
    }
    for view in &views {
        let run = dp::solve(view);
        max_width = max_width.max(run.max_width);
        match run.outcome {
            SolveOutcome::Infeasible => {
                return ShiftRun {
                    outcome: SolveOutcome::Infeasible,
                    max_width,
                };
            }
            SolveOutcome::Feasible(a) => union = union.uplus(&a),
        }
    }
    ShiftRun {
        outcome: smooth(&union, inst),
        max_width,
    }
}

/// Public view of a single shift, mainly for tests and diagnostics.
pub fn run_shift(inst: &Instance, levels: &Levels, k: usize, i: usize) -> SolveOutcome {
    run_shift_inner(inst, levels, k, i).outcome
}

/// The full scheme. Expects a connected instance, ideally normalized first
/// (normalization tightens c* and therefore k). When the graph has at most k
/// levels the problem is solved exactly in one shot.
///
/// The result does not depend on `parallel_shifts`: shifts are independent
/// and the winner is picked by (size, shift index).
pub fn cdp_ptas(inst: &Instance, cfg: &PtasConfig) -> Result<PtasRun, PtasError> {
    let levels = bfs_levels(inst, cfg.root)?;
    let k = match cfg.k {
        KChoice::Epsilon(eps) => choose_k(eps, inst.max_capacity().max(1))?,
        KChoice::Fixed(k) => k.max(2),
    };
    let m = levels.level_count();

    if m <= k {
        let run = dp::solve(&SubgraphView::full(inst));
        return Ok(PtasRun {
            k,
            shift: None,
            max_width: run.max_width,
            outcome: run.outcome,
        });
    }

    let shift_runs: Vec<ShiftRun> = if cfg.parallel_shifts {
        let workers = std::thread::available_parallelism()
            .map(usize::from)
            .unwrap_or(4)
            .min(k);
        let mut slots: Vec<Option<ShiftRun>> = Vec::with_capacity(k);
        slots.resize_with(k, || None);
        std::thread::scope(|scope| {
            let handles: Vec<_> = (0..workers)
                .map(|w| {
                    let levels = &levels;
                    scope.spawn(move || {
                        (w..k)
                            .step_by(workers)
                            .map(|i| (i, run_shift_inner(inst, levels, k, i)))
                            .collect::<Vec<_>>()
                    })
                })
                .collect();
            for handle in handles {
                for (i, run) in handle.join().expect("shift worker panicked") {
                    slots[i] = Some(run);
                }
            }
        });
        slots.into_iter().map(|s| s.expect("every shift ran")).collect()
    } else {
        (0..k).map(|i| run_shift_inner(inst, &levels, k, i)).collect()
    };

    let max_width = shift_runs.iter().map(|r| r.max_width).max().unwrap_or(0);
    let mut best: Option<(usize, usize, Assignment)> = None;
    for (i, run) in shift_runs.into_iter().enumerate() {
        if let SolveOutcome::Feasible(a) = run.outcome {
            let size = a.size();
            let wins = match &best {
                None => true,
                Some((best_size, _, _)) => size < *best_size,
            };
            if wins {
                best = Some((size, i, a));
            }
        }
    }
    Ok(match best {
        None => PtasRun {
            k,
            shift: None,
            max_width,
            outcome: SolveOutcome::Infeasible,
        },
        Some((_, i, a)) => PtasRun {
            k,
            shift: Some(i),
            max_width,
            outcome: SolveOutcome::Feasible(a),
        },
    })
}
