//! Randomized cross-validation sweep, heavier than the test suite: every
//! solver against the brute-force oracle, plus scheme runs at the smallest
//! slab heights where the masking arithmetic is tightest.

use capdom::assignment::SolveOutcome;
use capdom::dp::cdp_dp;
use capdom::feasibility::{is_instance_feasible, normalize_instance};
use capdom::generate::{generate, Family};
use capdom::graph::SubgraphView;
use capdom::oracle::{brute_force_cdp, OracleOutcome};
use capdom::ptas::{cdp_ptas, KChoice, PtasConfig};

fn main() {
    let mut families = vec![
        Family::Grid { rows: 2, cols: 2 },
        Family::Grid { rows: 2, cols: 5 },
        Family::Grid { rows: 3, cols: 3 },
        Family::Grid { rows: 3, cols: 4 },
        Family::TriangulatedGrid { rows: 2, cols: 4 },
        Family::TriangulatedGrid { rows: 3, cols: 3 },
        Family::TriangulatedGrid { rows: 3, cols: 4 },
    ];
    families.extend((2..=12).map(|n| Family::Path { n }));
    families.extend((3..=12).map(|n| Family::Star { n }));

    let mut dp_checked = 0u64;
    let mut ptas_checked = 0u64;
    let mut shift_runs = 0u64;
    for &family in &families {
        for seed in 0..40u64 {
            for (dmax, cmax) in [(1, 1), (2, 2), (3, 2), (2, 3)] {
                let inst = generate(family, dmax, cmax, seed).unwrap();
                if inst.vertex_count() > 12 {
                    continue;
                }
                let oracle = brute_force_cdp(&inst, None).unwrap();
                let dp = cdp_dp(&SubgraphView::full(&inst));
                match (&oracle, &dp) {
                    (OracleOutcome::Infeasible, SolveOutcome::Infeasible) => {}
                    (OracleOutcome::Optimal(sol), SolveOutcome::Feasible(a)) => {
                        assert!(a.strict_validate(&inst).is_ok(), "{family:?} {seed} {dmax} {cmax}");
                        assert_eq!(a.size(), sol.size, "{family:?} {seed} {dmax} {cmax}");
                    }
                    other => panic!("{family:?} {seed} {dmax} {cmax}: {other:?}"),
                }
                dp_checked += 1;

                let Ok(norm) = normalize_instance(&inst) else { continue };
                if !is_instance_feasible(&norm) {
                    continue;
                }
                let opt = brute_force_cdp(&norm, None).unwrap().opt_size().unwrap();
                // stress the smallest slab heights: masking coincidences live there
                for k in [2usize, 3, 5] {
                    let run = cdp_ptas(
                        &norm,
                        &PtasConfig { k: KChoice::Fixed(k), root: 0, parallel_shifts: false },
                    )
                    .unwrap();
                    match run.outcome {
                        SolveOutcome::Feasible(a) => {
                            assert!(a.strict_validate(&norm).is_ok(), "{family:?} {seed} k={k}");
                            assert!(a.size() >= opt, "{family:?} {seed} k={k}: below optimum?!");
                            let c_star = norm.max_capacity().max(1);
                            let bound = opt + 4 * c_star * opt / k;
                            assert!(
                                a.size() <= bound,
                                "{family:?} {seed} {dmax},{cmax} k={k}: opt {opt} size {} bound {bound}",
                                a.size()
                            );
                            if run.shift.is_some() {
                                shift_runs += 1;
                            }
                        }
                        SolveOutcome::Infeasible => {
                            panic!("{family:?} {seed} k={k}: scheme failed a feasible instance")
                        }
                    }
                    ptas_checked += 1;
                }
            }
        }
    }
    println!("fuzz sweep clean: {dp_checked} dp/oracle checks, {ptas_checked} scheme runs ({shift_runs} with shifts)");
}
