//! Scratch calibration probe (not part of the deliverable test surface).

use satsched::experiment::{run_trials, Algorithm, ExperimentSpec};
use satsched::model::{generate_instance, GeneratorParams};
use satsched::objectives::Objective;
use satsched::search::{GenitorParams, KPositions, SwoMoves, SwoStart};
use satsched::stats::{t_test_one_sided_less, TrialStats};

fn desk_r_params(index: usize) -> GeneratorParams {
    GeneratorParams {
        n_low: 36,
        n_high: 44,
        stations: 4,
        antennas: 7,
        horizon: 310,
        low_duration: (10, 20),
        high_duration: (20, 60),
        high_slack: (30, 200),
        high_alternatives: (2, 5),
        name: Some(format!("desk-r-{index}")),
    }
}

fn stats_of(
    inst: &satsched::model::ProblemInstance,
    alg: Algorithm,
    objective: Objective,
    runs: u32,
    evals: usize,
    seed: u64,
) -> TrialStats {
    let mut spec = ExperimentSpec::new(alg, objective, seed);
    spec.runs = runs;
    spec.max_evaluations = evals;
    let outcomes = run_trials(inst, &spec).unwrap();
    TrialStats::from_values(outcomes.iter().map(|o| o.best_value).collect()).unwrap()
}

fn main() {
    let runs: u32 = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(10);
    let instances: usize = std::env::args()
        .nth(2)
        .and_then(|s| s.parse().ok())
        .unwrap_or(3);

    for i in 0..instances {
        let inst = generate_instance(&desk_r_params(i), 3000 + i as u64).unwrap();
        let n = inst.n();
        println!("== instance {i} (n={n}) ==");
        for objective in [Objective::Conflicts, Objective::Overlaps] {
            let rls = stats_of(&inst, Algorithm::Rls, objective, runs, 8000, 10);
            let alls = stats_of(&inst, Algorithm::alls(), objective, runs, 8000, 10);
            println!(
                "  {objective}: rls min {} mean {:.2} | alls min {} mean {:.2} | p(alls<rls)={:.4}",
                rls.min,
                rls.mean,
                alls.min,
                alls.mean,
                t_test_one_sided_less(
                    &alls.per_run.iter().map(|&v| v as f64).collect::<Vec<_>>(),
                    &rls.per_run.iter().map(|&v| v as f64).collect::<Vec<_>>()
                )
                .unwrap()
            );
        }
        let obj = Objective::Overlaps;
        let swo_all = stats_of(
            &inst,
            Algorithm::Swo {
                start: SwoStart::GreedyFlexibility,
                moves: SwoMoves::All,
            },
            obj,
            runs,
            8000,
            10,
        );
        let swo_one = stats_of(
            &inst,
            Algorithm::Swo {
                start: SwoStart::GreedyFlexibility,
                moves: SwoMoves::One,
            },
            obj,
            runs,
            8000,
            10,
        );
        println!(
            "  swo(all) mean {:.1} | swo(one) mean {:.1}",
            swo_all.mean, swo_one.mean
        );
        let g10 = stats_of(
            &inst,
            Algorithm::Genitor(GenitorParams {
                k_positions: KPositions::Fixed(10),
                ..GenitorParams::default()
            }),
            obj,
            runs,
            8000,
            10,
        );
        let ghalf = stats_of(
            &inst,
            Algorithm::Genitor(GenitorParams {
                k_positions: KPositions::Fixed(n / 2),
                ..GenitorParams::default()
            }),
            obj,
            runs,
            8000,
            10,
        );
        println!(
            "  genitor k10 mean {:.1} | k{} mean {:.1}",
            g10.mean,
            n / 2,
            ghalf.mean
        );
        let inv = stats_of(&inst, Algorithm::alls_inverted(), obj, runs, 8000, 10);
        println!("  alls-inverted mean {:.1}", inv.mean);
        let genitor = stats_of(
            &inst,
            Algorithm::Genitor(GenitorParams::default()),
            obj,
            runs,
            8000,
            10,
        );
        let hbss = stats_of(&inst, Algorithm::Hbss, obj, runs, 8000, 10);
        let gooley = stats_of(&inst, Algorithm::Gooley, obj, 1, 1, 10);
        println!(
            "  genitor mean {:.1} | hbss mean {:.1} | gooley {}",
            genitor.mean, hbss.mean, gooley.min
        );
    }
}
