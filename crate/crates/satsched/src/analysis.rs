//! Landscape analysis: neighbor-equivalence statistics, plateau random walks
//! and precedence-pair counting over sets of good solutions.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::builder::{build_schedule, BuilderKind};
use crate::model::{Altitude, Permutation, ProblemInstance};
use crate::objectives::Objective;
use crate::search::{all_moves, apply_shift, rls_observed, SearchConfig, SearchError, ShiftMove};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AnalysisError {
    #[error("no solutions to analyze")]
    EmptySolutions,
    #[error("solution length {got} does not match instance size {expected}")]
    LengthMismatch { expected: usize, got: usize },
    #[error(transparent)]
    Search(#[from] SearchError),
}

/// Classification of the full (n-1)^2 shift neighborhood of one permutation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NeighborStats {
    pub total_neighbors: usize,
    /// Neighbors decoding to a placement-identical schedule.
    pub same_schedule: usize,
    /// Neighbors with the same objective value (includes `same_schedule`).
    pub same_value: usize,
    pub improving: usize,
    pub worsening: usize,
}

/// Rebuilds every shift neighbor of `perm` and classifies it against the
/// base schedule. `same_value + improving + worsening == total_neighbors`.
pub fn neighbor_scan(
    instance: &ProblemInstance,
    perm: &Permutation,
    objective: Objective,
) -> Result<NeighborStats, AnalysisError> {
    let base = build_schedule(instance, perm, objective).map_err(SearchError::Build)?;
    let n = instance.n();
    let moves = all_moves(n);
    let (same_schedule, same_value, improving, worsening) = moves
        .par_iter()
        .map(|&mv| {
            let neighbor = apply_shift(perm, mv);
            let schedule = build_schedule(instance, &neighbor, objective)
                .expect("neighbor matches instance");
            if schedule == base {
                (1usize, 1usize, 0usize, 0usize)
            } else if schedule.value == base.value {
                (0, 1, 0, 0)
            } else if schedule.value < base.value {
                (0, 0, 1, 0)
            } else {
                (0, 0, 0, 1)
            }
        })
        .reduce(
            || (0, 0, 0, 0),
            |a, b| (a.0 + b.0, a.1 + b.1, a.2 + b.2, a.3 + b.3),
        );
    Ok(NeighborStats {
        total_neighbors: moves.len(),
        same_schedule,
        same_value,
        improving,
        worsening,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WalkOutcome {
    /// A strictly better neighbor was drawn; its value.
    Exit(u32),
    Capped,
}

/// One random walk on a plateau.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WalkRecord {
    pub start_value: u32,
    /// Equal-value moves accepted before the walk ended. Worsening draws are
    /// rejected and not counted.
    pub steps_taken: usize,
    pub outcome: WalkOutcome,
}

/// Random-walks the plateau of `start`: equal-value shifts are taken and
/// counted, an improving shift exits, worsening shifts are rejected. The walk
/// caps at `cap` equal moves; as a termination guard it also gives up (again
/// reporting `Capped`) after `100 * cap` draws, which only strikes when equal
/// neighbors are essentially absent.
pub fn plateau_walk(
    instance: &ProblemInstance,
    start: &Permutation,
    objective: Objective,
    cap: usize,
    seed: u64,
) -> Result<WalkRecord, AnalysisError> {
    let base = build_schedule(instance, start, objective).map_err(SearchError::Build)?;
    let start_value = base.value;
    let n = instance.n();
    let mut record = WalkRecord {
        start_value,
        steps_taken: 0,
        outcome: WalkOutcome::Capped,
    };
    if n < 2 || cap == 0 {
        return Ok(record);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut current = start.clone();
    let max_draws = cap.saturating_mul(100).max(10_000);
    for _ in 0..max_draws {
        let candidate = apply_shift(&current, ShiftMove::random(n, &mut rng));
        let value = build_schedule(instance, &candidate, objective)
            .expect("candidate matches instance")
            .value;
        if value < start_value {
            record.outcome = WalkOutcome::Exit(value);
            return Ok(record);
        }
        if value == start_value {
            current = candidate;
            record.steps_taken += 1;
            if record.steps_taken == cap {
                return Ok(record);
            }
        }
    }
    Ok(record)
}

/// Mean walk behavior from one snapshot of a local search run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SnapshotWalks {
    pub evaluation: usize,
    pub value: u32,
    pub mean_steps: f64,
    pub capped_fraction: f64,
}

/// Runs one seeded RLS trajectory, snapshots the current solution every
/// `snapshot_stride` evaluations, and performs `walks` plateau walks from
/// each snapshot. Walk seeds derive from `walk_seed`, the snapshot and the
/// walk index, so the whole profile is reproducible.
#[allow(clippy::too_many_arguments)]
pub fn plateau_profile(
    instance: &ProblemInstance,
    config: &SearchConfig,
    snapshot_stride: usize,
    walks: usize,
    cap: usize,
    walk_seed: u64,
) -> Result<Vec<SnapshotWalks>, AnalysisError> {
    if snapshot_stride == 0 || walks == 0 {
        return Err(AnalysisError::Search(SearchError::InvalidConfig(
            "snapshot_stride and walks must be >= 1".into(),
        )));
    }
    let mut snapshots: Vec<(usize, u32, Permutation)> = Vec::new();
    rls_observed(instance, config, |evaluation, perm, value| {
        if evaluation % snapshot_stride == 0 {
            snapshots.push((evaluation, value, perm.clone()));
        }
    })?;

    let mut out = Vec::with_capacity(snapshots.len());
    for (idx, (evaluation, value, perm)) in snapshots.iter().enumerate() {
        let records: Vec<WalkRecord> = (0..walks)
            .into_par_iter()
            .map(|w| {
                let seed = crate::experiment::derive_seed(
                    walk_seed,
                    "plateau-walk",
                    (idx * walks + w) as u64,
                );
                plateau_walk(instance, perm, config.objective, cap, seed)
                    .expect("walk on a valid snapshot")
            })
            .collect();
        let mean_steps =
            records.iter().map(|r| r.steps_taken as f64).sum::<f64>() / walks as f64;
        let capped = records
            .iter()
            .filter(|r| matches!(r.outcome, WalkOutcome::Capped))
            .count();
        out.push(SnapshotWalks {
            evaluation: *evaluation,
            value: *value,
            mean_steps,
            capped_fraction: capped as f64 / walks as f64,
        });
    }
    Ok(out)
}

/// Common precedence pairs over a set of solutions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrecedenceStats {
    /// Number of solutions analyzed.
    pub solutions: usize,
    /// Common pairs placing a low altitude request before a high one.
    pub low_high_pairs: usize,
    pub other_pairs: usize,
    /// Expected common pairs were the orderings unconstrained: n(n-1)/2^s.
    pub expected_random: f64,
}

/// Counts ordered pairs (a, b) with a before b in every solution, split into
/// (low, high) pairs and the rest.
pub fn precedence_pairs(
    solutions: &[Permutation],
    instance: &ProblemInstance,
) -> Result<PrecedenceStats, AnalysisError> {
    if solutions.is_empty() {
        return Err(AnalysisError::EmptySolutions);
    }
    let n = instance.n();
    for s in solutions {
        if s.len() != n {
            return Err(AnalysisError::LengthMismatch {
                expected: n,
                got: s.len(),
            });
        }
    }

    // positions[k][id] = position of id in solution k
    let positions: Vec<Vec<usize>> = solutions
        .iter()
        .map(|s| {
            let mut pos = vec![0usize; n + 1];
            for (i, id) in s.iter().enumerate() {
                pos[id.0 as usize] = i;
            }
            pos
        })
        .collect();

    let mut low_high = 0usize;
    let mut other = 0usize;
    for a in 1..=n as u32 {
        for b in 1..=n as u32 {
            if a == b {
                continue;
            }
            let common = positions
                .iter()
                .all(|pos| pos[a as usize] < pos[b as usize]);
            if common {
                let a_id = crate::model::RequestId(a);
                let b_id = crate::model::RequestId(b);
                if instance.altitude(a_id) == Altitude::Low
                    && instance.altitude(b_id) == Altitude::High
                {
                    low_high += 1;
                } else {
                    other += 1;
                }
            }
        }
    }
    let s = solutions.len();
    let expected_random = (n as f64) * (n as f64 - 1.0) * 2f64.powi(-(s as i32));
    Ok(PrecedenceStats {
        solutions: s,
        low_high_pairs: low_high,
        other_pairs: other,
        expected_random,
    })
}

/// Decodes several permutations and keeps the ones achieving the best value;
/// feeds the precedence analysis the way repeated search runs do.
pub fn best_valued(
    instance: &ProblemInstance,
    perms: &[Permutation],
    objective: Objective,
    builder: BuilderKind,
) -> Result<Vec<Permutation>, AnalysisError> {
    if perms.is_empty() {
        return Err(AnalysisError::EmptySolutions);
    }
    let mut scored: Vec<(u32, &Permutation)> = Vec::with_capacity(perms.len());
    for p in perms {
        let v = builder
            .build(instance, p, objective)
            .map_err(SearchError::Build)?
            .value;
        scored.push((v, p));
    }
    let best = scored.iter().map(|&(v, _)| v).min().expect("non-empty");
    Ok(scored
        .into_iter()
        .filter(|&(v, _)| v == best)
        .map(|(_, p)| p.clone())
        .collect())
}
