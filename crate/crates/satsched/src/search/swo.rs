//! Squeaky wheel optimization: construct, analyze, reprioritize.
//!
//! Each iteration builds the current priority permutation (one evaluation),
//! identifies the trouble requests (bumped ones under conflicts, overlap
//! contributors under overlaps) and moves them toward the front of the
//! permutation for the next iteration.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::model::{Permutation, ProblemInstance, RequestId};
use crate::objectives::{overlap_contributions, Objective};

use super::{greedy_priority_order, Evaluator, SearchConfig, SearchError, SearchResult};

/// Swaps applied to the pristine greedy permutation on a restart.
pub const SWO_RESTART_SWAPS: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SwoStart {
    /// The greedy flexibility ordering (most constrained first).
    GreedyFlexibility,
    /// The greedy ordering perturbed by [`SWO_RESTART_SWAPS`] random swaps;
    /// what later runs of a multi-run experiment start from.
    PerturbedGreedy,
    /// A fresh random permutation.
    RandomStart,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SwoMoves {
    /// Move every trouble request. Under overlaps, distances 1..=5 are
    /// distributed over the contribution ranks and the smallest contributors
    /// move first; under conflicts every trouble request moves 5.
    All,
    /// Move one uniformly random trouble request a distance of 5.
    One,
    /// Move the k largest contributors a distance of 5, largest first.
    TopK(usize),
}

/// Removes `id` and reinserts it `distance` positions closer to the front
/// (clamped at the front); all other relative orders are preserved.
pub fn move_forward(perm: &mut Permutation, id: RequestId, distance: usize) {
    let pos = perm.position_of(id);
    let target = pos.saturating_sub(distance);
    let order = perm.order_mut();
    order.remove(pos);
    order.insert(target, id);
}

pub fn swo(
    instance: &ProblemInstance,
    config: &SearchConfig,
    start: SwoStart,
    moves: SwoMoves,
) -> Result<SearchResult, SearchError> {
    config.validate(instance)?;
    if matches!(moves, SwoMoves::TopK(0)) {
        return Err(SearchError::InvalidConfig("TopK(0) moves nothing".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let n = instance.n();

    let mut perm = match start {
        SwoStart::GreedyFlexibility => greedy_priority_order(instance),
        SwoStart::PerturbedGreedy => {
            let mut p = greedy_priority_order(instance);
            if n >= 2 {
                for _ in 0..SWO_RESTART_SWAPS {
                    let i = rng.random_range(0..n);
                    let j = loop {
                        let j = rng.random_range(0..n);
                        if j != i {
                            break j;
                        }
                    };
                    p.order_mut().swap(i, j);
                }
            }
            p
        }
        SwoStart::RandomStart => Permutation::random(n, &mut rng)?,
    };

    let mut evaluator = Evaluator::new(instance, config);
    while let Some(schedule) = evaluator.evaluate(&perm) {
        // Trouble requests with their contributions, ascending by id.
        let trouble: Vec<(RequestId, u32)> = match config.objective {
            Objective::Conflicts => schedule.bumped.iter().map(|&id| (id, 1)).collect(),
            Objective::Overlaps => overlap_contributions(&schedule),
        };
        if trouble.is_empty() {
            continue; // nothing to reprioritize; the permutation is rebuilt as is
        }
        match moves {
            SwoMoves::All => match config.objective {
                Objective::Conflicts => {
                    for &(id, _) in &trouble {
                        move_forward(&mut perm, id, 5);
                    }
                }
                Objective::Overlaps => {
                    let mut ranked = trouble.clone();
                    ranked.sort_by_key(|&(id, c)| (c, id));
                    let m = ranked.len();
                    for (j, &(id, _)) in ranked.iter().enumerate() {
                        // ranks j+1 = 1..=m get distances 1..=5 spread evenly
                        let distance = 1 + j * 5 / m;
                        move_forward(&mut perm, id, distance);
                    }
                }
            },
            SwoMoves::One => {
                let (id, _) = trouble[rng.random_range(0..trouble.len())];
                move_forward(&mut perm, id, 5);
            }
            SwoMoves::TopK(k) => {
                let mut ranked = trouble.clone();
                ranked.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
                for &(id, _) in ranked.iter().take(k) {
                    move_forward(&mut perm, id, 5);
                }
            }
        }
    }
    Ok(evaluator.finish())
}
