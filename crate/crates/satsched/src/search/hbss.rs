//! Heuristic-biased stochastic sampling: repeated independent constructions
//! where the next request is drawn with probability proportional to an
//! exponential bias on its heuristic rank.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::model::{Permutation, ProblemInstance, RequestId};

use super::{greedy_priority_order, Evaluator, SearchConfig, SearchError, SearchResult};

/// The exponential bias `e^{-r}` for rank `r` (rank 1 = most preferred).
pub fn exp_bias(rank: u32) -> f64 {
    (-(rank as f64)).exp()
}

/// Draws an index into `weights` with probability proportional to the
/// weights. Falls back to the largest weight if they all underflow to zero.
pub fn biased_pick<R: Rng + ?Sized>(weights: &[f64], rng: &mut R) -> usize {
    debug_assert!(!weights.is_empty());
    let total: f64 = weights.iter().sum();
    if total <= 0.0 {
        return weights
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .map(|(i, _)| i)
            .unwrap_or(0);
    }
    let mut u = rng.random::<f64>() * total;
    for (i, w) in weights.iter().enumerate() {
        u -= w;
        if u < 0.0 {
            return i;
        }
    }
    weights.len() - 1
}

/// Ranks are assigned once from the greedy flexibility ordering (most
/// constrained = rank 1) and never recomputed; each construction samples a
/// whole permutation rank-biased and then spends one evaluation building it.
pub fn hbss(instance: &ProblemInstance, config: &SearchConfig) -> Result<SearchResult, SearchError> {
    config.validate(instance)?;
    let n = instance.n();
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);

    // rank_of[id] for ids 1..=n; bias precomputed per rank.
    let ranking = greedy_priority_order(instance);
    let mut rank_of = vec![0u32; n + 1];
    for (i, id) in ranking.iter().enumerate() {
        rank_of[id.0 as usize] = i as u32 + 1;
    }

    let mut evaluator = Evaluator::new(instance, config);
    loop {
        let mut remaining: Vec<RequestId> = ranking.as_slice().to_vec();
        let mut weights: Vec<f64> = remaining
            .iter()
            .map(|id| exp_bias(rank_of[id.0 as usize]))
            .collect();
        let mut order = Vec::with_capacity(n);
        while !remaining.is_empty() {
            let pick = biased_pick(&weights, &mut rng);
            order.push(remaining.remove(pick));
            weights.remove(pick);
        }
        let perm = Permutation::from_order_unchecked(order);
        if evaluator.evaluate(&perm).is_none() {
            break;
        }
    }
    Ok(evaluator.finish())
}
