//! Steady-state genetic algorithm with rank-based selection and Syswerda's
//! position-based crossover.

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::model::{Permutation, ProblemInstance, RequestId};

use super::{Evaluator, SearchConfig, SearchError, SearchResult};

/// How many positions the crossover copies from the second parent.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KPositions {
    /// Uniform over the open interval (n/3, 2n/3), the classic setting.
    RandomThird,
    /// Exactly `k` positions.
    Fixed(usize),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GenitorParams {
    pub population: usize,
    pub k_positions: KPositions,
    /// Linear-ranking selection pressure: the best individual is sampled
    /// `selection_bias` times as often as the median.
    pub selection_bias: f64,
}

impl Default for GenitorParams {
    fn default() -> Self {
        GenitorParams {
            population: 200,
            k_positions: KPositions::RandomThird,
            selection_bias: 1.5,
        }
    }
}

/// Syswerda's position-based crossover. The offspring keeps `p2`'s element at
/// every selected position (1-based); the remaining slots are filled
/// left-to-right with `p1`'s elements in `p1` order, skipping any already
/// placed.
pub fn syswerda_crossover(p1: &Permutation, p2: &Permutation, positions: &[usize]) -> Permutation {
    let n = p1.len();
    assert_eq!(n, p2.len(), "parents must have equal length");
    let mut selected = vec![false; n];
    for &pos in positions {
        assert!((1..=n).contains(&pos), "position {pos} out of 1..={n}");
        selected[pos - 1] = true;
    }

    let mut taken = vec![false; n + 1];
    let mut order: Vec<RequestId> = vec![RequestId(0); n];
    for i in 0..n {
        if selected[i] {
            let id = p2.as_slice()[i];
            order[i] = id;
            taken[id.0 as usize] = true;
        }
    }
    let mut fill = p1.iter().filter(|id| !taken[id.0 as usize]);
    for slot in order.iter_mut().take(n) {
        if slot.0 == 0 {
            *slot = fill.next().expect("enough unplaced elements");
        }
    }
    Permutation::from_order_unchecked(order)
}

/// Steady-state GA: the whole population is evaluated up front (each build
/// counts against the budget), then every step crosses two rank-selected
/// parents into one child that replaces the current worst individual.
pub fn genitor(
    instance: &ProblemInstance,
    config: &SearchConfig,
    params: &GenitorParams,
) -> Result<SearchResult, SearchError> {
    config.validate(instance)?;
    let n = instance.n();
    if params.population < 2 {
        return Err(SearchError::InvalidConfig("population must be >= 2".into()));
    }
    if let KPositions::Fixed(k) = params.k_positions {
        if k > n {
            return Err(SearchError::InvalidConfig(format!(
                "fixed crossover positions {k} exceed permutation length {n}"
            )));
        }
    }
    if !(params.selection_bias > 1.0) {
        return Err(SearchError::InvalidConfig("selection_bias must be > 1".into()));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut evaluator = Evaluator::new(instance, config);

    // Population kept sorted by value, best first.
    let mut population: Vec<(u32, Permutation)> = Vec::with_capacity(params.population);
    for _ in 0..params.population {
        let perm = Permutation::random(n, &mut rng)?;
        match evaluator.evaluate(&perm) {
            Some(schedule) => population.push((schedule.value, perm)),
            None => return Ok(evaluator.finish()),
        }
    }
    population.sort_by_key(|&(v, _)| v);

    while evaluator.budget_left() {
        let i1 = rank_index(population.len(), params.selection_bias, &mut rng);
        let i2 = rank_index(population.len(), params.selection_bias, &mut rng);
        let k = match params.k_positions {
            KPositions::Fixed(k) => k,
            KPositions::RandomThird => random_third(n, &mut rng),
        };
        let positions: Vec<usize> = index::sample(&mut rng, n, k).iter().map(|i| i + 1).collect();
        let child = syswerda_crossover(&population[i1].1, &population[i2].1, &positions);
        match evaluator.evaluate(&child) {
            None => break,
            Some(schedule) => {
                population.pop(); // the current worst
                let at = population.partition_point(|&(v, _)| v <= schedule.value);
                population.insert(at, (schedule.value, child));
            }
        }
    }
    Ok(evaluator.finish())
}

/// Number of crossover positions strictly between n/3 and 2n/3.
fn random_third<R: Rng + ?Sized>(n: usize, rng: &mut R) -> usize {
    let lo = n / 3 + 1;
    let hi = (2 * n).div_ceil(3).saturating_sub(1);
    if hi < lo {
        return lo.min(n).max(1);
    }
    rng.random_range(lo..=hi)
}

/// Linear-ranking index over a population sorted best-first (Whitley's
/// closed form; `bias` in (1, 2]).
fn rank_index<R: Rng + ?Sized>(len: usize, bias: f64, rng: &mut R) -> usize {
    let u: f64 = rng.random();
    let idx = len as f64 * (bias - (bias * bias - 4.0 * (bias - 1.0) * u).sqrt())
        / (2.0 * (bias - 1.0));
    (idx as usize).min(len - 1)
}
