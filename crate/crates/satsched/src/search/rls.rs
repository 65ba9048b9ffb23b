//! Randomized local search and its attenuated-leap extension.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::model::{Permutation, ProblemInstance};

use super::shift::{apply_shift, ShiftMove};
use super::{Evaluator, SearchConfig, SearchError, SearchResult};

/// Next-descent stochastic hill-climbing: start from a random permutation,
/// draw one random shift per step and accept the neighbor iff its value is
/// equal or better.
pub fn rls(instance: &ProblemInstance, config: &SearchConfig) -> Result<SearchResult, SearchError> {
    multi_shift_descent(instance, config, |_| 1, |_, _, _| {})
}

/// Number of chained shifts per candidate after `completed` evaluations:
/// starts at `initial` and loses one every `decay_stride` evaluations (floor
/// of 1), or gains one when `inverted`.
pub fn leap_size(initial: usize, decay_stride: usize, completed: usize, inverted: bool) -> usize {
    let steps = completed / decay_stride;
    if inverted {
        initial + steps
    } else {
        initial.saturating_sub(steps).max(1)
    }
}

/// Attenuated leap local search: like [`rls`] but each candidate applies a
/// chain of independent random shifts before the single evaluation, the chain
/// shrinking from `initial_leap` down to 1 as the budget is consumed.
pub fn alls(instance: &ProblemInstance, config: &SearchConfig) -> Result<SearchResult, SearchError> {
    alls_with(instance, config, 10, 800, false)
}

/// The negative control: the leap grows by one every `decay_stride`
/// evaluations instead of shrinking.
pub fn alls_inverted(
    instance: &ProblemInstance,
    config: &SearchConfig,
) -> Result<SearchResult, SearchError> {
    alls_with(instance, config, 10, 800, true)
}

pub fn alls_with(
    instance: &ProblemInstance,
    config: &SearchConfig,
    initial_leap: usize,
    decay_stride: usize,
    inverted: bool,
) -> Result<SearchResult, SearchError> {
    if initial_leap == 0 {
        return Err(SearchError::InvalidConfig("initial_leap must be >= 1".into()));
    }
    if decay_stride == 0 {
        return Err(SearchError::InvalidConfig("decay_stride must be >= 1".into()));
    }
    multi_shift_descent(
        instance,
        config,
        move |completed| leap_size(initial_leap, decay_stride, completed, inverted),
        |_, _, _| {},
    )
}

/// RLS with a per-evaluation observer over the current (accepted) solution;
/// the landscape experiments snapshot the trajectory through this.
pub(crate) fn rls_observed(
    instance: &ProblemInstance,
    config: &SearchConfig,
    observer: impl FnMut(usize, &Permutation, u32),
) -> Result<SearchResult, SearchError> {
    multi_shift_descent(instance, config, |_| 1, observer)
}

fn multi_shift_descent(
    instance: &ProblemInstance,
    config: &SearchConfig,
    leap: impl Fn(usize) -> usize,
    mut observer: impl FnMut(usize, &Permutation, u32),
) -> Result<SearchResult, SearchError> {
    config.validate(instance)?;
    let n = instance.n();
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut evaluator = Evaluator::new(instance, config);

    let mut current = Permutation::random(n, &mut rng)?;
    let mut current_value = evaluator
        .evaluate(&current)
        .expect("budget >= 1")
        .value;
    observer(evaluator.evaluations_used(), &current, current_value);

    while n >= 2 && evaluator.budget_left() {
        let chain = leap(evaluator.evaluations_used());
        let mut candidate = current.clone();
        for _ in 0..chain {
            candidate = apply_shift(&candidate, ShiftMove::random(n, &mut rng));
        }
        match evaluator.evaluate(&candidate) {
            None => break,
            Some(schedule) => {
                if schedule.value <= current_value {
                    current = candidate;
                    current_value = schedule.value;
                }
                observer(evaluator.evaluations_used(), &current, current_value);
            }
        }
    }
    Ok(evaluator.finish())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{generate_instance, GeneratorParams};
    use crate::objectives::Objective;

    fn tiny_instance() -> ProblemInstance {
        let params = GeneratorParams {
            n_low: 2,
            n_high: 3,
            stations: 1,
            antennas: 2,
            horizon: 60,
            high_duration: (15, 25),
            high_slack: (5, 20),
            high_alternatives: (1, 2),
            ..GeneratorParams::default()
        };
        generate_instance(&params, 5).unwrap()
    }

    #[test]
    fn leap_schedule_matches_definition() {
        assert_eq!(leap_size(10, 800, 0, false), 10);
        assert_eq!(leap_size(10, 800, 800, false), 9);
        assert_eq!(leap_size(10, 800, 7200, false), 1);
        assert_eq!(leap_size(10, 800, 8000, false), 1);
        assert_eq!(leap_size(10, 800, 0, true), 10);
        assert_eq!(leap_size(10, 800, 800, true), 11);
    }

    #[test]
    fn trace_is_non_increasing_and_budget_respected() {
        let inst = tiny_instance();
        for run in [rls, alls, alls_inverted] {
            let config = SearchConfig::new(Objective::Conflicts, 42).with_evaluations(500);
            let result = run(&inst, &config).unwrap();
            assert_eq!(result.evaluations_used, 500);
            assert!(result.trace.windows(2).all(|w| w[1].best_value <= w[0].best_value));
            assert_eq!(result.trace.last().unwrap().best_value, result.best_value);
            assert_eq!(result.trace.last().unwrap().evaluation, 500);
        }
    }

    #[test]
    fn identical_seed_identical_result() {
        let inst = tiny_instance();
        let config = SearchConfig::new(Objective::Overlaps, 7).with_evaluations(300);
        assert_eq!(rls(&inst, &config).unwrap(), rls(&inst, &config).unwrap());
        assert_eq!(alls(&inst, &config).unwrap(), alls(&inst, &config).unwrap());
    }

    #[test]
    fn budget_of_one_evaluates_only_the_start() {
        let inst = tiny_instance();
        let config = SearchConfig::new(Objective::Conflicts, 3).with_evaluations(1);
        let result = rls(&inst, &config).unwrap();
        assert_eq!(result.evaluations_used, 1);
        assert_eq!(result.trace, vec![super::super::TracePoint { evaluation: 1, best_value: result.best_value }]);
    }

    #[test]
    fn single_request_instance_terminates() {
        let params = GeneratorParams {
            n_low: 1,
            n_high: 0,
            stations: 1,
            antennas: 1,
            horizon: 60,
            ..GeneratorParams::default()
        };
        let inst = generate_instance(&params, 1).unwrap();
        let config = SearchConfig::new(Objective::Conflicts, 1).with_evaluations(50);
        let result = rls(&inst, &config).unwrap();
        assert_eq!(result.best_value, 0);
        assert_eq!(result.evaluations_used, 1);
    }
}
