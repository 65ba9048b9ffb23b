//! Search algorithms over the permutation space.
//!
//! Every algorithm shares one contract: each schedule build costs exactly one
//! evaluation, runs stop when the budget is exhausted, the best-so-far value
//! is sampled every `trace_stride` evaluations, and an identical seed yields
//! an identical result.

use thiserror::Error;

use crate::builder::{BuildError, BuilderKind, Schedule};
use crate::model::{InstanceError, Permutation, ProblemInstance, RequestId};
use crate::objectives::Objective;

mod genitor;
mod hbss;
mod oracle;
mod rls;
mod shift;
mod swo;

pub use genitor::{genitor, syswerda_crossover, GenitorParams, KPositions};
pub use hbss::{biased_pick, exp_bias, hbss};
pub use oracle::exhaustive_oracle;
pub(crate) use rls::rls_observed;
pub use rls::{alls, alls_inverted, alls_with, leap_size, rls};
pub use shift::{all_moves, apply_shift, ShiftMove};
pub use swo::{move_forward, swo, SwoMoves, SwoStart, SWO_RESTART_SWAPS};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SearchError {
    #[error("invalid search configuration: {0}")]
    InvalidConfig(String),
    #[error("invalid shift move: {0}")]
    InvalidMove(String),
    #[error("instance with {0} requests is too large for exhaustive enumeration (max 9)")]
    InstanceTooLarge(usize),
    #[error(transparent)]
    Build(#[from] BuildError),
    #[error(transparent)]
    Model(#[from] InstanceError),
}

/// Budget, seed and trace settings shared by every algorithm.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchConfig {
    pub objective: Objective,
    pub max_evaluations: usize,
    pub seed: u64,
    pub builder: BuilderKind,
    /// Evaluations between best-so-far samples.
    pub trace_stride: usize,
}

impl SearchConfig {
    /// The benchmark defaults: 8000 evaluations, standard builder,
    /// best-so-far sampled every 100 evaluations.
    pub fn new(objective: Objective, seed: u64) -> Self {
        SearchConfig {
            objective,
            max_evaluations: 8000,
            seed,
            builder: BuilderKind::Standard,
            trace_stride: 100,
        }
    }

    pub fn with_evaluations(mut self, max_evaluations: usize) -> Self {
        self.max_evaluations = max_evaluations;
        self
    }

    pub fn with_builder(mut self, builder: BuilderKind) -> Self {
        self.builder = builder;
        self
    }

    pub fn with_trace_stride(mut self, trace_stride: usize) -> Self {
        self.trace_stride = trace_stride;
        self
    }

    pub(crate) fn validate(&self, instance: &ProblemInstance) -> Result<(), SearchError> {
        if self.max_evaluations == 0 {
            return Err(SearchError::InvalidConfig("max_evaluations must be >= 1".into()));
        }
        if self.trace_stride == 0 {
            return Err(SearchError::InvalidConfig("trace_stride must be >= 1".into()));
        }
        if instance.n() == 0 {
            return Err(SearchError::InvalidConfig("instance has no requests".into()));
        }
        Ok(())
    }
}

/// Best value observed up to an evaluation count.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TracePoint {
    pub evaluation: usize,
    pub best_value: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchResult {
    pub best_value: u32,
    pub best_permutation: Permutation,
    pub evaluations_used: usize,
    /// Non-increasing best-so-far samples; the last entry equals
    /// `(evaluations_used, best_value)`.
    pub trace: Vec<TracePoint>,
}

/// Counts evaluations, tracks the incumbent and samples the trace. All
/// algorithms funnel their schedule builds through [`Evaluator::evaluate`],
/// which enforces the one-build-one-evaluation accounting.
pub(crate) struct Evaluator<'a> {
    instance: &'a ProblemInstance,
    objective: Objective,
    builder: BuilderKind,
    budget: usize,
    stride: usize,
    used: usize,
    best: Option<(u32, Permutation)>,
    trace: Vec<TracePoint>,
}

impl<'a> Evaluator<'a> {
    pub(crate) fn new(instance: &'a ProblemInstance, config: &SearchConfig) -> Self {
        Evaluator {
            instance,
            objective: config.objective,
            builder: config.builder,
            budget: config.max_evaluations,
            stride: config.trace_stride,
            used: 0,
            best: None,
            trace: Vec::with_capacity(config.max_evaluations / config.trace_stride + 1),
        }
    }

    /// Builds and scores one candidate, or returns `None` once the budget is
    /// spent (the caller then discards the candidate and stops).
    pub(crate) fn evaluate(&mut self, perm: &Permutation) -> Option<Schedule> {
        if self.used == self.budget {
            return None;
        }
        let schedule = self
            .builder
            .build(self.instance, perm, self.objective)
            .expect("permutation matches instance");
        self.used += 1;
        if self.best.as_ref().map_or(true, |(v, _)| schedule.value < *v) {
            self.best = Some((schedule.value, perm.clone()));
        }
        if self.used % self.stride == 0 || self.used == self.budget {
            self.trace.push(TracePoint {
                evaluation: self.used,
                best_value: self.best.as_ref().unwrap().0,
            });
        }
        Some(schedule)
    }

    pub(crate) fn budget_left(&self) -> bool {
        self.used < self.budget
    }

    pub(crate) fn evaluations_used(&self) -> usize {
        self.used
    }

    pub(crate) fn finish(mut self) -> SearchResult {
        let (best_value, best_permutation) =
            self.best.expect("at least one evaluation before finish");
        if self.trace.last().map(|t| t.evaluation) != Some(self.used) {
            self.trace.push(TracePoint {
                evaluation: self.used,
                best_value,
            });
        }
        SearchResult {
            best_value,
            best_permutation,
            evaluations_used: self.used,
            trace: self.trace,
        }
    }
}

/// The greedy priority ordering used by squeaky wheel and the sampling
/// heuristics: most constrained first (decreasing duration-to-mean-window
/// ratio), ties broken by fewer alternatives, then by the earlier request id.
pub fn greedy_priority_order(instance: &ProblemInstance) -> Permutation {
    let mut ids: Vec<RequestId> = instance.requests().iter().map(|r| r.id).collect();
    ids.sort_by(|&a, &b| {
        let ra = instance.request(a);
        let rb = instance.request(b);
        rb.flexibility_ratio()
            .total_cmp(&ra.flexibility_ratio())
            .then(ra.alternatives.len().cmp(&rb.alternatives.len()))
            .then(a.cmp(&b))
    });
    Permutation::from_order_unchecked(ids)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{generate_instance, GeneratorParams};

    #[test]
    fn priority_order_puts_zero_slack_first() {
        let params = GeneratorParams {
            n_low: 4,
            n_high: 4,
            stations: 2,
            antennas: 3,
            horizon: 300,
            ..GeneratorParams::default()
        };
        let inst = generate_instance(&params, 11).unwrap();
        let order = greedy_priority_order(&inst);
        let kinds: Vec<_> = order.iter().map(|id| inst.altitude(id)).collect();
        let first_high = kinds
            .iter()
            .position(|&k| k == crate::model::Altitude::High)
            .unwrap();
        assert!(kinds[..first_high]
            .iter()
            .all(|&k| k == crate::model::Altitude::Low));
    }
}
