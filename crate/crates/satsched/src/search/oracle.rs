//! Exhaustive enumeration over all n! permutations; the verification oracle
//! for everything else.

use crate::builder::build_schedule;
use crate::model::{Permutation, ProblemInstance, RequestId};
use crate::objectives::Objective;

use super::SearchError;

const MAX_ORACLE_N: usize = 9;

/// True optimum of the standard builder over every permutation, with one
/// permutation attaining it. Only feasible for `n <= 9`.
pub fn exhaustive_oracle(
    instance: &ProblemInstance,
    objective: Objective,
) -> Result<(u32, Permutation), SearchError> {
    let n = instance.n();
    if n > MAX_ORACLE_N {
        return Err(SearchError::InstanceTooLarge(n));
    }
    if n == 0 {
        return Err(SearchError::InvalidConfig("instance has no requests".into()));
    }

    let mut order: Vec<RequestId> = (1..=n as u32).map(RequestId).collect();
    let mut best: Option<(u32, Vec<RequestId>)> = None;
    let score = |order: &[RequestId], best: &mut Option<(u32, Vec<RequestId>)>| {
        let perm = Permutation::from_order_unchecked(order.to_vec());
        let value = build_schedule(instance, &perm, objective)
            .expect("identity-sized permutation")
            .value;
        if best.as_ref().map_or(true, |(v, _)| value < *v) {
            *best = Some((value, order.to_vec()));
        }
    };

    // Heap's algorithm, iterative form.
    score(&order, &mut best);
    let mut c = vec![0usize; n];
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                order.swap(0, i);
            } else {
                order.swap(c[i], i);
            }
            score(&order, &mut best);
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }

    let (value, order) = best.expect("n >= 1");
    Ok((value, Permutation::from_order_unchecked(order)))
}
