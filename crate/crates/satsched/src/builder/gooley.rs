//! Two-phase constructive schedule: an optimal greedy pass over the low
//! altitude requests, then flexibility-ordered insertion of the high
//! altitude requests.

use crate::model::{Altitude, ProblemInstance, RequestId};
use crate::objectives::Objective;

use super::{BuildError, BuildState, Schedule};

/// Schedules a low-altitude-only instance with the multi-resource greedy
/// activity selector: requests in increasing order of their due date (the
/// fixed end time), each placed on the feasible alternative whose idle gap
/// before the fixed start is smallest (ties to the lowest resource id).
///
/// Schedules the optimal number of low requests when every request lists all
/// antennas of its station, which the instance invariants guarantee up to
/// the 3-alternative cap.
pub fn greedy_activity_selector(instance: &ProblemInstance) -> Result<Schedule, BuildError> {
    if let Some(req) = instance
        .requests()
        .iter()
        .find(|r| r.altitude == Altitude::High)
    {
        return Err(BuildError::HighRequestPresent(req.id));
    }
    Ok(low_phase(instance))
}

/// Inserts the high altitude requests into a low-only base schedule without
/// moving any base placement.
///
/// Insertion order is most-constrained first: decreasing ratio of the
/// duration to the mean window length, ties broken by fewer alternatives,
/// then earlier window lower bound, then lower id. Each request is placed by
/// the standard builder rule; requests with no conflict-free slot are bumped
/// under `Conflicts` or overlap-placed under `Overlaps` (in which case any
/// bumped base request is overlap-placed as well, so every request ends up
/// in the schedule).
pub fn insert_high_flexibility_order(
    base: &Schedule,
    instance: &ProblemInstance,
) -> Result<Schedule, BuildError> {
    if base.placements.len() != instance.resource_count() {
        return Err(BuildError::BaseNotLowOnly);
    }
    let low_only = base
        .iter_placements()
        .all(|p| !p.overlapped && instance.altitude(p.request) == Altitude::Low)
        && base
            .bumped
            .iter()
            .all(|&id| instance.altitude(id) == Altitude::Low);
    if !low_only {
        return Err(BuildError::BaseNotLowOnly);
    }

    let mut state = BuildState::new(instance, base.objective);
    for (res, list) in base.placements.iter().enumerate() {
        for p in list {
            state.timelines[res].insert(p.start, p.end);
            state.placements[res].push(*p);
        }
    }

    let mut highs: Vec<RequestId> = instance
        .requests()
        .iter()
        .filter(|r| r.altitude == Altitude::High)
        .map(|r| r.id)
        .collect();
    highs.sort_by(|&a, &b| {
        let ra = instance.request(a);
        let rb = instance.request(b);
        rb.flexibility_ratio()
            .total_cmp(&ra.flexibility_ratio())
            .then(ra.alternatives.len().cmp(&rb.alternatives.len()))
            .then(ra.earliest_lb().cmp(&rb.earliest_lb()))
            .then(a.cmp(&b))
    });
    for id in highs {
        state.place(id);
    }

    match base.objective {
        Objective::Conflicts => state.bumped.extend(base.bumped.iter().copied()),
        Objective::Overlaps => {
            // The base never moves, so its leftovers take the overlap rule too.
            for &id in &base.bumped {
                state.place(id);
            }
        }
    }
    Ok(state.finish())
}

/// The full two-phase construction for a mixed instance.
pub fn gooley_schedule(
    instance: &ProblemInstance,
    objective: Objective,
) -> Result<Schedule, BuildError> {
    let selected = low_phase(instance);
    let base = Schedule {
        objective,
        placements: selected.placements,
        bumped: selected.bumped,
        value: 0,
    };
    insert_high_flexibility_order(&base, instance)
}

/// Activity selector over the low altitude requests of an instance; any high
/// altitude requests are simply ignored.
fn low_phase(instance: &ProblemInstance) -> Schedule {
    let mut order: Vec<RequestId> = instance
        .requests()
        .iter()
        .filter(|r| r.altitude == Altitude::Low)
        .map(|r| r.id)
        .collect();
    order.sort_by_key(|&id| {
        let req = instance.request(id);
        (req.earliest_lb() + req.duration - 1, id)
    });

    let mut state = BuildState::new(instance, Objective::Conflicts);
    for id in order {
        let duration = instance.request(id).duration;
        // Zero slack: each alternative admits exactly one start, its window lb.
        let mut best: Option<(u32, usize, u32)> = None; // (idle, res, start)
        for &(res, window) in instance.alternatives_resolved(id) {
            if state.timelines[res].earliest_fit(window, duration).is_none() {
                continue;
            }
            let idle = window.lb - state.timelines[res].last_end_before(window.lb);
            let rid = instance.resources()[res].id;
            let better = match best {
                None => true,
                Some((b_idle, b_res, _)) => {
                    idle < b_idle || (idle == b_idle && rid < instance.resources()[b_res].id)
                }
            };
            if better {
                best = Some((idle, res, window.lb));
            }
        }
        match best {
            Some((_, res, start)) => state.commit(res, id, start, duration, false),
            None => state.bumped.push(id),
        }
    }
    state.finish()
}
