//! Standalone objective evaluators.
//!
//! These recompute the objective value from a finished [`Schedule`] without
//! touching any builder state, so they double as the self-check oracle for
//! the builder's own value bookkeeping.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::builder::Schedule;
use crate::model::RequestId;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Objective {
    /// Number of requests bumped out of the schedule.
    Conflicts,
    /// Total overlap minutes between forcibly placed requests and the
    /// conflict-free placements on the same resource.
    Overlaps,
}

impl fmt::Display for Objective {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Objective::Conflicts => write!(f, "conflicts"),
            Objective::Overlaps => write!(f, "overlaps"),
        }
    }
}

impl FromStr for Objective {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "conflicts" => Ok(Objective::Conflicts),
            "overlaps" => Ok(Objective::Overlaps),
            other => Err(format!("unknown objective `{other}`")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ObjectiveValue {
    pub kind: Objective,
    pub value: u32,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ObjectiveError {
    #[error("schedule was built under {got}, evaluator expects {expected}")]
    WrongKind { expected: Objective, got: Objective },
}

/// Number of bumped requests of a schedule built under `Conflicts`.
pub fn count_conflicts(schedule: &Schedule) -> Result<ObjectiveValue, ObjectiveError> {
    if schedule.objective != Objective::Conflicts {
        return Err(ObjectiveError::WrongKind {
            expected: Objective::Conflicts,
            got: schedule.objective,
        });
    }
    Ok(ObjectiveValue {
        kind: Objective::Conflicts,
        value: schedule.bumped.len() as u32,
    })
}

/// Total overlap minutes of a schedule built under `Overlaps`.
///
/// Each overlapped placement contributes its intersection with every
/// conflict-free placement on the same resource; mutual overlap between two
/// overlapped placements is not part of the sum.
pub fn sum_overlaps(schedule: &Schedule) -> Result<ObjectiveValue, ObjectiveError> {
    if schedule.objective != Objective::Overlaps {
        return Err(ObjectiveError::WrongKind {
            expected: Objective::Overlaps,
            got: schedule.objective,
        });
    }
    let mut total = 0u32;
    for placements in &schedule.placements {
        for p in placements.iter().filter(|p| p.overlapped) {
            for q in placements.iter().filter(|q| !q.overlapped) {
                total += p.overlap_minutes(q);
            }
        }
    }
    Ok(ObjectiveValue {
        kind: Objective::Overlaps,
        value: total,
    })
}

/// Recomputes the value under the schedule's own objective.
pub fn evaluate(schedule: &Schedule) -> ObjectiveValue {
    match schedule.objective {
        Objective::Conflicts => count_conflicts(schedule).expect("kind matches"),
        Objective::Overlaps => sum_overlaps(schedule).expect("kind matches"),
    }
}

/// Per-request overlap contributions of a schedule built under `Overlaps`:
/// one entry per overlapped placement, ascending by request id. This is what
/// squeaky wheel reprioritization feeds on.
pub fn overlap_contributions(schedule: &Schedule) -> Vec<(RequestId, u32)> {
    let mut out = Vec::new();
    for placements in &schedule.placements {
        for p in placements.iter().filter(|p| p.overlapped) {
            let contribution: u32 = placements
                .iter()
                .filter(|q| !q.overlapped)
                .map(|q| p.overlap_minutes(q))
                .sum();
            out.push((p.request, contribution));
        }
    }
    out.sort_by_key(|&(id, _)| id);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builder::Placement;
    use crate::model::ResourceId;

    fn placement(req: u32, start: u32, dur: u32, overlapped: bool) -> Placement {
        Placement {
            request: RequestId(req),
            resource: ResourceId(1),
            start,
            end: start + dur,
            overlapped,
        }
    }

    fn overlaps_schedule(placements: Vec<Placement>) -> Schedule {
        Schedule {
            objective: Objective::Overlaps,
            placements: vec![placements],
            bumped: Vec::new(),
            value: 0,
        }
    }

    #[test]
    fn empty_schedule_has_zero_conflicts() {
        let s = Schedule {
            objective: Objective::Conflicts,
            placements: Vec::new(),
            bumped: Vec::new(),
            value: 0,
        };
        assert_eq!(count_conflicts(&s).unwrap().value, 0);
    }

    #[test]
    fn wrong_kind_is_rejected() {
        let s = overlaps_schedule(Vec::new());
        assert!(count_conflicts(&s).is_err());
    }

    #[test]
    fn closed_interval_intersection() {
        // Overlapped placement covering minutes [10,19] atop a conflict-free
        // [15,29] intersects on [15,19]: 5 minutes.
        let s = overlaps_schedule(vec![
            placement(1, 15, 15, false),
            placement(2, 10, 10, true),
        ]);
        assert_eq!(sum_overlaps(&s).unwrap().value, 5);
    }

    #[test]
    fn mutual_overlap_between_overlapped_placements_not_counted() {
        // Three mutually intersecting placements, two of them overlapped:
        // only the two overlapped-vs-scheduled intersections count.
        let s = overlaps_schedule(vec![
            placement(1, 0, 20, false),
            placement(2, 5, 10, true),
            placement(3, 10, 10, true),
        ]);
        // brute force over the pairs: (2,1) = [5,15)&[0,20) = 10,
        // (3,1) = [10,20)&[0,20) = 10, (2,3) ignored.
        assert_eq!(sum_overlaps(&s).unwrap().value, 20);
        let contributions = overlap_contributions(&s);
        assert_eq!(
            contributions,
            vec![(RequestId(2), 10), (RequestId(3), 10)]
        );
    }

    #[test]
    fn removing_an_overlapped_placement_never_increases_the_sum() {
        let full = overlaps_schedule(vec![
            placement(1, 0, 20, false),
            placement(2, 5, 10, true),
            placement(3, 10, 10, true),
        ]);
        let total = sum_overlaps(&full).unwrap().value;
        for skip in [2u32, 3u32] {
            let pruned = overlaps_schedule(
                full.placements[0]
                    .iter()
                    .copied()
                    .filter(|p| p.request.0 != skip)
                    .collect(),
            );
            assert!(sum_overlaps(&pruned).unwrap().value <= total);
        }
    }
}
