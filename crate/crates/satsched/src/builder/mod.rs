//! Greedy schedule builders: decode a permutation of request ids into a
//! schedule.
//!
//! Requests are processed in permutation order. Each takes the first
//! alternative (in its listed preference order) admitting a conflict-free
//! placement, at the earliest feasible start on that resource. A request with
//! no conflict-free alternative is bumped under the conflicts objective, or
//! placed where its overlap with the conflict-free placements made so far is
//! minimal under the overlaps objective.
//!
//! Placements occupy the closed minute range `[start, start + duration - 1]`;
//! internally intervals are half-open `[start, end)` with `end = start +
//! duration`, which is the same thing. Two placements conflict iff their
//! occupied ranges intersect, so one may start exactly where another ends.

use thiserror::Error;

use crate::model::{
    Altitude, Minutes, Permutation, ProblemInstance, RequestId, ResourceId, TimeWindow,
};
use crate::objectives::Objective;

mod gooley;

pub use gooley::{gooley_schedule, greedy_activity_selector, insert_high_flexibility_order};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BuildError {
    #[error("permutation of {perm} ids does not match instance with {n} requests")]
    PermutationMismatch { perm: usize, n: usize },
    #[error("request {0} is high altitude; the activity selector handles low-only instances")]
    HighRequestPresent(RequestId),
    #[error("base schedule contains non-low placements or bumped high requests")]
    BaseNotLowOnly,
}

/// Which decoding the evaluations of a search run use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BuilderKind {
    #[default]
    Standard,
    /// Schedule every low altitude request (in relative permutation order)
    /// before any high altitude request.
    Split,
}

impl BuilderKind {
    pub fn build(
        self,
        instance: &ProblemInstance,
        perm: &Permutation,
        objective: Objective,
    ) -> Result<Schedule, BuildError> {
        match self {
            BuilderKind::Standard => build_schedule(instance, perm, objective),
            BuilderKind::Split => build_schedule_split(instance, perm, objective),
        }
    }
}

/// One scheduled request: occupies minutes `[start, end)` on `resource`.
/// `overlapped` marks requests placed in conflict under the overlaps
/// objective.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Placement {
    pub request: RequestId,
    pub resource: ResourceId,
    pub start: Minutes,
    pub end: Minutes,
    pub overlapped: bool,
}

impl Placement {
    pub fn duration(&self) -> Minutes {
        self.end - self.start
    }

    /// Minutes shared with another placement.
    pub fn overlap_minutes(&self, other: &Placement) -> u32 {
        let lo = self.start.max(other.start);
        let hi = self.end.min(other.end);
        hi.saturating_sub(lo)
    }
}

/// Result of decoding a permutation: per-resource time-ordered placement
/// lists, the bumped set (conflicts objective only) and the objective value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Schedule {
    pub objective: Objective,
    /// Indexed like `ProblemInstance::resources()`.
    pub placements: Vec<Vec<Placement>>,
    /// Ascending request ids; always empty under the overlaps objective.
    pub bumped: Vec<RequestId>,
    pub value: u32,
}

impl Schedule {
    pub fn iter_placements(&self) -> impl Iterator<Item = &Placement> {
        self.placements.iter().flatten()
    }

    pub fn placement_of(&self, id: RequestId) -> Option<&Placement> {
        self.iter_placements().find(|p| p.request == id)
    }

    /// Debug/acceptance text dump: one line per placement, then the bumped
    /// ids and the value.
    pub fn dump(&self) -> String {
        use std::fmt::Write as _;
        let mut out = String::new();
        for placements in &self.placements {
            for p in placements {
                writeln!(
                    out,
                    "res {} req {} [{},{}] {}",
                    p.resource,
                    p.request,
                    p.start,
                    p.end,
                    if p.overlapped { "ovl" } else { "ok" }
                )
                .unwrap();
            }
        }
        let ids: Vec<String> = self.bumped.iter().map(|r| r.to_string()).collect();
        writeln!(out, "bumped: {}", ids.join(" ")).unwrap();
        writeln!(out, "value: {}", self.value).unwrap();
        out
    }
}

/// Conflict-free occupancy of one resource, kept sorted by start.
#[derive(Debug, Clone, Default)]
struct Timeline {
    taken: Vec<(Minutes, Minutes)>,
}

impl Timeline {
    /// Earliest start of a `duration`-long slot inside `window` that avoids
    /// every taken interval, scanning the taken intervals in time order.
    fn earliest_fit(&self, window: TimeWindow, duration: Minutes) -> Option<Minutes> {
        debug_assert!(window.fits(duration));
        let latest = window.latest_start(duration);
        let mut start = window.lb;
        for &(ts, te) in &self.taken {
            if ts >= start + duration {
                break; // gap before this interval fits
            }
            if te > start {
                start = te;
                if start > latest {
                    return None;
                }
            }
        }
        (start <= latest).then_some(start)
    }

    /// Total intersection of `[start, start+duration)` with the taken
    /// intervals.
    fn overlap_total(&self, start: Minutes, duration: Minutes) -> u32 {
        let end = start + duration;
        self.taken
            .iter()
            .map(|&(ts, te)| te.min(end).saturating_sub(ts.max(start)))
            .sum()
    }

    /// Start in `window` minimizing the total intersection with the taken
    /// intervals; ties broken by the earliest start. The overlap as a
    /// function of the start is piecewise linear with local minima only at
    /// the window lower bound, at interval ends and at interval starts minus
    /// the duration (each clamped into the feasible range), so evaluating
    /// those candidates suffices.
    fn min_overlap_start(&self, window: TimeWindow, duration: Minutes) -> (Minutes, u32) {
        debug_assert!(window.fits(duration));
        let latest = window.latest_start(duration);
        let clamp = |v: i64| -> Minutes { v.clamp(window.lb as i64, latest as i64) as Minutes };
        let mut best = (window.lb, self.overlap_total(window.lb, duration));
        for &(ts, te) in &self.taken {
            for cand in [clamp(te as i64), clamp(ts as i64 - duration as i64)] {
                let ovl = self.overlap_total(cand, duration);
                if ovl < best.1 || (ovl == best.1 && cand < best.0) {
                    best = (cand, ovl);
                }
            }
        }
        best
    }

    /// End of the last taken interval ending at or before `t` (0 if none).
    fn last_end_before(&self, t: Minutes) -> Minutes {
        // Disjoint intervals sorted by start are sorted by end as well.
        let k = self.taken.partition_point(|&(_, te)| te <= t);
        if k > 0 {
            self.taken[k - 1].1
        } else {
            0
        }
    }

    fn insert(&mut self, start: Minutes, end: Minutes) {
        let at = self.taken.partition_point(|&(ts, _)| ts < start);
        self.taken.insert(at, (start, end));
    }
}

/// Shared state while decoding one permutation.
struct BuildState<'a> {
    instance: &'a ProblemInstance,
    objective: Objective,
    timelines: Vec<Timeline>,
    placements: Vec<Vec<Placement>>,
    bumped: Vec<RequestId>,
}

impl<'a> BuildState<'a> {
    fn new(instance: &'a ProblemInstance, objective: Objective) -> Self {
        let m = instance.resource_count();
        BuildState {
            instance,
            objective,
            timelines: vec![Timeline::default(); m],
            placements: vec![Vec::new(); m],
            bumped: Vec::new(),
        }
    }

    /// Places one request per the builder rule.
    fn place(&mut self, id: RequestId) {
        let req = self.instance.request(id);
        let duration = req.duration;

        // First alternative admitting a conflict-free slot, earliest start.
        for &(res, window) in self.instance.alternatives_resolved(id) {
            if let Some(start) = self.timelines[res].earliest_fit(window, duration) {
                self.commit(res, id, start, duration, false);
                return;
            }
        }

        match self.objective {
            Objective::Conflicts => self.bumped.push(id),
            Objective::Overlaps => {
                // Alternative (in listed order) whose best start overlaps the
                // conflict-free placements least; earlier alternative wins ties.
                let mut best: Option<(u32, usize, Minutes)> = None;
                for &(res, window) in self.instance.alternatives_resolved(id) {
                    let (start, ovl) = self.timelines[res].min_overlap_start(window, duration);
                    if best.map_or(true, |(b, _, _)| ovl < b) {
                        best = Some((ovl, res, start));
                    }
                }
                let (ovl, res, start) = best.expect("alternatives are non-empty");
                debug_assert!(ovl > 0, "a zero-overlap start would have been conflict-free");
                self.commit(res, id, start, duration, true);
            }
        }
    }

    fn commit(&mut self, res: usize, id: RequestId, start: Minutes, duration: Minutes, overlapped: bool) {
        let end = start + duration;
        if !overlapped {
            self.timelines[res].insert(start, end);
        }
        self.placements[res].push(Placement {
            request: id,
            resource: self.instance.resources()[res].id,
            start,
            end,
            overlapped,
        });
    }

    fn finish(mut self) -> Schedule {
        for list in &mut self.placements {
            list.sort_by_key(|p| (p.start, p.request));
        }
        self.bumped.sort();
        // The builder computes its value from its own timelines; the
        // objectives module recomputes it from the placement lists.
        let value = match self.objective {
            Objective::Conflicts => self.bumped.len() as u32,
            Objective::Overlaps => self
                .placements
                .iter()
                .enumerate()
                .flat_map(|(res, list)| {
                    list.iter().filter(|p| p.overlapped).map(move |p| (res, p))
                })
                .map(|(res, p)| self.timelines[res].overlap_total(p.start, p.duration()))
                .sum(),
        };
        Schedule {
            objective: self.objective,
            placements: self.placements,
            bumped: self.bumped,
            value,
        }
    }
}

fn check_perm(instance: &ProblemInstance, perm: &Permutation) -> Result<(), BuildError> {
    if perm.len() != instance.n() {
        return Err(BuildError::PermutationMismatch {
            perm: perm.len(),
            n: instance.n(),
        });
    }
    Ok(())
}

/// Decodes a permutation under the given objective. Deterministic: a pure
/// function of its inputs.
pub fn build_schedule(
    instance: &ProblemInstance,
    perm: &Permutation,
    objective: Objective,
) -> Result<Schedule, BuildError> {
    check_perm(instance, perm)?;
    let mut state = BuildState::new(instance, objective);
    for id in perm.iter() {
        state.place(id);
    }
    Ok(state.finish())
}

/// Split-heuristic decoding: all low altitude requests first (in their
/// relative permutation order), then all high altitude requests; low
/// placements are never moved.
pub fn build_schedule_split(
    instance: &ProblemInstance,
    perm: &Permutation,
    objective: Objective,
) -> Result<Schedule, BuildError> {
    check_perm(instance, perm)?;
    let mut state = BuildState::new(instance, objective);
    for id in perm.iter().filter(|&id| instance.altitude(id) == Altitude::Low) {
        state.place(id);
    }
    for id in perm.iter().filter(|&id| instance.altitude(id) == Altitude::High) {
        state.place(id);
    }
    Ok(state.finish())
}
