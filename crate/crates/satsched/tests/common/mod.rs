//! Shared test support: independent reference implementations (minute-scan
//! builder, exhaustive assignment search, a second permutation enumerator)
//! and the generated instance suites the oracle and acceptance tests run on.

#![allow(dead_code)]

use satsched::builder::{build_schedule, Schedule};
use satsched::model::{
    generate_instance, Altitude, GeneratorParams, Permutation, ProblemInstance, RequestId,
};
use satsched::objectives::Objective;

/// Canonical view of a schedule for cross-implementation comparison.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlatSchedule {
    pub placements: Vec<(u32, u32, u32, u32, bool)>, // (request, resource, start, end, overlapped)
    pub bumped: Vec<u32>,
    pub value: u32,
}

pub fn flatten(schedule: &Schedule) -> FlatSchedule {
    let mut placements: Vec<(u32, u32, u32, u32, bool)> = schedule
        .iter_placements()
        .map(|p| (p.request.0, p.resource.0, p.start, p.end, p.overlapped))
        .collect();
    placements.sort();
    FlatSchedule {
        placements,
        bumped: schedule.bumped.iter().map(|r| r.0).collect(),
        value: schedule.value,
    }
}

/// Straight-line re-implementation of the builder rule, scanning every
/// candidate start minute by minute instead of walking gaps. Slow but
/// obviously faithful to the stated rule; the production builder must agree
/// with it exactly.
pub fn reference_build(
    instance: &ProblemInstance,
    perm: &Permutation,
    objective: Objective,
) -> FlatSchedule {
    let m = instance.resource_count();
    // conflict-free occupancy per resource, unsorted (request, start, end)
    let mut free: Vec<Vec<(u32, u32)>> = vec![Vec::new(); m];
    let mut placements: Vec<(u32, u32, u32, u32, bool)> = Vec::new();
    let mut bumped: Vec<u32> = Vec::new();

    let disjoint = |occ: &[(u32, u32)], s: u32, e: u32| occ.iter().all(|&(os, oe)| e <= os || oe <= s);
    let overlap_with = |occ: &[(u32, u32)], s: u32, e: u32| -> u32 {
        occ.iter()
            .map(|&(os, oe)| oe.min(e).saturating_sub(os.max(s)))
            .sum()
    };

    for id in perm.iter() {
        let req = instance.request(id);
        let dur = req.duration;
        let mut placed = false;
        for alt in &req.alternatives {
            let res = instance.resource_index(alt.resource).unwrap();
            let latest = alt.window.ub + 1 - dur;
            let mut found = None;
            for s in alt.window.lb..=latest {
                if disjoint(&free[res], s, s + dur) {
                    found = Some(s);
                    break;
                }
            }
            if let Some(s) = found {
                free[res].push((s, s + dur));
                placements.push((id.0, alt.resource.0, s, s + dur, false));
                placed = true;
                break;
            }
        }
        if placed {
            continue;
        }
        match objective {
            Objective::Conflicts => bumped.push(id.0),
            Objective::Overlaps => {
                // full scan over every (alternative, start); first strict
                // improvement wins, so ties resolve to the earliest start of
                // the earliest-listed alternative
                let mut best: Option<(u32, usize, u32, usize)> = None; // (ovl, alt_idx, start, res)
                for (alt_idx, alt) in req.alternatives.iter().enumerate() {
                    let res = instance.resource_index(alt.resource).unwrap();
                    let latest = alt.window.ub + 1 - dur;
                    for s in alt.window.lb..=latest {
                        let ovl = overlap_with(&free[res], s, s + dur);
                        if best.map_or(true, |(b, _, _, _)| ovl < b) {
                            best = Some((ovl, alt_idx, s, res));
                        }
                    }
                }
                let (_, alt_idx, s, _) = best.expect("non-empty alternatives");
                let alt = &req.alternatives[alt_idx];
                placements.push((id.0, alt.resource.0, s, s + dur, true));
            }
        }
    }

    // value per the stated rules, recomputed pairwise
    let value = match objective {
        Objective::Conflicts => bumped.len() as u32,
        Objective::Overlaps => {
            let mut total = 0u32;
            for &(_, res, s, e, ovl) in &placements {
                if !ovl {
                    continue;
                }
                for &(_, res2, s2, e2, ovl2) in &placements {
                    if !ovl2 && res2 == res {
                        total += e.min(e2).saturating_sub(s.max(s2));
                    }
                }
            }
            total
        }
    };

    placements.sort();
    bumped.sort();
    FlatSchedule {
        placements,
        bumped,
        value,
    }
}

/// Exhaustive branch-and-bound over every (skip | alternative) assignment of
/// a low-only instance; returns the maximum number of schedulable requests.
pub fn max_low_scheduled(instance: &ProblemInstance) -> usize {
    assert!(instance.requests().iter().all(|r| r.altitude == Altitude::Low));
    let m = instance.resource_count();

    // fixed intervals per request and alternative resource indices
    let jobs: Vec<(Vec<(usize, u32, u32)>,)> = instance
        .requests()
        .iter()
        .map(|req| {
            (req
                .alternatives
                .iter()
                .map(|alt| {
                    let res = instance.resource_index(alt.resource).unwrap();
                    (res, alt.window.lb, alt.window.lb + req.duration)
                })
                .collect(),)
        })
        .collect();

    fn dfs(
        jobs: &[(Vec<(usize, u32, u32)>,)],
        at: usize,
        occ: &mut Vec<Vec<(u32, u32)>>,
        count: usize,
        best: &mut usize,
    ) {
        if at == jobs.len() {
            *best = (*best).max(count);
            return;
        }
        if count + (jobs.len() - at) <= *best {
            return; // cannot beat the incumbent
        }
        for &(res, s, e) in &jobs[at].0 {
            if occ[res].iter().all(|&(os, oe)| e <= os || oe <= s) {
                occ[res].push((s, e));
                dfs(jobs, at + 1, occ, count + 1, best);
                occ[res].pop();
            }
        }
        dfs(jobs, at + 1, occ, count, best); // skip this request
    }

    let mut occ = vec![Vec::new(); m];
    let mut best = 0;
    dfs(&jobs, 0, &mut occ, 0, &mut best);
    best
}

/// Second, independently coded exhaustive enumerator (lexicographic recursion
/// rather than Heap's algorithm) for cross-checking the oracle.
pub fn reference_optimum(instance: &ProblemInstance, objective: Objective) -> u32 {
    fn rec(
        instance: &ProblemInstance,
        objective: Objective,
        chosen: &mut Vec<RequestId>,
        remaining: &mut Vec<RequestId>,
        best: &mut u32,
    ) {
        if remaining.is_empty() {
            let perm = Permutation::new(chosen.clone()).unwrap();
            let v = build_schedule(instance, &perm, objective).unwrap().value;
            *best = (*best).min(v);
            return;
        }
        for i in 0..remaining.len() {
            let id = remaining.remove(i);
            chosen.push(id);
            rec(instance, objective, chosen, remaining, best);
            chosen.pop();
            remaining.insert(i, id);
        }
    }
    let mut remaining: Vec<RequestId> = (1..=instance.n() as u32).map(RequestId).collect();
    let mut best = u32::MAX;
    rec(instance, objective, &mut Vec::new(), &mut remaining, &mut best);
    best
}

/// Tiny contended instances (n <= 7) the exhaustive oracle can certify.
pub fn oracle_suite(count: usize) -> Vec<ProblemInstance> {
    (0..count)
        .map(|i| {
            let params = GeneratorParams {
                n_low: 1 + i % 3,
                n_high: 2 + (i / 3) % 3,
                stations: 1 + (i % 2) as u32,
                antennas: 2 + (i % 2) as u32,
                horizon: 40 + (i % 4) as u32 * 15,
                low_duration: (10, 20),
                high_duration: (15, 30),
                high_slack: (5, 25),
                high_alternatives: (1, 3),
                name: Some(format!("oracle-{i}")),
            };
            generate_instance(&params, 1000 + i as u64).unwrap()
        })
        .collect()
}

/// Low-only instances with at most 3 antennas for the activity-selector
/// optimality check.
pub fn low_only_suite(count: usize) -> Vec<ProblemInstance> {
    (0..count)
        .map(|i| {
            let (stations, antennas) = if i % 2 == 0 { (1, 2) } else { (2, 3) };
            let params = GeneratorParams {
                n_low: 4 + i % 7,
                n_high: 0,
                stations,
                antennas,
                horizon: 40 + (i % 5) as u32 * 15,
                low_duration: (10, 20),
                name: Some(format!("low-{i}")),
                ..GeneratorParams::default()
            };
            generate_instance(&params, 2000 + i as u64).unwrap()
        })
        .collect()
}

/// Desk-scale instances mimicking the heavily oversubscribed recent-day
/// shape: ~55% high altitude, tight horizon relative to demand.
pub fn desk_r_params(index: usize) -> GeneratorParams {
    GeneratorParams {
        n_low: 36,
        n_high: 44,
        stations: 4,
        antennas: 7,
        horizon: 310,
        low_duration: (10, 20),
        high_duration: (20, 60),
        high_slack: (30, 200),
        high_alternatives: (2, 5),
        name: Some(format!("desk-r-{index}")),
    }
}

pub fn desk_r_suite(count: usize) -> Vec<ProblemInstance> {
    (0..count)
        .map(|i| generate_instance(&desk_r_params(i), 3000 + i as u64).unwrap())
        .collect()
}

/// One instance with the 322-request day-one shape.
pub fn desk_a_instance() -> ProblemInstance {
    generate_instance(
        &GeneratorParams {
            name: Some("desk-a1".into()),
            ..GeneratorParams::default()
        },
        4242,
    )
    .unwrap()
}

/// Mixed bag of small-to-medium instances for agreement sweeps.
pub fn agreement_suite(count: usize) -> Vec<ProblemInstance> {
    (0..count)
        .map(|i| {
            let stations = 1 + (i % 3) as u32;
            let params = GeneratorParams {
                n_low: 2 + i % 10,
                n_high: 2 + (i * 3) % 12,
                stations,
                antennas: (2 + (i % 4) as u32).max(stations),
                horizon: 60 + (i % 7) as u32 * 40,
                high_duration: (15, 45),
                high_slack: (5, 120),
                high_alternatives: (1, 5),
                name: Some(format!("mix-{i}")),
                ..GeneratorParams::default()
            };
            generate_instance(&params, 5000 + i as u64).unwrap()
        })
        .collect()
}
