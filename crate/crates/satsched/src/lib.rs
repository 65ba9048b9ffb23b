//! Oversubscribed satellite-access scheduling.
//!
//! A day of antenna time is requested by more tasks than the network can
//! accommodate. Solutions are encoded as permutations of the task request
//! ids; a deterministic greedy schedule builder decodes a permutation into
//! a schedule under one of two objectives:
//!
//! * **Conflicts** — requests that cannot be placed without overlap are
//!   bumped; the objective is the number of bumped requests.
//! * **Overlaps** — every request is placed; requests that do not fit are
//!   assigned where they overlap least, and the objective is the total
//!   overlap in minutes against conflict-free placements.
//!
//! On top of the builder sit several search algorithms that share a single
//! evaluation budget and trace contract (randomized local search, attenuated
//! leap local search, a steady-state genetic algorithm, squeaky wheel
//! optimization and heuristic-biased stochastic sampling), landscape-analysis
//! experiments (neighbor scans, plateau random walks, precedence-pair
//! counting), and a benchmark harness that runs repeated seeded trials and
//! emits CSV statistics.

pub mod analysis;
pub mod builder;
pub mod experiment;
pub mod model;
pub mod objectives;
pub mod search;
pub mod stats;

pub use builder::{build_schedule, build_schedule_split, BuilderKind, Placement, Schedule};
pub use model::{
    Altitude, Permutation, ProblemInstance, RequestId, Resource, ResourceId, StationId,
    TaskRequest, TimeWindow,
};
pub use objectives::Objective;
pub use search::{SearchConfig, SearchResult};
