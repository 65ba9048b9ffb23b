//! Domain types: resources, time windows, task requests, problem instances
//! and the permutation genotype shared by every search algorithm.

use std::fmt;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

pub mod format;
pub mod generate;

pub use format::{parse_instance, serialize_instance, ParseError};
pub use generate::{generate_instance, GeneratorError, GeneratorParams};

/// Integer minutes from the start of the scheduling day.
pub type Minutes = u32;

/// Identifier of a task request; ids are exactly `1..=n` within an instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RequestId(pub u32);

/// Identifier of an antenna.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ResourceId(pub u32);

/// Identifier of a tracking station; every antenna belongs to exactly one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StationId(pub u32);

impl fmt::Display for RequestId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for ResourceId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for StationId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// An antenna at a tracking station.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Resource {
    pub id: ResourceId,
    pub station: StationId,
}

/// Closed interval of minutes `[lb, ub]` during which a request is visible
/// on one alternative resource.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TimeWindow {
    pub lb: Minutes,
    pub ub: Minutes,
}

impl TimeWindow {
    pub fn new(lb: Minutes, ub: Minutes) -> Result<Self, InstanceError> {
        if lb > ub {
            return Err(InstanceError::WindowBoundsOutOfOrder { lb, ub });
        }
        Ok(TimeWindow { lb, ub })
    }

    /// Number of minutes in the window (closed interval).
    pub fn len(&self) -> u32 {
        self.ub - self.lb + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Whether a task of the given duration fits inside the window.
    pub fn fits(&self, duration: Minutes) -> bool {
        self.len() >= duration
    }

    /// Latest feasible start, i.e. `start + duration - 1 <= ub`.
    /// Callers must ensure `fits(duration)`.
    pub fn latest_start(&self, duration: Minutes) -> Minutes {
        self.ub + 1 - duration
    }
}

/// Low altitude requests are short with zero slack at a single station;
/// high altitude requests are longer with wide windows across stations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Altitude {
    Low,
    High,
}

/// One (resource, window) pair of a request. The order in which alternatives
/// are listed is the preference order the schedule builder scans.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Alternative {
    pub resource: ResourceId,
    pub window: TimeWindow,
}

/// One access request: a required duration and an ordered list of
/// alternative (resource, window) pairs the duration may be allocated in.
#[derive(Debug, Clone, PartialEq)]
pub struct TaskRequest {
    pub id: RequestId,
    pub duration: Minutes,
    pub altitude: Altitude,
    pub alternatives: Vec<Alternative>,
}

impl TaskRequest {
    /// Duration divided by the mean window length over the alternatives.
    ///
    /// A ratio of 1 means the duration exactly fills every window (zero
    /// slack, the hardest to place); small ratios mean lots of room. All
    /// greedy orderings in this crate schedule the highest ratio first.
    pub fn flexibility_ratio(&self) -> f64 {
        let total: u64 = self.alternatives.iter().map(|a| a.window.len() as u64).sum();
        let mean = total as f64 / self.alternatives.len() as f64;
        self.duration as f64 / mean
    }

    /// Earliest window lower bound over the alternatives.
    pub fn earliest_lb(&self) -> Minutes {
        self.alternatives.iter().map(|a| a.window.lb).min().unwrap_or(0)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum InstanceError {
    #[error("window bounds out of order: [{lb},{ub}]")]
    WindowBoundsOutOfOrder { lb: Minutes, ub: Minutes },
    #[error("request {0}: window cannot fit duration")]
    WindowTooSmall(RequestId),
    #[error("request {0}: empty alternative list")]
    EmptyAlternatives(RequestId),
    #[error("request {0}: zero duration")]
    ZeroDuration(RequestId),
    #[error("request {0}: unknown resource {1}")]
    UnknownResource(RequestId, ResourceId),
    #[error("duplicate resource id {0}")]
    DuplicateResource(ResourceId),
    #[error("request ids are not exactly 1..=n (expected {expected}, found {found})")]
    NonContiguousIds { expected: u32, found: u32 },
    #[error("request {0}: low altitude request must list 1..=3 alternatives")]
    LowAlternativeCount(RequestId),
    #[error("request {0}: low altitude alternatives must share one station")]
    LowMultipleStations(RequestId),
    #[error("request {0}: low altitude window must equal the duration")]
    LowNonZeroSlack(RequestId),
    #[error("not a permutation of 1..={n}")]
    NotAPermutation { n: usize },
    #[error("cannot draw a permutation of 0 elements")]
    EmptyPermutation,
}

/// An immutable scheduling problem: `n` task requests plus the antenna
/// roster grouped by tracking station.
#[derive(Debug, Clone, PartialEq)]
pub struct ProblemInstance {
    name: String,
    horizon: Minutes,
    resources: Vec<Resource>,
    requests: Vec<TaskRequest>,
    // Alternatives with the resource resolved to its dense index, one list
    // per request, precomputed so the builder never does id lookups.
    resolved: Vec<Vec<(usize, TimeWindow)>>,
}

impl ProblemInstance {
    pub fn new(
        name: impl Into<String>,
        horizon: Minutes,
        mut resources: Vec<Resource>,
        mut requests: Vec<TaskRequest>,
    ) -> Result<Self, InstanceError> {
        resources.sort_by_key(|r| r.id);
        for pair in resources.windows(2) {
            if pair[0].id == pair[1].id {
                return Err(InstanceError::DuplicateResource(pair[0].id));
            }
        }
        requests.sort_by_key(|r| r.id);
        for (i, req) in requests.iter().enumerate() {
            let expected = i as u32 + 1;
            if req.id.0 != expected {
                return Err(InstanceError::NonContiguousIds {
                    expected,
                    found: req.id.0,
                });
            }
        }

        let mut resolved = Vec::with_capacity(requests.len());
        for req in &requests {
            if req.alternatives.is_empty() {
                return Err(InstanceError::EmptyAlternatives(req.id));
            }
            if req.duration == 0 {
                return Err(InstanceError::ZeroDuration(req.id));
            }
            let mut alts = Vec::with_capacity(req.alternatives.len());
            for alt in &req.alternatives {
                let idx = resources
                    .binary_search_by_key(&alt.resource, |r| r.id)
                    .map_err(|_| InstanceError::UnknownResource(req.id, alt.resource))?;
                if !alt.window.fits(req.duration) {
                    return Err(InstanceError::WindowTooSmall(req.id));
                }
                alts.push((idx, alt.window));
            }
            if req.altitude == Altitude::Low {
                if !(1..=3).contains(&req.alternatives.len()) {
                    return Err(InstanceError::LowAlternativeCount(req.id));
                }
                let station = resources[alts[0].0].station;
                if alts.iter().any(|&(i, _)| resources[i].station != station) {
                    return Err(InstanceError::LowMultipleStations(req.id));
                }
                if req.alternatives.iter().any(|a| a.window.len() != req.duration) {
                    return Err(InstanceError::LowNonZeroSlack(req.id));
                }
            }
            resolved.push(alts);
        }

        Ok(ProblemInstance {
            name: name.into(),
            horizon,
            resources,
            requests,
            resolved,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn horizon(&self) -> Minutes {
        self.horizon
    }

    /// Number of task requests `n`.
    pub fn n(&self) -> usize {
        self.requests.len()
    }

    pub fn requests(&self) -> &[TaskRequest] {
        &self.requests
    }

    pub fn request(&self, id: RequestId) -> &TaskRequest {
        &self.requests[(id.0 - 1) as usize]
    }

    pub fn altitude(&self, id: RequestId) -> Altitude {
        self.request(id).altitude
    }

    pub fn resources(&self) -> &[Resource] {
        &self.resources
    }

    pub fn resource_count(&self) -> usize {
        self.resources.len()
    }

    pub fn resource_index(&self, id: ResourceId) -> Option<usize> {
        self.resources.binary_search_by_key(&id, |r| r.id).ok()
    }

    /// Alternatives of a request as (dense resource index, window) pairs,
    /// in the listed preference order.
    pub fn alternatives_resolved(&self, id: RequestId) -> &[(usize, TimeWindow)] {
        &self.resolved[(id.0 - 1) as usize]
    }
}

/// An ordering of the `n` request ids; the genotype for every algorithm.
/// Always a bijection on `1..=n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Permutation {
    order: Vec<RequestId>,
}

impl Permutation {
    /// Validates that `order` is a bijection on `1..=n`.
    pub fn new(order: Vec<RequestId>) -> Result<Self, InstanceError> {
        let n = order.len();
        let mut seen = vec![false; n];
        for id in &order {
            let v = id.0 as usize;
            if v == 0 || v > n || seen[v - 1] {
                return Err(InstanceError::NotAPermutation { n });
            }
            seen[v - 1] = true;
        }
        Ok(Permutation { order })
    }

    pub(crate) fn from_order_unchecked(order: Vec<RequestId>) -> Self {
        debug_assert!(Permutation::new(order.clone()).is_ok());
        Permutation { order }
    }

    pub fn identity(n: usize) -> Self {
        Permutation {
            order: (1..=n as u32).map(RequestId).collect(),
        }
    }

    /// Uniformly random ordering (Fisher-Yates under the caller's generator).
    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<Self, InstanceError> {
        if n == 0 {
            return Err(InstanceError::EmptyPermutation);
        }
        let mut order: Vec<RequestId> = (1..=n as u32).map(RequestId).collect();
        order.shuffle(rng);
        Ok(Permutation { order })
    }

    /// Seeded variant of [`Permutation::random`]; deterministic per seed
    /// (ChaCha8 keystream).
    pub fn random_seeded(n: usize, seed: u64) -> Result<Self, InstanceError> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Permutation::random(n, &mut rng)
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn as_slice(&self) -> &[RequestId] {
        &self.order
    }

    pub fn iter(&self) -> impl Iterator<Item = RequestId> + '_ {
        self.order.iter().copied()
    }

    /// 0-based position of a request id. Panics if absent.
    pub fn position_of(&self, id: RequestId) -> usize {
        self.order.iter().position(|&r| r == id).expect("id in permutation")
    }

    pub(crate) fn order_mut(&mut self) -> &mut Vec<RequestId> {
        &mut self.order
    }
}
