//! Synthetic instance generator.
//!
//! Mimics the qualitative shape of a day of satellite-access requests: low
//! altitude requests are short with a zero-slack window at a single station
//! (all of that station's antennas as alternatives, capped at 3); high
//! altitude requests are longer with windows well wider than the duration,
//! listed at several stations' antennas in random preference order.
//! Deterministic for a fixed seed.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use super::{
    Alternative, Altitude, InstanceError, Minutes, ProblemInstance, RequestId, Resource,
    ResourceId, StationId, TaskRequest, TimeWindow,
};

#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorParams {
    /// Instance label; defaults to `gen-<seed>`.
    pub name: Option<String>,
    pub n_low: usize,
    pub n_high: usize,
    pub stations: u32,
    /// Total antennas, distributed round-robin over the stations.
    pub antennas: u32,
    pub horizon: Minutes,
    /// Inclusive duration range for low altitude requests.
    pub low_duration: (Minutes, Minutes),
    /// Inclusive duration range for high altitude requests.
    pub high_duration: (Minutes, Minutes),
    /// Inclusive range of extra window minutes beyond the duration for high
    /// altitude requests (drawn per alternative).
    pub high_slack: (Minutes, Minutes),
    /// Inclusive range for the number of alternatives of a high altitude
    /// request (clamped to the roster size).
    pub high_alternatives: (u32, u32),
}

impl Default for GeneratorParams {
    fn default() -> Self {
        GeneratorParams {
            name: None,
            n_low: 153,
            n_high: 169,
            stations: 9,
            antennas: 16,
            horizon: 1440,
            low_duration: (10, 20),
            high_duration: (20, 60),
            high_slack: (30, 300),
            high_alternatives: (4, 14),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GeneratorError {
    #[error("generator needs at least one request")]
    NoRequests,
    #[error("generator needs at least one station and one antenna per station")]
    NoResources,
    #[error("horizon {horizon} too short for the configured durations")]
    HorizonTooShort { horizon: Minutes },
    #[error("empty range: {0}")]
    EmptyRange(&'static str),
    #[error(transparent)]
    Instance(#[from] InstanceError),
}

fn check_range<T: PartialOrd>(range: (T, T), what: &'static str) -> Result<(), GeneratorError> {
    if range.0 > range.1 {
        return Err(GeneratorError::EmptyRange(what));
    }
    Ok(())
}

/// Builds a random instance from the parameters; byte-identical output for
/// the same (params, seed) pair.
pub fn generate_instance(
    params: &GeneratorParams,
    seed: u64,
) -> Result<ProblemInstance, GeneratorError> {
    if params.n_low + params.n_high == 0 {
        return Err(GeneratorError::NoRequests);
    }
    if params.stations == 0 || params.antennas < params.stations {
        return Err(GeneratorError::NoResources);
    }
    check_range(params.low_duration, "low_duration")?;
    check_range(params.high_duration, "high_duration")?;
    check_range(params.high_slack, "high_slack")?;
    check_range(params.high_alternatives, "high_alternatives")?;
    if params.high_slack.0 == 0 {
        return Err(GeneratorError::EmptyRange("high_slack must be >= 1"));
    }
    if params.n_low > 0 && params.horizon < params.low_duration.1 {
        return Err(GeneratorError::HorizonTooShort {
            horizon: params.horizon,
        });
    }
    if params.n_high > 0 && params.horizon < params.high_duration.1 + 1 {
        return Err(GeneratorError::HorizonTooShort {
            horizon: params.horizon,
        });
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    // Antenna rid r sits at station ((r-1) mod stations) + 1.
    let resources: Vec<Resource> = (1..=params.antennas)
        .map(|rid| Resource {
            id: ResourceId(rid),
            station: StationId((rid - 1) % params.stations + 1),
        })
        .collect();
    let station_antennas: Vec<Vec<ResourceId>> = (1..=params.stations)
        .map(|s| {
            resources
                .iter()
                .filter(|r| r.station.0 == s)
                .map(|r| r.id)
                .collect()
        })
        .collect();

    // Assign ids 1..=n to a random interleaving of the low and high requests.
    let n = params.n_low + params.n_high;
    let mut kinds: Vec<Altitude> = std::iter::repeat(Altitude::Low)
        .take(params.n_low)
        .chain(std::iter::repeat(Altitude::High).take(params.n_high))
        .collect();
    kinds.shuffle(&mut rng);

    let mut requests = Vec::with_capacity(n);
    for (i, &altitude) in kinds.iter().enumerate() {
        let id = RequestId(i as u32 + 1);
        let req = match altitude {
            Altitude::Low => {
                let duration = rng.random_range(params.low_duration.0..=params.low_duration.1);
                let station = rng.random_range(0..params.stations as usize);
                let mut antennas = station_antennas[station].clone();
                antennas.shuffle(&mut rng);
                antennas.truncate(3);
                let lb = rng.random_range(0..=params.horizon - duration);
                let window = TimeWindow::new(lb, lb + duration - 1)?;
                TaskRequest {
                    id,
                    duration,
                    altitude,
                    alternatives: antennas
                        .into_iter()
                        .map(|resource| Alternative { resource, window })
                        .collect(),
                }
            }
            Altitude::High => {
                let duration = rng.random_range(params.high_duration.0..=params.high_duration.1);
                let want =
                    rng.random_range(params.high_alternatives.0..=params.high_alternatives.1);
                let k = want.clamp(1, params.antennas) as usize;
                let mut roster: Vec<ResourceId> = resources.iter().map(|r| r.id).collect();
                roster.shuffle(&mut rng);
                roster.truncate(k);
                let alternatives = roster
                    .into_iter()
                    .map(|resource| {
                        let slack = rng.random_range(params.high_slack.0..=params.high_slack.1);
                        let len = (duration + slack).min(params.horizon);
                        let lb = rng.random_range(0..=params.horizon - len);
                        Ok(Alternative {
                            resource,
                            window: TimeWindow::new(lb, lb + len - 1)?,
                        })
                    })
                    .collect::<Result<Vec<_>, InstanceError>>()?;
                TaskRequest {
                    id,
                    duration,
                    altitude,
                    alternatives,
                }
            }
        };
        requests.push(req);
    }

    let name = params.name.clone().unwrap_or_else(|| format!("gen-{seed}"));
    Ok(ProblemInstance::new(
        name,
        params.horizon,
        resources,
        requests,
    )?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::serialize_instance;

    #[test]
    fn a1_shape() {
        // 153 low + 169 high at 9 stations / 16 antennas over a day.
        let inst = generate_instance(&GeneratorParams::default(), 42).unwrap();
        assert_eq!(inst.n(), 322);
        assert_eq!(inst.resource_count(), 16);
        let lows = inst
            .requests()
            .iter()
            .filter(|r| r.altitude == Altitude::Low)
            .count();
        assert_eq!(lows, 153);
    }

    #[test]
    fn empty_params_rejected() {
        let params = GeneratorParams {
            n_low: 0,
            n_high: 0,
            ..GeneratorParams::default()
        };
        assert_eq!(generate_instance(&params, 1), Err(GeneratorError::NoRequests));
        let params = GeneratorParams {
            stations: 0,
            ..GeneratorParams::default()
        };
        assert_eq!(generate_instance(&params, 1), Err(GeneratorError::NoResources));
    }

    #[test]
    fn deterministic_per_seed() {
        let params = GeneratorParams {
            n_low: 5,
            n_high: 5,
            stations: 2,
            antennas: 3,
            horizon: 200,
            ..GeneratorParams::default()
        };
        let a = serialize_instance(&generate_instance(&params, 7).unwrap());
        let b = serialize_instance(&generate_instance(&params, 7).unwrap());
        assert_eq!(a, b);
        let c = serialize_instance(&generate_instance(&params, 8).unwrap());
        assert_ne!(a, c);
    }

    #[test]
    fn low_zero_slack_high_has_slack() {
        let inst = generate_instance(&GeneratorParams::default(), 3).unwrap();
        for req in inst.requests() {
            match req.altitude {
                Altitude::Low => {
                    for a in &req.alternatives {
                        assert_eq!(a.window.len(), req.duration);
                    }
                }
                Altitude::High => {
                    for a in &req.alternatives {
                        assert!(a.window.len() >= req.duration + 1);
                    }
                }
            }
        }
    }
}
