//! Line-based text format for problem instances.
//!
//! ```text
//! # comment
//! instance <name> horizon <minutes>
//! resource <rid> station <sid>
//! request <id> dur <minutes> alt {low|high}
//! win <rid> <lb> <ub>
//! ```
//!
//! `win` lines attach to the preceding `request` line; their order in the
//! file is the preference order the schedule builder scans. Serialization is
//! canonical (resources and requests in id order, no comments), so
//! parse -> serialize -> parse is the identity.

use std::fmt::Write as _;

use thiserror::Error;

use super::{
    Alternative, Altitude, InstanceError, ProblemInstance, RequestId, Resource, ResourceId,
    StationId, TaskRequest, TimeWindow,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("line {0}: malformed line: {1}")]
    Malformed(usize, String),
    #[error("line {0}: duplicate id {1}")]
    DuplicateId(usize, u32),
    #[error("line {0}: window cannot fit duration")]
    WindowTooSmall(usize),
    #[error("line {0}: unknown resource {1}")]
    UnknownResource(usize, u32),
    #[error("line {0}: {1}")]
    Instance(usize, InstanceError),
    #[error("missing `instance` header line")]
    MissingHeader,
}

fn parse_u32(line_no: usize, tok: &str, what: &str) -> Result<u32, ParseError> {
    tok.parse::<u32>()
        .map_err(|_| ParseError::Malformed(line_no, format!("expected {what}, got `{tok}`")))
}

/// Parses the text of an instance file.
///
/// Every reported error carries the 1-based line number it was detected on.
pub fn parse_instance(text: &str) -> Result<ProblemInstance, ParseError> {
    let mut header: Option<(String, u32, usize)> = None;
    let mut resources: Vec<Resource> = Vec::new();
    let mut requests: Vec<TaskRequest> = Vec::new();
    // Line each request was declared on, for end-of-parse diagnostics.
    let mut request_lines: Vec<usize> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let tokens: Vec<&str> = line.split_whitespace().collect();
        match tokens[0] {
            "instance" => {
                if header.is_some() {
                    return Err(ParseError::Malformed(
                        line_no,
                        "second `instance` header".into(),
                    ));
                }
                if tokens.len() != 4 || tokens[2] != "horizon" {
                    return Err(ParseError::Malformed(
                        line_no,
                        "expected `instance <name> horizon <minutes>`".into(),
                    ));
                }
                let horizon = parse_u32(line_no, tokens[3], "horizon minutes")?;
                header = Some((tokens[1].to_string(), horizon, line_no));
            }
            "resource" => {
                if tokens.len() != 4 || tokens[2] != "station" {
                    return Err(ParseError::Malformed(
                        line_no,
                        "expected `resource <rid> station <sid>`".into(),
                    ));
                }
                let rid = parse_u32(line_no, tokens[1], "resource id")?;
                let sid = parse_u32(line_no, tokens[3], "station id")?;
                if resources.iter().any(|r| r.id.0 == rid) {
                    return Err(ParseError::DuplicateId(line_no, rid));
                }
                resources.push(Resource {
                    id: ResourceId(rid),
                    station: StationId(sid),
                });
            }
            "request" => {
                if tokens.len() != 6 || tokens[2] != "dur" || tokens[4] != "alt" {
                    return Err(ParseError::Malformed(
                        line_no,
                        "expected `request <id> dur <minutes> alt {low|high}`".into(),
                    ));
                }
                let id = parse_u32(line_no, tokens[1], "request id")?;
                let dur = parse_u32(line_no, tokens[3], "duration")?;
                let altitude = match tokens[5] {
                    "low" => Altitude::Low,
                    "high" => Altitude::High,
                    other => {
                        return Err(ParseError::Malformed(
                            line_no,
                            format!("expected altitude `low` or `high`, got `{other}`"),
                        ))
                    }
                };
                if requests.iter().any(|r| r.id.0 == id) {
                    return Err(ParseError::DuplicateId(line_no, id));
                }
                requests.push(TaskRequest {
                    id: RequestId(id),
                    duration: dur,
                    altitude,
                    alternatives: Vec::new(),
                });
                request_lines.push(line_no);
            }
            "win" => {
                if tokens.len() != 4 {
                    return Err(ParseError::Malformed(
                        line_no,
                        "expected `win <rid> <lb> <ub>`".into(),
                    ));
                }
                let rid = parse_u32(line_no, tokens[1], "resource id")?;
                let lb = parse_u32(line_no, tokens[2], "window lower bound")?;
                let ub = parse_u32(line_no, tokens[3], "window upper bound")?;
                let req = requests.last_mut().ok_or_else(|| {
                    ParseError::Malformed(line_no, "`win` line before any `request`".into())
                })?;
                if !resources.iter().any(|r| r.id.0 == rid) {
                    return Err(ParseError::UnknownResource(line_no, rid));
                }
                let window = TimeWindow::new(lb, ub)
                    .map_err(|e| ParseError::Instance(line_no, e))?;
                if !window.fits(req.duration) {
                    return Err(ParseError::WindowTooSmall(line_no));
                }
                req.alternatives.push(Alternative {
                    resource: ResourceId(rid),
                    window,
                });
            }
            other => {
                return Err(ParseError::Malformed(
                    line_no,
                    format!("unknown directive `{other}`"),
                ));
            }
        }
    }

    let (name, horizon, header_line) = header.ok_or(ParseError::MissingHeader)?;
    let line_of = |err: &InstanceError| -> usize {
        let id = match err {
            InstanceError::WindowTooSmall(id)
            | InstanceError::EmptyAlternatives(id)
            | InstanceError::ZeroDuration(id)
            | InstanceError::UnknownResource(id, _)
            | InstanceError::LowAlternativeCount(id)
            | InstanceError::LowMultipleStations(id)
            | InstanceError::LowNonZeroSlack(id) => Some(*id),
            _ => None,
        };
        id.and_then(|id| {
            requests
                .iter()
                .position(|r| r.id == id)
                .map(|i| request_lines[i])
        })
        .unwrap_or(header_line)
    };
    ProblemInstance::new(name, horizon, resources.clone(), requests.clone())
        .map_err(|e| ParseError::Instance(line_of(&e), e))
}

/// Canonical serialization: header, resources in id order, requests in id
/// order with their `win` lines in preference order.
pub fn serialize_instance(instance: &ProblemInstance) -> String {
    let mut out = String::new();
    writeln!(
        out,
        "instance {} horizon {}",
        instance.name(),
        instance.horizon()
    )
    .unwrap();
    for r in instance.resources() {
        writeln!(out, "resource {} station {}", r.id, r.station).unwrap();
    }
    for req in instance.requests() {
        let alt = match req.altitude {
            Altitude::Low => "low",
            Altitude::High => "high",
        };
        writeln!(out, "request {} dur {} alt {}", req.id, req.duration, alt).unwrap();
        for a in &req.alternatives {
            writeln!(out, "win {} {} {}", a.resource, a.window.lb, a.window.ub).unwrap();
        }
    }
    out
}
