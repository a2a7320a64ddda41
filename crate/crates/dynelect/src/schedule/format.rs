//! Line-delimited schedule files.
//!
//! One JSON object per line: a header record carrying `n`, `d`, `horizon`,
//! the generator descriptor and the seed, followed by one record per round
//! with the vertex list and the edge list. Files produced here are canonical
//! (sorted lists, fixed field order), so `parse ∘ serialize` is the identity
//! on the byte level.

use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{GraphSnapshot, Schedule, ScheduleError};
use crate::protocol::NodeId;

pub(crate) const SCHEDULE_FORMAT: &str = "dynelect-schedule/v1";

#[derive(Serialize, Deserialize)]
struct Header {
    format: String,
    n: u32,
    d: u32,
    horizon: u32,
    generator: String,
    seed: u64,
}

#[derive(Serialize, Deserialize)]
struct RoundRecord {
    round: u32,
    vertices: Vec<u64>,
    edges: Vec<[u64; 2]>,
}

/// Renders a schedule in the canonical line-delimited form.
pub fn serialize_schedule(s: &Schedule) -> String {
    let mut out = String::new();
    let header = Header {
        format: SCHEDULE_FORMAT.to_string(),
        n: s.n(),
        d: s.d(),
        horizon: s.horizon(),
        generator: s.generator().to_string(),
        seed: s.seed(),
    };
    out.push_str(&serde_json::to_string(&header).expect("header serializes"));
    out.push('\n');
    for r in 1..=s.horizon() {
        let snap = s.snapshot_unchecked(r);
        let rec = RoundRecord {
            round: r,
            vertices: snap.vertices().iter().map(|v| v.0).collect(),
            edges: snap.edges().iter().map(|(a, b)| [a.0, b.0]).collect(),
        };
        out.push_str(&serde_json::to_string(&rec).expect("round serializes"));
        out.push('\n');
    }
    out
}

/// Parses the canonical line-delimited form back into a schedule, revalidating
/// every invariant.
pub fn parse_schedule(text: &str) -> Result<Schedule, ScheduleError> {
    let mut lines = text.lines().enumerate();
    let (_, header_line) = lines.next().ok_or(ScheduleError::Parse {
        line: 1,
        reason: "empty file".into(),
    })?;
    let header: Header = serde_json::from_str(header_line).map_err(|e| ScheduleError::Parse {
        line: 1,
        reason: e.to_string(),
    })?;
    if header.format != SCHEDULE_FORMAT {
        return Err(ScheduleError::Parse {
            line: 1,
            reason: format!("unsupported format tag {:?}", header.format),
        });
    }
    let mut snapshots = Vec::with_capacity(header.horizon as usize);
    for (idx, line) in lines {
        if line.is_empty() {
            continue;
        }
        let rec: RoundRecord = serde_json::from_str(line).map_err(|e| ScheduleError::Parse {
            line: idx + 1,
            reason: e.to_string(),
        })?;
        snapshots.push(GraphSnapshot::new(
            rec.round,
            rec.vertices.into_iter().map(NodeId).collect(),
            rec.edges
                .into_iter()
                .map(|[a, b]| (NodeId(a), NodeId(b)))
                .collect(),
        ));
    }
    if snapshots.len() as u32 != header.horizon {
        return Err(ScheduleError::Parse {
            line: snapshots.len() + 1,
            reason: format!(
                "header declares horizon {} but file carries {} round records",
                header.horizon,
                snapshots.len()
            ),
        });
    }
    Schedule::new(header.n, header.d, header.generator, header.seed, snapshots)
}

pub fn write_schedule(s: &Schedule, path: impl AsRef<Path>) -> Result<(), ScheduleError> {
    std::fs::write(path, serialize_schedule(s))?;
    Ok(())
}

pub fn read_schedule(path: impl AsRef<Path>) -> Result<Schedule, ScheduleError> {
    parse_schedule(&std::fs::read_to_string(path)?)
}
