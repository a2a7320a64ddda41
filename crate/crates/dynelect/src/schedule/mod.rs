//! Dynamic-network schedules.
//!
//! A schedule is the adversary's full commitment: a finite sequence of graph
//! snapshots, one per round, fixed before the run begins. Nodes enter once,
//! leave at most once, and are present over a contiguous interval of rounds.
//! The engine never mutates a schedule; it only reads it.
//!
//! The model's one connectivity assumption is the bounded communication
//! diameter `D`: a message flooded from a node present throughout
//! `[r, r + D]` reaches every node present throughout that window by round
//! `r + D`. [`verify_comm_diameter`] checks the assumption exhaustively by
//! brute-force flooding from every start point.

mod format;
mod generate;
mod verify;

pub use format::{parse_schedule, read_schedule, serialize_schedule, write_schedule};
pub use generate::{churn, lower_bound, static_schedule, EpochTopology};
pub use verify::{verify_comm_diameter, FloodingCounterexample};

use std::collections::BTreeMap;

use thiserror::Error;

use crate::protocol::{NodeId, MAX_ID};

/// The network at one round: the nodes present and the undirected edges
/// between them. Vertices are sorted; edges are normalized `(a, b)` with
/// `a < b` and sorted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphSnapshot {
    round: u32,
    vertices: Vec<NodeId>,
    edges: Vec<(NodeId, NodeId)>,
}

impl GraphSnapshot {
    /// Builds a snapshot, sorting and deduplicating both lists and
    /// normalizing edge orientation. Validation against the schedule's
    /// invariants happens in [`Schedule::new`].
    pub fn new(round: u32, mut vertices: Vec<NodeId>, edges: Vec<(NodeId, NodeId)>) -> Self {
        vertices.sort_unstable();
        vertices.dedup();
        let mut edges: Vec<(NodeId, NodeId)> = edges
            .into_iter()
            .map(|(a, b)| if a <= b { (a, b) } else { (b, a) })
            .collect();
        edges.sort_unstable();
        edges.dedup();
        GraphSnapshot {
            round,
            vertices,
            edges,
        }
    }

    pub fn round(&self) -> u32 {
        self.round
    }

    pub fn vertices(&self) -> &[NodeId] {
        &self.vertices
    }

    pub fn edges(&self) -> &[(NodeId, NodeId)] {
        &self.edges
    }

    pub fn contains(&self, id: NodeId) -> bool {
        self.vertices.binary_search(&id).is_ok()
    }
}

/// A committed dynamic-network schedule.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Schedule {
    n: u32,
    d: u32,
    horizon: u32,
    generator: String,
    seed: u64,
    snapshots: Vec<GraphSnapshot>,
    /// Per node: (entry round, last round present).
    lifespans: BTreeMap<NodeId, (u32, u32)>,
}

impl Schedule {
    /// Validates and assembles a schedule from per-round snapshots.
    ///
    /// Checks that rounds are numbered `1..=horizon`, every snapshot respects
    /// `|V| <= n`, ids fit the wire format, edges are loop-free with both
    /// endpoints present, and each node's membership is one contiguous
    /// interval.
    pub fn new(
        n: u32,
        d: u32,
        generator: impl Into<String>,
        seed: u64,
        snapshots: Vec<GraphSnapshot>,
    ) -> Result<Self, ScheduleError> {
        if n == 0 || d == 0 || snapshots.is_empty() {
            return Err(ScheduleError::InvalidParameter {
                reason: "n, d and horizon must all be positive".into(),
            });
        }
        let horizon = snapshots.len() as u32;
        let mut lifespans: BTreeMap<NodeId, (u32, u32)> = BTreeMap::new();
        for (i, snap) in snapshots.iter().enumerate() {
            let r = i as u32 + 1;
            if snap.round != r {
                return Err(ScheduleError::Construction {
                    reason: format!("snapshot {} carries round number {}", r, snap.round),
                });
            }
            if snap.vertices.len() as u32 > n {
                return Err(ScheduleError::Construction {
                    reason: format!(
                        "round {}: {} vertices exceed the declared maximum {}",
                        r,
                        snap.vertices.len(),
                        n
                    ),
                });
            }
            for v in &snap.vertices {
                if v.0 == 0 || v.0 > MAX_ID {
                    return Err(ScheduleError::Construction {
                        reason: format!("round {r}: id {v} outside the encodable id space"),
                    });
                }
                match lifespans.entry(*v) {
                    std::collections::btree_map::Entry::Vacant(e) => {
                        e.insert((r, r));
                    }
                    std::collections::btree_map::Entry::Occupied(mut e) => {
                        let (_, last) = *e.get();
                        if last != r - 1 {
                            return Err(ScheduleError::Construction {
                                reason: format!(
                                    "node {v} re-enters at round {r} after leaving at round {last}"
                                ),
                            });
                        }
                        e.get_mut().1 = r;
                    }
                }
            }
            for (a, b) in &snap.edges {
                if a == b {
                    return Err(ScheduleError::Construction {
                        reason: format!("round {r}: self-loop on node {a}"),
                    });
                }
                if !snap.contains(*a) || !snap.contains(*b) {
                    return Err(ScheduleError::Construction {
                        reason: format!("round {r}: edge ({a}, {b}) leaves the vertex set"),
                    });
                }
            }
        }
        Ok(Schedule {
            n,
            d,
            horizon,
            generator: generator.into(),
            seed,
            snapshots,
            lifespans,
        })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// Declared communication diameter bound, in rounds.
    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn horizon(&self) -> u32 {
        self.horizon
    }

    pub fn generator(&self) -> &str {
        &self.generator
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// The committed snapshot for round `r`, `1 <= r <= horizon`.
    pub fn snapshot(&self, r: u32) -> Result<&GraphSnapshot, ScheduleError> {
        if r == 0 || r > self.horizon {
            return Err(ScheduleError::RoundOutOfRange {
                round: r,
                horizon: self.horizon,
            });
        }
        Ok(&self.snapshots[(r - 1) as usize])
    }

    pub(crate) fn snapshot_unchecked(&self, r: u32) -> &GraphSnapshot {
        &self.snapshots[(r - 1) as usize]
    }

    /// `(entry round, last round present)` for a node, if it ever appears.
    pub fn lifespan(&self, id: NodeId) -> Option<(u32, u32)> {
        self.lifespans.get(&id).copied()
    }

    /// All nodes that ever appear, with their lifespans, ordered by id.
    pub fn lifespans(&self) -> impl Iterator<Item = (NodeId, (u32, u32))> + '_ {
        self.lifespans.iter().map(|(id, span)| (*id, *span))
    }

    /// True when `id` is present in every round of `[r1, r2]`.
    pub fn present_throughout(&self, id: NodeId, r1: u32, r2: u32) -> bool {
        match self.lifespan(id) {
            Some((entry, last)) => entry <= r1 && last >= r2,
            None => false,
        }
    }

    pub fn is_alive(&self, id: NodeId, r: u32) -> bool {
        self.present_throughout(id, r, r)
    }
}

#[derive(Debug, Error)]
pub enum ScheduleError {
    #[error("invalid parameter: {reason}")]
    InvalidParameter { reason: String },
    #[error("schedule construction failed: {reason}")]
    Construction { reason: String },
    #[error("round {round} out of range 1..={horizon}")]
    RoundOutOfRange { round: u32, horizon: u32 },
    #[error("schedule parse error at line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[cfg(test)]
mod tests {
    use super::*;

    fn id(v: u64) -> NodeId {
        NodeId(v)
    }

    fn snap(round: u32, vs: &[u64], es: &[(u64, u64)]) -> GraphSnapshot {
        GraphSnapshot::new(
            round,
            vs.iter().map(|v| id(*v)).collect(),
            es.iter().map(|(a, b)| (id(*a), id(*b))).collect(),
        )
    }

    #[test]
    fn snapshot_normalizes_vertices_and_edges() {
        let s = snap(1, &[3, 1, 2, 2], &[(3, 1), (2, 3), (1, 3)]);
        assert_eq!(s.vertices(), &[id(1), id(2), id(3)]);
        assert_eq!(s.edges(), &[(id(1), id(3)), (id(2), id(3))]);
    }

    #[test]
    fn schedule_accepts_contiguous_membership() {
        let s = Schedule::new(
            3,
            2,
            "test",
            0,
            vec![
                snap(1, &[1, 2], &[]),
                snap(2, &[1, 2, 3], &[]),
                snap(3, &[3], &[]),
            ],
        )
        .unwrap();
        assert_eq!(s.lifespan(id(1)), Some((1, 2)));
        assert_eq!(s.lifespan(id(3)), Some((2, 3)));
        assert!(s.present_throughout(id(2), 1, 2));
        assert!(!s.present_throughout(id(2), 1, 3));
    }

    #[test]
    fn schedule_rejects_reentry() {
        let err = Schedule::new(
            2,
            2,
            "test",
            0,
            vec![snap(1, &[1], &[]), snap(2, &[], &[]), snap(3, &[1], &[])],
        )
        .unwrap_err();
        assert!(matches!(err, ScheduleError::Construction { .. }));
    }

    #[test]
    fn schedule_rejects_edges_outside_vertex_set_and_loops() {
        let err = Schedule::new(2, 2, "test", 0, vec![snap(1, &[1, 2], &[(1, 3)])]).unwrap_err();
        assert!(matches!(err, ScheduleError::Construction { .. }));
        let err = Schedule::new(2, 2, "test", 0, vec![snap(1, &[1, 2], &[(1, 1)])]).unwrap_err();
        assert!(matches!(err, ScheduleError::Construction { .. }));
    }

    #[test]
    fn schedule_rejects_overflowing_vertex_count() {
        let err = Schedule::new(1, 2, "test", 0, vec![snap(1, &[1, 2], &[])]).unwrap_err();
        assert!(matches!(err, ScheduleError::Construction { .. }));
    }

    #[test]
    fn snapshot_range_checks() {
        let s = Schedule::new(
            1,
            2,
            "test",
            0,
            vec![snap(1, &[1], &[]), snap(2, &[1], &[])],
        )
        .unwrap();
        assert_eq!(s.snapshot(1).unwrap().vertices(), &[id(1)]);
        assert_eq!(s.snapshot(2).unwrap().round(), 2);
        assert!(matches!(
            s.snapshot(3),
            Err(ScheduleError::RoundOutOfRange { .. })
        ));
        assert!(matches!(
            s.snapshot(0),
            Err(ScheduleError::RoundOutOfRange { .. })
        ));
    }
}
