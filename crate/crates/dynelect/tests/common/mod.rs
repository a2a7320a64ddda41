//! Shared support for the integration suites.

#![allow(dead_code)]

pub mod reachability;
pub mod replay;

use dynelect::protocol::NodeId;
use dynelect::schedule::{GraphSnapshot, Schedule};
use rand_core::RngCore;

/// Random schedule over at most `n` nodes: random contiguous lifespans and
/// independent random edges per round. Makes no attempt to satisfy the
/// flooding guarantee, which is exactly what the equivalence suites want.
pub fn random_schedule(
    n: u32,
    d: u32,
    horizon: u32,
    edge_density_percent: u32,
    rng: &mut impl RngCore,
) -> Schedule {
    let mut spans = Vec::new();
    for id in 1..=u64::from(n) {
        let entry = 1 + (rng.next_u64() % u64::from(horizon)) as u32;
        let span = (rng.next_u64() % u64::from(horizon)) as u32;
        let last = (entry + span).min(horizon);
        spans.push((NodeId(id), entry, last));
    }
    // Keep at least one node alive at round 1 so traces are never empty.
    spans[0].1 = 1;
    let mut snapshots = Vec::new();
    for r in 1..=horizon {
        let vertices: Vec<NodeId> = spans
            .iter()
            .filter(|(_, entry, last)| *entry <= r && r <= *last)
            .map(|(id, _, _)| *id)
            .collect();
        let mut edges = Vec::new();
        for (i, a) in vertices.iter().enumerate() {
            for b in &vertices[i + 1..] {
                if rng.next_u64() % 100 < u64::from(edge_density_percent) {
                    edges.push((*a, *b));
                }
            }
        }
        snapshots.push(GraphSnapshot::new(r, vertices, edges));
    }
    Schedule::new(n, d, "random", 0, snapshots).expect("random schedule is well-formed")
}
