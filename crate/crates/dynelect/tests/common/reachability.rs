//! Independent temporal-reachability oracle.
//!
//! Builds the explicit time-expanded digraph of a schedule — one vertex per
//! (round, node), an arc `(r, u) -> (r+1, v)` for every round-`r` edge
//! `(u, v)` whose receiver survives into `r + 1`, plus waiting arcs — and
//! answers the flooding question with petgraph's stock BFS. This shares no
//! code with the production verifier.

use std::collections::HashMap;

use dynelect::protocol::NodeId;
use dynelect::schedule::{FloodingCounterexample, Schedule};
use petgraph::graph::{DiGraph, NodeIndex};
use petgraph::visit::Bfs;

pub struct TimeExpanded {
    graph: DiGraph<(u32, NodeId), ()>,
    index: HashMap<(u32, NodeId), NodeIndex>,
}

pub fn build_time_expanded(s: &Schedule) -> TimeExpanded {
    let mut graph = DiGraph::new();
    let mut index = HashMap::new();
    for r in 1..=s.horizon() {
        for v in s.snapshot(r).unwrap().vertices() {
            let ix = graph.add_node((r, *v));
            index.insert((r, *v), ix);
        }
    }
    for r in 1..s.horizon() {
        let snap = s.snapshot(r).unwrap();
        for v in snap.vertices() {
            if let Some(next) = index.get(&(r + 1, *v)) {
                graph.add_edge(index[&(r, *v)], *next, ());
            }
        }
        for (a, b) in snap.edges() {
            if let Some(next) = index.get(&(r + 1, *b)) {
                graph.add_edge(index[&(r, *a)], *next, ());
            }
            if let Some(next) = index.get(&(r + 1, *a)) {
                graph.add_edge(index[&(r, *b)], *next, ());
            }
        }
    }
    TimeExpanded { graph, index }
}

impl TimeExpanded {
    /// All (round, node) vertices reachable from `(r, u)`.
    fn reachable_from(&self, r: u32, u: NodeId) -> Vec<(u32, NodeId)> {
        let mut out = Vec::new();
        let Some(start) = self.index.get(&(r, u)) else {
            return out;
        };
        let mut bfs = Bfs::new(&self.graph, *start);
        while let Some(ix) = bfs.next(&self.graph) {
            out.push(self.graph[ix]);
        }
        out
    }
}

/// Same contract as `dynelect::schedule::verify_comm_diameter`, computed over
/// the time-expanded graph: every persistent source must reach every
/// persistent target's copy at round `r + d`. Scan order matches the
/// production verifier, so the first counterexamples are comparable.
pub fn verify_by_reachability(s: &Schedule) -> Result<(), FloodingCounterexample> {
    let d = s.d();
    if s.horizon() <= d {
        return Ok(());
    }
    let expanded = build_time_expanded(s);
    for r in 1..=s.horizon() - d {
        let end = r + d;
        let persistent: Vec<NodeId> = s
            .snapshot(r)
            .unwrap()
            .vertices()
            .iter()
            .copied()
            .filter(|v| s.present_throughout(*v, r, end))
            .collect();
        for u in &persistent {
            let reached = expanded.reachable_from(r, *u);
            for v in &persistent {
                if !reached.contains(&(end, *v)) {
                    return Err(FloodingCounterexample {
                        source: *u,
                        start_round: r,
                        unreached: *v,
                    });
                }
            }
        }
    }
    Ok(())
}
