//! Schedule generators.
//!
//! All generators are deterministic in their parameters and seed. The epoch
//! generators draw from three independent labeled streams (churn coins, node
//! ids, epoch topology) so that, under a shared seed, the churn pattern is
//! identical across id policies and topologies.

use std::collections::HashSet;

use rand_core::RngCore;

use super::{GraphSnapshot, Schedule, ScheduleError};
use crate::protocol::{NodeId, MAX_ID};
use crate::rng::labeled_stream;

/// Topology applied around each epoch of `D` rounds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EpochTopology {
    /// Nodes are pairwise disconnected except at epoch-boundary rounds
    /// (multiples of `D`), where the current vertex set forms a complete
    /// graph.
    CompleteAtEpoch,
    /// A fresh random connected graph is drawn at each epoch boundary and
    /// held for every round until the next boundary.
    RandomConnectedAtEpoch,
}

impl std::fmt::Display for EpochTopology {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            EpochTopology::CompleteAtEpoch => f.write_str("complete"),
            EpochTopology::RandomConnectedAtEpoch => f.write_str("random-connected"),
        }
    }
}

/// The adversarial epoch schedule: nodes sit disconnected for `D - 1` rounds,
/// then at each round `iD` every node is removed with probability 1/2,
/// replacements restore the population to `n`, and the survivors plus
/// newcomers form a complete graph for that single round.
///
/// Ids are drawn uniformly without replacement from `{1, ..., n^5}` (widened
/// just enough when tiny `n` could exhaust the pool). The construction keeps
/// the communication diameter bounded by `D` while destroying any would-be
/// leader with probability 1/2 per epoch, which is what makes it the worst
/// case for election latency.
pub fn lower_bound(n: u32, d: u32, epochs: u32, seed: u64) -> Result<Schedule, ScheduleError> {
    if n < 1 || d < 2 || epochs < 1 {
        return Err(ScheduleError::InvalidParameter {
            reason: format!("lower-bound generator needs n >= 1, d >= 2, epochs >= 1 (got n={n}, d={d}, epochs={epochs})"),
        });
    }
    if n > 256 {
        return Err(ScheduleError::InvalidParameter {
            reason: format!("lower-bound generator supports n <= 256 so that n^5 ids stay encodable (got n={n})"),
        });
    }
    let horizon = epochs
        .checked_mul(d)
        .ok_or_else(|| ScheduleError::InvalidParameter {
            reason: "epochs * d overflows".into(),
        })?;
    let pool = id_pool_size(n, horizon / d);
    if u64::from(n) * (u64::from(horizon / d) + 1) > pool {
        return Err(ScheduleError::InvalidParameter {
            reason: "id space cannot cover worst-case replacement demand".into(),
        });
    }
    epoch_schedule(
        n,
        d,
        horizon,
        0.5,
        EpochTopology::CompleteAtEpoch,
        IdPolicy::random(pool),
        seed,
        "lower-bound".to_string(),
    )
}

/// Generalized epoch schedule with configurable removal probability and
/// epoch topology. Replacement ids are sequential.
pub fn churn(
    n: u32,
    d: u32,
    horizon: u32,
    churn_rate: f64,
    topology: EpochTopology,
    seed: u64,
) -> Result<Schedule, ScheduleError> {
    if !(0.0..=1.0).contains(&churn_rate) {
        return Err(ScheduleError::InvalidParameter {
            reason: format!("churn rate must lie in [0, 1] (got {churn_rate})"),
        });
    }
    if n < 1 || d < 1 || horizon < 1 {
        return Err(ScheduleError::InvalidParameter {
            reason: format!(
                "churn generator needs n, d, horizon >= 1 (got n={n}, d={d}, horizon={horizon})"
            ),
        });
    }
    let schedule = epoch_schedule(
        n,
        d,
        horizon,
        churn_rate,
        topology,
        IdPolicy::sequential(),
        seed,
        format!("churn(rate={churn_rate},topology={topology})"),
    )?;
    if topology == EpochTopology::RandomConnectedAtEpoch {
        // Connectivity at each round does not by itself bound the diameter;
        // reject outputs that break the D-guarantee.
        if let Err(cex) = super::verify_comm_diameter(&schedule) {
            return Err(ScheduleError::Construction {
                reason: format!(
                    "generated topology cannot satisfy the D-round flooding guarantee: {cex}"
                ),
            });
        }
    }
    Ok(schedule)
}

/// A fixed topology held for every round, with nodes `1..=n` present
/// throughout. The graph must be connected with diameter at most `d`.
pub fn static_schedule(
    n: u32,
    d: u32,
    horizon: u32,
    edges: &[(u64, u64)],
) -> Result<Schedule, ScheduleError> {
    if n < 1 || d < 1 || horizon < 1 {
        return Err(ScheduleError::InvalidParameter {
            reason: format!(
                "static generator needs n, d, horizon >= 1 (got n={n}, d={d}, horizon={horizon})"
            ),
        });
    }
    let vertices: Vec<NodeId> = (1..=u64::from(n)).map(NodeId).collect();
    let edges: Vec<(NodeId, NodeId)> = edges
        .iter()
        .map(|(a, b)| (NodeId(*a), NodeId(*b)))
        .collect();
    for (a, b) in &edges {
        if a.0 == 0 || a.0 > u64::from(n) || b.0 == 0 || b.0 > u64::from(n) {
            return Err(ScheduleError::InvalidParameter {
                reason: format!("edge ({a}, {b}) references a node outside 1..={n}"),
            });
        }
    }
    if let Some(diameter) = graph_diameter(n, &edges) {
        if diameter > d {
            return Err(ScheduleError::Construction {
                reason: format!("topology diameter {diameter} exceeds the declared bound {d}"),
            });
        }
    } else if n > 1 {
        return Err(ScheduleError::Construction {
            reason: "topology is disconnected".into(),
        });
    }
    let snapshots = (1..=horizon)
        .map(|r| GraphSnapshot::new(r, vertices.clone(), edges.clone()))
        .collect();
    Schedule::new(n, d, "static", 0, snapshots)
}

/// Hop diameter of the graph on `1..=n`, or `None` when disconnected.
fn graph_diameter(n: u32, edges: &[(NodeId, NodeId)]) -> Option<u32> {
    if n == 1 {
        return Some(0);
    }
    let n = n as usize;
    let mut adj = vec![Vec::new(); n + 1];
    for (a, b) in edges {
        adj[a.0 as usize].push(b.0 as usize);
        adj[b.0 as usize].push(a.0 as usize);
    }
    let mut diameter = 0;
    let mut dist = vec![u32::MAX; n + 1];
    let mut queue = std::collections::VecDeque::new();
    for start in 1..=n {
        dist[1..=n].fill(u32::MAX);
        dist[start] = 0;
        queue.push_back(start);
        while let Some(v) = queue.pop_front() {
            for &w in &adj[v] {
                if dist[w] == u32::MAX {
                    dist[w] = dist[v] + 1;
                    queue.push_back(w);
                }
            }
        }
        for d in &dist[1..=n] {
            if *d == u32::MAX {
                return None;
            }
            diameter = diameter.max(*d);
        }
    }
    Some(diameter)
}

enum IdPolicy {
    Sequential { next: u64 },
    Random { bound: u64, used: HashSet<u64> },
}

impl IdPolicy {
    fn sequential() -> Self {
        IdPolicy::Sequential { next: 1 }
    }

    fn random(bound: u64) -> Self {
        IdPolicy::Random {
            bound,
            used: HashSet::new(),
        }
    }

    fn draw(&mut self, rng: &mut impl RngCore) -> Result<NodeId, ScheduleError> {
        match self {
            IdPolicy::Sequential { next } => {
                let id = *next;
                if id > MAX_ID {
                    return Err(ScheduleError::Construction {
                        reason: "sequential id space exhausted".into(),
                    });
                }
                *next += 1;
                Ok(NodeId(id))
            }
            IdPolicy::Random { bound, used } => {
                let mask = u64::MAX >> (bound.leading_zeros().min(63));
                loop {
                    let v = (rng.next_u64() & mask) + 1;
                    if v <= *bound && used.insert(v) {
                        return Ok(NodeId(v));
                    }
                }
            }
        }
    }
}

/// Id pool for the adversarial generator: `n^5`, widened when worst-case
/// replacement demand at tiny `n` would exhaust it.
fn id_pool_size(n: u32, boundaries: u32) -> u64 {
    let n = u64::from(n);
    let worst_case = n * (u64::from(boundaries) + 1);
    n.pow(5).max(worst_case).min(MAX_ID)
}

#[allow(clippy::too_many_arguments)]
fn epoch_schedule(
    n: u32,
    d: u32,
    horizon: u32,
    churn_rate: f64,
    topology: EpochTopology,
    mut ids: IdPolicy,
    seed: u64,
    generator: String,
) -> Result<Schedule, ScheduleError> {
    let mut coins = labeled_stream(seed, "churn-coins");
    let mut id_stream = labeled_stream(seed, "node-ids");
    let mut topo_stream = labeled_stream(seed, "epoch-topology");
    // Removal threshold on the full 64-bit range; exact at both endpoints.
    let threshold = (churn_rate * 2f64.powi(64)) as u128;

    // Members in (entry round, id) order, which is also the coin-flip order.
    let mut members: Vec<(u32, NodeId)> = Vec::with_capacity(n as usize);
    let mut cohort: Vec<NodeId> = (0..n)
        .map(|_| ids.draw(&mut id_stream))
        .collect::<Result<_, _>>()?;
    cohort.sort_unstable();
    members.extend(cohort.into_iter().map(|id| (1, id)));

    let mut held_edges = match topology {
        EpochTopology::CompleteAtEpoch => Vec::new(),
        EpochTopology::RandomConnectedAtEpoch => random_connected_edges(&members, &mut topo_stream),
    };

    let mut snapshots = Vec::with_capacity(horizon as usize);
    for r in 1..=horizon {
        let boundary = r % d == 0;
        if boundary {
            let mut survivors = Vec::with_capacity(members.len());
            for m in members.drain(..) {
                let removed = u128::from(coins.next_u64()) < threshold;
                if !removed {
                    survivors.push(m);
                }
            }
            let mut newcomers: Vec<NodeId> = (survivors.len()..n as usize)
                .map(|_| ids.draw(&mut id_stream))
                .collect::<Result<_, _>>()?;
            newcomers.sort_unstable();
            members = survivors;
            members.extend(newcomers.into_iter().map(|id| (r, id)));
            if topology == EpochTopology::RandomConnectedAtEpoch {
                held_edges = random_connected_edges(&members, &mut topo_stream);
            }
        }
        let vertices: Vec<NodeId> = members.iter().map(|(_, id)| *id).collect();
        let edges = match topology {
            EpochTopology::CompleteAtEpoch if boundary => complete_edges(&vertices),
            EpochTopology::CompleteAtEpoch => Vec::new(),
            EpochTopology::RandomConnectedAtEpoch => held_edges.clone(),
        };
        snapshots.push(GraphSnapshot::new(r, vertices, edges));
    }
    Schedule::new(n, d, generator, seed, snapshots)
}

fn complete_edges(vertices: &[NodeId]) -> Vec<(NodeId, NodeId)> {
    let mut edges = Vec::with_capacity(vertices.len() * vertices.len().saturating_sub(1) / 2);
    for (i, a) in vertices.iter().enumerate() {
        for b in &vertices[i + 1..] {
            edges.push((*a, *b));
        }
    }
    edges
}

/// Random spanning tree plus a handful of extra edges.
fn random_connected_edges(
    members: &[(u32, NodeId)],
    rng: &mut impl RngCore,
) -> Vec<(NodeId, NodeId)> {
    let mut nodes: Vec<NodeId> = members.iter().map(|(_, id)| *id).collect();
    nodes.sort_unstable();
    let k = nodes.len();
    if k < 2 {
        return Vec::new();
    }
    let mut edges = Vec::with_capacity(k + k / 2);
    for i in 1..k {
        let j = (rng.next_u64() % i as u64) as usize;
        edges.push((nodes[j], nodes[i]));
    }
    for _ in 0..k / 2 {
        let a = (rng.next_u64() % k as u64) as usize;
        let b = (rng.next_u64() % k as u64) as usize;
        if a != b {
            edges.push((nodes[a.min(b)], nodes[a.max(b)]));
        }
    }
    edges
}
