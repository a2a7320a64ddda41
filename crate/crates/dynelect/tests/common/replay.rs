//! Minimal replay interpreter.
//!
//! A from-scratch rewrite of the round semantics — map-based, clone-happy,
//! one big match per node — used to cross-check the optimized engine. It
//! shares only the message types and the per-node seed derivation, which
//! must match for the histories to be comparable at all.

use std::collections::BTreeMap;

use dynelect::protocol::{Beep, Message, NodeId, Rank};
use dynelect::rng::node_stream;
use dynelect::schedule::Schedule;
use rand_chacha::ChaCha8Rng;
use rand_core::RngCore;

#[derive(Debug, Clone, PartialEq)]
struct Node {
    leader: Option<NodeId>,
    is_leader: bool,
    passive: bool,
    armed_or_competing: bool,
    p: u16,
    my_rank: Option<Rank>,
    best_rank: Option<Rank>,
    beep: Option<Beep>,
    entry: u32,
    anchor: u32,
    rng: ChaCha8Rng,
}

fn rank_value(rk: &Rank) -> f64 {
    let unit = rk.uniform_bits as f64 * (-64f64).exp2();
    -unit.ln() / f64::from(rk.phase_count).exp2()
}

fn min_rank(a: Rank, b: Rank) -> Rank {
    let (va, vb) = (rank_value(&a), rank_value(&b));
    if va < vb || (va == vb && a.owner <= b.owner) {
        a
    } else {
        b
    }
}

fn draw(p: u16, owner: NodeId, rng: &mut ChaCha8Rng) -> Rank {
    let uniform_bits = loop {
        let u = rng.next_u64();
        if u != 0 {
            break u;
        }
    };
    Rank {
        phase_count: p,
        uniform_bits,
        owner,
    }
}

/// Per-round leader variables of every present node, round by round.
pub fn leader_history(s: &Schedule, master_seed: u64) -> Vec<BTreeMap<NodeId, Option<NodeId>>> {
    let d = s.d();
    let two_d = 2 * d;
    let mut nodes: BTreeMap<NodeId, Node> = BTreeMap::new();
    let mut mailbox: BTreeMap<NodeId, Vec<Message>> = BTreeMap::new();
    let mut history = Vec::new();

    for r in 1..=s.horizon() {
        let snap = s.snapshot(r).unwrap();
        // Update membership.
        nodes.retain(|id, _| snap.contains(*id));
        mailbox.retain(|id, _| snap.contains(*id));
        for v in snap.vertices() {
            nodes.entry(*v).or_insert_with(|| {
                let next_boundary = if (r - 1) % two_d == 0 {
                    r
                } else {
                    r + two_d - (r - 1) % two_d
                };
                Node {
                    leader: None,
                    is_leader: false,
                    passive: true,
                    armed_or_competing: false,
                    p: 0,
                    my_rank: None,
                    best_rank: None,
                    beep: None,
                    entry: r,
                    anchor: next_boundary,
                    rng: node_stream(master_seed, v.0),
                }
            });
        }

        // Compute.
        let pos = (r - 1) % two_d;
        let mut sent: BTreeMap<NodeId, Message> = BTreeMap::new();
        let mut snapshot_states = BTreeMap::new();
        for (id, node) in nodes.iter_mut() {
            let inbox = mailbox.remove(id).unwrap_or_default();

            for m in &inbox {
                if let Message::Beep(b) = m {
                    let replace = match node.beep {
                        None => true,
                        Some(cur) => {
                            b.timestamp > cur.timestamp
                                || (b.timestamp == cur.timestamp && b.leader < cur.leader)
                        }
                    };
                    if replace {
                        node.beep = Some(*b);
                    }
                }
            }
            if node.beep.is_some_and(|b| r - b.timestamp > d) {
                node.beep = None;
            }

            if !node.is_leader {
                if let Some(b) = node.beep {
                    node.leader = Some(b.leader);
                    node.passive = false;
                    node.armed_or_competing = false;
                    node.p = 0;
                    node.my_rank = None;
                    node.best_rank = None;
                }
            }

            if node.is_leader {
                sent.insert(
                    *id,
                    Message::Beep(Beep {
                        leader: *id,
                        timestamp: r,
                    }),
                );
                snapshot_states.insert(*id, node.leader);
                continue;
            }

            if node.leader.is_some() && node.beep.is_none() {
                node.leader = None;
                node.armed_or_competing = true;
                node.p = 0;
                node.my_rank = None;
                node.best_rank = None;
            }

            if pos == 0 {
                if node.passive && r >= node.anchor + two_d {
                    node.passive = false;
                    node.armed_or_competing = true;
                }
                if node.armed_or_competing {
                    if node.my_rank.is_some() {
                        node.p += 1;
                    }
                    let rk = draw(node.p, *id, &mut node.rng);
                    node.my_rank = Some(rk);
                    node.best_rank = Some(rk);
                } else {
                    node.best_rank = None;
                }
            }

            if (node.passive || node.armed_or_competing) && pos >= 1 && pos <= d {
                for m in &inbox {
                    if let Message::Rank(rk) = m {
                        node.best_rank = Some(match node.best_rank {
                            None => *rk,
                            Some(cur) => min_rank(cur, *rk),
                        });
                    }
                }
            }

            if pos == d
                && node.armed_or_competing
                && node.my_rank.is_some()
                && node.my_rank == node.best_rank
            {
                node.is_leader = true;
                node.leader = Some(*id);
                sent.insert(
                    *id,
                    Message::Beep(Beep {
                        leader: *id,
                        timestamp: r,
                    }),
                );
                snapshot_states.insert(*id, node.leader);
                continue;
            }

            if let Some(b) = node.beep {
                sent.insert(*id, Message::Beep(b));
            } else if pos < d {
                if let Some(best) = node.best_rank {
                    sent.insert(*id, Message::Rank(best));
                }
            }
            snapshot_states.insert(*id, node.leader);
        }
        history.push(snapshot_states);

        // Communicate.
        for (a, b) in snap.edges() {
            if let Some(m) = sent.get(a) {
                mailbox.entry(*b).or_default().push(*m);
            }
            if let Some(m) = sent.get(b) {
                mailbox.entry(*a).or_default().push(*m);
            }
        }
    }
    history
}
