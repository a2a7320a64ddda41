//! Trace oracle.
//!
//! Pure checks over complete traces for the correctness conditions a dynamic
//! leader election must satisfy — agreement, validity, stability, bounded
//! termination — plus structural invariants (unique race winner per phase,
//! broadcast bit budget, beep freshness). Each reported [`Violation`] cites
//! the round and nodes involved so it can be replayed.

use serde::Serialize;
use thiserror::Error;

use crate::engine::Trace;
use crate::protocol::{bit_budget, Message, NodeId, Status};

/// Classes of checkable misbehavior.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ViolationKind {
    /// Two nodes with set leader variables disagree in the same round.
    Agreement,
    /// A node adopted a leader that was not recently a leader.
    Validity,
    /// A node dropped a leader that was still in the network.
    Stability,
    /// A node stayed leaderless past the termination bound while alive.
    Termination,
    /// More than one node won the same phase's rank race.
    Uniqueness,
    /// A broadcast exceeded the per-round bit budget.
    Budget,
    /// A stale beep was rebroadcast.
    Freshness,
}

impl std::fmt::Display for ViolationKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            ViolationKind::Agreement => "agreement",
            ViolationKind::Validity => "validity",
            ViolationKind::Stability => "stability",
            ViolationKind::Termination => "termination",
            ViolationKind::Uniqueness => "uniqueness",
            ViolationKind::Budget => "budget",
            ViolationKind::Freshness => "freshness",
        };
        f.write_str(s)
    }
}

/// One reproducible finding: replaying the cited rounds of the trace
/// exhibits the problem.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub kind: ViolationKind,
    pub round: u32,
    pub nodes: Vec<NodeId>,
    pub evidence: String,
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{} violation at round {}: {}",
            self.kind, self.round, self.evidence
        )
    }
}

#[derive(Debug, Error)]
pub enum OracleError {
    #[error("invalid oracle parameter: {reason}")]
    Parameter { reason: String },
}

/// At most one leader: any two present nodes with set leader variables must
/// agree. One violation is reported per offending round.
pub fn check_agreement(trace: &Trace) -> Vec<Violation> {
    let mut out = Vec::new();
    for rec in trace.rounds() {
        let mut first: Option<(NodeId, NodeId)> = None;
        for node in &rec.nodes {
            let Some(leader) = node.state.leader else {
                continue;
            };
            match first {
                None => first = Some((node.id, leader)),
                Some((witness, agreed)) if agreed != leader => {
                    out.push(Violation {
                        kind: ViolationKind::Agreement,
                        round: rec.round,
                        nodes: vec![witness, node.id],
                        evidence: format!(
                            "node {witness} follows {agreed} while node {} follows {leader}",
                            node.id
                        ),
                    });
                    break;
                }
                Some(_) => {}
            }
        }
    }
    out
}

/// Validity: a node adopting a distinct leader `v` at round `r` requires `v`
/// to have had itself as leader at some round of `[r - d - 1, r]`, both ends
/// inclusive.
pub fn check_validity(trace: &Trace, d: u32) -> Vec<Violation> {
    let mut out = Vec::new();
    for rec in trace.rounds() {
        let r = rec.round;
        for node in &rec.nodes {
            let Some(v) = node.state.leader else { continue };
            if v == node.id {
                continue;
            }
            let prev = if r > 1 {
                trace.state(r - 1, node.id)
            } else {
                None
            };
            if prev.map(|s| s.leader) == Some(Some(v)) {
                continue; // not an adoption event
            }
            let lo = r.saturating_sub(d + 1).max(1);
            let witnessed =
                (lo..=r).any(|q| trace.state(q, v).is_some_and(|s| s.leader == Some(v)));
            if !witnessed {
                out.push(Violation {
                    kind: ViolationKind::Validity,
                    round: r,
                    nodes: vec![node.id, v],
                    evidence: format!(
                        "node {} adopted {v}, which was not a leader in rounds {lo}..={r}",
                        node.id
                    ),
                });
            }
        }
    }
    out
}

/// Stability: a node may stop following `v` only once `v` has left the
/// network.
pub fn check_stability(trace: &Trace) -> Vec<Violation> {
    let mut out = Vec::new();
    for rec in trace.rounds() {
        let r = rec.round;
        if r == 1 {
            continue;
        }
        for node in &rec.nodes {
            let Some(prev) = trace.state(r - 1, node.id) else {
                continue;
            };
            let Some(v) = prev.leader else { continue };
            if node.state.leader == Some(v) {
                continue;
            }
            if trace.schedule().is_alive(v, r) {
                out.push(Violation {
                    kind: ViolationKind::Stability,
                    round: r,
                    nodes: vec![node.id, v],
                    evidence: format!(
                        "node {} dropped leader {v} although {v} is still present at round {r}",
                        node.id
                    ),
                });
            }
        }
    }
    out
}

/// Termination: every maximal leaderless episode of a node that stays in the
/// network for `bound_rounds` more rounds must resolve within the bound.
pub fn check_termination(trace: &Trace, bound_rounds: u32) -> Vec<Violation> {
    let mut out = Vec::new();
    let horizon = trace.schedule().horizon();
    let mut open: std::collections::BTreeMap<NodeId, u32> = Default::default();
    let mut flag = |node: NodeId, start: u32, resolved: Option<u32>| {
        let deadline = start.saturating_add(bound_rounds);
        if deadline > horizon {
            return; // the bound is not observable within this trace
        }
        if !trace.schedule().present_throughout(node, start, deadline) {
            return; // departed mid-episode
        }
        if resolved.map(|r| r > deadline).unwrap_or(true) {
            out.push(Violation {
                kind: ViolationKind::Termination,
                round: deadline,
                nodes: vec![node],
                evidence: format!(
                    "node {node} has been leaderless since round {start}, past the bound of {bound_rounds} rounds"
                ),
            });
        }
    };
    for rec in trace.rounds() {
        for node in &rec.nodes {
            match (node.state.leader, open.contains_key(&node.id)) {
                (None, false) => {
                    open.insert(node.id, rec.round);
                }
                (Some(_), true) => {
                    let start = open.remove(&node.id).expect("open episode");
                    flag(node.id, start, Some(rec.round));
                }
                _ => {}
            }
        }
    }
    for (node, start) in open {
        flag(node, start, None);
    }
    out.sort_by_key(|v| (v.round, v.nodes[0]));
    out
}

/// Per phase, at most one competitor may finish the race still holding its
/// own rank as the minimum while surviving the race window.
pub fn check_unique_candidate(trace: &Trace) -> Vec<Violation> {
    let mut out = Vec::new();
    let d = trace.config().d;
    let clock = trace.config().clock();
    let horizon = trace.schedule().horizon();
    let mut phase = 0;
    loop {
        let start = clock.phase_start(phase);
        let verdict = start + d;
        if verdict > horizon {
            break;
        }
        let mut winners = Vec::new();
        if let Some(rec) = trace.round(start) {
            for node in &rec.nodes {
                let drew = node.state.status == Status::Active
                    && node.state.my_rank.is_some_and(|rk| rk.owner == node.id);
                if !drew {
                    continue;
                }
                if !trace.schedule().present_throughout(node.id, start, verdict) {
                    continue;
                }
                let Some(at_verdict) = trace.state(verdict, node.id) else {
                    continue;
                };
                let my = node.state.my_rank;
                if at_verdict.my_rank == my && at_verdict.best_rank == my {
                    winners.push(node.id);
                }
            }
        }
        if winners.len() >= 2 {
            out.push(Violation {
                kind: ViolationKind::Uniqueness,
                round: verdict,
                nodes: winners.clone(),
                evidence: format!(
                    "{} nodes ({:?}) finished phase {phase} holding their own rank as the minimum",
                    winners.len(),
                    winners
                ),
            });
        }
        phase += 1;
    }
    out
}

/// Every broadcast must encode within the per-round bit budget.
pub fn check_budget(trace: &Trace) -> Vec<Violation> {
    let mut out = Vec::new();
    let bits = trace.config().uniform_bits;
    let budget = bit_budget(bits);
    for rec in trace.rounds() {
        for node in &rec.nodes {
            let Some(msg) = &node.outbound else { continue };
            let over = msg.encoded_bits(bits) > budget || msg.encode(bits).is_err();
            if over {
                out.push(Violation {
                    kind: ViolationKind::Budget,
                    round: rec.round,
                    nodes: vec![node.id],
                    evidence: format!(
                        "broadcast of {} bits exceeds the budget of {budget} bits",
                        msg.encoded_bits(bits)
                    ),
                });
            }
        }
    }
    out
}

/// No node may rebroadcast a beep older than `d` rounds.
pub fn check_freshness(trace: &Trace) -> Vec<Violation> {
    let mut out = Vec::new();
    let d = trace.config().d;
    for rec in trace.rounds() {
        for node in &rec.nodes {
            if let Some(Message::Beep(b)) = &node.outbound {
                if !b.is_fresh(rec.round, d) {
                    out.push(Violation {
                        kind: ViolationKind::Freshness,
                        round: rec.round,
                        nodes: vec![node.id],
                        evidence: format!(
                            "node {} rebroadcast a beep stamped {} at round {}",
                            node.id, b.timestamp, rec.round
                        ),
                    });
                }
            }
        }
    }
    out
}

/// Runs every safety check, plus the termination check when a bound is
/// given. Results are concatenated in a fixed order.
pub fn check_all(trace: &Trace, termination_bound: Option<u32>) -> Vec<Violation> {
    let mut out = check_agreement(trace);
    out.extend(check_validity(trace, trace.config().d));
    out.extend(check_stability(trace));
    out.extend(check_unique_candidate(trace));
    out.extend(check_budget(trace));
    out.extend(check_freshness(trace));
    if let Some(bound) = termination_bound {
        out.extend(check_termination(trace, bound));
    }
    out
}

/// Potential of an election cohort at a phase start, relative to a reference
/// competitor: `sum over alive cohort members b of 2^(p_b) / 2^(p_ref)`.
///
/// With the reference holding the maximal rate exponent, the value starts at
/// most `|cohort|` and never increases across phases of one election, which
/// is the quantity that bounds how long an adversary can keep elections
/// failing.
pub fn compute_potential(
    trace: &Trace,
    phase_start_round: u32,
    reference: NodeId,
    cohort: &[NodeId],
) -> Result<f64, OracleError> {
    let Some(ref_state) = trace.state(phase_start_round, reference) else {
        return Err(OracleError::Parameter {
            reason: format!(
                "reference node {reference} is not present at round {phase_start_round}"
            ),
        });
    };
    if ref_state.status != Status::Active {
        return Err(OracleError::Parameter {
            reason: format!(
                "reference node {reference} is {} rather than active at round {phase_start_round}",
                ref_state.status
            ),
        });
    }
    let p_ref = f64::from(ref_state.phases_active);
    let mut sum = 0.0;
    for b in cohort {
        if let Some(state) = trace.state(phase_start_round, *b) {
            sum += (f64::from(state.phases_active) - p_ref).exp2();
        }
    }
    Ok(sum)
}

/// One point of the no-leader curve over a collection of adversarial runs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CurvePoint {
    /// Epoch index; the probed round is `i * d`.
    pub i: u32,
    /// Fraction of runs in which some node alive through round `i * d` is
    /// still leaderless at that round.
    pub empirical: f64,
}

/// Analytical floor enforced by the adversarial schedule: against any
/// correct randomized algorithm, the probability that some surviving node is
/// still leaderless at round `i * d` is at least `2^-(2i + 1)`.
pub fn no_leader_floor(i: u32) -> f64 {
    2f64.powi(-(2 * i as i32 + 1))
}

/// Empirical no-leader probabilities at epoch boundaries, over seeded runs.
pub fn lower_bound_curve(traces: &[Trace], d: u32) -> Vec<CurvePoint> {
    let max_i = traces
        .iter()
        .map(|t| t.schedule().horizon() / d)
        .min()
        .unwrap_or(0);
    let mut points = vec![CurvePoint {
        i: 0,
        empirical: 1.0,
    }];
    for i in 1..=max_i {
        let round = i * d;
        let hits = traces
            .iter()
            .filter(|t| {
                t.round(round).into_iter().any(|rec| {
                    rec.nodes.iter().any(|n| {
                        n.state.leader.is_none() && t.schedule().present_throughout(n.id, 1, round)
                    })
                })
            })
            .count();
        points.push(CurvePoint {
            i,
            empirical: hits as f64 / traces.len().max(1) as f64,
        });
    }
    points
}
