//! Synchronous round engine.
//!
//! Each round unfolds as three events: the network is updated to the
//! committed snapshot (entering nodes are created, departed nodes dropped),
//! every present node performs its local computation, and the broadcasts are
//! delivered along the round's edges. A message broadcast in round `r` is
//! consumed at its receivers' round `r + 1` computation, so information moves
//! one hop per round, matching the flooding bound the schedule was verified
//! against.
//!
//! Runs are fully determined by `(schedule, master_seed)`: per-node RNG
//! streams are keyed by node id, never by arrival order, and all iteration
//! in the round loop is in ascending id order.

use std::collections::{BTreeMap, HashMap};
use std::path::Path;
use std::sync::Arc;

use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::protocol::{self, Message, NodeId, NodeState, ProtocolConfig, ProtocolError, Status};
use crate::rng::node_stream;
use crate::schedule::{
    verify_comm_diameter, FloodingCounterexample, GraphSnapshot, Schedule, ScheduleError,
};

#[derive(Debug, Error)]
pub enum EngineError {
    /// The schedule failed the flooding check; run with
    /// [`Runner::new_unchecked`] to override for adversarial experiments
    /// whose construction guarantees the bound.
    #[error("schedule violates the communication-diameter guarantee: {0}")]
    UnverifiedSchedule(FloodingCounterexample),
    #[error(transparent)]
    Protocol(#[from] ProtocolError),
    #[error(transparent)]
    Schedule(#[from] ScheduleError),
    #[error("delivery sender {sender} is not a vertex of round {round}")]
    SenderNotPresent { sender: NodeId, round: u32 },
    #[error("trace parse error at line {line}: {reason}")]
    TraceParse { line: usize, reason: String },
}

/// Per-node record of one round: post-computation state and the broadcast.
#[derive(Debug, Clone, PartialEq)]
pub struct NodeRecord {
    pub id: NodeId,
    pub state: NodeState,
    pub outbound: Option<Message>,
}

/// Everything that happened in one round, nodes in ascending id order.
#[derive(Debug, Clone, PartialEq)]
pub struct RoundRecord {
    pub round: u32,
    pub nodes: Vec<NodeRecord>,
    /// Inboxes consumed this round; recorded only when requested.
    pub inboxes: Option<Vec<(NodeId, Vec<Message>)>>,
}

/// Complete, append-only record of a run.
#[derive(Debug, Clone, PartialEq)]
pub struct Trace {
    schedule: Arc<Schedule>,
    cfg: ProtocolConfig,
    master_seed: u64,
    rounds: Vec<RoundRecord>,
}

impl Trace {
    /// Assembles a trace from externally produced records (a parsed trace
    /// file, or a hand-built history for oracle tests).
    pub fn from_records(
        schedule: Arc<Schedule>,
        cfg: ProtocolConfig,
        master_seed: u64,
        rounds: Vec<RoundRecord>,
    ) -> Trace {
        Trace {
            schedule,
            cfg,
            master_seed,
            rounds,
        }
    }

    pub fn schedule(&self) -> &Schedule {
        &self.schedule
    }

    pub fn config(&self) -> &ProtocolConfig {
        &self.cfg
    }

    pub fn master_seed(&self) -> u64 {
        self.master_seed
    }

    pub fn rounds(&self) -> &[RoundRecord] {
        &self.rounds
    }

    pub fn round(&self, r: u32) -> Option<&RoundRecord> {
        self.rounds.get((r - 1) as usize)
    }

    /// Post-computation state of `id` at round `r`, if it was present.
    pub fn state(&self, r: u32, id: NodeId) -> Option<&NodeState> {
        let rec = self.round(r)?;
        let i = rec.nodes.binary_search_by_key(&id, |n| n.id).ok()?;
        Some(&rec.nodes[i].state)
    }

    pub fn outbound(&self, r: u32, id: NodeId) -> Option<&Message> {
        let rec = self.round(r)?;
        let i = rec.nodes.binary_search_by_key(&id, |n| n.id).ok()?;
        rec.nodes[i].outbound.as_ref()
    }
}

/// Delivers one round of broadcasts along the snapshot's edges.
///
/// Every vertex receives the multiset of messages sent by its round
/// neighbors; senders get no acknowledgement and never their own broadcast
/// back. Receivers learn sender identity only from message content.
pub fn deliver(
    snapshot: &GraphSnapshot,
    outbound: &BTreeMap<NodeId, Message>,
) -> Result<BTreeMap<NodeId, Vec<Message>>, EngineError> {
    for sender in outbound.keys() {
        if !snapshot.contains(*sender) {
            return Err(EngineError::SenderNotPresent {
                sender: *sender,
                round: snapshot.round(),
            });
        }
    }
    let mut inboxes: BTreeMap<NodeId, Vec<Message>> = snapshot
        .vertices()
        .iter()
        .map(|v| (*v, Vec::new()))
        .collect();
    for v in snapshot.vertices() {
        let inbox = inboxes.get_mut(v).expect("vertex inbox");
        for (a, b) in snapshot.edges() {
            let peer = if a == v {
                Some(*b)
            } else if b == v {
                Some(*a)
            } else {
                None
            };
            if let Some(peer) = peer {
                if let Some(msg) = outbound.get(&peer) {
                    inbox.push(*msg);
                }
            }
        }
    }
    Ok(inboxes)
}

struct RoundTopology {
    /// Present slots, ascending by id.
    verts: Vec<u32>,
    /// CSR adjacency: `targets[offsets[i]..offsets[i+1]]` are the slots
    /// adjacent to `verts[i]`.
    offsets: Vec<u32>,
    targets: Vec<u32>,
}

/// A schedule prepared for repeated seeded runs.
///
/// Construction verifies the communication-diameter guarantee once and
/// precomputes per-round adjacency, so campaigns over many seeds amortize
/// both costs.
pub struct Runner {
    schedule: Arc<Schedule>,
    cfg: ProtocolConfig,
    ids: Vec<NodeId>,
    rounds: Vec<RoundTopology>,
}

impl Runner {
    /// Prepares a runner, refusing schedules that fail the flooding check.
    pub fn new(schedule: Arc<Schedule>) -> Result<Runner, EngineError> {
        verify_comm_diameter(&schedule).map_err(EngineError::UnverifiedSchedule)?;
        Ok(Self::new_unchecked(schedule))
    }

    /// Prepares a runner without the flooding check. Intended for
    /// adversarial schedules whose construction guarantees the bound, and
    /// for deliberately broken schedules in oracle tests.
    pub fn new_unchecked(schedule: Arc<Schedule>) -> Runner {
        let cfg = ProtocolConfig::new(schedule.d());
        let slots: HashMap<NodeId, u32> = schedule
            .lifespans()
            .enumerate()
            .map(|(i, (id, _))| (id, i as u32))
            .collect();
        let ids: Vec<NodeId> = schedule.lifespans().map(|(id, _)| id).collect();
        let mut rounds = Vec::with_capacity(schedule.horizon() as usize);
        for r in 1..=schedule.horizon() {
            let snap = schedule.snapshot_unchecked(r);
            let verts: Vec<u32> = snap.vertices().iter().map(|v| slots[v]).collect();
            let pos: HashMap<NodeId, usize> = snap
                .vertices()
                .iter()
                .enumerate()
                .map(|(i, v)| (*v, i))
                .collect();
            let mut degree = vec![0u32; verts.len()];
            for (a, b) in snap.edges() {
                degree[pos[a]] += 1;
                degree[pos[b]] += 1;
            }
            let mut offsets = Vec::with_capacity(verts.len() + 1);
            let mut acc = 0;
            offsets.push(0);
            for d in &degree {
                acc += d;
                offsets.push(acc);
            }
            let mut cursor: Vec<u32> = offsets[..verts.len()].to_vec();
            let mut targets = vec![0u32; acc as usize];
            for (a, b) in snap.edges() {
                let (ia, ib) = (pos[a], pos[b]);
                targets[cursor[ia] as usize] = verts[ib];
                cursor[ia] += 1;
                targets[cursor[ib] as usize] = verts[ia];
                cursor[ib] += 1;
            }
            rounds.push(RoundTopology {
                verts,
                offsets,
                targets,
            });
        }
        Runner {
            schedule,
            cfg,
            ids,
            rounds,
        }
    }

    /// Overrides the width of the uniform field in rank messages.
    pub fn with_uniform_bits(mut self, bits: u8) -> Runner {
        self.cfg.uniform_bits = bits;
        self
    }

    pub fn schedule(&self) -> &Arc<Schedule> {
        &self.schedule
    }

    pub fn config(&self) -> &ProtocolConfig {
        &self.cfg
    }

    /// Executes one seeded run.
    pub fn run(&self, master_seed: u64) -> Result<Trace, EngineError> {
        self.run_with(master_seed, false)
    }

    /// Executes one seeded run, keeping every consumed inbox in the trace.
    pub fn run_recording_inboxes(&self, master_seed: u64) -> Result<Trace, EngineError> {
        self.run_with(master_seed, true)
    }

    fn run_with(&self, master_seed: u64, record_inboxes: bool) -> Result<Trace, EngineError> {
        let slot_count = self.ids.len();
        let mut states: Vec<Option<NodeState>> = vec![None; slot_count];
        let mut rngs: Vec<Option<ChaCha8Rng>> = vec![None; slot_count];
        let mut inboxes: Vec<Vec<Message>> = vec![Vec::new(); slot_count];
        let mut next_inboxes: Vec<Vec<Message>> = vec![Vec::new(); slot_count];
        let mut outbound: Vec<Option<Message>> = vec![None; slot_count];
        let mut alive: Vec<bool> = vec![false; slot_count];

        let mut trace_rounds = Vec::with_capacity(self.schedule.horizon() as usize);
        for r in 1..=self.schedule.horizon() {
            let topo = &self.rounds[(r - 1) as usize];

            // Network update: departures first, then arrivals.
            let mut present = vec![false; slot_count];
            for &slot in &topo.verts {
                present[slot as usize] = true;
            }
            for slot in 0..slot_count {
                if alive[slot] && !present[slot] {
                    states[slot] = None;
                    rngs[slot] = None;
                    inboxes[slot].clear();
                }
                alive[slot] = present[slot];
            }
            for &slot in &topo.verts {
                let slot = slot as usize;
                if states[slot].is_none() {
                    let id = self.ids[slot];
                    states[slot] = Some(protocol::on_enter(id, r, &self.cfg));
                    rngs[slot] = Some(node_stream(master_seed, id.0));
                }
            }

            // Local computation over sealed inboxes.
            let mut nodes = Vec::with_capacity(topo.verts.len());
            let mut recorded_inboxes = record_inboxes.then(Vec::new);
            for &slot in &topo.verts {
                let slot = slot as usize;
                let state = states[slot].as_ref().expect("alive node has state");
                let rng = rngs[slot].as_mut().expect("alive node has rng");
                let (next, out) = protocol::step(state, r, &inboxes[slot], rng, &self.cfg)?;
                if let Some(rec) = recorded_inboxes.as_mut() {
                    rec.push((self.ids[slot], inboxes[slot].clone()));
                }
                inboxes[slot].clear();
                states[slot] = Some(next);
                outbound[slot] = out;
                nodes.push(NodeRecord {
                    id: self.ids[slot],
                    state: next,
                    outbound: out,
                });
            }

            // Communication: broadcasts land in round r + 1 inboxes.
            for (i, &slot) in topo.verts.iter().enumerate() {
                if let Some(msg) = outbound[slot as usize] {
                    let lo = topo.offsets[i] as usize;
                    let hi = topo.offsets[i + 1] as usize;
                    for &t in &topo.targets[lo..hi] {
                        next_inboxes[t as usize].push(msg);
                    }
                }
                outbound[slot as usize] = None;
            }
            std::mem::swap(&mut inboxes, &mut next_inboxes);

            trace_rounds.push(RoundRecord {
                round: r,
                nodes,
                inboxes: recorded_inboxes,
            });
        }
        Ok(Trace {
            schedule: Arc::clone(&self.schedule),
            cfg: self.cfg,
            master_seed,
            rounds: trace_rounds,
        })
    }
}

/// One-shot convenience: verify, prepare, and run a single seed.
pub fn run(schedule: &Schedule, master_seed: u64) -> Result<Trace, EngineError> {
    Runner::new(Arc::new(schedule.clone()))?.run(master_seed)
}

/// A maximal span of rounds a node spent without a leader.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Episode {
    pub node: NodeId,
    /// First round of the span.
    pub start_round: u32,
    /// First round at which the leader variable is set again, if the node
    /// lived to see it.
    pub resolved_round: Option<u32>,
    /// Last round the node was observed during the span.
    pub last_seen: u32,
}

impl Episode {
    /// Rounds from the start of the span to its resolution.
    pub fn length(&self) -> Option<u32> {
        self.resolved_round.map(|r| r - self.start_round)
    }
}

/// Outcome of one phase that carried an election attempt.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PhaseOutcome {
    pub phase: u32,
    pub start_round: u32,
    /// The node that elected itself during the phase, if any.
    pub elected: Option<NodeId>,
    /// True when a node elected itself and stayed until the phase end.
    pub successful: bool,
}

/// Potential-function sample at one phase start (see
/// [`crate::oracle::compute_potential`]).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PsiSample {
    pub phase: u32,
    pub start_round: u32,
    pub reference: NodeId,
    pub cohort_size: u32,
    pub value: f64,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct MessageCounts {
    pub total: u64,
    pub ranks: u64,
    pub beeps: u64,
}

/// Per-run summary extracted from a trace.
#[derive(Debug, Clone, Serialize)]
pub struct RunStats {
    pub episodes: Vec<Episode>,
    pub phases: Vec<PhaseOutcome>,
    pub psi: Vec<PsiSample>,
    pub messages: MessageCounts,
}

impl RunStats {
    /// Lengths of all resolved leaderless episodes.
    pub fn termination_lengths(&self) -> Vec<u32> {
        self.episodes.iter().filter_map(|e| e.length()).collect()
    }

    pub fn unresolved_episodes(&self) -> usize {
        self.episodes
            .iter()
            .filter(|e| e.resolved_round.is_none())
            .count()
    }

    /// For each completed election (a run of consecutive attempt phases
    /// ending in a success), the number of phases it took.
    pub fn phases_to_success(&self) -> Vec<u32> {
        let mut out = Vec::new();
        let mut span = 0u32;
        let mut prev_phase: Option<u32> = None;
        for p in &self.phases {
            if prev_phase.is_some_and(|q| p.phase != q + 1) {
                span = 0;
            }
            span += 1;
            if p.successful {
                out.push(span);
                span = 0;
            }
            prev_phase = Some(p.phase);
        }
        out
    }
}

/// Derives the run summary: leaderless episodes per node, phase outcomes for
/// every phase that carried an election attempt, potential samples, and
/// message counts.
///
/// A phase is successful when a node elected itself during it and stayed in
/// the network through the phase's last round; phases where no node competes
/// (a settled leader quietly beeping) are not classified.
pub fn summarize(trace: &Trace) -> RunStats {
    let d = trace.cfg.d;
    let clock = trace.cfg.clock();
    let horizon = trace.schedule.horizon();

    // Episodes. Track per-node spans across the whole trace.
    let mut open: BTreeMap<NodeId, (u32, u32)> = BTreeMap::new();
    let mut episodes = Vec::new();
    let mut messages = MessageCounts::default();
    for rec in &trace.rounds {
        for node in &rec.nodes {
            match node.outbound {
                Some(Message::Rank(_)) => {
                    messages.total += 1;
                    messages.ranks += 1;
                }
                Some(Message::Beep(_)) => {
                    messages.total += 1;
                    messages.beeps += 1;
                }
                None => {}
            }
            match (node.state.leader, open.get_mut(&node.id)) {
                (None, None) => {
                    open.insert(node.id, (rec.round, rec.round));
                }
                (None, Some(span)) => span.1 = rec.round,
                (Some(_), Some(_)) => {
                    let (start, _) = open.remove(&node.id).expect("open span");
                    episodes.push(Episode {
                        node: node.id,
                        start_round: start,
                        resolved_round: Some(rec.round),
                        last_seen: rec.round,
                    });
                }
                (Some(_), None) => {}
            }
        }
        // Spans of nodes that departed this round stay open until flushed.
    }
    for (node, (start, last)) in open {
        episodes.push(Episode {
            node,
            start_round: start,
            resolved_round: None,
            last_seen: last,
        });
    }
    episodes.sort_by_key(|e| (e.start_round, e.node));

    // Phase outcomes and potential samples.
    let mut phases = Vec::new();
    let mut psi = Vec::new();
    let full_phases = horizon / (2 * d);
    for phase in 0..full_phases {
        let start = clock.phase_start(phase);
        let end = start + 2 * d - 1;
        let Some(start_rec) = trace.round(start) else {
            break;
        };
        let cohort: Vec<NodeId> = start_rec
            .nodes
            .iter()
            .filter(|n| n.state.status == Status::Active && n.state.my_rank.is_some())
            .map(|n| n.id)
            .collect();
        if cohort.is_empty() {
            continue;
        }
        if let Some(reference) = cohort
            .iter()
            .max_by_key(|id| {
                let p = trace
                    .state(start, **id)
                    .map(|s| s.phases_active)
                    .unwrap_or(0);
                (p, std::cmp::Reverse(**id))
            })
            .copied()
        {
            if let Ok(value) = crate::oracle::compute_potential(trace, start, reference, &cohort) {
                psi.push(PsiSample {
                    phase,
                    start_round: start,
                    reference,
                    cohort_size: cohort.len() as u32,
                    value,
                });
            }
        }
        let mut elected = None;
        for r in start..=end {
            let Some(rec) = trace.round(r) else { break };
            for node in &rec.nodes {
                if node.state.status == Status::Leader {
                    let was_leader = r > 1
                        && trace
                            .state(r - 1, node.id)
                            .is_some_and(|s| s.status == Status::Leader);
                    if !was_leader && elected.is_none() {
                        elected = Some((node.id, r));
                    }
                }
            }
        }
        let successful = elected
            .map(|(id, _)| trace.schedule.is_alive(id, end))
            .unwrap_or(false);
        phases.push(PhaseOutcome {
            phase,
            start_round: start,
            elected: elected.map(|(id, _)| id),
            successful,
        });
    }

    RunStats {
        episodes,
        phases,
        psi,
        messages,
    }
}

pub(crate) const TRACE_FORMAT: &str = "dynelect-trace/v1";

#[derive(Serialize, Deserialize)]
struct TraceHeader {
    format: String,
    master_seed: u64,
    n: u32,
    d: u32,
    horizon: u32,
    uniform_bits: u8,
    generator: String,
    schedule_seed: u64,
}

#[derive(Serialize, Deserialize)]
struct TraceLine {
    round: u32,
    node: u64,
    status: Status,
    leader: Option<u64>,
    p: u16,
    my_rank: Option<String>,
    best_rank: Option<String>,
    beep: Option<String>,
    entry: u32,
    anchor: u32,
    outbound: Option<String>,
}

/// Renders a trace in the line-delimited text form: a header record, then
/// one record per (round, node) with the state summary and the outbound
/// message in the stable binary encoding, as hex.
pub fn serialize_trace(trace: &Trace) -> String {
    let bits = trace.cfg.uniform_bits;
    let hex_of = |m: &Message| hex::encode(m.encode(bits).expect("engine message encodes"));
    let mut out = String::new();
    let header = TraceHeader {
        format: TRACE_FORMAT.to_string(),
        master_seed: trace.master_seed,
        n: trace.schedule.n(),
        d: trace.schedule.d(),
        horizon: trace.schedule.horizon(),
        uniform_bits: bits,
        generator: trace.schedule.generator().to_string(),
        schedule_seed: trace.schedule.seed(),
    };
    out.push_str(&serde_json::to_string(&header).expect("header serializes"));
    out.push('\n');
    for rec in &trace.rounds {
        for node in &rec.nodes {
            let line = TraceLine {
                round: rec.round,
                node: node.id.0,
                status: node.state.status,
                leader: node.state.leader.map(|l| l.0),
                p: node.state.phases_active,
                my_rank: node.state.my_rank.map(|rk| hex_of(&Message::Rank(rk))),
                best_rank: node.state.best_rank.map(|rk| hex_of(&Message::Rank(rk))),
                beep: node.state.freshest_beep.map(|b| hex_of(&Message::Beep(b))),
                entry: node.state.entry_round,
                anchor: node.state.passive_anchor,
                outbound: node.outbound.as_ref().map(hex_of),
            };
            out.push_str(&serde_json::to_string(&line).expect("line serializes"));
            out.push('\n');
        }
    }
    out
}

/// Parses a trace file against the schedule it was recorded on.
pub fn parse_trace(text: &str, schedule: Arc<Schedule>) -> Result<Trace, EngineError> {
    let mut lines = text.lines().enumerate();
    let (_, header_line) = lines.next().ok_or(EngineError::TraceParse {
        line: 1,
        reason: "empty file".into(),
    })?;
    let header: TraceHeader =
        serde_json::from_str(header_line).map_err(|e| EngineError::TraceParse {
            line: 1,
            reason: e.to_string(),
        })?;
    if header.format != TRACE_FORMAT {
        return Err(EngineError::TraceParse {
            line: 1,
            reason: format!("unsupported format tag {:?}", header.format),
        });
    }
    if header.n != schedule.n() || header.d != schedule.d() || header.horizon != schedule.horizon()
    {
        return Err(EngineError::TraceParse {
            line: 1,
            reason: "trace header does not match the schedule".into(),
        });
    }
    let bits = header.uniform_bits;
    let mut cfg = ProtocolConfig::new(header.d);
    cfg.uniform_bits = bits;

    let decode_msg = |line: usize, s: &str| -> Result<Message, EngineError> {
        let bytes = hex::decode(s).map_err(|e| EngineError::TraceParse {
            line,
            reason: e.to_string(),
        })?;
        Message::decode(&bytes, bits).map_err(|e| EngineError::TraceParse {
            line,
            reason: e.to_string(),
        })
    };

    let mut rounds: Vec<RoundRecord> = Vec::with_capacity(header.horizon as usize);
    for (idx, line) in lines {
        if line.is_empty() {
            continue;
        }
        let lineno = idx + 1;
        let rec: TraceLine = serde_json::from_str(line).map_err(|e| EngineError::TraceParse {
            line: lineno,
            reason: e.to_string(),
        })?;
        let unrank = |s: &Option<String>| -> Result<Option<crate::protocol::Rank>, EngineError> {
            s.as_deref()
                .map(|h| match decode_msg(lineno, h)? {
                    Message::Rank(rk) => Ok(rk),
                    Message::Beep(_) => Err(EngineError::TraceParse {
                        line: lineno,
                        reason: "expected a rank encoding".into(),
                    }),
                })
                .transpose()
        };
        let unbeep = |s: &Option<String>| -> Result<Option<crate::protocol::Beep>, EngineError> {
            s.as_deref()
                .map(|h| match decode_msg(lineno, h)? {
                    Message::Beep(b) => Ok(b),
                    Message::Rank(_) => Err(EngineError::TraceParse {
                        line: lineno,
                        reason: "expected a beep encoding".into(),
                    }),
                })
                .transpose()
        };
        let state = NodeState {
            id: NodeId(rec.node),
            status: rec.status,
            leader: rec.leader.map(NodeId),
            phases_active: rec.p,
            my_rank: unrank(&rec.my_rank)?,
            best_rank: unrank(&rec.best_rank)?,
            freshest_beep: unbeep(&rec.beep)?,
            entry_round: rec.entry,
            passive_anchor: rec.anchor,
        };
        let outbound = rec
            .outbound
            .as_deref()
            .map(|h| decode_msg(lineno, h))
            .transpose()?;
        if rounds.last().map(|r: &RoundRecord| r.round) != Some(rec.round) {
            if rec.round as usize != rounds.len() + 1 {
                return Err(EngineError::TraceParse {
                    line: lineno,
                    reason: format!("round {} out of order", rec.round),
                });
            }
            rounds.push(RoundRecord {
                round: rec.round,
                nodes: Vec::new(),
                inboxes: None,
            });
        }
        rounds
            .last_mut()
            .expect("round pushed")
            .nodes
            .push(NodeRecord {
                id: NodeId(rec.node),
                state,
                outbound,
            });
    }
    Ok(Trace::from_records(
        schedule,
        cfg,
        header.master_seed,
        rounds,
    ))
}

pub fn write_trace(trace: &Trace, path: impl AsRef<Path>) -> Result<(), EngineError> {
    std::fs::write(path, serialize_trace(trace)).map_err(|e| EngineError::Schedule(e.into()))
}

pub fn read_trace(path: impl AsRef<Path>, schedule: Arc<Schedule>) -> Result<Trace, EngineError> {
    let text = std::fs::read_to_string(path).map_err(|e| EngineError::Schedule(e.into()))?;
    parse_trace(&text, schedule)
}
