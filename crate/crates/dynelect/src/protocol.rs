//! Per-node protocol state machine.
//!
//! Nodes live on a common synchronous clock split into phases of `2D` rounds.
//! While a leader is present it floods a timestamped beep every round; a beep
//! is *fresh* at round `r` when `r - timestamp <= D`, and every node forwards
//! only the newest fresh beep it holds. When the beeps stop (the leader left),
//! followers drop their leader variable and re-enter the election at the next
//! phase boundary.
//!
//! An election phase uses the first `D` rounds as a rank race: each active
//! node draws a rank whose effective value is exponentially distributed with
//! rate `2^p` (`p` = phases spent active in this election) and floods the
//! smallest rank seen. A node whose own rank is still the smallest when the
//! race window closes elects itself; everyone else adopts the winner from its
//! beeps during the second half of the phase. Doubling the rate every failed
//! phase biases the race toward long-suffering nodes, which is what keeps
//! re-election fast under sustained churn.
//!
//! Each node broadcasts at most one message per round. When a node holds both
//! a fresh beep and election traffic, the beep wins the slot: a fresh beep
//! means an election has already been decided, and spreading the decision
//! supersedes the race.

use rand_core::RngCore;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Unique identity of a node for the lifetime of a schedule.
///
/// Ids are positive and fit the 40-bit wire field (see [`Message::encode`]).
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize, Default,
)]
#[serde(transparent)]
pub struct NodeId(pub u64);

impl std::fmt::Display for NodeId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Number of bits of the id field in the wire encoding.
pub const ID_BITS: u32 = 40;
/// Largest id representable on the wire (ids are encoded as `id - 1`).
pub const MAX_ID: u64 = 1 << ID_BITS;
/// Number of bits of the beep timestamp field.
pub const TIMESTAMP_BITS: u32 = 32;
/// Number of bits of the rank phase-count field.
pub const PHASE_COUNT_BITS: u32 = 16;

/// Protocol parameters shared by every node of a run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProtocolConfig {
    /// Communication diameter bound, in rounds.
    pub d: u32,
    /// Number of uniform bits carried by a rank message (1..=64).
    pub uniform_bits: u8,
}

impl ProtocolConfig {
    pub fn new(d: u32) -> Self {
        ProtocolConfig {
            d,
            uniform_bits: 64,
        }
    }

    pub fn clock(&self) -> PhaseClock {
        PhaseClock { d: self.d }
    }
}

/// Derives phase geometry from the global round counter.
///
/// Phase `i` covers rounds `[2iD + 1, 2(i+1)D]`; its first `D` rounds are the
/// rank race, the second `D` rounds carry the winner's announcement.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PhaseClock {
    pub d: u32,
}

impl PhaseClock {
    pub fn new(d: u32) -> Self {
        PhaseClock { d }
    }

    /// Index of the phase containing round `r` (0-based).
    pub fn phase_index(&self, r: u32) -> u32 {
        (r - 1) / (2 * self.d)
    }

    /// First round of phase `i`.
    pub fn phase_start(&self, i: u32) -> u32 {
        2 * i * self.d + 1
    }

    /// Offset of round `r` inside its phase, `0..2D`.
    pub fn position(&self, r: u32) -> u32 {
        (r - 1) % (2 * self.d)
    }

    pub fn is_phase_start(&self, r: u32) -> bool {
        self.position(r) == 0
    }

    /// True for the first `D` rounds of a phase.
    pub fn first_half(&self, r: u32) -> bool {
        self.position(r) < self.d
    }

    /// First phase boundary at or after round `r`.
    pub fn next_phase_start(&self, r: u32) -> u32 {
        if self.is_phase_start(r) {
            r
        } else {
            self.phase_start(self.phase_index(r) + 1)
        }
    }
}

/// A node's election ticket.
///
/// The effective value `-ln(U / 2^b) / 2^p` is exponentially distributed with
/// rate `2^p` when `U` is uniform. Ranks carry `(p, U)` and every node
/// evaluates the value with the same 64-bit float rule, so the order is
/// identical everywhere; ties (equal floats) break toward the smaller owner
/// id, which makes the order strict and total.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rank {
    /// Phases the owner has been active in the current election (`p`).
    pub phase_count: u16,
    /// Uniform bits `U`, drawn from `{1, ..., 2^b - 1}`.
    pub uniform_bits: u64,
    pub owner: NodeId,
}

impl Rank {
    /// Effective value `-ln(U / 2^b) / 2^p`.
    pub fn value(&self, bits: u8) -> f64 {
        let unit = self.uniform_bits as f64 * (-(f64::from(bits))).exp2();
        -unit.ln() / f64::from(self.phase_count).exp2()
    }
}

/// Outcome of comparing two distinct ranks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RankOrder {
    ASmaller,
    BSmaller,
}

/// Strict total order on ranks: effective value first, owner id as the tie
/// break. Comparing a rank against itself has no defined order.
pub fn compare_ranks(a: &Rank, b: &Rank, bits: u8) -> Result<RankOrder, ProtocolError> {
    let (va, vb) = (a.value(bits), b.value(bits));
    if va < vb {
        return Ok(RankOrder::ASmaller);
    }
    if vb < va {
        return Ok(RankOrder::BSmaller);
    }
    match a.owner.cmp(&b.owner) {
        std::cmp::Ordering::Less => Ok(RankOrder::ASmaller),
        std::cmp::Ordering::Greater => Ok(RankOrder::BSmaller),
        std::cmp::Ordering::Equal => Err(ProtocolError::DuplicateRank { owner: a.owner }),
    }
}

/// Smaller of two ranks under [`compare_ranks`]; identical ranks (a rank
/// echoed back by a neighbor) keep `a`.
fn smaller_rank(a: Rank, b: Rank, bits: u8) -> Rank {
    if a == b {
        return a;
    }
    match compare_ranks(&a, &b, bits) {
        Ok(RankOrder::ASmaller) => a,
        Ok(RankOrder::BSmaller) => b,
        // Same owner with different payload cannot occur in a well-formed
        // run; prefer the lexicographically smaller payload so folding stays
        // deterministic even on corrupt input.
        Err(_) => {
            if (a.phase_count, a.uniform_bits) <= (b.phase_count, b.uniform_bits) {
                a
            } else {
                b
            }
        }
    }
}

/// Draws a fresh rank with rate `2^p` from the node's private stream.
///
/// `U` is sampled uniformly from `{1, ..., 2^b - 1}`; zero is redrawn so the
/// logarithm is always finite.
pub fn draw_rank(phase_count: u16, owner: NodeId, rng: &mut impl RngCore, bits: u8) -> Rank {
    debug_assert!((1..=64).contains(&bits));
    let shift = 64 - u32::from(bits);
    let uniform_bits = loop {
        let u = rng.next_u64() >> shift;
        if u != 0 {
            break u;
        }
    };
    Rank {
        phase_count,
        uniform_bits,
        owner,
    }
}

/// The leader's timestamped heartbeat.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Beep {
    pub leader: NodeId,
    /// Round in which the leader generated the beep.
    pub timestamp: u32,
}

impl Beep {
    /// Fresh at round `r` while `r - timestamp <= D` (inclusive).
    pub fn is_fresh(&self, r: u32, d: u32) -> bool {
        r.saturating_sub(self.timestamp) <= d
    }
}

/// Newer of two beeps: later timestamp wins, ties prefer the smaller leader.
fn newer_beep(a: Beep, b: Beep) -> Beep {
    match a.timestamp.cmp(&b.timestamp) {
        std::cmp::Ordering::Greater => a,
        std::cmp::Ordering::Less => b,
        std::cmp::Ordering::Equal => {
            if a.leader <= b.leader {
                a
            } else {
                b
            }
        }
    }
}

/// The single per-round broadcast payload.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Message {
    Rank(Rank),
    Beep(Beep),
}

/// Bit budget of a single broadcast: two id fields, the uniform bits, and a
/// timestamp. Both message kinds must encode within it.
pub fn bit_budget(uniform_bits: u8) -> u32 {
    2 * ID_BITS + u32::from(uniform_bits) + TIMESTAMP_BITS
}

impl Message {
    /// Encoded size in bits: a 1-bit tag plus the variant's fields.
    pub fn encoded_bits(&self, uniform_bits: u8) -> u32 {
        match self {
            Message::Rank(_) => 1 + ID_BITS + PHASE_COUNT_BITS + u32::from(uniform_bits),
            Message::Beep(_) => 1 + ID_BITS + TIMESTAMP_BITS,
        }
    }

    /// Stable binary encoding, MSB-first within big-endian bytes.
    ///
    /// Tag bit 0 = rank, 1 = beep. Ids are stored as `id - 1` so the full
    /// `{1, ..., 2^40}` id space fits the 40-bit field.
    pub fn encode(&self, uniform_bits: u8) -> Result<Vec<u8>, ProtocolError> {
        let mut w = BitWriter::default();
        match self {
            Message::Rank(rank) => {
                if u32::from(uniform_bits) < 64 && rank.uniform_bits >> uniform_bits != 0 {
                    return Err(ProtocolError::EncodingOverflow {
                        field: "uniform_bits",
                    });
                }
                w.push(0, 1);
                w.push(encode_id(rank.owner)?, ID_BITS);
                w.push(u64::from(rank.phase_count), PHASE_COUNT_BITS);
                w.push(rank.uniform_bits, u32::from(uniform_bits));
            }
            Message::Beep(beep) => {
                w.push(1, 1);
                w.push(encode_id(beep.leader)?, ID_BITS);
                w.push(u64::from(beep.timestamp), TIMESTAMP_BITS);
            }
        }
        Ok(w.finish())
    }

    /// Inverse of [`Message::encode`].
    pub fn decode(bytes: &[u8], uniform_bits: u8) -> Result<Message, ProtocolError> {
        let mut r = BitReader::new(bytes);
        let tag = r.take(1)?;
        let msg = if tag == 0 {
            let owner = NodeId(r.take(ID_BITS)? + 1);
            let phase_count = r.take(PHASE_COUNT_BITS)? as u16;
            let uniform = r.take(u32::from(uniform_bits))?;
            Message::Rank(Rank {
                phase_count,
                uniform_bits: uniform,
                owner,
            })
        } else {
            let leader = NodeId(r.take(ID_BITS)? + 1);
            let timestamp = r.take(TIMESTAMP_BITS)? as u32;
            Message::Beep(Beep { leader, timestamp })
        };
        r.expect_padding()?;
        Ok(msg)
    }
}

fn encode_id(id: NodeId) -> Result<u64, ProtocolError> {
    if id.0 == 0 || id.0 > MAX_ID {
        return Err(ProtocolError::EncodingOverflow { field: "id" });
    }
    Ok(id.0 - 1)
}

#[derive(Default)]
struct BitWriter {
    bytes: Vec<u8>,
    used: u32,
}

impl BitWriter {
    fn push(&mut self, value: u64, bits: u32) {
        for i in (0..bits).rev() {
            let bit = ((value >> i) & 1) as u8;
            if self.used.is_multiple_of(8) {
                self.bytes.push(0);
            }
            let byte = self.bytes.last_mut().expect("pushed above");
            *byte |= bit << (7 - self.used % 8);
            self.used += 1;
        }
    }

    fn finish(self) -> Vec<u8> {
        self.bytes
    }
}

struct BitReader<'a> {
    bytes: &'a [u8],
    pos: u32,
}

impl<'a> BitReader<'a> {
    fn new(bytes: &'a [u8]) -> Self {
        BitReader { bytes, pos: 0 }
    }

    fn take(&mut self, bits: u32) -> Result<u64, ProtocolError> {
        let mut out = 0u64;
        for _ in 0..bits {
            let idx = (self.pos / 8) as usize;
            let byte = *self.bytes.get(idx).ok_or(ProtocolError::MalformedMessage {
                reason: "truncated",
            })?;
            out = (out << 1) | u64::from((byte >> (7 - self.pos % 8)) & 1);
            self.pos += 1;
        }
        Ok(out)
    }

    fn expect_padding(&mut self) -> Result<(), ProtocolError> {
        let total = self.bytes.len() as u32 * 8;
        if total - self.pos >= 8 {
            return Err(ProtocolError::MalformedMessage {
                reason: "trailing bytes",
            });
        }
        while self.pos < total {
            if self.take(1)? != 0 {
                return Err(ProtocolError::MalformedMessage {
                    reason: "nonzero padding",
                });
            }
        }
        Ok(())
    }
}

/// Lifecycle status of a node.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    /// Recently joined; observing for a full phase before participating.
    Passive,
    /// In an election (participating, or waiting for the next phase start).
    Active,
    /// Adopted a leader announced by fresh beeps.
    Follower,
    /// Elected itself; beeps every round until removed by the schedule.
    Leader,
}

impl std::fmt::Display for Status {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Status::Passive => "passive",
            Status::Active => "active",
            Status::Follower => "follower",
            Status::Leader => "leader",
        };
        f.write_str(s)
    }
}

/// Full protocol state of one node.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodeState {
    pub id: NodeId,
    pub status: Status,
    /// The node's leader variable; `None` encodes "no leader known".
    pub leader: Option<NodeId>,
    /// Phases spent active in the current election (`p`); resets to 0 when a
    /// leader is adopted.
    pub phases_active: u16,
    /// Rank drawn at the current phase's start, while participating.
    pub my_rank: Option<Rank>,
    /// Smallest rank heard in the current phase.
    pub best_rank: Option<Rank>,
    /// Newest beep held that was fresh when last examined.
    pub freshest_beep: Option<Beep>,
    pub entry_round: u32,
    /// First round of the earliest phase this node observes in full.
    pub passive_anchor: u32,
}

/// Initial state of a node joining the network at round `r`.
///
/// A joiner is passive: it must either hear a fresh beep (and adopt that
/// leader) or sit through one full phase of silence before it may compete.
pub fn on_enter(id: NodeId, r: u32, cfg: &ProtocolConfig) -> NodeState {
    NodeState {
        id,
        status: Status::Passive,
        leader: None,
        phases_active: 0,
        my_rank: None,
        best_rank: None,
        freshest_beep: None,
        entry_round: r,
        passive_anchor: cfg.clock().next_phase_start(r),
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ProtocolError {
    /// A beep claimed to be generated in the future.
    #[error("clock violation: beep timestamped {timestamp} delivered at round {round}")]
    ClockViolation { timestamp: u32, round: u32 },
    /// `step` was invoked for a round before the node existed.
    #[error("lifecycle violation: node {node} stepped at round {round} before entry at {entry}")]
    Lifecycle {
        node: NodeId,
        round: u32,
        entry: u32,
    },
    /// Two ranks with the same owner were compared.
    #[error("rank comparison between two ranks owned by node {owner}")]
    DuplicateRank { owner: NodeId },
    #[error("message field {field} exceeds its encoded width")]
    EncodingOverflow { field: &'static str },
    #[error("malformed message encoding: {reason}")]
    MalformedMessage { reason: &'static str },
}

/// One synchronous computation step of a node.
///
/// `inbox` holds exactly the messages broadcast in round `r - 1` by that
/// round's neighbors. Returns the successor state and the node's single
/// broadcast for round `r`, if any.
pub fn step(
    state: &NodeState,
    r: u32,
    inbox: &[Message],
    rng: &mut impl RngCore,
    cfg: &ProtocolConfig,
) -> Result<(NodeState, Option<Message>), ProtocolError> {
    if r < state.entry_round {
        return Err(ProtocolError::Lifecycle {
            node: state.id,
            round: r,
            entry: state.entry_round,
        });
    }
    let clock = cfg.clock();
    let mut s = *state;

    // Beep intake: keep the newest beep seen, drop it once stale.
    let mut freshest = s.freshest_beep;
    for m in inbox {
        if let Message::Beep(b) = m {
            if b.timestamp > r {
                return Err(ProtocolError::ClockViolation {
                    timestamp: b.timestamp,
                    round: r,
                });
            }
            freshest = Some(match freshest {
                None => *b,
                Some(cur) => newer_beep(cur, *b),
            });
        }
    }
    if let Some(b) = freshest {
        if !b.is_fresh(r, cfg.d) {
            freshest = None;
        }
    }
    s.freshest_beep = freshest;

    // A fresh beep decides everything for a non-leader: adopt the announced
    // leader and leave any election.
    if s.status != Status::Leader {
        if let Some(b) = s.freshest_beep {
            s.leader = Some(b.leader);
            s.status = Status::Follower;
            s.phases_active = 0;
            s.my_rank = None;
            s.best_rank = None;
        }
    }

    // A leader's slot is always its own heartbeat.
    if s.status == Status::Leader {
        return Ok((
            s,
            Some(Message::Beep(Beep {
                leader: s.id,
                timestamp: r,
            })),
        ));
    }

    // Leader loss: the beeps stopped, so the leader must be gone. Clear the
    // variable and compete again from the next phase boundary.
    if s.leader.is_some() && s.freshest_beep.is_none() {
        s.leader = None;
        s.status = Status::Active;
        s.phases_active = 0;
        s.my_rank = None;
        s.best_rank = None;
    }

    if clock.is_phase_start(r) {
        if s.status == Status::Passive && r >= s.passive_anchor + 2 * cfg.d {
            // One full phase of silence observed; compete from this phase.
            s.status = Status::Active;
        }
        if s.status == Status::Active {
            if s.my_rank.is_some() {
                // Still electing after a full phase: double the rate.
                s.phases_active += 1;
            }
            let rank = draw_rank(s.phases_active, s.id, rng, cfg.uniform_bits);
            s.my_rank = Some(rank);
            s.best_rank = Some(rank);
        } else {
            s.best_rank = None;
        }
    }

    // Rank intake. First-half broadcasts (positions 0..D) land in inboxes at
    // positions 1..=D; passive nodes fold too, since they forward the race.
    let pos = clock.position(r);
    if matches!(s.status, Status::Passive | Status::Active) && pos >= 1 && pos <= cfg.d {
        for m in inbox {
            if let Message::Rank(rk) = m {
                s.best_rank = Some(match s.best_rank {
                    None => *rk,
                    Some(cur) => smaller_rank(cur, *rk, cfg.uniform_bits),
                });
            }
        }
    }

    // Race verdict: the full first-half flood has been folded exactly when
    // the second half begins. A node still holding its own rank as the
    // minimum is the unique winner.
    if pos == cfg.d && s.status == Status::Active {
        if let (Some(my), Some(best)) = (s.my_rank, s.best_rank) {
            if my == best {
                s.status = Status::Leader;
                s.leader = Some(s.id);
                return Ok((
                    s,
                    Some(Message::Beep(Beep {
                        leader: s.id,
                        timestamp: r,
                    })),
                ));
            }
        }
    }

    // Single broadcast slot: fresh beep first, election traffic only during
    // the race window, silence otherwise.
    let out = if let Some(b) = s.freshest_beep {
        Some(Message::Beep(b))
    } else if pos < cfg.d {
        s.best_rank.map(Message::Rank)
    } else {
        None
    };
    Ok((s, out))
}
