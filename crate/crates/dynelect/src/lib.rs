//! Deterministic simulation of randomized leader election in dynamic
//! networks.
//!
//! A network here is a committed sequence of per-round graphs over a
//! changing node population: an oblivious adversary fixes every snapshot —
//! including who joins and who is removed — before round 1. The only
//! connectivity assumption is a bounded communication diameter `D`: a
//! message flooded by a persistent node reaches every node that stays around
//! for `D` rounds. Under that assumption the protocol in [`protocol`]
//! maintains a leader through arbitrary churn: a live leader floods
//! timestamped beeps, silence longer than `D` rounds convicts it of
//! departure, and the survivors re-elect by racing exponentially distributed
//! ranks whose rates double every failed phase.
//!
//! The crate is organized around five pieces:
//!
//! - [`schedule`] — schedule representation, generators (static, seeded
//!   churn, and the adversarial worst case), the flooding verifier, and the
//!   line-delimited file format.
//! - [`protocol`] — the per-node state machine: ranks, beeps, the
//!   single-message-per-round discipline, and the phased election.
//! - [`engine`] — the synchronous round loop: topology update, local steps,
//!   broadcast delivery; produces a complete [`engine::Trace`] plus per-run
//!   summaries.
//! - [`oracle`] — pure checks of agreement, validity, stability, bounded
//!   termination, and structural invariants over recorded traces.
//! - [`cli`] — experiment campaigns (generate / run / scaling / lowerbound /
//!   verify) behind the `dynelect` binary.
//!
//! Everything is reproducible: a schedule is a pure function of its
//! parameters and seed, and a run is a pure function of `(schedule, master
//! seed)`, bit-identical across replays. See the `examples/` directory for
//! runnable walkthroughs of each capability.

pub mod cli;
pub mod engine;
pub mod oracle;
pub mod protocol;
pub mod rng;
pub mod schedule;

pub use engine::{run, summarize, RunStats, Runner, Trace};
pub use oracle::{check_all, Violation, ViolationKind};
pub use protocol::{Message, NodeId, NodeState, PhaseClock, ProtocolConfig, Status};
pub use schedule::{verify_comm_diameter, GraphSnapshot, Schedule};
