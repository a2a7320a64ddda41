//! Machine-checking a run: agreement, validity, stability, termination.
//!
//! Every run yields a complete trace, and the oracle re-derives the
//! correctness conditions from it. A healthy run is silent; this example
//! then corrupts one recorded state to show what a finding looks like.
//! Run with:
//!
//! ```bash
//! cargo run -p dynelect --example trace_oracle
//! ```

use dynelect::engine::Trace;
use dynelect::oracle::{check_all, check_termination};
use dynelect::protocol::{NodeId, Status};
use dynelect::schedule::{churn, EpochTopology};
use dynelect::{run, summarize};

fn main() {
    let (n, d) = (16, 4);
    let schedule = churn(n, d, 64 * d, 0.25, EpochTopology::CompleteAtEpoch, 5).unwrap();
    let trace = run(&schedule, 8).expect("schedule verifies");

    let findings = check_all(&trace, Some(14 * d * 4));
    println!(
        "healthy run over {} rounds: {} findings",
        schedule.horizon(),
        findings.len()
    );
    let stats = summarize(&trace);
    println!(
        "  ({} episodes, {} election phases, {} successful)",
        stats.episodes.len(),
        stats.phases.len(),
        stats.phases.iter().filter(|p| p.successful).count()
    );

    // Corrupt the trace: pick a round where a leader reigns and make one
    // follower claim a different leader.
    let mut rounds = trace.rounds().to_vec();
    let mut corrupted_at = None;
    'outer: for rec in rounds.iter_mut() {
        let leader = rec
            .nodes
            .iter()
            .find(|nd| nd.state.status == Status::Leader)
            .map(|nd| nd.id);
        let Some(leader) = leader else { continue };
        for node in rec.nodes.iter_mut() {
            if node.state.status == Status::Follower && node.state.leader == Some(leader) {
                node.state.leader = Some(NodeId(999_999));
                corrupted_at = Some((rec.round, node.id));
                break 'outer;
            }
        }
    }
    let (round, node) = corrupted_at.expect("some follower exists");
    println!("\ncorrupting node {node} at round {round} to follow a phantom leader...");
    let tampered = Trace::from_records(
        std::sync::Arc::new(schedule),
        *trace.config(),
        trace.master_seed(),
        rounds,
    );
    for v in check_all(&tampered, None).iter().take(4) {
        println!("  {v}");
    }

    // Termination findings are bound-sensitive: an absurd bound of zero
    // flags every leaderless round.
    let strict = check_termination(&tampered, 0);
    println!(
        "\nwith a zero-round bound, termination flags {} episodes",
        strict.len()
    );
}
