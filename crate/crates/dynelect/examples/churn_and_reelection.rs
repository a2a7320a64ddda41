//! Leader loss and re-election under churn.
//!
//! A seeded epoch schedule removes each node with probability 0.3 every d
//! rounds and tops the population back up with fresh joiners. Watch leaders
//! get churned out, the silence convict them d rounds later, and the
//! survivors re-elect. Run with:
//!
//! ```bash
//! cargo run -p dynelect --example churn_and_reelection
//! ```

use dynelect::protocol::Status;
use dynelect::schedule::{churn, EpochTopology};
use dynelect::{run, summarize};

fn main() {
    let (n, d) = (12, 3);
    let schedule = churn(n, d, 40 * d, 0.3, EpochTopology::CompleteAtEpoch, 7)
        .expect("complete-at-epoch satisfies the flooding bound");
    let trace = run(&schedule, 3).expect("schedule verifies");

    let mut reigns: Vec<(u64, u32, u32)> = Vec::new(); // (leader, from, to)
    for rec in trace.rounds() {
        let leader = rec
            .nodes
            .iter()
            .find(|nd| nd.state.status == Status::Leader)
            .map(|nd| nd.id.0);
        match (leader, reigns.last_mut()) {
            (Some(l), Some((cur, _, to))) if *cur == l => *to = rec.round,
            (Some(l), _) => reigns.push((l, rec.round, rec.round)),
            (None, _) => {}
        }
    }
    println!("leader reigns over {} rounds:", schedule.horizon());
    for (leader, from, to) in &reigns {
        println!("  node {leader:>3} led rounds {from:>3}..={to}");
    }

    let stats = summarize(&trace);
    let lengths = stats.termination_lengths();
    println!(
        "\n{} election phases attempted, {} successful",
        stats.phases.len(),
        stats.phases.iter().filter(|p| p.successful).count()
    );
    println!(
        "{} leaderless episodes resolved; longest took {} rounds",
        lengths.len(),
        lengths.iter().max().copied().unwrap_or(0)
    );
    println!(
        "messages: {} total ({} rank, {} beep)",
        stats.messages.total, stats.messages.ranks, stats.messages.beeps
    );
}
