//! A first election on a static network.
//!
//! Five nodes on a star, communication diameter 2. Everyone joins at round 1
//! as a passive observer, sits out one full phase of silence, then competes:
//! ranks flood for d rounds, the minimum holder elects itself, and its beeps
//! convert the rest. Run with:
//!
//! ```bash
//! cargo run -p dynelect --example static_election
//! ```

use dynelect::protocol::Status;
use dynelect::schedule::static_schedule;
use dynelect::{run, summarize};

fn main() {
    let n = 5;
    let d = 2;
    let star: Vec<(u64, u64)> = (2..=n).map(|b| (1, b)).collect();
    let schedule = static_schedule(n as u32, d, 8 * d, &star).expect("star diameter 2 fits d=2");

    let trace = run(&schedule, 42).expect("static schedule verifies");

    println!(
        "round | {}",
        (1..=n).map(|i| format!("node {i}   ")).collect::<String>()
    );
    for rec in trace.rounds() {
        let mut row = format!("{:>5} | ", rec.round);
        for node in &rec.nodes {
            let tag = match node.state.status {
                Status::Passive => "watch  ".to_string(),
                Status::Active => "race   ".to_string(),
                Status::Leader => "LEAD   ".to_string(),
                Status::Follower => format!("-> {}   ", node.state.leader.unwrap()),
            };
            row.push_str(&format!("{tag:>7}  "));
        }
        println!("{row}");
    }

    let stats = summarize(&trace);
    println!("\nelection phases: {:?}", stats.phases);
    for e in &stats.episodes {
        println!(
            "node {} was leaderless from round {} until round {:?}",
            e.node, e.start_round, e.resolved_round
        );
    }
}
