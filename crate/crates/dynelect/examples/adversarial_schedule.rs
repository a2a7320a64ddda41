//! The worst-case adversary, and what it costs any election algorithm.
//!
//! The adversarial generator keeps all nodes pairwise disconnected for d - 1
//! rounds, then at every round i*d flips a fair coin per node, replaces the
//! losers with fresh random ids, and connects the survivors for that single
//! round. A would-be leader therefore dies with probability 1/2 before it
//! can tell anyone — so no algorithm can be sure of a leader by round i*d
//! with probability better than 1 - 2^-(2i+1). This example measures our
//! own protocol against that floor. Run with:
//!
//! ```bash
//! cargo run -p dynelect --example adversarial_schedule
//! ```

use std::sync::Arc;

use dynelect::engine::Runner;
use dynelect::oracle::{lower_bound_curve, no_leader_floor};
use dynelect::schedule::lower_bound;

fn main() {
    let (n, d, epochs) = (32, 4, 4);

    // Shape of one schedule.
    let sample = lower_bound(n, d, epochs, 0).unwrap();
    println!("one committed schedule (n={n}, d={d}, {epochs} epochs):");
    for r in 1..=sample.horizon() {
        let snap = sample.snapshot(r).unwrap();
        println!(
            "  round {r:>2}: {:>2} nodes, {:>3} edges{}",
            snap.vertices().len(),
            snap.edges().len(),
            if r % d == 0 {
                "  <- churn + complete graph"
            } else {
                ""
            }
        );
    }

    // The curve needs fresh adversary coins per trial, so every trial draws
    // its own schedule.
    let trials = 4000;
    let traces: Vec<_> = (0..trials)
        .map(|seed| {
            let s = lower_bound(n, d, epochs, seed).unwrap();
            // Construction guarantees the flooding bound: skip re-verifying
            // every one of the 4000 schedules.
            Runner::new_unchecked(Arc::new(s)).run(seed).unwrap()
        })
        .collect();
    let curve = lower_bound_curve(&traces, d);

    println!("\nno-leader probability among survivors, {trials} trials:");
    println!("  i | round | empirical | adversarial floor");
    for point in &curve {
        println!(
            "  {} | {:>5} | {:>9.4} | {:.5}",
            point.i,
            point.i * d,
            point.empirical,
            no_leader_floor(point.i)
        );
    }
}
