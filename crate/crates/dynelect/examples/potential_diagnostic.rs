//! The election potential, sampled phase by phase.
//!
//! For a phase-start cohort and a maximal-rate reference competitor, the
//! potential sums each member's 2^p relative to the reference's. It starts
//! at most |cohort| and cannot grow while the reference stays in the race:
//! an adversary that keeps making phases fail only drives it down, which is
//! why elections finish in logarithmically many phases. The engine samples
//! it at every attempted phase. Run with:
//!
//! ```bash
//! cargo run -p dynelect --example potential_diagnostic
//! ```

use dynelect::schedule::{churn, EpochTopology};
use dynelect::{run, summarize};

fn main() {
    let (n, d) = (12, 3);
    // Heavy churn makes elections fail repeatedly, which is when the
    // potential is informative.
    let schedule = churn(n, d, 80 * d, 0.5, EpochTopology::CompleteAtEpoch, 19).unwrap();
    let trace = run(&schedule, 4).expect("schedule verifies");
    let stats = summarize(&trace);

    println!("phase | start | cohort | reference | potential | outcome");
    for sample in &stats.psi {
        let outcome = stats
            .phases
            .iter()
            .find(|p| p.phase == sample.phase)
            .map(|p| if p.successful { "success" } else { "failed" })
            .unwrap_or("-");
        println!(
            "{:>5} | {:>5} | {:>6} | {:>9} | {:>9.3} | {}",
            sample.phase,
            sample.start_round,
            sample.cohort_size,
            sample.reference.0,
            sample.value,
            outcome
        );
    }
    let successes = stats.phases.iter().filter(|p| p.successful).count();
    println!(
        "\n{} attempted phases, {} successes across {} rounds",
        stats.phases.len(),
        successes,
        schedule.horizon()
    );
}
