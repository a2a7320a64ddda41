//! Why rank races with doubling rates elect the long-suffering.
//!
//! A rank's effective value is exponentially distributed with rate 2^p,
//! where p counts the phases a node has spent in the current election. The
//! minimum of independent exponentials lands on racer i with probability
//! rate_i / sum(rates), so a node that has waited through k failed phases
//! outweighs any fresh joiner 2^k to 1. Run with:
//!
//! ```bash
//! cargo run -p dynelect --example rank_race
//! ```

use dynelect::protocol::{compare_ranks, draw_rank, NodeId, RankOrder};
use dynelect::rng::node_stream;

fn main() {
    let trials = 200_000u32;
    let mut rng = node_stream(2, 1);

    // Three racers at rates 1, 2, 4.
    let mut wins = [0u32; 3];
    for _ in 0..trials {
        let ranks: Vec<_> = (0..3u16)
            .map(|p| draw_rank(p, NodeId(u64::from(p) + 1), &mut rng, 64))
            .collect();
        let mut min = ranks[0];
        for r in &ranks[1..] {
            if let Ok(RankOrder::BSmaller) = compare_ranks(&min, r, 64) {
                min = *r;
            }
        }
        wins[(min.owner.0 - 1) as usize] += 1;
    }
    println!("minimum-holder frequencies over {trials} races (rates 1, 2, 4):");
    for (i, w) in wins.iter().enumerate() {
        let rate = 1u32 << i;
        println!(
            "  rate {rate}: measured {:.4}, predicted {:.4}",
            f64::from(*w) / f64::from(trials),
            f64::from(rate) / 7.0
        );
    }

    // A veteran of six failed phases against seven fresh joiners.
    let mut veteran_wins = 0u32;
    for _ in 0..trials {
        let veteran = draw_rank(6, NodeId(1), &mut rng, 64);
        let fresh: Vec<_> = (2..=8u64)
            .map(|id| draw_rank(0, NodeId(id), &mut rng, 64))
            .collect();
        let beaten = fresh
            .iter()
            .any(|f| matches!(compare_ranks(f, &veteran, 64), Ok(RankOrder::ASmaller)));
        if !beaten {
            veteran_wins += 1;
        }
    }
    println!(
        "\nveteran at rate 64 vs seven joiners at rate 1: wins {:.4} (predicted {:.4})",
        f64::from(veteran_wins) / f64::from(trials),
        64.0 / 71.0
    );
    println!("that bias is what keeps perpetual churn from starving an election.");
}
