//! Recording a run to disk and re-verifying it later.
//!
//! Traces serialize to line-delimited text — one record per (round, node)
//! with the state summary and the outbound message in its stable binary
//! encoding, rendered as hex. A parsed trace feeds the oracle exactly like a
//! live one. Run with:
//!
//! ```bash
//! cargo run -p dynelect --example trace_files
//! ```

use std::sync::Arc;

use dynelect::engine::{parse_trace, serialize_trace, Runner};
use dynelect::oracle::check_all;
use dynelect::protocol::Message;
use dynelect::schedule::{churn, EpochTopology};

fn main() {
    let schedule = Arc::new(churn(8, 3, 30, 0.3, EpochTopology::CompleteAtEpoch, 2).unwrap());
    let runner = Runner::new(Arc::clone(&schedule)).unwrap();
    let trace = runner.run(11).unwrap();

    let text = serialize_trace(&trace);
    println!(
        "trace over {} rounds serializes to {} lines; a few of them:",
        schedule.horizon(),
        text.lines().count()
    );
    for line in text.lines().take(4) {
        let shown: String = line.chars().take(110).collect();
        println!("  {shown}{}", if line.len() > 110 { "..." } else { "" });
    }

    let reloaded = parse_trace(&text, Arc::clone(&schedule)).unwrap();
    assert_eq!(reloaded, trace);
    println!("\nparsed trace is identical to the recorded one");

    // The hex field is the exact wire encoding, within one broadcast's bit
    // budget.
    let bits = trace.config().uniform_bits;
    let sample = trace
        .rounds()
        .iter()
        .flat_map(|rec| rec.nodes.iter())
        .find_map(|node| node.outbound)
        .expect("someone broadcast");
    let encoded = sample.encode(bits).unwrap();
    println!(
        "sample broadcast {:?} encodes to {} bits ({})",
        match sample {
            Message::Rank(_) => "rank",
            Message::Beep(_) => "beep",
        },
        sample.encoded_bits(bits),
        hex::encode(&encoded)
    );

    let findings = check_all(&reloaded, None);
    println!(
        "oracle over the reloaded trace: {} findings",
        findings.len()
    );
}
