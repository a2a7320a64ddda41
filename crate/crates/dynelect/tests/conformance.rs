//! Model-conformance suites: the production flooding verifier against the
//! independent time-expanded-graph oracle, and the optimized engine against
//! the minimal replay interpreter.

mod common;

use std::sync::Arc;

use common::{reachability, replay};
use dynelect::engine::Runner;
use dynelect::protocol::NodeId;
use dynelect::rng::labeled_stream;
use dynelect::schedule::{
    churn, lower_bound, static_schedule, verify_comm_diameter, EpochTopology, Schedule,
};

fn assert_verifiers_agree(s: &Schedule, label: &str) {
    let fast = verify_comm_diameter(s);
    let slow = reachability::verify_by_reachability(s);
    assert_eq!(fast, slow, "verifier disagreement on {label}");
}

#[test]
fn verifier_matches_reachability_on_generated_grid() {
    let mut checked = 0;
    for n in 1..=8u32 {
        for d in [2u32, 3] {
            for epochs in [2u32, 4] {
                if epochs * d > 20 {
                    continue;
                }
                let s = lower_bound(n, d, epochs, 7).unwrap();
                assert_verifiers_agree(&s, &format!("lower-bound n={n} d={d} epochs={epochs}"));
                checked += 1;
                for rate in [0.0, 0.4, 1.0] {
                    let s =
                        churn(n, d, epochs * d, rate, EpochTopology::CompleteAtEpoch, 3).unwrap();
                    assert_verifiers_agree(&s, &format!("churn n={n} d={d} rate={rate}"));
                    checked += 1;
                }
            }
        }
    }
    // Static shapes, including ones that sit exactly at the bound.
    for n in 2..=8u32 {
        let path: Vec<(u64, u64)> = (1..u64::from(n)).map(|a| (a, a + 1)).collect();
        let s = static_schedule(n, n - 1, 12, &path).unwrap();
        assert_verifiers_agree(&s, &format!("path n={n}"));
        let star: Vec<(u64, u64)> = (2..=u64::from(n)).map(|b| (1, b)).collect();
        let s = static_schedule(n, 2, 12, &star).unwrap();
        assert_verifiers_agree(&s, &format!("star n={n}"));
        checked += 2;
    }
    assert!(checked > 40);
}

#[test]
fn verifier_matches_reachability_on_random_schedules() {
    let mut rng = labeled_stream(2024, "conformance-random");
    let mut violations_seen = 0;
    for case in 0..100 {
        use rand_core::RngCore;
        let n = 2 + (rng.next_u64() % 7) as u32;
        let d = 2 + (rng.next_u64() % 3) as u32;
        let horizon = (d + 2) + (rng.next_u64() % 14) as u32;
        let density = 10 + (rng.next_u64() % 80) as u32;
        let s = common::random_schedule(n, d, horizon.min(20), density, &mut rng);
        let fast = verify_comm_diameter(&s);
        let slow = reachability::verify_by_reachability(&s);
        assert_eq!(fast, slow, "case {case}: n={n} d={d} horizon={horizon}");
        if fast.is_err() {
            violations_seen += 1;
        }
    }
    // The random pool must exercise both verdicts for the comparison to
    // mean anything.
    assert!(
        violations_seen > 5,
        "only {violations_seen} violating schedules"
    );
}

#[test]
fn engine_matches_replay_interpreter_on_random_schedules() {
    let mut rng = labeled_stream(99, "replay-random");
    for case in 0..100u64 {
        use rand_core::RngCore;
        let n = 2 + (rng.next_u64() % 3) as u32; // n <= 4
        let d = 2;
        let horizon = 4 + (rng.next_u64() % 5) as u32; // horizon <= 8
        let density = 20 + (rng.next_u64() % 70) as u32;
        let s = common::random_schedule(n, d, horizon, density, &mut rng);
        let seed = rng.next_u64();
        let runner = Runner::new_unchecked(Arc::new(s.clone()));
        let trace = runner.run(seed).unwrap();
        let expected = replay::leader_history(&s, seed);
        assert_eq!(trace.rounds().len(), expected.len());
        for (rec, want) in trace.rounds().iter().zip(&expected) {
            let got: std::collections::BTreeMap<NodeId, Option<NodeId>> = rec
                .nodes
                .iter()
                .map(|node| (node.id, node.state.leader))
                .collect();
            assert_eq!(
                got, *want,
                "case {case} seed {seed} round {} diverged",
                rec.round
            );
        }
    }
}

#[test]
fn adversarial_generator_always_satisfies_the_guarantee() {
    for n in [1u32, 2, 4, 8, 16, 32, 64] {
        for d in [2u32, 4, 8] {
            for epochs in [1u32, 4, 16] {
                let s = lower_bound(n, d, epochs, 5).unwrap();
                assert!(
                    verify_comm_diameter(&s).is_ok(),
                    "n={n} d={d} epochs={epochs}"
                );
            }
        }
    }
}

#[test]
fn protocol_invariants_hold_over_churn_runs() {
    use dynelect::protocol::Status;
    let s = churn(10, 3, 90, 0.4, EpochTopology::CompleteAtEpoch, 15).unwrap();
    let runner = Runner::new(Arc::new(s)).unwrap();
    for seed in 0..15 {
        let trace = runner.run(seed).unwrap();
        for rec in trace.rounds() {
            for node in &rec.nodes {
                let st = &node.state;
                // Leaders follow themselves; passives know nothing and have
                // a zeroed rate exponent.
                if st.status == Status::Leader {
                    assert_eq!(st.leader, Some(st.id));
                }
                if st.status == Status::Passive {
                    assert_eq!(st.leader, None);
                    assert_eq!(st.phases_active, 0);
                }
                let Some(prev) = (rec.round > 1)
                    .then(|| trace.state(rec.round - 1, node.id))
                    .flatten()
                else {
                    continue;
                };
                // No transition out of leadership except departure.
                if prev.status == Status::Leader {
                    assert_eq!(st.status, Status::Leader);
                    assert_eq!(st.leader, prev.leader);
                }
                // The rate exponent only moves at phase starts while in an
                // election, by exactly one, and resets on adoption.
                if st.phases_active != prev.phases_active {
                    assert!(
                        st.phases_active == prev.phases_active + 1 || st.phases_active == 0,
                        "round {} node {}: p {} -> {}",
                        rec.round,
                        node.id,
                        prev.phases_active,
                        st.phases_active
                    );
                    if st.phases_active != 0 {
                        assert_eq!((rec.round - 1) % 6, 0, "p bump off a phase boundary");
                    }
                }
                // Adopting a distinct leader requires holding a fresh beep
                // naming it.
                if st.leader.is_some() && st.leader != prev.leader && st.leader != Some(st.id) {
                    let beep = st.freshest_beep.expect("adoption without a beep");
                    assert_eq!(Some(beep.leader), st.leader);
                    assert!(beep.is_fresh(rec.round, 3));
                }
            }
        }
    }
}

#[test]
fn oracle_checks_are_pure() {
    let s = churn(8, 2, 40, 0.5, EpochTopology::CompleteAtEpoch, 3).unwrap();
    let trace = Runner::new(Arc::new(s)).unwrap().run(1).unwrap();
    assert_eq!(
        dynelect::oracle::check_all(&trace, Some(10)),
        dynelect::oracle::check_all(&trace, Some(10))
    );
}

#[test]
fn engine_matches_replay_interpreter_on_structured_schedules() {
    // Valid schedules where elections actually complete, so the comparison
    // covers the full leader lifecycle, not just churn noise.
    let schedules = vec![
        static_schedule(4, 2, 20, &[(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)]).unwrap(),
        churn(4, 2, 24, 0.5, EpochTopology::CompleteAtEpoch, 5).unwrap(),
        lower_bound(4, 2, 10, 9).unwrap(),
    ];
    for s in schedules {
        let runner = Runner::new_unchecked(Arc::new(s.clone()));
        for seed in 0..40 {
            let trace = runner.run(seed).unwrap();
            let expected = replay::leader_history(&s, seed);
            for (rec, want) in trace.rounds().iter().zip(&expected) {
                let got: std::collections::BTreeMap<NodeId, Option<NodeId>> = rec
                    .nodes
                    .iter()
                    .map(|node| (node.id, node.state.leader))
                    .collect();
                assert_eq!(got, *want, "seed {seed} round {}", rec.round);
            }
        }
    }
}
