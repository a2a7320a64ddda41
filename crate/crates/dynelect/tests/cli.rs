//! Command-line surface: file formats, determinism of outputs, exit codes.

use std::path::PathBuf;
use std::process::Command;

use dynelect::cli::{
    cmd_generate, cmd_lowerbound, cmd_run, cmd_verify, lowerbound_campaign, scaling_campaign,
    CliError, GenerateArgs, LowerboundArgs, RunArgs, ScalingArgs, VerifyArgs, EXIT_OK, EXIT_PARSE,
    EXIT_VALIDATION, EXIT_VIOLATIONS,
};
use dynelect::schedule::read_schedule;

fn gen_args(generator: &str, n: u32, d: u32, epochs: u32, seed: u64, out: PathBuf) -> GenerateArgs {
    GenerateArgs {
        generator: generator.to_string(),
        n,
        d,
        epochs,
        churn: 0.5,
        topology: "complete".into(),
        shape: "star".into(),
        seed_start: seed,
        out,
    }
}

#[test]
fn generate_writes_expected_round_count_and_regenerates_identically() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("lb.jsonl");
    cmd_generate(&gen_args("lower-bound", 16, 4, 32, 7, out.clone())).unwrap();
    let s = read_schedule(&out).unwrap();
    assert_eq!(s.horizon(), 128);
    assert_eq!(s.n(), 16);
    let first = std::fs::read(&out).unwrap();
    cmd_generate(&gen_args("lower-bound", 16, 4, 32, 7, out.clone())).unwrap();
    assert_eq!(
        std::fs::read(&out).unwrap(),
        first,
        "regeneration must be byte-identical"
    );
}

#[test]
fn generate_rejects_undersized_static_bound() {
    let dir = tempfile::tempdir().unwrap();
    let mut args = gen_args("static", 5, 1, 4, 0, dir.path().join("s.jsonl"));
    args.shape = "path".into(); // diameter 4 > declared bound 1
    let err = cmd_generate(&args).unwrap_err();
    assert_eq!(err.exit_code(), EXIT_VALIDATION);
}

#[test]
fn generate_rejects_unknown_generator() {
    let dir = tempfile::tempdir().unwrap();
    let err =
        cmd_generate(&gen_args("mystery", 4, 2, 2, 0, dir.path().join("s.jsonl"))).unwrap_err();
    assert_eq!(err.exit_code(), EXIT_PARSE);
}

fn run_args(schedule: PathBuf, out: PathBuf, seeds: u32) -> RunArgs {
    RunArgs {
        schedule,
        seeds,
        seed_start: 0,
        checks: true,
        bound_coefficient: None,
        skip_verify: false,
        emit_traces: false,
        out,
    }
}

#[test]
fn run_produces_deterministic_stats_and_clean_checks() {
    let dir = tempfile::tempdir().unwrap();
    let schedule = dir.path().join("static.jsonl");
    cmd_generate(&gen_args("static", 8, 2, 10, 0, schedule.clone())).unwrap();

    let out1 = dir.path().join("first");
    let out2 = dir.path().join("second");
    cmd_run(&run_args(schedule.clone(), out1.clone(), 100)).unwrap();
    cmd_run(&run_args(schedule.clone(), out2.clone(), 100)).unwrap();
    let a = std::fs::read(out1.join("stats.csv")).unwrap();
    let b = std::fs::read(out2.join("stats.csv")).unwrap();
    assert_eq!(a, b, "same config must produce identical stats files");
    assert!(!out1.join("violations.jsonl").exists());
    assert!(out1.join("config.json").exists());
}

#[test]
fn run_reports_violations_on_a_partitioned_schedule() {
    // Two cliques that never connect: independent elections break agreement,
    // and the oracle findings must surface as the violations exit class.
    let dir = tempfile::tempdir().unwrap();
    let schedule = dir.path().join("split.jsonl");
    let mut text = String::from(
        r#"{"format":"dynelect-schedule/v1","n":4,"d":2,"horizon":12,"generator":"hand","seed":0}"#,
    );
    text.push('\n');
    for r in 1..=12 {
        text.push_str(&format!(
            r#"{{"round":{r},"vertices":[1,2,3,4],"edges":[[1,2],[3,4]]}}"#
        ));
        text.push('\n');
    }
    std::fs::write(&schedule, text).unwrap();

    // Without the override the flooding check refuses the schedule.
    let err = cmd_run(&run_args(schedule.clone(), dir.path().join("refused"), 2)).unwrap_err();
    assert_eq!(err.exit_code(), EXIT_VALIDATION);

    let mut args = run_args(schedule, dir.path().join("out"), 5);
    args.skip_verify = true;
    let err = cmd_run(&args).unwrap_err();
    assert_eq!(err.exit_code(), EXIT_VIOLATIONS);
    let report = std::fs::read_to_string(dir.path().join("out").join("violations.jsonl")).unwrap();
    assert!(report.contains("agreement"));
    assert!(report.contains("uniqueness"));
}

#[test]
fn run_rejects_corrupted_schedule_file() {
    let dir = tempfile::tempdir().unwrap();
    let schedule = dir.path().join("bad.jsonl");
    std::fs::write(&schedule, "this is not a schedule\n").unwrap();
    let err = cmd_run(&run_args(schedule, dir.path().join("out"), 2)).unwrap_err();
    assert_eq!(err.exit_code(), EXIT_PARSE);
}

#[test]
fn run_emits_traces_on_request() {
    let dir = tempfile::tempdir().unwrap();
    let schedule = dir.path().join("s.jsonl");
    cmd_generate(&gen_args("churn", 6, 2, 8, 3, schedule.clone())).unwrap();
    let mut args = run_args(schedule, dir.path().join("out"), 3);
    args.emit_traces = true;
    cmd_run(&args).unwrap();
    for seed in 0..3 {
        assert!(dir
            .path()
            .join("out")
            .join(format!("trace_{seed}.jsonl"))
            .exists());
    }
}

#[test]
fn scaling_refuses_thin_configurations() {
    let base = ScalingArgs {
        n: vec![4, 8, 16],
        d: vec![2, 3],
        seeds: 1000,
        seed_start: 0,
        churn: 0.5,
        bound_coefficient: 14,
        out: PathBuf::from("unused"),
    };
    let mut few_n = base.clone();
    few_n.n = vec![4, 8];
    assert!(matches!(
        scaling_campaign(&few_n),
        Err(CliError::Validation(_))
    ));
    let mut few_d = base.clone();
    few_d.d = vec![2];
    assert!(matches!(
        scaling_campaign(&few_d),
        Err(CliError::Validation(_))
    ));
    let mut few_seeds = base;
    few_seeds.seeds = 999;
    assert!(matches!(
        scaling_campaign(&few_seeds),
        Err(CliError::Validation(_))
    ));
}

#[test]
fn scaling_campaign_produces_a_full_grid() {
    let args = ScalingArgs {
        n: vec![3, 4, 6],
        d: vec![2, 3],
        seeds: 1000,
        seed_start: 0,
        churn: 0.5,
        bound_coefficient: 14,
        out: PathBuf::from("unused"),
    };
    let cells = scaling_campaign(&args).unwrap();
    assert_eq!(cells.len(), 6);
    for c in &cells {
        assert!(
            c.p99_termination > 0,
            "cell n={} d={} saw no elections",
            c.n,
            c.d
        );
        assert!(c.within_bound_fraction >= 0.99);
    }
}

#[test]
fn scaling_without_churn_resolves_within_four_diameters() {
    // One passive phase plus one uncontested election: every episode closes
    // by 4d rounds when nobody is ever removed.
    let args = ScalingArgs {
        n: vec![4, 8, 16],
        d: vec![2, 4],
        seeds: 1000,
        seed_start: 0,
        churn: 0.0,
        bound_coefficient: 14,
        out: PathBuf::from("unused"),
    };
    for c in scaling_campaign(&args).unwrap() {
        assert!(
            c.p99_termination <= 4 * c.d,
            "n={} d={}: p99 {} exceeds 4d",
            c.n,
            c.d,
            c.p99_termination
        );
    }
}

#[test]
fn lowerbound_campaign_rows_carry_the_analytic_floor() {
    let args = LowerboundArgs {
        n: 8,
        d: 2,
        epochs: 3,
        seeds: 2000,
        seed_start: 0,
        out: PathBuf::from("unused"),
    };
    let rows = lowerbound_campaign(&args).unwrap();
    assert_eq!(rows[0].empirical, 1.0);
    assert_eq!(rows[1].floor, 0.125);
    assert_eq!(rows[2].floor, 0.03125);
    for r in &rows {
        assert!(r.empirical >= r.floor - 3.0 * r.std_err, "row {:?}", r);
    }
}

#[test]
fn lowerbound_command_writes_table_and_sidecar() {
    let dir = tempfile::tempdir().unwrap();
    let args = LowerboundArgs {
        n: 8,
        d: 2,
        epochs: 3,
        seeds: 500,
        seed_start: 0,
        out: dir.path().to_path_buf(),
    };
    cmd_lowerbound(&args).unwrap();
    let table = std::fs::read_to_string(dir.path().join("lowerbound.csv")).unwrap();
    assert!(table.starts_with("# config "));
    assert!(table.contains("i,empirical_no_leader,floor,std_err"));
    assert!(dir.path().join("config.json").exists());
}

#[test]
fn verify_accepts_good_schedules_and_flags_broken_ones() {
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("good.jsonl");
    cmd_generate(&gen_args("lower-bound", 8, 3, 4, 2, good.clone())).unwrap();
    cmd_verify(&VerifyArgs {
        schedule: good,
        trace: None,
        termination_bound: None,
    })
    .unwrap();

    // Hand-build an edgeless schedule with two coexisting nodes.
    let broken = dir.path().join("broken.jsonl");
    let mut text = String::from(
        r#"{"format":"dynelect-schedule/v1","n":2,"d":2,"horizon":4,"generator":"hand","seed":0}"#,
    );
    text.push('\n');
    for r in 1..=4 {
        text.push_str(&format!(r#"{{"round":{r},"vertices":[1,2],"edges":[]}}"#));
        text.push('\n');
    }
    std::fs::write(&broken, text).unwrap();
    let err = cmd_verify(&VerifyArgs {
        schedule: broken,
        trace: None,
        termination_bound: None,
    })
    .unwrap_err();
    assert_eq!(err.exit_code(), EXIT_VALIDATION);
}

#[test]
fn verify_recheck_of_emitted_traces_is_clean() {
    let dir = tempfile::tempdir().unwrap();
    let schedule = dir.path().join("s.jsonl");
    cmd_generate(&gen_args("churn", 6, 2, 10, 4, schedule.clone())).unwrap();
    let mut args = run_args(schedule.clone(), dir.path().join("out"), 2);
    args.emit_traces = true;
    cmd_run(&args).unwrap();
    cmd_verify(&VerifyArgs {
        schedule,
        trace: Some(dir.path().join("out").join("trace_1.jsonl")),
        termination_bound: None,
    })
    .unwrap();
}

/// End-to-end through the real binary: subcommands and exit codes.
#[test]
fn binary_exit_codes_match_the_documented_classes() {
    let bin = env!("CARGO_BIN_EXE_dynelect");
    let dir = tempfile::tempdir().unwrap();
    let schedule = dir.path().join("s.jsonl");

    let status = Command::new(bin)
        .args([
            "generate",
            "lower-bound",
            "--n",
            "8",
            "--d",
            "3",
            "--epochs",
            "4",
            "--seed-start",
            "7",
            "--out",
        ])
        .arg(&schedule)
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(EXIT_OK));

    let status = Command::new(bin)
        .args(["verify", "--schedule"])
        .arg(&schedule)
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(EXIT_OK));

    let status = Command::new(bin)
        .args(["run", "--seeds", "5", "--skip-verify", "--schedule"])
        .arg(&schedule)
        .arg("--out")
        .arg(dir.path().join("out"))
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(EXIT_OK));

    // Unknown flag: usage error class.
    let status = Command::new(bin)
        .args(["run", "--no-such-flag"])
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(EXIT_PARSE));

    // Corrupt schedule: parse class.
    let bad = dir.path().join("bad.jsonl");
    std::fs::write(&bad, "garbage\n").unwrap();
    let status = Command::new(bin)
        .args(["verify", "--schedule"])
        .arg(&bad)
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(EXIT_PARSE));
}
