//! Smoke tests of the `optiforge` binary: every subcommand end to end over
//! temp files, including the byte-identical regeneration guarantee.

use std::path::{Path, PathBuf};
use std::process::Command;

use optiforge::fixtures;
use optiforge::harness::write_jsonl;
use optiforge::reward::Candidate;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_optiforge"))
}

fn tmp(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("optiforge-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn run_ok(cmd: &mut Command) -> String {
    let out = cmd.output().expect("binary runs");
    assert!(
        out.status.success(),
        "stdout: {}\nstderr: {}",
        String::from_utf8_lossy(&out.stdout),
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8_lossy(&out.stdout).to_string()
}

#[test]
fn generate_is_byte_identical_across_reruns() {
    let a = tmp("gen-a.jsonl");
    let b = tmp("gen-b.jsonl");
    for out in [&a, &b] {
        run_ok(bin().args([
            "generate",
            "--category",
            "milp",
            "--family",
            "knapsack",
            "--count",
            "4",
            "--seed",
            "42",
            "--out",
            out.to_str().unwrap(),
        ]));
    }
    let bytes_a = std::fs::read(&a).unwrap();
    let bytes_b = std::fs::read(&b).unwrap();
    assert!(!bytes_a.is_empty());
    assert_eq!(bytes_a, bytes_b);
    assert_eq!(
        std::fs::read(format!("{}.report.json", a.display())).unwrap(),
        std::fs::read(format!("{}.report.json", b.display())).unwrap()
    );
    // sidecar report exists and balances
    let report: serde_json::Value = serde_json::from_str(
        &std::fs::read_to_string(format!("{}.report.json", a.display())).unwrap(),
    )
    .unwrap();
    assert_eq!(report["accepted"], 4);
}

#[test]
fn solve_verify_reward_eval_pipeline() {
    let dataset = tmp("fixtures.jsonl");
    let fixtures_vec = vec![fixtures::farming_lp(), fixtures::warehouse_milp()];
    write_jsonl(&dataset, &fixtures_vec).unwrap();

    // solve
    let solved = tmp("solved.jsonl");
    run_ok(bin().args([
        "solve",
        "--input",
        dataset.to_str().unwrap(),
        "--out",
        solved.to_str().unwrap(),
    ]));
    let lines: Vec<serde_json::Value> = std::fs::read_to_string(&solved)
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(lines.len(), 2);
    assert_eq!(lines[0]["status"], "optimal");
    let farming_obj = lines[0]["objective"].as_f64().unwrap();
    assert!((farming_obj - fixtures::FARMING_OBJECTIVE).abs() < 1e-3);

    // verify
    let verify_out = run_ok(bin().args(["verify", "--dataset", dataset.to_str().unwrap()]));
    for line in verify_out.lines() {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        assert_eq!(v["pass"], true, "{line}");
    }

    // reward with ground-truth candidates
    let candidates = tmp("candidates.jsonl");
    let sets: Vec<serde_json::Value> = fixtures_vec
        .iter()
        .map(|w| {
            serde_json::json!({
                "problem_id": w.id,
                "samples": [Candidate::from_ir(w.formulation.clone())],
            })
        })
        .collect();
    write_jsonl(&candidates, &sets).unwrap();
    let reward_out = run_ok(bin().args([
        "reward",
        "--dataset",
        dataset.to_str().unwrap(),
        "--candidates",
        candidates.to_str().unwrap(),
    ]));
    for line in reward_out.lines() {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        assert_eq!(v["breakdown"]["total"].as_f64().unwrap(), 1.2, "{line}");
    }

    // eval
    let eval_out = run_ok(bin().args([
        "eval",
        "--dataset",
        dataset.to_str().unwrap(),
        "--candidates",
        candidates.to_str().unwrap(),
        "--k",
        "1",
    ]));
    let report: serde_json::Value = serde_json::from_str(&eval_out).unwrap();
    assert_eq!(report["overall"]["pass_at_1"].as_f64().unwrap(), 1.0);
    assert_eq!(report["overall"]["sc_at_k"].as_f64().unwrap(), 1.0);
}

#[test]
fn curriculum_with_perfect_oracle_reaches_terminal_phase() {
    let easy = tmp("easy.jsonl");
    let hard = tmp("hard.jsonl");
    let t = optiforge::instancer::TemplateSpec::new(
        optiforge::instancer::Family::Knapsack,
        optiforge::problem::Difficulty::Easy,
    );
    let (ws, _) = optiforge::instancer::generate_dataset(&t, 3, 5).unwrap();
    write_jsonl(&easy, &ws).unwrap();
    let hard_ws: Vec<_> = ws
        .iter()
        .cloned()
        .map(|mut w| {
            w.difficulty = optiforge::problem::Difficulty::Hard;
            w.id = format!("{}-hard", w.id);
            w
        })
        .collect();
    write_jsonl(&hard, &hard_ws).unwrap();

    let out = run_ok(bin().args([
        "curriculum",
        "--policy",
        "oracle:1.0",
        "--easy",
        easy.to_str().unwrap(),
        "--hard",
        hard.to_str().unwrap(),
        "--group",
        "2",
    ]));
    let records: Vec<serde_json::Value> = out
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(records.len(), 2);
    assert_eq!(records[0]["phase"], 1);
    assert_eq!(records[0]["advanced"], true);
    assert_eq!(records[1]["next_phase"], 3);
}

#[test]
fn solve_accepts_bare_formulations() {
    let input = tmp("bare.jsonl");
    let w = fixtures::farming_lp();
    write_jsonl(&input, std::slice::from_ref(&w.formulation)).unwrap();
    let out = run_ok(bin().args(["solve", "--input", input.to_str().unwrap()]));
    let v: serde_json::Value = serde_json::from_str(out.lines().next().unwrap()).unwrap();
    assert_eq!(v["status"], "optimal");
    assert!(v.get("id").is_none());
}

#[test]
fn missing_file_reports_error() {
    let out = bin()
        .args(["solve", "--input", "/nonexistent/nope.jsonl"])
        .output()
        .unwrap();
    assert!(!out.status.success());
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("nope.jsonl"), "{stderr}");
}

#[test]
fn jsonl_outputs_parse_back_with_the_same_toolchain() {
    // CLI output is itself valid JSONL input for the library readers
    let dataset = tmp("roundtrip.jsonl");
    write_jsonl(&dataset, &[fixtures::warehouse_milp()]).unwrap();
    let solved = tmp("roundtrip-solved.jsonl");
    run_ok(bin().args([
        "solve",
        "--input",
        dataset.to_str().unwrap(),
        "--out",
        solved.to_str().unwrap(),
    ]));
    let records: Vec<optiforge::harness::SolveRecord> =
        optiforge::harness::read_jsonl(Path::new(&solved)).unwrap();
    assert_eq!(records.len(), 1);
    assert_eq!(records[0].objective, fixtures::WAREHOUSE_OBJECTIVE);
}
