//! Black-box tests of the `detperm` binary: output schemas, exit codes,
//! format round-trips and determinism across runs and thread budgets.

use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_detperm"))
        .args(args)
        .env_remove("THREADS")
        .output()
        .expect("binary runs")
}

fn run_env(args: &[&str], key: &str, value: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_detperm"))
        .args(args)
        .env(key, value)
        .output()
        .expect("binary runs")
}

fn stdout_lines(out: &Output) -> Vec<serde_json::Value> {
    String::from_utf8_lossy(&out.stdout)
        .lines()
        .map(|l| serde_json::from_str(l).unwrap_or_else(|e| panic!("bad json line {l:?}: {e}")))
        .collect()
}

#[test]
fn det_a1_15_reports_match() {
    let out = run(&["det", "--family", "a1", "--n", "15", "--method", "both", "--output", "json"]);
    assert!(out.status.success());
    let items = stdout_lines(&out);
    assert_eq!(items.len(), 1);
    assert_eq!(items[0]["closed"], "4201");
    assert_eq!(items[0]["computed"], "4201");
    assert_eq!(items[0]["match"], true);
}

#[test]
fn det_b_2_is_zero() {
    let out = run(&["det", "--family", "b", "--n", "2", "--output", "json"]);
    assert!(out.status.success());
    let items = stdout_lines(&out);
    assert_eq!(items[0]["closed"], "0");
    assert_eq!(items[0]["computed"], "0");
}

#[test]
fn det_range_runs_per_n() {
    let out = run(&["det", "--family", "a1", "--n", "1..15", "--output", "json"]);
    assert!(out.status.success());
    let items = stdout_lines(&out);
    assert_eq!(items.len(), 15);
    let dets: Vec<String> = items
        .iter()
        .map(|i| i["computed"].as_str().unwrap().to_string())
        .collect();
    assert_eq!(
        dets.join(", "),
        "1, 2, 7, 21, 51, 106, 197, 337, 541, 826, 1211, 1717, 2367, 3186, 4201"
    );
}

#[test]
fn conjecture_41i_small_primes_pass() {
    let out = run(&["conjecture", "--id", "4.1i", "--pmax", "7", "--output", "json"]);
    assert!(out.status.success());
    let items = stdout_lines(&out);
    assert_eq!(items.len(), 4);
    for item in &items {
        assert_eq!(item["pass"], true);
    }
    assert_eq!(items[2]["p"], 5);
    assert_eq!(items[2]["computed"], "3");
}

#[test]
fn conjecture_output_independent_of_thread_budget() {
    let a = run(&["conjecture", "--id", "4.2", "--pmax", "13", "--output", "json", "--threads", "1"]);
    let b = run(&["conjecture", "--id", "4.2", "--pmax", "13", "--output", "json", "--threads", "4"]);
    assert!(a.status.success() && b.status.success());
    assert_eq!(a.stdout, b.stdout);
    // THREADS env is honored the same way
    let c = run_env(
        &["conjecture", "--id", "4.2", "--pmax", "13", "--output", "json"],
        "THREADS",
        "3",
    );
    assert_eq!(a.stdout, c.stdout);
}

#[test]
fn identical_commands_are_byte_identical() {
    let args = ["det", "--family", "a2", "--n", "1..10", "--output", "json"];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(run(&["det", "--family", "zzz", "--n", "3"]).status.code(), Some(2));
    assert_eq!(run(&["det", "--family", "a1", "--n", "0"]).status.code(), Some(2));
    assert_eq!(run(&["det", "--family", "a1", "--n", "9..3"]).status.code(), Some(2));
    assert_eq!(run(&["conjecture", "--id", "bogus", "--pmax", "5"]).status.code(), Some(2));
    assert_eq!(
        run(&["conjecture", "--id", "4.2", "--pmax", "29"]).status.code(),
        Some(2),
        "pmax beyond the desk ceiling needs --allow-large"
    );
    assert_eq!(run(&["spectrum", "--family", "a1", "--n", "2"]).status.code(), Some(2));
    assert_eq!(run(&["nonsense"]).status.code(), Some(2));
    // --dump cannot be rendered in csv
    assert_eq!(
        run(&["det", "--family", "a1", "--n", "2", "--dump", "--output", "csv"]).status.code(),
        Some(2)
    );
}

#[test]
fn csv_round_trips_through_a_csv_parser() {
    let out = run(&["hankel", "--nmax", "12", "--output", "csv"]);
    assert!(out.status.success());
    let mut rdr = csv::Reader::from_reader(&out.stdout[..]);
    assert_eq!(
        rdr.headers().unwrap().iter().collect::<Vec<_>>(),
        vec!["n", "hankel_det", "expected", "pass"]
    );
    let rows: Vec<csv::StringRecord> = rdr.records().map(|r| r.unwrap()).collect();
    assert_eq!(rows.len(), 12);
    assert_eq!(&rows[2][1], "-1");
    assert_eq!(&rows[2][3], "true");

    let out = run(&["det", "--family", "a2", "--n", "1..5", "--output", "csv"]);
    let mut rdr = csv::Reader::from_reader(&out.stdout[..]);
    let rows: Vec<csv::StringRecord> = rdr.records().map(|r| r.unwrap()).collect();
    assert_eq!(rows.len(), 5);
    assert_eq!(&rows[1][3], "9/2"); // det(A2) at n = 2
}

#[test]
fn dump_includes_matrix_json() {
    let out = run(&["det", "--family", "a1", "--n", "2", "--dump", "--output", "json"]);
    assert!(out.status.success());
    let items = stdout_lines(&out);
    let m = &items[0]["matrix"];
    assert_eq!(m["rows"], 2);
    assert_eq!(m["kind"], "integer");
    assert_eq!(m["entries"][0][1], "-1");
    let out = run(&["det", "--family", "a2", "--n", "2", "--dump", "--output", "json"]);
    let items = stdout_lines(&out);
    assert_eq!(items[0]["matrix"]["kind"], "rational");
    assert_eq!(items[0]["matrix"]["entries"][0][1], "-1/2");
}

#[test]
fn reduce_b_final_values() {
    let out = run(&["reduce-b", "--n", "5..8", "--output", "json"]);
    assert!(out.status.success());
    let items = stdout_lines(&out);
    let finals: Vec<&str> = items.iter().map(|i| i["final_value"].as_str().unwrap()).collect();
    assert_eq!(finals, vec!["3", "0", "-3", "1"]);
    assert!(items.iter().all(|i| i["ok"] == true));
    assert!(items[0].get("steps").is_none());

    let out = run(&["reduce-b", "--n", "9", "--trace", "--output", "json"]);
    let items = stdout_lines(&out);
    let steps = items[0]["steps"].as_array().unwrap();
    assert_eq!(steps.len(), 4); // C, two deletions, terminal
    assert!(steps.iter().all(|s| s.get("snapshot").is_some()));
}

#[test]
fn permanent_modular_and_exact() {
    let out = run(&["permanent", "--family", "a1", "--n", "4", "--modulus", "5", "--output", "json"]);
    assert!(out.status.success());
    let items = stdout_lines(&out);
    assert_eq!(items[0]["value"], "3");

    let out = run(&["permanent", "--family", "a2", "--n", "6", "--method", "both", "--output", "json"]);
    let items = stdout_lines(&out);
    assert_eq!(items[0]["value"], "156935/128");
    assert_eq!(items[0]["match"], true);

    // rational family cannot be reduced
    assert_eq!(
        run(&["permanent", "--family", "a2", "--n", "4", "--modulus", "5"]).status.code(),
        Some(2)
    );
}

#[test]
fn out_writes_the_same_bytes() {
    let dir = std::env::temp_dir().join(format!("detperm-out-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("scan.jsonl");
    let direct = run(&["conjecture", "--id", "s11.23", "--pmax", "11", "--output", "json"]);
    let to_file = run(&[
        "conjecture", "--id", "s11.23", "--pmax", "11", "--output", "json",
        "--out", path.to_str().unwrap(),
    ]);
    assert!(to_file.status.success());
    assert!(to_file.stdout.is_empty());
    assert_eq!(std::fs::read(&path).unwrap(), direct.stdout);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn selftest_passes_and_is_deterministic_on_stdout() {
    let out = run(&["selftest", "--output", "json"]);
    assert!(out.status.success(), "selftest failed:\n{}", String::from_utf8_lossy(&out.stdout));
    let items = stdout_lines(&out);
    assert_eq!(items.len(), 10);
    for item in &items {
        assert_eq!(item["pass"], true, "criterion {} failed", item["criterion"]);
    }
}
