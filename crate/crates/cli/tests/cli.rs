use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_thue-verify")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn tmax_prints_bound() {
    let o = run(&["tmax"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(v["t_max"], 576241);
    assert_eq!(v["schema"], 1);
}

#[test]
fn theorem_at_minus_one() {
    let o = run(&["verify-theorem", "--t", "-1", "--y-bound", "100"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(v["count"], 6);
    assert_eq!(v["bounded_verification"], true);
}

#[test]
fn theorem_at_one_fails() {
    let o = run(&["verify-theorem", "--t", "1", "--y-bound", "10"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn reduce_at_ten() {
    let o = run(&["reduce", "--t", "10", "--Q", "1e60", "--A", "3e18"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(v["status"], "success");
    assert_eq!(v["kind"], "reduction");
}

#[test]
fn output_is_independent_of_workers() {
    let a = run(&["reduce", "--t-lo", "10", "--t-hi", "40", "--workers", "1"]);
    let b = run(&["reduce", "--t-lo", "10", "--t-hi", "40", "--workers", "16"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(stdout(&a).lines().count(), 31);
}

#[test]
fn usage_errors_exit_three() {
    assert_eq!(run(&["no-such-command"]).status.code(), Some(3));
    assert_eq!(run(&["reduce"]).status.code(), Some(3));
    assert_eq!(run(&["reduce", "--t", "10", "--Q", "-5"]).status.code(), Some(3));
    assert_eq!(run(&["reduce", "--t-lo", "20", "--t-hi", "10"]).status.code(), Some(3));
    assert_eq!(run(&["roots", "--t", "0"]).status.code(), Some(3));
}

#[test]
fn tiny_q_is_inconclusive() {
    // no convergent with q <= 10 * 10^5 can beat 1.01 A + 2 for A = 3e18
    let o = run(&["reduce", "--t", "10", "--Q", "10"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn sweep_writes_csv_and_checkpoint() {
    let d = tempfile::tempdir().unwrap();
    let out = d.path().join("s.jsonl");
    let csv = d.path().join("s.csv");
    let ck = d.path().join("s.ckpt");
    let args = [
        "sweep",
        "--t-lo",
        "10",
        "--t-hi",
        "20",
        "--output",
        out.to_str().unwrap(),
        "--csv",
        csv.to_str().unwrap(),
        "--checkpoint",
        ck.to_str().unwrap(),
    ];
    let o = run(&args);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(std::fs::read_to_string(&out).unwrap().lines().count(), 11);
    assert_eq!(std::fs::read_to_string(&csv).unwrap().lines().count(), 12);
    let cp: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&ck).unwrap()).unwrap();
    assert_eq!(cp["last_t"], 20);
    // resuming a finished sweep recomputes nothing
    let again = run(&args);
    let v: serde_json::Value = serde_json::from_str(stdout(&again).trim()).unwrap();
    assert_eq!(v["resumed_from"], 11);
}

#[test]
fn search_by_form() {
    let o = run(&["search", "--form", "1,-1,-2,1", "--y-bound", "100"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(v["count"], 9);
}
