//! End-to-end tests of the `rtm` binary: the exit-code contract
//! (0 success, 1 verification failure, 2 usage error), file formats, and
//! determinism of emitted artifacts.

use std::fs;
use std::process::{Command, Output};

fn rtm() -> Command {
    Command::new(env!("CARGO_BIN_EXE_rtm"))
}

fn run(args: &[&str]) -> Output {
    rtm().args(args).output().expect("spawning rtm")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

const FRACTION: &str =
    "1244197046778066277036445468762843519/2407347121029120000000000000000000000";

#[test]
fn prove_coarse_run_fails_honestly_and_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a_path = dir.path().join("a.json");
    let b_path = dir.path().join("b.json");

    let out_a = run(&["prove", "--k", "250", "--out", a_path.to_str().unwrap()]);
    assert_eq!(code(&out_a), 1, "coarse margins must fail: {}", stderr(&out_a));
    assert!(stdout(&out_a).contains("verdict: fail"));
    assert!(stdout(&out_a).contains("comparison skipped"));

    let out_b = rtm()
        .args(["prove", "--k", "250", "--out", b_path.to_str().unwrap()])
        .env("RTM_THREADS", "1")
        .output()
        .unwrap();
    assert_eq!(code(&out_b), 1);

    let mut a: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(&a_path).unwrap()).unwrap();
    let mut b: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(&b_path).unwrap()).unwrap();
    assert_eq!(a["verdict"]["status"], "fail");
    assert_eq!(a["tables"]["compared"], false);
    assert!(!a["verdict"]["failures"].as_array().unwrap().is_empty());
    // Identical flags give identical certificates, timestamps aside.
    a["created_unix"] = 0.into();
    b["created_unix"] = 0.into();
    assert_eq!(a, b);
}

#[test]
fn prove_usage_errors() {
    let out = run(&["prove", "--out", "no-such-dir/cert.json"]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("does not exist"));

    assert_eq!(code(&run(&["prove", "--k", "0"])), 2);
    assert_eq!(code(&run(&["prove", "--r", "0"])), 2);
    assert_eq!(code(&run(&["prove", "--r", "abc"])), 2);
    assert_eq!(code(&run(&["prove", "--no-such-flag"])), 2);
}

#[test]
fn integrate_exact_logistic_reproduces_the_documented_fraction() {
    let out = run(&[
        "integrate",
        "--field",
        "logistic-demo",
        "--h",
        "1/100",
        "--k",
        "4",
        "--no-round",
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("rounding disabled (exact)"));
    assert!(text.contains(FRACTION));
}

#[test]
fn integrate_rejects_bad_configurations() {
    // Transcendental evaluations cannot run exactly.
    let out = run(&["integrate", "--field", "cmc-s4", "--no-round"]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("transcendental"));

    assert_eq!(code(&run(&["integrate", "--field", "no-such-field"])), 2);
    let theta0_on_scalar = run(&[
        "integrate",
        "--field",
        "logistic-demo",
        "--theta0",
        "1/2",
    ]);
    assert_eq!(code(&theta0_on_scalar), 2);
    let wrong_dim = run(&[
        "integrate",
        "--field",
        "logistic-demo",
        "--start",
        "1/2,1/3",
    ]);
    assert_eq!(code(&wrong_dim), 2);
    let pi_without_grid = run(&[
        "integrate",
        "--field",
        "logistic-demo",
        "--start",
        "pi/4",
        "--no-round",
    ]);
    assert_eq!(code(&pi_without_grid), 2);
}

#[test]
fn integrate_csv_feeds_curve() {
    let dir = tempfile::tempdir().unwrap();
    let traj = dir.path().join("traj.csv");
    let curve = dir.path().join("curve.csv");

    let out = run(&[
        "integrate",
        "--field",
        "cmc-s4",
        "--k",
        "5",
        "--out",
        traj.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let traj_text = fs::read_to_string(&traj).unwrap();
    assert!(traj_text.starts_with("step,t,u1,u2,u3\n"));
    assert_eq!(traj_text.lines().count(), 7);
    // The start state, grid-rounded: pi/2 floored, 5204/10^4 exact on grid.
    assert!(traj_text.contains("15707963267/10000000000,1301/2500,"));

    let out = run(&[
        "curve",
        "--input",
        traj.to_str().unwrap(),
        "--digits",
        "4",
        "--out",
        curve.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let curve_text = fs::read_to_string(&curve).unwrap();
    let mut lines = curve_text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "step,t,x_nonrigorous,y_nonrigorous,z_nonrigorous"
    );
    assert_eq!(lines.next().unwrap(), "0,0/1,0.8676,0.4972,0.0000");
}

#[test]
fn curve_handles_empty_and_missing_inputs() {
    let dir = tempfile::tempdir().unwrap();
    let empty = dir.path().join("empty.csv");
    fs::write(&empty, "step,t,u1,u2,u3\n").unwrap();
    let out = run(&["curve", "--input", empty.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    assert_eq!(
        stdout(&out),
        "step,t,x_nonrigorous,y_nonrigorous,z_nonrigorous\n"
    );

    let missing = dir.path().join("missing.csv");
    assert_eq!(code(&run(&["curve", "--input", missing.to_str().unwrap()])), 2);
    assert_eq!(code(&run(&["curve"])), 2);
}

#[test]
fn bounds_reports_and_exit_codes() {
    let ok = run(&["bounds"]);
    assert_eq!(code(&ok), 0, "{}", stderr(&ok));
    assert!(stdout(&ok).contains("[ok]"));
    assert!(!stdout(&ok).contains("FAIL"));

    let widened = run(&["bounds", "--box", "u2=0.4,0.9"]);
    assert_eq!(code(&widened), 1);
    assert!(stdout(&widened).contains("FAIL"));

    let json = run(&["bounds", "--json"]);
    assert_eq!(code(&json), 0);
    let reports: serde_json::Value = serde_json::from_str(&stdout(&json)).unwrap();
    assert_eq!(reports.as_array().unwrap().len(), 4);
    assert!(reports[0]["all_hold"].as_bool().unwrap());

    assert_eq!(code(&run(&["bounds", "--box", "u9=1,2"])), 2);
    assert_eq!(code(&run(&["bounds", "--box", "u2=nope"])), 2);
    assert_eq!(code(&run(&["bounds", "--box", "u2=0.9,0.4"])), 2);
}

#[test]
fn table_dumps_reference_end_states() {
    let short = run(&["table", "--horizon", "short"]);
    assert_eq!(code(&short), 0);
    let text = stdout(&short);
    assert_eq!(text.lines().count(), 17);
    assert!(text.starts_with("horizon,sample,u1,u2,u3\n"));
    assert!(text.contains("short,0,2644387103/2000000000,"));

    let both = run(&["table"]);
    assert_eq!(stdout(&both).lines().count(), 33);

    assert_eq!(code(&run(&["table", "--horizon", "weekly"])), 2);
}

#[test]
fn config_file_supplies_defaults_and_flags_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    fs::write(
        &cfg,
        r#"{"field": "logistic-demo", "h": "1/100", "k": 4, "no_round": true}"#,
    )
    .unwrap();

    let from_file = run(&["--config", cfg.to_str().unwrap(), "integrate"]);
    assert_eq!(code(&from_file), 0, "{}", stderr(&from_file));
    assert!(stdout(&from_file).contains(FRACTION));

    let overridden = run(&["--config", cfg.to_str().unwrap(), "integrate", "--k", "2"]);
    assert_eq!(code(&overridden), 0);
    let text = stdout(&overridden);
    assert!(text.contains("2 steps"));
    assert!(!text.contains(FRACTION));

    let bad = dir.path().join("bad.json");
    fs::write(&bad, r#"{"k": 4, "unknown_key": 1}"#).unwrap();
    assert_eq!(code(&run(&["--config", bad.to_str().unwrap(), "integrate"])), 2);
    let missing = dir.path().join("missing.json");
    assert_eq!(
        code(&run(&["--config", missing.to_str().unwrap(), "integrate"])),
        2
    );
}
