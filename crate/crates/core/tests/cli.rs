use std::path::Path;
use std::process::{Command, Output};

fn hyplab(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hyplab"))
        .args(args)
        .current_dir(dir)
        .env_remove("HYPLAB_SEED")
        .output()
        .expect("binary runs")
}

fn json(path: &Path) -> serde_json::Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn invariants_of_a_horosphere() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("inv.json");
    let o = hyplab(
        &["invariants", "--c", "-1", "--alpha", "2", "--lambda", "1", "--nu", "1", "--out", out.to_str().unwrap()],
        dir.path(),
    );
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v = json(&out);
    assert_eq!(v["rho_star"].as_f64().unwrap(), -6.0);
    assert_eq!(v["star_scalar_half"].as_f64().unwrap(), -3.0);
    assert_eq!(v["ricci"].as_array().unwrap().len(), 3);
}

#[test]
fn classify_reports_every_predicate() {
    let dir = tempfile::tempdir().unwrap();
    let o = hyplab(&["classify", "--c", "1", "--alpha", "1", "--beta", "1"], dir.path());
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(v.as_object().unwrap().len() > 3);
}

#[test]
fn catalog_entries() {
    let dir = tempfile::tempdir().unwrap();
    let o = hyplab(&["catalog", "--kind", "B", "--alpha", "3", "--c", "1"], dir.path());
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!((v["rho_star"].as_f64().unwrap() - 6.0).abs() < 1e-12);
    assert!(hyplab(&["catalog", "--kind", "E", "--c", "-1"], dir.path()).status.success());
    assert_eq!(hyplab(&["catalog", "--kind", "Z", "--c", "1"], dir.path()).status.code(), Some(2));
}

#[test]
fn small_verify_run_passes() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.json");
    let o = hyplab(
        &["verify", "--suite", "oracles,berndt", "--samples", "20", "--seed", "3", "--out", out.to_str().unwrap()],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v = json(&out);
    assert_eq!(v["passed"], true);
    assert_eq!(v["seed"], 3);
    assert_eq!(v["suites"].as_array().unwrap().len(), 2);
}

#[test]
fn impossible_tolerance_fails_with_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let o = hyplab(&["verify", "--suite", "oracles", "--samples", "50", "--tol", "0"], dir.path());
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn seed_from_environment_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let run = |seed: &str| {
        Command::new(env!("CARGO_BIN_EXE_hyplab"))
            .args(["verify", "--suite", "oracles,pseudo-ryan-equiv", "--samples", "30"])
            .env("HYPLAB_SEED", seed)
            .current_dir(dir.path())
            .output()
            .unwrap()
    };
    let (a, b, c) = (run("9"), run("9"), run("10"));
    assert_eq!(a.stdout, b.stdout);
    assert_ne!(a.stdout, c.stdout);
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["seed"], 9);
}

#[test]
fn invalid_input_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        vec!["verify", "--suite", "nope"],
        vec!["invariants", "--c", "1", "--bogus", "1"],
        vec!["invariants", "--c", "0"],
        vec!["construct", "ode", "--c", "1", "--alpha", "0", "--beta", "1", "--lambda", "0", "--nu", "exp:1", "--t1", "1"],
        vec!["curve", "--c", "1", "--t1", "1", "--dt", "-0.1"],
    ] {
        let o = hyplab(&args, dir.path());
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(!o.stderr.is_empty());
    }
}

#[test]
fn pseudo_ryan_blow_up_writes_partial_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("pr.csv");
    let o = hyplab(
        &[
            "construct", "pseudo-ryan", "--c", "-1", "--alpha", "1.5", "--beta", "1", "--lambda", "2", "--nu", "1",
            "--t1", "2", "--dt", "1e-3", "--out", out.to_str().unwrap(),
        ],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("wrote samples up to t ="));
    let text = std::fs::read_to_string(&out).unwrap();
    let rows = text.lines().count() - 1;
    assert!((200..260).contains(&rows), "{rows}");
}

#[test]
fn ode_and_curve_csv() {
    let dir = tempfile::tempdir().unwrap();
    let o = hyplab(
        &["construct", "ode", "--c", "1", "--alpha", "0.5", "--beta", "1", "--lambda", "0.2", "--nu", "sin:0.3,1,0,0.4", "--t1", "0.5", "--dt", "0.01"],
        dir.path(),
    );
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(String::from_utf8_lossy(&o.stdout).lines().count(), 52);

    let o = hyplab(&["curve", "--c", "-1", "--k1", "sin:1,1,0,0", "--t1", "1", "--dt", "0.1"], dir.path());
    assert!(o.status.success());
    let text = String::from_utf8(o.stdout).unwrap();
    let header: Vec<&str> = text.lines().next().unwrap().split(',').collect();
    assert_eq!(header.len(), 19);
    assert_eq!(header[0], "t");
    assert_eq!(text.lines().count(), 12);
}
