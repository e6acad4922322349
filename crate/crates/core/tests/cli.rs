mod common;

use common::*;
use serde_json::Value;

const FAST: [&str; 4] = ["--real-samples", "500", "--odd-samples", "500"];

fn verify(instance: &str, extra: &[&str]) -> std::process::Output {
    let path = instance_path(instance);
    let mut args = vec!["verify", path.to_str().unwrap()];
    args.extend_from_slice(extra);
    run_cli(&args)
}

fn report(o: &std::process::Output) -> Value {
    serde_json::from_str(&stdout(o)).expect("report is JSON")
}

#[test]
fn verify_quartic_is_obstructed() {
    let o = verify("quartic", &FAST);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let r = report(&o);
    assert_eq!(r["verdict"], "OBSTRUCTED");
    assert!(r["flags"]
        .as_array()
        .unwrap()
        .iter()
        .any(|f| f == "strong_approximation_obstruction"));
}

#[test]
fn verify_cubic_is_obstructed_over_z() {
    let o = verify("cubic", &FAST);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let r = report(&o);
    assert_eq!(r["verdict"], "OBSTRUCTED");
    assert!(r["flags"]
        .as_array()
        .unwrap()
        .iter()
        .any(|f| f == "hasse_over_Z"));
}

#[test]
fn quartic_target_minus_one_has_the_obvious_point() {
    let o = verify("quartic", &[&FAST[..], &["--target", "-1"]].concat());
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let r = report(&o);
    assert_eq!(r["verdict"], "NOT_OBSTRUCTED");
    let sols = &r["per_target"][0]["solutions"];
    assert_eq!(sols[0]["point"], serde_json::json!([0, 1, 0]));
    assert_eq!(sols[0]["profile"]["sum"], "0");
}

#[test]
fn inconsistent_instance_exits_2() {
    let path = fixture_path("inconsistent");
    let o = run_cli(&[
        "verify",
        path.to_str().unwrap(),
        "--real-samples",
        "10",
        "--odd-samples",
        "10",
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("inconsistency"), "{}", stderr(&o));
}

#[test]
fn split_algebra_is_inconclusive() {
    let path = fixture_path("inconclusive");
    let o = run_cli(&[
        "verify",
        path.to_str().unwrap(),
        "--real-samples",
        "10",
        "--odd-samples",
        "10",
    ]);
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));
    assert_eq!(report(&o)["verdict"], "INCONCLUSIVE");
}

#[test]
fn usage_errors_exit_1() {
    assert_eq!(run_cli(&["verify"]).status.code(), Some(1));
    assert_eq!(
        run_cli(&["verify", "/nonexistent/instance.json"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(verify("quartic", &["--jobs", "0"]).status.code(), Some(1));
    assert_eq!(verify("quartic", &["--target", "0"]).status.code(), Some(1));
    assert_eq!(run_cli(&["hilbert", "3", "3", "9"]).status.code(), Some(1));
    assert_eq!(
        run_cli(&["torsion", "1", "0", "0", "0"]).status.code(),
        Some(1)
    );
    assert_eq!(run_cli(&["--help"]).status.code(), Some(0));
}

#[test]
fn schema_errors_name_the_key() {
    let dir = tempfile::tempdir().unwrap();
    let text = std::fs::read_to_string(instance_path("quartic")).unwrap();
    for (from, to, key) in [
        ("\"sieve_modulus\"", "\"sieve_modulos\"", "sieve_modulos"),
        ("\"name\"", "\"colour\": 1, \"name\"", "colour"),
        ("\"prime_max\"", "\"prime_maximum\"", "prime_maximum"),
    ] {
        let path = dir.path().join("bad.json");
        std::fs::write(&path, text.replacen(from, to, 1)).unwrap();
        let o = run_cli(&["verify", path.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(1));
        assert!(stderr(&o).contains(key), "{}", stderr(&o));
    }
}

#[test]
fn reports_are_byte_stable_across_runs_and_jobs() {
    let args = [&FAST[..], &["--seed", "99"]].concat();
    let a = verify("cubic", &args);
    let b = verify("cubic", &args);
    let c = verify("cubic", &[&args[..], &["--jobs", "3"]].concat());
    let d = verify("cubic", &[&args[..], &["--jobs", "1"]].concat());
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stdout, c.stdout);
    assert_eq!(a.stdout, d.stdout);
    let e = verify("cubic", &[&FAST[..], &["--seed", "100"]].concat());
    assert_ne!(a.stdout, e.stdout);
}

#[test]
fn seed_precedence() {
    let path = instance_path("cubic");
    let run = |env: Option<&str>, flag: Option<&str>| {
        let mut cmd = std::process::Command::new(env!("CARGO_BIN_EXE_obstruction-lab"));
        cmd.args(["verify", path.to_str().unwrap()])
            .args(FAST)
            .env_remove("OBSTRUCTION_LAB_SEED");
        if let Some(e) = env {
            cmd.env("OBSTRUCTION_LAB_SEED", e);
        }
        if let Some(s) = flag {
            cmd.args(["--seed", s]);
        }
        let out = cmd.output().unwrap();
        serde_json::from_slice::<Value>(&out.stdout).unwrap()["seed"]
            .as_u64()
            .unwrap()
    };
    assert_eq!(run(None, None), 3141);
    assert_eq!(run(Some("5"), None), 5);
    assert_eq!(run(Some("5"), Some("6")), 6);
}

#[test]
fn out_flag_writes_the_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.json");
    let o = verify(
        "cubic",
        &[&FAST[..], &["--out", out.to_str().unwrap()]].concat(),
    );
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let r: Value = serde_json::from_str(&std::fs::read_to_string(out).unwrap()).unwrap();
    assert_eq!(r["verdict"], "OBSTRUCTED");
}

#[test]
fn subcommand_lines() {
    let q = instance_path("quartic");
    let q = q.to_str().unwrap();
    let c = instance_path("cubic");
    let c = c.to_str().unwrap();

    assert_eq!(
        stdout(&run_cli(&["hilbert", "3", "3", "2"])),
        "{\"symbol\": -1, \"invariant\": \"1/2\"}\n"
    );
    assert_eq!(
        stdout(&run_cli(&["hilbert", "1", "7", "real"])),
        "{\"symbol\": 1, \"invariant\": \"0\"}\n"
    );
    assert_eq!(
        stdout(&run_cli(&["torsion", "64", "64", "8", "-7"])),
        "{\"group\": \"Z/2\", \"points\": [[16, 0]]}\n"
    );

    let o = run_cli(&["reciprocity", "3/7", "-5"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).ends_with("\"sum\": \"0\"}\n"));

    let o = run_cli(&["sieve", c, "-m", "2"]);
    assert_eq!(
        stdout(&o),
        "{\"modulus\": 2, \"target\": 1, \"count\": 2, \"classes\": [[0, 0, 1], [1, 0, 1]]}\n"
    );

    let o = run_cli(&["profile", q, "-P", "0,1,0"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(
        (v["a"].as_i64(), v["b"].as_i64(), v["sum"].as_str()),
        (Some(22), Some(154), Some("0"))
    );
    assert_eq!(
        run_cli(&["profile", c, "-P", "1,1,0"]).status.code(),
        Some(1)
    );
    assert_eq!(run_cli(&["profile", c, "-P", "1,1"]).status.code(), Some(1));

    let o = run_cli(&["local", q, "-p", "2"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["verdict"], "yes");
    assert_eq!(
        v["witness"]["certificate"]["poly"],
        serde_json::json!([17, 0, 0, 0, -1])
    );

    let o = run_cli(&["search", q, "-B", "2", "--target", "-1"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v[0]["solutions"], serde_json::json!([[0, 1, 0]]));
    let o = run_cli(&["search", c, "-B", "20"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 2);

    let o = run_cli(&["table", c]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v["entries"]
        .as_array()
        .unwrap()
        .iter()
        .all(|e| e["invariant"] == "1/2" && e["level"] == 2));
}
