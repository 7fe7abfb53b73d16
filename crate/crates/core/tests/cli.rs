use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn gma(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gma"))
        .current_dir(dir)
        .args(args)
        .env_remove("GMA_CONFIG")
        .env_remove("GMA_OUT")
        .env_remove("GMA_THREADS")
        .env_remove("GMA_TOL")
        .env_remove("GMA_SEED")
        .output()
        .expect("binary runs")
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "stdout is not one JSON report ({e}): {}",
            String::from_utf8_lossy(&out.stdout)
        )
    })
}

fn write(dir: &Path, name: &str, text: &str) {
    fs::write(dir.join(name), text).unwrap();
}

const SQUARE_FACETS: &str = r#""facets": [
    {"normal": [-1, 0], "support": 0}, {"normal": [0, -1], "support": 0},
    {"normal": [1, 0], "support": 1}, {"normal": [0, 1], "support": 1}]"#;

fn toric_config(classes: &str, checks: &str) -> String {
    format!(r#"{{{SQUARE_FACETS}, "classes": {classes}, {checks}}}"#)
}

#[test]
fn coeffs_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let out = gma(dir.path(), &["coeffs", "--n", "2", "--theta-hat", "2.356194490192345"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["command"], "coeffs");
    assert_eq!(r["exit_code"], 0);
    assert!((r["gamma"][0].as_f64().unwrap() - 2.0).abs() < 1e-12);
    assert!(!out.stderr.is_empty());

    let out = gma(dir.path(), &["coeffs", "--n", "2", "--theta-hat", "1.5707963267948966"]);
    assert_eq!(out.status.code(), Some(0));
    assert!((report(&out)["oracle"]["c"][0].as_f64().unwrap() - 1.0).abs() < 1e-12);

    let out = gma(dir.path(), &["coeffs", "--n", "3", "--theta-hat", "2.356194490192345"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(report(&out)["admissible"], false);

    let out = gma(dir.path(), &["coeffs", "--n", "3", "--theta-hat", "1.5707963267948966"]);
    assert_eq!(out.status.code(), Some(2));

    write(dir.path(), "c.json", r#"{"n": 3, "theta_hat": 3.9269908169872414, "convention": "DIRECT"}"#);
    let out = gma(dir.path(), &["coeffs", "--config", "c.json"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(report(&out)["convention"], "DIRECT");

    let out = gma(dir.path(), &["coeffs", "--n", "2"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(report(&out)["error"].is_string());
}

#[test]
fn malformed_inputs_exit_1() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "bad.json", r#"{"n": 2, "theta_hat": 1.0, "colour": "red"}"#);
    assert_eq!(gma(dir.path(), &["coeffs", "--config", "bad.json"]).status.code(), Some(1));
    assert_eq!(gma(dir.path(), &["toric"]).status.code(), Some(1));
    assert_eq!(gma(dir.path(), &["toric", "--config", "missing.json"]).status.code(), Some(1));
    write(dir.path(), "nonjson.json", "{");
    assert_eq!(gma(dir.path(), &["solve", "--config", "nonjson.json"]).status.code(), Some(1));
    assert_eq!(gma(dir.path(), &["no-such-command"]).status.code(), Some(1));

    write(
        dir.path(),
        "zero.json",
        &toric_config(r#"{"Omega": [0, 0, 3, 3]}"#, r#""theorem13": {"c": [0, 0]}"#),
    );
    let out = gma(dir.path(), &["toric", "--config", "zero.json"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(report(&out)["error"].as_str().unwrap().contains("c_1"));

    write(
        dir.path(),
        "mismatch.json",
        &toric_config(r#"{"Omega": [0, 0, 3]}"#, r#""theorem13": {"c": [1, 1]}"#),
    );
    assert_eq!(gma(dir.path(), &["toric", "--config", "mismatch.json"]).status.code(), Some(1));

    write(
        dir.path(),
        "two.json",
        r#"{"n": 2, "grid_size": 8, "background": {"scale": 1.0},
            "coefficients": {"values": [1, 0]}, "dhym": {"theta_hat": 2.0}}"#,
    );
    assert_eq!(gma(dir.path(), &["solve", "--config", "two.json"]).status.code(), Some(1));
    assert_eq!(gma(dir.path(), &["--threads", "0", "toric", "--config", "zero.json"]).status.code(), Some(1));
}

#[test]
fn toric_verdicts() {
    let dir = tempfile::tempdir().unwrap();
    write(
        dir.path(),
        "pass.json",
        &toric_config(
            r#"{"Omega": [0, 0, 3, 3], "alpha": [0, 0, 1, 1]}"#,
            r#""theorem13": {"c": [1, 1]}, "corollary14": {"theta_hat": 1.5707963267948966}"#,
        ),
    );
    let out = gma(dir.path(), &["toric", "--config", "pass.json"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["theorem13"]["top_margin"], "4");
    assert_eq!(r["verdict"], "PASS");

    write(
        dir.path(),
        "boundary.json",
        &toric_config(r#"{"Omega": [0, 0, 1, 1]}"#, r#""theorem13": {"c": ["1/2", 0]}"#),
    );
    assert_eq!(gma(dir.path(), &["toric", "--config", "boundary.json"]).status.code(), Some(5));

    write(
        dir.path(),
        "fail.json",
        &toric_config(r#"{"Omega": [0, 0, 1, 1]}"#, r#""theorem13": {"c": [1, 0]}"#),
    );
    let out = gma(dir.path(), &["toric", "--config", "fail.json"]);
    assert_eq!(out.status.code(), Some(4));
    assert_eq!(report(&out)["theorem13"]["top_margin"], "-2");
}

#[test]
fn check_cone_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "ok.json", r#"{"lambda": [1, 2], "coefficients": [1, 0.5]}"#);
    assert_eq!(gma(dir.path(), &["check-cone", "--config", "ok.json"]).status.code(), Some(0));
    write(dir.path(), "bad.json", r#"{"lambda": [1, 2], "coefficients": [1, 5]}"#);
    let out = gma(dir.path(), &["check-cone", "--config", "bad.json"]);
    assert_eq!(out.status.code(), Some(4));
    assert_eq!(report(&out)["holds"], false);
    write(dir.path(), "neg.json", r#"{"lambda": [-1, 2], "coefficients": [1, 0]}"#);
    assert_eq!(gma(dir.path(), &["check-cone", "--config", "neg.json"]).status.code(), Some(4));
}

const FLAT: &str = r#"{"n": 2, "grid_size": 8, "background": {"scale": 1.5},
    "coefficients": {"convention": "SPECLAGMA", "values": [2.25, 0]}}"#;

const MANUFACTURED: &str = r#"{"n": 2, "grid_size": 8, "background": {"scale": 1.4142135623730951},
    "manufactured": {"tail": [0.1], "modes": [{"amplitude": 0.04, "mode": [1, 0, 0, 0]}]}}"#;

#[test]
fn solve_and_verify_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "flat.json", FLAT);
    let out = gma(dir.path(), &["solve", "--config", "flat.json", "--out", "flat.report.json"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let r: Value = serde_json::from_str(&fs::read_to_string(dir.path().join("flat.report.json")).unwrap()).unwrap();
    assert_eq!(r["report"]["residual_sup"], 0.0);
    assert!((r["gamma"][0].as_f64().unwrap() - 2.25).abs() < 1e-12);
    assert!(dir.path().join("flat.report.json.phi").exists());
    assert!(dir.path().join("flat.report.json.phi.json").exists());

    write(dir.path(), "m.json", MANUFACTURED);
    let out = gma(dir.path(), &["solve", "--config", "m.json", "--out", "m.report.json"]);
    assert_eq!(out.status.code(), Some(0));
    let r: Value = serde_json::from_str(&fs::read_to_string(dir.path().join("m.report.json")).unwrap()).unwrap();
    assert!(r["manufactured_sup_error"].as_f64().unwrap() < 1e-10);

    let verify_ok = MANUFACTURED.replacen('{', r#"{"phi": "m.report.json.phi", "#, 1);
    write(dir.path(), "v.json", &verify_ok);
    let out = gma(dir.path(), &["verify", "--config", "v.json"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(report(&out)["holds"], true);

    let verify_bad = MANUFACTURED.replacen('{', r#"{"phi": "flat.report.json.phi", "#, 1);
    write(dir.path(), "vb.json", &verify_bad);
    let out = gma(dir.path(), &["verify", "--config", "vb.json"]);
    assert_eq!(out.status.code(), Some(4));
    assert_eq!(report(&out)["holds"], false);

    write(
        dir.path(),
        "stuck.json",
        r#"{"n": 2, "grid_size": 8, "background": {"scale": 1.0},
            "coefficients": {"values": [0, 5]}}"#,
    );
    let out = gma(dir.path(), &["solve", "--config", "stuck.json", "--out", "stuck.report.json"]);
    assert_eq!(out.status.code(), Some(3));
    let r: Value = serde_json::from_str(&fs::read_to_string(dir.path().join("stuck.report.json")).unwrap()).unwrap();
    let last = r["last_tau"].as_f64().unwrap();
    assert!(last > 0.0 && last < 0.2 + 1e-6, "last tau {last}");
    assert!(r["diagnostics"].is_string());
}

#[test]
fn env_overrides_seed_and_determinism() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "m.json", MANUFACTURED);
    let run = |threads: &str| {
        let out = Command::new(env!("CARGO_BIN_EXE_gma"))
            .current_dir(dir.path())
            .args(["solve", "--threads", threads])
            .env("GMA_CONFIG", "m.json")
            .env("GMA_SEED", "17")
            .env("GMA_TOL", "1e-10")
            .env_remove("GMA_OUT")
            .env_remove("GMA_THREADS")
            .output()
            .unwrap();
        assert_eq!(out.status.code(), Some(0));
        out.stdout
    };
    let a = run("1");
    let b = run("1");
    assert_eq!(a, b);
    let r: Value = serde_json::from_slice(&a).unwrap();
    assert_eq!(r["seed"], 17);
    assert_eq!(r["tol"], 1e-10);

    write(
        dir.path(),
        "t.json",
        &toric_config(r#"{"Omega": [0, 0, 3, 3]}"#, r#""theorem13": {"c": [1, 1]}"#),
    );
    let t1 = gma(dir.path(), &["--threads", "2", "toric", "--config", "t.json"]).stdout;
    let t2 = gma(dir.path(), &["--threads", "2", "toric", "--config", "t.json"]).stdout;
    assert_eq!(t1, t2);
}
