use std::path::PathBuf;
use std::process::{Command, Output};

use optschwarz::cli::{Report, Results, SCHEMA_VERSION};

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_optschwarz"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("optschwarz-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn optimize_json_round_trips() {
    let out = bin(&["optimize", "--J", "3", "--deltas", "1e-2,1e-3", "--multistart", "2"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    let report = Report::from_json(&text).unwrap();
    assert_eq!(report.schema_version, SCHEMA_VERSION);
    assert_eq!(Report::from_json(&report.to_json()).unwrap(), report);
    let Results::Optimize { rows } = &report.results else {
        panic!("wrong result kind")
    };
    assert_eq!(rows.len(), 2);
    assert!(rows[0].result.rho_star < rows[1].result.rho_star);
}

#[test]
fn csv_output_is_deterministic() {
    let args = ["bound", "--J", "8", "--deltas", "1e-2", "--params", "2.5", "--format", "csv"];
    let a = bin(&args);
    let b = bin(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let text = String::from_utf8(a.stdout).unwrap();
    let mut lines = text.lines();
    let header = lines.next().unwrap();
    assert!(header.contains("bound"), "{header}");
    assert!(lines.count() > 10);
}

#[test]
fn simulate_writes_json_and_csv() {
    let path = scratch("sim.json");
    let out = bin(&[
        "simulate",
        "--deltas",
        "0.04",
        "--params",
        "5.878",
        "--h",
        "0.02",
        "--iterations",
        "20",
        "--output",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let report = Report::from_json(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let Results::Simulate { rows } = &report.results else {
        panic!("wrong result kind")
    };
    assert!(rows[0].report.relative_gap < 0.1);
    let csv = std::fs::read_to_string(path.with_extension("csv")).unwrap();
    assert_eq!(csv.lines().count(), 21);
}

#[test]
fn mesh_mismatch_is_a_configuration_error() {
    let out = bin(&["simulate", "--deltas", "0.015", "--params", "5", "--h", "0.01"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("0.015") && err.contains("0.01"), "{err}");
}

#[test]
fn bad_input_exits_with_two() {
    for args in [
        &["optimize", "--no-such-flag"][..],
        &["optimize", "--J", "1"],
        &["optimize", "--variant", "sideways"],
        &["bound", "--params", "-3"],
        &["optimize", "--deltas", "abc"],
    ] {
        let out = bin(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    }
}

#[test]
fn config_file_environment_and_flags_layer() {
    let path = scratch("layer.toml");
    std::fs::write(&path, "subdomains = 4\nsigma = 2.0\ndeltas = [0.01]\nparams = [3.0]\n").unwrap();
    let run = |env: &[(&str, &str)], extra: &[&str]| {
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_optschwarz"));
        cmd.args(["bound", "--config", path.to_str().unwrap(), "--k-samples", "5"]).args(extra);
        for (k, v) in env {
            cmd.env(k, v);
        }
        let out = cmd.output().unwrap();
        assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
        Report::from_json(&String::from_utf8(out.stdout).unwrap()).unwrap().spec
    };
    let file_only = run(&[], &[]);
    assert_eq!((file_only.subdomains, file_only.sigma), (4, 2.0));
    let with_env = run(&[("OPTSCHWARZ_SUBDOMAINS", "6"), ("OPTSCHWARZ_POLICY__MULTISTART", "3")], &[]);
    assert_eq!((with_env.subdomains, with_env.sigma, with_env.policy.multistart), (6, 2.0, 3));
    let with_flag = run(&[("OPTSCHWARZ_SUBDOMAINS", "6")], &["--J", "5"]);
    assert_eq!(with_flag.subdomains, 5);
}

#[test]
fn unknown_config_keys_are_rejected() {
    let path = scratch("unknown.toml");
    std::fs::write(&path, "subdomain = 4\n").unwrap();
    let out = bin(&["optimize", "--config", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}
