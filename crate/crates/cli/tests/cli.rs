use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_annulus-sle"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("{e}: {}", String::from_utf8_lossy(&out.stdout));
    })
}

fn scratch(name: &str) -> std::path::PathBuf {
    let dir = std::env::temp_dir().join(format!("annulus-sle-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn cardy_prints_one_probability() {
    let out = run(&["cardy", "--a", "-6.2831853"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let p: f64 = text.trim().parse().unwrap();
    assert!(p > 0.0 && p < 1.0);
    assert_eq!(text.trim().split('.').nth(1).unwrap().len(), 12);
}

#[test]
fn usage_errors_exit_with_one() {
    assert_eq!(run(&["cardy", "--bogus"]).status.code(), Some(1));
    assert_eq!(run(&["no-such-command"]).status.code(), Some(1));
    assert_eq!(run(&["cardy"]).status.code(), Some(1));
    assert_eq!(run(&["cardy", "--a", "0.5"]).status.code(), Some(1));
    assert_eq!(
        run(&["--format", "csv", "lattice", "--q", "0.3"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(run(&["--help"]).status.code(), Some(0));
    assert_eq!(run(&["--version"]).status.code(), Some(0));
}

#[test]
fn flags_override_the_config_file() {
    let cfg = scratch("override.toml");
    std::fs::write(&cfg, "a = -2.5\nformat = \"json\"\n").unwrap();
    let path = cfg.to_str().unwrap();
    let from_file = json(&run(&["--config", path, "cardy"]));
    assert_eq!(from_file["schema_version"], 1);
    assert_eq!(from_file["config"]["a"], -2.5);
    let flagged = json(&run(&["--config", path, "cardy", "--a", "-1"]));
    assert_eq!(flagged["config"]["a"], -1.0);
    assert_eq!(flagged["result"]["a"], -1.0);
}

#[test]
fn unknown_config_keys_are_usage_errors() {
    let cfg = scratch("unknown.toml");
    std::fs::write(&cfg, "a = -1.0\nzzz = 3\n").unwrap();
    let out = run(&["--config", cfg.to_str().unwrap(), "cardy"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("zzz"));
}

#[test]
fn drift_table_csv_has_header_comments() {
    let out = run(&["drift-table", "--a-count", "3", "--nu-count", "4"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("# schema_version: 1"));
    let data: Vec<&str> = lines.filter(|l| !l.starts_with('#')).collect();
    assert_eq!(data[0], "nu,a,drift_theta,drift_zeta,abs_diff");
    assert_eq!(data.len(), 13);
    for row in &data[1..] {
        let diff: f64 = row.rsplit(',').next().unwrap().parse().unwrap();
        assert!(diff < 1e-9);
    }
}

#[test]
fn output_file_receives_the_document() {
    let path = scratch("villat.json");
    let out = run(&[
        "--out",
        path.to_str().unwrap(),
        "villat-check",
        "--samples",
        "256",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["command"], "villat-check");
    assert!(
        v["result"]["dirichlet"]["max_interior_diff"]
            .as_f64()
            .unwrap()
            < 1e-10
    );
    assert!(v["result"]["v_field_max_residual"].as_f64().unwrap() < 1e-6);
}

#[test]
fn solve_pde_reports_each_problem() {
    let base = [
        "--format",
        "json",
        "solve-pde",
        "--a",
        "-1",
        "--nu-points",
        "200",
        "--da",
        "1e-3",
    ];
    let f = json(&run(&[&base[..], &["--problem", "crossing"]].concat()));
    let f_pi = f["result"]["F_pi"].as_f64().unwrap();
    assert!(f_pi > 0.9 && f_pi < 1.0);
    let r = json(&run(&[
        &base[..],
        &["--problem", "renewal", "--n-max", "4"],
    ]
    .concat()));
    let series = r["result"]["parity_series"].as_f64().unwrap();
    assert!((series - 0.997_223_574_6).abs() < 1e-4);
    assert_eq!(r["result"]["c"].as_array().unwrap().len(), 4);
}

#[test]
fn simulate_and_lattice_are_reproducible() {
    let sde = [
        "--format",
        "json",
        "--seed",
        "7",
        "simulate-sde",
        "--a",
        "-0.5",
        "--samples",
        "200",
        "--n-max",
        "2",
    ];
    let a = json(&run(&sde));
    assert_eq!(a, json(&run(&sde)));
    assert_eq!(a["result"]["estimates"]["c"].as_array().unwrap().len(), 2);
    let lat = [
        "--seed",
        "3",
        "lattice",
        "--q",
        "0.3",
        "--mesh",
        "0.05",
        "--samples",
        "200",
    ];
    let b = json(&run(&lat));
    assert_eq!(b, json(&run(&lat)));
    assert_eq!(b["result"]["identity_check"], true);
}

#[test]
fn strict_compare_signals_disagreement_with_two() {
    let common = [
        "compare",
        "--a",
        "-2",
        "--samples",
        "1000",
        "--nu-points",
        "400",
        "--strict",
    ];
    // the exit problem carries the terminal-layer degeneracy and disagrees
    let all = run(&common);
    assert_eq!(all.status.code(), Some(2));
    assert_eq!(json(&all)["result"]["pass"], false);
    let agreeing = run(&[&common[..], &["--routes", "cardy,pde-series,sde"]].concat());
    assert_eq!(agreeing.status.code(), Some(0));
    assert_eq!(json(&agreeing)["result"]["pass"], true);
    let relaxed = run(&common[..common.len() - 1]);
    assert_eq!(relaxed.status.code(), Some(0));
    assert_eq!(
        run(&[&common[..], &["--routes", "nope"]].concat())
            .status
            .code(),
        Some(1)
    );
}
