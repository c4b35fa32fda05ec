use std::path::PathBuf;
use std::process::Command as Process;

use clap::Parser;
use klyachko::cli::{run, Cli, Table};

fn configs() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

fn run_args(args: &[&str]) -> klyachko::Result<klyachko::cli::Outcome> {
    let cli = Cli::try_parse_from(std::iter::once("klyachko").chain(args.iter().copied())).expect("arguments parse");
    run(&cli)
}

fn config(name: &str) -> String {
    configs().join(name).to_string_lossy().into_owned()
}

fn golden(name: &str) -> String {
    std::fs::read_to_string(configs().join("golden").join(name)).expect("golden file present")
}

fn write_temp(name: &str, text: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("klyachko-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

#[test]
fn golden_outputs() {
    let cases: &[(&[&str], &str, &str)] = &[
        (&["cohomology-table", "--i", "1"], "rank3_h3.json", "rank3_h3.h1.csv"),
        (&["bounds"], "rank3_h3.json", "rank3_h3.bounds.txt"),
        (&["bounds", "--format", "json"], "rank3_h3.json", "rank3_h3.bounds.json"),
        (&["hilbert-poly"], "rank3_h3.json", "rank3_h3.hilbert_poly.txt"),
        (&["hilbert-table"], "rank3_h3.json", "rank3_h3.hilbert.csv"),
        (&["h0-table"], "tangent_h3.json", "tangent_h3.h0.csv"),
        (&["cohomology-table", "--i", "1"], "tangent_h3.json", "tangent_h3.h1.csv"),
        (&["euler-table"], "tangent_h3.json", "tangent_h3.euler.csv"),
        (&["monomial-sigma", "--cone", "rho0"], "monomial_p2.json", "monomial_p2.rho0.csv"),
        (&["monomial-sigma", "--cone", "rho1,rho2"], "monomial_p2.json", "monomial_p2.rho1_rho2.csv"),
        (&["monomial-sigma", "--cone", "rho0,rho1"], "monomial_p2.json", "monomial_p2.rho0_rho1.csv"),
        (&["h0-table"], "line_bundle_p2.json", "line_bundle_p2.h0.csv"),
    ];
    for (args, cfg, gold) in cases {
        let path = config(cfg);
        let mut full: Vec<&str> = args.to_vec();
        full.extend(["--config", path.as_str()]);
        let out = run_args(&full).unwrap();
        assert_eq!(out.exit, 0, "{gold}");
        assert_eq!(out.text, golden(gold), "{gold}");
    }
}

#[test]
fn json_tables_round_trip() {
    let path = config("rank3_h3.json");
    let csv = run_args(&["hilbert-table", "--config", &path]).unwrap().text;
    let json = run_args(&["hilbert-table", "--config", &path, "--format", "json"]).unwrap().text;
    let t: Table = serde_json::from_str(&json).unwrap();
    assert_eq!(t.to_csv(), csv);
    assert_eq!(t.to_json(), json);
    assert_eq!(t.q.as_ref().unwrap().first(), Some(&4));
    assert_eq!(t.get(5, Some(-1)), Some(62));
    let flags = t.inside_omega.as_ref().unwrap();
    assert!(flags[0][3] && !flags[0][2]);
}

#[test]
fn line_bundle_rows_are_binomial() {
    let path = config("line_bundle_p2.json");
    for cmd in ["h0-table", "hilbert-table"] {
        let t: Table = serde_json::from_str(&run_args(&[cmd, "--config", &path, "--format", "json"]).unwrap().text).unwrap();
        for (&d, &h) in t.p.iter().zip(&t.values[0]) {
            let expect = if d < 0 { 0 } else { (d + 1) * (d + 2) / 2 };
            assert_eq!(h, expect, "{cmd} at d = {d}");
        }
    }
}

#[test]
fn empty_window_is_an_empty_table() {
    let path = config("rank3_h3.json");
    let out = run_args(&["h0-table", "--config", &path, "--p", "3:2", "--q", "0:1"]).unwrap();
    assert_eq!(out.exit, 0);
    assert_eq!(out.text, "q\\p\n");
}

#[test]
fn validate_reports_the_offending_ray() {
    let text = std::fs::read_to_string(configs().join("rank3_h3.json")).unwrap().replace("[-9, -3, 0]", "[-3, -9, 0]");
    let path = write_temp("decreasing.json", &text);
    let out = run_args(&["validate", "--config", path.to_str().unwrap()]).unwrap();
    assert_eq!(out.exit, 1);
    assert!(out.text.contains("rho1"), "{}", out.text);
    let err = run_args(&["h0-table", "--config", path.to_str().unwrap(), "--p", "0:1", "--q", "0:1"]).unwrap_err();
    assert!(err.to_string().contains("rho1"), "{err}");
}

#[test]
fn wrong_ambient_dimension_is_named() {
    let text = std::fs::read_to_string(configs().join("rank3_h3.json"))
        .unwrap()
        .replace(r#"["7", "1", "3"]"#, r#"["7", "1"]"#);
    let path = write_temp("ambient.json", &text);
    let err = run_args(&["validate", "--config", path.to_str().unwrap()]).unwrap_err().to_string();
    assert!(err.contains("eta0.spaces[1][1]"), "{err}");
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_klyachko");
    let ok = Process::new(bin).args(["validate", "--config", &config("rank3_h3.json")]).output().unwrap();
    assert_eq!(ok.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&ok.stdout), "valid\n");

    let bad = write_temp("syntax.json", "{ \"variety\": { \"family\": \"hirzebruch\", \"a\": 3 },\n  \"sheaf\": 5 }");
    let parse = Process::new(bin).args(["validate", "--config", bad.to_str().unwrap()]).output().unwrap();
    assert_eq!(parse.status.code(), Some(1));
    let msg = String::from_utf8_lossy(&parse.stderr);
    assert!(msg.contains("line 2") && msg.contains("sheaf"), "{msg}");

    let unsupported = Process::new(bin).args(["bounds", "--config", &config("line_bundle_p2.json")]).output().unwrap();
    assert_eq!(unsupported.status.code(), Some(2));

    let out = std::env::temp_dir().join(format!("klyachko-out-{}.csv", std::process::id()));
    let written = Process::new(bin)
        .args(["h0-table", "--config", &config("line_bundle_p2.json"), "--out", out.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(written.status.code(), Some(0));
    assert_eq!(std::fs::read_to_string(&out).unwrap(), golden("line_bundle_p2.h0.csv"));
}
