use std::path::Path;
use std::process::{Command, Output};

fn spinorbit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_spinorbit"))
        .args(args)
        .env_remove("SPINORBIT_OUT_DIR")
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write(path: &Path, text: &str) {
    std::fs::write(path, text).unwrap();
}

#[test]
fn help_exits_zero() {
    for args in [&["--help"][..], &["spectrum", "--help"], &["verify", "--help"]] {
        let o = spinorbit(args);
        assert_eq!(code(&o), 0, "{args:?}");
        assert!(stdout(&o).contains("Usage"));
    }
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(code(&spinorbit(&[])), 2);
    assert_eq!(code(&spinorbit(&["frobnicate"])), 2);
    assert_eq!(code(&spinorbit(&["spectrum", "--gamma", "abc"])), 2);
    assert_eq!(code(&spinorbit(&["spectrum", "--points", "10"])), 2);
    assert_eq!(code(&spinorbit(&["spectrum", "--alpha", "-1"])), 2);
    assert_eq!(code(&spinorbit(&["verify", "--suite", "SL2(1)", "--format", "csv"])), 2);
    assert_eq!(code(&spinorbit(&["verify", "--config", "/nonexistent/config"])), 2);
}

#[test]
fn verify_single_suite() {
    let o = spinorbit(&["verify", "--suite", "CONSERVE_3D"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    assert!(text.starts_with("suite CONSERVE_3D PASS"));
    assert!(!text.contains("FAIL"));
    assert!(text.ends_with("overall PASS\n"));
}

#[test]
fn verify_unknown_suite() {
    let o = spinorbit(&["verify", "--suite", "NOPE"]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("unknown suite `NOPE`"));
}

#[test]
fn verify_family_and_list() {
    let o = spinorbit(&["verify", "--suite", "SL2,HEIS_MIXED(2)", "--format", "json"]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let names: Vec<&str> = v["suites"].as_array().unwrap().iter().map(|s| s["suite"].as_str().unwrap()).collect();
    assert_eq!(names, ["SL2(1)", "SL2(2)", "SL2(3)", "HEIS_MIXED(2)"]);
}

#[test]
fn verify_all_to_json_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.json");
    let o = spinorbit(&["verify", "--all", "--format", "json", "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert!(o.stdout.is_empty());
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["pass"], true);
    let suites = v["suites"].as_array().unwrap();
    assert_eq!(suites.len(), 15);
    for s in suites {
        assert!(s["suite"].is_string());
        assert_eq!(s["pass"], true);
        for r in s["relations"].as_array().unwrap() {
            assert!(r["id"].is_string() && r["pass"].is_boolean() && r["residual_terms"].is_u64());
            assert!(r.get("millis").is_some());
        }
    }
}

#[test]
fn verify_timings_are_opt_in() {
    let o = spinorbit(&["verify", "--suite", "SL2(1)", "--format", "json", "--timings"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v["suites"][0]["relations"][0]["millis"].is_u64());
}

#[test]
fn hydrogen_spectrum_table() {
    let o = spinorbit(&["spectrum", "--gamma", "0", "--alpha", "1", "--hbar", "1", "--lmax", "1", "--nmax", "2", "--points", "4000"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("branch,l,2j,n,E_closed,E_fd,rel_error"));
    let rows: Vec<Vec<String>> = lines.map(|l| l.split(',').map(String::from).collect()).collect();
    // plus l = 0, 1 and minus l = 1, with n = 0, 1, 2 each
    assert_eq!(rows.len(), 9);
    assert_eq!(rows[0][..4], ["plus", "0", "1", "0"]);
    assert_eq!(rows[0][4].parse::<f64>().unwrap(), -0.5);
    for r in &rows {
        assert!(r[6].parse::<f64>().unwrap() <= 5e-6);
    }
}

#[test]
fn spectrum_flags_states_outside_the_domain() {
    let o = spinorbit(&["spectrum", "--gamma", "3/1", "--lmax", "1", "--nmax", "1", "--points", "2000"]);
    assert_eq!(code(&o), 1);
    let text = stdout(&o);
    assert!(text.lines().any(|l| l == "minus,1,1,0,,,"), "{text}");
    assert!(String::from_utf8_lossy(&o.stderr).contains("rejected"));
}

#[test]
fn spectrum_threshold_controls_exit() {
    let args = ["spectrum", "--lmax", "0", "--nmax", "1", "--branch", "plus", "--points", "200", "--no-extrapolate"];
    assert_eq!(code(&spinorbit(&args)), 1);
    let mut loose = args.to_vec();
    loose.extend(["--threshold", "0.5"]);
    assert_eq!(code(&spinorbit(&loose)), 0);
}

#[test]
fn config_file_and_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let empty = dir.path().join("empty.conf");
    write(&empty, "");
    let o = spinorbit(&["degeneracy", "--config", empty.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let mult: Vec<u64> = v["levels"].as_array().unwrap().iter().map(|l| l["multiplicity"].as_u64().unwrap()).collect();
    assert_eq!(mult, [2, 8, 18]);

    let conf = dir.path().join("run.conf");
    write(&conf, "# hydrogen\ngamma = 0\nnmax = 2\n");
    let o = spinorbit(&["degeneracy", "--config", conf.to_str().unwrap()]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["levels"].as_array().unwrap().len(), 2);
    let o = spinorbit(&["degeneracy", "--config", conf.to_str().unwrap(), "--nmax", "1"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["levels"].as_array().unwrap().len(), 1, "flags win over the file");

    let bad = dir.path().join("bad.conf");
    write(&bad, "colour = blue\n");
    assert_eq!(code(&spinorbit(&["degeneracy", "--config", bad.to_str().unwrap()])), 2);
    write(&bad, "just words\n");
    assert_eq!(code(&spinorbit(&["degeneracy", "--config", bad.to_str().unwrap()])), 2);
}

#[test]
fn out_dir_environment_variable() {
    let dir = tempfile::tempdir().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_spinorbit"))
        .args(["catalog-dump", "--out", "nested/catalog.txt"])
        .env("SPINORBIT_OUT_DIR", dir.path())
        .output()
        .unwrap();
    assert_eq!(code(&o), 0);
    let written = std::fs::read_to_string(dir.path().join("nested/catalog.txt")).unwrap();
    assert_eq!(written, stdout(&spinorbit(&["catalog-dump"])));
}

#[test]
fn outputs_are_byte_identical() {
    for args in [
        &["catalog-dump"][..],
        &["verify", "--suite", "SL2,O3_2D"],
        &["verify", "--suite", "INTERTWINE(2)", "--format", "json"],
        &["spectrum", "--gamma", "0.3", "--lmax", "1", "--nmax", "2", "--points", "1000"],
        &["degeneracy", "--gamma", "1/2", "--nmax", "4"],
        &["wavefunction", "--n", "2", "--gamma", "0.3", "--samples", "50"],
    ] {
        let (a, b) = (spinorbit(args), spinorbit(args));
        assert_eq!(code(&a), code(&b));
        assert!(!a.stdout.is_empty(), "{args:?}");
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn wavefunction_table() {
    let o = spinorbit(&["wavefunction", "--n", "1", "--r-max", "2", "--samples", "2", "--format", "csv"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    let last = text.lines().last().unwrap();
    let fields: Vec<&str> = last.split(',').collect();
    let r: f64 = fields[0].parse().unwrap();
    let v: f64 = fields[1].parse().unwrap();
    assert_eq!(r, 2.0);
    // L₁¹(2·r/2) = 2 − r vanishes at r = 2
    assert!(v.abs() < 1e-15, "{text}");
    let o = spinorbit(&["wavefunction", "--two-j", "1", "--branch", "plus", "--gamma", "-2"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn grid_study_table() {
    let o = spinorbit(&["compare", "--grid-study", "--format", "json"]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 6);
    for r in rows.iter().filter(|r| r["scheme"] == "plain").skip(1) {
        let red = r["reduction"].as_f64().unwrap();
        assert!((3.7..4.3).contains(&red), "{red}");
    }
}

#[test]
fn construction_comparison_report() {
    let o = spinorbit(&["compare", "--format", "json"]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(!v["x_constructions"].as_array().unwrap().is_empty());
    assert!(!v["conservation"].as_array().unwrap().is_empty());
    assert_eq!(v["fd_vs_closed"].as_array().unwrap().len(), 4);
}
