use std::process::{Command, Output};

use serde_json::Value;

fn frobkit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_frobkit"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn reports(out: &Output) -> Vec<Value> {
    let v: Value = serde_json::from_slice(&out.stdout).expect("json output");
    v.as_array().expect("report array").clone()
}

#[test]
fn verify_nm11_default_point_passes() {
    let out = frobkit(&["verify", "--model", "nm11"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let rs = reports(&out);
    assert!(rs.len() >= 10);
    for r in &rs {
        assert_eq!(r["passed"], Value::Bool(true), "{r}");
        for key in ["check_name", "model", "point", "residual", "tolerance"] {
            assert!(r.get(key).is_some(), "missing {key}");
        }
    }
}

#[test]
fn verify_nm02_passes() {
    let out = frobkit(&["verify", "--model", "nm02", "--point", "1,1,2"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    assert!(reports(&out).len() >= 10);
}

#[test]
fn impossible_tolerance_fails_with_one() {
    let out = frobkit(&["verify", "--model", "nm11", "--tol", "1e-20"]);
    assert_eq!(code(&out), 1);
    assert!(reports(&out).iter().any(|r| r["passed"] == Value::Bool(false)));
}

#[test]
fn unknown_model_is_usage_error() {
    assert_eq!(code(&frobkit(&["verify", "--model", "nm99"])), 2);
    assert_eq!(code(&frobkit(&["verify", "--model", "nm11", "--point", "1,2"])), 2);
}

#[test]
fn degenerate_point_exits_three() {
    let out = frobkit(&["verify", "--model", "nm11", "--point", "0,0,1"]);
    assert_eq!(code(&out), 3);
    assert!(!out.stderr.is_empty());
}

#[test]
fn pvi_k3_residuals_are_small() {
    let out = frobkit(&["pvi", "--solution", "k3", "--format", "csv"]);
    assert_eq!(code(&out), 0);
    let mut rdr = csv::Reader::from_reader(out.stdout.as_slice());
    let col = rdr.headers().unwrap().iter().position(|h| h == "residual").unwrap();
    let mut n = 0;
    for row in rdr.records() {
        let res: f64 = row.unwrap()[col].parse().unwrap();
        assert!(res < 1e-8);
        n += 1;
    }
    assert_eq!(n, 50);
}

#[test]
fn same_invocation_same_bytes() {
    let args = ["verify", "--model", "nm02", "--random", "3", "--seed", "11"];
    let a = frobkit(&args);
    let b = frobkit(&args);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    let c = frobkit(&["verify", "--model", "nm02", "--random", "3", "--seed", "12"]);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn sweep_writes_csv_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sweep.csv");
    let out = frobkit(&[
        "sweep", "--model", "nm11", "--param", "x2", "--range", "1:3:3", "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(&path).unwrap();
    let mut lines = text.lines();
    let header = lines.next().unwrap();
    assert!(header.starts_with("param,flat-metric"));
    assert_eq!(lines.count(), 3);
}

#[test]
fn frame_dump_has_canonical_data() {
    let out = frobkit(&["frame", "--model", "nm11"]);
    assert_eq!(code(&out), 0);
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(v.is_object());
}

#[test]
fn tau_and_top_pass() {
    assert_eq!(code(&frobkit(&["tau"])), 0);
    assert_eq!(code(&frobkit(&["top"])), 0);
    assert_eq!(code(&frobkit(&["top", "--omega", "0.3,0.2:0.1,-0.4"])), 0);
}

#[test]
fn perm_search_takes_on_off() {
    assert_eq!(code(&frobkit(&["verify", "--perm-search", "off"])), 0);
    assert_eq!(code(&frobkit(&["verify", "--perm-search", "on"])), 0);
    assert_eq!(code(&frobkit(&["verify", "--perm-search", "maybe"])), 2);
}
