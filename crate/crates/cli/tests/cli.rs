use std::process::Command;

use mhx_core::fixtures::{fixture, FIXTURES};
use mhx_core::instance::{emit_instance, parse_instance};
use serde_json::Value;

fn mhx(args: &[&str]) -> (i32, Value) {
    let out = Command::new(env!("CARGO_BIN_EXE_mhx")).args(args).output().expect("binary runs");
    let report = serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("{args:?}: {e}\n{}", String::from_utf8_lossy(&out.stderr));
    });
    (out.status.code().expect("exit code"), report)
}

#[test]
fn admissible_tate() {
    let (code, r) = mhx(&["admissible", "tate.json"]);
    assert_eq!(code, 0);
    assert_eq!(r["y_infty"]["weights"], serde_json::json!([0, 2]));
    assert_eq!(r["y_infty"]["eigenspaces"]["0"], serde_json::json!([["1", "0"]]));
    assert_eq!(r["y_infty"]["eigenspaces"]["2"], serde_json::json!([["0", "1"]]));
}

#[test]
fn relwfilt_badrel() {
    let (code, r) = mhx(&["relwfilt", "badrel.json"]);
    assert_eq!(code, 1);
    assert_eq!(r["exists"], false);
    assert!(r["failure_witness"].is_string());
}

#[test]
fn gen_verified_split_orbit() {
    let (code, r) = mhx(&["gen", "--weights", "0,2", "--seed", "7"]);
    assert_eq!(code, 0);
    assert_eq!(r["verification"]["split_admissible"], true);
    assert_eq!(r["meta"]["seed"], 7);
    let doc = parse_instance(&r.to_string()).unwrap();
    let path = std::env::temp_dir().join("mhx-gen-seed7.json");
    std::fs::write(&path, r.to_string()).unwrap();
    let (code, a) = mhx(&["admissible", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(a["split_direct"], true);
    assert_eq!(a["y_infty"], r["verification"]["y_infty"]);
    assert_eq!(doc.dimension(), 2);
}

#[test]
fn gen_is_deterministic() {
    let a = mhx(&["gen", "--irreps", "0:1,3:0", "--extensions", "3", "--scramble", "--seed", "5"]);
    let b = mhx(&["gen", "--irreps", "0:1,3:0", "--extensions", "3", "--scramble", "--seed", "5"]);
    assert_eq!(a, b);
    let (code, r) = mhx(&["gen", "--irreps", "0:0,2:0", "--extensions", "3"]);
    assert_eq!(code, 1, "{r}");
}

#[test]
fn reports_are_deterministic() {
    for cmd in ["bigrading", "admissible", "grading-y", "trace"] {
        assert_eq!(mhx(&[cmd, "tate-nonsplit.json"]), mhx(&[cmd, "tate-nonsplit.json"]));
    }
}

#[test]
fn input_errors() {
    let path = std::env::temp_dir().join("mhx-bad-scalar.json");
    let text = FIXTURES.iter().find(|f| f.0 == "tate").unwrap().1.replace(r#"[["0", "1"], ["0", "0"]]"#, r#"[["0", "q"], ["0", "0"]]"#);
    std::fs::write(&path, text).unwrap();
    let (code, r) = mhx(&["wfilt", path.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(r["error"]["message"].as_str().unwrap().contains("N[0][1]"));
    assert_eq!(mhx(&["wfilt", "no-such-file.json"]).0, 2);
    assert_eq!(mhx(&["factorize", "tate.json"]).0, 2);
}

#[test]
fn fixture_round_trip() {
    for (name, _) in FIXTURES {
        let doc = fixture(name).unwrap();
        assert_eq!(parse_instance(&emit_instance(&doc).to_string()).unwrap(), doc, "{name}");
    }
}

/// Exit code agrees with the report's verdict on every fixture and command.
#[test]
fn exit_codes_match_verdicts() {
    let cmds = ["bigrading", "wfilt", "relwfilt", "grading-y", "orbit-check", "admissible", "theorem4", "trace"];
    for (name, _) in FIXTURES {
        for cmd in cmds {
            let (code, r) = mhx(&[cmd, &format!("{name}.json")]);
            let v = r["verdict"].as_bool().expect("verdict present");
            assert!(code == 0 || code == 1, "{cmd} {name}: exit {code} {r}");
            assert_eq!(v, code == 0, "{cmd} {name}");
        }
    }
}

#[test]
fn batch_with_jobs() {
    let files = ["tate.json", "badrel.json", "elliptic.json", "point.json"];
    let mut args = vec!["relwfilt", "--jobs", "3"];
    args.extend(files);
    let (code, r) = mhx(&args);
    assert_eq!(code, 1);
    let rows = r.as_array().unwrap();
    assert_eq!(rows.len(), 4);
    for (row, f) in rows.iter().zip(files) {
        assert_eq!(row["command"]["file"], f);
    }
    let (_, serial) = mhx(&["relwfilt", "tate.json", "badrel.json", "elliptic.json", "point.json"]);
    assert_eq!(serial, r);
}

#[test]
fn expected_fixture_verdicts() {
    assert_eq!(mhx(&["trace", "nonadmissible-unipotent.json"]).1["trace"], "diverges");
    assert_eq!(mhx(&["trace", "tate-nonsplit.json"]).1["trace"], "converges");
    let (code, r) = mhx(&["theorem4", "k3-split-s5.json"]);
    assert_eq!(code, 0);
    assert!(r["report"]["components"]["3"].is_array());
    let (code, r) = mhx(&["factorize", "tate-nonsplit.json"]);
    assert_eq!(code, 0);
    assert_eq!(r["iterations"], 1);
    let (_, r) = mhx(&["admissible", "nonadmissible-unipotent.json"]);
    assert_eq!(r["unipotent"]["admissible"], false);
    assert!(r["unipotent"]["obstruction"].is_array());
}
