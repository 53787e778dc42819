use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::tempdir;

fn dvblab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dvblab"))
        .args(args)
        .env_remove("DVBLAB_SEED")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn strip_elapsed(mut report: Value) -> Value {
    for c in report["checks"].as_array_mut().unwrap() {
        c.as_object_mut().unwrap().remove("elapsed");
    }
    report
}

#[test]
fn gen_is_deterministic_and_obeys_the_dimension_law() {
    let dir = tempdir().unwrap();
    let (a, b) = (dir.path().join("a.json"), dir.path().join("b.json"));
    for p in [&a, &b] {
        let out = dvblab(&["gen", "--dims", "2,3,1", "--seed", "7", "--out", p.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0));
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    let v = read_json(&a);
    assert_eq!(v["e"].as_array().unwrap().len(), 7);
    assert_eq!(v["p"].as_array().unwrap().len(), 6);

    let out = dvblab(&["gen", "--dims", "0,0,0", "--seed", "7"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["C"], 0);
}

#[test]
fn seed_comes_from_the_environment() {
    let run = |seed: &str| {
        Command::new(env!("CARGO_BIN_EXE_dvblab"))
            .args(["gen", "--dims", "1,2,1"])
            .env("DVBLAB_SEED", seed)
            .output()
            .unwrap()
            .stdout
    };
    assert_eq!(run("11"), run("11"));
    assert_ne!(run("11"), run("12"));
}

#[test]
fn verify_smoke_run_is_deterministic() {
    let dir = tempdir().unwrap();
    let reports: Vec<Value> = ["r1.json", "r2.json"]
        .iter()
        .map(|name| {
            let path = dir.path().join(name);
            let out = dvblab(&[
                "verify",
                "--trials",
                "1",
                "--max-dim",
                "1",
                "--seed",
                "3",
                "--out",
                path.to_str().unwrap(),
            ]);
            assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
            read_json(&path)
        })
        .collect();
    assert_eq!(reports[0]["passed"], true);
    assert_eq!(strip_elapsed(reports[0].clone()), strip_elapsed(reports[1].clone()));
    let names: Vec<&str> = reports[0]["checks"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["name"].as_str().unwrap())
        .collect();
    let mut sorted = names.clone();
    sorted.sort();
    assert_eq!(names, sorted);
}

#[test]
fn corrupted_instance_fails_with_counterexample() {
    let dir = tempdir().unwrap();
    let path = dir.path().join("seq.json");
    let out = dvblab(&["gen", "--dims", "2,1,1", "--seed", "5", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));

    let good = dvblab(&["verify", "--instance", path.to_str().unwrap()]);
    assert_eq!(good.status.code(), Some(0));

    let mut v = read_json(&path);
    v["e"][0][0] = Value::String("12345".into());
    v["e"][1][0] = Value::String("-1/7".into());
    std::fs::write(&path, v.to_string()).unwrap();
    let bad = dvblab(&["verify", "--instance", path.to_str().unwrap()]);
    assert_eq!(bad.status.code(), Some(1));
    let report = json(&bad);
    assert_eq!(report["passed"], false);
    let failing: Vec<&Value> = report["checks"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["failures"] != 0)
        .collect();
    assert!(!failing.is_empty());
    assert!(failing[0]["firstCounterexample"].is_object());
}

#[test]
fn roundtrip_accepts_gen_output_and_rejects_truncated_json() {
    let dir = tempdir().unwrap();
    let path = dir.path().join("seq.json");
    dvblab(&["gen", "--dims", "2,2,1", "--seed", "9", "--out", path.to_str().unwrap()]);
    let out = dvblab(&["roundtrip", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["passed"], true);

    let text = std::fs::read_to_string(&path).unwrap();
    std::fs::write(&path, &text[..text.len() / 2]).unwrap();
    assert_eq!(dvblab(&["roundtrip", path.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(
        dvblab(&["verify", "--instance", path.to_str().unwrap()]).status.code(),
        Some(2)
    );
}

/// For the split sequence `π` is `[s | e]` with both blocks coordinate
/// inclusions, so its matrix is a permutation matrix.
#[test]
fn split_fixture_gives_permutation_isomorphisms() {
    let dir = tempdir().unwrap();
    let path = dir.path().join("split.json");
    dvblab(&["gen", "--dims", "2,2,2", "--split", "--out", path.to_str().unwrap()]);
    let out = dvblab(&["roundtrip", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let m = v["pi"]["matrix"].as_array().unwrap();
    assert_eq!(m.len(), 6);
    let is_permutation = |rows: &[Value]| {
        let ones = |r: &Value| r.as_array().unwrap().iter().filter(|x| *x == "1").count();
        let zeros = |r: &Value| r.as_array().unwrap().iter().filter(|x| *x == "0").count();
        rows.iter()
            .all(|r| ones(r) == 1 && zeros(r) + 1 == r.as_array().unwrap().len())
    };
    assert!(is_permutation(m));
}

#[test]
fn bad_arguments_exit_two() {
    assert_eq!(dvblab(&["gen", "--dims", "2,x,1"]).status.code(), Some(2));
    assert_eq!(dvblab(&["verify", "--max-dim", "0"]).status.code(), Some(2));
    assert_eq!(dvblab(&["verify", "--suite", "everything"]).status.code(), Some(2));
    assert_eq!(dvblab(&["example", "jet", "--dim-t", "-1"]).status.code(), Some(2));
    assert_eq!(dvblab(&["roundtrip", "/no/such/file.json"]).status.code(), Some(2));
    let dir = tempdir().unwrap();
    let out = dir.path().join("missing-dir").join("x.json");
    assert_eq!(
        dvblab(&["gen", "--dims", "1,1,1", "--out", out.to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn examples_report_dimensions() {
    let jet = dvblab(&["example", "jet", "--dim-t", "2", "--dim-e", "3"]);
    assert_eq!(jet.status.code(), Some(0));
    assert_eq!(json(&jet)["result"]["dimJE"], 9);
    let atiyah = dvblab(&["example", "atiyah", "--dim-t", "2", "--dim-e", "3"]);
    assert_eq!(atiyah.status.code(), Some(0));
    assert_eq!(json(&atiyah)["result"]["dimDE"], 11);
    let square = dvblab(&["example", "square", "--dim-t", "1", "--dim-e", "1"]);
    assert_eq!(square.status.code(), Some(0));
    let edges = json(&square)["result"]["edges"].clone();
    assert_eq!(edges.as_object().unwrap().len(), 4);
    assert!(edges.as_object().unwrap().values().all(|v| v == true));
}
