//! End-to-end behaviour of the `twistdecomp` binary.

use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_twistdecomp")).args(args).env_remove("TWISTDECOMP_TOL_SCALE").output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf-8")
}

fn json(args: &[&str]) -> Value {
    let o = run(args);
    assert_eq!(o.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_str(&stdout(&o)).expect("valid json")
}

#[test]
fn group_listing() {
    let v = json(&["group", "dihedral:4", "--format=json"]);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["order"], 8);
    assert_eq!(v["center"].as_array().unwrap().len(), 2);
    assert_eq!(v["normal_subgroups"].as_array().unwrap().len(), 6);
    assert_eq!(json(&["group", "dihedral:1", "--format=json"])["order"], 2);
}

#[test]
fn table_file_gives_an_isomorphic_listing() {
    let dir = tempfile::tempdir().unwrap();
    let g = twistdecomp::FiniteGroup::dihedral(4).unwrap();
    let path = dir.path().join("d8.txt");
    std::fs::write(&path, twistdecomp::formats::group_to_text(&g)).unwrap();
    let spec = format!("table:{}", path.display());
    let a = json(&["group", "dihedral:4", "--format=json"]);
    let b = json(&["group", &spec, "--format=json"]);
    for key in ["order", "abelian", "conjugacy_classes"] {
        assert_eq!(a[key], b[key], "{key}");
    }
    let sizes = |v: &Value| {
        let mut s: Vec<usize> = v["normal_subgroups"].as_array().unwrap().iter().map(|n| n.as_array().unwrap().len()).collect();
        s.sort_unstable();
        s
    };
    assert_eq!(sizes(&a), sizes(&b));
    assert_eq!(a["center"].as_array().unwrap().len(), b["center"].as_array().unwrap().len());
}

#[test]
fn irreducible_counts() {
    assert_eq!(json(&["irr", "dihedral:4", "dihedral_alpha:4", "--format=json"])["dimensions"], serde_json::json!([2, 2]));
    assert_eq!(json(&["irr", "dihedral:6", "dihedral_alpha:6", "--format=json"])["dimensions"], serde_json::json!([2, 2, 2]));
    let mut d: Vec<u64> = json(&["irr", "dihedral:4", "trivial", "--format=json"])["dimensions"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_u64().unwrap())
        .collect();
    d.sort_unstable();
    assert_eq!(d, vec![1, 1, 1, 1, 2]);
}

#[test]
fn invalid_cocycle_file_exits_2_with_report() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.txt");
    std::fs::write(&path, "order K=2 group=cyclic:2\n0 g 1\n").unwrap();
    let o = run(&["irr", "cyclic:2", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("invalid"));
}

#[test]
fn decompose_examples() {
    let v = json(&["decompose", "dihedral:4", "--A=a", "dihedral_alpha:4", "--format=json"]);
    assert_eq!(v["orbits"].as_array().unwrap().len(), 2);
    assert_eq!(v["rank"]["lhs"], 2);
    assert_eq!(v["rank"]["per_orbit"], serde_json::json!([1, 1]));
    let v = json(&["decompose", "dihedral:4", "--A=a2", "dihedral_alpha:4", "--format=json"]);
    assert_eq!(v["orbits"].as_array().unwrap().len(), 1);
    assert_eq!(v["orbits"][0]["quotient_order"], 2);
    assert_eq!(v["rank"]["rhs"], 2);
    let v = json(&["decompose", "dihedral:8", "--A=a", "dihedral_alpha:8", "--format=json"]);
    let orbits = v["orbits"].as_array().unwrap();
    assert_eq!(orbits.len(), 4);
    assert!(orbits.iter().all(|o| o["members"].as_array().unwrap().len() == 2));
    let text = stdout(&run(&["decompose", "dihedral:4", "--A=a2", "dihedral_alpha:4"]));
    assert!(text.contains("rank: 2 = 2 (bijective)"), "{text}");
}

#[test]
fn kgset_examples() {
    let v = json(&["kgset", "dihedral:4", "--A=a", "dihedral_alpha:4", "point", "--format=json"]);
    assert_eq!((v["lhs_rank"].clone(), v["rhs_rank"].clone()), (2.into(), 2.into()));
    let v = json(&["kgset", "dihedral:4", "--A=a2", "dihedral_alpha:4", "cosets:a", "--format=json"]);
    assert_eq!(v["lhs_rank"], v["rhs_rank"]);
    let v = json(&["kgset", "dihedral:4", "--A=a", "dihedral_alpha:4", "empty", "--format=json"]);
    assert_eq!((v["lhs_rank"].clone(), v["rhs_rank"].clone()), (0.into(), 0.into()));

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("x.txt");
    std::fs::write(&path, "points=2\na: 0 1\nb: 1 0\n").unwrap();
    let v = json(&["kgset", "dihedral:4", "--A=a", "dihedral_alpha:4", path.to_str().unwrap(), "--format=json"]);
    assert_eq!(v["lhs_rank"], v["rhs_rank"]);
    // A must act trivially
    std::fs::write(&path, "points=2\na: 1 0\nb: 1 0\n").unwrap();
    assert_eq!(run(&["kgset", "dihedral:4", "--A=a", "dihedral_alpha:4", path.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn verify_suites_pass() {
    let o = run(&["verify", "dihedral-family", "--max-n=10"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let o = run(&["verify", "sum-of-squares", "--group=dihedral:6", "--cocycle=trivial"]);
    assert!(stdout(&o).contains("12 = 1+1+1+1+4+4"), "{}", stdout(&o));
    for suite in ["action-laws", "phase-robustness"] {
        let o = run(&["verify", suite]);
        assert_eq!(o.status.code(), Some(0), "{suite}: {}", stdout(&o));
    }
}

#[test]
fn exit_codes() {
    let code = |args: &[&str]| run(args).status.code();
    assert_eq!(code(&["--help"]), Some(0));
    assert_eq!(code(&["frobnicate"]), Some(1));
    assert_eq!(code(&["group", "dihedral:4", "--bogus"]), Some(1));
    assert_eq!(code(&["verify", "no-such-suite"]), Some(1));
    assert_eq!(code(&["decompose", "dihedral:4", "--A=a", "dihedral_alpha:4", "--tol-rep=0"]), Some(1));
    assert_eq!(code(&["decompose", "dihedral:4", "--A=a", "dihedral_alpha:4", "--convention=sideways"]), Some(1));
    assert_eq!(code(&["group", "hexagonal:3"]), Some(2));
    assert_eq!(code(&["group", "table:/nonexistent/file"]), Some(2));
    assert_eq!(code(&["decompose", "dihedral:4", "--A=b", "dihedral_alpha:4"]), Some(2));
    assert_eq!(code(&["irr", "dihedral:4", "dihedral_alpha:6"]), Some(2));
    let o = Command::new(env!("CARGO_BIN_EXE_twistdecomp"))
        .args(["decompose", "dihedral:4", "--A=a", "dihedral_alpha:4"])
        .env("TWISTDECOMP_TOL_SCALE", "-3")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn tolerance_scale_env_is_honoured() {
    let o = Command::new(env!("CARGO_BIN_EXE_twistdecomp"))
        .args(["decompose", "dihedral:4", "--A=a2", "dihedral_alpha:4"])
        .env("TWISTDECOMP_TOL_SCALE", "10")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn output_flag_writes_the_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let o = run(&["decompose", "dihedral:4", "--A=a2", "dihedral_alpha:4", "--format=json", "--output", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["schema"], 1);
}

#[test]
fn json_is_deterministic() {
    let args = ["decompose", "dihedral:6", "--A=a3", "dihedral_alpha:6", "--seed=5", "--format=json"];
    assert_eq!(run(&args).stdout, run(&args).stdout);
    let args = ["verify", "random-gsets", "--cases=10", "--seed=3", "--format=json"];
    assert_eq!(run(&args).stdout, run(&args).stdout);
}

#[test]
fn decomposition_failure_prints_diagnostic_json() {
    let o = run(&["decompose", "dihedral:6", "--A=a3", "dihedral_alpha:6", "--convention=perturbed:3", "--tol-cocycle=1e-30"]);
    assert_eq!(o.status.code(), Some(3));
    let v: Value = serde_json::from_str(&stdout(&o)).expect("diagnostic json");
    assert_eq!(v["exit_code"], 3);
    assert_eq!(v["error"], "not_a_cocycle");
}
