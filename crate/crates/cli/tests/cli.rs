use std::process::{Command, Output};

fn hecke(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hecke")).args(args).output().expect("spawn hecke")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn decompose_json() {
    let o = hecke(&["decompose", "--gamma0", "11", "--matrix", "1,0;0,2", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["schema"], 1);
    assert_eq!(v["degree"], 3);
    assert_eq!(v["reps"].as_array().unwrap().len(), 3);
}

#[test]
fn product_sl2z() {
    let o = hecke(&["product", "--sl2z", "--a", "1,0;0,2", "--b", "1,0;0,2", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let terms = v["terms"].as_array().unwrap();
    assert_eq!(terms.len(), 2);
    assert!(v.get("witness").is_some());
    let o = hecke(&["product", "--sl2z", "--a", "1,0;0,2", "--b", "1,0;0,2", "--json", "--no-witness"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(v.get("witness").is_none());
}

#[test]
fn eigs_level_11() {
    let o = hecke(&["eigs", "--gamma0", "11", "--p-list", "2,3", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let ops = v["operators"].as_array().unwrap();
    assert_eq!(ops[0]["eigenvalues"][0][0], "-2");
    assert_eq!(ops[1]["eigenvalues"][0][0], "-1");
    assert_eq!(ops[0]["oracle"], -2);
    let csv = stdout(&hecke(&["eigs", "--gamma0", "11", "--p-list", "2", "--csv"]));
    assert!(csv.starts_with("p,charpoly,eigenvalues,oracle\n2,"));
}

#[test]
fn hecke_matrix_csv() {
    let o = hecke(&["hecke-matrix", "--gamma0", "11", "--p", "2", "--cuspidal", "--csv"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "-2,0\n0,-2\n");
}

#[test]
fn verify_all_passes_and_is_deterministic() {
    let args = ["verify", "--suite", "all", "--gamma0", "11", "--seed", "0", "--trials", "3", "--json"];
    let a = hecke(&args);
    let b = hecke(&args);
    assert_eq!(a.status.code(), Some(0), "{}", stdout(&a));
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["schema"], 1);
    assert_eq!(v["passed"], true);
}

#[test]
fn verify_reports_failures() {
    // T₂⋆T₂ over SL₂(Z): ω is not well defined on the [2,2] component.
    let o = hecke(&["verify", "--suite", "heckemod", "--sl2z", "--a", "1,0;0,2", "--b", "1,0;0,2", "--trials", "3"]);
    assert_eq!(o.status.code(), Some(1), "{}", stdout(&o));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(hecke(&["decompose", "--matrix", "1,0;0,2"]).status.code(), Some(2));
    assert_eq!(hecke(&["decompose", "--sl2z", "--matrix", "1,2,3"]).status.code(), Some(2));
    assert_eq!(hecke(&["decompose", "--sl2z", "--matrix", "1,0;0,-2"]).status.code(), Some(2));
    assert_eq!(hecke(&["verify", "--suite", "nope", "--sl2z"]).status.code(), Some(2));
    assert_eq!(hecke(&["eigs", "--gamma0", "11", "--p-list", "11"]).status.code(), Some(2));
}

#[test]
fn cap_exceeded_exits_3() {
    let o = hecke(&["decompose", "--sl2z", "--matrix", "1,0;0,64", "--cap", "4"]);
    assert_eq!(o.status.code(), Some(3));
}
