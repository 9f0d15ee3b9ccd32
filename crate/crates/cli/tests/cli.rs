use std::path::Path;
use std::process::{Command, Output};

use serde_json::{json, Value};

fn symlen(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_symlen")).args(args).output().expect("run symlen")
}

fn json_of(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn write(dir: &Path, name: &str, v: &Value) -> String {
    let path = dir.join(name);
    std::fs::write(&path, serde_json::to_string_pretty(v).unwrap()).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn analyze() {
    let r = json_of(&symlen(&["analyze", "<(A*B)>", "--p", "3"]));
    assert_eq!(r["extension_rank"], 1);
    assert_eq!(r["tuples"].as_array().unwrap().len(), 2);
    let r = json_of(&symlen(&["analyze", "D", "--p", "3"]));
    assert_eq!((r["extension_rank"].as_u64(), r["tuples"][0]["rank"].as_u64()), (Some(0), Some(0)));
    let bad = symlen(&["analyze", "<(A*B>", "--p", "3"]);
    assert_eq!(bad.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("position"));
}

#[test]
fn lvalue() {
    let r = json_of(&symlen(&["lvalue", "--group", "um:3,2"]));
    assert_eq!((r["l"].as_u64(), r["matches_bound"].as_bool()), (Some(4), Some(true)));
    let r = json_of(&symlen(&["lvalue", "--group", "ubar:2,2"]));
    assert_eq!((r["l"].as_u64(), r["analytic_bound"].as_u64()), (Some(2), Some(2)));
    let r = json_of(&symlen(&["lvalue", "--group", "um:8,3"]));
    assert_eq!(r["bound_only"], true);
    assert_eq!(symlen(&["lvalue", "--group", "um:x"]).status.code(), Some(2));
}

#[test]
fn reports_do_not_depend_on_threads() {
    let a = symlen(&["lvalue", "--group", "um:3,3", "--threads", "1"]);
    let b = symlen(&["lvalue", "--group", "um:3,3", "--threads", "4"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let c = symlen(&["lvalue", "--group", "um:3,3", "--threads", "1"]);
    assert_eq!(a.stdout, c.stdout);
    assert_eq!(symlen(&["lvalue", "--group", "um:2,2", "--threads", "0"]).status.code(), Some(2));
}

#[test]
fn factor_and_verify() {
    let dir = tempfile::tempdir().unwrap();
    let gen = json!([[1, 1], [0, 1]]);
    let hom = json!({
        "construction": "<<<A>>>",
        "target": {"kind": "cyclic", "p": 3, "k": 1},
        "images": {"g0@EEE": gen, "z@EE": gen, "z@E": gen, "z@": gen}
    });
    let hom_path = write(dir.path(), "hom.json", &hom);
    let cert_path = dir.path().join("cert.json");
    let out = symlen(&["factor", "--hom", &hom_path, "--p", "3", "--cert", cert_path.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let cert: Value = serde_json::from_str(&std::fs::read_to_string(&cert_path).unwrap()).unwrap();
    assert!(cert["final_extension_rank"].as_u64().unwrap() <= 1);
    assert_eq!(cert["l"], 1);
    let r = json_of(&symlen(&["verify", "--cert", cert_path.to_str().unwrap()]));
    assert_eq!(r["ok"], true);

    // one gamma word edited
    let mut bad = cert.clone();
    let gamma = bad["stages"][0]["gamma"].as_object_mut().unwrap();
    let key = gamma.keys().find(|k| k.starts_with("z@")).unwrap().clone();
    let word = gamma[&key].as_str().unwrap().to_string();
    gamma.insert(key.clone(), Value::String(format!("{} {}", word, key)));
    let bad_path = write(dir.path(), "bad.json", &bad);
    let out = symlen(&["verify", "--cert", &bad_path]);
    assert_eq!(out.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&out.stderr).contains(&key));
}

#[test]
fn trivial_hom_certificate() {
    let dir = tempfile::tempdir().unwrap();
    let id = json!([[1, 0, 0], [0, 1, 0], [0, 0, 1]]);
    let hom = json!({
        "construction": "<(D * <A>)>",
        "target": {"kind": "um", "m": 2, "p": 2},
        "images": {"g0@EL": id, "g1@EL": id, "g0@ERE": id, "z@ER": id, "z@": id}
    });
    let hom_path = write(dir.path(), "hom.json", &hom);
    let out = symlen(&["factor", "--hom", &hom_path, "--p", "2"]);
    let cert = json_of(&out);
    let cert_path = write(dir.path(), "cert.json", &cert);
    assert!(cert["stages"].as_array().unwrap().len() <= 2);
    let out = symlen(&["verify", "--cert", &cert_path, "--format", "table"]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).lines().any(|l| l.split_whitespace().collect::<Vec<_>>() == ["ok", "true"]));
}

#[test]
fn invalid_hom_lists_relation() {
    let dir = tempfile::tempdir().unwrap();
    let x = json!([[1, 1, 0, 0], [0, 1, 1, 0], [0, 0, 1, 1], [0, 0, 0, 1]]);
    let one = json!([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]]);
    let hom = json!({
        "construction": "<B>",
        "target": {"kind": "cyclic", "p": 3, "k": 2},
        "images": {"g0@E": x, "z@": x}
    });
    let hom_path = write(dir.path(), "hom.json", &hom);
    let out = symlen(&["factor", "--hom", &hom_path, "--p", "3"]);
    assert_eq!(out.status.code(), Some(3));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("g0@E"), "{}", err);
    let missing = json!({"construction": "<B>", "target": {"kind": "cyclic", "p": 3, "k": 2}, "images": {"z@": one}});
    let path = write(dir.path(), "missing.json", &missing);
    assert_eq!(symlen(&["factor", "--hom", &path, "--p", "3"]).status.code(), Some(3));
}

#[test]
fn bounds_massey_oracle() {
    let r = json_of(&symlen(&["massey", "--m", "3", "--p", "2"]));
    assert_eq!(r["bound"], 5);
    let r = json_of(&symlen(&["massey", "--m", "3", "--p", "2", "--exact-l"]));
    assert!(r["bound"].as_u64().unwrap() <= 5);
    let r = json_of(&symlen(&["oracle", "D", "--p", "3"]));
    assert_eq!((r["max_syml"].as_u64(), r["f_bound"].as_str(), r["pass"].as_bool()), (Some(1), Some("1"), Some(true)));
    let r = json_of(&symlen(&["oracle", "<(D * <A>)>", "--p", "3", "--omega", "1,0,0,0,0,0"]));
    assert_eq!(r["syml"], 1);
    assert_eq!(symlen(&["oracle", "D", "--p", "2"]).status.code(), Some(5));
    let r = json_of(&symlen(&["bounds", "--n", "2", "--group", "ubar:3,2", "--p", "2"]));
    assert_eq!((r["l"].as_u64(), r["f_value"].as_str()), (Some(4), Some("5")));
    let r = json_of(&symlen(&["bounds", "--n", "3", "--construction", "<<D>>", "--p", "3"]));
    assert_eq!(r["e"], 2);

    let dir = tempfile::tempdir().unwrap();
    let blocks = json!([
        {"id": "A", "kind": "free_pro_cyclic", "p": 3, "theta": [1]},
        {"id": "K", "kind": "custom", "p": 3, "theta": [1],
         "presentation": {"generators": ["a"], "relations": []}, "bounds": [1, null]}
    ]);
    let path = write(dir.path(), "blocks.json", &blocks);
    let out = symlen(&["bounds", "--n", "2", "--group", "cyclic:3,1", "--blocks", &path]);
    assert_eq!(out.status.code(), Some(5));
    let out = symlen(&["bounds", "--n", "2", "--construction", "<(A * K)>", "--blocks", &path]);
    assert_eq!(out.status.code(), Some(5));
}

#[test]
fn missing_file_is_io_error() {
    assert_eq!(symlen(&["verify", "--cert", "/nonexistent/cert.json"]).status.code(), Some(1));
}
