use std::fs;
use std::io::Write;
use std::process::{Command, Output, Stdio};

use ordkit::complexes::FreeComplex;
use ordkit::patching::koszul_input;
use ordkit::repimage::group_from_json;
use ordkit::tower::{glue_ordinary, ComplexTower};
use serde_json::{json, Value};

fn ordkit(args: &[&str], stdin: Option<&str>) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_ordkit"))
        .args(args)
        .env_remove("ORDKIT_SEED")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(stdin.unwrap_or("").as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn parsed(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

const MODULE: &str = r#"{"ring": {"kind": "Zpc", "p": 3, "c": 2}, "n": 2, "T": [[1, 1], [1, 1]]}"#;

#[test]
fn ordinary_module_example() {
    let out = ordkit(&["ordinary", "module"], Some(MODULE));
    assert_eq!(out.status.code(), Some(0));
    let v = parsed(&out);
    assert_eq!(v["command"], "ordinary module");
    assert_eq!(v["pass"], true);
    assert_eq!(v["witnesses"]["e"], json!([[5, 5], [5, 5]]));
    assert_eq!(v["timing"], Value::Null);
}

#[test]
fn check_iso_away_from_one_is_a_violation() {
    let out = ordkit(&["hecke", "check-iso", "--n", "2", "--p", "3", "--q", "2"], None);
    assert_eq!(out.status.code(), Some(1));
    let v = parsed(&out);
    assert_eq!(v["pass"], false);
    assert!(v["witnesses"]["violated"][0].as_str().unwrap().starts_with("s1^2"));
    let ok = ordkit(&["hecke", "check-iso", "--n", "3", "--p", "5", "--q", "1"], None);
    assert_eq!(ok.status.code(), Some(0));
}

#[test]
fn malformed_json_exits_2_with_location() {
    let out = ordkit(&["ordinary", "module"], Some("{\"ring\": [1,\n 2"));
    assert_eq!(out.status.code(), Some(2));
    let v = parsed(&out);
    assert!(v["error"]["location"].as_str().unwrap().contains("line 2"));
}

#[test]
fn schema_errors_exit_2_with_location() {
    let out = ordkit(&["ordinary", "module"], Some(r#"{"ring": {"kind": "Zpc", "p": 3, "c": 2}, "T": [[1]]}"#));
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(parsed(&out)["error"]["location"], "/n");
    let out = ordkit(&["ring"], Some(r#"{"kind": "Zpc", "p": 4, "c": 1}"#));
    assert_eq!(out.status.code(), Some(2));
    let out = ordkit(&["suite", "no-such-suite"], None);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn replay_is_byte_identical_and_env_seed_wins() {
    let a = ordkit(&["--seed", "5", "ordinary", "module"], Some(MODULE));
    let b = ordkit(&["--seed", "5", "ordinary", "module"], Some(MODULE));
    assert_eq!(a.stdout, b.stdout);
    let out = Command::new(env!("CARGO_BIN_EXE_ordkit"))
        .args(["--seed", "5", "suite", "numerology"])
        .env("ORDKIT_SEED", "11")
        .output()
        .unwrap();
    assert_eq!(parsed(&out)["seed"], 11);
    let again = Command::new(env!("CARGO_BIN_EXE_ordkit")).args(["suite", "numerology"]).env("ORDKIT_SEED", "11").output().unwrap();
    assert_eq!(out.stdout, again.stdout);
    let bad = Command::new(env!("CARGO_BIN_EXE_ordkit")).args(["suite", "11"]).env("ORDKIT_SEED", "x").output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn truncate_flags_override_the_input() {
    let c = r#"{"ring": {"kind": "Zpc", "p": 3, "c": 2}, "degrees": [0, 1], "ranks": {"0": 1, "1": 1}, "differentials": {"0": [[3]]}}"#;
    let out = ordkit(&["complex", "truncate", "--n", "0", "--side", "le"], Some(c));
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let v = parsed(&out);
    assert_eq!(v["witnesses"]["les_verified"], true);
    let hom = ordkit(&["complex", "homology"], Some(c));
    assert_eq!(hom.status.code(), Some(0));
}

#[test]
fn dims_commands() {
    let out = ordkit(&["dims", "space"], Some(r#"{"r1": 0, "r2": 1, "n": 2}"#));
    let v = parsed(&out);
    assert_eq!((v["witnesses"]["d"].as_i64(), v["witnesses"]["l0"].as_i64(), v["witnesses"]["q0"].as_i64()), (Some(3), Some(1), Some(1)));
    let neg = ordkit(&["dims", "selmer"], Some(r#"{"h1_dual": 0, "h0_dual": 1, "t": 1}"#));
    assert_eq!(neg.status.code(), Some(1));
    let p = ordkit(&["dims", "presentation"], Some(r#"{"q": 5, "n": 2, "degree": 2, "l0": 1, "t": 1}"#));
    assert_eq!(parsed(&p)["witnesses"]["g"], 2);
}

#[test]
fn patch_run_on_koszul_input() {
    let dir = tempfile::tempdir().unwrap();
    let mut input = koszul_input(3, 4).unwrap().to_json();
    input["horizon"] = json!(2);
    let path = dir.path().join("koszul.json");
    fs::write(&path, input.to_string()).unwrap();
    let out = ordkit(&["patch", "run", path.to_str().unwrap(), "--horizon", "3"], None);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let deep = ordkit(&["patch", "run", path.to_str().unwrap(), "--horizon", "9"], None);
    assert_eq!(deep.status.code(), Some(1));
}

fn generate(kind: &str, count: &str, seed: &str, dir: &std::path::Path) -> Value {
    let out = ordkit(&["--seed", seed, "corpus", "generate", "--kind", kind, "--count", count, "--out", dir.to_str().unwrap()], None);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    parsed(&out)
}

#[test]
fn corpus_is_deterministic_and_valid() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let va = generate("complexes", "10", "42", a.path());
    let vb = generate("complexes", "10", "42", b.path());
    assert_eq!(va, vb);
    for i in 0..10 {
        let name = format!("complexes-{i:04}.json");
        let x = fs::read(a.path().join(&name)).unwrap();
        assert_eq!(x, fs::read(b.path().join(&name)).unwrap());
        FreeComplex::from_json(&serde_json::from_slice(&x).unwrap()).unwrap();
    }
    assert_eq!(fs::read(a.path().join("manifest.json")).unwrap(), fs::read(b.path().join("manifest.json")).unwrap());

    let t = tempfile::tempdir().unwrap();
    generate("towers", "5", "7", t.path());
    for i in 0..5 {
        let v: Value = serde_json::from_slice(&fs::read(t.path().join(format!("towers-{i:04}.json"))).unwrap()).unwrap();
        assert!(glue_ordinary(&ComplexTower::from_json(&v).unwrap()).unwrap().verified());
    }
    let g = tempfile::tempdir().unwrap();
    generate("groups", "3", "1", g.path());
    for i in 0..3 {
        let v: Value = serde_json::from_slice(&fs::read(g.path().join(format!("groups-{i:04}.json"))).unwrap()).unwrap();
        group_from_json(&v).unwrap();
    }
    for kind in ["patching-inputs", "hecke-modules"] {
        let d = tempfile::tempdir().unwrap();
        let m = generate(kind, "3", "2", d.path());
        assert_eq!(m["witnesses"]["files"].as_array().unwrap().len(), 3);
    }
    let out = ordkit(&["corpus", "generate", "--kind", "spheres", "--out", a.path().to_str().unwrap()], None);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn corpus_files_feed_the_commands() {
    let t = tempfile::tempdir().unwrap();
    generate("towers", "2", "3", t.path());
    let tower = t.path().join("towers-0000.json");
    for sub in ["glue", "glue-min", "glue-ord", "control"] {
        let out = ordkit(&["tower", sub, tower.to_str().unwrap()], None);
        assert_eq!(out.status.code(), Some(0), "{sub}: {}", String::from_utf8_lossy(&out.stdout));
    }
    let h = tempfile::tempdir().unwrap();
    generate("hecke-modules", "2", "3", h.path());
    let out = ordkit(&["hecke", "support", h.path().join("hecke-modules-0001.json").to_str().unwrap()], None);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let p = tempfile::tempdir().unwrap();
    generate("patching-inputs", "2", "3", p.path());
    let out = ordkit(&["patch", "run", p.path().join("patching-inputs-0000.json").to_str().unwrap(), "--horizon", "1"], None);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
}
