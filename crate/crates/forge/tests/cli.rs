use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_malcev-forge"))
        .args(args)
        .output()
        .unwrap()
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut a = args.to_vec();
    a.extend(["--format", "json"]);
    let out = run(&a);
    (out.status.code().unwrap(), serde_json::from_slice(&out.stdout).unwrap())
}

fn check<'a>(v: &'a Value, name: &str) -> &'a Value {
    v["checks"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["name"] == name)
        .unwrap_or_else(|| panic!("no check {name}"))
}

#[test]
fn exit_codes() {
    assert_eq!(json(&["identities", "builtin:m7-paper", "--identity", "sagle"]).0, 0);
    assert_eq!(json(&["form", "builtin:m7-paper"]).0, 1);
    assert_eq!(json(&["form", "builtin:m7"]).0, 0);
    assert_eq!(json(&["eaa", "builtin:abelian2"]).0, 3);
    assert_eq!(json(&["identities", "builtin:m7", "--identity", "jacobi"]).0, 1);
    assert_eq!(json(&["form", "builtin:nope"]).0, 3);
    assert_eq!(run(&["frobnicate"]).status.code(), Some(3));
    assert_eq!(run(&["eaa"]).status.code(), Some(3));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn refused_report_names_the_reason() {
    let (code, v) = json(&["affinize", "builtin:abelian2", "--flavor", "hat", "--check", "eaa"]);
    assert_eq!(code, 3);
    let c = check(&v, "loop.hypothesis.a00_is_h");
    assert_eq!(c["status"], "refused");
    let (code, v) = json(&[
        "affinize",
        "builtin:m7",
        "--flavor",
        "hat",
        "--cocycle",
        "1,2",
        "--check",
        "sagle",
    ]);
    assert_eq!(code, 3);
    assert!(check(&v, "affinize.precondition")["details"]["reason"]
        .as_str()
        .unwrap()
        .contains("cocycle"));
    let (code, _) = json(&[
        "identities",
        "builtin:m7",
        "--identity",
        "malcev_original",
        "--mode",
        "exhaustive",
    ]);
    assert_eq!(code, 3);
}

#[test]
fn sampled_identity_echoes_parameters() {
    let (code, v) = json(&[
        "identities",
        "builtin:m7",
        "--identity",
        "malcev_original",
        "--seed",
        "5",
        "--count",
        "20",
    ]);
    assert_eq!(code, 0);
    assert_eq!(v["subject"]["mode"], "sampled");
    assert_eq!(v["subject"]["seed"], 5);
    assert_eq!(v["subject"]["count"], 20);
}

#[test]
fn files_and_builtins_agree() {
    let file = format!("{}/../../data/m7.alg", env!("CARGO_MANIFEST_DIR"));
    let (_, a) = json(&["eaa", &file]);
    let (_, b) = json(&["eaa", "builtin:m7"]);
    assert_eq!(a["checks"], b["checks"]);
}

#[test]
fn parse_errors_report_lines() {
    let dir = std::env::temp_dir().join(format!("malcev-forge-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("bad.alg");
    std::fs::write(
        &path,
        "format_version = 1\nfield = Q\ngrading = trivial\n[basis]\na 0\n[products]\na a = b\n",
    )
    .unwrap();
    let out = run(&["form", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 7"));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn timing_is_opt_in() {
    let (_, v) = json(&["form", "builtin:sl2"]);
    assert!(v.get("elapsed_ms").is_none());
    let (_, v) = json(&["form", "builtin:sl2", "--timing"]);
    assert!(v["elapsed_ms"].is_u64());
}

#[test]
fn human_output_lists_every_check() {
    let out = run(&["decompose", "builtin:osp12"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("[pass] decompose.roots"));
    assert!(text.contains("[1]: span{x}"));
    assert!(text.ends_with("status: pass (exit 0), 7 tuples\n"), "{text}");
}

#[test]
fn thread_env_override() {
    let out = Command::new(env!("CARGO_BIN_EXE_malcev-forge"))
        .env("MALCEV_FORGE_THREADS", "2")
        .args(["identities", "builtin:sl2", "--identity", "jacobi", "--format", "json"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let bad = Command::new(env!("CARGO_BIN_EXE_malcev-forge"))
        .env("MALCEV_FORGE_THREADS", "many")
        .args(["form", "builtin:sl2"])
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(3));
}
