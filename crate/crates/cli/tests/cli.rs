use std::process::{Command, Output};

use serde_json::Value;

fn data(name: &str) -> String {
    format!("{}/../core/data/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn hodge(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hodge"))
        .args(args)
        .output()
        .unwrap()
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn verify_exit_codes() {
    let ok = hodge(&["verify", &data("frobenius_dga.json")]);
    assert_eq!(ok.status.code(), Some(0));
    assert_eq!(report(&ok)["pass"], true);

    let broken = hodge(&["verify", &data("broken_associativity.json")]);
    assert_eq!(broken.status.code(), Some(1));
    let r = report(&broken);
    assert_eq!(r["stasheff"]["arities"][2]["n"], 3);
    assert_eq!(r["stasheff"]["arities"][2]["pass"], false);
    assert!(r["stasheff"]["arities"][2]["witness"].is_object());

    let malformed = hodge(&["verify", &data("malformed_scalar.json")]);
    assert_eq!(malformed.status.code(), Some(2));
    assert_eq!(report(&malformed)["error"]["field"], "m[0].entries[1].c");

    let missing = hodge(&["verify", "/nonexistent/file.json"]);
    assert_eq!(missing.status.code(), Some(2));
}

#[test]
fn trees_counts() {
    for (n, count) in [("2", 1), ("4", 11), ("6", 197)] {
        let out = hodge(&["trees", n, "--json"]);
        assert_eq!(out.status.code(), Some(0));
        assert_eq!(report(&out)["count"], count);
    }
    let listed = report(&hodge(&["trees", "3", "--list"]));
    assert_eq!(
        listed["trees"],
        serde_json::json!(["(x x x)", "(x (x x))", "((x x) x)"])
    );
    assert_eq!(hodge(&["trees", "1"]).status.code(), Some(2));
}

#[test]
fn transfer_output_file_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let first = dir.path().join("first.json");
    let second = dir.path().join("second.json");
    let input = data("example_5dim.json");
    let a = hodge(&["transfer", &input, "--output", first.to_str().unwrap()]);
    let b = hodge(&[
        "transfer",
        &input,
        "--sequential",
        "--output",
        second.to_str().unwrap(),
    ]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(b.status.code(), Some(0));
    assert!(a.stdout.is_empty());
    assert_eq!(
        std::fs::read(&first).unwrap(),
        std::fs::read(&second).unwrap()
    );
}

#[test]
fn model_output_reloads_as_input() {
    let dir = tempfile::tempdir().unwrap();
    let out = hodge(&["transfer", &data("koszul_pair.json"), "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let model = serde_json::to_string(&report(&out)["model"]).unwrap();
    let path = dir.path().join("model.json");
    std::fs::write(&path, model).unwrap();
    let again = hodge(&["verify", path.to_str().unwrap(), "--cutoff", "4"]);
    assert_eq!(
        again.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&again.stdout)
    );
}

#[test]
fn build_hodge_and_raw_transfer() {
    let built = hodge(&["build-hodge", &data("contractible.json")]);
    assert_eq!(built.status.code(), Some(0));
    assert_eq!(
        report(&built)["s"],
        serde_json::json!([["0", "0"], ["1", "0"]])
    );
    let raw = hodge(&[
        "transfer",
        &data("mixed_6dim.json"),
        "--require-harmonious",
        "false",
    ]);
    assert_eq!(raw.status.code(), Some(0));
    assert!(report(&raw)["structure"].is_object());
}

#[test]
fn compact_and_pretty_output() {
    let compact = hodge(&["trees", "3", "--json"]);
    assert_eq!(compact.stdout.iter().filter(|&&b| b == b'\n').count(), 1);
    let pretty = hodge(&["trees", "3", "--pretty"]);
    assert!(pretty.stdout.iter().filter(|&&b| b == b'\n').count() > 1);
}

#[test]
fn reads_stdin() {
    use std::io::Write;
    let mut child = Command::new(env!("CARGO_BIN_EXE_hodge"))
        .args(["verify", "-"])
        .stdin(std::process::Stdio::piped())
        .stdout(std::process::Stdio::piped())
        .spawn()
        .unwrap();
    let text = std::fs::read(data("frobenius_dga.json")).unwrap();
    child.stdin.take().unwrap().write_all(&text).unwrap();
    let out = child.wait_with_output().unwrap();
    assert_eq!(out.status.code(), Some(0));
}
