use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn corpus(rel: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../corpus")
        .join(rel)
        .to_string_lossy()
        .into_owned()
}

fn epsilon(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_epsilon")).args(args).output().unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json_lines(out: &Output) -> Vec<Value> {
    stdout(out).lines().map(|l| serde_json::from_str(l).unwrap()).collect()
}

fn scratch(name: &str, contents: &str) -> PathBuf {
    let path = Path::new(env!("CARGO_TARGET_TMPDIR")).join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

#[test]
fn verify_accepts_the_corpus_proofs() {
    let theory = corpus("theory.eps");
    let proofs = ["lem.prf", "eps-ex.prf", "forall-from-epsilon.prf"].map(|p| corpus(&format!("proofs/{p}")));
    let mut args = vec!["verify", "--theory", theory.as_str()];
    for p in &proofs {
        args.extend(["--proof", p.as_str()]);
    }
    let out = epsilon(&args);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
    assert_eq!(stdout(&out).lines().filter(|l| l.contains(": ok (")).count(), 5);
}

#[test]
fn per_node_report_locates_the_bad_node() {
    let bad = scratch(
        "bad-and.prf",
        r#"(and-i
             (axiom "x:A | P(x), Q(x) |- P(x)")
             (axiom "x:A | P(x), Q(x) |- P(x)")
             "x:A | P(x), Q(x) |- P(x) /\ Q(x)")"#,
    );
    let out = epsilon(&[
        "verify",
        "--theory",
        &corpus("theory.eps"),
        "--proof",
        bad.to_str().unwrap(),
        "--report",
        "json",
    ]);
    assert_eq!(code(&out), 1);
    let nodes = json_lines(&out);
    assert_eq!(nodes.len(), 3);
    assert_eq!(nodes[0]["node"], "0");
    assert_eq!(nodes[0]["rule"], "and-i");
    assert_eq!(nodes[0]["verdict"], "violation");
    assert!(!nodes[0]["error"].as_str().unwrap().is_empty());
    for n in &nodes[1..] {
        assert_eq!(n["verdict"], "ok");
        assert!(n.get("error").is_none());
    }
    assert_eq!(nodes[2]["node"], "0.1");
}

#[test]
fn holds_and_fails() {
    let model = corpus("models/three.fin");
    let yes = epsilon(&[
        "holds",
        "--model",
        &model,
        "--sequent",
        "x:A | P(x) |- exists y:A. R(x, y)",
    ]);
    assert_eq!(code(&yes), 0);
    let no = epsilon(&[
        "--json",
        "holds",
        "--model",
        &model,
        "--sequent",
        "| |- forall x:A. P(x)",
    ]);
    assert_eq!(code(&no), 1);
    assert_eq!(json_lines(&no)[0]["holds"], false);
}

#[test]
fn epsilon_table_in_a_model() {
    let out = epsilon(&[
        "--json",
        "epsilon",
        "--model",
        &corpus("models/two.fin"),
        "--theory",
        &corpus("theory.eps"),
        "--formula",
        "eps x:A. ~P(x)",
    ]);
    assert_eq!(code(&out), 0);
    let v = &json_lines(&out)[0];
    assert_eq!(v["domain"], 1);
    assert_eq!(v["codomain"], 2);
    assert_eq!(v["table"].as_array().unwrap().len(), 1);
}

#[test]
fn empty_guard_refuses_nontrivial_models() {
    let out = epsilon(&[
        "holds",
        "--model",
        &corpus("models/nontrivial-empty.fin"),
        "--sequent",
        "| |- true",
    ]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).starts_with("refused"));
    let ok = epsilon(&[
        "holds",
        "--model",
        &corpus("models/degenerate.fin"),
        "--sequent",
        "x:A | |- P(x)",
    ]);
    assert_eq!(code(&ok), 0, "{}", stdout(&ok));
}

#[test]
fn countermodel_outcomes() {
    let theory = corpus("theory.eps");
    let found = epsilon(&[
        "--json",
        "countermodel",
        "--theory",
        &theory,
        "--sequent",
        "x:A | P(x) |- Q(x)",
    ]);
    assert_eq!(code(&found), 1);
    let v = &json_lines(&found)[0];
    assert_eq!(v["verdict"], "found");
    assert_eq!(v["model"]["carriers"]["A"], 1);

    let none = epsilon(&[
        "countermodel",
        "--theory",
        &theory,
        "--sequent",
        "| |- P(eps x:A. P(x)) \\/ forall x:A. ~P(x)",
    ]);
    assert_eq!(code(&none), 0, "{}", stdout(&none));

    let cut = epsilon(&[
        "countermodel",
        "--theory",
        &theory,
        "--sequent",
        "| |- true",
        "--budget",
        "0",
    ]);
    assert_eq!(code(&cut), 2);
}

#[test]
fn audit_reports_each_derivation() {
    let out = epsilon(&[
        "--json",
        "audit",
        "--theory",
        &corpus("theory.eps"),
        "--proof",
        &corpus("proofs/lem.prf"),
    ]);
    assert_eq!(code(&out), 0);
    let lines = json_lines(&out);
    assert_eq!(lines.len(), 2);
    for l in &lines {
        assert_eq!(l["report"]["verdict"], "pass");
        assert_eq!(l["report"]["truncated"], false);
    }
    let tight = epsilon(&[
        "audit",
        "--theory",
        &corpus("theory.eps"),
        "--proof",
        &corpus("proofs/lem.prf"),
        "--budget",
        "3",
    ]);
    assert_eq!(code(&tight), 2);
}

#[test]
fn laws_stream_json_lines() {
    let out = epsilon(&["--json", "laws", "--max-size", "2"]);
    assert_eq!(code(&out), 0);
    let lines = json_lines(&out);
    assert!(lines.iter().all(|l| l["verdict"] == "pass"));
    assert_eq!(lines[0]["law"], "boolean-algebra");
}

#[test]
fn check_reports_files() {
    let out = epsilon(&[
        "check",
        "--theory",
        &corpus("models/three.fin"),
        &corpus("proofs/forall-i.prf"),
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    assert!(stdout(&out).contains("model is well formed"));
}

#[test]
fn exit_codes_for_bad_invocations() {
    assert_eq!(code(&epsilon(&["frobnicate"])), 64);
    assert_eq!(code(&epsilon(&["laws", "--max-size", "0"])), 64);
    assert_eq!(code(&epsilon(&["--help"])), 0);
    assert_eq!(code(&epsilon(&["--version"])), 0);

    let missing = epsilon(&["verify", "--theory", "/nonexistent/theory.eps", "--proof", "x.prf"]);
    assert_eq!(code(&missing), 66);

    let broken = scratch("broken.prf", "(axiom \"x:A | P(x) |- P(x)\"");
    let out = epsilon(&[
        "verify",
        "--theory",
        &corpus("theory.eps"),
        "--proof",
        broken.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 65);
    assert!(String::from_utf8_lossy(&out.stderr).contains("broken.prf"));

    let bad_seq = epsilon(&[
        "holds",
        "--model",
        &corpus("models/three.fin"),
        "--sequent",
        "| |- P(y)",
    ]);
    assert_eq!(code(&bad_seq), 65);
}
