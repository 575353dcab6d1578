//! The shipped proof corpus: every script checks, survives a print/parse
//! round trip and has no small countermodel.

use std::path::{Path, PathBuf};

use epsilon_core::kernel::{check_derivation, derive_epsilon_exists_equiv, parse_script, print_script, Derivation};
use epsilon_core::semantics::{countermodel_search, AuditOptions, CountermodelOutcome};
use epsilon_core::syntax::{parse_context, parse_document, parse_formula};
use epsilon_core::{Signature, TypeExpr};

fn corpus() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
}

fn signature() -> Signature {
    let src = std::fs::read_to_string(corpus().join("theory.eps")).unwrap();
    parse_document(&src).unwrap().theory.signature
}

fn scripts(sig: &Signature) -> Vec<(String, Vec<Derivation>)> {
    let mut paths: Vec<PathBuf> = std::fs::read_dir(corpus().join("proofs"))
        .unwrap()
        .map(|e| e.unwrap().path())
        .collect();
    paths.sort();
    paths
        .into_iter()
        .map(|p| {
            let src = std::fs::read_to_string(&p).unwrap();
            let name = p.file_name().unwrap().to_string_lossy().into_owned();
            let ds = parse_script(&src, sig).unwrap_or_else(|e| panic!("{name}: {e}"));
            (name, ds)
        })
        .collect()
}

#[test]
fn every_script_checks() {
    let sig = signature();
    let all = scripts(&sig);
    assert!(all.len() >= 15);
    for (name, ds) in &all {
        assert!(!ds.is_empty(), "{name} is empty");
        for d in ds {
            check_derivation(d, &sig).unwrap_or_else(|e| panic!("{name}: {e}"));
        }
    }
}

#[test]
fn printing_and_reparsing_is_the_identity() {
    let sig = signature();
    for (name, ds) in scripts(&sig) {
        let printed = print_script(&ds);
        let again = parse_script(&printed, &sig).unwrap_or_else(|e| panic!("{name}: {e}\n{printed}"));
        assert_eq!(again, ds, "{name}");
        assert_eq!(print_script(&again), printed);
    }
}

#[test]
fn equivalence_scripts_are_the_derived_trees() {
    let sig = signature();
    let ctx = parse_context("", &sig).unwrap();
    let x_ctx = parse_context("x:A", &sig).unwrap();
    let psi = parse_formula("P(x) /\\ Q(x)", &x_ctx, &sig).unwrap();
    let (forward, backward) = derive_epsilon_exists_equiv(&ctx, &psi, "x", &TypeExpr::base("A"), &sig).unwrap();
    let all = scripts(&sig);
    let find = |file: &str| all.iter().find(|(n, _)| n == file).unwrap().1.clone();
    assert_eq!(find("eps-exists-forward.prf"), vec![forward]);
    assert_eq!(find("eps-exists-backward.prf"), vec![backward]);
}

#[test]
fn no_small_countermodel_to_any_conclusion() {
    let sig = signature();
    let opts = AuditOptions {
        max_carrier: 3,
        ..AuditOptions::default()
    };
    for (name, ds) in scripts(&sig) {
        for d in ds {
            match countermodel_search(&d.conclusion, &sig, &opts).unwrap() {
                CountermodelOutcome::None { searched } => assert!(searched > 0),
                other => panic!("{name}: {} has {other:?}", d.conclusion),
            }
        }
    }
}

#[test]
fn unprovable_sequent_has_a_countermodel() {
    let sig = signature();
    let seq = epsilon_core::syntax::parse_sequent("x:A | P(x) |- R(x, x)", &sig).unwrap();
    let outcome = countermodel_search(&seq, &sig, &AuditOptions::default()).unwrap();
    assert!(matches!(outcome, CountermodelOutcome::Found { .. }));
}
