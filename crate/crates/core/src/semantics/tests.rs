use super::*;
use crate::kernel::{parse_script, Derivation};
use crate::syntax::{parse_formula, parse_sequent, parse_term, parse_theory, Theory};

const THEORY: &str = "type A; fun c : A; fun f : A -> A; rel P(A); rel Q(A); rel R(A, A)";

fn theory() -> Theory {
    parse_theory(THEORY).unwrap()
}

fn model(assignments: &str) -> Interpretation {
    Interpretation::parse_model(assignments, Some(&theory())).unwrap().1
}

fn a() -> TypeExpr {
    TypeExpr::base("A")
}

fn two() -> Interpretation {
    model("carrier A = 2; fun c = [1]; fun f = [1, 0]; rel P = {1}; rel Q = {0, 1}; rel R = {(0, 1), (1, 1)}")
}

#[test]
fn type_interpretation() {
    let i = two();
    assert_eq!(interpret_type(&TypeExpr::Unit, &i).unwrap(), FinObj(1));
    assert_eq!(interpret_type(&TypeExpr::fun(a(), a()), &i).unwrap(), FinObj(4));
    assert_eq!(
        interpret_type(&TypeExpr::sum(a(), TypeExpr::Unit), &i).unwrap(),
        FinObj(3)
    );
    assert_eq!(interpret_type(&TypeExpr::prod(a(), a()), &i).unwrap(), FinObj(4));
    assert_eq!(
        interpret_type(&TypeExpr::Empty, &i),
        Err(SemanticsError::EmptyTypeViolation)
    );
}

#[test]
fn epsilon_terms() {
    let i = two();
    let s = theory().signature;
    let empty = ContextLayout::new(&Context::new(), &i).unwrap();
    let (t, _) = parse_term("eps x:A. P(x)", &Context::new(), &s).unwrap();
    assert_eq!(interpret_term(&empty, &t, &i).unwrap().table(), &[1]);
    let (t, _) = parse_term("eps x:A. false", &Context::new(), &s).unwrap();
    assert_eq!(interpret_term(&empty, &t, &i).unwrap().table(), &[0]);
    // a variable is a projection
    let ctx = Context::from_vars([("x", a()), ("y", a())]).unwrap();
    let layout = ContextLayout::new(&ctx, &i).unwrap();
    let y = interpret_term(&layout, &Term::var("y", a()), &i).unwrap();
    assert_eq!(y.table(), &[0, 1, 0, 1]);
    assert_eq!(layout.decode(2), vec![1, 0]);
    assert_eq!(layout.encode(&[1, 0]), 2);
    // ε depending on a parameter: least y with R(x, y)
    let (t, _) = parse_term("eps y:A. R(x, y)", &Context::from_vars([("x", a())]).unwrap(), &s).unwrap();
    let lx = ContextLayout::new(&Context::from_vars([("x", a())]).unwrap(), &i).unwrap();
    assert_eq!(interpret_term(&lx, &t, &i).unwrap().table(), &[1, 1]);
}

#[test]
fn formula_interpretation() {
    let i = two();
    let s = theory().signature;
    let empty = ContextLayout::new(&Context::new(), &i).unwrap();
    let f = |src: &str| interpret_formula(&empty, &parse_formula(src, &Context::new(), &s).unwrap(), &i).unwrap();
    assert!(f("true").is_full());
    assert!(f("exists x:A. P(x)").is_full());
    assert!(f("forall x:A. P(x)").is_empty());
    assert!(f("forall x:A. Q(x)").is_full());
    assert!(f("f(c) = eps x:A. ~P(x)").is_full());
    assert!(f("forall x:A. exists y:A. R(x, y) /\\ P(y)").is_full());
    // shadowed binders pick the innermost variable
    assert!(f("exists x:A. ~P(x) /\\ (exists x:A. P(x))").is_full());
}

#[test]
fn substitution_lemma_examples() {
    let i = two();
    let s = theory().signature;
    let x_ctx = Context::from_vars([("x", a())]).unwrap();
    let px = parse_formula("P(x)", &x_ctx, &s).unwrap();
    let sub = Substitution::single("x", Term::constant("c"));
    assert!(substitution_lemma_check(&Context::new(), &x_ctx, &px, &sub, &i, &s).unwrap());
    assert!(substitution_lemma_check(&x_ctx, &x_ctx, &px, &Substitution::new(), &i, &s).unwrap());
    let phi = parse_formula("P(eps y:A. R(x, y))", &x_ctx, &s).unwrap();
    let z_ctx = Context::from_vars([("z", a())]).unwrap();
    let (t, _) = parse_term("f(eps y:A. R(z, y))", &z_ctx, &s).unwrap();
    assert!(substitution_lemma_check(&z_ctx, &x_ctx, &phi, &Substitution::single("x", t), &i, &s).unwrap());
}

#[test]
fn satisfaction() {
    let i = two();
    let s = theory().signature;
    for (src, expected) in [
        ("x:A | P(x) |- P(x)", true),
        ("| exists x:A. P(x) |- P(eps x:A. P(x))", true),
        ("x:A | exists y:A. R(x, y) |- R(x, eps y:A. R(x, y))", true),
        ("| |- forall x:A. P(x)", false),
        ("x:A | P(x) |- Q(x)", true),
        ("x:A | Q(x) |- P(x)", false),
    ] {
        assert_eq!(holds(&parse_sequent(src, &s).unwrap(), &i).unwrap(), expected, "{src}");
    }
}

fn derivation(src: &str) -> Derivation {
    parse_script(src, &theory().signature).unwrap().remove(0)
}

#[test]
fn audits() {
    let s = theory().signature;
    let opts = AuditOptions {
        max_carrier: 3,
        budget: DEFAULT_BUDGET,
    };
    let d = derivation(r#"(eps-i (axiom "x:A | P(x) |- P(x)") "| exists x:A. P(x) |- P(eps x:A. P(x))")"#);
    let r = audit_soundness(&d, &s, &opts).unwrap();
    assert!(r.passed(), "{r:?}");
    // |A| = 1, 2, 3 with every P: 2 + 4 + 8
    assert_eq!(r.interpretations, 14);
    assert_eq!(r.symbols, vec!["P"]);

    let lem = derivation(r#"(lem "| |- P(c) \/ ~P(c)")"#);
    let r = audit_soundness(&lem, &s, &AuditOptions { max_carrier: 2, ..opts }).unwrap();
    assert!(r.passed());
    // |A| = 1: 1·2, |A| = 2: 2·4
    assert_eq!(r.interpretations, 10);

    let refl = derivation(r#"(eq-refl "x:A | |- f(x) = f(x)")"#);
    assert!(audit_soundness(&refl, &s, &opts).unwrap().passed());

    let truncated = audit_soundness(&d, &s, &AuditOptions { budget: 5, ..opts }).unwrap();
    assert_eq!(truncated.verdict, AuditVerdict::Truncated);
    assert_eq!(truncated.interpretations, 5);

    let bad = derivation(r#"(axiom "| Q(c) |- P(c)")"#);
    assert!(matches!(audit_soundness(&bad, &s, &opts), Err(AuditError::Rejected(_))));
}

#[test]
fn countermodels() {
    let s = theory().signature;
    let opts = AuditOptions::default();
    let seq = parse_sequent("|- exists x:A. P(x)", &s).unwrap();
    match countermodel_search(&seq, &s, &opts).unwrap() {
        CountermodelOutcome::Found { index, model, .. } => {
            assert_eq!(index, 0);
            assert_eq!(model.carrier("A"), Some(FinObj(1)));
            assert!(model.rel("P").unwrap().is_empty());
        }
        other => panic!("{other:?}"),
    }
    let seq = parse_sequent("x:A | P(x) |- P(x)", &s).unwrap();
    assert_eq!(
        countermodel_search(&seq, &s, &opts).unwrap(),
        CountermodelOutcome::None { searched: 14 }
    );
    let seq = parse_sequent("| P(eps x:A. P(x)) |- forall x:A. P(x)", &s).unwrap();
    match countermodel_search(&seq, &s, &opts).unwrap() {
        CountermodelOutcome::Found { model, signature, .. } => {
            assert_eq!(model.carrier("A"), Some(FinObj(2)));
            assert_eq!(model.rel("P").unwrap().members(), &[0]);
            assert_eq!(
                model.to_model_source(&signature),
                "carrier A = 2;\npoint A = 0;\nrel P = {(0)};\n"
            );
        }
        other => panic!("{other:?}"),
    }
    let seq = parse_sequent("|- exists x:A. R(x, x)", &s).unwrap();
    let r = countermodel_search(
        &seq,
        &s,
        &AuditOptions {
            max_carrier: 3,
            budget: 0,
        },
    )
    .unwrap();
    assert_eq!(r, CountermodelOutcome::Truncated { searched: 0 });
}

#[test]
fn empty_type_guard_both_branches() {
    let th = parse_theory("type A; rel P(A); fun z : Empty -> A").unwrap();
    let big = Interpretation::parse_model("carrier A = 2; rel P = {0}; fun z = []", Some(&th));
    // the table for `z` has no valid shape, since `Empty` has no carrier here
    assert!(big.is_err());
    let mut i = Interpretation::new();
    i.set_carrier("A", 2).unwrap();
    let report = empty_type_guard(&th, &i).unwrap_err();
    assert_eq!(report.offending, vec![("A".to_string(), 2)]);
    assert!(report.to_string().contains("1 -> 0"));

    let (_, degenerate) = Interpretation::parse_model("carrier A = 1; rel P = {0}; fun z = [0]", Some(&th)).unwrap();
    assert!(empty_type_guard(&th, &degenerate).is_ok());
    assert_eq!(interpret_type(&TypeExpr::Empty, &degenerate).unwrap(), FinObj(1));

    let plain = theory();
    assert!(empty_type_guard(&plain, &two()).is_ok());
    let binder_only = parse_theory("type A; axiom e : | |- exists x:Empty. true").unwrap();
    assert!(theory_mentions_empty(&binder_only));
}

#[test]
fn model_files() {
    let th = theory();
    let i = two();
    let src = i.to_model_source(&th.signature);
    let (_, again) = Interpretation::parse_model(&src, Some(&th)).unwrap();
    assert_eq!(again, i);
    let json = serde_json::to_string(&i.to_json(&th.signature)).unwrap();
    assert_eq!(Interpretation::from_json(&th.signature, &json).unwrap(), i);
    // a combined file carries its own declarations
    let combined = format!("{THEORY};\n{src}");
    let (t2, i2) = Interpretation::parse_model(&combined, None).unwrap();
    assert_eq!(t2.signature, th.signature);
    assert_eq!(i2, i);
    assert_eq!(
        Interpretation::parse_model(&combined, Some(&th)).unwrap_err(),
        ModelError::TwoTheories
    );
}

#[test]
fn model_file_errors() {
    let th = theory();
    let bad = |src: &str| Interpretation::parse_model(src, Some(&th)).unwrap_err();
    let base = "carrier A = 2; fun c = [1]; fun f = [1, 0]; rel P = {1}; rel Q = {}; rel R = {}";
    assert!(matches!(
        bad(&format!("{base}; point A = 1")),
        ModelError::Invalid { .. }
    ));
    assert!(matches!(bad("carrier A = 2; fun c = [1]"), ModelError::Invalid { .. }));
    assert!(matches!(
        bad(&base.replace("f = [1, 0]", "f = [1, 2]")),
        ModelError::Invalid { .. }
    ));
    assert!(matches!(
        bad(&base.replace("R = {}", "R = {(0, 2)}")),
        ModelError::Invalid { .. }
    ));
    assert!(matches!(
        bad(&format!("{base}; carrier A = 3")),
        ModelError::Invalid { .. }
    ));
    assert!(matches!(
        bad(&base.replace("carrier A = 2", "carrier A = 0")),
        ModelError::Invalid { .. }
    ));
    assert!(matches!(
        bad(&format!("{base}; rel S = {{}}")),
        ModelError::Invalid { .. }
    ));
}

#[test]
fn enumeration_order() {
    let th = parse_theory("type A; type B; fun c : A; rel P(B)").unwrap();
    let space = ModelSpace::new(th.signature.clone(), 2, false);
    let mut seen = Vec::new();
    space
        .for_each(|i| {
            seen.push((
                i.carrier("A").unwrap().size(),
                i.carrier("B").unwrap().size(),
                i.fun("c").unwrap().apply(0),
                i.rel("P").unwrap().members().to_vec(),
            ));
            Ok(true)
        })
        .unwrap();
    // (1,1): 2, (1,2): 4, (2,1): 4, (2,2): 8
    assert_eq!(seen.len(), 18);
    assert_eq!(seen[0], (1, 1, 0, vec![]));
    assert_eq!(seen[1], (1, 1, 0, vec![0]));
    assert_eq!(seen[2], (1, 2, 0, vec![]));
    assert_eq!(seen[3], (1, 2, 0, vec![0]));
    assert_eq!(seen[4], (1, 2, 0, vec![1]));
    assert_eq!(seen[8], (2, 1, 1, vec![]));
    assert_eq!(seen[10], (2, 2, 0, vec![]));
}
