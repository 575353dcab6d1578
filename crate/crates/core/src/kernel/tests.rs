use super::*;
use crate::syntax::{parse_formula, parse_sequent, parse_theory, Context, Formula, Signature, TypeExpr};

fn sig() -> Signature {
    parse_theory("type A; fun c : A; fun f : A -> A; rel P(A); rel Q(A); rel R(A, A)")
        .unwrap()
        .signature
}

fn seq(src: &str) -> Sequent {
    parse_sequent(src, &sig()).unwrap()
}

fn one(src: &str) -> Derivation {
    let mut ds = parse_script(src, &sig()).unwrap();
    assert_eq!(ds.len(), 1);
    ds.pop().unwrap()
}

fn accepts(src: &str) {
    let d = one(src);
    if let Err(report) = check_derivation(&d, &sig()) {
        panic!("rejected {src}: {report:?}");
    }
}

fn rejects(src: &str) -> Vec<Violation> {
    check_derivation(&one(src), &sig()).unwrap_err().violations
}

#[test]
fn epsilon_introduction_over_axiom() {
    let d = Derivation::new(
        Rule::EpsI,
        vec![Derivation::leaf(Rule::Axiom, seq("x:A | P(x) |- P(x)"))],
        seq("| exists x:A. P(x) |- P(eps x:A. P(x))"),
    );
    check_derivation(&d, &sig()).unwrap();
}

#[test]
fn epsilon_introduction_is_closed_under_renaming() {
    accepts(r#"(eps-i (axiom "y:A | P(y) |- P(y)") "| exists z:A. P(z) |- P(eps w:A. P(w))")"#);
}

#[test]
fn epsilon_introduction_shape_is_exact() {
    // ε_ψ lives in Γ, so x must not be in the conclusion context
    let v = rejects(r#"(eps-i (axiom "x:A | P(x) |- P(x)") "x:A | exists y:A. P(y) |- P(eps y:A. P(y))")"#);
    assert_eq!(v[0].rule, "eps-i");
    // the substituted conclusion must use the ε-term of the hypothesis
    rejects(r#"(eps-i (axiom "x:A | P(x) |- P(x)") "| exists x:A. P(x) |- P(c)")"#);
    // extra hypotheses are not allowed
    rejects(r#"(eps-i (axiom "x:A | P(x) |- P(x)") "| Q(c), exists x:A. P(x) |- P(eps x:A. P(x))")"#);
}

#[test]
fn axiom_node() {
    accepts(r#"(axiom "x:A | Q(x), P(x) |- P(x)")"#);
    let v = rejects(r#"(axiom "x:A | Q(x) |- P(x)")"#);
    assert_eq!(v[0].path, "0");
}

#[test]
fn forall_introduction_eigenvariable() {
    accepts(
        r#"(forall-i (imp-i (axiom "x:A | P(x) |- P(x)") "x:A | |- P(x) -> P(x)") "| |- forall x:A. P(x) -> P(x)")"#,
    );
    // the conclusion `| P(x) |- ∀x:A.P(x)` cannot be parsed, so build it directly
    let a = TypeExpr::base("A");
    let px = Formula::rel("P", vec![crate::syntax::Term::var("x", a.clone())]);
    let d = Derivation::new(
        Rule::ForallI,
        vec![Derivation::leaf(Rule::Axiom, seq("x:A | P(x) |- P(x)"))],
        Sequent::new(Context::new(), vec![px.clone()], Formula::forall("x", a, px)),
    );
    let v = check_derivation(&d, &sig()).unwrap_err().violations;
    assert_eq!(v.len(), 1);
    assert_eq!(v[0].rule, "forall-i");
    assert_eq!(
        v[0].error,
        RuleError::Eigenvariable {
            var: "x".into(),
            place: "the hypotheses".into()
        }
    );
}

#[test]
fn every_rule_has_an_accepted_instance() {
    let scripts = [
        r#"(weaken (axiom "x:A | P(x) |- P(x)") "x:A, y:A | Q(y), P(x) |- P(x)")"#,
        r#"(exchange (axiom "x:A, y:A | P(x), Q(y) |- P(x)") "y:A, x:A | Q(y), P(x) |- P(x)")"#,
        r#"(cut (axiom "| P(c) |- P(c)") (axiom "| P(c), P(c) |- P(c)") "| P(c) |- P(c)")"#,
        r#"(and-i (axiom "| P(c), Q(c) |- P(c)") (axiom "| P(c), Q(c) |- Q(c)") "| P(c), Q(c) |- P(c) /\ Q(c)")"#,
        r#"(and-e1 (axiom "| P(c) /\ Q(c) |- P(c) /\ Q(c)") "| P(c) /\ Q(c) |- P(c)")"#,
        r#"(and-e2 (axiom "| P(c) /\ Q(c) |- P(c) /\ Q(c)") "| P(c) /\ Q(c) |- Q(c)")"#,
        r#"(or-i1 (axiom "| P(c) |- P(c)") "| P(c) |- P(c) \/ Q(c)")"#,
        r#"(or-i2 (axiom "| Q(c) |- Q(c)") "| Q(c) |- P(c) \/ Q(c)")"#,
        r#"(or-e (or-i2 (axiom "| P(c) |- P(c)") "| P(c) |- Q(c) \/ P(c)")
                 (or-i1 (axiom "| Q(c) |- Q(c)") "| Q(c) |- Q(c) \/ P(c)")
                 "| P(c) \/ Q(c) |- Q(c) \/ P(c)")"#,
        r#"(imp-i (axiom "| P(c) |- P(c)") "| |- P(c) -> P(c)")"#,
        r#"(imp-e (axiom "| P(c) -> Q(c), P(c) |- P(c) -> Q(c)") (axiom "| P(c) -> Q(c), P(c) |- P(c)")
                  "| P(c) -> Q(c), P(c) |- Q(c)")"#,
        r#"(not-i (not-e (axiom "| ~P(c), P(c) |- P(c)") (axiom "| ~P(c), P(c) |- ~P(c)") "| ~P(c), P(c) |- false")
                  "| ~P(c) |- ~P(c)")"#,
        r#"(top-i "x:A | P(x) |- true")"#,
        r#"(bot-e (axiom "| false |- false") "| false |- P(c)")"#,
        r#"(lem "x:A | |- R(x, x) \/ ~R(x, x)")"#,
        r#"(exists-i "f(c)" (axiom "| P(f(c)) |- P(f(c))") "| P(f(c)) |- exists x:A. P(x)")"#,
        r#"(exists-e (axiom "| exists x:A. P(x) |- exists x:A. P(x)")
                     (exists-i "y" (axiom "y:A | exists x:A. P(x), P(y) |- P(y)") "y:A | exists x:A. P(x), P(y) |- exists z:A. P(z)")
                     "| exists x:A. P(x) |- exists z:A. P(z)")"#,
        r#"(forall-e "c" (axiom "| forall x:A. P(x) |- forall x:A. P(x)") "| forall x:A. P(x) |- P(c)")"#,
        r#"(eq-refl "x:A | |- f(x) = f(x)")"#,
        r#"(eq-subst "z:A" "P(f(z))" (axiom "x:A | x = c, P(f(x)) |- x = c") (axiom "x:A | x = c, P(f(x)) |- P(f(x))")
                     "x:A | x = c, P(f(x)) |- P(f(c))")"#,
        r#"(eps-ex (and-e1 (axiom "x:A | P(x) /\ P(x) |- P(x) /\ P(x)") "x:A | P(x) /\ P(x) |- P(x)")
                   (and-i (axiom "x:A | P(x) |- P(x)") (axiom "x:A | P(x) |- P(x)") "x:A | P(x) |- P(x) /\ P(x)")
                   "| |- (eps x:A. P(x) /\ P(x)) = (eps y:A. P(y))")"#,
    ];
    let mut seen: Vec<&str> = Vec::new();
    for src in scripts {
        let d = one(src);
        if let Err(r) = check_derivation(&d, &sig()) {
            panic!("{src}: {r}");
        }
        seen.extend(d.rules().iter().map(|r| r.name()));
    }
    seen.push("eps-i");
    seen.push("forall-i");
    for name in Rule::NAMES {
        assert!(seen.contains(&name), "no instance of {name}");
    }
}

#[test]
fn rule_shape_violations() {
    let cases = [
        // wrong premise count
        r#"(and-i (axiom "| P(c) |- P(c)") "| P(c) |- P(c) /\ P(c)")"#,
        // weakening cannot drop a hypothesis
        r#"(weaken (axiom "| P(c), Q(c) |- P(c)") "| P(c) |- P(c)")"#,
        // exchange is not weakening
        r#"(exchange (axiom "| P(c) |- P(c)") "| P(c), Q(c) |- P(c)")"#,
        // witness of the wrong substitution instance
        r#"(exists-i "c" (axiom "| P(f(c)) |- P(f(c))") "| P(f(c)) |- exists x:A. P(x)")"#,
        // ε-ex needs both directions
        r#"(eps-ex (axiom "x:A | P(x) |- P(x)") (axiom "x:A | Q(x) |- Q(x)") "| |- (eps x:A. P(x)) = (eps x:A. Q(x))")"#,
        // ε-ex may not carry hypotheses
        r#"(eps-ex (axiom "x:A | P(x) |- P(x)") (axiom "x:A | P(x) |- P(x)") "| Q(c) |- (eps x:A. P(x)) = (eps x:A. P(x))")"#,
        r#"(lem "| |- P(c) \/ ~Q(c)")"#,
        r#"(eq-refl "| |- c = f(c)")"#,
    ];
    for src in cases {
        let v = rejects(src);
        assert!(!v.is_empty(), "{src}");
    }
}

#[test]
fn exists_elimination_eigenvariable() {
    let y = crate::syntax::Term::var("y", TypeExpr::base("A"));
    let mut conclusion = seq("| exists x:A. P(x) |- true");
    conclusion.conclusion = Formula::rel("P", vec![y]);
    let d = Derivation::new(
        Rule::ExistsE,
        vec![
            Derivation::leaf(Rule::Axiom, seq("| exists x:A. P(x) |- exists x:A. P(x)")),
            Derivation::leaf(Rule::Axiom, seq("y:A | exists x:A. P(x), P(y) |- P(y)")),
        ],
        conclusion,
    );
    let v = check_derivation(&d, &sig()).unwrap_err().violations;
    assert_eq!(v.len(), 1);
    assert!(matches!(&v[0].error, RuleError::Eigenvariable { var, .. } if var == "y"));
}

#[test]
fn reports_name_every_bad_node() {
    let d = one(
        r#"(and-i (axiom "| P(c) |- Q(c)") (or-i1 (axiom "| P(c) |- P(c)") "| P(c) |- Q(c) \/ P(c)") "| P(c) |- Q(c) /\ P(c)")"#,
    );
    let report = check_derivation(&d, &sig()).unwrap_err();
    let paths: Vec<&str> = report.violations.iter().map(|v| v.path.as_str()).collect();
    assert_eq!(paths, ["0", "0.0", "0.1"]);
    let verdicts = check_nodes(&d, &sig());
    assert_eq!(verdicts.len(), 4);
    assert_eq!(verdicts.iter().filter(|v| v.ok).count(), 1);
    assert_eq!(verdicts[3].path, "0.1.0");
}

#[test]
fn locality() {
    // a correct node over a bad subtree is still a correct node
    let good_root = one(r#"(imp-i (axiom "| P(c) |- Q(c)") "| |- P(c) -> Q(c)")"#);
    assert!(check_node(&good_root, &sig()).is_ok());
    assert!(check_derivation(&good_root, &sig()).is_err());
}

#[test]
fn ill_formed_sequents_are_reported() {
    let d = Derivation::leaf(
        Rule::TopI,
        Sequent::new(
            Context::new(),
            vec![],
            Formula::rel("P", vec![crate::syntax::Term::var("x", TypeExpr::base("A"))]),
        ),
    );
    let v = check_derivation(&d, &sig()).unwrap_err().violations;
    assert!(matches!(v[0].error, RuleError::IllFormed(_)));
}

#[test]
fn epsilon_exists_equivalence() {
    let s = sig();
    let a = TypeExpr::base("A");
    let x_ctx = Context::from_vars([("x", a.clone())]).unwrap();
    for src in ["P(x)", "true", "P(x) /\\ Q(x)", "exists y:A. R(x, y)"] {
        let psi = parse_formula(src, &x_ctx, &s).unwrap();
        let (fwd, bwd) = derive_epsilon_exists_equiv(&Context::new(), &psi, "x", &a, &s).unwrap();
        assert!(matches!(fwd.rule, Rule::ExistsI { .. }));
        assert_eq!(bwd.rule, Rule::EpsI);
        assert_eq!(fwd.conclusion.hypotheses, vec![bwd.conclusion.conclusion.clone()]);
    }
    // with a parameter in Γ
    let g = Context::from_vars([("u", a.clone())]).unwrap();
    let psi = parse_formula("R(u, x)", &g.extended("x", a.clone()).unwrap(), &s).unwrap();
    derive_epsilon_exists_equiv(&g, &psi, "x", &a, &s).unwrap();
    // ill-formed input
    let bad = Formula::rel("P", vec![crate::syntax::Term::var("q", a.clone())]);
    assert!(derive_epsilon_exists_equiv(&Context::new(), &bad, "x", &a, &s).is_err());
}

#[test]
fn scripts_round_trip() {
    let s = sig();
    let src = r#"
        ; two derivations in one script
        (eq-subst "z:A" "P(f(z))" (axiom "x:A | x = c, P(f(x)) |- x = c") (axiom "x:A | x = c, P(f(x)) |- P(f(x))")
                  "x:A | x = c, P(f(x)) |- P(f(c))")
        (exists-i "eps x:A. P(x)" (axiom "| P(eps x:A. P(x)) |- P(eps x:A. P(x))")
                  "| P(eps x:A. P(x)) |- exists x:A. P(x)")
    "#;
    let ds = parse_script(src, &s).unwrap();
    assert_eq!(ds.len(), 2);
    let printed = print_script(&ds);
    assert_eq!(parse_script(&printed, &s).unwrap(), ds);
}

#[test]
fn script_errors_have_positions() {
    let s = sig();
    let e = parse_script("(axiom \"| P(c) |- P(c)\"", &s).unwrap_err();
    assert!(matches!(e, ScriptError::Parse { line: 1, column: 1, .. }));
    let e = parse_script("\n  (frobnicate \"| |- true\")", &s).unwrap_err();
    assert!(matches!(e, ScriptError::Parse { line: 2, column: 3, .. }));
    let e = parse_script("(axiom \"| P(d) |- P(c)\")", &s).unwrap_err();
    assert!(matches!(e, ScriptError::Syntax { line: 1, column: 8, .. }));
    assert!(parse_script("(exists-i (axiom \"| |- true\") \"| |- true\")", &s).is_err());
}
