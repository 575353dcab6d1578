use std::fmt;

use serde::Serialize;

use super::Interpretation;
use crate::syntax::{Definition, Formula, Sequent, Term, Theory, TypeExpr};

/// Why a theory mentioning `Empty` cannot be interpreted with a carrier of
/// two or more elements.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TrivialityReport {
    /// Base types whose carrier has at least two elements.
    pub offending: Vec<(String, usize)>,
    /// The argument, one step per entry.
    pub argument: Vec<String>,
}

impl fmt::Display for TrivialityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "refusing to interpret a theory that mentions `Empty`:")?;
        for (i, step) in self.argument.iter().enumerate() {
            writeln!(f, "  {}. {step}", i + 1)?;
        }
        Ok(())
    }
}

impl std::error::Error for TrivialityReport {}

fn term_mentions_empty(t: &Term) -> bool {
    match t {
        Term::Var(_, ty) => ty.mentions_empty(),
        Term::App(_, args) => args.iter().any(term_mentions_empty),
        Term::Epsilon(_, ty, body) => ty.mentions_empty() || formula_mentions_empty(body),
    }
}

fn formula_mentions_empty(phi: &Formula) -> bool {
    match phi {
        Formula::Top | Formula::Bot => false,
        Formula::Rel(_, args) => args.iter().any(term_mentions_empty),
        Formula::Eq(a, b) => term_mentions_empty(a) || term_mentions_empty(b),
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => {
            formula_mentions_empty(a) || formula_mentions_empty(b)
        }
        Formula::Not(a) => formula_mentions_empty(a),
        Formula::Exists(_, ty, body) | Formula::Forall(_, ty, body) => {
            ty.mentions_empty() || formula_mentions_empty(body)
        }
    }
}

fn sequent_mentions_empty(s: &Sequent) -> bool {
    s.context.vars().iter().any(|(_, t)| t.mentions_empty())
        || s.hypotheses.iter().any(formula_mentions_empty)
        || formula_mentions_empty(&s.conclusion)
}

/// True when `Empty` occurs in a declaration, definition or axiom.
pub fn theory_mentions_empty(theory: &Theory) -> bool {
    theory.signature.mentions_empty()
        || theory.definitions.iter().any(|(_, d)| match d {
            Definition::Term { term, ty } => ty.mentions_empty() || term_mentions_empty(term),
            Definition::Formula(f) => formula_mentions_empty(f),
        })
        || theory.axioms.iter().any(|(_, s)| sequent_mentions_empty(s))
}

/// Accepts `interp` for `theory` unless the theory mentions `Empty` and some
/// carrier has two or more elements.
///
/// In a pointed setting the closed term `ε x:Empty. true` denotes an arrow
/// `1 → 0`, which forces `1 ≅ 0` and then every carrier to be a singleton.
/// Only the all-singleton interpretation survives.
pub fn empty_type_guard(theory: &Theory, interp: &Interpretation) -> Result<(), TrivialityReport> {
    if !theory_mentions_empty(theory) {
        return Ok(());
    }
    let offending: Vec<(String, usize)> = interp
        .carriers()
        .filter(|(_, c)| c.size() >= 2)
        .map(|(t, c)| (t.to_string(), c.size()))
        .collect();
    if offending.is_empty() {
        return Ok(());
    }
    let empty = TypeExpr::Empty;
    let mut argument = vec![
        format!("the theory mentions `{empty}`, whose carrier is the initial object 0"),
        format!("the closed term `eps x:{empty}. true` must denote an arrow 1 -> 0"),
        "an arrow into the initial object is an isomorphism, so 1 = 0".to_string(),
        "then A = A * 1 = A * 0 = 0 = 1 for every object A: every carrier is terminal".to_string(),
    ];
    for (t, n) in &offending {
        argument.push(format!("but type `{t}` has a carrier of size {n}"));
    }
    Err(TrivialityReport { offending, argument })
}
