use serde::Serialize;
use thiserror::Error;

use super::{Derivation, Rule};
use crate::syntax::{
    typecheck_term, wellform_formula, wellform_sequent, Binding, Context, Formula, Sequent, Signature, Substitution,
    SyntaxError, Term, TypeExpr,
};

/// Why a single node fails to be an instance of its rule.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RuleError {
    #[error("expected {expected} premise(s), found {found}")]
    PremiseCount { expected: usize, found: usize },
    #[error("ill-formed sequent: {0}")]
    IllFormed(SyntaxError),
    #[error("eigenvariable `{var}` occurs free in {place}")]
    Eigenvariable { var: String, place: String },
    #[error("bad witness: {0}")]
    Witness(SyntaxError),
    #[error("{0}")]
    Shape(String),
}

/// A failed node: its path in the tree, its rule, and the violated condition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub path: String,
    pub rule: &'static str,
    pub error: RuleError,
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "node {} ({}): {}", self.path, self.rule, self.error)
    }
}

/// All violations found in a rejected derivation, in preorder.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{} rule violation(s); first: {}", .violations.len(), .violations[0])]
pub struct CheckReport {
    pub violations: Vec<Violation>,
}

/// The outcome of checking one node, for machine-readable reports.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NodeVerdict {
    pub path: String,
    pub rule: &'static str,
    pub sequent: String,
    pub ok: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

/// Checks every node of `d` and reports each verdict in preorder.
pub fn check_nodes(d: &Derivation, sig: &Signature) -> Vec<NodeVerdict> {
    d.nodes()
        .into_iter()
        .map(|(path, node)| {
            let r = check_node(node, sig);
            NodeVerdict {
                path,
                rule: node.rule.name(),
                sequent: node.conclusion.to_string(),
                ok: r.is_ok(),
                error: r.err().map(|e| e.to_string()),
            }
        })
        .collect()
}

/// Accepts `d` iff every node is a correct instance of its rule.
pub fn check_derivation(d: &Derivation, sig: &Signature) -> Result<(), CheckReport> {
    let violations: Vec<Violation> = d
        .nodes()
        .into_iter()
        .filter_map(|(path, node)| {
            check_node(node, sig).err().map(|error| Violation {
                path,
                rule: node.rule.name(),
                error,
            })
        })
        .collect();
    if violations.is_empty() {
        Ok(())
    } else {
        Err(CheckReport { violations })
    }
}

fn shape<T>(msg: impl Into<String>) -> Result<T, RuleError> {
    Err(RuleError::Shape(msg.into()))
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), RuleError> {
    if cond {
        Ok(())
    } else {
        shape(msg())
    }
}

fn all_alpha_eq(a: &[Formula], b: &[Formula]) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| x.alpha_eq(y))
}

fn is_subsequence<T>(small: &[T], big: &[T], eq: impl Fn(&T, &T) -> bool) -> bool {
    let mut it = big.iter();
    small.iter().all(|s| it.any(|b| eq(s, b)))
}

fn is_permutation<T>(a: &[T], b: &[T], eq: impl Fn(&T, &T) -> bool) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let mut used = vec![false; b.len()];
    a.iter()
        .all(|x| match (0..b.len()).find(|&j| !used[j] && eq(x, &b[j])) {
            Some(j) => {
                used[j] = true;
                true
            }
            None => false,
        })
}

fn subst(phi: &Formula, var: &str, t: Term, sig: &Signature) -> Result<Formula, RuleError> {
    phi.substitute(&Substitution::single(var, t), sig)
        .map_err(RuleError::IllFormed)
}

/// Splits `Γ, y:A` and checks that the prefix is `expected`.
fn extension<'a>(premise: &'a Sequent, expected: &Context, which: &str) -> Result<&'a (String, TypeExpr), RuleError> {
    match premise.context.vars().split_last() {
        Some((last, init)) if init == expected.vars() => Ok(last),
        _ => shape(format!(
            "{which} context must extend the conclusion context by one variable"
        )),
    }
}

struct Node<'a> {
    sig: &'a Signature,
    c: &'a Sequent,
    p: Vec<&'a Sequent>,
}

impl Node<'_> {
    /// Premise `i` has the conclusion's context and hypotheses.
    fn same_frame(&self, i: usize) -> Result<&Formula, RuleError> {
        let p = self.p[i];
        ensure(p.context == self.c.context, || {
            format!("premise {i} must have the conclusion's context")
        })?;
        ensure(all_alpha_eq(&p.hypotheses, &self.c.hypotheses), || {
            format!("premise {i} must have the conclusion's hypotheses")
        })?;
        Ok(&p.conclusion)
    }

    /// Premise `i` has hypotheses `base, extra` and context `ctx`.
    fn extended_frame(
        &self,
        i: usize,
        ctx: &Context,
        base: &[Formula],
        extra: &Formula,
    ) -> Result<&Formula, RuleError> {
        let p = self.p[i];
        ensure(&p.context == ctx, || format!("premise {i} has the wrong context"))?;
        let ok = match p.hypotheses.split_last() {
            Some((last, init)) => all_alpha_eq(init, base) && last.alpha_eq(extra),
            None => false,
        };
        ensure(ok, || {
            format!(
                "premise {i} must have hypotheses `{}` followed by `{extra}`",
                list(base)
            )
        })?;
        Ok(&p.conclusion)
    }

    fn conclusion_is(&self, phi: &Formula) -> Result<(), RuleError> {
        ensure(self.c.conclusion.alpha_eq(phi), || {
            format!("conclusion should be `{phi}`")
        })
    }

    fn witness(&self, t: &Term, ty: &TypeExpr) -> Result<(), RuleError> {
        let found = typecheck_term(&self.c.context, t, self.sig).map_err(RuleError::Witness)?;
        if &found != ty {
            return Err(RuleError::Witness(SyntaxError::TypeMismatch {
                what: t.to_string(),
                expected: ty.clone(),
                found,
            }));
        }
        Ok(())
    }
}

fn list(fs: &[Formula]) -> String {
    fs.iter().map(|f| f.to_string()).collect::<Vec<_>>().join(", ")
}

/// The variable and eigenvariable side conditions, checked before
/// well-formedness so that a report names them rather than the unbound
/// variable they would otherwise cause.
fn side_conditions(d: &Derivation) -> Result<(), RuleError> {
    let c = &d.conclusion;
    let fresh = |var: &str, place: &str, fs: &[&Formula]| -> Result<(), RuleError> {
        if c.context.contains(var) {
            return shape(format!(
                "eigenvariable `{var}` already occurs in the conclusion context"
            ));
        }
        if fs.iter().any(|f| f.free_vars().iter().any(|(n, _)| n == var)) {
            return Err(RuleError::Eigenvariable {
                var: var.to_string(),
                place: place.to_string(),
            });
        }
        Ok(())
    };
    match &d.rule {
        Rule::ForallI => {
            if let Some((_, (y, _))) = d.premises[0].conclusion.context.split_last() {
                fresh(y, "the hypotheses", &c.hypotheses.iter().collect::<Vec<_>>())?;
                fresh(y, "the conclusion", &[&c.conclusion])?;
            }
        }
        Rule::ExistsE => {
            if let Some((_, (y, _))) = d.premises[1].conclusion.context.split_last() {
                fresh(y, "the hypotheses", &c.hypotheses.iter().collect::<Vec<_>>())?;
                fresh(y, "the conclusion", &[&c.conclusion])?;
            }
        }
        Rule::EpsI => {
            if let [Formula::Exists(x, _, _)] = c.hypotheses.as_slice() {
                ensure(!c.context.contains(x), || {
                    format!("`{x}` is bound by the ε-term and must not occur in the conclusion context")
                })?;
            }
            if let Some((_, (x, _))) = d.premises[0].conclusion.context.split_last() {
                ensure(!c.context.contains(x), || {
                    format!("`{x}` is bound by the ε-term and must not occur in the conclusion context")
                })?;
            }
        }
        _ => {}
    }
    Ok(())
}

/// Checks one node against its immediate premises only.
pub fn check_node(d: &Derivation, sig: &Signature) -> Result<(), RuleError> {
    let expected = d.rule.arity();
    if d.premises.len() != expected {
        return Err(RuleError::PremiseCount {
            expected,
            found: d.premises.len(),
        });
    }
    side_conditions(d)?;
    wellform_sequent(&d.conclusion, sig).map_err(RuleError::IllFormed)?;
    let n = Node {
        sig,
        c: &d.conclusion,
        p: d.premises.iter().map(|p| &p.conclusion).collect(),
    };
    let c = n.c;
    match &d.rule {
        Rule::Axiom => ensure(c.hypotheses.iter().any(|h| h.alpha_eq(&c.conclusion)), || {
            "conclusion is not among the hypotheses".into()
        }),
        Rule::Weaken => {
            let p = n.p[0];
            ensure(
                is_subsequence(p.context.vars(), c.context.vars(), |a, b| a == b),
                || "premise context must be a subsequence of the conclusion context".into(),
            )?;
            ensure(
                is_subsequence(&p.hypotheses, &c.hypotheses, |a, b| a.alpha_eq(b)),
                || "premise hypotheses must be a subsequence of the conclusion hypotheses".into(),
            )?;
            n.conclusion_is(&p.conclusion)
        }
        Rule::Exchange => {
            let p = n.p[0];
            ensure(
                is_permutation(p.context.vars(), c.context.vars(), |a, b| a == b),
                || "conclusion context must be a permutation of the premise context".into(),
            )?;
            ensure(
                is_permutation(&p.hypotheses, &c.hypotheses, |a, b| a.alpha_eq(b)),
                || "conclusion hypotheses must be a permutation of the premise hypotheses".into(),
            )?;
            n.conclusion_is(&p.conclusion)
        }
        Rule::Cut => {
            let chi = n.same_frame(0)?;
            let phi = n.extended_frame(1, &c.context, &c.hypotheses, chi)?;
            n.conclusion_is(phi)
        }
        Rule::AndI => match &c.conclusion {
            Formula::And(a, b) => {
                ensure(n.same_frame(0)?.alpha_eq(a), || {
                    format!("premise 0 should conclude `{a}`")
                })?;
                ensure(n.same_frame(1)?.alpha_eq(b), || {
                    format!("premise 1 should conclude `{b}`")
                })
            }
            _ => shape("conclusion is not a conjunction"),
        },
        Rule::AndE1 | Rule::AndE2 => match n.same_frame(0)? {
            Formula::And(a, b) => n.conclusion_is(if d.rule == Rule::AndE1 { a } else { b }),
            _ => shape("premise does not conclude a conjunction"),
        },
        Rule::OrI1 | Rule::OrI2 => match &c.conclusion {
            Formula::Or(a, b) => {
                let want = if d.rule == Rule::OrI1 { a } else { b };
                ensure(n.same_frame(0)?.alpha_eq(want), || {
                    format!("premise should conclude `{want}`")
                })
            }
            _ => shape("conclusion is not a disjunction"),
        },
        Rule::OrE => match c.hypotheses.split_last() {
            Some((Formula::Or(a, b), delta)) => {
                let left = n.extended_frame(0, &c.context, delta, a)?;
                let right = n.extended_frame(1, &c.context, delta, b)?;
                n.conclusion_is(left)?;
                n.conclusion_is(right)
            }
            _ => shape("last hypothesis of the conclusion is not a disjunction"),
        },
        Rule::ImpI => match &c.conclusion {
            Formula::Imp(a, b) => {
                let got = n.extended_frame(0, &c.context, &c.hypotheses, a)?;
                ensure(got.alpha_eq(b), || format!("premise should conclude `{b}`"))
            }
            _ => shape("conclusion is not an implication"),
        },
        Rule::ImpE => match n.same_frame(0)? {
            Formula::Imp(a, b) => {
                ensure(n.same_frame(1)?.alpha_eq(a), || {
                    format!("premise 1 should conclude `{a}`")
                })?;
                n.conclusion_is(b)
            }
            _ => shape("premise 0 does not conclude an implication"),
        },
        Rule::NotI => match &c.conclusion {
            Formula::Not(a) => {
                let got = n.extended_frame(0, &c.context, &c.hypotheses, a)?;
                ensure(*got == Formula::Bot, || "premise should conclude `false`".into())
            }
            _ => shape("conclusion is not a negation"),
        },
        Rule::NotE => {
            n.conclusion_is(&Formula::Bot)?;
            let phi = n.same_frame(0)?;
            match n.same_frame(1)? {
                Formula::Not(a) if a.alpha_eq(phi) => Ok(()),
                _ => shape(format!("premise 1 should conclude `{}`", Formula::not(phi.clone()))),
            }
        }
        Rule::TopI => n.conclusion_is(&Formula::Top),
        Rule::BotE => ensure(*n.same_frame(0)? == Formula::Bot, || {
            "premise should conclude `false`".into()
        }),
        Rule::Lem => match &c.conclusion {
            Formula::Or(a, b) if matches!(&**b, Formula::Not(na) if na.alpha_eq(a)) => Ok(()),
            _ => shape("conclusion is not of the form `φ \\/ ~φ`"),
        },
        Rule::ExistsI { witness } => match &c.conclusion {
            Formula::Exists(x, ty, body) => {
                n.witness(witness, ty)?;
                let want = subst(body, x, witness.clone(), sig)?;
                ensure(n.same_frame(0)?.alpha_eq(&want), || {
                    format!("premise should conclude `{want}`")
                })
            }
            _ => shape("conclusion is not existential"),
        },
        Rule::ExistsE => match n.same_frame(0)? {
            Formula::Exists(x, ty, body) => {
                let (y, a) = extension(n.p[1], &c.context, "premise 1")?;
                ensure(a == ty, || format!("eigenvariable `{y}` should have type `{ty}`"))?;
                let opened = subst(body, x, Term::var(y.clone(), a.clone()), sig)?;
                let chi = n.extended_frame(1, &n.p[1].context, &c.hypotheses, &opened)?;
                n.conclusion_is(chi)
            }
            _ => shape("premise 0 does not conclude an existential"),
        },
        Rule::ForallI => match &c.conclusion {
            Formula::Forall(x, ty, body) => {
                let p = n.p[0];
                let (y, a) = extension(p, &c.context, "premise")?;
                ensure(a == ty, || format!("eigenvariable `{y}` should have type `{ty}`"))?;
                ensure(all_alpha_eq(&p.hypotheses, &c.hypotheses), || {
                    "premise must have the conclusion's hypotheses".into()
                })?;
                let want = subst(body, x, Term::var(y.clone(), a.clone()), sig)?;
                ensure(p.conclusion.alpha_eq(&want), || {
                    format!("premise should conclude `{want}`")
                })
            }
            _ => shape("conclusion is not universal"),
        },
        Rule::ForallE { witness } => match n.same_frame(0)? {
            Formula::Forall(x, ty, body) => {
                n.witness(witness, ty)?;
                n.conclusion_is(&subst(body, x, witness.clone(), sig)?)
            }
            _ => shape("premise does not conclude a universal"),
        },
        Rule::EqRefl => match &c.conclusion {
            Formula::Eq(s, t) if s.alpha_eq(t) => Ok(()),
            _ => shape("conclusion is not of the form `t = t`"),
        },
        Rule::EqSubst { target, var, var_type } => {
            let ext = c
                .context
                .extended(var.clone(), var_type.clone())
                .map_err(RuleError::IllFormed)?;
            wellform_formula(&ext, target, sig).map_err(RuleError::IllFormed)?;
            match n.same_frame(0)? {
                Formula::Eq(s, t) => {
                    n.witness(s, var_type)?;
                    let from = subst(target, var, s.clone(), sig)?;
                    ensure(n.same_frame(1)?.alpha_eq(&from), || {
                        format!("premise 1 should conclude `{from}`")
                    })?;
                    n.conclusion_is(&subst(target, var, t.clone(), sig)?)
                }
                _ => shape("premise 0 does not conclude an equation"),
            }
        }
        Rule::EpsI => match c.hypotheses.as_slice() {
            [Formula::Exists(x, ty, body)] => {
                let p = n.p[0];
                let (v, a) = extension(p, &c.context, "premise")?;
                ensure(a == ty, || format!("premise variable `{v}` should have type `{ty}`"))?;
                let opened = subst(body, x, Term::var(v.clone(), a.clone()), sig)?;
                ensure(p.conclusion.alpha_eq(&opened), || {
                    format!("premise should conclude `{opened}`")
                })?;
                let eps = Term::epsilon(x.clone(), ty.clone(), (**body).clone());
                n.conclusion_is(&subst(body, x, eps, sig)?)
            }
            _ => shape("conclusion must have the single hypothesis `exists x:A. ψ`"),
        },
        Rule::EpsEx => {
            ensure(c.hypotheses.is_empty(), || "conclusion must have no hypotheses".into())?;
            match &c.conclusion {
                Formula::Eq(Term::Epsilon(x1, t1, psi), Term::Epsilon(x2, t2, phi)) => {
                    ensure(t1 == t2, || "the two ε-terms bind variables of different types".into())?;
                    for (i, (from, to)) in [((x1, psi), (x2, phi)), ((x2, phi), (x1, psi))].into_iter().enumerate() {
                        let p = n.p[i];
                        let (v, a) = extension(p, &c.context, &format!("premise {i}"))?;
                        ensure(a == t1, || {
                            format!("premise {i} variable `{v}` should have type `{t1}`")
                        })?;
                        let var = || Term::var(v.clone(), a.clone());
                        let hyp = subst(from.1, from.0, var(), sig)?;
                        let concl = subst(to.1, to.0, var(), sig)?;
                        ensure(all_alpha_eq(&p.hypotheses, std::slice::from_ref(&hyp)), || {
                            format!("premise {i} should have the single hypothesis `{hyp}`")
                        })?;
                        ensure(p.conclusion.alpha_eq(&concl), || {
                            format!("premise {i} should conclude `{concl}`")
                        })?;
                    }
                    Ok(())
                }
                _ => shape("conclusion is not an equation between ε-terms"),
            }
        }
    }
}
