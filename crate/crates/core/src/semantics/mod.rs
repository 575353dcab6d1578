//! Interpretation of signatures, terms and formulas in the ε doctrine on
//! pointed finite sets, together with the soundness audit, countermodel
//! search and the guard against `Empty`.
//!
//! A context `x1:A1, …, xn:An` is interpreted as the product of the carriers
//! in mixed radix, `x1` most significant; the empty context is `1`. Binders
//! extend the layout on the right, which agrees with the row-major encoding
//! of `⟦Γ⟧ × ⟦A⟧`.

mod enumerate;
mod guard;
mod model;

pub use enumerate::{
    audit_soundness, countermodel_search, AuditError, AuditOptions, AuditReport, AuditVerdict, AuditViolation,
    CountermodelOutcome, ModelSpace, DEFAULT_BUDGET,
};
pub use guard::{empty_type_guard, theory_mentions_empty, TrivialityReport};
pub use model::{ModelError, ModelJson};

use indexmap::IndexMap;
use thiserror::Error;

use crate::doctrine::{forall, reindex, sigma, DoctrineError, EpsilonDoctrine, Projection};
use crate::finset::{compose, exponential, product_size, tuple, FinMor, FinObj, FinsetError, Subset};
use crate::syntax::{Binding, Context, Formula, Sequent, Signature, Substitution, SyntaxError, Term, TypeExpr};

/// Contexts and types whose carrier exceeds this many elements are refused.
pub const MAX_ELEMENTS: usize = 1 << 22;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SemanticsError {
    #[error("type `Empty` has no pointed interpretation unless every carrier is a singleton")]
    EmptyTypeViolation,
    #[error("no carrier assigned to type `{0}`")]
    MissingCarrier(String),
    #[error("no interpretation for symbol `{0}`")]
    MissingSymbol(String),
    #[error("variable `{0}` is not in the context")]
    UnboundVariable(String),
    #[error("variable `{var}` has type `{found}` in the term but `{expected}` in the context")]
    TypeMismatch {
        var: String,
        expected: TypeExpr,
        found: TypeExpr,
    },
    #[error("carrier of `{0}` exceeds {MAX_ELEMENTS} elements")]
    TooLarge(String),
    #[error("symbol `{name}`: {reason}")]
    BadAssignment { name: String, reason: String },
    #[error(transparent)]
    Finset(#[from] FinsetError),
    #[error(transparent)]
    Doctrine(#[from] DoctrineError),
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
}

pub type Result<T> = std::result::Result<T, SemanticsError>;

/// Carriers for base types, tables for function symbols and subsets for
/// relation symbols. Every carrier has basepoint 0.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Interpretation {
    carriers: IndexMap<String, FinObj>,
    funs: IndexMap<String, FinMor>,
    rels: IndexMap<String, Subset>,
}

impl Interpretation {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn set_carrier(&mut self, ty: impl Into<String>, size: usize) -> Result<()> {
        if size == 0 {
            return Err(DoctrineError::Unpointed(0).into());
        }
        self.carriers.insert(ty.into(), FinObj(size));
        Ok(())
    }

    /// The domain and codomain a function symbol's table must have.
    pub fn fun_shape(&self, sig: &Signature, name: &str) -> Result<(FinObj, FinObj)> {
        let d = sig
            .fun(name)
            .ok_or_else(|| SemanticsError::MissingSymbol(name.to_string()))?;
        Ok((self.product_of(&d.args, name)?, interpret_type(&d.result, self)?))
    }

    /// The carrier a relation symbol's subset lives in.
    pub fn rel_carrier(&self, sig: &Signature, name: &str) -> Result<FinObj> {
        let args = sig
            .rel(name)
            .ok_or_else(|| SemanticsError::MissingSymbol(name.to_string()))?;
        self.product_of(args, name)
    }

    /// The carriers of each argument of a function or relation symbol.
    pub fn arg_carriers(&self, sig: &Signature, name: &str) -> Result<Vec<FinObj>> {
        let args = match (sig.fun(name), sig.rel(name)) {
            (Some(d), _) => &d.args[..],
            (None, Some(r)) => r,
            (None, None) => return Err(SemanticsError::MissingSymbol(name.to_string())),
        };
        args.iter().map(|t| interpret_type(t, self)).collect()
    }

    fn product_of(&self, types: &[TypeExpr], what: &str) -> Result<FinObj> {
        let sizes = types
            .iter()
            .map(|t| interpret_type(t, self))
            .collect::<Result<Vec<_>>>()?;
        let p = product_size(&sizes)?;
        if p.size() > MAX_ELEMENTS {
            return Err(SemanticsError::TooLarge(what.to_string()));
        }
        Ok(p)
    }

    pub fn set_fun(&mut self, sig: &Signature, name: impl Into<String>, f: FinMor) -> Result<()> {
        let name = name.into();
        let (dom, cod) = self.fun_shape(sig, &name)?;
        if f.dom() != dom || f.cod() != cod {
            return Err(SemanticsError::BadAssignment {
                reason: format!("expected a table {dom} -> {cod}, found {} -> {}", f.dom(), f.cod()),
                name,
            });
        }
        self.funs.insert(name, f);
        Ok(())
    }

    pub fn set_rel(&mut self, sig: &Signature, name: impl Into<String>, s: Subset) -> Result<()> {
        let name = name.into();
        let carrier = self.rel_carrier(sig, &name)?;
        if s.carrier() != carrier {
            return Err(SemanticsError::BadAssignment {
                reason: format!("expected a subset of {carrier}, found a subset of {}", s.carrier()),
                name,
            });
        }
        self.rels.insert(name, s);
        Ok(())
    }

    pub fn carrier(&self, ty: &str) -> Option<FinObj> {
        self.carriers.get(ty).copied()
    }

    pub fn fun(&self, name: &str) -> Option<&FinMor> {
        self.funs.get(name)
    }

    pub fn rel(&self, name: &str) -> Option<&Subset> {
        self.rels.get(name)
    }

    pub fn carriers(&self) -> impl Iterator<Item = (&str, FinObj)> {
        self.carriers.iter().map(|(k, v)| (k.as_str(), *v))
    }

    pub fn funs(&self) -> impl Iterator<Item = (&str, &FinMor)> {
        self.funs.iter().map(|(k, v)| (k.as_str(), v))
    }

    pub fn rels(&self) -> impl Iterator<Item = (&str, &Subset)> {
        self.rels.iter().map(|(k, v)| (k.as_str(), v))
    }

    /// Every carrier is a singleton. Only then can `Empty` be interpreted,
    /// as the (terminal and initial) object 1.
    pub fn is_degenerate(&self) -> bool {
        self.carriers.values().all(|c| c.size() == 1)
    }

    /// Checks that every symbol of `sig` is interpreted.
    pub fn validate(&self, sig: &Signature) -> Result<()> {
        for b in sig.base_types() {
            if !self.carriers.contains_key(b) {
                return Err(SemanticsError::MissingCarrier(b.clone()));
            }
        }
        for (f, _) in sig.funs() {
            let (dom, cod) = self.fun_shape(sig, f)?;
            match self.funs.get(f) {
                Some(m) if m.dom() == dom && m.cod() == cod => {}
                _ => return Err(SemanticsError::MissingSymbol(f.to_string())),
            }
        }
        for (r, _) in sig.rels() {
            let carrier = self.rel_carrier(sig, r)?;
            match self.rels.get(r) {
                Some(s) if s.carrier() == carrier => {}
                _ => return Err(SemanticsError::MissingSymbol(r.to_string())),
            }
        }
        Ok(())
    }
}

/// `⟦T⟧`. Products, sums and function types are interpreted by the
/// corresponding finite-set constructions, `Unit` by 1.
pub fn interpret_type(ty: &TypeExpr, interp: &Interpretation) -> Result<FinObj> {
    let too_large = |o: FinObj| {
        if o.size() > MAX_ELEMENTS {
            Err(SemanticsError::TooLarge(ty.to_string()))
        } else {
            Ok(o)
        }
    };
    match ty {
        TypeExpr::Base(b) => interp
            .carrier(b)
            .ok_or_else(|| SemanticsError::MissingCarrier(b.clone())),
        TypeExpr::Unit => Ok(FinObj::TERMINAL),
        TypeExpr::Empty if interp.is_degenerate() => Ok(FinObj::TERMINAL),
        TypeExpr::Empty => Err(SemanticsError::EmptyTypeViolation),
        TypeExpr::Prod(a, b) => too_large(product_size(&[interpret_type(a, interp)?, interpret_type(b, interp)?])?),
        TypeExpr::Sum(a, b) => {
            let (a, b) = (interpret_type(a, interp)?, interpret_type(b, interp)?);
            too_large(FinObj(a.size().checked_add(b.size()).ok_or(FinsetError::Overflow)?))
        }
        TypeExpr::Fun(a, b) => {
            let (a, b) = (interpret_type(a, interp)?, interpret_type(b, interp)?);
            too_large(exponential(a, b)?.obj)
        }
    }
}

/// The carrier `⟦Γ⟧` with the position of each variable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContextLayout {
    vars: Vec<(String, TypeExpr, FinObj)>,
    carrier: FinObj,
}

impl ContextLayout {
    pub fn new(ctx: &Context, interp: &Interpretation) -> Result<Self> {
        let mut layout = ContextLayout {
            vars: Vec::new(),
            carrier: FinObj::TERMINAL,
        };
        for (x, ty) in ctx.vars() {
            layout = layout.extended(x, ty, interp)?.0;
        }
        Ok(layout)
    }

    /// `⟦Γ, x:A⟧ = ⟦Γ⟧ × ⟦A⟧` and its first projection. A later variable
    /// shadows an earlier one of the same name.
    pub fn extended(&self, x: &str, ty: &TypeExpr, interp: &Interpretation) -> Result<(ContextLayout, Projection)> {
        let a = interpret_type(ty, interp)?;
        let pi = Projection::new(self.carrier, a)?;
        if pi.total().size() > MAX_ELEMENTS {
            return Err(SemanticsError::TooLarge(format!("context extended by {x}")));
        }
        let mut vars = self.vars.clone();
        vars.push((x.to_string(), ty.clone(), a));
        Ok((
            ContextLayout {
                vars,
                carrier: pi.total(),
            },
            pi,
        ))
    }

    pub fn carrier(&self) -> FinObj {
        self.carrier
    }

    pub fn vars(&self) -> impl Iterator<Item = (&str, &TypeExpr, FinObj)> {
        self.vars.iter().map(|(x, t, o)| (x.as_str(), t, *o))
    }

    /// The projection `⟦Γ⟧ → ⟦A⟧` onto the innermost variable named `x`.
    pub fn projection(&self, x: &str) -> Result<(FinMor, &TypeExpr)> {
        let i = self
            .vars
            .iter()
            .rposition(|(n, _, _)| n == x)
            .ok_or_else(|| SemanticsError::UnboundVariable(x.to_string()))?;
        let stride: usize = self.vars[i + 1..].iter().map(|v| v.2.size()).product();
        let (_, ty, a) = &self.vars[i];
        let table = self.carrier.elements().map(|g| (g / stride) % a.size()).collect();
        Ok((FinMor::new(self.carrier, *a, table)?, ty))
    }

    /// Encodes one value per variable, in context order.
    pub fn encode(&self, values: &[usize]) -> usize {
        self.vars
            .iter()
            .zip(values)
            .fold(0, |acc, (v, &x)| acc * v.2.size() + x)
    }

    /// The value of each variable at element `g`.
    pub fn decode(&self, mut g: usize) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .vars
            .iter()
            .rev()
            .map(|v| {
                let x = g % v.2.size();
                g /= v.2.size();
                x
            })
            .collect();
        out.reverse();
        out
    }
}

/// `⟦t⟧ : ⟦Γ⟧ → ⟦A⟧`.
pub fn interpret_term(layout: &ContextLayout, t: &Term, interp: &Interpretation) -> Result<FinMor> {
    match t {
        Term::Var(x, ty) => {
            let (p, expected) = layout.projection(x)?;
            if expected != ty {
                return Err(SemanticsError::TypeMismatch {
                    var: x.clone(),
                    expected: expected.clone(),
                    found: ty.clone(),
                });
            }
            Ok(p)
        }
        Term::App(f, args) => {
            let table = interp.fun(f).ok_or_else(|| SemanticsError::MissingSymbol(f.clone()))?;
            let parts = args
                .iter()
                .map(|a| interpret_term(layout, a, interp))
                .collect::<Result<Vec<_>>>()?;
            Ok(compose(table, &tuple(layout.carrier(), &parts)?)?)
        }
        Term::Epsilon(x, ty, body) => {
            let (inner, pi) = layout.extended(x, ty, interp)?;
            let psi = interpret_formula(&inner, body, interp)?;
            Ok(EpsilonDoctrine.epsilon(&pi, &psi)?)
        }
    }
}

/// `⟦φ⟧ ⊆ ⟦Γ⟧`.
pub fn interpret_formula(layout: &ContextLayout, phi: &Formula, interp: &Interpretation) -> Result<Subset> {
    let carrier = layout.carrier();
    Ok(match phi {
        Formula::Top => Subset::full(carrier),
        Formula::Bot => Subset::empty(carrier),
        Formula::Rel(r, args) => {
            let s = interp.rel(r).ok_or_else(|| SemanticsError::MissingSymbol(r.clone()))?;
            let parts = args
                .iter()
                .map(|a| interpret_term(layout, a, interp))
                .collect::<Result<Vec<_>>>()?;
            reindex(&tuple(carrier, &parts)?, s)?
        }
        Formula::Eq(a, b) => {
            let (fa, fb) = (interpret_term(layout, a, interp)?, interpret_term(layout, b, interp)?);
            Subset::from_predicate(carrier, |g| fa.apply(g) == fb.apply(g))
        }
        Formula::And(a, b) => interpret_formula(layout, a, interp)?.meet(&interpret_formula(layout, b, interp)?)?,
        Formula::Or(a, b) => interpret_formula(layout, a, interp)?.join(&interpret_formula(layout, b, interp)?)?,
        Formula::Imp(a, b) => interpret_formula(layout, a, interp)?
            .complement()
            .join(&interpret_formula(layout, b, interp)?)?,
        Formula::Not(a) => interpret_formula(layout, a, interp)?.complement(),
        Formula::Exists(x, ty, body) => {
            let (inner, pi) = layout.extended(x, ty, interp)?;
            sigma(&pi, &interpret_formula(&inner, body, interp)?)?
        }
        Formula::Forall(x, ty, body) => {
            let (inner, pi) = layout.extended(x, ty, interp)?;
            forall(&pi, &interpret_formula(&inner, body, interp)?)?
        }
    })
}

/// The meet of the hypotheses, as a subset of `⟦Γ⟧`.
pub fn hypotheses_meet(seq: &Sequent, layout: &ContextLayout, interp: &Interpretation) -> Result<Subset> {
    seq.hypotheses
        .iter()
        .try_fold(Subset::full(layout.carrier()), |acc, h| {
            Ok(acc.meet(&interpret_formula(layout, h, interp)?)?)
        })
}

/// `⋀⟦Δ⟧ ≤ ⟦φ⟧` in the fiber over `⟦Γ⟧`.
pub fn holds(seq: &Sequent, interp: &Interpretation) -> Result<bool> {
    let layout = ContextLayout::new(&seq.context, interp)?;
    let hyps = hypotheses_meet(seq, &layout, interp)?;
    let concl = interpret_formula(&layout, &seq.conclusion, interp)?;
    Ok(hyps.leq(&concl)?)
}

/// Compares `⟦φ[t⃗/x⃗]⟧` over `gamma` with the reindexing of `⟦φ⟧` over
/// `theta` along `⟨⟦t1⟧, …, ⟦tn⟧⟩`. A variable of `theta` that `s` does not
/// mention is replaced by the variable of the same name in `gamma`.
pub fn substitution_lemma_check(
    gamma: &Context,
    theta: &Context,
    phi: &Formula,
    s: &Substitution,
    interp: &Interpretation,
    sig: &Signature,
) -> Result<bool> {
    let terms: Vec<Term> = theta
        .vars()
        .iter()
        .map(|(x, ty)| s.get(x).cloned().unwrap_or_else(|| Term::var(x.clone(), ty.clone())))
        .collect();
    let full: Substitution = theta
        .vars()
        .iter()
        .map(|(x, _)| x.clone())
        .zip(terms.iter().cloned())
        .collect();
    let g = ContextLayout::new(gamma, interp)?;
    let direct = interpret_formula(&g, &phi.substitute(&full, sig)?, interp)?;
    let parts = terms
        .iter()
        .map(|t| interpret_term(&g, t, interp))
        .collect::<Result<Vec<_>>>()?;
    let th = ContextLayout::new(theta, interp)?;
    let reindexed = reindex(&tuple(g.carrier(), &parts)?, &interpret_formula(&th, phi, interp)?)?;
    Ok(direct == reindexed)
}

#[cfg(test)]
mod tests;
