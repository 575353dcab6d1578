//! Binder handling. Named syntax is converted to a de Bruijn form for
//! alpha-equivalence and substitution, then read back with fresh names where a
//! binder would otherwise capture.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::hash::{Hash, Hasher};

use super::typing::head_type;
use super::{Formula, Signature, SyntaxError, Term, TypeExpr};

/// The surface name of a binder. Ignored by equality.
#[derive(Debug, Clone)]
struct Hint(String);

impl PartialEq for Hint {
    fn eq(&self, _: &Self) -> bool {
        true
    }
}

impl Eq for Hint {}

impl Hash for Hint {
    fn hash<H: Hasher>(&self, _: &mut H) {}
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum DbTerm {
    Bound(usize),
    Free(String, TypeExpr),
    App(String, Vec<DbTerm>),
    Eps(Hint, TypeExpr, Box<DbFormula>),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum DbFormula {
    Rel(String, Vec<DbTerm>),
    Eq(DbTerm, DbTerm),
    Top,
    Bot,
    And(Box<DbFormula>, Box<DbFormula>),
    Or(Box<DbFormula>, Box<DbFormula>),
    Imp(Box<DbFormula>, Box<DbFormula>),
    Not(Box<DbFormula>),
    Exists(Hint, TypeExpr, Box<DbFormula>),
    Forall(Hint, TypeExpr, Box<DbFormula>),
}

fn index_term(t: &Term, stack: &mut Vec<String>) -> DbTerm {
    match t {
        Term::Var(n, ty) => match stack.iter().rposition(|s| s == n) {
            Some(pos) => DbTerm::Bound(stack.len() - 1 - pos),
            None => DbTerm::Free(n.clone(), ty.clone()),
        },
        Term::App(f, args) => DbTerm::App(f.clone(), args.iter().map(|a| index_term(a, stack)).collect()),
        Term::Epsilon(x, ty, body) => {
            stack.push(x.clone());
            let b = index_formula(body, stack);
            stack.pop();
            DbTerm::Eps(Hint(x.clone()), ty.clone(), Box::new(b))
        }
    }
}

fn index_formula(f: &Formula, stack: &mut Vec<String>) -> DbFormula {
    let bx = |f: &Formula, stack: &mut Vec<String>| Box::new(index_formula(f, stack));
    match f {
        Formula::Rel(r, args) => DbFormula::Rel(r.clone(), args.iter().map(|a| index_term(a, stack)).collect()),
        Formula::Eq(a, b) => DbFormula::Eq(index_term(a, stack), index_term(b, stack)),
        Formula::Top => DbFormula::Top,
        Formula::Bot => DbFormula::Bot,
        Formula::And(a, b) => DbFormula::And(bx(a, stack), bx(b, stack)),
        Formula::Or(a, b) => DbFormula::Or(bx(a, stack), bx(b, stack)),
        Formula::Imp(a, b) => DbFormula::Imp(bx(a, stack), bx(b, stack)),
        Formula::Not(a) => DbFormula::Not(bx(a, stack)),
        Formula::Exists(x, ty, body) | Formula::Forall(x, ty, body) => {
            stack.push(x.clone());
            let b = bx(body, stack);
            stack.pop();
            if matches!(f, Formula::Exists(..)) {
                DbFormula::Exists(Hint(x.clone()), ty.clone(), b)
            } else {
                DbFormula::Forall(Hint(x.clone()), ty.clone(), b)
            }
        }
    }
}

/// Replacement terms are closed under indices, so no shifting is needed.
struct Replace<'a> {
    map: &'a BTreeMap<String, DbTerm>,
    types: &'a BTreeMap<String, TypeExpr>,
}

impl Replace<'_> {
    fn term(&self, t: &DbTerm) -> Result<DbTerm, SyntaxError> {
        Ok(match t {
            DbTerm::Bound(i) => DbTerm::Bound(*i),
            DbTerm::Free(n, ty) => match self.map.get(n) {
                Some(rep) => {
                    let rep_ty = &self.types[n];
                    if rep_ty != ty {
                        return Err(SyntaxError::TypeMismatch {
                            what: format!("substitution for `{n}`"),
                            expected: ty.clone(),
                            found: rep_ty.clone(),
                        });
                    }
                    rep.clone()
                }
                None => t.clone(),
            },
            DbTerm::App(f, args) => {
                DbTerm::App(f.clone(), args.iter().map(|a| self.term(a)).collect::<Result<_, _>>()?)
            }
            DbTerm::Eps(h, ty, body) => DbTerm::Eps(h.clone(), ty.clone(), Box::new(self.formula(body)?)),
        })
    }

    fn formula(&self, f: &DbFormula) -> Result<DbFormula, SyntaxError> {
        let bx = |f: &DbFormula| self.formula(f).map(Box::new);
        Ok(match f {
            DbFormula::Rel(r, args) => {
                DbFormula::Rel(r.clone(), args.iter().map(|a| self.term(a)).collect::<Result<_, _>>()?)
            }
            DbFormula::Eq(a, b) => DbFormula::Eq(self.term(a)?, self.term(b)?),
            DbFormula::Top => DbFormula::Top,
            DbFormula::Bot => DbFormula::Bot,
            DbFormula::And(a, b) => DbFormula::And(bx(a)?, bx(b)?),
            DbFormula::Or(a, b) => DbFormula::Or(bx(a)?, bx(b)?),
            DbFormula::Imp(a, b) => DbFormula::Imp(bx(a)?, bx(b)?),
            DbFormula::Not(a) => DbFormula::Not(bx(a)?),
            DbFormula::Exists(h, ty, b) => DbFormula::Exists(h.clone(), ty.clone(), bx(b)?),
            DbFormula::Forall(h, ty, b) => DbFormula::Forall(h.clone(), ty.clone(), bx(b)?),
        })
    }
}

/// Names a binder must avoid: free names in its body, and the names of
/// enclosing binders the body refers to.
fn avoid_formula(f: &DbFormula, depth: usize, stack: &[(String, TypeExpr)], out: &mut HashSet<String>) {
    match f {
        DbFormula::Rel(_, args) => args.iter().for_each(|a| avoid_term(a, depth, stack, out)),
        DbFormula::Eq(a, b) => {
            avoid_term(a, depth, stack, out);
            avoid_term(b, depth, stack, out);
        }
        DbFormula::Top | DbFormula::Bot => {}
        DbFormula::And(a, b) | DbFormula::Or(a, b) | DbFormula::Imp(a, b) => {
            avoid_formula(a, depth, stack, out);
            avoid_formula(b, depth, stack, out);
        }
        DbFormula::Not(a) => avoid_formula(a, depth, stack, out),
        DbFormula::Exists(_, _, b) | DbFormula::Forall(_, _, b) => avoid_formula(b, depth + 1, stack, out),
    }
}

fn avoid_term(t: &DbTerm, depth: usize, stack: &[(String, TypeExpr)], out: &mut HashSet<String>) {
    match t {
        DbTerm::Bound(k) if *k > depth => {
            let outer = k - depth - 1;
            out.insert(stack[stack.len() - 1 - outer].0.clone());
        }
        DbTerm::Bound(_) => {}
        DbTerm::Free(n, _) => {
            out.insert(n.clone());
        }
        DbTerm::App(_, args) => args.iter().for_each(|a| avoid_term(a, depth, stack, out)),
        DbTerm::Eps(_, _, b) => avoid_formula(b, depth + 1, stack, out),
    }
}

fn fresh_name(hint: &str, avoid: &HashSet<String>) -> String {
    let mut name = hint.to_string();
    while avoid.contains(&name) {
        name.push('\'');
    }
    name
}

fn read_binder(hint: &Hint, ty: &TypeExpr, body: &DbFormula, stack: &mut Vec<(String, TypeExpr)>) -> (String, Formula) {
    let mut avoid = HashSet::new();
    avoid_formula(body, 0, stack, &mut avoid);
    let name = fresh_name(&hint.0, &avoid);
    stack.push((name.clone(), ty.clone()));
    let b = read_formula(body, stack);
    stack.pop();
    (name, b)
}

fn read_term(t: &DbTerm, stack: &mut Vec<(String, TypeExpr)>) -> Term {
    match t {
        DbTerm::Bound(k) => {
            let (n, ty) = &stack[stack.len() - 1 - k];
            Term::Var(n.clone(), ty.clone())
        }
        DbTerm::Free(n, ty) => Term::Var(n.clone(), ty.clone()),
        DbTerm::App(f, args) => Term::App(f.clone(), args.iter().map(|a| read_term(a, stack)).collect()),
        DbTerm::Eps(h, ty, body) => {
            let (name, b) = read_binder(h, ty, body, stack);
            Term::Epsilon(name, ty.clone(), Box::new(b))
        }
    }
}

fn read_formula(f: &DbFormula, stack: &mut Vec<(String, TypeExpr)>) -> Formula {
    let bx = |f: &DbFormula, stack: &mut Vec<(String, TypeExpr)>| Box::new(read_formula(f, stack));
    match f {
        DbFormula::Rel(r, args) => Formula::Rel(r.clone(), args.iter().map(|a| read_term(a, stack)).collect()),
        DbFormula::Eq(a, b) => Formula::Eq(read_term(a, stack), read_term(b, stack)),
        DbFormula::Top => Formula::Top,
        DbFormula::Bot => Formula::Bot,
        DbFormula::And(a, b) => Formula::And(bx(a, stack), bx(b, stack)),
        DbFormula::Or(a, b) => Formula::Or(bx(a, stack), bx(b, stack)),
        DbFormula::Imp(a, b) => Formula::Imp(bx(a, stack), bx(b, stack)),
        DbFormula::Not(a) => Formula::Not(bx(a, stack)),
        DbFormula::Exists(h, ty, body) => {
            let (name, b) = read_binder(h, ty, body, stack);
            Formula::Exists(name, ty.clone(), Box::new(b))
        }
        DbFormula::Forall(h, ty, body) => {
            let (name, b) = read_binder(h, ty, body, stack);
            Formula::Forall(name, ty.clone(), Box::new(b))
        }
    }
}

/// A simultaneous substitution `[t1/x1, …, tn/xn]`.
/// Replacement terms in nameless form, with the type of each replaced variable.
type Prepared = (BTreeMap<String, DbTerm>, BTreeMap<String, TypeExpr>);

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Substitution {
    map: BTreeMap<String, Term>,
}

impl Substitution {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn single(var: impl Into<String>, t: Term) -> Self {
        let mut s = Self::new();
        s.insert(var, t);
        s
    }

    pub fn insert(&mut self, var: impl Into<String>, t: Term) {
        self.map.insert(var.into(), t);
    }

    pub fn get(&self, var: &str) -> Option<&Term> {
        self.map.get(var)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &Term)> {
        self.map.iter().map(|(k, v)| (k.as_str(), v))
    }

    fn prepare(&self, sig: &Signature) -> Result<Prepared, SyntaxError> {
        let mut terms = BTreeMap::new();
        let mut types = BTreeMap::new();
        for (k, t) in &self.map {
            types.insert(k.clone(), head_type(t, sig)?);
            terms.insert(k.clone(), index_term(t, &mut Vec::new()));
        }
        Ok((terms, types))
    }
}

impl<S: Into<String>> FromIterator<(S, Term)> for Substitution {
    fn from_iter<I: IntoIterator<Item = (S, Term)>>(iter: I) -> Self {
        Substitution {
            map: iter.into_iter().map(|(k, v)| (k.into(), v)).collect(),
        }
    }
}

/// Operations shared by terms and formulas.
pub trait Binding: Sized {
    /// Equality modulo renaming of bound variables (including ε binders).
    fn alpha_eq(&self, other: &Self) -> bool;
    fn free_vars(&self) -> BTreeSet<(String, TypeExpr)>;
    /// Capture-avoiding simultaneous substitution.
    fn substitute(&self, s: &Substitution, sig: &Signature) -> Result<Self, SyntaxError>;
}

impl Binding for Term {
    fn alpha_eq(&self, other: &Self) -> bool {
        index_term(self, &mut Vec::new()) == index_term(other, &mut Vec::new())
    }

    fn free_vars(&self) -> BTreeSet<(String, TypeExpr)> {
        let mut out = BTreeSet::new();
        fv_term(self, &mut Vec::new(), &mut out);
        out
    }

    fn substitute(&self, s: &Substitution, sig: &Signature) -> Result<Self, SyntaxError> {
        let (map, types) = s.prepare(sig)?;
        let db = Replace {
            map: &map,
            types: &types,
        }
        .term(&index_term(self, &mut Vec::new()))?;
        Ok(read_term(&db, &mut Vec::new()))
    }
}

impl Binding for Formula {
    fn alpha_eq(&self, other: &Self) -> bool {
        index_formula(self, &mut Vec::new()) == index_formula(other, &mut Vec::new())
    }

    fn free_vars(&self) -> BTreeSet<(String, TypeExpr)> {
        let mut out = BTreeSet::new();
        fv_formula(self, &mut Vec::new(), &mut out);
        out
    }

    fn substitute(&self, s: &Substitution, sig: &Signature) -> Result<Self, SyntaxError> {
        let (map, types) = s.prepare(sig)?;
        let db = Replace {
            map: &map,
            types: &types,
        }
        .formula(&index_formula(self, &mut Vec::new()))?;
        Ok(read_formula(&db, &mut Vec::new()))
    }
}

pub fn alpha_eq<T: Binding>(a: &T, b: &T) -> bool {
    a.alpha_eq(b)
}

pub fn free_vars<T: Binding>(a: &T) -> BTreeSet<(String, TypeExpr)> {
    a.free_vars()
}

pub fn substitute<T: Binding>(a: &T, s: &Substitution, sig: &Signature) -> Result<T, SyntaxError> {
    a.substitute(s, sig)
}

/// True when `name` occurs free in `phi` (at any type).
pub fn occurs_free(name: &str, phi: &Formula) -> bool {
    phi.free_vars().iter().any(|(n, _)| n == name)
}

fn fv_term<'a>(t: &'a Term, bound: &mut Vec<&'a str>, out: &mut BTreeSet<(String, TypeExpr)>) {
    match t {
        Term::Var(n, ty) => {
            if !bound.contains(&n.as_str()) {
                out.insert((n.clone(), ty.clone()));
            }
        }
        Term::App(_, args) => args.iter().for_each(|a| fv_term(a, bound, out)),
        Term::Epsilon(x, _, body) => {
            bound.push(x);
            fv_formula(body, bound, out);
            bound.pop();
        }
    }
}

fn fv_formula<'a>(f: &'a Formula, bound: &mut Vec<&'a str>, out: &mut BTreeSet<(String, TypeExpr)>) {
    match f {
        Formula::Rel(_, args) => args.iter().for_each(|a| fv_term(a, bound, out)),
        Formula::Eq(a, b) => {
            fv_term(a, bound, out);
            fv_term(b, bound, out);
        }
        Formula::Top | Formula::Bot => {}
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => {
            fv_formula(a, bound, out);
            fv_formula(b, bound, out);
        }
        Formula::Not(a) => fv_formula(a, bound, out),
        Formula::Exists(x, _, body) | Formula::Forall(x, _, body) => {
            bound.push(x);
            fv_formula(body, bound, out);
            bound.pop();
        }
    }
}
