//! Seeded generators for signatures, contexts, terms, formulas and finite
//! interpretations. Property tests and benchmarks draw from these.
//!
//! Context variables are taken from [`CONTEXT_VARS`] and binders from
//! [`BINDERS`]. The two pools are disjoint, so a generated binder never
//! clashes with a context variable, while binders may still shadow each
//! other.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::finset::{FinMor, Subset};
use crate::semantics::Interpretation;
use crate::syntax::{Context, Formula, Signature, Substitution, Term, TypeExpr};

pub const CONTEXT_VARS: [&str; 3] = ["x", "y", "z"];
pub const BINDERS: [&str; 3] = ["u", "v", "w"];

/// Two base types with constants, unary and binary function symbols and
/// relations of arity one and two over both types.
pub fn sample_signature() -> Signature {
    let a = TypeExpr::base("A");
    let b = TypeExpr::base("B");
    let mut sig = Signature::new();
    sig.add_base_type("A").unwrap();
    sig.add_base_type("B").unwrap();
    sig.add_fun("c", vec![], a.clone()).unwrap();
    sig.add_fun("d", vec![], b.clone()).unwrap();
    sig.add_fun("f", vec![a.clone()], a.clone()).unwrap();
    sig.add_fun("g", vec![a.clone()], b.clone()).unwrap();
    sig.add_fun("h", vec![a.clone(), b.clone()], a.clone()).unwrap();
    sig.add_rel("P", vec![a.clone()]).unwrap();
    sig.add_rel("Q", vec![b.clone()]).unwrap();
    sig.add_rel("R", vec![a.clone(), a.clone()]).unwrap();
    sig.add_rel("S", vec![a, b]).unwrap();
    sig
}

/// A base type of `sig`, uniformly.
pub fn random_type<R: Rng>(rng: &mut R, sig: &Signature) -> TypeExpr {
    TypeExpr::base(sig.base_types().choose(rng).expect("signature has a base type").clone())
}

/// A context of `0..=max_len` distinct variables from [`CONTEXT_VARS`].
/// Names listed in `avoid` are skipped.
pub fn random_context<R: Rng>(rng: &mut R, sig: &Signature, max_len: usize, avoid: &[&str]) -> Context {
    let names: Vec<&str> = CONTEXT_VARS.iter().copied().filter(|n| !avoid.contains(n)).collect();
    let len = rng.gen_range(0..=max_len.min(names.len()));
    let mut ctx = Context::new();
    for name in names.choose_multiple(rng, len) {
        ctx.push(*name, random_type(rng, sig)).unwrap();
    }
    ctx
}

struct Gen<'a, R> {
    rng: &'a mut R,
    sig: &'a Signature,
    scope: Vec<(String, TypeExpr)>,
}

impl<R: Rng> Gen<'_, R> {
    fn new<'a>(rng: &'a mut R, sig: &'a Signature, ctx: &Context) -> Gen<'a, R> {
        Gen {
            rng,
            sig,
            scope: ctx.vars().to_vec(),
        }
    }

    /// Names whose innermost binding has type `ty`.
    fn visible(&self, ty: &TypeExpr) -> Vec<String> {
        let mut out = Vec::new();
        for (i, (name, t)) in self.scope.iter().enumerate() {
            let shadowed = self.scope[i + 1..].iter().any(|(n, _)| n == name);
            if !shadowed && t == ty {
                out.push(name.clone());
            }
        }
        out
    }

    fn bound<T>(&mut self, ty: &TypeExpr, body: impl FnOnce(&mut Self) -> T) -> (String, T) {
        let name = BINDERS.choose(self.rng).unwrap().to_string();
        self.scope.push((name.clone(), ty.clone()));
        let out = body(self);
        self.scope.pop();
        (name, out)
    }

    fn term(&mut self, ty: &TypeExpr, depth: usize) -> Term {
        let vars = self.visible(ty);
        let funs: Vec<(String, Vec<TypeExpr>)> = self
            .sig
            .funs()
            .filter(|(_, d)| &d.result == ty && (depth > 0 || d.args.is_empty()))
            .map(|(n, d)| (n.to_string(), d.args.clone()))
            .collect();
        let choices = vars.len() + funs.len() + usize::from(depth > 0);
        if choices == 0 {
            return Term::epsilon(BINDERS[0], ty.clone(), Formula::Top);
        }
        let k = self.rng.gen_range(0..choices);
        if k < vars.len() {
            Term::var(vars[k].clone(), ty.clone())
        } else if k < vars.len() + funs.len() {
            let (f, args) = &funs[k - vars.len()];
            let args = args.iter().map(|a| self.term(a, depth.saturating_sub(1))).collect();
            Term::app(f.clone(), args)
        } else {
            let (x, body) = self.bound(ty, |g| g.formula(depth - 1));
            Term::epsilon(x, ty.clone(), body)
        }
    }

    fn atom(&mut self, depth: usize) -> Formula {
        match self.rng.gen_range(0..10) {
            0 => Formula::Top,
            1 => Formula::Bot,
            2..=3 => {
                let ty = random_type(self.rng, self.sig);
                Formula::eq(self.term(&ty, depth), self.term(&ty, depth))
            }
            _ => {
                let rels: Vec<(String, Vec<TypeExpr>)> =
                    self.sig.rels().map(|(r, a)| (r.to_string(), a.to_vec())).collect();
                match rels.choose(self.rng) {
                    Some((r, args)) => {
                        let args = args.iter().map(|a| self.term(a, depth)).collect();
                        Formula::rel(r.clone(), args)
                    }
                    None => Formula::Top,
                }
            }
        }
    }

    fn formula(&mut self, depth: usize) -> Formula {
        if depth == 0 || self.rng.gen_bool(0.25) {
            // atoms may still spend the remaining depth inside ε terms
            return self.atom(depth);
        }
        let d = depth - 1;
        match self.rng.gen_range(0..6) {
            0 => Formula::and(self.formula(d), self.formula(d)),
            1 => Formula::or(self.formula(d), self.formula(d)),
            2 => Formula::imp(self.formula(d), self.formula(d)),
            3 => Formula::not(self.formula(d)),
            4 => {
                let ty = random_type(self.rng, self.sig);
                let (x, body) = self.bound(&ty, |g| g.formula(d));
                Formula::exists(x, ty, body)
            }
            _ => {
                let ty = random_type(self.rng, self.sig);
                let (x, body) = self.bound(&ty, |g| g.formula(d));
                Formula::forall(x, ty, body)
            }
        }
    }
}

/// A term of type `ty` in `ctx`, nesting binders at most `depth` deep.
pub fn random_term<R: Rng>(rng: &mut R, sig: &Signature, ctx: &Context, ty: &TypeExpr, depth: usize) -> Term {
    Gen::new(rng, sig, ctx).term(ty, depth)
}

/// A well-formed formula in `ctx` whose connectives, quantifiers and ε
/// terms nest at most `depth` deep.
pub fn random_formula<R: Rng>(rng: &mut R, sig: &Signature, ctx: &Context, depth: usize) -> Formula {
    Gen::new(rng, sig, ctx).formula(depth)
}

/// A substitution sending every variable of `theta` to a term over `gamma`.
pub fn random_substitution<R: Rng>(
    rng: &mut R,
    sig: &Signature,
    gamma: &Context,
    theta: &Context,
    depth: usize,
) -> Substitution {
    theta
        .vars()
        .iter()
        .map(|(x, ty)| (x.clone(), random_term(rng, sig, gamma, ty, depth)))
        .collect()
}

/// Carriers of size `1..=max_carrier` and uniformly random tables and
/// relations for every symbol of `sig`.
pub fn random_interpretation<R: Rng>(rng: &mut R, sig: &Signature, max_carrier: usize) -> Interpretation {
    let mut interp = Interpretation::new();
    for ty in sig.base_types() {
        interp
            .set_carrier(ty.clone(), rng.gen_range(1..=max_carrier.max(1)))
            .unwrap();
    }
    let funs: Vec<String> = sig.funs().map(|(f, _)| f.to_string()).collect();
    for f in funs {
        let (dom, cod) = interp.fun_shape(sig, &f).unwrap();
        let table = dom.elements().map(|_| rng.gen_range(0..cod.size())).collect();
        interp.set_fun(sig, f, FinMor::new(dom, cod, table).unwrap()).unwrap();
    }
    let rels: Vec<String> = sig.rels().map(|(r, _)| r.to_string()).collect();
    for r in rels {
        let carrier = interp.rel_carrier(sig, &r).unwrap();
        let members: Vec<usize> = carrier.elements().filter(|_| rng.gen_bool(0.5)).collect();
        interp.set_rel(sig, r, Subset::new(carrier, members).unwrap()).unwrap();
    }
    interp
}
