use std::collections::HashSet;

use indexmap::IndexMap;

use super::SyntaxError;

/// A type of the many-typed signature, including the constructed types.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TypeExpr {
    Base(String),
    Prod(Box<TypeExpr>, Box<TypeExpr>),
    Fun(Box<TypeExpr>, Box<TypeExpr>),
    Sum(Box<TypeExpr>, Box<TypeExpr>),
    Unit,
    Empty,
}

impl TypeExpr {
    pub fn base(name: impl Into<String>) -> Self {
        TypeExpr::Base(name.into())
    }

    pub fn prod(a: TypeExpr, b: TypeExpr) -> Self {
        TypeExpr::Prod(Box::new(a), Box::new(b))
    }

    pub fn fun(a: TypeExpr, b: TypeExpr) -> Self {
        TypeExpr::Fun(Box::new(a), Box::new(b))
    }

    pub fn sum(a: TypeExpr, b: TypeExpr) -> Self {
        TypeExpr::Sum(Box::new(a), Box::new(b))
    }

    /// True when `Empty` occurs anywhere inside this type.
    pub fn mentions_empty(&self) -> bool {
        match self {
            TypeExpr::Empty => true,
            TypeExpr::Base(_) | TypeExpr::Unit => false,
            TypeExpr::Prod(a, b) | TypeExpr::Fun(a, b) | TypeExpr::Sum(a, b) => {
                a.mentions_empty() || b.mentions_empty()
            }
        }
    }

    pub(crate) fn collect_bases<'a>(&'a self, out: &mut HashSet<&'a str>) {
        match self {
            TypeExpr::Base(n) => {
                out.insert(n);
            }
            TypeExpr::Unit | TypeExpr::Empty => {}
            TypeExpr::Prod(a, b) | TypeExpr::Fun(a, b) | TypeExpr::Sum(a, b) => {
                a.collect_bases(out);
                b.collect_bases(out);
            }
        }
    }
}

/// Terms. Variables carry their type; `Epsilon(x, A, ψ)` binds `x` in `ψ`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Term {
    Var(String, TypeExpr),
    App(String, Vec<Term>),
    Epsilon(String, TypeExpr, Box<Formula>),
}

impl Term {
    pub fn var(name: impl Into<String>, ty: TypeExpr) -> Self {
        Term::Var(name.into(), ty)
    }

    pub fn app(f: impl Into<String>, args: Vec<Term>) -> Self {
        Term::App(f.into(), args)
    }

    pub fn constant(c: impl Into<String>) -> Self {
        Term::App(c.into(), Vec::new())
    }

    pub fn epsilon(x: impl Into<String>, ty: TypeExpr, body: Formula) -> Self {
        Term::Epsilon(x.into(), ty, Box::new(body))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    Rel(String, Vec<Term>),
    Eq(Term, Term),
    Top,
    Bot,
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Imp(Box<Formula>, Box<Formula>),
    Not(Box<Formula>),
    Exists(String, TypeExpr, Box<Formula>),
    Forall(String, TypeExpr, Box<Formula>),
}

impl Formula {
    pub fn rel(r: impl Into<String>, args: Vec<Term>) -> Self {
        Formula::Rel(r.into(), args)
    }

    pub fn eq(a: Term, b: Term) -> Self {
        Formula::Eq(a, b)
    }

    pub fn and(a: Formula, b: Formula) -> Self {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Self {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn imp(a: Formula, b: Formula) -> Self {
        Formula::Imp(Box::new(a), Box::new(b))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(a: Formula) -> Self {
        Formula::Not(Box::new(a))
    }

    pub fn exists(x: impl Into<String>, ty: TypeExpr, body: Formula) -> Self {
        Formula::Exists(x.into(), ty, Box::new(body))
    }

    pub fn forall(x: impl Into<String>, ty: TypeExpr, body: Formula) -> Self {
        Formula::Forall(x.into(), ty, Box::new(body))
    }
}

/// An ordered list of typed variables with pairwise distinct names.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Context {
    vars: Vec<(String, TypeExpr)>,
}

impl Context {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_vars<I, S>(vars: I) -> Result<Self, SyntaxError>
    where
        I: IntoIterator<Item = (S, TypeExpr)>,
        S: Into<String>,
    {
        let mut ctx = Context::new();
        for (name, ty) in vars {
            ctx.push(name, ty)?;
        }
        Ok(ctx)
    }

    pub fn push(&mut self, name: impl Into<String>, ty: TypeExpr) -> Result<(), SyntaxError> {
        let name = name.into();
        if self.contains(&name) {
            return Err(SyntaxError::DuplicateVariable(name));
        }
        self.vars.push((name, ty));
        Ok(())
    }

    /// `Γ, x:A`.
    pub fn extended(&self, name: impl Into<String>, ty: TypeExpr) -> Result<Self, SyntaxError> {
        let mut out = self.clone();
        out.push(name, ty)?;
        Ok(out)
    }

    /// `Γ, Θ`; defined only for disjoint name sets.
    pub fn concat(&self, other: &Context) -> Result<Self, SyntaxError> {
        let mut out = self.clone();
        for (n, t) in &other.vars {
            out.push(n.clone(), t.clone())?;
        }
        Ok(out)
    }

    pub fn lookup(&self, name: &str) -> Option<&TypeExpr> {
        self.vars.iter().find(|(n, _)| n == name).map(|(_, t)| t)
    }

    pub fn contains(&self, name: &str) -> bool {
        self.vars.iter().any(|(n, _)| n == name)
    }

    pub fn vars(&self) -> &[(String, TypeExpr)] {
        &self.vars
    }

    pub fn len(&self) -> usize {
        self.vars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vars.is_empty()
    }

    /// Splits `Γ, x:A` into `Γ` and `(x, A)`.
    pub fn split_last(&self) -> Option<(Context, &(String, TypeExpr))> {
        let (last, init) = self.vars.split_last()?;
        Some((Context { vars: init.to_vec() }, last))
    }
}

/// `Γ | φ1, …, φn ⊢ ψ`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Sequent {
    pub context: Context,
    pub hypotheses: Vec<Formula>,
    pub conclusion: Formula,
}

impl Sequent {
    pub fn new(context: Context, hypotheses: Vec<Formula>, conclusion: Formula) -> Self {
        Sequent {
            context,
            hypotheses,
            conclusion,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FunDecl {
    pub args: Vec<TypeExpr>,
    pub result: TypeExpr,
}

/// Base types, function symbols and relation symbols, in declaration order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Signature {
    base_types: Vec<String>,
    funs: IndexMap<String, FunDecl>,
    rels: IndexMap<String, Vec<TypeExpr>>,
}

impl Signature {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_base_type(&mut self, name: impl Into<String>) -> Result<(), SyntaxError> {
        let name = name.into();
        if self.has_base_type(&name) {
            return Err(SyntaxError::DuplicateDeclaration(name));
        }
        self.base_types.push(name);
        Ok(())
    }

    pub fn add_fun(
        &mut self,
        name: impl Into<String>,
        args: Vec<TypeExpr>,
        result: TypeExpr,
    ) -> Result<(), SyntaxError> {
        let name = name.into();
        self.check_fresh_symbol(&name)?;
        for t in args.iter().chain(std::iter::once(&result)) {
            self.check_type(t)?;
        }
        self.funs.insert(name, FunDecl { args, result });
        Ok(())
    }

    pub fn add_rel(&mut self, name: impl Into<String>, args: Vec<TypeExpr>) -> Result<(), SyntaxError> {
        let name = name.into();
        self.check_fresh_symbol(&name)?;
        for t in &args {
            self.check_type(t)?;
        }
        self.rels.insert(name, args);
        Ok(())
    }

    fn check_fresh_symbol(&self, name: &str) -> Result<(), SyntaxError> {
        if self.funs.contains_key(name) || self.rels.contains_key(name) {
            return Err(SyntaxError::DuplicateDeclaration(name.to_string()));
        }
        Ok(())
    }

    /// Every base type mentioned must be declared.
    pub fn check_type(&self, ty: &TypeExpr) -> Result<(), SyntaxError> {
        let mut bases = HashSet::new();
        ty.collect_bases(&mut bases);
        match bases.into_iter().find(|b| !self.has_base_type(b)) {
            Some(b) => Err(SyntaxError::UnknownSymbol(b.to_string())),
            None => Ok(()),
        }
    }

    pub fn has_base_type(&self, name: &str) -> bool {
        self.base_types.iter().any(|b| b == name)
    }

    pub fn base_types(&self) -> &[String] {
        &self.base_types
    }

    pub fn fun(&self, name: &str) -> Option<&FunDecl> {
        self.funs.get(name)
    }

    pub fn rel(&self, name: &str) -> Option<&[TypeExpr]> {
        self.rels.get(name).map(Vec::as_slice)
    }

    pub fn funs(&self) -> impl Iterator<Item = (&str, &FunDecl)> {
        self.funs.iter().map(|(k, v)| (k.as_str(), v))
    }

    pub fn rels(&self) -> impl Iterator<Item = (&str, &[TypeExpr])> {
        self.rels.iter().map(|(k, v)| (k.as_str(), v.as_slice()))
    }

    /// True when some declaration mentions the empty type.
    pub fn mentions_empty(&self) -> bool {
        self.funs
            .values()
            .any(|d| d.result.mentions_empty() || d.args.iter().any(TypeExpr::mentions_empty))
            || self.rels.values().flatten().any(TypeExpr::mentions_empty)
    }

    /// The sub-signature containing only the named symbols and the base types
    /// their declarations (and `extra_types`) mention. Declaration order is kept.
    pub fn restrict<'a>(
        &self,
        symbols: &HashSet<String>,
        extra_types: impl IntoIterator<Item = &'a TypeExpr>,
    ) -> Signature {
        let mut bases = HashSet::new();
        let funs: IndexMap<_, _> = self
            .funs
            .iter()
            .filter(|(k, _)| symbols.contains(*k))
            .map(|(k, v)| (k.clone(), v.clone()))
            .collect();
        let rels: IndexMap<_, _> = self
            .rels
            .iter()
            .filter(|(k, _)| symbols.contains(*k))
            .map(|(k, v)| (k.clone(), v.clone()))
            .collect();
        for d in funs.values() {
            d.result.collect_bases(&mut bases);
            d.args.iter().for_each(|t| t.collect_bases(&mut bases));
        }
        rels.values().flatten().for_each(|t| t.collect_bases(&mut bases));
        let extra: Vec<&TypeExpr> = extra_types.into_iter().collect();
        extra.iter().for_each(|t| t.collect_bases(&mut bases));
        Signature {
            base_types: self
                .base_types
                .iter()
                .filter(|b| bases.contains(b.as_str()))
                .cloned()
                .collect(),
            funs,
            rels,
        }
    }
}

/// A closed named definition: `def w := eps x:A. P(x)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Definition {
    Term { term: Term, ty: TypeExpr },
    Formula(Formula),
}

/// A parsed theory file.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Theory {
    pub signature: Signature,
    pub definitions: Vec<(String, Definition)>,
    pub axioms: Vec<(String, Sequent)>,
}

impl Theory {
    pub fn axiom(&self, name: &str) -> Option<&Sequent> {
        self.axioms.iter().find(|(n, _)| n == name).map(|(_, s)| s)
    }

    pub fn definition(&self, name: &str) -> Option<&Definition> {
        self.definitions.iter().find(|(n, _)| n == name).map(|(_, d)| d)
    }
}
