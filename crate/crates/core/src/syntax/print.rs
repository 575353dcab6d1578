//! Concrete syntax output. Everything printed here parses back to an
//! alpha-equivalent value.

use std::fmt::{self, Display, Formatter};

use super::{Context, Definition, Formula, Sequent, Signature, Term, Theory, TypeExpr};

fn type_prec(t: &TypeExpr) -> u8 {
    match t {
        TypeExpr::Fun(..) => 0,
        TypeExpr::Sum(..) => 1,
        TypeExpr::Prod(..) => 2,
        _ => 3,
    }
}

pub(crate) fn write_type(f: &mut Formatter<'_>, t: &TypeExpr, min: u8) -> fmt::Result {
    if type_prec(t) < min {
        write!(f, "(")?;
        write_type(f, t, 0)?;
        return write!(f, ")");
    }
    match t {
        TypeExpr::Base(n) => write!(f, "{n}"),
        TypeExpr::Unit => write!(f, "Unit"),
        TypeExpr::Empty => write!(f, "Empty"),
        TypeExpr::Fun(a, b) => {
            write_type(f, a, 1)?;
            write!(f, " -> ")?;
            write_type(f, b, 0)
        }
        TypeExpr::Sum(a, b) => {
            write_type(f, a, 1)?;
            write!(f, " + ")?;
            write_type(f, b, 2)
        }
        TypeExpr::Prod(a, b) => {
            write_type(f, a, 2)?;
            write!(f, " * ")?;
            write_type(f, b, 3)
        }
    }
}

impl Display for TypeExpr {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        write_type(f, self, 0)
    }
}

fn write_term(f: &mut Formatter<'_>, t: &Term, wrap_eps: bool) -> fmt::Result {
    match t {
        Term::Var(n, _) => write!(f, "{n}"),
        Term::App(s, args) if args.is_empty() => write!(f, "{s}"),
        Term::App(s, args) => {
            write!(f, "{s}(")?;
            write_args(f, args)?;
            write!(f, ")")
        }
        Term::Epsilon(x, ty, body) => {
            if wrap_eps {
                write!(f, "(")?;
            }
            write!(f, "eps {x}:{ty}. ")?;
            write_formula(f, body, 0)?;
            if wrap_eps {
                write!(f, ")")?;
            }
            Ok(())
        }
    }
}

fn write_args(f: &mut Formatter<'_>, args: &[Term]) -> fmt::Result {
    for (i, a) in args.iter().enumerate() {
        if i > 0 {
            write!(f, ", ")?;
        }
        write_term(f, a, false)?;
    }
    Ok(())
}

impl Display for Term {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        write_term(f, self, false)
    }
}

fn formula_prec(phi: &Formula) -> u8 {
    match phi {
        Formula::Exists(..) | Formula::Forall(..) => 0,
        Formula::Imp(..) => 1,
        Formula::Or(..) => 2,
        Formula::And(..) => 3,
        Formula::Not(..) => 4,
        _ => 5,
    }
}

fn write_formula(f: &mut Formatter<'_>, phi: &Formula, min: u8) -> fmt::Result {
    if formula_prec(phi) < min {
        write!(f, "(")?;
        write_formula(f, phi, 0)?;
        return write!(f, ")");
    }
    match phi {
        Formula::Rel(r, args) if args.is_empty() => write!(f, "{r}"),
        Formula::Rel(r, args) => {
            write!(f, "{r}(")?;
            write_args(f, args)?;
            write!(f, ")")
        }
        Formula::Eq(a, b) => {
            write_term(f, a, true)?;
            write!(f, " = ")?;
            write_term(f, b, true)
        }
        Formula::Top => write!(f, "true"),
        Formula::Bot => write!(f, "false"),
        Formula::Imp(a, b) => {
            write_formula(f, a, 2)?;
            write!(f, " -> ")?;
            write_formula(f, b, 1)
        }
        Formula::Or(a, b) => {
            write_formula(f, a, 2)?;
            write!(f, " \\/ ")?;
            write_formula(f, b, 3)
        }
        Formula::And(a, b) => {
            write_formula(f, a, 3)?;
            write!(f, " /\\ ")?;
            write_formula(f, b, 4)
        }
        Formula::Not(a) => {
            write!(f, "~")?;
            write_formula(f, a, 4)
        }
        Formula::Exists(x, ty, body) => {
            write!(f, "exists {x}:{ty}. ")?;
            write_formula(f, body, 0)
        }
        Formula::Forall(x, ty, body) => {
            write!(f, "forall {x}:{ty}. ")?;
            write_formula(f, body, 0)
        }
    }
}

impl Display for Formula {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        write_formula(f, self, 0)
    }
}

impl Display for Context {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        for (i, (n, t)) in self.vars().iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{n}:{t}")?;
        }
        Ok(())
    }
}

impl Display for Sequent {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        if self.context.is_empty() {
            write!(f, "|")?;
        } else {
            write!(f, "{} |", self.context)?;
        }
        for (i, h) in self.hypotheses.iter().enumerate() {
            write!(f, "{}{h}", if i == 0 { " " } else { ", " })?;
        }
        write!(f, " |- {}", self.conclusion)
    }
}

impl Display for Signature {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        for b in self.base_types() {
            writeln!(f, "type {b};")?;
        }
        for (name, decl) in self.funs() {
            write!(f, "fun {name} : ")?;
            if decl.args.is_empty() {
                // a bare arrow would read as a function declaration
                write_type(f, &decl.result, 1)?;
            } else {
                for (i, a) in decl.args.iter().enumerate() {
                    if i > 0 {
                        write!(f, " * ")?;
                    }
                    write_type(f, a, 3)?;
                }
                write!(f, " -> ")?;
                write_type(f, &decl.result, 0)?;
            }
            writeln!(f, ";")?;
        }
        for (name, args) in self.rels() {
            write!(f, "rel {name}(")?;
            for (i, a) in args.iter().enumerate() {
                if i > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{a}")?;
            }
            writeln!(f, ");")?;
        }
        Ok(())
    }
}

impl Display for Theory {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.signature)?;
        for (name, d) in &self.definitions {
            match d {
                Definition::Term { term, .. } => writeln!(f, "def {name} := {term};")?,
                Definition::Formula(phi) => writeln!(f, "def {name} := {phi};")?,
            }
        }
        for (name, s) in &self.axioms {
            writeln!(f, "axiom {name} : {s};")?;
        }
        Ok(())
    }
}
