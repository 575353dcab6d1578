//! Many-typed first-order syntax with an ε term former: types, terms,
//! formulas, contexts and sequents, together with typing, binder handling
//! and the concrete text syntax.

mod ast;
mod parse;
mod print;
mod subst;
mod typing;


use thiserror::Error;

pub use ast::{Context, Definition, Formula, FunDecl, Sequent, Signature, Term, Theory, TypeExpr};
pub use parse::{
    parse_context, parse_document, parse_formula, parse_sequent, parse_term, parse_theory, parse_var_decl, Assignment,
    Document, Pos,
};
pub use subst::{alpha_eq, free_vars, occurs_free, substitute, Binding, Substitution};
pub use typing::{head_type, typecheck_term, wellform_formula, wellform_sequent};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SyntaxError {
    #[error("{line}:{column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{line}:{column}: {error}")]
    Located {
        line: usize,
        column: usize,
        error: Box<SyntaxError>,
    },
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("unbound variable `{0}`")]
    UnboundVariable(String),
    #[error("type mismatch in {what}: expected {expected}, found {found}")]
    TypeMismatch {
        what: String,
        expected: TypeExpr,
        found: TypeExpr,
    },
    #[error("`{symbol}` takes {expected} argument(s), found {found}")]
    ArityMismatch {
        symbol: String,
        expected: usize,
        found: usize,
    },
    #[error("variable `{0}` occurs twice in the context")]
    DuplicateVariable(String),
    #[error("bound variable `{0}` clashes with a context variable")]
    BinderClash(String),
    #[error("`{0}` is declared twice")]
    DuplicateDeclaration(String),
}

impl SyntaxError {
    /// The underlying error with any source position stripped.
    pub fn root(&self) -> &SyntaxError {
        match self {
            SyntaxError::Located { error, .. } => error.root(),
            e => e,
        }
    }
}
