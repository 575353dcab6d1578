//! A proof-checking kernel for the typed epsilon calculus and its
//! interpretation in the doctrine of subsets over pointed finite sets.
//!
//! - [`syntax`]: types, terms, formulas, sequents, parsing and substitution.
//! - [`kernel`]: natural-deduction derivations and their checker.
//! - [`finset`]: finite sets and tabulated functions as a boolean category with choice.
//! - [`doctrine`]: the subobject doctrine, Σ along projections and the ε morphisms.
//! - [`semantics`]: interpretations, satisfaction, soundness audits and countermodels.
//! - [`random`]: seeded generators for property tests and benchmarks.

pub mod doctrine;
pub mod finset;
pub mod kernel;
pub mod random;
pub mod semantics;
pub mod syntax;

pub use syntax::{Context, Formula, Sequent, Signature, SyntaxError, Term, Theory, TypeExpr};
