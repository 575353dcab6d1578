//! Natural-deduction derivations over sequents `Γ | Δ ⊢ φ` and their checker.
//!
//! Checking is local: a tree is accepted exactly when every node is a correct
//! instance of its rule given the conclusions of its immediate premises.
//! Formulas are compared up to renaming of bound variables.

mod check;
mod derive;
mod script;

pub use check::{check_derivation, check_node, check_nodes, CheckReport, NodeVerdict, RuleError, Violation};
pub use derive::{derive_epsilon_exists_equiv, DeriveError};
pub use script::{parse_script, print_derivation, print_script, ScriptError};

use crate::syntax::{Formula, Sequent, Term, TypeExpr};

/// An inference rule together with the data the conclusion alone does not determine.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Rule {
    /// `Γ | Δ ⊢ φ` with `φ ∈ Δ`.
    Axiom,
    /// Drops variables from the context and formulas from the hypotheses, keeping order.
    Weaken,
    /// Permutes the context and the hypotheses.
    Exchange,
    /// `Γ | Δ ⊢ χ` and `Γ | Δ, χ ⊢ φ` give `Γ | Δ ⊢ φ`.
    Cut,
    AndI,
    AndE1,
    AndE2,
    OrI1,
    OrI2,
    /// `Γ | Δ, φ ⊢ χ` and `Γ | Δ, ψ ⊢ χ` give `Γ | Δ, φ ∨ ψ ⊢ χ`.
    OrE,
    ImpI,
    ImpE,
    NotI,
    /// `Γ | Δ ⊢ φ` and `Γ | Δ ⊢ ¬φ` give `Γ | Δ ⊢ ⊥`.
    NotE,
    TopI,
    BotE,
    /// `Γ | Δ ⊢ φ ∨ ¬φ`.
    Lem,
    ExistsI {
        witness: Term,
    },
    /// `Γ | Δ ⊢ ∃x:A.φ` and `Γ, y:A | Δ, φ[y/x] ⊢ χ` give `Γ | Δ ⊢ χ`.
    ExistsE,
    /// `Γ, y:A | Δ ⊢ φ[y/x]` gives `Γ | Δ ⊢ ∀x:A.φ`.
    ForallI,
    ForallE {
        witness: Term,
    },
    EqRefl,
    /// `Γ | Δ ⊢ s = t` and `Γ | Δ ⊢ target[s/var]` give `Γ | Δ ⊢ target[t/var]`.
    EqSubst {
        target: Formula,
        var: String,
        var_type: TypeExpr,
    },
    /// `Γ, x:A | … ⊢ ψ` gives `Γ | ∃x:A.ψ ⊢ ψ[ε_ψ/x]`. The premise only
    /// witnesses that `ψ` is well formed in the extended context.
    EpsI,
    /// `Γ, x:A | ψ ⊢ φ` and `Γ, x:A | φ ⊢ ψ` give `Γ | ⊢ ε_ψ = ε_φ`.
    EpsEx,
}

impl Rule {
    /// Every rule name, in declaration order.
    pub const NAMES: [&'static str; 25] = [
        "axiom", "weaken", "exchange", "cut", "and-i", "and-e1", "and-e2", "or-i1", "or-i2", "or-e", "imp-i", "imp-e",
        "not-i", "not-e", "top-i", "bot-e", "lem", "exists-i", "exists-e", "forall-i", "forall-e", "eq-refl",
        "eq-subst", "eps-i", "eps-ex",
    ];

    pub fn name(&self) -> &'static str {
        Rule::NAMES[self.index()]
    }

    fn index(&self) -> usize {
        match self {
            Rule::Axiom => 0,
            Rule::Weaken => 1,
            Rule::Exchange => 2,
            Rule::Cut => 3,
            Rule::AndI => 4,
            Rule::AndE1 => 5,
            Rule::AndE2 => 6,
            Rule::OrI1 => 7,
            Rule::OrI2 => 8,
            Rule::OrE => 9,
            Rule::ImpI => 10,
            Rule::ImpE => 11,
            Rule::NotI => 12,
            Rule::NotE => 13,
            Rule::TopI => 14,
            Rule::BotE => 15,
            Rule::Lem => 16,
            Rule::ExistsI { .. } => 17,
            Rule::ExistsE => 18,
            Rule::ForallI => 19,
            Rule::ForallE { .. } => 20,
            Rule::EqRefl => 21,
            Rule::EqSubst { .. } => 22,
            Rule::EpsI => 23,
            Rule::EpsEx => 24,
        }
    }

    /// The number of premises the rule takes.
    pub fn arity(&self) -> usize {
        match self {
            Rule::Axiom | Rule::TopI | Rule::Lem | Rule::EqRefl => 0,
            Rule::Weaken
            | Rule::Exchange
            | Rule::AndE1
            | Rule::AndE2
            | Rule::OrI1
            | Rule::OrI2
            | Rule::ImpI
            | Rule::NotI
            | Rule::BotE
            | Rule::ExistsI { .. }
            | Rule::ForallI
            | Rule::ForallE { .. }
            | Rule::EpsI => 1,
            Rule::Cut
            | Rule::AndI
            | Rule::OrE
            | Rule::ImpE
            | Rule::NotE
            | Rule::ExistsE
            | Rule::EqSubst { .. }
            | Rule::EpsEx => 2,
        }
    }
}

/// A finite proof tree. Each node records the sequent it concludes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Derivation {
    pub rule: Rule,
    pub premises: Vec<Derivation>,
    pub conclusion: Sequent,
}

impl Derivation {
    pub fn new(rule: Rule, premises: Vec<Derivation>, conclusion: Sequent) -> Self {
        Derivation {
            rule,
            premises,
            conclusion,
        }
    }

    pub fn leaf(rule: Rule, conclusion: Sequent) -> Self {
        Derivation::new(rule, Vec::new(), conclusion)
    }

    /// Preorder traversal with node paths: the root is `0`, and child `i` of `p` is `p.i`.
    pub fn nodes(&self) -> Vec<(String, &Derivation)> {
        let mut out = Vec::new();
        let mut stack = vec![("0".to_string(), self)];
        while let Some((path, d)) = stack.pop() {
            for (i, p) in d.premises.iter().enumerate().rev() {
                stack.push((format!("{path}.{i}"), p));
            }
            out.push((path, d));
        }
        out
    }

    pub fn size(&self) -> usize {
        1 + self.premises.iter().map(Derivation::size).sum::<usize>()
    }

    /// Every rule used in the tree.
    pub fn rules(&self) -> Vec<&Rule> {
        self.nodes().into_iter().map(|(_, d)| &d.rule).collect()
    }
}

#[cfg(test)]
mod tests;
