use super::{check_derivation, CheckReport, Derivation, Rule};
use crate::syntax::{
    wellform_formula, Binding, Context, Formula, Sequent, Signature, Substitution, SyntaxError, Term, TypeExpr,
};

#[derive(Debug, thiserror::Error)]
pub enum DeriveError {
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
    #[error(transparent)]
    Rejected(#[from] CheckReport),
}

/// The two halves of `Γ | ψ[ε_ψ/x] ⊣⊢ ∃x:A.ψ`.
///
/// The first derivation concludes `Γ | ψ[ε_ψ/x] ⊢ ∃x:A.ψ` by ∃-introduction
/// with witness `ε_ψ`; the second concludes `Γ | ∃x:A.ψ ⊢ ψ[ε_ψ/x]` by ε-I.
/// Both are checked before they are returned.
pub fn derive_epsilon_exists_equiv(
    ctx: &Context,
    psi: &Formula,
    x: &str,
    ty: &TypeExpr,
    sig: &Signature,
) -> Result<(Derivation, Derivation), DeriveError> {
    let extended = ctx.extended(x, ty.clone())?;
    wellform_formula(&extended, psi, sig)?;
    let eps = Term::epsilon(x, ty.clone(), psi.clone());
    let instance = psi.substitute(&Substitution::single(x, eps.clone()), sig)?;
    let exists = Formula::exists(x, ty.clone(), psi.clone());

    let forward = Derivation::new(
        Rule::ExistsI { witness: eps },
        vec![Derivation::leaf(
            Rule::Axiom,
            Sequent::new(ctx.clone(), vec![instance.clone()], instance.clone()),
        )],
        Sequent::new(ctx.clone(), vec![instance.clone()], exists.clone()),
    );
    let backward = Derivation::new(
        Rule::EpsI,
        vec![Derivation::leaf(
            Rule::Axiom,
            Sequent::new(extended, vec![psi.clone()], psi.clone()),
        )],
        Sequent::new(ctx.clone(), vec![exists], instance),
    );
    check_derivation(&forward, sig)?;
    check_derivation(&backward, sig)?;
    Ok((forward, backward))
}
