use super::{Context, Formula, Sequent, Signature, SyntaxError, Term, TypeExpr};

struct Checker<'a> {
    sig: &'a Signature,
    ctx: &'a Context,
    scope: Vec<(String, TypeExpr)>,
}

impl Checker<'_> {
    fn lookup(&self, name: &str) -> Option<&TypeExpr> {
        self.scope
            .iter()
            .rev()
            .find(|(n, _)| n == name)
            .map(|(_, t)| t)
            .or_else(|| self.ctx.lookup(name))
    }

    fn bind<R>(
        &mut self,
        name: &str,
        ty: &TypeExpr,
        body: impl FnOnce(&mut Self) -> Result<R, SyntaxError>,
    ) -> Result<R, SyntaxError> {
        self.sig.check_type(ty)?;
        if self.ctx.contains(name) {
            return Err(SyntaxError::BinderClash(name.to_string()));
        }
        self.scope.push((name.to_string(), ty.clone()));
        let out = body(self);
        self.scope.pop();
        out
    }

    fn term(&mut self, t: &Term) -> Result<TypeExpr, SyntaxError> {
        match t {
            Term::Var(name, ty) => {
                let found = self
                    .lookup(name)
                    .ok_or_else(|| SyntaxError::UnboundVariable(name.clone()))?;
                if found != ty {
                    return Err(SyntaxError::TypeMismatch {
                        what: format!("variable `{name}`"),
                        expected: found.clone(),
                        found: ty.clone(),
                    });
                }
                Ok(ty.clone())
            }
            Term::App(f, args) => {
                let decl = self.sig.fun(f).ok_or_else(|| SyntaxError::UnknownSymbol(f.clone()))?;
                self.args(f, &decl.args, args)?;
                Ok(decl.result.clone())
            }
            Term::Epsilon(x, ty, body) => {
                self.bind(x, ty, |c| c.formula(body))?;
                Ok(ty.clone())
            }
        }
    }

    fn args(&mut self, symbol: &str, expected: &[TypeExpr], args: &[Term]) -> Result<(), SyntaxError> {
        if expected.len() != args.len() {
            return Err(SyntaxError::ArityMismatch {
                symbol: symbol.to_string(),
                expected: expected.len(),
                found: args.len(),
            });
        }
        for (i, (want, arg)) in expected.iter().zip(args).enumerate() {
            let got = self.term(arg)?;
            if &got != want {
                return Err(SyntaxError::TypeMismatch {
                    what: format!("argument {} of `{symbol}`", i + 1),
                    expected: want.clone(),
                    found: got,
                });
            }
        }
        Ok(())
    }

    fn formula(&mut self, phi: &Formula) -> Result<(), SyntaxError> {
        match phi {
            Formula::Rel(r, args) => {
                let expected = self.sig.rel(r).ok_or_else(|| SyntaxError::UnknownSymbol(r.clone()))?;
                self.args(r, expected, args)
            }
            Formula::Eq(a, b) => {
                let ta = self.term(a)?;
                let tb = self.term(b)?;
                if ta != tb {
                    return Err(SyntaxError::TypeMismatch {
                        what: "equation".to_string(),
                        expected: ta,
                        found: tb,
                    });
                }
                Ok(())
            }
            Formula::Top | Formula::Bot => Ok(()),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => {
                self.formula(a)?;
                self.formula(b)
            }
            Formula::Not(a) => self.formula(a),
            Formula::Exists(x, ty, body) | Formula::Forall(x, ty, body) => self.bind(x, ty, |c| c.formula(body)),
        }
    }
}

fn checker<'a>(ctx: &'a Context, sig: &'a Signature) -> Result<Checker<'a>, SyntaxError> {
    for (_, ty) in ctx.vars() {
        sig.check_type(ty)?;
    }
    Ok(Checker {
        sig,
        ctx,
        scope: Vec::new(),
    })
}

/// The unique `A` with `Γ | t : A`.
pub fn typecheck_term(ctx: &Context, t: &Term, sig: &Signature) -> Result<TypeExpr, SyntaxError> {
    checker(ctx, sig)?.term(t)
}

/// Succeeds iff `Γ | φ`. Binders may shadow one another but never a context variable.
pub fn wellform_formula(ctx: &Context, phi: &Formula, sig: &Signature) -> Result<(), SyntaxError> {
    checker(ctx, sig)?.formula(phi)
}

pub fn wellform_sequent(seq: &Sequent, sig: &Signature) -> Result<(), SyntaxError> {
    let mut c = checker(&seq.context, sig)?;
    for h in &seq.hypotheses {
        c.formula(h)?;
    }
    c.formula(&seq.conclusion)
}

/// The type of `t` read off its head symbol, without checking subterms.
pub fn head_type(t: &Term, sig: &Signature) -> Result<TypeExpr, SyntaxError> {
    match t {
        Term::Var(_, ty) | Term::Epsilon(_, ty, _) => Ok(ty.clone()),
        Term::App(f, _) => sig
            .fun(f)
            .map(|d| d.result.clone())
            .ok_or_else(|| SyntaxError::UnknownSymbol(f.clone())),
    }
}
