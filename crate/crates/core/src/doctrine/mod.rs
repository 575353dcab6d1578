//! The subobject doctrine over pointed finite sets.
//!
//! Each carrier `A` gets the boolean algebra of its subsets, every arrow
//! reindexes by preimage, and every first projection `π : X × Y → X` has a
//! left adjoint `Σ_π` computed from an image factorization. Each `ψ ⊆ X × Y`
//! gets a morphism `ε_ψ : X → Y` with `Σ_π ψ ≤ ⟨id, ε_ψ⟩* ψ`, built two ways:
//! by the diagram chase through factorization, choice and complements
//! ([`epsilon_categorical`]) and by a direct least-witness scan
//! ([`epsilon_oracle`]).

mod laws;

pub use laws::{
    verify_adjunction, verify_beck_chevalley, LawConfig, LawSuite, LawVerdict, Samples, Verdict,
    EXHAUSTIVE_BECK_CHEVALLEY, EXHAUSTIVE_PRODUCT, SAMPLED_PRODUCT,
};

use thiserror::Error;

use crate::finset::{
    self, compose, copair, image_factorize, product, pullback, section_of_epi, section_of_projection, FinMor, FinObj,
    FinsetError, Product, Subset,
};

/// Every pointed object in the base carries this global element.
pub const BASEPOINT: usize = 0;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DoctrineError {
    #[error(transparent)]
    Finset(#[from] FinsetError),
    #[error("arrow is not a first projection")]
    NotAProjection,
    #[error("carrier of size {0} is not pointed")]
    Unpointed(usize),
    #[error("subset lives over a carrier of size {found}, expected {expected}")]
    CarrierMismatch { expected: usize, found: usize },
    #[error("arrow is not an epimorphism")]
    NotEpi,
}

pub type Result<T> = std::result::Result<T, DoctrineError>;

fn same_carrier(expected: FinObj, s: &Subset) -> Result<()> {
    if s.carrier() != expected {
        return Err(DoctrineError::CarrierMismatch {
            expected: expected.size(),
            found: s.carrier().size(),
        });
    }
    Ok(())
}

/// The fiber `P(A)`: all subsets of `A` ordered by inclusion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Fiber {
    carrier: FinObj,
}

impl Fiber {
    pub fn new(carrier: FinObj) -> Self {
        Fiber { carrier }
    }

    pub fn carrier(&self) -> FinObj {
        self.carrier
    }

    pub fn top(&self) -> Subset {
        Subset::full(self.carrier)
    }

    pub fn bot(&self) -> Subset {
        Subset::empty(self.carrier)
    }

    pub fn meet(&self, a: &Subset, b: &Subset) -> Result<Subset> {
        same_carrier(self.carrier, a)?;
        Ok(a.meet(b)?)
    }

    pub fn join(&self, a: &Subset, b: &Subset) -> Result<Subset> {
        same_carrier(self.carrier, a)?;
        Ok(a.join(b)?)
    }

    pub fn neg(&self, a: &Subset) -> Result<Subset> {
        same_carrier(self.carrier, a)?;
        Ok(a.complement())
    }

    pub fn leq(&self, a: &Subset, b: &Subset) -> Result<bool> {
        same_carrier(self.carrier, a)?;
        Ok(a.leq(b)?)
    }

    /// All `2^n` elements, ordered by bitmask. Only for carriers below 64.
    pub fn elements(&self) -> impl Iterator<Item = Subset> + '_ {
        assert!(self.carrier.size() < 64, "fiber too large to enumerate");
        (0..1u64 << self.carrier.size()).map(|m| Subset::from_mask(self.carrier, m))
    }
}

/// A first projection `π : X × Y → X`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Projection {
    product: Product,
}

impl Projection {
    pub fn new(x: FinObj, y: FinObj) -> Result<Self> {
        Ok(Projection {
            product: product(x, y)?,
        })
    }

    pub fn from_product(product: Product) -> Self {
        Projection { product }
    }

    /// Recognizes `pi` as the first projection of some `X × Y` with `X` nonempty.
    pub fn recognize(pi: &FinMor) -> Result<Self> {
        let (n, x) = (pi.dom().size(), pi.cod().size());
        if x == 0 || n % x != 0 {
            return Err(DoctrineError::NotAProjection);
        }
        let candidate = Projection::new(FinObj(x), FinObj(n / x))?;
        if candidate.product.fst != *pi {
            return Err(DoctrineError::NotAProjection);
        }
        Ok(candidate)
    }

    pub fn base(&self) -> FinObj {
        self.product.left
    }

    pub fn fiber_obj(&self) -> FinObj {
        self.product.right
    }

    pub fn total(&self) -> FinObj {
        self.product.obj
    }

    pub fn morphism(&self) -> &FinMor {
        &self.product.fst
    }

    pub fn product(&self) -> &Product {
        &self.product
    }

    fn pointed(&self) -> Result<()> {
        for o in [self.base(), self.fiber_obj()] {
            if !o.is_pointed() {
                return Err(DoctrineError::Unpointed(o.size()));
            }
        }
        Ok(())
    }
}

/// `f* s = {a : f(a) ∈ s}`.
pub fn reindex(f: &FinMor, s: &Subset) -> Result<Subset> {
    same_carrier(f.cod(), s)?;
    let mask: Vec<bool> = {
        let mut m = vec![false; f.cod().size()];
        s.members().iter().for_each(|&i| m[i] = true);
        m
    };
    Ok(Subset::from_sorted_unchecked(
        f.dom(),
        f.dom().elements().filter(|&a| mask[f.apply(a)]).collect(),
    ))
}

/// Reindexing computed as the image of the pullback of the inclusion of `s` along `f`.
pub fn reindex_by_pullback(f: &FinMor, s: &Subset) -> Result<Subset> {
    same_carrier(f.cod(), s)?;
    let pb = pullback(f, &s.inclusion())?;
    Ok(Subset::image_of(&pb.p1))
}

/// `Σ_π s`: the image part of the factorization of `π ∘ incl_s`.
pub fn sigma(pi: &Projection, s: &Subset) -> Result<Subset> {
    same_carrier(pi.total(), s)?;
    let along = compose(pi.morphism(), &s.inclusion())?;
    Ok(image_factorize(&along).image)
}

/// `∀_π s = ¬Σ_π¬s`.
pub fn forall(pi: &Projection, s: &Subset) -> Result<Subset> {
    Ok(sigma(pi, &s.complement())?.complement())
}

/// `ε_ψ = π′ ∘ [ψ s_e, s_π ¬m]`, where `π ψ = m e` is the image factorization,
/// `s_e` the chosen section of `e`, `s_π` the basepoint section of `π` and
/// `¬m` the inclusion of the complement of the image.
pub fn epsilon_categorical(pi: &Projection, psi: &Subset) -> Result<FinMor> {
    pi.pointed()?;
    same_carrier(pi.total(), psi)?;
    let incl = psi.inclusion();
    let pi_psi = compose(pi.morphism(), &incl)?;
    let fac = image_factorize(&pi_psi);
    let s_e = section_of_epi(&fac.e)?;
    let s_pi = section_of_projection(pi.product(), BASEPOINT)?;
    let not_m = finset::complement(&fac.image).inclusion();
    let witness = compose(&incl, &s_e)?;
    let fallback = compose(&s_pi, &not_m)?;
    let mediator = copair(&witness, &fallback, &fac.m, &not_m)?;
    Ok(compose(&pi.product().snd, &mediator)?)
}

/// `ε(x)` = least `y` with `⟨x, y⟩ ∈ ψ`, or the basepoint when there is none.
pub fn epsilon_oracle(pi: &Projection, psi: &Subset) -> Result<FinMor> {
    pi.pointed()?;
    same_carrier(pi.total(), psi)?;
    let p = pi.product();
    let table = p
        .left
        .elements()
        .map(|x| {
            p.right
                .elements()
                .find(|&y| psi.contains(p.encode(x, y)))
                .unwrap_or(BASEPOINT)
        })
        .collect();
    Ok(FinMor::new(p.left, p.right, table)?)
}

/// ε on the canonical representative of the subobject. Subsets are
/// canonical by construction, so equal subobjects give identical tables.
pub fn epsilon_extensional(pi: &Projection, s: &Subset) -> Result<FinMor> {
    let canonical = Subset::new(s.carrier(), s.members().iter().copied())?;
    epsilon_categorical(pi, &canonical)
}

/// Both sides of `Σ_π ψ ≤ ⟨id, ε_ψ⟩* ψ`.
pub fn epsilon_sides(pi: &Projection, psi: &Subset) -> Result<(Subset, Subset)> {
    let eps = epsilon_categorical(pi, psi)?;
    let point = pi.product().pair(&FinMor::identity(pi.base()), &eps)?;
    Ok((sigma(pi, psi)?, reindex(&point, psi)?))
}

pub fn check_epsilon_inequality(pi: &Projection, psi: &Subset) -> Result<bool> {
    let (lhs, rhs) = epsilon_sides(pi, psi)?;
    Ok(lhs.leq(&rhs)?)
}

/// A section of an epi `f : X → Y` obtained from the ε morphism of the graph
/// `⟨f, id⟩ : X → Y × X`: pull the graph back along `⟨id, ε⟩`, invert the
/// first leg (an isomorphism since `Σ` of the graph is all of `Y`), and
/// follow the second leg into `X`.
pub fn section_from_epsilon(f: &FinMor) -> Result<FinMor> {
    if !f.is_epi() {
        return Err(DoctrineError::NotEpi);
    }
    let (x, y) = (f.dom(), f.cod());
    let pi = Projection::new(y, x)?;
    let graph = pi.product().pair(f, &FinMor::identity(x))?;
    let psi = Subset::image_of(&graph);
    let eps = epsilon_categorical(&pi, &psi)?;
    let point = pi.product().pair(&FinMor::identity(y), &eps)?;
    let pb = pullback(&point, &graph)?;
    let k = pb.p1.inverse().map_err(|_| DoctrineError::NotEpi)?;
    Ok(compose(&pb.p2, &k)?)
}

/// The ε doctrine `(C_0, Sub)` on pointed finite sets, with basepoint 0.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct EpsilonDoctrine;

impl EpsilonDoctrine {
    pub fn fiber(&self, a: FinObj) -> Result<Fiber> {
        if !a.is_pointed() {
            return Err(DoctrineError::Unpointed(a.size()));
        }
        Ok(Fiber::new(a))
    }

    pub fn reindex(&self, f: &FinMor, s: &Subset) -> Result<Subset> {
        reindex(f, s)
    }

    pub fn sigma(&self, pi: &Projection, s: &Subset) -> Result<Subset> {
        sigma(pi, s)
    }

    pub fn forall(&self, pi: &Projection, s: &Subset) -> Result<Subset> {
        forall(pi, s)
    }

    pub fn epsilon(&self, pi: &Projection, s: &Subset) -> Result<FinMor> {
        epsilon_extensional(pi, s)
    }
}
