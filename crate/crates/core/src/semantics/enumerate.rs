//! Bounded enumeration of interpretations, the soundness audit and
//! countermodel search.
//!
//! Interpretations are listed lexicographically: first by the carrier sizes
//! of the base types in declaration order, then by the table codes of the
//! symbols in declaration order. A function table is read as a number in
//! base `|cod|` and a subset as a bit mask, element 0 least significant.

use std::collections::HashSet;

use serde::Serialize;
use thiserror::Error;

use super::{holds, interpret_type, Interpretation, Result, SemanticsError};
use crate::finset::{FinMor, FinObj, Subset};
use crate::kernel::{check_derivation, CheckReport, Derivation};
use crate::syntax::{wellform_sequent, Formula, Sequent, Signature, Term, TypeExpr};

pub const DEFAULT_BUDGET: u64 = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AuditOptions {
    /// Largest carrier tried for each base type.
    pub max_carrier: usize,
    /// Number of interpretations after which enumeration stops.
    pub budget: u64,
}

impl Default for AuditOptions {
    fn default() -> Self {
        AuditOptions {
            max_carrier: 3,
            budget: DEFAULT_BUDGET,
        }
    }
}

enum Slot {
    Fun { name: String, dom: FinObj, cod: FinObj },
    Rel { name: String, carrier: FinObj },
}

impl Slot {
    /// Number of possible values, saturating.
    fn count(&self) -> u128 {
        match self {
            Slot::Fun { dom, cod, .. } => u32::try_from(dom.size())
                .ok()
                .and_then(|e| (cod.size() as u128).checked_pow(e))
                .unwrap_or(u128::MAX),
            Slot::Rel { carrier, .. } => u32::try_from(carrier.size())
                .ok()
                .and_then(|e| 1u128.checked_shl(e))
                .unwrap_or(u128::MAX),
        }
    }

    fn install(&self, code: u128, sig: &Signature, interp: &mut Interpretation) -> Result<()> {
        match self {
            Slot::Fun { name, dom, cod } => {
                let base = cod.size() as u128;
                let mut c = code;
                let table = dom
                    .elements()
                    .map(|_| {
                        let d = c % base;
                        c /= base;
                        d as usize
                    })
                    .collect();
                interp.set_fun(sig, name.clone(), FinMor::new(*dom, *cod, table)?)
            }
            Slot::Rel { name, carrier } => {
                let members = carrier.elements().filter(|&i| i < 128 && code >> i & 1 == 1);
                interp.set_rel(sig, name.clone(), Subset::new(*carrier, members)?)
            }
        }
    }
}

/// All interpretations of a signature with carriers up to a bound.
///
/// A signature that mentions `Empty` admits only the degenerate
/// interpretation, so its carriers are all fixed at 1.
pub struct ModelSpace {
    sig: Signature,
    max_carrier: usize,
    degenerate: bool,
}

impl ModelSpace {
    pub fn new(sig: Signature, max_carrier: usize, mentions_empty: bool) -> Self {
        let degenerate = mentions_empty || sig.mentions_empty();
        ModelSpace {
            sig,
            max_carrier: if degenerate { 1 } else { max_carrier.max(1) },
            degenerate,
        }
    }

    pub fn signature(&self) -> &Signature {
        &self.sig
    }

    pub fn is_degenerate(&self) -> bool {
        self.degenerate
    }

    /// Visits interpretations in order until `visit` returns `false`.
    pub fn for_each(&self, mut visit: impl FnMut(Interpretation) -> Result<bool>) -> Result<()> {
        let bases = self.sig.base_types();
        let mut sizes = vec![1usize; bases.len()];
        loop {
            let mut base = Interpretation::new();
            for (b, &n) in bases.iter().zip(&sizes) {
                base.set_carrier(b.clone(), n)?;
            }
            if !self.tables(&base, &mut visit)? {
                return Ok(());
            }
            // next carrier assignment, last type fastest
            let Some(k) = (0..sizes.len()).rev().find(|&k| sizes[k] < self.max_carrier) else {
                return Ok(());
            };
            sizes[k] += 1;
            sizes[k + 1..].iter_mut().for_each(|s| *s = 1);
        }
    }

    fn tables(&self, base: &Interpretation, visit: &mut impl FnMut(Interpretation) -> Result<bool>) -> Result<bool> {
        let mut slots = Vec::new();
        for (f, d) in self.sig.funs() {
            let (dom, cod) = base.fun_shape(&self.sig, f)?;
            debug_assert_eq!(cod, interpret_type(&d.result, base)?);
            slots.push(Slot::Fun {
                name: f.to_string(),
                dom,
                cod,
            });
        }
        for (r, _) in self.sig.rels() {
            slots.push(Slot::Rel {
                name: r.to_string(),
                carrier: base.rel_carrier(&self.sig, r)?,
            });
        }
        let limits: Vec<u128> = slots.iter().map(Slot::count).collect();
        if limits.contains(&0) {
            return Ok(true);
        }
        let mut codes = vec![0u128; slots.len()];
        loop {
            let mut interp = base.clone();
            for (slot, &code) in slots.iter().zip(&codes) {
                slot.install(code, &self.sig, &mut interp)?;
            }
            if !visit(interp)? {
                return Ok(false);
            }
            let Some(k) = (0..codes.len()).rev().find(|&k| codes[k] + 1 < limits[k]) else {
                return Ok(true);
            };
            codes[k] += 1;
            codes[k + 1..].iter_mut().for_each(|c| *c = 0);
        }
    }
}

fn collect_term(t: &Term, symbols: &mut HashSet<String>, types: &mut Vec<TypeExpr>) {
    match t {
        Term::Var(_, ty) => types.push(ty.clone()),
        Term::App(f, args) => {
            symbols.insert(f.clone());
            args.iter().for_each(|a| collect_term(a, symbols, types));
        }
        Term::Epsilon(_, ty, body) => {
            types.push(ty.clone());
            collect_formula(body, symbols, types);
        }
    }
}

fn collect_formula(phi: &Formula, symbols: &mut HashSet<String>, types: &mut Vec<TypeExpr>) {
    match phi {
        Formula::Top | Formula::Bot => {}
        Formula::Rel(r, args) => {
            symbols.insert(r.clone());
            args.iter().for_each(|a| collect_term(a, symbols, types));
        }
        Formula::Eq(a, b) => {
            collect_term(a, symbols, types);
            collect_term(b, symbols, types);
        }
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => {
            collect_formula(a, symbols, types);
            collect_formula(b, symbols, types);
        }
        Formula::Not(a) => collect_formula(a, symbols, types),
        Formula::Exists(_, ty, body) | Formula::Forall(_, ty, body) => {
            types.push(ty.clone());
            collect_formula(body, symbols, types);
        }
    }
}

/// The part of `sig` that the sequents mention, and whether they mention `Empty`.
fn fragment<'a>(sig: &Signature, seqs: impl IntoIterator<Item = &'a Sequent>) -> (Signature, bool) {
    let (mut symbols, mut types) = (HashSet::new(), Vec::new());
    for s in seqs {
        types.extend(s.context.vars().iter().map(|(_, t)| t.clone()));
        s.hypotheses
            .iter()
            .for_each(|h| collect_formula(h, &mut symbols, &mut types));
        collect_formula(&s.conclusion, &mut symbols, &mut types);
    }
    let empty = types.iter().any(TypeExpr::mentions_empty);
    (sig.restrict(&symbols, &types), empty)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum AuditVerdict {
    Pass,
    Violation,
    Truncated,
}

/// A node conclusion that fails in some interpretation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AuditViolation {
    pub sequent: String,
    pub model: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AuditReport {
    pub verdict: AuditVerdict,
    /// Interpretations evaluated.
    pub interpretations: u64,
    /// Distinct node conclusions checked in each interpretation.
    pub sequents: usize,
    pub symbols: Vec<String>,
    pub max_carrier: usize,
    pub budget: u64,
    pub truncated: bool,
    pub violation_count: u64,
    /// The first few violations.
    pub violations: Vec<AuditViolation>,
}

impl AuditReport {
    pub fn passed(&self) -> bool {
        self.verdict == AuditVerdict::Pass
    }
}

#[derive(Debug, Error)]
pub enum AuditError {
    #[error("the derivation does not check: {0}")]
    Rejected(#[from] CheckReport),
    #[error(transparent)]
    Semantics(#[from] SemanticsError),
}

const KEPT_VIOLATIONS: usize = 10;

/// Checks `d`, then evaluates every node conclusion in every interpretation
/// of the symbols the derivation mentions, with carriers up to the bound.
pub fn audit_soundness(
    d: &Derivation,
    sig: &Signature,
    opts: &AuditOptions,
) -> std::result::Result<AuditReport, AuditError> {
    check_derivation(d, sig)?;
    let mut seqs: Vec<&Sequent> = Vec::new();
    for (_, node) in d.nodes() {
        if !seqs.contains(&&node.conclusion) {
            seqs.push(&node.conclusion);
        }
    }
    let (fragment, empty) = fragment(sig, seqs.iter().copied());
    let space = ModelSpace::new(fragment, opts.max_carrier, empty);
    let (mut count, mut truncated, mut violation_count) = (0u64, false, 0u64);
    let mut violations = Vec::new();
    space.for_each(|interp| {
        if count == opts.budget {
            truncated = true;
            return Ok(false);
        }
        count += 1;
        for s in &seqs {
            if !holds(s, &interp)? {
                violation_count += 1;
                if violations.len() < KEPT_VIOLATIONS {
                    violations.push(AuditViolation {
                        sequent: s.to_string(),
                        model: interp.to_model_source(space.signature()),
                    });
                }
            }
        }
        Ok(true)
    })?;
    let verdict = if violation_count > 0 {
        AuditVerdict::Violation
    } else if truncated {
        AuditVerdict::Truncated
    } else {
        AuditVerdict::Pass
    };
    Ok(AuditReport {
        verdict,
        interpretations: count,
        sequents: seqs.len(),
        symbols: space
            .signature()
            .funs()
            .map(|(f, _)| f.to_string())
            .chain(space.signature().rels().map(|(r, _)| r.to_string()))
            .collect(),
        max_carrier: opts.max_carrier,
        budget: opts.budget,
        truncated,
        violation_count,
        violations,
    })
}

// returned once per search, so the size of `Found` does not matter
#[allow(clippy::large_enum_variant)]
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CountermodelOutcome {
    /// The first interpretation, in enumeration order, that refutes the
    /// sequent. `index` counts from 0 and `signature` is the fragment the
    /// model interprets.
    Found {
        index: u64,
        model: Interpretation,
        signature: Signature,
    },
    /// Every interpretation within the bound satisfies the sequent.
    None { searched: u64 },
    /// The budget ran out first.
    Truncated { searched: u64 },
}

pub fn countermodel_search(seq: &Sequent, sig: &Signature, opts: &AuditOptions) -> Result<CountermodelOutcome> {
    wellform_sequent(seq, sig)?;
    let (fragment, empty) = fragment(sig, [seq]);
    let space = ModelSpace::new(fragment, opts.max_carrier, empty);
    let mut count = 0u64;
    let mut outcome = None;
    space.for_each(|interp| {
        if count == opts.budget {
            outcome = Some(CountermodelOutcome::Truncated { searched: count });
            return Ok(false);
        }
        count += 1;
        if !holds(seq, &interp)? {
            outcome = Some(CountermodelOutcome::Found {
                index: count - 1,
                model: interp,
                signature: space.signature().clone(),
            });
            return Ok(false);
        }
        Ok(true)
    })?;
    Ok(outcome.unwrap_or(CountermodelOutcome::None { searched: count }))
}
