//! Model files: `carrier`, `point`, `fun` and `rel` assignment lines, which
//! may follow the declarations they interpret in the same file. A JSON mirror
//! carries the same data.

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{Interpretation, SemanticsError};
use crate::doctrine::BASEPOINT;
use crate::finset::{FinMor, FinObj, Subset};
use crate::syntax::{parse_document, Assignment, Pos, Signature, SyntaxError, Theory};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
    #[error("{line}:{column}: {message}")]
    Invalid {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("model file declares symbols and a separate theory was also given")]
    TwoTheories,
    #[error("invalid JSON model: {0}")]
    Json(String),
}

fn invalid(pos: Pos, message: impl Into<String>) -> ModelError {
    ModelError::Invalid {
        line: pos.line,
        column: pos.column,
        message: message.into(),
    }
}

/// The JSON form of a model; field order follows the signature.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelJson {
    pub carriers: IndexMap<String, usize>,
    #[serde(default)]
    pub points: IndexMap<String, usize>,
    #[serde(default)]
    pub funs: IndexMap<String, Vec<usize>>,
    #[serde(default)]
    pub rels: IndexMap<String, Vec<Vec<usize>>>,
}

fn encode(tuple: &[usize], radices: &[FinObj]) -> Option<usize> {
    if tuple.len() != radices.len() {
        return None;
    }
    tuple
        .iter()
        .zip(radices)
        .try_fold(0usize, |acc, (&v, r)| (v < r.size()).then(|| acc * r.size() + v))
}

fn decode(mut code: usize, radices: &[FinObj]) -> Vec<usize> {
    let mut out: Vec<usize> = radices
        .iter()
        .rev()
        .map(|r| {
            let v = code % r.size();
            code /= r.size();
            v
        })
        .collect();
    out.reverse();
    out
}

impl Interpretation {
    /// Builds an interpretation of `sig` from assignment lines. Every symbol
    /// must be assigned and every basepoint, if given, must be 0.
    pub fn from_assignments(sig: &Signature, assignments: &[(Assignment, Pos)]) -> Result<Self, ModelError> {
        let mut interp = Interpretation::new();
        let mut seen = std::collections::HashSet::new();
        for (a, pos) in assignments {
            let name = match a {
                Assignment::Carrier { ty, .. } | Assignment::Point { ty, .. } => ty,
                Assignment::Fun { name, .. } | Assignment::Rel { name, .. } => name,
            };
            let key = (std::mem::discriminant(a), name.clone());
            if !seen.insert(key) {
                return Err(invalid(*pos, format!("`{name}` is assigned twice")));
            }
        }
        for (a, pos) in assignments {
            match a {
                Assignment::Carrier { ty, size } => {
                    if !sig.has_base_type(ty) {
                        return Err(invalid(*pos, format!("`{ty}` is not a declared base type")));
                    }
                    if *size == 0 {
                        return Err(invalid(*pos, format!("carrier of `{ty}` must be nonempty")));
                    }
                    interp
                        .set_carrier(ty.clone(), *size)
                        .map_err(|e| invalid(*pos, e.to_string()))?;
                }
                Assignment::Point { ty, index } => {
                    if !sig.has_base_type(ty) {
                        return Err(invalid(*pos, format!("`{ty}` is not a declared base type")));
                    }
                    if *index != BASEPOINT {
                        return Err(invalid(
                            *pos,
                            format!("the basepoint of `{ty}` is fixed at {BASEPOINT}"),
                        ));
                    }
                }
                _ => {}
            }
        }
        for b in sig.base_types() {
            if interp.carrier(b).is_none() {
                return Err(invalid(
                    Pos { line: 1, column: 1 },
                    format!("no carrier assigned to `{b}`"),
                ));
            }
        }
        for (a, pos) in assignments {
            let at = |e: SemanticsError| invalid(*pos, e.to_string());
            match a {
                Assignment::Fun { name, table } => {
                    if sig.fun(name).is_none() {
                        return Err(invalid(*pos, format!("`{name}` is not a declared function symbol")));
                    }
                    let (dom, cod) = interp.fun_shape(sig, name).map_err(at)?;
                    let f =
                        FinMor::new(dom, cod, table.clone()).map_err(|e| invalid(*pos, format!("`{name}`: {e}")))?;
                    interp.set_fun(sig, name.clone(), f).map_err(at)?;
                }
                Assignment::Rel { name, tuples } => {
                    if sig.rel(name).is_none() {
                        return Err(invalid(*pos, format!("`{name}` is not a declared relation symbol")));
                    }
                    let radices = interp.arg_carriers(sig, name).map_err(at)?;
                    let carrier = interp.rel_carrier(sig, name).map_err(at)?;
                    let members = tuples
                        .iter()
                        .map(|t| {
                            encode(t, &radices).ok_or_else(|| {
                                invalid(
                                    *pos,
                                    format!("`{name}`: tuple {t:?} does not fit the argument carriers"),
                                )
                            })
                        })
                        .collect::<Result<Vec<_>, _>>()?;
                    let s = Subset::new(carrier, members).map_err(|e| invalid(*pos, e.to_string()))?;
                    interp.set_rel(sig, name.clone(), s).map_err(at)?;
                }
                _ => {}
            }
        }
        interp
            .validate(sig)
            .map_err(|e| invalid(Pos { line: 1, column: 1 }, e.to_string()))?;
        Ok(interp)
    }

    /// Parses a model file. Declarations come from the file itself, or from
    /// `theory` when the file holds assignments only.
    pub fn parse_model(src: &str, theory: Option<&Theory>) -> Result<(Theory, Interpretation), ModelError> {
        let doc = parse_document(src)?;
        let declares = !doc.theory.signature.base_types().is_empty()
            || doc.theory.signature.funs().next().is_some()
            || doc.theory.signature.rels().next().is_some();
        let theory = match (declares, theory) {
            (true, Some(_)) => return Err(ModelError::TwoTheories),
            (true, None) | (false, None) => doc.theory,
            (false, Some(t)) => t.clone(),
        };
        let interp = Interpretation::from_assignments(&theory.signature, &doc.assignments)?;
        Ok((theory, interp))
    }

    /// Assignment lines for every symbol of `sig`, in declaration order.
    pub fn to_model_source(&self, sig: &Signature) -> String {
        let mut out = String::new();
        let j = self.to_json(sig);
        for (t, n) in &j.carriers {
            out.push_str(&format!("carrier {t} = {n};\n"));
        }
        for (t, p) in &j.points {
            out.push_str(&format!("point {t} = {p};\n"));
        }
        for (f, table) in &j.funs {
            let vals: Vec<String> = table.iter().map(|v| v.to_string()).collect();
            out.push_str(&format!("fun {f} = [{}];\n", vals.join(", ")));
        }
        for (r, tuples) in &j.rels {
            let ts: Vec<String> = tuples
                .iter()
                .map(|t| format!("({})", t.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(", ")))
                .collect();
            out.push_str(&format!("rel {r} = {{{}}};\n", ts.join(", ")));
        }
        out
    }

    pub fn to_json(&self, sig: &Signature) -> ModelJson {
        let mut j = ModelJson::default();
        for b in sig.base_types() {
            if let Some(c) = self.carrier(b) {
                j.carriers.insert(b.clone(), c.size());
                j.points.insert(b.clone(), BASEPOINT);
            }
        }
        for (f, _) in sig.funs() {
            if let Some(m) = self.fun(f) {
                j.funs.insert(f.to_string(), m.table().to_vec());
            }
        }
        for (r, _) in sig.rels() {
            if let (Some(s), Ok(radices)) = (self.rel(r), self.arg_carriers(sig, r)) {
                j.rels.insert(
                    r.to_string(),
                    s.members().iter().map(|&m| decode(m, &radices)).collect(),
                );
            }
        }
        j
    }

    pub fn from_json(sig: &Signature, src: &str) -> Result<Self, ModelError> {
        let j: ModelJson = serde_json::from_str(src).map_err(|e| ModelError::Json(e.to_string()))?;
        let pos = Pos { line: 1, column: 1 };
        let mut assignments = Vec::new();
        for (ty, &size) in &j.carriers {
            assignments.push((Assignment::Carrier { ty: ty.clone(), size }, pos));
        }
        for (ty, &index) in &j.points {
            assignments.push((Assignment::Point { ty: ty.clone(), index }, pos));
        }
        for (name, table) in &j.funs {
            assignments.push((
                Assignment::Fun {
                    name: name.clone(),
                    table: table.clone(),
                },
                pos,
            ));
        }
        for (name, tuples) in &j.rels {
            assignments.push((
                Assignment::Rel {
                    name: name.clone(),
                    tuples: tuples.clone(),
                },
                pos,
            ));
        }
        Interpretation::from_assignments(sig, &assignments)
    }
}
