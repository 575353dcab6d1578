use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::json;

use epsilon_core::doctrine::{LawConfig, LawSuite, Samples};
use epsilon_core::kernel::{check_derivation, check_nodes, parse_script, Derivation};
use epsilon_core::semantics::{
    audit_soundness, countermodel_search, empty_type_guard, holds as holds_in, interpret_term, AuditError,
    AuditOptions, AuditVerdict, ContextLayout, CountermodelOutcome, Interpretation,
};
use epsilon_core::syntax::{parse_context, parse_document, parse_sequent, parse_term};
use epsilon_core::{Sequent, Theory};

use crate::{Bounds, Command, Failure, ModelArgs, Out, Status};

pub fn run(command: Command, out: &mut Out) -> Result<Status, Failure> {
    match command {
        Command::Check { theory, proofs } => check(&theory, &proofs, out),
        Command::Verify { theory, proofs, report } => {
            let per_node = report.as_deref() == Some("json");
            verify(&theory, &proofs, per_node, out)
        }
        Command::Holds { model, sequent } => holds(&model, &sequent, out),
        Command::Audit { theory, proofs, bounds } => audit(&theory, &proofs, bounds, out),
        Command::Epsilon {
            model,
            formula,
            context,
        } => epsilon(&model, &formula, &context, out),
        Command::Laws {
            max_size,
            seed,
            samples,
        } => laws(max_size, seed, samples, out),
        Command::Countermodel {
            theory,
            sequent,
            bounds,
        } => countermodel(&theory, &sequent, bounds, out),
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn parse_err(path: &Path, e: impl std::fmt::Display) -> Failure {
    Failure::Parse(format!("{}: {e}", path.display()))
}

/// A theory file; model assignments in the same file are ignored here.
fn load_theory(path: &Path) -> Result<Theory, Failure> {
    let src = read(path)?;
    parse_document(&src).map(|d| d.theory).map_err(|e| parse_err(path, e))
}

fn load_model(args: &ModelArgs) -> Result<(Theory, Interpretation), Failure> {
    let theory = args.theory.as_deref().map(load_theory).transpose()?;
    let src = read(&args.model)?;
    Interpretation::parse_model(&src, theory.as_ref()).map_err(|e| parse_err(&args.model, e))
}

fn load_proofs(path: &Path, theory: &Theory) -> Result<Vec<Derivation>, Failure> {
    let src = read(path)?;
    parse_script(&src, &theory.signature).map_err(|e| parse_err(path, e))
}

fn parse_sequent_arg(src: &str, theory: &Theory) -> Result<Sequent, Failure> {
    parse_sequent(src, &theory.signature).map_err(|e| Failure::Parse(format!("sequent: {e}")))
}

fn options(bounds: Bounds) -> Result<AuditOptions, Failure> {
    if bounds.max_carrier == 0 {
        return Err(Failure::Usage("--max-carrier must be at least 1".into()));
    }
    Ok(AuditOptions {
        max_carrier: bounds.max_carrier,
        budget: bounds.budget,
    })
}

/// Refuses models that interpret `Empty` in a non-degenerate way.
fn guard(theory: &Theory, interp: &Interpretation, out: &mut Out) -> Status {
    match empty_type_guard(theory, interp) {
        Ok(()) => Status::Ok,
        Err(report) => {
            out.emit(
                &json!({
                    "verdict": "refused",
                    "offending": report.offending,
                    "argument": report.argument,
                }),
                || format!("refused: {}", report.to_string().trim_end()),
            );
            Status::Failed
        }
    }
}

fn check(theory_path: &Path, proofs: &[PathBuf], out: &mut Out) -> Result<Status, Failure> {
    let src = read(theory_path)?;
    let doc = parse_document(&src).map_err(|e| parse_err(theory_path, e))?;
    let theory = doc.theory;
    let sig = &theory.signature;
    out.emit(
        &json!({
            "file": theory_path.display().to_string(),
            "types": sig.base_types().len(),
            "functions": sig.funs().count(),
            "relations": sig.rels().count(),
            "definitions": theory.definitions.len(),
            "axioms": theory.axioms.len(),
        }),
        || {
            format!(
                "{}: {} type(s), {} function(s), {} relation(s), {} definition(s), {} axiom(s)",
                theory_path.display(),
                sig.base_types().len(),
                sig.funs().count(),
                sig.rels().count(),
                theory.definitions.len(),
                theory.axioms.len()
            )
        },
    );
    let mut status = Status::Ok;
    if !doc.assignments.is_empty() {
        let interp = Interpretation::from_assignments(sig, &doc.assignments).map_err(|e| parse_err(theory_path, e))?;
        status = status.merge(guard(&theory, &interp, out));
        out.note(|| format!("{}: model is well formed", theory_path.display()));
    }
    for path in proofs {
        let ds = load_proofs(path, &theory)?;
        let nodes: usize = ds.iter().map(Derivation::size).sum();
        out.emit(
            &json!({"file": path.display().to_string(), "derivations": ds.len(), "nodes": nodes}),
            || {
                format!(
                    "{}: {} derivation(s), {} node(s), well formed",
                    path.display(),
                    ds.len(),
                    nodes
                )
            },
        );
    }
    Ok(status)
}

#[derive(Serialize)]
struct NodeLine<'a> {
    file: String,
    derivation: usize,
    node: &'a str,
    rule: &'a str,
    sequent: &'a str,
    verdict: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<&'a str>,
}

#[derive(Serialize)]
struct DerivationLine {
    file: String,
    derivation: usize,
    conclusion: String,
    nodes: usize,
    verdict: &'static str,
    violations: Vec<String>,
}

fn verify(theory_path: &Path, proofs: &[PathBuf], per_node: bool, out: &mut Out) -> Result<Status, Failure> {
    let theory = load_theory(theory_path)?;
    let mut status = Status::Ok;
    for path in proofs {
        for (i, d) in load_proofs(path, &theory)?.iter().enumerate() {
            if per_node {
                // node reports are always JSON lines
                let json = out.json;
                out.json = true;
                for v in check_nodes(d, &theory.signature) {
                    out.emit(
                        &NodeLine {
                            file: path.display().to_string(),
                            derivation: i,
                            node: &v.path,
                            rule: v.rule,
                            sequent: &v.sequent,
                            verdict: if v.ok { "ok" } else { "violation" },
                            error: v.error.as_deref(),
                        },
                        String::new,
                    );
                }
                out.json = json;
            }
            let result = check_derivation(d, &theory.signature);
            let violations: Vec<String> = match &result {
                Ok(()) => Vec::new(),
                Err(report) => report.violations.iter().map(ToString::to_string).collect(),
            };
            if result.is_err() {
                status = Status::Failed;
            }
            if per_node {
                continue;
            }
            let line = DerivationLine {
                file: path.display().to_string(),
                derivation: i,
                conclusion: d.conclusion.to_string(),
                nodes: d.size(),
                verdict: if violations.is_empty() { "ok" } else { "violation" },
                violations,
            };
            out.emit(&line, || {
                let mut text = format!(
                    "{}#{}: {} ({} nodes): {}",
                    line.file, line.derivation, line.verdict, line.nodes, line.conclusion
                );
                for v in &line.violations {
                    text.push_str("\n  ");
                    text.push_str(v);
                }
                text
            });
        }
    }
    Ok(status)
}

fn holds(args: &ModelArgs, sequent: &str, out: &mut Out) -> Result<Status, Failure> {
    let (theory, interp) = load_model(args)?;
    if guard(&theory, &interp, out) != Status::Ok {
        return Ok(Status::Failed);
    }
    let seq = parse_sequent_arg(sequent, &theory)?;
    let ok = holds_in(&seq, &interp).map_err(|e| Failure::Parse(format!("sequent: {e}")))?;
    out.emit(&json!({"sequent": seq.to_string(), "holds": ok}), || {
        format!("{}: {}", if ok { "holds" } else { "fails" }, seq)
    });
    Ok(if ok { Status::Ok } else { Status::Failed })
}

fn audit(theory_path: &Path, proofs: &[PathBuf], bounds: Bounds, out: &mut Out) -> Result<Status, Failure> {
    let theory = load_theory(theory_path)?;
    let opts = options(bounds)?;
    let mut status = Status::Ok;
    for path in proofs {
        for (i, d) in load_proofs(path, &theory)?.iter().enumerate() {
            let file = path.display().to_string();
            match audit_soundness(d, &theory.signature, &opts) {
                Ok(report) => {
                    status = status.merge(match report.verdict {
                        AuditVerdict::Pass => Status::Ok,
                        AuditVerdict::Violation => Status::Failed,
                        AuditVerdict::Truncated => Status::Truncated,
                    });
                    out.emit(
                        &json!({"file": file, "derivation": i, "report": report}),
                        || {
                            let verdict = match report.verdict {
                                AuditVerdict::Pass => "pass",
                                AuditVerdict::Violation => "VIOLATION",
                                AuditVerdict::Truncated => "truncated",
                            };
                            let mut text = format!(
                                "{file}#{i}: {verdict}: {} interpretation(s) of [{}] with carriers <= {}, {} sequent(s) each",
                                report.interpretations,
                                report.symbols.join(", "),
                                report.max_carrier,
                                report.sequents
                            );
                            for v in &report.violations {
                                text.push_str(&format!("\n  fails: {}\n", v.sequent));
                                for l in v.model.lines() {
                                    text.push_str(&format!("    {l}\n"));
                                }
                            }
                            text.trim_end().to_string()
                        },
                    );
                }
                Err(AuditError::Rejected(report)) => {
                    status = Status::Failed;
                    let violations: Vec<String> = report.violations.iter().map(ToString::to_string).collect();
                    out.emit(&json!({"file": file, "derivation": i, "rejected": violations}), || {
                        format!("{file}#{i}: rejected by the checker\n  {}", violations.join("\n  "))
                    });
                }
                Err(AuditError::Semantics(e)) => {
                    status = Status::Failed;
                    out.emit(&json!({"file": file, "derivation": i, "error": e.to_string()}), || {
                        format!("{file}#{i}: {e}")
                    });
                }
            }
        }
    }
    Ok(status)
}

fn epsilon(args: &ModelArgs, term: &str, context: &str, out: &mut Out) -> Result<Status, Failure> {
    let (theory, interp) = load_model(args)?;
    if guard(&theory, &interp, out) != Status::Ok {
        return Ok(Status::Failed);
    }
    let sig = &theory.signature;
    let ctx = parse_context(context, sig).map_err(|e| Failure::Parse(format!("context: {e}")))?;
    let (t, ty) = parse_term(term, &ctx, sig).map_err(|e| Failure::Parse(format!("term: {e}")))?;
    let layout = ContextLayout::new(&ctx, &interp).map_err(|e| Failure::Parse(e.to_string()))?;
    let table = interpret_term(&layout, &t, &interp).map_err(|e| Failure::Parse(e.to_string()))?;
    let names: Vec<String> = ctx.vars().iter().map(|(n, _)| n.clone()).collect();
    let rows: Vec<(Vec<usize>, usize)> = (0..layout.carrier().size())
        .map(|g| (layout.decode(g), table.apply(g)))
        .collect();
    out.emit(
        &json!({
            "term": t.to_string(),
            "type": ty.to_string(),
            "context": names,
            "domain": table.dom().size(),
            "codomain": table.cod().size(),
            "table": table.table(),
        }),
        || {
            let mut text = format!("{t} : {} -> {}", table.dom(), table.cod());
            for (vals, v) in &rows {
                let lhs: Vec<String> = names.iter().zip(vals).map(|(n, x)| format!("{n}={x}")).collect();
                let lhs = if lhs.is_empty() {
                    "*".to_string()
                } else {
                    lhs.join(", ")
                };
                text.push_str(&format!("\n  {lhs} |-> {v}"));
            }
            text
        },
    );
    Ok(Status::Ok)
}

fn laws(max_size: usize, seed: u64, samples: usize, out: &mut Out) -> Result<Status, Failure> {
    if max_size == 0 {
        return Err(Failure::Usage("--max-size must be at least 1".into()));
    }
    let suite = LawSuite::new(LawConfig {
        max_size,
        samples: Samples { count: samples, seed },
    });
    let (mut total, mut failed, mut sampled) = (0usize, 0usize, 0usize);
    suite.run(&mut |v| {
        total += 1;
        if !v.passed() {
            failed += 1;
        }
        if !v.exhaustive {
            sampled += 1;
        }
        out.emit(&v, || {
            let mut text = format!(
                "{} {} [{}]: {} check(s){}",
                if v.passed() { "pass" } else { "FAIL" },
                v.law,
                v.instance,
                v.checked,
                if v.exhaustive { "" } else { ", sampled" }
            );
            if let Some(c) = &v.counterexample {
                text.push_str(&format!("\n  counterexample: {c}"));
            }
            text
        });
    });
    out.note(|| format!("{total} instance(s), {failed} failure(s), {sampled} sampled"));
    Ok(if failed > 0 { Status::Failed } else { Status::Ok })
}

fn countermodel(theory_path: &Path, sequent: &str, bounds: Bounds, out: &mut Out) -> Result<Status, Failure> {
    let theory = load_theory(theory_path)?;
    let opts = options(bounds)?;
    let seq = parse_sequent_arg(sequent, &theory)?;
    let outcome = countermodel_search(&seq, &theory.signature, &opts).map_err(|e| Failure::Parse(e.to_string()))?;
    let text = seq.to_string();
    Ok(match outcome {
        CountermodelOutcome::Found {
            index,
            model,
            signature,
        } => {
            let source = model.to_model_source(&signature);
            out.emit(
                &json!({"sequent": text, "verdict": "found", "index": index, "model": model.to_json(&signature)}),
                || format!("countermodel #{index} for {text}:\n{}", source.trim_end()),
            );
            Status::Failed
        }
        CountermodelOutcome::None { searched } => {
            out.emit(
                &json!({"sequent": text, "verdict": "none", "searched": searched}),
                || format!("no countermodel among {searched} interpretation(s) for {text}"),
            );
            Status::Ok
        }
        CountermodelOutcome::Truncated { searched } => {
            out.emit(
                &json!({"sequent": text, "verdict": "truncated", "searched": searched}),
                || format!("budget exhausted after {searched} interpretation(s) for {text}"),
            );
            Status::Truncated
        }
    })
}
