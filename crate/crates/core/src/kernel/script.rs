//! Proof scripts: S-expressions of the form
//!
//! ```text
//! (rule-name "arg" … (premise …) … "sequent")
//! ```
//!
//! String atoms are taken verbatim (there are no escapes, so `/\` and `\/`
//! need no quoting) and `;` starts a comment. The witness of `exists-i` and
//! `forall-e` is a term in the conclusion context; `eq-subst` takes the
//! distinguished variable as `"z:A"` followed by the target formula.

use thiserror::Error;

use super::{Derivation, Rule};
use crate::syntax::{parse_formula, parse_sequent, parse_term, parse_var_decl, Pos, Signature, SyntaxError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScriptError {
    #[error("{line}:{column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{line}:{column}: in string: {error}")]
    Syntax {
        line: usize,
        column: usize,
        error: SyntaxError,
    },
}

impl ScriptError {
    fn at(pos: Pos, message: impl Into<String>) -> Self {
        ScriptError::Parse {
            line: pos.line,
            column: pos.column,
            message: message.into(),
        }
    }
}

#[derive(Debug)]
enum Sexp {
    Atom(String, Pos),
    Str(String, Pos),
    List(Vec<Sexp>, Pos),
}

impl Sexp {
    fn pos(&self) -> Pos {
        match self {
            Sexp::Atom(_, p) | Sexp::Str(_, p) | Sexp::List(_, p) => *p,
        }
    }
}

struct Reader<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    pos: Pos,
}

impl Reader<'_> {
    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.pos.line += 1;
            self.pos.column = 1;
        } else {
            self.pos.column += 1;
        }
        Some(c)
    }

    fn skip_trivia(&mut self) {
        while let Some(&c) = self.chars.peek() {
            if c == ';' {
                while self.chars.peek().is_some_and(|&c| c != '\n') {
                    self.bump();
                }
            } else if c.is_whitespace() {
                self.bump();
            } else {
                break;
            }
        }
    }

    /// The next datum, or `None` at end of input.
    fn datum(&mut self) -> Result<Option<Sexp>, ScriptError> {
        self.skip_trivia();
        let start = self.pos;
        let Some(&c) = self.chars.peek() else {
            return Ok(None);
        };
        match c {
            '(' => {
                self.bump();
                let mut items = Vec::new();
                loop {
                    self.skip_trivia();
                    match self.chars.peek() {
                        Some(')') => {
                            self.bump();
                            return Ok(Some(Sexp::List(items, start)));
                        }
                        None => return Err(ScriptError::at(start, "unclosed `(`")),
                        Some(_) => items.extend(self.datum()?),
                    }
                }
            }
            ')' => Err(ScriptError::at(start, "unexpected `)`")),
            '"' => {
                self.bump();
                let mut s = String::new();
                loop {
                    match self.bump() {
                        Some('"') => return Ok(Some(Sexp::Str(s, start))),
                        Some(c) => s.push(c),
                        None => return Err(ScriptError::at(start, "unterminated string")),
                    }
                }
            }
            _ => {
                let mut s = String::new();
                while let Some(&c) = self.chars.peek() {
                    if c.is_whitespace() || matches!(c, '(' | ')' | '"' | ';') {
                        break;
                    }
                    s.push(c);
                    self.bump();
                }
                Ok(Some(Sexp::Atom(s, start)))
            }
        }
    }
}

fn syntax_at(pos: Pos) -> impl Fn(SyntaxError) -> ScriptError {
    move |error| ScriptError::Syntax {
        line: pos.line,
        column: pos.column,
        error,
    }
}

fn derivation(e: &Sexp, sig: &Signature) -> Result<Derivation, ScriptError> {
    let Sexp::List(items, pos) = e else {
        return Err(ScriptError::at(e.pos(), "expected a parenthesized derivation"));
    };
    let (head, rest) = match items.split_first() {
        Some((Sexp::Atom(name, _), rest)) => (name.as_str(), rest),
        _ => return Err(ScriptError::at(*pos, "a derivation starts with a rule name")),
    };
    let (seq_src, seq_pos, body) = match rest.split_last() {
        Some((Sexp::Str(s, p), body)) => (s, *p, body),
        _ => return Err(ScriptError::at(*pos, "a derivation ends with its sequent as a string")),
    };
    let split = body
        .iter()
        .position(|s| !matches!(s, Sexp::Str(..)))
        .unwrap_or(body.len());
    let (args, premises) = body.split_at(split);
    let args: Vec<(&str, Pos)> = args
        .iter()
        .map(|a| match a {
            Sexp::Str(s, p) => (s.as_str(), *p),
            _ => unreachable!("arguments are strings"),
        })
        .collect();
    let premises = premises
        .iter()
        .map(|p| derivation(p, sig))
        .collect::<Result<Vec<_>, _>>()?;
    let conclusion = parse_sequent(seq_src, sig).map_err(syntax_at(seq_pos))?;
    let ctx = &conclusion.context;
    let want_args = |n: usize| {
        if args.len() == n {
            Ok(())
        } else {
            Err(ScriptError::at(
                *pos,
                format!("`{head}` takes {n} string argument(s), found {}", args.len()),
            ))
        }
    };
    let rule = match head {
        "exists-i" | "forall-e" => {
            want_args(1)?;
            let (witness, _) = parse_term(args[0].0, ctx, sig).map_err(syntax_at(args[0].1))?;
            if head == "exists-i" {
                Rule::ExistsI { witness }
            } else {
                Rule::ForallE { witness }
            }
        }
        "eq-subst" => {
            want_args(2)?;
            let (var, var_type) = parse_var_decl(args[0].0, sig).map_err(syntax_at(args[0].1))?;
            let ext = ctx
                .extended(var.clone(), var_type.clone())
                .map_err(syntax_at(args[0].1))?;
            let target = parse_formula(args[1].0, &ext, sig).map_err(syntax_at(args[1].1))?;
            Rule::EqSubst { target, var, var_type }
        }
        _ => {
            want_args(0)?;
            simple_rule(head).ok_or_else(|| ScriptError::at(*pos, format!("unknown rule `{head}`")))?
        }
    };
    Ok(Derivation::new(rule, premises, conclusion))
}

fn simple_rule(name: &str) -> Option<Rule> {
    Some(match name {
        "axiom" => Rule::Axiom,
        "weaken" => Rule::Weaken,
        "exchange" => Rule::Exchange,
        "cut" => Rule::Cut,
        "and-i" => Rule::AndI,
        "and-e1" => Rule::AndE1,
        "and-e2" => Rule::AndE2,
        "or-i1" => Rule::OrI1,
        "or-i2" => Rule::OrI2,
        "or-e" => Rule::OrE,
        "imp-i" => Rule::ImpI,
        "imp-e" => Rule::ImpE,
        "not-i" => Rule::NotI,
        "not-e" => Rule::NotE,
        "top-i" => Rule::TopI,
        "bot-e" => Rule::BotE,
        "lem" => Rule::Lem,
        "exists-e" => Rule::ExistsE,
        "forall-i" => Rule::ForallI,
        "eq-refl" => Rule::EqRefl,
        "eps-i" => Rule::EpsI,
        "eps-ex" => Rule::EpsEx,
        _ => return None,
    })
}

/// Parses every top-level derivation in `src` against `sig`.
pub fn parse_script(src: &str, sig: &Signature) -> Result<Vec<Derivation>, ScriptError> {
    let mut reader = Reader {
        chars: src.chars().peekable(),
        pos: Pos { line: 1, column: 1 },
    };
    let mut out = Vec::new();
    while let Some(e) = reader.datum()? {
        out.push(derivation(&e, sig)?);
    }
    Ok(out)
}

/// Renders `d` in script syntax, one node per line.
pub fn print_derivation(d: &Derivation) -> String {
    let mut out = String::new();
    write_node(d, 0, &mut out);
    out
}

/// Renders several derivations separated by blank lines.
pub fn print_script(ds: &[Derivation]) -> String {
    ds.iter().map(print_derivation).collect::<Vec<_>>().join("\n\n") + "\n"
}

fn write_node(d: &Derivation, depth: usize, out: &mut String) {
    out.push('(');
    out.push_str(d.rule.name());
    match &d.rule {
        Rule::ExistsI { witness } | Rule::ForallE { witness } => out.push_str(&format!(" \"{witness}\"")),
        Rule::EqSubst { target, var, var_type } => out.push_str(&format!(" \"{var}:{var_type}\" \"{target}\"")),
        _ => {}
    }
    for p in &d.premises {
        out.push('\n');
        out.push_str(&"  ".repeat(depth + 1));
        write_node(p, depth + 1, out);
    }
    if d.premises.is_empty() {
        out.push(' ');
    } else {
        out.push('\n');
        out.push_str(&"  ".repeat(depth + 1));
    }
    out.push_str(&format!("\"{}\")", d.conclusion));
}
