//! Lexer and recursive-descent parser for theory files, sequents, terms and
//! the assignment lines of model files.

use super::typing::{typecheck_term, wellform_formula, wellform_sequent};
use super::{Context, Definition, Formula, Sequent, Signature, SyntaxError, Term, Theory, TypeExpr};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Pos {
    pub line: usize,
    pub column: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Num(usize),
    Semi,
    Colon,
    Comma,
    LParen,
    RParen,
    LBrack,
    RBrack,
    LBrace,
    RBrace,
    Dot,
    Equals,
    Define,
    Bar,
    Turnstile,
    Wedge,
    Vee,
    Arrow,
    Tilde,
    Star,
    Plus,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Num(n) => format!("`{n}`"),
            Tok::Eof => "end of input".to_string(),
            other => format!("`{}`", other.symbol()),
        }
    }

    fn symbol(&self) -> &'static str {
        match self {
            Tok::Semi => ";",
            Tok::Colon => ":",
            Tok::Comma => ",",
            Tok::LParen => "(",
            Tok::RParen => ")",
            Tok::LBrack => "[",
            Tok::RBrack => "]",
            Tok::LBrace => "{",
            Tok::RBrace => "}",
            Tok::Dot => ".",
            Tok::Equals => "=",
            Tok::Define => ":=",
            Tok::Bar => "|",
            Tok::Turnstile => "|-",
            Tok::Wedge => "/\\",
            Tok::Vee => "\\/",
            Tok::Arrow => "->",
            Tok::Tilde => "~",
            Tok::Star => "*",
            Tok::Plus => "+",
            Tok::Ident(_) | Tok::Num(_) | Tok::Eof => "",
        }
    }
}

const KEYWORDS: &[&str] = &[
    "type", "fun", "rel", "axiom", "def", "true", "false", "exists", "forall", "eps", "Unit", "Empty", "carrier",
    "point",
];

fn lex(src: &str) -> Result<Vec<(Tok, Pos)>, SyntaxError> {
    let mut out = Vec::new();
    let chars: Vec<char> = src.chars().collect();
    let (mut i, mut line, mut col) = (0, 1, 1);
    while i < chars.len() {
        let c = chars[i];
        let pos = Pos { line, column: col };
        let next = chars.get(i + 1).copied();
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        if c == '#' {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_' || chars[i] == '\'') {
                i += 1;
            }
            col += i - start;
            out.push((Tok::Ident(chars[start..i].iter().collect()), pos));
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            col += i - start;
            let text: String = chars[start..i].iter().collect();
            let n = text.parse().map_err(|_| SyntaxError::Parse {
                line: pos.line,
                column: pos.column,
                message: format!("number `{text}` is too large"),
            })?;
            out.push((Tok::Num(n), pos));
            continue;
        }
        let (tok, len) = match (c, next) {
            (':', Some('=')) => (Tok::Define, 2),
            ('|', Some('-')) => (Tok::Turnstile, 2),
            ('/', Some('\\')) => (Tok::Wedge, 2),
            ('\\', Some('/')) => (Tok::Vee, 2),
            ('-', Some('>')) => (Tok::Arrow, 2),
            (';', _) => (Tok::Semi, 1),
            (':', _) => (Tok::Colon, 1),
            (',', _) => (Tok::Comma, 1),
            ('(', _) => (Tok::LParen, 1),
            (')', _) => (Tok::RParen, 1),
            ('[', _) => (Tok::LBrack, 1),
            (']', _) => (Tok::RBrack, 1),
            ('{', _) => (Tok::LBrace, 1),
            ('}', _) => (Tok::RBrace, 1),
            ('.', _) => (Tok::Dot, 1),
            ('=', _) => (Tok::Equals, 1),
            ('|', _) => (Tok::Bar, 1),
            ('~', _) => (Tok::Tilde, 1),
            ('*', _) => (Tok::Star, 1),
            ('+', _) => (Tok::Plus, 1),
            _ => {
                return Err(SyntaxError::Parse {
                    line,
                    column: col,
                    message: format!("unexpected character `{c}`"),
                })
            }
        };
        i += len;
        col += len;
        out.push((tok, pos));
    }
    out.push((Tok::Eof, Pos { line, column: col }));
    Ok(out)
}

/// A model-file assignment line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Assignment {
    Carrier { ty: String, size: usize },
    Point { ty: String, index: usize },
    Fun { name: String, table: Vec<usize> },
    Rel { name: String, tuples: Vec<Vec<usize>> },
}

/// A file that may mix declarations and model assignments.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Document {
    pub theory: Theory,
    pub assignments: Vec<(Assignment, Pos)>,
}

struct Parser {
    toks: Vec<(Tok, Pos)>,
    i: usize,
    sig: Signature,
    scope: Vec<(String, TypeExpr)>,
}

type PResult<T> = Result<T, SyntaxError>;

impl Parser {
    fn new(src: &str, sig: Signature) -> PResult<Self> {
        Ok(Parser {
            toks: lex(src)?,
            i: 0,
            sig,
            scope: Vec::new(),
        })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.i].0
    }

    fn peek_at(&self, k: usize) -> &Tok {
        &self.toks[(self.i + k).min(self.toks.len() - 1)].0
    }

    fn pos(&self) -> Pos {
        self.toks[self.i].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.i].0.clone();
        if self.i + 1 < self.toks.len() {
            self.i += 1;
        }
        t
    }

    fn error<T>(&self, message: impl Into<String>) -> PResult<T> {
        let p = self.pos();
        Err(SyntaxError::Parse {
            line: p.line,
            column: p.column,
            message: message.into(),
        })
    }

    fn locate<T>(&self, pos: Pos, r: PResult<T>) -> PResult<T> {
        r.map_err(|e| match e {
            e @ (SyntaxError::Parse { .. } | SyntaxError::Located { .. }) => e,
            e => SyntaxError::Located {
                line: pos.line,
                column: pos.column,
                error: Box::new(e),
            },
        })
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == t {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, t: &Tok) -> PResult<()> {
        if self.eat(t) {
            Ok(())
        } else {
            self.error(format!("expected {}, found {}", t.describe(), self.peek().describe()))
        }
    }

    fn is_keyword(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == kw)
    }

    fn name(&mut self) -> PResult<String> {
        match self.peek().clone() {
            Tok::Ident(s) if !KEYWORDS.contains(&s.as_str()) => {
                self.bump();
                Ok(s)
            }
            other => self.error(format!("expected a name, found {}", other.describe())),
        }
    }

    fn number(&mut self) -> PResult<usize> {
        match self.peek().clone() {
            Tok::Num(n) => {
                self.bump();
                Ok(n)
            }
            other => self.error(format!("expected a number, found {}", other.describe())),
        }
    }

    fn finish(&mut self) -> PResult<()> {
        self.eat(&Tok::Semi);
        if *self.peek() != Tok::Eof {
            return self.error(format!("unexpected {}", self.peek().describe()));
        }
        Ok(())
    }

    // ---- types ----

    fn ty(&mut self) -> PResult<TypeExpr> {
        let lhs = self.ty_sum()?;
        if self.eat(&Tok::Arrow) {
            Ok(TypeExpr::fun(lhs, self.ty()?))
        } else {
            Ok(lhs)
        }
    }

    fn ty_sum(&mut self) -> PResult<TypeExpr> {
        let mut t = self.ty_prod()?;
        while self.eat(&Tok::Plus) {
            t = TypeExpr::sum(t, self.ty_prod()?);
        }
        Ok(t)
    }

    fn ty_prod(&mut self) -> PResult<TypeExpr> {
        let mut t = self.ty_atom()?;
        while self.eat(&Tok::Star) {
            t = TypeExpr::prod(t, self.ty_atom()?);
        }
        Ok(t)
    }

    fn ty_atom(&mut self) -> PResult<TypeExpr> {
        let pos = self.pos();
        match self.peek().clone() {
            Tok::LParen => {
                self.bump();
                let t = self.ty()?;
                self.expect(&Tok::RParen)?;
                Ok(t)
            }
            Tok::Ident(s) if s == "Unit" => {
                self.bump();
                Ok(TypeExpr::Unit)
            }
            Tok::Ident(s) if s == "Empty" => {
                self.bump();
                Ok(TypeExpr::Empty)
            }
            Tok::Ident(_) => {
                let n = self.name()?;
                if !self.sig.has_base_type(&n) {
                    return self.locate(pos, Err(SyntaxError::UnknownSymbol(n)));
                }
                Ok(TypeExpr::Base(n))
            }
            other => self.error(format!("expected a type, found {}", other.describe())),
        }
    }

    // ---- terms ----

    fn lookup_var(&self, name: &str) -> Option<&TypeExpr> {
        self.scope.iter().rev().find(|(n, _)| n == name).map(|(_, t)| t)
    }

    fn binder(&mut self) -> PResult<(String, TypeExpr)> {
        let x = self.name()?;
        self.expect(&Tok::Colon)?;
        let ty = self.ty()?;
        self.expect(&Tok::Dot)?;
        Ok((x, ty))
    }

    fn with_binder<T>(&mut self, x: &str, ty: &TypeExpr, body: impl FnOnce(&mut Self) -> PResult<T>) -> PResult<T> {
        self.scope.push((x.to_string(), ty.clone()));
        let r = body(self);
        self.scope.pop();
        r
    }

    fn term(&mut self) -> PResult<Term> {
        let pos = self.pos();
        match self.peek().clone() {
            Tok::Ident(s) if s == "eps" => {
                self.bump();
                let (x, ty) = self.binder()?;
                let body = self.with_binder(&x, &ty, |p| p.formula())?;
                Ok(Term::epsilon(x, ty, body))
            }
            Tok::LParen => {
                self.bump();
                let t = self.term()?;
                self.expect(&Tok::RParen)?;
                Ok(t)
            }
            Tok::Ident(_) => {
                let n = self.name()?;
                if let Some(ty) = self.lookup_var(&n) {
                    return Ok(Term::Var(n, ty.clone()));
                }
                let Some(decl) = self.sig.fun(&n) else {
                    let err = if self.sig.rel(&n).is_some() {
                        SyntaxError::Parse {
                            line: pos.line,
                            column: pos.column,
                            message: format!("relation `{n}` used as a term"),
                        }
                    } else {
                        SyntaxError::UnknownSymbol(n)
                    };
                    return self.locate(pos, Err(err));
                };
                let arity = decl.args.len();
                let args = self.arg_list()?;
                if args.len() != arity {
                    return self.locate(
                        pos,
                        Err(SyntaxError::ArityMismatch {
                            symbol: n,
                            expected: arity,
                            found: args.len(),
                        }),
                    );
                }
                Ok(Term::App(n, args))
            }
            other => self.error(format!("expected a term, found {}", other.describe())),
        }
    }

    fn arg_list(&mut self) -> PResult<Vec<Term>> {
        let mut args = Vec::new();
        if self.eat(&Tok::LParen) && !self.eat(&Tok::RParen) {
            loop {
                args.push(self.term()?);
                if self.eat(&Tok::RParen) {
                    break;
                }
                self.expect(&Tok::Comma)?;
            }
        }
        Ok(args)
    }

    // ---- formulas ----

    fn formula(&mut self) -> PResult<Formula> {
        let lhs = self.disjunction()?;
        if self.eat(&Tok::Arrow) {
            Ok(Formula::imp(lhs, self.formula()?))
        } else {
            Ok(lhs)
        }
    }

    fn disjunction(&mut self) -> PResult<Formula> {
        let mut f = self.conjunction()?;
        while self.eat(&Tok::Vee) {
            f = Formula::or(f, self.conjunction()?);
        }
        Ok(f)
    }

    fn conjunction(&mut self) -> PResult<Formula> {
        let mut f = self.unary()?;
        while self.eat(&Tok::Wedge) {
            f = Formula::and(f, self.unary()?);
        }
        Ok(f)
    }

    fn unary(&mut self) -> PResult<Formula> {
        if self.eat(&Tok::Tilde) {
            return Ok(Formula::not(self.unary()?));
        }
        for (kw, is_exists) in [("exists", true), ("forall", false)] {
            if self.is_keyword(kw) {
                self.bump();
                let (x, ty) = self.binder()?;
                let body = self.with_binder(&x, &ty, |p| p.formula())?;
                return Ok(if is_exists {
                    Formula::exists(x, ty, body)
                } else {
                    Formula::forall(x, ty, body)
                });
            }
        }
        self.atom()
    }

    fn atom(&mut self) -> PResult<Formula> {
        let pos = self.pos();
        match self.peek().clone() {
            Tok::Ident(s) if s == "true" => {
                self.bump();
                Ok(Formula::Top)
            }
            Tok::Ident(s) if s == "false" => {
                self.bump();
                Ok(Formula::Bot)
            }
            Tok::Ident(s) if self.lookup_var(&s).is_none() && self.sig.rel(&s).is_some() => {
                self.bump();
                let arity = self.sig.rel(&s).map_or(0, <[_]>::len);
                let args = self.arg_list()?;
                if args.len() != arity {
                    return self.locate(
                        pos,
                        Err(SyntaxError::ArityMismatch {
                            symbol: s,
                            expected: arity,
                            found: args.len(),
                        }),
                    );
                }
                Ok(Formula::Rel(s, args))
            }
            Tok::LParen => {
                // either a parenthesised formula or an equation whose left side is parenthesised
                let save = self.i;
                if let Ok(f) = self.equation() {
                    return Ok(f);
                }
                self.i = save;
                self.bump();
                let f = self.formula()?;
                self.expect(&Tok::RParen)?;
                Ok(f)
            }
            _ => self.equation(),
        }
    }

    fn equation(&mut self) -> PResult<Formula> {
        let lhs = self.term()?;
        self.expect(&Tok::Equals)?;
        let rhs = self.term()?;
        Ok(Formula::eq(lhs, rhs))
    }

    // ---- contexts and sequents ----

    fn var_decls(&mut self, closer: &Tok) -> PResult<Context> {
        let mut ctx = Context::new();
        if self.peek() == closer {
            return Ok(ctx);
        }
        loop {
            let pos = self.pos();
            let n = self.name()?;
            self.expect(&Tok::Colon)?;
            let ty = self.ty()?;
            let r = ctx.push(n, ty);
            self.locate(pos, r)?;
            if !self.eat(&Tok::Comma) {
                return Ok(ctx);
            }
        }
    }

    fn sequent(&mut self) -> PResult<Sequent> {
        let ctx = if self.eat(&Tok::LBrack) {
            let ctx = self.var_decls(&Tok::RBrack)?;
            self.expect(&Tok::RBrack)?;
            if *self.peek() != Tok::Turnstile {
                self.expect(&Tok::Bar)?;
            }
            ctx
        } else if matches!(self.peek(), Tok::Ident(_)) && *self.peek_at(1) == Tok::Colon {
            let ctx = self.var_decls(&Tok::Bar)?;
            if *self.peek() != Tok::Turnstile {
                self.expect(&Tok::Bar)?;
            }
            ctx
        } else {
            self.eat(&Tok::Bar);
            Context::new()
        };
        self.scope = ctx.vars().to_vec();
        let mut hyps = Vec::new();
        if *self.peek() != Tok::Turnstile {
            loop {
                hyps.push(self.formula()?);
                if !self.eat(&Tok::Comma) {
                    break;
                }
            }
        }
        self.expect(&Tok::Turnstile)?;
        let concl = self.formula()?;
        self.scope.clear();
        Ok(Sequent::new(ctx, hyps, concl))
    }

    // ---- documents ----

    fn document(&mut self) -> PResult<Document> {
        let mut doc = Document::default();
        loop {
            while self.eat(&Tok::Semi) {}
            if *self.peek() == Tok::Eof {
                break;
            }
            self.item(&mut doc)?;
            if *self.peek() != Tok::Eof {
                self.expect(&Tok::Semi)?;
            }
        }
        doc.theory.signature = self.sig.clone();
        Ok(doc)
    }

    fn item(&mut self, doc: &mut Document) -> PResult<()> {
        let pos = self.pos();
        let kw = match self.peek().clone() {
            Tok::Ident(s) => s,
            other => return self.error(format!("expected a declaration, found {}", other.describe())),
        };
        self.bump();
        match kw.as_str() {
            "type" => {
                let n = self.name()?;
                let r = self.sig.add_base_type(n);
                self.locate(pos, r)
            }
            "fun" => {
                let n = self.name()?;
                if self.eat(&Tok::Equals) {
                    let table = self.number_list(&Tok::LBrack, &Tok::RBrack)?;
                    doc.assignments.push((Assignment::Fun { name: n, table }, pos));
                    return Ok(());
                }
                self.expect(&Tok::Colon)?;
                let (args, result) = self.fun_signature()?;
                let r = self.sig.add_fun(n, args, result);
                self.locate(pos, r)
            }
            "rel" => {
                let n = self.name()?;
                if self.eat(&Tok::Equals) {
                    let tuples = self.tuple_set()?;
                    doc.assignments.push((Assignment::Rel { name: n, tuples }, pos));
                    return Ok(());
                }
                let mut args = Vec::new();
                if self.eat(&Tok::LParen) && !self.eat(&Tok::RParen) {
                    loop {
                        args.push(self.ty()?);
                        if self.eat(&Tok::RParen) {
                            break;
                        }
                        self.expect(&Tok::Comma)?;
                    }
                }
                let r = self.sig.add_rel(n, args);
                self.locate(pos, r)
            }
            "axiom" => {
                let n = self.name()?;
                self.expect(&Tok::Colon)?;
                let s = self.sequent()?;
                let r = wellform_sequent(&s, &self.sig);
                self.locate(pos, r)?;
                doc.theory.axioms.push((n, s));
                Ok(())
            }
            "def" => {
                let n = self.name()?;
                self.expect(&Tok::Define)?;
                let d = self.definition()?;
                let r = match &d {
                    Definition::Term { term, .. } => typecheck_term(&Context::new(), term, &self.sig).map(|_| ()),
                    Definition::Formula(f) => wellform_formula(&Context::new(), f, &self.sig),
                };
                self.locate(pos, r)?;
                doc.theory.definitions.push((n, d));
                Ok(())
            }
            "carrier" | "point" => {
                let ty = self.name()?;
                self.expect(&Tok::Equals)?;
                let k = self.number()?;
                let a = if kw == "carrier" {
                    Assignment::Carrier { ty, size: k }
                } else {
                    Assignment::Point { ty, index: k }
                };
                doc.assignments.push((a, pos));
                Ok(())
            }
            _ => {
                self.i -= 1;
                self.error(format!("unknown declaration `{kw}`"))
            }
        }
    }

    /// `A * B -> C` declares a binary function; without an arrow the whole
    /// type is the type of a constant.
    fn fun_signature(&mut self) -> PResult<(Vec<TypeExpr>, TypeExpr)> {
        let save = self.i;
        let mut args = vec![self.ty_atom()?];
        while self.eat(&Tok::Star) {
            args.push(self.ty_atom()?);
        }
        if self.eat(&Tok::Arrow) {
            return Ok((args, self.ty()?));
        }
        self.i = save;
        Ok((Vec::new(), self.ty()?))
    }

    fn definition(&mut self) -> PResult<Definition> {
        let save = self.i;
        if let Ok(f) = self.formula() {
            if matches!(self.peek(), Tok::Semi | Tok::Eof) {
                return Ok(Definition::Formula(f));
            }
        }
        self.i = save;
        let pos = self.pos();
        let term = self.term()?;
        let r = typecheck_term(&Context::new(), &term, &self.sig);
        let ty = self.locate(pos, r)?;
        Ok(Definition::Term { term, ty })
    }

    fn number_list(&mut self, open: &Tok, close: &Tok) -> PResult<Vec<usize>> {
        self.expect(open)?;
        let mut out = Vec::new();
        if self.eat(close) {
            return Ok(out);
        }
        loop {
            out.push(self.number()?);
            if self.eat(close) {
                return Ok(out);
            }
            self.expect(&Tok::Comma)?;
        }
    }

    fn tuple_set(&mut self) -> PResult<Vec<Vec<usize>>> {
        self.expect(&Tok::LBrace)?;
        let mut out = Vec::new();
        if self.eat(&Tok::RBrace) {
            return Ok(out);
        }
        loop {
            if *self.peek() == Tok::LParen {
                out.push(self.number_list(&Tok::LParen, &Tok::RParen)?);
            } else {
                out.push(vec![self.number()?]);
            }
            if self.eat(&Tok::RBrace) {
                return Ok(out);
            }
            self.expect(&Tok::Comma)?;
        }
    }
}

/// Parses a file that may contain both declarations and model assignments.
pub fn parse_document(src: &str) -> Result<Document, SyntaxError> {
    Parser::new(src, Signature::new())?.document()
}

/// Parses a theory file: declarations, definitions and axioms only.
pub fn parse_theory(src: &str) -> Result<Theory, SyntaxError> {
    let doc = parse_document(src)?;
    if let Some((_, pos)) = doc.assignments.first() {
        return Err(SyntaxError::Parse {
            line: pos.line,
            column: pos.column,
            message: "model assignments are not allowed in a theory file".to_string(),
        });
    }
    Ok(doc.theory)
}

/// Parses and checks a sequent such as `x:A | P(x) |- P(x)`.
pub fn parse_sequent(src: &str, sig: &Signature) -> Result<Sequent, SyntaxError> {
    let mut p = Parser::new(src, sig.clone())?;
    let s = p.sequent()?;
    p.finish()?;
    wellform_sequent(&s, sig)?;
    Ok(s)
}

/// Parses and checks a formula in context `ctx`.
pub fn parse_formula(src: &str, ctx: &Context, sig: &Signature) -> Result<Formula, SyntaxError> {
    let mut p = Parser::new(src, sig.clone())?;
    p.scope = ctx.vars().to_vec();
    let f = p.formula()?;
    p.finish()?;
    wellform_formula(ctx, &f, sig)?;
    Ok(f)
}

/// Parses and typechecks a term in context `ctx`, returning it with its type.
pub fn parse_term(src: &str, ctx: &Context, sig: &Signature) -> Result<(Term, TypeExpr), SyntaxError> {
    let mut p = Parser::new(src, sig.clone())?;
    p.scope = ctx.vars().to_vec();
    let t = p.term()?;
    p.finish()?;
    let ty = typecheck_term(ctx, &t, sig)?;
    Ok((t, ty))
}

/// Parses a typed variable declaration `x:A`.
pub fn parse_var_decl(src: &str, sig: &Signature) -> Result<(String, TypeExpr), SyntaxError> {
    let mut p = Parser::new(src, sig.clone())?;
    let n = p.name()?;
    p.expect(&Tok::Colon)?;
    let ty = p.ty()?;
    p.finish()?;
    Ok((n, ty))
}

/// Parses a context such as `x:A, y:B` (brackets optional).
pub fn parse_context(src: &str, sig: &Signature) -> Result<Context, SyntaxError> {
    let mut p = Parser::new(src, sig.clone())?;
    let bracketed = p.eat(&Tok::LBrack);
    let ctx = p.var_decls(if bracketed { &Tok::RBrack } else { &Tok::Eof })?;
    if bracketed {
        p.expect(&Tok::RBrack)?;
    }
    p.finish()?;
    Ok(ctx)
}
