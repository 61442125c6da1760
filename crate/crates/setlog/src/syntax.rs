//! Concrete syntax: parser and printer.
//!
//! Lexical classes: `$x` is a variable, `#c` a constant, a capitalized
//! identifier a primitive concept (`Top` and `Bot` are the distinguished
//! ones), and a lowercase identifier an atom — unless it sits in relation
//! position (before `:` or `(`), in which case it is a relation symbol.
//! Names are auto-declared in the signature on first use; reusing a name at
//! a different lexical class is an error.
//!
//! Operators, tightest first: `!` (negation of primitives), the `f: T` /
//! `some f: T` / `all f: P` prefixes, and `&` (left-associative, lowest).
//! Parentheses group. `%` starts a comment running to end of line.
//!
//! ```text
//! f: {a, b}=            fixed cardinality set description
//! subcat: cdtrs($x) union n($y)
//! f($x) != g($y)        disjointness
//! f: >= g($x)           subset (the f-values contain the g-values of $x)
//! ```
//!
//! `render` is deterministic and `parse(render(t))` returns `t` unchanged.

use std::fmt;

use thiserror::Error;

use crate::sig::{NameKind, Signature};
use crate::term::Term;

/// A piece of input text together with where it came from.
#[derive(Debug, Clone)]
pub struct SourceText {
    pub text: String,
    pub origin: String,
}

impl SourceText {
    pub fn new(text: impl Into<String>, origin: impl Into<String>) -> Self {
        SourceText {
            text: text.into(),
            origin: origin.into(),
        }
    }

    pub fn from_str(text: impl Into<String>) -> Self {
        SourceText::new(text, "<string>")
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("{origin}:{line}:{col}: {message}")]
pub struct ParseError {
    pub origin: String,
    pub line: u32,
    pub col: u32,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Var(String),
    Const(String),
    LIdent(String),
    UIdent(String),
    KwSome,
    KwAll,
    KwUnion,
    KwIsect,
    KwDunion,
    Colon,
    Amp,
    Bang,
    Neq,
    Supset,
    LBrace,
    RBrace,
    Eq,
    LParen,
    RParen,
    Comma,
    Dot,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Var(n) => write!(f, "${n}"),
            Tok::Const(n) => write!(f, "#{n}"),
            Tok::LIdent(n) | Tok::UIdent(n) => write!(f, "{n}"),
            Tok::KwSome => write!(f, "some"),
            Tok::KwAll => write!(f, "all"),
            Tok::KwUnion => write!(f, "union"),
            Tok::KwIsect => write!(f, "isect"),
            Tok::KwDunion => write!(f, "dunion"),
            Tok::Colon => write!(f, ":"),
            Tok::Amp => write!(f, "&"),
            Tok::Bang => write!(f, "!"),
            Tok::Neq => write!(f, "!="),
            Tok::Supset => write!(f, ">="),
            Tok::LBrace => write!(f, "{{"),
            Tok::RBrace => write!(f, "}}"),
            Tok::Eq => write!(f, "="),
            Tok::LParen => write!(f, "("),
            Tok::RParen => write!(f, ")"),
            Tok::Comma => write!(f, ","),
            Tok::Dot => write!(f, "."),
            Tok::Eof => write!(f, "end of input"),
        }
    }
}

struct Lexer<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    line: u32,
    col: u32,
}

type Spanned = (Tok, u32, u32);

impl<'a> Lexer<'a> {
    fn new(text: &'a str) -> Self {
        Lexer {
            chars: text.chars().peekable(),
            line: 1,
            col: 1,
        }
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn ident(&mut self, first: char) -> String {
        let mut s = String::new();
        s.push(first);
        while let Some(&c) = self.chars.peek() {
            if c.is_ascii_alphanumeric() || c == '_' {
                s.push(c);
                self.bump();
            } else {
                break;
            }
        }
        s
    }

    fn tokens(text: &'a str, origin: &str) -> Result<Vec<Spanned>, ParseError> {
        let mut lx = Lexer::new(text);
        let mut out = Vec::new();
        loop {
            // skip whitespace and comments
            loop {
                match lx.chars.peek() {
                    Some(c) if c.is_whitespace() => {
                        lx.bump();
                    }
                    Some('%') => {
                        while let Some(&c) = lx.chars.peek() {
                            if c == '\n' {
                                break;
                            }
                            lx.bump();
                        }
                    }
                    _ => break,
                }
            }
            let (line, col) = (lx.line, lx.col);
            let err = |message: String| ParseError {
                origin: origin.to_string(),
                line,
                col,
                message,
            };
            let Some(c) = lx.bump() else {
                out.push((Tok::Eof, line, col));
                return Ok(out);
            };
            let tok = match c {
                '$' => match lx.chars.peek() {
                    Some(&c2) if c2.is_ascii_alphabetic() || c2 == '_' => {
                        lx.bump();
                        Tok::Var(lx.ident(c2))
                    }
                    _ => return Err(err("expected variable name after `$`".into())),
                },
                '#' => match lx.chars.peek() {
                    Some(&c2) if c2.is_ascii_lowercase() => {
                        lx.bump();
                        Tok::Const(lx.ident(c2))
                    }
                    _ => return Err(err("expected constant name after `#`".into())),
                },
                ':' => Tok::Colon,
                '&' => Tok::Amp,
                '{' => Tok::LBrace,
                '}' => Tok::RBrace,
                '=' => Tok::Eq,
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                ',' => Tok::Comma,
                '.' => Tok::Dot,
                '!' => {
                    if lx.chars.peek() == Some(&'=') {
                        lx.bump();
                        Tok::Neq
                    } else {
                        Tok::Bang
                    }
                }
                '>' => {
                    if lx.chars.peek() == Some(&'=') {
                        lx.bump();
                        Tok::Supset
                    } else {
                        return Err(err("expected `>=`".into()));
                    }
                }
                c if c.is_ascii_lowercase() => {
                    let id = lx.ident(c);
                    match id.as_str() {
                        "some" => Tok::KwSome,
                        "all" => Tok::KwAll,
                        "union" => Tok::KwUnion,
                        "isect" => Tok::KwIsect,
                        "dunion" => Tok::KwDunion,
                        _ => Tok::LIdent(id),
                    }
                }
                c if c.is_ascii_uppercase() => Tok::UIdent(lx.ident(c)),
                other => return Err(err(format!("unexpected character `{other}`"))),
            };
            out.push((tok, line, col));
        }
    }
}

struct Parser<'a> {
    toks: Vec<Spanned>,
    pos: usize,
    sig: &'a mut Signature,
    origin: String,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn peek2(&self) -> &Tok {
        let i = (self.pos + 1).min(self.toks.len() - 1);
        &self.toks[i].0
    }

    fn next(&mut self) -> Spanned {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error_here(&self, message: String) -> ParseError {
        let (_, line, col) = self.toks[self.pos];
        ParseError {
            origin: self.origin.clone(),
            line,
            col,
            message,
        }
    }

    fn expect(&mut self, want: Tok) -> Result<(), ParseError> {
        if *self.peek() == want {
            self.next();
            Ok(())
        } else {
            Err(self.error_here(format!("expected `{}`, found `{}`", want, self.peek())))
        }
    }

    fn declare(&mut self, kind: NameKind, name: &str) -> Result<(), ParseError> {
        self.sig
            .declare(kind, name)
            .map_err(|e| self.error_here(e.to_string()))
    }

    /// `term := prefix ('&' prefix)*`, `&` left-associative.
    fn term(&mut self) -> Result<Term, ParseError> {
        let mut acc = self.prefix()?;
        while *self.peek() == Tok::Amp {
            self.next();
            let rhs = self.prefix()?;
            acc = Term::conj(acc, rhs);
        }
        Ok(acc)
    }

    fn prefix(&mut self) -> Result<Term, ParseError> {
        match self.peek().clone() {
            Tok::KwSome | Tok::KwAll => {
                let (kw, _, _) = self.next();
                let rel = self.relation_name()?;
                self.expect(Tok::Colon)?;
                let body = self.prefix()?;
                Ok(match kw {
                    Tok::KwSome => Term::Exists(rel, Box::new(body)),
                    _ => Term::Forall(rel, Box::new(body)),
                })
            }
            Tok::LIdent(_) if *self.peek2() == Tok::Colon => {
                let rel = self.relation_name()?;
                self.next(); // colon
                self.feature_rhs(rel)
            }
            Tok::LIdent(_) if *self.peek2() == Tok::LParen => {
                // disjointness: f($x) != g($y)
                let (f, x) = self.rel_app()?;
                self.expect(Tok::Neq)?;
                let (g, y) = self.rel_app()?;
                Ok(Term::Disjointness { f, x, g, y })
            }
            _ => self.atomic(),
        }
    }

    /// What may follow `f:`.
    fn feature_rhs(&mut self, f: String) -> Result<Term, ParseError> {
        match self.peek().clone() {
            Tok::LBrace => {
                self.next();
                let mut elems = vec![self.term()?];
                while *self.peek() == Tok::Comma {
                    self.next();
                    elems.push(self.term()?);
                }
                self.expect(Tok::RBrace)?;
                if *self.peek() == Tok::Eq {
                    self.next();
                    Ok(Term::FixedSet(f, elems))
                } else {
                    Ok(Term::SetDesc(f, elems))
                }
            }
            Tok::Supset => {
                self.next();
                let (g, x) = self.rel_app()?;
                Ok(Term::Superset { f, g, x })
            }
            Tok::LIdent(_) if *self.peek2() == Tok::LParen => {
                let (g, x) = self.rel_app()?;
                match self.next() {
                    (Tok::KwUnion, _, _) => {
                        let (h, y) = self.rel_app()?;
                        Ok(Term::Union { f, g, x, h, y })
                    }
                    (Tok::KwIsect, _, _) => {
                        let (h, y) = self.rel_app()?;
                        Ok(Term::Intersection { f, g, x, h, y })
                    }
                    (Tok::KwDunion, _, _) => {
                        let (h, y) = self.rel_app()?;
                        Ok(Term::DisjointUnion { f, g, x, h, y })
                    }
                    (Tok::Neq, _, _) => {
                        // feature whose value is a disjointness term
                        let (h, y) = self.rel_app()?;
                        Ok(Term::Feature(
                            f,
                            Box::new(Term::Disjointness { f: g, x, g: h, y }),
                        ))
                    }
                    (tok, line, col) => Err(ParseError {
                        origin: self.origin.clone(),
                        line,
                        col,
                        message: format!(
                            "expected `union`, `isect`, `dunion` or `!=` after relation application, found `{tok}`"
                        ),
                    }),
                }
            }
            _ => {
                let body = self.prefix()?;
                Ok(Term::Feature(f, Box::new(body)))
            }
        }
    }

    /// `g($x)`
    fn rel_app(&mut self) -> Result<(String, String), ParseError> {
        let rel = self.relation_name()?;
        self.expect(Tok::LParen)?;
        let var = match self.peek().clone() {
            Tok::Var(n) => {
                self.next();
                self.declare(NameKind::Variable, &n)?;
                n
            }
            other => {
                return Err(self.error_here(format!("expected a variable, found `{other}`")));
            }
        };
        self.expect(Tok::RParen)?;
        Ok((rel, var))
    }

    fn relation_name(&mut self) -> Result<String, ParseError> {
        match self.peek().clone() {
            Tok::LIdent(n) => {
                self.next();
                self.declare(NameKind::Relation, &n)?;
                Ok(n)
            }
            other => Err(self.error_here(format!("expected a relation name, found `{other}`"))),
        }
    }

    fn atomic(&mut self) -> Result<Term, ParseError> {
        match self.peek().clone() {
            Tok::LParen => {
                self.next();
                let t = self.term()?;
                self.expect(Tok::RParen)?;
                Ok(t)
            }
            Tok::Bang => {
                self.next();
                let prim = self.primitive()?;
                Ok(match prim {
                    Term::Var(n) => Term::NegVar(n),
                    Term::Atom(n) => Term::NegAtom(n),
                    Term::Const(n) => Term::NegConst(n),
                    Term::Concept(n) => Term::NegConcept(n),
                    _ => unreachable!("primitive() returns primitives"),
                })
            }
            _ => self.primitive(),
        }
    }

    fn primitive(&mut self) -> Result<Term, ParseError> {
        match self.peek().clone() {
            Tok::Var(n) => {
                self.next();
                self.declare(NameKind::Variable, &n)?;
                Ok(Term::Var(n))
            }
            Tok::Const(n) => {
                self.next();
                self.declare(NameKind::Constant, &n)?;
                Ok(Term::Const(n))
            }
            Tok::UIdent(n) => {
                self.next();
                self.declare(NameKind::Concept, &n)?;
                Ok(Term::Concept(n))
            }
            Tok::LIdent(n) => {
                self.next();
                self.declare(NameKind::Atom, &n)?;
                Ok(Term::Atom(n))
            }
            other => Err(self.error_here(format!(
                "expected a variable, atom, constant or concept, found `{other}`"
            ))),
        }
    }
}

/// Parse a single term. Names are auto-declared in `sig`; a trailing `.` is
/// permitted.
pub fn parse(src: &SourceText, sig: &mut Signature) -> Result<Term, ParseError> {
    let toks = Lexer::tokens(&src.text, &src.origin)?;
    let mut p = Parser {
        toks,
        pos: 0,
        sig,
        origin: src.origin.clone(),
    };
    let t = p.term()?;
    if *p.peek() == Tok::Dot {
        p.next();
    }
    if *p.peek() != Tok::Eof {
        return Err(p.error_here(format!("unexpected `{}` after term", p.peek())));
    }
    Ok(t)
}

/// Parse a corpus file of `name = term.` clauses.
pub fn parse_corpus(
    src: &SourceText,
    sig: &mut Signature,
) -> Result<Vec<(String, Term)>, ParseError> {
    let toks = Lexer::tokens(&src.text, &src.origin)?;
    let mut p = Parser {
        toks,
        pos: 0,
        sig,
        origin: src.origin.clone(),
    };
    let mut out = Vec::new();
    while *p.peek() != Tok::Eof {
        let name = match p.peek().clone() {
            Tok::LIdent(n) => {
                p.next();
                n
            }
            other => return Err(p.error_here(format!("expected clause name, found `{other}`"))),
        };
        p.expect(Tok::Eq)?;
        let t = p.term()?;
        p.expect(Tok::Dot)?;
        out.push((name, t));
    }
    Ok(out)
}

/// Deterministic printer; the inverse of [`parse`] up to structural equality.
pub fn render(term: &Term) -> String {
    let mut s = String::new();
    render_into(term, &mut s);
    s
}

fn render_into(term: &Term, out: &mut String) {
    use std::fmt::Write;
    match term {
        Term::Var(n) => write!(out, "${n}").unwrap(),
        Term::Atom(n) => out.push_str(n),
        Term::Const(n) => write!(out, "#{n}").unwrap(),
        Term::Concept(n) => out.push_str(n),
        Term::NegVar(n) => write!(out, "!${n}").unwrap(),
        Term::NegAtom(n) => write!(out, "!{n}").unwrap(),
        Term::NegConst(n) => write!(out, "!#{n}").unwrap(),
        Term::NegConcept(n) => write!(out, "!{n}").unwrap(),
        Term::Feature(f, t) => {
            write!(out, "{f}: ").unwrap();
            render_into(t, out);
        }
        Term::Exists(f, t) => {
            write!(out, "some {f}: ").unwrap();
            render_into(t, out);
        }
        Term::Forall(f, t) => {
            write!(out, "all {f}: ").unwrap();
            // a non-P body cannot stand after `:` unparenthesized
            if t.is_primitive() {
                render_into(t, out);
            } else {
                out.push('(');
                render_into(t, out);
                out.push(')');
            }
        }
        Term::SetDesc(f, ts) | Term::FixedSet(f, ts) => {
            write!(out, "{f}: {{").unwrap();
            for (i, t) in ts.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                render_into(t, out);
            }
            out.push('}');
            if matches!(term, Term::FixedSet(..)) {
                out.push('=');
            }
        }
        Term::Union { f, g, x, h, y } => {
            write!(out, "{f}: {g}(${x}) union {h}(${y})").unwrap();
        }
        Term::Intersection { f, g, x, h, y } => {
            write!(out, "{f}: {g}(${x}) isect {h}(${y})").unwrap();
        }
        Term::DisjointUnion { f, g, x, h, y } => {
            write!(out, "{f}: {g}(${x}) dunion {h}(${y})").unwrap();
        }
        Term::Superset { f, g, x } => {
            write!(out, "{f}: >= {g}(${x})").unwrap();
        }
        Term::Disjointness { f, x, g, y } => {
            write!(out, "{f}(${x}) != {g}(${y})").unwrap();
        }
        Term::Conj(s, t) => {
            out.push('(');
            render_into(s, out);
            out.push_str(" & ");
            render_into(t, out);
            out.push(')');
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render(self))
    }
}
