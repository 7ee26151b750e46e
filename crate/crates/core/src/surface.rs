//! Concrete syntax: parsing and pretty-printing.
//!
//! The grammar is deliberately small.
//!
//! ```text
//! type  ::= "O" | type "->" type | "(" type ")"        -- "->" right-associative
//! term  ::= "\" ident ":" type "." term                -- body extends maximally right
//!         | atom+                                      -- application, left-associative
//! atom  ::= "yes" | "no" | ident | "(" term ")"
//! mexpr ::= "eps" | "(" "gen" ident ")" | "(" "mu" mexpr mexpr ")"
//! ```
//!
//! Identifiers are `[a-zA-Z][a-zA-Z0-9_]*` minus the keywords `yes`, `no`,
//! `O`. Parsing yields named terms; [`resolve`] turns names into de Bruijn
//! indices against a list of context names. Printers produce the minimal
//! parenthesization the grammar allows and pick fresh binder names
//! deterministically (`x`, `x1`, `x2`, ...).

use std::fmt;

use thiserror::Error;

use crate::monoid::MonExpr;
use crate::nf::{erase_nftp, NeTm, NfTm};
use crate::syntax::{Idx, Term, Type};

/// Byte range in the source text; attached to every parse error.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SourceSpan {
    pub start: usize,
    pub end: usize,
}

impl fmt::Display for SourceSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}..{}", self.start, self.end)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SurfaceError {
    #[error("parse error at {span}: {message}")]
    Parse { span: SourceSpan, message: String },
    #[error("unknown identifier `{name}` at {span}")]
    UnknownIdentifier { name: String, span: SourceSpan },
}

/// Terms as written, with names still in place.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NamedTerm {
    Var(String, SourceSpan),
    Yes,
    No,
    Lam(String, Type, Box<NamedTerm>),
    App(Box<NamedTerm>, Box<NamedTerm>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    LParen,
    RParen,
    Arrow,
    Lambda,
    Colon,
    Dot,
    KwYes,
    KwNo,
    KwO,
    Ident(String),
}

fn tokenize(src: &str) -> Result<Vec<(Tok, SourceSpan)>, SurfaceError> {
    let bytes = src.as_bytes();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        let start = i;
        match c {
            ' ' | '\t' | '\r' | '\n' => {
                i += 1;
            }
            '(' => {
                toks.push((Tok::LParen, SourceSpan { start, end: i + 1 }));
                i += 1;
            }
            ')' => {
                toks.push((Tok::RParen, SourceSpan { start, end: i + 1 }));
                i += 1;
            }
            '\\' => {
                toks.push((Tok::Lambda, SourceSpan { start, end: i + 1 }));
                i += 1;
            }
            ':' => {
                toks.push((Tok::Colon, SourceSpan { start, end: i + 1 }));
                i += 1;
            }
            '.' => {
                toks.push((Tok::Dot, SourceSpan { start, end: i + 1 }));
                i += 1;
            }
            '-' => {
                if bytes.get(i + 1) == Some(&b'>') {
                    toks.push((Tok::Arrow, SourceSpan { start, end: i + 2 }));
                    i += 2;
                } else {
                    return Err(SurfaceError::Parse {
                        span: SourceSpan { start, end: i + 1 },
                        message: "expected `->`".to_string(),
                    });
                }
            }
            c if c.is_ascii_alphabetic() => {
                let mut j = i + 1;
                while j < bytes.len()
                    && ((bytes[j] as char).is_ascii_alphanumeric() || bytes[j] == b'_')
                {
                    j += 1;
                }
                let word = &src[i..j];
                let span = SourceSpan { start, end: j };
                let tok = match word {
                    "yes" => Tok::KwYes,
                    "no" => Tok::KwNo,
                    "O" => Tok::KwO,
                    _ => Tok::Ident(word.to_string()),
                };
                toks.push((tok, span));
                i = j;
            }
            _ => {
                return Err(SurfaceError::Parse {
                    span: SourceSpan { start, end: i + 1 },
                    message: format!("unexpected character `{c}`"),
                });
            }
        }
    }
    Ok(toks)
}

struct Parser {
    toks: Vec<(Tok, SourceSpan)>,
    pos: usize,
    eof: usize,
}

impl Parser {
    fn new(src: &str) -> Result<Parser, SurfaceError> {
        Ok(Parser {
            toks: tokenize(src)?,
            pos: 0,
            eof: src.len(),
        })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn here(&self) -> SourceSpan {
        self.toks
            .get(self.pos)
            .map(|(_, s)| *s)
            .unwrap_or(SourceSpan {
                start: self.eof,
                end: self.eof,
            })
    }

    fn bump(&mut self) -> Option<(Tok, SourceSpan)> {
        let t = self.toks.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<SourceSpan, SurfaceError> {
        match self.bump() {
            Some((t, s)) if t == want => Ok(s),
            _ => Err(SurfaceError::Parse {
                span: self.here_or_last(),
                message: format!("expected {what}"),
            }),
        }
    }

    fn here_or_last(&self) -> SourceSpan {
        if self.pos > 0 && self.pos > self.toks.len().saturating_sub(1) {
            self.toks
                .last()
                .map(|(_, s)| *s)
                .unwrap_or(SourceSpan { start: self.eof, end: self.eof })
        } else {
            self.here()
        }
    }

    fn fail<T>(&self, message: impl Into<String>) -> Result<T, SurfaceError> {
        Err(SurfaceError::Parse {
            span: self.here_or_last(),
            message: message.into(),
        })
    }

    fn at_end(&self) -> bool {
        self.pos >= self.toks.len()
    }

    fn expect_end(&self) -> Result<(), SurfaceError> {
        if self.at_end() {
            Ok(())
        } else {
            Err(SurfaceError::Parse {
                span: self.here(),
                message: "unexpected trailing input".to_string(),
            })
        }
    }

    // type ::= tyatom ("->" type)?
    fn ty(&mut self) -> Result<Type, SurfaceError> {
        let lhs = self.ty_atom()?;
        if self.peek() == Some(&Tok::Arrow) {
            self.bump();
            let rhs = self.ty()?;
            Ok(Type::fun(lhs, rhs))
        } else {
            Ok(lhs)
        }
    }

    fn ty_atom(&mut self) -> Result<Type, SurfaceError> {
        match self.bump() {
            Some((Tok::KwO, _)) => Ok(Type::O),
            Some((Tok::LParen, _)) => {
                let inner = self.ty()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(inner)
            }
            Some((t, s)) => Err(SurfaceError::Parse {
                span: s,
                message: format!("expected a type, found {t:?}"),
            }),
            None => self.fail("expected a type, found end of input"),
        }
    }

    // term ::= lambda | atom+
    fn term(&mut self) -> Result<NamedTerm, SurfaceError> {
        if self.peek() == Some(&Tok::Lambda) {
            return self.lambda();
        }
        let mut acc = self.atom()?;
        while matches!(
            self.peek(),
            Some(Tok::KwYes | Tok::KwNo | Tok::Ident(_) | Tok::LParen)
        ) {
            let arg = self.atom()?;
            acc = NamedTerm::App(Box::new(acc), Box::new(arg));
        }
        Ok(acc)
    }

    fn lambda(&mut self) -> Result<NamedTerm, SurfaceError> {
        self.expect(Tok::Lambda, "`\\`")?;
        let (name, _) = self.ident("a binder name")?;
        self.expect(Tok::Colon, "`:` after the binder name")?;
        let annot = self.ty()?;
        self.expect(Tok::Dot, "`.` after the binder annotation")?;
        let body = self.term()?;
        Ok(NamedTerm::Lam(name, annot, Box::new(body)))
    }

    fn atom(&mut self) -> Result<NamedTerm, SurfaceError> {
        match self.bump() {
            Some((Tok::KwYes, _)) => Ok(NamedTerm::Yes),
            Some((Tok::KwNo, _)) => Ok(NamedTerm::No),
            Some((Tok::Ident(n), s)) => Ok(NamedTerm::Var(n, s)),
            Some((Tok::LParen, _)) => {
                let inner = self.term()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(inner)
            }
            Some((t, s)) => Err(SurfaceError::Parse {
                span: s,
                message: format!("expected a term, found {t:?}"),
            }),
            None => self.fail("expected a term, found end of input"),
        }
    }

    fn ident(&mut self, what: &str) -> Result<(String, SourceSpan), SurfaceError> {
        match self.bump() {
            Some((Tok::Ident(n), s)) => Ok((n, s)),
            _ => Err(SurfaceError::Parse {
                span: self.here_or_last(),
                message: format!("expected {what}"),
            }),
        }
    }

    // mexpr ::= "eps" | "(" "gen" ident ")" | "(" "mu" mexpr mexpr ")"
    fn mexpr(&mut self) -> Result<MonExpr, SurfaceError> {
        match self.bump() {
            Some((Tok::Ident(word), s)) => {
                if word == "eps" {
                    Ok(MonExpr::Eps)
                } else {
                    Err(SurfaceError::Parse {
                        span: s,
                        message: format!("expected a monoid expression, found `{word}`"),
                    })
                }
            }
            Some((Tok::LParen, _)) => {
                let (head, hs) = self.ident("`gen` or `mu`")?;
                let out = match head.as_str() {
                    "gen" => {
                        let (sym, _) = self.ident("a generator symbol")?;
                        MonExpr::Gen(sym)
                    }
                    "mu" => {
                        let l = self.mexpr()?;
                        let r = self.mexpr()?;
                        MonExpr::mu(l, r)
                    }
                    other => {
                        return Err(SurfaceError::Parse {
                            span: hs,
                            message: format!("expected `gen` or `mu`, found `{other}`"),
                        })
                    }
                };
                self.expect(Tok::RParen, "`)`")?;
                Ok(out)
            }
            Some((t, s)) => Err(SurfaceError::Parse {
                span: s,
                message: format!("expected a monoid expression, found {t:?}"),
            }),
            None => self.fail("expected a monoid expression, found end of input"),
        }
    }
}

/// Parse a type from source text.
pub fn parse_type(src: &str) -> Result<Type, SurfaceError> {
    let mut p = Parser::new(src)?;
    let ty = p.ty()?;
    p.expect_end()?;
    Ok(ty)
}

/// Parse a term into named form.
pub fn parse_term(src: &str) -> Result<NamedTerm, SurfaceError> {
    let mut p = Parser::new(src)?;
    let t = p.term()?;
    p.expect_end()?;
    Ok(t)
}

/// Parse a monoid expression in prefix form, e.g. `(mu (gen a) eps)`.
pub fn parse_mon_expr(src: &str) -> Result<MonExpr, SurfaceError> {
    let mut p = Parser::new(src)?;
    let e = p.mexpr()?;
    p.expect_end()?;
    Ok(e)
}

/// True iff `s` is a legal identifier (and not a keyword).
pub fn is_ident(s: &str) -> bool {
    matches!(tokenize(s).as_deref(), Ok([(Tok::Ident(_), _)]))
}

/// Convert a named term to de Bruijn form against `ctx_names`
/// (outermost first).
pub fn resolve(ctx_names: &[String], t: &NamedTerm) -> Result<Term, SurfaceError> {
    fn go(scope: &mut Vec<String>, t: &NamedTerm) -> Result<Term, SurfaceError> {
        match t {
            NamedTerm::Yes => Ok(Term::Yes),
            NamedTerm::No => Ok(Term::No),
            NamedTerm::Var(name, span) => {
                match scope.iter().rev().position(|n| n == name) {
                    Some(i) => Ok(Term::var(i)),
                    None => Err(SurfaceError::UnknownIdentifier {
                        name: name.clone(),
                        span: *span,
                    }),
                }
            }
            NamedTerm::Lam(name, annot, body) => {
                scope.push(name.clone());
                let body = go(scope, body);
                scope.pop();
                Ok(Term::lam(annot.clone(), body?))
            }
            NamedTerm::App(f, u) => Ok(Term::app(go(scope, f)?, go(scope, u)?)),
        }
    }
    let mut scope = ctx_names.to_vec();
    go(&mut scope, t)
}

/// Parse and resolve in one go.
pub fn parse_term_in(ctx_names: &[String], src: &str) -> Result<Term, SurfaceError> {
    resolve(ctx_names, &parse_term(src)?)
}

/// Print a type with minimal parentheses.
pub fn print_type(ty: &Type) -> String {
    ty.to_string()
}

/// Print a normal type.
pub fn print_nftp(n: &crate::nf::NfTp) -> String {
    erase_nftp(n).to_string()
}

fn fresh_name(scope: &[String]) -> String {
    if !scope.iter().any(|n| n == "x") {
        return "x".to_string();
    }
    let mut k = 1usize;
    loop {
        let cand = format!("x{k}");
        if !scope.contains(&cand) {
            return cand;
        }
        k += 1;
    }
}

// precedence: 0 = anywhere, 1 = function position, 2 = argument position
fn print_term_prec(scope: &mut Vec<String>, t: &Term, prec: u8) -> String {
    match t {
        Term::Yes => "yes".to_string(),
        Term::No => "no".to_string(),
        Term::Var(Idx(i)) => {
            if *i < scope.len() {
                scope[scope.len() - 1 - i].clone()
            } else {
                format!("#{i}")
            }
        }
        Term::Lam(annot, body) => {
            let name = fresh_name(scope);
            scope.push(name.clone());
            let body = print_term_prec(scope, body, 0);
            scope.pop();
            let s = format!("\\{name}:{annot}. {body}");
            if prec > 0 {
                format!("({s})")
            } else {
                s
            }
        }
        Term::App(f, u) => {
            let fs = print_term_prec(scope, f, 1);
            let us = print_term_prec(scope, u, 2);
            let s = format!("{fs} {us}");
            if prec > 1 {
                format!("({s})")
            } else {
                s
            }
        }
    }
}

/// Print a term, naming free variables from `ctx_names` (outermost first)
/// and choosing fresh binder names deterministically.
pub fn print_term(ctx_names: &[String], t: &Term) -> String {
    let mut scope = ctx_names.to_vec();
    print_term_prec(&mut scope, t, 0)
}

fn print_nf_prec(scope: &mut Vec<String>, n: &NfTm, prec: u8) -> String {
    match n {
        NfTm::Yes => "yes".to_string(),
        NfTm::No => "no".to_string(),
        NfTm::Ne { ne } => print_ne_prec(scope, ne, prec),
        NfTm::Lam { dom, body, .. } => {
            let name = fresh_name(scope);
            scope.push(name.clone());
            let body = print_nf_prec(scope, body, 0);
            scope.pop();
            let s = format!("\\{name}:{}. {body}", erase_nftp(dom));
            if prec > 0 {
                format!("({s})")
            } else {
                s
            }
        }
    }
}

fn print_ne_prec(scope: &mut Vec<String>, e: &NeTm, prec: u8) -> String {
    match e {
        NeTm::Var { level, .. } => {
            if *level < scope.len() {
                scope[*level].clone()
            } else {
                format!("#l{level}")
            }
        }
        NeTm::App { fun, arg, .. } => {
            let fs = print_ne_prec(scope, fun, 1);
            let us = print_nf_prec(scope, arg, 2);
            let s = format!("{fs} {us}");
            if prec > 1 {
                format!("({s})")
            } else {
                s
            }
        }
    }
}

/// Print a normal form, naming spine heads from `ctx_names` by level.
pub fn print_nf(ctx_names: &[String], n: &NfTm) -> String {
    let mut scope = ctx_names.to_vec();
    print_nf_prec(&mut scope, n, 0)
}
