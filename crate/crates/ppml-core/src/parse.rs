//! Text front-end for formulas.
//!
//! Grammar (ASCII): `T` top, `F` bottom, identifiers are atoms, `!f`
//! negation, `f & g` conjunction (left-associative, loosest), `<>f` diamond,
//! `<n>f` graded diamond with `n >= 1`, parentheses. The data dialect swaps
//! the diamonds for `<=>f` and `<!=>f`. Printing the AST and reparsing is the
//! identity; parsing and reprinting canonicalises spacing.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::num::NonZeroU32;

use crate::syntax::{DataGlFormula, PpmlFormula};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("parse error at byte {position}: {message}")]
pub struct ParseError {
    pub position: usize,
    pub message: String,
}

fn err<T>(position: usize, message: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError {
        position,
        message: message.into(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Token {
    Ident(String),
    Bang,
    Amp,
    LParen,
    RParen,
    Diamond,
    Graded(NonZeroU32),
    DiamondEq,
    DiamondNeq,
}

impl fmt::Display for Token {
    fn fmt(&self, w: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Token::Ident(s) => write!(w, "`{s}`"),
            Token::Bang => write!(w, "`!`"),
            Token::Amp => write!(w, "`&`"),
            Token::LParen => write!(w, "`(`"),
            Token::RParen => write!(w, "`)`"),
            Token::Diamond => write!(w, "`<>`"),
            Token::Graded(n) => write!(w, "`<{n}>`"),
            Token::DiamondEq => write!(w, "`<=>`"),
            Token::DiamondNeq => write!(w, "`<!=>`"),
        }
    }
}

fn is_ident_start(c: u8) -> bool {
    c.is_ascii_alphabetic()
}

fn is_ident_char(c: u8) -> bool {
    c.is_ascii_alphanumeric() || c == b'_' || c == b'='
}

fn lex(text: &str) -> Result<Vec<(usize, Token)>, ParseError> {
    let bytes = text.as_bytes();
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        match c {
            b' ' | b'\t' | b'\r' | b'\n' => i += 1,
            b'!' => {
                tokens.push((i, Token::Bang));
                i += 1;
            }
            b'&' => {
                tokens.push((i, Token::Amp));
                i += 1;
            }
            b'(' => {
                tokens.push((i, Token::LParen));
                i += 1;
            }
            b')' => {
                tokens.push((i, Token::RParen));
                i += 1;
            }
            b'<' => {
                let start = i;
                i += 1;
                if bytes.get(i) == Some(&b'>') {
                    tokens.push((start, Token::Diamond));
                    i += 1;
                } else if bytes.get(i) == Some(&b'=') && bytes.get(i + 1) == Some(&b'>') {
                    tokens.push((start, Token::DiamondEq));
                    i += 2;
                } else if bytes.get(i) == Some(&b'!')
                    && bytes.get(i + 1) == Some(&b'=')
                    && bytes.get(i + 2) == Some(&b'>')
                {
                    tokens.push((start, Token::DiamondNeq));
                    i += 3;
                } else if bytes.get(i).is_some_and(u8::is_ascii_digit) {
                    let digits_start = i;
                    while bytes.get(i).is_some_and(u8::is_ascii_digit) {
                        i += 1;
                    }
                    if bytes.get(i) != Some(&b'>') {
                        return err(i, "expected `>` after graded diamond count");
                    }
                    let n: u32 = text[digits_start..i]
                        .parse()
                        .map_err(|_| ParseError {
                            position: digits_start,
                            message: "graded diamond count out of range".into(),
                        })?;
                    let n = NonZeroU32::new(n).ok_or(ParseError {
                        position: digits_start,
                        message: "graded diamond count must be >= 1".into(),
                    })?;
                    tokens.push((start, Token::Graded(n)));
                    i += 1;
                } else {
                    return err(start, "malformed diamond: expected `<>`, `<n>`, `<=>` or `<!=>`");
                }
            }
            c if is_ident_start(c) => {
                let start = i;
                while bytes.get(i).copied().is_some_and(is_ident_char) {
                    i += 1;
                }
                tokens.push((start, Token::Ident(text[start..i].to_string())));
            }
            _ => return err(i, alloc::format!("unexpected character `{}`", text[i..].chars().next().unwrap())),
        }
    }
    Ok(tokens)
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Dialect {
    Ppml,
    Datagl,
}

struct Parser {
    tokens: Vec<(usize, Token)>,
    pos: usize,
    end: usize,
    dialect: Dialect,
}

/// A parsed formula in either dialect, shared by diamond-free syntax.
enum Ast {
    Top,
    Bot,
    Atom(String),
    Not(alloc::boxed::Box<Ast>),
    And(alloc::boxed::Box<Ast>, alloc::boxed::Box<Ast>),
    Diamond(alloc::boxed::Box<Ast>),
    Graded(NonZeroU32, alloc::boxed::Box<Ast>),
    DiamondEq(alloc::boxed::Box<Ast>),
    DiamondNeq(alloc::boxed::Box<Ast>),
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|(_, t)| t)
    }

    fn here(&self) -> usize {
        self.tokens
            .get(self.pos)
            .map(|&(p, _)| p)
            .unwrap_or(self.end)
    }

    fn advance(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).map(|(_, t)| t.clone());
        self.pos += 1;
        t
    }

    fn conjunction(&mut self) -> Result<Ast, ParseError> {
        let mut acc = self.unary()?;
        while self.peek() == Some(&Token::Amp) {
            self.advance();
            let rhs = self.unary()?;
            acc = Ast::And(alloc::boxed::Box::new(acc), alloc::boxed::Box::new(rhs));
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Ast, ParseError> {
        let position = self.here();
        match self.peek() {
            Some(Token::Bang) => {
                self.advance();
                Ok(Ast::Not(alloc::boxed::Box::new(self.unary()?)))
            }
            Some(Token::Diamond) if self.dialect == Dialect::Ppml => {
                self.advance();
                Ok(Ast::Diamond(alloc::boxed::Box::new(self.unary()?)))
            }
            Some(&Token::Graded(n)) if self.dialect == Dialect::Ppml => {
                self.advance();
                Ok(Ast::Graded(n, alloc::boxed::Box::new(self.unary()?)))
            }
            Some(Token::DiamondEq) if self.dialect == Dialect::Datagl => {
                self.advance();
                Ok(Ast::DiamondEq(alloc::boxed::Box::new(self.unary()?)))
            }
            Some(Token::DiamondNeq) if self.dialect == Dialect::Datagl => {
                self.advance();
                Ok(Ast::DiamondNeq(alloc::boxed::Box::new(self.unary()?)))
            }
            _ => self.primary(position),
        }
    }

    fn primary(&mut self, position: usize) -> Result<Ast, ParseError> {
        match self.advance() {
            Some(Token::Ident(name)) if name == "T" => Ok(Ast::Top),
            Some(Token::Ident(name)) if name == "F" => Ok(Ast::Bot),
            Some(Token::Ident(name)) => Ok(Ast::Atom(name)),
            Some(Token::LParen) => {
                let inner = self.conjunction()?;
                match self.advance() {
                    Some(Token::RParen) => Ok(inner),
                    Some(t) => err(self.tokens[self.pos - 1].0, alloc::format!("expected `)`, found {t}")),
                    None => err(self.end, "expected `)`, found end of input"),
                }
            }
            Some(t) => err(position, alloc::format!("expected a formula, found {t}")),
            None => err(position, "expected a formula, found end of input"),
        }
    }
}

fn parse(text: &str, dialect: Dialect) -> Result<Ast, ParseError> {
    let tokens = lex(text)?;
    let mut parser = Parser {
        tokens,
        pos: 0,
        end: text.len(),
        dialect,
    };
    let ast = parser.conjunction()?;
    if let Some(token) = parser.peek() {
        return err(parser.here(), alloc::format!("trailing input: {token}"));
    }
    Ok(ast)
}

fn to_ppml(ast: Ast) -> PpmlFormula {
    match ast {
        Ast::Top => PpmlFormula::Top,
        Ast::Bot => PpmlFormula::Bot,
        Ast::Atom(name) => PpmlFormula::Atom(name),
        Ast::Not(f) => PpmlFormula::not(to_ppml(*f)),
        Ast::And(l, r) => PpmlFormula::and(to_ppml(*l), to_ppml(*r)),
        Ast::Diamond(f) => PpmlFormula::diamond(to_ppml(*f)),
        Ast::Graded(n, f) => PpmlFormula::GradedDiamond(n, alloc::boxed::Box::new(to_ppml(*f))),
        Ast::DiamondEq(_) | Ast::DiamondNeq(_) => unreachable!("rejected by dialect"),
    }
}

fn to_datagl(ast: Ast) -> DataGlFormula {
    match ast {
        Ast::Top => DataGlFormula::Top,
        Ast::Bot => DataGlFormula::Bot,
        Ast::Atom(name) => DataGlFormula::Prop(name),
        Ast::Not(f) => DataGlFormula::not(to_datagl(*f)),
        Ast::And(l, r) => DataGlFormula::and(to_datagl(*l), to_datagl(*r)),
        Ast::DiamondEq(f) => DataGlFormula::diamond_eq(to_datagl(*f)),
        Ast::DiamondNeq(f) => DataGlFormula::diamond_neq(to_datagl(*f)),
        Ast::Diamond(_) | Ast::Graded(..) => unreachable!("rejected by dialect"),
    }
}

pub fn parse_ppml(text: &str) -> Result<PpmlFormula, ParseError> {
    parse(text, Dialect::Ppml).map(to_ppml)
}

pub fn parse_datagl(text: &str) -> Result<DataGlFormula, ParseError> {
    parse(text, Dialect::Datagl).map(to_datagl)
}
