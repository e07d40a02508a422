//! Granular expressions over named memberships.
//!
//! Grammar, loosest to tightest:
//!
//! ```text
//! expr    := meet ('|' meet)*
//! meet    := unary ('&' unary)*
//! unary   := '!' unary | atom
//! atom    := IDENT | 'TOP' | 'BOT' | '(' expr ')'
//! IDENT   := [A-Za-z_][A-Za-z0-9_]*
//! ```

use alloc::boxed::Box;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use super::{MembershipEnv, RelalgError};
use crate::bitrop::Bitrop;
use crate::subset::Subset;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum GranularExpr {
    Name(String),
    /// The center `τ`: every key.
    Top,
    /// No key.
    Bottom,
    Join(Box<GranularExpr>, Box<GranularExpr>),
    Meet(Box<GranularExpr>, Box<GranularExpr>),
    Complement(Box<GranularExpr>),
}

impl GranularExpr {
    pub fn name(n: impl Into<String>) -> Self {
        GranularExpr::Name(n.into())
    }

    pub fn join(a: GranularExpr, b: GranularExpr) -> Self {
        GranularExpr::Join(Box::new(a), Box::new(b))
    }

    pub fn meet(a: GranularExpr, b: GranularExpr) -> Self {
        GranularExpr::Meet(Box::new(a), Box::new(b))
    }

    pub fn complement(a: GranularExpr) -> Self {
        GranularExpr::Complement(Box::new(a))
    }

    /// Evaluates in the subset bitrop of `env`: join is `⊕`, meet is `⊗`,
    /// `TOP` is `τ`.
    pub fn eval(&self, env: &MembershipEnv) -> Result<Subset, RelalgError> {
        let b = env.bitrop();
        let algebra = |r: Result<Subset, crate::AlgebraError>| r.map_err(RelalgError::Algebra);
        Ok(match self {
            GranularExpr::Name(n) => {
                env.granular(n)
                    .cloned()
                    .ok_or_else(|| RelalgError::UnknownName {
                        name: n.clone(),
                        known: env.names().map(ToString::to_string).collect(),
                    })?
            }
            GranularExpr::Top => b.tau(),
            GranularExpr::Bottom => b.bottom(),
            GranularExpr::Join(l, r) => algebra(b.oplus(&l.eval(env)?, &r.eval(env)?))?,
            GranularExpr::Meet(l, r) => algebra(b.otimes(&l.eval(env)?, &r.eval(env)?))?,
            GranularExpr::Complement(e) => algebra(b.complement(&e.eval(env)?))?,
        })
    }

    fn precedence(&self) -> u8 {
        match self {
            GranularExpr::Join(..) => 1,
            GranularExpr::Meet(..) => 2,
            GranularExpr::Complement(_) => 3,
            _ => 4,
        }
    }

    fn fmt_operand(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        if self.precedence() < min {
            write!(f, "({self})")
        } else {
            write!(f, "{self}")
        }
    }
}

/// Prints with the fewest parentheses that reparse to the same tree.
/// Binary operators associate to the left.
impl fmt::Display for GranularExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GranularExpr::Name(n) => f.write_str(n),
            GranularExpr::Top => f.write_str("TOP"),
            GranularExpr::Bottom => f.write_str("BOT"),
            GranularExpr::Join(l, r) => {
                l.fmt_operand(f, 1)?;
                f.write_str(" | ")?;
                r.fmt_operand(f, 2)
            }
            GranularExpr::Meet(l, r) => {
                l.fmt_operand(f, 2)?;
                f.write_str(" & ")?;
                r.fmt_operand(f, 3)
            }
            GranularExpr::Complement(e) => {
                f.write_str("!")?;
                e.fmt_operand(f, 3)
            }
        }
    }
}

/// A syntax error at byte offset `position`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub position: usize,
    pub found: String,
    pub expected: Vec<&'static str>,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "at column {}: found {}, expected ",
            self.position + 1,
            self.found
        )?;
        for (i, e) in self.expected.iter().enumerate() {
            if i > 0 {
                f.write_str(if i + 1 == self.expected.len() {
                    " or "
                } else {
                    ", "
                })?;
            }
            f.write_str(e)?;
        }
        Ok(())
    }
}

impl core::error::Error for ParseError {}

const OPERAND: &[&str] = &["identifier", "TOP", "BOT", "`!`", "`(`"];
const OPERATOR: &[&str] = &["`&`", "`|`", "`)`", "end of input"];

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok<'a> {
    Ident(&'a str),
    Top,
    Bot,
    And,
    Or,
    Not,
    Open,
    Close,
    End,
}

impl Tok<'_> {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => alloc::format!("identifier `{s}`"),
            Tok::Top => "TOP".into(),
            Tok::Bot => "BOT".into(),
            Tok::And => "`&`".into(),
            Tok::Or => "`|`".into(),
            Tok::Not => "`!`".into(),
            Tok::Open => "`(`".into(),
            Tok::Close => "`)`".into(),
            Tok::End => "end of input".into(),
        }
    }
}

fn lex(text: &str) -> Result<Vec<(usize, Tok<'_>)>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let tok = match c {
            b' ' | b'\t' | b'\r' | b'\n' => {
                i += 1;
                continue;
            }
            b'&' => Tok::And,
            b'|' => Tok::Or,
            b'!' => Tok::Not,
            b'(' => Tok::Open,
            b')' => Tok::Close,
            c if c.is_ascii_alphabetic() || c == b'_' => {
                let start = i;
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                let word = &text[start..i];
                out.push((
                    start,
                    match word {
                        "TOP" => Tok::Top,
                        "BOT" => Tok::Bot,
                        w => Tok::Ident(w),
                    },
                ));
                continue;
            }
            _ => {
                let ch = text[i..].chars().next().unwrap_or('?');
                return Err(ParseError {
                    position: i,
                    found: alloc::format!("character `{ch}`"),
                    expected: OPERAND.iter().chain(OPERATOR).copied().collect(),
                });
            }
        };
        out.push((i, tok));
        i += 1;
    }
    out.push((text.len(), Tok::End));
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(usize, Tok<'a>)>,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> &Tok<'a> {
        &self.toks[self.pos].1
    }

    fn error(&self, expected: &[&'static str]) -> ParseError {
        let (position, tok) = &self.toks[self.pos];
        ParseError {
            position: *position,
            found: tok.describe(),
            expected: expected.to_vec(),
        }
    }

    fn binary_prec(tok: &Tok<'_>) -> Option<u8> {
        match tok {
            Tok::Or => Some(1),
            Tok::And => Some(2),
            _ => None,
        }
    }

    /// Precedence climbing over `|` and `&`.
    fn expr(&mut self, min_prec: u8) -> Result<GranularExpr, ParseError> {
        let mut lhs = self.unary()?;
        while let Some(prec) = Self::binary_prec(self.peek()) {
            if prec < min_prec {
                break;
            }
            let op = self.peek().clone();
            self.pos += 1;
            let rhs = self.expr(prec + 1)?;
            lhs = match op {
                Tok::Or => GranularExpr::join(lhs, rhs),
                _ => GranularExpr::meet(lhs, rhs),
            };
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<GranularExpr, ParseError> {
        let tok = self.peek().clone();
        self.pos += 1;
        match tok {
            Tok::Not => Ok(GranularExpr::complement(self.unary()?)),
            Tok::Ident(name) => Ok(GranularExpr::name(name)),
            Tok::Top => Ok(GranularExpr::Top),
            Tok::Bot => Ok(GranularExpr::Bottom),
            Tok::Open => {
                let inner = self.expr(1)?;
                if *self.peek() != Tok::Close {
                    return Err(self.error(&["`&`", "`|`", "`)`"]));
                }
                self.pos += 1;
                Ok(inner)
            }
            _ => {
                self.pos -= 1;
                Err(self.error(OPERAND))
            }
        }
    }
}

/// Parses a granular expression. `!` binds tighter than `&`, which binds
/// tighter than `|`.
pub fn parse_granular(text: &str) -> Result<GranularExpr, ParseError> {
    let mut p = Parser {
        toks: lex(text)?,
        pos: 0,
    };
    let e = p.expr(1)?;
    if *p.peek() != Tok::End {
        return Err(p.error(OPERATOR));
    }
    Ok(e)
}
