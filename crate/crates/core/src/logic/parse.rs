//! Recursive-descent parser for the ASCII sentence syntax.
//!
//! ```text
//! formula := imp { "<->" imp }
//! imp     := or [ "->" imp ]
//! or      := and { "|" and }
//! and     := unary { "&" unary }
//! unary   := "!" unary | "(" formula ")" | quant | "true" | "false" | atom
//! quant   := ("forall" | "exists") var+ "." formula
//! atom    := NAME "(" var { "," var } ")" | var "=" var | var "!=" var
//! ```

use super::{as_universal, Formula, UniversalSentence};
use crate::error::{Error, Result};
use crate::structure::Signature;

pub const KEYWORDS: [&str; 4] = ["forall", "exists", "true", "false"];

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    LParen,
    RParen,
    Comma,
    Dot,
    Bang,
    Amp,
    Bar,
    Arrow,
    DoubleArrow,
    Equals,
    NotEquals,
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Dot => "`.`".into(),
            Tok::Bang => "`!`".into(),
            Tok::Amp => "`&`".into(),
            Tok::Bar => "`|`".into(),
            Tok::Arrow => "`->`".into(),
            Tok::DoubleArrow => "`<->`".into(),
            Tok::Equals => "`=`".into(),
            Tok::NotEquals => "`!=`".into(),
            Tok::End => "end of input".into(),
        }
    }
}

fn syntax(pos: usize, msg: impl Into<String>) -> Error {
    Error::Syntax {
        pos,
        msg: msg.into(),
    }
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let tok = match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b',' => Tok::Comma,
            b'.' => Tok::Dot,
            b'&' => Tok::Amp,
            b'|' => Tok::Bar,
            b'=' => Tok::Equals,
            b'!' if bytes.get(i + 1) == Some(&b'=') => {
                i += 1;
                Tok::NotEquals
            }
            b'!' => Tok::Bang,
            b'-' if bytes.get(i + 1) == Some(&b'>') => {
                i += 1;
                Tok::Arrow
            }
            b'<' if bytes[i..].starts_with(b"<->") => {
                i += 2;
                Tok::DoubleArrow
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                while i + 1 < bytes.len() && (bytes[i + 1].is_ascii_alphanumeric() || bytes[i + 1] == b'_') {
                    i += 1;
                }
                Tok::Ident(text[start..=i].to_string())
            }
            _ => {
                let ch = text[i..].chars().next().unwrap_or('?');
                return Err(syntax(start, format!("unexpected character `{ch}`")));
            }
        };
        out.push((start, tok));
        i += 1;
    }
    out.push((text.len(), Tok::End));
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    at: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].1
    }

    fn pos(&self) -> usize {
        self.toks[self.at].0
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.at].1.clone();
        if t != Tok::End {
            self.at += 1;
        }
        t
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == t {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, t: Tok) -> Result<()> {
        if self.eat(&t) {
            Ok(())
        } else {
            Err(syntax(
                self.pos(),
                format!("expected {}, found {}", t.describe(), self.peek().describe()),
            ))
        }
    }

    fn var(&mut self) -> Result<String> {
        let pos = self.pos();
        match self.bump() {
            Tok::Ident(s) if !KEYWORDS.contains(&s.as_str()) => Ok(s),
            Tok::Ident(s) => Err(syntax(pos, format!("keyword `{s}` cannot be a variable"))),
            t => Err(syntax(pos, format!("expected a variable, found {}", t.describe()))),
        }
    }

    fn formula(&mut self) -> Result<Formula> {
        let mut lhs = self.implication()?;
        while self.eat(&Tok::DoubleArrow) {
            let rhs = self.implication()?;
            lhs = Formula::iff(lhs, rhs);
        }
        Ok(lhs)
    }

    fn implication(&mut self) -> Result<Formula> {
        let lhs = self.disjunction()?;
        if self.eat(&Tok::Arrow) {
            let rhs = self.implication()?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> Result<Formula> {
        let first = self.conjunction()?;
        let mut parts = vec![first];
        while self.eat(&Tok::Bar) {
            parts.push(self.conjunction()?);
        }
        Ok(if parts.len() == 1 {
            parts.pop().unwrap()
        } else {
            Formula::Or(parts)
        })
    }

    fn conjunction(&mut self) -> Result<Formula> {
        let first = self.unary()?;
        let mut parts = vec![first];
        while self.eat(&Tok::Amp) {
            parts.push(self.unary()?);
        }
        Ok(if parts.len() == 1 {
            parts.pop().unwrap()
        } else {
            Formula::And(parts)
        })
    }

    fn unary(&mut self) -> Result<Formula> {
        let pos = self.pos();
        match self.peek().clone() {
            Tok::Bang => {
                self.bump();
                Ok(match self.unary()? {
                    Formula::Eq(a, b) => Formula::Neq(a, b),
                    f => Formula::not(f),
                })
            }
            Tok::LParen => {
                self.bump();
                let f = self.formula()?;
                self.expect(Tok::RParen)?;
                Ok(f)
            }
            Tok::Ident(word) if word == "forall" || word == "exists" => {
                self.bump();
                let mut vars = vec![self.var()?];
                while matches!(self.peek(), Tok::Ident(_)) {
                    vars.push(self.var()?);
                }
                self.expect(Tok::Dot)?;
                let body = self.formula()?;
                let vars: Vec<&str> = vars.iter().map(String::as_str).collect();
                Ok(if word == "forall" {
                    Formula::forall(&vars, body)
                } else {
                    Formula::exists(&vars, body)
                })
            }
            Tok::Ident(word) if word == "true" => {
                self.bump();
                Ok(Formula::And(vec![]))
            }
            Tok::Ident(word) if word == "false" => {
                self.bump();
                Ok(Formula::Or(vec![]))
            }
            Tok::Ident(name) => {
                self.bump();
                match self.bump() {
                    Tok::LParen => {
                        let mut args = vec![self.var()?];
                        while self.eat(&Tok::Comma) {
                            args.push(self.var()?);
                        }
                        self.expect(Tok::RParen)?;
                        Ok(Formula::Atom(name, args))
                    }
                    Tok::Equals => Ok(Formula::Eq(name, self.var()?)),
                    Tok::NotEquals => Ok(Formula::Neq(name, self.var()?)),
                    t => Err(syntax(
                        pos,
                        format!(
                            "expected `(`, `=` or `!=` after `{name}`, found {}",
                            t.describe()
                        ),
                    )),
                }
            }
            t => Err(syntax(pos, format!("expected a formula, found {}", t.describe()))),
        }
    }
}

fn check_atoms(f: &Formula, sig: &Signature) -> Result<()> {
    match f {
        Formula::Atom(p, args) => {
            let (_, decl) = sig.lookup(p)?;
            if decl.arity != args.len() {
                return Err(Error::ArityMismatch {
                    predicate: p.clone(),
                    expected: decl.arity,
                    found: args.len(),
                });
            }
            Ok(())
        }
        Formula::Eq(..) | Formula::Neq(..) => Ok(()),
        Formula::Not(g) | Formula::Forall(_, g) | Formula::Exists(_, g) => check_atoms(g, sig),
        Formula::And(gs) | Formula::Or(gs) => gs.iter().try_for_each(|g| check_atoms(g, sig)),
        Formula::Implies(a, b) | Formula::Iff(a, b) => {
            check_atoms(a, sig)?;
            check_atoms(b, sig)
        }
    }
}

/// Parses a closed formula, checks its atoms against `sig`, and renames bound
/// variables apart.
pub fn parse_sentence(text: &str, sig: &Signature) -> Result<Formula> {
    let mut p = Parser {
        toks: lex(text)?,
        at: 0,
    };
    let f = p.formula()?;
    if *p.peek() != Tok::End {
        return Err(syntax(
            p.pos(),
            format!("unexpected {} after formula", p.peek().describe()),
        ));
    }
    check_atoms(&f, sig)?;
    f.rename_apart()
}

/// [`parse_sentence`] followed by [`as_universal`].
pub fn parse_universal(text: &str, sig: &Signature) -> Result<UniversalSentence> {
    as_universal(&parse_sentence(text, sig)?)
}
