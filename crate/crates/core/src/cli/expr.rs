//! Value expressions for the `delta` command.
//!
//! ```text
//! expr   := meet (("\/" | "∨") meet)*
//! meet   := tensor (("/\" | "∧") tensor)*
//! tensor := hom (("*" | "⊗") hom)*
//! hom    := atom (("-o" | "⊸") hom | ("o-" | "⟜") atom)?
//! atom   := literal | "k" | "bot" | "top" | "(" expr ")"
//! query  := expr ("@" point)?
//! ```
//! `@ t` evaluates a distance distribution at `t ∈ [0,inf]`.

use crate::error::{Error, Result};
use crate::quantale::{Ext, QValue, Quantale};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Lit(String),
    Op(&'static str),
    Open,
    Close,
    At,
}

const OPS: [(&str, &str); 12] = [
    ("\\/", "join"),
    ("∨", "join"),
    ("/\\", "meet"),
    ("∧", "meet"),
    ("*", "tensor"),
    ("⊗", "tensor"),
    ("-o", "lhom"),
    ("⊸", "lhom"),
    ("o-", "rhom"),
    ("⟜", "rhom"),
    ("@", "@"),
    ("·", "tensor"),
];

fn err(col: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line: 1, col, msg: msg.into() }
}

fn lex(src: &str) -> Result<Vec<(usize, Tok)>> {
    let chars: Vec<(usize, char)> = src.char_indices().collect();
    let col_of = |i: usize| src[..i].chars().count() + 1;
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let (b, c) = chars[i];
        let rest = &src[b..];
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if c == '[' {
            let close = rest.find(']').ok_or_else(|| err(col_of(b), "unterminated step-function literal"))?;
            out.push((col_of(b), Tok::Lit(rest[..=close].to_string())));
            while i < chars.len() && chars[i].0 <= b + close {
                i += 1;
            }
            continue;
        }
        if c == '(' || c == ')' {
            out.push((col_of(b), if c == '(' { Tok::Open } else { Tok::Close }));
            i += 1;
            continue;
        }
        if let Some((op, name)) = OPS.iter().find(|(op, _)| rest.starts_with(op)) {
            let tok = if *name == "@" { Tok::At } else { Tok::Op(name) };
            out.push((col_of(b), tok));
            let end = b + op.len();
            while i < chars.len() && chars[i].0 < end {
                i += 1;
            }
            continue;
        }
        let start = i;
        while i < chars.len() {
            let (bb, cc) = chars[i];
            let r = &src[bb..];
            if cc.is_whitespace() || "()[".contains(cc) || (i > start && OPS.iter().any(|(op, _)| r.starts_with(op))) {
                break;
            }
            i += 1;
        }
        let end = chars.get(i).map_or(src.len(), |x| x.0);
        out.push((col_of(b), Tok::Lit(src[b..end].to_string())));
    }
    Ok(out)
}

struct Parser {
    q: Quantale,
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.1)
    }

    fn col(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |t| t.0)
    }

    fn binary(&mut self, name: &str, next: fn(&mut Self) -> Result<QValue>) -> Result<QValue> {
        let mut acc = next(self)?;
        while matches!(self.peek(), Some(Tok::Op(n)) if *n == name) {
            self.pos += 1;
            let rhs = next(self)?;
            acc = match name {
                "join" => self.q.join(&acc, &rhs)?,
                "meet" => self.q.meet(&acc, &rhs)?,
                _ => self.q.tensor(&acc, &rhs)?,
            };
        }
        Ok(acc)
    }

    fn expr(&mut self) -> Result<QValue> {
        self.binary("join", Self::meet)
    }

    fn meet(&mut self) -> Result<QValue> {
        self.binary("meet", Self::tensor)
    }

    fn tensor(&mut self) -> Result<QValue> {
        self.binary("tensor", Self::hom)
    }

    fn hom(&mut self) -> Result<QValue> {
        let lhs = self.atom()?;
        match self.peek() {
            Some(Tok::Op("lhom")) => {
                self.pos += 1;
                let rhs = self.hom()?;
                self.q.lhom(&lhs, &rhs)
            }
            Some(Tok::Op("rhom")) => {
                self.pos += 1;
                let rhs = self.atom()?;
                self.q.rhom(&lhs, &rhs)
            }
            _ => Ok(lhs),
        }
    }

    fn atom(&mut self) -> Result<QValue> {
        let col = self.col();
        let tok = self.toks.get(self.pos).map(|t| t.1.clone()).ok_or_else(|| err(col, "expected a value"))?;
        self.pos += 1;
        match tok {
            Tok::Open => {
                let v = self.expr()?;
                if self.peek() != Some(&Tok::Close) {
                    return Err(err(self.col(), "expected `)`"));
                }
                self.pos += 1;
                Ok(v)
            }
            Tok::Lit(s) => match s.as_str() {
                "k" => Ok(self.q.unit()),
                "bot" | "⊥" => Ok(self.q.bottom()),
                "top" | "⊤" => Ok(self.q.top()),
                _ => self.q.parse_value(&s).map_err(|e| err(col, e.to_string())),
            },
            other => Err(err(col, format!("unexpected {other:?}"))),
        }
    }
}

/// Result of an expression, optionally evaluated at a point.
#[derive(Clone, Debug, PartialEq)]
pub struct Evaluated {
    pub value: QValue,
    pub at: Option<(Ext, String)>,
}

pub fn evaluate(q: Quantale, src: &str) -> Result<Evaluated> {
    let toks = lex(src)?;
    if toks.is_empty() {
        return Err(err(1, "empty expression"));
    }
    let mut p = Parser { q, toks, pos: 0, end: src.chars().count() + 1 };
    let value = p.expr()?;
    let at = if p.peek() == Some(&Tok::At) {
        p.pos += 1;
        let col = p.col();
        let Some((_, Tok::Lit(t))) = p.toks.get(p.pos).cloned() else {
            return Err(err(col, "expected an evaluation point after `@`"));
        };
        p.pos += 1;
        let point: Ext = t.parse().map_err(|e: Error| err(col, e.to_string()))?;
        let QValue::Step(f) = &value else {
            return Err(err(col, format!("`@` applies to distance distributions, not {q}")));
        };
        let level = f.eval(&point).map_err(|e| err(col, e.to_string()))?;
        Some((point, level.to_string()))
    } else {
        None
    };
    if p.pos < p.toks.len() {
        return Err(err(p.col(), "trailing input"));
    }
    Ok(Evaluated { value, at })
}
