//! Polynomial text input.
//!
//! Accepts sums of products of integers, `x`, `y`, `g` (the field generator, extension fields
//! only) and parenthesized subexpressions, with `^` for non-negative integer powers and an
//! optional `*` between factors: `(g+1)*x*y^2 + g*y + 1`, `(1+x)^3*y^2 + x`. Integers are
//! reduced mod `p` and whitespace is insignificant.

use crate::error::{Error, Result};
use crate::gf::{FieldCtx, Fq};

use super::BPoly;

const MAX_EXPONENT: u64 = 1 << 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Tok {
    Num(u64),
    X,
    Y,
    G,
    Plus,
    Minus,
    Star,
    Caret,
    Open,
    Close,
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let tok = match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'0'..=b'9' => {
                let start = i;
                let mut v: u64 = 0;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    v = v
                        .checked_mul(10)
                        .and_then(|v| v.checked_add((bytes[i] - b'0') as u64))
                        .ok_or_else(|| Error::parse(start, "integer too large"))?;
                    i += 1;
                }
                out.push((start, Tok::Num(v)));
                continue;
            }
            b'x' | b'X' => Tok::X,
            b'y' | b'Y' => Tok::Y,
            b'g' | b'G' => Tok::G,
            b'+' => Tok::Plus,
            b'-' => Tok::Minus,
            b'*' => Tok::Star,
            b'^' => Tok::Caret,
            b'(' => Tok::Open,
            b')' => Tok::Close,
            _ => return Err(Error::parse(i, format!("unexpected character {:?}", c as char))),
        };
        out.push((i, tok));
        i += 1;
    }
    Ok(out)
}

struct Parser<'a> {
    field: &'a FieldCtx,
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<Tok> {
        self.toks.get(self.pos).map(|t| t.1)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |t| t.0)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.peek();
        self.pos += 1;
        t
    }

    fn expr(&mut self) -> Result<BPoly> {
        let mut acc = BPoly::zero(self.field);
        let mut negate = match self.peek() {
            Some(Tok::Minus) => {
                self.bump();
                true
            }
            Some(Tok::Plus) => {
                self.bump();
                false
            }
            _ => false,
        };
        loop {
            let t = self.term()?;
            acc = if negate { &acc - &t } else { &acc + &t };
            match self.peek() {
                Some(Tok::Plus) => negate = false,
                Some(Tok::Minus) => negate = true,
                _ => return Ok(acc),
            }
            self.bump();
        }
    }

    fn term(&mut self) -> Result<BPoly> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.bump();
                }
                Some(Tok::Num(_) | Tok::X | Tok::Y | Tok::G | Tok::Open) => {}
                _ => return Ok(acc),
            }
            let f = self.factor()?;
            acc = &acc * &f;
        }
    }

    fn factor(&mut self) -> Result<BPoly> {
        let base = self.atom()?;
        if self.peek() != Some(Tok::Caret) {
            return Ok(base);
        }
        self.bump();
        let at = self.offset();
        match self.bump() {
            Some(Tok::Num(k)) if k <= MAX_EXPONENT => Ok(base.pow(k)),
            Some(Tok::Num(_)) => Err(Error::parse(at, "exponent too large")),
            _ => Err(Error::parse(at, "expected a non-negative integer exponent")),
        }
    }

    fn atom(&mut self) -> Result<BPoly> {
        let f = self.field;
        let at = self.offset();
        match self.bump() {
            Some(Tok::Num(v)) => Ok(BPoly::constant(f, f.from_int((v % f.p() as u64) as i64))),
            Some(Tok::X) => Ok(BPoly::x(f)),
            Some(Tok::Y) => Ok(BPoly::y(f)),
            Some(Tok::G) if f.e() > 1 => Ok(BPoly::constant(f, f.generator())),
            Some(Tok::G) => Err(Error::parse(at, "g is only defined for extension fields")),
            Some(Tok::Open) => {
                let inner = self.expr()?;
                let close = self.offset();
                match self.bump() {
                    Some(Tok::Close) => Ok(inner),
                    _ => Err(Error::parse(close, "expected ')'")),
                }
            }
            Some(t) => Err(Error::parse(at, format!("unexpected token {t:?}"))),
            None => Err(Error::parse(at, "unexpected end of input")),
        }
    }
}

/// Parses a polynomial in `x`, `y` over `field`.
pub fn parse_poly(field: &FieldCtx, text: &str) -> Result<BPoly> {
    let toks = lex(text)?;
    if toks.is_empty() {
        return Err(Error::parse(0, "empty polynomial"));
    }
    let mut p = Parser { field, toks, pos: 0, end: text.len() };
    let out = p.expr()?;
    if p.pos < p.toks.len() {
        return Err(Error::parse(p.offset(), "trailing input"));
    }
    Ok(out)
}

/// Parses a field element (an integer or a polynomial in `g`).
pub fn parse_element(field: &FieldCtx, text: &str) -> Result<Fq> {
    let p = parse_poly(field, text)?;
    if p.terms().any(|((i, j), _)| i > 0 || j > 0) {
        return Err(Error::parse(0, "expected a field element"));
    }
    Ok(p.coeff(0, 0))
}
