//! Polynomial text syntax: variables `k1..kp`, integer and rational
//! constants, `+ - * / ^`, parentheses, and rising factorials written
//! `poch(expr, m)` or `(expr)_m`. Division is only allowed by constants.

use crate::error::{Error, Result};
use crate::exact::{MPoly, Rat, UPoly};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(rug::Integer),
    Var(usize),
    Poch,
    Op(char),
}

fn tokenize(text: &str, p: usize) -> Result<Vec<Tok>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            out.push(Tok::Num(s.parse().unwrap()));
        } else if c.is_ascii_alphabetic() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_alphanumeric() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            if s == "poch" {
                out.push(Tok::Poch);
            } else if let Some(idx) = s.strip_prefix('k').and_then(|d| d.parse::<usize>().ok()) {
                if idx == 0 || idx > p {
                    return Err(Error::Parse(format!("variable {s} out of range for depth {p}")));
                }
                out.push(Tok::Var(idx - 1));
            } else {
                return Err(Error::Parse(format!("unknown identifier {s}")));
            }
        } else if "+-*/^(),_".contains(c) {
            out.push(Tok::Op(c));
            i += 1;
        } else {
            return Err(Error::Parse(format!("unexpected character {c:?}")));
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Tok>,
    pos: usize,
    p: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Op(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(Error::Parse(format!("expected {c:?} at token {}", self.pos)))
        }
    }

    fn small_int(&mut self) -> Result<u32> {
        match self.toks.get(self.pos) {
            Some(Tok::Num(n)) => {
                let v = n.to_u32().ok_or_else(|| Error::Parse("exponent too large".into()))?;
                self.pos += 1;
                Ok(v)
            }
            _ => Err(Error::Parse(format!("expected an integer at token {}", self.pos))),
        }
    }

    fn expr(&mut self) -> Result<MPoly> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = acc.add(&self.term()?);
            } else if self.eat('-') {
                acc = acc.sub(&self.term()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<MPoly> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                acc = acc.mul(&self.unary()?);
            } else if self.eat('/') {
                let d = self.unary()?;
                let c = constant_value(&d)
                    .ok_or_else(|| Error::Parse("division by a non-constant polynomial".into()))?;
                if c == 0 {
                    return Err(Error::Parse("division by zero".into()));
                }
                acc = acc.scale(&(Rat::from(1) / c));
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<MPoly> {
        if self.eat('-') {
            return Ok(self.unary()?.neg());
        }
        if self.eat('+') {
            return self.unary();
        }
        let base = self.atom()?;
        if self.eat('^') {
            let e = self.small_int()?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<MPoly> {
        match self.toks.get(self.pos).cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Ok(MPoly::constant(self.p, Rat::from(n)))
            }
            Some(Tok::Var(i)) => {
                self.pos += 1;
                Ok(MPoly::var(self.p, i))
            }
            Some(Tok::Poch) => {
                self.pos += 1;
                self.expect('(')?;
                let inner = self.expr()?;
                self.expect(',')?;
                let m = self.small_int()?;
                self.expect(')')?;
                Ok(rising(&inner, m))
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let inner = self.expr()?;
                self.expect(')')?;
                if self.eat('_') {
                    let m = self.small_int()?;
                    return Ok(rising(&inner, m));
                }
                Ok(inner)
            }
            other => Err(Error::Parse(format!("unexpected token {other:?}"))),
        }
    }
}

fn constant_value(p: &MPoly) -> Option<Rat> {
    match p.total_degree() {
        None => Some(Rat::new()),
        Some(0) => Some(p.terms().next().unwrap().1.clone()),
        _ => None,
    }
}

/// `(q)_m = q (q+1) ... (q+m-1)`.
fn rising(q: &MPoly, m: u32) -> MPoly {
    let mut u = UPoly::constant(Rat::from(1));
    for t in 0..m {
        u = u.mul(&UPoly::from_coeffs(vec![Rat::from(t), Rat::from(1)]));
    }
    u.compose_mpoly(q)
}

/// Parse a polynomial in `k1..kp`.
pub fn parse_polynomial(text: &str, p: usize) -> Result<MPoly> {
    let toks = tokenize(text, p)?;
    let mut parser = Parser { toks, pos: 0, p };
    let out = parser.expr()?;
    if parser.pos != parser.toks.len() {
        return Err(Error::Parse(format!("trailing input at token {}", parser.pos)));
    }
    Ok(out)
}
