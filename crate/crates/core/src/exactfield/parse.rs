//! Polynomial expression parser: `+ - * / ^`, parentheses, integer literals, one
//! variable (any letter), and `a` as the adjoined generator of an extension field.

use num_bigint::BigInt;

use super::field::Field;
use super::poly::{self, Poly};
use super::FieldError;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(char),
    Op(char),
}

fn lex(s: &str) -> Result<Vec<Tok>, FieldError> {
    let mut out = Vec::new();
    let cs: Vec<char> = s.chars().collect();
    let mut i = 0;
    while i < cs.len() {
        let c = cs[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < cs.len() && cs[i].is_ascii_digit() {
                i += 1;
            }
            let lit: String = cs[start..i].iter().collect();
            out.push(Tok::Num(lit.parse().unwrap()));
        } else if c.is_ascii_alphabetic() {
            out.push(Tok::Ident(c));
            i += 1;
        } else if "+-*/^()".contains(c) {
            out.push(Tok::Op(c));
            i += 1;
        } else if c == '−' {
            out.push(Tok::Op('-'));
            i += 1;
        } else {
            return Err(FieldError::Parse(format!("unexpected character {c:?} in {s:?}")));
        }
    }
    Ok(out)
}

struct Parser<'a, F: Field> {
    k: &'a F,
    toks: Vec<Tok>,
    pos: usize,
    var: Option<char>,
    allow_var: bool,
}

impl<'a, F: Field> Parser<'a, F> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn err(&self, msg: &str) -> FieldError {
        FieldError::Parse(format!("{msg} at token {}", self.pos))
    }

    fn expr(&mut self) -> Result<Poly<F>, FieldError> {
        let mut acc = self.term()?;
        while let Some(Tok::Op(c @ ('+' | '-'))) = self.peek().cloned() {
            self.pos += 1;
            let t = self.term()?;
            acc = if c == '+' {
                poly::add(self.k, &acc, &t)
            } else {
                poly::sub(self.k, &acc, &t)
            };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Poly<F>, FieldError> {
        let mut acc = self.unary()?;
        loop {
            match self.peek().cloned() {
                Some(Tok::Op('*')) => {
                    self.pos += 1;
                    let f = self.unary()?;
                    acc = poly::mul(self.k, &acc, &f);
                }
                Some(Tok::Op('/')) => {
                    self.pos += 1;
                    let f = self.unary()?;
                    if f.len() != 1 {
                        return Err(self.err("division by a non-constant or zero"));
                    }
                    let inv = self
                        .k
                        .inv(&f[0])
                        .ok_or_else(|| self.err("division by zero"))?;
                    acc = poly::scale(self.k, &acc, &inv);
                }
                // implicit multiplication: "2x", "x(x+1)"
                Some(Tok::Num(_)) | Some(Tok::Ident(_)) | Some(Tok::Op('(')) => {
                    let f = self.power()?;
                    acc = poly::mul(self.k, &acc, &f);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<Poly<F>, FieldError> {
        match self.peek() {
            Some(Tok::Op('-')) => {
                self.pos += 1;
                let v = self.unary()?;
                Ok(poly::neg(self.k, &v))
            }
            Some(Tok::Op('+')) => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Poly<F>, FieldError> {
        let base = self.atom()?;
        if let Some(Tok::Op('^')) = self.peek() {
            self.pos += 1;
            let e = match self.peek().cloned() {
                Some(Tok::Num(n)) => {
                    self.pos += 1;
                    u32::try_from(n).map_err(|_| self.err("exponent too large"))?
                }
                _ => return Err(self.err("expected exponent")),
            };
            let mut acc = vec![self.k.one()];
            for _ in 0..e {
                acc = poly::mul(self.k, &acc, &base);
            }
            return Ok(acc);
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Poly<F>, FieldError> {
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Ok(poly::constant(self.k, self.k.from_bigint(&n)))
            }
            Some(Tok::Ident(c)) => {
                self.pos += 1;
                if c == 'a' {
                    if let Some(g) = self.k.generator() {
                        return Ok(poly::constant(self.k, g));
                    }
                }
                if !self.allow_var {
                    return Err(self.err(&format!("unexpected variable {c:?} in a constant")));
                }
                match self.var {
                    Some(v) if v != c => {
                        return Err(self.err(&format!("second variable {c:?} (already using {v:?})")))
                    }
                    _ => self.var = Some(c),
                }
                Ok(poly::x(self.k))
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let v = self.expr()?;
                match self.peek() {
                    Some(Tok::Op(')')) => {
                        self.pos += 1;
                        Ok(v)
                    }
                    _ => Err(self.err("expected ')'")),
                }
            }
            _ => Err(self.err("unexpected end or operator")),
        }
    }
}

fn run<F: Field>(k: &F, s: &str, allow_var: bool) -> Result<Poly<F>, FieldError> {
    let toks = lex(s)?;
    if toks.is_empty() {
        return Err(FieldError::Parse("empty expression".into()));
    }
    let mut p = Parser {
        k,
        toks,
        pos: 0,
        var: None,
        allow_var,
    };
    let v = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(p.err("trailing input"));
    }
    Ok(v)
}

/// Parses a polynomial in a single variable of any name.
pub fn parse_poly<F: Field>(k: &F, s: &str) -> Result<Poly<F>, FieldError> {
    run(k, s, true)
}

/// Parses a field element (`3/2`, `5`, `a^2+1`).
pub fn parse_elem<F: Field>(k: &F, s: &str) -> Result<F::Elem, FieldError> {
    let v = run(k, s, false)?;
    Ok(v.into_iter().next().unwrap_or_else(|| k.zero()))
}
