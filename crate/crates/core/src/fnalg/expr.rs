use crate::error::{Error, Result};
use crate::ratfield::{parse_rat, RatFunc};

use super::algebra::{Algebra, FnAlgElem};

/// Parses and evaluates an element of the algebra.
///
/// ```text
/// expr   := term (('+' | '-') term)*
/// term   := power ('*' power)*
/// power  := unary ('^' int)?
/// unary  := '-' unary | atom
/// atom   := 'u(' i ',' j ')' | 'u' digit digit | 't' | rational
///         | 'star(' expr ')' | 'S(' expr ')' | 'qdet(' n ')' | '(' expr ')'
/// ```
///
/// Negative powers are allowed on scalars only.
pub fn parse_elem(alg: &Algebra, src: &str) -> Result<FnAlgElem> {
    let mut p = Parser { alg, s: src.as_bytes(), pos: 0 };
    let x = p.expr()?;
    p.skip_ws();
    if p.pos != p.s.len() {
        return Err(p.error("trailing input"));
    }
    Ok(x)
}

struct Parser<'a> {
    alg: &'a Algebra,
    s: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, what: &str) -> Error {
        Error::Parse(format!("{what} at offset {}", self.pos))
    }

    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(&format!("expected '{}'", c as char)))
        }
    }

    fn keyword(&mut self, kw: &str) -> bool {
        self.skip_ws();
        let end = self.pos + kw.len();
        if self.s.get(self.pos..end) == Some(kw.as_bytes()) && self.s.get(end) == Some(&b'(') {
            self.pos = end;
            true
        } else {
            false
        }
    }

    fn integer(&mut self) -> Result<i64> {
        self.skip_ws();
        let start = self.pos;
        if self.s.get(self.pos) == Some(&b'-') {
            self.pos += 1;
        }
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        std::str::from_utf8(&self.s[start..self.pos])
            .ok()
            .and_then(|x| x.parse().ok())
            .ok_or_else(|| self.error("expected integer"))
    }

    fn expr(&mut self) -> Result<FnAlgElem> {
        let mut acc = self.term()?;
        loop {
            if self.eat(b'+') {
                acc = acc.add(&self.term()?);
            } else if self.eat(b'-') {
                acc = acc.sub(&self.term()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<FnAlgElem> {
        let mut acc = self.power()?;
        while self.eat(b'*') {
            let rhs = self.power()?;
            acc = self.alg.mul(&acc, &rhs);
        }
        Ok(acc)
    }

    fn power(&mut self) -> Result<FnAlgElem> {
        let base = self.unary()?;
        if !self.eat(b'^') {
            return Ok(base);
        }
        let k = self.integer()?;
        if k >= 0 {
            return Ok(self.alg.pow(&base, k as u32));
        }
        let scalar = match base.terms().collect::<Vec<_>>().as_slice() {
            [(m, c)] if m.is_empty() => (*c).clone(),
            _ => return Err(self.error("negative power of a non-scalar")),
        };
        Ok(FnAlgElem::scalar(scalar.inv()?.pow(-k)))
    }

    fn unary(&mut self) -> Result<FnAlgElem> {
        if self.eat(b'-') {
            return Ok(self.unary()?.neg());
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<FnAlgElem> {
        if self.keyword("star") {
            self.expect(b'(')?;
            let x = self.expr()?;
            self.expect(b')')?;
            return Ok(self.alg.star(&x));
        }
        if self.keyword("S") {
            self.expect(b'(')?;
            let x = self.expr()?;
            self.expect(b')')?;
            return Ok(self.alg.antipode(&x));
        }
        if self.keyword("qdet") {
            self.expect(b'(')?;
            let n = self.integer()?;
            self.expect(b')')?;
            if n != self.alg.rank() as i64 {
                return Err(self.error(&format!("qdet({n}) in an algebra of rank {}", self.alg.rank())));
            }
            return Ok(self.alg.qdet());
        }
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let x = self.expr()?;
                self.expect(b')')?;
                Ok(x)
            }
            Some(b't') => {
                self.pos += 1;
                Ok(FnAlgElem::scalar(RatFunc::t()))
            }
            Some(b'u') => {
                self.pos += 1;
                let (i, j) = if self.eat(b'(') {
                    let i = self.integer()?;
                    self.expect(b',')?;
                    let j = self.integer()?;
                    self.expect(b')')?;
                    (i, j)
                } else {
                    let digit = |p: &Self, k: usize| -> Result<i64> {
                        match p.s.get(p.pos + k) {
                            Some(c) if c.is_ascii_digit() => Ok((c - b'0') as i64),
                            _ => Err(p.error("expected generator index")),
                        }
                    };
                    let ij = (digit(self, 0)?, digit(self, 1)?);
                    self.pos += 2;
                    ij
                };
                if i < 1 || j < 1 {
                    return Err(self.error("generator indices start at 1"));
                }
                self.alg.gen(i as usize, j as usize)
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self.pos < self.s.len() && (self.s[self.pos].is_ascii_digit() || self.s[self.pos] == b'/') {
                    self.pos += 1;
                }
                let text = std::str::from_utf8(&self.s[start..self.pos]).map_err(|_| self.error("bad literal"))?;
                Ok(FnAlgElem::scalar(RatFunc::from_rat(parse_rat(text)?)))
            }
            _ => Err(self.error("unexpected token")),
        }
    }
}
