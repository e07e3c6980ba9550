//! Parser for the textual form of polynomials and rational functions.
//!
//! Grammar: sums and differences of products/quotients of powers of atoms;
//! an atom is an integer, a variable name or a parenthesized expression.

use num_bigint::BigInt;

use super::paramrat::ParamRat;
use super::poly::Poly;
use super::var::Var;
use crate::error::{FmError, Result};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Op(char),
}

fn lex(s: &str) -> Result<Vec<Tok>> {
    let cs: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < cs.len() {
        let c = cs[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let st = i;
            while i < cs.len() && cs[i].is_ascii_digit() {
                i += 1;
            }
            let t: String = cs[st..i].iter().collect();
            out.push(Tok::Num(t.parse().map_err(|_| FmError::Parse(t.clone()))?));
        } else if c.is_ascii_alphabetic() {
            let st = i;
            while i < cs.len() && (cs[i].is_ascii_alphanumeric() || cs[i] == '_') {
                i += 1;
            }
            out.push(Tok::Ident(cs[st..i].iter().collect()));
        } else if "+-*/^()".contains(c) {
            out.push(Tok::Op(c));
            i += 1;
        } else {
            return Err(FmError::Parse(format!("unexpected character '{c}' in '{s}'")));
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Tok>,
    pos: usize,
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

    fn expr(&mut self) -> Result<ParamRat> {
        let mut acc = if self.eat('-') { -self.term()? } else { self.term()? };
        loop {
            if self.eat('+') {
                acc = &acc + &self.term()?;
            } else if self.eat('-') {
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<ParamRat> {
        let mut acc = self.power()?;
        loop {
            if self.eat('*') {
                acc = &acc * &self.power()?;
            } else if self.eat('/') {
                let d = self.power()?;
                acc = &acc * &d.inv()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn power(&mut self) -> Result<ParamRat> {
        let base = self.atom()?;
        if self.eat('^') {
            match self.peek().cloned() {
                Some(Tok::Num(n)) => {
                    self.pos += 1;
                    let e: i32 = n.try_into().map_err(|_| FmError::Parse("exponent too large".into()))?;
                    return base.pow(e);
                }
                _ => return Err(FmError::Parse("expected exponent".into())),
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<ParamRat> {
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Ok(ParamRat::constant(super::rational::Rational::from_integer(n)))
            }
            Some(Tok::Ident(s)) => {
                self.pos += 1;
                Ok(ParamRat::var(Var::parse(&s)?))
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return Err(FmError::Parse("missing ')'".into()));
                }
                Ok(e)
            }
            Some(Tok::Op('-')) => {
                self.pos += 1;
                Ok(-self.power()?)
            }
            other => Err(FmError::Parse(format!("unexpected token {other:?}"))),
        }
    }
}

pub fn parse_expr(s: &str) -> Result<ParamRat> {
    let mut p = Parser { toks: lex(s)?, pos: 0 };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(FmError::Parse(format!("trailing input in '{s}'")));
    }
    Ok(e)
}

pub fn parse_poly(s: &str) -> Result<Poly> {
    let r = parse_expr(s)?;
    r.as_poly()
        .cloned()
        .ok_or_else(|| FmError::NotPolynomial(s.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_display_output() {
        let p = parse_poly("2*nu2 - nu1 + 1/2*H1_1^2*z").unwrap();
        assert_eq!(parse_poly(&p.to_string()).unwrap(), p);
    }

    #[test]
    fn parses_quotients() {
        let r = parse_expr("(nu1^2 - nu2^2)/(nu1 - nu2)").unwrap();
        assert_eq!(r.canonical(), "nu2 + nu1");
        assert!(parse_expr("1/(nu1 - nu1)").is_err());
    }
}
