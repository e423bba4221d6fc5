//! A small exact-expression language for the table transcription file.
//!
//! Grammar: integers, the variables `s` (also `σ`) and `n`, `sqrt(..)`,
//! `+ - * / ^`, parentheses and implicit multiplication (`2n(n - 1)`).

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact::{BoundaryPoint, Polynomial, Rational};
use crate::piecewise::RationalFunction;

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Num(BigInt),
    Sigma,
    Family,
    Sqrt(Box<Expr>),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Op(char),
}

fn tokenize(text: &str) -> Result<Vec<Tok>> {
    let err = |msg: String| Error::Expression { text: text.to_string(), msg };
    let mut out = Vec::new();
    let chars: Vec<char> = text.chars().collect();
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
            let digits: String = chars[start..i].iter().collect();
            out.push(Tok::Num(digits.parse().map_err(|_| err(format!("bad number {digits}")))?));
        } else if c.is_alphabetic() {
            let start = i;
            while i < chars.len() && chars[i].is_alphabetic() {
                i += 1;
            }
            out.push(Tok::Ident(chars[start..i].iter().collect()));
        } else if "+-*/^()".contains(c) {
            out.push(Tok::Op(c));
            i += 1;
        } else if c == '−' {
            out.push(Tok::Op('-'));
            i += 1;
        } else {
            return Err(err(format!("unexpected character '{c}'")));
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<Tok>,
    pos: usize,
    text: &'a str,
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> Error {
        Error::Expression { text: self.text.to_string(), msg: format!("{msg} at token {}", self.pos) }
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn eat(&mut self, op: char) -> bool {
        if self.peek() == Some(&Tok::Op(op)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            if self.eat('+') {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat('-') {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat('*') {
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
            } else if self.eat('/') {
                lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?));
            } else if matches!(self.peek(), Some(Tok::Num(_) | Tok::Ident(_) | Tok::Op('('))) {
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.power()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.eat('-') {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        if self.eat('+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if self.eat('^') {
            match self.peek().cloned() {
                Some(Tok::Num(k)) => {
                    self.pos += 1;
                    let k: u32 = k.try_into().map_err(|_| self.err("exponent too large"))?;
                    return Ok(Expr::Pow(Box::new(base), k));
                }
                _ => return Err(self.err("expected integer exponent")),
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr> {
        match self.peek().cloned() {
            Some(Tok::Num(k)) => {
                self.pos += 1;
                Ok(Expr::Num(k))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                match name.as_str() {
                    "s" | "σ" | "sigma" => Ok(Expr::Sigma),
                    "n" => Ok(Expr::Family),
                    "sqrt" => {
                        if !self.eat('(') {
                            return Err(self.err("expected '(' after sqrt"));
                        }
                        let inner = self.expr()?;
                        if !self.eat(')') {
                            return Err(self.err("expected ')'"));
                        }
                        Ok(Expr::Sqrt(Box::new(inner)))
                    }
                    other => Err(self.err(&format!("unknown identifier '{other}'"))),
                }
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let inner = self.expr()?;
                if !self.eat(')') {
                    return Err(self.err("expected ')'"));
                }
                Ok(inner)
            }
            _ => Err(self.err("expected a value")),
        }
    }
}

pub fn parse_expr(text: &str) -> Result<Expr> {
    let mut p = Parser { toks: tokenize(text)?, pos: 0, text };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(p.err("trailing input"));
    }
    Ok(e)
}

fn rf_add(a: &RationalFunction, b: &RationalFunction, sign: i64) -> RationalFunction {
    let k = Rational::from_integer(BigInt::from(sign));
    RationalFunction::new(a.num().mul(b.den()).add(&b.num().mul(a.den()).scale(&k)), a.den().mul(b.den()))
}

impl Expr {
    /// Interpret as a rational function of σ, substituting `n`.
    pub fn to_function(&self, n: Option<i64>) -> Result<RationalFunction> {
        let bad = |msg: &str| Error::Expression { text: format!("{self:?}"), msg: msg.to_string() };
        Ok(match self {
            Expr::Num(k) => RationalFunction::constant(Rational::from_integer(k.clone())),
            Expr::Sigma => RationalFunction::polynomial(Polynomial::x()),
            Expr::Family => match n {
                Some(n) => RationalFunction::constant(Rational::from_integer(BigInt::from(n))),
                None => return Err(bad("family parameter n is not bound")),
            },
            Expr::Sqrt(_) => return Err(bad("sqrt is not allowed in a formula")),
            Expr::Neg(a) => a.to_function(n)?.scale(&-Rational::one()),
            Expr::Add(a, b) => rf_add(&a.to_function(n)?, &b.to_function(n)?, 1),
            Expr::Sub(a, b) => rf_add(&a.to_function(n)?, &b.to_function(n)?, -1),
            Expr::Mul(a, b) => {
                let (a, b) = (a.to_function(n)?, b.to_function(n)?);
                RationalFunction::new(a.num().mul(b.num()), a.den().mul(b.den()))
            }
            Expr::Div(a, b) => {
                let (a, b) = (a.to_function(n)?, b.to_function(n)?);
                if b.num().is_zero() {
                    return Err(bad("division by zero"));
                }
                RationalFunction::new(a.num().mul(b.den()), a.den().mul(b.num()))
            }
            Expr::Pow(a, k) => {
                let a = a.to_function(n)?;
                RationalFunction::new(a.num().pow(*k), a.den().pow(*k))
            }
        })
    }

    /// Interpret as an exact constant, substituting `n`.
    pub fn to_point(&self, n: Option<i64>) -> Result<BoundaryPoint> {
        let bad = |msg: &str| Error::Expression { text: format!("{self:?}"), msg: msg.to_string() };
        let mixed = || bad("arithmetic between different square roots");
        Ok(match self {
            Expr::Num(k) => BoundaryPoint::from_rational(Rational::from_integer(k.clone())),
            Expr::Sigma => return Err(bad("σ is not allowed in a constant")),
            Expr::Family => match n {
                Some(n) => BoundaryPoint::from_ratio(n, 1),
                None => return Err(bad("family parameter n is not bound")),
            },
            Expr::Sqrt(a) => {
                let inner = a.to_point(n)?;
                let r = inner.as_rational().ok_or_else(|| bad("nested square root"))?.clone();
                if r < Rational::zero() {
                    return Err(bad("square root of a negative number"));
                }
                BoundaryPoint::new(Rational::zero(), Rational::one(), r)
            }
            Expr::Neg(a) => a.to_point(n)?.neg(),
            Expr::Add(a, b) => a.to_point(n)?.checked_add(&b.to_point(n)?).ok_or_else(mixed)?,
            Expr::Sub(a, b) => a.to_point(n)?.checked_sub(&b.to_point(n)?).ok_or_else(mixed)?,
            Expr::Mul(a, b) => a.to_point(n)?.checked_mul(&b.to_point(n)?).ok_or_else(mixed)?,
            Expr::Div(a, b) => {
                let d = b.to_point(n)?;
                if d.signum() == std::cmp::Ordering::Equal {
                    return Err(bad("division by zero"));
                }
                a.to_point(n)?.checked_div(&d).ok_or_else(mixed)?
            }
            Expr::Pow(a, k) => {
                let base = a.to_point(n)?;
                let mut acc = BoundaryPoint::one();
                for _ in 0..*k {
                    acc = acc.checked_mul(&base).ok_or_else(mixed)?;
                }
                acc
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn implicit_products_and_family() {
        let e = parse_expr("1 - 1/(2n(n - 1))").unwrap();
        assert_eq!(e.to_point(Some(6)).unwrap(), BoundaryPoint::from_ratio(59, 60));
        let f = parse_expr("3/(n(1 - 2(n - 1)(1 - s)))").unwrap().to_function(Some(6)).unwrap();
        assert_eq!(f, RationalFunction::from_factors(&[3], &[&[6], &[-9, 10]]));
    }

    #[test]
    fn surd_constants() {
        let e = parse_expr("(539 - sqrt(42121))/460").unwrap();
        assert_eq!(e.to_point(None).unwrap(), BoundaryPoint::surd(539, -1, 42121, 460));
    }

    #[test]
    fn formula_with_coefficient_prefix() {
        let f = parse_expr("5(18 - 19s)/(2(5s + 3)(1 - s))").unwrap().to_function(None).unwrap();
        assert_eq!(f, RationalFunction::from_factors(&[90, -95], &[&[2], &[3, 5], &[1, -1]]));
        let g = parse_expr("9/(8(2σ - 1))").unwrap().to_function(None).unwrap();
        assert_eq!(g, RationalFunction::from_factors(&[9], &[&[-8, 16]]));
    }

    #[test]
    fn rejects_malformed() {
        for bad in ["3/(2 - s", "x + 1", "2 $ 3", "", "sqrt 2"] {
            assert!(parse_expr(bad).is_err(), "{bad}");
        }
        assert!(parse_expr("sqrt(2) + s").unwrap().to_function(None).is_err());
        assert!(parse_expr("n + 1").unwrap().to_point(None).is_err());
    }
}
