//! Expression syntax and the bundle and table file formats.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := ('+' | '-')* factor ('*' factor)*
//! factor := atom ('^' nat)?
//! atom   := int | int '/' nat | 'x' nat | 'xi' nat | 'p' nat | '(' expr ')'
//! ```
//!
//! Indices are 1-based and checked against a bundle when the tree is
//! normalized.

mod files;

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::graded_ring::{Bundle, Coord, GradedElement, Rational};

pub use files::{parse_bundle, parse_table, render_bundle, render_table};

/// A parsed expression. Positions are byte offsets into the input.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Ast {
    Number(Rational),
    Coord { coord: Coord, position: usize, token: String },
    Neg(Box<Ast>),
    Sum(Vec<Ast>),
    Product(Vec<Ast>),
    Power(Box<Ast>, u32),
}

impl fmt::Display for Ast {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ast::Number(c) => write!(f, "{c}"),
            Ast::Coord { coord, .. } => write!(f, "{coord}"),
            Ast::Neg(a) => write!(f, "-({a})"),
            Ast::Sum(v) => {
                let parts: Vec<String> = v.iter().map(|a| format!("({a})")).collect();
                f.write_str(&parts.join(" + "))
            }
            Ast::Product(v) => {
                let parts: Vec<String> = v.iter().map(|a| format!("({a})")).collect();
                f.write_str(&parts.join("*"))
            }
            Ast::Power(a, k) => write!(f, "({a})^{k}"),
        }
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while let Some(c) = self.src[self.pos..].chars().next() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.src[self.pos..].chars().next()
    }

    fn error<T>(&self, position: usize, message: impl Into<String>) -> Result<T> {
        Err(Error::Syntax {
            position,
            message: message.into(),
        })
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn digits(&mut self) -> Option<(usize, &'a str)> {
        let start = self.pos;
        let len = self.src[start..].bytes().take_while(u8::is_ascii_digit).count();
        if len == 0 {
            None
        } else {
            self.pos += len;
            Some((start, &self.src[start..start + len]))
        }
    }

    fn expr(&mut self) -> Result<Ast> {
        let mut terms = vec![self.term()?];
        loop {
            match self.peek() {
                Some('+') => {
                    self.pos += 1;
                    terms.push(self.term()?);
                }
                Some('-') => {
                    self.pos += 1;
                    terms.push(Ast::Neg(Box::new(self.term()?)));
                }
                _ => break,
            }
        }
        Ok(if terms.len() == 1 { terms.pop().unwrap() } else { Ast::Sum(terms) })
    }

    fn term(&mut self) -> Result<Ast> {
        let mut negative = false;
        loop {
            if self.eat('-') {
                negative = !negative;
            } else if !self.eat('+') {
                break;
            }
        }
        let mut factors = vec![self.factor()?];
        while self.eat('*') {
            factors.push(self.factor()?);
        }
        let product = if factors.len() == 1 {
            factors.pop().unwrap()
        } else {
            Ast::Product(factors)
        };
        Ok(if negative { Ast::Neg(Box::new(product)) } else { product })
    }

    fn factor(&mut self) -> Result<Ast> {
        let atom = self.atom()?;
        if self.eat('^') {
            self.skip_ws();
            let at = self.pos;
            let Some((_, digits)) = self.digits() else {
                return self.error(at, "expected a natural exponent after `^`");
            };
            let k: u32 = match digits.parse() {
                Ok(k) => k,
                Err(_) => return self.error(at, format!("exponent `{digits}` is too large")),
            };
            return Ok(Ast::Power(Box::new(atom), k));
        }
        Ok(atom)
    }

    fn atom(&mut self) -> Result<Ast> {
        let start = match self.peek() {
            None => return self.error(self.pos, "unexpected end of input"),
            Some(_) => self.pos,
        };
        if self.eat('(') {
            let inner = self.expr()?;
            if !self.eat(')') {
                return self.error(self.pos, "expected `)`");
            }
            return Ok(inner);
        }
        if let Some((_, num)) = self.digits() {
            let numer: BigInt = num.parse().expect("digits");
            let save = self.pos;
            if self.eat('/') {
                self.skip_ws();
                let at = self.pos;
                let Some((_, den)) = self.digits() else {
                    self.pos = save;
                    return self.error(at, "expected a denominator after `/`");
                };
                let denom: BigInt = den.parse().expect("digits");
                if denom.is_zero() {
                    return self.error(at, "zero denominator");
                }
                return Ok(Ast::Number(Rational::new(numer, denom)));
            }
            return Ok(Ast::Number(Rational::from_integer(numer)));
        }
        let rest = &self.src[start..];
        let (kind, skip): (fn(usize) -> Coord, usize) = if rest.starts_with("xi") {
            (Coord::Xi, 2)
        } else if rest.starts_with('x') {
            (Coord::X, 1)
        } else if rest.starts_with('p') {
            (Coord::P, 1)
        } else {
            let c = rest.chars().next().unwrap();
            return self.error(start, format!("unexpected `{c}`"));
        };
        self.pos += skip;
        let Some((_, digits)) = self.digits() else {
            return self.error(self.pos, "expected a coordinate index");
        };
        let index: usize = match digits.parse() {
            Ok(i) => i,
            Err(_) => return self.error(start, format!("index `{digits}` is too large")),
        };
        Ok(Ast::Coord {
            coord: kind(index),
            position: start,
            token: self.src[start..self.pos].to_string(),
        })
    }
}

/// Parses an expression without reference to a bundle.
pub fn parse(input: &str) -> Result<Ast> {
    let mut p = Parser { src: input, pos: 0 };
    let ast = p.expr()?;
    if let Some(c) = p.peek() {
        return p.error(p.pos, format!("unexpected `{c}`"));
    }
    Ok(ast)
}

fn in_range(bundle: &Bundle, coord: Coord) -> bool {
    match coord {
        Coord::X(i) | Coord::P(i) => (1..=bundle.d()).contains(&i),
        Coord::Xi(a) => (1..=bundle.r()).contains(&a),
    }
}

/// Checks indices and expands the tree into normal form.
pub fn normalize(ast: &Ast, bundle: &Bundle) -> Result<GradedElement> {
    Ok(match ast {
        Ast::Number(c) => GradedElement::constant(bundle, c.clone()),
        Ast::Coord { coord, position, token } => {
            if !in_range(bundle, *coord) {
                return Err(Error::IndexOutOfRange {
                    token: token.clone(),
                    position: *position,
                });
            }
            GradedElement::coord(bundle, *coord)?
        }
        Ast::Neg(a) => -normalize(a, bundle)?,
        Ast::Sum(v) => {
            let mut out = GradedElement::zero(bundle);
            for a in v {
                out += normalize(a, bundle)?;
            }
            out
        }
        Ast::Product(v) => {
            let mut out = GradedElement::one(bundle);
            for a in v {
                out = out * normalize(a, bundle)?;
            }
            out
        }
        Ast::Power(a, k) => {
            let base = normalize(a, bundle)?;
            let mut out = GradedElement::one(bundle);
            for _ in 0..*k {
                out = out * base.clone();
                if out.is_zero() {
                    break;
                }
            }
            out
        }
    })
}

/// `parse` followed by `normalize`.
pub fn parse_element(input: &str, bundle: &Bundle) -> Result<GradedElement> {
    normalize(&parse(input)?, bundle)
}

/// Parses a rational literal `int` or `int/nat`, with an optional sign.
pub fn parse_rational(input: &str) -> Result<Rational> {
    match parse(input)? {
        Ast::Number(c) => Ok(c),
        Ast::Neg(a) => match *a {
            Ast::Number(c) => Ok(-c),
            _ => Err(Error::Syntax {
                position: 0,
                message: format!("`{input}` is not a rational number"),
            }),
        },
        _ => Err(Error::Syntax {
            position: 0,
            message: format!("`{input}` is not a rational number"),
        }),
    }
}

/// Renders a rational as `num/den`, omitting a unit denominator.
pub fn render_rational(c: &Rational) -> String {
    if c.denom().is_one() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}
