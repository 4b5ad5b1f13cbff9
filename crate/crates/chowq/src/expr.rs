//! Expressions over the generators of a ring presentation.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := factor ('*' factor)*
//! factor := atom ('^' nat)?
//! atom   := literal | ident | '(' expr ')'
//! ```
//!
//! A literal is an integer or a dyadic `p/2^k`. Whitespace is ignored and a
//! leading `-` is allowed.

use std::fmt;

use chowq_core::scalar::dyadic_normalize;
use chowq_core::{CoeffKind, Coefficient, Polynomial, RingPresentation};
use num_bigint::BigInt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExprTree {
    Int(BigInt),
    Dyadic { numerator: BigInt, exponent: u64 },
    Ident(String),
    Neg(Box<ExprTree>),
    Sum(Vec<ExprTree>),
    Product(Vec<ExprTree>),
    Power(Box<ExprTree>, u32),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParseError {
    Syntax { position: usize, message: &'static str },
    UnknownGenerator(String),
    DyadicInIntegerRing { position: usize },
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseError::Syntax { position, message } => {
                write!(f, "SYNTAX_ERROR at position {position}: {message}")
            }
            ParseError::UnknownGenerator(name) => write!(f, "UNKNOWN_GENERATOR: {name}"),
            ParseError::DyadicInIntegerRing { position } => {
                write!(f, "DYADIC_IN_INTEGER_RING: dyadic literal at position {position}")
            }
        }
    }
}

impl std::error::Error for ParseError {}

impl fmt::Display for ExprTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn list(f: &mut fmt::Formatter<'_>, head: &str, items: &[ExprTree]) -> fmt::Result {
            write!(f, "{head}(")?;
            for (i, t) in items.iter().enumerate() {
                if i > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{t}")?;
            }
            f.write_str(")")
        }
        match self {
            ExprTree::Int(v) => write!(f, "{v}"),
            ExprTree::Dyadic { numerator, exponent } => write!(f, "{numerator}/2^{exponent}"),
            ExprTree::Ident(name) => f.write_str(name),
            ExprTree::Neg(t) => write!(f, "NEG({t})"),
            ExprTree::Sum(ts) => list(f, "SUM", ts),
            ExprTree::Product(ts) => list(f, "PRODUCT", ts),
            ExprTree::Power(b, e) => write!(f, "POWER({b},{e})"),
        }
    }
}

/// Parses `text` and checks every identifier and literal against `ring`.
pub fn parse_expr(text: &str, ring: &RingPresentation) -> Result<ExprTree, ParseError> {
    let mut p = Parser { src: text.as_bytes(), pos: 0, ring, integral: ring.coeff_kind() != CoeffKind::Dyadic };
    let tree = p.expr()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.syntax("unexpected input after expression"));
    }
    Ok(tree)
}

/// Parses and evaluates in one step.
pub fn parse_polynomial(text: &str, ring: &RingPresentation) -> Result<Polynomial, ParseError> {
    parse_expr(text, ring)?.evaluate(ring)
}

impl ExprTree {
    /// The polynomial over the full generator table of `ring`.
    pub fn evaluate(&self, ring: &RingPresentation) -> Result<Polynomial, ParseError> {
        let kind = ring.coeff_kind();
        let constant = |c: Coefficient| Polynomial::constant(ring.table(), c);
        Ok(match self {
            ExprTree::Int(v) => constant(Coefficient::from_int(kind, v.clone())),
            ExprTree::Dyadic { numerator, exponent } => {
                if kind != CoeffKind::Dyadic {
                    return Err(ParseError::DyadicInIntegerRing { position: 0 });
                }
                constant(dyadic_normalize(numerator.clone(), *exponent))
            }
            ExprTree::Ident(name) => {
                ring.element_named(name).ok_or_else(|| ParseError::UnknownGenerator(name.clone()))?
            }
            ExprTree::Neg(t) => t.evaluate(ring)?.neg(),
            ExprTree::Sum(ts) => {
                let mut acc = ring.zero_poly();
                for t in ts {
                    acc = &acc + &t.evaluate(ring)?;
                }
                acc
            }
            ExprTree::Product(ts) => {
                let mut acc = ring.const_poly(1);
                for t in ts {
                    acc = &acc * &t.evaluate(ring)?;
                }
                acc
            }
            ExprTree::Power(b, e) => b.evaluate(ring)?.pow(*e),
        })
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    ring: &'a RingPresentation,
    integral: bool,
}

impl Parser<'_> {
    fn syntax(&self, message: &'static str) -> ParseError {
        ParseError::Syntax { position: self.pos, message }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<ExprTree, ParseError> {
        let mut terms = Vec::new();
        let first = if self.eat(b'-') { ExprTree::Neg(Box::new(self.term()?)) } else { self.term()? };
        terms.push(first);
        loop {
            if self.eat(b'+') {
                terms.push(self.term()?);
            } else if self.eat(b'-') {
                terms.push(ExprTree::Neg(Box::new(self.term()?)));
            } else {
                break;
            }
        }
        Ok(if terms.len() == 1 { terms.pop().unwrap() } else { ExprTree::Sum(terms) })
    }

    fn term(&mut self) -> Result<ExprTree, ParseError> {
        let mut factors = vec![self.factor()?];
        while self.eat(b'*') {
            factors.push(self.factor()?);
        }
        Ok(if factors.len() == 1 { factors.pop().unwrap() } else { ExprTree::Product(factors) })
    }

    fn factor(&mut self) -> Result<ExprTree, ParseError> {
        let base = self.atom()?;
        if !self.eat(b'^') {
            return Ok(base);
        }
        self.skip_ws();
        let start = self.pos;
        let digits = self.digits().ok_or_else(|| self.syntax("expected a nonnegative integer exponent"))?;
        let e = digits.parse::<u32>().map_err(|_| ParseError::Syntax { position: start, message: "exponent too large" })?;
        Ok(ExprTree::Power(Box::new(base), e))
    }

    fn digits(&mut self) -> Option<String> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        (self.pos > start).then(|| String::from_utf8_lossy(&self.src[start..self.pos]).into_owned())
    }

    fn atom(&mut self) -> Result<ExprTree, ParseError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if !self.eat(b')') {
                    return Err(self.syntax("expected ')'"));
                }
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() => self.literal(),
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.src.len() && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_') {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                if self.ring.element_named(name).is_none() {
                    return Err(ParseError::UnknownGenerator(name.to_string()));
                }
                Ok(ExprTree::Ident(name.to_string()))
            }
            Some(_) => Err(self.syntax("expected a literal, generator or '('")),
            None => Err(self.syntax("unexpected end of input")),
        }
    }

    fn literal(&mut self) -> Result<ExprTree, ParseError> {
        let start = self.pos;
        let value: BigInt = self.digits().unwrap().parse().unwrap();
        if !self.eat(b'/') {
            return Ok(ExprTree::Int(value));
        }
        self.skip_ws();
        if self.digits().as_deref() != Some("2") {
            return Err(self.syntax("a dyadic denominator must be written 2^k"));
        }
        if !self.eat(b'^') {
            return Err(self.syntax("a dyadic denominator must be written 2^k"));
        }
        self.skip_ws();
        let k = self.digits().ok_or_else(|| self.syntax("expected the exponent of 2"))?;
        let exponent = k.parse::<u64>().map_err(|_| self.syntax("exponent too large"))?;
        if self.integral {
            return Err(ParseError::DyadicInIntegerRing { position: start });
        }
        Ok(ExprTree::Dyadic { numerator: value, exponent })
    }
}
