//! Infix expressions: `+`, `-`, `*` (noncommutative, left-associative), `^`
//! with a nonnegative integer exponent, parentheses, numeric literals such as
//! `3` or `1/2`, identifiers, and bracketed ring literals like `[(1,0)]`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};

const MAX_EXPONENT: u32 = 256;

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Number(BigRational),
    Ident(String),
    Bracket(String),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    Pow(Box<Expr>, u32),
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Number(BigRational),
    Ident(String),
    Bracket(String),
    Op(char),
}

fn tokenize(text: &str) -> Result<Vec<Token>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    let digits = |i: &mut usize| -> String {
        let start = *i;
        while *i < chars.len() && chars[*i].is_ascii_digit() {
            *i += 1;
        }
        chars[start..*i].iter().collect()
    };
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let num: BigInt = digits(&mut i).parse().unwrap();
            let mut value = BigRational::from_integer(num);
            if i + 1 < chars.len() && chars[i] == '/' && chars[i + 1].is_ascii_digit() {
                i += 1;
                let den: BigInt = digits(&mut i).parse().unwrap();
                if den == BigInt::from(0) {
                    return Err(Error::Parse("division by zero in a literal".into()));
                }
                value /= BigRational::from_integer(den);
            }
            out.push(Token::Number(value));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Token::Ident(chars[start..i].iter().collect()));
        } else if c == '[' {
            let close = chars[i..]
                .iter()
                .position(|&d| d == ']')
                .ok_or_else(|| Error::Parse("unclosed `[`".into()))?;
            out.push(Token::Bracket(chars[i + 1..i + close].iter().collect()));
            i += close + 1;
        } else if "+-*^()".contains(c) {
            out.push(Token::Op(c));
            i += 1;
        } else {
            return Err(Error::Parse(format!("unexpected character `{c}`")));
        }
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek_op(&self) -> Option<char> {
        match self.tokens.get(self.pos) {
            Some(Token::Op(c)) => Some(*c),
            _ => None,
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        while let Some(op @ ('+' | '-')) = self.peek_op() {
            self.pos += 1;
            let rhs = self.term()?;
            lhs = if op == '+' {
                Expr::Add(Box::new(lhs), Box::new(rhs))
            } else {
                Expr::Sub(Box::new(lhs), Box::new(rhs))
            };
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        while self.peek_op() == Some('*') {
            self.pos += 1;
            let rhs = self.unary()?;
            lhs = Expr::Mul(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.peek_op() == Some('-') {
            self.pos += 1;
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if self.peek_op() != Some('^') {
            return Ok(base);
        }
        self.pos += 1;
        match self.tokens.get(self.pos) {
            Some(Token::Number(n)) if n.is_integer() => {
                let k = n.to_integer().to_u32().filter(|&k| k <= MAX_EXPONENT).ok_or_else(|| {
                    Error::Parse(format!("exponent must be an integer in 0..={MAX_EXPONENT}"))
                })?;
                self.pos += 1;
                Ok(Expr::Pow(Box::new(base), k))
            }
            _ => Err(Error::Parse("`^` must be followed by a nonnegative integer".into())),
        }
    }

    fn atom(&mut self) -> Result<Expr> {
        let tok = self.tokens.get(self.pos).cloned();
        self.pos += 1;
        match tok {
            Some(Token::Number(n)) => Ok(Expr::Number(n)),
            Some(Token::Ident(s)) => Ok(Expr::Ident(s)),
            Some(Token::Bracket(s)) => Ok(Expr::Bracket(s)),
            Some(Token::Op('(')) => {
                let e = self.expr()?;
                if self.peek_op() != Some(')') {
                    return Err(Error::Parse("missing `)`".into()));
                }
                self.pos += 1;
                Ok(e)
            }
            Some(t) => Err(Error::Parse(format!("unexpected token {t:?}"))),
            None => Err(Error::Parse("unexpected end of expression".into())),
        }
    }
}

pub fn parse(text: &str) -> Result<Expr> {
    let mut p = Parser { tokens: tokenize(text)?, pos: 0 };
    let e = p.expr()?;
    if p.pos != p.tokens.len() {
        return Err(Error::Parse(format!("trailing input in `{text}`")));
    }
    Ok(e)
}

/// Interprets the leaves of an [`Expr`] and the ring operations.
pub trait Evaluator {
    type Value: Clone;
    fn number(&self, value: &BigRational) -> Result<Self::Value>;
    fn identifier(&self, name: &str) -> Result<Self::Value>;
    fn bracket(&self, text: &str) -> Result<Self::Value>;
    fn add(&self, a: Self::Value, b: Self::Value) -> Self::Value;
    fn neg(&self, a: Self::Value) -> Self::Value;
    fn mul(&self, a: Self::Value, b: Self::Value) -> Result<Self::Value>;
    fn one(&self) -> Self::Value;
}

pub fn evaluate<E: Evaluator>(expr: &Expr, ev: &E) -> Result<E::Value> {
    Ok(match expr {
        Expr::Number(n) => ev.number(n)?,
        Expr::Ident(s) => ev.identifier(s)?,
        Expr::Bracket(s) => ev.bracket(s)?,
        Expr::Add(a, b) => ev.add(evaluate(a, ev)?, evaluate(b, ev)?),
        Expr::Sub(a, b) => ev.add(evaluate(a, ev)?, ev.neg(evaluate(b, ev)?)),
        Expr::Mul(a, b) => ev.mul(evaluate(a, ev)?, evaluate(b, ev)?)?,
        Expr::Neg(a) => ev.neg(evaluate(a, ev)?),
        Expr::Pow(a, k) => {
            let base = evaluate(a, ev)?;
            let mut acc = ev.one();
            for _ in 0..*k {
                acc = ev.mul(acc, base.clone())?;
            }
            acc
        }
    })
}
