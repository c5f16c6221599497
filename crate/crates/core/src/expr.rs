//! Rational functions of the sequence index `n`, e.g. `1+1/n` or `(n^2-1)/(2n)`.
//!
//! Grammar: numbers, the variable `n`, `+ - * /`, `^` with an integer
//! exponent, parentheses and unary minus. Juxtaposition `2n` multiplies.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::{format_rational, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IndexExpr {
    source: String,
    root: Node,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum Node {
    Const(Rational),
    Var,
    Neg(Box<Node>),
    Add(Box<Node>, Box<Node>),
    Sub(Box<Node>, Box<Node>),
    Mul(Box<Node>, Box<Node>),
    Div(Box<Node>, Box<Node>),
    Pow(Box<Node>, i32),
}

impl IndexExpr {
    pub fn constant(q: &Rational) -> Self {
        IndexExpr { source: format_rational(q), root: Node::Const(q.clone()) }
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn eval(&self, n: u64) -> Result<Rational> {
        self.root.eval(&Rational::from_integer(BigInt::from(n)))
            .map_err(|e| match e {
                Error::Precondition(msg) => Error::Precondition(format!("{} at n = {n}: {msg}", self.source)),
                other => other,
            })
    }
}

impl fmt::Display for IndexExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.source)
    }
}

impl FromStr for IndexExpr {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let tokens = tokenize(s)?;
        let mut p = Parser { tokens: &tokens, pos: 0 };
        let root = p.sum()?;
        if p.pos != tokens.len() {
            return Err(Error::Parse(format!("trailing input in expression {s:?}")));
        }
        Ok(IndexExpr { source: s.trim().to_string(), root })
    }
}

impl Node {
    fn eval(&self, n: &Rational) -> Result<Rational> {
        Ok(match self {
            Node::Const(q) => q.clone(),
            Node::Var => n.clone(),
            Node::Neg(a) => -a.eval(n)?,
            Node::Add(a, b) => a.eval(n)? + b.eval(n)?,
            Node::Sub(a, b) => a.eval(n)? - b.eval(n)?,
            Node::Mul(a, b) => a.eval(n)? * b.eval(n)?,
            Node::Div(a, b) => {
                let d = b.eval(n)?;
                if d.is_zero() {
                    return Err(Error::Precondition("division by zero".into()));
                }
                a.eval(n)? / d
            }
            Node::Pow(a, k) => {
                let base = a.eval(n)?;
                if *k < 0 && base.is_zero() {
                    return Err(Error::Precondition("division by zero".into()));
                }
                let mag = num_traits::pow(base, k.unsigned_abs() as usize);
                if *k < 0 {
                    Rational::one() / mag
                } else {
                    mag
                }
            }
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    Var,
    Op(char),
    LParen,
    RParen,
}

fn tokenize(s: &str) -> Result<Vec<Tok>> {
    let mut out = Vec::new();
    let chars: Vec<char> = s.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        match c {
            ' ' | '\t' => {}
            '0'..='9' => {
                let start = i;
                while i + 1 < chars.len() && chars[i + 1].is_ascii_digit() {
                    i += 1;
                }
                let digits: String = chars[start..=i].iter().collect();
                out.push(Tok::Num(digits.parse().unwrap()));
            }
            'n' => out.push(Tok::Var),
            '+' | '-' | '*' | '/' | '^' => out.push(Tok::Op(c)),
            '(' => out.push(Tok::LParen),
            ')' => out.push(Tok::RParen),
            _ => return Err(Error::Parse(format!("unexpected {c:?} in expression {s:?}"))),
        }
        i += 1;
    }
    if out.is_empty() {
        return Err(Error::Parse("empty expression".into()));
    }
    Ok(out)
}

struct Parser<'a> {
    tokens: &'a [Tok],
    pos: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.pos)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.tokens.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn sum(&mut self) -> Result<Node> {
        let mut acc = self.product()?;
        while let Some(Tok::Op(op @ ('+' | '-'))) = self.peek().cloned() {
            self.pos += 1;
            let rhs = self.product()?;
            acc = if op == '+' { Node::Add(acc.into(), rhs.into()) } else { Node::Sub(acc.into(), rhs.into()) };
        }
        Ok(acc)
    }

    fn product(&mut self) -> Result<Node> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(Tok::Op('*')) => {
                    self.pos += 1;
                    acc = Node::Mul(acc.into(), self.unary()?.into());
                }
                Some(Tok::Op('/')) => {
                    self.pos += 1;
                    acc = Node::Div(acc.into(), self.unary()?.into());
                }
                Some(Tok::Num(_) | Tok::Var | Tok::LParen) => {
                    acc = Node::Mul(acc.into(), self.power()?.into());
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<Node> {
        if let Some(Tok::Op('-')) = self.peek() {
            self.pos += 1;
            return Ok(Node::Neg(self.unary()?.into()));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Node> {
        let base = self.atom()?;
        if let Some(Tok::Op('^')) = self.peek() {
            self.pos += 1;
            let negative = matches!(self.peek(), Some(Tok::Op('-')));
            if negative {
                self.pos += 1;
            }
            let k = match self.bump() {
                Some(Tok::Num(k)) => i32::try_from(k).map_err(|_| Error::Parse("exponent too large".into()))?,
                _ => return Err(Error::Parse("exponent must be an integer literal".into())),
            };
            return Ok(Node::Pow(base.into(), if negative { -k } else { k }));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Node> {
        match self.bump() {
            Some(Tok::Num(k)) => Ok(Node::Const(Rational::from_integer(k))),
            Some(Tok::Var) => Ok(Node::Var),
            Some(Tok::LParen) => {
                let inner = self.sum()?;
                match self.bump() {
                    Some(Tok::RParen) => Ok(inner),
                    _ => Err(Error::Parse("missing ')'".into())),
                }
            }
            _ => Err(Error::Parse("expected a number, n or '('".into())),
        }
    }
}
