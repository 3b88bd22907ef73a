//! Exact verification of polynomial substitution identities.
//!
//! Identities are stored as expression strings over named variables plus an
//! optional substitution map for derived variables. Verification expands
//! both sides to sparse coefficient maps over the integers and compares
//! them symbolically; there is no numeric sampling.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// A monomial: variable name → exponent.
type Monomial = BTreeMap<String, u32>;

/// Sparse multivariate polynomial with integer coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Poly {
    terms: BTreeMap<Monomial, i64>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn constant(c: i64) -> Self {
        let mut p = Poly::zero();
        if c != 0 {
            p.terms.insert(Monomial::new(), c);
        }
        p
    }

    pub fn var(name: &str) -> Self {
        let mut m = Monomial::new();
        m.insert(name.to_string(), 1);
        let mut p = Poly::zero();
        p.terms.insert(m, 1);
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_term(&mut self, m: Monomial, c: i64) {
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if *e.get() == 0 {
                    e.remove();
                }
            }
            Entry::Vacant(v) => {
                if c != 0 {
                    v.insert(c);
                }
            }
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, &c) in &other.terms {
            out.add_term(m.clone(), c);
        }
        out
    }

    pub fn neg(&self) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(m, &c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (m1, &c1) in &self.terms {
            for (m2, &c2) in &other.terms {
                let mut m = m1.clone();
                for (v, &e) in m2 {
                    *m.entry(v.clone()).or_insert(0) += e;
                }
                out.add_term(m, c1 * c2);
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut out = Poly::constant(1);
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }

    /// Replace each mapped variable by its polynomial; unmapped variables
    /// stay as themselves.
    pub fn substitute(&self, map: &BTreeMap<String, Poly>) -> Poly {
        let mut out = Poly::zero();
        for (m, &c) in &self.terms {
            let mut term = Poly::constant(c);
            for (v, &e) in m {
                let base = map.get(v).cloned().unwrap_or_else(|| Poly::var(v));
                term = term.mul(&base.pow(e));
            }
            out = out.add(&term);
        }
        out
    }

    pub fn variables(&self) -> Vec<String> {
        let mut vars: Vec<String> = self
            .terms
            .keys()
            .flat_map(|m| m.keys().cloned())
            .collect();
        vars.sort();
        vars.dedup();
        vars
    }
}

// -- expression parser ------------------------------------------------------

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Int(i64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
}

fn tokenize(input: &str) -> Result<Vec<Token>> {
    let mut tokens = Vec::new();
    let mut chars = input.chars().peekable();
    while let Some(&ch) = chars.peek() {
        match ch {
            ' ' | '\t' | '\n' => {
                chars.next();
            }
            '+' => {
                chars.next();
                tokens.push(Token::Plus);
            }
            '-' => {
                chars.next();
                tokens.push(Token::Minus);
            }
            '*' => {
                chars.next();
                tokens.push(Token::Star);
            }
            '^' => {
                chars.next();
                tokens.push(Token::Caret);
            }
            '(' => {
                chars.next();
                tokens.push(Token::LParen);
            }
            ')' => {
                chars.next();
                tokens.push(Token::RParen);
            }
            '0'..='9' => {
                let mut n = 0i64;
                while let Some(&d) = chars.peek() {
                    if let Some(v) = d.to_digit(10) {
                        n = n * 10 + v as i64;
                        chars.next();
                    } else {
                        break;
                    }
                }
                tokens.push(Token::Int(n));
            }
            'a'..='z' | 'A'..='Z' | '_' => {
                let mut name = String::new();
                while let Some(&c) = chars.peek() {
                    if c.is_ascii_alphanumeric() || c == '_' {
                        name.push(c);
                        chars.next();
                    } else {
                        break;
                    }
                }
                tokens.push(Token::Ident(name));
            }
            other => {
                return Err(Error::Schema(format!(
                    "unexpected character '{other}' in expression"
                )))
            }
        }
    }
    Ok(tokens)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn next(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expr(&mut self) -> Result<Poly> {
        let mut acc = match self.peek() {
            Some(Token::Minus) => {
                self.next();
                self.term()?.neg()
            }
            _ => self.term()?,
        };
        loop {
            match self.peek() {
                Some(Token::Plus) => {
                    self.next();
                    acc = acc.add(&self.term()?);
                }
                Some(Token::Minus) => {
                    self.next();
                    acc = acc.sub(&self.term()?);
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Poly> {
        let mut acc = self.factor()?;
        while matches!(self.peek(), Some(Token::Star)) {
            self.next();
            acc = acc.mul(&self.factor()?);
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Poly> {
        let base = self.atom()?;
        if matches!(self.peek(), Some(Token::Caret)) {
            self.next();
            match self.next() {
                Some(Token::Int(e)) if e >= 0 => Ok(base.pow(e as u32)),
                other => Err(Error::Schema(format!(
                    "exponent must be a non-negative integer, got {other:?}"
                ))),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<Poly> {
        match self.next() {
            Some(Token::Int(n)) => Ok(Poly::constant(n)),
            Some(Token::Ident(name)) => Ok(Poly::var(&name)),
            Some(Token::Minus) => Ok(self.atom()?.neg()),
            Some(Token::LParen) => {
                let inner = self.expr()?;
                match self.next() {
                    Some(Token::RParen) => Ok(inner),
                    _ => Err(Error::Schema("missing closing parenthesis".into())),
                }
            }
            other => Err(Error::Schema(format!("unexpected token {other:?}"))),
        }
    }
}

/// Parse an integer polynomial expression with +, -, *, ^ and parentheses.
pub fn parse_poly(input: &str) -> Result<Poly> {
    let tokens = tokenize(input)?;
    let mut parser = Parser { tokens, pos: 0 };
    let poly = parser.expr()?;
    if parser.pos != parser.tokens.len() {
        return Err(Error::Schema(format!(
            "trailing tokens in expression '{input}'"
        )));
    }
    Ok(poly)
}

/// A claimed polynomial identity: left = right after applying the affine
/// substitutions to both sides.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PolyIdentity {
    pub label: String,
    #[serde(default)]
    pub note: String,
    pub left: String,
    pub right: String,
    #[serde(default)]
    pub substitutions: BTreeMap<String, String>,
}

/// True iff the identity holds as an exact symbolic equality.
pub fn expand_identity(id: &PolyIdentity) -> Result<bool> {
    let left = parse_poly(&id.left)?;
    let right = parse_poly(&id.right)?;
    let mut map = BTreeMap::new();
    for (var, expr) in &id.substitutions {
        map.insert(var.clone(), parse_poly(expr)?);
    }
    let left = left.substitute(&map);
    let right = right.substitute(&map);
    Ok(left.sub(&right).is_zero())
}
