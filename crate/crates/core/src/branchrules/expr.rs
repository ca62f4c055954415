//! The small expression language used by the rule tables.
//!
//! ```text
//! entry  := shift [ "^" INT ] [ "for" range ]
//! shift  := "[" INT { "," INT } "]" | wsum
//! wsum   := [sign] wterm { sign wterm }
//! wterm  := [INT] "w" ( DIGITS | "{" affine "}" )
//! range  := affine ("<" | "<=") "i" ("<" | "<=") affine
//! affine := aterm { sign aterm }       aterm := [INT] [ "n" | "i" ] [ "/" INT ]
//! ```
//!
//! `w3` is ϖ_3, `w{n-2i+1}` is ϖ_{n−2i+1}; `n` is the rank and `i` the
//! range variable.

use std::fmt;

use num_integer::Integer;

use crate::error::{Error, Result};
use crate::rootsys::Weight;

/// `(n_coef·n + i_coef·i + constant) / den`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Affine {
    n_coef: i64,
    i_coef: i64,
    constant: i64,
    den: i64,
}

impl Affine {
    fn constant(c: i64) -> Self {
        Affine { n_coef: 0, i_coef: 0, constant: c, den: 1 }
    }

    fn add(self, other: Affine, sign: i64) -> Affine {
        let den = self.den.lcm(&other.den);
        let (l, r) = (den / self.den, den / other.den);
        Affine {
            n_coef: self.n_coef * l + sign * other.n_coef * r,
            i_coef: self.i_coef * l + sign * other.i_coef * r,
            constant: self.constant * l + sign * other.constant * r,
            den,
        }
    }

    /// Value times `den`, so comparisons stay exact.
    fn scaled(&self, n: i64, i: i64) -> i64 {
        self.n_coef * n + self.i_coef * i + self.constant
    }

    pub fn eval(&self, n: i64, i: i64) -> Result<i64> {
        let v = self.scaled(n, i);
        if v % self.den != 0 {
            return Err(Error::InvalidData(format!("index {v}/{} is not an integer", self.den)));
        }
        Ok(v / self.den)
    }

    fn uses_i(&self) -> bool {
        self.i_coef != 0
    }
}

/// A shift or highest weight written in the rule-table syntax.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WeightExpr {
    Literal(Vec<i64>),
    Fundamentals(Vec<(i64, Affine)>),
}

impl WeightExpr {
    pub fn eval(&self, rank: usize, i: i64) -> Result<Weight> {
        match self {
            WeightExpr::Literal(v) => {
                if v.len() != rank {
                    return Err(Error::InvalidData(format!(
                        "literal weight {v:?} has {} coordinates, expected {rank}",
                        v.len()
                    )));
                }
                Ok(Weight::new(v.clone()))
            }
            WeightExpr::Fundamentals(terms) => {
                let mut w = vec![0; rank];
                for (coef, idx) in terms {
                    let k = idx.eval(rank as i64, i)?;
                    if k < 1 || k as usize > rank {
                        return Err(Error::InvalidData(format!("ϖ_{k} out of range for rank {rank}")));
                    }
                    w[k as usize - 1] += coef;
                }
                Ok(Weight::new(w))
            }
        }
    }

    fn uses_i(&self) -> bool {
        match self {
            WeightExpr::Literal(_) => false,
            WeightExpr::Fundamentals(t) => t.iter().any(|(_, a)| a.uses_i()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndexRange {
    lower: Affine,
    lower_strict: bool,
    upper: Affine,
    upper_strict: bool,
}

impl IndexRange {
    /// Integers `i` in the range for the given rank.
    pub fn values(&self, n: i64) -> Vec<i64> {
        // Both bounds are affine in n with |coefficients| small; scan a
        // window wide enough to contain every admissible i.
        let span = 4 * n.abs() + 8;
        let lo = self.lower.scaled(n, 0);
        let hi = self.upper.scaled(n, 0);
        (-span..=span)
            .filter(|&i| {
                let lo_ok = if self.lower_strict {
                    lo < i * self.lower.den
                } else {
                    lo <= i * self.lower.den
                };
                let hi_ok = if self.upper_strict {
                    i * self.upper.den < hi
                } else {
                    i * self.upper.den <= hi
                };
                lo_ok && hi_ok
            })
            .collect()
    }
}

/// One entry of a shift list: `ν^mult`, optionally ranging over `i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShiftTerm {
    pub shift: WeightExpr,
    pub mult: u32,
    pub range: Option<IndexRange>,
    pub text: String,
}

impl ShiftTerm {
    /// Every concrete shift this entry stands for, with its multiplicity.
    pub fn expand(&self, rank: usize) -> Result<Vec<(Weight, u32)>> {
        match &self.range {
            None => Ok(vec![(self.shift.eval(rank, 0)?, self.mult)]),
            Some(r) => r
                .values(rank as i64)
                .into_iter()
                .map(|i| Ok((self.shift.eval(rank, i)?, self.mult)))
                .collect(),
        }
    }
}

impl fmt::Display for ShiftTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.text)
    }
}

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Lexer { src, pos: 0 }
    }

    fn err(&self, msg: &str) -> Error {
        Error::Parse(format!("{msg} at column {} in `{}`", self.pos + 1, self.src))
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(|c| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn peek_ws(&mut self) -> Option<char> {
        self.skip_ws();
        self.peek()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek_ws() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.err(&format!("expected `{c}`")))
        }
    }

    fn keyword(&mut self, kw: &str) -> bool {
        self.skip_ws();
        if self.src[self.pos..].starts_with(kw) {
            self.pos += kw.len();
            true
        } else {
            false
        }
    }

    fn number(&mut self) -> Option<i64> {
        self.skip_ws();
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            None
        } else {
            self.src[start..self.pos].parse().ok()
        }
    }

    fn signed_number(&mut self) -> Result<i64> {
        let neg = self.eat('-');
        if !neg {
            self.eat('+');
        }
        let v = self.number().ok_or_else(|| self.err("expected a number"))?;
        Ok(if neg { -v } else { v })
    }

    fn at_end(&mut self) -> bool {
        self.skip_ws();
        self.pos >= self.src.len()
    }
}

fn parse_affine_term(lx: &mut Lexer) -> Result<Affine> {
    let coef = lx.number();
    let mut a = Affine::constant(0);
    match lx.peek_ws() {
        Some('n') => {
            lx.pos += 1;
            a.n_coef = coef.unwrap_or(1);
        }
        Some('i') => {
            lx.pos += 1;
            a.i_coef = coef.unwrap_or(1);
        }
        _ => a.constant = coef.ok_or_else(|| lx.err("expected a number, `n` or `i`"))?,
    }
    if lx.eat('/') {
        a.den = lx.number().filter(|&d| d > 0).ok_or_else(|| lx.err("expected a positive divisor"))?;
    }
    Ok(a)
}

fn parse_affine(lx: &mut Lexer) -> Result<Affine> {
    let mut sign = if lx.eat('-') { -1 } else { 1 };
    let mut acc = Affine::constant(0);
    loop {
        let t = parse_affine_term(lx)?;
        acc = acc.add(t, sign);
        if lx.eat('+') {
            sign = 1;
        } else if lx.eat('-') {
            sign = -1;
        } else {
            return Ok(acc);
        }
    }
}

fn parse_shift(lx: &mut Lexer) -> Result<WeightExpr> {
    if lx.eat('[') {
        let mut v = vec![lx.signed_number()?];
        while lx.eat(',') {
            v.push(lx.signed_number()?);
        }
        lx.expect(']')?;
        return Ok(WeightExpr::Literal(v));
    }
    let mut terms = Vec::new();
    let mut sign = if lx.eat('-') {
        -1
    } else {
        lx.eat('+');
        1
    };
    loop {
        let coef = lx.number().unwrap_or(1);
        lx.expect('w')?;
        let idx = if lx.eat('{') {
            let a = parse_affine(lx)?;
            lx.expect('}')?;
            a
        } else {
            Affine::constant(lx.number().ok_or_else(|| lx.err("expected a weight index"))?)
        };
        terms.push((sign * coef, idx));
        if lx.eat('+') {
            sign = 1;
        } else if lx.peek_ws() == Some('-') {
            lx.pos += 1;
            sign = -1;
        } else {
            break;
        }
    }
    Ok(WeightExpr::Fundamentals(terms))
}

fn parse_cmp(lx: &mut Lexer) -> Result<bool> {
    lx.expect('<')?;
    Ok(!lx.eat('='))
}

fn parse_range(lx: &mut Lexer) -> Result<IndexRange> {
    let lower = parse_affine(lx)?;
    let lower_strict = parse_cmp(lx)?;
    lx.expect('i')?;
    let upper_strict = parse_cmp(lx)?;
    let upper = parse_affine(lx)?;
    Ok(IndexRange { lower, lower_strict, upper, upper_strict })
}

pub fn parse_weight_expr(src: &str) -> Result<WeightExpr> {
    let mut lx = Lexer::new(src);
    let w = parse_shift(&mut lx)?;
    if !lx.at_end() {
        return Err(lx.err("trailing input"));
    }
    Ok(w)
}

pub fn parse_shift_term(src: &str) -> Result<ShiftTerm> {
    let mut lx = Lexer::new(src);
    let shift = parse_shift(&mut lx)?;
    let mult = if lx.eat('^') {
        lx.number().filter(|&m| m > 0).ok_or_else(|| lx.err("expected a positive multiplicity"))? as u32
    } else {
        1
    };
    let range = if lx.keyword("for") {
        Some(parse_range(&mut lx)?)
    } else {
        None
    };
    if !lx.at_end() {
        return Err(lx.err("trailing input"));
    }
    if shift.uses_i() && range.is_none() {
        return Err(Error::Parse(format!("`i` used without a range in `{src}`")));
    }
    Ok(ShiftTerm { shift, mult, range, text: src.trim().to_string() })
}
