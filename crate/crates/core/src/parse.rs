//! Text syntax for operators and rational functions.
//!
//! Operators:
//!
//! ```text
//! operator := ['-'] term (('+' | '-') term)*  |  '0'
//! term     := [rational '*'] word
//! word     := letter ('.' letter)*  |  'id'
//! letter   := 'D' digits            (D1, D2, …)
//! rational := integer ['/' positive-integer]
//! ```
//!
//! `D1.D2` is `δ₁ ∘ δ₂` and applies `δ₂` first.
//!
//! Rational functions use the usual arithmetic over variables matching
//! `[a-z][0-9]*` and integer literals, with `+ - * / ^` and parentheses.
//! `^` binds tightest and takes an integer exponent (possibly negative),
//! then unary minus, then `*` and `/`, then `+` and `-`.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::arith::Rational;
use crate::config::Config;
use crate::error::{Error, Result};
use crate::jets::{DerivWord, Operator};
use crate::poly::{RatFunc, VarId, VarRegistry};

struct Cursor<'a> {
    text: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(text: &'a str) -> Self {
        Cursor { text, pos: 0 }
    }

    fn skip_ws(&mut self) {
        while self.peek_raw().is_some_and(|c| c.is_whitespace()) {
            self.pos += self.peek_raw().map_or(0, char::len_utf8);
        }
    }

    fn peek_raw(&self) -> Option<char> {
        self.text[self.pos..].chars().next()
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.peek_raw()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn error<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            pos: self.pos,
            msg: msg.into(),
        })
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            self.error(format!("expected `{c}`"))
        }
    }

    fn digits(&mut self) -> Option<&'a str> {
        self.skip_ws();
        let start = self.pos;
        while self.peek_raw().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        (self.pos > start).then(|| &self.text[start..self.pos])
    }

    fn integer(&mut self) -> Result<BigInt> {
        match self.digits() {
            Some(d) => Ok(d.parse().expect("ascii digits")),
            None => self.error("expected an integer"),
        }
    }

    fn finish(&mut self) -> Result<()> {
        match self.peek() {
            None => Ok(()),
            Some(c) => self.error(format!("unexpected `{c}`")),
        }
    }
}

/// Parses an operator. Letters beyond `alphabet` are rejected when an
/// alphabet size is given.
pub fn parse_operator(text: &str, alphabet: Option<usize>) -> Result<Operator> {
    let mut cur = Cursor::new(text);
    if cur.peek().is_none() {
        return cur.error("empty operator");
    }
    let mut terms = Vec::new();
    let mut negative = cur.eat('-');
    loop {
        let (word, coeff) = operator_term(&mut cur, alphabet)?;
        terms.push((word, if negative { -coeff } else { coeff }));
        if cur.eat('+') {
            negative = false;
        } else if cur.eat('-') {
            negative = true;
        } else {
            break;
        }
    }
    cur.finish()?;
    Ok(Operator::from_terms(terms))
}

fn operator_term(cur: &mut Cursor, alphabet: Option<usize>) -> Result<(DerivWord, Rational)> {
    match cur.peek() {
        Some(c) if c.is_ascii_digit() => {
            let start = cur.pos;
            let num = cur.integer()?;
            let coeff = if cur.eat('/') {
                let den = cur.integer()?;
                if den.is_zero() {
                    return Err(Error::Parse {
                        pos: start,
                        msg: "zero denominator".to_string(),
                    });
                }
                Rational::new(num, den)
            } else {
                Rational::from_integer(num)
            };
            if cur.eat('*') {
                Ok((operator_word(cur, alphabet)?, coeff))
            } else if coeff.is_zero() {
                // the zero operator renders as a bare `0`
                Ok((DerivWord::identity(), coeff))
            } else {
                cur.error("expected `*` and a word after the coefficient")
            }
        }
        _ => Ok((operator_word(cur, alphabet)?, Rational::one())),
    }
}

fn operator_word(cur: &mut Cursor, alphabet: Option<usize>) -> Result<DerivWord> {
    if cur.peek() == Some('i') {
        cur.pos += 1;
        cur.expect('d')?;
        return Ok(DerivWord::identity());
    }
    let mut letters = Vec::new();
    loop {
        if !cur.eat('D') {
            return cur.error("expected a letter `D<k>`");
        }
        let at = cur.pos;
        let Some(d) = cur.digits() else {
            return cur.error("expected the letter index");
        };
        let k: usize = match d.parse() {
            Ok(k) if k >= 1 && k <= u16::MAX as usize => k,
            _ => {
                return Err(Error::Parse {
                    pos: at,
                    msg: format!("letter index `{d}` must be between 1 and {}", u16::MAX),
                })
            }
        };
        if let Some(m) = alphabet {
            if k > m {
                return Err(Error::UnknownLetter { letter: k, alphabet: m });
            }
        }
        letters.push((k - 1) as u16);
        if !cur.eat('.') {
            break;
        }
    }
    Ok(DerivWord::new(letters))
}

/// Parses a rational function, allocating unseen variables in `reg`.
pub fn parse_ratfunc(text: &str, reg: &mut VarRegistry) -> Result<RatFunc> {
    parse_ratfunc_limited(text, reg, Config::default().max_degree)
}

/// As [`parse_ratfunc`], rejecting intermediate results above `max_degree`.
pub fn parse_ratfunc_limited(text: &str, reg: &mut VarRegistry, max_degree: u32) -> Result<RatFunc> {
    let mut p = ExprParser {
        cur: Cursor::new(text),
        resolve: &mut |name: &str| Ok(reg.base(name)),
        max_degree,
    };
    p.parse_all()
}

/// Parses a rational function over an existing set of variables; unknown
/// names are an error.
pub fn parse_ratfunc_in(text: &str, reg: &VarRegistry) -> Result<RatFunc> {
    let mut p = ExprParser {
        cur: Cursor::new(text),
        resolve: &mut |name: &str| reg.lookup(name).ok_or_else(|| Error::UnknownVariable(name.to_string())),
        max_degree: Config::default().max_degree,
    };
    p.parse_all()
}

struct ExprParser<'a, 'r> {
    cur: Cursor<'a>,
    resolve: &'r mut dyn FnMut(&str) -> Result<VarId>,
    max_degree: u32,
}

impl ExprParser<'_, '_> {
    fn parse_all(&mut self) -> Result<RatFunc> {
        if self.cur.peek().is_none() {
            return self.cur.error("empty expression");
        }
        let f = self.sum()?;
        self.cur.finish()?;
        Ok(f)
    }

    fn guard(&self, f: RatFunc, at: usize) -> Result<RatFunc> {
        let degree = f.degree();
        if degree > self.max_degree {
            return Err(Error::Parse {
                pos: at,
                msg: Error::DegreeLimit {
                    degree,
                    limit: self.max_degree,
                }
                .to_string(),
            });
        }
        Ok(f)
    }

    fn sum(&mut self) -> Result<RatFunc> {
        let mut acc = self.product()?;
        loop {
            if self.cur.eat('+') {
                acc = acc + self.product()?;
            } else if self.cur.eat('-') {
                acc = acc - self.product()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn product(&mut self) -> Result<RatFunc> {
        let mut acc = self.unary()?;
        loop {
            let at = self.cur.pos;
            if self.cur.eat('*') {
                let rhs = self.unary()?;
                acc = self.guard(&acc * &rhs, at)?;
            } else if self.cur.eat('/') {
                let rhs = self.unary()?;
                if rhs.is_zero() {
                    return Err(Error::DivisionByZero);
                }
                acc = self.guard(acc.checked_div(&rhs)?, at)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<RatFunc> {
        if self.cur.eat('-') {
            return Ok(-self.unary()?);
        }
        self.power()
    }

    fn power(&mut self) -> Result<RatFunc> {
        let base = self.atom()?;
        let at = self.cur.pos;
        if !self.cur.eat('^') {
            return Ok(base);
        }
        let negative = self.cur.eat('-');
        let k = self.cur.integer()?;
        let k: i64 = match i64::try_from(&k) {
            Ok(k) if k.unsigned_abs() <= self.max_degree as u64 => k,
            _ => {
                return Err(Error::Parse {
                    pos: at,
                    msg: format!("exponent {k} exceeds the degree limit {}", self.max_degree),
                })
            }
        };
        if negative && base.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let value = base.pow(if negative { -k } else { k })?;
        self.guard(value, at)
    }

    fn atom(&mut self) -> Result<RatFunc> {
        match self.cur.peek() {
            Some('(') => {
                self.cur.pos += 1;
                let f = self.sum()?;
                self.cur.expect(')')?;
                Ok(f)
            }
            Some(c) if c.is_ascii_digit() => Ok(RatFunc::constant(Rational::from_integer(self.cur.integer()?))),
            Some(c) if c.is_ascii_lowercase() => {
                let start = self.cur.pos;
                self.cur.pos += 1;
                while self.cur.peek_raw().is_some_and(|c| c.is_ascii_digit()) {
                    self.cur.pos += 1;
                }
                if self.cur.peek_raw().is_some_and(|c| c.is_ascii_alphabetic()) {
                    return self.cur.error("variable names are one lowercase letter followed by digits");
                }
                let name = &self.cur.text[start..self.cur.pos];
                Ok(RatFunc::var((self.resolve)(name)?))
            }
            Some(c) => self.cur.error(format!("unexpected `{c}`")),
            None => self.cur.error("unexpected end of input"),
        }
    }
}

/// Splits a comma-separated list of expressions and parses each into `reg`.
pub fn parse_ratfunc_list(text: &str, reg: &mut VarRegistry, max_degree: u32) -> Result<Vec<RatFunc>> {
    let mut out = Vec::new();
    let mut offset = 0;
    for piece in text.split(',') {
        let f = parse_ratfunc_limited(piece, reg, max_degree).map_err(|e| match e {
            Error::Parse { pos, msg } => Error::Parse { pos: pos + offset, msg },
            other => other,
        })?;
        out.push(f);
        offset += piece.len() + 1;
    }
    Ok(out)
}
