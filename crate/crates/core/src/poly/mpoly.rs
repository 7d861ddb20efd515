use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt::Write as _;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer as _;
use num_traits::{One, Pow, Signed, Zero};
use smallvec::SmallVec;

use super::{VarId, VarRegistry};
use crate::arith::Rational;
use crate::error::{Error, Result};

/// Sparse exponent vector: `(variable index, exponent)` pairs sorted by
/// index, exponents strictly positive.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial(SmallVec<[(u32, u32); 4]>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(SmallVec::new())
    }

    pub fn var(v: VarId, exp: u32) -> Self {
        if exp == 0 {
            return Self::one();
        }
        let mut s = SmallVec::new();
        s.push((v.0, exp));
        Monomial(s)
    }

    pub fn from_pairs(mut pairs: Vec<(VarId, u32)>) -> Self {
        pairs.sort_by_key(|&(v, _)| v);
        let mut out: SmallVec<[(u32, u32); 4]> = SmallVec::new();
        for (v, e) in pairs {
            if e == 0 {
                continue;
            }
            match out.last_mut() {
                Some(last) if last.0 == v.0 => last.1 += e,
                _ => out.push((v.0, e)),
            }
        }
        Monomial(out)
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&(_, e)| e).sum()
    }

    pub fn degree_in(&self, v: VarId) -> u32 {
        self.0
            .iter()
            .find(|&&(w, _)| w == v.0)
            .map_or(0, |&(_, e)| e)
    }

    pub fn iter(&self) -> impl Iterator<Item = (VarId, u32)> + '_ {
        self.0.iter().map(|&(v, e)| (VarId(v), e))
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let (a, b) = (&self.0, &other.0);
        let mut out = SmallVec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((a[i].0, a[i].1 + b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial(out)
    }

    /// `self / other` if `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        let mut out = SmallVec::new();
        let mut j = 0;
        let b = &other.0;
        for &(v, e) in &self.0 {
            if j < b.len() && b[j].0 < v {
                return None;
            }
            if j < b.len() && b[j].0 == v {
                match e.cmp(&b[j].1) {
                    Ordering::Less => return None,
                    Ordering::Equal => {}
                    Ordering::Greater => out.push((v, e - b[j].1)),
                }
                j += 1;
            } else {
                out.push((v, e));
            }
        }
        if j < b.len() {
            return None;
        }
        Some(Monomial(out))
    }

    /// Componentwise minimum of exponents.
    pub fn gcd(&self, other: &Monomial) -> Monomial {
        let mut out = SmallVec::new();
        for &(v, e) in &self.0 {
            let f = other.degree_in(VarId(v));
            if f > 0 {
                out.push((v, e.min(f)));
            }
        }
        Monomial(out)
    }

    /// Drops the variable `v`, returning its exponent and the remainder.
    fn split_off(&self, v: VarId) -> (u32, Monomial) {
        let mut rest = self.clone();
        match rest.0.iter().position(|&(w, _)| w == v.0) {
            Some(pos) => {
                let (_, e) = rest.0.remove(pos);
                (e, rest)
            }
            None => (0, rest),
        }
    }
}

impl Ord for Monomial {
    /// Graded lexicographic order; a lower variable index is more significant.
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| {
            for (a, b) in self.0.iter().zip(other.0.iter()) {
                if a.0 != b.0 {
                    // the side holding the smaller index has a positive
                    // exponent where the other has zero
                    return if a.0 < b.0 { Ordering::Greater } else { Ordering::Less };
                }
                if a.1 != b.1 {
                    return a.1.cmp(&b.1);
                }
            }
            self.0.len().cmp(&other.0.len())
        })
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Polynomial over ℚ with terms stored in decreasing graded-lex order and no
/// zero coefficients, so structural equality is value equality.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct MPoly {
    terms: Vec<(Monomial, Rational)>,
}

impl MPoly {
    pub fn zero() -> Self {
        MPoly { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::monomial(Monomial::one(), c)
    }

    pub fn var(v: VarId) -> Self {
        Self::monomial(Monomial::var(v, 1), Rational::one())
    }

    pub fn monomial(m: Monomial, c: Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        MPoly { terms: vec![(m, c)] }
    }

    /// Builds a polynomial from arbitrary terms, merging duplicates.
    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial, Rational)>) -> Self {
        let mut acc: HashMap<Monomial, Rational> = HashMap::new();
        for (m, c) in terms {
            *acc.entry(m).or_insert_with(Rational::zero) += c;
        }
        let mut terms: Vec<_> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_by(|a, b| b.0.cmp(&a.0));
        MPoly { terms }
    }

    /// Terms must already be sorted, distinct and nonzero.
    pub(crate) fn from_sorted_terms(terms: Vec<(Monomial, Rational)>) -> Self {
        debug_assert!(terms.windows(2).all(|w| w[0].0 > w[1].0));
        debug_assert!(terms.iter().all(|(_, c)| !c.is_zero()));
        MPoly { terms }
    }

    pub fn terms(&self) -> &[(Monomial, Rational)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_one() && self.terms[0].1.is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms[0].0.is_one())
    }

    /// Value of a constant polynomial.
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.as_slice() {
            [] => Some(Rational::zero()),
            [(m, c)] if m.is_one() => Some(c.clone()),
            _ => None,
        }
    }

    pub fn leading(&self) -> Option<&(Monomial, Rational)> {
        self.terms.first()
    }

    pub fn leading_coeff(&self) -> Rational {
        self.terms.first().map_or_else(Rational::zero, |t| t.1.clone())
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.iter().map(|(m, _)| m.degree()).max().unwrap_or(0)
    }

    pub fn degree_in(&self, v: VarId) -> u32 {
        self.terms.iter().map(|(m, _)| m.degree_in(v)).max().unwrap_or(0)
    }

    pub fn contains(&self, v: VarId) -> bool {
        self.terms.iter().any(|(m, _)| m.degree_in(v) > 0)
    }

    /// Variables that occur, sorted by index.
    pub fn vars(&self) -> Vec<VarId> {
        let mut vs: Vec<VarId> = self.terms.iter().flat_map(|(m, _)| m.iter().map(|(v, _)| v)).collect();
        vs.sort();
        vs.dedup();
        vs
    }

    pub fn scale(&self, c: &Rational) -> MPoly {
        if c.is_zero() {
            return MPoly::zero();
        }
        MPoly {
            terms: self.terms.iter().map(|(m, d)| (m.clone(), d * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial, c: &Rational) -> MPoly {
        if c.is_zero() {
            return MPoly::zero();
        }
        // multiplying by a monomial preserves the term order
        MPoly {
            terms: self.terms.iter().map(|(n, d)| (n.mul(m), d * c)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> MPoly {
        let mut result = MPoly::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    fn merge(&self, other: &MPoly, negate_other: bool) -> MPoly {
        let (a, b) = (&self.terms, &other.terms);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        let pick = |c: &Rational| if negate_other { -c } else { c.clone() };
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push((b[j].0.clone(), pick(&b[j].1)));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = if negate_other { &a[i].1 - &b[j].1 } else { &a[i].1 + &b[j].1 };
                    if !c.is_zero() {
                        out.push((a[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(a[i..].iter().cloned());
        out.extend(b[j..].iter().map(|(m, c)| (m.clone(), pick(c))));
        MPoly { terms: out }
    }

    fn mul_impl(&self, other: &MPoly) -> MPoly {
        if self.is_zero() || other.is_zero() {
            return MPoly::zero();
        }
        if self.terms.len() == 1 {
            let (m, c) = &self.terms[0];
            return other.mul_monomial(m, c);
        }
        if other.terms.len() == 1 {
            let (m, c) = &other.terms[0];
            return self.mul_monomial(m, c);
        }
        let mut acc: HashMap<Monomial, Rational> = HashMap::with_capacity(self.terms.len() * other.terms.len());
        for (m, c) in &self.terms {
            for (n, d) in &other.terms {
                let prod = c * d;
                match acc.entry(m.mul(n)) {
                    std::collections::hash_map::Entry::Occupied(mut e) => *e.get_mut() += prod,
                    std::collections::hash_map::Entry::Vacant(e) => {
                        e.insert(prod);
                    }
                }
            }
        }
        let mut terms: Vec<_> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_by(|a, b| b.0.cmp(&a.0));
        MPoly { terms }
    }

    /// Exact quotient `self / divisor`, or `None` when the division leaves a
    /// remainder.
    pub fn div_exact(&self, divisor: &MPoly) -> Option<MPoly> {
        let (lm, lc) = divisor.leading()?;
        if let Some(c) = divisor.as_constant() {
            return Some(self.scale(&c.recip()));
        }
        let mut rem = self.clone();
        let mut quot = Vec::new();
        while let Some((m, c)) = rem.leading() {
            // the leading term of the remainder must be divisible by lm
            let q = m.div(lm)?;
            let qc = c / lc;
            rem = &rem - &divisor.mul_monomial(&q, &qc);
            quot.push((q, qc));
        }
        Some(MPoly::from_sorted_terms(quot))
    }

    /// Writes `self = content * primitive` where `primitive` has coprime
    /// integer coefficients and a positive leading coefficient.
    pub fn primitive_split(&self) -> (Rational, MPoly) {
        if self.is_zero() {
            return (Rational::one(), MPoly::zero());
        }
        let mut den_lcm = BigInt::one();
        let mut num_gcd = BigInt::zero();
        for (_, c) in &self.terms {
            den_lcm = den_lcm.lcm(c.denom());
            num_gcd = num_gcd.gcd(c.numer());
        }
        let mut content = Rational::new(num_gcd, den_lcm);
        if self.leading_coeff().is_negative() {
            content = -content;
        }
        (content.clone(), self.scale(&content.recip()))
    }

    /// Coefficients in `v`: entry `k` is the coefficient of `v^k`.
    pub fn to_univariate(&self, v: VarId) -> Vec<MPoly> {
        let deg = self.degree_in(v) as usize;
        let mut buckets: Vec<Vec<(Monomial, Rational)>> = vec![Vec::new(); deg + 1];
        for (m, c) in &self.terms {
            let (e, rest) = m.split_off(v);
            buckets[e as usize].push((rest, c.clone()));
        }
        buckets.into_iter().map(MPoly::from_terms).collect()
    }

    pub fn from_univariate(v: VarId, coeffs: &[MPoly]) -> MPoly {
        let terms = coeffs.iter().enumerate().flat_map(|(k, c)| {
            let vk = Monomial::var(v, k as u32);
            c.terms.iter().map(move |(m, d)| (m.mul(&vk), d.clone()))
        });
        MPoly::from_terms(terms)
    }

    /// Exact value at a point; `lookup` supplies variable values.
    pub fn evaluate_with<F>(&self, mut lookup: F) -> Result<Rational>
    where
        F: FnMut(VarId) -> Option<Rational>,
    {
        let mut cache: HashMap<VarId, Rational> = HashMap::new();
        let mut total = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (v, e) in m.iter() {
                let val = match cache.get(&v) {
                    Some(x) => x.clone(),
                    None => {
                        let x = lookup(v).ok_or_else(|| Error::MissingVariable(v.to_string()))?;
                        cache.insert(v, x.clone());
                        x
                    }
                };
                t *= Pow::pow(&val, e);
            }
            total += t;
        }
        Ok(total)
    }

    /// Text form in graded-lex order, e.g. `2*t^2 - 3/2*x*y + 1`.
    pub fn render(&self, reg: &VarRegistry) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let abs = c.abs();
            if m.is_one() {
                let _ = write!(out, "{abs}");
                continue;
            }
            if !abs.is_one() {
                let _ = write!(out, "{abs}*");
            }
            let factors: Vec<String> = m
                .iter()
                .map(|(v, e)| {
                    if e == 1 {
                        reg.name(v).to_string()
                    } else {
                        format!("{}^{e}", reg.name(v))
                    }
                })
                .collect();
            out.push_str(&factors.join("*"));
        }
        out
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $body:expr) => {
        impl $tr<&MPoly> for &MPoly {
            type Output = MPoly;
            fn $method(self, rhs: &MPoly) -> MPoly {
                let f: fn(&MPoly, &MPoly) -> MPoly = $body;
                f(self, rhs)
            }
        }
        impl $tr<MPoly> for MPoly {
            type Output = MPoly;
            fn $method(self, rhs: MPoly) -> MPoly {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&MPoly> for MPoly {
            type Output = MPoly;
            fn $method(self, rhs: &MPoly) -> MPoly {
                (&self).$method(rhs)
            }
        }
        impl $tr<MPoly> for &MPoly {
            type Output = MPoly;
            fn $method(self, rhs: MPoly) -> MPoly {
                self.$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, |a, b| a.merge(b, false));
forward_binop!(Sub, sub, |a, b| a.merge(b, true));
forward_binop!(Mul, mul, |a, b| a.mul_impl(b));

impl Neg for &MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        MPoly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Neg for MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{rat, ratio};

    fn setup() -> (VarRegistry, MPoly, MPoly) {
        let mut reg = VarRegistry::new();
        let x = MPoly::var(reg.base("x"));
        let y = MPoly::var(reg.base("y"));
        (reg, x, y)
    }

    #[test]
    fn graded_lex_order() {
        let x = VarId(0);
        let y = VarId(1);
        let x2 = Monomial::var(x, 2);
        let xy = Monomial::from_pairs(vec![(x, 1), (y, 1)]);
        let y2 = Monomial::var(y, 2);
        let x1 = Monomial::var(x, 1);
        assert!(x2 > xy && xy > y2 && y2 > x1);
        assert!(x1 > Monomial::var(y, 1));
        assert!(Monomial::var(y, 1) > Monomial::one());
    }

    #[test]
    fn expansion_and_cancellation() {
        let (reg, x, _) = setup();
        let p = (&x + &MPoly::one()).pow(3);
        assert_eq!(p.render(&reg), "x^3 + 3*x^2 + 3*x + 1");
        assert!((&x - &x).is_zero());
        assert_eq!((&x + &(-&x)), MPoly::zero());
    }

    #[test]
    fn exact_division() {
        let (_, x, y) = setup();
        let a = &x + &y;
        let b = &x - &y.scale(&rat(2));
        let prod = &a * &b;
        assert_eq!(prod.div_exact(&b), Some(a.clone()));
        assert_eq!(prod.div_exact(&a), Some(b));
        assert_eq!((&prod + &MPoly::one()).div_exact(&a), None);
    }

    #[test]
    fn primitive_split_normalizes() {
        let (reg, x, y) = setup();
        let p = (&x.scale(&ratio(-2, 3))) + &y.scale(&ratio(4, 9));
        let (c, q) = p.primitive_split();
        assert_eq!(c, ratio(-2, 9));
        assert_eq!(q.render(&reg), "3*x - 2*y");
    }

    #[test]
    fn univariate_round_trip() {
        let (_, x, y) = setup();
        let p = &(&x * &x) * &y + &y.pow(3) + x.scale(&rat(5));
        let coeffs = p.to_univariate(VarId(1));
        assert_eq!(coeffs.len(), 4);
        assert_eq!(MPoly::from_univariate(VarId(1), &coeffs), p);
    }

    #[test]
    fn evaluation() {
        let (_, x, y) = setup();
        let p = &(&x * &x) * &y - &MPoly::constant(rat(1));
        let v = p.evaluate_with(|v| Some(if v.0 == 0 { rat(3) } else { ratio(1, 3) })).unwrap();
        assert_eq!(v, rat(2));
        assert!(matches!(p.evaluate_with(|_| None), Err(Error::MissingVariable(_))));
    }
}
