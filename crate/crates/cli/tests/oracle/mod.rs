//! Numeric jets: an evaluation path that never builds polynomials.
//!
//! A quantity `u` is represented by the numbers `θ(u)` for every word `θ`
//! in a subword-closed set, at one rational point. A word applied to a
//! product distributes its letters over the two factors in order, so
//!
//! ```text
//! θ(uv) = Σ_{S ⊆ positions of θ} θ|_S(u) · θ|_{not S}(v)
//! ```
//!
//! and the defects of the checked identities can be computed with plain
//! rational arithmetic from the values of the generators' jets.

#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap};

use hodkit::arith::{binom, ratio, sign_pow, Rational};
use hodkit::jets::{JetContext, Operator};
use hodkit::poly::VarId;
use num_traits::Zero;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub type Word = Vec<u16>;

/// Values of every generator and jet symbol of a context.
pub struct Point {
    values: HashMap<(usize, Word), Rational>,
    pub assignment: HashMap<VarId, Rational>,
}

impl Point {
    pub fn random(ctx: &JetContext, rng: &mut ChaCha8Rng) -> Point {
        Self::from_fn(ctx, |_| ratio(rng.gen_range(-60..=60), rng.gen_range(1..=9)))
    }

    /// Point taking the given values, zero elsewhere.
    pub fn from_assignment(ctx: &JetContext, given: &[(VarId, Rational)]) -> Point {
        let map: HashMap<VarId, Rational> = given.iter().cloned().collect();
        Self::from_fn(ctx, |v| map.get(&v).cloned().unwrap_or_else(Rational::zero))
    }

    fn from_fn(ctx: &JetContext, mut value: impl FnMut(VarId) -> Rational) -> Point {
        let gens = ctx.generators();
        let mut values = HashMap::new();
        let mut assignment = HashMap::new();
        for v in ctx.registry().iter() {
            let (g, w) = ctx.decompose(v);
            let gi = gens.iter().position(|&h| h == g).expect("jet of a generator");
            let x = value(v);
            values.insert((gi, w.letters().to_vec()), x.clone());
            assignment.insert(v, x);
        }
        Point { values, assignment }
    }

    pub fn generator_value(&self, g: usize) -> Rational {
        self.values[&(g, Vec::new())].clone()
    }
}

/// Every subsequence of every word of `op` (including the empty word),
/// shortest first.
pub fn closure(words: impl IntoIterator<Item = Word>) -> Vec<Word> {
    let mut set = BTreeSet::new();
    for w in words {
        for mask in 0u32..(1 << w.len()) {
            let sub: Word = (0..w.len()).filter(|i| mask & (1 << i) != 0).map(|i| w[i]).collect();
            set.insert((sub.len(), sub));
        }
    }
    set.into_iter().map(|(_, w)| w).collect()
}

pub fn operator_words(op: &Operator) -> Vec<Word> {
    op.terms().map(|(w, _)| w.letters().to_vec()).collect()
}

#[derive(Clone)]
pub struct Jet {
    vals: HashMap<Word, Rational>,
}

impl Jet {
    pub fn constant(c: Rational, words: &[Word]) -> Jet {
        let vals = words
            .iter()
            .map(|w| (w.clone(), if w.is_empty() { c.clone() } else { Rational::zero() }))
            .collect();
        Jet { vals }
    }

    pub fn generator(point: &Point, g: usize, words: &[Word]) -> Jet {
        let vals = words
            .iter()
            .map(|w| (w.clone(), point.values[&(g, w.clone())].clone()))
            .collect();
        Jet { vals }
    }

    pub fn value(&self) -> Rational {
        self.vals[&Vec::new()].clone()
    }

    pub fn at(&self, w: &[u16]) -> Rational {
        self.vals[w].clone()
    }

    pub fn mul(&self, other: &Jet) -> Jet {
        let vals = self
            .vals
            .keys()
            .map(|w| {
                let mut total = Rational::zero();
                for mask in 0u32..(1 << w.len()) {
                    let (mut left, mut right) = (Vec::new(), Vec::new());
                    for (i, &l) in w.iter().enumerate() {
                        if mask & (1 << i) != 0 {
                            left.push(l);
                        } else {
                            right.push(l);
                        }
                    }
                    total += &self.vals[&left] * &other.vals[&right];
                }
                (w.clone(), total)
            })
            .collect();
        Jet { vals }
    }

    pub fn pow(&self, k: usize, words: &[Word]) -> Jet {
        (0..k).fold(Jet::constant(Rational::from_integer(1.into()), words), |acc, _| acc.mul(self))
    }

    /// `F(u)` as a number.
    pub fn apply(&self, op: &Operator) -> Rational {
        op.terms().map(|(w, c)| c * &self.vals[w.letters()]).sum()
    }
}

fn level_coeff(n: usize, i: usize) -> Rational {
    binom(n as u64 + 1, i as u64) * sign_pow((n - i) as i64)
}

/// `F(x^{n+1}) − Σ C(n+1,i) (-1)^{n-i} x^{n+1-i} F(x^i)` with `x` the first
/// generator.
pub fn dn_defect(op: &Operator, n: usize, point: &Point) -> Rational {
    let words = closure(operator_words(op));
    let x = Jet::generator(point, 0, &words);
    let xv = x.value();
    let images: Vec<Rational> = (0..=n + 1).map(|k| x.pow(k, &words).apply(op)).collect();
    let mut rhs = Rational::zero();
    for i in 1..=n {
        rhs += level_coeff(n, i) * num_pow(&xv, n + 1 - i) * &images[i];
    }
    &images[n + 1] - rhs
}

fn num_pow(x: &Rational, k: usize) -> Rational {
    (0..k).fold(Rational::from_integer(1.into()), |acc, _| acc * x)
}

/// Multilinear defect over generators `0..=n`.
pub fn polarization_defect(op: &Operator, n: usize, point: &Point) -> Rational {
    let words = closure(operator_words(op));
    let gens: Vec<Jet> = (0..=n).map(|g| Jet::generator(point, g, &words)).collect();
    let full = (1usize << (n + 1)) - 1;
    let product = |mask: usize| {
        (0..=n)
            .filter(|g| mask & (1 << g) != 0)
            .fold(Jet::constant(Rational::from_integer(1.into()), &words), |acc, g| acc.mul(&gens[g]))
    };
    let mut rhs = Rational::zero();
    for mask in 1..full {
        let k = mask.count_ones() as i64;
        rhs += sign_pow(k + 1) * product(mask).value() * product(full ^ mask).apply(op);
    }
    product(full).apply(op) - rhs
}

/// `Σ_{i=1}^{n+1} C(n+2,i) (-1)^{n+1-i} D(x^{n+2-i}) D^n(x^i)`.
pub fn inductive_subsum(n: usize, point: &Point) -> Rational {
    let words = closure([vec![0u16; n]]);
    let x = Jet::generator(point, 0, &words);
    let mut total = Rational::zero();
    for i in 1..=n + 1 {
        let c = binom(n as u64 + 2, i as u64) * sign_pow((n + 1 - i) as i64);
        total += c * x.pow(n + 2 - i, &words).at(&[0]) * x.pow(i, &words).at(&vec![0u16; n]);
    }
    total
}

/// Fiber defect of the level-`n` relation after moving the generic point
/// (base `x` = generator 0, free fibers = generators `1..=n`) by `F`.
pub fn preservation_defect(op: &Operator, n: usize, point: &Point) -> Rational {
    let words = closure(operator_words(op));
    let x = Jet::generator(point, 0, &words);
    let xv = x.value();
    let fibers: Vec<Rational> = (1..=n).map(|g| point.generator_value(g)).collect();
    let forced = |fib: &dyn Fn(usize) -> Rational| -> Rational {
        (1..=n).map(|i| level_coeff(n, i) * num_pow(&xv, n + 1 - i) * fib(i)).sum()
    };
    let last = forced(&|i| fibers[i - 1].clone());
    let moved_last = last + x.pow(n + 1, &words).apply(op);
    let moved_forced = forced(&|i| &fibers[i - 1] + x.pow(i, &words).apply(op));
    moved_last - moved_forced
}
