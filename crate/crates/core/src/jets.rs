//! The free differential setting.
//!
//! A [`JetContext`] fixes base generators `x1, …, xg`, an alphabet of
//! derivation letters `D1, …, Dm` and a maximal word length `L`. For every
//! generator and every word `θ` of length `1..=L` it allocates a jet symbol
//! `θ(x)`, a fresh variable standing for the value of `θ` at `x`. Letters
//! satisfy no relations, not even commutation.
//!
//! Any polynomial identity in the generators and jet symbols that reduces to
//! zero here holds for every choice of derivations on ℂ and every choice of
//! complex arguments: a derivation extends freely along a transcendence
//! basis, so the generators and jets can be specialized independently. A
//! nonzero defect, conversely, has a rational point where it does not vanish,
//! and that point is realized by suitable derivations. The witness search in
//! `dclass` produces such points.

use std::collections::HashMap;
use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};
use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::arith::Rational;
use crate::config::Config;
use crate::error::{Error, Result};
use crate::poly::{MPoly, Monomial, RatFunc, VarId, VarKind, VarRegistry};

/// A composition of derivation letters, written outermost first: the word
/// `D1.D2` is `δ₁ ∘ δ₂` and applies `δ₂` first. Letters are stored 0-based.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DerivWord(Vec<u16>);

impl DerivWord {
    pub fn identity() -> Self {
        DerivWord(Vec::new())
    }

    pub fn new(letters: Vec<u16>) -> Self {
        DerivWord(letters)
    }

    pub fn letter(i: u16) -> Self {
        DerivWord(vec![i])
    }

    /// `δ^k` for a single letter.
    pub fn power(letter: u16, k: usize) -> Self {
        DerivWord(vec![letter; k])
    }

    pub fn letters(&self) -> &[u16] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &DerivWord) -> DerivWord {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        DerivWord(v)
    }

    fn prepend(&self, letter: u16) -> DerivWord {
        let mut v = Vec::with_capacity(self.0.len() + 1);
        v.push(letter);
        v.extend_from_slice(&self.0);
        DerivWord(v)
    }
}

impl Ord for DerivWord {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for DerivWord {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for DerivWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("id");
        }
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(".")?;
            }
            write!(f, "D{}", l + 1)?;
        }
        Ok(())
    }
}

/// A ℚ-linear combination of derivation words.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Operator {
    terms: BTreeMap<DerivWord, Rational>,
}

impl Operator {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn word(w: DerivWord) -> Self {
        Self::from_terms([(w, Rational::one())])
    }

    pub fn letter(i: u16) -> Self {
        Self::word(DerivWord::letter(i))
    }

    /// `δ^k` for the letter `letter`.
    pub fn power(letter: u16, k: usize) -> Self {
        Self::word(DerivWord::power(letter, k))
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (DerivWord, Rational)>) -> Self {
        let mut map: BTreeMap<DerivWord, Rational> = BTreeMap::new();
        for (w, c) in terms {
            *map.entry(w).or_insert_with(Rational::zero) += c;
        }
        map.retain(|_, c| !c.is_zero());
        Operator { terms: map }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&DerivWord, &Rational)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn max_len(&self) -> usize {
        self.terms.keys().map(DerivWord::len).max().unwrap_or(0)
    }

    /// Smallest alphabet containing every letter used.
    pub fn alphabet_size(&self) -> usize {
        self.terms
            .keys()
            .flat_map(|w| w.letters().iter().map(|&l| l as usize + 1))
            .max()
            .unwrap_or(0)
    }

    pub fn scale(&self, c: &Rational) -> Operator {
        Operator::from_terms(self.terms.iter().map(|(w, d)| (w.clone(), d * c)))
    }

    pub fn add(&self, other: &Operator) -> Operator {
        Operator::from_terms(self.terms.iter().chain(other.terms.iter()).map(|(w, c)| (w.clone(), c.clone())))
    }

    pub fn sub(&self, other: &Operator) -> Operator {
        self.add(&other.scale(&-Rational::one()))
    }

    /// `self ∘ other`, bilinear in the words.
    pub fn compose(&self, other: &Operator) -> Operator {
        Operator::from_terms(
            self.terms
                .iter()
                .flat_map(|(w, c)| other.terms.iter().map(move |(v, d)| (w.compose(v), c * d))),
        )
    }
}

impl fmt::Display for Operator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (w, c)) in self.terms.iter().enumerate() {
            let neg = c < &Rational::zero();
            if i == 0 {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            let abs = if neg { -c } else { c.clone() };
            if !abs.is_one() {
                write!(f, "{abs}*")?;
            }
            write!(f, "{w}")?;
        }
        Ok(())
    }
}

static NEXT_CONTEXT_ID: AtomicU64 = AtomicU64::new(1);

/// Generators, jet symbols and the Leibniz action of the letters on them.
///
/// Every jet symbol is allocated at construction; the context is immutable
/// afterwards.
#[derive(Debug)]
pub struct JetContext {
    id: u64,
    registry: VarRegistry,
    generators: Vec<VarId>,
    alphabet: usize,
    max_len: usize,
    table: HashMap<(VarId, DerivWord), VarId>,
    words: HashMap<VarId, DerivWord>,
}

impl JetContext {
    /// Context with generators `x` (one generator) or `x1, …, xg`.
    pub fn make(num_generators: usize, alphabet: usize, max_len: usize, cfg: &Config) -> Result<Self> {
        let names: Vec<String> = if num_generators == 1 {
            vec!["x".to_string()]
        } else {
            (1..=num_generators).map(|i| format!("x{i}")).collect()
        };
        Self::with_generators(&names, alphabet, max_len, cfg)
    }

    pub fn with_generators<S: AsRef<str>>(names: &[S], alphabet: usize, max_len: usize, cfg: &Config) -> Result<Self> {
        let needed = symbol_count(names.len(), alphabet, max_len).filter(|&n| n <= cfg.max_symbols);
        let Some(_) = needed else {
            return Err(Error::Capacity {
                needed: symbol_count(names.len(), alphabet, max_len).unwrap_or(usize::MAX),
                limit: cfg.max_symbols,
            });
        };
        let mut registry = VarRegistry::new();
        let generators: Vec<VarId> = names.iter().map(|n| registry.base(n.as_ref())).collect();
        let mut table = HashMap::new();
        let mut words = HashMap::new();
        for &g in &generators {
            let mut layer = vec![DerivWord::identity()];
            for _ in 0..max_len {
                let mut next = Vec::with_capacity(layer.len() * alphabet);
                for w in &layer {
                    for l in 0..alphabet as u16 {
                        next.push(w.prepend(l));
                    }
                }
                next.sort();
                for w in &next {
                    let name = format!("{w}({})", registry.name(g));
                    let v = registry.jet(name, g);
                    table.insert((g, w.clone()), v);
                    words.insert(v, w.clone());
                }
                layer = next;
            }
        }
        Ok(JetContext {
            id: NEXT_CONTEXT_ID.fetch_add(1, Ordering::Relaxed),
            registry,
            generators,
            alphabet,
            max_len,
            table,
            words,
        })
    }

    pub fn id(&self) -> u64 {
        self.id
    }

    pub fn registry(&self) -> &VarRegistry {
        &self.registry
    }

    pub fn generators(&self) -> &[VarId] {
        &self.generators
    }

    pub fn generator(&self, i: usize) -> RatFunc {
        RatFunc::var(self.generators[i])
    }

    pub fn alphabet(&self) -> usize {
        self.alphabet
    }

    pub fn max_word_len(&self) -> usize {
        self.max_len
    }

    pub fn num_vars(&self) -> usize {
        self.registry.len()
    }

    /// The symbol `θ(g)`; the identity word gives `g` itself.
    pub fn jet(&self, generator: VarId, word: &DerivWord) -> Option<VarId> {
        if word.is_empty() {
            return Some(generator);
        }
        self.table.get(&(generator, word.clone())).copied()
    }

    /// Generator and word behind a variable.
    pub fn decompose(&self, v: VarId) -> (VarId, DerivWord) {
        match self.registry.kind(v) {
            VarKind::Base => (v, DerivWord::identity()),
            VarKind::Jet { base } => (base, self.words[&v].clone()),
        }
    }

    pub fn render(&self, f: &RatFunc) -> String {
        f.render(&self.registry)
    }

    fn check_letter(&self, letter: u16) -> Result<()> {
        if letter as usize >= self.alphabet {
            return Err(Error::UnknownLetter {
                letter: letter as usize + 1,
                alphabet: self.alphabet,
            });
        }
        Ok(())
    }

    /// `δ(v)` for a single variable.
    fn derive_var(&self, letter: u16, v: VarId) -> Result<VarId> {
        let (g, w) = self.decompose(v);
        let target = w.prepend(letter);
        self.jet(g, &target).ok_or(Error::WordLength {
            needed: target.len(),
            max: self.max_len,
        })
    }

    /// Leibniz action of one letter on a polynomial.
    pub fn derive_poly(&self, letter: u16, p: &MPoly) -> Result<MPoly> {
        self.check_letter(letter)?;
        if self.max_len == 0 {
            return Err(Error::WordLength { needed: 1, max: 0 });
        }
        let mut images: HashMap<VarId, VarId> = HashMap::new();
        let mut out = Vec::new();
        for (m, c) in p.terms() {
            for (v, e) in m.iter() {
                let dv = match images.get(&v) {
                    Some(&dv) => dv,
                    None => {
                        let dv = self.derive_var(letter, v)?;
                        images.insert(v, dv);
                        dv
                    }
                };
                let rest = m.div(&Monomial::var(v, 1)).expect("v occurs in m");
                let coeff = c * Rational::from_integer(e.into());
                out.push((rest.mul(&Monomial::var(dv, 1)), coeff));
            }
        }
        Ok(MPoly::from_terms(out))
    }

    /// Leibniz and quotient rule for one letter.
    pub fn derive(&self, letter: u16, f: &RatFunc) -> Result<RatFunc> {
        let dp = self.derive_poly(letter, f.num())?;
        if f.is_polynomial() {
            return Ok(dp.into());
        }
        let q = f.den();
        let dq = self.derive_poly(letter, q)?;
        let num = &(&dp * q) - &(f.num() * &dq);
        RatFunc::new(num, q * q)
    }

    pub fn apply_word(&self, w: &DerivWord, f: &RatFunc) -> Result<RatFunc> {
        let mut acc = f.clone();
        for &l in w.letters().iter().rev() {
            acc = self.derive(l, &acc)?;
        }
        Ok(acc)
    }

    /// `F(f)`, sharing work between words with a common innermost suffix.
    pub fn apply_operator(&self, op: &Operator, f: &RatFunc) -> Result<RatFunc> {
        let mut memo: HashMap<&[u16], RatFunc> = HashMap::new();
        let mut total = RatFunc::zero();
        for (w, c) in op.terms() {
            let letters = w.letters();
            // longest already-computed suffix
            let mut start = letters.len();
            while start > 0 && memo.contains_key(&letters[start - 1..]) {
                start -= 1;
            }
            let mut acc = if start == letters.len() {
                f.clone()
            } else {
                memo[&letters[start..]].clone()
            };
            for i in (0..start).rev() {
                acc = self.derive(letters[i], &acc)?;
                memo.insert(&letters[i..], acc.clone());
            }
            total = &total + &acc.scale(c);
        }
        Ok(total)
    }
}

/// `g * (m + m^2 + … + m^L)`, or `None` on overflow.
fn symbol_count(generators: usize, alphabet: usize, max_len: usize) -> Option<usize> {
    let mut per_gen: usize = 1;
    let mut layer: usize = 1;
    for _ in 0..max_len {
        layer = layer.checked_mul(alphabet)?;
        per_gen = per_gen.checked_add(layer)?;
    }
    generators.checked_mul(per_gen)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{rat, ratio};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn ctx(g: usize, m: usize, l: usize) -> JetContext {
        JetContext::make(g, m, l, &Config::default()).unwrap()
    }

    fn v(ctx: &JetContext, name: &str) -> RatFunc {
        RatFunc::var(ctx.registry().lookup(name).unwrap_or_else(|| panic!("no {name}")))
    }

    #[test]
    fn context_sizes() {
        let c = ctx(1, 1, 2);
        assert_eq!(c.num_vars(), 3);
        assert!(c.registry().lookup("D1.D1(x)").is_some());
        assert_eq!(ctx(3, 2, 1).num_vars(), 9);
        let c0 = ctx(1, 1, 0);
        assert_eq!(c0.num_vars(), 1);
        assert!(c0.derive(0, &c0.generator(0)).is_err());
        assert!(c0.derive(0, &RatFunc::constant(rat(7))).is_err());
        let cfg = Config { max_symbols: 10, ..Config::default() };
        assert!(matches!(JetContext::make(2, 2, 2, &cfg), Err(Error::Capacity { needed: 14, limit: 10 })));
    }

    #[test]
    fn derive_examples() {
        let c = ctx(1, 1, 2);
        let x = c.generator(0);
        let d = c.derive(0, &(&x * &x)).unwrap();
        assert_eq!(c.render(&d), "2*x*D1(x)");
        assert!(c.derive(0, &RatFunc::constant(rat(7))).unwrap().is_zero());
        let inv = RatFunc::one().checked_div(&x).unwrap();
        let d = c.derive(0, &inv).unwrap();
        assert_eq!(d, -&v(&c, "D1(x)").checked_div(&(&x * &x)).unwrap());
        assert!(matches!(c.derive(1, &x), Err(Error::UnknownLetter { letter: 2, .. })));
        let dd = c.derive(0, &v(&c, "D1(x)")).unwrap();
        assert!(matches!(c.derive(0, &dd), Err(Error::WordLength { needed: 3, max: 2 })));
    }

    #[test]
    fn apply_operator_examples() {
        let c = ctx(1, 1, 2);
        let x = c.generator(0);
        let dd = Operator::power(0, 2);
        let r = c.apply_operator(&dd, &(&x * &x)).unwrap();
        let dx = v(&c, "D1(x)");
        let ddx = v(&c, "D1.D1(x)");
        // two-fold Leibniz expansion by hand
        assert_eq!(r, (&dx * &dx).scale(&rat(2)) + (&x * &ddx).scale(&rat(2)));

        let c2 = ctx(1, 2, 1);
        let x = c2.generator(0);
        let op = Operator::from_terms([(DerivWord::letter(0), rat(1)), (DerivWord::letter(1), rat(2))]);
        let r = c2.apply_operator(&op, &x).unwrap();
        assert_eq!(r, v(&c2, "D1(x)") + v(&c2, "D2(x)").scale(&rat(2)));

        let mut cfg = Config::default();
        cfg.max_symbols = 100;
        let c3 = JetContext::with_generators(&["x", "y"], 1, 2, &cfg).unwrap();
        let x = c3.generator(0);
        let y = c3.generator(1);
        let lhs = c3.apply_operator(&dd, &(&x * &y)).unwrap();
        let rhs = &c3.apply_operator(&dd, &x).unwrap() * &y + &x * &c3.apply_operator(&dd, &y).unwrap();
        assert_eq!(lhs - rhs, (&v(&c3, "D1(x)") * &v(&c3, "D1(y)")).scale(&rat(2)));
    }

    #[test]
    fn identity_word_and_zero_operator() {
        let c = ctx(1, 1, 1);
        let x = c.generator(0);
        assert_eq!(c.apply_operator(&Operator::word(DerivWord::identity()), &x).unwrap(), x);
        assert!(c.apply_operator(&Operator::zero(), &x).unwrap().is_zero());
    }

    #[test]
    fn letters_do_not_commute() {
        let c = ctx(1, 2, 2);
        let x = c.generator(0);
        let ab = c.apply_word(&DerivWord::new(vec![0, 1]), &x).unwrap();
        let ba = c.apply_word(&DerivWord::new(vec![1, 0]), &x).unwrap();
        assert_ne!(ab, ba);
        assert_eq!(c.render(&ab), "D1.D2(x)");
    }

    fn random_ratfunc(rng: &mut ChaCha8Rng, c: &JetContext, jet_ok: bool) -> RatFunc {
        let mut vars: Vec<VarId> = c.generators().to_vec();
        if jet_ok {
            vars.extend(c.registry().iter().filter(|&v| c.decompose(v).1.len() == 1));
        }
        let mut poly = || {
            MPoly::from_terms((0..rng.gen_range(1..=3)).map(|_| {
                let pairs = (0..2)
                    .map(|_| (vars[rng.gen_range(0..vars.len())], rng.gen_range(0..=2)))
                    .collect();
                (Monomial::from_pairs(pairs), ratio(rng.gen_range(-4..=4), rng.gen_range(1..=3)))
            }))
        };
        let num = poly();
        let mut den = poly();
        if den.is_zero() || rng.gen_bool(0.5) {
            den = MPoly::one();
        }
        RatFunc::new(num, den).unwrap()
    }

    #[test]
    fn single_letters_obey_leibniz() {
        let c = JetContext::with_generators(&["x", "y"], 2, 3, &Config::default()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let f = random_ratfunc(&mut rng, &c, true);
            let g = random_ratfunc(&mut rng, &c, true);
            for l in 0..2 {
                let lhs = c.derive(l, &(&f * &g)).unwrap();
                let rhs = &c.derive(l, &f).unwrap() * &g + &f * &c.derive(l, &g).unwrap();
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn composition_and_additivity() {
        let c = JetContext::with_generators(&["x", "y"], 2, 4, &Config::default()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..60 {
            let f = random_ratfunc(&mut rng, &c, false);
            let g = random_ratfunc(&mut rng, &c, false);
            let len1 = rng.gen_range(0..=2);
            let len2 = rng.gen_range(0..=2);
            let w1 = DerivWord::new((0..len1).map(|_| rng.gen_range(0..2)).collect());
            let w2 = DerivWord::new((0..len2).map(|_| rng.gen_range(0..2)).collect());
            let whole = c.apply_operator(&Operator::word(w1.compose(&w2)), &f).unwrap();
            let inner = c.apply_operator(&Operator::word(w2.clone()), &f).unwrap();
            assert_eq!(whole, c.apply_operator(&Operator::word(w1.clone()), &inner).unwrap());

            let op = Operator::from_terms([(w1.clone(), ratio(3, 2)), (w2.clone(), rat(-2))]);
            let sum = c.apply_operator(&op, &(&f + &g)).unwrap();
            let parts = c.apply_operator(&op, &f).unwrap() + c.apply_operator(&op, &g).unwrap();
            assert_eq!(sum, parts);
        }
    }

    #[test]
    fn operator_algebra() {
        let a = Operator::letter(0);
        let b = Operator::letter(1);
        assert!(a.sub(&a).is_zero());
        let ab = a.compose(&b);
        assert_eq!(ab.to_string(), "D1.D2");
        let comb = a.scale(&rat(2)).add(&ab.scale(&ratio(-3, 2)));
        assert_eq!(comb.to_string(), "2*D1 - 3/2*D1.D2");
        assert_eq!(comb.max_len(), 2);
        assert_eq!(comb.alphabet_size(), 2);
    }
}
