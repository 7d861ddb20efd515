//! Membership in the classes `D_n` of higher-order derivations.
//!
//! An additive map `F` lies in `D_n` when for every `α`
//!
//! ```text
//! F(α^{n+1}) = Σ_{i=1}^{n} C(n+1, i) (-1)^{n-i} α^{n+1-i} F(α^i).
//! ```
//!
//! The checks here evaluate the difference of both sides (the *defect*) at a
//! generic point of a jet context. Zero certifies the identity for all
//! derivations and arguments; a nonzero defect comes with a rational point
//! where it does not vanish.

use std::collections::HashMap;
use std::sync::Arc;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arith::{binom, factorial, rat, sign_pow, Rational};
use crate::config::Config;
use crate::error::{Error, Result};
use crate::jets::{JetContext, Operator};
use crate::poly::{odd_component, RatFunc, VarId};

/// A defect together with the context its symbols live in.
#[derive(Debug, Clone)]
pub struct Defect {
    pub ctx: Arc<JetContext>,
    pub value: RatFunc,
}

impl Defect {
    pub fn new(ctx: Arc<JetContext>, value: RatFunc) -> Self {
        Defect { ctx, value }
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    pub fn render(&self) -> String {
        self.ctx.render(&self.value)
    }
}

/// A rational point and the nonzero value a defect takes there.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub assignment: Vec<(VarId, Rational)>,
    pub value: Rational,
}

impl Witness {
    pub fn lookup(&self, v: VarId) -> Option<Rational> {
        self.assignment.iter().find(|(w, _)| *w == v).map(|(_, x)| x.clone())
    }

    /// `(name, value)` pairs in variable order.
    pub fn render(&self, ctx: &JetContext) -> Vec<(String, String)> {
        self.assignment
            .iter()
            .map(|(v, x)| (ctx.registry().name(*v).to_string(), x.to_string()))
            .collect()
    }
}

#[derive(Debug, Clone)]
pub struct MembershipVerdict {
    pub in_dn: bool,
    pub defect: Defect,
    pub witness: Option<Witness>,
}

impl MembershipVerdict {
    /// Builds the verdict for a defect, searching a witness when nonzero.
    pub fn from_defect(defect: Defect, seed: u64) -> Result<Self> {
        if defect.is_zero() {
            return Ok(MembershipVerdict {
                in_dn: true,
                defect,
                witness: None,
            });
        }
        let witness = find_witness(&defect.value, seed)?;
        Ok(MembershipVerdict {
            in_dn: false,
            defect,
            witness: Some(witness),
        })
    }
}

/// Context with `generators` generators able to carry every word of `op`.
pub fn context_for(op: &Operator, generators: &[&str], cfg: &Config) -> Result<JetContext> {
    JetContext::with_generators(generators, op.alphabet_size().max(1), op.max_len(), cfg)
}

/// Powers `f, f^2, …, f^k`, degree-checked.
fn powers(f: &RatFunc, k: usize, cfg: &Config) -> Result<Vec<RatFunc>> {
    let mut out = Vec::with_capacity(k);
    let mut acc = f.clone();
    for i in 1..=k {
        if i > 1 {
            acc = (&acc * f).check_degree(cfg.max_degree)?;
        } else {
            acc = acc.check_degree(cfg.max_degree)?;
        }
        out.push(acc.clone());
    }
    Ok(out)
}

/// `Σ_{i=1}^{n} C(n+1,i) (-1)^{n-i} f^{n+1-i} F(f^i)`, given `F(f^i)` for
/// `i = 1..=n` and the powers of `f`.
fn dn_rhs(n: usize, pows: &[RatFunc], images: &[RatFunc]) -> RatFunc {
    let mut rhs = RatFunc::zero();
    for i in 1..=n {
        let c = binom(n as u64 + 1, i as u64) * sign_pow((n - i) as i64);
        rhs = rhs + (&pows[n - i] * &images[i - 1]).scale(&c);
    }
    rhs
}

/// `F(f^{n+1}) − Σ_{i=1}^{n} C(n+1,i) (-1)^{n-i} f^{n+1-i} F(f^i)`.
pub fn dn_defect(ctx: &JetContext, op: &Operator, n: usize, f: &RatFunc, cfg: &Config) -> Result<RatFunc> {
    cfg.check_level(n)?;
    let pows = powers(f, n + 1, cfg)?;
    let images = pows
        .iter()
        .map(|p| ctx.apply_operator(op, p))
        .collect::<Result<Vec<_>>>()?;
    let lhs = &images[n];
    (lhs - &dn_rhs(n, &pows, &images)).check_degree(cfg.max_degree)
}

/// Decides `F ∈ D_n` at a generic point: one fresh generator `x`.
pub fn is_in_dn(op: &Operator, n: usize, cfg: &Config) -> Result<MembershipVerdict> {
    cfg.check_level(n)?;
    let ctx = Arc::new(context_for(op, &["x"], cfg)?);
    let x = ctx.generator(0);
    let defect = dn_defect(&ctx, op, n, &x, cfg)?;
    MembershipVerdict::from_defect(Defect::new(ctx, defect), cfg.seed)
}

fn generator_names(k: usize) -> Vec<String> {
    (1..=k).map(|i| format!("x{i}")).collect()
}

fn subset_product(ctx: &JetContext, mask: usize) -> RatFunc {
    let mut p = RatFunc::one();
    for (i, _) in ctx.generators().iter().enumerate() {
        if mask & (1 << i) != 0 {
            p = &p * &ctx.generator(i);
        }
    }
    p
}

/// `G_{F,n}(x_1, …, x_{n+1}) = Σ_{k=1}^{n} (-1)^{k+1} Σ_{|S|=k} x_S · F(x_{S^c})`
/// over the first `n+1` generators of `ctx`.
pub fn polarization_rhs(ctx: &JetContext, op: &Operator, n: usize) -> Result<RatFunc> {
    let m = n + 1;
    let full = (1usize << m) - 1;
    let mut total = RatFunc::zero();
    for mask in 1..full {
        let k = mask.count_ones() as i64;
        let image = ctx.apply_operator(op, &subset_product(ctx, full ^ mask))?;
        total = total + (&subset_product(ctx, mask) * &image).scale(&sign_pow(k + 1));
    }
    Ok(total)
}

/// `F(x_1⋯x_{n+1}) − G_{F,n}(x_1, …, x_{n+1})`, the multilinear form of the
/// `D_n` equation.
pub fn polarization_defect(op: &Operator, n: usize, cfg: &Config) -> Result<Defect> {
    cfg.check_level(n)?;
    let names = generator_names(n + 1);
    let names: Vec<&str> = names.iter().map(String::as_str).collect();
    let ctx = Arc::new(context_for(op, &names, cfg)?);
    let full = (1usize << (n + 1)) - 1;
    let lhs = ctx.apply_operator(op, &subset_product(&ctx, full))?;
    let value = (lhs - polarization_rhs(&ctx, op, n)?).check_degree(cfg.max_degree)?;
    Ok(Defect::new(ctx, value))
}

/// Checks the parity extraction linking the two forms of the `D_n` equation.
///
/// With `s = x_1 + … + x_{n+1}`, the part of `F(s^{n+1})` odd in every
/// generator must be `(n+1)! F(x_1⋯x_{n+1})`, and the odd part of the right
/// side of the `D_n` equation at `s` must be `(n+1)! G_{F,n}`. Requires
/// `F ∈ D_n`.
pub fn odd_extraction_check(op: &Operator, n: usize, cfg: &Config) -> Result<bool> {
    let verdict = is_in_dn(op, n, cfg)?;
    if !verdict.in_dn {
        return Err(Error::Precondition(format!("{op} is not in D_{n}")));
    }
    let names = generator_names(n + 1);
    let names: Vec<&str> = names.iter().map(String::as_str).collect();
    let ctx = context_for(op, &names, cfg)?;
    let gens = ctx.generators().to_vec();
    let s = (0..=n).fold(RatFunc::zero(), |acc, i| acc + ctx.generator(i));
    let pows = powers(&s, n + 1, cfg)?;
    let images = pows
        .iter()
        .map(|p| ctx.apply_operator(op, p))
        .collect::<Result<Vec<_>>>()?;
    let scale = factorial(n as u64 + 1);
    let odd = |f: &RatFunc| -> RatFunc {
        debug_assert!(f.is_polynomial());
        odd_component(f.num(), &gens, ctx.registry()).into()
    };

    let full = (1usize << (n + 1)) - 1;
    let multilinear = ctx.apply_operator(op, &subset_product(&ctx, full))?;
    let lhs_ok = odd(&images[n]) == multilinear.scale(&scale);
    let rhs_ok = odd(&dn_rhs(n, &pows, &images)) == polarization_rhs(&ctx, op, n)?.scale(&scale);
    Ok(lhs_ok && rhs_ok)
}

/// `Σ_{i=1}^{n+1} C(n+2,i) (-1)^{n+1-i} D(x^{n+2-i}) D^n(x^i)` for a single
/// derivation `D`. This vanishes for every `n ≥ 1`.
pub fn inductive_subsum(n: usize, cfg: &Config) -> Result<Defect> {
    cfg.check_level(n)?;
    let ctx = Arc::new(JetContext::make(1, 1, n, cfg)?);
    let x = ctx.generator(0);
    let pows = powers(&x, n + 1, cfg)?;
    let d = Operator::letter(0);
    let dn = Operator::power(0, n);
    let mut total = RatFunc::zero();
    for i in 1..=n + 1 {
        let c = binom(n as u64 + 2, i as u64) * sign_pow((n + 1 - i) as i64);
        let left = ctx.apply_operator(&d, &pows[n + 1 - i])?;
        let right = ctx.apply_operator(&dn, &pows[i - 1])?;
        total = total + (&left * &right).scale(&c);
    }
    Ok(Defect::new(ctx, total.check_degree(cfg.max_degree)?))
}

/// Certificate that `δ^{n+1} ∉ D_n`: the defect at the generic point and a
/// rational assignment to `x, δx, …, δ^{n+1}x` where it is nonzero.
pub fn separation_witness(n: usize, cfg: &Config) -> Result<(Defect, Witness)> {
    cfg.check_level(n)?;
    let op = Operator::power(0, n + 1);
    let ctx = Arc::new(JetContext::make(1, 1, n + 1, cfg)?);
    let x = ctx.generator(0);
    let defect = dn_defect(&ctx, &op, n, &x, cfg)?;
    let partial = find_witness(&defect, cfg.seed)?;
    let assignment: Vec<(VarId, Rational)> = ctx
        .registry()
        .iter()
        .map(|v| (v, partial.lookup(v).unwrap_or_else(Rational::zero)))
        .collect();
    let value = defect.evaluate(&assignment.iter().cloned().collect())?;
    debug_assert_eq!(value, partial.value);
    Ok((Defect::new(ctx, defect), Witness { assignment, value }))
}

const ATTEMPTS_PER_ROUND: usize = 1000;
const RANGES: [i64; 4] = [3, 12, 48, 192];

/// Finds a point where `f` is defined and nonzero.
///
/// Tries the origin, each unit vector and the all-ones point first, then
/// seeded uniform draws from `{-3..3}`, widening the range every 1000
/// attempts. The assignment covers exactly the variables of `f`.
pub fn find_witness(f: &RatFunc, seed: u64) -> Result<Witness> {
    let vars = f.vars();
    let try_point = |values: Vec<Rational>| -> Option<Witness> {
        let assignment: Vec<(VarId, Rational)> = vars.iter().copied().zip(values).collect();
        let map: HashMap<VarId, Rational> = assignment.iter().cloned().collect();
        match f.evaluate(&map) {
            Ok(value) if !value.is_zero() => Some(Witness { assignment, value }),
            _ => None,
        }
    };
    if f.is_zero() {
        return Err(Error::SearchExhausted { attempts: 0 });
    }
    let k = vars.len();
    let mut attempts = 1;
    if let Some(w) = try_point(vec![Rational::zero(); k]) {
        return Ok(w);
    }
    for i in 0..k {
        attempts += 1;
        let mut p = vec![Rational::zero(); k];
        p[i] = Rational::one();
        if let Some(w) = try_point(p) {
            return Ok(w);
        }
    }
    attempts += 1;
    if let Some(w) = try_point(vec![Rational::one(); k]) {
        return Ok(w);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for range in RANGES {
        for _ in 0..ATTEMPTS_PER_ROUND {
            attempts += 1;
            let p = (0..k).map(|_| rat(rng.gen_range(-range..=range))).collect();
            if let Some(w) = try_point(p) {
                return Ok(w);
            }
        }
    }
    Err(Error::SearchExhausted { attempts })
}

/// Randomized identity test: evaluates `f` at `points` seeded random
/// rational assignments to every variable of `ctx` and reports whether all
/// values were zero.
pub fn vanishes_at_random_points(f: &RatFunc, ctx: &JetContext, seed: u64, points: usize) -> Result<bool> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5EED_0F0F);
    let mut all_zero = true;
    let mut done = 0;
    let mut tries = 0;
    while done < points {
        tries += 1;
        if tries > 100 * points {
            return Err(Error::SearchExhausted { attempts: tries });
        }
        let point: HashMap<VarId, Rational> = ctx
            .registry()
            .iter()
            .map(|v| {
                let num = rng.gen_range(-1000i64..=1000);
                let den = rng.gen_range(1i64..=97);
                (v, Rational::new(num.into(), den.into()))
            })
            .collect();
        match f.evaluate(&point) {
            Ok(value) => {
                all_zero &= value.is_zero();
                done += 1;
            }
            Err(Error::DenominatorVanishes) => continue,
            Err(e) => return Err(e),
        }
    }
    Ok(all_zero)
}
