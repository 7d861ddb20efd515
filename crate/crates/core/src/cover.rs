//! Additive covers of the field sort.
//!
//! A point of the cover is a pair `(α, a′)` with `α` in the field and `a′`
//! in the fiber above it. Pairs add componentwise, the field acts on fibers
//! by translation (`β ⋆ (α, a′) = (α, a′ + β)`), and the dual-number product
//! `(α, a′) ⊗ (β, b′) = (αβ, αb′ + βa′)` makes the pairs a ring.
//!
//! The level-`n` cover adds the relation `R_n(a_1, …, a_{n+1})`: the bases
//! are `α, α², …, α^{n+1}` and the last fiber is tied to the others by the
//! `D_n` recurrence. An additive map `F` moves fibers by
//! `σ_F(α, a′) = (α, a′ + F(α))`, and `σ_F` preserves `R_n` exactly when
//! `F ∈ D_n`.
//!
//! The field sort is modeled by the rational functions of a jet context.

use std::sync::Arc;

use crate::arith::{binom, rat, ratio, sign_pow, Rational};
use crate::config::Config;
use crate::dclass::{context_for, Defect, MembershipVerdict};
use crate::error::{Error, Result};
use crate::jets::{JetContext, Operator};
use crate::poly::RatFunc;

/// A pair `(base, fiber)` tied to the jet context it was built in.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverPoint {
    base: RatFunc,
    fiber: RatFunc,
    ctx_id: u64,
}

impl CoverPoint {
    pub fn new(ctx: &JetContext, base: RatFunc, fiber: RatFunc) -> Self {
        CoverPoint {
            base,
            fiber,
            ctx_id: ctx.id(),
        }
    }

    pub fn base(&self) -> &RatFunc {
        &self.base
    }

    pub fn fiber(&self) -> &RatFunc {
        &self.fiber
    }

    pub fn context_id(&self) -> u64 {
        self.ctx_id
    }

    fn same_context(&self, other: &CoverPoint) -> Result<()> {
        if self.ctx_id != other.ctx_id {
            return Err(Error::ContextMismatch);
        }
        Ok(())
    }

    fn with(&self, base: RatFunc, fiber: RatFunc) -> CoverPoint {
        CoverPoint {
            base,
            fiber,
            ctx_id: self.ctx_id,
        }
    }

    pub fn oplus(&self, other: &CoverPoint) -> Result<CoverPoint> {
        self.same_context(other)?;
        Ok(self.with(&self.base + &other.base, &self.fiber + &other.fiber))
    }

    pub fn ominus(&self, other: &CoverPoint) -> Result<CoverPoint> {
        self.same_context(other)?;
        Ok(self.with(&self.base - &other.base, &self.fiber - &other.fiber))
    }

    pub fn scalar(&self, c: &Rational) -> CoverPoint {
        self.with(self.base.scale(c), self.fiber.scale(c))
    }

    /// `β ⋆ self`: translates the fiber, keeps the base.
    pub fn star(&self, beta: &RatFunc) -> CoverPoint {
        self.with(self.base.clone(), &self.fiber + beta)
    }

    /// Projection onto the field sort.
    pub fn pi(&self) -> &RatFunc {
        &self.base
    }

    /// Dual-number product.
    pub fn otimes(&self, other: &CoverPoint) -> Result<CoverPoint> {
        self.same_context(other)?;
        let fiber = &self.base * &other.fiber + &other.base * &self.fiber;
        Ok(self.with(&self.base * &other.base, fiber))
    }

    /// `self^{⊗k}` for `k ≥ 1`: `(α^k, k α^{k-1} a′)`.
    pub fn otimes_pow(&self, k: u32) -> CoverPoint {
        assert!(k >= 1, "otimes power starts at 1");
        let lower = pow_u(&self.base, k - 1);
        self.with(&lower * &self.base, (&lower * &self.fiber).scale(&rat(k as i64)))
    }

    pub fn render(&self, ctx: &JetContext) -> String {
        format!("({} | {})", ctx.render(&self.base), ctx.render(&self.fiber))
    }
}

fn pow_u(f: &RatFunc, k: u32) -> RatFunc {
    (0..k).fold(RatFunc::one(), |acc, _| &acc * f)
}

/// `σ_F(p) = F(π(p)) ⋆ p`.
pub fn sigma(ctx: &JetContext, op: &Operator, p: &CoverPoint) -> Result<CoverPoint> {
    if p.ctx_id != ctx.id() {
        return Err(Error::ContextMismatch);
    }
    Ok(p.star(&ctx.apply_operator(op, &p.base)?))
}

/// The level-`n` cover over a jet context.
#[derive(Debug, Clone)]
pub struct CoverModel {
    n: usize,
    ctx: Arc<JetContext>,
}

impl CoverModel {
    pub fn new(n: usize, ctx: Arc<JetContext>, cfg: &Config) -> Result<Self> {
        cfg.check_level(n)?;
        Ok(CoverModel { n, ctx })
    }

    pub fn level(&self) -> usize {
        self.n
    }

    pub fn context(&self) -> &Arc<JetContext> {
        &self.ctx
    }

    pub fn point(&self, base: RatFunc, fiber: RatFunc) -> CoverPoint {
        CoverPoint::new(&self.ctx, base, fiber)
    }

    /// `Σ_{i=1}^{n} C(n+1,i) (-1)^{n-i} α^{n+1-i} a′_i` for the fibers of the
    /// first `n` points and base `α`.
    fn fiber_combination(&self, alpha: &RatFunc, fibers: &[&RatFunc]) -> RatFunc {
        let n = self.n;
        let mut total = RatFunc::zero();
        for i in 1..=n {
            let c = binom(n as u64 + 1, i as u64) * sign_pow((n - i) as i64);
            total = total + (&pow_u(alpha, (n + 1 - i) as u32) * fibers[i - 1]).scale(&c);
        }
        total
    }

    fn check_points(&self, points: &[CoverPoint], expected: usize) -> Result<()> {
        if points.len() != expected {
            return Err(Error::Arity {
                expected,
                got: points.len(),
            });
        }
        if points.iter().any(|p| p.ctx_id != self.ctx.id()) {
            return Err(Error::ContextMismatch);
        }
        Ok(())
    }

    /// Whether `R_n(a_1, …, a_{n+1})` holds.
    pub fn rn_holds(&self, points: &[CoverPoint]) -> Result<bool> {
        self.check_points(points, self.n + 1)?;
        let alpha = &points[0].base;
        for (i, p) in points.iter().enumerate() {
            if p.base != pow_u(alpha, i as u32 + 1) {
                return Ok(false);
            }
        }
        let fibers: Vec<&RatFunc> = points[..self.n].iter().map(|p| &p.fiber).collect();
        Ok(points[self.n].fiber == self.fiber_combination(alpha, &fibers))
    }

    /// The unique `a_{n+1}` with `R_n(a_1, …, a_n, a_{n+1})`, given bases
    /// `α, …, α^n` on the first `n` points.
    pub fn partner(&self, points: &[CoverPoint]) -> Result<CoverPoint> {
        self.check_points(points, self.n)?;
        let alpha = &points[0].base;
        let fibers: Vec<&RatFunc> = points.iter().map(|p| &p.fiber).collect();
        let fiber = self.fiber_combination(alpha, &fibers);
        Ok(self.point(pow_u(alpha, self.n as u32 + 1), fiber))
    }

    /// Fiber defect of `R_n` at `points`: the last fiber minus the value
    /// the relation forces.
    pub fn fiber_defect(&self, points: &[CoverPoint]) -> Result<RatFunc> {
        self.check_points(points, self.n + 1)?;
        let forced = self.partner(&points[..self.n])?;
        Ok(&points[self.n].fiber - &forced.fiber)
    }
}

fn fiber_names(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("y{i}")).collect()
}

/// Applies `σ_F` to the generic `R_n`-point and returns the fiber defect of
/// the moved tuple.
///
/// The generic point has base `x` and free fibers `y1, …, yn`; the last
/// fiber is forced by the relation. The defect vanishes exactly when `σ_F`
/// preserves `R_n`, which happens exactly when `F ∈ D_n`.
pub fn rn_preservation(op: &Operator, n: usize, cfg: &Config) -> Result<MembershipVerdict> {
    cfg.check_level(n)?;
    let mut names = vec!["x".to_string()];
    names.extend(fiber_names(n));
    let names: Vec<&str> = names.iter().map(String::as_str).collect();
    let ctx = Arc::new(context_for(op, &names, cfg)?);
    let model = CoverModel::new(n, ctx.clone(), cfg)?;
    let x = ctx.generator(0);
    let mut points: Vec<CoverPoint> = (1..=n)
        .map(|i| model.point(pow_u(&x, i as u32), ctx.generator(i)))
        .collect();
    points.push(model.partner(&points)?);
    debug_assert!(model.rn_holds(&points)?);
    let moved = points
        .iter()
        .map(|p| sigma(&ctx, op, p))
        .collect::<Result<Vec<_>>>()?;
    let defect = model.fiber_defect(&moved)?.check_degree(cfg.max_degree)?;
    MembershipVerdict::from_defect(Defect::new(ctx, defect), cfg.seed)
}

/// `(z₃ ⊖ z₂ ⊖ z₁) / 2` where `z₁, z₂, z₃` are the `R₁`-partners of `a`, `b`
/// and `a ⊕ b`. This is the term by which `R₁` and `⊕` define `⊗`.
pub fn psi_term(model: &CoverModel, a: &CoverPoint, b: &CoverPoint) -> Result<CoverPoint> {
    if model.level() != 1 {
        return Err(Error::Precondition("the product is defined from R_1".to_string()));
    }
    let z1 = model.partner(std::slice::from_ref(a))?;
    let z2 = model.partner(std::slice::from_ref(b))?;
    let z3 = model.partner(&[a.oplus(b)?])?;
    Ok(z3.ominus(&z2)?.ominus(&z1)?.scalar(&ratio(1, 2)))
}

/// Checks that `psi_term(a, b) = a ⊗ b` for generic `a = (s, u)` and
/// `b = (t, v)`, and that each partner is the `⊗`-square.
pub fn psi_defines_otimes(cfg: &Config) -> Result<bool> {
    let ctx = Arc::new(JetContext::with_generators(&["s", "u", "t", "v"], 1, 0, cfg)?);
    let model = CoverModel::new(1, ctx.clone(), cfg)?;
    let a = model.point(ctx.generator(0), ctx.generator(1));
    let b = model.point(ctx.generator(2), ctx.generator(3));
    for p in [&a, &b] {
        let z = model.partner(std::slice::from_ref(p))?;
        if z != p.otimes(p)? || !model.rn_holds(&[p.clone(), z])? {
            return Ok(false);
        }
    }
    Ok(psi_term(&model, &a, &b)? == a.otimes(&b)?)
}

/// Checks that `R_n` is a reduct of `⋆`, `⊗` and the field structure:
///
/// ```text
/// R_n(a_1, …, a_{n+1})  ⟺  ∃ ε_2 … ε_{n+1}:  a_i = ε_i ⋆ a_1^{⊗i}  and
///     ε_{n+1} = Σ_{i=2}^{n} C(n+1,i) (-1)^{n-i} π(a_1)^{n+1-i} ε_i
/// ```
///
/// For `n = 1` the sum is empty and `ε_2 = 0`.
///
/// Forward: at the generic `R_n`-point the shifts are solved for and the
/// constraint is checked. Backward: from free `α, a′, ε_2, …, ε_n` the tuple
/// is rebuilt and `R_n` checked. A perturbed last fiber must fail both sides.
pub fn rn_reduct_check(n: usize, cfg: &Config) -> Result<bool> {
    cfg.check_level(n)?;
    let mut names = vec!["x".to_string(), "y1".to_string()];
    names.extend((2..=n).map(|i| format!("e{i}")));
    names.extend((2..=n).map(|i| format!("y{i}")));
    names.push("w".to_string());
    let ctx = Arc::new(JetContext::with_generators(&names, 1, 0, cfg)?);
    let gen = |name: &str| RatFunc::var(ctx.registry().lookup(name).expect("generator exists"));
    let model = CoverModel::new(n, ctx.clone(), cfg)?;
    let alpha = gen("x");
    let a1 = model.point(alpha.clone(), gen("y1"));

    let constraint = |eps: &[RatFunc]| -> RatFunc {
        // eps[k] is ε_{k+2}
        let mut total = RatFunc::zero();
        for i in 2..=n {
            let c = binom(n as u64 + 1, i as u64) * sign_pow((n - i) as i64);
            total = total + (&pow_u(&alpha, (n + 1 - i) as u32) * &eps[i - 2]).scale(&c);
        }
        total
    };
    let shifts = |points: &[CoverPoint]| -> Vec<RatFunc> {
        (2..=n + 1)
            .map(|i| &points[i - 1].fiber - &a1.otimes_pow(i as u32).fiber)
            .collect()
    };
    let decomposes = |points: &[CoverPoint], eps: &[RatFunc]| -> bool {
        (2..=n + 1).all(|i| points[i - 1] == a1.otimes_pow(i as u32).star(&eps[i - 2]))
    };

    // forward
    let mut generic: Vec<CoverPoint> = vec![a1.clone()];
    generic.extend((2..=n).map(|i| model.point(pow_u(&alpha, i as u32), gen(&format!("y{i}")))));
    generic.push(model.partner(&generic)?);
    let eps = shifts(&generic);
    let forward = model.rn_holds(&generic)? && decomposes(&generic, &eps) && eps[n - 1] == constraint(&eps[..n - 1]);

    // backward
    let mut eps_free: Vec<RatFunc> = (2..=n).map(|i| gen(&format!("e{i}"))).collect();
    let last = constraint(&eps_free);
    eps_free.push(last);
    let mut rebuilt = vec![a1.clone()];
    rebuilt.extend((2..=n + 1).map(|i| a1.otimes_pow(i as u32).star(&eps_free[i - 2])));
    let backward = model.rn_holds(&rebuilt)?;

    // a perturbed last fiber breaks both sides
    let mut perturbed = generic.clone();
    perturbed[n] = perturbed[n].star(&gen("w"));
    let eps_p = shifts(&perturbed);
    let negative = !model.rn_holds(&perturbed)? && eps_p[n - 1] != constraint(&eps_p[..n - 1]);

    Ok(forward && backward && negative)
}

/// `σ_F(a ⊗ b) ⊖ σ_F(a) ⊗ σ_F(b)` at generic `a = (x1, u1)`, `b = (x2, u2)`.
/// Its base is always zero; its fiber is `F(x1 x2) − x1 F(x2) − x2 F(x1)`.
pub fn sigma_ring_defect(op: &Operator, cfg: &Config) -> Result<(Arc<JetContext>, CoverPoint)> {
    let ctx = Arc::new(context_for(op, &["x1", "x2", "u1", "u2"], cfg)?);
    let a = CoverPoint::new(&ctx, ctx.generator(0), ctx.generator(2));
    let b = CoverPoint::new(&ctx, ctx.generator(1), ctx.generator(3));
    let lhs = sigma(&ctx, op, &a.otimes(&b)?)?;
    let rhs = sigma(&ctx, op, &a)?.otimes(&sigma(&ctx, op, &b)?)?;
    let defect = lhs.ominus(&rhs)?;
    Ok((ctx, defect))
}

/// Whether `σ_F` respects `⊗` on the level-one cover.
pub fn sigma_ring_check(op: &Operator, cfg: &Config) -> Result<bool> {
    let (_, defect) = sigma_ring_defect(op, cfg)?;
    Ok(defect.base.is_zero() && defect.fiber.is_zero())
}
