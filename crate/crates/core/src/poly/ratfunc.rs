use std::collections::HashMap;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::{gcd, MPoly, VarId, VarRegistry};
use crate::arith::Rational;
use crate::error::{Error, Result};

/// Reduced fraction of polynomials.
///
/// The numerator and denominator are coprime, and the denominator has
/// coprime integer coefficients with a positive leading coefficient, so
/// two equal fractions are stored identically. Zero is `0/1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RatFunc {
    num: MPoly,
    den: MPoly,
}

impl RatFunc {
    pub fn new(num: MPoly, den: MPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::reduce(num, den))
    }

    fn reduce(num: MPoly, den: MPoly) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        if let Some(c) = den.as_constant() {
            return RatFunc {
                num: num.scale(&c.recip()),
                den: MPoly::one(),
            };
        }
        let g = gcd(&num, &den);
        let (num, den) = if g.is_constant() {
            (num, den)
        } else {
            (
                num.div_exact(&g).expect("gcd divides numerator"),
                den.div_exact(&g).expect("gcd divides denominator"),
            )
        };
        let (c, den) = den.primitive_split();
        RatFunc {
            num: num.scale(&c.recip()),
            den,
        }
    }

    pub fn zero() -> Self {
        RatFunc {
            num: MPoly::zero(),
            den: MPoly::one(),
        }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        MPoly::constant(c).into()
    }

    pub fn var(v: VarId) -> Self {
        MPoly::var(v).into()
    }

    pub fn num(&self) -> &MPoly {
        &self.num
    }

    pub fn den(&self) -> &MPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn as_constant(&self) -> Option<Rational> {
        if self.is_polynomial() {
            self.num.as_constant()
        } else {
            None
        }
    }

    /// Larger of the numerator and denominator total degrees.
    pub fn degree(&self) -> u32 {
        self.num.total_degree().max(self.den.total_degree())
    }

    pub fn check_degree(self, limit: u32) -> Result<Self> {
        let degree = self.degree();
        if degree > limit {
            return Err(Error::DegreeLimit { degree, limit });
        }
        Ok(self)
    }

    pub fn vars(&self) -> Vec<VarId> {
        let mut vs = self.num.vars();
        vs.extend(self.den.vars());
        vs.sort();
        vs.dedup();
        vs
    }

    pub fn scale(&self, c: &Rational) -> RatFunc {
        if c.is_zero() {
            return RatFunc::zero();
        }
        RatFunc {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    pub fn inv(&self) -> Result<RatFunc> {
        RatFunc::new(self.den.clone(), self.num.clone())
    }

    pub fn checked_div(&self, rhs: &RatFunc) -> Result<RatFunc> {
        if rhs.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self * &rhs.inv()?)
    }

    /// Integer power; negative exponents invert first.
    pub fn pow(&self, e: i64) -> Result<RatFunc> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let k = u32::try_from(e.unsigned_abs()).map_err(|_| Error::DegreeLimit {
            degree: u32::MAX,
            limit: 0,
        })?;
        // powers of a reduced fraction stay reduced
        Ok(RatFunc {
            num: base.num.pow(k),
            den: base.den.pow(k),
        })
    }

    pub fn evaluate(&self, assignment: &HashMap<VarId, Rational>) -> Result<Rational> {
        self.evaluate_with(|v| assignment.get(&v).cloned())
    }

    pub fn evaluate_with<F>(&self, mut lookup: F) -> Result<Rational>
    where
        F: FnMut(VarId) -> Option<Rational>,
    {
        let d = self.den.evaluate_with(&mut lookup)?;
        if d.is_zero() {
            return Err(Error::DenominatorVanishes);
        }
        Ok(self.num.evaluate_with(&mut lookup)? / d)
    }

    pub fn render(&self, reg: &VarRegistry) -> String {
        if self.is_polynomial() {
            return self.num.render(reg);
        }
        format!("({})/({})", self.num.render(reg), self.den.render(reg))
    }

    fn add_impl(&self, rhs: &RatFunc, negate: bool) -> RatFunc {
        let rn = if negate { -&rhs.num } else { rhs.num.clone() };
        if self.den == rhs.den {
            let num = &self.num + &rn;
            if self.is_polynomial() {
                return RatFunc { num, den: MPoly::one() };
            }
            return Self::reduce(num, self.den.clone());
        }
        let num = &(&self.num * &rhs.den) + &(&rn * &self.den);
        Self::reduce(num, &self.den * &rhs.den)
    }

    fn mul_impl(&self, rhs: &RatFunc) -> RatFunc {
        if self.is_zero() || rhs.is_zero() {
            return RatFunc::zero();
        }
        if self.is_polynomial() && rhs.is_polynomial() {
            return RatFunc {
                num: &self.num * &rhs.num,
                den: MPoly::one(),
            };
        }
        // cross-cancel so the product of reduced fractions stays reduced
        let g1 = gcd(&self.num, &rhs.den);
        let g2 = gcd(&rhs.num, &self.den);
        let a = self.num.div_exact(&g1).expect("gcd divides");
        let d = rhs.den.div_exact(&g1).expect("gcd divides");
        let c = rhs.num.div_exact(&g2).expect("gcd divides");
        let b = self.den.div_exact(&g2).expect("gcd divides");
        let (k, den) = (&b * &d).primitive_split();
        RatFunc {
            num: (&a * &c).scale(&k.recip()),
            den,
        }
    }
}

impl From<MPoly> for RatFunc {
    fn from(num: MPoly) -> Self {
        RatFunc { num, den: MPoly::one() }
    }
}

impl From<Rational> for RatFunc {
    fn from(c: Rational) -> Self {
        RatFunc::constant(c)
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $body:expr) => {
        impl $tr<&RatFunc> for &RatFunc {
            type Output = RatFunc;
            fn $method(self, rhs: &RatFunc) -> RatFunc {
                let f: fn(&RatFunc, &RatFunc) -> RatFunc = $body;
                f(self, rhs)
            }
        }
        impl $tr<RatFunc> for RatFunc {
            type Output = RatFunc;
            fn $method(self, rhs: RatFunc) -> RatFunc {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&RatFunc> for RatFunc {
            type Output = RatFunc;
            fn $method(self, rhs: &RatFunc) -> RatFunc {
                (&self).$method(rhs)
            }
        }
        impl $tr<RatFunc> for &RatFunc {
            type Output = RatFunc;
            fn $method(self, rhs: RatFunc) -> RatFunc {
                self.$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, |a, b| a.add_impl(b, false));
forward_binop!(Sub, sub, |a, b| a.add_impl(b, true));
forward_binop!(Mul, mul, |a, b| a.mul_impl(b));

impl Neg for &RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        RatFunc {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl Neg for RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        -&self
    }
}
