//! Multivariate gcd over ℚ by recursive content extraction and primitive
//! pseudo-remainder sequences.

use num_traits::Zero;

use super::{MPoly, Monomial, VarId};
use crate::arith::Rational;

/// Greatest common divisor, normalized to coprime integer coefficients with
/// a positive leading coefficient. `gcd(0, 0) = 0`.
pub fn gcd(a: &MPoly, b: &MPoly) -> MPoly {
    let g = gcd_rec(a, b);
    g.primitive_split().1
}

fn gcd_rec(a: &MPoly, b: &MPoly) -> MPoly {
    if a.is_zero() {
        return b.clone();
    }
    if b.is_zero() {
        return a.clone();
    }
    if a.is_constant() || b.is_constant() {
        return MPoly::one();
    }
    if a == b {
        return a.clone();
    }
    if a.terms().len() == 1 {
        return monomial_gcd(&a.terms()[0].0, b);
    }
    if b.terms().len() == 1 {
        return monomial_gcd(&b.terms()[0].0, a);
    }

    let ma = monomial_content(a);
    let mb = monomial_content(b);
    if !ma.is_one() || !mb.is_one() {
        let a = a.div_exact(&MPoly::monomial(ma.clone(), num_traits::One::one())).expect("monomial content divides");
        let b = b.div_exact(&MPoly::monomial(mb.clone(), num_traits::One::one())).expect("monomial content divides");
        return MPoly::monomial(ma.gcd(&mb), num_traits::One::one()) * gcd_rec(&a, &b);
    }

    let va = a.vars();
    let vb = b.vars();
    if let Some(&v) = va.iter().find(|v| vb.binary_search(v).is_err()) {
        return gcd_rec(&content_in(a, v), b);
    }
    if let Some(&v) = vb.iter().find(|v| va.binary_search(v).is_err()) {
        return gcd_rec(a, &content_in(b, v));
    }
    if certainly_coprime(a, b, &va) {
        return MPoly::one();
    }
    let (small, large) = if a.terms().len() <= b.terms().len() { (a, b) } else { (b, a) };
    if large.div_exact(small).is_some() {
        return small.clone();
    }
    // both share every variable; recurse on the one of least degree
    let main = *va
        .iter()
        .min_by_key(|&&v| (a.degree_in(v).max(b.degree_in(v)), v))
        .expect("non-constant polynomials have variables");

    let ca = content_in(a, main);
    let cb = content_in(b, main);
    let pa = a.div_exact(&ca).expect("content divides");
    let pb = b.div_exact(&cb).expect("content divides");
    let g_content = gcd_rec(&ca, &cb);

    let mut r0 = pa.to_univariate(main);
    let mut r1 = pb.to_univariate(main);
    if r0.len() < r1.len() {
        std::mem::swap(&mut r0, &mut r1);
    }
    // subresultant remainder sequence: every division below is exact
    let mut g = MPoly::one();
    let mut h = MPoly::one();
    let g_prim = loop {
        let delta = (r0.len() - r1.len()) as u32;
        let r = pseudo_remainder(&r0, &r1);
        if r.is_empty() {
            break primitive_part(&MPoly::from_univariate(main, &r1), main);
        }
        if r.len() == 1 {
            // constant in the main variable: the primitive gcd is trivial
            break MPoly::one();
        }
        let divisor = &g * &h.pow(delta);
        r0 = r1;
        r1 = r
            .iter()
            .map(|c| c.div_exact(&divisor).expect("subresultant division is exact"))
            .collect();
        g = r0.last().expect("nonzero").clone();
        h = if delta == 0 {
            h
        } else {
            g.pow(delta)
                .div_exact(&h.pow(delta - 1))
                .expect("subresultant division is exact")
        };
    };
    &g_content * &g_prim
}

/// Proves `gcd(a, b) = 1` by univariate images, or gives up.
///
/// If the gcd `g` has positive degree in `v`, then at any point where the
/// leading coefficient of `a` in `v` survives, the image of `g` is a common
/// factor of positive degree of the images of `a` and `b`. So a constant
/// image gcd at such a point shows `v` does not occur in `g`.
fn certainly_coprime(a: &MPoly, b: &MPoly, vars: &[VarId]) -> bool {
    'vars: for &v in vars {
        let ua = a.to_univariate(v);
        let ub = b.to_univariate(v);
        for attempt in 0..4u64 {
            let point = |w: VarId| Some(Rational::from_integer(sample_value(w.0 as u64, attempt).into()));
            let ea = eval_coeffs(&ua, point);
            let eb = eval_coeffs(&ub, point);
            if ea.last().is_none_or(|c| c.is_zero()) || eb.last().is_none_or(|c| c.is_zero()) {
                continue;
            }
            if univariate_gcd_degree(ea, eb) == 0 {
                continue 'vars;
            }
            return false;
        }
        return false;
    }
    true
}

/// Deterministic small integer in `-100..=100` for variable `w`.
fn sample_value(w: u64, attempt: u64) -> i64 {
    // splitmix64 finalizer
    let mut z = w.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ attempt.wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^= z >> 31;
    (z % 201) as i64 - 100
}

fn eval_coeffs<F: Fn(VarId) -> Option<Rational>>(coeffs: &[MPoly], point: F) -> Vec<Rational> {
    coeffs
        .iter()
        .map(|c| c.evaluate_with(&point).expect("point covers every variable"))
        .collect()
}

/// Degree of the gcd of two dense univariate polynomials over ℚ.
fn univariate_gcd_degree(mut a: Vec<Rational>, mut b: Vec<Rational>) -> usize {
    fn trim(p: &mut Vec<Rational>) {
        while p.last().is_some_and(|c| c.is_zero()) {
            p.pop();
        }
    }
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        // a mod b
        let db = b.len() - 1;
        let lead = b[db].clone();
        while a.len() > db {
            let da = a.len() - 1;
            let q = &a[da] / &lead;
            for (j, bj) in b.iter().enumerate() {
                let t = &q * bj;
                a[j + da - db] -= t;
            }
            trim(&mut a);
        }
        std::mem::swap(&mut a, &mut b);
    }
    a.len().saturating_sub(1)
}

/// gcd of a monomial with an arbitrary polynomial: the componentwise minimum
/// of exponents over every term.
fn monomial_gcd(m: &Monomial, p: &MPoly) -> MPoly {
    let mut g = m.clone();
    for (n, _) in p.terms() {
        g = g.gcd(n);
        if g.is_one() {
            break;
        }
    }
    MPoly::monomial(g, num_traits::One::one())
}

/// Largest monomial dividing every term.
fn monomial_content(p: &MPoly) -> Monomial {
    let mut terms = p.terms().iter();
    let Some((first, _)) = terms.next() else {
        return Monomial::one();
    };
    let mut g = first.clone();
    for (n, _) in terms {
        if g.is_one() {
            break;
        }
        g = g.gcd(n);
    }
    g
}

/// gcd of the coefficients of `p` viewed as a polynomial in `v`.
fn content_in(p: &MPoly, v: VarId) -> MPoly {
    content_of(&p.to_univariate(v))
}

fn content_of(coeffs: &[MPoly]) -> MPoly {
    let mut g = MPoly::zero();
    for c in coeffs.iter().filter(|c| !c.is_zero()) {
        g = gcd_rec(&g, c);
        if g.is_constant() {
            return MPoly::one();
        }
    }
    g.primitive_split().1
}

fn primitive_part(p: &MPoly, v: VarId) -> MPoly {
    let c = content_in(p, v);
    p.div_exact(&c).expect("content divides")
}

/// `lc(b)^(deg a - deg b + 1) * a mod b` over the coefficient ring, trailing
/// zeros trimmed.
fn pseudo_remainder(a: &[MPoly], b: &[MPoly]) -> Vec<MPoly> {
    let db = b.len() - 1;
    let lcb = &b[db];
    let mut r: Vec<MPoly> = a.to_vec();
    trim(&mut r);
    let mut steps_left = (a.len() - db) as u32;
    while !r.is_empty() && r.len() > db {
        steps_left -= 1;
        let dr = r.len() - 1;
        let lcr = r[dr].clone();
        let shift = dr - db;
        for c in r.iter_mut() {
            *c = &*c * lcb;
        }
        for (j, bj) in b.iter().enumerate() {
            r[j + shift] = &r[j + shift] - &(&lcr * bj);
        }
        debug_assert!(r[dr].is_zero());
        trim(&mut r);
    }
    if steps_left > 0 {
        let k = lcb.pow(steps_left);
        for c in r.iter_mut() {
            *c = &*c * &k;
        }
    }
    r
}

fn trim(r: &mut Vec<MPoly>) {
    while r.last().is_some_and(|c| c.is_zero()) {
        r.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{rat, ratio};
    use crate::poly::VarRegistry;

    #[test]
    fn univariate_gcd() {
        let mut reg = VarRegistry::new();
        let t = MPoly::var(reg.base("t"));
        let one = MPoly::one();
        let a = &(&t * &t) - &one;
        let b = &t - &one;
        assert_eq!(gcd(&a, &b), b);
        let c = (&t + &one).pow(3);
        let d = &(&t + &one) * &(&t - &one.scale(&rat(2)));
        assert_eq!(gcd(&c, &d), &t + &one);
        assert!(gcd(&t, &(&t + &one)).is_one());
    }

    #[test]
    fn multivariate_gcd_recovers_common_factor() {
        let mut reg = VarRegistry::new();
        let x = MPoly::var(reg.base("x"));
        let y = MPoly::var(reg.base("y"));
        let z = MPoly::var(reg.base("z"));
        let common = &(&x * &y) + &z.scale(&ratio(3, 2)) + MPoly::one();
        let a = &common * &(&x - &y);
        let b = &common * &(&(&y * &y) + &z);
        let g = gcd(&a, &b);
        assert_eq!(g, common.primitive_split().1);
        assert!(a.div_exact(&g).is_some());
        assert!(b.div_exact(&g).is_some());
    }

    #[test]
    fn gcd_with_monomials_and_zero() {
        let mut reg = VarRegistry::new();
        let x = MPoly::var(reg.base("x"));
        let y = MPoly::var(reg.base("y"));
        let a = &(&x * &x) * &y;
        let b = &(&x * &y) * &y + &(&x * &x);
        assert_eq!(gcd(&a, &b), x.clone());
        assert_eq!(gcd(&MPoly::zero(), &a.scale(&rat(-4))), a);
        assert!(gcd(&MPoly::zero(), &MPoly::zero()).is_zero());
    }
}
