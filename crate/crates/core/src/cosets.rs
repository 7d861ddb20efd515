//! Affine relations among rational functions.
//!
//! A tuple `(f_1, …, f_n)` lies on a proper linear variety over the constants
//! when some `ε_1 f_1 + … + ε_n f_n = ε_{n+1}` holds with `ε_1, …, ε_n` not
//! all zero. Over the field of all rational functions this is a linear
//! system with rational data, so it has a nonzero solution over the
//! algebraic closure of ℚ exactly when it has one over ℚ (rank does not
//! change under field extension). Working over ℚ therefore decides the
//! question for algebraic constants too.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::arith::Rational;
use crate::error::{Error, Result};
use crate::poly::{gcd, MPoly, Monomial, RatFunc, VarRegistry};

/// `Σ coefficients[i] · f_i = constant`, normalized so the first nonzero
/// coefficient is 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineRelation {
    pub coefficients: Vec<Rational>,
    pub constant: Rational,
}

impl AffineRelation {
    /// Whether the relation holds exactly for `funcs`.
    pub fn holds_for(&self, funcs: &[RatFunc]) -> bool {
        if funcs.len() != self.coefficients.len() {
            return false;
        }
        let lhs = funcs
            .iter()
            .zip(&self.coefficients)
            .fold(RatFunc::zero(), |acc, (f, c)| acc + f.scale(c));
        lhs == RatFunc::constant(self.constant.clone())
    }

    pub fn render(&self, names: &[String]) -> String {
        let lhs: Vec<String> = self
            .coefficients
            .iter()
            .zip(names)
            .filter(|(c, _)| !c.is_zero())
            .map(|(c, n)| if c.is_one() { n.clone() } else { format!("{c}*{n}") })
            .collect();
        format!("{} = {}", lhs.join(" + "), self.constant)
    }
}

impl fmt::Display for AffineRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (1..=self.coefficients.len()).map(|i| format!("f{i}")).collect();
        f.write_str(&self.render(&names))
    }
}

fn lcm(a: &MPoly, b: &MPoly) -> MPoly {
    let g = gcd(a, b);
    (a * b).div_exact(&g).expect("gcd divides the product")
}

/// Finds a nontrivial affine relation over ℚ among `funcs`, if any.
///
/// Clears denominators to their least common multiple `L`, so that
/// `Σ ε_i f_i = c` becomes `Σ ε_i P_i − c L = 0` with polynomials `P_i`, and
/// solves the linear system on monomial coefficients exactly. Any nonzero
/// solution has some `ε_i ≠ 0`, since `L ≠ 0`.
pub fn affine_relation(funcs: &[RatFunc]) -> Result<Option<AffineRelation>> {
    if funcs.is_empty() {
        return Err(Error::Precondition("affine relations need at least one function".to_string()));
    }
    let common = funcs.iter().fold(MPoly::one(), |acc, f| lcm(&acc, f.den()));
    let mut columns: Vec<MPoly> = funcs
        .iter()
        .map(|f| f.num() * &common.div_exact(f.den()).expect("denominator divides the lcm"))
        .collect();
    columns.push(-&common);

    let mut rows: BTreeMap<&Monomial, Vec<Rational>> = BTreeMap::new();
    let width = columns.len();
    for (j, col) in columns.iter().enumerate() {
        for (m, c) in col.terms() {
            rows.entry(m).or_insert_with(|| vec![Rational::zero(); width])[j] = c.clone();
        }
    }
    let matrix: Vec<Vec<Rational>> = rows.into_values().collect();
    let Some(v) = nullspace(matrix, width).into_iter().next() else {
        return Ok(None);
    };
    let n = funcs.len();
    let lead = v[..n]
        .iter()
        .find(|c| !c.is_zero())
        .expect("a nonzero kernel vector has a nonzero coefficient")
        .clone();
    let mut v: Vec<Rational> = v.into_iter().map(|c| c / &lead).collect();
    let constant = v.pop().expect("width is n + 1");
    Ok(Some(AffineRelation {
        coefficients: v,
        constant,
    }))
}

/// A basis of `{v : M v = 0}`, one vector per free column in increasing
/// order, read off the reduced row echelon form.
fn nullspace(mut m: Vec<Vec<Rational>>, width: usize) -> Vec<Vec<Rational>> {
    let mut pivots: Vec<usize> = Vec::new();
    let mut row = 0;
    for col in 0..width {
        let Some(p) = (row..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(row, p);
        let inv = m[row][col].recip();
        for x in m[row].iter_mut() {
            *x *= &inv;
        }
        for r in 0..m.len() {
            if r != row && !m[r][col].is_zero() {
                let factor = m[r][col].clone();
                for c in 0..width {
                    let delta = &factor * &m[row][c];
                    m[r][c] -= delta;
                }
            }
        }
        pivots.push(col);
        row += 1;
        if row == m.len() {
            break;
        }
    }
    (0..width)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut v = vec![Rational::zero(); width];
            v[free] = Rational::one();
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = -m[r][free].clone();
            }
            v
        })
        .collect()
}

/// Whether `t, t², …, tⁿ` satisfy no affine relation over the constants.
pub fn coset_free_powers(n: usize) -> Result<bool> {
    if n == 0 {
        return Err(Error::Precondition("n must be at least 1".to_string()));
    }
    let mut reg = VarRegistry::new();
    let t = RatFunc::var(reg.base("t"));
    let powers: Vec<RatFunc> = (1..=n as i64).map(|k| t.pow(k)).collect::<Result<_>>()?;
    Ok(affine_relation(&powers)?.is_none())
}
