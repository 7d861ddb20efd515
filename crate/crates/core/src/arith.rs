//! Exact rational scalars.
//!
//! `Rational` is `num_rational::BigRational`: arbitrary precision, always
//! reduced, sign on the numerator and zero stored as `0/1`, so equal values
//! share one representation.

use num_bigint::BigInt;
use num_traits::{One, Zero};

pub type Rational = num_rational::BigRational;
pub type Integer = BigInt;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Binomial coefficient `n choose k`; zero when `k > n`.
pub fn binom(n: u64, k: u64) -> Rational {
    Rational::from_integer(binom_int(n, k))
}

pub fn binom_int(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        // acc * (n - i) is always divisible by (i + 1) here
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

pub fn factorial(n: u64) -> Rational {
    let mut acc = BigInt::one();
    for i in 2..=n {
        acc *= BigInt::from(i);
    }
    Rational::from_integer(acc)
}

/// `(-1)^e` as a rational.
pub fn sign_pow(e: i64) -> Rational {
    if e.rem_euclid(2) == 0 {
        Rational::one()
    } else {
        -Rational::one()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn binom_examples() {
        assert_eq!(binom(3, 1), rat(3));
        assert_eq!(binom(5, 2), rat(10));
        for n in 0..10 {
            assert_eq!(binom(n, 0), rat(1));
        }
        assert_eq!(binom(2, 3), rat(0));
        assert_eq!(binom(0, 0), rat(1));
    }

    #[test]
    fn pascal_rule() {
        for n in 1..=30u64 {
            for k in 1..=n {
                assert_eq!(binom(n, k), binom(n - 1, k - 1) + binom(n - 1, k), "n={n} k={k}");
            }
        }
    }

    #[test]
    fn canonical_form() {
        let a = ratio(6, -4);
        assert_eq!(a.numer(), &BigInt::from(-3));
        assert_eq!(a.denom(), &BigInt::from(2));
        let z = ratio(0, -7);
        assert_eq!(z.denom(), &BigInt::from(1));
        assert_eq!(ratio(2, 4), ratio(1, 2));
    }

    #[test]
    fn factorial_and_signs() {
        assert_eq!(factorial(0), rat(1));
        assert_eq!(factorial(5), rat(120));
        assert_eq!(sign_pow(3), rat(-1));
        assert_eq!(sign_pow(-2), rat(1));
    }

    fn big_rational() -> impl Strategy<Value = Rational> {
        (any::<i64>(), 1..=u64::MAX).prop_map(|(n, d)| Rational::new(BigInt::from(n), BigInt::from(d)))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn field_axioms(a in big_rational(), b in big_rational(), c in big_rational()) {
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!((&a + &b) + &c, &a + (&b + &c));
            prop_assert_eq!((&a * &b) * &c, &a * (&b * &c));
            prop_assert_eq!(&a * (&b + &c), &a * &b + &a * &c);
            prop_assert_eq!(&a + Rational::zero(), a.clone());
            prop_assert_eq!(&a * Rational::one(), a.clone());
            prop_assert!((&a - &a).is_zero());
            if !a.is_zero() {
                prop_assert_eq!(&a * a.recip(), Rational::one());
            }
            prop_assert!(a.denom() > &BigInt::zero());
            prop_assert!(num_integer::Integer::gcd(a.numer(), a.denom()).is_one());
        }
    }
}
