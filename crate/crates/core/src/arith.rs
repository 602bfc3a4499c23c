//! Small integer helpers shared across the crate.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Deterministic primality by trial division. Inputs here are group orders
/// and residue characteristics, never cryptographic sizes.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

pub fn is_prime_big(n: &BigInt) -> bool {
    if n.is_negative() {
        return false;
    }
    match u64::try_from(n) {
        Ok(v) => is_prime_u64(v),
        Err(_) => {
            // Beyond u64 we still trial-divide; callers only reach this for
            // generators of level-0 ideals, which are tiny in practice.
            let two = BigInt::from(2);
            if n.is_even() {
                return false;
            }
            let mut d = BigInt::from(3);
            while &d * &d <= *n {
                if (n % &d).is_zero() {
                    return false;
                }
                d += &two;
            }
            true
        }
    }
}

/// `p^e` as a big integer.
pub fn pow_u(p: u64, e: usize) -> BigInt {
    num_traits::pow(BigInt::from(p), e)
}

/// `base^e` where the exponent itself may be large (e.g. `p^(l-k)`).
pub fn pow_big(base: &BigInt, e: u64) -> BigInt {
    let mut result = BigInt::one();
    let mut b = base.clone();
    let mut e = e;
    while e > 0 {
        if e & 1 == 1 {
            result *= &b;
        }
        e >>= 1;
        if e > 0 {
            b = &b * &b;
        }
    }
    result
}

/// `p^e` as a machine integer, for use as an exponent.
pub fn pow_u64(p: u64, e: usize) -> Result<u64> {
    let mut acc = 1u64;
    for _ in 0..e {
        acc = acc
            .checked_mul(p)
            .ok_or_else(|| Error::Range(format!("{p}^{e} overflows a machine exponent")))?;
    }
    Ok(acc)
}

/// Exact division; a nonzero remainder is reported as an internal error.
pub fn exact_div(num: &BigInt, den: &BigInt, what: &str) -> Result<BigInt> {
    let (q, r) = num.div_rem(den);
    if !r.is_zero() {
        return Err(Error::Internal(format!(
            "{what}: {num} is not divisible by {den}"
        )));
    }
    Ok(q)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primes() {
        let ps: Vec<u64> = (0..30).filter(|&n| is_prime_u64(n)).collect();
        assert_eq!(ps, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
        assert!(is_prime_big(&BigInt::from(97)));
        assert!(!is_prime_big(&BigInt::from(-7)));
        assert!(!is_prime_big(&BigInt::from(91)));
    }

    #[test]
    fn powers() {
        assert_eq!(pow_big(&BigInt::from(3), 5), BigInt::from(243));
        assert_eq!(pow_big(&BigInt::from(-2), 3), BigInt::from(-8));
        assert_eq!(pow_big(&BigInt::from(7), 0), BigInt::one());
        assert_eq!(pow_u64(2, 10).unwrap(), 1024);
        assert!(pow_u64(10, 30).is_err());
    }

    #[test]
    fn exact_division_guard() {
        assert_eq!(
            exact_div(&BigInt::from(12), &BigInt::from(4), "t").unwrap(),
            BigInt::from(3)
        );
        assert!(matches!(
            exact_div(&BigInt::from(13), &BigInt::from(4), "t"),
            Err(Error::Internal(_))
        ));
    }
}
