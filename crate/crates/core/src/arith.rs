//! Small integer helpers: factoring and divisor counts.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::linalg::ring::is_prime;

/// Distinct prime factors of `|v|`, ascending. Fails on values whose
/// cofactor after trial division does not fit in 64 bits.
pub fn prime_factors(v: &BigInt) -> Result<Vec<BigInt>> {
    let mut m = v.abs();
    let mut out = Vec::new();
    if m.is_zero() {
        return Err(Error::InvalidParameter("cannot factor 0".into()));
    }
    let mut p = 2u64;
    while p < 1 << 16 && !m.is_one() {
        let bp = BigInt::from(p);
        if m.is_multiple_of(&bp) {
            out.push(bp.clone());
            while m.is_multiple_of(&bp) {
                m /= &bp;
            }
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if m.is_one() {
        return Ok(out);
    }
    let Some(rest) = m.to_u64() else {
        return Err(Error::ResourceCap(format!("cofactor {m} exceeds 64 bits")));
    };
    let mut stack = vec![rest];
    let mut big: Vec<u64> = Vec::new();
    while let Some(x) = stack.pop() {
        if x == 1 {
            continue;
        }
        if is_prime(x) {
            big.push(x);
            continue;
        }
        let d = pollard_rho(x);
        stack.push(d);
        stack.push(x / d);
    }
    big.sort_unstable();
    big.dedup();
    out.extend(big.into_iter().map(BigInt::from));
    Ok(out)
}

fn pollard_rho(n: u64) -> u64 {
    if n.is_multiple_of(2) {
        return 2;
    }
    let mul = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    for c in 1u64.. {
        let f = |x: u64| (mul(x, x) + c) % n;
        let (mut x, mut y, mut d) = (2u64, 2u64, 1u64);
        while d == 1 {
            x = f(x);
            y = f(f(y));
            d = x.abs_diff(y).gcd(&n);
        }
        if d != n {
            return d;
        }
    }
    unreachable!()
}

/// Number of positive divisors of `n`.
pub fn divisor_count(n: u64) -> u64 {
    (1..=n).filter(|d| n.is_multiple_of(*d)).count() as u64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factors() {
        let f = |v: i64| prime_factors(&BigInt::from(v)).unwrap();
        assert_eq!(f(1), Vec::<BigInt>::new());
        assert_eq!(f(-12), vec![BigInt::from(2), BigInt::from(3)]);
        let big = BigInt::from(1_000_003u64) * BigInt::from(999_983u64);
        assert_eq!(prime_factors(&big).unwrap(), vec![BigInt::from(999_983u64), BigInt::from(1_000_003u64)]);
    }
}
