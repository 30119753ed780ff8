//! Small integer helpers: prime powers, Euler's totient, binomials, integer roots.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{domain, Result};

/// A prime power `q = p^e` with its factorization cached.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PrimePower {
    q: u64,
    p: u64,
    e: u32,
}

impl PrimePower {
    pub fn new(q: u64) -> Result<Self> {
        match prime_power_decompose(q) {
            Some((p, e)) => Ok(PrimePower { q, p, e }),
            None => domain(format!("{q} is not a prime power")),
        }
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn e(&self) -> u32 {
        self.e
    }

    /// Smallest power `s` of `p` with `q | s^2`, i.e. `p^ceil(e/2)`.
    pub fn s(&self) -> u64 {
        self.p.pow(self.e.div_ceil(2))
    }

    /// `Some(r)` when `q = r^2`.
    pub fn sqrt_exact(&self) -> Option<u64> {
        if self.e % 2 == 0 {
            Some(self.p.pow(self.e / 2))
        } else {
            None
        }
    }
}

impl std::fmt::Display for PrimePower {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.q)
    }
}

/// Returns `(p, e)` with `q = p^e`, or `None` when `q` is not a prime power.
pub fn prime_power_decompose(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let p = smallest_prime_factor(q);
    let mut rest = q;
    let mut e = 0;
    while rest % p == 0 {
        rest /= p;
        e += 1;
    }
    (rest == 1).then_some((p, e))
}

fn smallest_prime_factor(x: u64) -> u64 {
    if x % 2 == 0 {
        return 2;
    }
    let mut d = 3;
    while d * d <= x {
        if x % d == 0 {
            return d;
        }
        d += 2;
    }
    x
}

/// Euler's totient.
pub fn euler_phi(mut x: u64) -> u64 {
    let mut result = x;
    let mut d = 2;
    while d * d <= x {
        if x % d == 0 {
            while x % d == 0 {
                x /= d;
            }
            result -= result / d;
        }
        d += 1;
    }
    if x > 1 {
        result -= result / x;
    }
    result
}

pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * i)
}

/// `floor(sqrt(x))` for `x >= 0` as a bound usable in loops over `i64`.
pub fn floor_sqrt_u128(x: u128) -> u128 {
    let mut r = (x as f64).sqrt() as u128;
    while r * r > x {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= x {
        r += 1;
    }
    r
}

pub fn gcd_i64(a: i64, b: i64) -> u64 {
    a.unsigned_abs().gcd(&b.unsigned_abs())
}

pub fn gcd_big(a: &BigInt, b: &BigInt) -> BigInt {
    a.gcd(b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_powers() {
        assert_eq!(prime_power_decompose(2), Some((2, 1)));
        assert_eq!(prime_power_decompose(8), Some((2, 3)));
        assert_eq!(prime_power_decompose(81), Some((3, 4)));
        assert_eq!(prime_power_decompose(6), None);
        assert_eq!(prime_power_decompose(1), None);
        assert!(PrimePower::new(12).is_err());
    }

    #[test]
    fn s_values() {
        assert_eq!(PrimePower::new(4).unwrap().s(), 2);
        assert_eq!(PrimePower::new(8).unwrap().s(), 4);
        assert_eq!(PrimePower::new(2).unwrap().s(), 2);
        assert_eq!(PrimePower::new(27).unwrap().s(), 9);
    }

    #[test]
    fn totient() {
        assert_eq!(euler_phi(1), 1);
        assert_eq!(euler_phi(4), 2);
        assert_eq!(euler_phi(9), 6);
        assert_eq!(euler_phi(12), 4);
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(6, 3), BigInt::from(20));
        assert_eq!(binomial(4, 5), BigInt::zero());
        assert_eq!(factorial(5), BigInt::from(120));
        assert_eq!(floor_sqrt_u128(99), 9);
        assert_eq!(floor_sqrt_u128(100), 10);
    }
}
