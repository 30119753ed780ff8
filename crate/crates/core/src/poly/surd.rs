use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, Sign};
use num_traits::{One, Signed, Zero};

use super::IntPolynomial;
use crate::error::{domain, Result};

/// The real number `(a + b*sqrt(q)) / c` with `c > 0`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SurdValue {
    a: BigInt,
    b: BigInt,
    c: BigInt,
    q: u64,
}

impl SurdValue {
    pub fn new(a: BigInt, b: BigInt, c: BigInt, q: u64) -> Result<Self> {
        if !c.is_positive() {
            return domain("surd denominator must be positive");
        }
        if q == 0 {
            return domain("surd radicand must be positive");
        }
        Ok(SurdValue { a, b, c, q })
    }

    pub fn integer(a: i64, q: u64) -> Self {
        SurdValue {
            a: a.into(),
            b: BigInt::zero(),
            c: BigInt::one(),
            q,
        }
    }

    /// `k * sqrt(q)`.
    pub fn multiple_of_root(k: i64, q: u64) -> Self {
        SurdValue {
            a: BigInt::zero(),
            b: k.into(),
            c: BigInt::one(),
            q,
        }
    }

    pub fn a(&self) -> &BigInt {
        &self.a
    }

    pub fn b(&self) -> &BigInt {
        &self.b
    }

    pub fn c(&self) -> &BigInt {
        &self.c
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    /// Exact sign of the value.
    pub fn sign(&self) -> Sign {
        sign_of_sum(&self.a, &self.b, self.q)
    }

    /// Exact comparison; both values must share the same radicand.
    pub fn cmp_exact(&self, other: &Self) -> Result<Ordering> {
        if self.q != other.q {
            return domain("cannot compare surds with different radicands");
        }
        let a = &self.a * &other.c - &other.a * &self.c;
        let b = &self.b * &other.c - &other.b * &self.c;
        Ok(match sign_of_sum(&a, &b, self.q) {
            Sign::Minus => Ordering::Less,
            Sign::NoSign => Ordering::Equal,
            Sign::Plus => Ordering::Greater,
        })
    }

    pub fn to_f64(&self) -> f64 {
        let a: f64 = self.a.to_string().parse().unwrap();
        let b: f64 = self.b.to_string().parse().unwrap();
        let c: f64 = self.c.to_string().parse().unwrap();
        (a + b * (self.q as f64).sqrt()) / c
    }
}

impl fmt::Debug for SurdValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} + {}*sqrt({}))/{}", self.a, self.b, self.q, self.c)
    }
}

/// Sign of `a + b*sqrt(q)`, decided by comparing `a^2` with `q*b^2`.
pub(crate) fn sign_of_sum(a: &BigInt, b: &BigInt, q: u64) -> Sign {
    let sa = a.sign();
    let sb = b.sign();
    if sb == Sign::NoSign {
        return sa;
    }
    if sa == Sign::NoSign || sa == sb {
        return sb;
    }
    match (a * a).cmp(&(b * b * q)) {
        Ordering::Greater => sa,
        Ordering::Less => sb,
        Ordering::Equal => Sign::NoSign,
    }
}

/// `c^deg * p(x)` written as `A + B*sqrt(q)`.
pub(crate) fn eval_scaled(p: &IntPolynomial, x: &SurdValue) -> (BigInt, BigInt) {
    let Some(d) = p.degree() else {
        return (BigInt::zero(), BigInt::zero());
    };
    let coeffs = p.coeffs();
    let mut cpow = Vec::with_capacity(d + 1);
    cpow.push(BigInt::one());
    for i in 1..=d {
        let next = &cpow[i - 1] * &x.c;
        cpow.push(next);
    }
    // Horner in Z[sqrt q]: r <- r*(a + b sqrt q) + p_i c^(d-i)
    let mut ra = coeffs[d].clone();
    let mut rb = BigInt::zero();
    for i in (0..d).rev() {
        let na = &ra * &x.a + &rb * &x.b * x.q + &coeffs[i] * &cpow[d - i];
        let nb = &ra * &x.b + &rb * &x.a;
        ra = na;
        rb = nb;
    }
    (ra, rb)
}

/// Exact sign of `p(x)`: -1, 0 or +1.
pub fn sign_at_surd(p: &IntPolynomial, x: &SurdValue) -> i8 {
    let (a, b) = eval_scaled(p, x);
    match sign_of_sum(&a, &b, x.q) {
        Sign::Minus => -1,
        Sign::NoSign => 0,
        Sign::Plus => 1,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sign_examples() {
        // y - 3 at 2*sqrt(2): 8 < 9
        let p = IntPolynomial::from_i64s(&[-3, 1]);
        assert_eq!(sign_at_surd(&p, &SurdValue::multiple_of_root(2, 2)), -1);
        // y at 2 sqrt(q)
        let y = IntPolynomial::from_i64s(&[0, 1]);
        assert_eq!(sign_at_surd(&y, &SurdValue::multiple_of_root(2, 7)), 1);
        // y^2 - 4q at 2 sqrt(q)
        let e = IntPolynomial::from_i64s(&[-28, 0, 1]);
        assert_eq!(sign_at_surd(&e, &SurdValue::multiple_of_root(2, 7)), 0);
        assert_eq!(sign_at_surd(&e, &SurdValue::multiple_of_root(-2, 7)), 0);
    }

    #[test]
    fn sign_with_denominator() {
        // 2y - 1 at (1 + sqrt 2)/4 ≈ 0.6036 -> 0.207 > 0
        let p = IntPolynomial::from_i64s(&[-1, 2]);
        let x = SurdValue::new(1.into(), 1.into(), 4.into(), 2).unwrap();
        assert_eq!(sign_at_surd(&p, &x), 1);
        assert!(SurdValue::new(1.into(), 1.into(), 0.into(), 2).is_err());
    }

    #[test]
    fn compare() {
        let lo = SurdValue::multiple_of_root(-2, 3);
        let hi = SurdValue::multiple_of_root(2, 3);
        assert_eq!(lo.cmp_exact(&hi).unwrap(), Ordering::Less);
        assert_eq!(SurdValue::integer(3, 8).cmp_exact(&SurdValue::multiple_of_root(1, 8)).unwrap(), Ordering::Greater);
        assert_eq!(SurdValue::integer(4, 4).cmp_exact(&SurdValue::multiple_of_root(2, 4)).unwrap(), Ordering::Equal);
    }
}
