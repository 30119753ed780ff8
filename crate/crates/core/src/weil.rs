//! Weil q-polynomials: construction, exact membership testing, ordinarity
//! and Newton polygons.
//!
//! A candidate `(q, n, a_1..a_n)` stands for the symmetric polynomial
//!
//! ```text
//! f = (x^2n + q^n) + a_1 (x^(2n-1) + q^(n-1) x) + ... + a_(n-1) (x^(n+1) + q x^(n-1)) + a_n x^n
//! ```
//!
//! Membership is decided through the trace polynomial `H` with
//! `f(x) = x^n H(x + q/x)`: every root of `f` has absolute value `sqrt(q)` and
//! real roots have even multiplicity exactly when all `n` roots of `H` are
//! real and lie in `[-2 sqrt(q), 2 sqrt(q)]`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::Rational64;
use num_traits::{One, Pow, Zero};

use crate::arith::{binomial, PrimePower};
use crate::error::{domain, Result};
use crate::poly::{sign_at_surd, squarefree_decompose, IntPolynomial, SturmChain, SurdValue};

/// A prime power `q`, a dimension `n` and integer coefficients `a_1..a_n`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct WeilCandidate {
    q: PrimePower,
    a: Vec<i64>,
}

impl WeilCandidate {
    pub fn new(q: u64, a: Vec<i64>) -> Result<Self> {
        let q = PrimePower::new(q)?;
        Self::with_prime_power(q, a)
    }

    pub fn with_prime_power(q: PrimePower, a: Vec<i64>) -> Result<Self> {
        if a.is_empty() {
            return domain("dimension must be positive");
        }
        Ok(WeilCandidate { q, a })
    }

    /// The candidate with all `a_i = 0`.
    pub fn zero(q: PrimePower, n: usize) -> Self {
        WeilCandidate { q, a: vec![0; n] }
    }

    pub fn q(&self) -> PrimePower {
        self.q
    }

    pub fn n(&self) -> usize {
        self.a.len()
    }

    pub fn a(&self) -> &[i64] {
        &self.a
    }

    /// The middle coefficient `a_n`.
    pub fn middle(&self) -> i64 {
        *self.a.last().unwrap()
    }

    /// The degree-2n polynomial `f`.
    pub fn expand(&self) -> IntPolynomial {
        let n = self.n();
        let q = BigInt::from(self.q.q());
        let mut coeffs = vec![BigInt::zero(); 2 * n + 1];
        coeffs[2 * n] = BigInt::one();
        coeffs[0] = Pow::pow(&q, n as u32);
        for (idx, &ai) in self.a.iter().enumerate() {
            let i = idx + 1;
            let ai = BigInt::from(ai);
            if i == n {
                coeffs[n] += &ai;
            } else {
                coeffs[i] += &ai * Pow::pow(&q, (n - i) as u32);
                coeffs[2 * n - i] += ai;
            }
        }
        IntPolynomial::new(coeffs)
    }

    /// Monic `H` of degree `n` with `f(x) = x^n H(x + q/x)`.
    pub fn trace_poly(&self) -> IntPolynomial {
        let c = trace_coefficients(self.q.q(), self.n(), &self.a);
        IntPolynomial::new(c.into_iter().rev().collect())
    }

    /// Exact membership test.
    pub fn is_weil(&self) -> bool {
        trace_roots_in_interval(&self.trace_poly(), self.q) == self.n()
    }

    /// Ordinary means `gcd(a_n, q) = 1`; only defined for Weil polynomials.
    pub fn is_ordinary(&self) -> Result<bool> {
        if !self.is_weil() {
            return domain("ordinarity is only defined for Weil polynomials");
        }
        Ok(self.coprime_middle())
    }

    pub(crate) fn coprime_middle(&self) -> bool {
        self.middle().unsigned_abs().gcd(&self.q.q()) == 1
    }

    /// Necessary condition `v(a_n) >= 1/2` for non-ordinary Weil polynomials:
    /// `s | a_n` with `s` the least power of `p` such that `q | s^2`.
    pub fn passes_nonordinary_filter(&self) -> bool {
        self.middle() % self.q.s() as i64 == 0
    }

    /// Lower convex hull of `(i, v(c_i))` over the nonzero coefficients of `f`,
    /// with `v` the `p`-adic valuation normalized by `v(q) = 1`.
    pub fn newton_polygon(&self) -> NewtonPolygon {
        NewtonPolygon::of(&self.expand(), self.q)
    }

    /// Product with the supersingular factor `x^2 + q`, one dimension up.
    pub fn ss_product(&self) -> Result<WeilCandidate> {
        if !self.is_weil() {
            return domain("ss_product requires a Weil polynomial");
        }
        let q = BigInt::from(self.q.q());
        let factor = IntPolynomial::new(vec![q, BigInt::zero(), BigInt::one()]);
        let prod = &self.expand() * &factor;
        let n = self.n() + 1;
        let a = (1..=n)
            .map(|i| {
                i64::try_from(prod.coeff(2 * n - i)).map_err(|_| {
                    crate::Error::Domain("ss_product coefficient overflows i64".into())
                })
            })
            .collect::<Result<Vec<_>>>()?;
        WeilCandidate::with_prime_power(self.q, a)
    }

    /// `f(1) = (q^n + 1) + a_1 (q^(n-1) + 1) + ... + a_(n-1) (q + 1) + a_n`.
    pub fn value_at_one(&self) -> BigInt {
        self.expand().eval(&BigInt::one())
    }
}

impl fmt::Debug for WeilCandidate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "WeilCandidate(q={}, a={:?})", self.q.q(), self.a)
    }
}

/// Trace coefficients `c_0 = 1, c_1, .., c_k` for a prefix `a_1..a_k` of a
/// dimension-`n` candidate. Only `a_1..a_i` enter `c_i`.
pub fn trace_coefficients(q: u64, n: usize, a: &[i64]) -> Vec<BigInt> {
    let q = BigInt::from(q);
    let mut c: Vec<BigInt> = Vec::with_capacity(a.len() + 1);
    c.push(BigInt::one());
    for i in 1..=a.len() {
        let mut ci = BigInt::from(a[i - 1]);
        let mut k = i % 2;
        while k < i {
            let j = (i - k) / 2;
            ci -= &c[k] * binomial((n - k) as u64, j as u64) * Pow::pow(&q, j as u32);
            k += 2;
        }
        c.push(ci);
    }
    c
}

/// Endpoints `-2 sqrt(q)` and `2 sqrt(q)`, as integers when `q` is a square.
fn interval_ends(q: PrimePower) -> (SurdValue, SurdValue) {
    match q.sqrt_exact() {
        Some(r) => (
            SurdValue::integer(-2 * r as i64, q.q()),
            SurdValue::integer(2 * r as i64, q.q()),
        ),
        None => (
            SurdValue::multiple_of_root(-2, q.q()),
            SurdValue::multiple_of_root(2, q.q()),
        ),
    }
}

/// Number of real roots of `h`, with multiplicity, in `[-2 sqrt(q), 2 sqrt(q)]`.
pub fn trace_roots_in_interval(h: &IntPolynomial, q: PrimePower) -> usize {
    if h.is_zero() {
        return 0;
    }
    let (lo, hi) = interval_ends(q);
    let chain = SturmChain::new(h);
    if chain.is_squarefree() {
        let (s_lo, v_lo) = chain.signs_at(&lo);
        let (s_hi, v_hi) = chain.signs_at(&hi);
        if s_lo != num_bigint::Sign::NoSign && s_hi != num_bigint::Sign::NoSign {
            return v_lo - v_hi;
        }
    }
    squarefree_decompose(h)
        .expect("nonzero polynomial")
        .iter()
        .map(|(f, m)| *m as usize * closed_count_squarefree(f, q, &lo, &hi))
        .sum()
}

/// Roots of a square-free `f` in the closed interval: deflate the endpoints,
/// then count the open interval with a Sturm chain.
fn closed_count_squarefree(f: &IntPolynomial, q: PrimePower, lo: &SurdValue, hi: &SurdValue) -> usize {
    let mut f = f.clone();
    let mut at_ends = 0;
    match q.sqrt_exact() {
        Some(r) => {
            for end in [-2 * r as i64, 2 * r as i64] {
                let e = BigInt::from(end);
                if f.has_root(&e) {
                    f = f.div_exact(&IntPolynomial::linear_root(e)).unwrap();
                    at_ends += 1;
                }
            }
        }
        None => {
            // y^2 - 4q is irreducible, so one endpoint root forces both
            if sign_at_surd(&f, hi) == 0 {
                let e = IntPolynomial::new(vec![BigInt::from(-4 * q.q() as i64), BigInt::zero(), BigInt::one()]);
                f = f.div_exact(&e).unwrap();
                at_ends += 2;
            }
        }
    }
    if f.is_constant() {
        return at_ends;
    }
    at_ends + SturmChain::new(&f).count(lo, hi).expect("endpoints deflated")
}

/// Lower convex hull of the valuation points of a polynomial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NewtonPolygon {
    vertices: Vec<(usize, Rational64)>,
}

impl NewtonPolygon {
    pub fn of(f: &IntPolynomial, q: PrimePower) -> Self {
        let p = BigInt::from(q.p());
        let e = q.e() as i64;
        let points: Vec<(usize, Rational64)> = f
            .coeffs()
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (i, Rational64::new(valuation(c, &p), e)))
            .collect();
        let mut hull: Vec<(usize, Rational64)> = Vec::new();
        for pt in points {
            while hull.len() >= 2 {
                let (x1, y1) = hull[hull.len() - 2];
                let (x2, y2) = hull[hull.len() - 1];
                // drop the middle point unless slope strictly increases
                let s12 = (y2 - y1) / Rational64::from((x2 - x1) as i64);
                let s23 = (pt.1 - y2) / Rational64::from((pt.0 - x2) as i64);
                if s23 <= s12 {
                    hull.pop();
                } else {
                    break;
                }
            }
            hull.push(pt);
        }
        NewtonPolygon { vertices: hull }
    }

    pub fn vertices(&self) -> &[(usize, Rational64)] {
        &self.vertices
    }

    pub fn slopes(&self) -> Vec<Rational64> {
        self.vertices
            .windows(2)
            .map(|w| (w[1].1 - w[0].1) / Rational64::from((w[1].0 - w[0].0) as i64))
            .collect()
    }

    pub fn has_integer_vertices(&self) -> bool {
        self.vertices.iter().all(|(_, v)| v.is_integer())
    }
}

fn valuation(c: &BigInt, p: &BigInt) -> i64 {
    let mut c = c.clone();
    let mut v = 0;
    loop {
        let (quot, rem) = c.div_rem(p);
        if !rem.is_zero() {
            return v;
        }
        c = quot;
        v += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(q: u64, a: &[i64]) -> WeilCandidate {
        WeilCandidate::new(q, a.to_vec()).unwrap()
    }

    fn p(c: &[i64]) -> IntPolynomial {
        IntPolynomial::from_i64s(c)
    }

    fn r(n: i64, d: i64) -> Rational64 {
        Rational64::new(n, d)
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(WeilCandidate::new(6, vec![0]).is_err());
        assert!(WeilCandidate::new(4, vec![]).is_err());
    }

    #[test]
    fn expand_examples() {
        assert_eq!(w(2, &[-1]).expand(), p(&[2, -1, 1]));
        assert_eq!(w(4, &[-1, 5]).expand(), p(&[16, -4, 5, -1, 1]));
        assert_eq!(w(3, &[0, 0, 0]).expand(), p(&[27, 0, 0, 0, 0, 0, 1]));
    }

    #[test]
    fn trace_poly_examples() {
        assert_eq!(w(5, &[3]).trace_poly(), p(&[3, 1]));
        assert_eq!(w(7, &[2, -3]).trace_poly(), p(&[-3 - 14, 2, 1]));
        assert_eq!(w(3, &[0, 0]).trace_poly(), p(&[-6, 0, 1]));
    }

    #[test]
    fn is_weil_examples() {
        assert!(w(2, &[-1]).is_weil());
        assert!(!w(4, &[5]).is_weil());
        assert!(w(4, &[4]).is_weil()); // (x+2)^2
        assert!(w(7, &[0, 0, 0]).is_weil());
        assert!(w(2, &[0, 0, 0, 0]).is_weil());
        // x^4 + 4x^2 + 4 = (x^2 + 2)^2: double roots ±i sqrt 2
        assert!(w(2, &[0, 4]).is_weil());
        // (x^2 - 2)^2 has real roots ±sqrt 2 each with multiplicity 2
        assert!(w(2, &[0, -4]).is_weil());
        // (x^2 + x + 2)^2 repeated complex pair, and an outside trace root
        assert!(w(2, &[2, 5]).is_weil());
        assert!(!w(2, &[0, -5]).is_weil());
    }

    #[test]
    fn ordinary_examples() {
        assert!(w(4, &[-1, 5]).is_ordinary().unwrap());
        assert!(!w(2, &[0]).is_ordinary().unwrap());
        assert!(!w(9, &[0, 3]).is_ordinary().unwrap());
        assert!(w(4, &[5]).is_ordinary().is_err());
    }

    #[test]
    fn newton_polygon_examples() {
        assert_eq!(
            w(4, &[-1, 5]).newton_polygon().vertices(),
            &[(0, r(2, 1)), (2, r(0, 1)), (4, r(0, 1))]
        );
        assert_eq!(w(2, &[0]).newton_polygon().vertices(), &[(0, r(1, 1)), (2, r(0, 1))]);
        assert_eq!(
            w(2, &[-1]).newton_polygon().vertices(),
            &[(0, r(1, 1)), (1, r(0, 1)), (2, r(0, 1))]
        );
        assert_eq!(w(2, &[0]).newton_polygon().slopes(), vec![r(-1, 2)]);
    }

    #[test]
    fn nonordinary_filter() {
        assert!(w(4, &[0, 2]).passes_nonordinary_filter());
        assert!(!w(4, &[0, 5]).passes_nonordinary_filter());
        assert!(w(8, &[0, 0, 4]).passes_nonordinary_filter());
        assert!(!w(8, &[0, 0, 2]).passes_nonordinary_filter());
        assert!(w(3, &[0]).passes_nonordinary_filter());
    }

    #[test]
    fn ss_product_examples() {
        assert_eq!(w(2, &[-1]).ss_product().unwrap(), w(2, &[-1, 4]));
        assert_eq!(w(5, &[0]).ss_product().unwrap(), w(5, &[0, 10]));
        assert!(w(4, &[5]).ss_product().is_err());
        let images: std::collections::HashSet<_> = (-2..=2)
            .map(|t| w(2, &[t]).ss_product().unwrap())
            .collect();
        assert_eq!(images.len(), 5);
        for img in &images {
            assert!(img.is_weil());
            assert!(!img.coprime_middle());
        }
    }

    #[test]
    fn value_at_one() {
        assert_eq!(w(4, &[-1, 5]).value_at_one(), BigInt::from(17));
        assert_eq!(w(4, &[-1, 3]).value_at_one(), BigInt::from(15));
    }
}
