//! Realizing group orders: for admissible `m`, an ordinary Weil polynomial
//! `f` of degree `2n` with `f(1) = m`.
//!
//! For `q >= 4` the coefficients are chosen greedily from `a_1` down, with a
//! final coprimality repair of `a_(n-1), a_n`. For `q = 2, 3` small
//! dimensions are searched exhaustively and larger ones start from a zero
//! prefix before going greedy.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::ToPrimitive;

use crate::arith::PrimePower;
use crate::enclosure::{certify, Enclosure};
use crate::error::{domain, Error, Result};
use crate::lattice::{coefficient_bound, prefix_feasible};
use crate::weil::WeilCandidate;

/// A target group order `m` for dimension `n` over `F_q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OrderQuery {
    q: PrimePower,
    n: usize,
    m: u64,
}

impl OrderQuery {
    pub fn new(q: u64, n: usize, m: u64) -> Result<Self> {
        let q = PrimePower::new(q)?;
        if n < 2 {
            return domain("group orders are realized for n >= 2");
        }
        if m == 0 {
            return domain("the group order must be positive");
        }
        Ok(OrderQuery { q, n, m })
    }

    pub fn q(&self) -> PrimePower {
        self.q
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> u64 {
        self.m
    }

    /// `m - (q^n + 1)`.
    fn offset(&self) -> Result<i128> {
        Ok(self.m as i128 - (qpow(self.q.q(), self.n)? + 1))
    }
}

fn qpow(q: u64, k: usize) -> Result<i128> {
    (q as i128)
        .checked_pow(k as u32)
        .ok_or_else(|| Error::Domain(format!("{q}^{k} overflows 128 bits")))
}

/// `floor(B_q sqrt(q))` with `B_q = (sqrt(q) - 2) / (2 (sqrt(q) - 1))`.
///
/// `k <= B_q sqrt(q)` is equivalent to `sqrt(q) (2k + 2) <= q + 2k`, tested
/// after squaring.
pub fn floor_bq_sqrtq(q: u64) -> Result<u64> {
    if q < 4 {
        return domain("B_q sqrt(q) is only used for q >= 4");
    }
    let q = q as u128;
    let ok = |k: u128| q * (2 * k + 2) * (2 * k + 2) <= (q + 2 * k) * (q + 2 * k);
    let mut k = 0;
    while ok(k + 1) {
        k += 1;
    }
    Ok(k as u64)
}

/// Largest admissible `|m - (q^n + 1)|`.
pub fn admissible_radius(q: u64, n: usize) -> Result<u64> {
    let r = match q {
        // 7 sqrt(2)/64 * 2^(n - 1/2) = 7 * 2^n / 64
        2 => 7 * qpow(2, n)? / 64,
        // 7 sqrt(3)/54 * 3^(n - 1/2) = 7 * 3^n / 54
        3 => 7 * qpow(3, n)? / 54,
        _ => {
            PrimePower::new(q)?;
            (2 * floor_bq_sqrtq(q)? as i128 + 1) * qpow(q, n - 1)? / 2
        }
    };
    u64::try_from(r).map_err(|_| Error::Domain("radius overflows 64 bits".into()))
}

/// The admissible interval `[lo, hi]` of group orders.
pub fn admissible_interval(q: u64, n: usize) -> Result<(u64, u64)> {
    if n < 2 {
        return domain("group orders are realized for n >= 2");
    }
    let center = qpow(q, n)? + 1;
    let r = admissible_radius(q, n)? as i128;
    let lo = u64::try_from((center - r).max(1)).map_err(|_| Error::Domain("overflow".into()))?;
    let hi = u64::try_from(center + r).map_err(|_| Error::Domain("overflow".into()))?;
    Ok((lo, hi))
}

/// `2 |m - (q^n + 1)| <= (2 floor(B_q sqrt(q)) + 1) q^(n-1)` for `q >= 4`.
pub fn admissible(query: &OrderQuery) -> Result<bool> {
    let q = query.q.q();
    let f = floor_bq_sqrtq(q)? as i128;
    Ok(2 * query.offset()?.abs() <= (2 * f + 1) * qpow(q, query.n - 1)?)
}

/// `|m - (q^n + 1)| <= C_q q^(n - 1/2)` with `C_2 = 7 sqrt(2)/64` and
/// `C_3 = 7 sqrt(3)/54`.
pub fn admissible_small_q(query: &OrderQuery) -> Result<bool> {
    let d = query.offset()?.abs();
    let n = query.n;
    match query.q.q() {
        2 => Ok(64 * d <= 7 * qpow(2, n)?),
        3 => Ok(54 * d <= 7 * qpow(3, n)?),
        _ => domain("the small-q thresholds apply to q = 2 and q = 3"),
    }
}

/// Which sufficient condition certified the result before the exact check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Certificate {
    /// `|a_n/(2 q^(n/2))| + Σ_(i<n) |a_i/q^(i/2)| <= 1`.
    Diamond,
    /// The explicit description of `V_2`.
    ExplicitV2,
    /// Only the exact Weil test.
    ExactOnly,
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Certificate::Diamond => "diamond",
            Certificate::ExplicitV2 => "explicit-v2",
            Certificate::ExactOnly => "exact-only",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Greedy,
    /// Greedy after fixing `a_1 = .. = a_k = 0`.
    ZeroPrefixGreedy(usize),
    Search,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Method::Greedy => f.write_str("greedy"),
            Method::ZeroPrefixGreedy(k) => write!(f, "zero-prefix-greedy({k})"),
            Method::Search => f.write_str("search"),
        }
    }
}

/// A verified ordinary Weil polynomial with `f(1) = m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Realization {
    pub candidate: WeilCandidate,
    pub method: Method,
    pub repaired: bool,
    pub certificate: Certificate,
}

fn invariant(msg: String) -> Error {
    Error::Invariant(msg)
}

/// `argmin_a |g - a w|`, ties to the smaller `a`.
fn nearest(g: i128, w: i128) -> i128 {
    let a0 = g.div_euclid(w);
    let r = g - a0 * w;
    if 2 * r > w {
        a0 + 1
    } else {
        a0
    }
}

/// `a_start..a_(n-1)` greedily, `a_n` from the remainder. Asserts
/// `|g_(i+1)| <= (q^(n-i) + 1)/2` after each choice.
fn greedy(query: &OrderQuery, a: &mut Vec<i64>) -> Result<()> {
    let (q, n) = (query.q.q(), query.n);
    let mut g = query.offset()?;
    for (idx, &ai) in a.iter().enumerate() {
        g -= ai as i128 * (qpow(q, n - idx - 1)? + 1);
    }
    for i in a.len() + 1..n {
        let w = qpow(q, n - i)? + 1;
        let ai = nearest(g, w);
        g -= ai * w;
        if 2 * g.abs() > w {
            return Err(invariant(format!("greedy remainder {g} too large after a_{i}")));
        }
        a.push(to_i64(ai)?);
    }
    a.push(to_i64(g)?);
    Ok(())
}

fn to_i64(x: i128) -> Result<i64> {
    i64::try_from(x).map_err(|_| Error::Domain("coefficient overflows 64 bits".into()))
}

/// Coprimality repair for `n > 2`, moving `q + 1` between `a_n` and `a_(n-1)`.
fn repair_general(q: i64, a: &mut [i64]) -> bool {
    let n = a.len();
    if a[n - 1].unsigned_abs().gcd(&(q as u64)) == 1 {
        return false;
    }
    if a[n - 1] < 0 {
        a[n - 1] += q + 1;
        a[n - 2] -= 1;
    } else {
        a[n - 1] -= q + 1;
        a[n - 2] += 1;
    }
    true
}

/// `|a_n|/(2 q^(n/2)) + Σ_(i<n) |a_i|/q^(i/2) <= 1`, certified.
pub fn diamond_certified(q: PrimePower, a: &[i64]) -> bool {
    let n = a.len();
    let sum = |bits: u32| {
        let mut s = Enclosure::from_int(0);
        for (idx, &ai) in a.iter().enumerate() {
            let i = idx + 1;
            let mut num = BigRational::from_integer(BigInt::from(ai.unsigned_abs()));
            if i == n {
                num /= BigRational::from_integer(2.into());
            }
            let root = Enclosure::rational_power(q.q(), i as u64, 2, bits + 8);
            s = s.add(&Enclosure::exact(num).div(&root)).rounded(bits + 8);
        }
        (s, Enclosure::from_int(1))
    };
    certify(false, sum).holds()
}

/// The explicit `V_2` test at `b = (a_1/sqrt(q), a_2/q)`, in integers:
/// `a_2 + 2q >= 2 |a_1| sqrt(q)` and `4 a_2 <= a_1^2 + 8q`.
pub fn in_v2_exact(q: u64, a1: i64, a2: i64) -> bool {
    let (q, a1, a2) = (q as i128, a1 as i128, a2 as i128);
    let lower = a2 + 2 * q >= 0 && (a2 + 2 * q) * (a2 + 2 * q) >= 4 * a1 * a1 * q;
    let upper = 4 * a2 <= a1 * a1 + 8 * q;
    lower && upper
}

fn finish(query: &OrderQuery, a: Vec<i64>, method: Method, repaired: bool, certificate: Certificate) -> Result<Realization> {
    let candidate = WeilCandidate::with_prime_power(query.q, a)?;
    if !verify_realization(&candidate, query.m) {
        return Err(invariant(format!(
            "constructed {candidate:?} fails verification for m = {}",
            query.m
        )));
    }
    Ok(Realization {
        candidate,
        method,
        repaired,
        certificate,
    })
}

fn certificate_for(q: PrimePower, a: &[i64]) -> Certificate {
    if diamond_certified(q, a) {
        Certificate::Diamond
    } else if a.len() == 2 && in_v2_exact(q.q(), a[0], a[1]) {
        Certificate::ExplicitV2
    } else {
        Certificate::ExactOnly
    }
}

/// Bound checks that hold after the `n > 2` repair. The first greedy
/// coefficient `a_start` is bounded by `first_bound`, later ones by `q/2`.
fn check_general_bounds(q: i64, first_bound: u64, a: &[i64], start: usize) -> Result<()> {
    let n = a.len();
    let fail = |what: &str| Err(invariant(format!("{what} violated by {a:?}")));
    if a[start - 1].unsigned_abs() > first_bound {
        return fail("bound on the first greedy coefficient");
    }
    for &ai in &a[start..n - 2] {
        if 2 * ai.unsigned_abs() > q as u64 {
            return fail("|a_i| <= q/2");
        }
    }
    if 2 * a[n - 2].abs() > q + 1 {
        return fail("|a_(n-1)| <= (q+1)/2");
    }
    if a[n - 1].abs() > q + 1 {
        return fail("|a_n| <= q+1");
    }
    if a[n - 1].unsigned_abs().gcd(&(q as u64)) != 1 {
        return fail("gcd(a_n, q) = 1");
    }
    Ok(())
}

/// The greedy construction for `q >= 4`.
pub fn realize_order(query: &OrderQuery) -> Result<Realization> {
    if !admissible(query)? {
        let (lo, hi) = admissible_interval(query.q.q(), query.n)?;
        return domain(format!(
            "m = {} is outside the admissible interval [{lo}, {hi}]",
            query.m
        ));
    }
    let q = query.q.q() as i64;
    let f = floor_bq_sqrtq(query.q.q())?;
    let mut a = Vec::with_capacity(query.n);
    greedy(query, &mut a)?;
    if a[0].unsigned_abs() > f {
        return Err(invariant(format!("|a_1| <= floor(B_q sqrt(q)) violated by {a:?}")));
    }
    if query.n == 2 {
        if 2 * a[1].abs() > q + 1 {
            return Err(invariant(format!("|a_2| <= (q+1)/2 violated by {a:?}")));
        }
        let repaired = a[1].unsigned_abs().gcd(&(q as u64)) != 1;
        if repaired {
            a[1] += q + 1;
            a[0] -= 1;
            if a[1].unsigned_abs().gcd(&(q as u64)) != 1 || a[0].unsigned_abs() > f + 1 {
                return Err(invariant(format!("repair bounds violated by {a:?}")));
            }
        }
        let cert = certificate_for(query.q, &a);
        return finish(query, a, Method::Greedy, repaired, cert);
    }
    for (idx, &ai) in a.iter().enumerate().take(query.n - 1).skip(1) {
        if 2 * ai.unsigned_abs() > q as u64 {
            return Err(invariant(format!("|a_{}| <= q/2 violated by {a:?}", idx + 1)));
        }
    }
    let repaired = repair_general(q, &mut a);
    check_general_bounds(q, f, &a, 1)?;
    let cert = certificate_for(query.q, &a);
    finish(query, a, Method::Greedy, repaired, cert)
}

/// Dimension from which the zero-prefix greedy is used, and the prefix length.
fn small_q_plan(q: u64) -> (usize, usize) {
    if q == 2 {
        (7, 4)
    } else {
        (5, 2)
    }
}

/// Realization for `q = 2, 3`.
pub fn realize_order_small_q(query: &OrderQuery) -> Result<Realization> {
    if !admissible_small_q(query)? {
        let (lo, hi) = admissible_interval(query.q.q(), query.n)?;
        return domain(format!(
            "m = {} is outside the admissible interval [{lo}, {hi}]",
            query.m
        ));
    }
    let q = query.q.q();
    let (threshold, zeros) = small_q_plan(q);
    if query.n < threshold {
        let a = search(query)?
            .ok_or_else(|| invariant(format!("no ordinary Weil polynomial found for {query:?}")))?;
        let cert = certificate_for(query.q, &a);
        return finish(query, a, Method::Search, false, cert);
    }
    let mut a = vec![0; zeros];
    greedy(query, &mut a)?;
    if a[zeros].abs() > 3 {
        return Err(invariant(format!("|a_{}| <= 3 violated by {a:?}", zeros + 1)));
    }
    let repaired = repair_general(q as i64, &mut a);
    check_general_bounds(q as i64, 3, &a, zeros + 1)?;
    let cert = certificate_for(query.q, &a);
    finish(query, a, Method::ZeroPrefixGreedy(zeros), repaired, cert)
}

/// Dispatches on `q`.
pub fn realize(query: &OrderQuery) -> Result<Realization> {
    if query.q.q() < 4 {
        realize_order_small_q(query)
    } else {
        realize_order(query)
    }
}

/// Values `0, -1, 1, -2, 2, ..` up to `bound` in absolute value.
fn zigzag(bound: i64) -> impl Iterator<Item = i64> {
    std::iter::once(0).chain((1..=bound).flat_map(|k| [-k, k]))
}

/// First ordinary Weil vector with `f(1) = m` in the order
/// `(|a_1|, sign a_1, |a_2|, sign a_2, ..)`, negative before positive.
fn search(query: &OrderQuery) -> Result<Option<Vec<i64>>> {
    let (q, n) = (query.q, query.n);
    let bounds: Vec<i64> = (1..=n)
        .map(|i| coefficient_bound(q.q(), n, i).to_i64().unwrap_or(i64::MAX))
        .collect();
    let weights: Vec<i128> = (1..=n)
        .map(|i| qpow(q.q(), n - i).map(|p| p + if i == n { 0 } else { 1 }))
        .collect::<Result<_>>()?;
    // largest remaining contribution of a_(k+1)..a_n
    let mut reach = vec![0i128; n + 1];
    for k in (0..n).rev() {
        reach[k] = reach[k + 1] + bounds[k] as i128 * weights[k];
    }
    fn rec(
        query: &OrderQuery,
        bounds: &[i64],
        weights: &[i128],
        reach: &[i128],
        a: &mut Vec<i64>,
        g: i128,
    ) -> Option<Vec<i64>> {
        let n = query.n;
        let k = a.len();
        if k == n - 1 {
            let an = i64::try_from(g).ok()?;
            if an.abs() > bounds[n - 1] || an.unsigned_abs().gcd(&query.q.q()) != 1 {
                return None;
            }
            a.push(an);
            let w = WeilCandidate::with_prime_power(query.q, a.clone()).ok()?;
            let found = w.is_weil().then(|| a.clone());
            a.pop();
            return found;
        }
        for x in zigzag(bounds[k]) {
            let rest = g - x as i128 * weights[k];
            if rest.abs() > reach[k + 1] {
                continue;
            }
            a.push(x);
            if prefix_feasible(query.q, n, a) {
                if let Some(found) = rec(query, bounds, weights, reach, a, rest) {
                    return Some(found);
                }
            }
            a.pop();
        }
        None
    }
    let mut a = Vec::with_capacity(n);
    Ok(rec(query, &bounds, &weights, &reach, &mut a, query.offset()?))
}

/// `is_weil(w)`, `gcd(a_n, q) = 1` and `f(1) = m`.
pub fn verify_realization(w: &WeilCandidate, m: u64) -> bool {
    w.is_weil() && w.coprime_middle() && w.value_at_one() == BigInt::from(m)
}

/// Every admissible `m` for `(q, n)` and its realization, in increasing `m`.
pub fn sweep(q: u64, n: usize) -> Result<Vec<(u64, Realization)>> {
    let (lo, hi) = admissible_interval(q, n)?;
    (lo..=hi)
        .map(|m| {
            let query = OrderQuery::new(q, n, m)?;
            Ok((m, realize(&query)?))
        })
        .collect()
}
