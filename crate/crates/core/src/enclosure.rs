//! Certified enclosures of real numbers by rational intervals.
//!
//! Every operation rounds outward onto the dyadic grid `2^-bits`, so an
//! [`Enclosure`] always contains the true value and its endpoints stay small.
//! An inequality is reported as holding only when the enclosures separate.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// A closed rational interval `[lo, hi]`.
#[derive(Clone, PartialEq, Eq)]
pub struct Enclosure {
    lo: BigRational,
    hi: BigRational,
}

fn big(x: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

fn scale_pow2(bits: u32) -> BigRational {
    BigRational::from_integer(BigInt::one() << bits)
}

fn round_down(x: &BigRational, bits: u32) -> BigRational {
    if x.denom().bits() <= u64::from(bits) {
        return x.clone();
    }
    let s = scale_pow2(bits);
    (x * &s).floor() / s
}

fn round_up(x: &BigRational, bits: u32) -> BigRational {
    if x.denom().bits() <= u64::from(bits) {
        return x.clone();
    }
    let s = scale_pow2(bits);
    (x * &s).ceil() / s
}

impl Enclosure {
    /// `[lo, hi]`; panics if `lo > hi`.
    pub fn new(lo: BigRational, hi: BigRational) -> Self {
        assert!(lo <= hi, "empty enclosure");
        Enclosure { lo, hi }
    }

    pub fn exact(x: BigRational) -> Self {
        Enclosure { lo: x.clone(), hi: x }
    }

    pub fn from_int(x: i64) -> Self {
        Self::exact(big(x))
    }

    pub fn lo(&self) -> &BigRational {
        &self.lo
    }

    pub fn hi(&self) -> &BigRational {
        &self.hi
    }

    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    pub fn contains(&self, x: &BigRational) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn midpoint_f64(&self) -> f64 {
        ((&self.lo + &self.hi) / big(2)).to_f64().unwrap_or(f64::NAN)
    }

    /// Outward rounding onto the grid `2^-bits`.
    pub fn rounded(&self, bits: u32) -> Self {
        Enclosure {
            lo: round_down(&self.lo, bits),
            hi: round_up(&self.hi, bits),
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        Enclosure {
            lo: &self.lo + &o.lo,
            hi: &self.hi + &o.hi,
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        Enclosure {
            lo: &self.lo - &o.hi,
            hi: &self.hi - &o.lo,
        }
    }

    pub fn neg(&self) -> Self {
        Enclosure {
            lo: -&self.hi,
            hi: -&self.lo,
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let p = [
            &self.lo * &o.lo,
            &self.lo * &o.hi,
            &self.hi * &o.lo,
            &self.hi * &o.hi,
        ];
        let lo = p.iter().min().unwrap().clone();
        let hi = p.iter().max().unwrap().clone();
        Enclosure { lo, hi }
    }

    /// Division by an enclosure that excludes zero.
    pub fn div(&self, o: &Self) -> Self {
        assert!(
            o.lo.is_positive() || o.hi.is_negative(),
            "division by an enclosure containing zero"
        );
        self.mul(&Enclosure {
            lo: o.hi.recip(),
            hi: o.lo.recip(),
        })
    }

    pub fn scale(&self, k: &BigRational) -> Self {
        self.mul(&Self::exact(k.clone()))
    }

    pub fn powi(&self, k: u32) -> Self {
        (0..k).fold(Self::from_int(1), |acc, _| acc.mul(self))
    }

    pub fn abs(&self) -> Self {
        if !self.lo.is_negative() {
            self.clone()
        } else if !self.hi.is_positive() {
            self.neg()
        } else {
            Enclosure {
                lo: BigRational::zero(),
                hi: self.hi.clone().max(-&self.lo),
            }
        }
    }

    /// True when every point of `self` is `<=` every point of `o`.
    pub fn certainly_le(&self, o: &Self) -> bool {
        self.hi <= o.lo
    }

    pub fn certainly_lt(&self, o: &Self) -> bool {
        self.hi < o.lo
    }

    /// `k`-th root of a nonnegative rational, via integer root extraction.
    pub fn root(x: &BigRational, k: u32, bits: u32) -> Self {
        assert!(!x.is_negative(), "root of a negative number");
        assert!(k >= 1);
        // x = a/b, x^(1/k) = (a b^(k-1))^(1/k) / b
        let a = x.numer();
        let b = x.denom();
        let radicand = (a * b.pow(k - 1)) << (bits as usize * k as usize);
        let r = radicand.nth_root(k);
        let denom = b << bits;
        let lo = BigRational::new(r.clone(), denom.clone());
        if r.pow(k) == radicand {
            return Enclosure::exact(lo);
        }
        let hi = BigRational::new(r + 1, denom);
        Enclosure { lo, hi }
    }

    pub fn sqrt(x: &BigRational, bits: u32) -> Self {
        Self::root(x, 2, bits)
    }

    /// `q^(num/den)` for a positive integer `q`.
    pub fn rational_power(q: u64, num: u64, den: u32, bits: u32) -> Self {
        let whole = num / u64::from(den);
        let frac = (num % u64::from(den)) as u32;
        let base = BigRational::from_integer(BigInt::from(q).pow(whole as u32));
        if frac == 0 {
            return Self::exact(base);
        }
        let g = num_integer::gcd(frac, den);
        let part = Self::root(
            &BigRational::from_integer(BigInt::from(q).pow(frac / g)),
            den / g,
            bits + 8,
        );
        part.scale(&base).rounded(bits + 8)
    }

    pub fn exp(&self, bits: u32) -> Self {
        Enclosure {
            lo: exp_point(&self.lo, bits).lo,
            hi: exp_point(&self.hi, bits).hi,
        }
    }

    /// Natural logarithm of a positive enclosure.
    pub fn ln(&self, bits: u32) -> Self {
        assert!(self.lo.is_positive(), "logarithm of a nonpositive enclosure");
        Enclosure {
            lo: ln_point(&self.lo, bits).lo,
            hi: ln_point(&self.hi, bits).hi,
        }
    }

    pub fn to_decimal(&self, digits: usize) -> String {
        format!("{:.*}", digits, self.midpoint_f64())
    }
}

impl fmt::Debug for Enclosure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{:.12e}, {:.12e}]",
            self.lo.to_f64().unwrap_or(f64::NAN),
            self.hi.to_f64().unwrap_or(f64::NAN)
        )
    }
}

/// `exp(t)` for rational `t`: halve until `|t| <= 1/2`, Taylor series with a
/// tail bound, then square back.
fn exp_point(t: &BigRational, bits: u32) -> Enclosure {
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let mut y = t.clone();
    let mut k = 0u32;
    while y.abs() > half {
        y /= big(2);
        k += 1;
    }
    let work = bits + 2 * k + 16;
    let eps = BigRational::new(BigInt::one(), BigInt::one() << work);
    let mut sum = BigRational::zero();
    let mut term = BigRational::one();
    let mut j = 0i64;
    loop {
        sum += &term;
        j += 1;
        term = round_down(&(&term * &y / big(j)), work + 8);
        // tail after this point is at most 2|term| for |y| <= 1/2; rounding of
        // terms adds at most 2^-(work+8) each
        if term.abs() * big(2) < eps {
            break;
        }
    }
    let slack = &eps * big(2) + BigRational::new(BigInt::from(j), BigInt::one() << (work + 8));
    let mut e = Enclosure {
        lo: &sum - &slack,
        hi: &sum + &slack,
    }
    .rounded(work);
    for _ in 0..k {
        e = e.mul(&e).rounded(work);
    }
    e.rounded(bits)
}

/// `2 atanh(z) = ln((1+z)/(1-z))` for rational `0 <= z <= 1/3`.
fn two_atanh(z: &BigRational, bits: u32) -> Enclosure {
    let work = bits + 16;
    let eps = BigRational::new(BigInt::one(), BigInt::one() << work);
    let z2 = z * z;
    let mut pow = z.clone();
    let mut sum = BigRational::zero();
    let mut j = 0i64;
    loop {
        sum += round_down(&(&pow / big(2 * j + 1)), work + 8);
        pow = round_down(&(&pow * &z2), work + 8);
        j += 1;
        // remaining tail <= pow/(2j+1) * 1/(1 - z^2) <= 2 pow
        if &pow * big(2) < eps {
            break;
        }
    }
    let slack = &pow * big(2) + BigRational::new(BigInt::from(2 * j + 2), BigInt::one() << (work + 8));
    Enclosure {
        lo: (&sum - &slack) * big(2),
        hi: (&sum + &slack) * big(2),
    }
    .rounded(work)
}

fn ln2(bits: u32) -> Enclosure {
    two_atanh(&BigRational::new(BigInt::one(), BigInt::from(3)), bits)
}

/// `ln(t)` for positive rational `t`, reduced to `t = 2^m u` with `u in [1, 2)`.
fn ln_point(t: &BigRational, bits: u32) -> Enclosure {
    let mut m: i64 = t.numer().bits() as i64 - t.denom().bits() as i64;
    let pow2 = |m: i64| {
        if m >= 0 {
            BigRational::from_integer(BigInt::one() << m as usize)
        } else {
            BigRational::new(BigInt::one(), BigInt::one() << (-m) as usize)
        }
    };
    let mut u = t / pow2(m);
    while u < BigRational::one() {
        m -= 1;
        u = t / pow2(m);
    }
    while u >= big(2) {
        m += 1;
        u = t / pow2(m);
    }
    let work = bits + 64 - (m.unsigned_abs().leading_zeros());
    let z = (&u - big(1)) / (&u + big(1));
    let lu = two_atanh(&z, work);
    ln2(work).scale(&big(m)).add(&lu).rounded(bits)
}

/// Outcome of a certified comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    Holds,
    Fails,
    /// The enclosures still overlapped at the finest precision tried.
    Undecided,
}

impl Verdict {
    pub fn holds(self) -> bool {
        self == Verdict::Holds
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Holds => "holds",
            Verdict::Fails => "fails",
            Verdict::Undecided => "undecided",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Working precisions tried in turn while a comparison is undecided.
pub const PRECISIONS: [u32; 4] = [64, 128, 256, 512];

/// Decides `lhs <= rhs` (or `lhs < rhs` when `strict`) where `sides(bits)`
/// encloses both sides at the given precision, refining until separated.
pub fn certify(strict: bool, sides: impl Fn(u32) -> (Enclosure, Enclosure)) -> Verdict {
    for bits in PRECISIONS {
        let (l, r) = sides(bits);
        let holds = if strict { l.certainly_lt(&r) } else { l.certainly_le(&r) };
        if holds {
            return Verdict::Holds;
        }
        let fails = if strict { r.certainly_le(&l) } else { r.certainly_lt(&l) };
        if fails {
            return Verdict::Fails;
        }
    }
    Verdict::Undecided
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn check(e: &Enclosure, value: f64, max_width: f64) {
        let lo = e.lo().to_f64().unwrap();
        let hi = e.hi().to_f64().unwrap();
        let slack = value.abs() * 1e-15 + 1e-300;
        assert!(lo <= value + slack, "{e:?} vs {value}");
        assert!(hi >= value - slack, "{e:?} vs {value}");
        assert!(hi - lo <= max_width, "{e:?} too wide");
    }

    #[test]
    fn roots() {
        check(&Enclosure::sqrt(&r(2, 1), 64), 2f64.sqrt(), 1e-15);
        check(&Enclosure::sqrt(&r(3, 7), 64), (3.0f64 / 7.0).sqrt(), 1e-15);
        assert_eq!(Enclosure::sqrt(&r(9, 4), 64), Enclosure::exact(r(3, 2)));
        check(&Enclosure::root(&r(5, 1), 4, 64), 5f64.powf(0.25), 1e-15);
        check(&Enclosure::rational_power(8, 3, 4, 64), 8f64.powf(0.75), 1e-14);
        check(&Enclosure::rational_power(4, 3, 2, 64), 8.0, 0.0);
        check(&Enclosure::rational_power(2, 15, 4, 64), 2f64.powf(3.75), 1e-13);
    }

    #[test]
    fn exponentials() {
        check(&Enclosure::exact(r(3, 2)).exp(64), 1.5f64.exp(), 1e-15);
        check(&Enclosure::exact(r(-3, 2)).exp(64), (-1.5f64).exp(), 1e-15);
        check(&Enclosure::exact(r(-93, 20)).exp(64), (-4.65f64).exp(), 1e-15);
        check(&Enclosure::exact(r(0, 1)).exp(64), 1.0, 1e-15);
        check(&Enclosure::exact(r(17, 1)).exp(80), 17f64.exp(), 1e-6);
    }

    #[test]
    fn logarithms() {
        check(&Enclosure::exact(r(2, 1)).ln(64), 2f64.ln(), 1e-15);
        check(&Enclosure::exact(r(81, 1)).ln(64), 81f64.ln(), 1e-15);
        check(&Enclosure::exact(r(1, 10)).ln(64), 0.1f64.ln(), 1e-15);
        check(&Enclosure::exact(r(1, 1)).ln(64), 0.0, 1e-15);
        check(&Enclosure::exact(r(3, 2)).ln(64), 1.5f64.ln(), 1e-15);
    }

    #[test]
    fn interval_arithmetic() {
        let a = Enclosure::new(r(-1, 1), r(2, 1));
        let b = Enclosure::new(r(3, 1), r(4, 1));
        assert_eq!(a.mul(&b), Enclosure::new(r(-4, 1), r(8, 1)));
        assert_eq!(a.sub(&b), Enclosure::new(r(-5, 1), r(-1, 1)));
        assert_eq!(a.div(&b), Enclosure::new(r(-1, 3), r(2, 3)));
        assert_eq!(a.abs(), Enclosure::new(r(0, 1), r(2, 1)));
        assert!(a.certainly_le(&b));
        assert!(!b.certainly_le(&a));
        let rounded = Enclosure::exact(r(1, 3)).rounded(10);
        assert!(rounded.contains(&r(1, 3)));
        assert!(rounded.width() <= r(1, 1000));
    }

    #[test]
    fn certified_comparison() {
        let two = || Enclosure::from_int(2);
        let root2_sq = |bits| Enclosure::sqrt(&r(2, 1), bits).powi(2);
        assert_eq!(certify(false, |b| (root2_sq(b), Enclosure::exact(r(20001, 10000)))), Verdict::Holds);
        assert_eq!(certify(false, |b| (Enclosure::exact(r(19999, 10000)), root2_sq(b))), Verdict::Holds);
        assert_eq!(certify(true, |_| (two(), two())), Verdict::Fails);
        assert_eq!(certify(false, |_| (two(), two())), Verdict::Holds);
        assert_eq!(certify(false, |b| (root2_sq(b), two())), Verdict::Undecided);
    }
}
