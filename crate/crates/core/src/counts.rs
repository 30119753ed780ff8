//! Isogeny-class counts and the certified inequalities around them.
//!
//! `#O(q,n)`, the number of ordinary classes, is computed exactly as the
//! number of Weil vectors with `gcd(a_n, q) = 1`. Non-ordinary classes are
//! only bounded: their vectors satisfy `s | a_n`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Pow};

use crate::arith::{binomial, euler_phi, factorial, PrimePower};
use crate::enclosure::{certify, Enclosure, Verdict};
use crate::error::{domain, Result};
use crate::lattice::{error_constant, weil_point_counts, weil_points, EnumerationConfig, WeilPointCounts};
use crate::volume::v_exact;

/// One named constant with a certified enclosure.
#[derive(Debug, Clone)]
pub struct Constant {
    pub name: &'static str,
    pub symbolic: &'static str,
    pub value: Enclosure,
}

/// The constants `c_1..c_8` of the error terms.
#[derive(Debug, Clone)]
pub struct ConstantsTable {
    pub c1: Enclosure,
    pub c2: Enclosure,
    pub c3: Enclosure,
    pub c4: Enclosure,
    pub c5: Enclosure,
    pub c6: Enclosure,
    pub c7: Enclosure,
    pub c8: Enclosure,
}

impl ConstantsTable {
    /// Enclosures rounded outward to the grid `2^-bits`.
    pub fn at_precision(bits: u32) -> Self {
        let w = bits + 16;
        let int = |x: i64| BigRational::from_integer(BigInt::from(x));
        let sqrt2 = Enclosure::sqrt(&int(2), w);
        let sqrt3 = Enclosure::sqrt(&int(3), w);
        let one = Enclosure::from_int(1);
        let c7 = one
            .add(&sqrt3.scale(&BigRational::new(1.into(), 162.into())))
            .powi(3);
        let e32 = Enclosure::exact(BigRational::new(3.into(), 2.into())).exp(w);
        let one_plus_sqrt2 = one.add(&sqrt2);
        let c2 = e32
            .mul(&one_plus_sqrt2)
            .mul(&sqrt3)
            .mul(&c7)
            .scale(&BigRational::new(2.into(), 3.into()));
        let c3 = c2.div(&one_plus_sqrt2);
        let c4 = Enclosure::exact(BigRational::new((-3).into(), 2.into())).exp(w);
        let r = |e: Enclosure| e.rounded(bits);
        ConstantsTable {
            c1: r(sqrt3.scale(&BigRational::new(1.into(), 6.into()))),
            c2: r(c2),
            c3: r(c3),
            c4: r(c4),
            c5: r(sqrt2.add(&Enclosure::from_int(2))),
            c6: r(sqrt3.scale(&BigRational::new(1.into(), 8.into()))),
            c7: r(c7),
            c8: r(sqrt2.scale(&BigRational::new(9.into(), 16.into()))),
        }
    }

    /// The table at the default precision (width far below `1e-9`).
    pub fn certified() -> Self {
        Self::at_precision(64)
    }

    pub fn entries(&self) -> Vec<Constant> {
        let e = |name, symbolic, v: &Enclosure| Constant {
            name,
            symbolic,
            value: v.clone(),
        };
        vec![
            e("c1", "sqrt(3)/6", &self.c1),
            e("c2", "exp(3/2) * 2 (1 + sqrt(2)) sqrt(3) (1 + sqrt(3)/162)^3 / 3", &self.c2),
            e("c3", "c2 / (1 + sqrt(2))", &self.c3),
            e("c4", "exp(-3/2)", &self.c4),
            e("c5", "2 + sqrt(2)", &self.c5),
            e("c6", "sqrt(3)/8", &self.c6),
            e("c7", "(1 + sqrt(3)/162)^3", &self.c7),
            e("c8", "9 sqrt(2)/16", &self.c8),
        ]
    }
}

/// `r(x) = φ(x)/x`.
pub fn r_of(x: u64) -> Result<BigRational> {
    if x == 0 {
        return domain("r(x) needs x >= 1");
    }
    Ok(BigRational::new(euler_phi(x).into(), x.into()))
}

/// Exact `#O(q,n)`.
pub fn count_ordinary(q: PrimePower, n: usize, config: &EnumerationConfig) -> Result<u64> {
    let c = weil_point_counts(q, n, config)?;
    Ok(c.total - c.p_divisible)
}

/// Exact counts together with both error-term inequalities.
#[derive(Debug, Clone)]
pub struct CountReport {
    pub q: u64,
    pub n: usize,
    pub ordinary_count: u64,
    pub lambda_count: u64,
    pub lambda_p_count: u64,
    pub lambda_s_count: u64,
    /// `v_n r(q) q^(n(n+1)/4)`.
    pub prediction: Enclosure,
    /// `6^(n^2) c_1^n c_2 n(n+1)/(n-1)! q^((n+2)(n-1)/4)`.
    pub bound_rhs: Enclosure,
    /// `#O(q, n-1)`, the lower bound for the non-ordinary classes.
    pub nonordinary_lower: u64,
    /// `(v_n + 6^(n^2) c_1^n c_3 n(n+1)/(n-1)!) q^((n+2)(n-1)/4)`.
    pub nonordinary_upper_rhs: Enclosure,
    /// `|#O(q,n) - prediction| <= bound_rhs`.
    pub ordinary_error: Verdict,
    /// `#O(q,n-1) <= #(Λ''_q ∩ V_n)`.
    pub nonordinary_lower_holds: bool,
    /// `#(Λ''_q ∩ V_n) <= nonordinary_upper_rhs`.
    pub nonordinary_upper: Verdict,
    pub evaluations: u64,
}

impl CountReport {
    pub fn all_hold(&self) -> bool {
        self.ordinary_error.holds() && self.nonordinary_lower_holds && self.nonordinary_upper.holds()
    }
}

pub fn verify_error_terms(q: PrimePower, n: usize, config: &EnumerationConfig) -> Result<CountReport> {
    if n < 2 {
        return domain("the error-term inequalities are checked for n >= 2");
    }
    let WeilPointCounts {
        total,
        p_divisible,
        s_divisible,
        evaluations,
    } = weil_point_counts(q, n, config)?;
    let ordinary = total - p_divisible;
    let lower = count_ordinary(q, n - 1, config)?;
    let vn = v_exact(n as u32)?;
    let r = r_of(q.q())?;
    let nn = n as u64;
    let sides = |bits: u32| {
        let c = ConstantsTable::at_precision(bits);
        let err_pow = Enclosure::rational_power(q.q(), (nn + 2) * (nn - 1), 4, bits);
        let prediction = Enclosure::rational_power(q.q(), nn * (nn + 1), 4, bits).scale(&(&vn * &r));
        let bound = error_constant(n, &c.c1, &c.c2).mul(&err_pow);
        let upper = error_constant(n, &c.c1, &c.c3)
            .add(&Enclosure::exact(vn.clone()))
            .mul(&err_pow);
        (prediction, bound, upper)
    };
    let exact = |x: u64| Enclosure::exact(BigRational::from_integer(x.into()));
    let ordinary_error = certify(false, |bits| {
        let (p, b, _) = sides(bits);
        (exact(ordinary).sub(&p).abs(), b)
    });
    let nonordinary_upper = certify(false, |bits| (exact(s_divisible), sides(bits).2));
    let (prediction, bound_rhs, nonordinary_upper_rhs) = sides(64);
    Ok(CountReport {
        q: q.q(),
        n,
        ordinary_count: ordinary,
        lambda_count: total,
        lambda_p_count: p_divisible,
        lambda_s_count: s_divisible,
        prediction,
        bound_rhs,
        nonordinary_lower: lower,
        nonordinary_upper_rhs,
        ordinary_error,
        nonordinary_lower_holds: lower <= s_divisible,
        nonordinary_upper,
        evaluations,
    })
}

/// Enclosure of `c_4 (c_5 n)^(-2 log 2 / log q) (2^n/n!) (r(q) q^(n/2) - n) q^(n(n-1)/4)`.
pub fn ordinary_lower_bound_rhs(q: PrimePower, n: usize, bits: u32) -> Result<Enclosure> {
    if n == 0 {
        return domain("dimension must be positive");
    }
    let c = ConstantsTable::at_precision(bits + 16);
    let w = bits + 16;
    let nn = n as u64;
    let int = |x: u64| BigRational::from_integer(BigInt::from(x));
    let ln2 = Enclosure::exact(int(2)).ln(w);
    let lnq = Enclosure::exact(int(q.q())).ln(w);
    let ln_c5n = c.c5.scale(&int(nn)).ln(w);
    let expo = ln2.mul(&ln_c5n).div(&lnq).scale(&BigRational::from_integer((-2).into())).rounded(w);
    let factor = expo.exp(w);
    let r = r_of(q.q())?;
    let inner = Enclosure::rational_power(q.q(), nn, 2, w)
        .scale(&r)
        .sub(&Enclosure::exact(int(nn)));
    let lead = BigRational::new(Pow::pow(&BigInt::from(2), n as u32), factorial(nn));
    Ok(c.c4
        .mul(&factor)
        .mul(&inner)
        .mul(&Enclosure::rational_power(q.q(), nn * (nn - 1), 4, w))
        .scale(&lead)
        .rounded(bits))
}

/// Exact `#O(q,n)` against the certified lower bound.
#[derive(Debug, Clone)]
pub struct LowerBoundReport {
    pub q: u64,
    pub n: usize,
    pub ordinary_count: u64,
    pub rhs: Enclosure,
    pub verdict: Verdict,
}

pub fn verify_ordinary_lower_bound(q: PrimePower, n: usize, config: &EnumerationConfig) -> Result<LowerBoundReport> {
    certify_ordinary_lower_bound(q, n, count_ordinary(q, n, config)?)
}

/// The lower-bound comparison for an already computed `#O(q,n)`.
pub fn certify_ordinary_lower_bound(q: PrimePower, n: usize, ordinary: u64) -> Result<LowerBoundReport> {
    let count = Enclosure::exact(BigRational::from_integer(ordinary.into()));
    let rhs = ordinary_lower_bound_rhs(q, n, 64)?;
    let verdict = certify(true, |bits| {
        (ordinary_lower_bound_rhs(q, n, bits).expect("checked above"), count.clone())
    });
    Ok(LowerBoundReport {
        q: q.q(),
        n,
        ordinary_count: ordinary,
        rhs,
        verdict,
    })
}

/// `n C(n-1, i-1) 2^(i-1) <= 3^(n-1) sqrt(n)` with `i = floor(2n/3) + 1`,
/// compared exactly after squaring.
pub fn check_psi_lipschitz_binomial(n: u64) -> bool {
    if n == 0 {
        return false;
    }
    let i = 2 * n / 3 + 1;
    let lhs = BigInt::from(n) * binomial(n - 1, i - 1) * (BigInt::one() << (i - 1));
    &lhs * &lhs <= Pow::pow(&BigInt::from(3), (2 * n - 2) as u32) * BigInt::from(n)
}

/// `C(0,0) + C(2,1) + ... + C(2i,i) <= (3 sqrt(3)/8) 2^n / sqrt(n)` with
/// `i = floor((n-1)/2)`, compared exactly after squaring.
pub fn check_central_binomial_sum(n: u64) -> bool {
    if n == 0 {
        return false;
    }
    let i = (n - 1) / 2;
    let sum: BigInt = (0..=i).map(|j| binomial(2 * j, j)).sum();
    // sum^2 * 64 n <= 27 * 4^n
    &sum * &sum * 64 * BigInt::from(n) <= BigInt::from(27) << (2 * n)
}

/// Number of integers `m` coprime to `q` with `n^2 m^2 <= q^n`.
pub fn lower_bound_m_count(q: PrimePower, n: u64) -> Result<u64> {
    if n == 0 {
        return domain("n must be positive");
    }
    let qn: BigInt = Pow::pow(&BigInt::from(q.q()), n as u32);
    let m: BigInt = (qn / BigInt::from(n * n)).sqrt();
    let m = BigInt::from(2) * (&m - &m / BigInt::from(q.p()));
    u64::try_from(m).map_err(|_| crate::Error::Domain("count exceeds 64 bits".into()))
}

/// The `ss_product` images of the ordinary vectors one dimension down: all
/// Weil, all pass the non-ordinary filter, pairwise distinct, and found among
/// the dimension-`n` vectors with `s | a_n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SupersingularImageReport {
    pub sources: u64,
    pub distinct_images: u64,
    pub all_weil: bool,
    pub all_pass_filter: bool,
    pub all_contained: bool,
    pub lambda_s_count: u64,
}

impl SupersingularImageReport {
    pub fn ok(&self) -> bool {
        self.sources == self.distinct_images && self.all_weil && self.all_pass_filter && self.all_contained
    }
}

pub fn check_supersingular_images(q: PrimePower, n: usize, config: &EnumerationConfig) -> Result<SupersingularImageReport> {
    if n < 2 {
        return domain("images live in dimension n >= 2");
    }
    let below = weil_points(q, n - 1, config)?;
    let target = weil_points(q, n, config)?;
    let mut images = std::collections::BTreeSet::new();
    let (mut sources, mut all_weil, mut all_filter, mut all_contained) = (0, true, true, true);
    for w in below.candidates().filter(|w| w.coprime_middle()) {
        sources += 1;
        let img = w.ss_product()?;
        all_weil &= img.is_weil();
        all_filter &= img.passes_nonordinary_filter();
        all_contained &= target.fibers.iter().any(|f| {
            f.prefix[..] == img.a()[..n - 1] && (f.lo..=f.hi).contains(&img.middle())
        });
        images.insert(img.a().to_vec());
    }
    Ok(SupersingularImageReport {
        sources,
        distinct_images: images.len() as u64,
        all_weil,
        all_pass_filter: all_filter,
        all_contained,
        lambda_s_count: target.count_divisible(q.s()),
    })
}

/// Deviation of `#O(q,n)` from its main term, relative to that term, next to
/// the error envelope relative to the same term.
#[derive(Debug, Clone)]
pub struct TrendPoint {
    pub q: u64,
    pub n: usize,
    pub ordinary_count: u64,
    pub main_term: Enclosure,
    /// `|#O / main - 1|`.
    pub deviation_ratio: Enclosure,
    /// `bound_rhs / main`.
    pub envelope_ratio: Enclosure,
    /// `deviation_ratio <= envelope_ratio`.
    pub within: Verdict,
}

pub fn trend_point(q: PrimePower, n: usize, config: &EnumerationConfig) -> Result<TrendPoint> {
    let report = verify_error_terms(q, n, config)?;
    let ratio = |bits: u32, rep: &CountReport| {
        let c = ConstantsTable::at_precision(bits);
        let nn = n as u64;
        let main = Enclosure::rational_power(q.q(), nn * (nn + 1), 4, bits)
            .scale(&(v_exact(n as u32).expect("n >= 1") * r_of(q.q()).expect("q >= 2")));
        let err = error_constant(n, &c.c1, &c.c2)
            .mul(&Enclosure::rational_power(q.q(), (nn + 2) * (nn - 1), 4, bits));
        let count = Enclosure::exact(BigRational::from_integer(rep.ordinary_count.into()));
        let dev = count.div(&main).sub(&Enclosure::from_int(1)).abs().rounded(bits);
        let env = err.div(&main).rounded(bits);
        (main, dev, env)
    };
    let within = certify(false, |bits| {
        let (_, d, e) = ratio(bits, &report);
        (d, e)
    });
    let (main_term, deviation_ratio, envelope_ratio) = ratio(64, &report);
    Ok(TrendPoint {
        q: q.q(),
        n,
        ordinary_count: report.ordinary_count,
        main_term,
        deviation_ratio,
        envelope_ratio,
        within,
    })
}

/// Integers `t` with `|t| <= 2 sqrt(q)` and `gcd(t, q) = 1`.
pub fn coprime_trace_count(q: u64) -> u64 {
    let b = BigInt::from(4 * q).sqrt();
    let b = u64::try_from(b).unwrap_or(0) as i64;
    (-b..=b)
        .filter(|t| (t.unsigned_abs()).gcd(&q) == 1)
        .count() as u64
}
