use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use proptest::prelude::*;

use weilcount::enclosure::Enclosure;
use weilcount::order::{admissible_interval, realize, verify_realization, OrderQuery};
use weilcount::weil::{trace_coefficients, WeilCandidate};

const QS: [u64; 9] = [2, 3, 4, 5, 7, 8, 9, 11, 13];

fn poly_mul(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// `sum_k c_k x^k (x^2 + q)^(n-k)`, which is `x^n H(x + q/x)`.
fn from_trace(q: u64, c: &[BigInt]) -> Vec<BigInt> {
    let n = c.len() - 1;
    let base = [BigInt::from(q), BigInt::zero(), BigInt::one()];
    let mut total = vec![BigInt::zero(); 2 * n + 1];
    for (k, ck) in c.iter().enumerate() {
        let mut term = vec![BigInt::zero(); k + 1];
        term[k] = ck.clone();
        for _ in 0..n - k {
            term = poly_mul(&term, &base);
        }
        for (i, t) in term.into_iter().enumerate() {
            total[i] += t;
        }
    }
    total
}

/// `n = 2` membership from the explicit inequalities.
fn explicit_dimension_two(q: i64, a1: i64, a2: i64) -> bool {
    let t = a2 + 2 * q;
    a1 * a1 <= 16 * q && 4 * a2 <= a1 * a1 + 8 * q && t >= 0 && 4 * a1 * a1 * q <= t * t
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn trace_polynomial_reconstructs_f(qi in 0usize..QS.len(), a in prop::collection::vec(-30i64..=30, 1..=5)) {
        let q = QS[qi];
        let w = WeilCandidate::new(q, a.clone()).unwrap();
        let c = trace_coefficients(q, a.len(), &a);
        let f = w.expand();
        let rebuilt = from_trace(q, &c);
        let expanded: Vec<BigInt> = (0..rebuilt.len()).map(|i| f.coeff(i)).collect();
        prop_assert_eq!(expanded, rebuilt);
    }

    #[test]
    fn dimension_two_membership(qi in 0usize..QS.len(), a1 in -20i64..=20, a2 in -60i64..=60) {
        let q = QS[qi];
        let w = WeilCandidate::new(q, vec![a1, a2]).unwrap();
        prop_assert_eq!(w.is_weil(), explicit_dimension_two(q as i64, a1, a2));
    }

    #[test]
    fn value_at_one_is_f_of_one(qi in 0usize..QS.len(), a in prop::collection::vec(-30i64..=30, 1..=5)) {
        let w = WeilCandidate::new(QS[qi], a).unwrap();
        let sum: BigInt = w.expand().coeffs().iter().sum();
        prop_assert_eq!(w.value_at_one(), sum);
    }

    #[test]
    fn supersingular_product(qi in 0usize..QS.len(), a1 in -8i64..=8, a2 in -30i64..=30) {
        let q = QS[qi];
        let w = WeilCandidate::new(q, vec![a1, a2]).unwrap();
        prop_assume!(w.is_weil());
        let s = w.ss_product().unwrap();
        prop_assert!(s.is_weil());
        prop_assert!(s.passes_nonordinary_filter());
        prop_assert!(!s.is_ordinary().unwrap());
        prop_assert_eq!(s.value_at_one(), w.value_at_one() * BigInt::from(q + 1));
    }

    #[test]
    fn ordinary_means_weil_and_coprime(qi in 0usize..QS.len(), a1 in -8i64..=8, a2 in -30i64..=30) {
        let q = QS[qi];
        let w = WeilCandidate::new(q, vec![a1, a2]).unwrap();
        if w.is_weil() {
            prop_assert_eq!(w.is_ordinary().unwrap(), a2.unsigned_abs().gcd(&q) == 1);
        } else {
            prop_assert!(w.is_ordinary().is_err());
        }
    }

    #[test]
    fn realized_orders_verify(qi in 0usize..QS.len(), n in 2usize..=4, t in 0.0f64..=1.0) {
        let q = QS[qi];
        let (lo, hi) = admissible_interval(q, n).unwrap();
        let m = lo + ((hi - lo) as f64 * t).round() as u64;
        let r = realize(&OrderQuery::new(q, n, m).unwrap()).unwrap();
        prop_assert!(verify_realization(&r.candidate, m));
        let (lo_out, hi_out) = (lo.saturating_sub(1), hi + 1);
        for outside in [lo_out, hi_out] {
            if outside > 0 {
                prop_assert!(realize(&OrderQuery::new(q, n, outside).unwrap()).is_err());
            }
        }
    }

    #[test]
    fn roots_enclose_float_roots(num in 1i64..=10_000, den in 1i64..=100, k in 2u32..=5) {
        let x = BigRational::new(num.into(), den.into());
        let e = Enclosure::root(&x, k, 96);
        let lo = e.lo().to_f64().unwrap();
        let hi = e.hi().to_f64().unwrap();
        let f = (num as f64 / den as f64).powf(1.0 / k as f64);
        prop_assert!(lo <= f * (1.0 + 1e-14) && f <= hi * (1.0 + 1e-14));
        prop_assert!(e.powi(k).contains(&x));
    }

    #[test]
    fn exp_and_ln_are_inverse(num in -400i64..=400) {
        let x = Enclosure::exact(BigRational::new(num.into(), 100.into()));
        let back = x.exp(128).ln(128);
        let target = x.lo().clone();
        prop_assert!(back.contains(&target));
        prop_assert!(back.width() < BigRational::new(BigInt::one(), BigInt::from(1u64 << 60)));
    }
}
