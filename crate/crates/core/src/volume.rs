//! Volume of `V_n` and the simplex integral of Vandermonde-type determinants.
//!
//! `D_n(e)` is the integral of `det[x_j^(e_i - 1)]` over the simplex
//! `0 <= x_1 <= ... <= x_n <= 1`; `E_n(e)` is its closed form
//! `1/(e_1...e_n) * prod_(i<j) (e_j - e_i)/(e_j + e_i)`. With `e = (1..n)` the
//! determinant is the Vandermonde determinant and
//! `vol V_n = 4^(n(n+1)/2) E_n(1, .., n)`.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::arith::factorial;
use crate::error::{domain, Error, Result};

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn pow2(k: u64) -> BigRational {
    BigRational::from_integer(BigInt::one() << k)
}

/// `2^(n(n+1))/n! * prod_(1<=i<j<=n) (j - i)/(j + i)`.
pub fn volume_pairwise_product(n: u32) -> BigRational {
    let n = n as i64;
    let mut acc = pow2((n * (n + 1)) as u64) / BigRational::from_integer(factorial(n as u64));
    for j in 1..=n {
        for i in 1..j {
            acc *= rat(j - i, j + i);
        }
    }
    acc
}

/// `2^n/n! * prod_(j=1..n) (2j/(2j-1))^(n+1-j)`.
pub fn volume_power_product(n: u32) -> BigRational {
    let n = n as i64;
    let mut acc = pow2(n as u64) / BigRational::from_integer(factorial(n as u64));
    for j in 1..=n {
        let base = rat(2 * j, 2 * j - 1);
        for _ in 0..(n + 1 - j) {
            acc *= &base;
        }
    }
    acc
}

/// Exact volume `v_n` of `V_n`. Both product formulas are evaluated and must agree.
pub fn v_exact(n: u32) -> Result<BigRational> {
    if n == 0 {
        return domain("v_n is defined for n >= 1");
    }
    let a = volume_pairwise_product(n);
    let b = volume_power_product(n);
    if a != b {
        return Err(Error::Invariant(format!(
            "volume formulas disagree at n = {n}: {a} vs {b}"
        )));
    }
    Ok(a)
}

fn check_positive(e: &[BigRational]) -> Result<()> {
    if e.is_empty() {
        return domain("exponent vector must be nonempty");
    }
    if e.iter().any(|x| !x.is_positive()) {
        return domain("exponents must be positive");
    }
    Ok(())
}

fn has_repeats(e: &[BigRational]) -> bool {
    (0..e.len()).any(|i| (i + 1..e.len()).any(|j| e[i] == e[j]))
}

/// Closed form `E_n(e)`. A repeated exponent makes two rows of the integrand
/// equal, so the integral is zero; this returns 0 in that case.
pub fn e_closed(e: &[BigRational]) -> Result<BigRational> {
    check_positive(e)?;
    let mut acc = BigRational::one();
    for x in e {
        acc /= x;
    }
    for j in 0..e.len() {
        for i in 0..j {
            let num = &e[j] - &e[i];
            if num.is_zero() {
                return Ok(BigRational::zero());
            }
            acc *= num / (&e[j] + &e[i]);
        }
    }
    Ok(acc)
}

/// `D_n(e)` through the recursion
/// `D_n(e) = 1/(e_1 + .. + e_n) * sum_k (-1)^(n-k) D_(n-1)(e without e_k)`,
/// `D_1(e) = 1/e`, memoized on subsets of indices. Cost grows like `2^n`;
/// vectors longer than 20 are refused.
pub fn d_recursive(e: &[BigRational]) -> Result<BigRational> {
    check_positive(e)?;
    if e.len() > 20 {
        return domain("d_recursive supports at most 20 exponents");
    }
    let mut memo = HashMap::new();
    Ok(d_subset(e, (1u32 << e.len()) - 1, &mut memo))
}

fn d_subset(e: &[BigRational], mask: u32, memo: &mut HashMap<u32, BigRational>) -> BigRational {
    if let Some(v) = memo.get(&mask) {
        return v.clone();
    }
    let idx: Vec<usize> = (0..e.len()).filter(|i| mask & (1 << i) != 0).collect();
    let n = idx.len();
    let value = if n == 1 {
        e[idx[0]].recip()
    } else {
        let total: BigRational = idx.iter().map(|&i| &e[i]).sum();
        let mut sum = BigRational::zero();
        for (pos, &i) in idx.iter().enumerate() {
            let term = d_subset(e, mask & !(1 << i), memo);
            // position k = pos + 1, sign (-1)^(n - k)
            if (n - pos - 1) % 2 == 0 {
                sum += term;
            } else {
                sum -= term;
            }
        }
        sum / total
    };
    memo.insert(mask, value.clone());
    value
}

/// Checks `e_1 + .. + e_n = sum_k e_k prod_(i != k) (e_k + e_i)/(e_k - e_i)` exactly.
pub fn residue_identity_check(e: &[BigRational]) -> Result<bool> {
    check_positive(e)?;
    if has_repeats(e) {
        return domain("residue identity requires distinct values");
    }
    let lhs: BigRational = e.iter().sum();
    let mut rhs = BigRational::zero();
    for (k, ek) in e.iter().enumerate() {
        let mut term = ek.clone();
        for (i, ei) in e.iter().enumerate() {
            if i != k {
                term *= (ek + ei) / (ek - ei);
            }
        }
        rhs += term;
    }
    Ok(lhs == rhs)
}

/// A Monte Carlo estimate with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub estimate: f64,
    pub std_error: f64,
    pub samples: u64,
}

/// Number of independent substreams. Fixed so the estimate does not depend on
/// how many threads run them.
const MC_SHARDS: u64 = 64;

/// Monte Carlo estimate of `vol V_n` as the integral of the Vandermonde
/// determinant over `I_n`: sorted uniform points on `[-2, 2]` are sampled and
/// the determinant is averaged, times `vol I_n = 4^n/n!`. Deterministic in
/// `seed`.
pub fn mc_volume(n: u32, samples: u64, seed: u64) -> Result<McEstimate> {
    if n == 0 || samples == 0 {
        return domain("mc_volume needs n >= 1 and at least one sample");
    }
    let simplex_volume = 4f64.powi(n as i32) / (1..=n).map(f64::from).product::<f64>();
    let per = samples / MC_SHARDS;
    let extra = samples % MC_SHARDS;
    let shards: Vec<(f64, f64)> = (0..MC_SHARDS)
        .into_par_iter()
        .map(|k| {
            let count = per + u64::from(k < extra);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(k);
            let mut x = vec![0.0; n as usize];
            let (mut s1, mut s2) = (0.0, 0.0);
            for _ in 0..count {
                for xi in x.iter_mut() {
                    *xi = rng.gen_range(-2.0..2.0);
                }
                x.sort_by(f64::total_cmp);
                let mut det = 1.0;
                for j in 0..x.len() {
                    for i in 0..j {
                        det *= x[j] - x[i];
                    }
                }
                let val = det * simplex_volume;
                s1 += val;
                s2 += val * val;
            }
            (s1, s2)
        })
        .collect();
    let (s1, s2) = shards
        .iter()
        .fold((0.0, 0.0), |acc, s| (acc.0 + s.0, acc.1 + s.1));
    let m = samples as f64;
    let mean = s1 / m;
    let var = if samples > 1 {
        ((s2 / m - mean * mean) * m / (m - 1.0)).max(0.0)
    } else {
        0.0
    };
    Ok(McEstimate {
        estimate: mean,
        std_error: (var / m).sqrt(),
        samples,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rv(v: &[i64]) -> Vec<BigRational> {
        v.iter().map(|&x| rat(x, 1)).collect()
    }

    #[test]
    fn volume_examples() {
        assert_eq!(v_exact(1).unwrap(), rat(4, 1));
        assert_eq!(v_exact(2).unwrap(), rat(32, 3));
        assert_eq!(v_exact(3).unwrap(), rat(1024, 45));
        assert!(v_exact(0).is_err());
    }

    #[test]
    fn closed_form_examples() {
        assert_eq!(e_closed(&[rat(3, 7)]).unwrap(), rat(7, 3));
        assert_eq!(e_closed(&rv(&[1, 2])).unwrap(), rat(1, 6));
        assert_eq!(e_closed(&rv(&[1, 2, 3])).unwrap(), rat(1, 180));
        assert_eq!(e_closed(&rv(&[2, 2])).unwrap(), rat(0, 1));
        assert!(e_closed(&rv(&[1, 0])).is_err());
    }

    #[test]
    fn recursion_examples() {
        assert_eq!(d_recursive(&[rat(5, 2)]).unwrap(), rat(2, 5));
        assert_eq!(d_recursive(&rv(&[1, 2])).unwrap(), rat(1, 6));
        assert_eq!(d_recursive(&rv(&[1, 2, 3])).unwrap(), rat(1, 180));
        assert_eq!(d_recursive(&rv(&[3, 1, 3])).unwrap(), rat(0, 1));
    }

    #[test]
    fn residue_examples() {
        assert!(residue_identity_check(&rv(&[1, 2])).unwrap());
        assert!(residue_identity_check(&[rat(9, 4)]).unwrap());
        assert!(residue_identity_check(&rv(&[1, 2, 4])).unwrap());
        assert!(residue_identity_check(&rv(&[1, 1])).is_err());
    }

    #[test]
    fn volume_chain_through_closed_form() {
        for n in 1..=8u32 {
            let e: Vec<_> = (1..=n as i64).map(|i| rat(i, 1)).collect();
            let scale = pow2(u64::from(n * (n + 1)));
            assert_eq!(scale * e_closed(&e).unwrap(), v_exact(n).unwrap());
        }
    }

    #[test]
    fn mc_one_dimensional_is_exact() {
        let r = mc_volume(1, 1000, 3).unwrap();
        assert_eq!(r.estimate, 4.0);
        assert_eq!(r.std_error, 0.0);
    }

    #[test]
    fn mc_is_deterministic() {
        let a = mc_volume(3, 5000, 11).unwrap();
        let b = mc_volume(3, 5000, 11).unwrap();
        assert_eq!(a, b);
        let c = mc_volume(3, 5000, 12).unwrap();
        assert_ne!(a.estimate, c.estimate);
    }
}
