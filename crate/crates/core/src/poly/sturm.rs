use std::cmp::Ordering;

use num_bigint::Sign;

use super::surd::{eval_scaled, sign_of_sum};
use super::{IntPolynomial, SurdValue};
use crate::error::{domain, Error, Result};

/// A Sturm chain `p0 = p, p1 = p', p_{k+1} = -rem(p_{k-1}, p_k)`, each entry
/// scaled by a positive constant and stripped of its content.
#[derive(Debug, Clone)]
pub struct SturmChain {
    polys: Vec<IntPolynomial>,
}

impl SturmChain {
    pub fn new(p: &IntPolynomial) -> Self {
        let mut polys = Vec::new();
        if p.is_zero() {
            return SturmChain { polys };
        }
        polys.push(p.strip_content());
        let d = p.derivative();
        if d.is_zero() {
            return SturmChain { polys };
        }
        polys.push(d.strip_content());
        loop {
            let k = polys.len();
            let (r, steps) = polys[k - 2].pseudo_rem(&polys[k - 1]);
            if r.is_zero() {
                break;
            }
            // rem over Q equals r / lc^steps; keep only the sign of that factor
            let flip = steps % 2 == 1 && polys[k - 1].sign_of_leading() == Sign::Minus;
            let next = if flip { r } else { -&r };
            polys.push(next.strip_content());
        }
        SturmChain { polys }
    }

    pub fn polys(&self) -> &[IntPolynomial] {
        &self.polys
    }

    /// The last chain element: `gcd(p, p')` up to a nonzero scalar.
    pub fn last(&self) -> Option<&IntPolynomial> {
        self.polys.last()
    }

    /// True when `p` has no repeated roots.
    pub fn is_squarefree(&self) -> bool {
        self.polys.last().is_some_and(IntPolynomial::is_constant)
    }

    /// Sign of `p(x)` followed by the number of sign variations of the chain at `x`.
    pub fn signs_at(&self, x: &SurdValue) -> (Sign, usize) {
        let mut first = Sign::NoSign;
        let mut prev = Sign::NoSign;
        let mut changes = 0;
        for (i, p) in self.polys.iter().enumerate() {
            let (a, b) = eval_scaled(p, x);
            let s = sign_of_sum(&a, &b, x.q());
            if i == 0 {
                first = s;
            }
            if s == Sign::NoSign {
                continue;
            }
            if prev != Sign::NoSign && prev != s {
                changes += 1;
            }
            prev = s;
        }
        (first, changes)
    }

    /// Number of distinct real roots in the open interval `(lo, hi)`.
    /// Neither endpoint may be a root.
    pub fn count(&self, lo: &SurdValue, hi: &SurdValue) -> Result<usize> {
        if lo.cmp_exact(hi)? != Ordering::Less {
            return domain("sturm_count requires lo < hi");
        }
        let (s_lo, v_lo) = self.signs_at(lo);
        let (s_hi, v_hi) = self.signs_at(hi);
        if s_lo == Sign::NoSign || s_hi == Sign::NoSign {
            return Err(Error::Precondition(
                "interval endpoint is a root; deflate it first".into(),
            ));
        }
        Ok(v_lo - v_hi)
    }
}

/// Exact number of real roots of the square-free polynomial `p` in `(lo, hi)`.
pub fn sturm_count(p: &IntPolynomial, lo: &SurdValue, hi: &SurdValue) -> Result<usize> {
    if p.is_zero() {
        return domain("sturm_count of the zero polynomial");
    }
    let chain = SturmChain::new(p);
    if !chain.is_squarefree() {
        return Err(Error::Precondition(
            "sturm_count requires a square-free polynomial".into(),
        ));
    }
    chain.count(lo, hi)
}
