use super::IntPolynomial;
use crate::error::{domain, Result};

/// Yun's square-free decomposition over the integers.
///
/// Returns `(factor, multiplicity)` pairs with multiplicities strictly
/// increasing. Each factor is primitive with positive leading coefficient, the
/// factors are pairwise coprime and square-free, and the product of
/// `factor^multiplicity` equals `p` up to a nonzero scalar. Constants give an
/// empty list.
pub fn squarefree_decompose(p: &IntPolynomial) -> Result<Vec<(IntPolynomial, u32)>> {
    if p.is_zero() {
        return domain("square-free decomposition of the zero polynomial");
    }
    let mut out = Vec::new();
    if p.is_constant() {
        return Ok(out);
    }
    let f = p.primitive_part();
    let df = f.derivative();
    let g = f.gcd(&df);
    let mut b = f.div_exact(&g).expect("gcd divides f");
    let mut c = df.div_exact(&g).expect("gcd divides f'");
    let mut d = &c - &b.derivative();
    let mut i = 1;
    while !b.is_constant() {
        let a = b.gcd(&d);
        if !a.is_constant() {
            out.push((a.clone(), i));
        }
        b = b.div_exact(&a).expect("Yun step divides b");
        c = d.div_exact(&a).expect("Yun step divides d");
        d = &c - &b.derivative();
        i += 1;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> IntPolynomial {
        IntPolynomial::from_i64s(c)
    }

    fn recombine(parts: &[(IntPolynomial, u32)]) -> IntPolynomial {
        parts
            .iter()
            .fold(IntPolynomial::one(), |acc, (f, m)| &acc * &f.pow(*m))
    }

    #[test]
    fn examples() {
        let f = &p(&[2, 1]) * &p(&[-1, 1]).pow(2);
        assert_eq!(
            squarefree_decompose(&f).unwrap(),
            vec![(p(&[2, 1]), 1), (p(&[-1, 1]), 2)]
        );
        assert_eq!(squarefree_decompose(&p(&[-1, 0, 1])).unwrap(), vec![(p(&[-1, 0, 1]), 1)]);
        let e = p(&[-16, 0, 1]);
        assert!(e.gcd(&e.derivative()).is_constant());
        assert_eq!(squarefree_decompose(&e).unwrap(), vec![(e.clone(), 1)]);
    }

    #[test]
    fn skipped_multiplicities_and_scalars() {
        // 6 (y-2)^3 (y^2+1)
        let f = (&p(&[-2, 1]).pow(3) * &p(&[1, 0, 1])).scale(&6.into());
        let parts = squarefree_decompose(&f).unwrap();
        assert_eq!(parts, vec![(p(&[1, 0, 1]), 1), (p(&[-2, 1]), 3)]);
        assert_eq!(recombine(&parts), f.primitive_part());
    }

    #[test]
    fn zero_and_constants() {
        assert!(squarefree_decompose(&IntPolynomial::zero()).is_err());
        assert!(squarefree_decompose(&p(&[5])).unwrap().is_empty());
    }
}
