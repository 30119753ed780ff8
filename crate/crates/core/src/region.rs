//! The real region `V_n` of coefficient vectors `b` for which
//! `g_b = (x^2n + 1) + b_1 (x^(2n-1) + x) + ... + b_n x^n` has all roots on the
//! unit circle, and the maps `Psi`, `Chi`, `Phi = Chi o Psi` from the simplex
//! `I_n = { -2 <= x_1 <= ... <= x_n <= 2 }` onto it.
//!
//! Everything here is double precision and meant for sampling and property
//! checks. Exact decisions about integer points go through [`crate::weil`].

use nalgebra::DMatrix;

use crate::error::{domain, Result};

/// A finite vector of reals.
#[derive(Debug, Clone, PartialEq)]
pub struct RealVector(Vec<f64>);

impl RealVector {
    pub fn new(entries: Vec<f64>) -> Result<Self> {
        if entries.iter().any(|x| !x.is_finite()) {
            return domain("real vector entries must be finite");
        }
        Ok(RealVector(entries))
    }

    pub fn zeros(n: usize) -> Self {
        RealVector(vec![0.0; n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn sup_distance(&self, other: &Self) -> f64 {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    /// Membership in `I_n`: non-decreasing with entries in `[-2, 2]`.
    pub fn in_simplex(&self) -> bool {
        self.0.iter().all(|x| (-2.0..=2.0).contains(x)) && self.0.windows(2).all(|w| w[0] <= w[1])
    }
}

impl From<RealVector> for Vec<f64> {
    fn from(v: RealVector) -> Self {
        v.0
    }
}

fn binom_f64(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    (0..k.min(n - k)).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// `c_i = (-1)^i e_i(r)`: the coefficients of `(x - r_1)...(x - r_n)`.
pub fn psi(r: &RealVector) -> RealVector {
    let n = r.len();
    // poly[k] is the coefficient of x^(n-k) in the running product
    let mut poly = vec![0.0; n + 1];
    poly[0] = 1.0;
    for (m, &root) in r.0.iter().enumerate() {
        for k in (1..=m + 1).rev() {
            poly[k] -= root * poly[k - 1];
        }
    }
    RealVector(poly[1..].to_vec())
}

/// The `b` with `x^n h_c(x + 1/x) = g_b`.
pub fn chi(c: &RealVector) -> RealVector {
    let n = c.len();
    let coeff = |k: usize| if k == 0 { 1.0 } else { c.0[k - 1] };
    let b = (1..=n)
        .map(|i| {
            (0..=i)
                .filter(|k| (i - k) % 2 == 0)
                .map(|k| coeff(k) * binom_f64(n - k, (i - k) / 2))
                .sum()
        })
        .collect();
    RealVector(b)
}

/// Inverse of [`chi`] by triangular back-substitution.
pub fn chi_inverse(b: &RealVector) -> RealVector {
    let n = b.len();
    let mut c = vec![0.0; n + 1];
    c[0] = 1.0;
    for i in 1..=n {
        let mut ci = b.0[i - 1];
        let mut k = i % 2;
        while k < i {
            ci -= c[k] * binom_f64(n - k, (i - k) / 2);
            k += 2;
        }
        c[i] = ci;
    }
    RealVector(c[1..].to_vec())
}

pub fn phi(r: &RealVector) -> RealVector {
    chi(&psi(r))
}

/// Boundary cover maps `I_(n-1) -> I_n`: prepend `-2` (i = 0), repeat
/// coordinate `i` (0 < i < n), or append `2` (i = n).
pub fn delta(i: usize, x: &RealVector) -> Result<RealVector> {
    if !x.in_simplex() {
        return domain("delta requires a point of the simplex I_(n-1)");
    }
    let n = x.len() + 1;
    let out = match i {
        0 => std::iter::once(-2.0).chain(x.0.iter().copied()).collect(),
        i if i < n => {
            let mut v = x.0.clone();
            v.insert(i, x.0[i - 1]);
            v
        }
        i if i == n => x.0.iter().copied().chain(std::iter::once(2.0)).collect(),
        _ => return domain(format!("delta index {i} exceeds n = {n}")),
    };
    Ok(RealVector(out))
}

/// `|b_n / 2| + sum_(i<n) |b_i| <= 1`, a simple subset of `V_n`.
pub fn in_diamond(b: &RealVector) -> bool {
    let Some((last, rest)) = b.0.split_last() else {
        return true;
    };
    (last / 2.0).abs() + rest.iter().map(|x| x.abs()).sum::<f64>() <= 1.0
}

/// The closed-form description of `V_2`.
pub fn in_v2_explicit(b: &RealVector) -> Result<bool> {
    let [b1, b2] = b.0[..] else {
        return domain("in_v2_explicit takes a vector of length 2");
    };
    Ok(b2 >= 2.0 * b1.abs() - 2.0 && b2 <= b1 * b1 / 4.0 + 2.0)
}

/// Power sums `p_1..p_n` of the roots of `h_c` from Newton's identities
/// `i c_i + sum_(j<i) c_j p_(i-j) = 0`, `c_0 = 1`.
pub fn newton_power_sums(c: &RealVector) -> RealVector {
    let n = c.len();
    let coeff = |k: usize| if k == 0 { 1.0 } else { c.0[k - 1] };
    let mut p = vec![0.0; n + 1];
    for i in 1..=n {
        let s: f64 = (1..i).map(|j| coeff(j) * p[i - j]).sum();
        p[i] = -(i as f64) * coeff(i) - s;
    }
    RealVector(p[1..].to_vec())
}

/// Outcome of the numerical membership test.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Membership {
    Inside,
    Outside,
    BoundaryAmbiguous,
}

pub const DEFAULT_TOLERANCE: f64 = 1e-9;

/// Roots of `y^n + c_1 y^(n-1) + ... + c_n` as companion-matrix eigenvalues.
pub fn trace_roots(c: &RealVector) -> Vec<(f64, f64)> {
    let n = c.len();
    if n == 0 {
        return Vec::new();
    }
    if n == 1 {
        return vec![(-c.0[0], 0.0)];
    }
    let mut m = DMatrix::<f64>::zeros(n, n);
    for j in 0..n {
        m[(0, j)] = -c.0[j];
    }
    for i in 1..n {
        m[(i, i - 1)] = 1.0;
    }
    m.complex_eigenvalues().iter().map(|z| (z.re, z.im)).collect()
}

/// Numerical membership of `b` in `V_n`.
///
/// `Inside` when every trace root is real (imaginary part at most `tol`),
/// lies in `(-2 + tol, 2 - tol)`, and consecutive roots are more than `tol`
/// apart. `Outside` when some root is off the real axis or beyond `±2` by more
/// than `sqrt(tol)`; eigenvalues of nearly repeated roots scatter on the order
/// of the square root of the working precision, so smaller violations are
/// reported as `BoundaryAmbiguous`.
pub fn in_region_numeric(b: &RealVector, tol: f64) -> Membership {
    let roots = trace_roots(&chi_inverse(b));
    let loose = tol.sqrt();
    if roots.iter().any(|&(re, im)| im.abs() > loose || re.abs() > 2.0 + loose) {
        return Membership::Outside;
    }
    let mut re: Vec<f64> = roots.iter().map(|z| z.0).collect();
    re.sort_by(f64::total_cmp);
    let real = roots.iter().all(|z| z.1.abs() <= tol);
    let interior = re.iter().all(|x| x.abs() < 2.0 - tol);
    let separated = re.windows(2).all(|w| w[1] - w[0] > tol);
    if real && interior && separated {
        Membership::Inside
    } else {
        Membership::BoundaryAmbiguous
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(x: &[f64]) -> RealVector {
        RealVector::new(x.to_vec()).unwrap()
    }

    fn close(a: &RealVector, b: &[f64]) -> bool {
        a.len() == b.len() && a.0.iter().zip(b).all(|(x, y)| (x - y).abs() < 1e-12)
    }

    #[test]
    fn rejects_nan() {
        assert!(RealVector::new(vec![f64::NAN]).is_err());
    }

    #[test]
    fn psi_examples() {
        assert!(close(&psi(&v(&[0.0, 0.0, 0.0])), &[0.0, 0.0, 0.0]));
        assert!(close(&psi(&v(&[0.5, -1.5])), &[1.0, -0.75]));
        assert!(close(&psi(&v(&[1.0, 2.0, 3.0])), &[-6.0, 11.0, -6.0]));
    }

    #[test]
    fn chi_examples() {
        assert!(close(&chi(&v(&[0.3, -0.7])), &[0.3, 1.3]));
        assert!(close(&chi(&v(&[0.0, 0.0])), &[0.0, 2.0]));
        assert!(close(&chi(&v(&[1.25])), &[1.25]));
        // x^3 (x + 1/x)^3 = x^6 + 3x^4 + 3x^2 + 1
        assert!(close(&chi(&v(&[0.0, 0.0, 0.0])), &[0.0, 3.0, 0.0]));
        let c = v(&[0.4, -1.1, 0.9, 2.0]);
        assert!(close(&chi_inverse(&chi(&c)), c.as_slice()));
    }

    #[test]
    fn phi_examples() {
        let (r1, r2) = (-0.5, 1.75);
        assert!(close(&phi(&v(&[r1, r2])), &[-r1 - r2, r1 * r2 + 2.0]));
        assert!(close(&phi(&v(&[2.0])), &[-2.0]));
        assert!(close(&phi(&v(&[0.0, 0.0])), &[0.0, 2.0]));
    }

    #[test]
    fn delta_cases() {
        let x = v(&[0.0, 1.0]);
        assert_eq!(delta(0, &x).unwrap(), v(&[-2.0, 0.0, 1.0]));
        assert_eq!(delta(1, &x).unwrap(), v(&[0.0, 0.0, 1.0]));
        assert_eq!(delta(2, &x).unwrap(), v(&[0.0, 1.0, 1.0]));
        assert_eq!(delta(3, &x).unwrap(), v(&[0.0, 1.0, 2.0]));
        assert!(delta(4, &x).is_err());
        assert!(delta(1, &v(&[1.0, 0.0])).is_err());
        assert!(delta(1, &v(&[0.0, 3.0])).is_err());
    }

    #[test]
    fn diamond_examples() {
        assert!(in_diamond(&v(&[0.0, 0.0, 0.0])));
        assert!(in_diamond(&v(&[1.0, 0.0, 0.0])));
        assert!(in_diamond(&v(&[0.0, 0.0, 2.0])));
        assert!(!in_diamond(&v(&[0.6, 0.0, 1.0])));
        // (x^3 + 1)^2 has coefficient vector (0, 0, 2)
        assert_ne!(in_region_numeric(&v(&[0.0, 0.0, 2.0]), 1e-6), Membership::Outside);
    }

    #[test]
    fn v2_examples() {
        assert!(in_v2_explicit(&v(&[0.0, 0.0])).unwrap());
        assert!(in_v2_explicit(&v(&[1.0, 2.0])).unwrap());
        assert!(!in_v2_explicit(&v(&[0.0, 3.0])).unwrap());
        assert!(in_v2_explicit(&v(&[1.0])).is_err());
    }

    #[test]
    fn power_sum_examples() {
        assert!(close(&newton_power_sums(&v(&[0.0, 0.0])), &[0.0, 0.0]));
        assert!(close(&newton_power_sums(&v(&[-3.0, 2.0])), &[3.0, 5.0]));
        assert!(close(&newton_power_sums(&v(&[-3.0, 3.0, -1.0])), &[3.0, 3.0, 3.0]));
    }

    #[test]
    fn numeric_membership_examples() {
        assert_eq!(in_region_numeric(&v(&[0.0, 0.0]), DEFAULT_TOLERANCE), Membership::Inside);
        assert_eq!(in_region_numeric(&v(&[0.0, 5.0]), DEFAULT_TOLERANCE), Membership::Outside);
        assert_eq!(in_region_numeric(&v(&[-2.0]), 1e-6), Membership::BoundaryAmbiguous);
        assert_eq!(in_region_numeric(&v(&[2.5]), 1e-6), Membership::Outside);
    }
}
