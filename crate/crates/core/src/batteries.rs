//! Seeded randomized checks of the inequalities behind the counting bounds.
//!
//! Each battery draws its samples from a ChaCha stream keyed by the seed, so a
//! run is reproducible.

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::counts::{check_central_binomial_sum, check_psi_lipschitz_binomial};
use crate::lattice::{count_cubic_simplex, cubic_simplex_brute_force, diamond_brute_force, diamond_lower_bound, RectilinearLattice};
use crate::region::{chi, delta, in_diamond, in_region_numeric, phi, psi, Membership, RealVector, DEFAULT_TOLERANCE};

/// Result of one battery.
#[derive(Debug, Clone, PartialEq)]
pub struct BatteryOutcome {
    pub name: &'static str,
    pub trials: u64,
    pub violations: u64,
    /// Largest observed `lhs / rhs` for inequality batteries, else 0.
    pub worst_ratio: f64,
}

impl BatteryOutcome {
    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

fn rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

/// A sorted vector in `[-2, 2]^n`.
pub fn sample_simplex(r: &mut impl Rng, n: usize) -> RealVector {
    let mut x: Vec<f64> = (0..n).map(|_| r.gen_range(-2.0..=2.0)).collect();
    x.sort_by(f64::total_cmp);
    RealVector::new(x).expect("finite")
}

/// A point with `|b_n/2| + Σ_(i<n) |b_i| <= 1`.
pub fn sample_diamond(r: &mut impl Rng, n: usize) -> RealVector {
    // uniform on the simplex {t_i >= 0, Σ t_i <= 1} from sorted uniforms
    let mut cuts: Vec<f64> = (0..n).map(|_| r.gen::<f64>()).collect();
    cuts.sort_by(f64::total_cmp);
    let mut prev = 0.0;
    let mut b = Vec::with_capacity(n);
    for (i, &c) in cuts.iter().enumerate() {
        let t = c - prev;
        prev = c;
        let sign = if r.gen::<bool>() { 1.0 } else { -1.0 };
        b.push(if i == n - 1 { 2.0 * sign * t } else { sign * t });
    }
    RealVector::new(b).expect("finite")
}

fn within(lhs: f64, rhs: f64) -> bool {
    lhs <= rhs * (1.0 + 1e-12) + 1e-12
}

fn inequality_battery(
    name: &'static str,
    trials: u64,
    mut draw: impl FnMut(u64) -> (f64, f64),
) -> BatteryOutcome {
    let mut violations = 0;
    let mut worst: f64 = 0.0;
    for t in 0..trials {
        let (lhs, rhs) = draw(t);
        if !within(lhs, rhs) {
            violations += 1;
        }
        if rhs > 0.0 {
            worst = worst.max(lhs / rhs);
        }
    }
    BatteryOutcome {
        name,
        trials,
        violations,
        worst_ratio: worst,
    }
}

/// Diamond points are never classified `Outside` of `V_n`.
pub fn diamond_in_region(samples: u64, max_n: usize, seed: u64) -> BatteryOutcome {
    let mut r = rng(seed, 1);
    let mut violations = 0;
    for t in 0..samples {
        let n = 1 + (t as usize % max_n);
        let b = sample_diamond(&mut r, n);
        debug_assert!(in_diamond(&b));
        if in_region_numeric(&b, DEFAULT_TOLERANCE) == Membership::Outside {
            violations += 1;
        }
    }
    BatteryOutcome {
        name: "diamond-in-region",
        trials: samples,
        violations,
        worst_ratio: 0.0,
    }
}

/// `Φ(I_n)` is never classified `Outside` of `V_n`.
pub fn phi_in_region(samples: u64, max_n: usize, seed: u64) -> BatteryOutcome {
    let mut r = rng(seed, 2);
    let mut violations = 0;
    for t in 0..samples {
        let n = 1 + (t as usize % max_n);
        let x = sample_simplex(&mut r, n);
        if in_region_numeric(&phi(&x), DEFAULT_TOLERANCE) == Membership::Outside {
            violations += 1;
        }
    }
    BatteryOutcome {
        name: "phi-in-region",
        trials: samples,
        violations,
        worst_ratio: 0.0,
    }
}

/// `||Ψ(x) - Ψ(y)|| <= 3^(n-1) sqrt(n) ||x - y||` on `I_n`.
pub fn psi_lipschitz(pairs: u64, max_n: usize, seed: u64) -> BatteryOutcome {
    let mut r = rng(seed, 3);
    inequality_battery("psi-lipschitz", pairs, |t| {
        let n = 2 + (t as usize % (max_n - 1));
        let (x, y) = (sample_simplex(&mut r, n), sample_simplex(&mut r, n));
        let k = 3f64.powi(n as i32 - 1) * (n as f64).sqrt();
        (psi(&x).sup_distance(&psi(&y)), k * x.sup_distance(&y))
    })
}

/// `||Χ(x) - Χ(y)|| <= (3 sqrt(3) 2^(n-3) / sqrt(n)) ||x - y||` on `R^n`.
pub fn chi_lipschitz(pairs: u64, max_n: usize, seed: u64) -> BatteryOutcome {
    let mut r = rng(seed, 4);
    inequality_battery("chi-lipschitz", pairs, |t| {
        let n = 2 + (t as usize % (max_n - 1));
        let mut draw = || RealVector::new((0..n).map(|_| r.gen_range(-10.0..=10.0)).collect()).unwrap();
        let (x, y) = (draw(), draw());
        let k = 3.0 * 3f64.sqrt() * 2f64.powi(n as i32 - 3) / (n as f64).sqrt();
        (chi(&x).sup_distance(&chi(&y)), k * x.sup_distance(&y))
    })
}

/// `||Φ(Δ_i(x)) - Φ(Δ_i(y))|| <= (sqrt(3)/8) 6^n ||x - y||` on `I_(n-1)`.
pub fn composite_lipschitz(pairs: u64, max_n: usize, seed: u64) -> BatteryOutcome {
    let mut r = rng(seed, 5);
    inequality_battery("boundary-map-lipschitz", pairs, |t| {
        let n = 2 + (t as usize % (max_n - 1));
        let i = r.gen_range(0..=n);
        let (x, y) = (sample_simplex(&mut r, n - 1), sample_simplex(&mut r, n - 1));
        let fx = phi(&delta(i, &x).expect("x in I_(n-1)"));
        let fy = phi(&delta(i, &y).expect("y in I_(n-1)"));
        let k = 3f64.sqrt() / 8.0 * 6f64.powi(n as i32);
        (fx.sup_distance(&fy), k * x.sup_distance(&y))
    })
}

/// Both binomial inequalities for `1 <= n <= max_n`.
pub fn binomial_inequalities(max_n: u64) -> BatteryOutcome {
    let violations = (1..=max_n)
        .map(|n| u64::from(!check_psi_lipschitz_binomial(n)) + u64::from(!check_central_binomial_sum(n)))
        .sum();
    BatteryOutcome {
        name: "binomial-inequalities",
        trials: 2 * max_n,
        violations,
        worst_ratio: 0.0,
    }
}

/// Closed-form cubical count against brute force.
pub fn cubic_simplex_counts(max_m: u64, max_n: u64) -> BatteryOutcome {
    let mut violations = 0;
    for m in 1..=max_m {
        for n in 1..=max_n {
            let closed = count_cubic_simplex(m, n).expect("positive");
            if closed != BigInt::from(cubic_simplex_brute_force(m, n)) {
                violations += 1;
            }
        }
    }
    BatteryOutcome {
        name: "cubic-simplex",
        trials: max_m * max_n,
        violations,
        worst_ratio: 0.0,
    }
}

/// The diamond lower bound never exceeds the actual lattice-point count.
pub fn diamond_lower_bounds(samples: u64, max_n: usize, seed: u64) -> BatteryOutcome {
    let mut r = rng(seed, 6);
    inequality_battery("diamond-lower-bound", samples, |_| {
        let n = r.gen_range(1..=max_n);
        let steps = (0..n)
            .map(|_| BigRational::new(r.gen_range(1..=6).into(), r.gen_range(1..=2).into()))
            .collect();
        let lattice = RectilinearLattice::new(steps).expect("positive steps");
        let radius = BigRational::new(r.gen_range(1..=12).into(), 4.into());
        let bound = diamond_lower_bound(&lattice, &radius).expect("n <= 20");
        let actual = diamond_brute_force(&lattice, &radius) as f64;
        let bound = num_traits::ToPrimitive::to_f64(&bound).unwrap_or(f64::INFINITY);
        (bound, actual)
    })
}

/// Every battery with its default size.
pub fn all(samples: u64, seed: u64) -> Vec<BatteryOutcome> {
    vec![
        diamond_in_region(samples, 5, seed),
        phi_in_region(samples, 5, seed),
        psi_lipschitz(samples, 5, seed),
        chi_lipschitz(samples, 5, seed),
        composite_lipschitz(samples, 5, seed),
        binomial_inequalities(200),
        cubic_simplex_counts(6, 5),
        diamond_lower_bounds(samples.min(200), 6, seed),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn samplers_stay_in_their_sets() {
        let mut r = rng(7, 0);
        for n in 1..=5 {
            for _ in 0..100 {
                assert!(in_diamond(&sample_diamond(&mut r, n)));
                assert!(sample_simplex(&mut r, n).in_simplex());
            }
        }
    }

    #[test]
    fn small_batteries_pass() {
        for b in all(500, 3) {
            assert!(b.passed(), "{b:?}");
        }
    }

    #[test]
    fn reproducible() {
        assert_eq!(psi_lipschitz(200, 5, 9), psi_lipschitz(200, 5, 9));
    }
}
