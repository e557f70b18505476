//! Kolmogorov–Smirnov statistics. Empirical CDFs are right-continuous; the
//! supremum is taken over the jump points of the sorted sample.

use num_complex::Complex64;
use std::f64::consts::PI;

use super::empirical::{EmpiricalMeasure1D, EmpiricalMeasure2D};

/// `sup_x |F_n(x) − F(x)|` for a sample sorted ascending.
pub fn ks_sorted(sorted: &[f64], cdf: impl Fn(f64) -> f64) -> f64 {
    let n = sorted.len() as f64;
    sorted
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            (((i + 1) as f64 / n) - f).max(f - i as f64 / n)
        })
        .fold(0.0, f64::max)
}

pub fn ks_one_sample(mu: &EmpiricalMeasure1D, cdf: impl Fn(f64) -> f64) -> f64 {
    ks_sorted(mu.atoms(), cdf)
}

/// `sup_x |F₁(x) − F₂(x)|` between two empirical measures.
pub fn ks_two_sample(a: &EmpiricalMeasure1D, b: &EmpiricalMeasure1D) -> f64 {
    let (x, y) = (a.atoms(), b.atoms());
    let (nx, ny) = (x.len() as f64, y.len() as f64);
    let (mut i, mut j) = (0, 0);
    let mut worst: f64 = 0.0;
    while i < x.len() || j < y.len() {
        let t = match (x.get(i), y.get(j)) {
            (Some(&p), Some(&q)) => p.min(q),
            (Some(&p), None) => p,
            (None, Some(&q)) => q,
            (None, None) => unreachable!(),
        };
        while i < x.len() && x[i] <= t {
            i += 1;
        }
        while j < y.len() && y[j] <= t {
            j += 1;
        }
        worst = worst.max((i as f64 / nx - j as f64 / ny).abs());
    }
    worst
}

/// Radial and angular KS statistics of `μ` about `center`: radii against
/// `radial_cdf`, arguments against the uniform law on `(−π, π]`.
pub fn radial_angular_ks(mu: &EmpiricalMeasure2D, radial_cdf: impl Fn(f64) -> f64, center: Complex64) -> (f64, f64) {
    let mut radii: Vec<f64> = mu.atoms().iter().map(|&z| (z - center).norm()).collect();
    let mut angles: Vec<f64> = mu.atoms().iter().map(|&z| (z - center).arg()).collect();
    radii.sort_by(f64::total_cmp);
    angles.sort_by(f64::total_cmp);
    let uniform = |t: f64| ((t + PI) / (2.0 * PI)).clamp(0.0, 1.0);
    (ks_sorted(&radii, radial_cdf), ks_sorted(&angles, uniform))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn disk(r: f64) -> f64 {
        (r * r).min(1.0)
    }

    #[test]
    fn quantile_curve_has_ks_at_most_one_over_n() {
        let n = 200;
        let atoms: Vec<Complex64> = (1..=n)
            .map(|j| {
                let t = j as f64 / n as f64;
                Complex64::from_polar(t.sqrt(), 2.0 * PI * t)
            })
            .collect();
        let mu = EmpiricalMeasure2D::new(atoms).unwrap();
        let (r, a) = radial_angular_ks(&mu, disk, Complex64::new(0.0, 0.0));
        assert!(r <= 1.0 / n as f64 + 1e-12, "{r}");
        assert!(a <= 1.0 / n as f64 + 1e-12, "{a}");
    }

    #[test]
    fn point_mass_at_center_is_maximally_far() {
        let mu = EmpiricalMeasure2D::dirac(Complex64::new(0.0, 0.0));
        assert_eq!(radial_angular_ks(&mu, disk, Complex64::new(0.0, 0.0)).0, 1.0);
    }

    #[test]
    fn two_sample_examples() {
        let a = EmpiricalMeasure1D::new(vec![0.0, 1.0, 2.0, 3.0]).unwrap();
        assert_eq!(ks_two_sample(&a, &a), 0.0);
        let b = EmpiricalMeasure1D::new(vec![10.0, 11.0]).unwrap();
        assert_eq!(ks_two_sample(&a, &b), 1.0);
        let c = EmpiricalMeasure1D::new(vec![0.5, 1.5, 2.5, 3.5]).unwrap();
        assert_eq!(ks_two_sample(&a, &c), 0.25);
        // Ties across samples are consumed together.
        let d = EmpiricalMeasure1D::new(vec![1.0, 1.0]).unwrap();
        let e = EmpiricalMeasure1D::new(vec![1.0]).unwrap();
        assert_eq!(ks_two_sample(&d, &e), 0.0);
    }
}
