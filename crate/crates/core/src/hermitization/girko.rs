use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::measures::EmpiricalMeasure2D;

/// Smooth cutoff: 1 on `[−1, 1]`, 0 outside `(−2, 2)`, C^∞ in between.
pub fn cutoff(x: f64) -> f64 {
    let a = x.abs();
    if a <= 1.0 {
        return 1.0;
    }
    if a >= 2.0 {
        return 0.0;
    }
    let h = |t: f64| (-1.0 / t).exp();
    let (p, q) = (h(2.0 - a), h(a - 1.0));
    p / (p + q)
}

/// Closed form of `∫ Re(s + it − w)/|s + it − w|² e^{ius + ivt} dt`:
/// `π sgn(s − Re w) e^{−v|s − Re w|} e^{ius} e^{iv Im w}`. Only `v > 0` is
/// accepted; for `v < 0` the printed decay factor grows.
pub fn girko_kernel(w: Complex64, s: f64, u: f64, v: f64) -> Result<Complex64> {
    if !(v > 0.0) {
        return Err(Error::config(format!("girko_kernel requires v > 0, got {v}")));
    }
    let d = s - w.re;
    if d == 0.0 {
        return Err(Error::Singularity(format!("s = Re w = {s}")));
    }
    Ok(signed_kernel(w, s, u, v, d.signum()))
}

/// The kernel with the sign supplied, so panel endpoints sitting on
/// `Re w` take the one-sided limit from inside the panel.
fn signed_kernel(w: Complex64, s: f64, u: f64, v: f64, sign: f64) -> Complex64 {
    let phase = Complex64::new(0.0, u * s + v * w.im).exp();
    phase * (sign * PI * (-v * (s - w.re).abs()).exp())
}

/// Outer quadrature for [`girko_reconstruct`]: `s` is cut off by
/// `ψ(s/R²)`, integrated by the trapezoid rule at each step in `steps`
/// (coarse to fine) and Richardson-extrapolated between neighbours.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct QuadratureSpec {
    pub radius: f64,
    pub steps: Vec<f64>,
    /// Allowed change between the last two extrapolated values, relative
    /// to `max(1, |value|)`.
    pub tolerance: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            radius: 4.0,
            steps: vec![1.0 / 8.0, 1.0 / 16.0, 1.0 / 32.0],
            tolerance: 1e-4,
        }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.radius > 0.0) || !self.radius.is_finite() {
            return Err(Error::config(format!("quadrature radius must be positive, got {}", self.radius)));
        }
        if self.steps.len() < 3 {
            return Err(Error::config("quadrature needs at least three step levels"));
        }
        for w in self.steps.windows(2) {
            if !(w[1] > 0.0) || (w[0] - 2.0 * w[1]).abs() > 1e-12 * w[0] {
                return Err(Error::config(format!("quadrature steps must halve at each level, got {:?}", self.steps)));
            }
        }
        if !(self.tolerance > 0.0) {
            return Err(Error::config("quadrature tolerance must be positive"));
        }
        Ok(())
    }
}

/// Trapezoid rule for the `s`-integral of `ψ(s/R²)·(2/n)Σ_j kernel(λ_j, s)`.
/// Panels break at every `Re λ_j` inside the support, where the kernel
/// jumps.
fn trapezoid(atoms: &[Complex64], breaks: &[f64], r2: f64, u: f64, v: f64, h: f64) -> Complex64 {
    let weight = 2.0 / atoms.len() as f64;
    let mut total = Complex64::new(0.0, 0.0);
    for panel in breaks.windows(2) {
        let (a, b) = (panel[0], panel[1]);
        let mid = 0.5 * (a + b);
        let cells = ((b - a) / h).ceil().max(1.0) as usize;
        let dx = (b - a) / cells as f64;
        let f = |s: f64| -> Complex64 {
            let sum: Complex64 = atoms
                .iter()
                .map(|&w| signed_kernel(w, s, u, v, (mid - w.re).signum()))
                .sum();
            sum * (weight * cutoff(s / r2))
        };
        let mut acc = (f(a) + f(b)) * 0.5;
        for k in 1..cells {
            acc += f(a + k as f64 * dx);
        }
        total += acc * dx;
    }
    total
}

/// `(u² + v²)/(4πiu) ∫∫ g(s + it) e^{ius + ivt} dt ds` for the `g` transform
/// of `μ`, with the inner integral in closed form. Approximates the
/// characteristic function of `μ` at `(u, v)`.
pub fn girko_reconstruct(mu: &EmpiricalMeasure2D, u: f64, v: f64, spec: &QuadratureSpec) -> Result<Complex64> {
    spec.validate()?;
    if u == 0.0 || !u.is_finite() {
        return Err(Error::config(format!("girko_reconstruct requires non-zero finite u, got {u}")));
    }
    if !(v > 0.0) || !v.is_finite() {
        return Err(Error::config(format!("girko_reconstruct requires v > 0, got {v}")));
    }
    let r2 = spec.radius * spec.radius;
    let edge = 2.0 * r2;
    let mut breaks: Vec<f64> = mu.atoms().iter().map(|w| w.re).filter(|&x| x > -edge && x < edge).collect();
    breaks.push(-edge);
    breaks.push(edge);
    breaks.sort_by(f64::total_cmp);
    breaks.dedup();

    let prefactor = Complex64::new(u * u + v * v, 0.0) / Complex64::new(0.0, 4.0 * PI * u);
    let levels: Vec<Complex64> = spec
        .steps
        .iter()
        .map(|&h| prefactor * trapezoid(mu.atoms(), &breaks, r2, u, v, h))
        .collect();
    let extrapolated: Vec<Complex64> = levels.windows(2).map(|t| (4.0 * t[1] - t[0]) / 3.0).collect();
    let last = extrapolated[extrapolated.len() - 1];
    let change = (last - extrapolated[extrapolated.len() - 2]).norm();
    if change > spec.tolerance * last.norm().max(1.0) {
        return Err(Error::NumericalFailure {
            stage: "girko quadrature",
            detail: format!("extrapolated values changed by {change:e} between the last two levels"),
            partial: extrapolated,
        });
    }
    Ok(last)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::esd_eigen;
    use crate::numerics::ComplexMatrix;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn cutoff_shape() {
        assert_eq!(cutoff(0.0), 1.0);
        assert_eq!(cutoff(-1.0), 1.0);
        assert_eq!(cutoff(2.0), 0.0);
        assert_eq!(cutoff(-7.0), 0.0);
        assert!((cutoff(1.5) - 0.5).abs() < 1e-15);
        let xs: Vec<f64> = (0..=100).map(|k| 1.0 + k as f64 / 100.0).collect();
        for w in xs.windows(2) {
            assert!(cutoff(w[1]) <= cutoff(w[0]));
        }
    }

    #[test]
    fn kernel_direct_substitution() {
        let k = girko_kernel(c(0.0, 0.0), 1.0, 0.0, 1.0).unwrap();
        assert!((k - c(PI * (-1f64).exp(), 0.0)).norm() < 1e-15);
    }

    #[test]
    fn kernel_sign_structure() {
        let w = c(0.3, -0.7);
        let (u, v) = (1.3, 0.8);
        for d in [0.1, 1.0, 2.5] {
            let plus = girko_kernel(w, w.re + d, u, v).unwrap();
            let minus = girko_kernel(w, w.re - d, u, v).unwrap();
            assert!((plus.norm() - minus.norm()).abs() < 1e-14);
            // Stripping the e^{ius} phases leaves opposite signs.
            let p = plus * c(0.0, -u * (w.re + d)).exp();
            let m = minus * c(0.0, -u * (w.re - d)).exp();
            assert!((p + m).norm() < 1e-14);
        }
    }

    #[test]
    fn kernel_preconditions() {
        assert!(matches!(girko_kernel(c(1.0, 0.0), 1.0, 1.0, 1.0), Err(Error::Singularity(_))));
        assert!(matches!(girko_kernel(c(1.0, 0.0), 2.0, 1.0, 0.0), Err(Error::Config(_))));
        assert!(matches!(girko_kernel(c(1.0, 0.0), 2.0, 1.0, -1.0), Err(Error::Config(_))));
    }

    /// Adaptive Simpson on a complex integrand.
    fn adaptive(f: &dyn Fn(f64) -> Complex64, a: f64, b: f64, tol: f64) -> Complex64 {
        fn rec(f: &dyn Fn(f64) -> Complex64, a: f64, b: f64, fa: Complex64, fm: Complex64, fb: Complex64, whole: Complex64, tol: f64, depth: u32) -> Complex64 {
            let m = 0.5 * (a + b);
            let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
            let (flm, frm) = (f(lm), f(rm));
            let left = (fa + 4.0 * flm + fm) * ((m - a) / 6.0);
            let right = (fm + 4.0 * frm + fb) * ((b - m) / 6.0);
            let diff = left + right - whole;
            if depth == 0 || diff.norm() <= 15.0 * tol {
                return left + right + diff / 15.0;
            }
            rec(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) + rec(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
        }
        let (fa, fb, fm) = (f(a), f(b), f(0.5 * (a + b)));
        let whole = (fa + 4.0 * fm + fb) * ((b - a) / 6.0);
        rec(f, a, b, fa, fm, fb, whole, tol, 50)
    }

    #[test]
    fn kernel_matches_t_quadrature() {
        let (w, s, u, v) = (c(1.0, 1.0), 2.0, 1.0, 1.0);
        let f = |t: f64| {
            let d = c(s, t) - w;
            c(0.0, u * s + v * t).exp() * (d.re / d.norm_sqr())
        };
        let numeric = adaptive(&f, -50.0, 50.0, 1e-9);
        let closed = girko_kernel(w, s, u, v).unwrap();
        assert!((numeric - closed).norm() < 1e-3, "{numeric} vs {closed}");
    }

    #[test]
    fn reconstructs_single_atoms() {
        let spec = QuadratureSpec::default();
        let d0 = EmpiricalMeasure2D::dirac(c(0.0, 0.0));
        let r = girko_reconstruct(&d0, 1.0, 1.0, &spec).unwrap();
        assert!((r - c(1.0, 0.0)).norm() < 1e-3, "{r}");
        let d = EmpiricalMeasure2D::dirac(c(1.0, 1.0));
        let r = girko_reconstruct(&d, 1.0, 2.0, &spec).unwrap();
        assert!((r - c(0.0, 3.0).exp()).norm() < 1e-3, "{r}");
    }

    #[test]
    fn reconstructs_a_small_matrix_esd() {
        let a = ComplexMatrix::from_real_rows(&[
            &[1.0, 2.0, 0.0, -1.0],
            &[0.5, -1.0, 1.0, 0.0],
            &[0.0, 1.5, 0.5, 2.0],
            &[-2.0, 0.0, 1.0, 1.0],
        ])
        .unwrap();
        let mu = esd_eigen(&a).unwrap();
        let r = girko_reconstruct(&mu, 1.0, 1.0, &QuadratureSpec::default()).unwrap();
        let want = mu.characteristic_function(1.0, 1.0);
        assert!((r - want).norm() < 1e-3, "{r} vs {want}");
    }

    #[test]
    fn preconditions_and_failure() {
        let d0 = EmpiricalMeasure2D::dirac(c(0.0, 0.0));
        let spec = QuadratureSpec::default();
        assert!(matches!(girko_reconstruct(&d0, 0.0, 1.0, &spec), Err(Error::Config(_))));
        assert!(matches!(girko_reconstruct(&d0, 1.0, 0.0, &spec), Err(Error::Config(_))));
        assert!(matches!(girko_reconstruct(&d0, 1.0, -1.0, &spec), Err(Error::Config(_))));
        let coarse = QuadratureSpec {
            radius: 4.0,
            steps: vec![8.0, 4.0, 2.0],
            tolerance: 1e-6,
        };
        assert!(matches!(girko_reconstruct(&d0, 3.0, 1.0, &coarse), Err(Error::NumericalFailure { .. })));
        let bad = QuadratureSpec {
            steps: vec![0.1, 0.07, 0.03],
            ..QuadratureSpec::default()
        };
        assert!(bad.validate().is_err());
    }
}
