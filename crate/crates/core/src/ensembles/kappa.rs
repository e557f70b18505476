use num_complex::Complex64;
use serde::Serialize;

use super::distribution::ScalarDistribution;
use crate::error::{Error, Result};
use crate::rng::RngStream;

/// Monte Carlo check of `E Re(zα − w)²·1{|α| ≤ κ} ≥ Re(z)²/κ` at one `(z, w)`.
#[derive(Debug, Clone, Serialize)]
pub struct KappaRow {
    pub z: Complex64,
    pub w: Complex64,
    pub estimate: f64,
    pub std_error: f64,
    pub lower_bound: f64,
    /// `estimate − lower_bound`.
    pub margin: f64,
    /// The bound is zero, or the margin exceeds three standard errors.
    pub passed: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct KappaReport {
    pub kappa: f64,
    pub samples: usize,
    /// Estimate of `E|α|²`.
    pub second_moment: f64,
    pub second_moment_std_error: f64,
    pub rows: Vec<KappaRow>,
    pub worst_margin: f64,
}

impl KappaReport {
    /// The second moment is at most `κ` (within three standard errors) and
    /// every grid row passed.
    pub fn passed(&self) -> bool {
        self.second_moment <= self.kappa + 3.0 * self.second_moment_std_error && self.rows.iter().all(|r| r.passed)
    }
}

/// Mean and standard error of the mean.
fn mean_se(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (mut n, mut mean, mut m2) = (0.0, 0.0, 0.0);
    for v in values {
        n += 1.0;
        let d = v - mean;
        mean += d / n;
        m2 += d * (v - mean);
    }
    let var = if n > 1.0 { m2 / (n - 1.0) } else { 0.0 };
    (mean, (var / n).sqrt())
}

/// Evaluates the truncated second-moment condition on a finite `(z, w)` grid
/// using one shared sample of `samples` draws.
pub fn kappa_controlled_estimate(
    dist: &ScalarDistribution,
    kappa: f64,
    samples: usize,
    grid: &[(Complex64, Complex64)],
    rng: &mut RngStream,
) -> Result<KappaReport> {
    dist.validate()?;
    if !(kappa >= 1.0 && kappa.is_finite()) {
        return Err(Error::config(format!("kappa must be a finite value ≥ 1, got {kappa}")));
    }
    if samples < 10_000 {
        return Err(Error::config(format!("kappa estimate needs at least 10⁴ samples, got {samples}")));
    }
    let draws: Vec<Complex64> = (0..samples).map(|_| dist.draw(rng)).collect();
    let (second_moment, second_moment_std_error) = mean_se(draws.iter().map(|a| a.norm_sqr()));

    let rows: Vec<KappaRow> = grid
        .iter()
        .map(|&(z, w)| {
            let (estimate, std_error) = mean_se(draws.iter().map(|&a| {
                if a.norm() <= kappa {
                    (z * a - w).re.powi(2)
                } else {
                    0.0
                }
            }));
            let lower_bound = z.re * z.re / kappa;
            let margin = estimate - lower_bound;
            KappaRow {
                z,
                w,
                estimate,
                std_error,
                lower_bound,
                margin,
                passed: lower_bound == 0.0 || margin >= 3.0 * std_error,
            }
        })
        .collect();
    let worst_margin = rows.iter().map(|r| r.margin).fold(f64::INFINITY, f64::min);
    Ok(KappaReport {
        kappa,
        samples,
        second_moment,
        second_moment_std_error,
        rows,
        worst_margin,
    })
}

/// Every pair drawn from `{±1, ±i, 0}`.
pub fn unit_grid() -> Vec<(Complex64, Complex64)> {
    let pts = [
        Complex64::new(1.0, 0.0),
        Complex64::new(-1.0, 0.0),
        Complex64::new(0.0, 1.0),
        Complex64::new(0.0, -1.0),
        Complex64::new(0.0, 0.0),
    ];
    pts.iter().flat_map(|&z| pts.iter().map(move |&w| (z, w))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bernoulli_is_one_controlled() {
        let r = kappa_controlled_estimate(&ScalarDistribution::Bernoulli, 1.0, 20_000, &unit_grid(), &mut RngStream::new(1, 1))
            .unwrap();
        assert!(r.passed(), "{r:?}");
        // |α| = 1 always, so E|α|² is exact.
        assert_eq!(r.second_moment, 1.0);
    }

    #[test]
    fn zero_z_rows_have_zero_bound() {
        let r = kappa_controlled_estimate(
            &ScalarDistribution::UniformCentered,
            2.0,
            10_000,
            &[(Complex64::new(0.0, 0.0), Complex64::new(3.0, 1.0))],
            &mut RngStream::new(2, 2),
        )
        .unwrap();
        assert_eq!(r.rows[0].lower_bound, 0.0);
        assert!(r.rows[0].passed);
    }

    #[test]
    fn preconditions() {
        let d = ScalarDistribution::Bernoulli;
        assert!(kappa_controlled_estimate(&d, 0.5, 10_000, &[], &mut RngStream::new(0, 0)).is_err());
        assert!(kappa_controlled_estimate(&d, 1.0, 9_999, &[], &mut RngStream::new(0, 0)).is_err());
    }
}
