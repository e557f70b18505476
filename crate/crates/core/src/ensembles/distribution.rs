use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::RngStream;

/// A zero-mean, unit-variance complex scalar law. Every kind is normalized
/// at construction, so the declared mean and variance are always 0 and 1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", try_from = "RawDistribution")]
pub enum ScalarDistribution {
    /// ±1 with probability 1/2 each.
    Bernoulli,
    RealGaussian,
    /// `(g₁ + i g₂)/√2`.
    ComplexGaussian,
    /// Uniform on `[−√3, √3]`.
    UniformCentered,
    /// Two real atoms: `√((1−p)/p)` with probability `p`, `−√(p/(1−p))` otherwise.
    TwoPointAsymmetric { p: f64 },
    /// Random sign times a Pareto(α) magnitude on `[1, ∞)`, rescaled to unit
    /// variance. Needs `α > 2`; moments of order `≥ α` are infinite.
    ParetoSymmetrized { alpha: f64 },
}

fn default_alpha() -> f64 {
    2.5
}

/// Parse-side mirror: every variant is a struct so unknown keys are rejected
/// even for parameterless kinds.
#[derive(Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
enum RawDistribution {
    Bernoulli {},
    RealGaussian {},
    ComplexGaussian {},
    UniformCentered {},
    TwoPointAsymmetric {
        p: f64,
    },
    ParetoSymmetrized {
        #[serde(default = "default_alpha")]
        alpha: f64,
    },
}

impl TryFrom<RawDistribution> for ScalarDistribution {
    type Error = Error;

    fn try_from(raw: RawDistribution) -> Result<Self> {
        let d = match raw {
            RawDistribution::Bernoulli {} => Self::Bernoulli,
            RawDistribution::RealGaussian {} => Self::RealGaussian,
            RawDistribution::ComplexGaussian {} => Self::ComplexGaussian,
            RawDistribution::UniformCentered {} => Self::UniformCentered,
            RawDistribution::TwoPointAsymmetric { p } => Self::TwoPointAsymmetric { p },
            RawDistribution::ParetoSymmetrized { alpha } => Self::ParetoSymmetrized { alpha },
        };
        d.validate()?;
        Ok(d)
    }
}

impl ScalarDistribution {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Bernoulli => "bernoulli",
            Self::RealGaussian => "real_gaussian",
            Self::ComplexGaussian => "complex_gaussian",
            Self::UniformCentered => "uniform_centered",
            Self::TwoPointAsymmetric { .. } => "two_point_asymmetric",
            Self::ParetoSymmetrized { .. } => "pareto_symmetrized",
        }
    }

    pub fn declared_mean(&self) -> Complex64 {
        Complex64::new(0.0, 0.0)
    }

    pub fn declared_variance(&self) -> f64 {
        1.0
    }

    /// True when every draw has zero imaginary part.
    pub fn is_real(&self) -> bool {
        !matches!(self, Self::ComplexGaussian)
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            Self::TwoPointAsymmetric { p } if !(p > 0.0 && p < 1.0) => {
                Err(Error::config(format!("two_point_asymmetric needs 0 < p < 1, got {p}")))
            }
            Self::ParetoSymmetrized { alpha } if !(alpha > 2.0 && alpha.is_finite()) => Err(Error::config(format!(
                "pareto_symmetrized needs a finite tail exponent > 2 for finite variance, got {alpha}"
            ))),
            _ => Ok(()),
        }
    }

    /// One draw; assumes [`validate`](Self::validate) passed.
    #[inline]
    pub(crate) fn draw(&self, rng: &mut RngStream) -> Complex64 {
        match *self {
            Self::Bernoulli => Complex64::new(rng.next_sign(), 0.0),
            Self::RealGaussian => Complex64::new(rng.next_gaussian_pair().0, 0.0),
            Self::ComplexGaussian => {
                let (a, b) = rng.next_gaussian_pair();
                Complex64::new(a, b) * std::f64::consts::FRAC_1_SQRT_2
            }
            Self::UniformCentered => Complex64::new(3f64.sqrt() * rng.next_signed_f64(), 0.0),
            Self::TwoPointAsymmetric { p } => {
                let x = if rng.next_f64() < p {
                    ((1.0 - p) / p).sqrt()
                } else {
                    -(p / (1.0 - p)).sqrt()
                };
                Complex64::new(x, 0.0)
            }
            Self::ParetoSymmetrized { alpha } => {
                let sign = rng.next_sign();
                let magnitude = rng.next_open_f64().powf(-1.0 / alpha);
                let second_moment = alpha / (alpha - 2.0);
                Complex64::new(sign * magnitude / second_moment.sqrt(), 0.0)
            }
        }
    }
}

/// Draws one value from `dist`.
pub fn sample_scalar(dist: &ScalarDistribution, rng: &mut RngStream) -> Result<Complex64> {
    dist.validate()?;
    Ok(dist.draw(rng))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn all_kinds() -> Vec<ScalarDistribution> {
        vec![
            ScalarDistribution::Bernoulli,
            ScalarDistribution::RealGaussian,
            ScalarDistribution::ComplexGaussian,
            ScalarDistribution::UniformCentered,
            ScalarDistribution::TwoPointAsymmetric { p: 0.2 },
            ScalarDistribution::ParetoSymmetrized { alpha: 2.5 },
        ]
    }

    #[test]
    fn bernoulli_is_plus_minus_one() {
        let mut rng = RngStream::new(11, 0);
        let (mut plus, n) = (0, 100_000);
        for _ in 0..n {
            let x = sample_scalar(&ScalarDistribution::Bernoulli, &mut rng).unwrap();
            assert!(x == Complex64::new(1.0, 0.0) || x == Complex64::new(-1.0, 0.0));
            if x.re > 0.0 {
                plus += 1;
            }
        }
        // Binomial(n, 1/2) within 5 standard deviations.
        let sd = (n as f64 * 0.25).sqrt();
        assert!((plus as f64 - n as f64 / 2.0).abs() < 5.0 * sd);
    }

    #[test]
    fn pareto_exponent_at_most_two_is_rejected() {
        for alpha in [2.0, 1.5, f64::NAN, f64::INFINITY] {
            let d = ScalarDistribution::ParetoSymmetrized { alpha };
            assert!(matches!(sample_scalar(&d, &mut RngStream::new(0, 0)), Err(Error::Config(_))));
        }
        let d = ScalarDistribution::TwoPointAsymmetric { p: 1.0 };
        assert!(d.validate().is_err());
    }

    #[test]
    fn same_stream_same_draws() {
        for d in all_kinds() {
            let mut a = RngStream::new(99, 4);
            let mut b = RngStream::new(99, 4);
            for _ in 0..100 {
                assert_eq!(d.draw(&mut a), d.draw(&mut b));
            }
        }
    }

    #[test]
    fn normalization_within_five_standard_errors() {
        // 10⁶ draws per kind. The standard error of the variance estimate
        // uses the empirical fourth moment, which is infinite for the
        // α = 2.5 Pareto law; there a looser absolute band is used.
        let n = 1_000_000;
        for (k, d) in all_kinds().into_iter().enumerate() {
            let mut rng = RngStream::new(2024, k as u64);
            let mut sum = Complex64::new(0.0, 0.0);
            let mut sum2 = 0.0;
            let mut sum4 = 0.0;
            for _ in 0..n {
                let x = d.draw(&mut rng);
                sum += x;
                let a = x.norm_sqr();
                sum2 += a;
                sum4 += a * a;
            }
            let nf = n as f64;
            let mean = sum / nf;
            let var = sum2 / nf - mean.norm_sqr();
            let se_mean = (var / nf).sqrt();
            assert!(mean.norm() < 5.0 * se_mean, "{}: mean {mean}", d.name());
            if let ScalarDistribution::ParetoSymmetrized { .. } = d {
                assert!((var - 1.0).abs() < 0.1, "{}: var {var}", d.name());
            } else {
                let se_var = ((sum4 / nf - (sum2 / nf).powi(2)) / nf).sqrt();
                // The centering term contributes |mean|², of order var/N.
                let tol = 5.0 * se_var + 25.0 * var / nf;
                assert!((var - 1.0).abs() < tol, "{}: var {var}", d.name());
            }
        }
    }

    #[test]
    fn complex_gaussian_statistics() {
        let mut rng = RngStream::new(5, 5);
        let n = 1_000_000;
        let d = ScalarDistribution::ComplexGaussian;
        let mut sum = Complex64::new(0.0, 0.0);
        let mut sum2 = 0.0;
        for _ in 0..n {
            let x = d.draw(&mut rng);
            sum += x;
            sum2 += x.norm_sqr();
        }
        let mean = sum / n as f64;
        let var = sum2 / n as f64 - mean.norm_sqr();
        assert!(mean.norm() < 0.005);
        assert!((var - 1.0).abs() < 0.01);
    }

    #[test]
    fn json_shape() {
        let d: ScalarDistribution = serde_json::from_str(r#"{"kind":"pareto_symmetrized","alpha":2.5}"#).unwrap();
        assert_eq!(d, ScalarDistribution::ParetoSymmetrized { alpha: 2.5 });
        assert!(serde_json::from_str::<ScalarDistribution>(r#"{"kind":"bernoulli","p":0.3}"#).is_err());
        assert!(serde_json::from_str::<ScalarDistribution>(r#"{"kind":"pareto_symmetrized","alpha":2}"#).is_err());
        let d: ScalarDistribution = serde_json::from_str(r#"{"kind":"pareto_symmetrized"}"#).unwrap();
        assert_eq!(d, ScalarDistribution::ParetoSymmetrized { alpha: 2.5 });
        let back = serde_json::to_string(&ScalarDistribution::Bernoulli).unwrap();
        assert_eq!(back, r#"{"kind":"bernoulli"}"#);
    }
}
