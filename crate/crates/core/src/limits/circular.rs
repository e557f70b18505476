use num_complex::Complex64;
use std::f64::consts::PI;

/// Density of the uniform law on the open unit disk.
pub fn circular_density(z: Complex64) -> f64 {
    if z.norm_sqr() < 1.0 {
        1.0 / PI
    } else {
        0.0
    }
}

/// `∫ log|w − z| dμ(w)` for the uniform law on the unit disk:
/// `(|z|² − 1)/2` inside, `log|z|` outside.
pub fn circular_log_potential(z: Complex64) -> f64 {
    let r2 = z.norm_sqr();
    if r2 < 1.0 {
        (r2 - 1.0) / 2.0
    } else {
        0.5 * r2.ln()
    }
}

/// `P(|λ| ≤ r) = min(r², 1)` under the circular law.
pub fn disk_radial_cdf(r: f64) -> f64 {
    (r * r).clamp(0.0, 1.0)
}

/// The circular law as a reference measure.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct CircularLaw;

impl CircularLaw {
    pub fn density(&self, z: Complex64) -> f64 {
        circular_density(z)
    }

    pub fn log_potential(&self, z: Complex64) -> f64 {
        circular_log_potential(z)
    }

    pub fn radial_cdf(&self, r: f64) -> f64 {
        disk_radial_cdf(r)
    }
}
