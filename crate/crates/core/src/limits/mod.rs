//! Reference limiting laws: the circular law, the Marchenko–Pastur law, and
//! fixed points of the Dozier–Silverstein equation.

mod circular;
mod ds;

pub use circular::{circular_density, circular_log_potential, disk_radial_cdf, CircularLaw};
pub use ds::{
    ds_log_potential, invert_stieltjes, invert_stieltjes_on, mp_cdf, mp_density, mp_reference, solve_ds, DsFixedPoint, DsProblem,
    MeasureH, SolverOptions, StieltjesSolution, DEFAULT_ETA_SCHEDULE, INVERSION_TOLERANCE,
};

use num_complex::Complex64;

use crate::error::Result;
use crate::measures::EmpiricalMeasure2D;

/// `∫|z − x|⁻² dμ(x) ≥ 1`.
pub fn support_criterion(mu: &EmpiricalMeasure2D, z: Complex64) -> Result<bool> {
    Ok(mu.inverse_square_moment(z)? >= 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn point_mass_gives_the_unit_disk() {
        let mu = EmpiricalMeasure2D::dirac(c(0.0, 0.0));
        assert!(support_criterion(&mu, c(0.5, 0.5)).unwrap());
        assert!(support_criterion(&mu, c(1.0, 0.0)).unwrap());
        assert!(!support_criterion(&mu, c(1.0, 0.01)).unwrap());
        assert!(!support_criterion(&mu, c(2.0, 0.0)).unwrap());
        assert!(matches!(support_criterion(&mu, c(0.0, 0.0)), Err(Error::Singularity(_))));
    }

    #[test]
    fn two_atoms() {
        let mu = EmpiricalMeasure2D::new(vec![c(0.0, 0.0), c(3.0, 0.0)]).unwrap();
        let v = mu.inverse_square_moment(c(1.5, 0.0)).unwrap();
        assert!((v - 1.0 / 2.25).abs() < 1e-15);
        assert!(!support_criterion(&mu, c(1.5, 0.0)).unwrap());
    }
}
