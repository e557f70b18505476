use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::{eigenvalues, singular_values, squared_singular_values, ComplexMatrix};

/// Atoms closer than this to an evaluation point count as collisions.
pub const ATOM_COLLISION: f64 = 1e-12;

/// `A/√n` for square `A`. Entries are divided rather than multiplied by a
/// reciprocal so `√n·c` maps back to `c` exactly.
pub fn normalized(a: &ComplexMatrix) -> Result<ComplexMatrix> {
    if !a.is_square() || a.rows() == 0 {
        return Err(Error::config(format!("expected a non-empty square matrix, got {}x{}", a.rows(), a.cols())));
    }
    let s = (a.rows() as f64).sqrt();
    Ok(ComplexMatrix::from_fn(a.rows(), a.cols(), |i, j| a[(i, j)] / s))
}

/// Uniform probability measure on finitely many points of ℂ.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalMeasure2D {
    atoms: Vec<Complex64>,
}

impl EmpiricalMeasure2D {
    pub fn new(atoms: Vec<Complex64>) -> Result<Self> {
        if atoms.is_empty() {
            return Err(Error::DegenerateInput("an empirical measure needs at least one atom".into()));
        }
        if atoms.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::DegenerateInput("empirical measure atoms must be finite".into()));
        }
        Ok(Self { atoms })
    }

    pub fn dirac(z: Complex64) -> Self {
        Self { atoms: vec![z] }
    }

    pub fn atoms(&self) -> &[Complex64] {
        &self.atoms
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    /// `∫f dμ`, summed in atom order.
    pub fn integrate(&self, mut f: impl FnMut(Complex64) -> f64) -> f64 {
        self.atoms.iter().map(|&z| f(z)).sum::<f64>() / self.atoms.len() as f64
    }

    /// `∫|z|² dμ`.
    pub fn second_moment(&self) -> f64 {
        self.integrate(|z| z.norm_sqr())
    }

    /// `∫ e^{i(u·Re λ + v·Im λ)} dμ(λ)`.
    pub fn characteristic_function(&self, u: f64, v: f64) -> Complex64 {
        let sum: Complex64 = self
            .atoms
            .iter()
            .map(|l| Complex64::from_polar(1.0, u * l.re + v * l.im))
            .sum();
        sum / self.atoms.len() as f64
    }

    fn check_clear(&self, z: Complex64) -> Result<()> {
        match self.atoms.iter().find(|&&l| (z - l).norm() < ATOM_COLLISION) {
            Some(l) => Err(Error::Singularity(format!("{z} coincides with the atom {l}"))),
            None => Ok(()),
        }
    }

    /// `g(z) = (2/n)·Re Σ (z − λ)/|z − λ|²`.
    pub fn stieltjes_g(&self, z: Complex64) -> Result<f64> {
        self.check_clear(z)?;
        let s: f64 = self.atoms.iter().map(|&l| (z - l).re / (z - l).norm_sqr()).sum();
        Ok(2.0 * s / self.atoms.len() as f64)
    }

    /// `∫ log|w − z| dμ(w)`.
    pub fn log_potential(&self, z: Complex64) -> Result<f64> {
        self.check_clear(z)?;
        Ok(self.integrate(|l| (z - l).norm().ln()))
    }

    /// `∫ |z − x|⁻² dμ(x)`.
    pub fn inverse_square_moment(&self, z: Complex64) -> Result<f64> {
        self.check_clear(z)?;
        Ok(self.integrate(|l| 1.0 / (z - l).norm_sqr()))
    }
}

/// Uniform probability measure on finitely many reals, stored sorted.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalMeasure1D {
    atoms: Vec<f64>,
}

impl EmpiricalMeasure1D {
    pub fn new(mut atoms: Vec<f64>) -> Result<Self> {
        if atoms.is_empty() {
            return Err(Error::DegenerateInput("an empirical measure needs at least one atom".into()));
        }
        if atoms.iter().any(|x| !x.is_finite()) {
            return Err(Error::DegenerateInput("empirical measure atoms must be finite".into()));
        }
        atoms.sort_by(f64::total_cmp);
        Ok(Self { atoms })
    }

    /// Sorted ascending.
    pub fn atoms(&self) -> &[f64] {
        &self.atoms
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn is_nonnegative(&self) -> bool {
        self.atoms[0] >= 0.0
    }

    pub fn mean(&self) -> f64 {
        self.atoms.iter().sum::<f64>() / self.atoms.len() as f64
    }

    pub fn second_moment(&self) -> f64 {
        self.atoms.iter().map(|x| x * x).sum::<f64>() / self.atoms.len() as f64
    }

    /// `μ((−∞, x])`.
    pub fn cdf(&self, x: f64) -> f64 {
        self.atoms.partition_point(|&a| a <= x) as f64 / self.atoms.len() as f64
    }

    /// `∫ log x dμ`, or `None` when an atom is zero.
    pub fn mean_log(&self) -> Option<f64> {
        if self.atoms[0] <= 0.0 {
            return None;
        }
        Some(self.atoms.iter().map(|x| x.ln()).sum::<f64>() / self.atoms.len() as f64)
    }
}

/// Eigenvalue ESD of `A/√n`.
pub fn esd_eigen(a: &ComplexMatrix) -> Result<EmpiricalMeasure2D> {
    EmpiricalMeasure2D::new(eigenvalues(&normalized(a)?)?.values)
}

/// ESD of `(A/√n − zI)(A/√n − zI)*`.
pub fn esd_gram(a: &ComplexMatrix, z: Complex64) -> Result<EmpiricalMeasure1D> {
    EmpiricalMeasure1D::new(squared_singular_values(&normalized(a)?.shifted(z))?)
}

/// ESD of the Hermitian dilation `[[0, A/√n], [(A/√n)*, 0]]`, i.e. the atoms
/// `±σ_i(A/√n)`.
pub fn dilation_esd(a: &ComplexMatrix) -> Result<EmpiricalMeasure1D> {
    let s = singular_values(&normalized(a)?)?.values;
    EmpiricalMeasure1D::new(s.iter().flat_map(|&x| [x, -x]).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn esd_of_scaled_identity() {
        for n in [1, 2, 7, 10] {
            let a = ComplexMatrix::identity(n).scaled_real((n as f64).sqrt());
            let mu = esd_eigen(&a).unwrap();
            assert!(mu.atoms().iter().all(|z| (z - c(1.0, 0.0)).norm() < 1e-14));
            let zero = esd_eigen(&ComplexMatrix::zeros(n, n)).unwrap();
            assert!(zero.atoms().iter().all(|z| z.norm() == 0.0));
        }
    }

    #[test]
    fn gram_examples() {
        let g = esd_gram(&ComplexMatrix::zeros(3, 3), c(1.0, 0.0)).unwrap();
        assert!(g.atoms().iter().all(|&x| x == 1.0));
        let a = ComplexMatrix::real_diagonal(&[2.0, 0.0]).scaled_real(2f64.sqrt());
        let g = esd_gram(&a, c(0.0, 0.0)).unwrap();
        assert!(g.atoms()[0].abs() < 1e-15 && (g.atoms()[1] - 4.0).abs() < 1e-14);
    }

    #[test]
    fn characteristic_function_examples() {
        let mu = EmpiricalMeasure2D::new(vec![c(1.0, 0.0), c(-1.0, 0.0)]).unwrap();
        assert_eq!(mu.characteristic_function(0.0, 0.0), c(1.0, 0.0));
        for t in [0.3, 1.0, 2.5] {
            assert!((mu.characteristic_function(t, 0.0) - c(t.cos(), 0.0)).norm() < 1e-15);
        }
        let one = EmpiricalMeasure2D::dirac(c(1.0, 0.0));
        assert!((one.characteristic_function(PI, 0.0) - c(-1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn g_examples_and_singularity() {
        let mu = EmpiricalMeasure2D::dirac(c(0.0, 0.0));
        assert_eq!(mu.stieltjes_g(c(2.0, 0.0)).unwrap(), 1.0);
        assert_eq!(mu.stieltjes_g(c(0.0, 1.0)).unwrap(), 0.0);
        assert!(matches!(mu.stieltjes_g(c(0.0, 0.0)), Err(Error::Singularity(_))));
        assert!(matches!(mu.log_potential(c(1e-13, 0.0)), Err(Error::Singularity(_))));
    }

    #[test]
    fn g_is_twice_the_real_derivative_of_the_potential() {
        let mu = EmpiricalMeasure2D::new(vec![c(0.3, -0.2), c(-0.7, 0.5), c(0.1, 0.9)]).unwrap();
        let h = 1e-5;
        for z in [c(0.5, 0.5), c(-1.2, 0.1), c(2.0, -1.0)] {
            let fd = (mu.log_potential(z + h).unwrap() - mu.log_potential(z - h).unwrap()) / (2.0 * h);
            assert!((fd - 0.5 * mu.stieltjes_g(z).unwrap()).abs() < 1e-4);
        }
    }

    #[test]
    fn potential_examples() {
        let e = std::f64::consts::E;
        assert!((EmpiricalMeasure2D::dirac(c(0.0, 0.0)).log_potential(c(e, 0.0)).unwrap() - 1.0).abs() < 1e-15);
        let pm = EmpiricalMeasure2D::new(vec![c(1.0, 0.0), c(-1.0, 0.0)]).unwrap();
        assert_eq!(pm.log_potential(c(0.0, 0.0)).unwrap(), 0.0);
    }

    #[test]
    fn moments() {
        assert_eq!(EmpiricalMeasure2D::dirac(c(1.0, 0.0)).second_moment(), 1.0);
        assert_eq!(EmpiricalMeasure2D::dirac(c(0.0, 0.0)).second_moment(), 0.0);
    }

    #[test]
    fn dilation_examples() {
        let d = dilation_esd(&ComplexMatrix::real_diagonal(&[3.0])).unwrap();
        assert_eq!(d.atoms(), &[-3.0, 3.0]);
        let z = dilation_esd(&ComplexMatrix::zeros(4, 4)).unwrap();
        assert!(z.atoms().iter().all(|&x| x == 0.0));
        assert_eq!(z.len(), 8);
    }

    #[test]
    fn cdf_is_right_continuous() {
        let m = EmpiricalMeasure1D::new(vec![1.0, 0.0, 1.0, 2.0]).unwrap();
        assert_eq!(m.cdf(-0.1), 0.0);
        assert_eq!(m.cdf(0.0), 0.25);
        assert_eq!(m.cdf(1.0), 0.75);
        assert_eq!(m.cdf(5.0), 1.0);
    }
}
