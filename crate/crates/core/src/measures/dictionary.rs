use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::empirical::EmpiricalMeasure2D;
use crate::error::{Error, Result};

/// Identifier of the member formula and grid convention below.
pub const DICTIONARY_VERSION: &str = "tri-bump/v1";

/// `(s/√2)·tri((x − cx)/s)·tri((y − cy)/s)` with `tri(t) = max(0, 1 − |t|)`.
/// The prefactor makes every member 1-Lipschitz with sup `s/√2 ≤ 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Bump {
    pub center: [f64; 2],
    pub scale: f64,
}

impl Bump {
    #[inline]
    pub fn eval(&self, z: Complex64) -> f64 {
        let tri = |t: f64| (1.0 - t.abs()).max(0.0);
        let s = self.scale;
        let fx = tri((z.re - self.center[0]) / s);
        if fx == 0.0 {
            return 0.0;
        }
        s * std::f64::consts::FRAC_1_SQRT_2 * fx * tri((z.im - self.center[1]) / s)
    }
}

/// Ordered family of bumps centered on `(sℤ)² ∩ [−extent, extent]²` for
/// each scale `s`, scales in the given order, centers row by row.
#[derive(Debug, Clone, PartialEq)]
pub struct TestFunctionDictionary {
    extent: f64,
    scales: Vec<f64>,
    members: Vec<Bump>,
}

impl TestFunctionDictionary {
    pub fn new(extent: f64, scales: &[f64]) -> Result<Self> {
        if !(extent > 0.0 && extent.is_finite()) {
            return Err(Error::config(format!("dictionary extent must be positive, got {extent}")));
        }
        if scales.is_empty() || scales.iter().any(|&s| !(s > 0.0 && s <= 2f64.sqrt() && s.is_finite())) {
            return Err(Error::config("dictionary scales must lie in (0, √2]"));
        }
        let mut members = Vec::new();
        for &s in scales {
            let k = (extent / s + 1e-9).floor() as i64;
            for iy in -k..=k {
                for ix in -k..=k {
                    members.push(Bump {
                        center: [ix as f64 * s, iy as f64 * s],
                        scale: s,
                    });
                }
            }
        }
        Ok(Self {
            extent,
            scales: scales.to_vec(),
            members,
        })
    }

    /// Extent 3 with scales 1, 1/2, 1/4: 843 members.
    pub fn standard() -> Self {
        Self::new(3.0, &[1.0, 0.5, 0.25]).expect("standard dictionary parameters are valid")
    }

    pub fn members(&self) -> &[Bump] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn extent(&self) -> f64 {
        self.extent
    }

    pub fn scales(&self) -> &[f64] {
        &self.scales
    }

    /// `∫f dμ` for every member, in dictionary order.
    pub fn integrals(&self, mu: &EmpiricalMeasure2D) -> Vec<f64> {
        let mut acc = vec![0.0; self.members.len()];
        for &z in mu.atoms() {
            for (a, f) in acc.iter_mut().zip(&self.members) {
                *a += f.eval(z);
            }
        }
        let n = mu.len() as f64;
        acc.iter_mut().for_each(|a| *a /= n);
        acc
    }
}

/// `max_f |∫f dμ₁ − ∫f dμ₂|` over the dictionary.
pub fn bl_distance(mu1: &EmpiricalMeasure2D, mu2: &EmpiricalMeasure2D, dict: &TestFunctionDictionary) -> f64 {
    let a = dict.integrals(mu1);
    let b = dict.integrals(mu2);
    a.iter().zip(&b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn standard_size() {
        assert_eq!(TestFunctionDictionary::standard().len(), 49 + 169 + 625);
    }

    #[test]
    fn members_are_bounded_and_lipschitz() {
        let dict = TestFunctionDictionary::standard();
        let pts: Vec<Complex64> = (0..400)
            .map(|k| {
                let t = k as f64 * 0.618_033_988_749_895;
                c(3.5 * (t.fract() * 2.0 - 1.0), 3.5 * ((t * 1.7).fract() * 2.0 - 1.0))
            })
            .collect();
        for f in dict.members().iter().step_by(7) {
            for w in pts.windows(2) {
                let (a, b) = (f.eval(w[0]), f.eval(w[1]));
                assert!(a.abs() <= 1.0);
                assert!((a - b).abs() <= (w[0] - w[1]).norm() + 1e-15);
            }
        }
    }

    #[test]
    fn distance_examples() {
        let dict = TestFunctionDictionary::standard();
        let d0 = EmpiricalMeasure2D::dirac(c(0.0, 0.0));
        assert_eq!(bl_distance(&d0, &d0, &dict), 0.0);
        let d1 = EmpiricalMeasure2D::dirac(c(0.1, 0.0));
        let d = bl_distance(&d0, &d1, &dict);
        assert!(d > 0.0 && d <= 0.1 + 1e-15);
        assert_eq!(d, bl_distance(&d1, &d0, &dict));
    }
}
