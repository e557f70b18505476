//! Small-n checks against independent oracles: the characteristic
//! polynomial for eigenvalues, the Gram matrix for singular values, and
//! property sweeps of the classical inequalities.

use esdlab::ensembles::{build_iid_matrix, ScalarDistribution};
use esdlab::numerics::lemmas::{determinant_identity, negative_second_moment_residual};
use esdlab::numerics::{eigenvalues, singular_values, verify_interlacing, verify_weyl};
use esdlab::{Complex64, ComplexMatrix, RngStream};

/// Coefficients of `det(tI − A)`, highest degree first, by Faddeev–LeVerrier.
fn char_poly(a: &ComplexMatrix) -> Vec<Complex64> {
    let n = a.rows();
    let mut coeffs = vec![Complex64::new(1.0, 0.0)];
    let mut m = ComplexMatrix::zeros(n, n);
    for k in 1..=n {
        // M_k = A·M_{k−1} + c_{k−1}·I, c_k = −tr(A·M_k)/k.
        let c_prev = coeffs[k - 1];
        m = a.matmul(&m).unwrap().add(&ComplexMatrix::identity(n).scaled(c_prev)).unwrap();
        let c = -a.matmul(&m).unwrap().trace() / k as f64;
        coeffs.push(c);
    }
    coeffs
}

fn horner(p: &[Complex64], z: Complex64) -> Complex64 {
    p.iter().fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
}

/// Roots of a monic polynomial by Durand–Kerner iteration.
fn roots(p: &[Complex64]) -> Vec<Complex64> {
    let n = p.len() - 1;
    let seed = Complex64::new(0.4, 0.9);
    let mut z: Vec<Complex64> = (0..n).map(|k| seed.powu(k as u32) * 3.0).collect();
    for _ in 0..5000 {
        let mut delta: f64 = 0.0;
        for i in 0..n {
            let denom = (0..n).filter(|&j| j != i).fold(Complex64::new(1.0, 0.0), |acc, j| acc * (z[i] - z[j]));
            let step = horner(p, z[i]) / denom;
            z[i] -= step;
            delta = delta.max(step.norm());
        }
        if delta < 1e-15 {
            break;
        }
    }
    z
}

/// Largest distance in an optimal-by-greedy matching of two multisets.
fn matching_error(a: &[Complex64], b: &[Complex64]) -> f64 {
    let mut pool = b.to_vec();
    let mut worst: f64 = 0.0;
    for &x in a {
        let (k, d) = pool
            .iter()
            .enumerate()
            .map(|(k, &y)| (k, (x - y).norm()))
            .min_by(|p, q| p.1.total_cmp(&q.1))
            .unwrap();
        pool.swap_remove(k);
        worst = worst.max(d);
    }
    worst
}

#[test]
fn eigenvalues_match_the_characteristic_polynomial() {
    for (n, dist, stream) in [
        (6, ScalarDistribution::RealGaussian, 1),
        (6, ScalarDistribution::ComplexGaussian, 2),
        (7, ScalarDistribution::UniformCentered, 3),
        (8, ScalarDistribution::ComplexGaussian, 4),
        (8, ScalarDistribution::RealGaussian, 5),
    ] {
        let a = build_iid_matrix(n, &dist, &mut RngStream::new(2024, stream)).unwrap();
        let ours = eigenvalues(&a).unwrap().values;
        let oracle = roots(&char_poly(&a));
        let err = matching_error(&ours, &oracle);
        assert!(err < 1e-6, "n = {n}, {}: {err}", dist.name());
    }
}

#[test]
fn singular_values_match_gram_eigenvalues() {
    for stream in 0..5 {
        let a = build_iid_matrix(7, &ScalarDistribution::ComplexGaussian, &mut RngStream::new(9, stream)).unwrap();
        let s = singular_values(&a).unwrap().values;
        let gram = a.matmul(&a.conj_transpose()).unwrap();
        let mut g: Vec<f64> = eigenvalues(&gram).unwrap().values.iter().map(|z| z.re).collect();
        g.sort_by(|x, y| y.total_cmp(x));
        for (x, y) in s.iter().zip(&g) {
            assert!((x * x - y).abs() < 1e-9 * g[0], "{x}² vs {y}");
        }
    }
}

#[test]
fn interlacing_sweep_has_no_violations() {
    for case in 0..200u64 {
        let a = build_iid_matrix(8, &ScalarDistribution::ComplexGaussian, &mut RngStream::new(11, case)).unwrap();
        for k in 1..=3 {
            let r = verify_interlacing(&a, k).unwrap();
            assert!(r.holds_within(1e-8), "case {case}, k = {k}: {}", r.worst_violation);
        }
    }
}

#[test]
fn weyl_sweep_has_no_violations() {
    for case in 0..200u64 {
        let a = build_iid_matrix(10, &ScalarDistribution::Bernoulli, &mut RngStream::new(12, case)).unwrap();
        let r = verify_weyl(&a).unwrap();
        assert!(r.holds(), "case {case}: {r:?}");
    }
}

#[test]
fn identities_on_random_inputs() {
    for case in 0..50u64 {
        let n = 2 + (case as usize % 20);
        let a = build_iid_matrix(n, &ScalarDistribution::RealGaussian, &mut RngStream::new(13, case)).unwrap();
        assert!(negative_second_moment_residual(&a).unwrap() < 1e-9, "case {case}");
        assert!(determinant_identity(&a).unwrap().max_relative_error < 1e-6, "case {case}");
    }
}
