//! Rough timing of the dense kernels at desk scale.
use std::time::Instant;

use esdlab::numerics::{eigenvalues, squared_singular_values};
use esdlab::{Complex64, ComplexMatrix, RngStream};

fn main() {
    let n: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(1000);
    let mut rng = RngStream::new(1, 0);
    let a = ComplexMatrix::from_fn(n, n, |_, _| Complex64::new(rng.next_gaussian_pair().0, 0.0))
        .scaled_real(1.0 / (n as f64).sqrt());
    let t = Instant::now();
    let e = eigenvalues(&a).unwrap();
    let inside = e.values.iter().filter(|z| z.norm() <= 1.05).count();
    println!("real eig n={n}: {:?}, in-disk {inside}", t.elapsed());
    let t = Instant::now();
    let s = squared_singular_values(&a).unwrap();
    println!("real gram svd: {:?}, max {}", t.elapsed(), s[0]);
    let b = a.shifted(Complex64::new(0.5, 0.5));
    let t = Instant::now();
    let e = eigenvalues(&b).unwrap();
    println!("complex eig: {:?} ({} values)", t.elapsed(), e.len());
    let t = Instant::now();
    let s = squared_singular_values(&b).unwrap();
    println!("complex gram svd: {:?}, max {}", t.elapsed(), s[0]);
}
