//! A spectral laboratory for non-Hermitian random matrices.
//!
//! The crate builds the iid-plus-deterministic ensembles `M + X`,
//! `M + K X L` and `M + C∘X`, computes their eigenvalue and singular-value
//! spectra with self-contained dense kernels, and checks the spectra against
//! reference limits: the uniform law on the unit disk, log-potentials via
//! hermitization, and Stieltjes-transform fixed points of the
//! Dozier–Silverstein equation.
//!
//! Module map:
//!
//! * [`rng`] – counter-based splittable random streams.
//! * [`ensembles`] – scalar distributions, base matrices, assembly.
//! * [`numerics`] – eigenvalues, singular values, row distances, log-determinants.
//! * [`measures`] – empirical spectral measures, transforms and distances.
//! * [`hermitization`] – log-determinant fields and the Girko identity.
//! * [`limits`] – circular law, Marchenko–Pastur, Dozier–Silverstein solver.
//! * [`harness`] – experiment configs, runners, CSV/SVG emission.

pub mod ensembles;
pub mod error;
pub mod harness;
pub mod hermitization;
pub mod limits;
pub mod measures;
pub mod numerics;
pub mod rng;

pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use numerics::matrix::ComplexMatrix;
pub use rng::RngStream;
