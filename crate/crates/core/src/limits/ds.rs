//! Fixed points of the Dozier–Silverstein equation
//!
//! `m = Σ_k h_k / ( t_k/(1 + c·m) − (1 + c·m)·w + (1 − c) )`
//!
//! for a discrete `H = Σ h_k δ_{t_k}`, and recovery of densities by
//! Stieltjes inversion.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{Error, Result};

/// A discrete probability measure on `[0, ∞)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawMeasureH")]
pub struct MeasureH {
    atoms: Vec<f64>,
    weights: Vec<f64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawMeasureH {
    atoms: Vec<f64>,
    weights: Vec<f64>,
}

impl TryFrom<RawMeasureH> for MeasureH {
    type Error = Error;

    fn try_from(raw: RawMeasureH) -> Result<Self> {
        MeasureH::new(raw.atoms, raw.weights)
    }
}

impl MeasureH {
    pub fn new(atoms: Vec<f64>, weights: Vec<f64>) -> Result<Self> {
        if atoms.is_empty() || atoms.len() != weights.len() {
            return Err(Error::config(format!(
                "H needs matching non-empty atom and weight lists (got {} and {})",
                atoms.len(),
                weights.len()
            )));
        }
        if atoms.iter().any(|&t| !(t >= 0.0 && t.is_finite())) {
            return Err(Error::config("H atoms must be finite and non-negative"));
        }
        if weights.iter().any(|&h| !(h >= 0.0 && h.is_finite())) {
            return Err(Error::config("H weights must be finite and non-negative"));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::config(format!("H weights must sum to 1, got {total}")));
        }
        Ok(Self { atoms, weights })
    }

    pub fn dirac(t: f64) -> Result<Self> {
        Self::new(vec![t], vec![1.0])
    }

    /// Equal weights on the given values (e.g. squared singular values).
    pub fn uniform(atoms: Vec<f64>) -> Result<Self> {
        let n = atoms.len();
        let w = vec![1.0 / n as f64; n];
        // Equal weights may miss 1 by a few ulps; renormalize the check.
        let total: f64 = w.iter().sum();
        let w = if (total - 1.0).abs() > 1e-12 { w.iter().map(|x| x / total).collect() } else { w };
        Self::new(atoms, w)
    }

    pub fn atoms(&self) -> &[f64] {
        &self.atoms
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SolverOptions {
    /// Initial damping `α` in `m ← (1 − α)m + α·RHS(m)`.
    pub damping: f64,
    /// Stop when `|m − RHS(m)| < tolerance·max(1, |m|)`.
    pub tolerance: f64,
    pub max_iterations: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            damping: 0.5,
            tolerance: 1e-12,
            max_iterations: 10_000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DsFixedPoint {
    pub m: Complex64,
    pub residual: f64,
    pub iterations: usize,
}

/// `(H, c)` together with solver settings.
#[derive(Debug, Clone, PartialEq)]
pub struct DsProblem {
    pub h: MeasureH,
    pub c: f64,
    pub options: SolverOptions,
}

impl DsProblem {
    pub fn new(h: MeasureH, c: f64, options: SolverOptions) -> Result<Self> {
        if !(c > 0.0 && c.is_finite()) {
            return Err(Error::config(format!("c must be positive, got {c}")));
        }
        if !(options.damping > 0.0 && options.damping <= 1.0) {
            return Err(Error::config(format!("damping must lie in (0, 1], got {}", options.damping)));
        }
        if !(options.tolerance > 0.0) || options.max_iterations == 0 {
            return Err(Error::config("solver tolerance and iteration budget must be positive"));
        }
        Ok(Self { h, c, options })
    }

    /// Right-hand side and its derivative in `m`.
    fn rhs(&self, m: Complex64, w: Complex64) -> (Complex64, Complex64) {
        let c = self.c;
        let a = 1.0 + c * m;
        let mut r = Complex64::new(0.0, 0.0);
        let mut dr = Complex64::new(0.0, 0.0);
        for (&t, &h) in self.h.atoms.iter().zip(&self.h.weights) {
            let d = t / a - a * w + (1.0 - c);
            let dd = -c * t / (a * a) - c * w;
            r += h / d;
            dr -= h * dd / (d * d);
        }
        (r, dr)
    }

    fn residual(&self, m: Complex64, w: Complex64) -> f64 {
        (m - self.rhs(m, w).0).norm()
    }

    /// Solves from the canonical start `m₀ = i`. If that start fails, walks
    /// `Im w` geometrically down from `max(1, |w|)` with warm starts, which
    /// keeps the iterate on the Stieltjes branch near the real axis.
    pub fn solve(&self, w: Complex64) -> Result<DsFixedPoint> {
        let first = self.solve_from(w, Complex64::new(0.0, 1.0));
        match first {
            Err(Error::SolverFailure { .. }) | Err(Error::Branch { .. }) => self.continuation(w).or(first),
            other => other,
        }
    }

    fn continuation(&self, w: Complex64) -> Result<DsFixedPoint> {
        let top = w.norm().max(1.0);
        let mut m = Complex64::new(0.0, 1.0);
        let mut iterations = 0;
        for k in 0..=CONTINUATION_STEPS {
            let eta = top * (w.im / top).powf(k as f64 / CONTINUATION_STEPS as f64);
            let p = self.solve_from(Complex64::new(w.re, eta), m)?;
            m = p.m;
            iterations += p.iterations;
            if k == CONTINUATION_STEPS {
                return Ok(DsFixedPoint { iterations, ..p });
            }
        }
        unreachable!()
    }

    /// Damped fixed-point iteration; each step also tries the Newton step
    /// and keeps whichever candidate has the smaller residual while staying
    /// in the upper half-plane.
    pub fn solve_from(&self, w: Complex64, m0: Complex64) -> Result<DsFixedPoint> {
        if !(w.im > 0.0) || !w.re.is_finite() || !w.im.is_finite() {
            return Err(Error::config(format!("w must lie in the open upper half-plane, got {w}")));
        }
        let opts = &self.options;
        let mut m = m0;
        let mut alpha = opts.damping;
        let mut last = f64::INFINITY;
        let mut rises = 0;
        for it in 0..opts.max_iterations {
            let (r, dr) = self.rhs(m, w);
            let res = (m - r).norm();
            if !res.is_finite() {
                return Err(Error::SolverFailure {
                    detail: format!("non-finite iterate at w = {w}"),
                    residual: res,
                });
            }
            if res < opts.tolerance * m.norm().max(1.0) {
                // A Stieltjes transform of a law on [0, ∞) has Im m > 0 and
                // Im(w m) ≥ 0; spurious roots near the axis violate the latter.
                if !(m.im > 0.0) || (w * m).im < -BRANCH_SLACK * (w * m).norm() {
                    return Err(Error::Branch { m });
                }
                return Ok(DsFixedPoint {
                    m,
                    residual: res,
                    iterations: it,
                });
            }
            if res > last {
                rises += 1;
                if rises >= 3 {
                    alpha *= 0.5;
                    rises = 0;
                }
            } else {
                rises = 0;
            }
            last = res;
            let damped = (1.0 - alpha) * m + alpha * r;
            let newton = m - (m - r) / (1.0 - dr);
            m = if newton.im > 0.0 && newton.re.is_finite() && self.residual(newton, w) < self.residual(damped, w) {
                newton
            } else {
                damped
            };
        }
        Err(Error::SolverFailure {
            detail: format!("no convergence at w = {w} within {} iterations", opts.max_iterations),
            residual: last,
        })
    }
}

/// `m(w)` for `H`, `c`, with the given initial damping and default budget.
pub fn solve_ds(h: &MeasureH, c: f64, w: Complex64, damping: f64) -> Result<Complex64> {
    let opts = SolverOptions {
        damping,
        ..SolverOptions::default()
    };
    Ok(DsProblem::new(h.clone(), c, opts)?.solve(w)?.m)
}

/// Closed-form `H = δ₀`, `c = 1` solution: the root of `w·m² + w·m + 1 = 0`
/// in the upper half-plane. Real `w` is treated as a limit from above.
pub fn mp_reference(w: Complex64) -> Complex64 {
    let roots = |w: Complex64| {
        let disc = (w * w - 4.0 * w).sqrt();
        // Pick the sign avoiding cancellation in −(b ± √disc)/2.
        let q = if (w.conj() * disc).re >= 0.0 { -(w + disc) / 2.0 } else { -(w - disc) / 2.0 };
        [q / w, 1.0 / q]
    };
    let [r1, r2] = roots(w);
    if w.im > 0.0 {
        return if r1.im >= r2.im { r1 } else { r2 };
    }
    let probe = w + Complex64::new(0.0, 1e-8 * w.norm().max(1.0));
    let [p1, p2] = roots(probe);
    let target = if p1.im >= p2.im { p1 } else { p2 };
    if (r1 - target).norm() <= (r2 - target).norm() {
        r1
    } else {
        r2
    }
}

/// `(1/2π)·√((4 − x)/x)` on `(0, 4]`, zero elsewhere.
pub fn mp_density(x: f64) -> f64 {
    if x > 0.0 && x <= 4.0 {
        ((4.0 - x) / x).sqrt() / (2.0 * PI)
    } else {
        0.0
    }
}

/// `(2/π)(φ + sin(2φ)/2)` with `φ = arcsin(√x/2)`.
pub fn mp_cdf(x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    if x >= 4.0 {
        return 1.0;
    }
    let phi = (x.sqrt() / 2.0).asin();
    (2.0 / PI) * (phi + (2.0 * phi).sin() / 2.0)
}

/// η-schedule used when none is given.
pub const DEFAULT_ETA_SCHEDULE: [f64; 4] = [1e-1, 1e-2, 1e-3, 1e-4];

/// Sup-norm agreement required between the last two η levels.
pub const INVERSION_TOLERANCE: f64 = 1e-3;

/// Relative slack allowed on `Im(w m) ≥ 0` at a converged iterate.
const BRANCH_SLACK: f64 = 1e-9;

/// Geometric steps in `Im w` used by the fallback continuation.
const CONTINUATION_STEPS: usize = 60;

/// Warm and cold starts disagreeing by more than this count as distinct
/// fixed points.
const DISTINCT_FIXED_POINTS: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub struct StieltjesSolution {
    /// Final η.
    pub eta: f64,
    pub schedule: Vec<f64>,
    pub x_grid: Vec<f64>,
    pub m_values: Vec<Complex64>,
    /// `(1/π)·Im m(x + iη)`.
    pub density: Vec<f64>,
    /// Sup-norm density change between the last two η levels, over the
    /// checked window.
    pub level_change: Option<f64>,
    /// Grid indices where a warm start from the neighboring point reached a
    /// different fixed point than the cold start.
    pub multiple_fixed_points: Vec<usize>,
}

impl StieltjesSolution {
    /// Trapezoid integral of the density over the grid.
    pub fn mass(&self) -> f64 {
        self.x_grid
            .windows(2)
            .zip(self.density.windows(2))
            .map(|(x, d)| 0.5 * (x[1] - x[0]) * (d[0] + d[1]))
            .sum()
    }
}

struct Level {
    m: Vec<Complex64>,
    density: Vec<f64>,
    flagged: Vec<usize>,
}

fn solve_level(problem: &DsProblem, x_grid: &[f64], eta: f64) -> Result<Level> {
    let cold: Vec<Complex64> = x_grid
        .par_iter()
        .map(|&x| problem.solve(Complex64::new(x, eta)).map(|p| p.m))
        .collect::<Result<_>>()?;
    let flagged: Vec<usize> = (1..x_grid.len())
        .into_par_iter()
        .filter(|&i| match problem.solve_from(Complex64::new(x_grid[i], eta), cold[i - 1]) {
            Ok(p) => (p.m - cold[i]).norm() > DISTINCT_FIXED_POINTS * cold[i].norm().max(1.0),
            Err(_) => false,
        })
        .collect();
    let density = cold.iter().map(|m| m.im / PI).collect();
    Ok(Level { m: cold, density, flagged })
}

/// Recovers the density behind `m` on `x_grid`, refining η along
/// `eta_schedule` and requiring the last two levels to agree everywhere on
/// the grid.
pub fn invert_stieltjes(problem: &DsProblem, x_grid: &[f64], eta_schedule: &[f64]) -> Result<StieltjesSolution> {
    invert_stieltjes_on(problem, x_grid, eta_schedule, (f64::NEG_INFINITY, f64::INFINITY))
}

/// As [`invert_stieltjes`], but the level agreement is only required at grid
/// points inside the closed interval `window`. Near a point where the
/// density diverges (e.g. `x = 0` for Marchenko–Pastur) no finite η
/// schedule converges in sup norm.
pub fn invert_stieltjes_on(
    problem: &DsProblem,
    x_grid: &[f64],
    eta_schedule: &[f64],
    window: (f64, f64),
) -> Result<StieltjesSolution> {
    if x_grid.is_empty() || x_grid.iter().any(|x| !x.is_finite()) {
        return Err(Error::config("x grid must be non-empty and finite"));
    }
    if eta_schedule.is_empty()
        || eta_schedule.windows(2).any(|p| !(p[1] < p[0]))
        || !(*eta_schedule.last().unwrap() >= 1e-6)
    {
        return Err(Error::config(format!(
            "η schedule must be strictly decreasing with final value ≥ 1e-6, got {eta_schedule:?}"
        )));
    }
    let mut previous: Option<Vec<f64>> = None;
    let mut level_change = None;
    let mut flagged = Vec::new();
    let mut last = None;
    for &eta in eta_schedule {
        let level = solve_level(problem, x_grid, eta)?;
        if let Some(prev) = &previous {
            let change = x_grid
                .iter()
                .zip(prev.iter().zip(&level.density))
                .filter(|(&x, _)| x >= window.0 && x <= window.1)
                .map(|(_, (a, b))| (a - b).abs())
                .fold(0.0, f64::max);
            level_change = Some(change);
        }
        flagged.extend(level.flagged.iter().copied());
        previous = Some(level.density.clone());
        last = Some(level);
    }
    flagged.sort_unstable();
    flagged.dedup();
    if let Some(change) = level_change {
        if !(change < INVERSION_TOLERANCE) {
            return Err(Error::SolverFailure {
                detail: format!(
                    "density changed by {change:e} between η = {:e} and η = {:e}",
                    eta_schedule[eta_schedule.len() - 2],
                    eta_schedule[eta_schedule.len() - 1]
                ),
                residual: change,
            });
        }
    }
    let last = last.expect("schedule is non-empty");
    Ok(StieltjesSolution {
        eta: *eta_schedule.last().unwrap(),
        schedule: eta_schedule.to_vec(),
        x_grid: x_grid.to_vec(),
        m_values: last.m,
        density: last.density,
        level_change,
        multiple_fixed_points: flagged,
    })
}

/// Reference log-potential from the singular-value route: with `ν_z` the
/// `H = δ_{|z|²}`, `c = 1` limit law of `(X/√n − z)(X/√n − z)*`, returns
/// `½∫ log x dν_z(x)`. Integrates in `u = √x` by the midpoint rule at
/// height `eta` above the axis.
pub fn ds_log_potential(z: Complex64, points: usize, eta: f64) -> Result<f64> {
    if points == 0 || !(eta > 0.0) {
        return Err(Error::config("ds_log_potential needs points ≥ 1 and η > 0"));
    }
    let problem = DsProblem::new(MeasureH::dirac(z.norm_sqr())?, 1.0, SolverOptions::default())?;
    let top = z.norm() + 2.5;
    let du = top / points as f64;
    let terms: Vec<f64> = (0..points)
        .into_par_iter()
        .map(|k| {
            let u = (k as f64 + 0.5) * du;
            let x = u * u;
            problem
                .solve(Complex64::new(x, eta))
                .map(|p| p.m.im / PI * x.ln() * 2.0 * u * du)
        })
        .collect::<Result<_>>()?;
    Ok(0.5 * terms.iter().sum::<f64>())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn mp() -> DsProblem {
        DsProblem::new(MeasureH::dirac(0.0).unwrap(), 1.0, SolverOptions::default()).unwrap()
    }

    #[test]
    fn golden_ratio_at_minus_one() {
        let target = (5f64.sqrt() - 1.0) / 2.0;
        let m = solve_ds(&MeasureH::dirac(0.0).unwrap(), 1.0, c(-1.0, 1e-9), 0.5).unwrap();
        assert!((m - target).norm() < 1e-6, "{m}");
        assert!((mp_reference(c(-1.0, 0.0)) - target).norm() < 1e-15);
    }

    #[test]
    fn half_at_two() {
        let m = solve_ds(&MeasureH::dirac(0.0).unwrap(), 1.0, c(2.0, 1e-6), 0.5).unwrap();
        assert!((m.im - 0.5).abs() < 1e-5, "{m}");
        assert!((mp_density(2.0) - 1.0 / (2.0 * PI)).abs() < 1e-15);
    }

    #[test]
    fn small_c_limit_of_the_printed_equation() {
        // With c → 0 the right-hand side tends to 1/(t₀ − w + 1).
        let t0 = 2.0;
        let w = c(0.5, 0.3);
        let m = solve_ds(&MeasureH::dirac(t0).unwrap(), 1e-9, w, 0.5).unwrap();
        assert!((m - 1.0 / (t0 - w + 1.0)).norm() < 1e-7, "{m}");
    }

    #[test]
    fn reference_satisfies_the_quadratic() {
        for w in [c(0.3, 1e-3), c(2.0, 0.5), c(-3.0, 1e-6), c(5.0, 2.0)] {
            let m = mp_reference(w);
            assert!((w * m * m + w * m + 1.0).norm() < 1e-12 * (1.0 + m.norm_sqr()));
            assert!(m.im > 0.0);
        }
    }

    #[test]
    fn solver_matches_reference_on_a_sweep() {
        let p = mp();
        for k in 0..50 {
            let w = c(0.05 + 0.1 * k as f64, 1e-3);
            let m = p.solve(w).unwrap();
            assert!((m.m - mp_reference(w)).norm() < 1e-8, "w = {w}");
            assert!(m.residual < 1e-10);
        }
    }

    #[test]
    fn remark_on_h_encoding() {
        let merged = MeasureH::new(vec![0.5, 2.0], vec![0.5, 0.5]).unwrap();
        let split = MeasureH::new(vec![0.5, 2.0, 0.5], vec![0.25, 0.5, 0.25]).unwrap();
        for w in [c(0.7, 0.01), c(3.0, 0.1), c(-1.0, 1.0)] {
            let a = solve_ds(&merged, 1.0, w, 0.5).unwrap();
            let b = solve_ds(&split, 1.0, w, 0.5).unwrap();
            assert!((a - b).norm() < 1e-12, "{a} vs {b}");
        }
    }

    #[test]
    fn branch_is_upper_half_plane() {
        let h = MeasureH::new(vec![0.0, 1.0, 4.0], vec![0.2, 0.5, 0.3]).unwrap();
        for k in 0..40 {
            let w = c(-1.0 + 0.3 * k as f64, 1e-3);
            assert!(solve_ds(&h, 1.0, w, 0.5).unwrap().im > 0.0);
        }
    }

    #[test]
    fn preconditions() {
        let h = MeasureH::dirac(0.0).unwrap();
        assert!(solve_ds(&h, 0.0, c(1.0, 1.0), 0.5).is_err());
        assert!(solve_ds(&h, 1.0, c(1.0, 0.0), 0.5).is_err());
        assert!(MeasureH::new(vec![1.0], vec![0.9]).is_err());
        assert!(MeasureH::new(vec![-1.0], vec![1.0]).is_err());
    }

    #[test]
    fn inversion_recovers_the_density() {
        let xs: Vec<f64> = (0..=380).map(|k| 0.1 + 0.01 * k as f64).collect();
        let s = invert_stieltjes(&mp(), &xs, &DEFAULT_ETA_SCHEDULE).unwrap();
        let err = xs.iter().zip(&s.density).map(|(&x, &d)| (d - mp_density(x)).abs()).fold(0.0, f64::max);
        assert!(err < 1e-2, "{err}");
        assert!(s.density.iter().all(|&d| d >= 0.0));
        assert!(s.multiple_fixed_points.is_empty());
    }

    #[test]
    fn inversion_mass() {
        let xs: Vec<f64> = (0..=1600).map(|k| k as f64 / 400.0).collect();
        let s = invert_stieltjes(&mp(), &xs, &[1e-4]).unwrap();
        assert!((s.mass() - 1.0).abs() < 0.02, "{}", s.mass());
    }

    #[test]
    fn coarse_schedule_is_rejected() {
        let xs = [0.1, 1.0, 2.0];
        assert!(matches!(invert_stieltjes(&mp(), &xs, &[1e-1, 1e-2]), Err(Error::SolverFailure { .. })));
        assert!(invert_stieltjes(&mp(), &xs, &[1e-2, 1e-1]).is_err());
        assert!(invert_stieltjes(&mp(), &xs, &[1e-7]).is_err());
    }

    #[test]
    fn cdf_matches_density() {
        let h = 1e-4;
        for x in [0.3, 1.0, 2.5, 3.7] {
            let d = (mp_cdf(x + h) - mp_cdf(x - h)) / (2.0 * h);
            assert!((d - mp_density(x)).abs() < 1e-6);
        }
        assert_eq!(mp_cdf(4.0), 1.0);
        assert_eq!(mp_cdf(0.0), 0.0);
    }

    #[test]
    fn singular_value_route_matches_circular_potential() {
        use crate::limits::circular_log_potential;
        for z in [c(0.0, 0.0), c(0.5, 0.0), c(0.5, 0.5), c(2.0, 0.0)] {
            let v = ds_log_potential(z, 20_000, 1e-7).unwrap();
            assert!((v - circular_log_potential(z)).abs() < 2e-3, "z = {z}: {v}");
        }
    }
}
