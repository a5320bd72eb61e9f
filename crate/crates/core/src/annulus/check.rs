//! Dual-route check of the Dirichlet solvers on random trigonometric data.

use num_complex::Complex64;
use rand::Rng;
use serde::Serialize;
use std::f64::consts::PI;

use super::{dirichlet_series, AnnulusDomain, BoundaryData, VillatSolver};
use crate::error::Result;
use crate::mc::task_rng;

/// Real trigonometric polynomial `Σ_{k≤deg} a_k cos kθ + b_k sin kθ`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrigPolynomial {
    pub cos: Vec<f64>,
    pub sin: Vec<f64>,
}

impl TrigPolynomial {
    /// Coefficients uniform in `[−1, 1]`, constant term `mean`.
    pub fn random(rng: &mut impl Rng, degree: usize, mean: f64) -> Self {
        let mut cos: Vec<f64> = (0..=degree).map(|_| rng.random_range(-1.0..1.0)).collect();
        let mut sin: Vec<f64> = (0..=degree).map(|_| rng.random_range(-1.0..1.0)).collect();
        cos[0] = mean;
        sin[0] = 0.0;
        Self { cos, sin }
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.cos
            .iter()
            .zip(&self.sin)
            .enumerate()
            .map(|(k, (a, b))| a * (k as f64 * t).cos() + b * (k as f64 * t).sin())
            .sum()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DualRouteReport {
    pub q: f64,
    pub degree: usize,
    pub samples: usize,
    /// `max |Re Ω − series|` over the probe points.
    pub max_interior_diff: f64,
    /// `max |Re Ω − data|` on both circles at the sample angles.
    pub max_boundary_error: f64,
    pub probes: usize,
}

/// Random compatible data of the given degree, compared between the Villat
/// quadrature and the Laurent series on the circles `r = q^{1/4}, q^{1/2},
/// q^{3/4}` (16 angles each).
pub fn villat_dual_route(
    q: f64,
    degree: usize,
    samples: usize,
    seed: u64,
) -> Result<DualRouteReport> {
    let dom = AnnulusDomain::from_q(q)?;
    let mut rng = task_rng(seed, 0);
    let mean = rng.random_range(-1.0..1.0);
    let f = TrigPolynomial::random(&mut rng, degree, mean);
    let g = TrigPolynomial::random(&mut rng, degree, mean);
    let bd = BoundaryData::from_fns(samples, |t| f.eval(t), |t| g.eval(t))?;
    let omega = VillatSolver::new(bd.clone(), dom)?;
    let mut max_interior_diff = 0.0f64;
    let mut probes = 0;
    for r in [q.powf(0.25), q.sqrt(), q.powf(0.75)] {
        for j in 0..16 {
            let z = Complex64::from_polar(r, 2.0 * PI * j as f64 / 16.0 + 0.1);
            let diff = omega.evaluate(z)?.re - dirichlet_series(&bd, &dom, z)?;
            max_interior_diff = max_interior_diff.max(diff.abs());
            probes += 1;
        }
    }
    let mut max_boundary_error = 0.0f64;
    for j in (0..samples).step_by((samples / 64).max(1)) {
        let t = 2.0 * PI * j as f64 / samples as f64;
        let outer = omega.evaluate(Complex64::from_polar(1.0, t))?.re - f.eval(t);
        let inner = omega.evaluate(Complex64::from_polar(q, t))?.re - g.eval(t);
        max_boundary_error = max_boundary_error.max(outer.abs()).max(inner.abs());
    }
    Ok(DualRouteReport {
        q,
        degree,
        samples,
        max_interior_diff,
        max_boundary_error,
        probes,
    })
}
