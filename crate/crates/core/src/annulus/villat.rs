use num_complex::Complex64;
use std::f64::consts::PI;

use super::{angle, kernel_remainder, AnnulusDomain, BoundaryData};
use crate::error::{Error, Result};

/// Default bound on the estimated quadrature error of [`VillatSolver`].
pub const DEFAULT_VILLAT_TOLERANCE: f64 = 1e-8;

/// Villat's holomorphic extension `Ω` of compatible boundary data.
///
/// The two kernel integrals
/// `(i/π)∫φ(θ) ζ(w−θ) dθ − (i/π)∫ψ(θ) ζ₃(w−θ+ω₁) dθ`
/// are split into a Herglotz part (the `½cot` singularity, summed exactly
/// from the FFT coefficients of the data), a part linear in `w`, and the
/// regular remainder, which the trapezoid rule integrates to spectral
/// accuracy. The imaginary constant is fixed by `Im Ω(√q) = 0`.
///
/// ```
/// use annulus_sle::annulus::{AnnulusDomain, BoundaryData, VillatSolver};
/// use num_complex::Complex64;
///
/// let dom = AnnulusDomain::from_q(0.3).unwrap();
/// let q = dom.q();
/// // Re z has boundary values cos θ and q cos θ
/// let bd = BoundaryData::from_fns(256, f64::cos, |t| q * t.cos()).unwrap();
/// let omega = VillatSolver::new(bd, dom).unwrap();
/// let z = Complex64::from_polar(0.5, 1.0);
/// assert!((omega.evaluate(z).unwrap() - z).norm() < 1e-10);
/// ```
#[derive(Debug, Clone)]
pub struct VillatSolver {
    dom: AnnulusDomain,
    data: BoundaryData,
    /// `c_k`, `k = 0..=n/2`
    outer: Vec<Complex64>,
    /// `d_{−k}`, `k = 0..=n/2`
    inner: Vec<Complex64>,
    linear: Complex64,
    constant: Complex64,
    offset: f64,
    scale: f64,
    tolerance: f64,
}

impl VillatSolver {
    /// Errors with [`Error::IncompatibleBoundaryData`] unless the two
    /// boundary means agree.
    pub fn new(data: BoundaryData, dom: AnnulusDomain) -> Result<Self> {
        if !data.is_compatible() {
            return Err(Error::IncompatibleBoundaryData {
                phi_mean: data.phi_mean(),
                psi_mean: data.psi_mean(),
            });
        }
        let n = data.n_samples();
        let c = data.phi_spectrum();
        let d = data.psi_spectrum();
        let half = n / 2;
        let outer: Vec<_> = (0..=half).map(|k| c[k]).collect();
        let inner: Vec<_> = (0..=half).map(|k| d[(n - k) % n]).collect();

        let p = dom.periods();
        let i = Complex64::i();
        let phi_int = 2.0 * PI * c[0].re;
        let psi_int = 2.0 * PI * d[0].re;
        let eta1 = p.eta1.re;
        let linear = i * eta1 / (PI * PI) * (phi_int - psi_int);
        let constant = i * eta1 / (PI * PI) * p.omega2 * psi_int - i / PI * p.eta3 * psi_int;
        let scale = data
            .phi()
            .iter()
            .chain(data.psi())
            .fold(0.0f64, |m, v| m.max(v.abs()));

        let mut solver = Self {
            dom,
            data,
            outer,
            inner,
            linear,
            constant,
            offset: 0.0,
            scale,
            tolerance: DEFAULT_VILLAT_TOLERANCE,
        };
        solver.offset = solver.raw(Complex64::new(0.0, dom.height() / 2.0)).im;
        Ok(solver)
    }

    pub fn with_tolerance(mut self, tolerance: f64) -> Self {
        self.tolerance = tolerance;
        self
    }

    pub fn domain(&self) -> &AnnulusDomain {
        &self.dom
    }

    /// `Ω(z)` for `q ≤ |z| ≤ 1`.
    pub fn evaluate(&self, z: Complex64) -> Result<Complex64> {
        let w = self.dom.strip_coordinate(z)?;
        self.evaluate_strip(w)
    }

    /// `Ω` as a function of the strip coordinate; `2π`-periodic in `Re w`.
    pub fn evaluate_strip(&self, w: Complex64) -> Result<Complex64> {
        let bound = self.error_bound(w.im);
        if bound > self.tolerance {
            return Err(Error::QuadratureResolution {
                bound,
                tolerance: self.tolerance,
            });
        }
        Ok(self.raw(w) - Complex64::new(0.0, self.offset))
    }

    /// Estimated quadrature error at height `h = Im w`.
    ///
    /// Two sources: the trapezoid rule on the regular remainder, whose
    /// strip of holomorphy has half-width at least `|a|`, and the part of
    /// the data spectrum near the Nyquist frequency, which is damped only by
    /// the distance to the boundary it lives on.
    pub fn error_bound(&self, h: f64) -> f64 {
        let height = self.dom.height();
        let n = self.data.n_samples() as f64;
        let d = (2.0 * height - h).min(height + h).max(1e-300);
        let quad = self.scale * (1.0 + 10.0 / d) * (-0.9 * n * d).exp();
        let tail = |coef: &[Complex64], dist: f64| {
            let half = coef.len() - 1;
            (3 * half / 4..=half)
                .map(|k| 2.0 * coef[k].norm() * (-(k as f64) * dist.max(0.0)).exp())
                .sum::<f64>()
        };
        quad + tail(&self.outer, h) + tail(&self.inner, height - h)
    }

    fn raw(&self, w: Complex64) -> Complex64 {
        let p = self.dom.periods();
        let i = Complex64::i();
        let n = self.data.n_samples();
        let w_in = w - p.omega2;

        let herglotz_outer = herglotz(&self.outer, i * w, n);
        let herglotz_inner = herglotz(&self.inner, -i * w_in, n);

        let mut regular = Complex64::new(0.0, 0.0);
        for (j, (&phi, &psi)) in self.data.phi().iter().zip(self.data.psi()).enumerate() {
            let t = angle(j, n);
            if phi != 0.0 {
                regular += phi * kernel_remainder(w - t, p);
            }
            if psi != 0.0 {
                regular -= psi * kernel_remainder(w_in - t, p);
            }
        }
        regular *= 2.0 * i / n as f64;

        herglotz_outer + herglotz_inner + regular + self.linear * w + self.constant
    }
}

/// `c₀ + Σ_{k≥1} ω_k c_k e^{k s}` with weight 2, halved at the Nyquist index.
fn herglotz(coef: &[Complex64], s: Complex64, n: usize) -> Complex64 {
    let step = s.exp();
    let mut power = Complex64::new(1.0, 0.0);
    let mut sum = coef[0];
    for (k, c) in coef.iter().enumerate().skip(1) {
        power *= step;
        if power.norm() < 1e-300 {
            break;
        }
        let weight = if 2 * k == n { 1.0 } else { 2.0 };
        sum += weight * c * power;
    }
    sum
}

/// One-shot [`VillatSolver`] evaluation.
pub fn villat_extension(bd: &BoundaryData, dom: &AnnulusDomain, z: Complex64) -> Result<Complex64> {
    VillatSolver::new(bd.clone(), *dom)?.evaluate(z)
}
