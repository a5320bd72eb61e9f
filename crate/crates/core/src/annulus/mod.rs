//! Harmonic and holomorphic functions on the round annulus `A_q = {q < |z| < 1}`.
//!
//! Everything here works in the strip coordinate `w = −i log z`, which maps
//! the outer circle to `Im w = 0` and the inner circle to `Im w = |log q|`.
//! The Weierstrass functions use the lattice `ω₁ = π`, `ω₂ = i|log q|`.

use num_complex::Complex64;
use rustfft::FftPlanner;
use std::f64::consts::PI;

use crate::elliptic::{zeta_unchecked, LatticePeriods, ModulusParam};
use crate::error::{Error, Result};

mod check;
mod series;
mod vfield;
mod villat;

pub use check::{villat_dual_route, DualRouteReport, TrigPolynomial};
pub use series::dirichlet_series;
pub use vfield::{v_field_properties, vector_field_v, VFieldReport, VectorField};
pub use villat::{villat_extension, VillatSolver, DEFAULT_VILLAT_TOLERANCE};

/// Default number of boundary samples (and quadrature nodes).
pub const DEFAULT_SAMPLES: usize = 2048;

/// Outer and inner boundary values sampled at `θ_j = 2πj/n`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryData {
    phi: Vec<f64>,
    psi: Vec<f64>,
}

impl BoundaryData {
    /// Validates equal lengths (at least 4) and finite samples.
    ///
    /// Compatibility of the means is *not* required here: the Laurent
    /// oracle accepts a `log |z|` component. [`VillatSolver`] checks it.
    pub fn new(phi: Vec<f64>, psi: Vec<f64>) -> Result<Self> {
        if phi.len() != psi.len() || phi.len() < 4 {
            return Err(Error::InvalidConfig(format!(
                "boundary grids must have equal length >= 4 (got {} and {})",
                phi.len(),
                psi.len()
            )));
        }
        if phi.iter().chain(&psi).any(|v| !v.is_finite()) {
            return Err(Error::InvalidConfig("boundary data must be finite".into()));
        }
        Ok(Self { phi, psi })
    }

    /// Samples `f` and `g` on the uniform grid of `n` angles.
    pub fn from_fns(n: usize, f: impl Fn(f64) -> f64, g: impl Fn(f64) -> f64) -> Result<Self> {
        let grid = |h: &dyn Fn(f64) -> f64| (0..n).map(|j| h(angle(j, n))).collect::<Vec<_>>();
        Self::new(grid(&f), grid(&g))
    }

    pub fn phi(&self) -> &[f64] {
        &self.phi
    }

    pub fn psi(&self) -> &[f64] {
        &self.psi
    }

    pub fn n_samples(&self) -> usize {
        self.phi.len()
    }

    pub fn phi_mean(&self) -> f64 {
        mean(&self.phi)
    }

    pub fn psi_mean(&self) -> f64 {
        mean(&self.psi)
    }

    /// `|mean φ − mean ψ| ≤ 1e-12 · max(1, sup |data|)`.
    pub fn is_compatible(&self) -> bool {
        let scale = self
            .phi
            .iter()
            .chain(&self.psi)
            .fold(1.0f64, |m, v| m.max(v.abs()));
        (self.phi_mean() - self.psi_mean()).abs() <= 1e-12 * scale
    }

    pub(crate) fn phi_spectrum(&self) -> Vec<Complex64> {
        spectrum(&self.phi)
    }

    pub(crate) fn psi_spectrum(&self) -> Vec<Complex64> {
        spectrum(&self.psi)
    }
}

/// The annulus `A_q` together with its period lattice.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnnulusDomain {
    m: ModulusParam,
    periods: LatticePeriods,
}

impl AnnulusDomain {
    pub fn new(m: ModulusParam) -> Self {
        Self {
            m,
            periods: m.periods(),
        }
    }

    pub fn from_q(q: f64) -> Result<Self> {
        Ok(Self::new(ModulusParam::from_q(q)?))
    }

    pub fn modulus(&self) -> ModulusParam {
        self.m
    }

    pub fn periods(&self) -> &LatticePeriods {
        &self.periods
    }

    pub fn q(&self) -> f64 {
        self.m.q()
    }

    /// Strip height `|log q|`.
    pub fn height(&self) -> f64 {
        -self.m.a()
    }

    /// Strip coordinate of `z`, after checking `q ≤ |z| ≤ 1` up to rounding.
    pub fn strip_coordinate(&self, z: Complex64) -> Result<Complex64> {
        let r = z.norm();
        let slack = 1e-12;
        if !(r.is_finite() && r >= self.q() * (1.0 - slack) && r <= 1.0 + slack) {
            return Err(Error::Domain {
                what: "closed annulus q <= |z| <= 1",
                value: r,
            });
        }
        Ok(to_strip(z))
    }
}

/// `w = −i log z`.
pub fn to_strip(z: Complex64) -> Complex64 {
    Complex64::new(z.arg(), -z.norm().ln())
}

/// `z = e^{iw}`.
pub fn from_strip(w: Complex64) -> Complex64 {
    (Complex64::i() * w).exp()
}

pub(crate) fn angle(j: usize, n: usize) -> f64 {
    2.0 * PI * j as f64 / n as f64
}

fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}

/// `c_k = (1/n) Σ_j f_j e^{−ikθ_j}`, index `k` stored at `k mod n`.
fn spectrum(samples: &[f64]) -> Vec<Complex64> {
    let n = samples.len();
    let mut buf: Vec<Complex64> = samples.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);
    let scale = 1.0 / n as f64;
    buf.iter_mut().for_each(|c| *c *= scale);
    buf
}

/// Maps `Re u` into `(−π, π]`.
fn centre(u: Complex64) -> Complex64 {
    let two_pi = 2.0 * PI;
    Complex64::new(u.re - two_pi * (u.re / two_pi).round(), u.im)
}

/// `½ cot(u/2)`. Near the real axis the trig form is used (it keeps full
/// relative accuracy at small `u`); further out, the decaying exponential on
/// each side so nothing overflows.
pub(crate) fn half_cot_half(u: Complex64) -> Complex64 {
    let i = Complex64::i();
    if u.im.abs() < 1.0 {
        let h = u / 2.0;
        0.5 * h.cos() / h.sin()
    } else if u.im > 0.0 {
        let e = (i * u).exp();
        -0.5 * i * (1.0 + e) / (1.0 - e)
    } else {
        let e = (-i * u).exp();
        0.5 * i * (1.0 + e) / (1.0 - e)
    }
}

/// Regular part `R(u) = ζ(u) − η₁u/π − ½cot(u/2)` of the `2π`-periodic kernel.
///
/// `R` is holomorphic for `|Im u| < 2|ω₂|`; both pieces have unit residue
/// at the real lattice points, so near `u = 0` the cancelling difference is
/// replaced by its Taylor term `(1/12 − η₁/π) u`.
pub(crate) fn kernel_remainder(u: Complex64, periods: &LatticePeriods) -> Complex64 {
    let eta1 = periods.eta1.re;
    let u = centre(u);
    if u.norm() < 1e-4 {
        return (1.0 / 12.0 - eta1 / PI) * u;
    }
    zeta_unchecked(u, periods) - eta1 * u / PI - half_cot_half(u)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spectrum_of_cosine() {
        let bd = BoundaryData::from_fns(16, |t| 3.0 * (2.0 * t).cos(), |_| 0.0).unwrap();
        let c = bd.phi_spectrum();
        assert!((c[2] - 1.5).norm() < 1e-14 && (c[14] - 1.5).norm() < 1e-14);
        assert!(c[0].norm() < 1e-14);
    }

    #[test]
    fn remainder_is_continuous_through_the_taylor_switch() {
        let p = ModulusParam::new(-1.1).unwrap().periods();
        let slope = 1.0 / 12.0 - p.eta1.re / PI;
        for &dir in &[Complex64::new(1.0, 0.0), Complex64::new(0.6, 0.8)] {
            let u = dir * 1.01e-4;
            let direct = kernel_remainder(u, &p);
            assert!(
                (direct - slope * u).norm() < 1e-11,
                "{direct} vs {}",
                slope * u
            );
        }
    }

    #[test]
    fn remainder_is_periodic() {
        let p = ModulusParam::new(-0.8).unwrap().periods();
        let u = Complex64::new(0.7, 0.3);
        let d = kernel_remainder(u + 2.0 * PI, &p) - kernel_remainder(u, &p);
        assert!(d.norm() < 1e-12);
    }

    #[test]
    fn half_cot_matches_trig_form() {
        for u in [
            Complex64::new(0.4, 0.9),
            Complex64::new(-2.0, -1.3),
            Complex64::new(1.0, 3.0),
        ] {
            let direct = 0.5 * (u / 2.0).cos() / (u / 2.0).sin();
            assert!((half_cot_half(u) - direct).norm() < 1e-13);
        }
    }

    #[test]
    fn rejects_mismatched_grids() {
        assert!(BoundaryData::new(vec![0.0; 8], vec![0.0; 7]).is_err());
        assert!(BoundaryData::new(vec![f64::NAN; 8], vec![0.0; 8]).is_err());
    }
}
