//! Elliptic and modular special functions on rectangular lattices.
//!
//! Everything here is specialised to the lattice `2ω₁ℤ + 2ω₂ℤ` with `ω₁`
//! real and `ω₂` purely imaginary. The annulus `{q < |z| < 1}` with
//! `a = log q` is attached to the normalisation `ω₁ = π`, `ω₂ = -ia`, for
//! which the Jacobi nome `e^{iπτ}` with `τ = ω₂/ω₁` is exactly `q`.
//!
//! Theta functions use the classical convention
//!
//! ```text
//! θ₁(u | τ) = 2 Σ_{n≥0} (-1)ⁿ p^{(n+½)²} sin((2n+1)u),   p = e^{iπτ}
//! ```
//!
//! and the bivariate form `θ(v, τ) = θ₁(πv | τ)`, which has period 1 in `v`.
//! With this orientation the Legendre relation reads
//! `η₁ω₂ − η₂ω₁ = iπ/2`.

mod eta;
mod theta;
mod weierstrass;

pub use eta::{dedekind_eta, ln_dedekind_eta};
pub use theta::{
    theta1_log, theta1_logderiv, theta1_logderiv_direct, theta1_logderiv_modular, ThetaParams,
};
pub use weierstrass::{
    eta1_from_periods, quasi_period_from_basis, weierstrass_zeta, weierstrass_zeta_lattice_sum,
    zeta3, zeta_unchecked,
};

use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::PI;

use crate::error::{Error, Result};

/// The annulus modulus, stored as `a = log q < 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModulusParam {
    a: f64,
}

impl ModulusParam {
    pub fn new(a: f64) -> Result<Self> {
        if a.is_finite() && a < 0.0 {
            Ok(Self { a })
        } else {
            Err(Error::Domain {
                what: "log-modulus a (must be finite and < 0)",
                value: a,
            })
        }
    }

    pub fn from_q(q: f64) -> Result<Self> {
        if q > 0.0 && q < 1.0 {
            Self::new(q.ln())
        } else {
            Err(Error::Domain {
                what: "annulus modulus q (must lie in (0, 1))",
                value: q,
            })
        }
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn q(&self) -> f64 {
        self.a.exp()
    }

    /// `τ = -ia/π`, the modular parameter of the drift; its nome is `q`.
    pub fn tau_drift(&self) -> Complex64 {
        Complex64::new(0.0, -self.a / PI)
    }

    /// `τ = -ia/2π`, the argument of the eta quotient.
    pub fn tau_cardy(&self) -> Complex64 {
        Complex64::new(0.0, -self.a / (2.0 * PI))
    }

    pub fn theta_params(&self) -> ThetaParams {
        ThetaParams::imaginary(-self.a / PI)
    }

    /// Lattice data for `ω₁ = π`, `ω₂ = -ia`.
    pub fn periods(&self) -> LatticePeriods {
        LatticePeriods::rectangular(PI, -self.a)
    }
}

/// Half-periods of a rectangular lattice together with the quasi-period
/// constants `ηₖ = ζ(ωₖ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LatticePeriods {
    pub omega1: f64,
    pub omega2: Complex64,
    pub eta1: Complex64,
    pub eta2: Complex64,
    pub eta3: Complex64,
}

impl LatticePeriods {
    /// Lattice with half-periods `omega1` (real) and `i·omega2_im`.
    ///
    /// Panics unless both arguments are positive and finite.
    pub fn rectangular(omega1: f64, omega2_im: f64) -> Self {
        assert!(
            omega1 > 0.0 && omega1.is_finite() && omega2_im > 0.0 && omega2_im.is_finite(),
            "half-periods must be positive and finite"
        );
        let omega2 = Complex64::new(0.0, omega2_im);
        let (eta1, eta2) = weierstrass::quasi_periods(omega1, omega2);
        Self {
            omega1,
            omega2,
            eta1,
            eta2,
            eta3: eta1 + eta2,
        }
    }

    pub fn omega3(&self) -> Complex64 {
        self.omega2 + self.omega1
    }

    /// `τ = ω₂/ω₁`.
    pub fn tau(&self) -> Complex64 {
        self.omega2 / self.omega1
    }

    /// `η₁ω₂ − η₂ω₁`; equals `iπ/2` for this orientation.
    pub fn legendre_residual(&self) -> Complex64 {
        self.eta1 * self.omega2 - self.eta2 * self.omega1 - Complex64::new(0.0, PI / 2.0)
    }
}

/// Drift of the driving diffusion,
/// `b(ν, a) = (1/π) · ∂ᵥ log θ(ν/2π, −ia/π)`.
///
/// `b` is odd under `ν ↔ 2π − ν`; the implementation evaluates on `(0, π]`
/// and reflects, so the antisymmetry holds to rounding of `2π − ν`.
pub fn drift(nu: f64, m: ModulusParam) -> Result<f64> {
    let tp = m.theta_params();
    drift_with(nu, &tp)
}

/// Same as [`drift`] but reuses precomputed theta parameters.
pub fn drift_with(nu: f64, tp: &ThetaParams) -> Result<f64> {
    if !(nu > 0.0 && nu < 2.0 * PI) {
        return Err(Error::Domain {
            what: "drift angle nu (must lie in (0, 2π))",
            value: nu,
        });
    }
    if nu > PI {
        let mirrored = 2.0 * PI - nu;
        return Ok(-theta1_logderiv(mirrored / (2.0 * PI), tp)? / PI);
    }
    Ok(theta1_logderiv(nu / (2.0 * PI), tp)? / PI)
}

/// [`drift`] for `nu ∈ (0, 2π)`, `a < 0` without argument checks or
/// parameter setup; the inner loop of the simulators.
pub(crate) fn drift_raw(nu: f64, a: f64) -> f64 {
    let t = -a / PI;
    if nu > PI {
        -theta::reduced_logderiv((2.0 * PI - nu) / (2.0 * PI), t) / PI
    } else {
        theta::reduced_logderiv(nu / (2.0 * PI), t) / PI
    }
}

/// The same drift written through the Weierstrass zeta function:
/// `(2ω₁/π)(ζ(ω₁ν/π) − (ν/π)ζ(ω₁))`.
///
/// Not used by the simulators; it exists so the two closed forms can be
/// compared against each other.
pub fn drift_zeta_form(nu: f64, m: ModulusParam) -> Result<f64> {
    if !(nu > 0.0 && nu < 2.0 * PI) {
        return Err(Error::Domain {
            what: "drift angle nu (must lie in (0, 2π))",
            value: nu,
        });
    }
    let periods = m.periods();
    let w1 = periods.omega1;
    let z = weierstrass_zeta(Complex64::new(w1 * nu / PI, 0.0), &periods)?;
    let value = (2.0 * w1 / PI) * (z - periods.eta1 * (nu / PI));
    Ok(value.re)
}
