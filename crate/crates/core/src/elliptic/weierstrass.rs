use num_complex::Complex64;
use std::f64::consts::PI;

use super::theta::{theta1_derivatives_at_zero, theta1_pair, ThetaParams};
use super::LatticePeriods;
use crate::error::{Error, Result};

/// Distance to the lattice below which `ζ` reports a pole.
const POLE_TOL: f64 = 1e-10;

/// Quasi-period `η_A = ζ(A)` for the basis `(2A, 2B)`, `Im(B/A) > 0`,
/// from `η_A = −π² θ₁'''(0) / (12 A θ₁'(0))` with `τ = B/A`.
///
/// Converges for any admissible basis, but fast only when `Im τ ≳ 1`.
pub fn quasi_period_from_basis(a: Complex64, b: Complex64) -> Result<Complex64> {
    let tp = ThetaParams::new(b / a)?;
    let (d1, d3) = theta1_derivatives_at_zero(&tp);
    Ok(-(PI * PI) * d3 / (12.0 * a * d1))
}

/// `(η₁, η₂)` for `ω₁ > 0`, `ω₂ ∈ iℝ₊`: the better-conditioned basis gives
/// one constant, the Legendre relation the other.
pub(crate) fn quasi_periods(omega1: f64, omega2: Complex64) -> (Complex64, Complex64) {
    let w1 = Complex64::new(omega1, 0.0);
    let half_i_pi = Complex64::new(0.0, PI / 2.0);
    if omega2.im >= omega1 {
        let eta1 = quasi_period_from_basis(w1, omega2).expect("Im(ω₂/ω₁) > 0");
        let eta2 = (eta1 * omega2 - half_i_pi) / w1;
        (eta1, eta2)
    } else {
        let eta2 = quasi_period_from_basis(omega2, -w1).expect("Im(-ω₁/ω₂) > 0");
        let eta1 = (eta2 * w1 + half_i_pi) / omega2;
        (eta1, eta2)
    }
}

/// `η₁` recomputed from the theta-series identity.
pub fn eta1_from_periods(periods: &LatticePeriods) -> Complex64 {
    quasi_periods(periods.omega1, periods.omega2).0
}

/// Weierstrass `ζ(z; 2ω₁, 2ω₂)`.
///
/// `z` is first reduced to the period cell centred at the origin (adding the
/// matching `2η` increments), then evaluated as
/// `ζ(z) = η_A z/A + (π/2A) θ₁'/θ₁(πz/2A | B/A)` in whichever of the bases
/// `(ω₁, ω₂)`, `(ω₂, −ω₁)` has `Im τ ≥ 1`.
pub fn weierstrass_zeta(z: Complex64, periods: &LatticePeriods) -> Result<Complex64> {
    let (z0, _) = reduce(z, periods);
    let distance = z0.norm();
    if distance < POLE_TOL * periods.omega1.max(periods.omega2.im) {
        return Err(Error::Pole {
            what: "Weierstrass zeta",
            distance,
        });
    }
    Ok(zeta_unchecked(z, periods))
}

/// [`weierstrass_zeta`] without the pole check.
pub fn zeta_unchecked(z: Complex64, periods: &LatticePeriods) -> Complex64 {
    let (z0, shift) = reduce(z, periods);
    let w1 = Complex64::new(periods.omega1, 0.0);
    let (a, b, eta_a) = if periods.omega2.im >= periods.omega1 {
        (w1, periods.omega2, periods.eta1)
    } else {
        (periods.omega2, -w1, periods.eta2)
    };
    let tp = ThetaParams::new(b / a).expect("basis oriented with Im τ > 0");
    let (s, ds) = theta1_pair(z0 * PI / (2.0 * a), &tp);
    eta_a * z0 / a + (PI / (2.0 * a)) * ds / s + shift
}

/// `ζ₃(z) = η₃ − ζ(ω₃ − z)`.
pub fn zeta3(z: Complex64, periods: &LatticePeriods) -> Result<Complex64> {
    Ok(periods.eta3 - weierstrass_zeta(periods.omega3() - z, periods)?)
}

/// Splits `z = z₀ + 2mω₁ + 2nω₂` with `z₀` in the centred cell and returns
/// `(z₀, 2mη₁ + 2nη₂)`.
fn reduce(z: Complex64, p: &LatticePeriods) -> (Complex64, Complex64) {
    let m = (z.re / (2.0 * p.omega1)).round();
    let n = (z.im / (2.0 * p.omega2.im)).round();
    let z0 = Complex64::new(z.re - 2.0 * m * p.omega1, z.im - 2.0 * n * p.omega2.im);
    (z0, p.eta1 * (2.0 * m) + p.eta2 * (2.0 * n))
}

/// Direct lattice sum
/// `1/z + Σ' (1/(z−ω) + 1/ω + z/ω²)` over `|ω| ≤ R`, with
/// `R = radius_cells · max(2ω₁, 2|ω₂|)`.
///
/// Terms are paired `±ω` (so the `z²/ω³` contributions cancel exactly) and
/// accumulated with compensated summation. The disk cut keeps the
/// `z³Σω⁻⁴` tail small. This is a test oracle; it costs `O(R²)`.
pub fn weierstrass_zeta_lattice_sum(
    z: Complex64,
    periods: &LatticePeriods,
    radius_cells: f64,
) -> Complex64 {
    let s1 = 2.0 * periods.omega1;
    let s2 = 2.0 * periods.omega2.im;
    let radius = radius_cells * s1.max(s2);
    let r2 = radius * radius;
    let z2 = z * z;
    let z3 = z2 * z;
    let mut sum = KahanSum::default();
    let n_max = (radius / s2).floor() as i64;
    for n in 0..=n_max {
        let y = n as f64 * s2;
        let x_max = (r2 - y * y).max(0.0).sqrt();
        let m_max = (x_max / s1).floor() as i64;
        // half lattice: n > 0, or n = 0 and m > 0
        let m_min = if n == 0 { 1 } else { -m_max };
        for m in m_min..=m_max {
            let w = Complex64::new(m as f64 * s1, y);
            if w.norm_sqr() > r2 {
                continue;
            }
            let w2 = w * w;
            sum.add(2.0 * z3 / (w2 * (z2 - w2)));
        }
    }
    sum.value() + 1.0 / z
}

#[derive(Default)]
struct KahanSum {
    sum: Complex64,
    comp: Complex64,
}

impl KahanSum {
    fn add(&mut self, x: Complex64) {
        let y = x - self.comp;
        let t = self.sum + y;
        self.comp = (t - self.sum) - y;
        self.sum = t;
    }

    fn value(&self) -> Complex64 {
        self.sum
    }
}
