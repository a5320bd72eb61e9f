use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{Error, Result};

/// `log η(τ)` (some branch), `η(τ) = q̂^{1/24} ∏_{n≥1}(1 − q̂ⁿ)` with
/// `q̂ = e^{2πiτ}`.
///
/// `τ` is first moved into the fundamental domain with `η(τ+1) = e^{iπ/12}η(τ)`
/// and `η(−1/τ) = √(−iτ) η(τ)`, so the product always runs with `|q̂| ≤ e^{−π√3}`.
/// Working in logs keeps values like `η(i·10⁻³)` representable.
pub fn ln_dedekind_eta(tau: Complex64) -> Result<Complex64> {
    if tau.im <= 0.0 || !tau.re.is_finite() || !tau.im.is_finite() {
        return Err(Error::Domain {
            what: "Dedekind eta (Im tau must be > 0)",
            value: tau.im,
        });
    }
    let mut tau = tau;
    let mut acc = Complex64::new(0.0, 0.0);
    for _ in 0..64 {
        let k = tau.re.round();
        if k != 0.0 {
            tau.re -= k;
            acc += Complex64::new(0.0, PI * k / 12.0);
        }
        if tau.norm_sqr() < 1.0 - 1e-12 {
            // η(τ) = (−iτ)^{−1/2} η(−1/τ)
            acc -= 0.5 * (Complex64::new(0.0, -1.0) * tau).ln();
            tau = -1.0 / tau;
        } else {
            break;
        }
    }
    let q = (Complex64::new(0.0, 2.0 * PI) * tau).exp();
    let mut log_prod = Complex64::new(0.0, 0.0);
    let mut qn = q;
    for _ in 0..10_000 {
        if qn.norm() < 1e-18 {
            break;
        }
        log_prod += (Complex64::new(1.0, 0.0) - qn).ln();
        qn *= q;
    }
    Ok(acc + Complex64::new(0.0, PI / 12.0) * tau + log_prod)
}

/// Dedekind's eta function.
pub fn dedekind_eta(tau: Complex64) -> Result<Complex64> {
    Ok(ln_dedekind_eta(tau)?.exp())
}
