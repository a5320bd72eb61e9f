use num_complex::Complex64;

use super::{AnnulusDomain, BoundaryData};
use crate::error::Result;

/// Harmonic extension of the sampled data by its Laurent expansion
/// `A₀ + B₀ log r + Σ_{k≠0} (A_k r^{|k|} + B_k r^{−|k|}) e^{ikθ}`.
///
/// Independent of the elliptic kernel; meant as an oracle for
/// [`super::VillatSolver`]. Compatible means are not required since
/// `log r` is part of the basis.
///
/// Each frequency is a 2×2 system in `(A_k, B_k)` whose determinant
/// `q^{|k|} − q^{−|k|}` is hopeless in floating point once `q^{|k|}`
/// underflows. The solution is instead written as the sinh ratios
/// `c_k sinh(|k|(ρ−a))/sinh(−|k|a) + d_k sinh(−|k|ρ)/sinh(−|k|a)`, `ρ = log r`,
/// which stay in `[0, 1]` for every frequency, so no frequency is rejected.
pub fn dirichlet_series(bd: &BoundaryData, dom: &AnnulusDomain, z: Complex64) -> Result<f64> {
    dom.strip_coordinate(z)?;
    let n = bd.n_samples();
    let c = bd.phi_spectrum();
    let d = bd.psi_spectrum();
    let big_l = dom.height();
    let rho = z.norm().ln().clamp(-big_l, 0.0);
    let theta = z.arg();

    let mut value = c[0].re * (rho + big_l) / big_l + d[0].re * (-rho) / big_l;
    for k in 1..=n / 2 {
        let kf = k as f64;
        let outer = sinh_ratio(kf * (rho + big_l), kf * big_l);
        let inner = sinh_ratio(-kf * rho, kf * big_l);
        let coef = c[k] * outer + d[k] * inner;
        let weight = if 2 * k == n { 1.0 } else { 2.0 };
        value += weight * (coef * Complex64::from_polar(1.0, kf * theta)).re;
    }
    Ok(value)
}

/// `sinh x / sinh y` for `0 ≤ x ≤ y`, `y > 0`.
fn sinh_ratio(x: f64, y: f64) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    (x - y).exp() * (-(-2.0 * x).exp_m1()) / (-(-2.0 * y).exp_m1())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sinh_ratio_limits() {
        assert!((sinh_ratio(1.0, 1.0) - 1.0).abs() < 1e-15);
        assert!((sinh_ratio(0.3, 0.7) - 0.3f64.sinh() / 0.7f64.sinh()).abs() < 1e-15);
        assert!(sinh_ratio(1.0, 800.0) == 0.0);
        assert!((sinh_ratio(1e-9, 2e-9) - 0.5).abs() < 1e-9);
    }
}
