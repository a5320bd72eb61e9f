use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Cutoff for all theta series: `|p|^{(N+½)²} < THETA_TOL`.
const THETA_TOL: f64 = 1e-16;

/// Modular parameter with its nome and series cutoff.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThetaParams {
    pub tau: Complex64,
    pub nome: Complex64,
    pub truncation_order: usize,
}

impl ThetaParams {
    pub fn new(tau: Complex64) -> Result<Self> {
        if tau.im <= 0.0 || !tau.re.is_finite() || !tau.im.is_finite() {
            return Err(Error::Domain {
                what: "modular parameter (Im tau must be > 0)",
                value: tau.im,
            });
        }
        let nome = (Complex64::i() * PI * tau).exp();
        // |p| = e^{-π Im τ}; solve (N+½)² π Im τ > -ln(tol).
        let needed = (-THETA_TOL.ln() / (PI * tau.im)).sqrt() - 0.5;
        let truncation_order = needed.ceil().max(1.0) as usize;
        Ok(Self {
            tau,
            nome,
            truncation_order,
        })
    }

    /// `τ = i·t`. Panics if `t` is not positive and finite.
    pub fn imaginary(t: f64) -> Self {
        assert!(t > 0.0 && t.is_finite(), "Im tau must be positive, got {t}");
        Self::new(Complex64::new(0.0, t)).expect("validated above")
    }

    /// Whether `τ` is on the imaginary axis (the only case with a real
    /// log-derivative on the real line).
    fn imaginary_part_only(&self) -> Result<f64> {
        if self.tau.re.abs() > 1e-14 * self.tau.im.max(1.0) {
            return Err(Error::Domain {
                what: "real theta log-derivative (tau must be purely imaginary)",
                value: self.tau.re,
            });
        }
        Ok(self.tau.im)
    }
}

/// `(θ₁(u), θ₁'(u))`, both divided by `2p^{1/4}`, for complex `u`.
pub(crate) fn theta1_pair(u: Complex64, tp: &ThetaParams) -> (Complex64, Complex64) {
    let p = tp.nome;
    let p_abs = p.norm();
    let growth = u.im.abs();
    let mut pw = Complex64::new(1.0, 0.0); // p^{n(n+1)}
    let mut p2n = Complex64::new(1.0, 0.0); // p^{2n}
    let p2 = p * p;
    let mut s = Complex64::new(0.0, 0.0);
    let mut ds = Complex64::new(0.0, 0.0);
    for n in 0..400usize {
        if n > 0 {
            p2n *= p2;
            pw *= p2n;
        }
        let k = (2 * n + 1) as f64;
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        let arg = u * k;
        s += pw * arg.sin() * sign;
        ds += pw * arg.cos() * (sign * k);
        if n >= tp.truncation_order {
            let nn = n as f64;
            let bound = k * (nn * (nn + 1.0) * p_abs.ln() + k * growth).exp();
            if bound < 1e-18 * s.norm().max(ds.norm()).max(1e-300) {
                break;
            }
        }
    }
    (s, ds)
}

/// `(θ₁'(0), θ₁'''(0))`, both divided by `2p^{1/4}`.
pub(crate) fn theta1_derivatives_at_zero(tp: &ThetaParams) -> (Complex64, Complex64) {
    let p = tp.nome;
    let p2 = p * p;
    let mut pw = Complex64::new(1.0, 0.0);
    let mut p2n = Complex64::new(1.0, 0.0);
    let mut d1 = Complex64::new(0.0, 0.0);
    let mut d3 = Complex64::new(0.0, 0.0);
    for n in 0..=tp.truncation_order + 2 {
        if n > 0 {
            p2n *= p2;
            pw *= p2n;
        }
        let k = (2 * n + 1) as f64;
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        d1 += pw * (sign * k);
        d3 -= pw * (sign * k * k * k);
    }
    (d1, d3)
}

/// `∂ᵥ log θ₁(πv | τ)` for real `v ∈ (0, 1)` and purely imaginary `τ`.
///
/// Uses the sine series when `|nome| ≤ e^{-π}` (`Im τ ≥ 1`) and the
/// `τ → −1/τ` transformation otherwise.
pub fn theta1_logderiv(v: f64, tp: &ThetaParams) -> Result<f64> {
    let t = tp.imaginary_part_only()?;
    check_unit_interval(v)?;
    if v > 0.5 {
        return Ok(-reduced_logderiv(1.0 - v, t));
    }
    Ok(reduced_logderiv(v, t))
}

/// Sine-series route of [`theta1_logderiv`], valid for every `Im τ > 0`
/// but only well conditioned for `Im τ ≳ 1`.
pub fn theta1_logderiv_direct(v: f64, tp: &ThetaParams) -> Result<f64> {
    let t = tp.imaginary_part_only()?;
    check_unit_interval(v)?;
    if v > 0.5 {
        return Ok(-logderiv_direct(1.0 - v, t));
    }
    Ok(logderiv_direct(v, t))
}

/// Modular-transformation route of [`theta1_logderiv`].
pub fn theta1_logderiv_modular(v: f64, tp: &ThetaParams) -> Result<f64> {
    let t = tp.imaginary_part_only()?;
    check_unit_interval(v)?;
    if v > 0.5 {
        return Ok(-logderiv_modular(1.0 - v, t));
    }
    Ok(logderiv_modular(v, t))
}

/// `log θ₁(πv | τ)` up to an additive constant that depends on `τ` only.
///
/// Differences at a fixed `τ` are exact; this is what the PDE weights need.
pub fn theta1_log(v: f64, tp: &ThetaParams) -> Result<f64> {
    let t = tp.imaginary_part_only()?;
    check_unit_interval(v)?;
    let v = v.min(1.0 - v);
    if t >= 1.0 {
        let p = (-PI * t).exp();
        let mut den = 0.0;
        for_each_direct_term(v, p, t, |_, pw, sign, k| {
            den += sign * pw * (k * PI * v).sin();
        });
        Ok(den.ln())
    } else {
        let z = PI * v;
        let y = z / t;
        let mut s = 0.0;
        for_each_modular_term(v, t, |n, e| {
            let k = (2 * n + 1) as f64;
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            s += sign * e * (-(-2.0 * k * y).exp_m1()) * 0.5;
        });
        Ok(-z * z / (PI * t) + y + s.ln())
    }
}

fn check_unit_interval(v: f64) -> Result<()> {
    if v > 0.0 && v < 1.0 {
        Ok(())
    } else {
        Err(Error::Domain {
            what: "theta log-derivative argument v (must lie in (0, 1))",
            value: v,
        })
    }
}

pub(crate) fn reduced_logderiv(v: f64, t: f64) -> f64 {
    if t >= 1.0 {
        logderiv_direct(v, t)
    } else {
        logderiv_modular(v, t)
    }
}

/// Calls `f(n, p^{n(n+1)}, (-1)ⁿ, 2n+1)` for the terms of the direct series.
fn for_each_direct_term(_v: f64, p: f64, t: f64, mut f: impl FnMut(usize, f64, f64, f64)) {
    let tp_order = ((-THETA_TOL.ln() / (PI * t)).sqrt() - 0.5).ceil().max(1.0) as usize;
    let mut pw = 1.0;
    let mut p2n = 1.0;
    let p2 = p * p;
    for n in 0..=tp_order {
        if n > 0 {
            p2n *= p2;
            pw *= p2n;
        }
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        f(n, pw, sign, (2 * n + 1) as f64);
    }
}

/// Calls `f(n, exp(E_n))` with `E_n = (π/t)(2nv − n(n+1))`, the scaled terms
/// of the transformed series; `v ≤ ½` keeps every exponent non-positive.
fn for_each_modular_term(v: f64, t: f64, mut f: impl FnMut(usize, f64)) {
    for n in 0..200usize {
        let nn = n as f64;
        let e = ((PI / t) * (2.0 * nn * v - nn * (nn + 1.0))).exp();
        if n > 0 && e < 1e-18 {
            break;
        }
        f(n, e);
    }
}

fn logderiv_direct(v: f64, t: f64) -> f64 {
    let p = (-PI * t).exp();
    let mut num = 0.0;
    let mut den = 0.0;
    for_each_direct_term(v, p, t, |_, pw, sign, k| {
        let (s, c) = (k * PI * v).sin_cos();
        num += sign * pw * k * c;
        den += sign * pw * s;
    });
    PI * num / den
}

fn logderiv_modular(v: f64, t: f64) -> f64 {
    // θ₁(z|it) ∝ e^{-z²/(πt)} Σ (-1)ⁿ e^{-π(n+½)²/t} sinh((2n+1)z/t)
    let z = PI * v;
    let y = z / t;
    let mut c = 0.0;
    let mut s = 0.0;
    for_each_modular_term(v, t, |n, e| {
        let k = (2 * n + 1) as f64;
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        let decay = (-2.0 * k * y).exp();
        c += sign * k * e * (1.0 + decay) * 0.5;
        s += sign * e * (-(-2.0 * k * y).exp_m1()) * 0.5;
    });
    PI * (-2.0 * z / (PI * t) + c / (t * s))
}
