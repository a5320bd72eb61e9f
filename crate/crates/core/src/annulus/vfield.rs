use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::PI;

use super::{angle, kernel_remainder, to_strip, AnnulusDomain, DEFAULT_SAMPLES};
use crate::elliptic::zeta_unchecked;
use crate::error::{Error, Result};

/// The vector field `V_{x,y}` on `A_q`: holomorphic, tangent to the outer
/// circle away from `x`, with a simple pole at `x` of residue `−2x²` and a
/// zero at `y`.
///
/// Evaluated as
/// `2iz[ζ(w_z−w_x) − ζ(w_y−w_x)] − 2iz·(1/2π)∫[ζ₃(w_z−θ) − ζ₃(w_y−θ)] dθ`,
/// the integral taken by the trapezoid rule after removing the `½cot`
/// singularity of `ζ₃` (whose mean over a period is known exactly).
#[derive(Debug, Clone)]
pub struct VectorField {
    dom: AnnulusDomain,
    x: Complex64,
    y: Complex64,
    w_x: Complex64,
    w_y: Complex64,
    zeta_y: Complex64,
    remainder_y: Complex64,
    n_quad: usize,
}

impl VectorField {
    pub fn new(x: Complex64, y: Complex64, dom: AnnulusDomain) -> Result<Self> {
        Self::with_quadrature(x, y, dom, DEFAULT_SAMPLES)
    }

    pub fn with_quadrature(
        x: Complex64,
        y: Complex64,
        dom: AnnulusDomain,
        n_quad: usize,
    ) -> Result<Self> {
        for p in [x, y] {
            if (p.norm() - 1.0).abs() > 1e-9 {
                return Err(Error::Domain {
                    what: "V field endpoints (must lie on |z| = 1)",
                    value: p.norm(),
                });
            }
        }
        let sep = (y / x).arg().abs();
        if sep < 1e-10 {
            return Err(Error::Pole {
                what: "V field (y coincides with x)",
                distance: sep,
            });
        }
        if n_quad < 8 {
            return Err(Error::InvalidConfig(format!(
                "V field quadrature needs at least 8 nodes, got {n_quad}"
            )));
        }
        let p = dom.periods();
        let w_x = to_strip(x);
        let w_y = to_strip(y);
        let zeta_y = zeta_unchecked(w_y - w_x, p);
        let remainder_y = remainder_sum(w_y, &dom, n_quad);
        Ok(Self {
            dom,
            x,
            y,
            w_x,
            w_y,
            zeta_y,
            remainder_y,
            n_quad,
        })
    }

    pub fn x(&self) -> Complex64 {
        self.x
    }

    pub fn y(&self) -> Complex64 {
        self.y
    }

    pub fn domain(&self) -> &AnnulusDomain {
        &self.dom
    }

    /// `V_{x,y}(z)` for `q ≤ |z| ≤ 1`, `z ≠ x`.
    pub fn evaluate(&self, z: Complex64) -> Result<Complex64> {
        let w_z = self.dom.strip_coordinate(z)?;
        let u = w_z - self.w_x;
        let distance = Complex64::new(u.re - 2.0 * PI * (u.re / (2.0 * PI)).round(), u.im).norm();
        if distance < 1e-10 {
            return Err(Error::Pole {
                what: "V field at x",
                distance,
            });
        }
        Ok(self.eval_strip(z, w_z))
    }

    fn eval_strip(&self, z: Complex64, w_z: Complex64) -> Complex64 {
        let p = self.dom.periods();
        let i = Complex64::i();
        let pole_part = zeta_unchecked(w_z - self.w_x, p) - self.zeta_y;
        let remainder =
            (remainder_sum(w_z, &self.dom, self.n_quad) - self.remainder_y) / self.n_quad as f64;
        let integral = remainder + p.eta1.re * (w_z - self.w_y) / PI;
        2.0 * i * z * (pole_part - integral)
    }

    /// Value at a point with `1 < |z| < 1/q`, by Schwarz reflection of
    /// `V(z)/z` across the outer circle.
    fn evaluate_reflected(&self, z: Complex64) -> Result<Complex64> {
        if z.norm() <= 1.0 {
            return self.evaluate(z);
        }
        let zs = 1.0 / z.conj();
        let g = self.evaluate(zs)? / zs;
        Ok(-z * g.conj())
    }
}

/// `Σ_j R(w − θ_j − ω₃)`.
fn remainder_sum(w: Complex64, dom: &AnnulusDomain, n: usize) -> Complex64 {
    let p = dom.periods();
    let s = w - p.omega3();
    (0..n).map(|j| kernel_remainder(s - angle(j, n), p)).sum()
}

/// One-shot [`VectorField`] evaluation.
pub fn vector_field_v(
    x: Complex64,
    y: Complex64,
    dom: &AnnulusDomain,
    z: Complex64,
) -> Result<Complex64> {
    VectorField::new(x, y, *dom)?.evaluate(z)
}

/// Numerical residuals of the defining properties of `V_{x,y}`.
#[derive(Debug, Clone, Serialize)]
pub struct VFieldReport {
    pub q: f64,
    pub x_angle: f64,
    pub y_angle: f64,
    /// `|∮V dz| / (length · max|V|)` on a small interior circle.
    pub holomorphy: f64,
    /// Largest jump between a boundary value and the value `1e-10` inside.
    pub continuity: f64,
    /// Spread (max − min) of `Re(V/z)` on the inner circle.
    pub inner_re_spread: f64,
    /// Mean of `Re(V/z)` on the inner circle (reported, not asserted).
    pub inner_re_constant: f64,
    /// `max |Re(V/z)|` on the outer circle away from `x`.
    pub outer_re_max: f64,
    /// `|V(y)|`.
    pub zero_at_y: f64,
    /// `|Res_x V + 2x²|` from a contour integral.
    pub residue_error: f64,
}

impl VFieldReport {
    /// Largest of the six property residuals.
    pub fn max_residual(&self) -> f64 {
        [
            self.holomorphy,
            self.continuity,
            self.inner_re_spread,
            self.outer_re_max,
            self.zero_at_y,
            self.residue_error,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

/// Evaluates every property of [`VectorField`] at a fixed set of probe
/// points (64 per circle).
pub fn v_field_properties(field: &VectorField) -> Result<VFieldReport> {
    let dom = field.domain();
    let q = dom.q();
    let x = field.x();
    let theta_x = x.arg();
    let probes = 64;
    let on = |r: f64, t: f64| Complex64::from_polar(r, t);

    let mut outer_re_max = 0.0f64;
    let mut inner = Vec::with_capacity(probes);
    let mut continuity = 0.0f64;
    for j in 0..probes {
        let t = theta_x + 0.05 + (2.0 * PI - 0.1) * (j as f64 + 0.5) / probes as f64;
        let zo = on(1.0, t);
        let vo = field.evaluate(zo)?;
        outer_re_max = outer_re_max.max((vo / zo).re.abs());
        let zi = on(q, t);
        let vi = field.evaluate(zi)?;
        inner.push((vi / zi).re);
        if j % 4 == 0 {
            let delta = 1e-10;
            let jump_o = (field.evaluate(on(1.0 - delta, t))? - vo).norm();
            let jump_i = (field.evaluate(on(q * (1.0 + delta), t))? - vi).norm();
            continuity = continuity.max(jump_o).max(jump_i);
        }
    }
    let inner_max = inner.iter().cloned().fold(f64::MIN, f64::max);
    let inner_min = inner.iter().cloned().fold(f64::MAX, f64::min);
    let inner_re_constant = inner.iter().sum::<f64>() / inner.len() as f64;

    let zero_at_y = field.evaluate(field.y())?.norm();

    // residue by a circle around x, completed outside the annulus by reflection
    let rho = 1e-2f64.min((1.0 - q) / 4.0);
    let m = 256;
    let mut res = Complex64::new(0.0, 0.0);
    for j in 0..m {
        let e = Complex64::from_polar(1.0, angle(j, m));
        res += field.evaluate_reflected(x + rho * e)? * rho * e;
    }
    res /= m as f64;
    let residue_error = (res + 2.0 * x * x).norm();

    // Cauchy integral around an interior point well away from x
    let r0 = q.sqrt();
    let c0 = on(r0, theta_x + PI / 2.0);
    let rad = 0.25 * (1.0 - r0).min(r0 - q);
    let mut loop_int = Complex64::new(0.0, 0.0);
    let mut vmax = 0.0f64;
    for j in 0..m {
        let e = Complex64::from_polar(1.0, angle(j, m));
        let v = field.evaluate(c0 + rad * e)?;
        vmax = vmax.max(v.norm());
        loop_int += v * rad * e;
    }
    let holomorphy = (loop_int / m as f64).norm() / (rad * vmax.max(1e-300));

    Ok(VFieldReport {
        q,
        x_angle: theta_x,
        y_angle: field.y().arg(),
        holomorphy,
        continuity,
        inner_re_spread: inner_max - inner_min,
        inner_re_constant,
        outer_re_max,
        zero_at_y,
        residue_error,
    })
}
