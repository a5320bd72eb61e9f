//! Cardy's eta-quotient for the probability of no circuit around the hole.

use std::f64::consts::PI;

use crate::elliptic::{ln_dedekind_eta, ModulusParam};
use crate::error::{Error, Result};

/// `√3 · η(τ)η(6τ)² / (η(3τ)η(2τ)²)` with `τ = −ia/2π`.
///
/// Evaluated in log form; for thin annuli each eta factor is computed after
/// the `τ → −1/τ` transformation (see [`ln_dedekind_eta`]).
pub fn cardy_pn(m: ModulusParam) -> Result<f64> {
    let tau = m.tau_cardy();
    let log_value = 0.5 * 3f64.ln() + ln_dedekind_eta(tau)? + 2.0 * ln_dedekind_eta(6.0 * tau)?
        - ln_dedekind_eta(3.0 * tau)?
        - 2.0 * ln_dedekind_eta(2.0 * tau)?;
    // every factor is real and positive on the imaginary axis
    let residue = log_value.im - (2.0 * PI) * (log_value.im / (2.0 * PI)).round();
    if residue.abs() > 1e-12 {
        return Err(Error::Domain {
            what: "eta quotient (imaginary residue)",
            value: residue,
        });
    }
    Ok(log_value.re.exp())
}

/// [`cardy_pn`] taking the raw log-modulus; errors for `a ≥ 0`.
pub fn cardy_pn_from_a(a: f64) -> Result<f64> {
    cardy_pn(ModulusParam::new(a)?)
}

/// Leading small-`q` behaviour `√3 q^{1/4}`.
pub fn cardy_pn_asymptote(m: ModulusParam) -> f64 {
    3f64.sqrt() * (m.a() / 4.0).exp()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn thin_annulus_approaches_one() {
        let far = cardy_pn_from_a(-0.05).unwrap();
        let near = cardy_pn_from_a(-0.02).unwrap();
        // 1 − P(N) decays like exp(−c/|a|), below double resolution here
        assert!(far <= near && near <= 1.0 + 1e-12);
        assert!(1.0 - near < 1e-12, "{near}");
        let mid = cardy_pn_from_a(-0.5).unwrap();
        assert!(mid < far && 1.0 - mid > 1e-7);
    }

    #[test]
    fn deep_annulus_matches_quarter_power() {
        let m = ModulusParam::new(-30.0).unwrap();
        let ratio = cardy_pn(m).unwrap() / cardy_pn_asymptote(m);
        assert!((ratio - 1.0).abs() < 1e-8);
    }

    #[test]
    fn value_in_unit_interval_and_increasing() {
        let mut prev = 0.0;
        for i in 0..100 {
            let a = -10.0 + 9.9 * i as f64 / 99.0;
            let p = cardy_pn_from_a(a).unwrap();
            assert!(p > 0.0 && p <= 1.0 + 1e-12, "{p}");
            if 1.0 - p > 1e-13 {
                assert!(p > prev, "not increasing at a = {a}");
            } else {
                assert!(p >= prev);
            }
            prev = p;
        }
    }

    #[test]
    fn non_negative_log_modulus_is_rejected() {
        assert!(cardy_pn_from_a(0.0).is_err());
        assert!(cardy_pn_from_a(0.3).is_err());
    }
}
