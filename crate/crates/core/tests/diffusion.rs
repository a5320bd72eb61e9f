use annulus_sle::cardy::{cardy_pn_asymptote, cardy_pn_from_a};
use annulus_sle::diffusion::{
    apply_cn_operator, estimate_circuit_probs, invert_cn, run_path, sde_step, simulate_many,
    simulate_trajectory, AbsorbingEdge, HalfStripState, SdeConfig,
};
use annulus_sle::elliptic::ModulusParam;
use annulus_sle::mc::{task_rng, McEstimate};
use annulus_sle::Error;
use proptest::prelude::*;
use rand::Rng;
use rand_distr::StandardNormal;
use std::f64::consts::PI;

#[test]
fn midline_is_a_fixed_point_without_noise() {
    let cfg = SdeConfig::default();
    for &a in &[-0.3, -2.0, -9.0] {
        let s = HalfStripState::new(PI, a, AbsorbingEdge::Zero).unwrap();
        let next = sde_step(s, 0.0, &cfg);
        assert!((next.nu() - PI).abs() < 1e-12);
        assert!((next.a() - (a + cfg.h)).abs() < 1e-15);
    }
}

#[test]
fn deep_annulus_steps_follow_cotangent_drift() {
    let cfg = SdeConfig {
        h: 1e-3,
        ..SdeConfig::default()
    };
    let nu = 1.0;
    let s = HalfStripState::new(nu, -20.0, AbsorbingEdge::Zero).unwrap();
    let expect = 1.0 / (nu / 2.0).tan();
    let noiseless = (sde_step(s, 0.0, &cfg).nu() - nu) / cfg.h;
    assert!((noiseless - expect).abs() < 1e-8);

    let mut rng = task_rng(5, 0);
    let incr: Vec<f64> = (0..10_000)
        .map(|_| (sde_step(s, rng.sample(StandardNormal), &cfg).nu() - nu) / cfg.h)
        .collect();
    let est = McEstimate::from_samples(&incr, 5);
    assert!(est.within(expect, 4.0), "{est:?} vs {expect}");
    let var = incr.iter().map(|x| (x - est.mean).powi(2)).sum::<f64>() / incr.len() as f64;
    assert!((var * cfg.h / 6.0 - 1.0).abs() < 0.05);
}

#[test]
fn runs_are_bit_reproducible() {
    let cfg = SdeConfig {
        seed: 99,
        ..SdeConfig::default()
    };
    let start = HalfStripState::renewal_start(-0.8, &cfg).unwrap();
    let x = simulate_many(start, 64, &cfg).unwrap();
    let y = simulate_many(start, 64, &cfg).unwrap();
    assert_eq!(x, y);
    let mut r1 = task_rng(3, 1);
    let mut r2 = task_rng(3, 1);
    assert_eq!(
        simulate_trajectory(-0.5, &cfg, &mut r1).unwrap(),
        simulate_trajectory(-0.5, &cfg, &mut r2).unwrap()
    );
}

#[test]
fn mirrored_start_with_negated_noise_gives_identical_counts() {
    let cfg = SdeConfig::default();
    let start = HalfStripState::new(2.0 * PI - cfg.eps_restart, -1.5, AbsorbingEdge::Zero).unwrap();
    let mirror = HalfStripState::new(cfg.eps_restart, -1.5, AbsorbingEdge::TwoPi).unwrap();
    let mut crossings = 0;
    for i in 0..100 {
        let mut r1 = task_rng(17, i);
        let mut r2 = task_rng(17, i);
        let p = run_path(start, &cfg, || r1.sample(StandardNormal));
        let m = run_path(mirror, &cfg, || -r2.sample::<f64, _>(StandardNormal));
        assert_eq!(
            (p.crossings, p.epsilon, p.steps),
            (m.crossings, m.epsilon, m.steps)
        );
        crossings += p.crossings;
    }
    assert!(crossings > 0, "test never exercised a crossing");
}

#[test]
fn no_time_means_no_crossing() {
    let cfg = SdeConfig::default();
    let est = estimate_circuit_probs(-1e-4, 2, 10_000, &cfg).unwrap();
    assert!(1.0 - est.c[0].mean > 0.999);
    assert!(est.pn.mean > 0.998);
}

#[test]
fn estimator_identities_hold_on_the_same_samples() {
    let cfg = SdeConfig {
        seed: 4,
        ..SdeConfig::default()
    };
    let est = estimate_circuit_probs(-2.5, 30, 600, &cfg).unwrap();
    let c: Vec<f64> = est.c.iter().map(|e| e.mean).collect();
    for w in c.windows(2) {
        assert!(w[1] <= w[0]);
    }
    let series = 1.0
        + 2.0
            * c.iter()
                .enumerate()
                .map(|(i, v)| if i % 2 == 0 { -v } else { *v })
                .sum::<f64>();
    assert!((est.pn.mean - series).abs() < 1e-12);
    let mut full = vec![1.0];
    full.extend(&c);
    let inv = invert_cn(&full).unwrap();
    assert!((inv.pn - est.pn.mean).abs() < 1e-12);
    for (b, e) in inv.pb.iter().zip(&est.pb) {
        assert!((b - e.mean).abs() < 1e-12);
    }
}

#[test]
fn circuit_probabilities_are_submultiplicative() {
    let cfg = SdeConfig {
        seed: 8,
        h: 5e-4,
        ..SdeConfig::default()
    };
    let est = estimate_circuit_probs(-4.0, 4, 2000, &cfg).unwrap();
    let c1 = est.c[0].mean;
    assert!(c1 > 0.1);
    for (n, e) in est.c.iter().enumerate().skip(1) {
        let bound = c1.powi(n as i32 + 1);
        assert!(
            e.mean <= bound + 3.0 * e.stderr,
            "c_{} = {:?} vs {bound}",
            n + 1,
            e
        );
    }
}

#[test]
fn deep_annulus_matches_quarter_power_asymptote() {
    let cfg = SdeConfig {
        seed: 12,
        h: 5e-4,
        ..SdeConfig::default()
    };
    let est = estimate_circuit_probs(-5.0, 6, 2000, &cfg).unwrap();
    let m = ModulusParam::new(-5.0).unwrap();
    let target = cardy_pn_asymptote(m);
    // the asymptote and the full formula differ by far less than the noise
    assert!((target - cardy_pn_from_a(-5.0).unwrap()).abs() < 0.02);
    assert!(est.pn.within(target, 3.0), "{:?} vs {target}", est.pn);
    assert!(est.c[0].mean > 0.3);
}

#[test]
fn midline_start_parity_is_no_visit_probability() {
    // From ν = π, paths that never reach an edge keep ε = +1; the rest pair
    // up under ν ↔ 2π − ν. So E(ε) = P(no edge visit), which is not zero.
    let cfg = SdeConfig {
        seed: 21,
        ..SdeConfig::default()
    };
    let start = HalfStripState::new(PI, -1.0, AbsorbingEdge::Zero).unwrap();
    let paths = simulate_many(start, 4000, &cfg).unwrap();
    let eps: Vec<f64> = paths.iter().map(|t| f64::from(t.epsilon)).collect();
    let quiet: Vec<f64> = paths
        .iter()
        .map(|t| f64::from(u8::from(!t.touched_edge)))
        .collect();
    let e = McEstimate::from_samples(&eps, 21);
    let p = McEstimate::from_samples(&quiet, 21);
    let touched: Vec<f64> = paths
        .iter()
        .filter(|t| t.touched_edge)
        .map(|t| f64::from(t.epsilon))
        .collect();
    let signed = McEstimate::from_samples(&touched, 21);
    assert!(signed.within(0.0, 3.0), "{signed:?}");
    assert!(p.mean > 0.5 && e.mean > 10.0 * e.stderr, "{e:?} {p:?}");
}

#[test]
fn absorption_threshold_has_converged() {
    let base = SdeConfig {
        h: 1e-3,
        seed: 31,
        ..SdeConfig::default()
    };
    let half = SdeConfig {
        eps_hit: base.eps_hit / 2.0,
        seed: 32,
        ..base
    };
    let x = estimate_circuit_probs(-2.5, 1, 10_000, &base).unwrap().c[0];
    let y = estimate_circuit_probs(-2.5, 1, 10_000, &half).unwrap().c[0];
    let se = x.stderr.hypot(y.stderr);
    assert!((x.mean - y.mean).abs() < 2.0 * se, "{x:?} vs {y:?}");
}

#[test]
fn cost_cap_is_enforced() {
    let cfg = SdeConfig {
        max_steps: 1e6,
        ..SdeConfig::default()
    };
    assert!(matches!(
        estimate_circuit_probs(-3.0, 2, 1000, &cfg),
        Err(Error::Budget { .. })
    ));
    assert!(estimate_circuit_probs(-3.0, 2, 50, &SdeConfig::default()).is_err());
}

#[test]
fn inversion_of_trivial_and_geometric_sequences() {
    let inv = invert_cn(&[1.0, 0.0, 0.0, 0.0]).unwrap();
    assert_eq!(inv.pn, 1.0);
    assert!(inv.pb.iter().all(|&b| b == 0.0));

    let r: f64 = 0.37;
    let c: Vec<f64> = (0..=60).map(|n| r.powi(n)).collect();
    let inv = invert_cn(&c).unwrap();
    let k = (1.0 - r) / (1.0 + r);
    assert!((inv.pn - k).abs() < 1e-12);
    for (i, b) in inv.pb.iter().enumerate().take(20) {
        assert!((b - r.powi(i as i32 + 1) * k).abs() < 1e-12);
    }
    assert!(inv.residual.abs() <= inv.truncation_bound + 1e-15);
}

#[test]
fn inversion_rejects_bad_sequences() {
    assert!(matches!(
        invert_cn(&[1.0, 0.2, 0.3]),
        Err(Error::NonMonotone(_))
    ));
    assert!(invert_cn(&[0.9, 0.2]).is_err());
    assert!(invert_cn(&[1.0, -0.1]).is_err());
}

proptest! {
    #[test]
    fn inversion_round_trips(steps in proptest::collection::vec(0.0f64..1.0, 30)) {
        let mut c = vec![1.0];
        for s in steps {
            let last = *c.last().unwrap();
            c.push(last * s);
        }
        let inv = invert_cn(&c).unwrap();
        let mut v = vec![inv.pn];
        v.extend(&inv.pb);
        let back = apply_cn_operator(&v);
        for (x, y) in back.iter().zip(&c) {
            prop_assert!((x - y).abs() < 1e-12);
        }
    }
}
