use annulus_sle::cardy::cardy_pn_from_a;
use annulus_sle::lattice::{
    chordal_event, estimate_events, estimate_f, sample_coloring, wrapping_profile,
    BoundaryCondition, CircuitEvent, Color, Coloring, LatticeAnnulus, Scratch,
};
use annulus_sle::mc::task_rng;
use annulus_sle::Error;
use proptest::prelude::*;
use rand::Rng;
use std::f64::consts::PI;

fn lattice(q: f64, mesh: f64) -> LatticeAnnulus {
    LatticeAnnulus::new(q, mesh).unwrap()
}

fn painted(lat: &LatticeAnnulus, paint: impl Fn(usize) -> Color) -> Coloring {
    let colors = (0..lat.n_sites()).map(paint).collect();
    Coloring::from_colors(lat, colors, BoundaryCondition::Free).unwrap()
}

#[test]
fn lattice_geometry() {
    let (q, h) = (0.3, 1.0 / 40.0);
    let lat = lattice(q, h);
    let area = PI * (1.0 - q * q) / (3f64.sqrt() / 2.0 * h * h);
    assert!((lat.n_sites() as f64 / area - 1.0).abs() < 0.03);
    for s in 0..lat.n_sites() {
        let r = lat.radius(s);
        assert!(r > q && r < 1.0);
        let nb: Vec<usize> = lat.neighbors(s).collect();
        assert!(nb.len() <= 6);
        for &v in &nb {
            assert!(lat.neighbors(v).any(|w| w == s));
            let [x, y] = lat.position(s);
            let [u, w] = lat.position(v);
            assert!(((x - u).hypot(y - w) - h).abs() < 1e-12);
        }
        if nb.len() < 6 {
            assert!(lat.is_inner_boundary(s) || lat.is_outer_boundary(s));
        }
        if lat.is_inner_boundary(s) {
            assert!(r < q + 1.01 * h);
        }
        if lat.is_outer_boundary(s) {
            assert!(r > 1.0 - 1.01 * h);
        }
    }
    let arcs = lat.outer_arc_labels();
    assert!(arcs.iter().all(|&(_, t)| (0.0..2.0 * PI).contains(&t)));
    assert!(arcs.len() as f64 > 2.0 * PI / h);
}

#[test]
fn hole_smaller_than_mesh_keeps_six_inner_sites() {
    let lat = lattice((-2.0 * PI).exp(), 1.0 / 60.0);
    let inner = (0..lat.n_sites())
        .filter(|&s| lat.is_inner_boundary(s))
        .count();
    assert_eq!(inner, 6);
}

#[test]
fn invalid_lattices_are_rejected() {
    assert!(matches!(
        LatticeAnnulus::new(0.0, 0.01),
        Err(Error::Domain { .. })
    ));
    assert!(matches!(
        LatticeAnnulus::new(1.2, 0.01),
        Err(Error::Domain { .. })
    ));
    assert!(matches!(
        LatticeAnnulus::new(0.5, 0.3),
        Err(Error::Domain { .. })
    ));
    assert!(LatticeAnnulus::new(0.5, -0.1).is_err());
}

#[test]
fn chordal_data_forces_the_outer_arcs() {
    let lat = lattice(0.4, 1.0 / 30.0);
    let nu = 2.0;
    let c = sample_coloring(&lat, BoundaryCondition::Chordal { nu }, &mut task_rng(1, 0)).unwrap();
    for (s, t) in lat.outer_arc_labels() {
        let expect = if t < nu { Color::Blue } else { Color::Yellow };
        assert_eq!(c.colors()[s], expect);
    }
    assert!(sample_coloring(
        &lat,
        BoundaryCondition::Chordal { nu: 7.0 },
        &mut task_rng(1, 0)
    )
    .is_err());
}

#[test]
fn colours_are_fair_and_reproducible() {
    let lat = lattice(0.2, 1.0 / 60.0);
    let c = sample_coloring(&lat, BoundaryCondition::Free, &mut task_rng(9, 0)).unwrap();
    let n = lat.n_sites() as f64;
    assert!((c.blue_fraction() - 0.5).abs() < 3.0 * (0.25 / n).sqrt());
    let d = sample_coloring(&lat, BoundaryCondition::Free, &mut task_rng(9, 0)).unwrap();
    assert_eq!(c, d);
    let e = sample_coloring(&lat, BoundaryCondition::Free, &mut task_rng(9, 1)).unwrap();
    assert_ne!(c, e);
}

#[test]
fn monochrome_annulus_is_one_circuit() {
    let lat = lattice(0.3, 1.0 / 30.0);
    let blue = wrapping_profile(&painted(&lat, |_| Color::Blue), &lat).unwrap();
    assert_eq!(blue.n_wrap, 1);
    assert_eq!(blue.event(), CircuitEvent::Blue(1));
    assert!(blue.blue_crossing && !blue.yellow_crossing);
    let yellow = wrapping_profile(&painted(&lat, |_| Color::Yellow), &lat).unwrap();
    assert_eq!(yellow.event(), CircuitEvent::Yellow(1));
}

#[test]
fn radial_strips_of_both_colours_block_circuits() {
    let lat = lattice(0.3, 1.0 / 30.0);
    let mut rng = task_rng(4, 0);
    let random: Vec<bool> = (0..lat.n_sites()).map(|_| rng.random()).collect();
    let c = painted(&lat, |s| {
        let t = lat.angle(s);
        if (0.5..0.9).contains(&t) {
            Color::Blue
        } else if (3.5..3.9).contains(&t) {
            Color::Yellow
        } else if random[s] {
            Color::Blue
        } else {
            Color::Yellow
        }
    });
    let p = wrapping_profile(&c, &lat).unwrap();
    assert_eq!(p.n_wrap, 0);
    assert_eq!(p.event(), CircuitEvent::None);
    assert!(p.blue_crossing && p.yellow_crossing);
}

#[test]
fn concentric_bands_are_ordered_outermost_first() {
    let lat = lattice(0.2, 1.0 / 60.0);
    // bands of width 0.16 from r = 0.2, alternating, outermost (index 4) blue
    let c = painted(&lat, |s| {
        let band = ((lat.radius(s) - 0.2) / 0.16) as usize;
        if band.is_multiple_of(2) {
            Color::Blue
        } else {
            Color::Yellow
        }
    });
    let p = wrapping_profile(&c, &lat).unwrap();
    assert_eq!(p.n_wrap, 5);
    assert_eq!(
        p.colors,
        vec![
            Color::Blue,
            Color::Yellow,
            Color::Blue,
            Color::Yellow,
            Color::Blue
        ]
    );
    assert!(p.max_radius.windows(2).all(|w| w[1] < w[0]));
    assert_eq!(p.event(), CircuitEvent::Blue(5));
    assert!(!p.blue_crossing && !p.yellow_crossing);
}

#[test]
fn colour_flip_swaps_circuit_events() {
    let lat = lattice(0.1, 1.0 / 40.0);
    for i in 0..200 {
        let c = sample_coloring(&lat, BoundaryCondition::Free, &mut task_rng(2, i)).unwrap();
        let p = wrapping_profile(&c, &lat).unwrap();
        let f = wrapping_profile(&c.flipped(), &lat).unwrap();
        let swapped: Vec<Color> = p.colors.iter().map(|c| c.flipped()).collect();
        assert_eq!(f.colors, swapped);
        let expect = match p.event() {
            CircuitEvent::None => CircuitEvent::None,
            CircuitEvent::Blue(k) => CircuitEvent::Yellow(k),
            CircuitEvent::Yellow(k) => CircuitEvent::Blue(k),
        };
        assert_eq!(f.event(), expect);
    }
}

#[test]
fn event_estimates_partition_the_samples() {
    let lat = lattice(0.15, 1.0 / 30.0);
    let e = estimate_events(&lat, 2000, 11).unwrap();
    assert_eq!(e.counts.partition_defect(), 0);
    let total = e.pn.mean + e.pb.iter().chain(&e.py).map(|x| x.mean).sum::<f64>();
    assert!((total - 1.0).abs() < 1e-12);
    for ((b, y), s) in e.pb.iter().zip(&e.py).zip(&e.pb_symmetric) {
        assert!((s.mean - 0.5 * (b.mean + y.mean)).abs() < 1e-12);
        let se = b.stderr.hypot(y.stderr).max(1e-3);
        assert!((b.mean - y.mean).abs() < 4.0 * se);
    }
    let again = estimate_events(&lat, 2000, 11).unwrap();
    assert_eq!(again.counts, e.counts);
    assert!(estimate_events(&lat, 99, 11).is_err());
}

#[test]
fn resolved_annulus_matches_eta_formula() {
    let a = -3.0;
    let lat = lattice(f64::exp(a), 1.0 / 60.0);
    let e = estimate_events(&lat, 2000, 5).unwrap();
    let cardy = cardy_pn_from_a(a).unwrap();
    assert!(
        (e.pn.mean - cardy).abs() < 0.02 + 3.0 * e.pn.stderr,
        "{:?} vs {cardy}",
        e.pn
    );
}

#[test]
fn crossing_estimates() {
    let lat = lattice((-1.0f64).exp(), 1.0 / 30.0);
    // a one-site blue arc still crosses with probability ~ mesh^{1/3}
    let tiny = estimate_f(&lat, 1e-3, 500, 1).unwrap();
    let x = estimate_f(&lat, 2.0, 3000, 2).unwrap();
    assert!(
        tiny.mean < 0.5 && tiny.mean + 3.0 * tiny.stderr.hypot(x.stderr) < x.mean,
        "{tiny:?}"
    );
    let y = estimate_f(&lat, 2.0 * PI - 2.0, 3000, 3).unwrap();
    assert!(
        (x.mean - y.mean).abs() < 3.0 * x.stderr.hypot(y.stderr),
        "{x:?} {y:?}"
    );
    assert!(x.mean > 0.5);
    let free = Coloring::from_colors(
        &lat,
        vec![Color::Blue; lat.n_sites()],
        BoundaryCondition::Free,
    )
    .unwrap();
    assert!(chordal_event(&free, &lat, &mut Scratch::default()).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]
    #[test]
    fn circuits_and_crossings_are_dual(q in 0.05f64..0.6, seed in 0u64..1_000_000) {
        let lat = lattice(q, 1.0 / 12.0);
        let c = sample_coloring(&lat, BoundaryCondition::Free, &mut task_rng(seed, 0)).unwrap();
        let p = wrapping_profile(&c, &lat).unwrap();
        prop_assert_eq!(p.colors.contains(&Color::Blue), !p.yellow_crossing);
        prop_assert_eq!(p.colors.contains(&Color::Yellow), !p.blue_crossing);
    }
}
