//! Critical site percolation on the triangular lattice in a round annulus
//! `q < |z| < 1`: wrapping clusters, circuit events and chordal crossings.

use rand::RngCore;
use rayon::prelude::*;
use serde::Serialize;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::mc::{task_rng, McEstimate};

const NONE: u32 = u32::MAX;
const TWO_PI: f64 = 2.0 * PI;
/// Axial neighbour offsets of the triangular lattice.
const STEPS: [(i64, i64); 6] = [(1, 0), (0, 1), (-1, 1), (-1, 0), (0, -1), (1, -1)];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Color {
    Blue,
    Yellow,
}

impl Color {
    pub fn flipped(self) -> Self {
        match self {
            Color::Blue => Color::Yellow,
            Color::Yellow => Color::Blue,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum BoundaryCondition {
    Free,
    /// Outer arc `(1, e^{iν})` blue, `(e^{iν}, 1)` yellow.
    Chordal {
        nu: f64,
    },
}

/// Sites of the triangular lattice with spacing `mesh` and centres in
/// `q < |z| < 1`, one site at the origin of the full lattice.
#[derive(Debug, Clone)]
pub struct LatticeAnnulus {
    q: f64,
    mesh: f64,
    pos: Vec<[f64; 2]>,
    radius: Vec<f64>,
    angle: Vec<f64>,
    neighbors: Vec<[u32; 6]>,
    /// Winding increment across the positive real axis along each edge.
    winding: Vec<[i8; 6]>,
    inner: Vec<bool>,
    outer: Vec<bool>,
}

impl LatticeAnnulus {
    pub fn new(q: f64, mesh: f64) -> Result<Self> {
        if !(q > 0.0 && q < 1.0) {
            return Err(Error::Domain {
                what: "inner radius q",
                value: q,
            });
        }
        if !(mesh > 0.0 && mesh < (1.0 - q) / 2.0) {
            return Err(Error::Domain {
                what: "lattice mesh",
                value: mesh,
            });
        }
        let reach = (1.2 / mesh).ceil() as i64 + 2;
        let width = (2 * reach + 1) as usize;
        let key = |i: i64, j: i64| ((j + reach) as usize) * width + (i + reach) as usize;
        let centre = |i: i64, j: i64| {
            [
                mesh * (i as f64 + 0.5 * j as f64),
                mesh * (j as f64 * 3f64.sqrt() / 2.0),
            ]
        };
        let mut index = vec![NONE; width * width];
        let mut axial = Vec::new();
        let mut pos = Vec::new();
        for j in -reach..=reach {
            for i in -reach..=reach {
                let p = centre(i, j);
                let r = p[0].hypot(p[1]);
                if r > q && r < 1.0 {
                    index[key(i, j)] = pos.len() as u32;
                    axial.push((i, j));
                    pos.push(p);
                }
            }
        }
        let radius: Vec<f64> = pos.iter().map(|p| p[0].hypot(p[1])).collect();
        let angle: Vec<f64> = pos
            .iter()
            .map(|p| p[1].atan2(p[0]).rem_euclid(TWO_PI))
            .collect();
        let n = pos.len();
        let mut neighbors = vec![[NONE; 6]; n];
        let mut winding = vec![[0i8; 6]; n];
        let mut inner = vec![false; n];
        let mut outer = vec![false; n];
        for (s, &(i, j)) in axial.iter().enumerate() {
            for (k, (di, dj)) in STEPS.iter().enumerate() {
                let v = index[key(i + di, j + dj)];
                if v == NONE {
                    let p = centre(i + di, j + dj);
                    if p[0].hypot(p[1]) <= q {
                        inner[s] = true;
                    } else {
                        outer[s] = true;
                    }
                    continue;
                }
                neighbors[s][k] = v;
                let (tu, tv) = (angle[s], angle[v as usize]);
                let d = (tv - tu + PI).rem_euclid(TWO_PI) - PI;
                winding[s][k] = ((tu + d - tv) / TWO_PI).round() as i8;
            }
        }
        let lat = Self {
            q,
            mesh,
            pos,
            radius,
            angle,
            neighbors,
            winding,
            inner,
            outer,
        };
        lat.check_connected()?;
        Ok(lat)
    }

    fn check_connected(&self) -> Result<()> {
        if !self.inner.iter().any(|&b| b) || !self.outer.iter().any(|&b| b) {
            return Err(Error::InvalidConfig("a boundary layer is empty".into()));
        }
        let mut seen = vec![false; self.n_sites()];
        let mut stack = vec![0u32];
        seen[0] = true;
        let mut count = 1;
        while let Some(u) = stack.pop() {
            for &v in self.neighbors[u as usize].iter().filter(|&&v| v != NONE) {
                if !seen[v as usize] {
                    seen[v as usize] = true;
                    count += 1;
                    stack.push(v);
                }
            }
        }
        if count != self.n_sites() {
            return Err(Error::InvalidConfig(
                "lattice annulus is disconnected".into(),
            ));
        }
        Ok(())
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn mesh(&self) -> f64 {
        self.mesh
    }

    pub fn n_sites(&self) -> usize {
        self.pos.len()
    }

    pub fn position(&self, site: usize) -> [f64; 2] {
        self.pos[site]
    }

    pub fn radius(&self, site: usize) -> f64 {
        self.radius[site]
    }

    /// Argument of the site in `[0, 2π)`.
    pub fn angle(&self, site: usize) -> f64 {
        self.angle[site]
    }

    pub fn neighbors(&self, site: usize) -> impl Iterator<Item = usize> + '_ {
        self.neighbors[site]
            .iter()
            .filter(|&&v| v != NONE)
            .map(|&v| v as usize)
    }

    /// Sites with a lattice neighbour inside the hole.
    pub fn is_inner_boundary(&self, site: usize) -> bool {
        self.inner[site]
    }

    /// Sites with a lattice neighbour outside the unit disk.
    pub fn is_outer_boundary(&self, site: usize) -> bool {
        self.outer[site]
    }

    /// Outer boundary sites with their angles, the labels of chordal data.
    pub fn outer_arc_labels(&self) -> Vec<(usize, f64)> {
        (0..self.n_sites())
            .filter(|&s| self.outer[s])
            .map(|s| (s, self.angle[s]))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Coloring {
    colors: Vec<Color>,
    bc: BoundaryCondition,
}

impl Coloring {
    /// Explicit colours; chordal data overrides the outer boundary layer.
    pub fn from_colors(
        lat: &LatticeAnnulus,
        mut colors: Vec<Color>,
        bc: BoundaryCondition,
    ) -> Result<Self> {
        if colors.len() != lat.n_sites() {
            return Err(Error::InvalidConfig(format!(
                "{} colours for {} sites",
                colors.len(),
                lat.n_sites()
            )));
        }
        apply_boundary(lat, &mut colors, bc)?;
        Ok(Self { colors, bc })
    }

    pub fn colors(&self) -> &[Color] {
        &self.colors
    }

    pub fn boundary_condition(&self) -> BoundaryCondition {
        self.bc
    }

    /// Every colour swapped, boundary condition label kept.
    pub fn flipped(&self) -> Self {
        Self {
            colors: self.colors.iter().map(|c| c.flipped()).collect(),
            bc: self.bc,
        }
    }

    pub fn blue_fraction(&self) -> f64 {
        self.colors.iter().filter(|&&c| c == Color::Blue).count() as f64 / self.colors.len() as f64
    }
}

fn apply_boundary(lat: &LatticeAnnulus, colors: &mut [Color], bc: BoundaryCondition) -> Result<()> {
    if let BoundaryCondition::Chordal { nu } = bc {
        if !(nu > 0.0 && nu < TWO_PI) {
            return Err(Error::Domain {
                what: "chordal ν",
                value: nu,
            });
        }
        for (s, theta) in lat.outer_arc_labels() {
            colors[s] = if theta < nu {
                Color::Blue
            } else {
                Color::Yellow
            };
        }
    }
    Ok(())
}

/// Fair independent colours on every site not fixed by `bc`.
pub fn sample_coloring(
    lat: &LatticeAnnulus,
    bc: BoundaryCondition,
    rng: &mut impl RngCore,
) -> Result<Coloring> {
    let mut colors = Vec::with_capacity(lat.n_sites());
    while colors.len() < lat.n_sites() {
        let bits = rng.next_u64();
        let take = (lat.n_sites() - colors.len()).min(64);
        colors.extend((0..take).map(|k| {
            if bits >> k & 1 == 1 {
                Color::Blue
            } else {
                Color::Yellow
            }
        }));
    }
    apply_boundary(lat, &mut colors, bc)?;
    Ok(Coloring { colors, bc })
}

/// Wrapping clusters of one coloring, outermost first.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CircuitProfile {
    pub n_wrap: usize,
    pub colors: Vec<Color>,
    /// Maximum site radius of each wrapping cluster, same order.
    pub max_radius: Vec<f64>,
    pub blue_crossing: bool,
    pub yellow_crossing: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CircuitEvent {
    /// No circuit.
    None,
    /// Exactly `n` circuits, the outermost blue.
    Blue(usize),
    /// Exactly `n` circuits, the outermost yellow.
    Yellow(usize),
}

impl CircuitProfile {
    pub fn event(&self) -> CircuitEvent {
        match self.colors.first() {
            None => CircuitEvent::None,
            Some(Color::Blue) => CircuitEvent::Blue(self.n_wrap),
            Some(Color::Yellow) => CircuitEvent::Yellow(self.n_wrap),
        }
    }
}

/// BFS buffers reused across samples.
#[derive(Debug, Clone, Default)]
pub struct Scratch {
    label: Vec<u32>,
    offset: Vec<i32>,
    queue: Vec<u32>,
    seen: Vec<bool>,
}

impl Scratch {
    fn reset(&mut self, n: usize) {
        self.label.clear();
        self.label.resize(n, NONE);
        self.offset.clear();
        self.offset.resize(n, 0);
        self.seen.clear();
        self.seen.resize(n, false);
    }
}

/// Wrapping clusters by a lift of each monochromatic cluster to the
/// universal cover: a cluster wraps iff some site is reached with two
/// winding offsets. Alternation, nesting order and circuit/crossing duality
/// are checked and reported as [`Error::InvariantViolation`].
pub fn wrapping_profile(c: &Coloring, lat: &LatticeAnnulus) -> Result<CircuitProfile> {
    wrapping_profile_with(c, lat, &mut Scratch::default())
}

pub fn wrapping_profile_with(
    c: &Coloring,
    lat: &LatticeAnnulus,
    scratch: &mut Scratch,
) -> Result<CircuitProfile> {
    let n = lat.n_sites();
    if c.colors.len() != n {
        return Err(Error::InvalidConfig(
            "coloring does not match lattice".into(),
        ));
    }
    scratch.reset(n);
    let colors = &c.colors;
    let mut wrapping: Vec<(f64, Color)> = Vec::new();
    let mut clusters = 0u32;
    for root in 0..n {
        if scratch.label[root] != NONE {
            continue;
        }
        let color = colors[root];
        scratch.label[root] = clusters;
        scratch.offset[root] = 0;
        scratch.queue.clear();
        scratch.queue.push(root as u32);
        let mut wraps = false;
        let mut r_max = lat.radius[root];
        let mut head = 0;
        while head < scratch.queue.len() {
            let u = scratch.queue[head] as usize;
            head += 1;
            r_max = r_max.max(lat.radius[u]);
            for k in 0..6 {
                let v = lat.neighbors[u][k];
                if v == NONE || colors[v as usize] != color {
                    continue;
                }
                let v = v as usize;
                let lifted = scratch.offset[u] + i32::from(lat.winding[u][k]);
                if scratch.label[v] == NONE {
                    scratch.label[v] = clusters;
                    scratch.offset[v] = lifted;
                    scratch.queue.push(v as u32);
                } else if scratch.offset[v] != lifted {
                    wraps = true;
                }
            }
        }
        if wraps {
            wrapping.push((r_max, color));
        }
        clusters += 1;
    }
    wrapping.sort_by(|x, y| y.0.total_cmp(&x.0));
    for w in wrapping.windows(2) {
        if w[0].1 == w[1].1 {
            return Err(Error::InvariantViolation(format!(
                "two consecutive wrapping clusters of colour {:?}",
                w[0].1
            )));
        }
        if w[1].0 >= w[0].0 {
            return Err(Error::InvariantViolation(
                "wrapping clusters share a maximum radius".into(),
            ));
        }
    }
    let blue_crossing = crossing(lat, colors, Color::Blue, scratch);
    let yellow_crossing = crossing(lat, colors, Color::Yellow, scratch);
    if wrapping.is_empty() != (blue_crossing && yellow_crossing) {
        return Err(Error::InvariantViolation(format!(
            "{} wrapping clusters but crossings (blue {blue_crossing}, yellow {yellow_crossing})",
            wrapping.len()
        )));
    }
    Ok(CircuitProfile {
        n_wrap: wrapping.len(),
        colors: wrapping.iter().map(|w| w.1).collect(),
        max_radius: wrapping.iter().map(|w| w.0).collect(),
        blue_crossing,
        yellow_crossing,
    })
}

/// Flood fill of `color` from the sites selected by `start`, reporting
/// whether it reaches a site selected by `target`.
fn flood(
    lat: &LatticeAnnulus,
    colors: &[Color],
    color: Color,
    scratch: &mut Scratch,
    start: impl Fn(usize) -> bool,
    target: impl Fn(usize) -> bool,
) -> bool {
    scratch.seen.iter_mut().for_each(|s| *s = false);
    scratch.queue.clear();
    for (s, &c) in colors.iter().enumerate() {
        if c == color && start(s) {
            if target(s) {
                return true;
            }
            scratch.seen[s] = true;
            scratch.queue.push(s as u32);
        }
    }
    while let Some(u) = scratch.queue.pop() {
        for v in lat.neighbors(u as usize) {
            if colors[v] == color && !scratch.seen[v] {
                if target(v) {
                    return true;
                }
                scratch.seen[v] = true;
                scratch.queue.push(v as u32);
            }
        }
    }
    false
}

/// Is there a path of `color` from the outer to the inner boundary layer?
fn crossing(lat: &LatticeAnnulus, colors: &[Color], color: Color, scratch: &mut Scratch) -> bool {
    flood(
        lat,
        colors,
        color,
        scratch,
        |s| lat.outer[s],
        |s| lat.inner[s],
    )
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EventCounts {
    pub none: u64,
    /// `blue[n−1]` counts samples with exactly `n` circuits, outermost blue.
    pub blue: Vec<u64>,
    pub yellow: Vec<u64>,
    pub samples: u64,
}

impl EventCounts {
    /// Samples minus the classified counts; zero when the events partition.
    pub fn partition_defect(&self) -> i64 {
        self.samples as i64
            - self.none as i64
            - self.blue.iter().sum::<u64>() as i64
            - self.yellow.iter().sum::<u64>() as i64
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct EventEstimates {
    pub pn: McEstimate,
    pub pb: Vec<McEstimate>,
    pub py: Vec<McEstimate>,
    /// `P(B_n) = P(Y_n)` estimated from each sample and its colour flip.
    pub pb_symmetric: Vec<McEstimate>,
    pub counts: EventCounts,
    pub q: f64,
    pub mesh: f64,
}

/// Circuit events under free boundary conditions, `n ≥ 100` samples with
/// sample `i` drawn from sub-seed `i` of `seed`.
pub fn estimate_events(lat: &LatticeAnnulus, n: usize, seed: u64) -> Result<EventEstimates> {
    if n < 100 {
        return Err(Error::InvalidConfig(format!(
            "need at least 100 samples, got {n}"
        )));
    }
    let events: Vec<CircuitEvent> = (0..n as u64)
        .into_par_iter()
        .map_init(Scratch::default, |scratch, i| {
            let c = sample_coloring(lat, BoundaryCondition::Free, &mut task_rng(seed, i))?;
            Ok(wrapping_profile_with(&c, lat, scratch)?.event())
        })
        .collect::<Result<_>>()?;
    let depth = events
        .iter()
        .map(|e| match e {
            CircuitEvent::None => 0,
            CircuitEvent::Blue(k) | CircuitEvent::Yellow(k) => *k,
        })
        .max()
        .unwrap_or(0);
    let mut counts = EventCounts {
        none: 0,
        blue: vec![0; depth],
        yellow: vec![0; depth],
        samples: n as u64,
    };
    for e in &events {
        match e {
            CircuitEvent::None => counts.none += 1,
            CircuitEvent::Blue(k) => counts.blue[k - 1] += 1,
            CircuitEvent::Yellow(k) => counts.yellow[k - 1] += 1,
        }
    }
    if counts.partition_defect() != 0 {
        return Err(Error::InvariantViolation(
            "events do not partition the samples".into(),
        ));
    }
    let indicator = |pred: &dyn Fn(&CircuitEvent) -> bool| -> Vec<f64> {
        events
            .iter()
            .map(|e| f64::from(u8::from(pred(e))))
            .collect()
    };
    let pn = McEstimate::from_samples(&indicator(&|e| *e == CircuitEvent::None), seed);
    let pb = (1..=depth)
        .map(|k| McEstimate::from_samples(&indicator(&|e| *e == CircuitEvent::Blue(k)), seed))
        .collect();
    let py = (1..=depth)
        .map(|k| McEstimate::from_samples(&indicator(&|e| *e == CircuitEvent::Yellow(k)), seed))
        .collect();
    // the flip of a sample in Y_k lies in B_k and vice versa
    let pb_symmetric = (1..=depth)
        .map(|k| {
            let pairs: Vec<(f64, f64)> = events
                .iter()
                .map(|e| {
                    let b = f64::from(u8::from(*e == CircuitEvent::Blue(k)));
                    let y = f64::from(u8::from(*e == CircuitEvent::Yellow(k)));
                    (b, y)
                })
                .collect();
            McEstimate::from_pairs(&pairs, seed)
        })
        .collect();
    Ok(EventEstimates {
        pn,
        pb,
        py,
        pb_symmetric,
        counts,
        q: lat.q,
        mesh: lat.mesh,
    })
}

/// Does the chordal coloring have a blue crossing from the arc
/// `(1, e^{iν})` and a yellow crossing from `(e^{iν}, 1)` to the inner
/// boundary?
pub fn chordal_event(c: &Coloring, lat: &LatticeAnnulus, scratch: &mut Scratch) -> Result<bool> {
    let BoundaryCondition::Chordal { nu } = c.bc else {
        return Err(Error::InvalidConfig(
            "crossing event needs chordal data".into(),
        ));
    };
    scratch.reset(lat.n_sites());
    let on_arc = |s: usize, blue: bool| lat.outer[s] && ((lat.angle[s] < nu) == blue);
    let blue = flood(
        lat,
        &c.colors,
        Color::Blue,
        scratch,
        |s| on_arc(s, true),
        |s| lat.inner[s],
    );
    Ok(blue
        && flood(
            lat,
            &c.colors,
            Color::Yellow,
            scratch,
            |s| on_arc(s, false),
            |s| lat.inner[s],
        ))
}

/// Monte Carlo estimate of the crossing probability `F(ν)`.
pub fn estimate_f(lat: &LatticeAnnulus, nu: f64, n: usize, seed: u64) -> Result<McEstimate> {
    if n < 2 {
        return Err(Error::InvalidConfig(format!(
            "need at least 2 samples, got {n}"
        )));
    }
    let bc = BoundaryCondition::Chordal { nu };
    let hits: Vec<f64> = (0..n as u64)
        .into_par_iter()
        .map_init(Scratch::default, |scratch, i| {
            let c = sample_coloring(lat, bc, &mut task_rng(seed, i))?;
            Ok(f64::from(u8::from(chordal_event(&c, lat, scratch)?)))
        })
        .collect::<Result<_>>()?;
    Ok(McEstimate::from_samples(&hits, seed))
}
