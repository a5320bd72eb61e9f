//! Monte Carlo for the driving diffusion `dν = −√6 dB + b(ν, a) da` on the
//! half-strip `a < 0`, `0 < ν < 2π`.
//!
//! One edge of the strip is absorbing and the other reflecting. Each
//! absorption counts a crossing, after which the roles swap and the path
//! restarts next to the edge it just hit. The state is stored as the
//! distance to the absorbing edge, which makes the `ν ↔ 2π − ν` symmetry
//! exact in floating point.

use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::Serialize;
use std::f64::consts::PI;

use crate::elliptic::drift_raw;
use crate::error::{Error, Result};
use crate::mc::{task_rng, McEstimate};

/// SLE parameter; the reduction to a one-dimensional diffusion relies on
/// locality, so it is fixed.
pub const KAPPA: f64 = 6.0;

/// Below this `|a|` the drift pins `ν` to the midline and no edge can be
/// reached; trajectories stop there instead of creeping towards `a = 0`.
pub const TERMINAL_LAYER: f64 = 1e-9;

const TWO_PI: f64 = 2.0 * PI;

/// Which edge of the strip currently absorbs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum AbsorbingEdge {
    /// `ν = 0`
    Zero,
    /// `ν = 2π`
    TwoPi,
}

impl AbsorbingEdge {
    fn flipped(self) -> Self {
        match self {
            Self::Zero => Self::TwoPi,
            Self::TwoPi => Self::Zero,
        }
    }

    /// Sign of the Brownian increment in the distance coordinate.
    fn noise_sign(self) -> f64 {
        match self {
            Self::Zero => -1.0,
            Self::TwoPi => 1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HalfStripState {
    dist: f64,
    a: f64,
    crossings: u32,
    absorbing: AbsorbingEdge,
}

impl HalfStripState {
    pub fn new(nu: f64, a: f64, absorbing: AbsorbingEdge) -> Result<Self> {
        if !(nu > 0.0 && nu < TWO_PI) {
            return Err(Error::Domain {
                what: "diffusion state nu (must lie in (0, 2π))",
                value: nu,
            });
        }
        if !(a < 0.0 && a.is_finite()) {
            return Err(Error::Domain {
                what: "diffusion time a (must be negative)",
                value: a,
            });
        }
        let dist = match absorbing {
            AbsorbingEdge::Zero => nu,
            AbsorbingEdge::TwoPi => TWO_PI - nu,
        };
        Ok(Self {
            dist,
            a,
            crossings: 0,
            absorbing,
        })
    }

    /// The renewal start: next to `ν = 2π`, with `ν = 0` absorbing.
    pub fn renewal_start(a0: f64, cfg: &SdeConfig) -> Result<Self> {
        Self::new(TWO_PI - cfg.eps_restart, a0, AbsorbingEdge::Zero)
    }

    pub fn nu(&self) -> f64 {
        match self.absorbing {
            AbsorbingEdge::Zero => self.dist,
            AbsorbingEdge::TwoPi => TWO_PI - self.dist,
        }
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn crossings(&self) -> u32 {
        self.crossings
    }

    pub fn absorbing(&self) -> AbsorbingEdge {
        self.absorbing
    }

    /// Distance to the absorbing edge.
    pub fn distance(&self) -> f64 {
        self.dist
    }

    pub fn is_finished(&self) -> bool {
        self.a >= 0.0
    }

    /// `(−1)^M`.
    pub fn epsilon(&self) -> i8 {
        parity(self.crossings)
    }
}

fn parity(m: u32) -> i8 {
    if m.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SdeConfig {
    /// Base step in `a`.
    pub h: f64,
    /// A path closer than this to an edge has hit it.
    pub eps_hit: f64,
    /// Restart distance from the edge after a hit or reflection.
    pub eps_restart: f64,
    pub seed: u64,
    /// Pair each path with the one driven by the negated noise.
    pub antithetic: bool,
    /// Cap on the expected number of Euler steps of an estimator run.
    pub max_steps: f64,
}

impl Default for SdeConfig {
    fn default() -> Self {
        Self {
            h: 1e-4,
            eps_hit: 1e-4,
            eps_restart: 1e-3,
            seed: 1,
            antithetic: true,
            max_steps: 5e10,
        }
    }
}

impl SdeConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.h > 0.0 && self.h.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "step h must be > 0, got {}",
                self.h
            )));
        }
        if !(self.eps_hit > 0.0 && self.eps_hit <= self.eps_restart && self.eps_restart < 0.1) {
            return Err(Error::InvalidConfig(format!(
                "need 0 < eps_hit <= eps_restart < 0.1, got {} and {}",
                self.eps_hit, self.eps_restart
            )));
        }
        Ok(())
    }
}

/// One Euler–Maruyama step with the given standard normal draw.
///
/// The step is `min(h, −a)`, shrunk further so the drift moves the path by
/// at most a quarter of its distance to the nearer edge. Hitting the
/// absorbing edge counts a crossing, swaps the edges and restarts at
/// `eps_restart` from the edge just hit; approaching the reflecting edge
/// resets the path to the same distance.
pub fn sde_step(s: HalfStripState, gaussian: f64, cfg: &SdeConfig) -> HalfStripState {
    let d = s.dist;
    let b = drift_raw(d, s.a);
    let near = d.min(TWO_PI - d);
    let mut h = cfg.h.min(-s.a);
    if b.abs() * h > 0.25 * near {
        h = 0.25 * near / b.abs();
    }
    let mut next = s;
    next.dist = d + s.absorbing.noise_sign() * (KAPPA * h).sqrt() * gaussian + b * h;
    next.a = s.a + h;
    if next.a > -TERMINAL_LAYER {
        next.a = 0.0;
    }
    if next.dist <= cfg.eps_hit {
        next.crossings += 1;
        next.absorbing = s.absorbing.flipped();
        next.dist = TWO_PI - cfg.eps_restart;
    } else if next.dist >= TWO_PI - cfg.eps_hit {
        next.dist = TWO_PI - cfg.eps_restart;
    }
    next
}

/// Outcome of one path.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Trajectory {
    pub crossings: u32,
    pub epsilon: i8,
    pub steps: u64,
    /// Whether the path ever came within `eps_hit` of either edge.
    pub touched_edge: bool,
}

/// Runs `start` to `a = 0`, drawing normals from `gaussian`.
pub fn run_path(
    start: HalfStripState,
    cfg: &SdeConfig,
    mut gaussian: impl FnMut() -> f64,
) -> Trajectory {
    let mut s = start;
    let mut steps = 0;
    let mut touched = false;
    while !s.is_finished() {
        let before = s;
        s = sde_step(s, gaussian(), cfg);
        if s.crossings != before.crossings || s.dist == TWO_PI - cfg.eps_restart {
            touched = true;
        }
        steps += 1;
    }
    Trajectory {
        crossings: s.crossings,
        epsilon: s.epsilon(),
        steps,
        touched_edge: touched,
    }
}

/// One renewal path from `a0` with its own generator: returns `(M, ε)`.
pub fn simulate_trajectory(a0: f64, cfg: &SdeConfig, rng: &mut impl Rng) -> Result<(u32, i8)> {
    cfg.validate()?;
    let start = HalfStripState::renewal_start(a0, cfg)?;
    let t = run_path(start, cfg, || rng.sample(StandardNormal));
    Ok((t.crossings, t.epsilon))
}

/// Runs `n` paths from `start` (antithetic pairs if configured), in
/// parallel, returning them in a fixed order independent of scheduling.
pub fn simulate_many(start: HalfStripState, n: usize, cfg: &SdeConfig) -> Result<Vec<Trajectory>> {
    cfg.validate()?;
    let expected = n as f64 * (-start.a() / cfg.h).max(1.0) * 1.2;
    if expected > cfg.max_steps {
        return Err(Error::Budget {
            requested: expected,
            cap: cfg.max_steps,
        });
    }
    let seed = cfg.seed;
    if cfg.antithetic {
        let pairs = n.div_ceil(2);
        let out: Vec<[Trajectory; 2]> = (0..pairs)
            .into_par_iter()
            .map(|i| {
                let mut r1 = task_rng(seed, i as u64);
                let mut r2 = r1.clone();
                let t1 = run_path(start, cfg, || r1.sample(StandardNormal));
                let t2 = run_path(start, cfg, || -r2.sample::<f64, _>(StandardNormal));
                [t1, t2]
            })
            .collect();
        Ok(out.into_iter().flatten().collect())
    } else {
        Ok((0..n)
            .into_par_iter()
            .map(|i| {
                let mut r = task_rng(seed, i as u64);
                run_path(start, cfg, || r.sample(StandardNormal))
            })
            .collect())
    }
}

/// Monte Carlo estimates of `c_n = P(M ≥ n)`, `P(N) = E(ε)` and `P(B_i)`.
#[derive(Debug, Clone, Serialize)]
pub struct CircuitEstimates {
    pub a0: f64,
    /// `c_1 … c_{n_max}`
    pub c: Vec<McEstimate>,
    pub pn: McEstimate,
    /// `P(B_1) … P(B_{n_max})`
    pub pb: Vec<McEstimate>,
    pub mean_steps: f64,
    pub config: SdeConfig,
}

/// Renewal paths from `a0`; `n_samples ≥ 100`.
///
/// Standard errors are computed from antithetic pair averages when pairs
/// are used. `P(B_i)` is the mean of the per-path statistic whose
/// expectation is the truncated inversion formula, so its mean coincides
/// with [`invert_cn`] applied to the empirical `ĉ_n`.
pub fn estimate_circuit_probs(
    a0: f64,
    n_max: usize,
    n_samples: usize,
    cfg: &SdeConfig,
) -> Result<CircuitEstimates> {
    if n_samples < 100 {
        return Err(Error::InvalidConfig(format!(
            "need at least 100 samples, got {n_samples}"
        )));
    }
    if n_max == 0 {
        return Err(Error::InvalidConfig("n_max must be at least 1".into()));
    }
    let start = HalfStripState::renewal_start(a0, cfg)?;
    let paths = simulate_many(start, n_samples, cfg)?;
    let ms: Vec<u32> = paths.iter().map(|t| t.crossings).collect();

    let stat = |f: &dyn Fn(u32) -> f64| -> McEstimate {
        let xs: Vec<f64> = ms.iter().map(|&m| f(m)).collect();
        if cfg.antithetic {
            let pairs: Vec<(f64, f64)> = xs.chunks_exact(2).map(|p| (p[0], p[1])).collect();
            McEstimate::from_pairs(&pairs, cfg.seed)
        } else {
            McEstimate::from_samples(&xs, cfg.seed)
        }
    };
    let c: Vec<McEstimate> = (1..=n_max)
        .map(|n| stat(&|m| f64::from(u8::from(m as usize >= n))))
        .collect();
    let pn = stat(&|m| f64::from(parity(m)));
    let pb = (1..=n_max)
        .map(|i| stat(&|m| truncated_b_statistic(m as usize, i, n_max)))
        .collect();
    let mean_steps = paths.iter().map(|t| t.steps as f64).sum::<f64>() / paths.len() as f64;
    Ok(CircuitEstimates {
        a0,
        c,
        pn,
        pb,
        mean_steps,
        config: *cfg,
    })
}

/// `1{M≥i} + 2 Σ_{n=1}^{K−i} (−1)ⁿ 1{M≥n+i}`.
fn truncated_b_statistic(m: usize, i: usize, k: usize) -> f64 {
    let mut x = f64::from(u8::from(m >= i));
    for n in 1..=k - i {
        if m >= n + i {
            x += if n % 2 == 0 { 2.0 } else { -2.0 };
        }
    }
    x
}

/// Result of [`invert_cn`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CnInversion {
    pub pn: f64,
    /// `P(B_1) … P(B_K)`
    pub pb: Vec<f64>,
    /// `2 c_K`, a bound on the effect of truncating the alternating tails.
    pub truncation_bound: f64,
    /// `1 − (P(N) + 2 Σ P(B_i))`.
    pub residual: f64,
}

/// Inverts `c_i = P(B_i) + 2 Σ_{k>i} P(B_k)` (with `B_0 = N`, `c_0 = 1`):
/// `P(B_i) = c_i + 2 Σ_{n≥1} (−1)ⁿ c_{n+i}`, the sums cut at `K`.
///
/// `c` is `(c_0 = 1, c_1, …, c_K)`; it must be non-increasing in `[0, 1]`.
///
/// ```
/// use annulus_sle::diffusion::invert_cn;
///
/// let r: f64 = 0.3;
/// let c: Vec<f64> = (0..40).map(|n| r.powi(n)).collect();
/// let inv = invert_cn(&c).unwrap();
/// assert!((inv.pn - (1.0 - r) / (1.0 + r)).abs() < 1e-12);
/// ```
pub fn invert_cn(c: &[f64]) -> Result<CnInversion> {
    if c.is_empty() || (c[0] - 1.0).abs() > 1e-12 {
        return Err(Error::NonMonotone(
            "sequence must start with c_0 = 1".into(),
        ));
    }
    for (i, w) in c.windows(2).enumerate() {
        if !(w[1] >= 0.0 && w[1] <= w[0] + 1e-12) {
            return Err(Error::NonMonotone(format!(
                "c_{} = {} does not lie in [0, c_{} = {}]",
                i + 1,
                w[1],
                i,
                w[0]
            )));
        }
    }
    let k = c.len() - 1;
    let p: Vec<f64> = (0..=k)
        .map(|i| {
            let mut tail = 0.0;
            for n in (1..=k - i).rev() {
                tail += if n % 2 == 0 { c[n + i] } else { -c[n + i] };
            }
            c[i] + 2.0 * tail
        })
        .collect();
    let total = p[0] + 2.0 * p[1..].iter().sum::<f64>();
    Ok(CnInversion {
        pn: p[0],
        pb: p[1..].to_vec(),
        truncation_bound: 2.0 * c[k],
        residual: 1.0 - total,
    })
}

/// The forward map `w = (Id + 2J + 2J² + …) v` on a truncated sequence,
/// `J` the left shift: `w_i = v_i + 2 Σ_{j>i} v_j`.
pub fn apply_cn_operator(v: &[f64]) -> Vec<f64> {
    let mut w = vec![0.0; v.len()];
    let mut tail = 0.0;
    for i in (0..v.len()).rev() {
        w[i] = v[i] + 2.0 * tail;
        tail += v[i];
    }
    w
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn truncated_statistic_is_signed_parity_when_untruncated() {
        for m in 0..6 {
            for i in 1..=5 {
                let want = if m >= i {
                    f64::from(parity((m - i) as u32))
                } else {
                    0.0
                };
                assert_eq!(truncated_b_statistic(m, i, 20), want);
            }
        }
    }

    #[test]
    fn renewal_swaps_edges() {
        let cfg = SdeConfig::default();
        let s = HalfStripState::new(2e-4, -1.0, AbsorbingEdge::Zero).unwrap();
        let next = sde_step(s, 10.0, &cfg);
        assert_eq!(next.crossings(), 1);
        assert_eq!(next.absorbing(), AbsorbingEdge::TwoPi);
        assert!((next.nu() - cfg.eps_restart).abs() < 1e-15);
    }

    #[test]
    fn reflecting_edge_resets_without_counting() {
        let cfg = SdeConfig::default();
        let s = HalfStripState::new(2e-4, -1.0, AbsorbingEdge::TwoPi).unwrap();
        let next = sde_step(s, 10.0, &cfg);
        assert_eq!(next.crossings(), 0);
        assert_eq!(next.absorbing(), AbsorbingEdge::TwoPi);
        assert!((next.nu() - cfg.eps_restart).abs() < 1e-12);
    }

    #[test]
    fn config_validation() {
        let mut cfg = SdeConfig::default();
        assert!(cfg.validate().is_ok());
        cfg.eps_hit = 2e-3;
        assert!(cfg.validate().is_err());
        cfg = SdeConfig {
            h: 0.0,
            ..SdeConfig::default()
        };
        assert!(cfg.validate().is_err());
    }
}
