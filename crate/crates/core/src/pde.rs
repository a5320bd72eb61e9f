//! Backward equation `3u_νν + b(ν, a) u_ν + u_a = 0` of the driving
//! diffusion, marched from a terminal layer `a = −δ` towards negative `a`.
//!
//! With `m(ν) = θ₁(ν/2 | −ia/π)^{2/3}` the operator is `3 m⁻¹ (m u_ν)_ν`, so
//! the spatial part is discretised as a finite-volume scheme in flux form,
//! with face fluxes integrated exactly for exponential-linear `m`
//! (Scharfetter–Gummel). At `ν = 0` and `ν = 2π`, `m` vanishes like
//! `ν^{2/3}` and the solution of the Dirichlet problems behaves like
//! `ν^{1/3}`; the boundary cells use the exact integrals of `1/m` and `m`,
//! computed by Gauss–Legendre after the substitution `ν = x³`.
//! Time stepping is Crank–Nicolson in `s = −a`, started with two implicit
//! Euler half steps.

use serde::Serialize;
use std::f64::consts::PI;

use crate::elliptic::{theta1_log, ModulusParam, ThetaParams};
use crate::error::{Error, Result};

const TWO_PI: f64 = 2.0 * PI;
/// Tolerance of the discrete maximum principle check.
pub const RANGE_SLACK: f64 = 1e-6;

/// Which of the three boundary-value problems a field solves.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Problem {
    /// `F` on `(0, 2π)`, zero at both edges.
    Crossing,
    /// `H` on `(0, π)`, reflecting at `0`, zero at `π`.
    Exit,
    /// `W_n` on `(0, 2π)`, fed at `0` by `W_{n−1}` and reflecting at `2π`.
    Renewal { n: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridSpec {
    /// Cell count on the problem's own interval, nodes at cell centres.
    pub nu_points: usize,
    /// Most negative `a` reached by the march.
    pub a_start: f64,
    /// Terminal layer `δ`: the march starts at `a = −δ`.
    pub delta: f64,
    /// Step size in `|a|`.
    pub da: f64,
    /// Profiles kept in the returned field (first and last always kept).
    pub max_saved_levels: usize,
}

impl GridSpec {
    /// Default resolution (800 cells, step 2e-4, `δ = 1e-3`) down to `a_start`.
    pub fn new(a_start: f64) -> Self {
        Self {
            nu_points: 800,
            a_start,
            delta: 1e-3,
            da: 2e-4,
            max_saved_levels: 101,
        }
    }

    /// Twice the cells, half the step.
    pub fn refined(&self) -> Self {
        Self {
            nu_points: 2 * self.nu_points,
            da: self.da / 2.0,
            ..*self
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.nu_points < 8 {
            return Err(Error::InvalidConfig(format!(
                "need at least 8 cells, got {}",
                self.nu_points
            )));
        }
        if !(self.delta > 0.0 && self.da > 0.0 && self.a_start < -self.delta) {
            return Err(Error::InvalidConfig(format!(
                "need delta > 0, da > 0 and a_start < -delta (got {}, {}, {})",
                self.delta, self.da, self.a_start
            )));
        }
        Ok(())
    }

    fn covers(&self, a: f64) -> Result<()> {
        if a < self.a_start || a > -self.delta {
            return Err(Error::InvalidConfig(format!(
                "a = {a} is outside the marched range [{}, {}]",
                self.a_start, -self.delta
            )));
        }
        Ok(())
    }
}

/// Solution profiles on a subset of the marched levels.
#[derive(Debug, Clone, Serialize)]
pub struct GridField {
    pub problem: Problem,
    /// Node positions.
    pub nu: Vec<f64>,
    /// `a` of each saved level, from `−δ` downwards.
    pub a: Vec<f64>,
    /// `values[k][j]` at `(nu[j], a[k])`.
    pub values: Vec<Vec<f64>>,
}

impl GridField {
    /// Profile at the most negative saved level.
    pub fn last_profile(&self) -> &[f64] {
        self.values.last().expect("at least one level is saved")
    }

    /// Linear interpolation in `ν` of a profile; next to a singular
    /// Dirichlet edge the profile is continued as `ν^{1/3}`.
    pub fn interpolate(&self, profile: &[f64], nu: f64) -> f64 {
        interpolate_profile(&self.nu, profile, nu, self.problem)
    }
}

fn interpolate_profile(nodes: &[f64], profile: &[f64], nu: f64, problem: Problem) -> f64 {
    let j_max = nodes.len() - 1;
    if nu <= nodes[0] {
        return match problem {
            // reflecting edge: flat
            Problem::Exit => profile[0],
            _ => profile[0] * (nu / nodes[0]).max(0.0).cbrt(),
        };
    }
    if nu >= nodes[j_max] {
        let edge = match problem {
            Problem::Exit => PI,
            _ => TWO_PI,
        };
        return match problem {
            Problem::Crossing => {
                profile[j_max] * ((edge - nu) / (edge - nodes[j_max])).max(0.0).cbrt()
            }
            Problem::Renewal { .. } => profile[j_max],
            Problem::Exit => profile[j_max] * (edge - nu).max(0.0) / (edge - nodes[j_max]),
        };
    }
    let h = nodes[1] - nodes[0];
    let x = (nu - nodes[0]) / h;
    let j = (x.floor() as usize).min(j_max - 1);
    let f = x - j as f64;
    profile[j] * (1.0 - f) + profile[j + 1] * f
}

/// Crossing probability `F(ν, a)`.
#[derive(Debug, Clone, Serialize)]
pub struct CrossingSolution {
    pub field: GridField,
    /// `F(·, m.a)` on the nodes.
    pub profile: Vec<f64>,
    pub a: f64,
}

impl CrossingSolution {
    pub fn value(&self, nu: f64) -> f64 {
        self.field.interpolate(&self.profile, nu)
    }
}

/// Exit probability `H` and `P(N) = H(0⁺, a)`.
#[derive(Debug, Clone, Serialize)]
pub struct ExitSolution {
    pub field: GridField,
    pub profile: Vec<f64>,
    pub a: f64,
    pub pn: f64,
    /// `(a, H(0⁺, a))` at every marched level.
    pub pn_trace: Vec<(f64, f64)>,
}

/// `c_n(a) = W_n(2π, a)` for `n = 1..=n_max`.
#[derive(Debug, Clone, Serialize)]
pub struct CnSolution {
    pub a: f64,
    /// `c[n−1]` is `c_n(m.a)`.
    pub c: Vec<f64>,
    /// Every marched level `a_k`.
    pub levels: Vec<f64>,
    /// `traces[n−1][k] = c_n(a_k)`.
    pub traces: Vec<Vec<f64>>,
    /// Profiles of `W_1 … W_{n_max}`.
    pub fields: Vec<GridField>,
}

impl CnSolution {
    /// `1 + 2 Σ (−1)ⁿ c_n`.
    pub fn parity_series(&self) -> f64 {
        1.0 + 2.0
            * self
                .c
                .iter()
                .enumerate()
                .map(|(i, v)| if i % 2 == 0 { -v } else { *v })
                .sum::<f64>()
    }
}

/// Solves for `F` with terminal data 1 and zero Dirichlet data at
/// `ν ∈ {0, 2π}`; returns the field and `F(·, m.a)`.
pub fn solve_crossing_f(m: ModulusParam, g: &GridSpec) -> Result<CrossingSolution> {
    g.validate()?;
    g.covers(m.a())?;
    let layout = Layout::new(TWO_PI, g.nu_points, Bc::Dirichlet, Bc::Dirichlet);
    let mut march = March::new(&layout, g, vec![1.0; g.nu_points], Problem::Crossing, m.a());
    march.run(&layout, g, |_| (0.0, 0.0), |_, _| {})?;
    let (field, profile) = march.finish();
    Ok(CrossingSolution {
        field,
        profile,
        a: m.a(),
    })
}

/// Solves for `H` on `(0, π)`: terminal data 1, zero at `π`, zero flux at
/// `0`. `P(N)` is the quadratic extrapolation `(9H₀ − H₁)/8` to `ν = 0`
/// (the solution is even in `ν` there).
pub fn solve_exit_h(m: ModulusParam, g: &GridSpec) -> Result<ExitSolution> {
    g.validate()?;
    g.covers(m.a())?;
    let layout = Layout::new(PI, g.nu_points, Bc::Neumann, Bc::Dirichlet);
    let mut march = March::new(&layout, g, vec![1.0; g.nu_points], Problem::Exit, m.a());
    let mut trace = vec![(-g.delta, 1.0)];
    march.run(
        &layout,
        g,
        |_| (0.0, 0.0),
        |a, u| trace.push((a, even_extrapolation(u[0], u[1]))),
    )?;
    let (field, profile) = march.finish();
    let pn = interpolate_trace(&trace, m.a());
    Ok(ExitSolution {
        field,
        profile,
        a: m.a(),
        pn,
        pn_trace: trace,
    })
}

/// `c_1 … c_{n_max}` by the chained renewal problems `W_n`, `n_max ≤ 10`.
///
/// All `W_n` advance together: at each level `W_n`'s Dirichlet value at
/// `ν = 0` is the (extrapolated) value of `W_{n−1}` at `ν = 2π` on the same
/// level, `W_0 ≡ 1`.
pub fn solve_cn_recursion(m: ModulusParam, g: &GridSpec, n_max: usize) -> Result<CnSolution> {
    g.validate()?;
    g.covers(m.a())?;
    if n_max == 0 || n_max > 10 {
        return Err(Error::InvalidConfig(format!(
            "n_max must lie in 1..=10, got {n_max}"
        )));
    }
    let layout = Layout::new(TWO_PI, g.nu_points, Bc::Dirichlet, Bc::Neumann);
    let j = g.nu_points;
    let mut marches: Vec<March> = (1..=n_max)
        .map(|n| March::new(&layout, g, vec![0.0; j], Problem::Renewal { n }, m.a()))
        .collect();
    let mut traces = vec![vec![0.0]; n_max];
    let mut levels = vec![-g.delta];

    let schedule = Schedule::new(g);
    let mut op_old = Operator::build(&layout, -g.delta)?;
    // boundary feed of W_n at the previous level
    let mut feed_old = vec![1.0; n_max];
    feed_old[1..].fill(0.0);
    for step in schedule.steps() {
        let op_new = Operator::build(&layout, step.a_new)?;
        let mut feed_new = vec![0.0; n_max];
        let mut upstream = 1.0;
        for (n, march) in marches.iter_mut().enumerate() {
            feed_new[n] = upstream;
            march.advance(
                &op_old,
                &op_new,
                &step,
                (feed_old[n], 0.0),
                (feed_new[n], 0.0),
            )?;
            upstream = even_extrapolation(march.u[j - 1], march.u[j - 2]);
            traces[n].push(upstream);
        }
        levels.push(step.a_new);
        feed_old = feed_new;
        op_old = op_new;
    }
    let c = traces
        .iter()
        .map(|t| interpolate_levels(&levels, t, m.a()))
        .collect();
    let fields = marches.into_iter().map(|mch| mch.finish().0).collect();
    Ok(CnSolution {
        a: m.a(),
        c,
        levels,
        traces,
        fields,
    })
}

/// `(9u(h/2) − u(3h/2))/8`: value at the edge of a function even about it.
fn even_extrapolation(u0: f64, u1: f64) -> f64 {
    (9.0 * u0 - u1) / 8.0
}

fn interpolate_trace(trace: &[(f64, f64)], a: f64) -> f64 {
    let levels: Vec<f64> = trace.iter().map(|p| p.0).collect();
    let values: Vec<f64> = trace.iter().map(|p| p.1).collect();
    interpolate_levels(&levels, &values, a)
}

/// Linear interpolation in `a` over decreasing levels.
fn interpolate_levels(levels: &[f64], values: &[f64], a: f64) -> f64 {
    let k = levels.partition_point(|&l| l > a);
    if k == 0 {
        return values[0];
    }
    if k >= levels.len() {
        return values[levels.len() - 1];
    }
    let (a0, a1) = (levels[k - 1], levels[k]);
    let f = (a0 - a) / (a0 - a1);
    values[k - 1] * (1.0 - f) + values[k] * f
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Bc {
    Dirichlet,
    Neumann,
}

/// Interval `(0, length)` with `cells` cells; the edge at `ν = 0` is always a
/// zero of `m`, the right edge only when `length = 2π`.
///
/// `m = σ e^{s}` with `σ = sin(ν/2)^{2/3}` carrying the edge singularity and
/// `s` smooth; integrals of `σ` and `1/σ` are exact up to quadrature and
/// computed once, `e^{±s}` is fitted exponential-linearly per level.
struct Layout {
    length: f64,
    cells: usize,
    left: Bc,
    right: Bc,
    right_singular: bool,
    nodes: Vec<f64>,
    /// `ln σ` at the nodes.
    log_sigma: Vec<f64>,
    /// `∫ σ` over each cell.
    cell_sigma: Vec<f64>,
    /// `∫ 1/σ` between consecutive nodes.
    face_sigma: Vec<f64>,
    /// `∫ 1/σ` from each edge to its nearest node.
    left_edge_sigma: f64,
    right_edge_sigma: f64,
}

fn sigma(nu: f64) -> f64 {
    (0.5 * nu).sin().powf(2.0 / 3.0)
}

impl Layout {
    fn new(length: f64, cells: usize, left: Bc, right: Bc) -> Self {
        let h = length / cells as f64;
        let nodes: Vec<f64> = (0..cells).map(|j| (j as f64 + 0.5) * h).collect();
        let inv = |nu: f64| 1.0 / sigma(nu);
        Self {
            length,
            cells,
            left,
            right,
            right_singular: (length - TWO_PI).abs() < 1e-12,
            log_sigma: nodes.iter().map(|&nu| sigma(nu).ln()).collect(),
            cell_sigma: (0..cells)
                .map(|j| edge_quadrature(sigma, j as f64 * h, (j + 1) as f64 * h))
                .collect(),
            face_sigma: nodes
                .windows(2)
                .map(|p| edge_quadrature(inv, p[0], p[1]))
                .collect(),
            left_edge_sigma: edge_quadrature(inv, 0.0, nodes[0]),
            right_edge_sigma: edge_quadrature(inv, nodes[cells - 1], length),
            nodes,
        }
    }
}

/// `∫_α^β f` for `f` symmetric about `π` with at most a power singularity at
/// the edges,
/// by Gauss–Legendre after `ν = x³` measured from the nearer edge.
fn edge_quadrature(f: impl Fn(f64) -> f64, alpha: f64, beta: f64) -> f64 {
    let (xs, ws) = gauss_legendre(16);
    // f is a power of σ, symmetric about π, so near 2π it is evaluated at the
    // exact edge distance instead of at a rounded 2π − d
    let (lo, hi) = if alpha + beta <= TWO_PI {
        (alpha.cbrt(), beta.cbrt())
    } else {
        ((TWO_PI - beta).max(0.0).cbrt(), (TWO_PI - alpha).cbrt())
    };
    let half = 0.5 * (hi - lo);
    let mid = 0.5 * (hi + lo);
    xs.iter()
        .zip(&ws)
        .map(|(x, w)| {
            let xi = mid + half * x;
            w * f(xi * xi * xi) * 3.0 * xi * xi
        })
        .sum::<f64>()
        * half
}

/// `(Lu)_j = lo_j u_{j−1} + up_j u_{j+1} − (lo_j + up_j + bl_j + br_j) u_j
///  + bl_j g_L + br_j g_R`, the edge couplings living on the end cells.
struct Operator {
    lo: Vec<f64>,
    up: Vec<f64>,
    left: f64,
    right: f64,
}

/// Bernoulli function `x / (eˣ − 1)`.
fn bernoulli(x: f64) -> f64 {
    if x.abs() < 1e-8 {
        1.0 - 0.5 * x
    } else {
        x / x.exp_m1()
    }
}

impl Operator {
    fn build(layout: &Layout, a: f64) -> Result<Self> {
        let tp = ThetaParams::imaginary(-a / PI);
        let smooth = |nu: f64, log_sigma: f64| -> Result<f64> {
            Ok(2.0 / 3.0 * theta1_log(nu / TWO_PI, &tp)? - log_sigma)
        };
        let n = layout.cells;
        let s: Vec<f64> = layout
            .nodes
            .iter()
            .zip(&layout.log_sigma)
            .map(|(&nu, &ls)| smooth(nu, ls))
            .collect::<Result<_>>()?;
        let mass = &layout.cell_sigma;

        let mut lo = vec![0.0; n];
        let mut up = vec![0.0; n];
        for j in 0..n - 1 {
            let ds = s[j + 1] - s[j];
            let face = layout.face_sigma[j];
            up[j] = 3.0 * bernoulli(-ds) / (mass[j] * face);
            lo[j + 1] = 3.0 * bernoulli(ds) / (mass[j + 1] * face);
        }
        // s is even about the singular edges, so e^{−s} is flat there
        let left = match layout.left {
            Bc::Dirichlet => 3.0 / (mass[0] * layout.left_edge_sigma),
            Bc::Neumann => 0.0,
        };
        let right = match layout.right {
            Bc::Neumann => 0.0,
            Bc::Dirichlet if layout.right_singular => 3.0 / (mass[n - 1] * layout.right_edge_sigma),
            Bc::Dirichlet => {
                let ds = smooth(layout.length, sigma(layout.length).ln())? - s[n - 1];
                3.0 * bernoulli(-ds) / (mass[n - 1] * layout.right_edge_sigma)
            }
        };
        Ok(Self {
            lo,
            up,
            left,
            right,
        })
    }

    /// `(Lu)_j` including edge data `(g_L, g_R)`.
    fn apply(&self, u: &[f64], edge: (f64, f64)) -> Vec<f64> {
        let n = u.len();
        (0..n)
            .map(|j| {
                let mut v = 0.0;
                if j > 0 {
                    v += self.lo[j] * (u[j - 1] - u[j]);
                }
                if j + 1 < n {
                    v += self.up[j] * (u[j + 1] - u[j]);
                }
                if j == 0 {
                    v += self.left * (edge.0 - u[0]);
                }
                if j == n - 1 {
                    v += self.right * (edge.1 - u[n - 1]);
                }
                v
            })
            .collect()
    }
}

/// Gauss–Legendre nodes and weights on `[−1, 1]`.
fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut xs = vec![0.0; n];
    let mut ws = vec![0.0; n];
    for i in 0..n {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        xs[i] = x;
        ws[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    (xs, ws)
}

/// Step `k`: from `a_old` to `a_new` with implicitness `theta`.
struct Step {
    a_old: f64,
    a_new: f64,
    theta: f64,
}

struct Schedule {
    start: f64,
    ds: f64,
    n: usize,
}

impl Schedule {
    fn new(g: &GridSpec) -> Self {
        let span = -g.a_start - g.delta;
        let n = (span / g.da).ceil().max(1.0) as usize;
        Self {
            start: g.delta,
            ds: span / n as f64,
            n,
        }
    }

    /// Two implicit-Euler half steps, then Crank–Nicolson.
    fn steps(&self) -> Vec<Step> {
        let s = |k: f64| -(self.start + k * self.ds);
        let mut out = vec![
            Step {
                a_old: s(0.0),
                a_new: s(0.5),
                theta: 1.0,
            },
            Step {
                a_old: s(0.5),
                a_new: s(1.0),
                theta: 1.0,
            },
        ];
        for k in 1..self.n {
            out.push(Step {
                a_old: s(k as f64),
                a_new: if k + 1 == self.n {
                    s(self.n as f64)
                } else {
                    s(k as f64 + 1.0)
                },
                theta: 0.5,
            });
        }
        out
    }
}

/// State of one field being marched.
struct March {
    problem: Problem,
    u: Vec<f64>,
    nodes: Vec<f64>,
    saved_a: Vec<f64>,
    saved: Vec<Vec<f64>>,
    save_every: usize,
    counter: usize,
    target: f64,
    target_profile: Option<Vec<f64>>,
    last_a: f64,
}

impl March {
    fn new(layout: &Layout, g: &GridSpec, u0: Vec<f64>, problem: Problem, target: f64) -> Self {
        let sched = Schedule::new(g);
        let levels = sched.n + 1;
        let keep = g.max_saved_levels.max(2);
        let save_every = levels.div_ceil(keep - 1).max(1);
        Self {
            problem,
            nodes: layout.nodes.clone(),
            saved_a: vec![-g.delta],
            saved: vec![u0.clone()],
            u: u0,
            save_every,
            counter: 0,
            target,
            target_profile: if target >= -g.delta {
                Some(vec![])
            } else {
                None
            },
            last_a: -g.delta,
        }
    }

    fn run(
        &mut self,
        layout: &Layout,
        g: &GridSpec,
        edge_data: impl Fn(f64) -> (f64, f64),
        mut on_level: impl FnMut(f64, &[f64]),
    ) -> Result<()> {
        let mut op_old = Operator::build(layout, -g.delta)?;
        for step in Schedule::new(g).steps() {
            let op_new = Operator::build(layout, step.a_new)?;
            self.advance(
                &op_old,
                &op_new,
                &step,
                edge_data(step.a_old),
                edge_data(step.a_new),
            )?;
            on_level(step.a_new, &self.u);
            op_old = op_new;
        }
        Ok(())
    }

    fn advance(
        &mut self,
        op_old: &Operator,
        op_new: &Operator,
        step: &Step,
        edge_old: (f64, f64),
        edge_new: (f64, f64),
    ) -> Result<()> {
        let n = self.u.len();
        let ds = step.a_old - step.a_new;
        let th = step.theta;
        let explicit = if th < 1.0 {
            op_old.apply(&self.u, edge_old)
        } else {
            vec![0.0; n]
        };
        let mut rhs: Vec<f64> = (0..n)
            .map(|j| self.u[j] + (1.0 - th) * ds * explicit[j])
            .collect();
        rhs[0] += th * ds * op_new.left * edge_new.0;
        rhs[n - 1] += th * ds * op_new.right * edge_new.1;
        let mut sub = vec![0.0; n];
        let mut diag = vec![0.0; n];
        let mut sup = vec![0.0; n];
        for j in 0..n {
            let mut d = 0.0;
            if j > 0 {
                sub[j] = -th * ds * op_new.lo[j];
                d += op_new.lo[j];
            }
            if j + 1 < n {
                sup[j] = -th * ds * op_new.up[j];
                d += op_new.up[j];
            }
            if j == 0 {
                d += op_new.left;
            }
            if j == n - 1 {
                d += op_new.right;
            }
            diag[j] = 1.0 + th * ds * d;
        }
        let prev = std::mem::take(&mut self.u);
        self.u = thomas(&sub, &diag, &sup, &rhs);
        for (j, &v) in self.u.iter().enumerate() {
            if !(-RANGE_SLACK..=1.0 + RANGE_SLACK).contains(&v) {
                return Err(Error::Instability {
                    a: step.a_new,
                    nu: self.nodes[j],
                    value: v,
                });
            }
        }
        if self.target_profile.is_none() && step.a_new <= self.target {
            let f = (step.a_old - self.target) / ds;
            self.target_profile = Some(
                prev.iter()
                    .zip(&self.u)
                    .map(|(x, y)| x * (1.0 - f) + y * f)
                    .collect(),
            );
        }
        self.counter += 1;
        self.last_a = step.a_new;
        if self.counter.is_multiple_of(self.save_every) {
            self.saved_a.push(step.a_new);
            self.saved.push(self.u.clone());
        }
        Ok(())
    }

    fn finish(mut self) -> (GridField, Vec<f64>) {
        if *self.saved_a.last().expect("initial level saved") != self.last_a {
            self.saved_a.push(self.last_a);
            self.saved.push(self.u.clone());
        }
        let profile = match self.target_profile {
            Some(p) if !p.is_empty() => p,
            _ => self.saved[0].clone(),
        };
        (
            GridField {
                problem: self.problem,
                nu: self.nodes,
                a: self.saved_a,
                values: self.saved,
            },
            profile,
        )
    }
}

/// Tridiagonal solve (Thomas algorithm); the systems here are diagonally
/// dominant M-matrices, so no pivoting is needed.
fn thomas(sub: &[f64], diag: &[f64], sup: &[f64], rhs: &[f64]) -> Vec<f64> {
    let n = diag.len();
    let mut c = vec![0.0; n];
    let mut d = vec![0.0; n];
    c[0] = sup[0] / diag[0];
    d[0] = rhs[0] / diag[0];
    for i in 1..n {
        let m = diag[i] - sub[i] * c[i - 1];
        c[i] = sup[i] / m;
        d[i] = (rhs[i] - sub[i] * d[i - 1]) / m;
    }
    let mut x = vec![0.0; n];
    x[n - 1] = d[n - 1];
    for i in (0..n - 1).rev() {
        x[i] = d[i] - c[i] * x[i + 1];
    }
    x
}
