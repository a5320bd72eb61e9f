//! Side-by-side estimates of `P(N)` from the η formula, the exit problem
//! `H`, the renewal series over `c_n` and the driving diffusion.

use serde::Serialize;
use std::str::FromStr;

use crate::cardy::cardy_pn_from_a;
use crate::diffusion::{estimate_circuit_probs, SdeConfig};
use crate::elliptic::ModulusParam;
use crate::error::{Error, Result};
use crate::pde::{solve_cn_recursion, solve_exit_h, GridSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Route {
    Cardy,
    PdeExit,
    PdeSeries,
    Sde,
}

impl Route {
    pub const ALL: [Route; 4] = [Route::Cardy, Route::PdeExit, Route::PdeSeries, Route::Sde];

    pub fn name(self) -> &'static str {
        match self {
            Route::Cardy => "cardy",
            Route::PdeExit => "pde-exit",
            Route::PdeSeries => "pde-series",
            Route::Sde => "sde",
        }
    }
}

impl FromStr for Route {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Route::ALL
            .into_iter()
            .find(|r| r.name() == s)
            .ok_or_else(|| Error::InvalidConfig(format!("unknown route {s:?}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RouteEstimate {
    pub route: Route,
    pub pn: f64,
    /// Zero for deterministic routes.
    pub stderr: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Discrepancy {
    pub first: Route,
    pub second: Route,
    pub diff: f64,
    /// `tol + 3·joint stderr`.
    pub threshold: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CompareConfig {
    pub grid: GridSpec,
    pub n_max: usize,
    pub sde: SdeConfig,
    /// Zero skips the diffusion route.
    pub sde_samples: usize,
    pub tol: f64,
}

impl CompareConfig {
    pub fn new(a: f64) -> Self {
        Self {
            grid: GridSpec::new(a),
            n_max: 6,
            sde: SdeConfig::default(),
            sde_samples: 10_000,
            tol: 1e-2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CompareReport {
    pub a: f64,
    pub q: f64,
    pub routes: Vec<RouteEstimate>,
    pub discrepancies: Vec<Discrepancy>,
    /// `c_1 … c_{n_max}` from the chained PDE solves.
    pub c_pde: Vec<f64>,
    /// The same from the diffusion, empty when skipped.
    pub c_sde: Vec<f64>,
    pub config: CompareConfig,
}

impl CompareReport {
    pub fn estimate(&self, route: Route) -> Option<&RouteEstimate> {
        self.routes.iter().find(|r| r.route == route)
    }

    /// Every computed pair within `routes` is inside its threshold.
    pub fn passes(&self, routes: &[Route]) -> bool {
        self.discrepancies
            .iter()
            .filter(|d| routes.contains(&d.first) && routes.contains(&d.second))
            .all(|d| d.pass)
    }
}

/// Runs every route at `a` and tabulates pairwise discrepancies.
pub fn compare_routes(a: f64, cfg: &CompareConfig) -> Result<CompareReport> {
    let m = ModulusParam::new(a)?;
    let mut routes = vec![RouteEstimate {
        route: Route::Cardy,
        pn: cardy_pn_from_a(a)?,
        stderr: 0.0,
    }];
    routes.push(RouteEstimate {
        route: Route::PdeExit,
        pn: solve_exit_h(m, &cfg.grid)?.pn,
        stderr: 0.0,
    });
    let series = solve_cn_recursion(m, &cfg.grid, cfg.n_max)?;
    routes.push(RouteEstimate {
        route: Route::PdeSeries,
        pn: series.parity_series(),
        stderr: 0.0,
    });
    let mut c_sde = Vec::new();
    if cfg.sde_samples > 0 {
        let est = estimate_circuit_probs(a, cfg.n_max, cfg.sde_samples, &cfg.sde)?;
        c_sde = est.c.iter().map(|e| e.mean).collect();
        routes.push(RouteEstimate {
            route: Route::Sde,
            pn: est.pn.mean,
            stderr: est.pn.stderr,
        });
    }
    let mut discrepancies = Vec::new();
    for (i, x) in routes.iter().enumerate() {
        for y in &routes[i + 1..] {
            let diff = (x.pn - y.pn).abs();
            let threshold = cfg.tol + 3.0 * x.stderr.hypot(y.stderr);
            discrepancies.push(Discrepancy {
                first: x.route,
                second: y.route,
                diff,
                threshold,
                pass: diff <= threshold,
            });
        }
    }
    Ok(CompareReport {
        a,
        q: m.q(),
        routes,
        discrepancies,
        c_pde: series.c,
        c_sde,
        config: cfg.clone(),
    })
}
