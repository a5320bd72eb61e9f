//! Command-line front end: every subcommand resolves its parameters from
//! flags, then an optional flat key-value config file, then defaults, and
//! writes a JSON or CSV document carrying `schema_version` and the resolved
//! configuration.

use std::collections::{BTreeMap, BTreeSet};
use std::f64::consts::PI;
use std::ffi::OsString;
use std::fmt;
use std::io::Write;
use std::path::PathBuf;

use annulus_sle::annulus::{v_field_properties, villat_dual_route, AnnulusDomain, VectorField};
use annulus_sle::cardy::cardy_pn_from_a;
use annulus_sle::compare::{compare_routes, CompareConfig, Route};
use annulus_sle::diffusion::{estimate_circuit_probs, SdeConfig};
use annulus_sle::elliptic::{drift, drift_zeta_form, ModulusParam};
use annulus_sle::lattice::{estimate_events, estimate_f, LatticeAnnulus};
use annulus_sle::pde::{solve_cn_recursion, solve_crossing_f, solve_exit_h, GridSpec};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Serialize;
use serde_json::{json, Map, Value};

pub const SCHEMA_VERSION: u32 = 1;

/// Exit codes.
pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_VALIDATION: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "annulus-sle",
    version,
    about = "Annulus SLE6 and percolation lab"
)]
struct Cli {
    /// Flat key-value file (TOML syntax); flags override its values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output file; stdout when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Master seed of Monte Carlo commands.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Print the resolved configuration to stderr.
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Drift in theta form and zeta form over a (ν, a) grid.
    DriftTable(DriftArgs),
    /// Villat quadrature against the Laurent series, and the V-field suite.
    VillatCheck(VillatArgs),
    /// Circuit probabilities from the driving diffusion.
    SimulateSde(SdeArgs),
    /// One of the three backward-equation problems.
    SolvePde(PdeArgs),
    /// Site percolation on the triangular lattice.
    Lattice(LatticeArgs),
    /// The η-quotient for P(N).
    Cardy(CardyArgs),
    /// P(N) from every route with pairwise discrepancies.
    Compare(CompareArgs),
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
struct DriftArgs {
    #[arg(long)]
    a_min: Option<f64>,
    #[arg(long)]
    a_max: Option<f64>,
    #[arg(long)]
    a_count: Option<usize>,
    #[arg(long)]
    nu_count: Option<usize>,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
struct VillatArgs {
    #[arg(long)]
    q: Option<f64>,
    /// Degree of the random trigonometric data.
    #[arg(long)]
    degree: Option<usize>,
    /// Boundary samples.
    #[arg(long)]
    samples: Option<usize>,
    /// Angles of the V-field endpoints x and y.
    #[arg(long)]
    x_angle: Option<f64>,
    #[arg(long)]
    y_angle: Option<f64>,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
struct SdeArgs {
    #[arg(long)]
    a: Option<f64>,
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    n_max: Option<usize>,
    #[arg(long)]
    h: Option<f64>,
    #[arg(long)]
    eps_hit: Option<f64>,
    #[arg(long)]
    eps_restart: Option<f64>,
    #[arg(long)]
    max_steps: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum PdeProblem {
    Crossing,
    Exit,
    Renewal,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
struct PdeArgs {
    #[arg(long, value_enum)]
    problem: Option<PdeProblem>,
    #[arg(long)]
    a: Option<f64>,
    #[arg(long)]
    nu_points: Option<usize>,
    #[arg(long)]
    da: Option<f64>,
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long)]
    n_max: Option<usize>,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
struct LatticeArgs {
    #[arg(long)]
    q: Option<f64>,
    #[arg(long)]
    mesh: Option<f64>,
    #[arg(long)]
    samples: Option<usize>,
    /// Estimate the chordal crossing probability F(ν) instead of circuits.
    #[arg(long)]
    chordal_nu: Option<f64>,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
struct CardyArgs {
    #[arg(long)]
    a: Option<f64>,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
struct CompareArgs {
    #[arg(long)]
    a: Option<f64>,
    /// Diffusion samples; 0 skips that route.
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    n_max: Option<usize>,
    #[arg(long)]
    nu_points: Option<usize>,
    #[arg(long)]
    da: Option<f64>,
    #[arg(long)]
    h: Option<f64>,
    #[arg(long)]
    tol: Option<f64>,
    /// Exit with status 2 when a checked discrepancy exceeds its threshold.
    #[arg(long)]
    strict: bool,
    /// Comma-separated routes checked by --strict (default: all).
    #[arg(long)]
    routes: Option<String>,
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Validation(String),
    Run(anyhow::Error),
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Usage(m) => write!(f, "usage error: {m}"),
            Failure::Validation(m) => write!(f, "validation failed: {m}"),
            Failure::Run(e) => write!(f, "error: {e:#}"),
        }
    }
}

impl From<annulus_sle::Error> for Failure {
    fn from(e: annulus_sle::Error) -> Self {
        match e {
            annulus_sle::Error::Domain { .. } | annulus_sle::Error::InvalidConfig(_) => {
                Failure::Usage(e.to_string())
            }
            other => Failure::Run(other.into()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Run(e.into())
    }
}

type Outcome<T> = std::result::Result<T, Failure>;

/// Values readable from the config file.
trait FromConfig: Sized + Serialize {
    fn from_config(v: &toml::Value) -> Option<Self>;
}

impl FromConfig for f64 {
    fn from_config(v: &toml::Value) -> Option<Self> {
        v.as_float().or_else(|| v.as_integer().map(|i| i as f64))
    }
}

impl FromConfig for usize {
    fn from_config(v: &toml::Value) -> Option<Self> {
        v.as_integer().and_then(|i| usize::try_from(i).ok())
    }
}

impl FromConfig for u64 {
    fn from_config(v: &toml::Value) -> Option<Self> {
        v.as_integer().and_then(|i| u64::try_from(i).ok())
    }
}

impl FromConfig for bool {
    fn from_config(v: &toml::Value) -> Option<Self> {
        v.as_bool()
    }
}

impl FromConfig for String {
    fn from_config(v: &toml::Value) -> Option<Self> {
        v.as_str().map(str::to_owned)
    }
}

/// Flag, then file, then default; records every resolved value.
struct Resolver {
    file: BTreeMap<String, toml::Value>,
    used: BTreeSet<String>,
    resolved: Map<String, Value>,
}

impl Resolver {
    fn new(path: Option<&PathBuf>) -> Outcome<Self> {
        let mut file = BTreeMap::new();
        if let Some(path) = path {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
            let table: toml::Table = text
                .parse()
                .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
            for (k, v) in table {
                if v.is_table() || v.is_array() {
                    return Err(Failure::Usage(format!("config key {k:?} is not a scalar")));
                }
                file.insert(k.replace('_', "-"), v);
            }
        }
        Ok(Self {
            file,
            used: BTreeSet::new(),
            resolved: Map::new(),
        })
    }

    fn file_value<T: FromConfig>(&mut self, key: &str) -> Outcome<Option<T>> {
        self.used.insert(key.to_owned());
        match self.file.get(key) {
            None => Ok(None),
            Some(v) => T::from_config(v)
                .map(Some)
                .ok_or_else(|| Failure::Usage(format!("config key {key:?} has the wrong type"))),
        }
    }

    fn get<T: FromConfig + Clone>(&mut self, key: &str, flag: Option<T>, default: T) -> Outcome<T> {
        let file = self.file_value(key)?;
        let v = flag.or(file).unwrap_or(default);
        self.record(key, &v);
        Ok(v)
    }

    fn get_opt<T: FromConfig + Clone>(&mut self, key: &str, flag: Option<T>) -> Outcome<Option<T>> {
        let file = self.file_value(key)?;
        let v = flag.or(file);
        self.record(key, &v);
        Ok(v)
    }

    fn switch(&mut self, key: &str, flag: bool) -> Outcome<bool> {
        let v = flag || self.file_value::<bool>(key)?.unwrap_or(false);
        self.record(key, &v);
        Ok(v)
    }

    fn record<T: Serialize>(&mut self, key: &str, v: &T) {
        self.resolved.insert(
            key.to_owned(),
            serde_json::to_value(v).unwrap_or(Value::Null),
        );
    }

    /// Rejects file keys that no parameter of the command consumed.
    fn finish(self) -> Outcome<Map<String, Value>> {
        let unknown: Vec<&String> = self
            .file
            .keys()
            .filter(|k| !self.used.contains(*k))
            .collect();
        if !unknown.is_empty() {
            return Err(Failure::Usage(format!("unknown config keys {unknown:?}")));
        }
        Ok(self.resolved)
    }
}

/// What a command produced.
enum Payload {
    Json(Value),
    /// Header and rows, plus a JSON summary used when JSON is requested.
    Table {
        header: Vec<&'static str>,
        rows: Vec<Vec<f64>>,
        summary: Value,
    },
    Text(String, Value),
}

struct Session {
    format: Option<Format>,
    out: Option<PathBuf>,
    verbose: u8,
}

/// Runs the CLI on `argv` (program name first) and returns the exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match execute(cli) {
        Ok(code) => code,
        Err(f) => {
            eprintln!("{f}");
            match f {
                Failure::Usage(_) => {
                    eprintln!("run `annulus-sle --help` for usage");
                    EXIT_USAGE
                }
                Failure::Validation(_) => EXIT_VALIDATION,
                Failure::Run(_) => EXIT_USAGE,
            }
        }
    }
}

fn execute(cli: Cli) -> Outcome<i32> {
    let mut r = Resolver::new(cli.config.as_ref())?;
    let format = match cli.format {
        Some(f) => Some(f),
        None => match r.file_value::<String>("format")? {
            Some(s) => Some(
                Format::from_str(&s, true)
                    .map_err(|_| Failure::Usage(format!("unknown format {s:?}")))?,
            ),
            None => None,
        },
    };
    let out = match cli.out {
        Some(p) => Some(p),
        None => r.file_value::<String>("out")?.map(PathBuf::from),
    };
    let session = Session {
        format,
        out,
        verbose: cli.verbose,
    };
    let (name, payload, verdict) = match cli.command {
        Command::DriftTable(args) => ("drift-table", drift_table(&mut r, args)?, None),
        Command::VillatCheck(args) => ("villat-check", villat_check(&mut r, cli.seed, args)?, None),
        Command::SimulateSde(args) => ("simulate-sde", simulate_sde(&mut r, cli.seed, args)?, None),
        Command::SolvePde(args) => ("solve-pde", solve_pde(&mut r, args)?, None),
        Command::Lattice(args) => ("lattice", lattice(&mut r, cli.seed, args)?, None),
        Command::Cardy(args) => ("cardy", cardy(&mut r, args)?, None),
        Command::Compare(args) => {
            let (payload, verdict) = compare(&mut r, cli.seed, args)?;
            ("compare", payload, verdict)
        }
    };
    let config = r.finish()?;
    if session.verbose > 0 {
        eprintln!("{name}: {}", Value::Object(config.clone()));
    }
    write_payload(&session, name, config, payload)?;
    match verdict {
        Some(msg) => Err(Failure::Validation(msg)),
        None => Ok(EXIT_OK),
    }
}

fn write_payload(
    s: &Session,
    name: &str,
    config: Map<String, Value>,
    payload: Payload,
) -> Outcome<()> {
    let document = |result: Value| {
        json!({
            "schema_version": SCHEMA_VERSION,
            "command": name,
            "config": config,
            "result": result,
        })
    };
    let text = match (payload, s.format) {
        (Payload::Json(_), Some(Format::Csv)) => {
            return Err(Failure::Usage(format!("{name} has no CSV output")));
        }
        (Payload::Json(v), _) => pretty(&document(v)),
        (Payload::Table { summary, .. }, Some(Format::Json)) => pretty(&document(summary)),
        (Payload::Table { header, rows, .. }, _) => {
            let mut t = format!(
                "# schema_version: {SCHEMA_VERSION}\n# command: {name}\n# config: {}\n{}\n",
                Value::Object(config.clone()),
                header.join(",")
            );
            for row in rows {
                let cells: Vec<String> = row.iter().map(|v| format!("{v:.17e}")).collect();
                t.push_str(&cells.join(","));
                t.push('\n');
            }
            t
        }
        (Payload::Text(_, v), Some(Format::Json)) => pretty(&document(v)),
        (Payload::Text(t, _), _) => t,
    };
    match &s.out {
        Some(path) => std::fs::write(path, text)?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values are finite or null");
    s.push('\n');
    s
}

fn to_json(v: impl Serialize) -> Outcome<Value> {
    serde_json::to_value(v).map_err(|e| Failure::Run(e.into()))
}

fn drift_table(r: &mut Resolver, args: DriftArgs) -> Outcome<Payload> {
    let a_min = r.get("a-min", args.a_min, -5.0)?;
    let a_max = r.get("a-max", args.a_max, -0.2)?;
    let a_count = r.get("a-count", args.a_count, 50usize)?;
    let nu_count = r.get("nu-count", args.nu_count, 200usize)?;
    if a_count < 2 || nu_count < 2 || !a_min.is_finite() || !a_max.is_finite() || a_min >= a_max {
        return Err(Failure::Usage(
            "need a-min < a-max and at least 2 points per axis".into(),
        ));
    }
    let mut rows = Vec::with_capacity(a_count * nu_count);
    let mut max_diff = 0.0f64;
    for i in 0..a_count {
        let a = a_min + (a_max - a_min) * i as f64 / (a_count - 1) as f64;
        let m = ModulusParam::new(a)?;
        for j in 0..nu_count {
            let nu = 0.1 + (2.0 * PI - 0.2) * j as f64 / (nu_count - 1) as f64;
            let theta = drift(nu, m)?;
            let zeta = drift_zeta_form(nu, m)?;
            max_diff = max_diff.max((theta - zeta).abs());
            rows.push(vec![nu, a, theta, zeta, (theta - zeta).abs()]);
        }
    }
    Ok(Payload::Table {
        header: vec!["nu", "a", "drift_theta", "drift_zeta", "abs_diff"],
        summary: json!({ "points": rows.len(), "max_abs_diff": max_diff }),
        rows,
    })
}

fn villat_check(r: &mut Resolver, seed: Option<u64>, args: VillatArgs) -> Outcome<Payload> {
    let seed = r.get("seed", seed, 1u64)?;
    let q = r.get("q", args.q, 0.3)?;
    let degree = r.get("degree", args.degree, 8usize)?;
    let samples = r.get("samples", args.samples, 2048usize)?;
    let x_angle = r.get("x-angle", args.x_angle, 0.0)?;
    let y_angle = r.get("y-angle", args.y_angle, 2.0)?;
    let dual = villat_dual_route(q, degree, samples, seed)?;
    let dom = AnnulusDomain::from_q(q)?;
    let field = VectorField::new(
        Complex64::from_polar(1.0, x_angle),
        Complex64::from_polar(1.0, y_angle),
        dom,
    )?;
    let report = v_field_properties(&field)?;
    Ok(Payload::Json(json!({
        "dirichlet": to_json(&dual)?,
        "v_field": to_json(&report)?,
        "v_field_max_residual": report.max_residual(),
    })))
}

fn sde_config(r: &mut Resolver, seed: u64, h: Option<f64>) -> Outcome<SdeConfig> {
    let base = SdeConfig::default();
    Ok(SdeConfig {
        h: r.get("h", h, base.h)?,
        seed,
        ..base
    })
}

fn simulate_sde(r: &mut Resolver, seed: Option<u64>, args: SdeArgs) -> Outcome<Payload> {
    let seed = r.get("seed", seed, 1u64)?;
    let a = r.get("a", args.a, -1.0)?;
    let samples = r.get("samples", args.samples, 10_000usize)?;
    let n_max = r.get("n-max", args.n_max, 6usize)?;
    let mut cfg = sde_config(r, seed, args.h)?;
    cfg.eps_hit = r.get("eps-hit", args.eps_hit, cfg.eps_hit)?;
    cfg.eps_restart = r.get("eps-restart", args.eps_restart, cfg.eps_restart)?;
    cfg.max_steps = r.get("max-steps", args.max_steps, cfg.max_steps)?;
    let est = estimate_circuit_probs(a, n_max, samples, &cfg)?;
    let rows = est
        .c
        .iter()
        .enumerate()
        .map(|(n, e)| vec![(n + 1) as f64, e.mean, e.stderr])
        .collect();
    let summary = json!({ "estimates": to_json(&est)?, "cardy_pn": cardy_pn_from_a(a)? });
    Ok(Payload::Table {
        header: vec!["n", "c_n", "stderr"],
        rows,
        summary,
    })
}

fn solve_pde(r: &mut Resolver, args: PdeArgs) -> Outcome<Payload> {
    let problem = match args.problem {
        Some(p) => p,
        None => match r.file_value::<String>("problem")? {
            Some(s) => PdeProblem::from_str(&s, true)
                .map_err(|_| Failure::Usage(format!("unknown problem {s:?}")))?,
            None => PdeProblem::Crossing,
        },
    };
    r.record("problem", &format!("{problem:?}").to_lowercase());
    let a = r.get("a", args.a, -1.0)?;
    let base = GridSpec::new(a);
    let grid = GridSpec {
        nu_points: r.get("nu-points", args.nu_points, base.nu_points)?,
        da: r.get("da", args.da, base.da)?,
        delta: r.get("delta", args.delta, base.delta)?,
        ..base
    };
    let m = ModulusParam::new(a)?;
    Ok(match problem {
        PdeProblem::Crossing => {
            let f = solve_crossing_f(m, &grid)?;
            let rows = f
                .field
                .nu
                .iter()
                .zip(&f.profile)
                .map(|(n, v)| vec![*n, *v])
                .collect();
            Payload::Table {
                header: vec!["nu", "F"],
                rows,
                summary: json!({ "a": a, "F_pi": f.value(PI), "grid": to_json(grid)? }),
            }
        }
        PdeProblem::Exit => {
            let h = solve_exit_h(m, &grid)?;
            let rows = h
                .field
                .nu
                .iter()
                .zip(&h.profile)
                .map(|(n, v)| vec![*n, *v])
                .collect();
            Payload::Table {
                header: vec!["nu", "H"],
                rows,
                summary: json!({ "a": a, "pn": h.pn, "grid": to_json(grid)? }),
            }
        }
        PdeProblem::Renewal => {
            let n_max = r.get("n-max", args.n_max, 6usize)?;
            let c = solve_cn_recursion(m, &grid, n_max)?;
            let stride = (c.levels.len() / 1000).max(1);
            let rows = (0..c.levels.len())
                .step_by(stride)
                .map(|k| {
                    let mut row = vec![c.levels[k]];
                    row.extend(c.traces.iter().map(|t| t[k]));
                    row
                })
                .collect();
            const NAMES: [&str; 11] = [
                "a", "c1", "c2", "c3", "c4", "c5", "c6", "c7", "c8", "c9", "c10",
            ];
            Payload::Table {
                header: NAMES[..=n_max].to_vec(),
                rows,
                summary: json!({
                    "a": a,
                    "c": c.c,
                    "parity_series": c.parity_series(),
                    "grid": to_json(grid)?,
                }),
            }
        }
    })
}

fn lattice(r: &mut Resolver, seed: Option<u64>, args: LatticeArgs) -> Outcome<Payload> {
    let seed = r.get("seed", seed, 1u64)?;
    let q = r.get("q", args.q, (-2.0 * PI).exp())?;
    let mesh = r.get("mesh", args.mesh, 1.0 / 60.0)?;
    let samples = r.get("samples", args.samples, 2_000usize)?;
    let chordal = r.get_opt("chordal-nu", args.chordal_nu)?;
    let lat = LatticeAnnulus::new(q, mesh)?;
    Ok(Payload::Json(match chordal {
        Some(nu) => {
            let f = estimate_f(&lat, nu, samples, seed)?;
            json!({ "sites": lat.n_sites(), "mesh": mesh, "nu": nu, "F": to_json(f)? })
        }
        None => {
            let e = estimate_events(&lat, samples, seed)?;
            json!({
                "sites": lat.n_sites(),
                "mesh": mesh,
                "events": to_json(&e)?,
                "identity_check": e.counts.partition_defect() == 0,
                "cardy_pn": cardy_pn_from_a(q.ln())?,
            })
        }
    }))
}

fn cardy(r: &mut Resolver, args: CardyArgs) -> Outcome<Payload> {
    let a = r
        .get_opt("a", args.a)?
        .ok_or_else(|| Failure::Usage("cardy needs --a".into()))?;
    let p = cardy_pn_from_a(a)?;
    Ok(Payload::Text(
        format!("{p:.12}\n"),
        json!({ "a": a, "pn": p }),
    ))
}

fn compare(
    r: &mut Resolver,
    seed: Option<u64>,
    args: CompareArgs,
) -> Outcome<(Payload, Option<String>)> {
    let seed = r.get("seed", seed, 1u64)?;
    let a = r.get("a", args.a, -2.0)?;
    let mut cfg = CompareConfig::new(a);
    cfg.sde_samples = r.get("samples", args.samples, cfg.sde_samples)?;
    cfg.n_max = r.get("n-max", args.n_max, cfg.n_max)?;
    cfg.grid.nu_points = r.get("nu-points", args.nu_points, cfg.grid.nu_points)?;
    cfg.grid.da = r.get("da", args.da, cfg.grid.da)?;
    cfg.tol = r.get("tol", args.tol, cfg.tol)?;
    cfg.sde = sde_config(r, seed, args.h)?;
    let strict = r.switch("strict", args.strict)?;
    let routes = match r.get_opt("routes", args.routes)? {
        Some(list) => list
            .split(',')
            .map(|s| s.trim().parse::<Route>())
            .collect::<annulus_sle::Result<Vec<_>>>()?,
        None => Route::ALL.to_vec(),
    };
    let report = compare_routes(a, &cfg)?;
    let pass = report.passes(&routes);
    let verdict = (strict && !pass).then(|| {
        let failing: Vec<String> = report
            .discrepancies
            .iter()
            .filter(|d| !d.pass && routes.contains(&d.first) && routes.contains(&d.second))
            .map(|d| {
                format!(
                    "{}/{}: {:.3e} > {:.3e}",
                    d.first.name(),
                    d.second.name(),
                    d.diff,
                    d.threshold
                )
            })
            .collect();
        failing.join("; ")
    });
    let mut value = to_json(&report)?;
    value["checked_routes"] = to_json(routes.iter().map(|r| r.name()).collect::<Vec<_>>())?;
    value["pass"] = Value::Bool(pass);
    Ok((Payload::Json(value), verdict))
}
