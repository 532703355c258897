//! `tartan` command-line front end.
//!
//! Exit codes: 0 success, 1 usage or argument error, 2 numerical failure
//! (non-convergence, inconclusive estimate, evaluation error).

pub mod expr;
pub mod report;

use std::ffi::OsString;
use std::path::PathBuf;
use std::sync::{Arc, OnceLock};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::cantor::{CantorSpec, Interval, TartanSpec};
use crate::error::Error;
use crate::fcalc::{
    integrate2d, partial_derivative, solve_fode, Axis, BracketedValue, Coords, Integrand,
    QuadratureOptions, SupportSemantics,
};
use crate::measure::{estimate_dimension, mass, Normalization, Side, Staircase, Staircase2D};

pub use expr::{parse_expr, EvalError, Expr, ParseError, Vars};
pub use report::{Format, Report};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_NUMERICAL: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "tartan",
    version,
    about = "F^alpha-calculus on Cantor-Tartan supports"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum NormArg {
    /// S(1) = Γ(1+α).
    #[value(name = "paper", alias = "gamma")]
    Gamma,
    /// S(1) = 1/Γ(1+α).
    Raw,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum AxisArg {
    X,
    Y,
}

/// Flags shared by every subcommand.
#[derive(Debug, Clone, Args)]
struct Common {
    /// Staircase order (and Cantor dimension) on the x axis, in (0, 1].
    #[arg(long, default_value_t = 0.6)]
    alpha: f64,
    /// Order on the y axis; defaults to --alpha.
    #[arg(long)]
    beta: Option<f64>,
    /// Construction depth n.
    #[arg(long, default_value_t = 14)]
    depth: u32,
    /// Target bracket width.
    #[arg(long, default_value_t = 1e-3)]
    tol: f64,
    #[arg(long, value_enum, default_value_t = NormArg::Gamma)]
    normalization: NormArg,
    /// Samples per cell (integrate, derive, fode) or grid points per axis
    /// (staircase, staircase2d, figure).
    #[arg(long)]
    samples: Option<usize>,
    /// Write output here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Seed for randomized sampling.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Interval endpoints of the depth-n Cantor set.
    Cantor {
        #[command(flatten)]
        common: Common,
        /// Keep count; with --ratio overrides the dimension-alpha set.
        #[arg(long)]
        m: Option<u32>,
        #[arg(long)]
        ratio: Option<f64>,
    },
    /// Samples of the staircase S_F^alpha on [0, 1].
    Staircase {
        #[command(flatten)]
        common: Common,
    },
    /// Samples of S(x, y) = Sx(x)·Sy(y) on [0, 1]².
    Staircase2d {
        #[command(flatten)]
        common: Common,
    },
    /// Level-n mass of [a, b].
    Mass {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        m: Option<u32>,
        #[arg(long)]
        ratio: Option<f64>,
        #[arg(long, default_value_t = 0.0)]
        a: f64,
        #[arg(long, default_value_t = 1.0)]
        b: f64,
        /// Trial order; defaults to --alpha.
        #[arg(long)]
        order: Option<f64>,
    },
    /// Estimate the zeta-dimension of a Cantor set.
    Dimension {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 2)]
        m: u32,
        #[arg(long)]
        ratio: Option<f64>,
        #[arg(long, value_delimiter = ',', default_value = "4,6,8,10")]
        depths: Vec<u32>,
        #[arg(long, default_value_t = 0.05)]
        s_lo: f64,
        #[arg(long, default_value_t = 2.0)]
        s_hi: f64,
    },
    /// Iterated F^zeta-integral of an expression over [0, 1]².
    Integrate {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        expr: String,
        /// Allow the raw coordinates x and y in the expression.
        #[arg(long)]
        raw_xy: bool,
        /// Refinement ceiling (2^level cells per axis).
        #[arg(long, default_value_t = 13)]
        max_level: u32,
    },
    /// F^alpha-partial derivative of an expression.
    Derive {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        expr: String,
        #[arg(long)]
        raw_xy: bool,
        #[arg(long, value_enum, default_value_t = AxisArg::X)]
        axis: AxisArg,
        #[arg(long, default_value_t = 0.5)]
        x: f64,
        #[arg(long, default_value_t = 0.5)]
        y: f64,
        /// Evaluate at this many random support points instead of (x, y).
        #[arg(long)]
        points: Option<usize>,
    },
    /// Solve D_F^alpha y = h(S(x)), y(0) = y0; `Sx` in the expression is S(x).
    Fode {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        expr: String,
        #[arg(long, default_value_t = 0.0)]
        y0: f64,
        /// Number of uniform grid points on [0, 1].
        #[arg(long, default_value_t = 11)]
        points: usize,
    },
    /// Surface grids for plotting: 1 tartan, 2 staircase, 3/5 integrands,
    /// 4/6 their integrals, 7 Sx²+Sy² and its x-derivative.
    Figure {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=7))]
        id: u8,
    },
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Numerical(String),
}

impl CliError {
    fn code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Numerical(_) => EXIT_NUMERICAL,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Numerical(m) => m,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidSpec(_) | Error::Argument(_) | Error::NotOnSupport(_) => {
                CliError::Usage(e.to_string())
            }
            Error::Inconclusive(_) | Error::NotConverged { .. } | Error::Resolution(_) => {
                CliError::Numerical(e.to_string())
            }
        }
    }
}

impl From<ParseError> for CliError {
    fn from(e: ParseError) -> Self {
        CliError::Usage(e.to_string())
    }
}

/// Validated numerical settings shared by the subcommands.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub alpha: f64,
    pub beta: f64,
    pub depth: u32,
    pub tol: f64,
    pub normalization: Normalization,
    pub samples: Option<usize>,
    pub format: Option<Format>,
    pub seed: u64,
}

impl RunConfig {
    fn from_common(c: &Common) -> Result<Self, CliError> {
        let beta = c.beta.unwrap_or(c.alpha);
        for (name, v) in [("alpha", c.alpha), ("beta", beta)] {
            if !(v > 0.0 && v <= 1.0) {
                return Err(CliError::Usage(format!("--{name} {v} is outside (0, 1]")));
            }
        }
        if !(c.tol > 0.0) {
            return Err(CliError::Usage(format!("--tol {} must be positive", c.tol)));
        }
        if c.depth > 60 {
            return Err(CliError::Usage(format!(
                "--depth {} is too large (max 60)",
                c.depth
            )));
        }
        Ok(RunConfig {
            alpha: c.alpha,
            beta,
            depth: c.depth,
            tol: c.tol,
            normalization: match c.normalization {
                NormArg::Gamma => Normalization::Gamma,
                NormArg::Raw => Normalization::Raw,
            },
            samples: c.samples,
            format: c.format,
            seed: c.seed,
        })
    }

    fn stair(&self, order: f64) -> Result<Staircase, CliError> {
        Ok(Staircase::new(
            CantorSpec::with_dimension(order, self.depth)?,
            order,
            self.normalization,
        )?)
    }

    fn stair2d(&self) -> Result<Staircase2D, CliError> {
        Ok(Staircase2D::new(
            self.stair(self.alpha)?,
            self.stair(self.beta)?,
        ))
    }

    fn tartan(&self) -> Result<TartanSpec, CliError> {
        Ok(TartanSpec::with_dimensions(
            self.alpha, self.beta, self.depth,
        )?)
    }

    fn grid_points(&self, default: usize) -> Result<usize, CliError> {
        let n = self.samples.unwrap_or(default);
        if n < 2 {
            return Err(CliError::Usage("need at least 2 grid points".into()));
        }
        Ok(n)
    }

    fn samples_per_cell(&self) -> Result<usize, CliError> {
        let n = self.samples.unwrap_or(QuadratureOptions::DEFAULT_SAMPLES);
        if n < 2 {
            return Err(CliError::Usage(
                "--samples per cell must be at least 2".into(),
            ));
        }
        Ok(n)
    }
}

/// Runs one command line; returns the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match execute(cli.command) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {}", e.message());
            e.code()
        }
    }
}

fn common(cmd: &Command) -> &Common {
    match cmd {
        Command::Cantor { common, .. }
        | Command::Staircase { common }
        | Command::Staircase2d { common }
        | Command::Mass { common, .. }
        | Command::Dimension { common, .. }
        | Command::Integrate { common, .. }
        | Command::Derive { common, .. }
        | Command::Fode { common, .. }
        | Command::Figure { common, .. } => common,
    }
}

fn execute(cmd: Command) -> Result<(), CliError> {
    let common = common(&cmd).clone();
    let cfg = RunConfig::from_common(&common)?;
    let (report, default_format, failure) = match cmd {
        Command::Cantor { m, ratio, .. } => (cmd_cantor(&cfg, m, ratio)?, Format::Csv, None),
        Command::Staircase { .. } => (cmd_staircase(&cfg)?, Format::Csv, None),
        Command::Staircase2d { .. } => (cmd_staircase2d(&cfg)?, Format::Csv, None),
        Command::Mass {
            m,
            ratio,
            a,
            b,
            order,
            ..
        } => (cmd_mass(&cfg, m, ratio, a, b, order)?, Format::Json, None),
        Command::Dimension {
            m,
            ratio,
            depths,
            s_lo,
            s_hi,
            ..
        } => (
            cmd_dimension(&cfg, m, ratio, &depths, s_lo, s_hi)?,
            Format::Json,
            None,
        ),
        Command::Integrate {
            expr,
            raw_xy,
            max_level,
            ..
        } => {
            let (report, failure) = cmd_integrate(&cfg, &expr, raw_xy, max_level)?;
            (report, Format::Json, failure)
        }
        Command::Derive {
            expr,
            raw_xy,
            axis,
            x,
            y,
            points,
            ..
        } => {
            let fmt = if points.is_some() {
                Format::Csv
            } else {
                Format::Json
            };
            (
                cmd_derive(&cfg, &expr, raw_xy, axis, (x, y), points)?,
                fmt,
                None,
            )
        }
        Command::Fode {
            expr, y0, points, ..
        } => (cmd_fode(&cfg, &expr, y0, points)?, Format::Csv, None),
        Command::Figure { id, .. } => (cmd_figure(&cfg, id)?, Format::Csv, None),
    };
    let text = report.render(cfg.format.unwrap_or(default_format));
    match &common.out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display())))?,
        None => print!("{text}"),
    }
    match failure {
        Some(e) => Err(e),
        None => Ok(()),
    }
}

fn cantor_spec(
    cfg: &RunConfig,
    m: Option<u32>,
    ratio: Option<f64>,
) -> Result<CantorSpec, CliError> {
    Ok(match (m, ratio) {
        (None, None) => CantorSpec::with_dimension(cfg.alpha, cfg.depth)?,
        (m, Some(r)) => CantorSpec::new(m.unwrap_or(2), r, cfg.depth, Interval::unit())?,
        (Some(_), None) => return Err(CliError::Usage("--m requires --ratio".into())),
    })
}

fn cmd_cantor(cfg: &RunConfig, m: Option<u32>, ratio: Option<f64>) -> Result<Report, CliError> {
    let set = cantor_spec(cfg, m, ratio)?.build_intervals()?;
    let rows = set
        .intervals()
        .iter()
        .enumerate()
        .map(|(i, iv)| vec![json!(i), json!(iv.lo), json!(iv.hi)])
        .collect();
    Ok(Report::table(&["index", "lo", "hi"], rows))
}

fn unit_grid(n: usize) -> Vec<f64> {
    (0..n).map(|i| i as f64 / (n - 1) as f64).collect()
}

fn cmd_staircase(cfg: &RunConfig) -> Result<Report, CliError> {
    let stair = cfg.stair(cfg.alpha)?;
    let rows = unit_grid(cfg.grid_points(11)?)
        .into_iter()
        .map(|x| vec![json!(x), json!(stair.eval(x))])
        .collect();
    Ok(Report::table(&["x", "S"], rows))
}

fn cmd_staircase2d(cfg: &RunConfig) -> Result<Report, CliError> {
    let s2 = cfg.stair2d()?;
    let grid = unit_grid(cfg.grid_points(11)?);
    let mut rows = Vec::with_capacity(grid.len() * grid.len());
    for &x in &grid {
        for &y in &grid {
            rows.push(vec![json!(x), json!(y), json!(s2.eval(x, y))]);
        }
    }
    Ok(Report::table(&["x", "y", "S"], rows))
}

fn cmd_mass(
    cfg: &RunConfig,
    m: Option<u32>,
    ratio: Option<f64>,
    a: f64,
    b: f64,
    order: Option<f64>,
) -> Result<Report, CliError> {
    let spec = cantor_spec(cfg, m, ratio)?;
    let order = order.unwrap_or(cfg.alpha);
    let value = mass(&spec, a, b, order, cfg.depth)?;
    Ok(Report::record([
        ("mass", json!(value)),
        ("a", json!(a)),
        ("b", json!(b)),
        ("order", json!(order)),
        ("depth", json!(cfg.depth)),
    ]))
}

fn cmd_dimension(
    cfg: &RunConfig,
    m: u32,
    ratio: Option<f64>,
    depths: &[u32],
    s_lo: f64,
    s_hi: f64,
) -> Result<Report, CliError> {
    let ratio = ratio.unwrap_or_else(|| 2f64.powf(-1.0 / cfg.alpha));
    let spec = CantorSpec::new(m, ratio, 0, Interval::unit())?;
    let zeta = estimate_dimension(&spec, s_lo, s_hi, depths)?;
    Ok(Report::record([
        ("zeta", json!(zeta)),
        ("m", json!(m)),
        ("ratio", json!(ratio)),
        ("similarity_dimension", json!(spec.similarity_dimension())),
    ]))
}

/// Wraps a parsed expression as an integrand; the first evaluation error is
/// kept in `failure` and the sample becomes NaN.
fn expr_integrand(expr: Expr, failure: Arc<OnceLock<EvalError>>) -> Integrand {
    let desc = expr.to_string();
    Integrand::new(
        desc,
        SupportSemantics::OnSupportOnly,
        move |c: &Coords| match expr.eval(&Vars {
            x: c.x,
            y: c.y,
            sx: c.sx,
            sy: c.sy,
        }) {
            Ok(v) => v,
            Err(e) => {
                let _ = failure.set(e);
                f64::NAN
            }
        },
    )
}

fn parse_checked(text: &str, raw_xy: bool) -> Result<Expr, CliError> {
    let e = parse_expr(text)?;
    if e.uses_raw_coordinates() && !raw_xy {
        return Err(CliError::Usage(
            "expression uses x or y; pass --raw-xy to allow raw coordinates".into(),
        ));
    }
    Ok(e)
}

fn integrate_record(cfg: &RunConfig, br: &BracketedValue, converged: bool) -> Report {
    Report::record([
        ("value", json!(br.midpoint)),
        ("lower", json!(br.lower)),
        ("upper", json!(br.upper)),
        ("alpha", json!(cfg.alpha)),
        ("beta", json!(cfg.beta)),
        ("depth", json!(cfg.depth)),
        ("converged", json!(converged)),
    ])
}

fn cmd_integrate(
    cfg: &RunConfig,
    text: &str,
    raw_xy: bool,
    max_level: u32,
) -> Result<(Report, Option<CliError>), CliError> {
    let e = parse_checked(text, raw_xy)?;
    let failure = Arc::new(OnceLock::new());
    let f = expr_integrand(e, failure.clone());
    let mut opts = QuadratureOptions::with_tol(cfg.tol)
        .samples(cfg.samples_per_cell()?)
        .max_level(max_level);
    opts.min_level = opts.min_level.min(max_level);
    let result = integrate2d(&f, &cfg.tartan()?, &cfg.stair2d()?, &opts);
    if let Some(err) = failure.get() {
        return Err(CliError::Numerical(format!("evaluation error: {err}")));
    }
    match result {
        Ok(br) => Ok((integrate_record(cfg, &br, true), None)),
        Err(Error::NotConverged { best, tol }) => {
            let msg = Error::NotConverged { best, tol }.to_string();
            Ok((
                integrate_record(cfg, &best, false),
                Some(CliError::Numerical(msg)),
            ))
        }
        Err(e) => Err(e.into()),
    }
}

fn cmd_derive(
    cfg: &RunConfig,
    text: &str,
    raw_xy: bool,
    axis: AxisArg,
    point: (f64, f64),
    points: Option<usize>,
) -> Result<Report, CliError> {
    let e = parse_checked(text, raw_xy)?;
    let failure = Arc::new(OnceLock::new());
    let f = expr_integrand(e, failure.clone());
    let s2 = cfg.stair2d()?;
    let (ax, stair) = match axis {
        AxisArg::X => (Axis::X, s2.sx),
        AxisArg::Y => (Axis::Y, s2.sy),
    };
    let set = stair.spec().build_intervals()?;
    let check = |v: f64| -> Result<f64, CliError> {
        match failure.get() {
            Some(err) => Err(CliError::Numerical(format!("evaluation error: {err}"))),
            None => Ok(v),
        }
    };
    let axis_name = match axis {
        AxisArg::X => "x",
        AxisArg::Y => "y",
    };
    match points {
        None => {
            let coord = if ax == Axis::X { point.0 } else { point.1 };
            let d = check(partial_derivative(&f, &s2, ax, point, &set)?)?;
            Ok(Report::record([
                ("value", json!(d)),
                ("x", json!(point.0)),
                ("y", json!(point.1)),
                ("axis", json!(axis_name)),
                ("on_support", json!(set.contains(coord))),
            ]))
        }
        Some(n) => {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            let mut rows = Vec::with_capacity(n);
            for _ in 0..n {
                let along = stair.mass_quantile(rng.gen::<f64>(), Side::Left);
                let other: f64 = rng.gen();
                let p = if ax == Axis::X {
                    (along, other)
                } else {
                    (other, along)
                };
                let d = check(partial_derivative(&f, &s2, ax, p, &set)?)?;
                rows.push(vec![
                    json!(p.0),
                    json!(p.1),
                    json!(stair.eval(along)),
                    json!(d),
                ]);
            }
            Ok(Report::table(&["x", "y", "S", "derivative"], rows))
        }
    }
}

fn cmd_fode(cfg: &RunConfig, text: &str, y0: f64, points: usize) -> Result<Report, CliError> {
    let e = parse_checked(text, false)?;
    if points < 2 {
        return Err(CliError::Usage("--points must be at least 2".into()));
    }
    let stair = cfg.stair(cfg.alpha)?;
    let failure: OnceLock<EvalError> = OnceLock::new();
    let h = |s: f64| match e.eval(&Vars::staircase(s, 0.0)) {
        Ok(v) => v,
        Err(err) => {
            let _ = failure.set(err);
            f64::NAN
        }
    };
    let grid = unit_grid(points);
    let opts = QuadratureOptions::with_tol(cfg.tol).samples(cfg.samples_per_cell()?);
    let sol = solve_fode(h, &stair, y0, &grid, &opts)?;
    if let Some(err) = failure.get() {
        return Err(CliError::Numerical(format!("evaluation error: {err}")));
    }
    let rows = sol
        .into_iter()
        .map(|(x, y)| vec![json!(x), json!(stair.eval(x)), json!(y)])
        .collect();
    Ok(Report::table(&["x", "S", "y"], rows))
}

fn cmd_figure(cfg: &RunConfig, id: u8) -> Result<Report, CliError> {
    let n = cfg.grid_points(21)?;
    let grid = unit_grid(n);
    let s2 = cfg.stair2d()?;
    let tartan = cfg.tartan()?;
    let on = |x: f64, y: f64| tartan.contains(x, y);
    let surface = |value: &dyn Fn(f64, f64) -> f64| {
        let mut rows = Vec::with_capacity(n * n);
        for &x in &grid {
            for &y in &grid {
                rows.push(vec![json!(x), json!(y), json!(value(x, y))]);
            }
        }
        Report::table(&["x", "y", "value"], rows)
    };
    let (sx, sy) = (|x: f64| s2.sx.eval(x), |y: f64| s2.sy.eval(y));
    Ok(match id {
        1 => surface(&|x, y| if on(x, y) { 1.0 } else { 0.0 }),
        2 => surface(&|x, y| s2.eval(x, y)),
        3 => surface(&|x, y| {
            if on(x, y) {
                sx(x).sin() * sy(y).sin()
            } else {
                0.0
            }
        }),
        4 => surface(&|x, y| (1.0 - sx(x).cos()) * (1.0 - sy(y).cos())),
        5 => surface(&|x, y| if on(x, y) { (sx(x) + sy(y)).sin() } else { 0.0 }),
        6 => surface(&|x, y| -(sx(x) + sy(y)).sin() + sx(x).sin() + sy(y).sin()),
        _ => {
            // x runs over support points so the derivative is visible.
            let f = Integrand::of_staircases("Sx^2+Sy^2", |a, b| a * a + b * b);
            let set = s2.sx.spec().build_intervals()?;
            let mut rows = Vec::with_capacity(n * n);
            for &t in &grid {
                let x = s2.sx.mass_quantile(t, Side::Left);
                for &y in &grid {
                    let v = sx(x).powi(2) + sy(y).powi(2);
                    let d = partial_derivative(&f, &s2, Axis::X, (x, y), &set)?;
                    rows.push(vec![json!(x), json!(y), json!(v), json!(d)]);
                }
            }
            Report::table(&["x", "y", "value", "derivative"], rows)
        }
    })
}
