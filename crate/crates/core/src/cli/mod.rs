//! The `evans` command-line tool.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage, domain, pole or
//! parameter error, 3 numerical failure. Diagnostics go to standard error;
//! standard output only carries the requested result.

mod output;

pub use output::{to_json, write_grid_csv, RoundTripFormatter};

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::asymptotics::{
    b_max_of_family, empirical_exponents, minimize_b_max, Domain, ExponentReport, ExponentSampling,
    Family,
};
use crate::error::Error;
use crate::green::{AnnulusGreen, AnnulusSpec};
use crate::kernel::{
    fundamental_metric, BoundaryElement, MetricParams, Potential, PuncturedPotential,
    TwicePuncturedPotential,
};
use crate::verify::suite::{
    annulus_suite, punctured_suite, twice_punctured_suite, AnnulusSuiteConfig, SuiteConfig,
};
use crate::verify::{nakai_convergence_study, standard_sample_set, DEFAULT_SEED};
use crate::{Point, Punctured, TwicePunctured};

pub const EXIT_OK: u8 = 0;
pub const EXIT_VERIFICATION: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_NUMERICAL: u8 = 3;

/// Agreement required between fitted and closed-form growth exponents.
const EXPONENT_TOL: f64 = 1e-3;

#[derive(Debug, Parser)]
#[command(
    name = "evans",
    version,
    about = "Evans-Selberg potentials, Evans kernels and annulus Green kernels"
)]
struct Cli {
    /// Print a human-readable header to standard error.
    #[arg(long, global = true)]
    meta: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate one kernel value.
    Eval(EvalArgs),
    /// Tabulate a kernel on a rectangular grid as CSV.
    Grid(GridArgs),
    /// Convergence of the shifted annulus Green kernel to the Evans kernel.
    Converge(ConvergeArgs),
    /// Run the property suite for a kernel family.
    Verify(VerifyArgs),
    /// Minimize the largest growth exponent over the admissible kernels.
    Bmax(BmaxArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum DomainArg {
    #[value(name = "c0")]
    C0,
    #[value(name = "c01")]
    C01,
    Annulus,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum KernelArg {
    Evans,
    EvansSelberg,
    Green,
    Metric,
}

#[derive(Debug, Args)]
struct Params {
    #[arg(long, allow_hyphen_values = true)]
    k: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    l: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    m: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    n: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    s: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    j: Option<f64>,
    /// Inner radius of the annulus `r < |z| < 1/r`.
    #[arg(long, allow_hyphen_values = true)]
    r: Option<f64>,
    /// Annulus modulus parameter, `r = e^{-2t}`.
    #[arg(long, allow_hyphen_values = true)]
    t: Option<f64>,
    /// Certified truncation tolerance of the annulus product.
    #[arg(long, default_value_t = 1e-12)]
    tol: f64,
}

#[derive(Debug, Args)]
struct KernelSelect {
    #[arg(long, value_enum)]
    domain: DomainArg,
    #[arg(long, value_enum)]
    kernel: KernelArg,
    #[command(flatten)]
    params: Params,
}

#[derive(Debug, Args)]
struct EvalArgs {
    #[command(flatten)]
    select: KernelSelect,
    #[arg(long, allow_hyphen_values = true)]
    p: Point,
    /// Pole; not used by `--kernel metric`.
    #[arg(long, allow_hyphen_values = true)]
    q: Option<Point>,
}

#[derive(Debug, Args)]
struct GridArgs {
    #[command(flatten)]
    select: KernelSelect,
    #[arg(long, allow_hyphen_values = true)]
    q: Option<Point>,
    #[arg(long, allow_hyphen_values = true)]
    x_min: f64,
    #[arg(long, allow_hyphen_values = true)]
    x_max: f64,
    #[arg(long, allow_hyphen_values = true)]
    y_min: f64,
    #[arg(long, allow_hyphen_values = true)]
    y_max: f64,
    #[arg(long)]
    nx: usize,
    #[arg(long)]
    ny: usize,
    /// Cells closer than this to a puncture, circle or the pole print `nan`.
    #[arg(long, default_value_t = 0.0)]
    mask_radius: f64,
    /// Output file; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ConvergeArgs {
    #[arg(long, value_delimiter = ',', default_value = "1,2,3,4")]
    t_list: Vec<f64>,
    #[arg(long, default_value_t = 1e-12)]
    tol: f64,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[arg(long, value_enum)]
    domain: DomainArg,
    #[command(flatten)]
    params: Params,
    /// Compare the annulus kernel with the finite-difference oracle.
    #[arg(long)]
    include_oracle: bool,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Random pairs for the annulus negativity and symmetry checks.
    #[arg(long, default_value_t = 1000)]
    pairs: usize,
}

#[derive(Debug, Args)]
struct BmaxArgs {
    #[arg(long, value_enum)]
    domain: DomainArg,
    #[arg(long, default_value_t = 1e-3)]
    grid_step: f64,
}

/// Why a command stopped, carrying the exit code.
#[derive(Debug)]
enum Failure {
    Usage(String),
    Numerical(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => EXIT_USAGE,
            Failure::Numerical(_) => EXIT_NUMERICAL,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Numerical(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Domain(_) | Error::Pole | Error::Parameter(_) => Failure::Usage(e.to_string()),
            _ => Failure::Numerical(e.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Usage(format!("io: {e}"))
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Failure::Usage(format!("io: {e}"))
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Numerical(format!("json: {e}"))
    }
}

fn require(value: Option<f64>, flag: &str) -> Result<f64, Failure> {
    value.ok_or_else(|| Failure::Usage(format!("parameter: --{flag} is required")))
}

fn annulus_spec(params: &Params) -> Result<AnnulusSpec<f64>, Failure> {
    Ok(match (params.r, params.t) {
        (Some(r), None) => AnnulusSpec::new(r, params.tol)?,
        (None, Some(t)) => AnnulusSpec::from_t(t, params.tol)?,
        (Some(_), Some(_)) => {
            return Err(Failure::Usage(
                "parameter: give --r or --t, not both".into(),
            ))
        }
        (None, None) => return Err(Failure::Usage("parameter: --r or --t is required".into())),
    })
}

/// A kernel with a pole, or a fundamental metric.
enum Field {
    Kernel(Box<dyn Potential<f64>>),
    Metric(MetricParams<f64>, Vec<BoundaryElement<f64>>),
}

impl Field {
    fn build(select: &KernelSelect) -> Result<Self, Failure> {
        let p = &select.params;
        let punctures = |c01: bool| {
            let mut b = vec![BoundaryElement::Puncture(Point::zero())];
            if c01 {
                b.push(BoundaryElement::Puncture(Point::one()));
            }
            b
        };
        let field = match (select.domain, select.kernel) {
            (DomainArg::C0, KernelArg::Evans) => Field::Kernel(Box::new(
                PuncturedPotential::kernel(require(p.l.or(p.k), "l")?)?,
            )),
            (DomainArg::C0, KernelArg::EvansSelberg) => Field::Kernel(Box::new(
                PuncturedPotential::new(require(p.k, "k")?, require(p.l, "l")?)?,
            )),
            (DomainArg::C01, KernelArg::Evans) => Field::Kernel(Box::new(
                TwicePuncturedPotential::kernel(require(p.k, "k")?, require(p.m, "m")?)?,
            )),
            (DomainArg::C01, KernelArg::EvansSelberg) => {
                Field::Kernel(Box::new(TwicePuncturedPotential::new(
                    require(p.k, "k")?,
                    require(p.l, "l")?,
                    require(p.m, "m")?,
                    require(p.n, "n")?,
                )?))
            }
            (DomainArg::C0, KernelArg::Metric) => Field::Metric(
                MetricParams::punctured(require(p.s, "s")?)?,
                punctures(false),
            ),
            (DomainArg::C01, KernelArg::Metric) => Field::Metric(
                MetricParams::twice_punctured(require(p.s, "s")?, require(p.j, "j")?)?,
                punctures(true),
            ),
            (DomainArg::Annulus, KernelArg::Green) => {
                Field::Kernel(Box::new(AnnulusGreen::new(annulus_spec(p)?)))
            }
            (domain, kernel) => {
                return Err(Failure::Usage(format!(
                    "kernel {kernel:?} is not available on domain {domain:?}"
                )))
            }
        };
        Ok(field)
    }

    fn needs_pole(&self) -> bool {
        matches!(self, Field::Kernel(_))
    }

    fn eval(&self, p: Point, q: Option<Point>) -> Result<f64, Error> {
        match (self, q) {
            (Field::Kernel(k), Some(q)) => k.value(p, q),
            (Field::Kernel(_), None) => Err(Error::Parameter("--q is required".into())),
            (Field::Metric(params, _), _) => fundamental_metric(p, params),
        }
    }

    fn boundary_distance(&self, p: Point) -> f64 {
        match self {
            Field::Kernel(k) => k.boundary_distance(p),
            Field::Metric(_, boundary) => boundary
                .iter()
                .filter_map(|b| match b {
                    BoundaryElement::Puncture(c) => Some(p.dist(c)),
                    _ => None,
                })
                .fold(f64::INFINITY, f64::min),
        }
    }
}

fn cmd_eval(args: &EvalArgs, out: &mut dyn Write) -> Result<u8, Failure> {
    let field = Field::build(&args.select)?;
    if field.needs_pole() && args.q.is_none() {
        return Err(Failure::Usage("parameter: --q is required".into()));
    }
    let value = field.eval(args.p, args.q)?;
    writeln!(out, "{value:e}")?;
    Ok(EXIT_OK)
}

fn grid_axis(lo: f64, hi: f64, n: usize) -> impl Iterator<Item = f64> {
    let step = (hi - lo) / (n - 1) as f64;
    (0..n).map(move |i| if i + 1 == n { hi } else { lo + i as f64 * step })
}

fn cmd_grid(args: &GridArgs, out: &mut dyn Write) -> Result<u8, Failure> {
    let coords = [args.x_min, args.x_max, args.y_min, args.y_max];
    if coords.iter().any(|c| !c.is_finite())
        || !(args.x_min < args.x_max && args.y_min < args.y_max)
        || args.nx < 2
        || args.ny < 2
        || !(args.mask_radius >= 0.0)
    {
        return Err(Failure::Usage(
            "grid: need finite x_min < x_max, y_min < y_max, nx, ny >= 2 and mask radius >= 0"
                .into(),
        ));
    }
    let field = Field::build(&args.select)?;
    if field.needs_pole() && args.q.is_none() {
        return Err(Failure::Usage("parameter: --q is required".into()));
    }
    let mut rows = Vec::with_capacity(args.nx * args.ny);
    for y in grid_axis(args.y_min, args.y_max, args.ny) {
        for x in grid_axis(args.x_min, args.x_max, args.nx) {
            let p = Point::new(x, y);
            let near_pole = args.q.is_some_and(|q| p.dist(&q) < args.mask_radius);
            let value = if near_pole || field.boundary_distance(p) < args.mask_radius {
                None
            } else {
                match field.eval(p, args.q) {
                    Ok(v) => Some(v),
                    Err(Error::Domain(_) | Error::Pole) => None,
                    Err(e) => return Err(e.into()),
                }
            };
            rows.push((x, y, value));
        }
    }
    match &args.out {
        Some(path) => write_grid_csv(BufWriter::new(File::create(path)?), rows)?,
        None => write_grid_csv(out, rows)?,
    }
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct ConvergeOutput {
    t: Vec<f64>,
    sup_error: Vec<f64>,
    fitted_rate: Option<f64>,
    seed: u64,
    samples: Vec<[String; 2]>,
}

fn cmd_converge(args: &ConvergeArgs, out: &mut dyn Write) -> Result<u8, Failure> {
    let samples = standard_sample_set(args.seed);
    let report =
        nakai_convergence_study(&samples, &args.t_list, args.tol).map_err(|e| match e {
            Error::Parameter(_) => Failure::from(e),
            other => Failure::Numerical(other.to_string()),
        })?;
    let output = ConvergeOutput {
        t: report.t_values,
        sup_error: report.errors,
        fitted_rate: report.fitted_rate,
        seed: args.seed,
        samples: samples
            .iter()
            .map(|(p, q)| [p.to_string(), q.to_string()])
            .collect(),
    };
    writeln!(out, "{}", to_json(&output)?)?;
    Ok(EXIT_OK)
}

fn cmd_verify(args: &VerifyArgs, out: &mut dyn Write) -> Result<u8, Failure> {
    let p = &args.params;
    let config = SuiteConfig::default();
    let report = match args.domain {
        DomainArg::C0 => {
            let k = require(p.k, "k")?;
            punctured_suite(Punctured::new(k, p.l.unwrap_or(k))?, &config)
        }
        DomainArg::C01 => {
            let (k, m) = (require(p.k, "k")?, require(p.m, "m")?);
            let params = TwicePunctured::new(k, p.l.unwrap_or(k), m, p.n.unwrap_or(m))?;
            twice_punctured_suite(params, &config)
        }
        DomainArg::Annulus => {
            let annulus = annulus_spec(p)?;
            let suite = AnnulusSuiteConfig {
                r: annulus.r(),
                tol: annulus.tol(),
                seed: args.seed,
                pairs: args.pairs,
                include_oracle: args.include_oracle,
                ..AnnulusSuiteConfig::default()
            };
            annulus_suite(&suite, &config)?
        }
    };
    writeln!(out, "{}", to_json(&report)?)?;
    Ok(if report.all_ok() {
        EXIT_OK
    } else {
        EXIT_VERIFICATION
    })
}

#[derive(Serialize)]
struct Exponents {
    b0: f64,
    b1: Option<f64>,
    b_inf: f64,
    b_max: f64,
}

impl From<ExponentReport<f64>> for Exponents {
    fn from(r: ExponentReport<f64>) -> Self {
        Self {
            b0: r.b0,
            b1: r.b1,
            b_inf: r.b_inf,
            b_max: r.b_max,
        }
    }
}

#[derive(Serialize)]
struct Argmin {
    k: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    m: Option<f64>,
}

#[derive(Serialize)]
struct EmpiricalCheck {
    analytic: Exponents,
    empirical: Exponents,
    max_deviation: f64,
    tolerance: f64,
    passed: bool,
}

#[derive(Serialize)]
struct BmaxOutput {
    argmin: Argmin,
    min_b_max: f64,
    empirical_check: EmpiricalCheck,
}

fn cmd_bmax(args: &BmaxArgs, out: &mut dyn Write) -> Result<u8, Failure> {
    let domain = match args.domain {
        DomainArg::C0 => Domain::Punctured,
        DomainArg::C01 => Domain::TwicePunctured,
        DomainArg::Annulus => {
            return Err(Failure::Usage("bmax: --domain must be c0 or c01".into()));
        }
    };
    let best = minimize_b_max(domain, args.grid_step)?;
    let analytic = b_max_of_family(&best.argmin)?;
    let empirical = empirical_exponents(&best.argmin, &ExponentSampling::default())?;
    let max_deviation = analytic.max_deviation(&empirical);
    let argmin = match best.argmin {
        Family::Punctured { k } => Argmin { k, m: None },
        Family::TwicePunctured { k, m } => Argmin { k, m: Some(m) },
    };
    let output = BmaxOutput {
        argmin,
        min_b_max: best.min_b_max,
        empirical_check: EmpiricalCheck {
            analytic: analytic.into(),
            empirical: empirical.into(),
            max_deviation,
            tolerance: EXPONENT_TOL,
            passed: max_deviation <= EXPONENT_TOL,
        },
    };
    writeln!(out, "{}", to_json(&output)?)?;
    Ok(EXIT_OK)
}

/// Runs the tool on `args` (program name first) and returns the exit code.
pub fn run<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = S>,
    S: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let rendered = e.render().to_string();
            if code == 0 {
                let _ = write!(out, "{rendered}");
                return EXIT_OK;
            }
            let _ = write!(err, "{rendered}");
            return EXIT_USAGE;
        }
    };
    let name = match &cli.command {
        Command::Eval(_) => "eval",
        Command::Grid(_) => "grid",
        Command::Converge(_) => "converge",
        Command::Verify(_) => "verify",
        Command::Bmax(_) => "bmax",
    };
    if cli.meta {
        let _ = writeln!(err, "# evans {} {name}", env!("CARGO_PKG_VERSION"));
    }
    let result = match &cli.command {
        Command::Eval(a) => cmd_eval(a, out),
        Command::Grid(a) => cmd_grid(a, out),
        Command::Converge(a) => cmd_converge(a, out),
        Command::Verify(a) => cmd_verify(a, out),
        Command::Bmax(a) => cmd_bmax(a, out),
    };
    match result {
        Ok(code) => {
            if code == EXIT_VERIFICATION {
                let _ = writeln!(err, "verification: unexpected check outcomes");
            }
            code
        }
        Err(failure) => {
            let _ = writeln!(err, "{}", failure.message());
            failure.code()
        }
    }
}

pub fn main() -> ExitCode {
    let stdout = io::stdout();
    let stderr = io::stderr();
    let code = run(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock());
    ExitCode::from(code)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (u8, String, String) {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let argv = std::iter::once("evans").chain(args.iter().copied());
        let code = run(argv, &mut out, &mut err);
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn eval_log_two() {
        let (code, out, _) = call(&[
            "eval", "--domain", "c0", "--kernel", "evans", "--l", "0.5", "--p", "1+0i", "--q",
            "-1+0i",
        ]);
        assert_eq!(code, 0);
        assert_eq!(out, "6.931471805599453e-1\n");
    }

    #[test]
    fn eval_pole_is_usage_error() {
        let (code, out, err) = call(&[
            "eval", "--domain", "c0", "--kernel", "evans", "--l", "0.5", "--p", "1+0i", "--q",
            "1+0i",
        ]);
        assert_eq!(code, EXIT_USAGE);
        assert!(out.is_empty());
        assert!(err.contains("pole: p equals q"), "{err}");
    }

    #[test]
    fn eval_green_is_negative() {
        let (code, out, _) = call(&[
            "eval", "--domain", "annulus", "--kernel", "green", "--r", "0.2", "--p", "0.5+0i",
            "--q", "0.9+0i", "--tol", "1e-12",
        ]);
        assert_eq!(code, 0);
        assert!(out.trim().parse::<f64>().unwrap() < 0.0);
    }

    #[test]
    fn mismatched_kernel_and_domain() {
        let (code, _, err) = call(&[
            "eval", "--domain", "c0", "--kernel", "green", "--p", "1", "--q", "2",
        ]);
        assert_eq!(code, EXIT_USAGE, "{err}");
        let (code, _, _) = call(&[
            "eval", "--domain", "c0", "--kernel", "evans", "--p", "1", "--q", "2",
        ]);
        assert_eq!(code, EXIT_USAGE);
    }

    #[test]
    fn grid_to_stdout() {
        let (code, out, _) = call(&[
            "grid", "--domain", "c0", "--kernel", "metric", "--s", "1", "--x-min", "1", "--x-max",
            "2", "--y-min", "1", "--y-max", "2", "--nx", "2", "--ny", "2",
        ]);
        assert_eq!(code, 0);
        let lines: Vec<&str> = out.lines().collect();
        assert_eq!(lines[0], "x,y,value");
        assert_eq!(lines.len(), 5);
        let v: f64 = lines[1].split(',').nth(2).unwrap().parse().unwrap();
        assert!((v - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
    }

    #[test]
    fn help_is_success() {
        let (code, out, _) = call(&["--help"]);
        assert_eq!(code, 0);
        assert!(out.contains("eval"));
    }

    #[test]
    fn meta_header_goes_to_stderr() {
        let (code, out, err) = call(&[
            "--meta", "eval", "--domain", "c0", "--kernel", "metric", "--s", "1", "--p", "2",
        ]);
        assert_eq!(code, 0);
        assert_eq!(out, "5e-1\n");
        assert!(err.starts_with("# evans"));
    }
}
