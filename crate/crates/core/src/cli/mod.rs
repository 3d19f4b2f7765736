//! The `lure-eq` command line.
//!
//! Exit codes: 0 success, 1 invalid system, 2 parse error, 3 solver
//! failure, 4 unsupported scheme or system combination.

pub mod output;
pub mod problem;
pub mod repro;

use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use log::LevelFilter;

use crate::error::LureError;
use crate::linalg::RealVec;
use crate::lure::{equilibrium, simulate, validate, Mode, Scheme};
use crate::nash::certify_equilibrium;
use crate::qvi::{solve_qvi, solve_qvi_dual};
use crate::splitting::{SolverConfig, SolverReport};

use output::{fmt_g17, fmt_vec, residual_csv, trajectory_csv, write_file};
use problem::{load, LoadError, Loaded, Problem};

pub const EXIT_OK: u8 = 0;
pub const EXIT_INVALID: u8 = 1;
pub const EXIT_PARSE: u8 = 2;
pub const EXIT_SOLVER: u8 = 3;
pub const EXIT_UNSUPPORTED: u8 = 4;

/// Environment variable selecting the log level: `quiet`, `info` or `trace`.
pub const LOG_ENV: &str = "LURE_EQ_LOG";

#[derive(Debug, Parser)]
#[command(
    name = "lure-eq",
    version,
    about = "Equilibria, QVIs, Nash games and simulation for set-valued Lur'e systems"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, clap::Args)]
pub struct SolveArgs {
    /// Problem file (JSON).
    pub path: PathBuf,
    #[arg(long)]
    pub gamma: Option<f64>,
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long = "max-iter")]
    pub max_iter: Option<usize>,
    /// Residual history CSV.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Validate the structural assumptions of a problem.
    Check { path: PathBuf },
    /// Compute an equilibrium.
    Equilibrium(SolveArgs),
    /// Simulate a trajectory.
    Simulate {
        path: PathBuf,
        /// explicit, semi_implicit or fully_implicit.
        #[arg(long)]
        scheme: Option<String>,
        #[arg(long)]
        h: Option<f64>,
        #[arg(long = "T")]
        t_end: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Solve a quasi-variational inequality (primal and, when possible, dual).
    Qvi(SolveArgs),
    /// Solve and certify a Nash quasi-equilibrium problem.
    Nash(SolveArgs),
    /// Regenerate the relay example data.
    #[command(name = "repro-paper")]
    Repro {
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
}

#[derive(Debug)]
pub enum CliError {
    Parse(String),
    Invalid(String),
    Solver(String),
    Unsupported(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Invalid(_) => EXIT_INVALID,
            CliError::Parse(_) => EXIT_PARSE,
            CliError::Solver(_) => EXIT_SOLVER,
            CliError::Unsupported(_) => EXIT_UNSUPPORTED,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Parse(m) => write!(f, "parse error: {m}"),
            CliError::Invalid(m) => write!(f, "invalid system: {m}"),
            CliError::Solver(m) => write!(f, "solver failure: {m}"),
            CliError::Unsupported(m) => write!(f, "unsupported: {m}"),
        }
    }
}

impl From<LoadError> for CliError {
    fn from(e: LoadError) -> Self {
        match e {
            LoadError::Parse(m) => CliError::Parse(m),
            LoadError::Invalid(m) => CliError::Invalid(m),
        }
    }
}

impl From<LureError> for CliError {
    fn from(e: LureError) -> Self {
        let msg = e.to_string();
        match e {
            LureError::Unsupported(m) => CliError::Unsupported(m),
            LureError::InvalidSystem(m) => CliError::Invalid(m),
            LureError::NotMonotone(_) => CliError::Invalid(msg),
            LureError::NonPositive { .. }
            | LureError::InvalidParameter(_)
            | LureError::DimensionMismatch { .. } => CliError::Parse(msg),
            _ => CliError::Solver(msg),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Solver(format!("writing output: {e}"))
    }
}

pub fn init_logging() {
    let level = match std::env::var(LOG_ENV).as_deref() {
        Ok("quiet") => LevelFilter::Off,
        Ok("trace") => LevelFilter::Trace,
        _ => LevelFilter::Info,
    };
    let _ = env_logger::Builder::new()
        .filter_level(level)
        .format_timestamp(None)
        .target(env_logger::Target::Stderr)
        .try_init();
}

/// Parses arguments, runs the command and maps the outcome to an exit code.
pub fn main_with_args<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_PARSE } else { EXIT_OK });
        }
    };
    init_logging();
    match run(&cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("lure-eq: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

pub fn run(command: &Command) -> Result<u8, CliError> {
    match command {
        Command::Check { path } => cmd_check(path),
        Command::Equilibrium(args) => cmd_equilibrium(args),
        Command::Simulate {
            path,
            scheme,
            h,
            t_end,
            out,
        } => cmd_simulate(path, scheme.as_deref(), *h, *t_end, out.as_deref()),
        Command::Qvi(args) => cmd_qvi(args),
        Command::Nash(args) => cmd_nash(args),
        Command::Repro { out } => cmd_repro(out),
    }
}

fn solver_config(loaded: &Loaded, args: &SolveArgs) -> Result<SolverConfig, CliError> {
    let mut cfg = SolverConfig {
        gamma: args.gamma.or(loaded.solver.gamma),
        ..SolverConfig::default()
    };
    if let Some(tol) = args.tol.or(loaded.solver.tol) {
        cfg.tol = tol;
    }
    if let Some(max_iter) = args.max_iter.or(loaded.solver.max_iter) {
        cfg.max_iter = max_iter;
    }
    if !(cfg.tol > 0.0) || cfg.max_iter == 0 || cfg.gamma.is_some_and(|g| !(g > 0.0)) {
        return Err(CliError::Parse(
            "gamma and tol must be positive and max-iter nonzero".into(),
        ));
    }
    Ok(cfg)
}

fn initial_point(loaded: &Loaded) -> RealVec {
    match &loaded.solver.x0 {
        Some(x) => RealVec::from_column_slice(x),
        None => RealVec::zeros(loaded.problem.dim()),
    }
}

fn print_report(report: &SolverReport) {
    println!("status: {}", report.status);
    println!("iterations: {}", report.iterations);
    println!("gamma: {}", fmt_g17(report.gamma));
    println!("solution: {}", fmt_vec(&report.solution));
    println!("residual: {}", fmt_g17(report.certified_residual));
    if let Some(r) = report.inclusion_residual {
        println!("inclusion residual: {}", fmt_g17(r));
    }
    if let Some(m) = &report.message {
        println!("note: {m}");
    }
}

fn finish(report: &SolverReport, dim: usize, out: Option<&Path>) -> Result<u8, CliError> {
    if let Some(path) = out {
        write_file(path, &residual_csv(report, dim))?;
    }
    print_report(report);
    Ok(if report.converged() {
        EXIT_OK
    } else {
        EXIT_SOLVER
    })
}

fn cmd_check(path: &Path) -> Result<u8, CliError> {
    let loaded = load(path)?;
    let system = loaded.problem.system()?;
    let report = validate(&system);
    let mode = match report.mode {
        Mode::Strict => "Strict",
        Mode::Passive => "Passive",
        Mode::Invalid => "Invalid",
    };
    println!("mode: {mode}");
    println!("||PB - C^T||: {}", fmt_g17(report.pb_minus_ct_norm));
    match &report.block_eigenvalues {
        Some(eig) if !eig.is_empty() => {
            println!("block eigenvalue min: {}", fmt_g17(eig[0]));
            println!("block eigenvalue max: {}", fmt_g17(eig[eig.len() - 1]));
        }
        _ => println!("block eigenvalues: n/a (passivity sampled)"),
    }
    println!("D monotone: {}", report.d_monotone);
    println!("Pf monotone: {}", report.pf_monotone);
    if let Some(c) = report.d_semicoercive {
        println!("D semi-coercivity constant: {}", fmt_g17(c));
    }
    for w in &report.warnings {
        println!("warning: {w}");
    }
    Ok(if report.mode == Mode::Invalid {
        EXIT_INVALID
    } else {
        EXIT_OK
    })
}

fn cmd_equilibrium(args: &SolveArgs) -> Result<u8, CliError> {
    let loaded = load(&args.path)?;
    let cfg = solver_config(&loaded, args)?;
    let x0 = initial_point(&loaded);
    let report = match &loaded.problem {
        Problem::Lure(system) => equilibrium(system, &x0, &cfg)?,
        Problem::Qvi(p) => solve_qvi(p, &x0, &cfg)?,
        Problem::NashLinear(g) => g.solve(&x0, &cfg)?,
        Problem::NashProx(g) => g.solve(&x0, &cfg)?,
    };
    finish(&report, loaded.problem.dim(), args.out.as_deref())
}

fn cmd_simulate(
    path: &Path,
    scheme: Option<&str>,
    h: Option<f64>,
    t_end: Option<f64>,
    out: Option<&Path>,
) -> Result<u8, CliError> {
    let loaded = load(path)?;
    let Problem::Lure(system) = &loaded.problem else {
        return Err(CliError::Unsupported(
            "simulation needs a problem of kind `lure`".into(),
        ));
    };
    let section = loaded.simulate.clone().unwrap_or_default();
    let scheme: Scheme = scheme
        .or(section.scheme.as_deref())
        .unwrap_or("semi_implicit")
        .parse()?;
    let h = h
        .or(section.h)
        .ok_or_else(|| CliError::Parse("missing step h".into()))?;
    let t_end = t_end
        .or(section.t_end)
        .ok_or_else(|| CliError::Parse("missing horizon T".into()))?;
    let x0 = match section.x0.as_ref().or(loaded.solver.x0.as_ref()) {
        Some(x) => RealVec::from_column_slice(x),
        None => return Err(CliError::Parse("missing initial state simulate.x0".into())),
    };
    let traj = match simulate(system, scheme, &x0, h, t_end) {
        Ok(t) => t,
        Err(LureError::SimulationAborted {
            step,
            reason,
            partial,
        }) => {
            if let Some(path) = out {
                write_file(path, &trajectory_csv(&partial))?;
            }
            return Err(CliError::Solver(format!("step {step}: {reason}")));
        }
        Err(e) => return Err(e.into()),
    };
    if let Some(path) = out {
        write_file(path, &trajectory_csv(&traj))?;
    }
    println!("scheme: {scheme}");
    println!("steps: {}", traj.len() - 1);
    println!(
        "final state: {}",
        fmt_vec(traj.last_state().expect("nonempty trajectory"))
    );
    println!(
        "final norm: {}",
        fmt_g17(traj.last_state().map_or(f64::NAN, |x| x.norm()))
    );
    println!("min state norm: {}", fmt_g17(traj.min_state_norm()));
    Ok(EXIT_OK)
}

fn cmd_qvi(args: &SolveArgs) -> Result<u8, CliError> {
    let loaded = load(&args.path)?;
    let Problem::Qvi(p) = &loaded.problem else {
        return Err(CliError::Unsupported(
            "the qvi command needs a problem of kind `qvi`".into(),
        ));
    };
    let cfg = solver_config(&loaded, args)?;
    let x0 = initial_point(&loaded);
    let primal = solve_qvi(p, &x0, &cfg)?;
    if let Some(path) = args.out.as_deref() {
        write_file(path, &residual_csv(&primal, p.dim()))?;
    }
    println!("primal:");
    print_report(&primal);
    let mut ok = primal.converged();
    if p.f().strong_modulus() > 0.0 {
        let dual = solve_qvi_dual(p, None, &cfg)?;
        println!("dual:");
        println!("status: {}", dual.report.status);
        println!("iterations: {}", dual.report.iterations);
        println!("y: {}", fmt_vec(&dual.y));
        println!("x: {}", fmt_vec(&dual.x));
        println!(
            "observed contraction: {} (bound {})",
            fmt_g17(dual.observed_contraction),
            fmt_g17(dual.constants.contraction_bound())
        );
        println!(
            "primal/dual gap: {}",
            fmt_g17((&dual.x - &primal.solution).norm())
        );
        ok &= dual.report.converged();
    } else {
        println!("dual: skipped (f has no declared strong monotonicity modulus)");
    }
    Ok(if ok { EXIT_OK } else { EXIT_SOLVER })
}

fn cmd_nash(args: &SolveArgs) -> Result<u8, CliError> {
    let loaded = load(&args.path)?;
    let cfg = solver_config(&loaded, args)?;
    let x0 = initial_point(&loaded);
    let (report, certs) = match &loaded.problem {
        Problem::NashLinear(g) => {
            let r = g.solve(&x0, &cfg)?;
            let c = certify_equilibrium(g, &r.solution, 10.0 * cfg.tol)?;
            (r, c)
        }
        Problem::NashProx(g) => {
            let r = g.solve(&x0, &cfg)?;
            let c = certify_equilibrium(g, &r.solution, 10.0 * cfg.tol)?;
            (r, c)
        }
        _ => {
            return Err(CliError::Unsupported(
                "the nash command needs a problem of kind `nash_linear` or `nash_prox`".into(),
            ))
        }
    };
    if let Some(path) = args.out.as_deref() {
        write_file(path, &residual_csv(&report, loaded.problem.dim()))?;
    }
    print_report(&report);
    for c in &certs {
        println!(
            "player {}: {} (residual {})",
            c.player + 1,
            if c.passed { "pass" } else { "fail" },
            fmt_g17(c.residual)
        );
    }
    let ok = report.converged() && certs.iter().all(|c| c.passed);
    Ok(if ok { EXIT_OK } else { EXIT_SOLVER })
}

fn cmd_repro(dir: &Path) -> Result<u8, CliError> {
    let outcome = repro::run(dir)?;
    print!("{}", outcome.summary);
    println!(
        "wrote fig1.csv, fig2_gamma0.5.csv, fig2_gamma0.1.csv, summary.txt to {}",
        dir.display()
    );
    Ok(EXIT_OK)
}
