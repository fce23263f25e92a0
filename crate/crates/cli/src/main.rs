//! `hyperlandau`: command-line front end for the identity suite, spectra,
//! numerical oracles, classical trajectories and many-body wavefunctions.
//!
//! Data goes to stdout (or `--out`), diagnostics to stderr. Exit codes:
//! 0 success, 1 strict verification failure, 2 usage error, 3 numerical
//! failure.

// `!(x > 0.0)` style guards are used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hyperlandau::classical::{self, Params, PhaseState};
use hyperlandau::io::{parse_particle_config, parse_range, LevelRange};
use hyperlandau::manybody;
use hyperlandau::models::{self, Status};
use hyperlandau::numverify::{self, FdGrid};
use hyperlandau::spectra::{self, Geometry, SpectraError, SpectrumLine};
use num_complex::Complex64;

#[derive(Parser)]
#[command(
    name = "hyperlandau",
    version,
    about = "Landau levels on flat, hyperbolic and spherical geometries"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the exact operator and Poisson-bracket identity suite.
    Verify(VerifyArgs),
    /// Closed-form energy levels. Natural units (hbar = 1) by default.
    Spectrum(SpectrumArgs),
    /// Integrate a classical half-plane orbit with RK4 and write a CSV.
    Trajectory(TrajectoryArgs),
    /// Finite-difference eigenvalues of the radial Whittaker problem.
    Oracle(OracleArgs),
    /// Sample a half-plane Landau eigenfunction.
    Eigenfunction(EigenfunctionArgs),
    /// Evaluate a Laughlin wavefunction and check its exchange symmetry.
    Laughlin(LaughlinArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum TextOrJson {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum CsvOrJson {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum GeometryArg {
    Flat,
    Halfplane,
    Sphere,
}

#[derive(Args)]
struct VerifyArgs {
    /// Output format.
    #[arg(long, value_enum, default_value = "text")]
    format: TextOrJson,
    /// Treat documented differences as failures (exit 1).
    #[arg(long)]
    strict: bool,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SpectrumArgs {
    #[arg(long, value_enum)]
    geometry: GeometryArg,
    /// Half-plane field parameter (required for `halfplane`).
    #[arg(long)]
    beta: Option<f64>,
    /// Particle mass (half-plane).
    #[arg(long, default_value_t = 1.0)]
    m: f64,
    /// Curvature radius (half-plane).
    #[arg(long, default_value_t = 1.0)]
    a: f64,
    /// Cyclotron frequency (flat).
    #[arg(long, default_value_t = 1.0)]
    omega_c: f64,
    /// Reduced Planck constant (flat).
    #[arg(long, default_value_t = 1.0)]
    hbar: f64,
    /// Flat Landau indices: `N`, `A..B` (inclusive).
    #[arg(long, default_value = "0..4")]
    n: String,
    /// Sphere angular momenta: `N`, `A..B` (inclusive).
    #[arg(long, default_value = "0..4")]
    l: String,
    /// Half-plane levels: `all` (the full bound window), `N` or `A..B`.
    #[arg(long, default_value = "all")]
    levels: String,
    /// Monopole charge (sphere).
    #[arg(long, default_value_t = 0.0)]
    k: f64,
    /// Sphere radius.
    #[arg(long, default_value_t = 1.0)]
    rho: f64,
    #[arg(long, value_enum, default_value = "csv")]
    format: CsvOrJson,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct TrajectoryArgs {
    #[arg(long, allow_negative_numbers = true)]
    x0: f64,
    /// Must be positive.
    #[arg(long, allow_negative_numbers = true)]
    y0: f64,
    #[arg(long, allow_negative_numbers = true)]
    px0: f64,
    #[arg(long, allow_negative_numbers = true)]
    py0: f64,
    #[arg(long, allow_negative_numbers = true)]
    beta: f64,
    #[arg(long, default_value_t = 1.0)]
    a: f64,
    #[arg(long)]
    dt: f64,
    #[arg(long)]
    steps: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct OracleArgs {
    #[arg(long)]
    beta: f64,
    #[arg(long, default_value_t = 1e-3)]
    smin: f64,
    #[arg(long, default_value_t = 80.0)]
    smax: f64,
    /// Interior grid points.
    #[arg(long, default_value_t = 16_000)]
    points: usize,
    /// Number of lowest levels to report (default: every bound level).
    #[arg(long)]
    levels: Option<usize>,
    #[arg(long, default_value_t = 1.0)]
    m: f64,
    #[arg(long, default_value_t = 1.0)]
    a: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct EigenfunctionArgs {
    #[arg(long)]
    beta: f64,
    #[arg(long)]
    l: i64,
    /// Momentum label along x; must be positive.
    #[arg(long, default_value_t = 1.0)]
    c: f64,
    /// Comma-separated x samples.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true, default_value = "0")]
    x: Vec<f64>,
    /// Comma-separated y samples (each positive).
    #[arg(long, value_delimiter = ',', required = true)]
    y: Vec<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct LaughlinArgs {
    /// Laughlin exponent (odd for fermions).
    #[arg(long)]
    m: u32,
    /// JSON file `{"z0": r, "points": [[re, im], ...]}`.
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
}

enum CliError {
    Usage(String),
    Numerical(String),
    Strict(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Strict(_) => 1,
            CliError::Usage(_) => 2,
            CliError::Numerical(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Numerical(m) | CliError::Strict(m) => m,
        }
    }
}

type CliResult = Result<(), CliError>;

fn usage(e: impl std::fmt::Display) -> CliError {
    CliError::Usage(e.to_string())
}

fn numerical(e: impl std::fmt::Display) -> CliError {
    CliError::Numerical(e.to_string())
}

fn emit(out: &Option<PathBuf>, data: &str) -> CliResult {
    match out {
        Some(path) => {
            std::fs::write(path, data).map_err(|e| numerical(format!("cannot write {}: {e}", path.display())))
        }
        None => {
            print!("{data}");
            Ok(())
        }
    }
}

fn spectra_error(e: SpectraError) -> CliError {
    match e {
        SpectraError::NoBoundState { .. } | SpectraError::Domain(_) => usage(e),
    }
}

fn cmd_verify(args: VerifyArgs) -> CliResult {
    let reports = models::run_identity_suite().map_err(numerical)?;
    let data = match args.format {
        TextOrJson::Text => reports.iter().map(|r| format!("{r}\n")).collect::<String>(),
        TextOrJson::Json => {
            let arr: Vec<_> = reports.iter().map(|r| r.to_json()).collect();
            format!(
                "{}\n",
                serde_json::to_string_pretty(&arr).expect("json values serialize")
            )
        }
    };
    emit(&args.out, &data)?;
    let failed = reports.iter().filter(|r| r.status == Status::Fail).count();
    let documented = reports.iter().filter(|r| r.status == Status::DocumentedDiff).count();
    eprintln!(
        "{} identities: {} exact, {documented} documented diff, {failed} failed",
        reports.len(),
        reports.len() - failed - documented
    );
    if failed > 0 {
        return Err(CliError::Numerical(format!("{failed} identities failed")));
    }
    if args.strict && documented > 0 {
        return Err(CliError::Strict(format!(
            "strict mode: {documented} documented diff(s) counted as failures"
        )));
    }
    Ok(())
}

fn labels(text: &str, available: Option<u32>, flag: &str) -> Result<Vec<u32>, CliError> {
    parse_range(text).map_err(usage)?.labels(available).ok_or_else(|| {
        usage(format!(
            "--{flag} all: this geometry has infinitely many levels, give a span"
        ))
    })
}

fn cmd_spectrum(args: SpectrumArgs) -> CliResult {
    let mut params = BTreeMap::new();
    let (geometry, lines): (Geometry, Vec<SpectrumLine>) = match args.geometry {
        GeometryArg::Flat => {
            params.insert("omega_c".to_string(), args.omega_c);
            params.insert("hbar".to_string(), args.hbar);
            let lines = labels(&args.n, None, "n")?
                .into_iter()
                .map(|n| spectra::landau_flat(n, args.omega_c, args.hbar))
                .collect::<Result<_, _>>()
                .map_err(spectra_error)?;
            (Geometry::Flat, lines)
        }
        GeometryArg::Halfplane => {
            let beta = args.beta.ok_or_else(|| usage("--geometry halfplane requires --beta"))?;
            params.insert("beta".to_string(), beta);
            params.insert("m".to_string(), args.m);
            params.insert("a".to_string(), args.a);
            let count = spectra::halfplane_level_count(beta) as u32;
            let range = parse_range(&args.levels).map_err(usage)?;
            let wanted = match range {
                LevelRange::All => (0..count).collect(),
                LevelRange::Span { .. } => range.labels(None).expect("spans are finite"),
            };
            let lines = wanted
                .into_iter()
                .map(|l| spectra::landau_halfplane(beta, l.into(), args.m, args.a))
                .collect::<Result<_, _>>()
                .map_err(spectra_error)?;
            (Geometry::Halfplane, lines)
        }
        GeometryArg::Sphere => {
            params.insert("k".to_string(), args.k);
            params.insert("rho".to_string(), args.rho);
            let lines = labels(&args.l, None, "l")?
                .into_iter()
                .map(|l| spectra::sphere_spectrum(l, args.k, args.rho))
                .collect::<Result<_, _>>()
                .map_err(spectra_error)?;
            (Geometry::Sphere, lines)
        }
    };
    let data = match args.format {
        CsvOrJson::Csv => spectra::spectrum_csv(&lines),
        CsvOrJson::Json => {
            let v = spectra::spectrum_json(geometry, &params, &lines);
            format!("{}\n", serde_json::to_string_pretty(&v).expect("json values serialize"))
        }
    };
    emit(&args.out, &data)
}

fn cmd_trajectory(args: TrajectoryArgs) -> CliResult {
    if !(args.y0 > 0.0) {
        return Err(usage(format!(
            "--y0 must be positive (upper half-plane), got {}",
            args.y0
        )));
    }
    let s0 = PhaseState::new(args.x0, args.y0, args.px0, args.py0);
    let p = Params {
        a: args.a,
        beta: args.beta,
    };
    let traj = classical::integrate_rk4(s0, p, args.dt, args.steps).map_err(usage)?;
    emit(&args.out, &traj.to_csv())?;
    let d = classical::drift(&traj);
    eprintln!(
        "steps {}  drift: H {:.3e}  L1 {:.3e}  L2 {:.3e}  L3 {:.3e}  (L2 = p_x; p_y drift {:.3e})",
        traj.states.len() - 1,
        d.h,
        d.l1,
        d.l2_px,
        d.l3,
        d.l2_py
    );
    if traj.domain_exit {
        return Err(numerical(format!(
            "orbit left the half-plane after {} of {} steps; partial trajectory written",
            traj.states.len() - 1,
            args.steps
        )));
    }
    Ok(())
}

fn cmd_oracle(args: OracleArgs) -> CliResult {
    let grid = FdGrid::new(args.smin, args.smax, args.points).map_err(usage)?;
    let levels = args.levels.unwrap_or_else(|| spectra::halfplane_level_count(args.beta));
    if levels == 0 {
        return Err(usage(format!("beta = {} admits no bound levels", args.beta)));
    }
    let oracle = numverify::whittaker_oracle(args.beta, grid, levels, args.m, args.a).map_err(numerical)?;
    let report = oracle.report_json(args.m, args.a).map_err(numerical)?;
    emit(
        &args.out,
        &format!(
            "{}\n",
            serde_json::to_string_pretty(&report).expect("json values serialize")
        ),
    )?;
    let worst = oracle
        .relerr(args.m, args.a)
        .map_err(numerical)?
        .into_iter()
        .fold(0.0f64, f64::max);
    eprintln!("{levels} levels, worst relative error {worst:.3e}");
    Ok(())
}

/// Six decimals, with negative zero printed as zero.
fn fixed6(v: f64) -> String {
    let s = format!("{v:.6}");
    if s.trim_start_matches('-').bytes().all(|b| b == b'0' || b == b'.') {
        s.trim_start_matches('-').to_string()
    } else {
        s
    }
}

fn cmd_eigenfunction(args: EigenfunctionArgs) -> CliResult {
    let mut data = String::from("x,y,re,im,abs\n");
    for &y in &args.y {
        for &x in &args.x {
            let v = spectra::eigenfunction_halfplane(args.beta, args.l, args.c, x, y).map_err(spectra_error)?;
            if !(v.re.is_finite() && v.im.is_finite()) {
                return Err(numerical(format!("non-finite value at x = {x}, y = {y}")));
            }
            let _ = writeln!(data, "{x},{y},{},{},{}", fixed6(v.re), fixed6(v.im), fixed6(v.norm()));
        }
    }
    emit(&args.out, &data)
}

fn cmd_laughlin(args: LaughlinArgs) -> CliResult {
    let text = std::fs::read_to_string(&args.config)
        .map_err(|e| usage(format!("cannot read {}: {e}", args.config.display())))?;
    let cfg = parse_particle_config(&text).map_err(usage)?;
    let value = manybody::laughlin(&cfg, args.m).map_err(usage)?;
    let mut data = format!("value: {:.12e} {:+.12e}i\n", value.re, value.im);
    if cfg.len() < 2 {
        data.push_str("antisymmetry: N/A (single particle)\n");
    } else {
        let swapped = manybody::laughlin(&cfg.swapped(0, 1), args.m).map_err(usage)?;
        let expected: Complex64 = if args.m % 2 == 1 { -value } else { value };
        let kind = if args.m % 2 == 1 { "antisymmetry" } else { "symmetry" };
        let verdict = if swapped == expected { "PASS" } else { "FAIL" };
        let _ = writeln!(data, "{kind}: {verdict}");
        if swapped != expected {
            emit(&args.out, &data)?;
            return Err(numerical(format!(
                "exchange of particles 0 and 1 gave {swapped}, expected {expected}"
            )));
        }
    }
    emit(&args.out, &data)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Verify(a) => cmd_verify(a),
        Command::Spectrum(a) => cmd_spectrum(a),
        Command::Trajectory(a) => cmd_trajectory(a),
        Command::Oracle(a) => cmd_oracle(a),
        Command::Eigenfunction(a) => cmd_eigenfunction(a),
        Command::Laughlin(a) => cmd_laughlin(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}
