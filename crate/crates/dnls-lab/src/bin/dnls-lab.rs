//! Command-line front end for the DNLS laboratory.
//!
//! Eight subcommands tie the library together: `soliton`, `functionals`,
//! `gauge`, `minimize`, `classify`, `certify`, `evolve` and `converge`.  Every
//! command prints a JSON summary to stdout; commands that produce fields write
//! them as field-csv via `--out`, and `evolve` writes a whole trace directory.
//! All output is deterministic — ordered keys, 17-significant-digit floats, no
//! locale dependence — so identical invocations are byte-identical.
//!
//! Exit codes: 0 on success, 1 on domain errors (unsupported parameter
//! regimes, invalid fields, failed searches), 2 on I/O and file-format
//! errors, 64 on usage errors (which also print help).
//!
//! The environment variable `DNLS_LAB_SEED` is validated as a `u64` and
//! forwarded to the minimizer options; the default initialisation is
//! deterministic, so the variable is reserved for future randomised restarts.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};

use dnls_lab::classify::{certify_global, classify, soliton_action_level};
use dnls_lab::evolve::{
    convergence_study, evolve, observed_order, EquationForm, EvolutionConfig, ReferenceSolution,
};
use dnls_lab::fieldcsv::{read_field, write_field};
use dnls_lab::functionals::{energy, mass, momentum, FunctionalReport};
use dnls_lab::gauge::{gauge_transform, truncation_indicator};
use dnls_lab::grid::norms;
use dnls_lab::jsonio::{Json, ObjBuilder};
use dnls_lab::soliton::{
    residual_quasilinear, residual_semilinear, soliton_mass, varphi_profile, SolitonSpec,
};
use dnls_lab::trace::write_trace;
use dnls_lab::variational::{minimize_threshold, MinimizeOptions};
use dnls_lab::{Error, GridSpec, Params, Result};

/// Environment variable that pins the minimizer's randomised initialisation.
const SEED_ENV: &str = "DNLS_LAB_SEED";

/// Number of refinement levels the `converge` subcommand always runs.
const CONVERGENCE_LEVELS: usize = 3;

// ---------------------------------------------------------------------------
// Argument grammar
// ---------------------------------------------------------------------------

#[derive(Parser)]
#[command(
    name = "dnls-lab",
    version,
    about = "Numerical laboratory for a derivative nonlinear Schrödinger equation",
    arg_required_else_help = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample a solitary-wave profile and report its functionals.
    Soliton(SolitonArgs),
    /// Evaluate mass, momentum, energy, action and constraint on a stored field.
    Functionals(FunctionalsArgs),
    /// Apply the gauge transformation exp(i·a·∫ˣ|v|²) to a stored field.
    Gauge(GaugeArgs),
    /// Minimize the action over the constraint manifold.
    Minimize(MinimizeArgs),
    /// Locate a stored field relative to the variational threshold.
    Classify(ClassifyArgs),
    /// Search for a global-existence certificate for a stored field.
    Certify(CertifyArgs),
    /// Integrate the equation from stored initial data and write a trace directory.
    Evolve(EvolveArgs),
    /// Run a fixed three-level time-step refinement against the exact wave.
    Converge(ConvergeArgs),
}

/// The parameter pair (ω, c), shared by every parameter-dependent subcommand.
#[derive(Args)]
struct ParamArgs {
    /// Frequency parameter omega.
    #[arg(long, allow_hyphen_values = true)]
    omega: f64,
    /// Wave speed c.
    #[arg(long, allow_hyphen_values = true)]
    c: f64,
}

impl ParamArgs {
    fn params(&self) -> Params {
        Params::new(self.omega, self.c)
    }
}

/// Grid flags for subcommands that build their own field.
#[derive(Args)]
struct GridArgs {
    /// Number of grid points (a power of two).
    #[arg(long, default_value_t = 4096)]
    n: usize,
    /// Half-width L of the periodic box [-L, L).
    #[arg(long, default_value_t = 40.0)]
    half_width: f64,
}

impl GridArgs {
    fn grid(&self) -> Result<Arc<GridSpec>> {
        GridSpec::new(self.n, self.half_width)
    }
}

#[derive(Args)]
struct SolitonArgs {
    #[command(flatten)]
    params: ParamArgs,
    #[command(flatten)]
    grid: GridArgs,
    /// Write the sampled profile as field-csv to this path.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct FunctionalsArgs {
    #[command(flatten)]
    params: ParamArgs,
    /// Input field (field-csv).
    #[arg(long = "in")]
    input: PathBuf,
}

#[derive(Args)]
struct GaugeArgs {
    /// Gauge exponent a in exp(i·a·∫ˣ|v|²).
    #[arg(long, allow_hyphen_values = true)]
    a: f64,
    /// Input field (field-csv).
    #[arg(long = "in")]
    input: PathBuf,
    /// Write the transformed field as field-csv to this path.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct MinimizeArgs {
    #[command(flatten)]
    params: ParamArgs,
    #[command(flatten)]
    grid: GridArgs,
    /// Write the minimizer as field-csv to this path.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ClassifyArgs {
    #[command(flatten)]
    params: ParamArgs,
    /// Input field (field-csv).
    #[arg(long = "in")]
    input: PathBuf,
}

#[derive(Args)]
struct CertifyArgs {
    /// Input field (field-csv).
    #[arg(long = "in")]
    input: PathBuf,
}

#[derive(Args)]
struct EvolveArgs {
    #[command(flatten)]
    params: ParamArgs,
    /// Initial data (field-csv); the grid is inferred from the file.
    #[arg(long = "in")]
    input: PathBuf,
    /// Physical end time.
    #[arg(long)]
    t_end: f64,
    /// Fixed time step.
    #[arg(long)]
    dt: f64,
    /// Record a snapshot every this many steps (default 100).
    #[arg(long)]
    stride: Option<usize>,
    /// Truncate nonlinear products by the 2/3 rule.
    #[arg(
        long,
        default_value = "on",
        value_name = "on|off",
        value_parser = parse_on_off,
        action = clap::ArgAction::Set
    )]
    dealias: bool,
    /// Equation form to advance: u (gauged) or v (divergence).
    #[arg(long, default_value = "u", value_name = "u|v", value_parser = parse_form)]
    form: EquationForm,
    /// Trace directory to write.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct ConvergeArgs {
    #[command(flatten)]
    params: ParamArgs,
    #[command(flatten)]
    grid: GridArgs,
    /// End time of each run.
    #[arg(long, default_value_t = 1.0)]
    t_end: f64,
    /// Base time step; the two further levels halve it successively.
    #[arg(long, default_value_t = 1e-3)]
    dt: f64,
    /// Worker threads for the independent runs (default: all cores).
    #[arg(long)]
    jobs: Option<usize>,
}

fn parse_on_off(text: &str) -> std::result::Result<bool, String> {
    match text {
        "on" => Ok(true),
        "off" => Ok(false),
        other => Err(format!("expected 'on' or 'off', got {other:?}")),
    }
}

fn parse_form(text: &str) -> std::result::Result<EquationForm, String> {
    match text {
        "u" => Ok(EquationForm::UForm),
        "v" => Ok(EquationForm::VForm),
        other => Err(format!("expected 'u' or 'v', got {other:?}")),
    }
}

// ---------------------------------------------------------------------------
// Entry point and dispatch
// ---------------------------------------------------------------------------

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Help and version requests are successes; everything else is a
            // usage error (clap prints the relevant help either way).
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 64,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let seed = match read_seed_env() {
        Ok(seed) => seed,
        Err(message) => {
            eprintln!("error: {message}");
            return ExitCode::from(64);
        }
    };
    match run(cli.command, seed) {
        Ok(doc) => {
            println!("{}", doc.render());
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_domain() { 1 } else { 2 })
        }
    }
}

/// Reads and validates the seed environment variable.
fn read_seed_env() -> std::result::Result<Option<u64>, String> {
    match std::env::var(SEED_ENV) {
        Ok(text) => text
            .trim()
            .parse::<u64>()
            .map(Some)
            .map_err(|_| format!("{SEED_ENV} must be an unsigned 64-bit integer, got {text:?}")),
        Err(std::env::VarError::NotPresent) => Ok(None),
        Err(std::env::VarError::NotUnicode(_)) => Err(format!("{SEED_ENV} is not valid unicode")),
    }
}

fn run(command: Command, seed: Option<u64>) -> Result<Json> {
    match command {
        Command::Soliton(args) => run_soliton(args),
        Command::Functionals(args) => run_functionals(args),
        Command::Gauge(args) => run_gauge(args),
        Command::Minimize(args) => run_minimize(args, seed),
        Command::Classify(args) => run_classify(args),
        Command::Certify(args) => run_certify(args),
        Command::Evolve(args) => run_evolve(args),
        Command::Converge(args) => run_converge(args),
    }
}

// ---------------------------------------------------------------------------
// Subcommand bodies
// ---------------------------------------------------------------------------

fn run_soliton(args: SolitonArgs) -> Result<Json> {
    let params = args.params.params();
    let spec = SolitonSpec::centered(params)?;
    let grid = args.grid.grid()?;
    let field = varphi_profile(&spec, &grid)?;
    let report = FunctionalReport::evaluate(&field, params)?;
    if let Some(path) = &args.out {
        write_field(path, &field)?;
    }
    Ok(ObjBuilder::new()
        .field("params", params_json(params))
        .field("grid", grid_json(&grid))
        .field("report", report_json(&report))
        .field(
            "residuals",
            ObjBuilder::new()
                .field("semilinear", residual_semilinear(&field, params))
                .field("quasilinear", residual_quasilinear(&field, params))
                .build(),
        )
        .field(
            // The soliton's squared L² norm ‖φ‖² (without the ½ of the
            // conserved functional M): the sampled value next to the
            // closed form, which exists in the open regime only.
            "mass",
            ObjBuilder::new()
                .field("quadrature", norms(&field).l2_sq)
                .maybe("closed_form", soliton_mass(params).ok())
                .build(),
        )
        .field("action_level", soliton_action_level(params)?)
        .maybe("out", args.out.as_deref().map(path_str))
        .build())
}

fn run_functionals(args: FunctionalsArgs) -> Result<Json> {
    let params = args.params.params();
    let field = read_field(&args.input)?;
    let report = FunctionalReport::evaluate(&field, params)?;
    Ok(ObjBuilder::new()
        .field("params", params_json(params))
        .field("grid", grid_json(&field.grid))
        .field("report", report_json(&report))
        .build())
}

fn run_gauge(args: GaugeArgs) -> Result<Json> {
    let field = read_field(&args.input)?;
    let transformed = gauge_transform(&field, args.a);
    if let Some(path) = &args.out {
        write_field(path, &transformed)?;
    }
    Ok(ObjBuilder::new()
        .field("a", args.a)
        .field("grid", grid_json(&field.grid))
        .field("mass_in", mass(&field))
        .field("mass_out", mass(&transformed))
        .field("truncation_indicator", truncation_indicator(&field))
        .maybe("out", args.out.as_deref().map(path_str))
        .build())
}

fn run_minimize(args: MinimizeArgs, seed: Option<u64>) -> Result<Json> {
    let params = args.params.params();
    let grid = args.grid.grid()?;
    let mut options = MinimizeOptions::new(Arc::clone(&grid));
    options.seed = seed;
    let result = minimize_threshold(params, &options)?;
    if let Some(path) = &args.out {
        write_field(path, &result.minimizer)?;
    }
    let threshold = soliton_action_level(params)?;
    Ok(ObjBuilder::new()
        .field("params", params_json(params))
        .field("grid", grid_json(&grid))
        .field("j_value", result.j_value)
        .field("k_value", result.k_value)
        .field("iterations", result.iterations)
        .field("converged", result.converged)
        .field("threshold_closed_form", threshold)
        .field("relative_gap", (result.j_value - threshold) / threshold)
        .maybe("out", args.out.as_deref().map(path_str))
        .build())
}

fn run_classify(args: ClassifyArgs) -> Result<Json> {
    let params = args.params.params();
    let field = read_field(&args.input)?;
    let verdict = classify(&field, params, None)?;
    Ok(ObjBuilder::new()
        .field("params", params_json(params))
        .field("grid", grid_json(&field.grid))
        .field("j_value", verdict.j_value)
        .field("k_value", verdict.k_value)
        .field("j_threshold", verdict.j_threshold)
        .field("set", verdict.set.name())
        .maybe("h1_bound", verdict.h1_bound)
        .build())
}

fn run_certify(args: CertifyArgs) -> Result<Json> {
    let field = read_field(&args.input)?;
    let certificate = certify_global(&field);
    Ok(ObjBuilder::new()
        .field("grid", grid_json(&field.grid))
        .field("mass", mass(&field))
        .field("momentum", momentum(&field))
        .field("energy", energy(&field))
        .field("condition_met", certificate.condition_met.name())
        .field(
            "admissible_c",
            certificate.admissible_c.map_or(Json::Null, Json::Num),
        )
        .field(
            "kplus_params",
            certificate.kplus_params.map_or(Json::Null, params_json),
        )
        .build())
}

fn run_evolve(args: EvolveArgs) -> Result<Json> {
    let params = args.params.params();
    let field = read_field(&args.input)?;
    let mut config = EvolutionConfig::new(args.t_end, args.dt)?;
    config.dealias = args.dealias;
    config.equation_form = args.form;
    if let Some(stride) = args.stride {
        config.snapshot_stride = stride;
    }
    config.validate()?;
    let trace = evolve(&field, &config, params)?;
    write_trace(&args.out, &trace, &config, params)?;
    Ok(ObjBuilder::new()
        .field("out_dir", path_str(&args.out))
        .field(
            "config",
            ObjBuilder::new()
                .field("t_end", config.t_end)
                .field("dt", config.dt)
                .field("dealias", config.dealias)
                .field("snapshot_stride", config.snapshot_stride)
                .field("equation_form", config.equation_form.name())
                .build(),
        )
        .field("params", params_json(params))
        .field("grid", grid_json(&field.grid))
        .field("snapshot_count", trace.snapshots.len())
        .field(
            "max_drift",
            ObjBuilder::new()
                .field("mass", trace.max_drift.mass)
                .field("momentum", trace.max_drift.momentum)
                .field("energy", trace.max_drift.energy)
                .build(),
        )
        .build())
}

fn run_converge(args: ConvergeArgs) -> Result<Json> {
    if let Some(jobs) = args.jobs {
        configure_jobs(jobs)?;
    }
    let params = args.params.params();
    let spec = SolitonSpec::centered(params)?;
    let grid = args.grid.grid()?;
    let u0 = varphi_profile(&spec, &grid)?;
    let rows = convergence_study(
        &u0,
        args.t_end,
        args.dt,
        CONVERGENCE_LEVELS,
        &ReferenceSolution::TravelingWave(spec),
    )?;
    let levels: Vec<Json> = rows
        .iter()
        .map(|row| {
            ObjBuilder::new()
                .field("dt", row.dt)
                .field("error", row.error)
                .build()
        })
        .collect();
    Ok(ObjBuilder::new()
        .field("params", params_json(params))
        .field("grid", grid_json(&grid))
        .field("t_end", args.t_end)
        .field("base_dt", args.dt)
        .field("levels", Json::Arr(levels))
        .field("observed_order", observed_order(&rows))
        .build())
}

/// Sizes the global worker pool for the independent runs of a sweep.
fn configure_jobs(jobs: usize) -> Result<()> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build_global()
        .map_err(|e| Error::InvalidField {
            reason: format!("cannot configure {jobs} worker threads: {e}"),
        })
}

// ---------------------------------------------------------------------------
// JSON assembly helpers
// ---------------------------------------------------------------------------

fn params_json(params: Params) -> Json {
    ObjBuilder::new()
        .field("omega", params.omega)
        .field("c", params.c)
        .field("regime", params.regime().name())
        .build()
}

fn grid_json(grid: &GridSpec) -> Json {
    ObjBuilder::new()
        .field("n_points", grid.n_points)
        .field("half_width", grid.half_width)
        .field("spacing", grid.spacing)
        .build()
}

fn report_json(report: &FunctionalReport) -> Json {
    ObjBuilder::new()
        .field("mass", report.mass)
        .field("momentum", report.momentum)
        .field("energy", report.energy)
        .field("action", report.action)
        .field("nehari", report.nehari)
        .field("quadratic_part", report.quadratic_part)
        .field("nonlinear_part", report.nonlinear_part)
        .field("positive_part", report.positive_part)
        .build()
}

fn path_str(path: &Path) -> String {
    path.display().to_string()
}
