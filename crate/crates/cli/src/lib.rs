//! `opkit` command line: reads JSON inputs, runs one toolkit operation and
//! prints a [`Report`].
//!
//! Exit codes: 0 when every check passes, 1 when a check fails, 2 on usage,
//! parse or validation errors. Validation errors print a diagnostic on
//! standard error and a failing report with an `error` result.

mod commands;
pub mod report;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

pub use report::{Report, SCHEMA};

#[derive(Debug, Parser)]
#[command(name = "opkit", version, about = "Finite-dimensional operator theory checks with JSON reports")]
pub struct Cli {
    /// Override the command's default tolerance.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Seed for randomized commands.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Print the report as a single compact line.
    #[arg(long, global = true)]
    pub quiet: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Spectral decomposition of a Hermitian matrix.
    #[command(subcommand)]
    Spectral(SpectralCmd),
    /// GNS representation of a state given by a density matrix.
    Gns(GnsArgs),
    /// Commutant of a family of matrices.
    Commutant(CommutantArgs),
    /// Completely positive maps.
    #[command(subcommand)]
    Cp(CpCmd),
    /// Finite groups, group algebras and the ax+b group.
    #[command(subcommand)]
    Group(GroupCmd),
    /// Deficiency indices of (1/i)d/dx and its self-adjoint extensions.
    Extension(ExtensionArgs),
    /// Karhunen-Loeve sampling of Brownian motion.
    Brownian(BrownianArgs),
    /// Haar wavelet computations.
    #[command(subcommand)]
    Wavelet(WaveletCmd),
}

#[derive(Debug, Subcommand)]
pub enum SpectralCmd {
    /// Eigenvalues, multiplicities and spectral projections.
    Decompose {
        /// Matrix JSON file.
        #[arg(long)]
        matrix: PathBuf,
    },
}

#[derive(Debug, Args)]
pub struct GnsArgs {
    /// State JSON file `{"density": matrix}` (a bare matrix is accepted too).
    #[arg(long)]
    pub density: PathBuf,
    /// Algebra JSON file; defaults to all of M_n.
    #[arg(long)]
    pub algebra: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CommutantArgs {
    /// JSON list of matrices.
    #[arg(long)]
    pub generators: PathBuf,
    /// Add the adjoints of the generators.
    #[arg(long)]
    pub star: bool,
}

#[derive(Debug, Subcommand)]
pub enum CpCmd {
    /// Complete positivity, Kraus round trip and Stinespring dilation.
    Verify(CpVerifyArgs),
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false, id = "source")]
pub struct CpSource {
    /// Choi matrix JSON file.
    #[arg(long)]
    pub choi: Option<PathBuf>,
    /// Map JSON file with one of `kraus`, `choi`, `super`.
    #[arg(long)]
    pub map: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CpVerifyArgs {
    #[command(flatten)]
    pub source: CpSource,
    /// Input dimension for a bare Choi matrix (default: square root of its size).
    #[arg(long)]
    pub in_dim: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum GroupCmd {
    /// Induce a subgroup representation.
    Induce(InduceArgs),
    /// Unitary DFT on the cyclic group of the input length.
    Dft {
        /// JSON list of entries (numbers or [re, im]).
        #[arg(long)]
        input: PathBuf,
    },
    /// Haar measure invariance and modular function of the ax+b group.
    HaarCheck(HaarCheckArgs),
}

#[derive(Debug, Args)]
pub struct InduceArgs {
    /// Group JSON file; alternatively use --cyclic or --heisenberg.
    #[arg(long, conflicts_with_all = ["cyclic", "heisenberg"])]
    pub group: Option<PathBuf>,
    /// Use the cyclic group of this order.
    #[arg(long, conflicts_with = "heisenberg")]
    pub cyclic: Option<usize>,
    /// Use the Heisenberg group over Z_p for this prime p.
    #[arg(long)]
    pub heisenberg: Option<usize>,
    /// Subgroup representation JSON `{"elements": [...], "matrices": [...]}`.
    #[arg(long)]
    pub subgroup: PathBuf,
}

#[derive(Debug, Args)]
pub struct HaarCheckArgs {
    /// Translation h = (a, b).
    #[arg(long, default_value_t = 2.0)]
    pub a: f64,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub b: f64,
    /// Quadrature points per axis.
    #[arg(long, default_value_t = 400)]
    pub grid: usize,
}

#[derive(Debug, Args)]
pub struct ExtensionArgs {
    /// Grid size of the extension matrix.
    #[arg(long, default_value_t = 512)]
    pub grid: usize,
    /// Boundary phase θ in f(1) = e^{iθ} f(0).
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub theta: f64,
    /// Grid size for the deficiency computation (default: min(grid, 256)).
    #[arg(long)]
    pub deficiency_grid: Option<usize>,
}

#[derive(Debug, Args)]
pub struct BrownianArgs {
    #[arg(long, default_value_t = 64)]
    pub grid: usize,
    #[arg(long, default_value_t = 64)]
    pub modes: usize,
    #[arg(long, default_value_t = 20000)]
    pub paths: usize,
    /// `report` gives the covariance check only; `paths` adds the sampled paths.
    #[arg(long, value_enum, default_value_t = Emit::Report)]
    pub emit: Emit,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Emit {
    Report,
    Paths,
}

#[derive(Debug, Subcommand)]
pub enum WaveletCmd {
    /// Exact matrix of multiplication by t in the Haar basis.
    MtMatrix {
        #[arg(long, default_value_t = 4)]
        level: u32,
    },
}

/// Runs one invocation and returns the exit code. Reports go to standard
/// output, diagnostics to standard error.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let (report, code) = match execute(&cli) {
        Ok(r) => {
            let code = if r.pass { 0 } else { 1 };
            (r, code)
        }
        Err(msg) => {
            eprintln!("error: {msg}");
            (commands::invalid_input_report(&cli, &msg), 2)
        }
    };
    let text = if cli.quiet { serde_json::to_string(&report) } else { serde_json::to_string_pretty(&report) };
    println!("{}", text.expect("reports serialize"));
    if !cli.quiet && code != 2 {
        let failed: Vec<&str> = report.checks.iter().filter(|(_, &ok)| !ok).map(|(k, _)| k.as_str()).collect();
        if failed.is_empty() {
            eprintln!("{}: all {} checks passed", report.command, report.checks.len());
        } else {
            eprintln!("{}: failed checks: {}", report.command, failed.join(", "));
        }
    }
    code
}

/// Builds the report for a parsed command line.
pub fn execute(cli: &Cli) -> Result<Report, String> {
    commands::dispatch(cli)
}
