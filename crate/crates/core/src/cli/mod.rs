//! Batch driver behind the `drspace` binary.
//!
//! Exit codes: 0 when every check passes, 1 when any check fails, 2 on a
//! configuration, usage or IO error.

pub mod config;
pub mod report;
pub mod suites;

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::clifford_algebra::{build_algebra, CliffordSpec, DamekRicciAlgebra};
use crate::error::{Error, Result};

pub use config::SpaceConfig;
pub use report::{emit_report, CheckResult, Format, Report};
pub use suites::SuiteOptions;

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_ERROR: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "drspace", version, about = "Verification suites for Damek-Ricci spaces")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Clifford relations and bracket identities.
    Validate(Common),
    /// Isoparametric identities, the D_⊛ limit and translation laws.
    VerifyIso(Common),
    /// Unit speed, conic prolongations and points at infinity.
    Geodesic(Common),
    /// J²-condition against the module classification.
    J2Scan(GridArgs),
    /// Mean curvature of spheres, horospheres and tubes.
    CurvatureTable(CurvatureArgs),
    /// Focal varieties: orthogonality, harmonic ranges, total geodesy.
    FocalCheck(GridArgs),
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Space specification (TOML).
    #[arg(long)]
    pub spec: PathBuf,
    /// Seed; overrides the `seed` key of the specification.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Number of random samples of the main sweep.
    #[arg(long)]
    pub samples: Option<usize>,
    /// Tolerance of closed-form checks; overrides the `tol` key.
    #[arg(long)]
    pub tol_exact: Option<f64>,
    /// Tolerance of finite-difference checks.
    #[arg(long)]
    pub tol_fd: Option<f64>,
    /// Report path; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
}

#[derive(Debug, Clone, Args)]
pub struct GridArgs {
    #[command(flatten)]
    pub common: Common,
    /// Grid size of the scan.
    #[arg(long)]
    pub grid: Option<usize>,
}

#[derive(Debug, Clone, Args)]
pub struct CurvatureArgs {
    /// Space specification; supplies `m` and `n` when given.
    #[arg(long)]
    pub spec: Option<PathBuf>,
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long)]
    pub n: Option<usize>,
    /// Comma-separated radii.
    #[arg(long, value_delimiter = ',')]
    pub radii: Option<Vec<f64>>,
    #[arg(long)]
    pub tol_exact: Option<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
}

/// Parse `argv` (including the program name), run the command and return
/// the exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => EXIT_PASS,
                _ => EXIT_ERROR,
            };
        }
    };
    let (report, format, out) = match execute(&cli.command) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("drspace: {e}");
            return EXIT_ERROR;
        }
    };
    if let Err(e) = emit_report(&report, format, out.as_deref()) {
        eprintln!("drspace: cannot write report: {e}");
        return EXIT_ERROR;
    }
    if report.all_pass() {
        EXIT_PASS
    } else {
        for r in report.results.iter().filter(|r| !r.pass) {
            eprintln!("drspace: FAIL {} ({:e} vs {:e})", r.name, r.max_residual, r.tolerance);
        }
        EXIT_FAIL
    }
}

struct Loaded {
    spec: CliffordSpec,
    alg: DamekRicciAlgebra,
    opts: SuiteOptions,
    label: String,
}

fn check_positive(name: &str, x: Option<f64>) -> Result<()> {
    match x {
        Some(v) if !(v > 0.0) => Err(Error::InvalidInput(format!("{name} must be positive, got {v}"))),
        _ => Ok(()),
    }
}

fn check_count(name: &str, x: Option<usize>) -> Result<()> {
    match x {
        Some(0) => Err(Error::InvalidInput(format!("{name} must be at least 1"))),
        _ => Ok(()),
    }
}

fn load(common: &Common, grid: Option<usize>) -> Result<Loaded> {
    check_positive("--tol-exact", common.tol_exact)?;
    check_positive("--tol-fd", common.tol_fd)?;
    check_count("--samples", common.samples)?;
    check_count("--grid", grid)?;
    let cfg = SpaceConfig::load(&common.spec)?;
    let spec = cfg.to_spec()?;
    let alg = build_algebra(&spec)?;
    let opts = SuiteOptions {
        seed: common.seed.or(cfg.seed).unwrap_or(0),
        samples: common.samples,
        tol_exact: common.tol_exact.or(cfg.tol),
        tol_fd: common.tol_fd,
        grid,
    };
    Ok(Loaded { spec, alg, opts, label: spec_label(&common.spec) })
}

fn spec_label(path: &Path) -> String {
    path.file_name().map(|f| f.to_string_lossy().into_owned()).unwrap_or_else(|| path.display().to_string())
}

type Outcome = (Report, Format, Option<PathBuf>);

fn finish(name: &str, l: &Loaded, results: Vec<CheckResult>, common: &Common) -> Outcome {
    let report = Report { meta: report::Meta::new(name, Some(l.label.clone()), l.opts.seed), results, table: None };
    (report, common.format, common.out.clone())
}

fn execute(command: &Command) -> Result<Outcome> {
    match command {
        Command::Validate(c) => {
            let l = load(c, None)?;
            Ok(finish("validate", &l, suites::validate(&l.alg, &l.opts), c))
        }
        Command::VerifyIso(c) => {
            let l = load(c, None)?;
            Ok(finish("verify-iso", &l, suites::verify_iso(&l.alg, &l.opts)?, c))
        }
        Command::Geodesic(c) => {
            let l = load(c, None)?;
            Ok(finish("geodesic", &l, suites::geodesic(&l.alg, &l.opts)?, c))
        }
        Command::J2Scan(g) => {
            let l = load(&g.common, g.grid)?;
            Ok(finish("j2-scan", &l, suites::j2_scan(&l.spec, &l.alg, &l.opts)?, &g.common))
        }
        Command::FocalCheck(g) => {
            let l = load(&g.common, g.grid)?;
            Ok(finish("focal-check", &l, suites::focal_check(&l.alg, &l.opts)?, &g.common))
        }
        Command::CurvatureTable(a) => {
            check_positive("--tol-exact", a.tol_exact)?;
            let (m, n, label, seed) = match &a.spec {
                Some(path) => {
                    let cfg = SpaceConfig::load(path)?;
                    let alg = build_algebra(&cfg.to_spec()?)?;
                    (alg.m(), alg.n(), Some(spec_label(path)), cfg.seed.unwrap_or(0))
                }
                None => match (a.m, a.n) {
                    (Some(m), Some(n)) => (m, n, None, 0),
                    _ => return Err(Error::InvalidInput("curvature-table needs --spec or both --m and --n".into())),
                },
            };
            let radii = a.radii.clone().unwrap_or_else(|| suites::DEFAULT_RADII.to_vec());
            let opts = SuiteOptions { tol_exact: a.tol_exact, ..SuiteOptions::with_seed(seed) };
            let (results, table) = suites::curvature_table(m, n, &radii, &opts)?;
            let report = Report { meta: report::Meta::new("curvature-table", label, seed), results, table: Some(table) };
            Ok((report, a.format, a.out.clone()))
        }
    }
}
