//! Command-line surface: argument types, dispatch and output plumbing.
//!
//! Every subcommand writes CSV or JSON to `--out` (or stdout). When `--out` is
//! given, a `<out>.manifest.json` sidecar records the configuration, the
//! library version and the wall time.

mod commands;

use std::fs::File;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernel::edge_point;

/// Environment variable holding the worker count.
pub const THREADS_ENV: &str = "SYMPLECTIC_GINIBRE_THREADS";

#[derive(Debug, Parser)]
#[command(name = "symplectic-ginibre", version, about = "Kernels, densities and samples of the symplectic elliptic Ginibre ensemble")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Subcommand, Serialize)]
#[serde(tag = "subcommand", rename_all = "snake_case")]
pub enum Command {
    /// One-point function along a cross-section or on a grid, with its limit and first correction.
    Density(DensityArgs),
    /// Least-squares extrapolation of R_N over several N along a cross-section.
    Figure2(Figure2Args),
    /// Finite-N and limiting pre-kernels at one pair of points.
    Kernel(KernelArgs),
    /// Residual, skew-orthogonality, Pfaffian and cocycle self-checks.
    Check(CheckArgs),
    /// Eigenvalues of random matrices.
    Sample(SampleArgs),
    /// Pfaffian of a skew-symmetric matrix read from CSV (re, im pairs per entry).
    Pfaffian(PfaffianArgs),
    /// Fit a + b/sqrt(N) + c/N (or a log-log rate) to CSV rows (N, value).
    Extrapolate(ExtrapolateArgs),
}

/// Named centres; `bulk` is half-way to the right edge, `outside` 1.2 times the edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RegimeName {
    Origin,
    Bulk,
    Edge,
    Outside,
}

impl RegimeName {
    pub fn point(self, tau: f64) -> f64 {
        match self {
            Self::Origin => 0.0,
            Self::Bulk => 0.5 * edge_point(tau),
            Self::Edge => edge_point(tau),
            Self::Outside => 1.2 * edge_point(tau),
        }
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct CentreArgs {
    #[arg(long, default_value_t = 1.0 / 3.0)]
    pub tau: f64,
    /// Rescaling centre on the real axis.
    #[arg(long, conflicts_with = "regime", allow_hyphen_values = true)]
    pub p: Option<f64>,
    #[arg(long, value_enum)]
    pub regime: Option<RegimeName>,
}

impl CentreArgs {
    pub fn centre(&self, default: RegimeName) -> Result<f64> {
        validate_tau(self.tau)?;
        let p = match (self.p, self.regime) {
            (Some(p), _) => p,
            (None, Some(r)) => r.point(self.tau),
            (None, None) => default.point(self.tau),
        };
        if !p.is_finite() {
            return Err(Error::Config(format!("p = {p} is not finite")));
        }
        Ok(p)
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct PointsArgs {
    /// Segment `x0,y0,x1,y1` sampled at `--samples` equispaced points.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, conflicts_with = "grid")]
    pub line: Option<Vec<f64>>,
    /// Rectangle `re_min,re_max,im_min,im_max` sampled on a `--samples` by `--samples` grid.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub grid: Option<Vec<f64>>,
    #[arg(long)]
    pub samples: Option<usize>,
}

impl PointsArgs {
    pub fn points(&self, default_line: Option<[f64; 4]>, default_samples: usize) -> Result<Vec<Complex64>> {
        for (name, v) in [("line", &self.line), ("grid", &self.grid)] {
            if v.as_ref().is_some_and(|v| v.len() != 4) {
                return Err(Error::Config(format!("--{name} expects four comma-separated numbers")));
            }
        }
        let n = self.samples.unwrap_or(default_samples);
        if n == 0 {
            return Err(Error::Config("empty grid: --samples must be positive".into()));
        }
        let lerp = |a: f64, b: f64, i: usize| if n == 1 { a } else { a + (b - a) * i as f64 / (n - 1) as f64 };
        let pts: Vec<Complex64> = if let Some(g) = &self.grid {
            (0..n)
                .flat_map(|j| (0..n).map(move |i| (i, j)))
                .map(|(i, j)| Complex64::new(lerp(g[0], g[1], i), lerp(g[2], g[3], j)))
                .collect()
        } else {
            let l = match (&self.line, default_line) {
                (Some(l), _) => [l[0], l[1], l[2], l[3]],
                (None, Some(d)) => d,
                (None, None) => return Err(Error::Config("one of --line or --grid is required".into())),
            };
            (0..n).map(|i| Complex64::new(lerp(l[0], l[2], i), lerp(l[1], l[3], i))).collect()
        };
        if pts.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::Config("non-finite grid coordinates".into()));
        }
        Ok(pts)
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct OutputArgs {
    /// Output file; stdout when absent (no manifest is written then).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct DensityArgs {
    #[arg(long = "N")]
    pub n: usize,
    #[command(flatten)]
    pub centre: CentreArgs,
    #[command(flatten)]
    pub points: PointsArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct Figure2Args {
    #[arg(long = "N-list", value_delimiter = ',', default_value = "2000,3000,4000,5000")]
    pub n_list: Vec<usize>,
    #[command(flatten)]
    pub centre: CentreArgs,
    /// Cross-section; defaults to Im z = 2, Re z in [-2, 2] with 41 samples.
    #[command(flatten)]
    pub points: PointsArgs,
    /// Tolerances for the recovered limit and first correction.
    #[arg(long, value_delimiter = ',', default_value = "1e-3,2e-2")]
    pub tol: Vec<f64>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct KernelArgs {
    #[arg(long = "N")]
    pub n: usize,
    #[command(flatten)]
    pub centre: CentreArgs,
    /// First point as `re,im`.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub z: Vec<f64>,
    /// Second point as `re,im`.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub w: Vec<f64>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct CheckArgs {
    /// Random point pairs per residual-grid cell.
    #[arg(long, default_value_t = 10)]
    pub samples: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Tolerance for the residual and skew-orthogonality suites.
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
    /// Perturb the largest Hermite term by one part in a million; the CD check must then fail.
    #[arg(long)]
    pub perturb: bool,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SampleArgs {
    #[arg(long = "N")]
    pub n: usize,
    /// Rescaling centre for the `rescaled_*` columns (origin by default).
    #[command(flatten)]
    pub centre: CentreArgs,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Number of matrices, with seeds `seed, seed + 1, ...`.
    #[arg(long, default_value_t = 1)]
    pub samples: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct PfaffianArgs {
    /// CSV without header; row i holds re, im of entries (i, 0), (i, 1), ...
    #[arg(long)]
    pub input: PathBuf,
    /// Relative tolerance for the skew-symmetry check of the input.
    #[arg(long, default_value_t = 1e-12)]
    pub tol: f64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ExtrapolateArgs {
    /// CSV with header `N,value`.
    #[arg(long)]
    pub input: PathBuf,
    /// Fit the log-log slope of |value| instead of the series.
    #[arg(long)]
    pub rate: bool,
    #[command(flatten)]
    pub output: OutputArgs,
}

/// Whether the run met its tolerances.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    Fail,
}

/// Process exit status for an outcome or error: 0 pass, 2 invalid input, 3 tolerance failure, 1 I/O.
pub fn exit_code(result: &Result<Outcome>) -> u8 {
    match result {
        Ok(Outcome::Pass) => 0,
        Ok(Outcome::Fail) => 3,
        Err(Error::Config(_) | Error::Precondition(_) | Error::TauZero) => 2,
        Err(Error::Io(_)) => 1,
        Err(_) => 3,
    }
}

fn validate_tau(tau: f64) -> Result<()> {
    if !(0.0..1.0).contains(&tau) {
        return Err(Error::Config(format!("tau = {tau} outside [0, 1)")));
    }
    Ok(())
}

fn validate_n(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::Config("N must be positive".into()));
    }
    Ok(())
}

/// Size the global worker pool from [`THREADS_ENV`]; unset means one worker per core.
pub fn configure_threads() -> Result<()> {
    let Ok(v) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = v
        .parse()
        .map_err(|_| Error::Config(format!("{THREADS_ENV}={v} is not a worker count")))?;
    // a second initialisation in the same process keeps the first pool
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}

/// Seventeen significant digits, so values round-trip exactly.
pub fn fmt_float(x: f64) -> String {
    format!("{x:.16e}")
}

/// A CSV table with a header row.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Self { header: header.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push_floats(&mut self, row: &[f64]) {
        self.rows.push(row.iter().map(|&x| fmt_float(x)).collect());
    }

    pub fn write(&self, w: impl Write) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        let csv_err = |e: csv::Error| Error::Io(io::Error::other(e));
        out.write_record(&self.header).map_err(csv_err)?;
        for r in &self.rows {
            out.write_record(r).map_err(csv_err)?;
        }
        out.flush()?;
        Ok(())
    }
}

/// What a subcommand produced.
pub enum Artifact {
    Csv(Table),
    Json(serde_json::Value),
}

fn write_artifact(artifact: &Artifact, out: Option<&Path>) -> Result<()> {
    let sink: Box<dyn Write> = match out {
        Some(p) => Box::new(File::create(p)?),
        None => Box::new(io::stdout().lock()),
    };
    match artifact {
        Artifact::Csv(t) => t.write(sink),
        Artifact::Json(v) => {
            let mut sink = sink;
            serde_json::to_writer_pretty(&mut sink, v).map_err(|e| Error::Io(io::Error::other(e)))?;
            writeln!(sink)?;
            Ok(())
        }
    }
}

/// `<out>.manifest.json`
pub fn manifest_path(out: &Path) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(".manifest.json");
    PathBuf::from(s)
}

fn output_of(cmd: &Command) -> Option<&Path> {
    let o = match cmd {
        Command::Density(a) => &a.output,
        Command::Figure2(a) => &a.output,
        Command::Kernel(a) => &a.output,
        Command::Check(a) => &a.output,
        Command::Sample(a) => &a.output,
        Command::Pfaffian(a) => &a.output,
        Command::Extrapolate(a) => &a.output,
    };
    o.out.as_deref()
}

/// Run one subcommand, writing its output and manifest.
pub fn run(cmd: &Command) -> Result<Outcome> {
    configure_threads()?;
    let start = Instant::now();
    let (artifact, outcome, summary) = match cmd {
        Command::Density(a) => commands::density(a)?,
        Command::Figure2(a) => commands::figure2(a)?,
        Command::Kernel(a) => commands::kernel(a)?,
        Command::Check(a) => commands::check(a)?,
        Command::Sample(a) => commands::sample(a)?,
        Command::Pfaffian(a) => commands::pfaffian(a)?,
        Command::Extrapolate(a) => commands::extrapolate(a)?,
    };
    let out = output_of(cmd);
    write_artifact(&artifact, out)?;
    if let Some(out) = out {
        let manifest = serde_json::json!({
            "config": cmd,
            "version": env!("CARGO_PKG_VERSION"),
            "wall_time_s": start.elapsed().as_secs_f64(),
            "outcome": if outcome == Outcome::Pass { "pass" } else { "fail" },
            "summary": summary,
        });
        let f = File::create(manifest_path(out))?;
        serde_json::to_writer_pretty(f, &manifest).map_err(|e| Error::Io(io::Error::other(e)))?;
    }
    Ok(outcome)
}
