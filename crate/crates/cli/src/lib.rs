//! `morse-dk` command-line driver.
//!
//! Every command writes its artifacts into the output directory and returns
//! an [`Outcome`]; the binary maps that to an exit code.
//!
//! | command       | files                               |
//! |---------------|-------------------------------------|
//! | `spectrum`    | `spectrum.json`, `spectrum.csv`     |
//! | `verify`      | `verification_report.json`          |
//! | `kernel`      | `kernel.csv`                        |
//! | `hille-hardy` | `hille_hardy.csv`                   |
//! | `pt-check`    | `pt_check.json`                     |

pub mod config;
pub mod error;
pub mod report;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use morse_dk_core::analytic::{spectrum, Backend};
use morse_dk_core::exec::{self, Execution};
use morse_dk_core::model::{check_pt_symmetry, symmetric_probe, FrequencyConvention};
use morse_dk_core::propagator::{kernel_sweep, KernelMethod, KernelParams, KernelSample, PropagatorError, SweepSettings};
use morse_dk_core::specfun::{variant_form_diagnostic, SpecFunError};
use morse_dk_core::Complex;
use serde::Serialize;

pub use error::{exit, CliError, Outcome, Status};

use config::{ConfigFile, SpecOverrides};

#[derive(Debug, Parser)]
#[command(name = "morse-dk", version, about = "Spectra, kernels and verification reports for Morse-family potentials")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Worker threads; 1 runs everything sequentially.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// Output directory (default: config `output_dir`, then $MORSE_DK_OUTPUT_DIR, then `.`).
    #[arg(long, global = true)]
    pub output_dir: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Closed-form energy levels.
    Spectrum(SpectrumArgs),
    /// Both backends against the oracle and the ODE residual.
    Verify(VerifyArgs),
    /// Radial-oscillator kernel by several methods over a tau sweep.
    Kernel(KernelArgs),
    /// Hille-Hardy identity residual and variant-form deviation.
    HilleHardy(HilleHardyArgs),
    /// PT-symmetry test of a potential.
    PtCheck(PtCheckArgs),
}

#[derive(Debug, Clone, Default, Args)]
pub struct SpecArgs {
    /// JSON config file; flags override its values.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub variant: Option<String>,
    /// Particle mass m.
    #[arg(long = "m", visible_alias = "mass", allow_hyphen_values = true)]
    pub mass: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<f64>,
    /// `re` or `re,im`.
    #[arg(long, value_parser = config::parse_complex, allow_hyphen_values = true)]
    pub v1: Option<Complex>,
    /// `re` or `re,im`.
    #[arg(long, value_parser = config::parse_complex, allow_hyphen_values = true)]
    pub v2: Option<Complex>,
    #[arg(long = "A", allow_hyphen_values = true)]
    pub a: Option<f64>,
    #[arg(long = "B", allow_hyphen_values = true)]
    pub b: Option<f64>,
    #[arg(long = "C", allow_hyphen_values = true)]
    pub c: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub origin_shift: Option<f64>,
}

impl SpecArgs {
    fn overrides(&self) -> SpecOverrides {
        SpecOverrides {
            variant: self.variant.clone(),
            mass: self.mass,
            alpha: self.alpha,
            v1: self.v1,
            v2: self.v2,
            a: self.a,
            b: self.b,
            c: self.c,
            origin_shift: self.origin_shift,
        }
    }

    fn load(&self) -> Result<ConfigFile, CliError> {
        match &self.config {
            Some(p) => ConfigFile::load(p),
            None => Ok(ConfigFile::default()),
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct SpectrumArgs {
    #[command(flatten)]
    pub spec: SpecArgs,
    /// `pole` or `paper-literal`.
    #[arg(long)]
    pub backend: Option<String>,
    /// `rederived` or `paper-literal`.
    #[arg(long)]
    pub convention: Option<String>,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub spec: SpecArgs,
    /// Frequency convention for the pole-condition rows.
    #[arg(long)]
    pub convention: Option<String>,
    #[arg(long)]
    pub points: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    pub x_min: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub x_max: Option<f64>,
    #[arg(long)]
    pub abs_gap_tol: Option<f64>,
    #[arg(long)]
    pub residual_tol: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct KernelArgs {
    /// Comma-separated subset of closed, spectral, sliced.
    #[arg(long, value_delimiter = ',', default_value = "closed,spectral,sliced")]
    pub method: Vec<KernelMethod>,
    /// Comma-separated Euclidean times.
    #[arg(long, value_delimiter = ',', default_value = "1")]
    pub tau: Vec<f64>,
    #[arg(long, default_value_t = 1.0)]
    pub nu: f64,
    /// Oscillator mass M.
    #[arg(long, default_value_t = 1.0)]
    pub mass: f64,
    #[arg(long, default_value_t = 1.0)]
    pub omega: f64,
    #[arg(long, default_value_t = 1.0)]
    pub u_a: f64,
    #[arg(long, default_value_t = 1.0)]
    pub u_b: f64,
    #[arg(long, default_value_t = 80)]
    pub n_trunc: usize,
    #[arg(long, default_value_t = 256)]
    pub n_slices: usize,
    #[arg(long, default_value_t = 2000)]
    pub radial_points: usize,
    /// Largest allowed pairwise gap between methods at one tau.
    #[arg(long, default_value_t = 1e-6)]
    pub tolerance: f64,
}

#[derive(Debug, Clone, Args)]
pub struct HilleHardyArgs {
    #[arg(long, default_value_t = 0.3)]
    pub t: f64,
    #[arg(long, default_value_t = 0.7)]
    pub x: f64,
    #[arg(long, default_value_t = 1.1)]
    pub y: f64,
    #[arg(long, default_value_t = 0.5)]
    pub a: f64,
    /// Series truncation.
    #[arg(long, default_value_t = 60)]
    pub n: usize,
    /// Evaluate the fixed 12-point lattice instead of a single point.
    #[arg(long)]
    pub lattice: bool,
    #[arg(long, default_value_t = 1e-12)]
    pub tolerance: f64,
}

#[derive(Debug, Clone, Args)]
pub struct PtCheckArgs {
    #[command(flatten)]
    pub spec: SpecArgs,
    #[arg(long, default_value_t = 5.0)]
    pub half_width: f64,
    #[arg(long, default_value_t = 201)]
    pub probe_points: usize,
}

pub const HILLE_HARDY_LATTICE_T: [f64; 3] = [0.1, 0.3, 0.5];
pub const HILLE_HARDY_LATTICE_XY: [(f64, f64); 2] = [(0.7, 1.1), (2.0, 0.4)];
pub const HILLE_HARDY_LATTICE_A: [f64; 2] = [0.5, 1.5];

pub fn run(cli: Cli) -> Result<Outcome, CliError> {
    if let Some(jobs) = cli.jobs {
        if jobs == 0 {
            return Err(error::config("--jobs must be at least 1"));
        }
        exec::init_thread_pool(jobs);
    }
    let exec = Execution::from_jobs(cli.jobs);
    let out = cli.output_dir.as_deref();
    match cli.command {
        Command::Spectrum(a) => cmd_spectrum(&a, out),
        Command::Verify(a) => cmd_verify(&a, out, exec),
        Command::Kernel(a) => cmd_kernel(&a, out, exec),
        Command::HilleHardy(a) => cmd_hille_hardy(&a, out),
        Command::PtCheck(a) => cmd_pt_check(&a, out),
    }
}

fn prepare_dir(dir: &Path) -> Result<(), CliError> {
    fs::create_dir_all(dir).map_err(|source| CliError::Write {
        path: dir.to_owned(),
        source,
    })
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    fs::write(path, bytes).map_err(|source| CliError::Write {
        path: path.to_owned(),
        source,
    })
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value).expect("report types serialize");
    text.push('\n');
    write_file(path, text.as_bytes())
}

fn write_csv<T: Serialize>(path: &Path, rows: &[T]) -> Result<(), CliError> {
    let wrap = |e: csv::Error| CliError::Write {
        path: path.to_owned(),
        source: e.into(),
    };
    let mut w = csv::Writer::from_path(path).map_err(wrap)?;
    for r in rows {
        w.serialize(r).map_err(wrap)?;
    }
    w.flush().map_err(|source| CliError::Write {
        path: path.to_owned(),
        source,
    })
}

fn parse_backend(s: Option<&str>) -> Result<Backend, CliError> {
    s.unwrap_or("pole")
        .parse()
        .map_err(|e| error::config(format!("field `backend`: {e}")))
}

fn parse_convention(s: Option<&str>, default: FrequencyConvention) -> Result<FrequencyConvention, CliError> {
    s.map_or(Ok(default), str::parse)
        .map_err(|e| error::config(format!("field `convention`: {e}")))
}

pub fn cmd_spectrum(args: &SpectrumArgs, out: Option<&Path>) -> Result<Outcome, CliError> {
    let file = args.spec.load()?;
    let spec = config::resolve_spec(&file.spec, &args.spec.overrides())?;
    let backend = parse_backend(args.backend.as_deref().or(file.backend.as_deref()))?;
    // each backend defaults to the convention it was written in
    let default_conv = match backend {
        Backend::PaperLiteral => FrequencyConvention::PaperLiteral,
        Backend::PoleCondition => FrequencyConvention::Rederived,
    };
    let convention = parse_convention(args.convention.as_deref().or(file.convention.as_deref()), default_conv)?;
    let dir = config::resolve_output_dir(out, file.output_dir.as_deref());
    prepare_dir(&dir)?;

    let result = spectrum(&spec, backend, convention);
    let json = dir.join("spectrum.json");
    let csv = dir.join("spectrum.csv");
    write_json(&json, &result)?;
    write_csv(&csv, &result.rows())?;
    Ok(Outcome {
        files: vec![json, csv],
        status: Status::Ok,
    })
}

pub fn cmd_verify(args: &VerifyArgs, out: Option<&Path>, exec: Execution) -> Result<Outcome, CliError> {
    let file = args.spec.load()?;
    let spec = config::resolve_spec(&file.spec, &args.spec.overrides())?;
    let convention = parse_convention(
        args.convention.as_deref().or(file.convention.as_deref()),
        FrequencyConvention::Rederived,
    )?;
    let mut grid_cfg = file.grid;
    grid_cfg.n_points = args.points.or(grid_cfg.n_points);
    grid_cfg.x_min = args.x_min.or(grid_cfg.x_min);
    grid_cfg.x_max = args.x_max.or(grid_cfg.x_max);
    let grid = config::resolve_grid(&spec, grid_cfg)?;
    let mut tol = file.tolerances.unwrap_or_default();
    tol.abs_gap = args.abs_gap_tol.unwrap_or(tol.abs_gap);
    tol.residual = args.residual_tol.unwrap_or(tol.residual);
    if !(tol.abs_gap > 0.0 && tol.residual > 0.0) {
        return Err(error::config("field `tolerances`: values must be > 0"));
    }
    let dir = config::resolve_output_dir(out, file.output_dir.as_deref());
    prepare_dir(&dir)?;

    let timestamp = chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true);
    let report = report::build(&spec, &grid, tol, convention, timestamp, exec);
    let path = dir.join("verification_report.json");
    write_json(&path, &report)?;

    let status = if report.summary.non_convergence {
        Status::NonConvergence(report.summary.failures.join("; "))
    } else if !report.summary.pole_rows_pass {
        Status::ToleranceFailure(report.summary.failures.join("; "))
    } else {
        Status::Ok
    };
    Ok(Outcome {
        files: vec![path],
        status,
    })
}

fn propagator_error(e: PropagatorError) -> CliError {
    match e {
        PropagatorError::SpecFun(_) | PropagatorError::NonMonotonicDecay(..) => CliError::NonConvergence(e.to_string()),
        other => error::config(other),
    }
}

/// Largest `|K_i - K_j|` over methods sharing a `tau`.
pub fn max_pairwise_gap(samples: &[KernelSample]) -> f64 {
    let mut gap = 0.0f64;
    for (i, a) in samples.iter().enumerate() {
        for b in &samples[i + 1..] {
            if a.tau == b.tau {
                gap = gap.max(Complex::new(a.re - b.re, a.im - b.im).norm());
            }
        }
    }
    gap
}

pub fn cmd_kernel(args: &KernelArgs, out: Option<&Path>, exec: Execution) -> Result<Outcome, CliError> {
    if args.tau.is_empty() || args.method.is_empty() {
        return Err(error::config("need at least one --tau and one --method"));
    }
    let re = |x: f64| Complex::new(x, 0.0);
    let params = KernelParams::euclidean(re(args.mass), re(args.omega), re(args.nu), args.u_a, args.u_b, args.tau[0])
        .map_err(propagator_error)?;
    let settings = SweepSettings {
        n_trunc: args.n_trunc,
        n_slices: args.n_slices,
        radial_points: args.radial_points,
    };
    let samples = kernel_sweep(&params, &args.tau, &args.method, settings, exec).map_err(propagator_error)?;
    let dir = config::resolve_output_dir(out, None);
    prepare_dir(&dir)?;
    let path = dir.join("kernel.csv");
    write_csv(&path, &samples)?;

    let gap = max_pairwise_gap(&samples);
    let status = if samples.iter().any(|s| !(s.re.is_finite() && s.im.is_finite())) {
        Status::NonConvergence("kernel value is not finite".to_owned())
    } else if gap >= args.tolerance {
        Status::ToleranceFailure(format!("methods differ by {gap:.3e} (tolerance {:.1e})", args.tolerance))
    } else {
        Status::Ok
    };
    Ok(Outcome {
        files: vec![path],
        status,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HilleHardyRow {
    pub t: f64,
    pub x: f64,
    pub y: f64,
    pub a: f64,
    pub n_trunc: usize,
    pub closed_re: f64,
    pub closed_im: f64,
    pub series_re: f64,
    pub series_im: f64,
    pub reference_residual: f64,
    pub variant_re: f64,
    pub variant_im: f64,
    pub variant_deviation: f64,
}

pub fn hille_hardy_row(t: f64, x: f64, y: f64, a: f64, n: usize) -> Result<HilleHardyRow, SpecFunError> {
    let d = variant_form_diagnostic(Complex::new(t, 0.0), x, y, Complex::new(a, 0.0), n)?;
    Ok(HilleHardyRow {
        t,
        x,
        y,
        a,
        n_trunc: n,
        closed_re: d.closed_reference.re,
        closed_im: d.closed_reference.im,
        series_re: d.series.re,
        series_im: d.series.im,
        reference_residual: d.reference_residual,
        variant_re: d.closed_variant.re,
        variant_im: d.closed_variant.im,
        variant_deviation: d.variant_deviation,
    })
}

/// The 12 `(t, x, y, a)` points used for the identity check.
pub fn hille_hardy_lattice() -> Vec<(f64, f64, f64, f64)> {
    let mut pts = Vec::with_capacity(12);
    for t in HILLE_HARDY_LATTICE_T {
        for (x, y) in HILLE_HARDY_LATTICE_XY {
            for a in HILLE_HARDY_LATTICE_A {
                pts.push((t, x, y, a));
            }
        }
    }
    pts
}

pub fn cmd_hille_hardy(args: &HilleHardyArgs, out: Option<&Path>) -> Result<Outcome, CliError> {
    let points = if args.lattice {
        hille_hardy_lattice()
    } else {
        vec![(args.t, args.x, args.y, args.a)]
    };
    let rows = points
        .into_iter()
        .map(|(t, x, y, a)| hille_hardy_row(t, x, y, a, args.n))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| match e {
            SpecFunError::Divergence(_) | SpecFunError::Domain { .. } => error::config(e),
            other => CliError::NonConvergence(other.to_string()),
        })?;
    let dir = config::resolve_output_dir(out, None);
    prepare_dir(&dir)?;
    let path = dir.join("hille_hardy.csv");
    write_csv(&path, &rows)?;
    let worst = rows.iter().map(|r| r.reference_residual).fold(0.0f64, f64::max);
    let status = if rows.iter().any(|r| !r.reference_residual.is_finite()) {
        Status::NonConvergence("residual is not finite".to_owned())
    } else if worst >= args.tolerance {
        Status::ToleranceFailure(format!("identity residual {worst:.3e} (tolerance {:.1e})", args.tolerance))
    } else {
        Status::Ok
    };
    Ok(Outcome {
        files: vec![path],
        status,
    })
}

pub fn cmd_pt_check(args: &PtCheckArgs, out: Option<&Path>) -> Result<Outcome, CliError> {
    let mut file = args.spec.load()?;
    // V(x) does not involve the mass
    file.spec.entry("mass").or_insert(1.0.into());
    let spec = config::resolve_spec(&file.spec, &args.spec.overrides())?;
    if !(args.half_width.is_finite() && args.half_width > 0.0) || args.probe_points < 2 {
        return Err(error::config("probe needs half_width > 0 and at least 2 points"));
    }
    let verdict = check_pt_symmetry(&spec, &symmetric_probe(args.half_width, args.probe_points)).map_err(error::config)?;
    let dir = config::resolve_output_dir(out, file.output_dir.as_deref());
    prepare_dir(&dir)?;
    let path = dir.join("pt_check.json");
    write_json(&path, &verdict)?;
    let mut stdout = std::io::stdout().lock();
    let _ = writeln!(stdout, "{}", serde_json::to_string(&verdict).expect("verdict serializes"));
    Ok(Outcome {
        files: vec![path],
        status: Status::Ok,
    })
}
