//! Command-line front end for `latticesum`.
//!
//! Exit codes: 0 success, 1 bad flags or input, 2 Wood anomaly or 2D
//! resonance, 3 no convergence. Failures also print a JSON object on stderr.

pub mod bench;
pub mod expr;
pub mod fit;
pub mod record;
pub mod reduce;
pub mod scan;

use clap::{Args, Parser, Subcommand, ValueEnum};
use expr::expr_arg;
use latticesum::reduction::ReductionParams;
use latticesum::{Error, GratingParams, Kernel, KernelFamily, SolverConfig};
use record::{Metadata, ScanRecord, Status};
use serde_json::json;
use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Engine(#[from] Error),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Engine(Error::WoodAnomaly { .. } | Error::Resonance2D { .. } | Error::WoodAnomaly2D { .. }) => 2,
            CliError::Engine(Error::NoConvergence { .. } | Error::Overflow(_)) => 3,
            _ => 1,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::Engine(e) => match e {
                Error::Domain(_) => "domain",
                Error::Overflow(_) => "overflow",
                Error::WoodAnomaly { .. } => "wood_anomaly",
                Error::NoConvergence { .. } => "no_convergence",
                Error::Resonance2D { .. } => "resonance_2d",
                Error::WoodAnomaly2D { .. } => "wood_anomaly_2d",
            },
            CliError::Io(_) => "io",
            CliError::Csv(_) => "csv",
            CliError::Json(_) => "json",
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({ "error": self.kind(), "message": self.to_string(), "exit_code": self.exit_code() })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "latticesum", version, about = "Quasiperiodic lattice sums of Hankel-type kernels")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Output format (csv by default, json for bench)
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    /// Write output to FILE instead of stdout
    #[arg(long, global = true, value_name = "FILE")]
    pub out: Option<PathBuf>,

    /// Worker threads for scans (0 = all cores)
    #[arg(long, global = true, env = "LATTICESUM_THREADS", default_value_t = 0)]
    pub threads: usize,

    /// Fill the elapsed_us column
    #[arg(long, global = true)]
    pub timing: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Lattice sums S_l for l = 0..lmax at one parameter point
    Sum(SumArgs),
    /// Sweep k, alpha or an offset delta_k over a grid
    Scan(ScanArgs),
    /// Fit power and logarithmic blow-up laws to a delta_k scan
    FitBlowup(FitArgs),
    /// Two-dimensional S_00 on the unit square lattice
    Reduce2d(ReduceArgs),
    /// Time lattice_sum_batch on the reference scenarios
    Bench(BenchArgs),
}

fn parse_family(s: &str) -> Result<KernelFamily, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

#[derive(Debug, Clone, Args)]
pub struct SolverArgs {
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
    #[arg(long, default_value_t = 8)]
    pub b: usize,
    #[arg(long, default_value_t = 16)]
    pub c0: usize,
    #[arg(long, default_value_t = 4096)]
    pub cmax: usize,
}

impl SolverArgs {
    pub fn config(&self) -> Result<SolverConfig, CliError> {
        let cfg = SolverConfig { tol: self.tol, b: self.b, c0: self.c0, c_max: self.cmax, ..SolverConfig::default() };
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Debug, Clone, Args)]
pub struct ParamArgs {
    /// hankel (cylindrical) or spherical
    #[arg(long, default_value = "hankel", value_parser = parse_family)]
    pub kernel: KernelFamily,
    /// Wavenumber; expressions such as 7*pi/4 are accepted
    #[arg(long, value_parser = expr_arg, allow_hyphen_values = true)]
    pub k: Option<f64>,
    #[arg(long, default_value = "1", value_parser = expr_arg)]
    pub d: f64,
    /// Bloch wavenumber
    #[arg(long, default_value = "0", value_parser = expr_arg, allow_hyphen_values = true)]
    pub alpha: f64,
    #[arg(long)]
    pub lmax: Option<u32>,
    /// Explicit orders, comma separated (overrides --lmax)
    #[arg(long, value_delimiter = ',')]
    pub l: Vec<u32>,
    #[command(flatten)]
    pub solver: SolverArgs,
}

impl ParamArgs {
    pub fn orders(&self) -> Vec<u32> {
        if self.l.is_empty() {
            (0..=self.lmax.unwrap_or(0)).collect()
        } else {
            self.l.clone()
        }
    }

    /// Base parameters; `k_fallback` stands in when `--k` is not needed.
    pub fn params(&self, k_fallback: Option<f64>) -> Result<GratingParams, CliError> {
        let k = self.k.or(k_fallback).ok_or_else(|| CliError::Usage("--k is required".into()))?;
        Ok(GratingParams::new(k, self.d, self.alpha, Kernel::new(self.kernel, 0)?)?)
    }

    fn echo(&self, cfg: &SolverConfig) -> serde_json::Value {
        json!({
            "kernel": self.kernel.to_string(),
            "k": self.k,
            "d": self.d,
            "alpha": self.alpha,
            "orders": self.orders(),
            "solver": cfg,
        })
    }
}

#[derive(Debug, Clone, Args)]
pub struct SumArgs {
    #[command(flatten)]
    pub p: ParamArgs,
}

#[derive(Debug, Clone, Args)]
pub struct ScanArgs {
    #[command(flatten)]
    pub p: ParamArgs,
    /// Scanned quantity; delta_k is added to --k
    #[arg(long, value_enum, default_value = "k")]
    pub var: scan::Variable,
    /// start:stop:count[:log]
    #[arg(long, allow_hyphen_values = true)]
    pub grid: String,
}

#[derive(Debug, Clone, Args)]
pub struct FitArgs {
    #[command(flatten)]
    pub p: ParamArgs,
    /// delta_k grid start:stop:count[:log]; the anomaly sits at --k
    #[arg(long, conflicts_with = "input")]
    pub grid: Option<String>,
    /// Fit records from a scan CSV instead of scanning
    #[arg(long, value_name = "FILE", requires = "anchor")]
    pub input: Option<PathBuf>,
    /// Anomalous wavenumber for --input; delta_k = |k - anchor|
    #[arg(long, value_parser = expr_arg)]
    pub anchor: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct ReduceArgs {
    #[arg(long, value_parser = expr_arg)]
    pub k: f64,
    /// Bloch phase along the rows
    #[arg(long, alias = "alpha", value_parser = expr_arg, allow_hyphen_values = true)]
    pub k1: f64,
    /// Bloch phase across the rows
    #[arg(long, alias = "beta", value_parser = expr_arg, allow_hyphen_values = true)]
    pub k2: f64,
    #[arg(long)]
    pub mode_cut: Option<usize>,
}

#[derive(Debug, Clone, Args)]
pub struct BenchArgs {
    #[arg(long, value_enum, value_delimiter = ',')]
    pub scenario: Vec<bench::Scenario>,
    #[arg(long, default_value_t = 3)]
    pub warmup: usize,
    #[arg(long, default_value_t = 20)]
    pub reps: usize,
    #[command(flatten)]
    pub solver: SolverArgs,
}

/// Parses `args` (including the program name) and runs; returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    match execute(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("{}", e.to_json());
            e.exit_code()
        }
    }
}

/// Output text plus exit code, or a hard failure.
pub fn execute(cli: &Cli) -> Result<i32, CliError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.threads)
        .build()
        .map_err(|e| CliError::Usage(format!("thread pool: {e}")))?;
    let (text, code) = pool.install(|| dispatch(cli))?;
    match &cli.out {
        Some(path) => std::fs::write(path, text)?,
        None => std::io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(code)
}

fn emit_records(
    cli: &Cli,
    command: &'static str,
    config: serde_json::Value,
    recs: &[ScanRecord],
) -> Result<String, CliError> {
    match cli.format.unwrap_or(Format::Csv) {
        Format::Csv => record::to_csv(recs),
        Format::Json => record::to_json(&Metadata::new(command, config), recs),
    }
}

fn dispatch(cli: &Cli) -> Result<(String, i32), CliError> {
    match &cli.command {
        Command::Sum(a) => cmd_sum(cli, a),
        Command::Scan(a) => {
            let cfg = a.p.solver.config()?;
            let grid: scan::Grid = a.grid.parse()?;
            let fallback = (a.var == scan::Variable::K).then_some(grid.start);
            let base = a.p.params(fallback)?;
            let recs = scan::run_scan(&base, a.var, &grid, &a.p.orders(), &cfg, cli.timing)?;
            let mut config = a.p.echo(&cfg);
            config["var"] = json!(format!("{:?}", a.var).to_lowercase());
            config["grid"] = json!(a.grid);
            Ok((emit_records(cli, "scan", config, &recs)?, 0))
        }
        Command::FitBlowup(a) => cmd_fit(cli, a),
        Command::Reduce2d(a) => {
            let mut p = ReductionParams::new(a.k, a.k1, a.k2)?;
            p.mode_cut = a.mode_cut;
            let r = reduce::run_reduce(&p)?;
            let text = match cli.format.unwrap_or(Format::Csv) {
                Format::Csv => reduce::to_csv(&r)?,
                Format::Json => record::to_json(&Metadata::new("reduce2d", json!(p)), std::slice::from_ref(&r))?,
            };
            Ok((text, 0))
        }
        Command::Bench(a) => {
            let cfg = a.solver.config()?;
            let list = if a.scenario.is_empty() { bench::Scenario::ALL.to_vec() } else { a.scenario.clone() };
            let reports =
                list.iter().map(|&s| bench::run_bench(s, a.warmup, a.reps, &cfg)).collect::<Result<Vec<_>, _>>()?;
            let text = match cli.format.unwrap_or(Format::Json) {
                Format::Json => {
                    let config = json!({ "warmup": a.warmup, "reps": a.reps, "solver": cfg });
                    record::to_json(&Metadata::new("bench", config), &reports)?
                }
                Format::Csv => {
                    let mut w = csv::Writer::from_writer(Vec::new());
                    for r in &reports {
                        w.serialize(r)?;
                    }
                    String::from_utf8(w.into_inner().map_err(|e| CliError::Io(e.into_error()))?)
                        .expect("csv output is utf-8")
                }
            };
            Ok((text, 0))
        }
    }
}

fn cmd_sum(cli: &Cli, a: &SumArgs) -> Result<(String, i32), CliError> {
    let cfg = a.p.solver.config()?;
    let params = a.p.params(None)?;
    let orders = a.p.orders();
    let l_max = orders.iter().copied().max().unwrap_or(0);
    let start = std::time::Instant::now();
    let out = latticesum::gratingsum::lattice_sum_batch_partial(l_max, &params, &cfg)?;
    let elapsed = cli.timing.then(|| start.elapsed());
    let recs: Vec<ScanRecord> =
        orders.iter().map(|&l| ScanRecord::from_outcome(&params, l, &out[l as usize]).with_elapsed(elapsed)).collect();
    let text = emit_records(cli, "sum", a.p.echo(&cfg), &recs)?;
    let stalled = orders.iter().find_map(|&l| out[l as usize].as_ref().err());
    if let Some(e) = stalled {
        let e = CliError::Engine(e.clone());
        eprintln!("{}", e.to_json());
        return Ok((text, e.exit_code()));
    }
    debug_assert!(recs.iter().all(|r| r.status.has_value()));
    Ok((text, 0))
}

fn cmd_fit(cli: &Cli, a: &FitArgs) -> Result<(String, i32), CliError> {
    let (records, anchor) = match (&a.input, &a.grid) {
        (Some(path), _) => {
            let anchor = a.anchor.ok_or_else(|| CliError::Usage("--input needs --anchor".into()))?;
            (record::from_csv(&std::fs::read_to_string(path)?)?, anchor)
        }
        (None, Some(g)) => {
            let cfg = a.p.solver.config()?;
            let grid: scan::Grid = g.parse()?;
            let base = a.p.params(None)?;
            let recs = scan::run_scan(&base, scan::Variable::DeltaK, &grid, &a.p.orders(), &cfg, false)?;
            (recs, base.k)
        }
        (None, None) => return Err(CliError::Usage("fit-blowup needs --grid or --input".into())),
    };
    let usable: Vec<ScanRecord> = records.into_iter().filter(|r| r.status != Status::WoodError).collect();
    let reports = fit::fit_records(&usable, anchor)?;
    let text = match cli.format.unwrap_or(Format::Csv) {
        Format::Json => record::to_json(&Metadata::new("fit-blowup", json!({ "anchor": anchor })), &reports)?,
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            for r in &reports {
                w.serialize(r)?;
            }
            String::from_utf8(w.into_inner().map_err(|e| CliError::Io(e.into_error()))?).expect("csv output is utf-8")
        }
    };
    Ok((text, 0))
}
