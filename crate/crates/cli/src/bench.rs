//! Wall-clock timing of the batch evaluation.

use crate::CliError;
use latticesum::{lattice_sum_batch, GratingParams, Kernel, SolverConfig};
use serde::Serialize;
use std::time::Instant;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Scenario {
    K1,
    K10,
    K100,
}

impl Scenario {
    pub const ALL: [Scenario; 3] = [Scenario::K1, Scenario::K10, Scenario::K100];

    pub fn name(self) -> &'static str {
        match self {
            Scenario::K1 => "k1",
            Scenario::K10 => "k10",
            Scenario::K100 => "k100",
        }
    }

    /// `(k, l_max)`, always with the cylindrical kernel, `d = 1`, `alpha = 0.4`.
    pub fn setup(self) -> (f64, u32) {
        match self {
            Scenario::K1 => (1.0, 119),
            Scenario::K10 => (10.0, 119),
            Scenario::K100 => (100.0, 299),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchReport {
    pub scenario: &'static str,
    pub kernel: String,
    pub k: f64,
    pub d: f64,
    pub alpha: f64,
    pub lmax: u32,
    pub warmup: usize,
    pub reps: usize,
    pub median_ms: f64,
    pub p95_ms: f64,
    pub min_ms: f64,
    pub max_ms: f64,
    pub kernel_evals: u64,
    pub kernel_evals_stable: bool,
}

pub fn median(sorted: &[f64]) -> f64 {
    let n = sorted.len();
    if n % 2 == 1 {
        sorted[n / 2]
    } else {
        0.5 * (sorted[n / 2 - 1] + sorted[n / 2])
    }
}

/// Nearest-rank percentile of sorted data.
pub fn percentile(sorted: &[f64], p: f64) -> f64 {
    let rank = ((p / 100.0) * sorted.len() as f64).ceil() as usize;
    sorted[rank.clamp(1, sorted.len()) - 1]
}

pub fn run_bench(scenario: Scenario, warmup: usize, reps: usize, cfg: &SolverConfig) -> Result<BenchReport, CliError> {
    if reps == 0 {
        return Err(CliError::Usage("reps must be positive".into()));
    }
    let (k, lmax) = scenario.setup();
    let params = GratingParams::new(k, 1.0, 0.4, Kernel::hankel(0)?)?;
    let evals = |r: &[latticesum::SumResult]| r.first().map_or(0, |s| s.kernel_evals);
    for _ in 0..warmup {
        lattice_sum_batch(lmax, &params, cfg)?;
    }
    let mut times = Vec::with_capacity(reps);
    let mut counts = Vec::with_capacity(reps);
    for _ in 0..reps {
        let t = Instant::now();
        let r = lattice_sum_batch(lmax, &params, cfg)?;
        times.push(t.elapsed().as_secs_f64() * 1e3);
        counts.push(evals(&r));
    }
    times.sort_by(f64::total_cmp);
    Ok(BenchReport {
        scenario: scenario.name(),
        kernel: params.kernel.family.to_string(),
        k,
        d: params.d,
        alpha: params.alpha,
        lmax,
        warmup,
        reps,
        median_ms: median(&times),
        p95_ms: percentile(&times, 95.0),
        min_ms: times[0],
        max_ms: times[reps - 1],
        kernel_evals: counts[0],
        kernel_evals_stable: counts.iter().all(|&c| c == counts[0]),
    })
}
