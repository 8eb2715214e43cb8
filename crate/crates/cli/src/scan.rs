//! Parameter grids and parallel scans.

use crate::expr::parse_expr;
use crate::record::ScanRecord;
use crate::CliError;
use latticesum::gratingsum::lattice_sum_batch_partial;
use latticesum::{GratingParams, SolverConfig};
use rayon::prelude::*;
use std::f64::consts::PI;
use std::str::FromStr;
use std::time::Instant;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
    pub log: bool,
}

impl Grid {
    pub fn values(&self) -> Vec<f64> {
        let n = self.count - 1;
        (0..self.count)
            .map(|i| {
                let t = i as f64 / n as f64;
                if i == n {
                    self.stop
                } else if self.log {
                    (self.start.ln() + t * (self.stop.ln() - self.start.ln())).exp()
                } else {
                    self.start + t * (self.stop - self.start)
                }
            })
            .collect()
    }
}

impl FromStr for Grid {
    type Err = CliError;

    /// `start:stop:count[:log]`
    fn from_str(s: &str) -> Result<Self, CliError> {
        let parts: Vec<&str> = s.split(':').collect();
        let bad = |why: &str| CliError::Usage(format!("grid '{s}': {why}"));
        if !(3..=4).contains(&parts.len()) {
            return Err(bad("expected start:stop:count[:log]"));
        }
        let start = parse_expr(parts[0])?;
        let stop = parse_expr(parts[1])?;
        let count: usize = parts[2].trim().parse().map_err(|_| bad("count must be an integer"))?;
        let log = match parts.get(3).map(|p| p.trim()) {
            None | Some("lin") | Some("linear") => false,
            Some("log") => true,
            Some(_) => return Err(bad("spacing must be lin or log")),
        };
        if count < 2 {
            return Err(bad("count must be at least 2"));
        }
        if log && !(start > 0.0 && stop > 0.0) {
            return Err(bad("log spacing needs positive endpoints"));
        }
        Ok(Grid { start, stop, count, log })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Variable {
    K,
    Alpha,
    #[value(name = "delta_k")]
    DeltaK,
}

/// Parameters at one grid value. `DeltaK` offsets the base wavenumber.
pub fn point(base: &GratingParams, var: Variable, v: f64) -> latticesum::Result<GratingParams> {
    let (k, alpha) = match var {
        Variable::K => (v, base.alpha),
        Variable::Alpha => (base.k, v),
        Variable::DeltaK => (base.k + v, base.alpha),
    };
    GratingParams::new(k, base.d, alpha, base.kernel)
}

/// One record per requested order; never fails on anomalies or stalls.
pub fn evaluate(params: &GratingParams, orders: &[u32], cfg: &SolverConfig, timing: bool) -> Vec<ScanRecord> {
    let l_max = orders.iter().copied().max().unwrap_or(0);
    let start = Instant::now();
    let out = lattice_sum_batch_partial(l_max, params, cfg);
    let elapsed = timing.then(|| start.elapsed());
    orders
        .iter()
        .map(|&l| {
            let r = match &out {
                Ok(v) => v[l as usize].clone(),
                Err(e) => Err(e.clone()),
            };
            ScanRecord::from_outcome(params, l, &r).with_elapsed(elapsed)
        })
        .collect()
}

/// Records in grid order, `orders.len()` per point.
pub fn run_scan(
    base: &GratingParams,
    var: Variable,
    grid: &Grid,
    orders: &[u32],
    cfg: &SolverConfig,
    timing: bool,
) -> Result<Vec<ScanRecord>, CliError> {
    let points = grid.values().into_iter().map(|v| point(base, var, v)).collect::<latticesum::Result<Vec<_>>>()?;
    let per_point: Vec<Vec<ScanRecord>> = points.par_iter().map(|p| evaluate(p, orders, cfg, timing)).collect();
    Ok(per_point.into_iter().flatten().collect())
}

/// Grid values at which `|S_l|` has a strict local maximum.
pub fn local_maxima(records: &[ScanRecord], l: u32, coord: impl Fn(&ScanRecord) -> f64) -> Vec<f64> {
    let row: Vec<(f64, Option<f64>)> = records.iter().filter(|r| r.l == l).map(|r| (coord(r), r.magnitude())).collect();
    let mut out = Vec::new();
    for i in 1..row.len().saturating_sub(1) {
        if let (Some(a), Some(b), Some(c)) = (row[i - 1].1, row[i].1, row[i + 1].1) {
            if b > a && b > c {
                out.push(row[i].0);
            }
        }
    }
    out
}

/// Wavenumbers in `[lo, hi]` with `(k +- alpha) d = 2 pi n`.
pub fn anomaly_wavenumbers(lo: f64, hi: f64, d: f64, alpha: f64) -> Vec<f64> {
    let step = 2.0 * PI / d;
    let mut out = Vec::new();
    let n_max = ((hi + alpha.abs()) / step).ceil() as i64 + 1;
    for n in 0..=n_max {
        for s in [-1.0, 1.0] {
            let k = n as f64 * step + s * alpha;
            if k >= lo && k <= hi && !out.iter().any(|&x: &f64| (x - k).abs() < 1e-12) {
                out.push(k);
            }
        }
    }
    out.sort_by(f64::total_cmp);
    out
}
