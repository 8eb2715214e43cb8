//! Least-squares fits of blow-up laws near an anomaly.
//!
//! Two models are compared on `(dk, |S|)` pairs:
//! `log|S| = a + p log dk` (power) and `|S| = a + b log(1/dk)` (log).
//! Both residuals are root-mean-square misfits of `|S|` itself, so the
//! two numbers are directly comparable.

use crate::record::ScanRecord;
use crate::CliError;
use serde::{Deserialize, Serialize};

pub const MIN_POINTS: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Model {
    Power,
    Log,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitReport {
    pub l: u32,
    pub model: Model,
    /// `p` of the power model.
    pub exponent: f64,
    /// `b` of the log model.
    pub slope: f64,
    pub residual_power: f64,
    pub residual_log: f64,
    pub points: usize,
}

impl FitReport {
    pub fn residual(&self) -> f64 {
        match self.model {
            Model::Power => self.residual_power,
            Model::Log => self.residual_log,
        }
    }
}

/// Ordinary least squares `y = a + b x`; returns `(a, b)`.
fn line(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let b = sxy / sxx;
    (my - b * mx, b)
}

fn rms(it: impl Iterator<Item = f64>) -> f64 {
    let (s, n) = it.fold((0.0, 0usize), |(s, n), e| (s + e * e, n + 1));
    (s / n as f64).sqrt()
}

pub fn fit_blowup(l: u32, dk: &[f64], mag: &[f64]) -> Result<FitReport, CliError> {
    let pts: Vec<(f64, f64)> = dk
        .iter()
        .zip(mag)
        .filter(|(x, y)| x.is_finite() && **x > 0.0 && y.is_finite() && **y > 0.0)
        .map(|(x, y)| (*x, *y))
        .collect();
    if pts.len() < MIN_POINTS {
        return Err(CliError::Engine(latticesum::Error::Domain(format!(
            "blow-up fit for l = {l} needs at least {MIN_POINTS} usable points, got {}",
            pts.len()
        ))));
    }
    let lx: Vec<f64> = pts.iter().map(|p| p.0.ln()).collect();
    let ly: Vec<f64> = pts.iter().map(|p| p.1.ln()).collect();
    let y: Vec<f64> = pts.iter().map(|p| p.1).collect();
    let (ap, p) = line(&lx, &ly);
    let inv: Vec<f64> = lx.iter().map(|x| -x).collect();
    let (al, b) = line(&inv, &y);
    let residual_power = rms(lx.iter().zip(&y).map(|(x, y)| (ap + p * x).exp() - y));
    let residual_log = rms(inv.iter().zip(&y).map(|(x, y)| al + b * x - y));
    let model = if residual_log < residual_power { Model::Log } else { Model::Power };
    Ok(FitReport { l, model, exponent: p, slope: b, residual_power, residual_log, points: pts.len() })
}

/// Fits every order present in `records`, with `dk = |k - anchor|`.
pub fn fit_records(records: &[ScanRecord], anchor: f64) -> Result<Vec<FitReport>, CliError> {
    let mut orders: Vec<u32> = records.iter().map(|r| r.l).collect();
    orders.sort_unstable();
    orders.dedup();
    orders
        .into_iter()
        .map(|l| {
            let (dk, mag): (Vec<f64>, Vec<f64>) = records
                .iter()
                .filter(|r| r.l == l)
                .filter_map(|r| Some(((r.k - anchor).abs(), r.magnitude()?)))
                .unzip();
            fit_blowup(l, &dk, &mag)
        })
        .collect()
}
