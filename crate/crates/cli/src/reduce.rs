//! Two-dimensional `S_00` through lattice reduction.

use crate::CliError;
use latticesum::reduction::{full_s00, ReductionParams};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReduceRecord {
    pub k: f64,
    pub k1: f64,
    pub k2: f64,
    pub total_re: f64,
    pub total_im: f64,
    pub upper_re: f64,
    pub upper_im: f64,
    pub lower_re: f64,
    pub lower_im: f64,
    pub grating_re: f64,
    pub grating_im: f64,
    pub wood_distance: f64,
    pub mode_cut: usize,
}

pub fn run_reduce(params: &ReductionParams) -> Result<ReduceRecord, CliError> {
    let s = full_s00(params)?;
    Ok(ReduceRecord {
        k: params.k,
        k1: params.alpha_bloch,
        k2: params.beta_bloch,
        total_re: s.total.re,
        total_im: s.total.im,
        upper_re: s.upper.re,
        upper_im: s.upper.im,
        lower_re: s.lower.re,
        lower_im: s.lower.im,
        grating_re: s.grating.re,
        grating_im: s.grating.im,
        wood_distance: s.wood_distance,
        mode_cut: params.effective_mode_cut(),
    })
}

pub fn to_csv(r: &ReduceRecord) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let f = |v: f64| format!("{v:.16e}");
    w.write_record([
        "k",
        "k1",
        "k2",
        "total_re",
        "total_im",
        "upper_re",
        "upper_im",
        "lower_re",
        "lower_im",
        "grating_re",
        "grating_im",
        "wood_distance",
        "mode_cut",
    ])?;
    w.write_record([
        f(r.k),
        f(r.k1),
        f(r.k2),
        f(r.total_re),
        f(r.total_im),
        f(r.upper_re),
        f(r.upper_im),
        f(r.lower_re),
        f(r.lower_im),
        f(r.grating_re),
        f(r.grating_im),
        f(r.wood_distance),
        r.mode_cut.to_string(),
    ])?;
    let bytes = w.into_inner().map_err(|e| CliError::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}
