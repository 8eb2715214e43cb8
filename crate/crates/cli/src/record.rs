//! Scan records and their CSV/JSON encodings.

use crate::CliError;
use latticesum::{Error, GratingParams, SumResult};
use serde::{Deserialize, Serialize};
use std::time::Duration;

pub const CSV_HEADER: [&str; 13] = [
    "k",
    "d",
    "alpha",
    "kernel",
    "l",
    "value_re",
    "value_im",
    "abs_err_est",
    "c_final",
    "wood_distance",
    "kernel_evals",
    "elapsed_us",
    "status",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Ok,
    WarnWood,
    NoConverge,
    WoodError,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Ok => "ok",
            Status::WarnWood => "warn_wood",
            Status::NoConverge => "no_converge",
            Status::WoodError => "wood_error",
        }
    }

    pub fn has_value(self) -> bool {
        matches!(self, Status::Ok | Status::WarnWood)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanRecord {
    pub k: f64,
    pub d: f64,
    pub alpha: f64,
    pub kernel: String,
    pub l: u32,
    pub value_re: Option<f64>,
    pub value_im: Option<f64>,
    pub abs_err_est: Option<f64>,
    pub c_final: Option<usize>,
    pub wood_distance: f64,
    pub kernel_evals: u64,
    pub elapsed_us: Option<u64>,
    pub status: Status,
}

impl ScanRecord {
    fn blank(params: &GratingParams, l: u32, wood_distance: f64, status: Status) -> Self {
        ScanRecord {
            k: params.k,
            d: params.d,
            alpha: params.alpha,
            kernel: params.kernel.family.to_string(),
            l,
            value_re: None,
            value_im: None,
            abs_err_est: None,
            c_final: None,
            wood_distance,
            kernel_evals: 0,
            elapsed_us: None,
            status,
        }
    }

    /// Record for one order of an engine outcome.
    pub fn from_outcome(params: &GratingParams, l: u32, r: &latticesum::Result<SumResult>) -> Self {
        let w = latticesum::wood_distance(params);
        match r {
            Ok(s) => ScanRecord {
                value_re: Some(s.value.re),
                value_im: Some(s.value.im),
                abs_err_est: Some(s.abs_err_est),
                c_final: Some(s.c_final),
                wood_distance: s.wood_distance,
                kernel_evals: s.kernel_evals,
                ..Self::blank(params, l, w, if s.near_anomaly { Status::WarnWood } else { Status::Ok })
            },
            Err(Error::NoConvergence { err, c, .. }) => ScanRecord {
                abs_err_est: Some(*err),
                c_final: Some(*c),
                ..Self::blank(params, l, w, Status::NoConverge)
            },
            Err(Error::WoodAnomaly { .. }) => Self::blank(params, l, w, Status::WoodError),
            Err(_) => Self::blank(params, l, w, Status::NoConverge),
        }
    }

    pub fn with_elapsed(mut self, elapsed: Option<Duration>) -> Self {
        self.elapsed_us = elapsed.map(|e| e.as_micros() as u64);
        self
    }

    pub fn magnitude(&self) -> Option<f64> {
        Some(self.value_re?.hypot(self.value_im?))
    }
}

fn float(v: f64) -> String {
    format!("{v:.16e}")
}

fn opt<T>(v: Option<T>, f: impl Fn(T) -> String) -> String {
    v.map(f).unwrap_or_default()
}

pub fn to_csv(records: &[ScanRecord]) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(CSV_HEADER)?;
    for r in records {
        w.write_record([
            float(r.k),
            float(r.d),
            float(r.alpha),
            r.kernel.clone(),
            r.l.to_string(),
            opt(r.value_re, float),
            opt(r.value_im, float),
            opt(r.abs_err_est, float),
            opt(r.c_final, |c| c.to_string()),
            float(r.wood_distance),
            r.kernel_evals.to_string(),
            opt(r.elapsed_us, |e| e.to_string()),
            r.status.as_str().to_string(),
        ])?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

pub fn from_csv(text: &str) -> Result<Vec<ScanRecord>, CliError> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let header: Vec<String> = r.headers()?.iter().map(str::to_string).collect();
    if header != CSV_HEADER {
        return Err(CliError::Usage(format!("unexpected CSV header {header:?}")));
    }
    Ok(r.deserialize().collect::<Result<Vec<ScanRecord>, _>>()?)
}

#[derive(Debug, Clone, Serialize)]
pub struct Metadata {
    pub tool: &'static str,
    pub version: &'static str,
    pub git_hash: &'static str,
    pub command: &'static str,
    pub config: serde_json::Value,
}

impl Metadata {
    pub fn new(command: &'static str, config: serde_json::Value) -> Self {
        Metadata {
            tool: "latticesum",
            version: env!("CARGO_PKG_VERSION"),
            git_hash: env!("LATTICESUM_GIT_HASH"),
            command,
            config,
        }
    }
}

#[derive(Serialize)]
struct Bundle<'a, T: Serialize> {
    metadata: &'a Metadata,
    records: &'a [T],
}

pub fn to_json<T: Serialize>(metadata: &Metadata, records: &[T]) -> Result<String, CliError> {
    let mut s = serde_json::to_string_pretty(&Bundle { metadata, records })?;
    s.push('\n');
    Ok(s)
}
