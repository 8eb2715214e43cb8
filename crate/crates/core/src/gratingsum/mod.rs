//! One-dimensional lattice sums `S(alpha) = sum_{n>0} f(k n d) e^{i alpha n d}`.
//!
//! Each one-sided sum is evaluated as
//!
//! ```text
//! S^c = sum_{n<b} F(nd) + sum_{n=b}^{b+c} F(nd) psi_{b,c}(n)
//!       - int_b^{b+c} F(xd) psi_{b,c}(x) dx
//!       + (i eta/d) int_0^inf F(bd + i eta tau) dtau
//! ```
//!
//! with `F(z) = f(kz) e^{i alpha z}` and `eta = sgn(k + alpha)`, doubling `c`
//! until two successive values agree. Before anything else `alpha` is shifted
//! by a multiple of `2 pi / d` so that `(k + alpha) d` lies in `(-pi, pi]`.
//! This leaves every term of the series unchanged but moves the slowest
//! aliasing frequency of the filtered sum into the contour term, which keeps
//! the required `c` essentially independent of `k`.

mod engine;

use crate::error::{domain, Error, Result};
use crate::quadrature::QuadratureConfig;
use crate::smoothing::DEFAULT_R;
use crate::specfun::{ylm_equator, Kernel, KernelFamily, L_MAX};
use num_complex::Complex64 as C;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::time::{Duration, Instant};

pub use engine::doubling_history;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GratingParams {
    pub k: f64,
    pub d: f64,
    pub alpha: f64,
    pub kernel: Kernel,
}

impl GratingParams {
    pub fn new(k: f64, d: f64, alpha: f64, kernel: Kernel) -> Result<Self> {
        let p = GratingParams { k, d, alpha, kernel };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.k > 0.0 && self.k.is_finite()) {
            return Err(domain(format!("k = {} must be positive", self.k)));
        }
        if !(self.d > 0.0 && self.d.is_finite()) {
            return Err(domain(format!("d = {} must be positive", self.d)));
        }
        if !self.alpha.is_finite() {
            return Err(domain("alpha must be finite"));
        }
        if self.kernel.order > L_MAX {
            return Err(domain(format!("order {} exceeds {L_MAX}", self.kernel.order)));
        }
        Ok(())
    }

    pub fn with_alpha(&self, alpha: f64) -> Self {
        GratingParams { alpha, ..*self }
    }

    pub fn with_order(&self, order: u32) -> Self {
        GratingParams { kernel: Kernel { order, ..self.kernel }, ..*self }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub b: usize,
    pub c0: usize,
    pub c_max: usize,
    pub tol: f64,
    /// Flatness radius of the filter.
    pub filter_r: f64,
    pub quad: QuadratureConfig,
    pub wood_tol_error: f64,
    pub wood_tol_warn: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            b: 8,
            c0: 16,
            c_max: 4096,
            tol: 1e-10,
            filter_r: DEFAULT_R,
            quad: QuadratureConfig::default(),
            wood_tol_error: 1e-8,
            wood_tol_warn: 1e-3,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if self.b < 1 {
            return Err(domain("b must be >= 1"));
        }
        if self.c0 < 1 || self.c_max < self.c0 {
            return Err(domain(format!("need 1 <= c0 <= c_max, got {} and {}", self.c0, self.c_max)));
        }
        if !(self.tol > 0.0) {
            return Err(domain("tol must be positive"));
        }
        if !(self.filter_r > 0.0 && self.filter_r < 0.25) {
            return Err(domain("filter_r must lie in (0, 1/4)"));
        }
        if !(self.wood_tol_error < self.wood_tol_warn) {
            return Err(domain("wood_tol_error must be below wood_tol_warn"));
        }
        self.quad.validate()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SumResult {
    pub value: C,
    /// Last doubling difference.
    pub abs_err_est: f64,
    pub c_final: usize,
    pub kernel_evals: u64,
    pub wood_distance: f64,
    /// Set when the parameters lie within `wood_tol_warn` of an anomaly.
    pub near_anomaly: bool,
    pub elapsed: Duration,
}

/// Distance of `(k +- alpha) d / 2pi` to the nearest integer.
pub fn wood_distance(params: &GratingParams) -> f64 {
    let dist = |x: f64| {
        let t = x / (2.0 * PI);
        (t - t.round()).abs()
    };
    let p = params;
    dist((p.k + p.alpha) * p.d).min(dist((p.k - p.alpha) * p.d))
}

/// `alpha - 2 pi m / d` with `(k + alpha') d` in `[-pi, pi]`.
pub fn reduced_alpha(k: f64, d: f64, alpha: f64) -> f64 {
    let m = ((k + alpha) * d / (2.0 * PI)).round();
    alpha - 2.0 * PI * m / d
}

fn gate(params: &GratingParams, cfg: &SolverConfig) -> Result<f64> {
    params.validate()?;
    cfg.validate()?;
    let w = wood_distance(params);
    if !(w >= cfg.wood_tol_error) {
        return Err(Error::WoodAnomaly { distance: w, threshold: cfg.wood_tol_error });
    }
    Ok(w)
}

/// `F(xd) = f(kxd) e^{i alpha x d}` through the scaled kernel.
pub fn eval_term(x: f64, params: &GratingParams) -> Result<C> {
    if !(x > 0.0) {
        return Err(domain(format!("x = {x} must be positive")));
    }
    eval_at(C::new(x * params.d, 0.0), params)
}

/// `F(z) = f(kz) e^{i alpha z}` at a complex lattice coordinate `z`.
pub fn eval_at(z: C, params: &GratingParams) -> Result<C> {
    let v = params.kernel.eval_scaled(params.k * z)? * (C::i() * (params.k + params.alpha) * z).exp();
    if !v.is_finite() {
        return Err(Error::Overflow(format!("F at z = {z}")));
    }
    Ok(v)
}

/// The contour term `(i eta/d) int_0^inf F(bd + i eta tau) dtau`.
pub fn tail_integral(params: &GratingParams, cfg: &SolverConfig) -> Result<C> {
    gate(params, cfg)?;
    let side = engine::Side::new(params.kernel.family, params.kernel.order, params, cfg);
    let mut evals = 0;
    Ok(side.tail(&mut evals)?[params.kernel.order as usize])
}

/// `int_b^{b+c} F(xd) psi_{b,c}(x) dx`.
pub fn filtered_integral(c: usize, params: &GratingParams, cfg: &SolverConfig) -> Result<C> {
    params.validate()?;
    cfg.validate()?;
    if c < 1 {
        return Err(domain("c must be >= 1"));
    }
    let side = engine::Side::new(params.kernel.family, params.kernel.order, params, cfg);
    let mut evals = 0;
    Ok(side.filtered_integral(c, &mut evals)?[params.kernel.order as usize])
}

/// One-sided sum for the kernel and order in `params`.
pub fn one_sided_sum(params: &GratingParams, cfg: &SolverConfig) -> Result<SumResult> {
    let start = Instant::now();
    let w = gate(params, cfg)?;
    let l = params.kernel.order;
    let side = engine::Side::new(params.kernel.family, l, params, cfg);
    let out = side.run(Some(l))?;
    let r = out.per_order.into_iter().nth(l as usize).expect("order present");
    let (value, err, c) = r?;
    Ok(SumResult {
        value,
        abs_err_est: err,
        c_final: c,
        kernel_evals: out.kernel_evals,
        wood_distance: w,
        near_anomaly: w < cfg.wood_tol_warn,
        elapsed: start.elapsed(),
    })
}

fn parity(l: u32) -> f64 {
    if l.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

/// `S_l = S(alpha) + (-1)^l S(-alpha)` for every order `0..=l_max`, with one
/// recurrence sweep per sample point. Failures to converge are reported per
/// order; the outer error covers the gate and kernel failures.
pub fn lattice_sum_batch_partial(
    l_max: u32,
    params: &GratingParams,
    cfg: &SolverConfig,
) -> Result<Vec<Result<SumResult>>> {
    let start = Instant::now();
    let params = params.with_order(l_max);
    let w = gate(&params, cfg)?;
    let plus = engine::Side::new(params.kernel.family, l_max, &params, cfg).run(None)?;
    let minus = engine::Side::new(params.kernel.family, l_max, &params.with_alpha(-params.alpha), cfg).run(None)?;
    let evals = plus.kernel_evals + minus.kernel_evals;
    let elapsed = start.elapsed();
    Ok(plus
        .per_order
        .into_iter()
        .zip(minus.per_order)
        .enumerate()
        .map(|(l, (p, m))| combine(p, m, parity(l as u32), 1.0, w, cfg, evals, elapsed))
        .collect())
}

type SideValue = Result<(C, f64, usize)>;

#[allow(clippy::too_many_arguments)]
fn combine(
    p: SideValue,
    m: SideValue,
    sign: f64,
    scale: f64,
    w: f64,
    cfg: &SolverConfig,
    evals: u64,
    elapsed: Duration,
) -> Result<SumResult> {
    let unpack = |r: SideValue| match r {
        Ok(v) => Ok(v),
        Err(Error::NoConvergence { best, err, c }) => Err((best, err, c)),
        Err(e) => panic!("unexpected side error {e}"),
    };
    match (unpack(p), unpack(m)) {
        (Ok((vp, ep, cp)), Ok((vm, em, cm))) => Ok(SumResult {
            value: (vp + sign * vm) * scale,
            abs_err_est: (ep + em) * scale.abs(),
            c_final: cp.max(cm),
            kernel_evals: evals,
            wood_distance: w,
            near_anomaly: w < cfg.wood_tol_warn,
            elapsed,
        }),
        (a, b) => {
            let (vp, ep, cp) = a.unwrap_or_else(|x| x);
            let (vm, em, cm) = b.unwrap_or_else(|x| x);
            Err(Error::NoConvergence { best: (vp + sign * vm) * scale, err: (ep + em) * scale.abs(), c: cp.max(cm) })
        }
    }
}

/// All orders `0..=l_max`; fails if any order fails.
pub fn lattice_sum_batch(l_max: u32, params: &GratingParams, cfg: &SolverConfig) -> Result<Vec<SumResult>> {
    lattice_sum_batch_partial(l_max, params, cfg)?.into_iter().collect()
}

/// `S_l = S(alpha) + (-1)^l S(-alpha)` for the family in `params`.
pub fn lattice_sum_sl(l: u32, params: &GratingParams, cfg: &SolverConfig) -> Result<SumResult> {
    let start = Instant::now();
    let params = params.with_order(l);
    let w = gate(&params, cfg)?;
    let family = params.kernel.family;
    let plus = engine::Side::new(family, l, &params, cfg).run(Some(l))?;
    let minus = engine::Side::new(family, l, &params.with_alpha(-params.alpha), cfg).run(Some(l))?;
    let evals = plus.kernel_evals + minus.kernel_evals;
    let p = plus.per_order.into_iter().nth(l as usize).expect("order present");
    let m = minus.per_order.into_iter().nth(l as usize).expect("order present");
    combine(p, m, parity(l), 1.0, w, cfg, evals, start.elapsed())
}

/// Equatorial grating row `Y_l^j(pi/2, 0) [S(alpha) + (-1)^j S(-alpha)]`
/// with the spherical kernel `h_l`.
pub fn grating_row_slj(l: u32, j: i32, params: &GratingParams, cfg: &SolverConfig) -> Result<SumResult> {
    if params.kernel.family != KernelFamily::Spherical {
        return Err(domain("grating rows need the spherical kernel"));
    }
    let y = ylm_equator(l, j)?;
    let start = Instant::now();
    let params = params.with_order(l);
    let w = gate(&params, cfg)?;
    let plus = engine::Side::new(params.kernel.family, l, &params, cfg).run(Some(l))?;
    let minus = engine::Side::new(params.kernel.family, l, &params.with_alpha(-params.alpha), cfg).run(Some(l))?;
    let evals = plus.kernel_evals + minus.kernel_evals;
    let p = plus.per_order.into_iter().nth(l as usize).expect("order present");
    let m = minus.per_order.into_iter().nth(l as usize).expect("order present");
    combine(p, m, parity(j.unsigned_abs()), y, w, cfg, evals, start.elapsed())
}
