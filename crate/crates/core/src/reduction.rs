//! Square-lattice sum `S_00` assembled from the grating row and the two
//! half-plane sums, each half plane being Poisson-summed along the rows and
//! geometrically summed across them.
//!
//! For the upper half plane
//!
//! ```text
//! S+ = (1/ik) sum_n int_R e^{i beta - u_n(t)} / (u_n(t) (1 - e^{i beta - u_n(t)})) dt,
//! u_n(t) = sqrt(t^2 + (2 pi n - alpha)^2 - k^2),
//! ```
//!
//! with the branch `Re u >= 0` reached from the dissipative side
//! (`u = -i sqrt(k^2 - ...)` on propagating stretches). For propagating `n`
//! the geometric factor has poles on the real `t` axis whenever a diffracted
//! order of the lattice propagates; the path for `t > 0` is therefore pushed
//! into the lower half plane, where `Re u > 0` and the series converges
//! absolutely.

use crate::error::{domain, Error, Result};
use crate::gratingsum::{lattice_sum_sl, GratingParams, SolverConfig};
use crate::quadrature::{GaussLegendre, QuadratureConfig};
use crate::specfun::Kernel;
use num_complex::Complex64 as C;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

const RESONANCE_GAP: f64 = 1e-8;
const WOOD_2D_TOL: f64 = 1e-10;
const BRANCH_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReductionParams {
    pub k: f64,
    /// Bloch phase along the rows.
    pub alpha_bloch: f64,
    /// Bloch phase across the rows.
    pub beta_bloch: f64,
    pub quad: QuadratureConfig,
    /// Poisson index cut; `None` picks one from the decay of the integrands.
    pub mode_cut: Option<usize>,
}

impl ReductionParams {
    pub fn new(k: f64, alpha_bloch: f64, beta_bloch: f64) -> Result<Self> {
        let p = ReductionParams { k, alpha_bloch, beta_bloch, quad: QuadratureConfig::default(), mode_cut: None };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.k > 0.0 && self.k.is_finite()) {
            return Err(domain("k must be positive"));
        }
        if !self.alpha_bloch.is_finite() || !self.beta_bloch.is_finite() {
            return Err(domain("Bloch phases must be finite"));
        }
        self.quad.validate()
    }

    pub fn effective_mode_cut(&self) -> usize {
        self.mode_cut.unwrap_or_else(|| {
            let tte = self.quad.tail_truncation_exponent;
            ((tte.hypot(self.k) + self.alpha_bloch.abs()) / (2.0 * PI)).ceil() as usize + 1
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModeKind {
    Propagating,
    Evanescent,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModeInfo {
    pub beta: C,
    pub kind: ModeKind,
}

/// `beta_{n,m} = sqrt(k^2 - (k1 + 2pi n/d1)^2 - (k2 + 2pi m/d2)^2)`, positive
/// real or positive imaginary.
pub fn beta_mode(n: i64, m: i64, k: f64, k1: f64, k2: f64, d1: f64, d2: f64) -> Result<ModeInfo> {
    let p = k1 + 2.0 * PI * n as f64 / d1;
    let q = k2 + 2.0 * PI * m as f64 / d2;
    let s = k * k - p * p - q * q;
    let info = if s >= 0.0 {
        ModeInfo { beta: C::new(s.sqrt(), 0.0), kind: ModeKind::Propagating }
    } else {
        ModeInfo { beta: C::new(0.0, (-s).sqrt()), kind: ModeKind::Evanescent }
    };
    if info.beta.norm() < WOOD_2D_TOL {
        return Err(Error::WoodAnomaly2D { n, m, beta_abs: info.beta.norm() });
    }
    Ok(info)
}

/// Checks every diffraction order that can come close to grazing.
pub fn check_wood_2d(k: f64, k1: f64, k2: f64) -> Result<()> {
    let r1 = ((k + k1.abs()) / (2.0 * PI)).ceil() as i64 + 1;
    let r2 = ((k + k2.abs()) / (2.0 * PI)).ceil() as i64 + 1;
    for n in -r1..=r1 {
        for m in -r2..=r2 {
            beta_mode(n, m, k, k1, k2, 1.0, 1.0)?;
        }
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum HalfPlane {
    Upper,
    Lower,
}

impl HalfPlane {
    fn sigma(self) -> f64 {
        match self {
            HalfPlane::Upper => 1.0,
            HalfPlane::Lower => -1.0,
        }
    }
}

/// Accumulates `int G(u)/u dt` over one piece of path and tracks the
/// smallest `|1 - e^{i sigma beta - u}|` seen.
struct ModeAccumulator {
    sb: f64,
    sum: C,
    min_gap: f64,
}

impl ModeAccumulator {
    /// `weight * e^{i sb - u} / (1 - e^{i sb - u})`.
    #[inline]
    fn add(&mut self, u: C, weight: C) {
        let q = (C::new(-u.re, self.sb - u.im)).exp();
        let den = 1.0 - q;
        self.min_gap = self.min_gap.min(den.norm());
        self.sum += weight * q / den;
    }
}

/// `int_R e^{i sigma beta - u_n} / (u_n (1 - e^{i sigma beta - u_n})) dt`.
/// With `two_sided` the negative half line is integrated on its own mirrored
/// path instead of using evenness.
pub(crate) fn mode_integral(n: i64, half: HalfPlane, params: &ReductionParams, two_sided: bool) -> Result<C> {
    let k = params.k;
    let q = 2.0 * PI * n as f64 - params.alpha_bloch;
    let tte = params.quad.tail_truncation_exponent;
    let rule = GaussLegendre::get(params.quad.gl_order);
    let mut acc =
        ModeAccumulator { sb: half.sigma() * params.beta_bloch, sum: C::new(0.0, 0.0), min_gap: f64::INFINITY };
    let s2 = q * q - k * k;
    let sides: &[f64] = if two_sided { &[1.0, -1.0] } else { &[1.0] };
    let scale = if two_sided { 1.0 } else { 2.0 };
    let mut nodes = Vec::new();

    if s2.abs().sqrt() < BRANCH_TOL {
        let distance = ((k - q.abs()) / (2.0 * PI)).abs();
        return Err(Error::WoodAnomaly { distance, threshold: BRANCH_TOL });
    }
    if s2 > 0.0 {
        // evanescent: t = kappa sinh v, u = kappa cosh v, dt/u = dv
        let kappa = s2.sqrt();
        if kappa >= tte {
            return Ok(C::new(0.0, 0.0));
        }
        let v_max = (tte / kappa).acosh();
        composite(&rule, 0.0, v_max, 0.25, &mut nodes);
        for _ in sides {
            for &(v, w) in &nodes {
                acc.add(C::new(kappa * v.cosh(), 0.0), C::new(w, 0.0));
            }
        }
    } else {
        let tc = (-s2).sqrt();
        // Deformed stretch: t = s - i A sin(pi s / L) on [0, L].
        let len = 2.0 * tc;
        let amp = 0.5 * tc;
        let panels = 16 * tc.ceil().max(1.0) as usize;
        composite(&rule, 0.0, len, len / panels as f64, &mut nodes);
        for &side in sides {
            for &(s, w) in &nodes {
                let arg = PI * s / len;
                let t = side * C::new(s, -amp * arg.sin());
                let dt = C::new(1.0, -amp * PI / len * arg.cos());
                let u = -C::i() * (tc * tc - t * t).sqrt();
                acc.add(u, dt * w / u);
            }
        }
        // Real stretch beyond L: t = tc cosh v, u = tc sinh v, dt/u = dv.
        let v0 = 2.0f64.acosh();
        let v_max = (tte / tc).asinh();
        if v_max > v0 {
            nodes.clear();
            composite(&rule, v0, v_max, 0.25, &mut nodes);
            for _ in sides {
                for &(v, w) in &nodes {
                    acc.add(C::new(tc * v.sinh(), 0.0), C::new(w, 0.0));
                }
            }
        }
        // The path touches the real axis at t = 0.
        acc.min_gap = acc.min_gap.min((1.0 - C::from_polar(1.0, acc.sb + tc)).norm());
    }
    if acc.min_gap < RESONANCE_GAP {
        return Err(Error::Resonance2D { mode: n, gap: acc.min_gap });
    }
    Ok(acc.sum * scale)
}

fn composite(rule: &GaussLegendre, a: f64, b: f64, max_width: f64, out: &mut Vec<(f64, f64)>) {
    let n = ((b - a) / max_width).ceil().max(1.0) as usize;
    let w = (b - a) / n as f64;
    for p in 0..n {
        rule.push_mapped(a + p as f64 * w, a + (p + 1) as f64 * w, out);
    }
}

fn half_plane_sum_impl(half: HalfPlane, params: &ReductionParams, two_sided: bool) -> Result<C> {
    params.validate()?;
    let cut = params.effective_mode_cut() as i64;
    let mut total = C::new(0.0, 0.0);
    let mut outer = C::new(0.0, 0.0);
    for n in -cut..=cut {
        let v = mode_integral(n, half, params, two_sided)?;
        if n.abs() == cut {
            outer += v;
        }
        total += v;
    }
    let total = total / (C::i() * params.k);
    let outer = outer / (C::i() * params.k);
    if outer.norm() > 1e-12 * (1.0 + total.norm()) {
        return Err(Error::NoConvergence { best: total, err: outer.norm(), c: cut as usize });
    }
    Ok(total)
}

/// Half-plane sum over the rows `m >= 1` (`Upper`) or `m <= -1` (`Lower`).
pub fn half_plane_sum(half: HalfPlane, params: &ReductionParams) -> Result<C> {
    half_plane_sum_impl(half, params, false)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct S00Breakdown {
    pub total: C,
    pub upper: C,
    pub lower: C,
    pub grating: C,
    /// One-dimensional Wood distance of the grating row.
    pub wood_distance: f64,
}

/// `S_00 = S+ + S- + S_grating` on the unit square lattice.
pub fn full_s00(params: &ReductionParams) -> Result<S00Breakdown> {
    params.validate()?;
    check_wood_2d(params.k, params.alpha_bloch, params.beta_bloch)?;
    let gp = GratingParams::new(params.k, 1.0, params.alpha_bloch, Kernel::spherical(0)?)?;
    let cfg = SolverConfig { quad: params.quad, ..SolverConfig::default() };
    let grating = lattice_sum_sl(0, &gp, &cfg)?;
    let upper = half_plane_sum(HalfPlane::Upper, params)?;
    let lower = half_plane_sum(HalfPlane::Lower, params)?;
    Ok(S00Breakdown {
        total: upper + lower + grating.value,
        upper,
        lower,
        grating: grating.value,
        wood_distance: grating.wood_distance,
    })
}
