//! Gauss-Legendre based quadrature: fixed composite rules for the engine and
//! an adaptive integrator for reference values.

use crate::error::{domain, Error, Result};
use num_complex::Complex64 as C;
use serde::{Deserialize, Serialize};
use std::collections::{BinaryHeap, HashMap};
use std::f64::consts::PI;
use std::sync::{Arc, OnceLock, RwLock};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureConfig {
    pub gl_order: usize,
    pub panels_per_wavelength: f64,
    /// Ray integrals stop where the extracted decay factor drops below `e^{-x}`.
    pub tail_truncation_exponent: f64,
    pub reference_tol: f64,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig {
            gl_order: 16,
            panels_per_wavelength: 4.0,
            tail_truncation_exponent: 45.0,
            reference_tol: 1e-13,
        }
    }
}

impl QuadratureConfig {
    pub fn validate(&self) -> Result<()> {
        if self.gl_order < 2 {
            return Err(domain("gl_order must be >= 2"));
        }
        if !(self.panels_per_wavelength >= 2.0) {
            return Err(domain("panels_per_wavelength must be >= 2"));
        }
        if !(self.tail_truncation_exponent > 0.0) {
            return Err(domain("tail_truncation_exponent must be positive"));
        }
        if !(self.reference_tol > 0.0) {
            return Err(domain("reference_tol must be positive"));
        }
        Ok(())
    }
}

/// Nodes and weights on [-1, 1].
#[derive(Debug)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    fn compute(n: usize) -> Self {
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let nf = n as f64;
        for i in 0..n.div_ceil(2) {
            let mut x = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        GaussLegendre { nodes, weights }
    }

    /// Shared rule of the given order; tables are built once per order.
    pub fn get(n: usize) -> Arc<GaussLegendre> {
        static CACHE: OnceLock<RwLock<HashMap<usize, Arc<GaussLegendre>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| RwLock::new(HashMap::new()));
        if let Some(r) = cache.read().unwrap().get(&n) {
            return r.clone();
        }
        let rule = Arc::new(GaussLegendre::compute(n));
        cache.write().unwrap().entry(n).or_insert(rule).clone()
    }

    /// Appends the mapped nodes of [a, b] to `out` as `(x, w)`.
    pub fn push_mapped(&self, a: f64, b: f64, out: &mut Vec<(f64, f64)>) {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            out.push((mid + half * x, half * w));
        }
    }

    pub fn integrate<F: FnMut(f64) -> C>(&self, mut f: F, a: f64, b: f64) -> C {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        let mut s = C::new(0.0, 0.0);
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            s += f(mid + half * x) * *w;
        }
        s * half
    }
}

/// `(P_n(x), P_n'(x))`.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Single-panel Gauss-Legendre rule.
pub fn gl_integrate<F: FnMut(f64) -> C>(f: F, a: f64, b: f64, order: usize) -> Result<C> {
    if !(a < b) {
        return Err(domain(format!("empty interval [{a}, {b}]")));
    }
    if order < 2 {
        return Err(domain("order must be >= 2"));
    }
    Ok(GaussLegendre::get(order).integrate(f, a, b))
}

/// Panel width used for an integrand oscillating at `phase_rate`.
pub fn oscillatory_panel_width(phase_rate: f64, cfg: &QuadratureConfig) -> f64 {
    let rate = phase_rate.abs();
    if rate == 0.0 {
        1.0
    } else {
        (2.0 * PI / (rate * cfg.panels_per_wavelength)).min(1.0)
    }
}

/// Number of equal panels covering [a, b].
pub fn oscillatory_panel_count(a: f64, b: f64, phase_rate: f64, cfg: &QuadratureConfig) -> usize {
    ((b - a) / oscillatory_panel_width(phase_rate, cfg)).ceil().max(1.0) as usize
}

/// Composite nodes over consecutive segments `[bp[i], bp[i+1]]`; every
/// breakpoint is a panel boundary.
pub fn oscillatory_nodes(breakpoints: &[f64], phase_rate: f64, cfg: &QuadratureConfig, out: &mut Vec<(f64, f64)>) {
    let rule = GaussLegendre::get(cfg.gl_order);
    for seg in breakpoints.windows(2) {
        let (a, b) = (seg[0], seg[1]);
        if !(b > a) {
            continue;
        }
        let n = oscillatory_panel_count(a, b, phase_rate, cfg);
        let w = (b - a) / n as f64;
        for p in 0..n {
            let lo = a + p as f64 * w;
            let hi = if p + 1 == n { b } else { a + (p + 1) as f64 * w };
            rule.push_mapped(lo, hi, out);
        }
    }
}

/// Like [`oscillatory_nodes`] but with a position-dependent rate: each panel
/// is sized by `rate(x)` at its left end, so `rate` should be non-increasing.
pub fn graded_oscillatory_nodes<R: Fn(f64) -> f64>(
    breakpoints: &[f64],
    rate: R,
    cfg: &QuadratureConfig,
    out: &mut Vec<(f64, f64)>,
) {
    let rule = GaussLegendre::get(cfg.gl_order);
    for seg in breakpoints.windows(2) {
        let (a, b) = (seg[0], seg[1]);
        let mut lo = a;
        while lo < b {
            let w = oscillatory_panel_width(rate(lo), cfg);
            let hi = if lo + 1.25 * w >= b { b } else { lo + w };
            rule.push_mapped(lo, hi, out);
            lo = hi;
        }
    }
}

/// Composite Gauss-Legendre for integrands oscillating like `e^{i rate x}`.
pub fn oscillatory_integrate<F: FnMut(f64) -> C>(
    mut f: F,
    a: f64,
    b: f64,
    phase_rate: f64,
    cfg: &QuadratureConfig,
) -> Result<C> {
    if !(a < b) {
        return Err(domain(format!("empty interval [{a}, {b}]")));
    }
    cfg.validate()?;
    let mut nodes = Vec::new();
    oscillatory_nodes(&[a, b], phase_rate, cfg, &mut nodes);
    Ok(nodes.iter().map(|&(x, w)| f(x) * w).sum())
}

/// Nodes for `int_0^inf g(tau) e^{-a tau} dtau` on geometrically graded panels
/// of `[0, T]`, `T = tail_truncation_exponent / a`. Weights include `e^{-a tau}`.
pub fn ray_nodes(a: f64, cfg: &QuadratureConfig, out: &mut Vec<(f64, f64)>) -> Result<()> {
    if !(a > 0.0) || !a.is_finite() {
        return Err(domain(format!("decay rate {a} must be positive")));
    }
    let rule = GaussLegendre::get(cfg.gl_order);
    let t_end = cfg.tail_truncation_exponent / a;
    let mut lo = 0.0;
    let mut width = (1.0 / a).min(1.0);
    let start = out.len();
    while lo < t_end {
        let hi = (lo + width).min(t_end);
        rule.push_mapped(lo, hi, out);
        lo = hi;
        width *= 2.0;
    }
    for node in &mut out[start..] {
        node.1 *= (-a * node.0).exp();
    }
    Ok(())
}

pub fn ray_integrate_decaying<F: FnMut(f64) -> C>(mut g: F, a: f64, cfg: &QuadratureConfig) -> Result<C> {
    cfg.validate()?;
    let mut nodes = Vec::new();
    ray_nodes(a, cfg, &mut nodes)?;
    Ok(nodes.iter().map(|&(t, w)| g(t) * w).sum())
}

const REFERENCE_ORDER: usize = 12;
const REFERENCE_PANEL_CAP: usize = 1 << 20;

struct Panel {
    a: f64,
    b: f64,
    value: C,
    err: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.err == other.err
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.err.total_cmp(&other.err)
    }
}

/// Globally adaptive bisection. Each panel is estimated by one rule on the
/// panel against the same rule on its two halves; the panel with the largest
/// estimate is split until the total estimate is below `tol`.
pub fn reference_integrate<F: FnMut(f64) -> C>(mut f: F, a: f64, b: f64, tol: f64) -> Result<C> {
    if !(a < b) {
        return Err(domain(format!("empty interval [{a}, {b}]")));
    }
    let rule = GaussLegendre::get(REFERENCE_ORDER);
    let make = |lo: f64, hi: f64, f: &mut F| -> Panel {
        let whole = rule.integrate(&mut *f, lo, hi);
        let mid = 0.5 * (lo + hi);
        let split = rule.integrate(&mut *f, lo, mid) + rule.integrate(&mut *f, mid, hi);
        Panel { a: lo, b: hi, value: split, err: (whole - split).norm() }
    };
    let mut heap = BinaryHeap::new();
    let first = make(a, b, &mut f);
    let mut total_err = first.err;
    heap.push(first);
    let mut count = 1usize;
    while total_err > tol {
        if heap.peek().is_none_or(|p| p.err == 0.0) {
            break;
        }
        if count >= REFERENCE_PANEL_CAP {
            let best: C = heap.iter().map(|p| p.value).sum();
            return Err(Error::NoConvergence { best, err: total_err, c: count });
        }
        let worst = heap.pop().expect("non-empty");
        let mid = 0.5 * (worst.a + worst.b);
        if !(mid > worst.a && mid < worst.b) {
            // cannot split further in floating point; accept as is
            total_err -= worst.err;
            heap.push(Panel { err: 0.0, ..worst });
            continue;
        }
        let left = make(worst.a, mid, &mut f);
        let right = make(mid, worst.b, &mut f);
        total_err += left.err + right.err - worst.err;
        heap.push(left);
        heap.push(right);
        count += 1;
        if count.is_multiple_of(4096) {
            total_err = heap.iter().map(|p| p.err).sum();
        }
    }
    let mut panels: Vec<Panel> = heap.into_vec();
    panels.sort_by(|p, q| p.a.total_cmp(&q.a));
    Ok(panels.iter().map(|p| p.value).sum())
}
