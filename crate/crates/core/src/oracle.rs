//! Brute-force reference values: absolutely convergent sums with the
//! wavenumber moved to `k + i eps`, extrapolated to `eps -> 0+` by
//! polynomial (Richardson) extrapolation over a geometric ladder.

use crate::error::{domain, Result};
use crate::gratingsum::{reduced_alpha, GratingParams};
use num_complex::Complex64 as C;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DissipationSpec {
    pub eps0: f64,
    pub levels: usize,
    pub order: usize,
    pub term_tol: f64,
}

impl Default for DissipationSpec {
    fn default() -> Self {
        DissipationSpec { eps0: 1e-3, levels: 5, order: 4, term_tol: 1e-15 }
    }
}

impl DissipationSpec {
    /// Ladder used for the two-dimensional square-lattice sum. The double
    /// sum costs `O(eps^-2)`, so it starts higher and truncates earlier.
    pub fn two_dimensional() -> Self {
        DissipationSpec { eps0: 0.1, levels: 5, order: 4, term_tol: 1e-13 }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.eps0 > 0.0) || self.levels < 2 || self.levels <= self.order {
            return Err(domain("need eps0 > 0, levels >= 2 and levels > order"));
        }
        if !(self.term_tol > 0.0) {
            return Err(domain("term_tol must be positive"));
        }
        Ok(())
    }

    pub fn ladder(&self) -> Vec<f64> {
        (0..self.levels).map(|j| self.eps0 * 0.5f64.powi(j as i32)).collect()
    }
}

/// Which combination of one-sided sums to form.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Combination {
    /// `S(alpha)`.
    OneSided,
    /// `S(alpha) + (-1)^l S(-alpha)`.
    Mirrored,
}

/// Neumaier compensated sum.
#[derive(Debug, Clone, Copy, Default)]
struct Compensated {
    sum: C,
    comp: C,
}

impl Compensated {
    #[inline]
    fn add(&mut self, x: C) {
        self.sum.re = two_sum(self.sum.re, x.re, &mut self.comp.re);
        self.sum.im = two_sum(self.sum.im, x.im, &mut self.comp.im);
    }

    fn value(&self) -> C {
        self.sum + self.comp
    }
}

#[inline]
fn two_sum(s: f64, x: f64, comp: &mut f64) -> f64 {
    let t = s + x;
    if s.abs() >= x.abs() {
        *comp += (s - t) + x;
    } else {
        *comp += (x - t) + s;
    }
    t
}

/// One-sided damped sums `sum_n f_l((k + i eps) n d) e^{+- i alpha n d}` for
/// every order `0..=l_max`, returned as `(plus, minus)`.
pub fn damped_sum_1d_orders(
    l_max: u32,
    params: &GratingParams,
    eps: f64,
    spec: &DissipationSpec,
) -> Result<(Vec<C>, Vec<C>)> {
    params.validate()?;
    if !(eps > 0.0) {
        return Err(domain("eps must be positive"));
    }
    let family = params.kernel.family;
    let (k, d) = (params.k, params.d);
    let kp = k + reduced_alpha(k, d, params.alpha);
    let km = k + reduced_alpha(k, d, -params.alpha);
    let beta = family.decay_exponent();
    let no = l_max as usize + 1;
    let mut plus = vec![Compensated::default(); no];
    let mut minus = vec![Compensated::default(); no];
    let mut bank = Vec::with_capacity(no);
    let mut n = 1u64;
    loop {
        let x = n as f64 * d;
        let z = C::new(k * x, eps * x);
        family.eval_scaled_seq(l_max, z, &mut bank)?;
        let damp = (-eps * x).exp();
        let ep = C::from_polar(damp, kp * x);
        let em = C::from_polar(damp, km * x);
        for l in 0..no {
            plus[l].add(bank[l] * ep);
            minus[l].add(bank[l] * em);
        }
        let envelope = (k * x).powf(-beta).max(bank[l_max as usize].norm());
        if damp * envelope < spec.term_tol {
            break;
        }
        n += 1;
    }
    Ok((plus.iter().map(|c| c.value()).collect(), minus.iter().map(|c| c.value()).collect()))
}

/// Damped sum for the kernel and order in `params`.
pub fn damped_sum_1d(params: &GratingParams, comb: Combination, eps: f64, spec: &DissipationSpec) -> Result<C> {
    let l = params.kernel.order;
    let (p, m) = damped_sum_1d_orders(l, params, eps, spec)?;
    let l = l as usize;
    Ok(match comb {
        Combination::OneSided => p[l],
        Combination::Mirrored => p[l] + parity(l) * m[l],
    })
}

fn parity(l: usize) -> f64 {
    if l.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

/// Neville extrapolation to `eps = 0` through the last `order + 1` samples.
pub fn richardson_limit(samples: &[(f64, C)], order: usize) -> Result<C> {
    if samples.len() < order + 1 {
        return Err(domain(format!("{} samples cannot support order {order}", samples.len())));
    }
    let used = &samples[samples.len() - order - 1..];
    for (i, a) in used.iter().enumerate() {
        if !a.0.is_finite() || used[..i].iter().any(|b| b.0 == a.0) {
            return Err(domain("duplicated or invalid extrapolation nodes"));
        }
    }
    let xs: Vec<f64> = used.iter().map(|s| s.0).collect();
    let mut p: Vec<C> = used.iter().map(|s| s.1).collect();
    let n = p.len();
    for m in 1..n {
        for i in 0..n - m {
            let (xi, xj) = (xs[i], xs[i + m]);
            p[i] = (xj * p[i] - xi * p[i + 1]) / (xj - xi);
        }
    }
    Ok(p[0])
}

/// Dissipation limit of `S_l` (mirrored combination) for all orders.
pub fn dissipation_limit_orders(l_max: u32, params: &GratingParams, spec: &DissipationSpec) -> Result<Vec<C>> {
    spec.validate()?;
    let mut per_level = Vec::new();
    for eps in spec.ladder() {
        let (p, m) = damped_sum_1d_orders(l_max, params, eps, spec)?;
        let s: Vec<C> = p.iter().zip(&m).enumerate().map(|(l, (a, b))| a + parity(l) * b).collect();
        per_level.push((eps, s));
    }
    (0..=l_max as usize)
        .map(|l| {
            let samples: Vec<(f64, C)> = per_level.iter().map(|(e, s)| (*e, s[l])).collect();
            richardson_limit(&samples, spec.order)
        })
        .collect()
}

pub fn dissipation_limit_1d(params: &GratingParams, comb: Combination, spec: &DissipationSpec) -> Result<C> {
    spec.validate()?;
    let samples = spec
        .ladder()
        .into_iter()
        .map(|eps| Ok((eps, damped_sum_1d(params, comb, eps, spec)?)))
        .collect::<Result<Vec<_>>>()?;
    richardson_limit(&samples, spec.order)
}

/// `sum_{n>0} h_0(kappa n d) e^{i alpha n d} = (i/(kappa d)) log(1 - e^{i(kappa+alpha)d})`,
/// valid for `Im kappa >= 0` away from anomalies.
pub fn spherical_l0_closed_form(kappa: C, d: f64, alpha: f64) -> C {
    let q = (C::i() * (kappa + alpha) * d).exp();
    C::i() / (kappa * d) * (1.0 - q).ln()
}

/// Smallest radius beyond which the damped 2D tail is below `tol`.
pub fn n_cut_2d(k: f64, eps: f64, tol: f64) -> usize {
    let kk = C::new(k, eps).norm();
    let r = ((2.0 * std::f64::consts::PI / (kk * eps * tol)).ln() / eps).max(1.0);
    r.ceil() as usize
}

/// `sum_{0 < n^2+m^2 <= N^2} h_0((k + i eps) R) e^{i k1 n} e^{i k2 m}` on the
/// unit square lattice, `R = sqrt(n^2 + m^2)`. The four quadrants are folded
/// into real cosine weights.
pub fn damped_sum_2d(k: f64, k1: f64, k2: f64, eps: f64, n_cut: usize) -> Result<C> {
    if !(eps > 0.0 && k > 0.0) {
        return Err(domain("need k > 0 and eps > 0"));
    }
    let kappa = C::new(k, eps);
    let weight = |kk: f64, n: usize| if n == 0 { 1.0 } else { 2.0 * (kk * n as f64).cos() };
    let wm: Vec<f64> = (0..=n_cut).map(|m| weight(k2, m)).collect();
    let n2max = (n_cut * n_cut) as f64;
    let mut total = Compensated::default();
    for n in 0..=n_cut {
        let wn = weight(k1, n);
        let nf = n as f64;
        let mut row = Compensated::default();
        for (m, &w) in wm.iter().enumerate() {
            if n == 0 && m == 0 {
                continue;
            }
            let mf = m as f64;
            let r2 = nf * nf + mf * mf;
            if r2 > n2max {
                break;
            }
            let r = r2.sqrt();
            let z = kappa * r;
            let h0 = (C::i() * z).exp() / (C::i() * z);
            row.add(h0 * w);
        }
        total.add(row.value() * wn);
    }
    Ok(total.value())
}

/// Dissipation limit of the square-lattice sum.
pub fn dissipation_limit_2d(k: f64, k1: f64, k2: f64, spec: &DissipationSpec) -> Result<C> {
    spec.validate()?;
    let samples = spec
        .ladder()
        .into_iter()
        .map(|eps| Ok((eps, damped_sum_2d(k, k1, k2, eps, n_cut_2d(k, eps, spec.term_tol))?)))
        .collect::<Result<Vec<_>>>()?;
    richardson_limit(&samples, spec.order)
}
