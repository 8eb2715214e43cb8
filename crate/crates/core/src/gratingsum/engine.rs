use super::{reduced_alpha, GratingParams, SolverConfig};
use crate::error::{Error, Result};
use crate::quadrature::{graded_oscillatory_nodes, ray_nodes};
use crate::smoothing::{psi_bc, FilterSpec};
use crate::specfun::KernelFamily;
use num_complex::Complex64 as C;

/// One-sided sum for all orders `0..=l_max` of one kernel family.
pub(crate) struct Side<'a> {
    family: KernelFamily,
    l_max: u32,
    k: f64,
    d: f64,
    /// `k + alpha'` with the reduced Bloch wavenumber.
    kr: f64,
    cfg: &'a SolverConfig,
}

pub(crate) struct SideOutcome {
    /// `(value, last difference, c)` per order; orders not requested are
    /// reported as converged at whatever state they were in.
    pub per_order: Vec<Result<(C, f64, usize)>>,
    pub kernel_evals: u64,
}

impl<'a> Side<'a> {
    pub fn new(family: KernelFamily, l_max: u32, params: &GratingParams, cfg: &'a SolverConfig) -> Self {
        let alpha = reduced_alpha(params.k, params.d, params.alpha);
        Side { family, l_max, k: params.k, d: params.d, kr: params.k + alpha, cfg }
    }

    fn n_orders(&self) -> usize {
        self.l_max as usize + 1
    }

    /// `acc[l] += weight * f~_l(z)` for every order.
    fn accumulate(&self, z: C, weight: C, acc: &mut [C]) -> Result<()> {
        let (mut a, mut b) = self.family.base_scaled(z);
        acc[0] += weight * a;
        if self.l_max == 0 {
            return finite(a, z);
        }
        acc[1] += weight * b;
        let inv = 1.0 / z;
        for l in 1..self.l_max {
            let next = self.family.recurrence_coeff(l) * inv * b - a;
            acc[l as usize + 1] += weight * next;
            a = b;
            b = next;
        }
        finite(b, z)
    }

    #[inline]
    fn phase(&self, x: f64) -> C {
        C::from_polar(1.0, self.kr * x * self.d)
    }

    /// Oscillation rate of the filtered-integral integrand at index `x`: the
    /// reduced Bloch phase plus the residual phase of the scaled kernel of the
    /// highest order, `k (1 - sqrt(1 - nu^2/z^2))`, which decreases with `x`.
    fn phase_rate(&self, x: f64) -> f64 {
        let nu = self.family.effective_order(self.l_max);
        let z = self.k * x * self.d;
        let rho = 1.0 - (1.0 - (nu / z).powi(2)).max(0.0).sqrt();
        (self.kr.abs() + self.k * rho) * self.d
    }

    fn head(&self, evals: &mut u64) -> Result<Vec<C>> {
        let mut acc = vec![C::new(0.0, 0.0); self.n_orders()];
        for n in 1..self.cfg.b {
            let x = n as f64;
            self.accumulate(C::new(self.k * x * self.d, 0.0), self.phase(x), &mut acc)?;
            *evals += 1;
        }
        Ok(acc)
    }

    pub fn tail(&self, evals: &mut u64) -> Result<Vec<C>> {
        let eta = self.kr.signum();
        let a = self.kr.abs();
        let bd = self.cfg.b as f64 * self.d;
        let mut nodes = Vec::new();
        ray_nodes(a, &self.cfg.quad, &mut nodes)?;
        let mut acc = vec![C::new(0.0, 0.0); self.n_orders()];
        for &(tau, w) in &nodes {
            let z = self.k * C::new(bd, eta * tau);
            self.accumulate(z, C::new(w, 0.0), &mut acc)?;
            *evals += 1;
        }
        let pref = C::new(0.0, eta / self.d) * C::from_polar(1.0, self.kr * bd);
        for v in &mut acc {
            *v *= pref;
        }
        Ok(acc)
    }

    pub fn filtered_integral(&self, c: usize, evals: &mut u64) -> Result<Vec<C>> {
        let spec = FilterSpec { r: self.cfg.filter_r, b: self.cfg.b, c };
        let bp = [self.cfg.b as f64, spec.flat_end(), spec.support_end()];
        let mut nodes = Vec::new();
        graded_oscillatory_nodes(&bp, |x| self.phase_rate(x), &self.cfg.quad, &mut nodes);
        let mut acc = vec![C::new(0.0, 0.0); self.n_orders()];
        for &(x, w) in &nodes {
            let weight = self.phase(x) * (w * psi_bc(x, &spec));
            self.accumulate(C::new(self.k * x * self.d, 0.0), weight, &mut acc)?;
            *evals += 1;
        }
        Ok(acc)
    }

    /// Extends `cache` (terms `F(nd)` for `n = b, b+1, ...`, all orders, flat
    /// layout) up to and including `n_last`.
    fn extend_terms(&self, cache: &mut Vec<C>, n_last: usize, evals: &mut u64) -> Result<()> {
        let no = self.n_orders();
        let b = self.cfg.b;
        let mut have = cache.len() / no;
        let mut buf = Vec::with_capacity(no);
        while b + have <= n_last {
            let x = (b + have) as f64;
            let z = C::new(self.k * x * self.d, 0.0);
            self.family.eval_scaled_seq(self.l_max, z, &mut buf)?;
            let ph = self.phase(x);
            cache.extend(buf.iter().map(|v| v * ph));
            have += 1;
            *evals += 1;
        }
        Ok(())
    }

    /// Four-term value for one `c`, reusing the cached terms.
    fn value_at(&self, c: usize, fixed: &[C], cache: &mut Vec<C>, evals: &mut u64) -> Result<Vec<C>> {
        let no = self.n_orders();
        let b = self.cfg.b;
        let spec = FilterSpec { r: self.cfg.filter_r, b, c };
        let n_last = spec.support_end().floor() as usize;
        self.extend_terms(cache, n_last, evals)?;
        let mut s = fixed.to_vec();
        for n in b..=n_last {
            let w = psi_bc(n as f64, &spec);
            if w == 0.0 {
                continue;
            }
            let row = &cache[(n - b) * no..(n - b + 1) * no];
            for (acc, t) in s.iter_mut().zip(row) {
                *acc += t * w;
            }
        }
        let integral = self.filtered_integral(c, evals)?;
        for (acc, v) in s.iter_mut().zip(&integral) {
            *acc -= v;
        }
        Ok(s)
    }

    /// Runs the doubling driver. With `only = Some(l)` convergence is judged
    /// on that order alone.
    pub fn run(&self, only: Option<u32>) -> Result<SideOutcome> {
        let no = self.n_orders();
        let mut evals = 0u64;
        let mut fixed = self.head(&mut evals)?;
        for (f, t) in fixed.iter_mut().zip(self.tail(&mut evals)?) {
            *f += t;
        }
        let watched: Vec<usize> = match only {
            Some(l) => vec![l as usize],
            None => (0..no).collect(),
        };
        let mut cache = Vec::new();
        let mut done: Vec<Option<(C, f64, usize)>> = vec![None; no];
        let mut c = self.cfg.c0;
        let mut prev = self.value_at(c, &fixed, &mut cache, &mut evals)?;
        let mut last_diff = vec![f64::INFINITY; no];
        let mut c_reached = c;
        while c * 2 <= self.cfg.c_max {
            c *= 2;
            c_reached = c;
            let cur = self.value_at(c, &fixed, &mut cache, &mut evals)?;
            let mut all = true;
            for &l in &watched {
                if done[l].is_some() {
                    continue;
                }
                let diff = (cur[l] - prev[l]).norm();
                last_diff[l] = diff;
                if diff <= self.cfg.tol * (1.0 + cur[l].norm()) {
                    done[l] = Some((cur[l], diff, c));
                } else {
                    all = false;
                }
            }
            prev = cur;
            if all {
                break;
            }
        }
        let per_order = (0..no)
            .map(|l| match done[l] {
                Some(v) => Ok(v),
                None if watched.contains(&l) => {
                    Err(Error::NoConvergence { best: prev[l], err: last_diff[l], c: c_reached })
                }
                None => Ok((prev[l], last_diff[l], c_reached)),
            })
            .collect();
        Ok(SideOutcome { per_order, kernel_evals: evals })
    }
}

fn finite(v: C, z: C) -> Result<()> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(Error::Overflow(format!("kernel recurrence at z = {z}")))
    }
}

/// Values `S^c` of the four-term formula at the given transition lengths,
/// for convergence studies. Terms are shared between the entries.
pub fn doubling_history(params: &GratingParams, cfg: &SolverConfig, cs: &[usize]) -> Result<Vec<C>> {
    params.validate()?;
    cfg.validate()?;
    let l = params.kernel.order;
    let side = Side::new(params.kernel.family, l, params, cfg);
    let mut evals = 0u64;
    let mut fixed = side.head(&mut evals)?;
    for (f, t) in fixed.iter_mut().zip(side.tail(&mut evals)?) {
        *f += t;
    }
    let mut cache = Vec::new();
    cs.iter().map(|&c| Ok(side.value_at(c.max(1), &fixed, &mut cache, &mut evals)?[l as usize])).collect()
}
