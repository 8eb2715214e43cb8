//! Scaled Hankel functions of the first kind, orders 0 and 1.
//!
//! All routines return `H_nu(z) exp(-i z)`, which is O(|z|^{-1/2}) on the
//! whole cut plane and never overflows for the arguments the engine uses.

use num_complex::Complex64 as C;
use std::f64::consts::{FRAC_PI_4, PI};

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
const SERIES_RADIUS: f64 = 4.0;
const ASYMPTOTIC_RADIUS: f64 = 20.0;

/// `(H_0(z) e^{-iz}, H_1(z) e^{-iz})` for `z != 0`, `|arg z| < pi`.
pub(crate) fn h01_scaled(z: C) -> (C, C) {
    let r = z.norm();
    if r <= SERIES_RADIUS {
        let (j0, j1, y0, y1) = bessel_series(z);
        let s = (-C::i() * z).exp();
        ((j0 + C::i() * y0) * s, (j1 + C::i() * y1) * s)
    } else if r >= ASYMPTOTIC_RADIUS {
        (asymptotic(0.0, z), asymptotic(1.0, z))
    } else {
        laplace_integral(z)
    }
}

/// Ascending series for J0, J1, Y0, Y1.
pub(crate) fn bessel_series(z: C) -> (C, C, C, C) {
    let q = z * z * 0.25;
    let mq = -q;
    let half = z * 0.5;

    // p0_m = (-q)^m / (m!)^2, p1_m = (-q)^m / (m! (m+1)!)
    let mut p0 = C::new(1.0, 0.0);
    let mut p1 = C::new(1.0, 0.0);
    let mut j0 = p0;
    let mut j1s = p1;
    let mut y0s = C::new(0.0, 0.0);
    // psi(m+1) + psi(m+2) at m = 0
    let mut harm = 0.0; // H_m
    let mut y1s = p1 * (-2.0 * EULER_GAMMA + 1.0);
    for m in 1..80 {
        let mf = m as f64;
        p0 *= mq / (mf * mf);
        p1 *= mq / (mf * (mf + 1.0));
        harm += 1.0 / mf;
        j0 += p0;
        j1s += p1;
        y0s += p0 * harm;
        y1s += p1 * (2.0 * (harm - EULER_GAMMA) + 1.0 / (mf + 1.0));
        if mf > q.norm() && (p0.norm() + p1.norm()) * (1.0 + harm) < 1e-18 {
            break;
        }
    }
    let j1 = half * j1s;
    let lg = half.ln();
    let y0 = (2.0 / PI) * ((lg + EULER_GAMMA) * j0 - y0s);
    let y1 = -2.0 / (PI * z) + (2.0 / PI) * lg * j1 - half * y1s / PI;
    (j0, j1, y0, y1)
}

/// Large-argument expansion, summed until the terms stop decreasing.
pub(crate) fn asymptotic(nu: f64, z: C) -> C {
    let mu = 4.0 * nu * nu;
    let inv = 1.0 / z;
    let mut term = C::new(1.0, 0.0);
    let mut sum = term;
    let mut prev = f64::INFINITY;
    for m in 1..60 {
        let mf = m as f64;
        let odd = 2.0 * mf - 1.0;
        term *= C::i() * inv * ((mu - odd * odd) / (8.0 * mf));
        let t = term.norm();
        if t == 0.0 {
            break;
        }
        if t > prev {
            break;
        }
        sum += term;
        if t < 1e-17 * sum.norm() {
            break;
        }
        prev = t;
    }
    let pref = (2.0 / (PI * z)).sqrt() * C::from_polar(1.0, -(nu * PI * 0.5 + FRAC_PI_4));
    pref * sum
}

/// Laplace-type integral
///
/// H_nu(z) e^{-iz} = sqrt(2/(pi z)) e^{-i(nu pi/2 + pi/4)} / Gamma(nu + 1/2)
///     * int_0^inf e^{-u} u^{nu - 1/2} (1 + i u / (2z))^{nu - 1/2} du
///
/// with `u = s^2 e^{i phi}` and the trapezoid rule in `s`, which is
/// spectrally accurate because the integrand is entire in a strip around the
/// real `s` axis of half-width at least ~1 for `|z| >= 4`.
pub(crate) fn laplace_integral(z: C) -> (C, C) {
    let theta = z.arg();
    let phi = if theta >= 0.0 { 0.0 } else { theta.max(-FRAC_PI_4) };
    let rot = C::from_polar(1.0, phi);
    let h = 0.125;
    let s_max = (42.0 / phi.cos()).sqrt();
    let n = (s_max / h).ceil() as usize;
    let c = C::i() / (2.0 * z);
    let mut i0 = C::new(0.0, 0.0);
    let mut i1 = C::new(0.0, 0.0);
    for j in 0..=n {
        let s = j as f64 * h;
        let s2 = s * s;
        let u = rot * s2;
        let e = (-u).exp();
        let sw = (1.0 + c * u).sqrt();
        let w = if j == 0 { 1.0 } else { 2.0 };
        i0 += e * (w / sw);
        i1 += e * sw * (w * s2);
    }
    i0 *= C::from_polar(h, 0.5 * phi);
    i1 *= C::from_polar(h, 1.5 * phi);
    let sqrt_pi = PI.sqrt();
    let pref = (2.0 / (PI * z)).sqrt();
    let h0 = pref * C::from_polar(1.0, -FRAC_PI_4) * i0 / sqrt_pi;
    let h1 = pref * C::from_polar(1.0, -3.0 * FRAC_PI_4) * i1 * (2.0 / sqrt_pi);
    (h0, h1)
}
