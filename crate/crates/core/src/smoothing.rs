//! The C-infinity cutoff filter and its scaled form on the lattice index.

use crate::error::{domain, Result};
use serde::{Deserialize, Serialize};

pub const DEFAULT_R: f64 = 0.125;

/// Filter geometry in lattice-index units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FilterSpec {
    /// Flatness radius, `0 < r < 1/4`.
    pub r: f64,
    /// Head length.
    pub b: usize,
    /// Transition length.
    pub c: usize,
}

impl FilterSpec {
    pub fn new(r: f64, b: usize, c: usize) -> Result<Self> {
        let s = FilterSpec { r, b, c };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        check_r(self.r)?;
        if self.b < 1 || self.c < 1 {
            return Err(domain(format!("b = {} and c = {} must be >= 1", self.b, self.c)));
        }
        Ok(())
    }

    /// End of the flat part, `b + 2rc`.
    pub fn flat_end(&self) -> f64 {
        self.b as f64 + 2.0 * self.r * self.c as f64
    }

    /// Start of the zero part, `b + (1-2r)c`.
    pub fn support_end(&self) -> f64 {
        self.b as f64 + (1.0 - 2.0 * self.r) * self.c as f64
    }
}

fn check_r(r: f64) -> Result<()> {
    if !(r > 0.0 && r < 0.25) {
        return Err(domain(format!("flatness radius {r} outside (0, 1/4)")));
    }
    Ok(())
}

/// Smooth step from 0 to 1 on [0, 1]: B(u)/(B(u)+B(1-u)) with B(u) = exp(-1/u).
#[inline]
fn smooth_step(u: f64) -> f64 {
    if u <= 0.0 {
        0.0
    } else if u >= 1.0 {
        1.0
    } else {
        1.0 / (1.0 + (1.0 / u - 1.0 / (1.0 - u)).exp())
    }
}

#[inline]
fn psi_unchecked(t: f64, r: f64) -> f64 {
    1.0 - smooth_step((t - 2.0 * r) / (1.0 - 4.0 * r))
}

/// Decreasing filter, identically 1 on [0, 2r] and 0 on [1-2r, 1].
pub fn psi(t: f64, r: f64) -> Result<f64> {
    check_r(r)?;
    if !(0.0..=1.0).contains(&t) {
        return Err(domain(format!("t = {t} outside [0, 1]")));
    }
    Ok(psi_unchecked(t, r))
}

/// `psi_{b,c}(x)`: 1 before `b`, `psi((x-b)/c)` on `[b, b+c]`, 0 after.
#[inline]
pub fn psi_bc(x: f64, spec: &FilterSpec) -> f64 {
    let b = spec.b as f64;
    let c = spec.c as f64;
    if x < b {
        1.0
    } else if x > b + c {
        0.0
    } else {
        psi_unchecked((x - b) / c, spec.r)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn endpoints_and_midpoint() {
        assert_eq!(psi(0.0, 0.125).unwrap(), 1.0);
        assert_eq!(psi(1.0, 0.125).unwrap(), 0.0);
        assert!((psi(0.5, 0.125).unwrap() - 0.5).abs() < 1e-16);
        assert!(psi(1.5, 0.125).is_err());
        assert!(psi(0.5, 0.25).is_err());
        assert!(psi(0.5, 0.0).is_err());
    }

    #[test]
    fn scaled_breakpoints() {
        let s = FilterSpec::new(0.125, 10, 64).unwrap();
        assert_eq!(psi_bc(9.0, &s), 1.0);
        assert_eq!(psi_bc(26.0, &s), 1.0);
        assert_eq!(psi_bc(58.0, &s), 0.0);
        assert_eq!(psi_bc(100.0, &s), 0.0);
        assert_eq!(s.flat_end(), 26.0);
        assert_eq!(s.support_end(), 58.0);
        assert!(FilterSpec::new(0.125, 0, 4).is_err());
    }

    #[test]
    fn monotone_on_fine_grid() {
        for &r in &[0.01, 0.125, 0.2] {
            let n = 10_000;
            let mut prev = psi(0.0, r).unwrap();
            for i in 1..=n {
                let v = psi(i as f64 / n as f64, r).unwrap();
                assert!(v <= prev);
                prev = v;
            }
        }
    }

    /// Centered differences of orders 1..=4 at step `h` around `t`.
    pub(crate) fn centered_differences(t: f64, r: f64, h: f64) -> [f64; 4] {
        let f = |x: f64| psi_unchecked(x, r);
        let (m2, m1, z, p1, p2) = (f(t - 2.0 * h), f(t - h), f(t), f(t + h), f(t + 2.0 * h));
        [
            (p1 - m1) / (2.0 * h),
            (p1 - 2.0 * z + m1) / (h * h),
            (p2 - 2.0 * p1 + 2.0 * m1 - m2) / (2.0 * h.powi(3)),
            (p2 - 4.0 * p1 + 6.0 * z - 4.0 * m1 + m2) / h.powi(4),
        ]
    }

    #[test]
    fn low_order_differences_vanish_at_breakpoints() {
        let r = DEFAULT_R;
        for t in [2.0 * r, 1.0 - 2.0 * r] {
            let d = centered_differences(t, r, 1e-2);
            assert!(d[0].abs() <= 1e-10 && d[1].abs() <= 1e-10, "t={t} {d:?}");
        }
    }

    #[test]
    fn high_order_differences_vanish_at_breakpoints() {
        let r = DEFAULT_R;
        for t in [2.0 * r, 1.0 - 2.0 * r] {
            let d = centered_differences(t, r, 1e-2);
            assert!(d[2].abs() <= 1e-10 && d[3].abs() <= 1e-10, "t={t} {d:?}");
        }
    }

    #[test]
    fn differences_shrink_with_step() {
        let r = DEFAULT_R;
        for t in [2.0 * r, 1.0 - 2.0 * r] {
            let d = centered_differences(t, r, 5e-3);
            assert!(d.iter().all(|v| v.abs() <= 1e-10), "t={t} {d:?}");
        }
    }

    #[test]
    fn partition_symmetry() {
        for i in 0..=1000 {
            let t = i as f64 / 1000.0;
            let s = psi(t, 0.125).unwrap() + psi(1.0 - t, 0.125).unwrap();
            assert!((s - 1.0).abs() <= 1e-14);
        }
    }
}
