//! Hankel-type kernels and equatorial spherical harmonics.
//!
//! Kernels are evaluated in scaled form `f~(z) = f(z) exp(-i z)`. Higher
//! orders come from upward three-term recurrence, which is stable because
//! `H^(1)` is the dominant solution.

mod cylindrical;
mod ylm;

use crate::error::{domain, Error, Result};
use num_complex::Complex64 as C;
use serde::{Deserialize, Serialize};
use std::fmt;

pub use ylm::ylm_equator;

/// Largest supported order.
pub const L_MAX: u32 = 512;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum KernelFamily {
    /// Cylindrical Hankel functions `H_l^(1)`.
    #[serde(rename = "hankel")]
    Cylindrical,
    /// Spherical Hankel functions `h_l^(1)`.
    #[serde(rename = "spherical")]
    Spherical,
}

impl KernelFamily {
    /// Power-law decay exponent of `|f(x)|` for large real `x`.
    pub fn decay_exponent(self) -> f64 {
        match self {
            KernelFamily::Cylindrical => 0.5,
            KernelFamily::Spherical => 1.0,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            KernelFamily::Cylindrical => "hankel",
            KernelFamily::Spherical => "spherical",
        }
    }

    /// Effective Bessel order entering the turning point `z = nu`.
    pub(crate) fn effective_order(self, l: u32) -> f64 {
        match self {
            KernelFamily::Cylindrical => l as f64,
            KernelFamily::Spherical => l as f64 + 0.5,
        }
    }

    /// Scaled orders 0 and 1.
    pub(crate) fn base_scaled(self, z: C) -> (C, C) {
        match self {
            KernelFamily::Cylindrical => cylindrical::h01_scaled(z),
            KernelFamily::Spherical => {
                let inv = 1.0 / z;
                (-C::i() * inv, -inv * (1.0 + C::i() * inv))
            }
        }
    }

    /// Fills `out[0..=l_max]` with the scaled kernel of every order.
    pub fn eval_scaled_seq(self, l_max: u32, z: C, out: &mut Vec<C>) -> Result<()> {
        check_arg(l_max, z)?;
        out.clear();
        let (h0, h1) = self.base_scaled(z);
        out.push(h0);
        if l_max >= 1 {
            out.push(h1);
        }
        let inv = 1.0 / z;
        let (mut a, mut b) = (h0, h1);
        for l in 1..l_max {
            let next = self.recurrence_coeff(l) * inv * b - a;
            out.push(next);
            a = b;
            b = next;
        }
        if !out[l_max as usize].is_finite() {
            return Err(Error::Overflow(format!("order {l_max} at z = {z}")));
        }
        Ok(())
    }

    /// Coefficient `c_l` in `f_{l+1} = (c_l / z) f_l - f_{l-1}`.
    #[inline]
    pub(crate) fn recurrence_coeff(self, l: u32) -> f64 {
        match self {
            KernelFamily::Cylindrical => 2.0 * l as f64,
            KernelFamily::Spherical => 2.0 * l as f64 + 1.0,
        }
    }
}

impl fmt::Display for KernelFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for KernelFamily {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "hankel" | "cylindrical" => Ok(KernelFamily::Cylindrical),
            "spherical" => Ok(KernelFamily::Spherical),
            other => Err(domain(format!("unknown kernel family '{other}'"))),
        }
    }
}

/// A kernel family together with one order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Kernel {
    pub family: KernelFamily,
    pub order: u32,
}

impl Kernel {
    pub fn new(family: KernelFamily, order: u32) -> Result<Self> {
        if order > L_MAX {
            return Err(domain(format!("order {order} exceeds {L_MAX}")));
        }
        Ok(Kernel { family, order })
    }

    pub fn hankel(order: u32) -> Result<Self> {
        Kernel::new(KernelFamily::Cylindrical, order)
    }

    pub fn spherical(order: u32) -> Result<Self> {
        Kernel::new(KernelFamily::Spherical, order)
    }

    pub fn decay_exponent(&self) -> f64 {
        self.family.decay_exponent()
    }

    /// `f(z) exp(-i z)`.
    pub fn eval_scaled(&self, z: C) -> Result<C> {
        let mut buf = Vec::with_capacity(self.order as usize + 1);
        self.family.eval_scaled_seq(self.order, z, &mut buf)?;
        Ok(buf[self.order as usize])
    }

    /// `f(z)` itself; fails with `Overflow` when `exp(i z)` is not representable.
    pub fn eval(&self, z: C) -> Result<C> {
        let s = self.eval_scaled(z)?;
        let v = s * (C::i() * z).exp();
        if !v.is_finite() {
            return Err(Error::Overflow(format!("exp(i z) at z = {z}")));
        }
        Ok(v)
    }
}

fn check_arg(l_max: u32, z: C) -> Result<()> {
    if l_max > L_MAX {
        return Err(domain(format!("order {l_max} exceeds {L_MAX}")));
    }
    if !z.is_finite() || z.norm() == 0.0 {
        return Err(domain(format!("argument {z} must be finite and nonzero")));
    }
    if z.im == 0.0 && z.re < 0.0 {
        return Err(domain(format!("argument {z} lies on the branch cut")));
    }
    Ok(())
}

pub fn hankel1_scaled(l: u32, z: C) -> Result<C> {
    Kernel::hankel(l)?.eval_scaled(z)
}

pub fn hankel1(l: u32, z: C) -> Result<C> {
    Kernel::hankel(l)?.eval(z)
}

pub fn sph_hankel1_scaled(l: u32, z: C) -> Result<C> {
    Kernel::spherical(l)?.eval_scaled(z)
}

pub fn sph_hankel1(l: u32, z: C) -> Result<C> {
    Kernel::spherical(l)?.eval(z)
}

/// Bessel functions `(J_0, J_1, Y_0, Y_1)` from the ascending series.
/// Accurate for moderate `|z|`; used as an independent cross-check.
pub fn bessel01_series(z: C) -> (C, C, C, C) {
    cylindrical::bessel_series(z)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    // Reference values from mpmath at 30 significant digits.
    const H_REF: &[(u32, f64, f64, f64, f64)] = &[
        // (l, Re z, Im z, Re H_l(z), Im H_l(z))
        (0, 1.0, 0.0, 0.765_197_686_557_966_6, 0.088_256_964_215_676_96),
        (1, 1.0, 0.0, 0.440_050_585_744_933_5, -0.781_212_821_300_288_7),
    ];

    #[test]
    fn hankel_at_one() {
        for &(l, x, y, re, im) in H_REF {
            let v = hankel1(l, C::new(x, y)).unwrap();
            assert_relative_eq!(v.re, re, max_relative = 1e-13);
            assert_relative_eq!(v.im, im, max_relative = 1e-13);
        }
    }

    #[test]
    fn spherical_closed_forms() {
        let v = sph_hankel1(1, C::new(1.0, 0.0)).unwrap();
        let expect = -C::new(1.0_f64.cos(), 1.0_f64.sin()) * C::new(1.0, 1.0);
        assert!((v - expect).norm() < 1e-15);
        let v0 = sph_hankel1_scaled(0, C::new(2.0, 0.0)).unwrap();
        assert!((v0 - C::new(0.0, -0.5)).norm() < 1e-16);
    }

    #[test]
    fn rejects_bad_arguments() {
        assert!(matches!(hankel1(0, C::new(0.0, 0.0)), Err(Error::Domain(_))));
        assert!(matches!(hankel1(0, C::new(-1.0, 0.0)), Err(Error::Domain(_))));
        assert!(matches!(hankel1(L_MAX + 1, C::new(1.0, 0.0)), Err(Error::Domain(_))));
        assert!(matches!(hankel1(0, C::new(1.0, -800.0)), Err(Error::Overflow(_))));
        assert!(matches!(hankel1_scaled(500, C::new(1e-3, 0.0)), Err(Error::Overflow(_))));
    }

    #[test]
    fn scaled_is_finite_far_down_the_ray() {
        let v = hankel1_scaled(3, C::new(8.0, -1e4)).unwrap();
        assert!(v.is_finite() && v.norm() > 0.0);
    }
}
