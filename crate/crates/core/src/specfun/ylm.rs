use crate::error::{domain, Result};
use std::f64::consts::PI;

/// Normalised spherical harmonic `Y_l^j(pi/2, 0)` with the Condon-Shortley phase.
///
/// Equals `sqrt((2l+1)/4pi) sqrt((l-|j|)!/(l+|j|)!) P_l^{|j|}(0)` and is zero
/// whenever `l + |j|` is odd.
pub fn ylm_equator(l: u32, j: i32) -> Result<f64> {
    let m = j.unsigned_abs();
    if m > l {
        return Err(domain(format!("|j| = {m} exceeds l = {l}")));
    }
    if (l + m) % 2 == 1 {
        return Ok(0.0);
    }
    // Sectoral start: Ybar_m^m(0) = (-1)^m sqrt((2m+1)/4pi) sqrt(prod (2i-1)/(2i))
    let mut prod = 1.0;
    for i in 1..=m {
        let fi = i as f64;
        prod *= (2.0 * fi - 1.0) / (2.0 * fi);
    }
    let sign = if m.is_multiple_of(2) { 1.0 } else { -1.0 };
    let mf = m as f64;
    let mut y = sign * ((2.0 * mf + 1.0) / (4.0 * PI)).sqrt() * prod.sqrt();
    // Two-step recurrence at x = 0 along fixed m.
    let mut deg = m + 2;
    while deg <= l {
        let lf = deg as f64;
        let num = ((lf - 1.0) * (lf - 1.0) - mf * mf) * (2.0 * lf + 1.0);
        let den = (lf * lf - mf * mf) * (2.0 * lf - 3.0);
        y *= -(num / den).sqrt();
        deg += 2;
    }
    Ok(y)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// `P_l^m(0)` from Rodrigues' formula: differentiate (x^2-1)^l exactly
    /// as an integer polynomial, then apply the Condon-Shortley factor.
    fn legendre_at_zero(l: u32, m: u32) -> f64 {
        // coefficients of (x^2 - 1)^l in powers of x
        let n = 2 * l as usize;
        let mut c = vec![0.0f64; n + 1];
        for i in 0..=l as usize {
            let binom = (0..i).fold(1.0, |acc, t| acc * (l as f64 - t as f64) / (t as f64 + 1.0));
            let s = if (l as usize - i).is_multiple_of(2) { 1.0 } else { -1.0 };
            c[2 * i] = s * binom;
        }
        // (l+m)-th derivative evaluated at 0 picks out the x^{l+m} coefficient.
        let k = (l + m) as usize;
        let fact: f64 = (1..=k).map(|v| v as f64).product();
        let deriv0 = c[k] * fact;
        let lfact: f64 = (1..=l).map(|v| v as f64).product();
        let cs = if m.is_multiple_of(2) { 1.0 } else { -1.0 };
        cs * deriv0 / (2f64.powi(l as i32) * lfact)
    }

    fn normalised(l: u32, m: u32) -> f64 {
        let ratio: f64 = ((l - m + 1)..=(l + m)).map(|v| 1.0 / v as f64).product();
        ((2 * l + 1) as f64 / (4.0 * PI)).sqrt() * ratio.sqrt() * legendre_at_zero(l, m)
    }

    #[test]
    fn low_degrees() {
        assert!((ylm_equator(0, 0).unwrap() - 1.0 / (4.0 * PI).sqrt()).abs() < 1e-16);
        assert_eq!(ylm_equator(1, 0).unwrap(), 0.0);
        let want = (5.0 / (4.0 * PI)).sqrt() * -0.5;
        assert!((ylm_equator(2, 0).unwrap() - want).abs() < 1e-15);
    }

    #[test]
    fn matches_rodrigues() {
        for l in 0..=16u32 {
            for m in 0..=l {
                let got = ylm_equator(l, m as i32).unwrap();
                let want = normalised(l, m);
                assert!((got - want).abs() < 1e-12, "l={l} m={m} got={got} want={want}");
                assert_eq!(got, ylm_equator(l, -(m as i32)).unwrap());
            }
        }
    }

    #[test]
    fn parity_zeros() {
        for l in 0..=50u32 {
            for j in -(l as i32)..=(l as i32) {
                let v = ylm_equator(l, j).unwrap();
                if (l + j.unsigned_abs()) % 2 == 1 {
                    assert_eq!(v, 0.0);
                } else {
                    assert!(v != 0.0);
                }
            }
        }
        assert!(ylm_equator(2, 3).is_err());
    }
}
