use latticesum::specfun::{bessel01_series, hankel1, hankel1_scaled, sph_hankel1, KernelFamily};
use num_complex::Complex64 as C;
use proptest::prelude::*;

// H_l(z) exp(-iz) from mpmath at 30 digits.
const SCALED: &[(u32, f64, f64, f64, f64)] = &[
    (0, 1.0, 0.0, 0.487_703_749_086_956_3, -0.596_206_209_606_004_1),
    (1, 1.0, 0.0, -0.419_607_575_907_496_1, -0.792_380_888_474_381_9),
    (0, 0.3, 0.2, 0.412_030_409_985_375_55, -1.053_823_483_680_592_4),
    (1, 2.5, -1.0, -0.207_652_250_292_309_24, -0.424_939_109_729_490_8),
    (0, 5.0, 0.0, 0.245_467_551_730_485_68, -0.257_816_638_947_182_7),
    (1, 5.0, 3.0, -0.288_888_872_070_998_45, -0.183_388_234_811_744_35),
    (0, 7.5, -7.0, 0.229_387_014_684_579_7, -0.102_291_651_793_796_51),
    (1, 12.0, 0.5, -0.161_547_228_490_756_62, -0.164_868_779_898_093_37),
    (0, 19.9, -2.0, 0.131_625_546_247_547_08, -0.1205622044185311),
    (1, 20.1, 0.0, -0.123_532_576_749_214_33, -0.128_225_032_046_442_53),
    (0, 30.0, -25.0, 0.11572577318892526, -0.054_556_228_284_167_77),
    (1, 100.0, 0.0, -0.056_208_054_122_880_1, -0.056_631_184_743_376_6),
    (2, 3.0, 0.0, -0.503_862_405_464_482_4, 0.090_197_983_390_121_5),
    (5, 8.0, -4.0, 0.100_750_575_669_228_22, -0.105_612_325_332_685_2),
    (10, 8.0, 0.0, -0.905_893_720_542_372_8, 0.071_804_667_757_237_3),
    (30, 80.0, -10.0, -0.007_734_792_458_027_773, 0.044_292_397_146_427_24),
    (119, 8.0, 0.0, -3.825_180_565_693_113e122, 5.625_504_245_119_676e121),
    (3, 10000.0, -5000.0, 0.003_964_187_500_283_46, 0.006_419_213_056_695_247_5),
    (0, 3.9, -0.1, 0.279_478_847_174_543_74, -0.289_993_065_050_374_14),
    (1, 4.1, 0.0, -0.255_340_554_154_555_64, -0.305_580_003_907_465_65),
];

#[test]
fn scaled_hankel_matches_reference_table() {
    for &(l, x, y, re, im) in SCALED {
        let got = hankel1_scaled(l, C::new(x, y)).unwrap();
        let want = C::new(re, im);
        let rel = (got - want).norm() / want.norm();
        assert!(rel < 1e-12, "l={l} z=({x},{y}) rel={rel:e}");
    }
}

#[test]
fn series_reproduces_j0_y0_at_one() {
    let (j0, _, y0, _) = bessel01_series(C::new(1.0, 0.0));
    assert!((j0.re - 0.765_197_686_557_966_6).abs() < 1e-15);
    assert!((y0.re - 0.088_256_964_215_676_96).abs() < 1e-15);
}

#[test]
fn spherical_h1_at_one() {
    let v = sph_hankel1(1, C::new(1.0, 0.0)).unwrap();
    assert!((v - C::new(0.301_168_678_939_756_8, -1.381_773_290_676_036_2)).norm() < 1e-15);
}

#[test]
fn cylindrical_wronskian_below_turning_point() {
    // J_{l+1} Y_l - J_l Y_{l+1} = 2/(pi x)
    for &x in &[1.0, 3.3, 10.0, 47.0, 150.0, 999.0] {
        let mut seq = Vec::new();
        let lmax = (x as u32).min(300);
        KernelFamily::Cylindrical.eval_scaled_seq(lmax + 1, C::new(x, 0.0), &mut seq).unwrap();
        let ph = C::from_polar(1.0, x);
        let h: Vec<C> = seq.iter().map(|v| v * ph).collect();
        for l in 0..=lmax as usize {
            let w = h[l + 1].re * h[l].im - h[l].re * h[l + 1].im;
            let want = 2.0 / (std::f64::consts::PI * x);
            assert!((w - want).abs() <= 1e-11 * want, "x={x} l={l}");
        }
    }
}

#[test]
fn spherical_wronskian_below_turning_point() {
    // j_{l+1} y_l - j_l y_{l+1} = 1/x^2
    for &x in &[1.0, 6.0, 40.0, 300.0] {
        let mut seq = Vec::new();
        let lmax = (x as u32).min(300);
        KernelFamily::Spherical.eval_scaled_seq(lmax + 1, C::new(x, 0.0), &mut seq).unwrap();
        let ph = C::from_polar(1.0, x);
        let h: Vec<C> = seq.iter().map(|v| v * ph).collect();
        for l in 0..=lmax as usize {
            let w = h[l + 1].re * h[l].im - h[l].re * h[l + 1].im;
            assert!((w - 1.0 / (x * x)).abs() <= 1e-11 / (x * x), "x={x} l={l}");
        }
    }
}

/// (-i)^{l+1} (e^{ix}/x) sum_m i^m (l+m)! / (m! (l-m)! (2x)^m)
fn spherical_polynomial(l: u32, x: f64) -> C {
    let mut s = C::new(0.0, 0.0);
    for m in 0..=l {
        let num: f64 = ((l - m + 1)..=(l + m)).map(|v| v as f64).product();
        let den: f64 = (1..=m).map(|v| v as f64).product::<f64>() * (2.0 * x).powi(m as i32);
        s += C::i().powu(m) * (num / den);
    }
    (-C::i()).powu(l + 1) * C::from_polar(1.0 / x, x) * s
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn scaled_times_phase_is_unscaled(l in 0u32..40, x in 1.0f64..200.0, y in -30.0f64..30.0) {
        let z = C::new(x, y);
        let s = hankel1_scaled(l, z).unwrap() * (C::i() * z).exp();
        let u = hankel1(l, z).unwrap();
        prop_assert!((s - u).norm() <= 1e-13 * u.norm());
    }

    #[test]
    fn recurrence_residual(l in 1u32..100, r in 1.0f64..1000.0, th in -1.2f64..1.2) {
        let z = C::from_polar(r, th);
        for family in [KernelFamily::Cylindrical, KernelFamily::Spherical] {
            let mut seq = Vec::new();
            family.eval_scaled_seq(l + 1, z, &mut seq).unwrap();
            let (a, b, c) = (seq[l as usize - 1], seq[l as usize], seq[l as usize + 1]);
            let coeff = match family {
                KernelFamily::Cylindrical => 2.0 * l as f64,
                KernelFamily::Spherical => 2.0 * l as f64 + 1.0,
            };
            let resid = c - (coeff / z * b - a);
            prop_assert!(resid.norm() <= 1e-11 * c.norm().max(b.norm()));
        }
    }

    #[test]
    fn spherical_matches_closed_polynomial(l in 0u32..=10, x in 0.5f64..60.0) {
        let got = sph_hankel1(l, C::new(x, 0.0)).unwrap();
        let want = spherical_polynomial(l, x);
        prop_assert!((got - want).norm() <= 1e-12 * want.norm());
    }
}
