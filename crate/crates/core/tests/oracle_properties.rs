use latticesum::oracle::*;
use latticesum::*;
use num_complex::Complex64 as C;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

#[test]
fn oracle_agrees_with_engine_at_random_points() {
    let cfg = SolverConfig::default();
    let spec = DissipationSpec::default();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0002);
    let mut done = 0;
    while done < 50 {
        let family = if rng.gen::<bool>() { KernelFamily::Spherical } else { KernelFamily::Cylindrical };
        let k = rng.gen_range(0.3..12.0);
        let d = rng.gen_range(0.5..2.0);
        let alpha = rng.gen_range(-PI / d..PI / d);
        let p = GratingParams::new(k, d, alpha, Kernel::new(family, 0).unwrap()).unwrap();
        if wood_distance(&p) < 0.03 {
            continue;
        }
        let fast = lattice_sum_batch(3, &p, &cfg).unwrap();
        let slow = dissipation_limit_orders(3, &p, &spec).unwrap();
        for (l, (f, s)) in fast.iter().zip(&slow).enumerate() {
            let err = (f.value - s).norm();
            assert!(err <= 1e-7 * (1.0 + s.norm()), "{family} k={k} d={d} alpha={alpha} l={l} err={err:e}");
        }
        done += 1;
    }
}

#[test]
fn shifted_ladders_agree() {
    let spec = DissipationSpec { levels: 6, ..DissipationSpec::default() };
    for (family, k, alpha) in [(KernelFamily::Cylindrical, 1.0, 0.4), (KernelFamily::Spherical, 2.5, 0.0)] {
        let p = GratingParams::new(k, 1.0, alpha, Kernel::new(family, 0).unwrap()).unwrap();
        let samples: Vec<(f64, C)> = spec
            .ladder()
            .into_iter()
            .map(|e| (e, damped_sum_1d(&p, Combination::Mirrored, e, &spec).unwrap()))
            .collect();
        let coarse = richardson_limit(&samples[..5], 4).unwrap();
        let fine = richardson_limit(&samples[1..], 4).unwrap();
        assert!((coarse - fine).norm() < 1e-9, "{family} k={k}: {:e}", (coarse - fine).norm());
    }
}

#[test]
fn richardson_is_exact_on_polynomials() {
    let poly = |e: f64| C::new(2.0 - 3.0 * e + 0.5 * e * e * e, e * e - 1.0);
    let samples: Vec<(f64, C)> = (0..5).map(|j| 0.1 / 2f64.powi(j)).map(|e| (e, poly(e))).collect();
    let v = richardson_limit(&samples, 4).unwrap();
    assert!((v - C::new(2.0, -1.0)).norm() < 1e-13);
    assert!(richardson_limit(&samples[..3], 4).is_err());
}

#[test]
fn damped_sum_is_the_log_for_spherical_l0() {
    let p = GratingParams::new(1.0, 1.0, 0.4, Kernel::spherical(0).unwrap()).unwrap();
    let spec = DissipationSpec::default();
    for eps in [0.1, 0.01] {
        let got = damped_sum_1d(&p, Combination::OneSided, eps, &spec).unwrap();
        let want = spherical_l0_closed_form(C::new(1.0, eps), 1.0, 0.4);
        assert!((got - want).norm() < 1e-12, "eps={eps}");
    }
}

#[test]
fn two_dimensional_oracle_swaps_bloch_phases() {
    let spec = DissipationSpec::two_dimensional();
    let a = dissipation_limit_2d(1.0, 0.4, 0.3, &spec).unwrap();
    let b = dissipation_limit_2d(1.0, 0.3, 0.4, &spec).unwrap();
    assert!((a - b).norm() < 1e-9 * (1.0 + a.norm()));
}
