mod oracles;

use hyperarea_core::kernels::{gaussian_inner_2d, kernel_inner_1d_signed, kernel_inner_1d_signed_raw, planar_delta};
use rand::{Rng, SeedableRng};
use std::f64::consts::PI;

#[test]
fn signed_kernel_matches_quadrature() {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
    for _ in 0..40 {
        let kappa = rng.gen_range(1.0..64.0);
        let x = rng.gen_range(-1.0..1.0);
        let y = x + rng.gen_range(-4.0..4.0) / kappa;
        let raw = oracles::signed_inner_oracle(kappa, x, y);
        assert!((kernel_inner_1d_signed_raw(kappa, x, y) - raw).abs() < 1e-8, "κ={kappa}");
        let norm = kappa / (2.0 * PI).sqrt() * raw;
        assert!((kernel_inner_1d_signed(kappa, x, y) - norm).abs() < 1e-8, "κ={kappa}");
    }
}

#[test]
fn signed_kernel_fixed_point() {
    let raw = oracles::signed_inner_oracle(8.0, 0.0, 0.5);
    let norm = 8.0 / (2.0 * PI).sqrt() * raw;
    assert!((kernel_inner_1d_signed(8.0, 0.0, 0.5) - norm).abs() < 1e-8);
}

#[test]
fn gaussian_kernel_matches_quadrature() {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(12);
    for _ in 0..40 {
        let kappa = rng.gen_range(1.0..64.0);
        let p = [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)];
        let q = [p[0] + rng.gen_range(-4.0..4.0) / kappa, p[1] + rng.gen_range(-4.0..4.0) / kappa];
        let o = oracles::gaussian_2d_oracle(kappa, p, q);
        assert!((gaussian_inner_2d(kappa, p, q) - o).abs() < 1e-8, "κ={kappa}");
    }
    assert!((oracles::gaussian_2d_oracle(5.0, [0.1, 0.2], [0.1, 0.2]) - 1.0).abs() < 1e-9);
}

#[test]
fn planar_delta_has_unit_mass() {
    let kappa = 6.0;
    let l = 14.0 / kappa;
    let inner = |x: f64| oracles::adaptive_simpson(&|y: f64| planar_delta(kappa, [0.3, -0.2], [x, y]), -0.2 - l, -0.2 + l, 1e-12);
    let m = oracles::adaptive_simpson(&inner, 0.3 - l, 0.3 + l, 1e-11);
    assert!((m - 1.0).abs() < 1e-9);
}
