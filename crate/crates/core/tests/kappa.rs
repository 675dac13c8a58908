use hyperarea_core::fixtures;
use hyperarea_core::geometry::{Color, Hyperlink};
use hyperarea_core::kappa::{
    convergence_study, holonomy_factor_finite_kappa, lk_and_abs_finite_kappa, lk_finite_kappa, sk_finite_kappa,
    QuadratureConfig, Side, Target,
};
use hyperarea_core::representation::Spin;
use hyperarea_core::Complex64;

#[test]
fn sk_swap_antisymmetry() {
    let h = fixtures::hopf_pair();
    let (a, b) = (&h.loops()[0], &h.loops()[1]);
    let cfg = QuadratureConfig::with_kappa(32.0);
    let ab = sk_finite_kappa(a, b, &cfg).unwrap().value;
    let ba = sk_finite_kappa(b, a, &cfg).unwrap().value;
    assert!((ab + ba).abs() < 1e-6 * ab.abs(), "{ab} {ba}");
}

#[test]
fn sk_resolution_adequate() {
    let h = fixtures::hopf_pair();
    let (a, b) = (&h.loops()[0], &h.loops()[1]);
    for kappa in [8.0, 16.0, 32.0] {
        let cfg = QuadratureConfig::with_kappa(kappa);
        let base = sk_finite_kappa(a, b, &cfg).unwrap();
        assert!(!base.warning);
        let doubled = QuadratureConfig { base_points: 16, ..cfg };
        let d = sk_finite_kappa(a, b, &doubled).unwrap().value;
        assert!((d - base.value).abs() < 0.01 * base.value.abs());
    }
}

#[test]
fn sk_convergence_is_monotone() {
    let h = fixtures::hopf_pair();
    let target = Target::Sk {
        a: &h.loops()[0],
        b: &h.loops()[1],
    };
    let rows = convergence_study(&target, &[32.0, 8.0, 16.0], &QuadratureConfig::default()).unwrap();
    assert_eq!(rows.iter().map(|r| r.kappa).collect::<Vec<_>>(), vec![8.0, 16.0, 32.0]);
    assert!(rows.windows(2).all(|w| w[1].rel_error < w[0].rel_error));
    assert!(rows[2].rel_error < 0.1);
}

#[test]
fn single_row_schedule() {
    let h = fixtures::two_circles();
    let target = Target::Sk {
        a: &h.loops()[0],
        b: &h.loops()[1],
    };
    let rows = convergence_study(&target, &[16.0], &QuadratureConfig::default()).unwrap();
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0].reference, Complex64::new(0.0, 0.0));
    assert!(rows[0].abs_error < 1e-6);
}

#[test]
fn lk_far_loop_vanishes() {
    let (m, s) = fixtures::one_piercing();
    let far = m.base().loops()[0]
        .map_vertices(|p| hyperarea_core::Point4::new(p.x0, p.x1 + 10.0, p.x2, p.x3))
        .unwrap();
    let e = lk_finite_kappa(&far, &s, &QuadratureConfig::with_kappa(16.0)).unwrap();
    assert_eq!(e.value, 0.0);
}

#[test]
fn lk_single_piercing_converges() {
    let (m, s) = fixtures::one_piercing();
    let l = &m.base().loops()[0];
    let rows = convergence_study(&Target::Lk { l, surface: &s }, &[8.0, 16.0], &QuadratureConfig::default()).unwrap();
    assert!(rows[1].abs_error < rows[0].abs_error);
    assert!(rows[1].rel_error < 1e-3);
    // orientation flips carry through the integral
    let flipped = lk_finite_kappa(l, &s.flipped(), &QuadratureConfig::with_kappa(16.0)).unwrap().value;
    assert!((flipped + rows[1].estimate.re).abs() < 1e-12);
}

#[test]
fn lk_abs_exceeds_signed() {
    let (m, s) = fixtures::cancelling_piercings();
    let (signed, abs) = lk_and_abs_finite_kappa(&m.base().loops()[0], &s, &QuadratureConfig::with_kappa(16.0)).unwrap();
    assert!(signed.value.abs() < 1e-6);
    assert!(abs.value > 1.8 && abs.value < 2.0);
}

#[test]
fn holonomy_trivial_cases() {
    let (m, g) = fixtures::hopf_matter(Color::new(Spin::HALF, Spin::ONE));
    let cfg = QuadratureConfig::with_kappa(8.0);
    let z = holonomy_factor_finite_kappa(0.0, &m, 0, &g, Side::Minus, &cfg).unwrap();
    assert_eq!(z.value, Complex64::new(3.0, 0.0));
    let z = holonomy_factor_finite_kappa(0.4, &m, 0, &Hyperlink::empty(), Side::Plus, &cfg).unwrap();
    assert_eq!(z.value, Complex64::new(2.0, 0.0));
}
