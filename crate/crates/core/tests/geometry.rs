use hyperarea_core::fixtures;
use hyperarea_core::geometry::{lift, project, validate_timelike, Hyperlink, PlLoop, Point4, ViolationKind};
use hyperarea_core::predicates::segment_segment_3d;
use proptest::prelude::*;

#[test]
fn two_circles_valid() {
    let h = fixtures::two_circles();
    assert!(validate_timelike(&h, h.default_eps()).valid());
    assert!(validate_timelike(&fixtures::hopf_pair(), 1e-9).valid());
}

#[test]
fn time_shifted_copy_invalid_everywhere() {
    let a = fixtures::circle_x1x2(1.0, 0.0, 0.0, 24);
    let b = a.map_vertices(|p| Point4::new(p.x0 + 1.0, p.x1, p.x2, p.x3)).unwrap();
    let r = validate_timelike(&Hyperlink::new(vec![a, b]), 1e-9);
    assert!(!r.valid());
    let spatial = r
        .violations
        .iter()
        .filter(|v| v.kind == ViolationKind::SpatialCoincidence && v.loops == (0, 1))
        .count();
    assert!(spatial >= 24);
}

#[test]
fn tangent_circles_have_one_witness() {
    // Two squares touching at exactly one point (1, 0, 0), at different times.
    let a = PlLoop::new(vec![
        Point4::new(0.0, 1.0, 0.0, 0.0),
        Point4::new(0.0, 0.0, 1.0, 0.0),
        Point4::new(0.0, -1.0, 0.0, 0.0),
        Point4::new(0.0, 0.0, -1.0, 0.0),
    ])
    .unwrap();
    let b = PlLoop::new(vec![
        Point4::new(0.5, 1.0, 0.0, 0.0),
        Point4::new(0.5, 2.0, 0.0, 1.0),
        Point4::new(0.5, 3.0, 0.0, 0.0),
        Point4::new(0.5, 2.0, 0.0, -1.0),
    ])
    .unwrap();
    let h = Hyperlink::new(vec![a.clone(), b.clone()]);
    let r = validate_timelike(&h, h.default_eps());
    let hits: Vec<_> = r.violations.iter().filter(|v| v.kind == ViolationKind::SpatialCoincidence).collect();
    assert_eq!(hits.len(), 1, "{:?}", r.violations);
    // Oracle: minimum over all segment pairs of the exact 3-D distance.
    let mut best = f64::INFINITY;
    for i in 0..4 {
        for j in 0..4 {
            let (p0, p1) = a.segment(i);
            let (q0, q1) = b.segment(j);
            best = best.min(segment_segment_3d(p0.spatial(), p1.spatial(), q0.spatial(), q1.spatial()).2);
        }
    }
    assert_eq!(best, 0.0);
    let w = hits[0].witness.0;
    assert!((w.x1 - 1.0).abs() < 1e-12 && w.x2.abs() < 1e-12 && w.x3.abs() < 1e-12);
}

#[test]
fn projection_drops_coordinate() {
    let h = Hyperlink::new(vec![fixtures::circle_x1x2(1.0, 0.0, 0.7, 12)]);
    let p0 = project(&h, 0);
    for (v, q) in h.loops()[0].vertices().iter().zip(&p0[0]) {
        assert_eq!(*q, v.spatial());
    }
    let planar = Hyperlink::new(vec![fixtures::circle_x2x3(1.0, 0.0, 0.0, 12)]);
    let p1 = project(&planar, 1);
    for (v, q) in planar.loops()[0].vertices().iter().zip(&p1[0]) {
        assert_eq!(*q, [v.x0, v.x2, v.x3]);
    }
}

fn arb_loop() -> impl Strategy<Value = PlLoop> {
    prop::collection::vec(prop::array::uniform4(-5.0f64..5.0), 3..12)
        .prop_filter_map("valid loop", |vs| PlLoop::new(vs.into_iter().map(Point4::from_array).collect()).ok())
}

proptest! {
    #[test]
    fn project_lift_round_trip(l in arb_loop(), axis in 0usize..4) {
        let h = Hyperlink::new(vec![l.clone()]);
        let p = project(&h, axis);
        let dropped: Vec<f64> = l.vertices().iter().map(|v| v.coord(axis)).collect();
        prop_assert_eq!(lift(&p[0], axis, &dropped), l.vertices().to_vec());
    }

    #[test]
    fn loop_point_lipschitz(l in arb_loop(), s in 0.0f64..1.0, t in 0.0f64..1.0) {
        let d = l.point(s).distance(l.point(t));
        prop_assert!(d <= l.length() * (s - t).abs() * (1.0 + 1e-9) + 1e-12);
    }

    #[test]
    fn rotation_keeps_verdict(k in 0usize..64, dx in -3.0f64..3.0) {
        let h = fixtures::hopf_pair();
        let b = h.loops()[1].map_vertices(|p| Point4::new(p.x0, p.x1 + dx, p.x2, p.x3)).unwrap();
        let base = Hyperlink::new(vec![h.loops()[0].clone(), b.clone()]);
        let rot = Hyperlink::new(vec![h.loops()[0].rotated(k), b]);
        prop_assert_eq!(
            validate_timelike(&base, 1e-9).valid(),
            validate_timelike(&rot, 1e-9).valid()
        );
    }
}
