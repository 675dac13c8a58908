//! Curated geometries shared by the tests, the acceptance suite and the
//! `example` command.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::geometry::{Color, ColoredHyperlink, Hyperlink, PlLoop, PlanarSurface, Point4, SurfaceComponent};
use crate::math::{cos, sin, sqrt};
use crate::predicates::Vec2;
use crate::representation::Spin;

/// Names accepted by [`by_name`].
pub const NAMES: [&str; 5] = [
    "two-circles",
    "hopf-pair",
    "one-piercing",
    "cancelling-piercings",
    "two-loop-colored",
];

/// Inputs of a named example. Absent parts are `None`.
#[derive(Debug, Clone, PartialEq)]
pub struct Example {
    pub hyperlink: Option<Hyperlink>,
    pub matter: Option<ColoredHyperlink>,
    pub geometric: Option<Hyperlink>,
    pub surface: Option<PlanarSurface>,
}

pub fn by_name(name: &str) -> Option<Example> {
    let none = Example {
        hyperlink: None,
        matter: None,
        geometric: None,
        surface: None,
    };
    Some(match name {
        "two-circles" => Example {
            hyperlink: Some(two_circles()),
            ..none
        },
        "hopf-pair" => {
            let h = hopf_pair();
            let (m, g) = hopf_matter(Color::new(Spin::HALF, Spin::HALF));
            Example {
                hyperlink: Some(h),
                matter: Some(m),
                geometric: Some(g),
                surface: None,
            }
        }
        "one-piercing" => {
            let (m, s) = one_piercing();
            Example {
                matter: Some(m),
                geometric: Some(Hyperlink::empty()),
                surface: Some(s),
                ..none
            }
        }
        "cancelling-piercings" => {
            let (m, s) = cancelling_piercings();
            Example {
                matter: Some(m),
                geometric: Some(Hyperlink::empty()),
                surface: Some(s),
                ..none
            }
        }
        "two-loop-colored" => {
            let (m, g, s) = two_loop_colored();
            Example {
                matter: Some(m),
                geometric: Some(g),
                surface: Some(s),
                ..none
            }
        }
        _ => return None,
    })
}

fn rotation(ax: f64, ay: f64, az: f64) -> [[f64; 3]; 3] {
    let (cx, sx) = (cos(ax), sin(ax));
    let (cy, sy) = (cos(ay), sin(ay));
    let (cz, sz) = (cos(az), sin(az));
    let rx = [[1.0, 0.0, 0.0], [0.0, cx, -sx], [0.0, sx, cx]];
    let ry = [[cy, 0.0, sy], [0.0, 1.0, 0.0], [-sy, 0.0, cy]];
    let rz = [[cz, -sz, 0.0], [sz, cz, 0.0], [0.0, 0.0, 1.0]];
    matmul3(&rz, &matmul3(&ry, &rx))
}

fn matmul3(a: &[[f64; 3]; 3], b: &[[f64; 3]; 3]) -> [[f64; 3]; 3] {
    let mut c = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            c[i][j] = (0..3).map(|k| a[i][k] * b[k][j]).sum();
        }
    }
    c
}

/// Rotate the spatial part of every vertex about the origin by the Euler
/// angles `(ax, ay, az)` (applied about x1, then x2, then x3).
pub fn rotate_spatial(l: &PlLoop, angles: (f64, f64, f64)) -> PlLoop {
    let r = rotation(angles.0, angles.1, angles.2);
    l.map_vertices(|p| {
        let v = p.spatial();
        let w: Vec<f64> = (0..3).map(|i| (0..3).map(|k| r[i][k] * v[k]).sum()).collect();
        Point4::new(p.x0, w[0], w[1], w[2])
    })
    .expect("rotation preserves a valid loop")
}

/// Translate every vertex by `d`.
pub fn translate(l: &PlLoop, d: [f64; 4]) -> PlLoop {
    l.map_vertices(|p| Point4::new(p.x0 + d[0], p.x1 + d[1], p.x2 + d[2], p.x3 + d[3]))
        .expect("translation preserves a valid loop")
}

fn half_offset_angle(k: usize, n: usize) -> f64 {
    2.0 * PI * (k as f64 + 0.5) / n as f64
}

/// Circle of radius `r` about the origin in the `x1–x2` plane at height
/// `x3` and time `x0`, counterclockwise, `n` vertices placed off the axes.
pub fn circle_x1x2(r: f64, x3: f64, x0: f64, n: usize) -> PlLoop {
    PlLoop::new(
        (0..n)
            .map(|k| {
                let a = half_offset_angle(k, n);
                Point4::new(x0, r * cos(a), r * sin(a), x3)
            })
            .collect(),
    )
    .expect("circle")
}

/// Circle of radius `r` centered at `(0, c2, 0)` in the `x2–x3` plane at
/// time `x0`.
pub fn circle_x2x3(r: f64, c2: f64, x0: f64, n: usize) -> PlLoop {
    PlLoop::new(
        (0..n)
            .map(|k| {
                let a = half_offset_angle(k, n);
                Point4::new(x0, 0.0, c2 + r * cos(a), r * sin(a))
            })
            .collect(),
    )
    .expect("circle")
}

fn regular_ring(r: f64, n: usize) -> Vec<Vec2> {
    (0..n)
        .map(|k| {
            let a = 2.0 * PI * k as f64 / n as f64;
            [r * cos(a), r * sin(a)]
        })
        .collect()
}

/// Regular `n`-gon of circumradius `r` centered at the origin of the surface
/// plane, normal along `+x1`.
pub fn disk_surface(r: f64, n: usize) -> PlanarSurface {
    PlanarSurface::new(vec![SurfaceComponent::new(regular_ring(r, n), vec![])], 1).expect("disk")
}

pub fn annulus_surface(outer: f64, hole: f64, n: usize) -> PlanarSurface {
    let mut h = regular_ring(hole, n);
    h.reverse();
    PlanarSurface::new(vec![SurfaceComponent::new(regular_ring(outer, n), vec![h])], 1).expect("annulus")
}

/// The square `[-h, h]²`.
pub fn square_surface(h: f64) -> PlanarSurface {
    PlanarSurface::new(
        vec![SurfaceComponent::new(vec![[-h, -h], [h, -h], [h, h], [-h, h]], vec![])],
        1,
    )
    .expect("square")
}

/// Two unit circles at time 0, spatially separated by distance 5.
pub fn two_circles() -> Hyperlink {
    let a = circle_x1x2(1.0, 0.0, 0.0, 48);
    let d = 5.0 / sqrt(3.0);
    let b = translate(&rotate_spatial(&a, (0.4, 0.3, 0.2)), [0.0, d, d, d]);
    Hyperlink::with_labels(vec![a, b], vec![Some("a".into()), Some("b".into())]).expect("labels")
}

const HOPF_TILT: (f64, f64, f64) = (0.61, 0.47, 0.29);
pub const HOPF_TIME_OFFSET: f64 = 0.35;

/// Two round unit circles, each through the other's center, at times 0 and
/// 0.35, rotated to a generic position.
pub fn hopf_pair() -> Hyperlink {
    let a = rotate_spatial(&circle_x1x2(1.0, 0.0, 0.0, 64), HOPF_TILT);
    let b = rotate_spatial(&circle_x2x3(1.0, 1.0, HOPF_TIME_OFFSET, 64), HOPF_TILT);
    Hyperlink::with_labels(vec![a, b], vec![Some("a".into()), Some("b".into())]).expect("labels")
}

/// The first Hopf circle as the matter loop with `color`, the second as the
/// geometric hyperlink.
pub fn hopf_matter(color: Color) -> (ColoredHyperlink, Hyperlink) {
    let h = hopf_pair();
    let m = Hyperlink::with_labels(vec![h.loops()[0].clone()], vec![Some("a".into())]).expect("labels");
    let g = Hyperlink::with_labels(vec![h.loops()[1].clone()], vec![Some("b".into())]).expect("labels");
    (ColoredHyperlink::new(m, vec![color]).expect("colors"), g)
}

fn rectangle(x2: (f64, f64), x3: [f64; 4], x0: f64) -> PlLoop {
    PlLoop::new(vec![
        Point4::new(x0, -1.0, x2.0, x3[0]),
        Point4::new(x0, 1.0, x2.0, x3[1]),
        Point4::new(x0, 1.0, x2.1, x3[2]),
        Point4::new(x0, -1.0, x2.1, x3[3]),
    ])
    .expect("rectangle")
}

/// A rectangle at time -0.5 crossing the surface plane once inside a disk of
/// radius 2 and once outside it; colored `(1/2, 1/2)`.
pub fn one_piercing() -> (ColoredHyperlink, PlanarSurface) {
    let l = rectangle((0.0, 5.0), [0.0; 4], -0.5);
    let m = Hyperlink::with_labels(vec![l], vec![Some("m".into())]).expect("labels");
    (
        ColoredHyperlink::new(m, vec![Color::new(Spin::HALF, Spin::HALF)]).expect("colors"),
        disk_surface(2.0, 64),
    )
}

/// Unit circle at time -0.25 crossing a disk of radius 2 twice, in opposite
/// directions.
pub fn cancelling_piercings() -> (ColoredHyperlink, PlanarSurface) {
    let l = circle_x1x2(1.0, 0.0, -0.25, 64);
    let m = Hyperlink::with_labels(vec![l], vec![Some("m".into())]).expect("labels");
    (
        ColoredHyperlink::new(m, vec![Color::new(Spin::HALF, Spin::HALF)]).expect("colors"),
        disk_surface(2.0, 64),
    )
}

/// The cancelling circle against an annulus whose hole contains it.
pub fn annulus_miss() -> (ColoredHyperlink, PlanarSurface) {
    let (m, _) = cancelling_piercings();
    (m, annulus_surface(4.0, 3.0, 64))
}

/// Two differently colored rectangles piercing a disk of radius 3 once each,
/// and a small geometric circle looped around the first one.
pub fn two_loop_colored() -> (ColoredHyperlink, Hyperlink, PlanarSurface) {
    two_loop_with_colors([
        Color::new(Spin::HALF, Spin::HALF),
        Color::new(Spin::ONE, Spin::HALF),
    ])
}

pub fn two_loop_with_colors(colors: [Color; 2]) -> (ColoredHyperlink, Hyperlink, PlanarSurface) {
    let l1 = rectangle((-1.25, -5.0), [0.0, 0.04, -0.06, 0.03], -0.4);
    let l2 = rectangle((1.25, 5.0), [0.3, 0.27, 0.36, 0.31], 0.3);
    let m = Hyperlink::with_labels(vec![l1, l2], vec![Some("m1".into()), Some("m2".into())]).expect("labels");
    // circle in the x1–x3 plane around the edge x1 = 1 of the first rectangle
    let g = PlLoop::new(
        (0..48)
            .map(|k| {
                let a = half_offset_angle(k, 48);
                Point4::new(0.25, 0.5 * cos(a), 0.0, 0.5 * sin(a))
            })
            .collect(),
    )
    .expect("circle");
    let g = translate(&rotate_spatial(&g, (0.0, 0.13, 0.21)), [0.0, 1.0, -3.0, 0.0]);
    let g = Hyperlink::with_labels(vec![g], vec![Some("g".into())]).expect("labels");
    (
        ColoredHyperlink::new(m, colors.to_vec()).expect("colors"),
        g,
        disk_surface(3.0, 64),
    )
}
