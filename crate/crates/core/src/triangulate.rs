//! Ear-clipping triangulation of polygons with holes.
//!
//! Holes are joined to the outer ring by bridge edges (each hole's
//! rightmost vertex to the nearest mutually visible vertex), then ears are
//! clipped from the resulting weakly simple ring.

use alloc::vec::Vec;

use crate::geometry::{PlanarSurface, SurfaceComponent};
use crate::predicates::{orient2d, point_in_ring, ring_area, segment_contact_2d, SegmentContact, Vec2};

pub type Triangle = [Vec2; 3];

/// Triangles covering `c`, each counterclockwise.
pub fn triangulate_component(c: &SurfaceComponent) -> Vec<Triangle> {
    let mut ring = oriented(&c.outer, true);
    let mut holes: Vec<Vec<Vec2>> = c.holes.iter().map(|h| oriented(h, false)).collect();
    // Rightmost holes first keeps bridges short and non-crossing.
    holes.sort_by(|a, b| max_x(b).partial_cmp(&max_x(a)).unwrap_or(core::cmp::Ordering::Equal));
    for k in 0..holes.len() {
        let (rest_before, rest) = holes.split_at(k + 1);
        let hole = &rest_before[k];
        ring = bridge(&ring, hole, rest);
    }
    clip_ears(ring)
}

pub fn triangulate_surface(s: &PlanarSurface) -> Vec<Triangle> {
    s.components().iter().flat_map(triangulate_component).collect()
}

fn oriented(r: &[Vec2], ccw: bool) -> Vec<Vec2> {
    let mut v = r.to_vec();
    if (ring_area(&v) > 0.0) != ccw {
        v.reverse();
    }
    v
}

fn max_x(r: &[Vec2]) -> f64 {
    r.iter().map(|p| p[0]).fold(f64::NEG_INFINITY, f64::max)
}

fn segment_blocked(a: Vec2, b: Vec2, ring: &[Vec2]) -> bool {
    let n = ring.len();
    (0..n).any(|i| {
        let (p, q) = (ring[i], ring[(i + 1) % n]);
        if p == a || p == b || q == a || q == b {
            return false;
        }
        !matches!(segment_contact_2d(a, b, p, q, 0.0), SegmentContact::Disjoint)
    })
}

/// Merge `hole` into `ring` through a bridge from the hole's rightmost vertex.
fn bridge(ring: &[Vec2], hole: &[Vec2], others: &[Vec<Vec2>]) -> Vec<Vec2> {
    let (hi, m) = hole
        .iter()
        .copied()
        .enumerate()
        .max_by(|a, b| a.1[0].partial_cmp(&b.1[0]).unwrap_or(core::cmp::Ordering::Equal))
        .expect("nonempty hole");
    let mut candidates: Vec<(f64, usize)> = ring
        .iter()
        .enumerate()
        .map(|(i, p)| ((p[0] - m[0]) * (p[0] - m[0]) + (p[1] - m[1]) * (p[1] - m[1]), i))
        .collect();
    candidates.sort_by(|a, b| a.partial_cmp(b).unwrap_or(core::cmp::Ordering::Equal));
    let mut chosen = None;
    for &(_, i) in &candidates {
        let p = ring[i];
        if segment_blocked(m, p, ring) || segment_blocked(m, p, hole) {
            continue;
        }
        if others.iter().any(|o| segment_blocked(m, p, o)) {
            continue;
        }
        let mid = [(m[0] + p[0]) / 2.0, (m[1] + p[1]) / 2.0];
        if !inside_weak_ring(mid, ring) || point_in_ring(mid, hole) {
            continue;
        }
        // The bridge must leave `p` into the interior angle there.
        if !in_cone(ring, i, m) {
            continue;
        }
        chosen = Some(i);
        break;
    }
    let i = chosen.expect("a simple polygon with holes always has a visible bridge vertex");
    let mut out = Vec::with_capacity(ring.len() + hole.len() + 2);
    out.extend_from_slice(&ring[..=i]);
    for k in 0..=hole.len() {
        out.push(hole[(hi + k) % hole.len()]);
    }
    out.push(ring[i]);
    out.extend_from_slice(&ring[i + 1..]);
    out
}

/// Point-in-ring test that tolerates the doubled bridge edges of a merged
/// ring: bridge edges are traversed twice and cancel in the parity count.
fn inside_weak_ring(p: Vec2, ring: &[Vec2]) -> bool {
    point_in_ring(p, ring)
}

/// Whether direction `i → target` lies inside the interior angle of the
/// counterclockwise ring at vertex `i`.
fn in_cone(ring: &[Vec2], i: usize, target: Vec2) -> bool {
    let n = ring.len();
    let prev = ring[(i + n - 1) % n];
    let cur = ring[i];
    let next = ring[(i + 1) % n];
    if orient2d(prev, cur, next) >= 0.0 {
        orient2d(cur, next, target) > 0.0 && orient2d(prev, cur, target) > 0.0
    } else {
        !(orient2d(cur, next, target) <= 0.0 && orient2d(prev, cur, target) <= 0.0)
    }
}

fn in_triangle_closed(p: Vec2, a: Vec2, b: Vec2, c: Vec2) -> bool {
    orient2d(a, b, p) >= 0.0 && orient2d(b, c, p) >= 0.0 && orient2d(c, a, p) >= 0.0
}

fn clip_ears(ring: Vec<Vec2>) -> Vec<Triangle> {
    let mut idx: Vec<usize> = (0..ring.len()).collect();
    let mut out = Vec::with_capacity(ring.len().saturating_sub(2));
    let mut guard = 0;
    while idx.len() > 3 {
        let n = idx.len();
        let mut clipped = false;
        for k in 0..n {
            let (ia, ib, ic) = (idx[(k + n - 1) % n], idx[k], idx[(k + 1) % n]);
            let (a, b, c) = (ring[ia], ring[ib], ring[ic]);
            if orient2d(a, b, c) <= 0.0 {
                continue;
            }
            let blocked = idx.iter().any(|&j| {
                let p = ring[j];
                j != ia && j != ib && j != ic && p != a && p != b && p != c && in_triangle_closed(p, a, b, c)
            });
            if blocked {
                continue;
            }
            out.push([a, b, c]);
            idx.remove(k);
            clipped = true;
            break;
        }
        if !clipped {
            // Only collinear runs remain; drop a flat vertex.
            let n = idx.len();
            let flat = (0..n).find(|&k| {
                let (a, b, c) = (ring[idx[(k + n - 1) % n]], ring[idx[k]], ring[idx[(k + 1) % n]]);
                orient2d(a, b, c) == 0.0
            });
            match flat {
                Some(k) => {
                    idx.remove(k);
                }
                None => break,
            }
        }
        guard += 1;
        if guard > 4 * ring.len() * ring.len() + 16 {
            break;
        }
    }
    if idx.len() == 3 {
        let (a, b, c) = (ring[idx[0]], ring[idx[1]], ring[idx[2]]);
        if orient2d(a, b, c) > 0.0 {
            out.push([a, b, c]);
        }
    }
    out
}

pub fn triangle_area(t: &Triangle) -> f64 {
    0.5 * orient2d(t[0], t[1], t[2])
}
