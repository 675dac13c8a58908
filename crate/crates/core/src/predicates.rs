//! Small fixed-size vector helpers and the segment predicates shared by the
//! validation, diagram and piercing code.
//!
//! All tests are tolerance based: a configuration closer than `eps` to a
//! degenerate one is reported as such instead of being classified.

use crate::math::sqrt;

pub type Vec2 = [f64; 2];
pub type Vec3 = [f64; 3];

#[inline]
pub fn sub2(a: Vec2, b: Vec2) -> Vec2 {
    [a[0] - b[0], a[1] - b[1]]
}

#[inline]
pub fn dot2(a: Vec2, b: Vec2) -> f64 {
    a[0] * b[0] + a[1] * b[1]
}

/// z-component of the planar cross product.
#[inline]
pub fn cross2(a: Vec2, b: Vec2) -> f64 {
    a[0] * b[1] - a[1] * b[0]
}

#[inline]
pub fn norm2(a: Vec2) -> f64 {
    sqrt(dot2(a, a))
}

#[inline]
pub fn lerp2(a: Vec2, b: Vec2, t: f64) -> Vec2 {
    [a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])]
}

#[inline]
pub fn sub3(a: Vec3, b: Vec3) -> Vec3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

#[inline]
pub fn dot3(a: Vec3, b: Vec3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

#[inline]
pub fn cross3(a: Vec3, b: Vec3) -> Vec3 {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

#[inline]
pub fn norm3(a: Vec3) -> f64 {
    sqrt(dot3(a, a))
}

#[inline]
pub fn lerp3(a: Vec3, b: Vec3, t: f64) -> Vec3 {
    [
        a[0] + t * (b[0] - a[0]),
        a[1] + t * (b[1] - a[1]),
        a[2] + t * (b[2] - a[2]),
    ]
}

#[inline]
fn clamp01(x: f64) -> f64 {
    x.clamp(0.0, 1.0)
}

/// Twice the signed area of triangle `abc` (positive when counter-clockwise).
#[inline]
pub fn orient2d(a: Vec2, b: Vec2, c: Vec2) -> f64 {
    cross2(sub2(b, a), sub2(c, a))
}

/// Closest point on segment `ab` to `p`; returns the local parameter and
/// the distance.
pub fn point_segment_2d(p: Vec2, a: Vec2, b: Vec2) -> (f64, f64) {
    let d = sub2(b, a);
    let len2 = dot2(d, d);
    let t = if len2 > 0.0 {
        clamp01(dot2(sub2(p, a), d) / len2)
    } else {
        0.0
    };
    (t, norm2(sub2(p, lerp2(a, b, t))))
}

/// Closest point on segment `ab` to `p` in R³.
pub fn point_segment_3d(p: Vec3, a: Vec3, b: Vec3) -> (f64, f64) {
    let d = sub3(b, a);
    let len2 = dot3(d, d);
    let t = if len2 > 0.0 {
        clamp01(dot3(sub3(p, a), d) / len2)
    } else {
        0.0
    };
    (t, norm3(sub3(p, lerp3(a, b, t))))
}

/// Closest pair of points between segments `p0p1` and `q0q1` in R³.
///
/// Returns `(s, t, distance)` with `s`, `t` the local parameters in `[0, 1]`.
pub fn segment_segment_3d(p0: Vec3, p1: Vec3, q0: Vec3, q1: Vec3) -> (f64, f64, f64) {
    let d1 = sub3(p1, p0);
    let d2 = sub3(q1, q0);
    let r = sub3(p0, q0);
    let a = dot3(d1, d1);
    let e = dot3(d2, d2);
    let f = dot3(d2, r);
    let (s, t);
    if a <= f64::MIN_POSITIVE && e <= f64::MIN_POSITIVE {
        s = 0.0;
        t = 0.0;
    } else if a <= f64::MIN_POSITIVE {
        s = 0.0;
        t = clamp01(f / e);
    } else {
        let c = dot3(d1, r);
        if e <= f64::MIN_POSITIVE {
            t = 0.0;
            s = clamp01(-c / a);
        } else {
            let b = dot3(d1, d2);
            let denom = a * e - b * b;
            let mut s0 = if denom > 1e-14 * a * e {
                clamp01((b * f - c * e) / denom)
            } else {
                0.0
            };
            let mut t0 = (b * s0 + f) / e;
            if t0 < 0.0 {
                t0 = 0.0;
                s0 = clamp01(-c / a);
            } else if t0 > 1.0 {
                t0 = 1.0;
                s0 = clamp01((b - c) / a);
            }
            s = s0;
            t = t0;
        }
    }
    let dist = norm3(sub3(lerp3(p0, p1, s), lerp3(q0, q1, t)));
    (s, t, dist)
}

/// Minimum distance between two planar segments.
pub fn segment_segment_2d(p0: Vec2, p1: Vec2, q0: Vec2, q1: Vec2) -> (f64, f64, f64) {
    segment_segment_3d([p0[0], p0[1], 0.0], [p1[0], p1[1], 0.0], [q0[0], q0[1], 0.0], [
        q1[0], q1[1], 0.0,
    ])
}

/// How two planar segments meet.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SegmentContact {
    /// Farther apart than `eps`.
    Disjoint,
    /// A single crossing at local parameters `(s, t)`, more than `eps` away
    /// from every endpoint.
    Transverse { s: f64, t: f64, point: Vec2 },
    /// Some endpoint lies within `eps` of the other segment.
    NearEndpoint { s: f64, t: f64, point: Vec2 },
    /// Collinear within `eps` and overlapping along a stretch longer than
    /// `eps`; the `s` and `t` ranges describe the shared stretch.
    Overlap { s: (f64, f64), t: (f64, f64) },
}

/// Classify the contact between segments `p0p1` and `q0q1`.
pub fn segment_contact_2d(p0: Vec2, p1: Vec2, q0: Vec2, q1: Vec2, eps: f64) -> SegmentContact {
    let d1 = sub2(p1, p0);
    let d2 = sub2(q1, q0);
    let l1 = norm2(d1);
    let l2 = norm2(d2);
    if l1 == 0.0 || l2 == 0.0 {
        return SegmentContact::Disjoint;
    }

    // Collinear overlap: both endpoints of one segment within eps of the
    // supporting line of the other.
    let hq0 = cross2(d1, sub2(q0, p0)) / l1;
    let hq1 = cross2(d1, sub2(q1, p0)) / l1;
    if hq0.abs() <= eps && hq1.abs() <= eps {
        let tq0 = dot2(sub2(q0, p0), d1) / (l1 * l1);
        let tq1 = dot2(sub2(q1, p0), d1) / (l1 * l1);
        let lo = tq0.min(tq1).max(0.0);
        let hi = tq0.max(tq1).min(1.0);
        if (hi - lo) * l1 > eps {
            let pa = lerp2(p0, p1, lo);
            let pb = lerp2(p0, p1, hi);
            let ta = dot2(sub2(pa, q0), d2) / (l2 * l2);
            let tb = dot2(sub2(pb, q0), d2) / (l2 * l2);
            return SegmentContact::Overlap {
                s: (lo, hi),
                t: (clamp01(ta), clamp01(tb)),
            };
        }
    }

    // Endpoint proximity.
    let mut best: Option<(f64, f64, f64)> = None;
    let mut consider = |s: f64, t: f64, d: f64| {
        if d <= eps && best.is_none_or(|b| d < b.2) {
            best = Some((s, t, d));
        }
    };
    let (t, d) = point_segment_2d(p0, q0, q1);
    consider(0.0, t, d);
    let (t, d) = point_segment_2d(p1, q0, q1);
    consider(1.0, t, d);
    let (s, d) = point_segment_2d(q0, p0, p1);
    consider(s, 0.0, d);
    let (s, d) = point_segment_2d(q1, p0, p1);
    consider(s, 1.0, d);
    if let Some((s, t, _)) = best {
        return SegmentContact::NearEndpoint {
            s,
            t,
            point: lerp2(p0, p1, s),
        };
    }

    let denom = cross2(d1, d2);
    if denom == 0.0 {
        return SegmentContact::Disjoint;
    }
    let r = sub2(q0, p0);
    let s = cross2(r, d2) / denom;
    let t = cross2(r, d1) / denom;
    if s > 0.0 && s < 1.0 && t > 0.0 && t < 1.0 {
        SegmentContact::Transverse {
            s,
            t,
            point: lerp2(p0, p1, s),
        }
    } else {
        SegmentContact::Disjoint
    }
}

/// Even-odd point-in-ring test. `ring` is an implicitly closed vertex list.
pub fn point_in_ring(p: Vec2, ring: &[Vec2]) -> bool {
    let n = ring.len();
    let mut inside = false;
    let mut j = n - 1;
    for i in 0..n {
        let a = ring[j];
        let b = ring[i];
        if (a[1] > p[1]) != (b[1] > p[1]) {
            // Sign of the orientation decides which side of edge ab the
            // horizontal ray starts on.
            let o = orient2d(a, b, p);
            if (o > 0.0) == (b[1] > a[1]) {
                inside = !inside;
            }
        }
        j = i;
    }
    inside
}

/// Distance from `p` to the boundary of a closed ring.
pub fn ring_distance(p: Vec2, ring: &[Vec2]) -> f64 {
    let n = ring.len();
    (0..n)
        .map(|i| point_segment_2d(p, ring[i], ring[(i + 1) % n]).1)
        .fold(f64::INFINITY, f64::min)
}

/// Signed area of a ring (positive when counter-clockwise).
pub fn ring_area(ring: &[Vec2]) -> f64 {
    let n = ring.len();
    let mut acc = 0.0;
    for i in 0..n {
        acc += cross2(ring[i], ring[(i + 1) % n]);
    }
    0.5 * acc
}
