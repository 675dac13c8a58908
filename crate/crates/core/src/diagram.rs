//! Link diagrams of loop pairs in the planes Σ₁, Σ₂, Σ₃ and the
//! hyperlinking number.
//!
//! A crossing of `a` over/under `b` in Σ_k carries three signs:
//! orientation `sgn [a′ × b′]_k`, height `sgn(a_k − b_k)` and time-lag
//! `sgn(b₀ − a₀)`. The hyperlinking number sums their products over all
//! three planes.

use alloc::vec::Vec;

use thiserror::Error;

pub use crate::geometry::Plane;
use crate::geometry::{Hyperlink, PlLoop, Point4};
use crate::math::sign;
use crate::predicates::{cross2, norm2, sub2, segment_contact_2d, segment_segment_2d, SegmentContact, Vec2};

/// Why a diagram could not be read off unambiguously. The caller should
/// perturb the input.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum DiagramError {
    #[error("crossing in {plane:?} within tolerance of a segment endpoint near {point:?} (s = {s}, t = {t})")]
    NearEndpoint {
        plane: Plane,
        s: f64,
        t: f64,
        point: Vec2,
    },
    #[error("projected segments overlap in {plane:?} (s in {s:?}, t in {t:?})")]
    Overlap {
        plane: Plane,
        s: (f64, f64),
        t: (f64, f64),
    },
    #[error("{which} sign vanishes at crossing in {plane:?} near {point:?} (s = {s}, t = {t})")]
    VanishingSign {
        which: SignKind,
        plane: Plane,
        s: f64,
        t: f64,
        point: Vec2,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SignKind {
    Orientation,
    Height,
    TimeLag,
}

impl core::fmt::Display for SignKind {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(match self {
            SignKind::Orientation => "orientation",
            SignKind::Height => "height",
            SignKind::TimeLag => "time-lag",
        })
    }
}

/// A transverse double point of two projected loops.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Crossing {
    pub plane: Plane,
    /// Parameter on the first loop.
    pub s: f64,
    /// Parameter on the second loop.
    pub t: f64,
    /// Segment indices on the two loops.
    pub segments: (usize, usize),
    /// Location in planar coordinates of Σ_k.
    pub point: Vec2,
    pub orientation: i8,
    pub height: i8,
    pub time_lag: i8,
}

impl Crossing {
    /// Orientation · height · time-lag.
    pub fn product(&self) -> i32 {
        self.orientation as i32 * self.height as i32 * self.time_lag as i32
    }

    /// Orientation · height, the classical algebraic crossing number.
    pub fn algebraic(&self) -> i32 {
        self.orientation as i32 * self.height as i32
    }
}

/// All crossings of `a` with `b` in `plane`, sorted by `(s, t)`.
pub fn find_crossings(
    a: &PlLoop,
    b: &PlLoop,
    plane: Plane,
    eps: f64,
) -> Result<Vec<Crossing>, DiagramError> {
    let pa: Vec<Vec2> = a.vertices().iter().map(|v| plane.project(v)).collect();
    let pb: Vec<Vec2> = b.vertices().iter().map(|v| plane.project(v)).collect();
    let na = pa.len();
    let nb = pb.len();
    let mut out = Vec::new();
    for i in 0..na {
        let (p0, p1) = (pa[i], pa[(i + 1) % na]);
        for j in 0..nb {
            let (q0, q1) = (pb[j], pb[(j + 1) % nb]);
            match segment_contact_2d(p0, p1, q0, q1, eps) {
                SegmentContact::Disjoint => {}
                SegmentContact::NearEndpoint { s, t, point } => {
                    return Err(DiagramError::NearEndpoint {
                        plane,
                        s: a.global_param(i, s),
                        t: b.global_param(j, t),
                        point,
                    })
                }
                SegmentContact::Overlap { s, t } => {
                    return Err(DiagramError::Overlap {
                        plane,
                        s: (a.global_param(i, s.0), a.global_param(i, s.1)),
                        t: (b.global_param(j, t.0), b.global_param(j, t.1)),
                    })
                }
                SegmentContact::Transverse { s, t, point } => {
                    out.push(crossing_signs(a, b, plane, (i, j), (s, t), point, (p0, p1, q0, q1), eps)?);
                }
            }
        }
    }
    out.sort_by(|x, y| {
        x.s.partial_cmp(&y.s)
            .unwrap_or(core::cmp::Ordering::Equal)
            .then(x.t.partial_cmp(&y.t).unwrap_or(core::cmp::Ordering::Equal))
    });
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn crossing_signs(
    a: &PlLoop,
    b: &PlLoop,
    plane: Plane,
    (i, j): (usize, usize),
    (s, t): (f64, f64),
    point: Vec2,
    (p0, p1, q0, q1): (Vec2, Vec2, Vec2, Vec2),
    eps: f64,
) -> Result<Crossing, DiagramError> {
    let gs = a.global_param(i, s);
    let gt = b.global_param(j, t);
    let err = |which| DiagramError::VanishingSign {
        which,
        plane,
        s: gs,
        t: gt,
        point,
    };
    let du = sub2(p1, p0);
    let dv = sub2(q1, q0);
    // Parametrization speeds are positive, so segment directions give the
    // sign of [a′ × b′]_k.
    let c = cross2(du, dv);
    if c.abs() <= eps * (norm2(du) + norm2(dv)) {
        return Err(err(SignKind::Orientation));
    }
    let (a0, a1) = a.segment(i);
    let (b0, b1) = b.segment(j);
    let x: Point4 = a0.lerp(a1, s);
    let y: Point4 = b0.lerp(b1, t);
    let dh = plane.height(&x) - plane.height(&y);
    if dh.abs() <= eps {
        return Err(err(SignKind::Height));
    }
    let dt = y.x0 - x.x0;
    if dt.abs() <= eps {
        return Err(err(SignKind::TimeLag));
    }
    Ok(Crossing {
        plane,
        s: gs,
        t: gt,
        segments: (i, j),
        point,
        orientation: sign(c),
        height: sign(dh),
        time_lag: sign(dt),
    })
}

/// Crossings of `a` with `b` in all three planes, plane by plane.
pub fn all_crossings(a: &PlLoop, b: &PlLoop, eps: f64) -> Result<Vec<Crossing>, DiagramError> {
    let mut out = Vec::new();
    for plane in Plane::ALL {
        out.extend(find_crossings(a, b, plane, eps)?);
    }
    Ok(out)
}

fn pair_eps(a: &PlLoop, b: &PlLoop) -> f64 {
    Hyperlink::new(alloc::vec![a.clone(), b.clone()]).default_eps()
}

/// `sk(a, b) = Σ_k Σ_p orientation · height · time-lag`, with the default
/// tolerance for the pair.
pub fn hyperlinking_number(a: &PlLoop, b: &PlLoop) -> Result<i32, DiagramError> {
    hyperlinking_number_eps(a, b, pair_eps(a, b))
}

pub fn hyperlinking_number_eps(a: &PlLoop, b: &PlLoop, eps: f64) -> Result<i32, DiagramError> {
    Ok(all_crossings(a, b, eps)?.iter().map(Crossing::product).sum())
}

/// `sk(a, L) = Σ_v sk(a, l_v)`.
pub fn sk_loop_vs_hyperlink(a: &PlLoop, l: &Hyperlink) -> Result<i32, DiagramError> {
    l.loops().iter().map(|b| hyperlinking_number(a, b)).sum()
}

/// Smallest geometric margin protecting the diagram of `(a, b)`: projected
/// distances between non-crossing segment pairs, and for crossing pairs the
/// height gap, the time gap and the distance of the crossing from the
/// segment ends scaled by the crossing angle. Vertex perturbations well
/// below this leave every crossing and its signs unchanged.
pub fn crossing_clearance(a: &PlLoop, b: &PlLoop) -> f64 {
    let mut best = f64::INFINITY;
    for plane in Plane::ALL {
        let na = a.segment_count();
        let nb = b.segment_count();
        for i in 0..na {
            let (a0, a1) = a.segment(i);
            let (p0, p1) = (plane.project(&a0), plane.project(&a1));
            for j in 0..nb {
                let (b0, b1) = b.segment(j);
                let (q0, q1) = (plane.project(&b0), plane.project(&b1));
                match segment_contact_2d(p0, p1, q0, q1, 0.0) {
                    SegmentContact::Transverse { s, t, .. } => {
                        let x = a0.lerp(a1, s);
                        let y = b0.lerp(b1, t);
                        let du = sub2(p1, p0);
                        let dv = sub2(q1, q0);
                        let sin = (cross2(du, dv) / (norm2(du) * norm2(dv))).abs();
                        let ends = [s * norm2(du), (1.0 - s) * norm2(du), t * norm2(dv), (1.0 - t) * norm2(dv)]
                            .into_iter()
                            .fold(f64::INFINITY, f64::min);
                        best = best
                            .min((plane.height(&x) - plane.height(&y)).abs())
                            .min((x.x0 - y.x0).abs())
                            .min(ends * sin);
                    }
                    SegmentContact::Disjoint => {
                        best = best.min(segment_segment_2d(p0, p1, q0, q1).2);
                    }
                    _ => return 0.0,
                }
            }
        }
    }
    best
}
