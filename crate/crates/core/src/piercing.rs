//! Piercings of spatially projected loops through a planar surface in the
//! `x2–x3` plane, and the loop–surface linking number.
//!
//! A piercing is a parameter where `x1` changes sign with `(x2, x3)` inside
//! the surface. Its orientation is `sgn(ϱ₁′ · J₂₃)` (the surface normal is
//! `normal_sign · e₁`) and its height is `+1` when the loop passes at
//! negative time, `-1` at positive time.

use alloc::vec::Vec;

use thiserror::Error;

use crate::geometry::{Hyperlink, PlLoop, PlanarSurface};
use crate::math::sign;
use crate::predicates::{lerp2, Vec2};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PiercingError {
    #[error("loop {loop_index}: plane crossing at s = {s} lies within tolerance of the surface boundary at {point:?}")]
    NearBoundary { loop_index: usize, s: f64, point: Vec2 },
    #[error("loop {loop_index}: segment {segment} lies in the plane x1 = 0")]
    InPlane { loop_index: usize, segment: usize },
    #[error("loop {loop_index}: vertex at s = {s} lies on the plane x1 = 0 over the surface at {point:?}")]
    VertexOnPlane { loop_index: usize, s: f64, point: Vec2 },
    #[error("loop {loop_index}: piercing at s = {s}, {point:?} happens at time 0 (loop meets the surface)")]
    ZeroHeight { loop_index: usize, s: f64, point: Vec2 },
}

/// A transverse passage of a loop through the surface.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Piercing {
    pub loop_index: usize,
    pub s: f64,
    /// `(x2, x3)` location on the surface.
    pub point: Vec2,
    pub orientation: i8,
    pub height: i8,
}

impl Piercing {
    /// Algebraic piercing number ε = orientation · height.
    pub fn epsilon(&self) -> i32 {
        self.orientation as i32 * self.height as i32
    }
}

/// Piercings of `l` through `surface`, sorted by parameter. `loop_index` is
/// copied into each result.
pub fn find_piercings_indexed(
    l: &PlLoop,
    loop_index: usize,
    surface: &PlanarSurface,
    eps: f64,
) -> Result<Vec<Piercing>, PiercingError> {
    let n = l.segment_count();
    let mut out = Vec::new();
    for (i, v) in l.vertices().iter().enumerate() {
        if v.x1.abs() <= eps {
            let point = [v.x2, v.x3];
            if surface.contains(point) || surface.boundary_distance(point) <= eps {
                return Err(PiercingError::VertexOnPlane {
                    loop_index,
                    s: l.segment_params(i).0,
                    point,
                });
            }
        }
    }
    for i in 0..n {
        let (a, b) = l.segment(i);
        if a.x1.abs() <= eps && b.x1.abs() <= eps {
            return Err(PiercingError::InPlane { loop_index, segment: i });
        }
        // Vertices on the plane were either rejected above or lie outside
        // the surface, so only strict sign changes matter here.
        if !((a.x1 < -eps && b.x1 > eps) || (a.x1 > eps && b.x1 < -eps)) {
            continue;
        }
        let t = a.x1 / (a.x1 - b.x1);
        let point = lerp2([a.x2, a.x3], [b.x2, b.x3], t);
        let s = l.global_param(i, t);
        if surface.boundary_distance(point) <= eps {
            return Err(PiercingError::NearBoundary { loop_index, s, point });
        }
        if !surface.contains(point) {
            continue;
        }
        let x0 = a.x0 + t * (b.x0 - a.x0);
        if x0.abs() <= eps {
            return Err(PiercingError::ZeroHeight { loop_index, s, point });
        }
        out.push(Piercing {
            loop_index,
            s,
            point,
            orientation: sign(b.x1 - a.x1) * surface.normal_sign(),
            height: -sign(x0),
        });
    }
    out.sort_by(|p, q| p.s.partial_cmp(&q.s).unwrap_or(core::cmp::Ordering::Equal));
    Ok(out)
}

pub fn find_piercings(l: &PlLoop, surface: &PlanarSurface, eps: f64) -> Result<Vec<Piercing>, PiercingError> {
    find_piercings_indexed(l, 0, surface, eps)
}

/// Default tolerance for a loop against a surface.
pub fn default_eps(l: &PlLoop, surface: &PlanarSurface) -> f64 {
    let (lo, hi) = l.bounds();
    let d: f64 = (0..4).map(|k| (hi[k] - lo[k]) * (hi[k] - lo[k])).sum::<f64>();
    let scale = crate::math::sqrt(d).max(surface.diameter());
    crate::geometry::DEFAULT_EPS_SCALE * if scale > 0.0 { scale } else { 1.0 }
}

/// All piercings of every loop of `h`, grouped by loop and sorted by
/// parameter within each loop.
pub fn find_hyperlink_piercings(h: &Hyperlink, surface: &PlanarSurface) -> Result<Vec<Piercing>, PiercingError> {
    let eps = h.default_eps().max(crate::geometry::DEFAULT_EPS_SCALE * surface.diameter());
    let mut out = Vec::new();
    for (u, l) in h.loops().iter().enumerate() {
        out.extend(find_piercings_indexed(l, u, surface, eps)?);
    }
    Ok(out)
}

/// `lk(l, S) = Σ_p ε(p)`.
pub fn linking_number_surface(l: &PlLoop, surface: &PlanarSurface) -> Result<i32, PiercingError> {
    let ps = find_piercings(l, surface, default_eps(l, surface))?;
    Ok(ps.iter().map(Piercing::epsilon).sum())
}

/// Number of piercings of `l` through `surface`.
pub fn piercing_count(l: &PlLoop, surface: &PlanarSurface) -> Result<usize, PiercingError> {
    Ok(find_piercings(l, surface, default_eps(l, surface))?.len())
}

/// `lk(L, S) = Σ_u lk(l_u, S)`.
pub fn hyperlink_lk(h: &Hyperlink, surface: &PlanarSurface) -> Result<i32, PiercingError> {
    Ok(find_hyperlink_piercings(h, surface)?.iter().map(Piercing::epsilon).sum())
}

/// Piercing count of each loop of `h`.
pub fn hyperlink_counts(h: &Hyperlink, surface: &PlanarSurface) -> Result<Vec<usize>, PiercingError> {
    let ps = find_hyperlink_piercings(h, surface)?;
    let mut counts = alloc::vec![0; h.len()];
    for p in &ps {
        counts[p.loop_index] += 1;
    }
    Ok(counts)
}
