//! Piecewise-linear loops in R × R³, hyperlinks, planar surfaces, and the
//! time-likeness check.
//!
//! Coordinates are `(x0, x1, x2, x3)` with `x0` the time axis. Loops are
//! parametrized proportionally to 4-dimensional arc length over `[0, 1]`.

use alloc::string::String;
use alloc::vec::Vec;

use thiserror::Error;

use crate::math::sqrt;
use crate::predicates::{
    self, point_in_ring, ring_area, ring_distance, segment_contact_2d, SegmentContact, Vec2,
    Vec3,
};
use crate::representation::Spin;

/// Relative scale of the default genericity tolerance.
pub const DEFAULT_EPS_SCALE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("loop needs at least 3 vertices, got {0}")]
    TooFewVertices(usize),
    #[error("vertex {0} has a non-finite coordinate")]
    NonFinite(usize),
    #[error("vertices {0} and {1} coincide (zero-length segment)")]
    RepeatedVertex(usize, usize),
    #[error("{labels} labels for {loops} loops")]
    LabelCount { labels: usize, loops: usize },
    #[error("{colors} colors for {loops} loops")]
    ColorCount { colors: usize, loops: usize },
    #[error("normal sign must be +1 or -1, got {0}")]
    NormalSign(i8),
    #[error("surface component {component}: ring {ring} is not a simple polygon")]
    NonSimpleRing { component: usize, ring: usize },
    #[error("surface component {component}: hole {hole} is not strictly inside the outer boundary")]
    HoleOutside { component: usize, hole: usize },
    #[error("surface component {component}: holes {a} and {b} overlap")]
    HolesOverlap { component: usize, a: usize, b: usize },
    #[error("surface components {0} and {1} are not disjoint")]
    ComponentsOverlap(usize, usize),
}

/// A point of R × R³.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Point4 {
    pub x0: f64,
    pub x1: f64,
    pub x2: f64,
    pub x3: f64,
}

impl Point4 {
    pub const fn new(x0: f64, x1: f64, x2: f64, x3: f64) -> Self {
        Self { x0, x1, x2, x3 }
    }

    pub fn from_array(a: [f64; 4]) -> Self {
        Self::new(a[0], a[1], a[2], a[3])
    }

    pub fn to_array(self) -> [f64; 4] {
        [self.x0, self.x1, self.x2, self.x3]
    }

    /// Coordinate by axis index, `0` being time.
    pub fn coord(&self, axis: usize) -> f64 {
        match axis {
            0 => self.x0,
            1 => self.x1,
            2 => self.x2,
            3 => self.x3,
            _ => panic!("axis {axis} out of range"),
        }
    }

    /// The spatial part `(x1, x2, x3)`, i.e. the image under π₀.
    pub fn spatial(&self) -> Vec3 {
        [self.x1, self.x2, self.x3]
    }

    pub fn is_finite(&self) -> bool {
        self.x0.is_finite() && self.x1.is_finite() && self.x2.is_finite() && self.x3.is_finite()
    }

    pub fn lerp(self, other: Self, t: f64) -> Self {
        Self::new(
            self.x0 + t * (other.x0 - self.x0),
            self.x1 + t * (other.x1 - self.x1),
            self.x2 + t * (other.x2 - self.x2),
            self.x3 + t * (other.x3 - self.x3),
        )
    }

    pub fn sub(self, other: Self) -> [f64; 4] {
        [
            self.x0 - other.x0,
            self.x1 - other.x1,
            self.x2 - other.x2,
            self.x3 - other.x3,
        ]
    }

    pub fn distance(self, other: Self) -> f64 {
        let d = self.sub(other);
        sqrt(d[0] * d[0] + d[1] * d[1] + d[2] * d[2] + d[3] * d[3])
    }
}

/// One of the coordinate planes Σ₁ (x2–x3), Σ₂ (x3–x1), Σ₃ (x1–x2).
///
/// Planar coordinates are taken in cyclic order after the normal axis, so
/// the planar cross product of two projected directions equals the
/// `k`-th component of their spatial cross product.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Plane {
    Sigma1,
    Sigma2,
    Sigma3,
}

impl Plane {
    pub const ALL: [Plane; 3] = [Plane::Sigma1, Plane::Sigma2, Plane::Sigma3];

    /// Index `k` of the normal axis.
    pub fn index(self) -> usize {
        match self {
            Plane::Sigma1 => 1,
            Plane::Sigma2 => 2,
            Plane::Sigma3 => 3,
        }
    }

    pub fn from_index(k: usize) -> Option<Self> {
        match k {
            1 => Some(Plane::Sigma1),
            2 => Some(Plane::Sigma2),
            3 => Some(Plane::Sigma3),
            _ => None,
        }
    }

    /// Projection of a spatial point onto the plane.
    #[inline]
    pub fn project3(self, p: Vec3) -> Vec2 {
        match self {
            Plane::Sigma1 => [p[1], p[2]],
            Plane::Sigma2 => [p[2], p[0]],
            Plane::Sigma3 => [p[0], p[1]],
        }
    }

    #[inline]
    pub fn project(self, p: &Point4) -> Vec2 {
        self.project3(p.spatial())
    }

    /// The coordinate dropped by the projection (the "height").
    #[inline]
    pub fn height(self, p: &Point4) -> f64 {
        p.coord(self.index())
    }
}

/// An oriented closed piecewise-linear curve. The last vertex connects back
/// to the first.
#[derive(Debug, Clone, PartialEq)]
pub struct PlLoop {
    vertices: Vec<Point4>,
    /// Parameter value at each vertex, plus a trailing `1.0`.
    breaks: Vec<f64>,
    length: f64,
}

impl PlLoop {
    pub fn new(vertices: Vec<Point4>) -> Result<Self, GeometryError> {
        let n = vertices.len();
        if n < 3 {
            return Err(GeometryError::TooFewVertices(n));
        }
        if let Some(i) = vertices.iter().position(|v| !v.is_finite()) {
            return Err(GeometryError::NonFinite(i));
        }
        let mut cum = Vec::with_capacity(n + 1);
        cum.push(0.0);
        let mut total = 0.0;
        for i in 0..n {
            let j = (i + 1) % n;
            let d = vertices[i].distance(vertices[j]);
            if d == 0.0 {
                return Err(GeometryError::RepeatedVertex(i, j));
            }
            total += d;
            cum.push(total);
        }
        let breaks = cum.iter().map(|c| c / total).collect::<Vec<_>>();
        let mut breaks = breaks;
        breaks[n] = 1.0;
        Ok(Self {
            vertices,
            breaks,
            length: total,
        })
    }

    pub fn vertices(&self) -> &[Point4] {
        &self.vertices
    }

    pub fn segment_count(&self) -> usize {
        self.vertices.len()
    }

    /// Endpoints of segment `i` (from vertex `i` to vertex `i+1`, wrapping).
    pub fn segment(&self, i: usize) -> (Point4, Point4) {
        let n = self.vertices.len();
        (self.vertices[i], self.vertices[(i + 1) % n])
    }

    /// Parameter interval `[s_i, s_{i+1}]` covered by segment `i`.
    pub fn segment_params(&self, i: usize) -> (f64, f64) {
        (self.breaks[i], self.breaks[i + 1])
    }

    /// Global parameter of local position `t ∈ [0,1]` on segment `i`.
    pub fn global_param(&self, i: usize, t: f64) -> f64 {
        let (a, b) = self.segment_params(i);
        a + t * (b - a)
    }

    /// Total 4-dimensional length.
    pub fn length(&self) -> f64 {
        self.length
    }

    /// Segment containing `s`; a vertex parameter selects the segment to its
    /// right, and `s = 1` selects the last segment.
    pub fn segment_at(&self, s: f64) -> usize {
        let n = self.vertices.len();
        if s >= 1.0 {
            return n - 1;
        }
        if s <= 0.0 {
            return 0;
        }
        // breaks is sorted; find the last break <= s.
        let idx = self.breaks.partition_point(|&b| b <= s);
        (idx - 1).min(n - 1)
    }

    /// Point at parameter `s ∈ [0, 1]`.
    pub fn point(&self, s: f64) -> Point4 {
        let s = s.clamp(0.0, 1.0);
        let i = self.segment_at(s);
        let (a, b) = self.segment(i);
        let (s0, s1) = self.segment_params(i);
        a.lerp(b, (s - s0) / (s1 - s0))
    }

    /// Derivative with respect to `s` (constant on each segment).
    pub fn velocity(&self, s: f64) -> [f64; 4] {
        self.segment_velocity(self.segment_at(s.clamp(0.0, 1.0)))
    }

    pub fn segment_velocity(&self, i: usize) -> [f64; 4] {
        let (a, b) = self.segment(i);
        let (s0, s1) = self.segment_params(i);
        let d = b.sub(a);
        let w = 1.0 / (s1 - s0);
        [d[0] * w, d[1] * w, d[2] * w, d[3] * w]
    }

    /// Same curve traversed backwards.
    pub fn reversed(&self) -> Self {
        let mut v = self.vertices.clone();
        v.reverse();
        Self::new(v).expect("reversal keeps a valid loop valid")
    }

    /// Same curve with the starting vertex moved forward by `k`.
    pub fn rotated(&self, k: usize) -> Self {
        let mut v = self.vertices.clone();
        let n = v.len();
        v.rotate_left(k % n);
        Self::new(v).expect("rotation keeps a valid loop valid")
    }

    /// Apply `f` to every vertex.
    pub fn map_vertices<F: FnMut(Point4) -> Point4>(&self, f: F) -> Result<Self, GeometryError> {
        Self::new(self.vertices.iter().copied().map(f).collect())
    }

    /// Axis-aligned bounding box as (min, max).
    pub fn bounds(&self) -> ([f64; 4], [f64; 4]) {
        let mut lo = [f64::INFINITY; 4];
        let mut hi = [f64::NEG_INFINITY; 4];
        for v in &self.vertices {
            let a = v.to_array();
            for k in 0..4 {
                lo[k] = lo[k].min(a[k]);
                hi[k] = hi[k].max(a[k]);
            }
        }
        (lo, hi)
    }
}

/// A finite set of loops, optionally labelled.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Hyperlink {
    loops: Vec<PlLoop>,
    labels: Vec<Option<String>>,
}

impl Hyperlink {
    pub fn new(loops: Vec<PlLoop>) -> Self {
        let labels = loops.iter().map(|_| None).collect();
        Self { loops, labels }
    }

    pub fn with_labels(
        loops: Vec<PlLoop>,
        labels: Vec<Option<String>>,
    ) -> Result<Self, GeometryError> {
        if labels.len() != loops.len() {
            return Err(GeometryError::LabelCount {
                labels: labels.len(),
                loops: loops.len(),
            });
        }
        Ok(Self { loops, labels })
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn loops(&self) -> &[PlLoop] {
        &self.loops
    }

    pub fn labels(&self) -> &[Option<String>] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.loops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.loops.is_empty()
    }

    /// Union of two hyperlinks, `self` first.
    pub fn join(&self, other: &Hyperlink) -> Hyperlink {
        let mut loops = self.loops.clone();
        loops.extend(other.loops.iter().cloned());
        let mut labels = self.labels.clone();
        labels.extend(other.labels.iter().cloned());
        Hyperlink { loops, labels }
    }

    /// Diameter of the 4-dimensional bounding box of all vertices.
    pub fn diameter(&self) -> f64 {
        let mut lo = [f64::INFINITY; 4];
        let mut hi = [f64::NEG_INFINITY; 4];
        for l in &self.loops {
            let (a, b) = l.bounds();
            for k in 0..4 {
                lo[k] = lo[k].min(a[k]);
                hi[k] = hi[k].max(b[k]);
            }
        }
        if self.loops.is_empty() {
            return 0.0;
        }
        sqrt((0..4).map(|k| (hi[k] - lo[k]) * (hi[k] - lo[k])).sum())
    }

    /// Genericity tolerance relative to the model scale.
    pub fn default_eps(&self) -> f64 {
        let d = self.diameter();
        if d > 0.0 {
            DEFAULT_EPS_SCALE * d
        } else {
            DEFAULT_EPS_SCALE
        }
    }
}

/// Representation pair `(j⁺, j⁻)` attached to a matter loop.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Color {
    pub plus: Spin,
    pub minus: Spin,
}

impl Color {
    pub fn new(plus: Spin, minus: Spin) -> Self {
        Self { plus, minus }
    }
}

/// A hyperlink with one color per component.
#[derive(Debug, Clone, PartialEq)]
pub struct ColoredHyperlink {
    base: Hyperlink,
    colors: Vec<Color>,
}

impl ColoredHyperlink {
    pub fn new(base: Hyperlink, colors: Vec<Color>) -> Result<Self, GeometryError> {
        if colors.len() != base.len() {
            return Err(GeometryError::ColorCount {
                colors: colors.len(),
                loops: base.len(),
            });
        }
        Ok(Self { base, colors })
    }

    pub fn base(&self) -> &Hyperlink {
        &self.base
    }

    pub fn colors(&self) -> &[Color] {
        &self.colors
    }

    pub fn len(&self) -> usize {
        self.base.len()
    }

    pub fn is_empty(&self) -> bool {
        self.base.is_empty()
    }

    /// Distinct colors in order of first appearance, and for each loop the
    /// index of its color class.
    pub fn color_classes(&self) -> (Vec<Color>, Vec<usize>) {
        let mut distinct: Vec<Color> = Vec::new();
        let mut class_of = Vec::with_capacity(self.colors.len());
        for c in &self.colors {
            let idx = match distinct.iter().position(|d| d == c) {
                Some(i) => i,
                None => {
                    distinct.push(*c);
                    distinct.len() - 1
                }
            };
            class_of.push(idx);
        }
        (distinct, class_of)
    }

    /// Same hyperlink with loops reordered by `perm` (new position `i` holds
    /// old loop `perm[i]`).
    pub fn permuted(&self, perm: &[usize]) -> Self {
        let loops = perm.iter().map(|&i| self.base.loops[i].clone()).collect();
        let labels = perm.iter().map(|&i| self.base.labels[i].clone()).collect();
        let colors = perm.iter().map(|&i| self.colors[i]).collect();
        Self {
            base: Hyperlink { loops, labels },
            colors,
        }
    }
}

/// One connected piece of a planar surface: an outer boundary with optional
/// holes, all in `(x2, x3)` coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct SurfaceComponent {
    pub outer: Vec<Vec2>,
    pub holes: Vec<Vec<Vec2>>,
}

impl SurfaceComponent {
    pub fn new(outer: Vec<Vec2>, holes: Vec<Vec<Vec2>>) -> Self {
        Self { outer, holes }
    }

    pub fn contains(&self, p: Vec2) -> bool {
        point_in_ring(p, &self.outer) && !self.holes.iter().any(|h| point_in_ring(p, h))
    }

    pub fn boundary_distance(&self, p: Vec2) -> f64 {
        self.rings()
            .map(|r| ring_distance(p, r))
            .fold(f64::INFINITY, f64::min)
    }

    pub fn rings(&self) -> impl Iterator<Item = &Vec<Vec2>> {
        core::iter::once(&self.outer).chain(self.holes.iter())
    }

    pub fn area(&self) -> f64 {
        ring_area(&self.outer).abs() - self.holes.iter().map(|h| ring_area(h).abs()).sum::<f64>()
    }
}

/// An oriented polygonal region of the plane `x0 = x1 = 0`. The orientation
/// vector `J_σ` points along `normal_sign · e₁`.
#[derive(Debug, Clone, PartialEq)]
pub struct PlanarSurface {
    components: Vec<SurfaceComponent>,
    normal_sign: i8,
}

impl PlanarSurface {
    pub fn new(components: Vec<SurfaceComponent>, normal_sign: i8) -> Result<Self, GeometryError> {
        if normal_sign != 1 && normal_sign != -1 {
            return Err(GeometryError::NormalSign(normal_sign));
        }
        for (ci, c) in components.iter().enumerate() {
            for (ri, r) in c.rings().enumerate() {
                if r.len() < 3 {
                    return Err(GeometryError::TooFewVertices(r.len()));
                }
                if r.iter().any(|p| !p[0].is_finite() || !p[1].is_finite()) {
                    return Err(GeometryError::NonSimpleRing {
                        component: ci,
                        ring: ri,
                    });
                }
                if !ring_is_simple(r) {
                    return Err(GeometryError::NonSimpleRing {
                        component: ci,
                        ring: ri,
                    });
                }
            }
            for (hi, h) in c.holes.iter().enumerate() {
                let inside = h.iter().all(|p| point_in_ring(*p, &c.outer))
                    && !rings_cross(h, &c.outer);
                if !inside {
                    return Err(GeometryError::HoleOutside {
                        component: ci,
                        hole: hi,
                    });
                }
            }
            for a in 0..c.holes.len() {
                for b in (a + 1)..c.holes.len() {
                    if rings_overlap(&c.holes[a], &c.holes[b]) {
                        return Err(GeometryError::HolesOverlap {
                            component: ci,
                            a,
                            b,
                        });
                    }
                }
            }
        }
        for a in 0..components.len() {
            for b in (a + 1)..components.len() {
                if components_overlap(&components[a], &components[b]) {
                    return Err(GeometryError::ComponentsOverlap(a, b));
                }
            }
        }
        Ok(Self {
            components,
            normal_sign,
        })
    }

    pub fn components(&self) -> &[SurfaceComponent] {
        &self.components
    }

    pub fn normal_sign(&self) -> i8 {
        self.normal_sign
    }

    /// Same region with the opposite orientation.
    pub fn flipped(&self) -> Self {
        Self {
            components: self.components.clone(),
            normal_sign: -self.normal_sign,
        }
    }

    /// Whether `(x2, x3)` lies in the closed-open region (even-odd rule).
    pub fn contains(&self, p: Vec2) -> bool {
        self.components.iter().any(|c| c.contains(p))
    }

    /// Distance from `(x2, x3)` to the nearest boundary edge.
    pub fn boundary_distance(&self, p: Vec2) -> f64 {
        self.components
            .iter()
            .map(|c| c.boundary_distance(p))
            .fold(f64::INFINITY, f64::min)
    }

    pub fn area(&self) -> f64 {
        self.components.iter().map(|c| c.area()).sum()
    }

    pub fn diameter(&self) -> f64 {
        let mut lo = [f64::INFINITY; 2];
        let mut hi = [f64::NEG_INFINITY; 2];
        for c in &self.components {
            for p in &c.outer {
                for k in 0..2 {
                    lo[k] = lo[k].min(p[k]);
                    hi[k] = hi[k].max(p[k]);
                }
            }
        }
        if self.components.is_empty() {
            return 0.0;
        }
        sqrt((hi[0] - lo[0]) * (hi[0] - lo[0]) + (hi[1] - lo[1]) * (hi[1] - lo[1]))
    }
}

fn ring_edges(r: &[Vec2]) -> impl Iterator<Item = (Vec2, Vec2)> + '_ {
    (0..r.len()).map(move |i| (r[i], r[(i + 1) % r.len()]))
}

fn ring_is_simple(r: &[Vec2]) -> bool {
    let n = r.len();
    if ring_area(r) == 0.0 {
        return false;
    }
    for i in 0..n {
        for j in (i + 1)..n {
            let adjacent = j == i + 1 || (i == 0 && j == n - 1);
            let (a0, a1) = (r[i], r[(i + 1) % n]);
            let (b0, b1) = (r[j], r[(j + 1) % n]);
            if adjacent {
                // Adjacent edges may only share their common vertex.
                if let SegmentContact::Overlap { .. } = segment_contact_2d(a0, a1, b0, b1, 0.0) {
                    return false;
                }
                continue;
            }
            let (_, _, d) = predicates::segment_segment_2d(a0, a1, b0, b1);
            if d == 0.0 {
                return false;
            }
        }
    }
    true
}

fn rings_cross(a: &[Vec2], b: &[Vec2]) -> bool {
    ring_edges(a).any(|(a0, a1)| {
        ring_edges(b).any(|(b0, b1)| predicates::segment_segment_2d(a0, a1, b0, b1).2 == 0.0)
    })
}

fn rings_overlap(a: &[Vec2], b: &[Vec2]) -> bool {
    rings_cross(a, b) || point_in_ring(a[0], b) || point_in_ring(b[0], a)
}

fn components_overlap(a: &SurfaceComponent, b: &SurfaceComponent) -> bool {
    if a.rings().any(|ra| b.rings().any(|rb| rings_cross(ra, rb))) {
        return true;
    }
    a.contains(b.outer[0]) || b.contains(a.outer[0])
}

/// Coordinate-drop projection of every loop: `axis = 0` gives π₀ (spatial
/// curves), `axis = k ≥ 1` gives π_k into R × Σ_k as `(x0, ·, ·)` with the
/// remaining coordinates in increasing index order.
pub fn project(h: &Hyperlink, axis: usize) -> Vec<Vec<Vec3>> {
    assert!(axis < 4, "axis must be 0..=3");
    h.loops()
        .iter()
        .map(|l| {
            l.vertices()
                .iter()
                .map(|v| {
                    let a = v.to_array();
                    let mut out = [0.0; 3];
                    let mut k = 0;
                    for (i, c) in a.iter().enumerate() {
                        if i != axis {
                            out[k] = *c;
                            k += 1;
                        }
                    }
                    out
                })
                .collect()
        })
        .collect()
}

/// Inverse of [`project`] given the dropped coordinate of every vertex.
pub fn lift(projected: &[Vec3], axis: usize, dropped: &[f64]) -> Vec<Point4> {
    projected
        .iter()
        .zip(dropped)
        .map(|(p, &d)| {
            let mut a = [0.0; 4];
            let mut k = 0;
            for (i, slot) in a.iter_mut().enumerate() {
                if i == axis {
                    *slot = d;
                } else {
                    *slot = p[k];
                    k += 1;
                }
            }
            Point4::from_array(a)
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ViolationKind {
    /// A segment whose spatial extent is below tolerance; all its points
    /// share spatial coordinates.
    DegenerateSegment,
    /// Two distinct points with (nearly) equal spatial coordinates.
    SpatialCoincidence,
    /// Two points of different loops agreeing in the two coordinates of
    /// `plane` and in time.
    TimeCoincidence { plane: Plane },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub kind: ViolationKind,
    /// Loop indices of the two witnesses.
    pub loops: (usize, usize),
    /// Loop parameters of the two witnesses.
    pub params: (f64, f64),
    pub witness: (Point4, Point4),
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn valid(&self) -> bool {
        self.violations.is_empty()
    }

    fn push_dedup(&mut self, v: Violation, eps: f64) {
        let tol = 16.0 * eps;
        let dup = self.violations.iter().any(|w| {
            w.kind == v.kind
                && w.loops == v.loops
                && w.witness.0.distance(v.witness.0) <= tol
                && w.witness.1.distance(v.witness.1) <= tol
        });
        if !dup {
            self.violations.push(v);
        }
    }
}

/// Check the two time-likeness conditions.
///
/// (a) distinct points have distinct spatial coordinates: checked exactly on
/// every pair of segments (non-adjacent ones within a loop) through
/// segment–segment minimizers in R³, plus fold-backs of adjacent segments.
///
/// (b) points of different loops sharing two spatial coordinates differ in
/// time: checked at every crossing and collinear overlap of projected
/// segments in each plane Σ_k.
pub fn validate_timelike(h: &Hyperlink, eps: f64) -> ValidationReport {
    let mut report = ValidationReport::default();
    let loops = h.loops();

    for (li, l) in loops.iter().enumerate() {
        for i in 0..l.segment_count() {
            let (a, b) = l.segment(i);
            let d = predicates::norm3(predicates::sub3(b.spatial(), a.spatial()));
            if d <= eps {
                report.push_dedup(
                    Violation {
                        kind: ViolationKind::DegenerateSegment,
                        loops: (li, li),
                        params: l.segment_params(i),
                        witness: (a, b),
                    },
                    eps,
                );
            }
        }
    }

    // (a) spatial distinctness
    for (la, a) in loops.iter().enumerate() {
        for (lb, b) in loops.iter().enumerate().skip(la) {
            let same = la == lb;
            let na = a.segment_count();
            for i in 0..na {
                let jstart = if same { i + 1 } else { 0 };
                for j in jstart..b.segment_count() {
                    let (p0, p1) = a.segment(i);
                    let (q0, q1) = b.segment(j);
                    if same {
                        let adjacent = j == i + 1 || (i == 0 && j == na - 1);
                        if adjacent {
                            if let Some(v) = fold_back(a, la, i, j, eps) {
                                report.push_dedup(v, eps);
                            }
                            continue;
                        }
                    }
                    let (s, t, d) =
                        predicates::segment_segment_3d(p0.spatial(), p1.spatial(), q0.spatial(), q1.spatial());
                    if d <= eps {
                        report.push_dedup(
                            Violation {
                                kind: ViolationKind::SpatialCoincidence,
                                loops: (la, lb),
                                params: (a.global_param(i, s), b.global_param(j, t)),
                                witness: (p0.lerp(p1, s), q0.lerp(q1, t)),
                            },
                            eps,
                        );
                    }
                }
            }
        }
    }

    // (b) time separation at crossings of different loops
    for plane in Plane::ALL {
        for (la, a) in loops.iter().enumerate() {
            for (lb, b) in loops.iter().enumerate().skip(la + 1) {
                for i in 0..a.segment_count() {
                    let (p0, p1) = a.segment(i);
                    for j in 0..b.segment_count() {
                        let (q0, q1) = b.segment(j);
                        let contact = segment_contact_2d(
                            plane.project(&p0),
                            plane.project(&p1),
                            plane.project(&q0),
                            plane.project(&q1),
                            eps,
                        );
                        let check = |s: f64, t: f64| -> Option<Violation> {
                            let x = p0.lerp(p1, s);
                            let y = q0.lerp(q1, t);
                            if (x.x0 - y.x0).abs() <= eps {
                                Some(Violation {
                                    kind: ViolationKind::TimeCoincidence { plane },
                                    loops: (la, lb),
                                    params: (a.global_param(i, s), b.global_param(j, t)),
                                    witness: (x, y),
                                })
                            } else {
                                None
                            }
                        };
                        match contact {
                            SegmentContact::Disjoint => {}
                            SegmentContact::Transverse { s, t, .. }
                            | SegmentContact::NearEndpoint { s, t, .. } => {
                                if let Some(v) = check(s, t) {
                                    report.push_dedup(v, eps);
                                }
                            }
                            SegmentContact::Overlap { s, t } => {
                                // Time difference is affine along the overlap.
                                let d0 = p0.lerp(p1, s.0).x0 - q0.lerp(q1, t.0).x0;
                                let d1 = p0.lerp(p1, s.1).x0 - q0.lerp(q1, t.1).x0;
                                let (ss, tt) = if d0.abs() <= eps {
                                    (s.0, t.0)
                                } else if d1.abs() <= eps || d0.signum() != d1.signum() {
                                    let f = if d1.abs() <= eps { 1.0 } else { d0 / (d0 - d1) };
                                    (s.0 + f * (s.1 - s.0), t.0 + f * (t.1 - t.0))
                                } else {
                                    continue;
                                };
                                let x = p0.lerp(p1, ss);
                                let y = q0.lerp(q1, tt);
                                report.push_dedup(
                                    Violation {
                                        kind: ViolationKind::TimeCoincidence { plane },
                                        loops: (la, lb),
                                        params: (a.global_param(i, ss), b.global_param(j, tt)),
                                        witness: (x, y),
                                    },
                                    eps,
                                );
                            }
                        }
                    }
                }
            }
        }
    }
    report
}

/// Adjacent segments `i`, `j` of one loop overlap spatially iff they are
/// collinear and leave their shared vertex in the same direction.
fn fold_back(l: &PlLoop, li: usize, i: usize, j: usize, eps: f64) -> Option<Violation> {
    let n = l.segment_count();
    // Order so that segment `first` ends where `second` starts.
    let (first, second) = if (i + 1) % n == j { (i, j) } else { (j, i) };
    let (a0, shared) = l.segment(first);
    let (_, b1) = l.segment(second);
    let u = predicates::sub3(a0.spatial(), shared.spatial());
    let w = predicates::sub3(b1.spatial(), shared.spatial());
    let lu = predicates::norm3(u);
    let lw = predicates::norm3(w);
    if lu <= eps || lw <= eps {
        return None;
    }
    let c = predicates::cross3(u, w);
    let sin_area = predicates::norm3(c);
    if predicates::dot3(u, w) > 0.0 && sin_area <= eps * (lu + lw) {
        // Both directions point the same way from the shared vertex.
        let t = (lu.min(lw) / lu).min(1.0);
        let s_first = 1.0 - t;
        let t_second = lu.min(lw) / lw;
        let x = shared.lerp(a0, t);
        let y = shared.lerp(b1, t_second.min(1.0));
        return Some(Violation {
            kind: ViolationKind::SpatialCoincidence,
            loops: (li, li),
            params: (
                l.global_param(first, s_first),
                l.global_param(second, t_second.min(1.0)),
            ),
            witness: (x, y),
        });
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn square() -> PlLoop {
        PlLoop::new(vec![
            Point4::new(0.0, 0.0, 0.0, 0.0),
            Point4::new(0.0, 1.0, 0.0, 0.0),
            Point4::new(0.0, 1.0, 1.0, 0.0),
            Point4::new(0.0, 0.0, 1.0, 0.0),
        ])
        .unwrap()
    }

    #[test]
    fn loop_construction_errors() {
        assert_eq!(
            PlLoop::new(vec![Point4::default(), Point4::new(1.0, 0.0, 0.0, 0.0)]),
            Err(GeometryError::TooFewVertices(2))
        );
        assert_eq!(
            PlLoop::new(vec![
                Point4::default(),
                Point4::default(),
                Point4::new(1.0, 0.0, 0.0, 0.0)
            ]),
            Err(GeometryError::RepeatedVertex(0, 1))
        );
        assert_eq!(
            PlLoop::new(vec![
                Point4::default(),
                Point4::new(f64::NAN, 0.0, 0.0, 0.0),
                Point4::new(1.0, 0.0, 0.0, 0.0)
            ]),
            Err(GeometryError::NonFinite(1))
        );
    }

    #[test]
    fn loop_point_at_start_and_half_length() {
        let l = square();
        assert_eq!(l.point(0.0), l.vertices()[0]);
        // two equal halves of arc length end at the opposite corner
        assert!(l.point(0.5).distance(l.vertices()[2]) < 1e-15);
    }

    #[test]
    fn unit_square_point_and_velocity() {
        let l = square();
        let p = l.point(0.125);
        assert!(p.distance(Point4::new(0.0, 0.5, 0.0, 0.0)) < 1e-15);
        let v = l.velocity(0.125);
        let speed = sqrt(v.iter().map(|x| x * x).sum());
        assert!((speed - 4.0).abs() < 1e-14);
        // vertex parameter selects the right segment
        let v = l.velocity(0.25);
        assert!((v[2] - 4.0).abs() < 1e-14 && v[1].abs() < 1e-14);
        assert_eq!(l.point(1.0), l.vertices()[0]);
    }

    #[test]
    fn projection_round_trip() {
        let h = Hyperlink::new(vec![square()]);
        for axis in 0..4 {
            let proj = project(&h, axis);
            let dropped: Vec<f64> = h.loops()[0].vertices().iter().map(|v| v.coord(axis)).collect();
            let back = lift(&proj[0], axis, &dropped);
            assert_eq!(back, h.loops()[0].vertices());
        }
        let p = project(&h, 1);
        assert_eq!(p[0][2], [0.0, 1.0, 0.0]);
    }

    #[test]
    fn spatial_copy_shifted_in_time_is_invalid() {
        let a = square();
        let b = a.map_vertices(|p| Point4::new(p.x0 + 1.0, p.x1, p.x2, p.x3)).unwrap();
        let h = Hyperlink::new(vec![a, b]);
        let r = validate_timelike(&h, h.default_eps());
        assert!(!r.valid());
        assert!(r
            .violations
            .iter()
            .all(|v| v.kind == ViolationKind::SpatialCoincidence));
    }

    #[test]
    fn fold_back_is_detected() {
        let l = PlLoop::new(vec![
            Point4::new(0.0, 0.0, 0.0, 0.0),
            Point4::new(0.0, 2.0, 0.0, 0.0),
            Point4::new(1.0, 1.0, 0.0, 0.0),
            Point4::new(0.0, 0.0, 1.0, 0.0),
        ])
        .unwrap();
        let r = validate_timelike(&Hyperlink::new(vec![l]), 1e-9);
        assert!(!r.valid());
    }

    #[test]
    fn time_only_segment_is_degenerate() {
        let l = PlLoop::new(vec![
            Point4::new(0.0, 0.0, 0.0, 0.0),
            Point4::new(1.0, 0.0, 0.0, 0.0),
            Point4::new(0.0, 1.0, 1.0, 0.0),
        ])
        .unwrap();
        let r = validate_timelike(&Hyperlink::new(vec![l]), 1e-9);
        assert!(r
            .violations
            .iter()
            .any(|v| v.kind == ViolationKind::DegenerateSegment));
    }

    #[test]
    fn surface_validation() {
        let sq = |c: f64, r: f64| vec![[c - r, -r], [c + r, -r], [c + r, r], [c - r, r]];
        assert!(PlanarSurface::new(vec![SurfaceComponent::new(sq(0.0, 2.0), vec![sq(0.0, 1.0)])], 1).is_ok());
        assert_eq!(
            PlanarSurface::new(vec![SurfaceComponent::new(sq(0.0, 1.0), vec![sq(0.0, 2.0)])], 1),
            Err(GeometryError::HoleOutside { component: 0, hole: 0 })
        );
        assert_eq!(
            PlanarSurface::new(
                vec![
                    SurfaceComponent::new(sq(0.0, 1.0), vec![]),
                    SurfaceComponent::new(sq(1.5, 1.0), vec![])
                ],
                1
            ),
            Err(GeometryError::ComponentsOverlap(0, 1))
        );
        assert_eq!(
            PlanarSurface::new(vec![SurfaceComponent::new(sq(0.0, 1.0), vec![])], 0),
            Err(GeometryError::NormalSign(0))
        );
        let bowtie = vec![[0.0, 0.0], [1.0, 1.0], [1.0, 0.0], [0.0, 1.0]];
        assert!(matches!(
            PlanarSurface::new(vec![SurfaceComponent::new(bowtie, vec![])], 1),
            Err(GeometryError::NonSimpleRing { .. })
        ));
        let s = PlanarSurface::new(vec![SurfaceComponent::new(sq(0.0, 2.0), vec![sq(0.0, 1.0)])], 1).unwrap();
        assert!((s.area() - 12.0).abs() < 1e-12);
        assert!(s.contains([1.5, 0.0]));
        assert!(!s.contains([0.5, 0.0]));
    }
}
