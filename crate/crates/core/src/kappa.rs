//! Finite-κ evaluation of the kernel integrals whose κ → ∞ limits are the
//! combinatorial invariants.
//!
//! - [`sk_finite_kappa`]: `Σ_k ∫∫ [y′×ϱ′]_k · (κ²/8π) e^{-κ²|ŷ_k-ϱ̂_k|²/8}
//!   · erf(κ(y_k-ϱ_k)/2√2) · erf(κ(ϱ₀-y₀)/2√2) ds dt`, which is the
//!   `κ³/16π²`-normalized crossing kernel written with the closed forms of
//!   [`crate::kernels`]; tends to `sk(a, b)`.
//! - [`lk_finite_kappa`]: `(κ³/32π²) ∫_S R(σ) J₂₃ dσ` with
//!   `R(σ) = √(2π) ∫ e^{-κ²|y(s)-σ|²/8} erf(-κy₀(s)/2√2) y₁′(s) ds`; tends
//!   to `lk(l, S)`. The same integral of `|R|` tends to the piercing count.
//! - [`holonomy_factor_finite_kappa`] and [`area_finite_kappa`] assemble
//!   these into the holonomy traces and the finite-κ area expression.
//!
//! Integrals are truncated where the Gaussian drops below `e^{-30}` and
//! evaluated with composite Gauss–Legendre rules whose cells have spatial
//! size at most `2/κ`, subdivided further near the points of closest
//! approach (crossings and piercings).

use alloc::vec::Vec;
use core::f64::consts::{PI, SQRT_2};

use num_complex::Complex64;
use thiserror::Error;

use crate::diagram::{hyperlinking_number, DiagramError};
use crate::geometry::{ColoredHyperlink, Hyperlink, PlLoop, PlanarSurface, Plane, Point4};
use crate::math::{ceil, erf, exp, sqrt};
use crate::observables::{self, principal_root_i, real_root, ObservableError};
use crate::par;
use crate::piercing::{find_hyperlink_piercings, find_piercings, Piercing, PiercingError};
use crate::predicates::{cross2, norm2, point_segment_2d, point_segment_3d, segment_segment_2d, sub2, Vec2};
use crate::quadrature::GaussLegendre;
use crate::representation::{trace_exp_e_real, Spin};
use crate::triangulate::{triangulate_surface, Triangle};

/// Gaussian exponent beyond which the kernels are treated as zero.
pub const WINDOW_EXPONENT: f64 = 30.0;
/// Largest κ accepted unless [`QuadratureConfig::allow_large_kappa`] is set.
pub const MAX_DEFAULT_KAPPA: f64 = 64.0;
pub const DEFAULT_SCHEDULE: [f64; 3] = [8.0, 16.0, 32.0];
/// Relative change between refined and unrefined estimates above which a
/// warning is raised.
pub const REFINEMENT_WARNING: f64 = 0.01;
/// Absolute floor for that comparison, so estimates of a vanishing limit do
/// not warn on rounding noise.
pub const REFINEMENT_FLOOR: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureConfig {
    pub kappa: f64,
    /// Gauss–Legendre nodes per cell and axis.
    pub base_points: usize,
    /// Radius, in units of `1/κ`, around closest-approach points in which
    /// cells are subdivided.
    pub refinement_radius: f64,
    pub refinement_factor: usize,
    pub allow_large_kappa: bool,
    /// Also evaluate without refinement and compare.
    pub check_refinement: bool,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            kappa: 16.0,
            base_points: 8,
            refinement_radius: 6.0,
            refinement_factor: 4,
            allow_large_kappa: false,
            check_refinement: true,
        }
    }
}

impl QuadratureConfig {
    pub fn with_kappa(kappa: f64) -> Self {
        Self {
            kappa,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<(), KappaError> {
        if !(self.kappa.is_finite() && self.kappa > 0.0) {
            return Err(KappaError::Config("kappa must be positive and finite"));
        }
        if self.kappa > MAX_DEFAULT_KAPPA && !self.allow_large_kappa {
            return Err(KappaError::KappaTooLarge(self.kappa));
        }
        if self.base_points == 0 {
            return Err(KappaError::Config("base_points must be positive"));
        }
        if !(self.refinement_radius.is_finite() && self.refinement_radius > 0.0) {
            return Err(KappaError::Config("refinement_radius must be positive"));
        }
        if self.refinement_factor == 0 {
            return Err(KappaError::Config("refinement_factor must be positive"));
        }
        Ok(())
    }

    /// Spatial radius of the integration windows.
    pub fn window(&self) -> f64 {
        sqrt(8.0 * WINDOW_EXPONENT) / self.kappa
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum KappaError {
    #[error("invalid quadrature configuration: {0}")]
    Config(&'static str),
    #[error("kappa = {0} exceeds the default limit of 64")]
    KappaTooLarge(f64),
    #[error(transparent)]
    Diagram(#[from] DiagramError),
    #[error(transparent)]
    Piercing(#[from] PiercingError),
    #[error(transparent)]
    Observable(#[from] ObservableError),
    #[error("partition scale must lie in (0, 1]")]
    PartitionScale,
    #[error("loop index {0} out of range")]
    LoopIndex(usize),
}

/// A quadrature result with the unrefined value used for the diagnostic.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate<T> {
    pub value: T,
    /// Same rule without subdivision near closest-approach points (equal to
    /// `value` when the check is disabled).
    pub unrefined: T,
    /// Refined and unrefined values differ by more than 1%.
    pub warning: bool,
}

trait Magnitude: Copy {
    fn magnitude(self) -> f64;
    fn diff(self, other: Self) -> f64;
}

impl Magnitude for f64 {
    fn magnitude(self) -> f64 {
        self.abs()
    }
    fn diff(self, other: Self) -> f64 {
        (self - other).abs()
    }
}

impl Magnitude for Complex64 {
    fn magnitude(self) -> f64 {
        self.norm()
    }
    fn diff(self, other: Self) -> f64 {
        (self - other).norm()
    }
}

fn estimate<T: Magnitude, F: Fn(usize) -> T>(cfg: &QuadratureConfig, f: F) -> Estimate<T> {
    let value = f(cfg.refinement_factor);
    let unrefined = if cfg.check_refinement && cfg.refinement_factor > 1 {
        f(1)
    } else {
        value
    };
    let warning = value.diff(unrefined) > REFINEMENT_WARNING * value.magnitude().max(REFINEMENT_FLOOR);
    Estimate {
        value,
        unrefined,
        warning,
    }
}

/// Calls `f(x, w)` for a composite rule on `[lo, hi]` with cells of length
/// at most `2/κ` (measured with `speed` length units per parameter unit),
/// subdividing by `factor` the cells within `radius/κ` of `center`.
#[allow(clippy::too_many_arguments)]
fn for_each_node<F: FnMut(f64, f64)>(
    rule: &GaussLegendre,
    lo: f64,
    hi: f64,
    speed: f64,
    center: f64,
    kappa: f64,
    radius: f64,
    factor: usize,
    mut f: F,
) {
    if hi <= lo {
        return;
    }
    let cells = (ceil(speed * (hi - lo) * kappa / 2.0) as usize).max(1);
    let h = (hi - lo) / cells as f64;
    let reach = radius / kappa;
    for c in 0..cells {
        let c0 = lo + c as f64 * h;
        let c1 = if c + 1 == cells { hi } else { c0 + h };
        let gap = if center < c0 {
            c0 - center
        } else if center > c1 {
            center - c1
        } else {
            0.0
        };
        let sub = if factor > 1 && gap * speed <= reach { factor } else { 1 };
        let hs = (c1 - c0) / sub as f64;
        for k in 0..sub {
            let a = c0 + k as f64 * hs;
            for (x, w) in rule.on(a, a + hs) {
                f(x, w);
            }
        }
    }
}

/// Sublevel interval `{t ∈ [0,1] : d(t) ≤ rho}` of a convex function whose
/// minimizer is `center`, found by bisection and rounded outwards.
fn convex_window<D: Fn(f64) -> f64>(d: D, center: f64, rho: f64) -> (f64, f64) {
    let edge = |inside: f64, outside: f64| {
        let (mut a, mut b) = (inside, outside);
        for _ in 0..60 {
            let m = 0.5 * (a + b);
            if d(m) <= rho {
                a = m;
            } else {
                b = m;
            }
        }
        b
    };
    let lo = if d(0.0) <= rho { 0.0 } else { edge(center, 0.0) };
    let hi = if d(1.0) <= rho { 1.0 } else { edge(center, 1.0) };
    (lo, hi)
}

#[inline]
fn erf_scaled(kappa: f64, x: f64) -> f64 {
    erf(kappa * x / (2.0 * SQRT_2))
}

fn len4(d: [f64; 4]) -> f64 {
    sqrt(d.iter().map(|x| x * x).sum())
}

/// Contribution of segment `i` of `a` and `j` of `b` in `plane`.
#[allow(clippy::too_many_arguments)]
fn sk_segment_pair(
    plane: Plane,
    (a0, a1): (Point4, Point4),
    (b0, b1): (Point4, Point4),
    rule: &GaussLegendre,
    cfg: &QuadratureConfig,
    factor: usize,
) -> f64 {
    let (pa0, pa1) = (plane.project(&a0), plane.project(&a1));
    let (pb0, pb1) = (plane.project(&b0), plane.project(&b1));
    let da = sub2(pa1, pa0);
    let db = sub2(pb1, pb0);
    let c = cross2(da, db);
    if c == 0.0 {
        return 0.0;
    }
    let rho = cfg.window();
    let (ts, us, d) = segment_segment_2d(pa0, pa1, pb0, pb1);
    if d > rho {
        return 0.0;
    }
    let at = |t: f64| [pa0[0] + t * da[0], pa0[1] + t * da[1]];
    let bt = |u: f64| [pb0[0] + u * db[0], pb0[1] + u * db[1]];
    let (tlo, thi) = convex_window(|t| point_segment_2d(at(t), pb0, pb1).1, ts, rho);
    let (ulo, uhi) = convex_window(|u| point_segment_2d(bt(u), pa0, pa1).1, us, rho);

    let k = cfg.kappa;
    let ha = (plane.height(&a0), plane.height(&a1) - plane.height(&a0));
    let hb = (plane.height(&b0), plane.height(&b1) - plane.height(&b0));
    let ta = (a0.x0, a1.x0 - a0.x0);
    let tb = (b0.x0, b1.x0 - b0.x0);
    let speed_a = len4(a1.sub(a0));
    let speed_b = len4(b1.sub(b0));
    let g = k * k / 8.0;

    let mut unodes: Vec<(f64, f64)> = Vec::new();
    for_each_node(rule, ulo, uhi, speed_b, us, k, cfg.refinement_radius, factor, |u, w| {
        unodes.push((u, w))
    });
    let mut total = 0.0;
    for_each_node(rule, tlo, thi, speed_a, ts, k, cfg.refinement_radius, factor, |t, wt| {
        let pa = at(t);
        let h0 = ha.0 + t * ha.1;
        let t0 = ta.0 + t * ta.1;
        let mut row = 0.0;
        for &(u, wu) in &unodes {
            let pb = bt(u);
            let dx = pa[0] - pb[0];
            let dy = pa[1] - pb[1];
            let r2 = dx * dx + dy * dy;
            let e = g * r2;
            if e > WINDOW_EXPONENT {
                continue;
            }
            let h = h0 - (hb.0 + u * hb.1);
            let tl = tb.0 + u * tb.1 - t0;
            row += wu * exp(-e) * erf_scaled(k, h) * erf_scaled(k, tl);
        }
        total += wt * row;
    });
    c * k * k / (8.0 * PI) * total
}

fn sk_integral(a: &PlLoop, b: &PlLoop, cfg: &QuadratureConfig, factor: usize) -> f64 {
    let rule = GaussLegendre::new(cfg.base_points);
    let na = a.segment_count();
    let nb = b.segment_count();
    par::ordered_sum(3 * na, |task| {
        let plane = Plane::ALL[task / na];
        let i = task % na;
        let sa = a.segment(i);
        (0..nb)
            .map(|j| sk_segment_pair(plane, sa, b.segment(j), &rule, cfg, factor))
            .sum()
    })
}

/// Finite-κ hyperlinking integral of `(a, b)`.
pub fn sk_finite_kappa(a: &PlLoop, b: &PlLoop, cfg: &QuadratureConfig) -> Result<Estimate<f64>, KappaError> {
    cfg.validate()?;
    Ok(estimate(cfg, |factor| sk_integral(a, b, cfg, factor)))
}

/// `Σ_v` of the finite-κ hyperlinking integral of `a` against each loop of `l`.
pub fn sk_vs_hyperlink_finite_kappa(
    a: &PlLoop,
    l: &Hyperlink,
    cfg: &QuadratureConfig,
) -> Result<Estimate<f64>, KappaError> {
    cfg.validate()?;
    Ok(estimate(cfg, |factor| {
        l.loops().iter().map(|b| sk_integral(a, b, cfg, factor)).sum()
    }))
}

struct LoopSeg {
    a: Point4,
    d: [f64; 4],
    speed: f64,
}

fn loop_segments(l: &PlLoop) -> Vec<LoopSeg> {
    (0..l.segment_count())
        .map(|i| {
            let (a, b) = l.segment(i);
            let d = b.sub(a);
            LoopSeg { a, d, speed: len4(d) }
        })
        .collect()
}

/// `R(σ) = √(2π) ∫ e^{-κ²|y(s)-σ|²/8} erf(-κy₀(s)/2√2) y₁′(s) ds` at the
/// surface point `(0, σ₂, σ₃)`.
///
/// Segments are short compared with the kernel scale near piercings, so the
/// curve integral is left at base resolution; refinement happens on the
/// surface.
fn loop_kernel(segs: &[LoopSeg], sigma: Vec2, rule: &GaussLegendre, cfg: &QuadratureConfig) -> f64 {
    let k = cfg.kappa;
    let g = k * k / 8.0;
    let rho = cfg.window();
    let mut total = 0.0;
    for s in segs {
        if s.d[1] == 0.0 {
            continue;
        }
        let p = [s.a.x1, s.a.x2 - sigma[0], s.a.x3 - sigma[1]];
        let d3 = [s.d[1], s.d[2], s.d[3]];
        let dd = d3[0] * d3[0] + d3[1] * d3[1] + d3[2] * d3[2];
        let pd = p[0] * d3[0] + p[1] * d3[1] + p[2] * d3[2];
        let pp = p[0] * p[0] + p[1] * p[1] + p[2] * p[2];
        let tc = -pd / dd;
        let perp2 = (pp - pd * pd / dd).max(0.0);
        if perp2 > rho * rho {
            continue;
        }
        let w = sqrt((rho * rho - perp2) / dd);
        let lo = (tc - w).max(0.0);
        let hi = (tc + w).min(1.0);
        if hi <= lo {
            continue;
        }
        let mut sum = 0.0;
        let constant_time = s.d[0] == 0.0;
        for_each_node(rule, lo, hi, s.speed, tc.clamp(0.0, 1.0), k, cfg.refinement_radius, 1, |t, wt| {
            let r2 = pp + 2.0 * t * pd + t * t * dd;
            let e = g * r2;
            if e <= WINDOW_EXPONENT {
                let time = if constant_time { 1.0 } else { erf_scaled(k, -(s.a.x0 + t * s.d[0])) };
                sum += wt * exp(-e) * time;
            }
        });
        if constant_time {
            sum *= erf_scaled(k, -s.a.x0);
        }
        total += s.d[1] * sum;
    }
    sqrt(2.0 * PI) * total
}

fn triangle_center_radius(t: &Triangle) -> (Vec2, f64) {
    let c = [(t[0][0] + t[1][0] + t[2][0]) / 3.0, (t[0][1] + t[1][1] + t[2][1]) / 3.0];
    let r = t.iter().map(|p| norm2(sub2(*p, c))).fold(0.0, f64::max);
    (c, r)
}

fn longest_edge(t: &Triangle) -> f64 {
    (0..3).map(|i| norm2(sub2(t[(i + 1) % 3], t[i]))).fold(0.0, f64::max)
}

/// Distance from the surface point `(0, σ₂, σ₃)` to the spatial curve.
fn distance_to_loops(segs: &[&[LoopSeg]], c: Vec2) -> f64 {
    let p = [0.0, c[0], c[1]];
    let mut best = f64::INFINITY;
    for l in segs {
        for s in l.iter() {
            let a = s.a.spatial();
            let b = [a[0] + s.d[1], a[1] + s.d[2], a[2] + s.d[3]];
            best = best.min(point_segment_3d(p, a, b).1);
        }
    }
    best
}

/// Quadrature points on the part of `surface` within the window of the
/// loops. Triangles have edges at most `2/κ`, or `2/(κ·factor)` within
/// `refinement_radius/κ` of a center.
fn surface_nodes(
    surface: &PlanarSurface,
    segs: &[&[LoopSeg]],
    centers: &[Vec2],
    cfg: &QuadratureConfig,
    factor: usize,
) -> Vec<(Vec2, f64)> {
    let rho = cfg.window();
    let k = cfg.kappa;
    let coarse = 2.0 / k;
    // `factor` times the node density: edges shrink by its square root.
    let fine = coarse / sqrt(factor as f64);
    let reach = cfg.refinement_radius / k;
    let tri_rule = GaussLegendre::new((cfg.base_points / 2).max(2));
    let mut stack: Vec<Triangle> = triangulate_surface(surface);
    let mut keep: Vec<Triangle> = Vec::new();
    while let Some(t) = stack.pop() {
        let (c, r) = triangle_center_radius(&t);
        if distance_to_loops(segs, c) - r > rho {
            continue;
        }
        let near = centers.iter().any(|p| norm2(sub2(*p, c)) - r <= reach);
        let target = if near { fine } else { coarse };
        if longest_edge(&t) <= target {
            keep.push(t);
            continue;
        }
        // Longest-edge bisection keeps angles bounded away from zero.
        let e = (0..3)
            .max_by(|&i, &j| {
                let li = norm2(sub2(t[(i + 1) % 3], t[i]));
                let lj = norm2(sub2(t[(j + 1) % 3], t[j]));
                li.partial_cmp(&lj).unwrap_or(core::cmp::Ordering::Equal)
            })
            .unwrap_or(0);
        let (p, q, r) = (t[e], t[(e + 1) % 3], t[(e + 2) % 3]);
        let mid = [(p[0] + q[0]) / 2.0, (p[1] + q[1]) / 2.0];
        stack.push([p, mid, r]);
        stack.push([mid, q, r]);
    }
    // Fixed order regardless of traversal.
    keep.sort_by(|a, b| {
        let ka = triangle_center_radius(a).0;
        let kb = triangle_center_radius(b).0;
        ka.partial_cmp(&kb).unwrap_or(core::cmp::Ordering::Equal)
    });
    keep.iter()
        .flat_map(|t| tri_rule.triangle(t[0], t[1], t[2]))
        .collect()
}

fn lk_constant(kappa: f64) -> f64 {
    kappa * kappa * kappa / (32.0 * PI * PI)
}

/// Signed and absolute surface integrals of `R` for one loop.
fn lk_integrals(l: &PlLoop, surface: &PlanarSurface, centers: &[Vec2], cfg: &QuadratureConfig, factor: usize) -> (f64, f64) {
    let segs = loop_segments(l);
    let nodes = surface_nodes(surface, &[&segs], centers, cfg, factor);
    let rule = GaussLegendre::new(cfg.base_points);
    let values = par::map_collect(nodes.len(), |n| {
        let (p, w) = nodes[n];
        w * loop_kernel(&segs, p, &rule, cfg)
    });
    let signed: f64 = values.iter().sum();
    let abs: f64 = values.iter().map(|v| v.abs()).sum();
    let c = lk_constant(cfg.kappa);
    (surface.normal_sign() as f64 * c * signed, c * abs)
}

fn piercing_centers(l: &PlLoop, surface: &PlanarSurface) -> Vec<Vec2> {
    // Refinement only needs approximate centers, so degenerate piercings
    // fall back to no refinement.
    let eps = crate::piercing::default_eps(l, surface);
    find_piercings(l, surface, eps)
        .map(|ps| ps.iter().map(|p| p.point).collect())
        .unwrap_or_default()
}

/// Finite-κ loop–surface linking integral.
pub fn lk_finite_kappa(l: &PlLoop, surface: &PlanarSurface, cfg: &QuadratureConfig) -> Result<Estimate<f64>, KappaError> {
    cfg.validate()?;
    let centers = piercing_centers(l, surface);
    Ok(estimate(cfg, |f| lk_integrals(l, surface, &centers, cfg, f).0))
}

/// Signed and `|R|` integrals from one pass over the surface nodes.
pub fn lk_and_abs_finite_kappa(
    l: &PlLoop,
    surface: &PlanarSurface,
    cfg: &QuadratureConfig,
) -> Result<(Estimate<f64>, Estimate<f64>), KappaError> {
    cfg.validate()?;
    let centers = piercing_centers(l, surface);
    let refined = lk_integrals(l, surface, &centers, cfg, cfg.refinement_factor);
    let unrefined = if cfg.check_refinement && cfg.refinement_factor > 1 {
        lk_integrals(l, surface, &centers, cfg, 1)
    } else {
        refined
    };
    let make = |v: f64, u: f64| Estimate {
        value: v,
        unrefined: u,
        warning: v.diff(u) > REFINEMENT_WARNING * v.magnitude().max(REFINEMENT_FLOOR),
    };
    Ok((make(refined.0, unrefined.0), make(refined.1, unrefined.1)))
}

/// The same integral with `|R|` in place of `R`; tends to the piercing count.
pub fn lk_abs_finite_kappa(l: &PlLoop, surface: &PlanarSurface, cfg: &QuadratureConfig) -> Result<Estimate<f64>, KappaError> {
    cfg.validate()?;
    let centers = piercing_centers(l, surface);
    Ok(estimate(cfg, |f| lk_integrals(l, surface, &centers, cfg, f).1))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Plus,
    Minus,
}

impl Side {
    fn sign(self) -> f64 {
        match self {
            Side::Plus => 1.0,
            Side::Minus => -1.0,
        }
    }
}

fn holonomy_trace(j: Spin, side: Side, q: f64, sk_integral: f64) -> Complex64 {
    Complex64::new(trace_exp_e_real(j, -side.sign() * PI * q * sk_integral), 0.0)
}

/// Holonomy trace `Ŵ±` of matter loop `u` against `g` at finite κ:
/// `T(j±, ∓πq·I_κ)` with `I_κ` the finite-κ hyperlinking integral.
pub fn holonomy_factor_finite_kappa(
    q: f64,
    m: &ColoredHyperlink,
    u: usize,
    g: &Hyperlink,
    side: Side,
    cfg: &QuadratureConfig,
) -> Result<Estimate<Complex64>, KappaError> {
    cfg.validate()?;
    let l = m.base().loops().get(u).ok_or(KappaError::LoopIndex(u))?;
    let c = m.colors()[u];
    let j = match side {
        Side::Plus => c.plus,
        Side::Minus => c.minus,
    };
    if q == 0.0 || g.is_empty() {
        let d = Complex64::new(j.dim() as f64, 0.0);
        return Ok(Estimate {
            value: d,
            unrefined: d,
            warning: false,
        });
    }
    Ok(estimate(cfg, |f| {
        let s: f64 = g.loops().iter().map(|b| sk_integral(l, b, cfg, f)).sum();
        holonomy_trace(j, side, q, s)
    }))
}

/// Finite-κ Wilson loop `Π_u (Ŵ⁺_u + Ŵ⁻_u)`.
pub fn wilson_finite_kappa(
    q: f64,
    m: &ColoredHyperlink,
    g: &Hyperlink,
    cfg: &QuadratureConfig,
) -> Result<Estimate<Complex64>, KappaError> {
    cfg.validate()?;
    Ok(estimate(cfg, |f| {
        m.base()
            .loops()
            .iter()
            .zip(m.colors())
            .fold(Complex64::new(1.0, 0.0), |acc, (l, c)| {
                let s: f64 = g.loops().iter().map(|b| sk_integral(l, b, cfg, f)).sum();
                acc * (holonomy_trace(c.plus, Side::Plus, q, s) + holonomy_trace(c.minus, Side::Minus, q, s))
            })
    }))
}

/// Assignment of surface points to color classes: disks around piercings
/// belong to the class of the piercing loop, everything else to class 0.
#[derive(Debug, Clone, PartialEq)]
pub struct Partition {
    /// `(center, radius, class)` per disk.
    pub disks: Vec<(Vec2, f64, usize)>,
}

impl Partition {
    /// Disks of radius `scale · min(½ · nearest other piercing, distance to
    /// the boundary)`.
    pub fn around_piercings(
        piercings: &[Piercing],
        class_of_loop: &[usize],
        surface: &PlanarSurface,
        scale: f64,
    ) -> Self {
        let disks = piercings
            .iter()
            .enumerate()
            .map(|(i, p)| {
                let nearest = piercings
                    .iter()
                    .enumerate()
                    .filter(|(k, _)| *k != i)
                    .map(|(_, o)| norm2(sub2(o.point, p.point)))
                    .fold(f64::INFINITY, f64::min);
                let r = (0.5 * nearest).min(surface.boundary_distance(p.point));
                (p.point, scale * r, class_of_loop[p.loop_index])
            })
            .collect();
        Self { disks }
    }

    pub fn class_of(&self, p: Vec2) -> usize {
        self.disks
            .iter()
            .find(|(c, r, _)| norm2(sub2(p, *c)) < *r)
            .map(|d| d.2)
            .unwrap_or(0)
    }
}

/// Parts of the finite-κ area expression.
#[derive(Debug, Clone, PartialEq)]
pub struct AreaEvaluation {
    pub value: Complex64,
    /// `κ̆³|q| Σ_v √ξ±_v ∫_{S_v} |Σ_{u∈Γ_v} R_u|`.
    pub brackets: (f64, f64),
    /// `(Ŵ⁺_u, Ŵ⁻_u)` per matter loop.
    pub holonomy: Vec<(Complex64, Complex64)>,
    /// Finite-κ hyperlinking integral per matter loop.
    pub sk_integrals: Vec<f64>,
}

fn area_evaluation(
    q: f64,
    m: &ColoredHyperlink,
    g: &Hyperlink,
    surface: &PlanarSurface,
    partition: &Partition,
    centers: &[Vec2],
    cfg: &QuadratureConfig,
    factor: usize,
) -> AreaEvaluation {
    let (classes, class_of) = m.color_classes();
    let segs: Vec<Vec<LoopSeg>> = m.base().loops().iter().map(loop_segments).collect();
    let seg_refs: Vec<&[LoopSeg]> = segs.iter().map(|s| s.as_slice()).collect();
    let nodes = surface_nodes(surface, &seg_refs, centers, cfg, factor);
    let rule = GaussLegendre::new(cfg.base_points);
    let per_node = par::map_collect(nodes.len(), |n| {
        let (p, w) = nodes[n];
        let v = partition.class_of(p);
        let r: f64 = segs
            .iter()
            .zip(&class_of)
            .filter(|(_, c)| **c == v)
            .map(|(s, _)| loop_kernel(s, p, &rule, cfg))
            .sum();
        (v, w * r.abs())
    });
    let mut per_class = alloc::vec![0.0; classes.len()];
    for (v, x) in per_node {
        per_class[v] += x;
    }
    let k = cfg.kappa;
    let kb3 = k * k * k / (64.0 * PI * sqrt(PI));
    let (mut bp, mut bm) = (0.0, 0.0);
    for (c, i) in classes.iter().zip(&per_class) {
        bp += sqrt(c.plus.casimir()) * i;
        bm += sqrt(c.minus.casimir()) * i;
    }
    let brackets = (kb3 * q.abs() * bp, kb3 * q.abs() * bm);
    let n = m.len();
    let rp = Complex64::new(real_root(brackets.0, n), 0.0);
    let rm = principal_root_i(brackets.1, n);
    let mut value = Complex64::new(1.0, 0.0);
    let mut holonomy = Vec::with_capacity(n);
    let mut sks = Vec::with_capacity(n);
    for (l, c) in m.base().loops().iter().zip(m.colors()) {
        let s: f64 = g.loops().iter().map(|b| sk_integral(l, b, cfg, factor)).sum();
        let wp = holonomy_trace(c.plus, Side::Plus, q, s);
        let wm = holonomy_trace(c.minus, Side::Minus, q, s);
        value *= rp * wp + rm * wm;
        holonomy.push((wp, wm));
        sks.push(s);
    }
    AreaEvaluation {
        value,
        brackets,
        holonomy,
        sk_integrals: sks,
    }
}

/// Finite-κ area expression with the default partition (`scale = 1`).
pub fn area_finite_kappa(
    q: f64,
    m: &ColoredHyperlink,
    g: &Hyperlink,
    surface: &PlanarSurface,
    cfg: &QuadratureConfig,
) -> Result<Estimate<Complex64>, KappaError> {
    area_finite_kappa_partitioned(q, m, g, surface, 1.0, cfg).map(|(e, _)| e)
}

/// Finite-κ area expression with partition disks scaled by `scale`.
pub fn area_finite_kappa_partitioned(
    q: f64,
    m: &ColoredHyperlink,
    g: &Hyperlink,
    surface: &PlanarSurface,
    scale: f64,
    cfg: &QuadratureConfig,
) -> Result<(Estimate<Complex64>, AreaEvaluation), KappaError> {
    cfg.validate()?;
    if m.is_empty() {
        return Err(ObservableError::EmptyMatter.into());
    }
    if !(scale > 0.0 && scale <= 1.0) {
        return Err(KappaError::PartitionScale);
    }
    let piercings = find_hyperlink_piercings(m.base(), surface)?;
    let (_, class_of) = m.color_classes();
    let partition = Partition::around_piercings(&piercings, &class_of, surface, scale);
    let centers: Vec<Vec2> = piercings.iter().map(|p| p.point).collect();
    let refined = area_evaluation(q, m, g, surface, &partition, &centers, cfg, cfg.refinement_factor);
    let unrefined = if cfg.check_refinement && cfg.refinement_factor > 1 {
        area_evaluation(q, m, g, surface, &partition, &centers, cfg, 1).value
    } else {
        refined.value
    };
    let warning = refined.value.diff(unrefined) > REFINEMENT_WARNING * refined.value.magnitude().max(REFINEMENT_FLOOR);
    Ok((
        Estimate {
            value: refined.value,
            unrefined,
            warning,
        },
        refined,
    ))
}

/// What a convergence study evaluates.
#[derive(Debug, Clone, Copy)]
pub enum Target<'a> {
    Sk {
        a: &'a PlLoop,
        b: &'a PlLoop,
    },
    Lk {
        l: &'a PlLoop,
        surface: &'a PlanarSurface,
    },
    /// The `|R|` variant, converging to the piercing count.
    PiercingCount {
        l: &'a PlLoop,
        surface: &'a PlanarSurface,
    },
    Holonomy {
        q: f64,
        matter: &'a ColoredHyperlink,
        loop_index: usize,
        geometric: &'a Hyperlink,
        side: Side,
    },
    Wilson {
        q: f64,
        matter: &'a ColoredHyperlink,
        geometric: &'a Hyperlink,
    },
    Area {
        q: f64,
        matter: &'a ColoredHyperlink,
        geometric: &'a Hyperlink,
        surface: &'a PlanarSurface,
        partition_scale: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergenceRow {
    pub kappa: f64,
    pub estimate: Complex64,
    pub reference: Complex64,
    pub abs_error: f64,
    /// `abs_error / |reference|`, or `abs_error` when the reference is zero.
    pub rel_error: f64,
    pub warning: bool,
}

impl ConvergenceRow {
    pub fn new(kappa: f64, estimate: Complex64, reference: Complex64, warning: bool) -> Self {
        let abs_error = (estimate - reference).norm();
        let r = reference.norm();
        let rel_error = if r > 0.0 { abs_error / r } else { abs_error };
        Self {
            kappa,
            estimate,
            reference,
            abs_error,
            rel_error,
            warning,
        }
    }
}

fn real(e: Estimate<f64>) -> Estimate<Complex64> {
    Estimate {
        value: Complex64::new(e.value, 0.0),
        unrefined: Complex64::new(e.unrefined, 0.0),
        warning: e.warning,
    }
}

impl Target<'_> {
    /// The combinatorial limit.
    pub fn reference(&self) -> Result<Complex64, KappaError> {
        let r = |x: f64| Complex64::new(x, 0.0);
        Ok(match *self {
            Target::Sk { a, b } => r(hyperlinking_number(a, b)? as f64),
            Target::Lk { l, surface } => r(crate::piercing::linking_number_surface(l, surface)? as f64),
            Target::PiercingCount { l, surface } => r(crate::piercing::piercing_count(l, surface)? as f64),
            Target::Holonomy {
                q,
                matter,
                loop_index,
                geometric,
                side,
            } => {
                let l = matter.base().loops().get(loop_index).ok_or(KappaError::LoopIndex(loop_index))?;
                let sk = crate::diagram::sk_loop_vs_hyperlink(l, geometric)? as f64;
                let c = matter.colors()[loop_index];
                let j = if side == Side::Plus { c.plus } else { c.minus };
                holonomy_trace(j, side, q, sk)
            }
            Target::Wilson { q, matter, geometric } => observables::wilson_loop(q, matter, geometric)?,
            Target::Area {
                q,
                matter,
                geometric,
                surface,
                ..
            } => observables::area_operator(q, matter, geometric, Some(surface))?.value,
        })
    }

    pub fn evaluate(&self, cfg: &QuadratureConfig) -> Result<Estimate<Complex64>, KappaError> {
        match *self {
            Target::Sk { a, b } => sk_finite_kappa(a, b, cfg).map(real),
            Target::Lk { l, surface } => lk_finite_kappa(l, surface, cfg).map(real),
            Target::PiercingCount { l, surface } => lk_abs_finite_kappa(l, surface, cfg).map(real),
            Target::Holonomy {
                q,
                matter,
                loop_index,
                geometric,
                side,
            } => holonomy_factor_finite_kappa(q, matter, loop_index, geometric, side, cfg),
            Target::Wilson { q, matter, geometric } => wilson_finite_kappa(q, matter, geometric, cfg),
            Target::Area {
                q,
                matter,
                geometric,
                surface,
                partition_scale,
            } => area_finite_kappa_partitioned(q, matter, geometric, surface, partition_scale, cfg).map(|(e, _)| e),
        }
    }
}

/// One row per κ of `schedule`, in increasing κ.
pub fn convergence_study(
    target: &Target<'_>,
    schedule: &[f64],
    base: &QuadratureConfig,
) -> Result<Vec<ConvergenceRow>, KappaError> {
    let reference = target.reference()?;
    let mut kappas = schedule.to_vec();
    kappas.sort_by(|a, b| a.partial_cmp(b).unwrap_or(core::cmp::Ordering::Equal));
    kappas
        .into_iter()
        .map(|kappa| {
            let cfg = QuadratureConfig { kappa, ..*base };
            let e = target.evaluate(&cfg)?;
            Ok(ConvergenceRow::new(kappa, e.value, reference, e.warning))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn config_limits() {
        assert!(QuadratureConfig::with_kappa(64.0).validate().is_ok());
        assert!(matches!(
            QuadratureConfig::with_kappa(65.0).validate(),
            Err(KappaError::KappaTooLarge(_))
        ));
        let big = QuadratureConfig {
            allow_large_kappa: true,
            ..QuadratureConfig::with_kappa(100.0)
        };
        assert!(big.validate().is_ok());
        assert!(QuadratureConfig::with_kappa(-1.0).validate().is_err());
    }

    #[test]
    fn window_covers_cutoff() {
        let cfg = QuadratureConfig::with_kappa(10.0);
        let r = cfg.window();
        assert!((cfg.kappa * cfg.kappa * r * r / 8.0 - WINDOW_EXPONENT).abs() < 1e-12);
    }

    #[test]
    fn convex_window_of_abs() {
        let (lo, hi) = convex_window(|t| (t - 0.4).abs(), 0.4, 0.1);
        assert!((lo - 0.3).abs() < 1e-12 && (hi - 0.5).abs() < 1e-12);
        let (lo, hi) = convex_window(|t| (t - 0.4).abs(), 0.4, 1.0);
        assert_eq!((lo, hi), (0.0, 1.0));
    }

    #[test]
    fn far_loops_vanish() {
        let h = fixtures::two_circles();
        let cfg = QuadratureConfig::with_kappa(16.0);
        let e = sk_finite_kappa(&h.loops()[0], &h.loops()[1], &cfg).unwrap();
        assert!(e.value.abs() < 1e-6);
    }

    #[test]
    fn partition_classes() {
        let (m, _, s) = fixtures::two_loop_colored();
        let ps = find_hyperlink_piercings(m.base(), &s).unwrap();
        let (_, class_of) = m.color_classes();
        let p = Partition::around_piercings(&ps, &class_of, &s, 1.0);
        assert_eq!(p.disks.len(), 2);
        assert_eq!(p.class_of(ps[1].point), 1);
        assert_eq!(p.class_of(ps[0].point), 0);
        assert_eq!(p.class_of([0.0, 2.9]), 0);
    }

    #[test]
    fn empty_geometric_holonomy_is_dimension() {
        let (m, _) = fixtures::one_piercing();
        let cfg = QuadratureConfig::with_kappa(8.0);
        let e = holonomy_factor_finite_kappa(1.0, &m, 0, &Hyperlink::empty(), Side::Plus, &cfg).unwrap();
        assert_eq!(e.value, Complex64::new(2.0, 0.0));
    }
}
