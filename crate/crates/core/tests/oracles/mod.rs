//! Independent reference computations for tests. Nothing here calls the
//! closed forms it is used to check.
#![allow(dead_code)]

use hyperarea_core::geometry::{Hyperlink, PlLoop, Point4};
use hyperarea_core::representation::CMatrix;
use hyperarea_core::{Complex64, Plane};
use rand::Rng;

/// `exp(A)` by scaling and squaring with a 30-term Taylor series.
pub fn matrix_exp(a: &CMatrix) -> CMatrix {
    let norm = a.norm();
    let mut s = 0;
    while norm / 2f64.powi(s) > 0.25 {
        s += 1;
    }
    let scaled = a.scale(Complex64::new(1.0 / 2f64.powi(s), 0.0));
    let n = a.dim();
    let mut term = CMatrix::identity(n);
    let mut sum = CMatrix::identity(n);
    for k in 1..30 {
        term = term.matmul(&scaled).scale(Complex64::new(1.0 / k as f64, 0.0));
        sum = sum.add(&term);
    }
    for _ in 0..s {
        sum = sum.matmul(&sum);
    }
    sum
}

/// A crossing found by solving the 2×2 intersection system directly.
#[derive(Debug, Clone, Copy)]
pub struct OracleCrossing {
    pub s: f64,
    pub t: f64,
    pub orientation: i8,
    pub height: i8,
    pub time_lag: i8,
}

fn planar(plane: Plane, p: &Point4) -> [f64; 2] {
    match plane {
        Plane::Sigma1 => [p.x2, p.x3],
        Plane::Sigma2 => [p.x3, p.x1],
        Plane::Sigma3 => [p.x1, p.x2],
    }
}

fn normal(plane: Plane, p: &Point4) -> f64 {
    match plane {
        Plane::Sigma1 => p.x1,
        Plane::Sigma2 => p.x2,
        Plane::Sigma3 => p.x3,
    }
}

fn sgn(x: f64) -> i8 {
    if x > 0.0 {
        1
    } else if x < 0.0 {
        -1
    } else {
        0
    }
}

/// All transverse crossings over every segment pair, with signs evaluated
/// from the loops' point and velocity maps at the crossing parameters.
pub fn brute_force_crossings(a: &PlLoop, b: &PlLoop, plane: Plane) -> Vec<OracleCrossing> {
    let mut out = Vec::new();
    let na = a.vertices().len();
    let nb = b.vertices().len();
    for i in 0..na {
        let p0 = planar(plane, &a.vertices()[i]);
        let p1 = planar(plane, &a.vertices()[(i + 1) % na]);
        for j in 0..nb {
            let q0 = planar(plane, &b.vertices()[j]);
            let q1 = planar(plane, &b.vertices()[(j + 1) % nb]);
            // p0 + u (p1 - p0) = q0 + v (q1 - q0)
            let m = [[p1[0] - p0[0], -(q1[0] - q0[0])], [p1[1] - p0[1], -(q1[1] - q0[1])]];
            let r = [q0[0] - p0[0], q0[1] - p0[1]];
            let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
            if det == 0.0 {
                continue;
            }
            let u = (r[0] * m[1][1] - m[0][1] * r[1]) / det;
            let v = (m[0][0] * r[1] - r[0] * m[1][0]) / det;
            if !(0.0..1.0).contains(&u) || !(0.0..1.0).contains(&v) {
                continue;
            }
            let (sa0, sa1) = a.segment_params(i);
            let (sb0, sb1) = b.segment_params(j);
            let s = sa0 + u * (sa1 - sa0);
            let t = sb0 + v * (sb1 - sb0);
            let (x, y) = (a.point(s), b.point(t));
            let (vx, vy) = (a.velocity(s), b.velocity(t));
            let vx = planar(plane, &Point4::from_array(vx));
            let vy = planar(plane, &Point4::from_array(vy));
            out.push(OracleCrossing {
                s,
                t,
                orientation: sgn(vx[0] * vy[1] - vx[1] * vy[0]),
                height: sgn(normal(plane, &x) - normal(plane, &y)),
                time_lag: sgn(y.x0 - x.x0),
            });
        }
    }
    out.sort_by(|p, q| p.s.partial_cmp(&q.s).unwrap().then(p.t.partial_cmp(&q.t).unwrap()));
    out
}

/// Adaptive Simpson quadrature to absolute tolerance `tol`.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    fn rec<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> f64 {
        let m = 0.5 * (a + b);
        let lm = 0.5 * (a + m);
        let rm = 0.5 * (m + b);
        let flm = f(lm);
        let frm = f(rm);
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            return left + right + delta / 15.0;
        }
        rec(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) + rec(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
    }
    // Pre-split so narrow peaks are not missed by the first estimate.
    let pieces = 16;
    let h = (b - a) / pieces as f64;
    (0..pieces)
        .map(|k| {
            let (lo, hi) = (a + k as f64 * h, a + (k + 1) as f64 * h);
            let (flo, fhi, fmid) = (f(lo), f(hi), f(0.5 * (lo + hi)));
            let w = (hi - lo) / 6.0 * (flo + 4.0 * fmid + fhi);
            rec(f, lo, hi, flo, fmid, fhi, w, tol / pieces as f64, 40)
        })
        .sum()
}

/// `q_κ^x(t) = √κ (2π)^{-1/4} exp(-κ²(t-x)²/4)`.
pub fn q_kappa(kappa: f64, x: f64, t: f64) -> f64 {
    kappa.sqrt() * (2.0 * std::f64::consts::PI).powf(-0.25) * (-(kappa * kappa) * (t - x) * (t - x) / 4.0).exp()
}

/// `⟨∂⁻¹q^x, q^y⟩` with `∂⁻¹f(t) = ½(∫_{-∞}^t f - ∫_t^∞ f)`, by nested
/// adaptive quadrature.
pub fn signed_inner_oracle(kappa: f64, x: f64, y: f64) -> f64 {
    let l = 14.0 / kappa;
    let anti = |t: f64| {
        let lo = x - l;
        let hi = x + l;
        let f = |u: f64| q_kappa(kappa, x, u);
        let left = if t <= lo { 0.0 } else { adaptive_simpson(&f, lo, t.min(hi), 1e-11) };
        let right = if t >= hi { 0.0 } else { adaptive_simpson(&f, t.max(lo), hi, 1e-11) };
        0.5 * (left - right)
    };
    let g = |t: f64| anti(t) * q_kappa(kappa, y, t);
    adaptive_simpson(&g, y - l, y + l, 1e-10)
}

/// `⟨p^p, p^q⟩` over the plane by nested adaptive quadrature.
pub fn gaussian_2d_oracle(kappa: f64, p: [f64; 2], q: [f64; 2]) -> f64 {
    let l = 14.0 / kappa;
    let c = [(p[0] + q[0]) / 2.0, (p[1] + q[1]) / 2.0];
    let inner = |z1: f64| {
        let f = |z2: f64| q_kappa(kappa, p[1], z2) * q_kappa(kappa, q[1], z2);
        q_kappa(kappa, p[0], z1) * q_kappa(kappa, q[0], z1) * adaptive_simpson(&f, c[1] - l, c[1] + l, 1e-11)
    };
    adaptive_simpson(&inner, c[0] - l, c[0] + l, 1e-10)
}

/// Copy of `l` with every coordinate of every vertex moved by at most `amp`.
pub fn perturb<R: Rng>(l: &PlLoop, rng: &mut R, amp: f64) -> PlLoop {
    l.map_vertices(|p| {
        Point4::new(
            p.x0 + rng.gen_range(-amp..amp),
            p.x1 + rng.gen_range(-amp..amp),
            p.x2 + rng.gen_range(-amp..amp),
            p.x3 + rng.gen_range(-amp..amp),
        )
    })
    .unwrap()
}

/// `n` randomized valid two-loop hyperlinks built from perturbed fixtures,
/// each with nonzero crossings in at least one plane.
pub fn random_pairs(seed: u64, n: usize) -> Vec<Hyperlink> {
    use hyperarea_core::fixtures;
    use hyperarea_core::geometry::validate_timelike;
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let hopf = fixtures::hopf_pair();
    let (_, g, _) = fixtures::two_loop_colored();
    let (m, _, _) = fixtures::two_loop_colored();
    let bases = [
        (hopf.loops()[0].clone(), hopf.loops()[1].clone()),
        (m.base().loops()[0].clone(), g.loops()[0].clone()),
    ];
    let mut out = Vec::new();
    let mut k = 0;
    while out.len() < n {
        let (a, b) = &bases[k % bases.len()];
        k += 1;
        let shift = rng.gen_range(-0.3..0.3);
        let a2 = perturb(a, &mut rng, 0.03);
        let b2 = perturb(b, &mut rng, 0.03)
            .map_vertices(|p| Point4::new(p.x0 + shift, p.x1, p.x2, p.x3))
            .unwrap();
        let h = Hyperlink::new(vec![a2, b2]);
        if !validate_timelike(&h, h.default_eps()).valid() {
            continue;
        }
        if hyperarea_core::diagram::all_crossings(&h.loops()[0], &h.loops()[1], h.default_eps()).is_err() {
            continue;
        }
        out.push(h);
    }
    out
}
