//! Gauss–Legendre rules: on intervals, composite on subintervals, and a
//! collapsed tensor rule on triangles.

use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::math::cos;
use crate::predicates::Vec2;

/// Nodes and weights of the `n`-point Gauss–Legendre rule on `[-1, 1]`,
/// computed by Newton iteration on the Legendre recurrence.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "need at least one node");
        let mut nodes = alloc::vec![0.0; n];
        let mut weights = alloc::vec![0.0; n];
        let m = n.div_ceil(2);
        for i in 0..m {
            let mut x = cos(PI * (i as f64 + 0.75) / (n as f64 + 0.5));
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        Self { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Nodes and weights mapped to `[a, b]`.
    pub fn on(&self, a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let h = 0.5 * (b - a);
        let c = 0.5 * (a + b);
        self.nodes.iter().zip(&self.weights).map(move |(x, w)| (c + h * x, h * w))
    }

    pub fn integrate<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> f64 {
        self.on(a, b).map(|(x, w)| w * f(x)).sum()
    }

    /// Composite rule over `cells` equal subintervals of `[a, b]`.
    pub fn composite(&self, a: f64, b: f64, cells: usize) -> Vec<(f64, f64)> {
        let h = (b - a) / cells as f64;
        let mut out = Vec::with_capacity(cells * self.len());
        for c in 0..cells {
            let lo = a + c as f64 * h;
            out.extend(self.on(lo, lo + h));
        }
        out
    }

    /// Collapsed `n × n` rule on the triangle `(p0, p1, p2)`: points and
    /// weights summing to the triangle's area.
    pub fn triangle(&self, p0: Vec2, p1: Vec2, p2: Vec2) -> Vec<(Vec2, f64)> {
        let e1 = [p1[0] - p0[0], p1[1] - p0[1]];
        let e2 = [p2[0] - p0[0], p2[1] - p0[1]];
        let area2 = (e1[0] * e2[1] - e1[1] * e2[0]).abs();
        let mut out = Vec::with_capacity(self.len() * self.len());
        for (u, wu) in self.on(0.0, 1.0) {
            for (v, wv) in self.on(0.0, 1.0) {
                // (u, v) ∈ [0,1]² ↦ barycentric (u, v(1-u)), Jacobian (1-u).
                let a = u;
                let b = v * (1.0 - u);
                let p = [p0[0] + a * e1[0] + b * e2[0], p0[1] + a * e1[1] + b * e2[1]];
                out.push((p, wu * wv * (1.0 - u) * area2));
            }
        }
        out
    }
}

/// `P_n(x)` and `P_n'(x)`.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}
