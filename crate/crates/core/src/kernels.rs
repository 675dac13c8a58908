//! Closed forms of the Gaussian kernel inner products.
//!
//! With `q_κ^x(t) = √κ (2π)^{-1/4} exp(-κ²(t-x)²/4)` (unit `L²` norm) and
//! `p_κ^x` its tensor product over coordinates:
//!
//! - `⟨q^x, q^y⟩ = exp(-κ²(x-y)²/8)`, and likewise for `p` in any dimension;
//! - `⟨∂⁻¹q^x, q^y⟩ = (√(2π)/κ) · erf(κ(y-x)/(2√2))`, where
//!   `∂⁻¹f(t) = ½(∫_{-∞}^t f - ∫_t^∞ f)`.

use core::f64::consts::{PI, SQRT_2};

use crate::math::{erf, exp, sqrt};

/// `(κ/√(2π)) · ⟨∂⁻¹q_κ^x, q_κ^y⟩ = erf(κ(y-x)/(2√2))`; tends to
/// `sign(y - x)` as κ grows.
#[inline]
pub fn kernel_inner_1d_signed(kappa: f64, x: f64, y: f64) -> f64 {
    erf(kappa * (y - x) / (2.0 * SQRT_2))
}

/// `⟨∂⁻¹q_κ^x, q_κ^y⟩` without normalization.
#[inline]
pub fn kernel_inner_1d_signed_raw(kappa: f64, x: f64, y: f64) -> f64 {
    sqrt(2.0 * PI) / kappa * kernel_inner_1d_signed(kappa, x, y)
}

/// `⟨q_κ^x, q_κ^y⟩` in one dimension.
#[inline]
pub fn gaussian_inner_1d(kappa: f64, x: f64, y: f64) -> f64 {
    let d = x - y;
    exp(-kappa * kappa * d * d / 8.0)
}

/// `⟨p_κ^p, p_κ^q⟩` in the plane.
#[inline]
pub fn gaussian_inner_2d(kappa: f64, p: [f64; 2], q: [f64; 2]) -> f64 {
    let d0 = p[0] - q[0];
    let d1 = p[1] - q[1];
    exp(-kappa * kappa * (d0 * d0 + d1 * d1) / 8.0)
}

/// `(κ²/4)⟨p_κ^p, p_κ^q⟩ / (2π)`, which integrates to 1 over `q ∈ R²` and
/// concentrates at `p`.
#[inline]
pub fn planar_delta(kappa: f64, p: [f64; 2], q: [f64; 2]) -> f64 {
    kappa * kappa / (8.0 * PI) * gaussian_inner_2d(kappa, p, q)
}
