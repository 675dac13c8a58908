//! Closed-form Wilson loop and area operator values.
//!
//! For a matter loop `u` with colors `(j⁺, j⁻)` and `sk_u = sk(l̄ᵘ, L̲)`:
//!
//! - Wilson loop: `Z = Π_u ( T(j⁺_u, πq·sk_u) + T(j⁻_u, -πq·sk_u) )`;
//! - area: `(|q|√π/2) · Π_u ( (c⁺)^{1/n}·T(j⁺_u, -πq·sk_u) + (i·c⁻)^{1/n}·T(j⁻_u, πq·sk_u) )`
//!   with `c± = Σ_u |℘_u|·√ξ(j±_u)` and `n` the number of matter loops,
//!
//! where `T(j, a) = Σ_m exp(i·a·√3·m)` is the trace of `exp[a·ρ(ℰ)]` taken
//! with a real coefficient. `T` is even in `a`, so the sign pattern of the
//! two formulas is immaterial to the values.

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
use thiserror::Error;

use crate::diagram::{sk_loop_vs_hyperlink, DiagramError};
use crate::geometry::{ColoredHyperlink, Hyperlink, PlanarSurface};
use crate::math::{cos, sin, sqrt};
use crate::piercing::{find_hyperlink_piercings, Piercing, PiercingError};
use crate::representation::{trace_exp_e_real, Spin};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ObservableError {
    #[error(transparent)]
    Diagram(#[from] DiagramError),
    #[error(transparent)]
    Piercing(#[from] PiercingError),
    #[error("the area operator needs at least one matter loop")]
    EmptyMatter,
}

/// The two summands contributed by one matter loop.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LoopTerm {
    pub loop_index: usize,
    pub plus: Complex64,
    pub minus: Complex64,
}

impl LoopTerm {
    pub fn sum(&self) -> Complex64 {
        self.plus + self.minus
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WilsonResult {
    pub value: Complex64,
    pub per_loop_terms: Vec<LoopTerm>,
    pub sk_values: Vec<i32>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AreaResult {
    pub value: Complex64,
    /// `|q|√π/2`, or `1` when there is no surface.
    pub prefactor: f64,
    pub per_loop_terms: Vec<LoopTerm>,
    /// `(c⁺, c⁻)`.
    pub piercing_sums: (f64, f64),
    pub sk_values: Vec<i32>,
    pub piercing_counts: Vec<usize>,
    pub piercings: Vec<Piercing>,
}

impl AreaResult {
    /// `prefactor · Π (plus + minus)` from the stored parts.
    pub fn recompute(&self) -> Complex64 {
        self.per_loop_terms
            .iter()
            .fold(Complex64::new(self.prefactor, 0.0), |acc, t| acc * t.sum())
    }
}

/// `sk(l̄ᵘ, L̲)` for every matter loop.
pub fn sk_values(m: &ColoredHyperlink, g: &Hyperlink) -> Result<Vec<i32>, DiagramError> {
    m.base().loops().iter().map(|l| sk_loop_vs_hyperlink(l, g)).collect()
}

fn trace(j: Spin, a: f64) -> Complex64 {
    Complex64::new(trace_exp_e_real(j, a), 0.0)
}

pub fn wilson_loop_detailed(q: f64, m: &ColoredHyperlink, g: &Hyperlink) -> Result<WilsonResult, ObservableError> {
    let sk = sk_values(m, g)?;
    let terms: Vec<LoopTerm> = m
        .colors()
        .iter()
        .zip(&sk)
        .enumerate()
        .map(|(u, (c, &s))| {
            let a = PI * q * s as f64;
            LoopTerm {
                loop_index: u,
                plus: trace(c.plus, a),
                minus: trace(c.minus, -a),
            }
        })
        .collect();
    let value = terms.iter().fold(Complex64::new(1.0, 0.0), |acc, t| acc * t.sum());
    Ok(WilsonResult {
        value,
        per_loop_terms: terms,
        sk_values: sk,
    })
}

/// The Wilson loop observable `Z(q; χ(M, G))`.
pub fn wilson_loop(q: f64, m: &ColoredHyperlink, g: &Hyperlink) -> Result<Complex64, ObservableError> {
    Ok(wilson_loop_detailed(q, m, g)?.value)
}

/// Principal `n`-th root of `i·c` for `c ≥ 0`.
pub fn principal_root_i(c: f64, n: usize) -> Complex64 {
    if n == 1 {
        return Complex64::new(0.0, c);
    }
    let r = libm::pow(c, 1.0 / n as f64);
    let t = PI / (2.0 * n as f64);
    Complex64::new(r * cos(t), r * sin(t))
}

pub fn real_root(c: f64, n: usize) -> f64 {
    if n == 1 {
        c
    } else {
        libm::pow(c, 1.0 / n as f64)
    }
}

/// The area operator acting on the Wilson loop. With `surface = None` this
/// is the Wilson loop itself.
pub fn area_operator(
    q: f64,
    m: &ColoredHyperlink,
    g: &Hyperlink,
    surface: Option<&PlanarSurface>,
) -> Result<AreaResult, ObservableError> {
    let Some(s) = surface else {
        let w = wilson_loop_detailed(q, m, g)?;
        return Ok(AreaResult {
            value: w.value,
            prefactor: 1.0,
            per_loop_terms: w.per_loop_terms,
            piercing_sums: (0.0, 0.0),
            sk_values: w.sk_values,
            piercing_counts: Vec::new(),
            piercings: Vec::new(),
        });
    };
    if m.is_empty() {
        return Err(ObservableError::EmptyMatter);
    }
    let piercings = find_hyperlink_piercings(m.base(), s)?;
    let mut counts = alloc::vec![0usize; m.len()];
    for p in &piercings {
        counts[p.loop_index] += 1;
    }
    let sk = sk_values(m, g)?;
    let (c_plus, c_minus) = piercing_sums(m, &counts);
    let n = m.len();
    let root_plus = Complex64::new(real_root(c_plus, n), 0.0);
    let root_minus = principal_root_i(c_minus, n);
    let terms: Vec<LoopTerm> = m
        .colors()
        .iter()
        .zip(&sk)
        .enumerate()
        .map(|(u, (c, &k))| {
            let a = PI * q * k as f64;
            LoopTerm {
                loop_index: u,
                plus: root_plus * trace(c.plus, -a),
                minus: root_minus * trace(c.minus, a),
            }
        })
        .collect();
    let prefactor = q.abs() * sqrt(PI) / 2.0;
    let value = terms
        .iter()
        .fold(Complex64::new(prefactor, 0.0), |acc, t| acc * t.sum());
    Ok(AreaResult {
        value,
        prefactor,
        per_loop_terms: terms,
        piercing_sums: (c_plus, c_minus),
        sk_values: sk,
        piercing_counts: counts,
        piercings,
    })
}

/// `c± = Σ_u counts[u] · √ξ(j±_u)`.
pub fn piercing_sums(m: &ColoredHyperlink, counts: &[usize]) -> (f64, f64) {
    m.colors().iter().zip(counts).fold((0.0, 0.0), |(p, n), (c, &k)| {
        (
            p + k as f64 * sqrt(c.plus.casimir()),
            n + k as f64 * sqrt(c.minus.casimir()),
        )
    })
}
