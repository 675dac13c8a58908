//! Irreducible spin-j representations of su(2) in the basis
//! `ĕ₁ = ½[[0,1],[-1,0]]`, `ĕ₂ = ½[[0,i],[i,0]]`, `ĕ₃ = ½[[i,0],[0,-i]]`.
//!
//! With the usual angular-momentum matrices `J_x, J_y, J_z` this basis maps
//! to `ρ(ĕ₁) = i·J_y`, `ρ(ĕ₂) = i·J_x`, `ρ(ĕ₃) = i·J_z`. The element
//! `ℰ = ĕ₁ + ĕ₂ + ĕ₃` is then `i·(J_x + J_y + J_z)`, a rotation generator
//! about `(1,1,1)/√3` scaled by `√3`, with eigenvalues `i·√3·m` for
//! `m = -j, …, j`.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_complex::Complex64;
use thiserror::Error;

use crate::math::sqrt;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpinError {
    #[error("spin {0} is not a nonnegative multiple of 1/2")]
    NotHalfInteger(f64),
}

/// A nonnegative half-integer `j`, stored as `2j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Spin(u32);

impl Spin {
    pub const ZERO: Spin = Spin(0);
    pub const HALF: Spin = Spin(1);
    pub const ONE: Spin = Spin(2);

    pub const fn from_twice(twice_j: u32) -> Self {
        Spin(twice_j)
    }

    /// Parse a value such as `1.5`; anything that is not a nonnegative
    /// multiple of ½ is rejected.
    pub fn new(j: f64) -> Result<Self, SpinError> {
        let twice = 2.0 * j;
        if !j.is_finite() || j < 0.0 || twice != crate::math::round(twice) || twice > u32::MAX as f64 {
            return Err(SpinError::NotHalfInteger(j));
        }
        Ok(Spin(twice as u32))
    }

    pub fn twice(self) -> u32 {
        self.0
    }

    pub fn value(self) -> f64 {
        self.0 as f64 / 2.0
    }

    /// Dimension `2j + 1` of the representation space.
    pub fn dim(self) -> usize {
        self.0 as usize + 1
    }

    /// Casimir value `ξ = j(j+1)`.
    pub fn casimir(self) -> f64 {
        casimir(self)
    }

    /// Weights `m = j, j-1, …, -j`.
    pub fn weights(self) -> impl Iterator<Item = f64> {
        let j = self.value();
        (0..self.dim()).map(move |k| j - k as f64)
    }
}

impl fmt::Display for Spin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_multiple_of(2) {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

/// `ξ = j(j+1)`.
pub fn casimir(j: Spin) -> f64 {
    let v = j.value();
    v * (v + 1.0)
}

/// Dense square complex matrix, row major.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    n: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![Complex64::new(0.0, 0.0); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_rows(rows: &[&[Complex64]]) -> Self {
        let n = rows.len();
        let mut m = Self::zeros(n);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), n, "matrix must be square");
            for (j, v) in r.iter().enumerate() {
                m[(i, j)] = *v;
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * other.data[k * n + j];
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        Self {
            n: self.n,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        Self {
            n: self.n,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self {
            n: self.n,
            data: self.data.iter().map(|a| a * c).collect(),
        }
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out.data[j * n + i] = self.data[i * n + j].conj();
            }
        }
        out
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.n).map(|i| self.data[i * self.n + i]).sum()
    }

    /// Frobenius norm.
    pub fn norm(&self) -> f64 {
        sqrt(self.data.iter().map(|a| a.norm_sqr()).sum())
    }

    /// Largest absolute row sum.
    pub fn norm_inf(&self) -> f64 {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.data[i * self.n + j].norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }
}

impl core::ops::Index<(usize, usize)> for CMatrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.n + j]
    }
}

impl core::ops::IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.n + j]
    }
}

/// The spin-j representation with its three skew-Hermitian generators
/// `ρ(ĕ₁), ρ(ĕ₂), ρ(ĕ₃)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpinRep {
    j: Spin,
    generators: [CMatrix; 3],
}

impl SpinRep {
    pub fn new(j: Spin) -> Self {
        let n = j.dim();
        let jv = j.value();
        let m: Vec<f64> = j.weights().collect();
        let i = Complex64::new(0.0, 1.0);

        // Ladder operators in the basis |j⟩, |j-1⟩, …, |-j⟩:
        // J₊|m⟩ = √(j(j+1) - m(m+1)) |m+1⟩.
        let mut jp = CMatrix::zeros(n);
        for col in 1..n {
            let mm = m[col];
            let c = sqrt(jv * (jv + 1.0) - mm * (mm + 1.0));
            jp[(col - 1, col)] = Complex64::new(c, 0.0);
        }
        let jm = jp.adjoint();
        let jx = jp.add(&jm).scale(Complex64::new(0.5, 0.0));
        let jy = jp.sub(&jm).scale(Complex64::new(0.0, -0.5));
        let mut jz = CMatrix::zeros(n);
        for k in 0..n {
            jz[(k, k)] = Complex64::new(m[k], 0.0);
        }
        Self {
            j,
            generators: [jy.scale(i), jx.scale(i), jz.scale(i)],
        }
    }

    pub fn spin(&self) -> Spin {
        self.j
    }

    pub fn dim(&self) -> usize {
        self.j.dim()
    }

    /// `ρ(ĕ_k)` for `k = 1, 2, 3`.
    pub fn generator(&self, k: usize) -> &CMatrix {
        assert!((1..=3).contains(&k), "generator index is 1-based");
        &self.generators[k - 1]
    }

    pub fn generators(&self) -> &[CMatrix; 3] {
        &self.generators
    }

    /// `ρ(ℰ) = ρ(ĕ₁) + ρ(ĕ₂) + ρ(ĕ₃)`.
    pub fn e_sum(&self) -> CMatrix {
        self.generators[0].add(&self.generators[1]).add(&self.generators[2])
    }

    /// `Σ ρ(ĕ_k)²`; equals `-j(j+1)·I`.
    pub fn casimir_operator(&self) -> CMatrix {
        let g = &self.generators;
        g[0].matmul(&g[0])
            .add(&g[1].matmul(&g[1]))
            .add(&g[2].matmul(&g[2]))
    }
}

/// `Tr exp[a·ρ(ℰ)]` from the spectrum of `ρ(ℰ)`: `Σ_{m=-j}^{j} exp(i·a·√3·m)`.
pub fn trace_exp_e(j: Spin, a: Complex64) -> Complex64 {
    let root3 = sqrt(3.0);
    let i = Complex64::new(0.0, 1.0);
    j.weights().map(|m| (i * a * (root3 * m)).exp()).sum()
}

/// [`trace_exp_e`] for a real coefficient; the result is real because the
/// spectrum is symmetric under `m ↔ -m`.
pub fn trace_exp_e_real(j: Spin, a: f64) -> f64 {
    let theta = sqrt(3.0) * a;
    j.weights().map(|m| crate::math::cos(theta * m)).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn spin_parsing() {
        assert_eq!(Spin::new(1.5).unwrap().twice(), 3);
        assert_eq!(Spin::new(0.0).unwrap(), Spin::ZERO);
        assert!(Spin::new(0.3).is_err());
        assert!(Spin::new(-0.5).is_err());
        assert!(Spin::new(f64::NAN).is_err());
        assert_eq!(alloc::format!("{}", Spin::from_twice(3)), "3/2");
        assert_eq!(alloc::format!("{}", Spin::from_twice(4)), "2");
    }

    #[test]
    fn casimir_values() {
        assert_eq!(casimir(Spin::ZERO), 0.0);
        assert_eq!(casimir(Spin::HALF), 0.75);
        assert_eq!(casimir(Spin::from_twice(3)), 3.75);
    }

    #[test]
    fn spin_half_matches_basis() {
        let r = SpinRep::new(Spin::HALF);
        let e1 = CMatrix::from_rows(&[&[c(0.0, 0.0), c(0.5, 0.0)], &[c(-0.5, 0.0), c(0.0, 0.0)]]);
        let e2 = CMatrix::from_rows(&[&[c(0.0, 0.0), c(0.0, 0.5)], &[c(0.0, 0.5), c(0.0, 0.0)]]);
        let e3 = CMatrix::from_rows(&[&[c(0.0, 0.5), c(0.0, 0.0)], &[c(0.0, 0.0), c(0.0, -0.5)]]);
        assert!(r.generator(1).sub(&e1).norm() < 1e-15);
        assert!(r.generator(2).sub(&e2).norm() < 1e-15);
        assert!(r.generator(3).sub(&e3).norm() < 1e-15);
    }

    #[test]
    fn trivial_rep_is_zero() {
        let r = SpinRep::new(Spin::ZERO);
        assert_eq!(r.dim(), 1);
        for k in 1..=3 {
            assert_eq!(r.generator(k).norm(), 0.0);
        }
    }

    #[test]
    fn spin_one_casimir() {
        let r = SpinRep::new(Spin::ONE);
        let cas = r.casimir_operator();
        let expected = CMatrix::identity(3).scale(c(-2.0, 0.0));
        assert!(cas.sub(&expected).norm() < 1e-12);
    }

    #[test]
    fn commutators_and_skew_hermitian() {
        for twice in 0..=8 {
            let r = SpinRep::new(Spin::from_twice(twice));
            let g = r.generators();
            for k in 0..3 {
                let (a, b, cc) = (&g[k], &g[(k + 1) % 3], &g[(k + 2) % 3]);
                let comm = a.matmul(b).sub(&b.matmul(a));
                assert!(comm.sub(cc).norm() < 1e-12, "j = {twice}/2, k = {k}");
                assert!(a.add(&a.adjoint()).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn trace_at_zero_is_dimension() {
        for twice in 0..7 {
            let j = Spin::from_twice(twice);
            let t = trace_exp_e(j, c(0.0, 0.0));
            assert!((t - c(j.dim() as f64, 0.0)).norm() < 1e-14);
        }
    }

    #[test]
    fn spin_half_real_trace_is_cosine() {
        for &a in &[0.3, -1.7, 4.0] {
            let expected = 2.0 * libm::cos(3f64.sqrt() * a / 2.0);
            assert!((trace_exp_e(Spin::HALF, c(a, 0.0)).re - expected).abs() < 1e-14);
            assert!((trace_exp_e_real(Spin::HALF, a) - expected).abs() < 1e-14);
        }
    }
}
