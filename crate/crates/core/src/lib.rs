//! Topological invariants of piecewise-linear hyperlinks in R × R³ and the
//! Gaussian-kernel integrals that converge to them.
//!
//! The crate is `no_std` (with `alloc`) when built without the `std`
//! feature. The `parallel` feature spreads segment-pair quadrature over a
//! rayon pool; results are summed in a fixed order either way, so serial and
//! parallel runs agree bit for bit.
//!
//! Layout:
//! - [`geometry`]: loops, hyperlinks, planar surfaces, time-likeness checks.
//! - [`diagram`]: crossings in the planes Σ₁, Σ₂, Σ₃ and the hyperlinking number.
//! - [`piercing`]: loop/surface piercings and the linking number `lk(l, S)`.
//! - [`representation`]: spin-j matrices of su(2) and trace closed forms.
//! - [`observables`]: closed-form Wilson loop and area operator values.
//! - [`kernels`], [`quadrature`], [`kappa`]: finite-κ evaluation of the same
//!   quantities and convergence studies.
//! - [`fixtures`]: the curated geometries used by tests and the CLI.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod diagram;
pub mod fixtures;
pub mod geometry;
pub mod kappa;
pub mod kernels;
pub mod observables;
pub mod piercing;
pub mod predicates;
pub mod quadrature;
pub mod representation;
pub mod triangulate;

mod math;
mod par;

pub use num_complex::Complex64;

pub use diagram::{Crossing, DiagramError, Plane};
pub use geometry::{
    ColoredHyperlink, Hyperlink, PlLoop, PlanarSurface, Point4, SurfaceComponent,
    ValidationReport, Violation, ViolationKind,
};
pub use observables::{AreaResult, LoopTerm};
pub use piercing::{Piercing, PiercingError};
pub use representation::{Spin, SpinRep};
