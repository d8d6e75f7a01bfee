//! Robin and Steklov eigenvalue bounds for simply-connected planar domains.
//!
//! The crate computes the third Robin eigenvalue of polynomial images of the
//! unit disk with perimeter-scaled parameter, compares it with the double-disk
//! value `2π·λ₂(𝔻; α/4π)`, and builds the conformal trial functions (Möbius
//! renormalization, hyperbolic caps, fold maps) that certify the comparison.
//!
//! Everything runs on a single triangulation of the unit disk: a domain
//! `Ω = f(𝔻)` enters only through the pullback weights `|f'|²` (interior)
//! and `|f'|` (boundary).

// `!(x > 0.0)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bounds;
pub mod caps;
pub mod conformal;
pub mod diskmodes;
pub mod domains;
pub mod femrobin;
pub mod quadrature;
pub mod trial;

mod error;

pub use error::{Error, Result};
pub use num_complex::Complex64;

pub use bounds::{BoundReport, SaturationWeights};
pub use caps::Cap;
pub use conformal::Moebius;
pub use diskmodes::{DiskMode, ModeKind, RadialProfile};
pub use domains::DomainSpec;
pub use femrobin::{Mesh, SpectrumResult, WeightedRobinProblem};
pub use trial::TrialContext;
