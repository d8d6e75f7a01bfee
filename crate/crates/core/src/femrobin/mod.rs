//! Weighted Robin eigenproblem on the unit disk with P1 finite elements.
//!
//! The problem is `−div(ρ∇u) = λ ω u` in `𝔻` with `ρ ∂_ν u + β u = 0` on
//! `∂𝔻`, i.e. the generalized eigenvalues of
//! `∫ρ∇u·∇v + ∫_∂ β u v` against `∫ω u v`. The weights must satisfy
//! `a⁻¹ ≤ ρ, ω ≤ a` and `|β| ≤ a` for the problem's bound `a`.

mod assemble;
mod band;
mod eigen;
mod mesh;

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

pub use assemble::{assemble, Assembled};
pub use band::{BandCholesky, BandMatrix};
pub use eigen::{solve_dense, solve_lowest, SpectrumResult, DENSE_LIMIT};
pub use mesh::{build_disk_mesh, Mesh};

use crate::{Error, Result};

/// A scalar weight sampled at points of the closed disk.
pub type WeightFn = Arc<dyn Fn(Complex64) -> f64 + Send + Sync>;

#[derive(Clone)]
pub struct WeightedRobinProblem {
    rho: WeightFn,
    omega: WeightFn,
    beta: WeightFn,
    bound: f64,
}

impl fmt::Debug for WeightedRobinProblem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("WeightedRobinProblem")
            .field("bound", &self.bound)
            .finish_non_exhaustive()
    }
}

impl WeightedRobinProblem {
    pub fn new(rho: WeightFn, omega: WeightFn, beta: WeightFn, bound: f64) -> Result<Self> {
        if !(bound > 1.0) || !bound.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "weight bound must exceed 1, got {bound}"
            )));
        }
        Ok(Self {
            rho,
            omega,
            beta,
            bound,
        })
    }

    /// `ρ = ω = 1` and constant `β = alpha`: the plain Robin problem on the disk.
    pub fn constant(alpha: f64) -> Self {
        Self {
            rho: Arc::new(|_| 1.0),
            omega: Arc::new(|_| 1.0),
            beta: Arc::new(move |_| alpha),
            bound: (alpha.abs() + 1.0).max(2.0),
        }
    }

    pub fn bound(&self) -> f64 {
        self.bound
    }

    #[inline]
    pub fn rho(&self, z: Complex64) -> f64 {
        (self.rho)(z)
    }

    #[inline]
    pub fn omega(&self, z: Complex64) -> f64 {
        (self.omega)(z)
    }

    #[inline]
    pub fn beta(&self, z: Complex64) -> f64 {
        (self.beta)(z)
    }

    /// The same interior weights with boundary weight `s·β`.
    pub fn scale_beta(&self, s: f64) -> Result<Self> {
        let beta = self.beta.clone();
        let bound = self.bound.max(1.0 + s.abs() * self.bound);
        Self::new(
            self.rho.clone(),
            self.omega.clone(),
            Arc::new(move |z| s * beta(z)),
            bound,
        )
    }

    pub fn assemble(&self, mesh: &Mesh) -> Result<Assembled> {
        assemble(self, mesh)
    }

    /// The `count` lowest eigenpairs on `mesh`.
    pub fn solve(&self, mesh: &Mesh, count: usize) -> Result<SpectrumResult> {
        let asm = self.assemble(mesh)?;
        solve_lowest(&asm.k(), &asm.mass, count)
    }
}

/// Discrete Rayleigh quotient of the vertex values `u`.
pub fn rayleigh_quotient(problem: &WeightedRobinProblem, mesh: &Mesh, u: &[f64]) -> Result<f64> {
    if u.len() != mesh.n_vertices() {
        return Err(Error::InvalidParameter(format!(
            "{} values for {} vertices",
            u.len(),
            mesh.n_vertices()
        )));
    }
    problem.assemble(mesh)?.rayleigh(u)
}
