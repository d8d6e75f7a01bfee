//! Conformal trial functions `u_{C,w} = v ∘ M_w ∘ G_C ∘ F_C ∘ B` on a
//! pulled-back domain, with the Hersch–Szegő point `w(C)`, the cylinder map
//! `Φ(p,t) = ∫ u_{C,w(C)} f₂`, and the search for a cap where `Φ` vanishes.
//!
//! Everything lives on the disk mesh: the normalized conformal map `B` of
//! `Ω = f(𝔻)` satisfies `B ∘ f = M_{w₀}`, and integrals over `Ω` become
//! integrals over `𝔻` against `|f'|²`. All integrals use the same 3-point
//! triangle rule as the finite element assembly.

use std::f64::consts::{PI, TAU};
use std::io::{self, Write};

use num_complex::Complex64;
use rayon::prelude::*;

use crate::caps::Cap;
use crate::conformal::mobius;
use crate::diskmodes::{disk_mode_energies, DiskMode, ModeEnergies};
use crate::domains::{pullback_problem, DomainSpec};
use crate::femrobin::{Mesh, SpectrumResult};
use crate::quadrature::TRIANGLE_3PT;
use crate::{Error, Result};

/// Relative gap below which `λ₂` and `λ₃` are treated as one eigenspace.
pub const DEGENERACY_TOL: f64 = 1e-3;

/// `|ζ| ≤ CASE_ONE_TOL · scale` selects the untwisted trial function.
pub const CASE_ONE_TOL: f64 = 1e-6;

/// Target `|V_C(w)|` relative to `g(1)·∫f₁|f'|²`.
pub const HERSCH_TOL: f64 = 1e-8;

/// Target `|Φ|` relative to `|ζ|`.
pub const CAP_TOL: f64 = 1e-6;

const FD_STEP: f64 = 1e-6;
const GRID_ANGLES: usize = 32;
const GRID_SIZES: usize = 17;
const GRID_T_MAX: f64 = 0.95;

/// The excited disk mode `v(z) = g(|z|) z/|z|`.
#[inline]
fn v_eval(mode: &DiskMode, z: Complex64) -> Complex64 {
    mode.eval_complex(z)
}

/// Data for the trial-function construction on one domain and parameter.
#[derive(Debug, Clone)]
pub struct TrialContext {
    pub domain: DomainSpec,
    pub mesh: Mesh,
    pub alpha: f64,
    /// `λ₁, λ₂, λ₃` of the discrete pullback problem.
    pub eigenvalues: [f64; 3],
    /// Ground state, positive.
    pub f1: Vec<f64>,
    /// Second eigenfunction (rotated within a degenerate pair to maximize `|ζ|`).
    pub f2: Vec<f64>,
    /// Hersch point: `∫(v∘M_{w₀}) f₁ |f'|² = 0`.
    pub w0: Complex64,
    /// `ζ = ∫(v∘B) f₂ dA`.
    pub zeta: Complex64,
    /// The disk mode at parameter `alpha/4π`.
    pub mode: DiskMode,
    pub energies: ModeEnergies,
    /// `g(1)·∫|f₁|` and `g(1)·∫|f₂|` over `Ω`, the orthogonality scales.
    pub scales: [f64; 2],
    /// Whether `λ₂, λ₃` were treated as degenerate.
    pub degenerate: bool,
    quad: Quadrature,
}

/// Quadrature nodes of the mesh with `|f'|²`-weights and interpolated
/// eigenfunctions.
#[derive(Debug, Clone)]
struct Quadrature {
    weight: Vec<f64>,
    f1: Vec<f64>,
    f2: Vec<f64>,
    /// `B ∘ f = M_{w₀}` at each node.
    xi0: Vec<Complex64>,
    z: Vec<Complex64>,
}

fn interpolate(mesh: &Mesh, u: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(3 * mesh.triangles.len());
    for t in &mesh.triangles {
        for b in &TRIANGLE_3PT {
            out.push(b[0] * u[t[0]] + b[1] * u[t[1]] + b[2] * u[t[2]]);
        }
    }
    out
}

/// Zero of a smooth map `ℂ ⊇ 𝔻 → ℂ` by damped Newton with a central
/// finite-difference Jacobian, staying inside `|w| < 1`.
fn newton_zero<F: Fn(Complex64) -> Complex64>(
    f: &F,
    start: Complex64,
    tol: f64,
    max_iter: usize,
) -> Option<(Complex64, f64)> {
    let mut w = start;
    let mut fw = f(w);
    for _ in 0..max_iter {
        let res = fw.norm();
        if res < tol {
            return Some((w, res));
        }
        let h = FD_STEP;
        let dx = (f(w + h) - f(w - h)) / (2.0 * h);
        let dy = (f(w + Complex64::i() * h) - f(w - Complex64::i() * h)) / (2.0 * h);
        let det = dx.re * dy.im - dy.re * dx.im;
        if !(det.abs() > 0.0) || !det.is_finite() {
            return None;
        }
        // solve [dx dy] · (a, b) = −F for the real step (a, b)
        let a = -(dy.im * fw.re - dy.re * fw.im) / det;
        let b = -(-dx.im * fw.re + dx.re * fw.im) / det;
        let step = Complex64::new(a, b);
        let mut s = 1.0;
        let mut accepted = false;
        while s > 1e-6 {
            let cand = w + step * s;
            if cand.norm() < 1.0 - 1e-9 {
                let fc = f(cand);
                if fc.norm() < res {
                    w = cand;
                    fw = fc;
                    accepted = true;
                    break;
                }
            }
            s *= 0.5;
        }
        if !accepted {
            return if res < tol { Some((w, res)) } else { None };
        }
    }
    let res = fw.norm();
    (res < tol).then_some((w, res))
}

/// Nodes `ξ_q = G_C(F_C(B(z_q)))` for one cap.
#[derive(Debug, Clone)]
pub struct CapImage {
    pub cap: Cap,
    xi: Vec<Complex64>,
}

impl TrialContext {
    /// Solves the pullback problem for the first three eigenpairs and fixes
    /// `f₁`, `f₂`, `w₀` and `ζ`.
    pub fn new(domain: &DomainSpec, mesh: &Mesh, alpha: f64) -> Result<Self> {
        let problem = pullback_problem(domain, alpha)?;
        let spectrum = problem.solve(mesh, 3)?;
        Self::from_spectrum(domain, mesh, alpha, &spectrum)
    }

    /// As [`TrialContext::new`] with a precomputed spectrum (at least three pairs).
    pub fn from_spectrum(
        domain: &DomainSpec,
        mesh: &Mesh,
        alpha: f64,
        spectrum: &SpectrumResult,
    ) -> Result<Self> {
        if !(-4.0 * PI..=0.0).contains(&alpha) {
            return Err(Error::Range {
                value: alpha,
                range: "alpha in [-4π, 0]",
            });
        }
        if spectrum.len() < 3 {
            return Err(Error::InvalidParameter("need three eigenpairs".into()));
        }
        let mode = DiskMode::excited(alpha / (4.0 * PI))?;
        let energies = disk_mode_energies(alpha / (4.0 * PI))?;
        let g1 = mode.boundary_value();

        let mut f1 = spectrum.eigenfunctions[0].clone();
        if f1.iter().sum::<f64>() < 0.0 {
            f1.iter_mut().for_each(|x| *x = -*x);
        }
        let mut z = Vec::with_capacity(3 * mesh.triangles.len());
        let mut weight = Vec::with_capacity(3 * mesh.triangles.len());
        for (ti, t) in mesh.triangles.iter().enumerate() {
            let area = mesh.triangle_area(ti);
            for b in &TRIANGLE_3PT {
                let q = mesh.vertices[t[0]] * b[0] + mesh.vertices[t[1]] * b[1] + mesh.vertices[t[2]] * b[2];
                z.push(q);
                weight.push(area / 3.0 * domain.fprime(q).norm_sqr());
            }
        }
        let q1 = interpolate(mesh, &f1);
        let mass1: f64 = q1.iter().zip(&weight).map(|(f, w)| f.abs() * w).sum();

        // Hersch point for the untwisted map
        let field = |w: Complex64| -> Complex64 {
            z.iter()
                .zip(&q1)
                .zip(&weight)
                .map(|((zq, f), wt)| v_eval(&mode, mobius(w, *zq)) * (f * wt))
                .sum()
        };
        let tol = HERSCH_TOL * g1 * mass1;
        let w0 = hersch_search(&field, None, tol)?;
        let xi0: Vec<Complex64> = z.iter().map(|zq| mobius(w0, *zq)).collect();

        let v0: Vec<Complex64> = xi0.iter().map(|x| v_eval(&mode, *x)).collect();
        let pair = |u: &[f64]| -> Complex64 {
            v0.iter()
                .zip(u)
                .zip(&weight)
                .map(|((v, f), w)| v * (f * w))
                .sum()
        };
        let (l2, l3) = (spectrum.eigenvalues[1], spectrum.eigenvalues[2]);
        let degenerate = (l3 - l2).abs() <= DEGENERACY_TOL * l2.abs().max(l3.abs()) + 1e-12;
        let mut f2 = spectrum.eigenfunctions[1].clone();
        if degenerate {
            let f3 = &spectrum.eigenfunctions[2];
            let z2 = pair(&interpolate(mesh, &f2));
            let z3 = pair(&interpolate(mesh, f3));
            // maximize |c₂ζ₂ + c₃ζ₃|² over unit (c₂, c₃): top eigenvector of the Gram matrix
            let a = z2.norm_sqr();
            let c = z3.norm_sqr();
            let b = (z2 * z3.conj()).re;
            let theta = 0.5 * (2.0 * b).atan2(a - c);
            let (c2, c3) = (theta.cos(), theta.sin());
            f2 = f2.iter().zip(f3).map(|(x, y)| c2 * x + c3 * y).collect();
            let big = f2.iter().copied().fold(0.0f64, |m, x| if x.abs() > m.abs() { x } else { m });
            if big < 0.0 {
                f2.iter_mut().for_each(|x| *x = -*x);
            }
        }
        let q2 = interpolate(mesh, &f2);
        let zeta = pair(&q2);
        let mass2: f64 = q2.iter().zip(&weight).map(|(f, w)| f.abs() * w).sum();

        Ok(Self {
            domain: domain.clone(),
            mesh: mesh.clone(),
            alpha,
            eigenvalues: [spectrum.eigenvalues[0], l2, l3],
            f1,
            f2,
            w0,
            zeta,
            mode,
            energies,
            scales: [g1 * mass1, g1 * mass2],
            degenerate,
            quad: Quadrature {
                weight,
                f1: q1,
                f2: q2,
                xi0,
                z,
            },
        })
    }

    /// `|ζ| ≤ 10⁻⁶·scale`: `v∘B` itself is orthogonal to `f₂`.
    pub fn is_case_one(&self) -> bool {
        self.zeta.norm() <= CASE_ONE_TOL * self.scales[1]
    }

    /// Number of quadrature nodes.
    pub fn n_nodes(&self) -> usize {
        self.quad.weight.len()
    }

    /// Quadrature nodes `z_q ∈ 𝔻`.
    pub fn nodes(&self) -> &[Complex64] {
        &self.quad.z
    }

    /// `B(f(z_q)) = M_{w₀}(z_q)`.
    pub fn normalized_nodes(&self) -> &[Complex64] {
        &self.quad.xi0
    }

    pub fn cap_image(&self, cap: &Cap) -> CapImage {
        CapImage {
            cap: *cap,
            xi: self.quad.xi0.iter().map(|x| cap.fold_to_disk(*x)).collect(),
        }
    }

    fn integrate_against(&self, xi: &[Complex64], w: Complex64, f: &[f64]) -> Complex64 {
        xi.iter()
            .zip(f)
            .zip(&self.quad.weight)
            .map(|((x, fq), wt)| v_eval(&self.mode, mobius(w, *x)) * (fq * wt))
            .sum()
    }

    /// `V_C(w) = ∫(v∘M_w∘G_C∘F_C∘B) f₁ dA`.
    pub fn field(&self, image: &CapImage, w: Complex64) -> Complex64 {
        self.integrate_against(&image.xi, w, &self.quad.f1)
    }

    /// `∫ u_{C,w} f₂ dA`.
    pub fn pairing_f2(&self, image: &CapImage, w: Complex64) -> Complex64 {
        self.integrate_against(&image.xi, w, &self.quad.f2)
    }

    /// Zero of `V_C`, Newton-refined from `warm` when given.
    pub fn hersch_point(&self, image: &CapImage, warm: Option<Complex64>) -> Result<Complex64> {
        let f = |w: Complex64| self.field(image, w);
        hersch_search(&f, warm, HERSCH_TOL * self.scales[0])
    }

    /// `∫|u_{C,w}|² dA` over `Ω`.
    pub fn trial_mass(&self, image: &CapImage, w: Complex64) -> f64 {
        image
            .xi
            .iter()
            .zip(&self.quad.weight)
            .map(|(x, wt)| v_eval(&self.mode, mobius(w, *x)).norm_sqr() * wt)
            .sum()
    }

    /// `∫|v∘B|² dA` over `Ω`.
    pub fn untwisted_mass(&self) -> f64 {
        self.quad
            .xi0
            .iter()
            .zip(&self.quad.weight)
            .map(|(x, wt)| v_eval(&self.mode, *x).norm_sqr() * wt)
            .sum()
    }

    /// `Φ` together with the Hersch point it was evaluated at.
    pub fn phi_with_point(&self, cap: &Cap, warm: Option<Complex64>) -> Result<(Complex64, Complex64)> {
        let image = self.cap_image(cap);
        let w = self.hersch_point(&image, warm)?;
        Ok((self.pairing_f2(&image, w), w))
    }
}

/// Zero of a Hersch field: Newton from the warm start, then from the best
/// points of an 11×11 polar grid over `|w| ≤ 0.95`.
fn hersch_search<F: Fn(Complex64) -> Complex64>(f: &F, warm: Option<Complex64>, tol: f64) -> Result<Complex64> {
    if let Some(w) = warm {
        if let Some((z, _)) = newton_zero(f, w, tol, 40) {
            return Ok(z);
        }
    }
    let mut grid: Vec<(f64, Complex64)> = Vec::with_capacity(121);
    for i in 0..11 {
        let r = 0.095 * i as f64;
        for j in 0..11 {
            if i == 0 && j > 0 {
                break;
            }
            let w = Complex64::from_polar(r, TAU * j as f64 / 11.0);
            grid.push((f(w).norm(), w));
        }
    }
    grid.sort_by(|a, b| a.0.total_cmp(&b.0));
    for &(_, start) in grid.iter().take(3) {
        if let Some((z, _)) = newton_zero(f, start, tol, 60) {
            return Ok(z);
        }
    }
    Err(Error::SearchFailure(format!(
        "no zero of the Hersch field found (best grid residual {:.3e}, tolerance {tol:.3e})",
        grid[0].0
    )))
}

/// `V_C(w)` for the context's ground state.
pub fn vector_field_v(ctx: &TrialContext, cap: &Cap, w: Complex64) -> Complex64 {
    ctx.field(&ctx.cap_image(cap), w)
}

/// The Hersch–Szegő point `w(C)` with `V_C(w(C)) = 0`.
pub fn find_normalizing_point(ctx: &TrialContext, cap: &Cap) -> Result<Complex64> {
    ctx.hersch_point(&ctx.cap_image(cap), None)
}

/// `Φ(p,t) = ∫ u_{C,w(C)} f₂ dA`.
pub fn phi(ctx: &TrialContext, cap: &Cap) -> Result<Complex64> {
    Ok(ctx.phi_with_point(cap, None)?.0)
}

/// Winding number of the closed loop through `samples` around the origin.
/// Fails when two consecutive samples differ in argument by `π` or more.
pub fn winding_number(samples: &[Complex64]) -> Result<i64> {
    if samples.is_empty() {
        return Err(Error::InvalidParameter("empty loop".into()));
    }
    if let Some(z) = samples.iter().find(|z| !(z.norm() > 0.0)) {
        return Err(Error::Domain(*z, "loop passes through the origin"));
    }
    let n = samples.len();
    let mut total = 0.0;
    for k in 0..n {
        let jump = (samples[(k + 1) % n] / samples[k]).arg();
        if jump.abs() >= PI * (1.0 - 1e-12) {
            return Err(Error::Refinement { index: k, jump });
        }
        total += jump;
    }
    Ok((total / TAU).round() as i64)
}

/// Winding of `p ↦ Φ(p, t)` from `n` equally spaced angles, doubling the
/// sample count (up to 1024) while the argument jumps are too large.
pub fn phi_loop_winding(ctx: &TrialContext, t: f64, n: usize) -> Result<i64> {
    let mut n = n.max(4);
    loop {
        let samples: Vec<Complex64> = (0..n)
            .into_par_iter()
            .map(|k| phi(ctx, &Cap::new(TAU * k as f64 / n as f64, t)?))
            .collect::<Result<_>>()?;
        match winding_number(&samples) {
            Err(Error::Refinement { .. }) if n < 1024 => n *= 2,
            other => return other,
        }
    }
}

/// `Φ` sampled on a grid of angles × sizes; rows `(p_angle, t, Φ)`.
pub fn phi_grid(ctx: &TrialContext, n_angles: usize, sizes: &[f64]) -> Result<Vec<(f64, f64, Complex64)>> {
    let columns: Vec<Vec<(f64, f64, Complex64)>> = (0..n_angles)
        .into_par_iter()
        .map(|k| {
            let angle = TAU * k as f64 / n_angles as f64;
            let mut warm = None;
            let mut col = Vec::with_capacity(sizes.len());
            for &t in sizes {
                let (ph, w) = ctx.phi_with_point(&Cap::new(angle, t)?, warm)?;
                warm = Some(w);
                col.push((angle, t, ph));
            }
            Ok(col)
        })
        .collect::<Result<_>>()?;
    Ok(columns.into_iter().flatten().collect())
}

/// CSV with columns `p_angle,t,re_phi,im_phi`.
pub fn write_phi_csv<W: Write>(mut out: W, grid: &[(f64, f64, Complex64)]) -> io::Result<()> {
    writeln!(out, "p_angle,t,re_phi,im_phi")?;
    for (a, t, ph) in grid {
        writeln!(out, "{a:.11e},{t:.11e},{:.11e},{:.11e}", ph.re, ph.im)?;
    }
    Ok(())
}

/// A cap where the trial function is orthogonal to `f₁` and `f₂`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CapSolution {
    pub cap: Cap,
    /// Hersch point `w(C)`.
    pub w: Complex64,
    /// `Φ` at the solution.
    pub phi: Complex64,
    /// `|∫u f₁| / scale₁`.
    pub orth_f1: f64,
    /// `|∫u f₂| / scale₂`.
    pub orth_f2: f64,
}

fn t_of(s: f64) -> f64 {
    s.tanh().clamp(-1.0 + 1e-6, 1.0 - 1e-6)
}

fn nelder_mead<F: Fn([f64; 2]) -> f64>(f: &F, start: [f64; 2], step: [f64; 2], iters: usize, ftol: f64) -> ([f64; 2], f64) {
    let mut simplex = [
        start,
        [start[0] + step[0], start[1]],
        [start[0], start[1] + step[1]],
    ];
    let mut vals = simplex.map(f);
    for _ in 0..iters {
        let mut idx = [0, 1, 2];
        idx.sort_by(|&a, &b| vals[a].total_cmp(&vals[b]));
        simplex = idx.map(|i| simplex[i]);
        vals = idx.map(|i| vals[i]);
        if vals[0] < ftol {
            break;
        }
        let size = (simplex[1][0] - simplex[0][0]).abs().max((simplex[1][1] - simplex[0][1]).abs())
            .max((simplex[2][0] - simplex[0][0]).abs().max((simplex[2][1] - simplex[0][1]).abs()));
        if size < 1e-12 {
            break;
        }
        let c = [0.5 * (simplex[0][0] + simplex[1][0]), 0.5 * (simplex[0][1] + simplex[1][1])];
        let at = |k: f64| [c[0] + k * (simplex[2][0] - c[0]), c[1] + k * (simplex[2][1] - c[1])];
        let xr = at(-1.0);
        let fr = f(xr);
        if fr < vals[0] {
            let xe = at(-2.0);
            let fe = f(xe);
            if fe < fr {
                simplex[2] = xe;
                vals[2] = fe;
            } else {
                simplex[2] = xr;
                vals[2] = fr;
            }
        } else if fr < vals[1] {
            simplex[2] = xr;
            vals[2] = fr;
        } else {
            let xc = if fr < vals[2] { at(-0.5) } else { at(0.5) };
            let fc = f(xc);
            if fc < vals[2].min(fr) {
                simplex[2] = xc;
                vals[2] = fc;
            } else {
                for k in 1..3 {
                    simplex[k] = [
                        0.5 * (simplex[0][0] + simplex[k][0]),
                        0.5 * (simplex[0][1] + simplex[k][1]),
                    ];
                    vals[k] = f(simplex[k]);
                }
            }
        }
    }
    let best = (0..3).min_by(|&a, &b| vals[a].total_cmp(&vals[b])).unwrap();
    (simplex[best], vals[best])
}

/// Searches the cap cylinder for `Φ(p,t) = 0`: a 32×17 grid over
/// `[0, 2π) × [−0.95, 0.95]`, Nelder–Mead on `|Φ|²` from the best grid
/// points, and a Newton polish on `Φ`.
pub fn find_orthogonal_cap(ctx: &TrialContext) -> Result<CapSolution> {
    if ctx.is_case_one() {
        return Err(Error::InvalidParameter(format!(
            "|ζ| = {:.3e} is below the case threshold; v∘B is already orthogonal to f2",
            ctx.zeta.norm()
        )));
    }
    let sizes: Vec<f64> = (0..GRID_SIZES)
        .map(|k| GRID_T_MAX - 2.0 * GRID_T_MAX * k as f64 / (GRID_SIZES - 1) as f64)
        .collect();
    let grid = phi_grid(ctx, GRID_ANGLES, &sizes)?;
    let target = CAP_TOL * ctx.zeta.norm();
    let mut order: Vec<usize> = (0..grid.len()).collect();
    order.sort_by(|&a, &b| grid[a].2.norm().total_cmp(&grid[b].2.norm()));

    let eval = |x: [f64; 2], warm: Option<Complex64>| -> Result<(Complex64, Complex64)> {
        ctx.phi_with_point(&Cap::new(x[0], t_of(x[1]))?, warm)
    };
    let mut best_failure = f64::INFINITY;
    for &start in order.iter().take(4) {
        let (a0, t0, _) = grid[start];
        let x0 = [a0, t0.atanh()];
        let objective = |x: [f64; 2]| eval(x, None).map(|(p, _)| p.norm_sqr()).unwrap_or(f64::INFINITY);
        let (mut x, _) = nelder_mead(&objective, x0, [TAU / GRID_ANGLES as f64 / 2.0, 0.1], 80, (0.01 * target).powi(2));
        // Newton polish on the real 2×2 system Φ(x) = 0
        let Ok((mut ph, mut w)) = eval(x, None) else { continue };
        for _ in 0..30 {
            if ph.norm() < target {
                break;
            }
            let h = 1e-6;
            let d0 = (eval([x[0] + h, x[1]], Some(w))?.0 - eval([x[0] - h, x[1]], Some(w))?.0) / (2.0 * h);
            let d1 = (eval([x[0], x[1] + h], Some(w))?.0 - eval([x[0], x[1] - h], Some(w))?.0) / (2.0 * h);
            let det = d0.re * d1.im - d1.re * d0.im;
            if !(det.abs() > 0.0) {
                break;
            }
            let da = -(d1.im * ph.re - d1.re * ph.im) / det;
            let db = -(-d0.im * ph.re + d0.re * ph.im) / det;
            let mut s = 1.0;
            let mut moved = false;
            while s > 1e-4 {
                let cand = [x[0] + s * da, x[1] + s * db];
                if let Ok((pc, wc)) = eval(cand, Some(w)) {
                    if pc.norm() < ph.norm() {
                        x = cand;
                        ph = pc;
                        w = wc;
                        moved = true;
                        break;
                    }
                }
                s *= 0.5;
            }
            if !moved {
                break;
            }
        }
        if ph.norm() < target {
            let cap = Cap::new(x[0], t_of(x[1]))?;
            let image = ctx.cap_image(&cap);
            let v1 = ctx.field(&image, w);
            return Ok(CapSolution {
                cap,
                w,
                phi: ph,
                orth_f1: v1.norm() / ctx.scales[0],
                orth_f2: ph.norm() / ctx.scales[1],
            });
        }
        best_failure = best_failure.min(ph.norm());
    }
    Err(Error::SearchFailure(format!(
        "no cap with |Φ| < {target:.3e} (best {best_failure:.3e})"
    )))
}

/// Numerator `2∫|∇v|² + α g(1)²` (exact, by conformal invariance on each
/// fold sheet) and denominator `∫|u_{C,w}|²` (quadrature).
pub fn trial_rayleigh_pieces(ctx: &TrialContext, cap: &Cap, w: Complex64) -> (f64, f64) {
    let numerator = 2.0 * ctx.energies.dirichlet + ctx.alpha * ctx.energies.boundary;
    (numerator, ctx.trial_mass(&ctx.cap_image(cap), w))
}

/// Pieces for the untwisted trial function `v∘B`: `∫|∇v|² + α g(1)²` and `∫|v∘B|²`.
pub fn untwisted_rayleigh_pieces(ctx: &TrialContext) -> (f64, f64) {
    let numerator = ctx.energies.dirichlet + ctx.alpha * ctx.energies.boundary;
    (numerator, ctx.untwisted_mass())
}

/// The trial quotient selected by the case split: `v∘B` when `ζ ≈ 0`,
/// otherwise `u_{C,w(C)}` at the orthogonal cap.
pub fn trial_quotient(ctx: &TrialContext) -> Result<(f64, Option<CapSolution>)> {
    if ctx.is_case_one() {
        let (n, d) = untwisted_rayleigh_pieces(ctx);
        Ok((n / d, None))
    } else {
        let sol = find_orthogonal_cap(ctx)?;
        let (n, d) = trial_rayleigh_pieces(ctx, &sol.cap, sol.w);
        Ok((n / d, Some(sol)))
    }
}
