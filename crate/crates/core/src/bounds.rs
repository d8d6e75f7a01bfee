//! The comparison `λ₃(Ω; α/L)·A < 2π·λ₂(𝔻; α/4π)` on gallery domains, the
//! Steklov bound `σ₂L < 4π` via the Robin parameter root, and the lower
//! bounds for the pulled-apart double disk.

use std::f64::consts::PI;
use std::io::{self, Write};
use std::sync::Arc;
use std::time::Instant;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::diskmodes::disk_lambda2;
use crate::domains::{pullback_problem, DomainSpec};
use crate::femrobin::{build_disk_mesh, solve_lowest, Assembled, Mesh, WeightedRobinProblem};
use crate::trial::{trial_quotient, TrialContext};
use crate::{Error, Result};

/// Bisection stops once `|λ₃| < STEKLOV_TOL`.
pub const STEKLOV_TOL: f64 = 1e-6;

/// The parameter set used by the sweeps.
pub const ALPHA_SAMPLES: [f64; 4] = [-4.0 * PI, -2.0 * PI, -PI, 0.0];

/// One run of the main comparison.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    pub name: String,
    pub alpha: f64,
    pub rings: usize,
    /// `λ₃(Ω; α/L)·A` on `rings` rings.
    pub lhs: f64,
    /// `2π·λ₂(𝔻; α/4π)`.
    pub rhs: f64,
    pub margin: f64,
    /// `(4/3)|lhs(n) − lhs(2n)|`.
    pub err_estimate: f64,
    pub seconds: f64,
    /// The trial quotient of the conformal construction, in units of `Ω`.
    pub trial_quotient: Option<f64>,
    /// `λ₃(Ω; α/L)` on `rings` rings.
    pub lambda3: f64,
}

impl BoundReport {
    pub const CSV_HEADER: &'static str = "name,alpha,rings,lhs,rhs,margin,err_estimate,seconds";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{}",
            self.name,
            sig12(self.alpha),
            self.rings,
            sig12(self.lhs),
            sig12(self.rhs),
            sig12(self.margin),
            sig12(self.err_estimate),
            sig12(self.seconds)
        )
    }

    /// Margin positive and larger than the mesh error estimate.
    pub fn is_certified(&self) -> bool {
        self.margin > 0.0 && self.err_estimate < self.margin
    }
}

/// A float with 12 significant digits.
pub fn sig12(x: f64) -> String {
    format!("{x:.11e}")
}

pub fn write_reports_csv<W: Write>(mut out: W, reports: &[BoundReport]) -> io::Result<()> {
    writeln!(out, "{}", BoundReport::CSV_HEADER)?;
    for r in reports {
        writeln!(out, "{}", r.csv_row())?;
    }
    Ok(())
}

fn check_alpha(alpha: f64) -> Result<()> {
    if (-4.0 * PI..=0.0).contains(&alpha) {
        Ok(())
    } else {
        Err(Error::Range {
            value: alpha,
            range: "alpha in [-4π, 0]",
        })
    }
}

/// `λ₃(Ω; α/L)` on a given mesh.
pub fn lambda3(domain: &DomainSpec, alpha: f64, mesh: &Mesh) -> Result<f64> {
    Ok(pullback_problem(domain, alpha)?.solve(mesh, 3)?.eigenvalues[2])
}

/// The comparison on `n_rings` rings with a second solve on `2·n_rings`
/// for the error estimate.
pub fn verify_main(domain: &DomainSpec, alpha: f64, n_rings: usize) -> Result<BoundReport> {
    verify_main_with(domain, alpha, n_rings, false)
}

/// As [`verify_main`], attaching the trial quotient when `with_trial` is set.
pub fn verify_main_with(domain: &DomainSpec, alpha: f64, n_rings: usize, with_trial: bool) -> Result<BoundReport> {
    check_alpha(alpha)?;
    let start = Instant::now();
    let coarse = build_disk_mesh(n_rings)?;
    let fine = build_disk_mesh(2 * n_rings)?;
    let problem = pullback_problem(domain, alpha)?;
    let spectrum = problem.solve(&coarse, 3)?;
    let l3 = spectrum.eigenvalues[2];
    let l3_fine = problem.solve(&fine, 3)?.eigenvalues[2];
    let area = domain.area();
    let lhs = l3 * area;
    let rhs = 2.0 * PI * disk_lambda2(alpha / (4.0 * PI))?;
    let trial = if with_trial {
        let ctx = TrialContext::from_spectrum(domain, &coarse, alpha, &spectrum)?;
        Some(trial_quotient(&ctx)?.0)
    } else {
        None
    };
    Ok(BoundReport {
        name: domain.name().to_string(),
        alpha,
        rings: n_rings,
        lhs,
        rhs,
        margin: rhs - lhs,
        err_estimate: 4.0 / 3.0 * (lhs - l3_fine * area).abs(),
        seconds: start.elapsed().as_secs_f64(),
        trial_quotient: trial,
        lambda3: l3,
    })
}

/// Runs every (domain, alpha) pair in parallel; reports come back sorted by
/// name, then alpha.
pub fn sweep_main(domains: &[DomainSpec], alphas: &[f64], n_rings: usize) -> Result<Vec<BoundReport>> {
    let jobs: Vec<(&DomainSpec, f64)> = domains
        .iter()
        .flat_map(|d| alphas.iter().map(move |a| (d, *a)))
        .collect();
    let mut reports = jobs
        .into_par_iter()
        .map(|(d, a)| verify_main(d, a, n_rings))
        .collect::<Result<Vec<_>>>()?;
    reports.sort_by(|a, b| a.name.cmp(&b.name).then(a.alpha.total_cmp(&b.alpha)));
    Ok(reports)
}

/// `K(α) = S + α·B₁` for the pullback problem, with `λ_k(α)` monotone in `α`.
struct SteklovPencil {
    parts: Assembled,
    perimeter: f64,
}

impl SteklovPencil {
    fn new(domain: &DomainSpec, mesh: &Mesh) -> Result<Self> {
        // parameter L gives β = |f'|, so α/L·|f'| = (α/L)·β
        let parts = pullback_problem(domain, domain.perimeter())?.assemble(mesh)?;
        Ok(Self {
            parts,
            perimeter: domain.perimeter(),
        })
    }

    fn eigenvalue(&self, alpha: f64, k: usize) -> Result<f64> {
        let kmat = self.parts.stiffness.combine(1.0, &self.parts.boundary, alpha / self.perimeter);
        Ok(solve_lowest(&kmat, &self.parts.mass, k + 1)?.eigenvalues[k])
    }
}

/// `σ_k(Ω)` (zero-based `σ₀ = 0`) from the root `α_k` of `λ_{k+1}(Ω; α/L) = 0`
/// on `[−4π, 0]`: `σ_k = −α_k/L`.
pub fn steklov_sigma_k(domain: &DomainSpec, k: usize, n_rings: usize) -> Result<f64> {
    steklov_root(domain, k, n_rings).map(|a| -a / domain.perimeter())
}

/// `σ₂(Ω)` in the labelling `σ₀ = 0 < σ₁ ≤ σ₂ ≤ …`, the root of `λ₃(Ω; α/L) = 0`.
pub fn steklov_sigma2(domain: &DomainSpec, n_rings: usize) -> Result<f64> {
    steklov_sigma_k(domain, 2, n_rings)
}

/// `α` with `λ_{k+1}(Ω; α/L) = 0` (zero-based eigenvalue index `k`).
fn steklov_root(domain: &DomainSpec, k: usize, n_rings: usize) -> Result<f64> {
    let mesh = build_disk_mesh(n_rings)?;
    let pencil = SteklovPencil::new(domain, &mesh)?;
    let (mut lo, mut hi) = (-4.0 * PI, 0.0);
    let f_lo = pencil.eigenvalue(lo, k)?;
    if f_lo >= 0.0 {
        return Err(Error::Bracket(format!(
            "λ{}(Ω; −4π/L) = {f_lo:.3e} is not negative on {n_rings} rings",
            k + 1
        )));
    }
    let f_hi = pencil.eigenvalue(hi, k)?;
    if f_hi.abs() < STEKLOV_TOL {
        return Ok(hi);
    }
    if f_hi < 0.0 {
        return Err(Error::Bracket(format!("λ{}(Ω; 0) = {f_hi:.3e} is negative", k + 1)));
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let f = pencil.eigenvalue(mid, k)?;
        if f.abs() < STEKLOV_TOL || hi - lo < 1e-14 {
            return Ok(mid);
        }
        if f < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Perimeter of the union of two unit disks with centers `±(1 − ε)`.
pub fn union_perimeter(eps: f64) -> f64 {
    4.0 * PI - 4.0 * (1.0 - eps).acos()
}

/// Area of the union of two unit disks with centers `±(1 − ε)`.
pub fn union_area(eps: f64) -> f64 {
    let d = 1.0 - eps;
    let lens = 2.0 * (d.acos() - d * (1.0 - d * d).sqrt());
    2.0 * PI - lens
}

/// Weights on one disk of the pulled-apart pair: the overlap lens
/// `{|z| < 1, |z + 2 − 2ε| < 1}` carries `ρ = ω = 1/2`, and the boundary
/// arc inside it carries `β = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SaturationWeights {
    eps: f64,
    perimeter: f64,
}

impl SaturationWeights {
    pub fn new(eps: f64) -> Result<Self> {
        if !(eps > 0.0 && eps < 1.0) {
            return Err(Error::Range {
                value: eps,
                range: "eps in (0, 1)",
            });
        }
        Ok(Self {
            eps,
            perimeter: union_perimeter(eps),
        })
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    /// `L(ε)`.
    pub fn perimeter(&self) -> f64 {
        self.perimeter
    }

    pub fn in_lens(&self, z: Complex64) -> bool {
        (z + Complex64::new(2.0 - 2.0 * self.eps, 0.0)).norm() < 1.0
    }

    pub fn rho(&self, z: Complex64) -> f64 {
        if self.in_lens(z) {
            0.5
        } else {
            1.0
        }
    }

    /// `β_ε` at the radial projection of `z` onto the circle.
    pub fn beta_scale(&self, z: Complex64) -> f64 {
        let r = z.norm();
        let q = if r > 0.0 { z / r } else { z };
        if self.in_lens(q) {
            0.0
        } else {
            1.0
        }
    }

    /// Diameter of the lens, `2·sqrt(2ε − ε²)`.
    pub fn lens_diameter(&self) -> f64 {
        2.0 * (2.0 * self.eps - self.eps * self.eps).sqrt()
    }

    /// The weighted Robin problem with boundary weight `(alpha/ℓ)·β_ε`.
    pub fn problem_with_length(&self, alpha: f64, length: f64) -> Result<WeightedRobinProblem> {
        let w = *self;
        let s = alpha / length;
        WeightedRobinProblem::new(
            Arc::new(move |z| w.rho(z)),
            Arc::new(move |z| w.rho(z)),
            Arc::new(move |z| s * w.beta_scale(z)),
            (s.abs() + 1.0).max(2.0) + 1.0,
        )
    }

    /// The weighted Robin problem with boundary weight `(alpha/L(ε))·β_ε`.
    pub fn problem(&self, alpha: f64) -> Result<WeightedRobinProblem> {
        self.problem_with_length(alpha, self.perimeter)
    }
}

/// Eigenvalue `j` (one-based) of two disjoint copies of a disk problem whose
/// own eigenvalues are `single`: every value appears twice.
pub fn doubled_eigenvalue(single: &[f64], j: usize) -> Option<f64> {
    if j == 0 {
        return None;
    }
    single.get((j - 1) / 2).copied()
}

/// `λ_j(Ω₀; ρ_ε, α β_ε/L(ε))`, the lower bound for `λ_j(Ω_ε; α/L(ε))`.
pub fn saturation_lower(eps: f64, alpha: f64, j: usize, n_rings: usize) -> Result<f64> {
    check_alpha(alpha)?;
    let mesh = build_disk_mesh(n_rings)?;
    saturation_lower_on(&SaturationWeights::new(eps)?.problem(alpha)?, j, &mesh)
}

fn saturation_lower_on(problem: &WeightedRobinProblem, j: usize, mesh: &Mesh) -> Result<f64> {
    if j == 0 {
        return Err(Error::InvalidParameter("eigenvalue index starts at 1".into()));
    }
    let single = problem.solve(mesh, j.div_ceil(2))?;
    Ok(doubled_eigenvalue(&single.eigenvalues, j).expect("enough eigenvalues"))
}

/// One row of the saturation table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SaturationRow {
    pub eps: f64,
    /// `L(ε)`.
    pub perimeter: f64,
    /// `A(ε)`.
    pub area: f64,
    /// Lower bound with `α/L(ε)`.
    pub lower: f64,
    /// Lower bound with `α/4π`.
    pub lower_4pi: f64,
    /// Closed-form limit `λ₂(𝔻; α/4π)`.
    pub limit: f64,
    /// `|lower − limit| / |limit|` (absolute when the limit is 0).
    pub gap: f64,
}

impl SaturationRow {
    /// `lower·A(ε)`, to compare with `2π·λ₂(𝔻; α/4π)`.
    pub fn normalized(&self) -> f64 {
        self.lower * self.area
    }
}

/// Lower bounds for `j = 3` over `eps_list`, sorted by decreasing `ε`.
pub fn saturation_table(alpha: f64, eps_list: &[f64], n_rings: usize) -> Result<Vec<SaturationRow>> {
    check_alpha(alpha)?;
    let mesh = build_disk_mesh(n_rings)?;
    let limit = disk_lambda2(alpha / (4.0 * PI))?;
    let mut rows = eps_list
        .par_iter()
        .map(|&eps| {
            let w = SaturationWeights::new(eps)?;
            let lower = saturation_lower_on(&w.problem(alpha)?, 3, &mesh)?;
            let lower_4pi = saturation_lower_on(&w.problem_with_length(alpha, 4.0 * PI)?, 3, &mesh)?;
            let gap = if limit.abs() > 1e-12 {
                (lower - limit).abs() / limit.abs()
            } else {
                (lower - limit).abs()
            };
            Ok(SaturationRow {
                eps,
                perimeter: w.perimeter(),
                area: union_area(eps),
                lower,
                lower_4pi,
                limit,
                gap,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    rows.sort_by(|a, b| b.eps.total_cmp(&a.eps));
    Ok(rows)
}

/// One row of a weight-family convergence table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergenceRow {
    pub eps: f64,
    pub lambda: f64,
    pub limit: f64,
    /// `|λ_j(ε) − λ_j(0)|`.
    pub gap: f64,
}

/// `λ_j` of a weighted disk problem along a family `ε ↦ problem(ε)`,
/// compared with the limit problem on the same mesh. `j` is one-based.
pub fn convergence_check<F>(
    family: F,
    limit: &WeightedRobinProblem,
    eps_list: &[f64],
    j: usize,
    mesh: &Mesh,
) -> Result<Vec<ConvergenceRow>>
where
    F: Fn(f64) -> Result<WeightedRobinProblem> + Sync,
{
    if j == 0 {
        return Err(Error::InvalidParameter("eigenvalue index starts at 1".into()));
    }
    let target = limit.solve(mesh, j)?.eigenvalues[j - 1];
    let mut rows = eps_list
        .par_iter()
        .map(|&eps| {
            let lambda = family(eps)?.solve(mesh, j)?.eigenvalues[j - 1];
            Ok(ConvergenceRow {
                eps,
                lambda,
                limit: target,
                gap: (lambda - target).abs(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    rows.sort_by(|a, b| b.eps.total_cmp(&a.eps));
    Ok(rows)
}

/// The pulled-apart family on one disk and its limit `β = α/4π`.
pub fn saturation_family(alpha: f64) -> (impl Fn(f64) -> Result<WeightedRobinProblem> + Sync, WeightedRobinProblem) {
    (
        move |eps: f64| SaturationWeights::new(eps)?.problem(alpha),
        WeightedRobinProblem::constant(alpha / (4.0 * PI)),
    )
}

/// `ω_ε = 1 + ε·sin(3x)` with `ρ = 1`, `β = a`, and its limit `ω = 1`.
pub fn synthetic_family(a: f64) -> (impl Fn(f64) -> Result<WeightedRobinProblem> + Sync, WeightedRobinProblem) {
    (
        move |eps: f64| {
            WeightedRobinProblem::new(
                Arc::new(|_| 1.0),
                Arc::new(move |z: Complex64| 1.0 + eps * (3.0 * z.re).sin()),
                Arc::new(move |_| a),
                (a.abs() + 1.0).max(2.0) + eps,
            )
        },
        WeightedRobinProblem::constant(a),
    )
}

/// The family that ignores `ε`.
pub fn constant_family(a: f64) -> (impl Fn(f64) -> Result<WeightedRobinProblem> + Sync, WeightedRobinProblem) {
    (
        move |_: f64| Ok(WeightedRobinProblem::constant(a)),
        WeightedRobinProblem::constant(a),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domains::{gallery_domain, scale_coeffs};

    #[test]
    fn disk_neumann_report() {
        let disk = gallery_domain("disk").unwrap();
        let r = verify_main(&disk, 0.0, 10).unwrap();
        let l2 = disk_lambda2(0.0).unwrap();
        assert!((r.rhs - 2.0 * PI * l2).abs() < 1e-10);
        assert!((r.lhs - PI * l2).abs() < 0.02 * r.lhs);
        assert!((r.margin - r.rhs / 2.0).abs() < 0.02 * r.rhs);
        assert!(r.is_certified());
    }

    #[test]
    fn endpoint_report() {
        let d = gallery_domain("limacon").unwrap();
        let r = verify_main(&d, -4.0 * PI, 8).unwrap();
        assert!(r.rhs.abs() < 1e-10);
        assert!(r.lhs < 0.0 && r.margin > 0.0);
    }

    #[test]
    fn trial_quotient_bounds_lambda3() {
        let d = gallery_domain("mixed").unwrap();
        let r = verify_main_with(&d, -2.0 * PI, 8, true).unwrap();
        let q = r.trial_quotient.unwrap();
        assert!(q >= r.lambda3 - 10.0 * r.err_estimate / d.area());
        // the quotient scaled by the area stays below the comparison constant
        assert!(q * d.area() < r.rhs);
    }

    #[test]
    fn rejects_alpha_out_of_range() {
        let d = gallery_domain("disk").unwrap();
        assert!(verify_main(&d, 0.5, 6).is_err());
        assert!(saturation_lower(0.1, -20.0, 3, 6).is_err());
    }

    #[test]
    fn sweep_is_sorted() {
        let g = vec![gallery_domain("mixed").unwrap(), gallery_domain("disk").unwrap()];
        let r = sweep_main(&g, &[0.0, -PI], 6).unwrap();
        let keys: Vec<(String, f64)> = r.iter().map(|r| (r.name.clone(), r.alpha)).collect();
        assert_eq!(keys[0], ("disk".to_string(), -PI));
        assert_eq!(keys[3], ("mixed".to_string(), 0.0));
    }

    #[test]
    fn csv_has_twelve_digits() {
        assert_eq!(sig12(PI), "3.14159265359e0");
        let r = BoundReport {
            name: "x".into(),
            alpha: -1.0,
            rings: 4,
            lhs: 1.0,
            rhs: 2.0,
            margin: 1.0,
            err_estimate: 0.0,
            seconds: 0.5,
            trial_quotient: None,
            lambda3: 1.0,
        };
        assert_eq!(r.csv_row().split(',').count(), 8);
    }

    #[test]
    fn disk_steklov() {
        let disk = gallery_domain("disk").unwrap();
        let s = steklov_sigma2(&disk, 12).unwrap();
        assert!((s * disk.perimeter() - 2.0 * PI).abs() < 0.01 * 2.0 * PI);
        // σ of index 1 on the disk is 0 (constants)
        assert!(steklov_sigma_k(&disk, 0, 6).unwrap().abs() < 1e-6);
    }

    #[test]
    fn steklov_scale_invariant() {
        let d = gallery_domain("mixed").unwrap();
        let a = steklov_sigma2(&d, 8).unwrap() * d.perimeter();
        let big = scale_coeffs(&d, 2.5).unwrap();
        let b = steklov_sigma2(&big, 8).unwrap() * big.perimeter();
        assert!((a - b).abs() < 1e-4 * a);
        assert!(a < 4.0 * PI);
    }

    #[test]
    fn union_geometry() {
        assert!((union_perimeter(1.0 - 1e-15) - 2.0 * PI).abs() < 1e-6);
        assert!((union_area(1e-12) - 2.0 * PI).abs() < 1e-9);
        assert!((union_area(1.0) - PI).abs() < 1e-12);
        // 4π − L(ε) ≈ 4√(2ε)
        let e = 1e-6;
        assert!(((4.0 * PI - union_perimeter(e)) / (4.0 * (2.0 * e).sqrt()) - 1.0).abs() < 1e-3);
    }

    #[test]
    fn saturation_weights_shape() {
        let w = SaturationWeights::new(0.1).unwrap();
        assert_eq!(w.rho(Complex64::new(-0.95, 0.0)), 0.5);
        assert_eq!(w.rho(Complex64::new(-0.75, 0.0)), 1.0);
        assert_eq!(w.beta_scale(Complex64::new(-1.0, 0.0)), 0.0);
        assert_eq!(w.beta_scale(Complex64::new(0.0, 1.0)), 1.0);
        assert!(SaturationWeights::new(0.01).unwrap().lens_diameter() < w.lens_diameter());
        assert!(SaturationWeights::new(0.0).is_err());
    }

    #[test]
    fn doubled_spectrum() {
        let s = [1.0, 2.0, 5.0];
        assert_eq!(doubled_eigenvalue(&s, 1), Some(1.0));
        assert_eq!(doubled_eigenvalue(&s, 2), Some(1.0));
        assert_eq!(doubled_eigenvalue(&s, 3), Some(2.0));
        assert_eq!(doubled_eigenvalue(&s, 6), Some(5.0));
        assert_eq!(doubled_eigenvalue(&s, 7), None);
    }

    #[test]
    fn constant_family_has_zero_gap() {
        let mesh = build_disk_mesh(6).unwrap();
        let (fam, lim) = constant_family(-0.3);
        let rows = convergence_check(fam, &lim, &[0.3, 0.1], 2, &mesh).unwrap();
        assert!(rows.iter().all(|r| r.gap == 0.0));
    }

    #[test]
    fn synthetic_family_converges() {
        let mesh = build_disk_mesh(8).unwrap();
        let (fam, lim) = synthetic_family(0.2);
        let rows = convergence_check(fam, &lim, &[0.4, 0.2, 0.1], 2, &mesh).unwrap();
        assert!(rows.windows(2).all(|w| w[1].gap < w[0].gap));
    }
}
