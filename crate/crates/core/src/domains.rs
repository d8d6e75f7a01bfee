//! Planar domains given as polynomial images `Ω = f(𝔻)` of the unit disk,
//! `f(z) = c₁z + c₂z² + … + c_d z^d`.
//!
//! The Robin problem on `Ω` with parameter `α/L` is pulled back to the disk:
//! the Dirichlet energy is conformally invariant, the area element picks up
//! `|f'|²` and arclength picks up `|f'|`.

use std::f64::consts::PI;
use std::path::Path;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::conformal::mobius;
use crate::femrobin::WeightedRobinProblem;
use crate::quadrature::gauss_legendre;
use crate::{Error, Result};

/// Boundary samples for the univalence checks and the weight extrema.
const BOUNDARY_SAMPLES: usize = 4096;

/// Relative closest-approach threshold for distinct boundary samples.
const INJECTIVITY_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub struct DomainSpec {
    name: String,
    coeffs: Vec<Complex64>,
    area: f64,
    perimeter: f64,
    sup_fprime: f64,
    inf_fprime: f64,
}

/// Horner evaluation of `Σ_{k≥1} c_k z^k`.
fn eval_f(coeffs: &[Complex64], z: Complex64) -> Complex64 {
    coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| (acc + c) * z)
}

/// Horner evaluation of `Σ_{k≥1} k c_k z^{k−1}`.
fn eval_fprime(coeffs: &[Complex64], z: Complex64) -> Complex64 {
    coeffs
        .iter()
        .enumerate()
        .rev()
        .fold(Complex64::new(0.0, 0.0), |acc, (k, c)| acc * z + c * (k + 1) as f64)
}

fn circle_point(j: usize, n: usize) -> Complex64 {
    Complex64::from_polar(1.0, 2.0 * PI * j as f64 / n as f64)
}

/// Roots of the polynomial with the given ascending coefficients
/// (Durand–Kerner iteration).
fn poly_roots(coeffs: &[Complex64]) -> Vec<Complex64> {
    let deg = coeffs.len() - 1;
    if deg == 0 {
        return Vec::new();
    }
    let lead = coeffs[deg];
    let monic: Vec<Complex64> = coeffs.iter().map(|c| c / lead).collect();
    let eval = |z: Complex64| monic.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| acc * z + c);
    let seed = Complex64::new(0.4, 0.9);
    let mut roots: Vec<Complex64> = (0..deg).map(|k| seed.powu(k as u32)).collect();
    for _ in 0..500 {
        let mut moved = 0.0f64;
        for i in 0..deg {
            let mut den = Complex64::new(1.0, 0.0);
            for j in 0..deg {
                if i != j {
                    den *= roots[i] - roots[j];
                }
            }
            let step = eval(roots[i]) / den;
            roots[i] -= step;
            moved = moved.max(step.norm());
        }
        if moved < 1e-15 {
            break;
        }
    }
    roots
}

/// Two points straddling the critical point `z0`; their images agree to
/// third order in the offset.
fn critical_witness(z0: Complex64) -> (Complex64, Complex64) {
    let delta = 1e-4;
    let r = z0.norm();
    let base = if r > 1.0 - 2.0 * delta {
        z0 * ((1.0 - 2.0 * delta) / r)
    } else {
        z0
    };
    (base + delta, base - delta)
}

fn segments_cross(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> bool {
    let orient = |p: Complex64, q: Complex64, r: Complex64| {
        (q - p).re * (r - p).im - (q - p).im * (r - p).re
    };
    let d1 = orient(a, b, c);
    let d2 = orient(a, b, d);
    let d3 = orient(c, d, a);
    let d4 = orient(c, d, b);
    d1 * d2 < 0.0 && d3 * d4 < 0.0
}

/// Checks that `f` is univalent on the closed disk: `f'` has no zero there
/// (winding of `f'` around the circle) and the sampled boundary curve is a
/// simple polygon without near-touching samples.
fn check_univalence(coeffs: &[Complex64]) -> Result<()> {
    let n = BOUNDARY_SAMPLES;
    let fp: Vec<Complex64> = (0..n).map(|j| eval_fprime(coeffs, circle_point(j, n))).collect();
    let mut winding = 0.0;
    let mut min_fp = f64::INFINITY;
    for j in 0..n {
        min_fp = min_fp.min(fp[j].norm());
        winding += (fp[(j + 1) % n] / fp[j]).arg();
    }
    let winding = (winding / (2.0 * PI)).round() as i64;
    if winding != 0 || !(min_fp > 1e-12) {
        let dcoeffs: Vec<Complex64> = coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| c * (k + 1) as f64)
            .collect();
        let z0 = poly_roots(&dcoeffs)
            .into_iter()
            .min_by(|a, b| a.norm().total_cmp(&b.norm()))
            .unwrap_or(Complex64::new(0.0, 0.0));
        let (z1, z2) = critical_witness(z0);
        return Err(Error::NotUnivalent { z1, z2 });
    }

    let pts: Vec<Complex64> = (0..n).map(|j| eval_f(coeffs, circle_point(j, n))).collect();
    let diam = pts
        .iter()
        .flat_map(|a| pts.iter().step_by(16).map(move |b| (a - b).norm()))
        .fold(0.0, f64::max);
    let thresh = INJECTIVITY_TOL * diam;
    // sweep over segments sorted by the left edge of their padded bounding box
    let bbox = |i: usize| {
        let (a, b) = (pts[i], pts[(i + 1) % n]);
        (a.re.min(b.re) - thresh, a.re.max(b.re) + thresh)
    };
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| bbox(a).0.total_cmp(&bbox(b).0));
    let mut active: Vec<usize> = Vec::new();
    for &i in &order {
        let (lo, _) = bbox(i);
        active.retain(|&j| bbox(j).1 >= lo);
        for &j in &active {
            let gap = (i + n - j) % n;
            if gap == 1 || gap == n - 1 {
                continue;
            }
            let close = (pts[i] - pts[j]).norm() < thresh;
            if close || segments_cross(pts[i], pts[(i + 1) % n], pts[j], pts[(j + 1) % n]) {
                return Err(Error::NotUnivalent {
                    z1: circle_point(i.min(j), n),
                    z2: circle_point(i.max(j), n),
                });
            }
        }
        active.push(i);
    }
    Ok(())
}

/// Builds a validated domain from the coefficients `(c₁, …, c_d)`.
pub fn make_domain(coeffs: &[Complex64], name: &str) -> Result<DomainSpec> {
    let mut coeffs = coeffs.to_vec();
    while coeffs.len() > 1 && coeffs.last().is_some_and(|c| c.norm() == 0.0) {
        coeffs.pop();
    }
    if coeffs.is_empty() || coeffs[0].norm() == 0.0 {
        return Err(Error::InvalidParameter(format!(
            "domain '{name}': leading coefficient c1 must be nonzero"
        )));
    }
    if coeffs.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "domain '{name}': non-finite coefficient"
        )));
    }
    check_univalence(&coeffs)?;

    let area = PI
        * coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| (k + 1) as f64 * c.norm_sqr())
            .sum::<f64>();
    let d = coeffs.len();
    let np = 64 * d;
    let perimeter = (0..np)
        .map(|j| eval_fprime(&coeffs, circle_point(j, np)).norm())
        .sum::<f64>()
        * (2.0 * PI / np as f64);
    let (mut sup, mut inf) = (0.0f64, f64::INFINITY);
    for j in 0..BOUNDARY_SAMPLES {
        let m = eval_fprime(&coeffs, circle_point(j, BOUNDARY_SAMPLES)).norm();
        sup = sup.max(m);
        inf = inf.min(m);
    }
    Ok(DomainSpec {
        name: name.to_string(),
        coeffs,
        area,
        perimeter,
        sup_fprime: sup,
        inf_fprime: inf,
    })
}

impl DomainSpec {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len()
    }

    /// Area `π Σ k|c_k|²`.
    pub fn area(&self) -> f64 {
        self.area
    }

    /// Perimeter `∫|f'(e^{iθ})| dθ`.
    pub fn perimeter(&self) -> f64 {
        self.perimeter
    }

    /// `sup_𝔻 |f'|` (attained on the circle).
    pub fn sup_fprime(&self) -> f64 {
        self.sup_fprime
    }

    /// `inf_𝔻 |f'|` (attained on the circle since `f'` has no zeros).
    pub fn inf_fprime(&self) -> f64 {
        self.inf_fprime
    }

    /// Whether `f` is a rotation-dilation, i.e. `Ω` is a disk.
    pub fn is_disk(&self) -> bool {
        self.coeffs.len() == 1
    }

    #[inline]
    pub fn f(&self, z: Complex64) -> Complex64 {
        eval_f(&self.coeffs, z)
    }

    #[inline]
    pub fn fprime(&self, z: Complex64) -> Complex64 {
        eval_fprime(&self.coeffs, z)
    }

    /// `∫_𝔻 |f'|² dA` by Gauss–Legendre in `r` and the trapezoid rule in `θ`
    /// (both exact for polynomial `f`).
    pub fn area_by_quadrature(&self) -> f64 {
        let d = self.coeffs.len();
        let (x, w) = gauss_legendre(d + 2);
        let nt = 4 * d + 4;
        let mut total = 0.0;
        for (xi, wi) in x.iter().zip(&w) {
            let r = 0.5 * (xi + 1.0);
            let ring: f64 = (0..nt)
                .map(|j| self.fprime(circle_point(j, nt) * r).norm_sqr())
                .sum::<f64>()
                * (2.0 * PI / nt as f64);
            total += 0.5 * wi * ring * r;
        }
        total
    }

    /// The weight bound used for the pulled-back problem.
    pub fn weight_bound(&self, alpha: f64) -> f64 {
        let sup = self.sup_fprime;
        let inf = self.inf_fprime;
        (2.0f64)
            .max(sup * sup)
            .max(1.0 / (inf * inf))
            .max(alpha.abs() / self.perimeter * sup)
            + 1.0
    }

    /// `f(e^{iθ})`.
    pub fn boundary_point(&self, theta: f64) -> Complex64 {
        self.f(Complex64::from_polar(1.0, theta))
    }
}

/// The Robin problem on `Ω` with parameter `alpha/L`, pulled back to `𝔻`:
/// `ρ = 1`, `ω = |f'|²`, `β = (alpha/L)|f'|`.
pub fn pullback_problem(domain: &DomainSpec, alpha: f64) -> Result<WeightedRobinProblem> {
    let coeffs = domain.coeffs.clone();
    let coeffs_b = coeffs.clone();
    let scale = alpha / domain.perimeter;
    WeightedRobinProblem::new(
        Arc::new(|_| 1.0),
        Arc::new(move |z| eval_fprime(&coeffs, z).norm_sqr()),
        Arc::new(move |z| scale * eval_fprime(&coeffs_b, z).norm()),
        domain.weight_bound(alpha),
    )
}

/// Dilates the domain by `c > 0`.
pub fn scale_coeffs(domain: &DomainSpec, c: f64) -> Result<DomainSpec> {
    if !(c > 0.0) || !c.is_finite() {
        return Err(Error::InvalidParameter(format!("scale factor {c}")));
    }
    Ok(DomainSpec {
        name: domain.name.clone(),
        coeffs: domain.coeffs.iter().map(|z| z * c).collect(),
        area: domain.area * c * c,
        perimeter: domain.perimeter * c,
        sup_fprime: domain.sup_fprime * c,
        inf_fprime: domain.inf_fprime * c,
    })
}

/// Rescales to the given area.
pub fn scale_to_area(domain: &DomainSpec, area: f64) -> Result<DomainSpec> {
    scale_coeffs(domain, (area / domain.area).sqrt())
}

/// Both sides of the area comparison
/// `(1/π)∫_𝔻 g² ≤ (1/A)∫_𝔻 g² |(h⁻¹)'|²` for `h⁻¹ = f∘M_w`.
pub fn area_comparison(domain: &DomainSpec, profile: &crate::RadialProfile, w: Complex64) -> (f64, f64) {
    let (x, wts) = gauss_legendre(48);
    let nt = 512;
    let mut lhs = 0.0;
    let mut rhs = 0.0;
    for (xi, wi) in x.iter().zip(&wts) {
        let r = 0.5 * (xi + 1.0);
        let g2 = profile.value(r).powi(2);
        let mut ring = 0.0;
        for j in 0..nt {
            let z = circle_point(j, nt) * r;
            let m = mobius(w, z);
            // M_w'(z) = (1 − |w|²)/(z w̄ + 1)²
            let dm = (1.0 - w.norm_sqr()) / (z * w.conj() + 1.0).powi(2);
            ring += (domain.fprime(m) * dm).norm_sqr();
        }
        ring *= 2.0 * PI / nt as f64;
        lhs += 0.5 * wi * r * g2 * 2.0 * PI;
        rhs += 0.5 * wi * r * g2 * ring;
    }
    (lhs / PI, rhs / domain.area)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct GalleryEntry {
    name: String,
    coeffs: Vec<[f64; 2]>,
}

/// A gallery entry that failed validation.
#[derive(Debug, Clone, PartialEq)]
pub struct Rejected {
    pub name: String,
    pub reason: String,
}

/// Parses a gallery JSON array `[{"name": .., "coeffs": [[re, im], ..]}]`.
pub fn parse_gallery(json: &str) -> Result<(Vec<DomainSpec>, Vec<Rejected>)> {
    let entries: Vec<GalleryEntry> =
        serde_json::from_str(json).map_err(|e| Error::Gallery(e.to_string()))?;
    let mut ok = Vec::new();
    let mut rejected = Vec::new();
    for e in entries {
        let coeffs: Vec<Complex64> = e.coeffs.iter().map(|c| Complex64::new(c[0], c[1])).collect();
        match make_domain(&coeffs, &e.name) {
            Ok(d) => ok.push(d),
            Err(err) => rejected.push(Rejected {
                name: e.name,
                reason: err.to_string(),
            }),
        }
    }
    Ok((ok, rejected))
}

pub fn load_gallery(path: &Path) -> Result<(Vec<DomainSpec>, Vec<Rejected>)> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Gallery(format!("{}: {e}", path.display())))?;
    parse_gallery(&text)
}

/// Serializes domains in the gallery JSON format.
pub fn gallery_json(domains: &[DomainSpec]) -> String {
    let entries: Vec<GalleryEntry> = domains
        .iter()
        .map(|d| GalleryEntry {
            name: d.name.clone(),
            coeffs: d.coeffs.iter().map(|c| [c.re, c.im]).collect(),
        })
        .collect();
    serde_json::to_string_pretty(&entries).expect("plain data serializes")
}

/// The built-in gallery: the disk and three polynomial perturbations.
pub fn default_gallery() -> Vec<DomainSpec> {
    let c = |re: f64| Complex64::new(re, 0.0);
    [
        ("disk", vec![c(1.0)]),
        ("limacon", vec![c(1.0), c(0.3)]),
        ("odd-cubic", vec![c(1.0), c(0.0), c(0.2)]),
        ("mixed", vec![c(1.0), c(0.25), c(0.1)]),
    ]
    .into_iter()
    .map(|(name, coeffs)| make_domain(&coeffs, name).expect("built-in domains are univalent"))
    .collect()
}

/// Looks up a default-gallery domain by name.
pub fn gallery_domain(name: &str) -> Option<DomainSpec> {
    default_gallery().into_iter().find(|d| d.name == name)
}
