//! Lowest eigenpairs of `K u = λ M u` for symmetric `K` and SPD `M`.
//!
//! Small problems go through a dense Cholesky reduction. Larger ones use
//! shift-invert block Krylov with Rayleigh–Ritz on `K`, restarted with the
//! leading Ritz vectors; the block is wider than the number of wanted pairs
//! so exactly degenerate eigenvalues converge together.

use nalgebra::{DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::band::{BandCholesky, BandMatrix};
use crate::{Error, Result};

/// Dimension up to which the dense solver is used.
pub const DENSE_LIMIT: usize = 400;

const KRYLOV_BLOCKS: usize = 6;
const MAX_RESTARTS: usize = 100;
const RESIDUAL_TOL: f64 = 1e-9;
const SEED: u64 = 0x5eed_2b0b;

/// The lowest eigenpairs, ascending, `M`-orthonormal.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumResult {
    pub eigenvalues: Vec<f64>,
    pub eigenfunctions: Vec<Vec<f64>>,
    /// Backward errors `‖Ku − λMu‖ / ((‖K‖ + |λ|‖M‖)‖u‖)` in the max-row-sum norm.
    pub residuals: Vec<f64>,
}

impl SpectrumResult {
    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }
}

/// The `count` smallest generalized eigenpairs.
pub fn solve_lowest(k: &BandMatrix, m: &BandMatrix, count: usize) -> Result<SpectrumResult> {
    let n = k.dim();
    if m.dim() != n {
        return Err(Error::InvalidParameter("K and M differ in size".into()));
    }
    if count == 0 || count > n {
        return Err(Error::InvalidParameter(format!(
            "requested {count} eigenpairs of a {n}-dimensional problem"
        )));
    }
    if n <= DENSE_LIMIT || count + 3 >= n / 4 {
        solve_dense(k, m, count)
    } else {
        solve_krylov(k, m, count)
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Flips the sign so the first largest-magnitude component is positive.
fn fix_sign(u: &mut [f64]) {
    let mut best = 0.0f64;
    let mut sign = 1.0;
    for &v in u.iter() {
        if v.abs() > best {
            best = v.abs();
            sign = v.signum();
        }
    }
    if sign < 0.0 {
        u.iter_mut().for_each(|v| *v = -*v);
    }
}

fn backward_error(r: &[f64], x: &[f64], theta: f64, norms: (f64, f64)) -> f64 {
    norm(r) / ((norms.0 + theta.abs() * norms.1) * norm(x)).max(f64::MIN_POSITIVE)
}

fn finish(k: &BandMatrix, m: &BandMatrix, mut vecs: Vec<Vec<f64>>) -> SpectrumResult {
    let norms = (k.norm_inf(), m.norm_inf());
    let mut eigenvalues = Vec::with_capacity(vecs.len());
    let mut residuals = Vec::with_capacity(vecs.len());
    for u in &mut vecs {
        let mu = m.mul(u);
        let s = dot(u, &mu).sqrt();
        u.iter_mut().for_each(|v| *v /= s);
        fix_sign(u);
        let ku = k.mul(u);
        let mu = m.mul(u);
        let lambda = dot(u, &ku) / dot(u, &mu);
        let r: Vec<f64> = ku.iter().zip(&mu).map(|(a, b)| a - lambda * b).collect();
        residuals.push(backward_error(&r, u, lambda, norms));
        eigenvalues.push(lambda);
    }
    let mut order: Vec<usize> = (0..vecs.len()).collect();
    order.sort_by(|&a, &b| eigenvalues[a].total_cmp(&eigenvalues[b]));
    SpectrumResult {
        eigenvalues: order.iter().map(|&i| eigenvalues[i]).collect(),
        eigenfunctions: order.iter().map(|&i| vecs[i].clone()).collect(),
        residuals: order.iter().map(|&i| residuals[i]).collect(),
    }
}

/// Dense path: `C = L⁻¹ K L⁻ᵀ` with `M = L Lᵀ`, then a symmetric eigensolve.
pub fn solve_dense(k: &BandMatrix, m: &BandMatrix, count: usize) -> Result<SpectrumResult> {
    m.cholesky()?;
    let kd = k.to_dense();
    let md = m.to_dense();
    let chol = md
        .cholesky()
        .ok_or(Error::Factorization { pivot: 0 })?;
    let l = chol.l();
    let lk = l
        .solve_lower_triangular(&kd)
        .ok_or(Error::Factorization { pivot: 0 })?;
    let c = l
        .solve_lower_triangular(&lk.transpose())
        .ok_or(Error::Factorization { pivot: 0 })?;
    let c = (&c + c.transpose()) * 0.5;
    let eig = SymmetricEigen::new(c);
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let lt = l.transpose();
    let vecs = order[..count]
        .iter()
        .map(|&i| {
            let y = eig.eigenvectors.column(i).into_owned();
            let u = lt
                .solve_upper_triangular(&y)
                .expect("triangular factor is nonsingular");
            u.iter().copied().collect()
        })
        .collect();
    Ok(finish(k, m, vecs))
}

/// Factors `K − σM` with `σ` pushed down until the factorization succeeds.
fn shifted_factor(k: &BandMatrix, m: &BandMatrix) -> Result<(f64, BandCholesky)> {
    let mut sigma = -1.0;
    let mut last = Error::Factorization { pivot: 0 };
    for _ in 0..60 {
        match k.combine(1.0, m, -sigma).cholesky() {
            Ok(f) => return Ok((sigma, f)),
            Err(e) => last = e,
        }
        sigma = 2.0 * sigma - 1.0;
    }
    Err(last)
}

/// Growing `M`-orthonormal basis, with `M·v` cached per column.
struct Basis<'a> {
    m: &'a BandMatrix,
    v: Vec<Vec<f64>>,
    mv: Vec<Vec<f64>>,
}

impl<'a> Basis<'a> {
    fn new(m: &'a BandMatrix) -> Self {
        Self {
            m,
            v: Vec::new(),
            mv: Vec::new(),
        }
    }

    /// Orthogonalizes `w` against the basis (two passes) and appends it
    /// unless it is numerically dependent.
    fn push(&mut self, mut w: Vec<f64>) -> bool {
        let mw0 = self.m.mul(&w);
        let n0 = dot(&w, &mw0).sqrt();
        if !(n0 > 0.0) || !n0.is_finite() {
            return false;
        }
        w.iter_mut().for_each(|x| *x /= n0);
        for _ in 0..2 {
            for (v, mv) in self.v.iter().zip(&self.mv) {
                let c = dot(mv, &w);
                w.iter_mut().zip(v).for_each(|(x, y)| *x -= c * y);
            }
        }
        let mw = self.m.mul(&w);
        let nn = dot(&w, &mw).sqrt();
        if !(nn > 1e-8) {
            return false;
        }
        w.iter_mut().for_each(|x| *x /= nn);
        self.mv.push(mw.into_iter().map(|x| x / nn).collect());
        self.v.push(w);
        true
    }
}

fn solve_krylov(k: &BandMatrix, m: &BandMatrix, count: usize) -> Result<SpectrumResult> {
    let n = k.dim();
    let (_sigma, factor) = shifted_factor(k, m)?;
    let norms = (k.norm_inf(), m.norm_inf());
    let block = count + 3;
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut start: Vec<Vec<f64>> = (0..block)
        .map(|_| (0..n).map(|_| rng.random::<f64>() - 0.5).collect())
        .collect();
    let mut worst = f64::INFINITY;

    for _ in 0..MAX_RESTARTS {
        let mut basis = Basis::new(m);
        let mut last: Vec<usize> = Vec::new();
        for w in start.drain(..) {
            if basis.push(w) {
                last.push(basis.v.len() - 1);
            }
        }
        for _ in 1..KRYLOV_BLOCKS {
            let mut next = Vec::new();
            for &j in &last {
                let w = factor.solve(&basis.mv[j]);
                if basis.push(w) {
                    next.push(basis.v.len() - 1);
                }
            }
            if next.is_empty() {
                break;
            }
            last = next;
        }
        let dim = basis.v.len();
        let kv: Vec<Vec<f64>> = basis.v.iter().map(|v| k.mul(v)).collect();
        let a = DMatrix::from_fn(dim, dim, |i, j| 0.5 * (dot(&basis.v[i], &kv[j]) + dot(&basis.v[j], &kv[i])));
        let eig = SymmetricEigen::new(a);
        let mut order: Vec<usize> = (0..dim).collect();
        order.sort_by(|&x, &y| eig.eigenvalues[x].total_cmp(&eig.eigenvalues[y]));

        let keep = block.min(dim);
        let mut ritz = Vec::with_capacity(keep);
        worst = 0.0f64;
        for (rank, &i) in order[..keep].iter().enumerate() {
            let y = eig.eigenvectors.column(i);
            let mut x = vec![0.0; n];
            let mut kx = vec![0.0; n];
            let mut mx = vec![0.0; n];
            for (c, ((v, kvj), mvj)) in y.iter().zip(basis.v.iter().zip(&kv).zip(&basis.mv)) {
                for t in 0..n {
                    x[t] += c * v[t];
                    kx[t] += c * kvj[t];
                    mx[t] += c * mvj[t];
                }
            }
            if rank < count {
                let theta = eig.eigenvalues[i];
                let r: Vec<f64> = kx.iter().zip(&mx).map(|(a, b)| a - theta * b).collect();
                worst = worst.max(backward_error(&r, &x, theta, norms));
            }
            ritz.push(x);
        }
        if worst < RESIDUAL_TOL {
            ritz.truncate(count);
            return Ok(finish(k, m, ritz));
        }
        start = ritz;
    }
    Err(Error::NoConvergence(format!(
        "block Krylov eigensolver: residual {worst:.3e} after {MAX_RESTARTS} restarts"
    )))
}
