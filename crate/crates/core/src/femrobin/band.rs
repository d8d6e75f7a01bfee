//! Symmetric band storage and banded Cholesky.

use nalgebra::DMatrix;

use crate::{Error, Result};

/// Symmetric matrix stored by its lower band: row `i` keeps columns
/// `i - bw ..= i`.
#[derive(Debug, Clone, PartialEq)]
pub struct BandMatrix {
    n: usize,
    bw: usize,
    data: Vec<f64>,
}

impl BandMatrix {
    pub fn zeros(n: usize, bw: usize) -> Self {
        let bw = bw.min(n.saturating_sub(1));
        Self {
            n,
            bw,
            data: vec![0.0; n * (bw + 1)],
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn bandwidth(&self) -> usize {
        self.bw
    }

    #[inline]
    fn idx(&self, i: usize, j: usize) -> usize {
        debug_assert!(j <= i && i - j <= self.bw);
        i * (self.bw + 1) + (j + self.bw - i)
    }

    /// Entry `(i, j)`; zero outside the band.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        let (i, j) = if i >= j { (i, j) } else { (j, i) };
        if i - j > self.bw {
            0.0
        } else {
            self.data[self.idx(i, j)]
        }
    }

    /// Adds `v` to the symmetric pair `(i, j)`, `(j, i)`.
    #[inline]
    pub fn add(&mut self, i: usize, j: usize, v: f64) {
        let (i, j) = if i >= j { (i, j) } else { (j, i) };
        assert!(i - j <= self.bw, "entry ({i}, {j}) outside bandwidth {}", self.bw);
        let k = self.idx(i, j);
        self.data[k] += v;
    }

    /// `y = A x`.
    pub fn mul_vec(&self, x: &[f64], y: &mut [f64]) {
        assert_eq!(x.len(), self.n);
        assert_eq!(y.len(), self.n);
        y.iter_mut().for_each(|v| *v = 0.0);
        let w = self.bw + 1;
        for i in 0..self.n {
            let lo = i.saturating_sub(self.bw);
            let row = &self.data[i * w + (lo + self.bw - i)..i * w + w];
            let mut acc = 0.0;
            for (k, a) in row[..row.len() - 1].iter().enumerate() {
                let j = lo + k;
                acc += a * x[j];
                y[j] += a * x[i];
            }
            acc += row[row.len() - 1] * x[i];
            y[i] += acc;
        }
    }

    pub fn mul(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.n];
        self.mul_vec(x, &mut y);
        y
    }

    /// `xᵀ A x`.
    pub fn quad_form(&self, x: &[f64]) -> f64 {
        self.mul(x).iter().zip(x).map(|(a, b)| a * b).sum()
    }

    /// `xᵀ A y`.
    pub fn bilinear(&self, x: &[f64], y: &[f64]) -> f64 {
        self.mul(y).iter().zip(x).map(|(a, b)| a * b).sum()
    }

    /// `a·self + b·other`.
    pub fn combine(&self, a: f64, other: &BandMatrix, b: f64) -> BandMatrix {
        assert_eq!(self.n, other.n);
        let bw = self.bw.max(other.bw);
        let mut out = BandMatrix::zeros(self.n, bw);
        for i in 0..self.n {
            for j in i.saturating_sub(bw)..=i {
                let v = a * self.get(i, j) + b * other.get(i, j);
                if v != 0.0 {
                    let k = out.idx(i, j);
                    out.data[k] = v;
                }
            }
        }
        out
    }

    /// Maximum absolute row sum.
    pub fn norm_inf(&self) -> f64 {
        let mut sums = vec![0.0; self.n];
        for i in 0..self.n {
            for j in i.saturating_sub(self.bw)..=i {
                let a = self.data[self.idx(i, j)].abs();
                sums[i] += a;
                if j != i {
                    sums[j] += a;
                }
            }
        }
        sums.into_iter().fold(0.0, f64::max)
    }

    pub fn row_sums(&self) -> Vec<f64> {
        self.mul(&vec![1.0; self.n])
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.n, self.n, |i, j| self.get(i, j))
    }

    /// Banded `L Lᵀ` factorization; fails at the first non-positive pivot.
    pub fn cholesky(&self) -> Result<BandCholesky> {
        let n = self.n;
        let bw = self.bw;
        let w = bw + 1;
        let mut l = self.data.clone();
        for i in 0..n {
            let lo = i.saturating_sub(bw);
            for j in lo..=i {
                let klo = lo.max(j.saturating_sub(bw));
                let ri = i * w + (klo + bw - i);
                let rj = j * w + (klo + bw - j);
                let len = j - klo;
                let dot: f64 = l[ri..ri + len]
                    .iter()
                    .zip(&l[rj..rj + len])
                    .map(|(a, b)| a * b)
                    .sum();
                let ij = i * w + (j + bw - i);
                let s = l[ij] - dot;
                if i == j {
                    if !(s > 0.0) || !s.is_finite() {
                        return Err(Error::Factorization { pivot: i });
                    }
                    l[ij] = s.sqrt();
                } else {
                    l[ij] = s / l[j * w + bw];
                }
            }
        }
        Ok(BandCholesky { n, bw, l })
    }
}

/// Lower band factor `L` with `A = L Lᵀ`.
#[derive(Debug, Clone)]
pub struct BandCholesky {
    n: usize,
    bw: usize,
    l: Vec<f64>,
}

impl BandCholesky {
    /// Solves `A x = b` in place.
    pub fn solve_in_place(&self, b: &mut [f64]) {
        assert_eq!(b.len(), self.n);
        let w = self.bw + 1;
        let bw = self.bw;
        for i in 0..self.n {
            let lo = i.saturating_sub(bw);
            let row = &self.l[i * w + (lo + bw - i)..i * w + w];
            let dot: f64 = row[..row.len() - 1]
                .iter()
                .zip(&b[lo..i])
                .map(|(a, x)| a * x)
                .sum();
            b[i] = (b[i] - dot) / row[row.len() - 1];
        }
        for i in (0..self.n).rev() {
            let lo = i.saturating_sub(bw);
            let row = &self.l[i * w + (lo + bw - i)..i * w + w];
            b[i] /= row[row.len() - 1];
            let xi = b[i];
            for (a, y) in row[..row.len() - 1].iter().zip(&mut b[lo..i]) {
                *y -= a * xi;
            }
        }
    }

    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let mut x = b.to_vec();
        self.solve_in_place(&mut x);
        x
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn laplacian_1d(n: usize) -> BandMatrix {
        let mut a = BandMatrix::zeros(n, 1);
        for i in 0..n {
            a.add(i, i, 2.0);
            if i + 1 < n {
                a.add(i + 1, i, -1.0);
            }
        }
        a
    }

    #[test]
    fn matvec_matches_dense() {
        let mut a = BandMatrix::zeros(7, 3);
        for i in 0..7usize {
            for j in i.saturating_sub(3)..=i {
                a.add(i, j, (1 + i * 7 + j) as f64 * 0.1);
            }
        }
        let x: Vec<f64> = (0..7).map(|i| (i as f64).sin()).collect();
        let d = a.to_dense();
        assert_eq!(d, d.transpose());
        let yd = &d * nalgebra::DVector::from_vec(x.clone());
        for (u, v) in a.mul(&x).iter().zip(yd.iter()) {
            assert!((u - v).abs() < 1e-13);
        }
    }

    #[test]
    fn cholesky_solves() {
        let a = laplacian_1d(50);
        let x: Vec<f64> = (0..50).map(|i| (i as f64 * 0.3).cos()).collect();
        let b = a.mul(&x);
        let y = a.cholesky().unwrap().solve(&b);
        for (u, v) in x.iter().zip(&y) {
            assert!((u - v).abs() < 1e-10);
        }
    }

    #[test]
    fn cholesky_detects_indefinite() {
        let a = laplacian_1d(10);
        let mut shifted = a.combine(1.0, &BandMatrix::zeros(10, 0), 0.0);
        shifted.add(4, 4, -3.0);
        match shifted.cholesky() {
            Err(Error::Factorization { .. }) => {}
            other => panic!("expected failure, got {other:?}"),
        }
    }

    #[test]
    fn combine_widens_band() {
        let a = laplacian_1d(5);
        let mut b = BandMatrix::zeros(5, 2);
        b.add(3, 1, 1.0);
        let c = a.combine(2.0, &b, -1.0);
        assert_eq!(c.bandwidth(), 2);
        assert_eq!(c.get(1, 3), -1.0);
        assert_eq!(c.get(2, 2), 4.0);
    }
}
