//! Small dense complex matrices, row-major.
//!
//! Gates in this crate are at most 49×49, so a plain `Vec` is the right
//! representation; spectra go through `faer`.

use std::ops::{Index, IndexMut, Mul};

use num_complex::Complex64 as C64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct CMat {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);

impl CMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        CMat { rows, cols, data: vec![ZERO; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        CMat { rows, cols, data }
    }

    pub fn from_rows(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{} entries for a {rows}×{cols} matrix",
                data.len()
            )));
        }
        Ok(CMat { rows, cols, data })
    }

    pub fn diag(d: &[C64]) -> Self {
        let mut m = Self::zeros(d.len(), d.len());
        for (i, &x) in d.iter().enumerate() {
            m[(i, i)] = x;
        }
        m
    }

    /// Permutation matrix sending basis vector `j` to `perm[j]`.
    pub fn permutation(perm: &[usize]) -> Self {
        let mut m = Self::zeros(perm.len(), perm.len());
        for (j, &i) in perm.iter().enumerate() {
            m[(i, j)] = ONE;
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[C64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn conj(&self) -> Self {
        CMat { rows: self.rows, cols: self.cols, data: self.data.iter().map(|z| z.conj()).collect() }
    }

    pub fn scale(&self, s: C64) -> Self {
        CMat { rows: self.rows, cols: self.cols, data: self.data.iter().map(|&z| z * s).collect() }
    }

    pub fn add(&self, other: &CMat) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        CMat { rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, other: &CMat) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect();
        CMat { rows: self.rows, cols: self.cols, data }
    }

    pub fn matmul(&self, other: &CMat) -> Self {
        assert_eq!(self.cols, other.rows, "inner dimensions differ");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == ZERO {
                    continue;
                }
                let orow = &other.data[k * other.cols..(k + 1) * other.cols];
                let dst = &mut out.data[i * other.cols..(i + 1) * other.cols];
                for (d, &b) in dst.iter_mut().zip(orow) {
                    *d += a * b;
                }
            }
        }
        out
    }

    pub fn matvec(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn kron(&self, other: &CMat) -> Self {
        let (r2, c2) = (other.rows, other.cols);
        Self::from_fn(self.rows * r2, self.cols * c2, |i, j| {
            self[(i / r2, j / c2)] * other[(i % r2, j % c2)]
        })
    }

    pub fn trace(&self) -> C64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn frobenius(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs_diff(&self, other: &CMat) -> f64 {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return f64::INFINITY;
        }
        self.data.iter().zip(&other.data).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    /// ‖M†M − I‖_max.
    pub fn unitarity_defect(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let g = self.adjoint().matmul(self);
        g.max_abs_diff(&Self::identity(self.rows))
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.unitarity_defect() <= tol
    }

    pub fn is_diagonal(&self, tol: f64) -> bool {
        (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self[(i, j)].norm() <= tol))
    }

    /// If every column holds a single entry of modulus one, the column → row map.
    pub fn as_monomial(&self, tol: f64) -> Option<Vec<usize>> {
        if !self.is_square() {
            return None;
        }
        let mut perm = Vec::with_capacity(self.cols);
        for j in 0..self.cols {
            let mut hit = None;
            for i in 0..self.rows {
                let z = self[(i, j)].norm();
                if z > tol {
                    if hit.is_some() || (z - 1.0).abs() > tol {
                        return None;
                    }
                    hit = Some(i);
                }
            }
            perm.push(hit?);
        }
        Some(perm)
    }

    /// Haar-random unitary: Gram-Schmidt on a complex Ginibre matrix.
    pub fn haar_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        let mut cols: Vec<Vec<C64>> = (0..n)
            .map(|_| {
                (0..n)
                    .map(|_| C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
                    .collect()
            })
            .collect();
        for j in 0..n {
            for k in 0..j {
                let (done, rest) = cols.split_at_mut(j);
                let q = &done[k];
                let v = &mut rest[0];
                let proj: C64 = q.iter().zip(v.iter()).map(|(a, b)| a.conj() * b).sum();
                for (x, y) in v.iter_mut().zip(q) {
                    *x -= proj * y;
                }
            }
            let norm = cols[j].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            for x in cols[j].iter_mut() {
                *x /= norm;
            }
        }
        Self::from_fn(n, n, |i, j| cols[j][i])
    }

    pub fn random_diagonal_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        let phases: Vec<C64> = (0..n)
            .map(|_| C64::from_polar(1.0, rng.random_range(0.0..std::f64::consts::TAU)))
            .collect();
        Self::diag(&phases)
    }

    pub fn to_faer(&self) -> faer::Mat<C64> {
        faer::Mat::from_fn(self.rows, self.cols, |i, j| self[(i, j)])
    }

    pub fn from_faer(m: faer::MatRef<'_, C64>) -> Self {
        Self::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
    }

    pub fn eigenvalues(&self) -> Result<Vec<C64>> {
        if !self.is_square() {
            return Err(Error::Dimension("eigenvalues of a non-square matrix".into()));
        }
        if self.rows == 0 {
            return Ok(vec![]);
        }
        self.to_faer().eigenvalues().map_err(|e| Error::Eigen(format!("{e:?}")))
    }

    /// Eigenvalues of a Hermitian matrix in nondecreasing order.
    pub fn hermitian_eigenvalues(&self) -> Result<Vec<f64>> {
        if !self.is_square() {
            return Err(Error::Dimension("eigenvalues of a non-square matrix".into()));
        }
        self.to_faer()
            .self_adjoint_eigenvalues(faer::Side::Lower)
            .map_err(|e| Error::Eigen(format!("{e:?}")))
    }
}

impl Index<(usize, usize)> for CMat {
    type Output = C64;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for CMat {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.cols + j]
    }
}

impl Mul for &CMat {
    type Output = CMat;

    fn mul(self, rhs: &CMat) -> CMat {
        self.matmul(rhs)
    }
}

/// e^{2πi k/n}, with k reduced mod n before the trigonometry.
pub fn root_of_unity(k: i64, n: u64) -> C64 {
    let n = n as i64;
    let k = k.rem_euclid(n);
    if k == 0 {
        return ONE;
    }
    if 2 * k == n {
        return C64::new(-1.0, 0.0);
    }
    if 4 * k == n {
        return C64::new(0.0, 1.0);
    }
    if 4 * k == 3 * n {
        return C64::new(0.0, -1.0);
    }
    C64::from_polar(1.0, std::f64::consts::TAU * k as f64 / n as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn haar_is_unitary() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for n in 1..8 {
            assert!(CMat::haar_unitary(n, &mut rng).is_unitary(1e-12));
        }
    }

    #[test]
    fn kron_of_identities() {
        let a = CMat::identity(2).kron(&CMat::identity(3));
        assert_eq!(a, CMat::identity(6));
    }

    #[test]
    fn kron_mixed_product() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let (a, b) = (CMat::haar_unitary(2, &mut rng), CMat::haar_unitary(3, &mut rng));
        let (c, d) = (CMat::haar_unitary(2, &mut rng), CMat::haar_unitary(3, &mut rng));
        let lhs = a.kron(&b).matmul(&c.kron(&d));
        let rhs = a.matmul(&c).kron(&b.matmul(&d));
        assert!(lhs.max_abs_diff(&rhs) < 1e-13);
    }

    #[test]
    fn monomial_detection() {
        let p = CMat::permutation(&[2, 0, 1]);
        assert_eq!(p.as_monomial(1e-12), Some(vec![2, 0, 1]));
        assert_eq!(CMat::haar_unitary(3, &mut ChaCha8Rng::seed_from_u64(1)).as_monomial(1e-12), None);
    }

    #[test]
    fn roots_are_exact_at_quarters() {
        assert_eq!(root_of_unity(1, 4), C64::new(0.0, 1.0));
        assert_eq!(root_of_unity(-1, 2), C64::new(-1.0, 0.0));
        assert!((root_of_unity(7, 5) - root_of_unity(2, 5)).norm() == 0.0);
    }

    #[test]
    fn eigenvalues_of_permutation() {
        let p = CMat::permutation(&[1, 2, 0]);
        let mut ev = p.eigenvalues().unwrap();
        ev.sort_by(|a, b| a.arg().partial_cmp(&b.arg()).unwrap());
        for z in ev {
            assert!((z.norm() - 1.0).abs() < 1e-12);
            assert!((z.powu(3) - ONE).norm() < 1e-12);
        }
    }
}
