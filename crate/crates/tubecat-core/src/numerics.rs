//! Tolerance-aware complex dense linear algebra shared by all other modules.

use crate::error::{Error, Result};
use nalgebra::DMatrix;
use num_complex::Complex64;

/// Absolute/relative comparison thresholds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub abs_eps: f64,
    pub rel_eps: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance { abs_eps: 1e-9, rel_eps: 1e-9 }
    }
}

impl Tolerance {
    pub fn abs(abs_eps: f64) -> Self {
        Tolerance { abs_eps, rel_eps: abs_eps }
    }
}

/// Dense complex matrix, row-major entries.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        ComplexMatrix { rows, cols, entries: vec![Complex64::new(0.0, 0.0); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    /// Build from nested rows (each inner slice is one row).
    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        if rows.iter().any(|x| x.len() != c) {
            return Err(Error::Shape("ragged row lengths".into()));
        }
        Ok(ComplexMatrix { rows: r, cols: c, entries: rows.concat() })
    }

    pub fn column_vector(v: &[Complex64]) -> Self {
        ComplexMatrix { rows: v.len(), cols: 1, entries: v.to_vec() }
    }

    pub fn is_finite(&self) -> bool {
        self.entries.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn to_na(&self) -> DMatrix<Complex64> {
        DMatrix::from_fn(self.rows, self.cols, |i, j| self[(i, j)])
    }

    pub fn from_na(m: &DMatrix<Complex64>) -> Self {
        Self::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
    }

    pub fn mul(&self, other: &ComplexMatrix) -> Result<ComplexMatrix> {
        if self.cols != other.rows {
            return Err(Error::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = ComplexMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &ComplexMatrix) -> Result<ComplexMatrix> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::Shape("add: shape mismatch".into()));
        }
        let mut out = self.clone();
        for (a, b) in out.entries.iter_mut().zip(&other.entries) {
            *a += b;
        }
        Ok(out)
    }

    pub fn sub(&self, other: &ComplexMatrix) -> Result<ComplexMatrix> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::Shape("sub: shape mismatch".into()));
        }
        let mut out = self.clone();
        for (a, b) in out.entries.iter_mut().zip(&other.entries) {
            *a -= b;
        }
        Ok(out)
    }

    pub fn scale(&self, z: Complex64) -> ComplexMatrix {
        let mut out = self.clone();
        for a in out.entries.iter_mut() {
            *a *= z;
        }
        out
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    /// Entry-wise max modulus.
    pub fn max_norm(&self) -> f64 {
        self.entries.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Max modulus of entry-wise difference.
    pub fn max_diff(&self, other: &ComplexMatrix) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

impl std::ops::Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.entries[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.entries[i * self.cols + j]
    }
}

/// Conjugate transpose (the dagger on matrices).
pub fn conjugate_transpose(m: &ComplexMatrix) -> ComplexMatrix {
    ComplexMatrix::from_fn(m.cols, m.rows, |i, j| m[(j, i)].conj())
}

/// True iff `m† m == identity(cols)` in max norm within `tol.abs_eps`.
pub fn is_isometry(m: &ComplexMatrix, tol: Tolerance) -> Result<bool> {
    if m.rows < m.cols && m.cols != 0 {
        return Err(Error::Shape(format!(
            "isometry requires rows >= cols, got {}x{}",
            m.rows, m.cols
        )));
    }
    let gram = conjugate_transpose(m).mul(m)?;
    Ok(gram.max_diff(&ComplexMatrix::identity(m.cols)) <= tol.abs_eps)
}

/// Eigendecomposition of a Hermitian matrix; eigenvalues ascending,
/// columns of the returned matrix are the matching orthonormal eigenvectors.
pub fn hermitian_eigenbasis(m: &ComplexMatrix, tol: Tolerance) -> Result<(Vec<f64>, ComplexMatrix)> {
    if m.rows != m.cols {
        return Err(Error::Shape("hermitian_eigenbasis: matrix not square".into()));
    }
    let dev = m.max_diff(&conjugate_transpose(m));
    if dev > tol.abs_eps {
        return Err(Error::NotHermitian(dev));
    }
    let na = m.to_na();
    // Symmetrize to kill roundoff asymmetry before factorizing.
    let herm = (&na + na.adjoint()) * Complex64::new(0.5, 0.0);
    let eig = nalgebra::SymmetricEigen::new(herm);
    let mut order: Vec<usize> = (0..m.rows).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].partial_cmp(&eig.eigenvalues[b]).unwrap());
    let eigenvalues: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vecs = ComplexMatrix::from_fn(m.rows, m.rows, |i, j| eig.eigenvectors[(i, order[j])]);
    Ok((eigenvalues, vecs))
}

/// Modified Gram-Schmidt orthonormalization of the columns.
pub fn orthonormalize(columns: &ComplexMatrix, tol: Tolerance) -> Result<ComplexMatrix> {
    let (n, k) = (columns.rows, columns.cols);
    let mut cols: Vec<Vec<Complex64>> = (0..k)
        .map(|j| (0..n).map(|i| columns[(i, j)]).collect())
        .collect();
    let scale = columns.max_norm().max(1.0);
    for j in 0..k {
        for _ in 0..2 {
            for p in 0..j {
                let proj: Complex64 =
                    (0..n).map(|i| cols[p][i].conj() * cols[j][i]).sum();
                for i in 0..n {
                    let sub = proj * cols[p][i];
                    cols[j][i] -= sub;
                }
            }
        }
        let norm: f64 = cols[j].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm <= tol.abs_eps.max(1e-12) * scale {
            return Err(Error::RankDeficient { rank: j, cols: k });
        }
        for i in 0..n {
            cols[j][i] /= Complex64::new(norm, 0.0);
        }
    }
    Ok(ComplexMatrix::from_fn(n, k, |i, j| cols[j][i]))
}

/// Inverse via LU; errors if singular.
pub fn inverse(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    if m.rows != m.cols {
        return Err(Error::Shape("inverse: matrix not square".into()));
    }
    m.to_na()
        .try_inverse()
        .map(|inv| ComplexMatrix::from_na(&inv))
        .ok_or_else(|| Error::Shape("inverse: singular matrix".into()))
}

/// Minimum-norm least-squares solution of a real system M x = b via SVD.
/// Returns (solution, residual_norm).
pub fn lstsq_real(m: &[Vec<f64>], b: &[f64], cutoff: f64) -> (Vec<f64>, f64) {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let na = nalgebra::DMatrix::from_fn(rows, cols, |i, j| m[i][j]);
    let bv = nalgebra::DVector::from_fn(rows, |i, _| b[i]);
    let svd = na.clone().svd(true, true);
    let x = svd.solve(&bv, cutoff).expect("svd solve");
    let resid = (&na * &x - &bv).norm();
    (x.iter().copied().collect(), resid)
}

/// Orthogonal projection of `x` onto the affine solution set {x : M x = b},
/// assuming the set is nonempty; uses the pseudoinverse via SVD.
pub fn project_affine(m: &[Vec<f64>], b: &[f64], x: &[f64], cutoff: f64) -> Vec<f64> {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let na = nalgebra::DMatrix::from_fn(rows, cols, |i, j| m[i][j]);
    let xv = nalgebra::DVector::from_fn(cols, |i, _| x[i]);
    let resid = &na * &xv - nalgebra::DVector::from_fn(rows, |i, _| b[i]);
    let svd = na.svd(true, true);
    let corr = svd.solve(&resid, cutoff).expect("svd solve");
    (xv - corr).iter().copied().collect()
}
