//! Small dense/sparse linear-algebra helpers shared by the physics and
//! dataset code. Dense eigenproblems are delegated to `nalgebra`.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

/// Eigen-decomposition of a complex Hermitian matrix, eigenvalues ascending.
///
/// Column `j` of the returned matrix is the eigenvector for `values[j]`.
pub fn hermitian_eigen(m: &DMatrix<Complex64>) -> (Vec<f64>, DMatrix<Complex64>) {
    let eig = SymmetricEigen::new(m.clone());
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = DMatrix::from_fn(m.nrows(), order.len(), |r, c| eig.eigenvectors[(r, order[c])]);
    (values, vectors)
}

/// Eigenvalues only, ascending.
pub fn hermitian_eigenvalues(m: &DMatrix<Complex64>) -> Vec<f64> {
    let mut v: Vec<f64> = m.clone().symmetric_eigenvalues().iter().copied().collect();
    v.sort_by(f64::total_cmp);
    v
}

/// Real symmetric eigen-decomposition, eigenvalues ascending.
pub fn symmetric_eigen(m: &DMatrix<f64>) -> (Vec<f64>, DMatrix<f64>) {
    let eig = SymmetricEigen::new(m.clone());
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = DMatrix::from_fn(m.nrows(), order.len(), |r, c| eig.eigenvectors[(r, order[c])]);
    (values, vectors)
}

/// Symmetric tridiagonal matrix from its diagonal and off-diagonal.
pub fn tridiagonal(diag: &[f64], off: &[f64]) -> DMatrix<f64> {
    let n = diag.len();
    let mut t = DMatrix::zeros(n, n);
    for i in 0..n {
        t[(i, i)] = diag[i];
        if i + 1 < n {
            t[(i, i + 1)] = off[i];
            t[(i + 1, i)] = off[i];
        }
    }
    t
}

/// `exp(-i τ T) e₀` for a real symmetric `T`, via its eigenbasis.
pub fn expm_first_column(t: &DMatrix<f64>, tau: f64) -> DVector<Complex64> {
    let (vals, vecs) = symmetric_eigen(t);
    let n = vals.len();
    DVector::from_fn(n, |r, _| {
        (0..n)
            .map(|k| Complex64::from_polar(vecs[(r, k)] * vecs[(0, k)], -tau * vals[k]))
            .sum()
    })
}

/// Compressed-sparse-row complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CsrMatrix {
    dim: usize,
    row_ptr: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<Complex64>,
}

impl CsrMatrix {
    /// Builds from per-row `(column, value)` lists; duplicate columns are summed
    /// and exact zeros dropped.
    pub fn from_rows(rows: Vec<Vec<(usize, Complex64)>>) -> Self {
        let dim = rows.len();
        let mut row_ptr = Vec::with_capacity(dim + 1);
        let mut cols = Vec::new();
        let mut vals = Vec::new();
        row_ptr.push(0);
        for mut row in rows {
            row.sort_by_key(|&(c, _)| c);
            let mut last: Option<usize> = None;
            for (c, v) in row {
                if last == Some(c) {
                    *vals.last_mut().unwrap() += v;
                } else {
                    cols.push(c);
                    vals.push(v);
                    last = Some(c);
                }
            }
            row_ptr.push(cols.len());
        }
        let mut m = Self {
            dim,
            row_ptr,
            cols,
            vals,
        };
        m.prune();
        m
    }

    fn prune(&mut self) {
        let mut row_ptr = vec![0];
        let mut cols = Vec::with_capacity(self.cols.len());
        let mut vals = Vec::with_capacity(self.vals.len());
        for r in 0..self.dim {
            for k in self.row_ptr[r]..self.row_ptr[r + 1] {
                if self.vals[k] != Complex64::new(0.0, 0.0) {
                    cols.push(self.cols[k]);
                    vals.push(self.vals[k]);
                }
            }
            row_ptr.push(cols.len());
        }
        self.row_ptr = row_ptr;
        self.cols = cols;
        self.vals = vals;
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nnz(&self) -> usize {
        self.vals.len()
    }

    /// `y = A x`.
    pub fn apply(&self, x: &[Complex64], y: &mut [Complex64]) {
        debug_assert_eq!(x.len(), self.dim);
        debug_assert_eq!(y.len(), self.dim);
        for (r, out) in y.iter_mut().enumerate() {
            let mut acc = Complex64::new(0.0, 0.0);
            for k in self.row_ptr[r]..self.row_ptr[r + 1] {
                acc += self.vals[k] * x[self.cols[k]];
            }
            *out = acc;
        }
    }

    pub fn mul_vec(&self, x: &[Complex64]) -> Vec<Complex64> {
        let mut y = vec![Complex64::new(0.0, 0.0); self.dim];
        self.apply(x, &mut y);
        y
    }

    /// `⟨x|A|x⟩`.
    pub fn expectation(&self, x: &[Complex64]) -> Complex64 {
        crate::state::dot(x, &self.mul_vec(x))
    }

    pub fn row(&self, r: usize) -> impl Iterator<Item = (usize, Complex64)> + '_ {
        (self.row_ptr[r]..self.row_ptr[r + 1]).map(move |k| (self.cols[k], self.vals[k]))
    }

    pub fn to_dense(&self) -> DMatrix<Complex64> {
        let mut m = DMatrix::zeros(self.dim, self.dim);
        for r in 0..self.dim {
            for (c, v) in self.row(r) {
                m[(r, c)] += v;
            }
        }
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn expm_of_diagonal_is_phase() {
        let t = tridiagonal(&[2.0, -1.0], &[0.0]);
        let c = expm_first_column(&t, 0.3);
        assert!((c[0] - Complex64::from_polar(1.0, -0.6)).norm() < 1e-14);
        assert!(c[1].norm() < 1e-14);
    }

    #[test]
    fn csr_sums_duplicates_and_drops_zeros() {
        let one = Complex64::new(1.0, 0.0);
        let m = CsrMatrix::from_rows(vec![vec![(1, one), (1, one)], vec![(0, one), (0, -one)]]);
        assert_eq!(m.nnz(), 1);
        let y = m.mul_vec(&[one, one]);
        assert_eq!(y, vec![Complex64::new(2.0, 0.0), Complex64::new(0.0, 0.0)]);
    }

    #[test]
    fn hermitian_eigen_sorted_and_unitary() {
        let i = Complex64::i();
        let m = DMatrix::from_row_slice(2, 2, &[Complex64::new(1.0, 0.0), 0.5 * i, -0.5 * i, Complex64::new(-1.0, 0.0)]);
        let (vals, vecs) = hermitian_eigen(&m);
        assert!(vals[0] < vals[1]);
        assert!((vals[1] - (1.25f64).sqrt()).abs() < 1e-14);
        let g = vecs.adjoint() * &vecs;
        assert!((g - DMatrix::identity(2, 2)).norm() < 1e-14);
    }
}
