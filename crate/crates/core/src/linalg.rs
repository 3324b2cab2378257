//! Dense Hermitian helpers shared by the Fock-space modules.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Eigen-decomposition of a Hermitian matrix, eigenvalues ascending and
/// eigenvectors as the matching columns.
pub fn eigh(m: &CMatrix) -> (Vec<f64>, CMatrix) {
    let n = m.nrows();
    if n == 0 {
        return (Vec::new(), CMatrix::zeros(0, 0));
    }
    let eig = SymmetricEigen::new(m.clone());
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = CMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
    (values, vectors)
}

pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

pub fn commutator(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a * b - b * a
}

pub fn anticommutator(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a * b + b * a
}

pub fn hermiticity_defect(m: &CMatrix) -> f64 {
    max_abs(&(m - m.adjoint()))
}

/// Orthonormal basis (as columns) of the range of an orthogonal projector.
pub fn projector_range(p: &CMatrix) -> CMatrix {
    let (values, vectors) = eigh(p);
    let cols: Vec<usize> = (0..values.len()).filter(|&i| values[i] > 0.5).collect();
    CMatrix::from_fn(p.nrows(), cols.len(), |r, c| vectors[(r, cols[c])])
}

/// Restricts `m` to the column span of the orthonormal `basis`.
pub fn restrict(m: &CMatrix, basis: &CMatrix) -> CMatrix {
    basis.adjoint() * m * basis
}

pub fn real_diag(values: impl IntoIterator<Item = f64>) -> CMatrix {
    let v: Vec<Complex64> = values.into_iter().map(|x| Complex64::new(x, 0.0)).collect();
    CMatrix::from_diagonal(&CVector::from_vec(v))
}

/// Coordinate-form sparse matrix. Fock-space gates, projectors and Kraus
/// operators touching a few modes have only a handful of entries per column.
#[derive(Debug, Clone, PartialEq)]
pub struct Sparse {
    dim: usize,
    entries: Vec<(usize, usize, Complex64)>,
}

impl Sparse {
    /// Keeps entries with modulus above 1e-15.
    pub fn from_dense(m: &CMatrix) -> Self {
        let mut entries = Vec::new();
        for c in 0..m.ncols() {
            for r in 0..m.nrows() {
                if m[(r, c)].norm() > 1e-15 {
                    entries.push((r, c, m[(r, c)]));
                }
            }
        }
        Self { dim: m.nrows(), entries }
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    /// Adds `S ρ S†` to `out`.
    pub fn sandwich_into(&self, rho: &CMatrix, out: &mut CMatrix) {
        let n = rho.ncols();
        let mut left = CMatrix::zeros(self.dim, n);
        for &(r, c, v) in &self.entries {
            for j in 0..n {
                left[(r, j)] += v * rho[(c, j)];
            }
        }
        for &(r, c, v) in &self.entries {
            let w = v.conj();
            for i in 0..self.dim {
                out[(i, r)] += left[(i, c)] * w;
            }
        }
    }

    pub fn sandwich(&self, rho: &CMatrix) -> CMatrix {
        let mut out = CMatrix::zeros(self.dim, self.dim);
        self.sandwich_into(rho, &mut out);
        out
    }
}
