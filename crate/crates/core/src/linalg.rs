//! Dense complex helpers shared by the section, polynomial and spectral modules.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{MsxError, Result};

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

/// A Cholesky pivot is accepted iff it exceeds this fraction of the
/// corresponding diagonal entry of the input.
pub const PIVOT_REL_TOL: f64 = 1e-13;

/// Row-by-row (Banachiewicz) Cholesky factor of a Hermitian matrix.
///
/// `l` holds the factor of the largest leading block that factored; `failure`
/// records the first row whose pivot was rejected. Row `i` of the factor only
/// depends on the leading `(i+1)×(i+1)` block of the input, so factors of
/// nested sections agree bit for bit.
#[derive(Debug, Clone)]
pub struct CholeskyPrefix {
    pub l: CMatrix,
    pub failure: Option<(usize, f64)>,
}

impl CholeskyPrefix {
    pub fn is_complete(&self) -> bool {
        self.failure.is_none()
    }

    /// Number of rows that factored.
    pub fn rows(&self) -> usize {
        self.l.nrows()
    }

    pub fn into_result(self) -> Result<CMatrix> {
        match self.failure {
            None => Ok(self.l),
            Some((order, pivot)) => Err(MsxError::NotPositiveDefinite { order, pivot }),
        }
    }
}

pub fn cholesky_prefix(m: &CMatrix) -> CholeskyPrefix {
    let n = m.nrows();
    assert_eq!(n, m.ncols(), "cholesky of a non-square matrix");
    let mut l = CMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..i {
            let mut s = m[(i, j)];
            for k in 0..j {
                s -= l[(i, k)] * l[(j, k)].conj();
            }
            l[(i, j)] = s / l[(j, j)].re;
        }
        let diag = m[(i, i)].re;
        let mut pivot = diag;
        for k in 0..i {
            pivot -= l[(i, k)].norm_sqr();
        }
        if !(pivot > PIVOT_REL_TOL * diag) || !pivot.is_finite() {
            return CholeskyPrefix {
                l: l.view((0, 0), (i, i)).into_owned(),
                failure: Some((i, pivot)),
            };
        }
        l[(i, i)] = Complex64::new(pivot.sqrt(), 0.0);
    }
    CholeskyPrefix { l, failure: None }
}

/// Inverse of a lower-triangular matrix with positive real diagonal, built
/// row by row so that leading blocks are reproduced exactly.
pub fn lower_triangular_inverse(l: &CMatrix) -> CMatrix {
    let n = l.nrows();
    let mut x = CMatrix::zeros(n, n);
    for m in 0..n {
        let d = l[(m, m)].re;
        x[(m, m)] = Complex64::new(1.0 / d, 0.0);
        for k in 0..m {
            let mut s = Complex64::new(0.0, 0.0);
            for j in k..m {
                s += l[(m, j)] * x[(j, k)];
            }
            x[(m, k)] = -s / d;
        }
    }
    x
}

pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().fold(0.0_f64, |acc, z| acc.max(z.norm()))
}

pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    assert_eq!(a.shape(), b.shape());
    a.iter()
        .zip(b.iter())
        .fold(0.0_f64, |acc, (x, y)| acc.max((x - y).norm()))
}

pub fn is_real(m: &CMatrix) -> bool {
    m.iter().all(|z| z.im == 0.0)
}

fn real_part(m: &CMatrix) -> DMatrix<f64> {
    m.map(|z| z.re)
}

/// Eigenvalues of a Hermitian matrix in ascending order.
pub fn hermitian_eigenvalues(m: &CMatrix) -> Vec<f64> {
    let mut values: Vec<f64> = if is_real(m) {
        real_part(m).symmetric_eigenvalues().iter().copied().collect()
    } else {
        m.clone().symmetric_eigenvalues().iter().copied().collect()
    };
    values.sort_by(|a, b| a.total_cmp(b));
    values
}

/// Smallest eigenvalue of a Hermitian matrix with a unit eigenvector.
pub fn smallest_eigenpair(m: &CMatrix) -> (f64, CVector) {
    if is_real(m) {
        let eig = real_part(m).symmetric_eigen();
        let (idx, value) = argmin(eig.eigenvalues.iter().copied());
        let v = eig.eigenvectors.column(idx).map(|x| Complex64::new(x, 0.0));
        (value, v)
    } else {
        let eig = m.clone().symmetric_eigen();
        let (idx, value) = argmin(eig.eigenvalues.iter().copied());
        (value, eig.eigenvectors.column(idx).into_owned())
    }
}

fn argmin(values: impl Iterator<Item = f64>) -> (usize, f64) {
    values
        .enumerate()
        .fold((0, f64::INFINITY), |best, (i, v)| if v < best.1 { (i, v) } else { best })
}

/// Largest singular value.
pub fn sigma_max(m: &CMatrix) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    let values: Vec<f64> = if is_real(m) {
        real_part(m).singular_values().iter().copied().collect()
    } else {
        m.clone().singular_values().iter().copied().collect()
    };
    values.into_iter().fold(0.0, f64::max)
}

/// General inverse by LU, used as an independent route to section inverses.
pub fn inverse(m: &CMatrix) -> Result<CMatrix> {
    m.clone()
        .try_inverse()
        .ok_or_else(|| MsxError::NotPositiveDefinite { order: m.nrows(), pivot: 0.0 })
}

pub fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}
