//! Finite sections `M_n` (the leading `(n+1)×(n+1)` block) of a moment
//! kernel, with positivity, moment and persymmetry checks.

pub mod exact;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{MsxError, Result};
use crate::linalg::{self, CMatrix};
use crate::measures::MomentKernel;

/// Dense Hermitian section of order `n`, i.e. an `(n+1)×(n+1)` matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianSection {
    entries: CMatrix,
}

impl HermitianSection {
    /// Wraps a square matrix, mirroring its upper triangle so the result is
    /// exactly Hermitian.
    pub fn from_matrix(m: CMatrix) -> Result<Self> {
        if m.nrows() != m.ncols() || m.nrows() == 0 {
            return Err(MsxError::InvalidParameter(format!(
                "section must be a non-empty square matrix, got {}×{}",
                m.nrows(),
                m.ncols()
            )));
        }
        let mut entries = m;
        let size = entries.nrows();
        for i in 0..size {
            entries[(i, i)].im = 0.0;
            for j in i + 1..size {
                entries[(j, i)] = entries[(i, j)].conj();
            }
        }
        Ok(Self { entries })
    }

    pub fn identity(n: usize) -> Self {
        Self { entries: CMatrix::identity(n + 1, n + 1) }
    }

    /// Section order `n`; the matrix is `(n+1)×(n+1)`.
    pub fn order(&self) -> usize {
        self.entries.nrows() - 1
    }

    pub fn size(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &CMatrix {
        &self.entries
    }

    pub fn into_entries(self) -> CMatrix {
        self.entries
    }

    pub fn leading(&self, m: usize) -> HermitianSection {
        assert!(m <= self.order(), "leading order {m} exceeds {}", self.order());
        Self { entries: self.entries.view((0, 0), (m + 1, m + 1)).into_owned() }
    }
}

/// Materialises the section of order `n`.
pub fn section(kernel: &MomentKernel, n: usize) -> Result<HermitianSection> {
    let size = n + 1;
    let mut m = CMatrix::zeros(size, size);
    if kernel.is_toeplitz() {
        let diagonals: Vec<Complex64> = (0..size)
            .into_par_iter()
            .map(|d| kernel.toeplitz_diagonal(d).expect("toeplitz kernel"))
            .collect::<Result<_>>()?;
        for i in 0..size {
            for j in i..size {
                m[(i, j)] = diagonals[j - i];
            }
        }
    } else {
        let rows: Vec<Vec<Complex64>> = (0..size)
            .into_par_iter()
            .map(|i| (i..size).map(|j| kernel.entry(i, j)).collect::<Result<Vec<_>>>())
            .collect::<Result<_>>()?;
        for (i, row) in rows.into_iter().enumerate() {
            for (off, v) in row.into_iter().enumerate() {
                m[(i, i + off)] = v;
            }
        }
    }
    HermitianSection::from_matrix(m)
}

/// True iff the pivoted Cholesky factorisation completes, i.e. every leading
/// minor is (numerically) positive.
pub fn hpd_check(s: &HermitianSection) -> bool {
    s.entries().iter().all(|z| z.re.is_finite() && z.im.is_finite())
        && linalg::cholesky_prefix(s.entries()).is_complete()
}

/// One failure of `c_{n,n}² ≤ c_{n−1,n−1} c_{n+1,n+1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct CauchySchwarzViolation {
    pub n: usize,
    pub lhs: f64,
    pub rhs: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct NecessaryCheckReport {
    pub n_max: usize,
    pub violations: Vec<CauchySchwarzViolation>,
}

impl NecessaryCheckReport {
    pub fn passes(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Log-convexity of the diagonal, a condition every moment matrix meets
/// (`∫|z|^{2n} ≤ (∫|z|^{2n−2})^{1/2} (∫|z|^{2n+2})^{1/2}`). Checks
/// `n = 1, …, n_max`.
pub fn moment_necessary_check(kernel: &MomentKernel, n_max: usize) -> Result<NecessaryCheckReport> {
    if n_max == 0 {
        return Err(MsxError::InvalidParameter("n_max must be at least 1".into()));
    }
    let diag: Vec<f64> = (0..=n_max + 1)
        .map(|i| {
            let v = kernel.entry(i, i)?;
            if v.im.abs() > 1e-12 * v.re.abs().max(1.0) || !(v.re > 0.0) {
                return Err(MsxError::NonRealDiagonal { index: i, value: v.to_string() });
            }
            Ok(v.re)
        })
        .collect::<Result<_>>()?;
    let violations = (1..=n_max)
        .filter_map(|n| {
            let lhs = diag[n] * diag[n];
            let rhs = diag[n - 1] * diag[n + 1];
            (lhs > rhs * (1.0 + 1e-12)).then_some(CauchySchwarzViolation { n, lhs, rhs })
        })
        .collect();
    Ok(NecessaryCheckReport { n_max, violations })
}

/// `max |A[i][j] − A[n−j][n−i]|`: distance from symmetry about the
/// anti-diagonal.
pub fn persymmetry_defect(a: &CMatrix) -> f64 {
    assert_eq!(a.nrows(), a.ncols(), "persymmetry of a non-square matrix");
    let last = a.nrows().saturating_sub(1);
    let mut defect = 0.0_f64;
    for i in 0..a.nrows() {
        for j in 0..a.ncols() {
            defect = defect.max((a[(i, j)] - a[(last - j, last - i)]).norm());
        }
    }
    defect
}
