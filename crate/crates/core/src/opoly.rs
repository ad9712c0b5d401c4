//! Orthonormal polynomials through the Cholesky factor of a section.
//!
//! With `M_n = L L*`, the transition matrix is `B_n = (L⁻¹)ᵗ`: column `m`
//! of `B_n` holds the coefficients of the orthonormal polynomial
//! `P_m(z) = Σ_k b_{k,m} z^k`, so `Bᵗ M B̄ = I` and `M⁻¹ = B̄ Bᵗ`.

use num_complex::Complex64;

use crate::error::{MsxError, Result};
use crate::linalg::{self, CMatrix};
use crate::sections::HermitianSection;

/// Upper-triangular `B_n` with positive real diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct TransitionSection {
    b: CMatrix,
}

impl TransitionSection {
    pub fn identity(n: usize) -> Self {
        Self { b: CMatrix::identity(n + 1, n + 1) }
    }

    /// Builds a transition section from an explicit upper-triangular matrix.
    pub fn from_matrix(b: CMatrix) -> Result<Self> {
        let n = b.nrows();
        if n == 0 || b.ncols() != n {
            return Err(MsxError::InvalidParameter("transition matrix must be square".into()));
        }
        for m in 0..n {
            if !(b[(m, m)].re > 0.0) || b[(m, m)].im != 0.0 {
                return Err(MsxError::InvalidParameter(format!(
                    "leading coefficient b[{m}][{m}] = {} is not positive",
                    b[(m, m)]
                )));
            }
            for k in m + 1..n {
                if b[(k, m)].norm() != 0.0 {
                    return Err(MsxError::InvalidParameter(format!("b[{k}][{m}] below the diagonal")));
                }
            }
        }
        Ok(Self { b })
    }

    pub fn order(&self) -> usize {
        self.b.nrows() - 1
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.b
    }

    /// `b_{k,m}`: coefficient of `z^k` in `P_m`.
    pub fn entry(&self, k: usize, m: usize) -> Complex64 {
        self.b[(k, m)]
    }

    pub fn leading(&self, m: usize) -> TransitionSection {
        Self { b: self.b.view((0, 0), (m + 1, m + 1)).into_owned() }
    }

    /// `B̄ Bᵗ`, which equals the inverse of the factored section.
    pub fn inverse_product(&self) -> CMatrix {
        self.b.map(|z| z.conj()) * self.b.transpose()
    }
}

fn transition_from_factor(l: &CMatrix) -> TransitionSection {
    TransitionSection { b: linalg::lower_triangular_inverse(l).transpose() }
}

/// Cholesky factor `L` of an HPD section and its transition matrix.
pub fn cholesky_transition(s: &HermitianSection) -> Result<(CMatrix, TransitionSection)> {
    let l = linalg::cholesky_prefix(s.entries()).into_result()?;
    let b = transition_from_factor(&l);
    Ok((l, b))
}

/// Factorisation of the longest positive definite leading block.
#[derive(Debug, Clone)]
pub struct TransitionPrefix {
    pub l: CMatrix,
    /// `None` when no leading block is positive definite.
    pub b: Option<TransitionSection>,
    /// Order of the first rejected pivot, with the pivot value.
    pub failure: Option<(usize, f64)>,
}

impl TransitionPrefix {
    /// Highest order that factored.
    pub fn usable_order(&self) -> Option<usize> {
        self.b.as_ref().map(TransitionSection::order)
    }
}

/// Like [`cholesky_transition`], but keeps the orders that factored when a
/// later pivot breaks down.
pub fn transition_prefix(s: &HermitianSection) -> TransitionPrefix {
    let prefix = linalg::cholesky_prefix(s.entries());
    if let Some((order, pivot)) = prefix.failure {
        log::warn!(
            "section of order {} lost positive definiteness at order {order} (pivot {pivot:e})",
            s.order()
        );
    }
    let b = (prefix.rows() > 0).then(|| transition_from_factor(&prefix.l));
    TransitionPrefix { l: prefix.l, b, failure: prefix.failure }
}

/// Horner evaluation of `P_m(z)`.
pub fn poly_eval(b: &TransitionSection, m: usize, z: Complex64) -> Result<Complex64> {
    if m > b.order() {
        return Err(MsxError::DegreeOutOfRange { degree: m, order: b.order() });
    }
    Ok((0..=m).rev().fold(Complex64::new(0.0, 0.0), |acc, k| acc * z + b.entry(k, m)))
}

/// `‖Bᵗ S B̄ − I‖_max`.
pub fn orthonormality_residual(b: &TransitionSection, s: &HermitianSection) -> Result<f64> {
    if b.order() != s.order() {
        return Err(MsxError::OrderMismatch { expected: s.order(), got: b.order() });
    }
    let gram = b.matrix().transpose() * s.entries() * b.matrix().map(|z| z.conj());
    let size = s.size();
    Ok(linalg::max_abs_diff(&gram, &CMatrix::identity(size, size)))
}

/// Both sides of `‖B_n‖² = 1/λ_min(M_n)`, computed independently.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormIdentity {
    pub sigma_max_sq: f64,
    pub lambda_min: f64,
    pub defect: f64,
}

pub fn norm_identity_check(s: &HermitianSection) -> Result<NormIdentity> {
    let (_, b) = cholesky_transition(s)?;
    let sigma = linalg::sigma_max(b.matrix());
    let lambda_min = crate::spectra::smallest_eigenvalue(s)?.value;
    let sigma_max_sq = sigma * sigma;
    Ok(NormIdentity { sigma_max_sq, lambda_min, defect: (sigma_max_sq * lambda_min - 1.0).abs() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::{Measure, MomentKernel};
    use crate::sections::section;

    fn pascal() -> MomentKernel {
        MomentKernel::from_measure(Measure::ShiftedCircle { center: Complex64::new(1.0, 0.0), radius: 1.0 })
            .unwrap()
    }

    fn max_power(a: f64) -> MomentKernel {
        MomentKernel::real(move |i, j| a.powi(i.max(j) as i32))
    }

    #[test]
    fn pascal_column_two() {
        let (_, b) = cholesky_transition(&section(&pascal(), 2).unwrap()).unwrap();
        let col: Vec<f64> = (0..3).map(|k| b.entry(k, 2).re).collect();
        assert_eq!(col, vec![1.0, -2.0, 1.0]);
    }

    #[test]
    fn max_power_first_column() {
        let (_, b) = cholesky_transition(&section(&max_power(0.5), 1).unwrap()).unwrap();
        assert!((b.entry(0, 1).re + 1.0).abs() < 1e-14);
        assert!((b.entry(1, 1).re - 2.0).abs() < 1e-14);
    }

    #[test]
    fn disk_transition_is_diagonal() {
        let k = MomentKernel::from_measure(Measure::disk_uniform()).unwrap();
        let (_, b) = cholesky_transition(&section(&k, 2).unwrap()).unwrap();
        for i in 0..3 {
            let expected = ((i as f64 + 1.0) / std::f64::consts::PI).sqrt();
            assert!((b.entry(i, i).re - expected).abs() < 1e-14);
        }
        assert_eq!(b.entry(0, 1).norm(), 0.0);
    }

    #[test]
    fn pascal_polynomials_are_powers_of_z_minus_one() {
        let (_, b) = cholesky_transition(&section(&pascal(), 3).unwrap()).unwrap();
        let v = poly_eval(&b, 3, Complex64::new(0.0, 0.0)).unwrap();
        assert!((v.re + 1.0).abs() < 1e-14);
        let z = Complex64::new(0.3, 0.7);
        let expected = (z - 1.0).powu(3);
        assert!((poly_eval(&b, 3, z).unwrap() - expected).norm() < 1e-13);
        assert_eq!(poly_eval(&b, 0, z).unwrap(), b.entry(0, 0));
        assert!(matches!(poly_eval(&b, 4, z), Err(MsxError::DegreeOutOfRange { .. })));
    }

    #[test]
    fn max_power_root_at_a() {
        let (_, b) = cholesky_transition(&section(&max_power(0.5), 2).unwrap()).unwrap();
        assert!(poly_eval(&b, 2, Complex64::new(0.5, 0.0)).unwrap().norm() < 1e-14);
    }

    #[test]
    fn identity_residual_is_zero() {
        let r = orthonormality_residual(&TransitionSection::identity(3), &HermitianSection::identity(3)).unwrap();
        assert_eq!(r, 0.0);
        assert!(orthonormality_residual(&TransitionSection::identity(2), &HermitianSection::identity(3)).is_err());
    }

    #[test]
    fn identity_norm_check() {
        let r = norm_identity_check(&HermitianSection::identity(4)).unwrap();
        assert!((r.sigma_max_sq - 1.0).abs() < 1e-15);
        assert!((r.lambda_min - 1.0).abs() < 1e-15);
        assert!(r.defect < 1e-14);
    }

    #[test]
    fn prefix_keeps_factored_orders() {
        let hilbert = MomentKernel::real(|i, j| 1.0 / (i + j + 1) as f64);
        let p = transition_prefix(&section(&hilbert, 30).unwrap());
        let (order, _) = p.failure.expect("hilbert section breaks down");
        assert!(order > 5 && order < 30);
        assert_eq!(p.usable_order(), Some(order - 1));
    }

    #[test]
    fn non_pd_section_reports_order() {
        let s = HermitianSection::from_matrix(CMatrix::from_fn(3, 3, |_, _| Complex64::new(1.0, 0.0))).unwrap();
        assert!(matches!(cholesky_transition(&s), Err(MsxError::NotPositiveDefinite { order: 1, .. })));
    }
}
