//! Closed forms for the worked examples, used as ground truth by tests and
//! by `msx verify`.
//!
//! Nothing here calls into the numerical modules: every value is evaluated
//! directly from its formula so that a bug on the computational side cannot
//! leak into the reference side.

use std::f64::consts::PI;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{MsxError, Result};

fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, t| acc * (n - t) as f64 / (t + 1) as f64).round()
}

fn ratio(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Normalised arc length on `|z − 1| = 1`: Pascal moments, `P_n = (z − 1)ⁿ`.
#[derive(Debug, Clone, Copy)]
pub struct Example1;

impl Example1 {
    pub fn moment(&self, i: usize, j: usize) -> f64 {
        binomial(i + j, i)
    }

    pub fn exact_moment(&self, i: usize, j: usize) -> BigRational {
        let mut acc = BigInt::one();
        let k = i.min(j);
        for t in 0..k {
            acc = acc * BigInt::from(i + j - t) / BigInt::from(t + 1);
        }
        BigRational::from_integer(acc)
    }

    pub fn b(&self, k: usize, n: usize) -> f64 {
        if k > n {
            return 0.0;
        }
        let sign = if (n - k).is_multiple_of(2) { 1.0 } else { -1.0 };
        sign * binomial(n, k)
    }

    /// `Σ_{k≤n} |P_k(0)|² = n + 1`.
    pub fn divergence_partial_sum(&self, n: usize) -> f64 {
        (n + 1) as f64
    }
}

/// `M = (a^{max(i,j)})`, the image of a Poisson measure under `z ↦ √a z`.
#[derive(Debug, Clone, Copy)]
pub struct Example2 {
    pub a: f64,
}

impl Example2 {
    pub fn moment(&self, i: usize, j: usize) -> f64 {
        self.a.powi(i.max(j) as i32)
    }

    /// Exact moments for `a = num/den`.
    pub fn exact_moment(num: i64, den: i64, i: usize, j: usize) -> BigRational {
        let a = ratio(num, den);
        (0..i.max(j)).fold(BigRational::one(), |acc, _| acc * &a)
    }

    pub fn det(&self, n: usize) -> f64 {
        let n = n as i32;
        self.a.powi(n * (n + 1) / 2) * (1.0 - self.a).powi(n)
    }

    pub fn b(&self, k: usize, n: usize) -> f64 {
        let a = self.a;
        match (n, k) {
            (0, 0) => 1.0,
            (0, _) => 0.0,
            _ if k == n => 1.0 / (a.powi(n as i32) * (1.0 - a)).sqrt(),
            _ if k + 1 == n => -a / (a.powi(n as i32) * (1.0 - a)).sqrt(),
            _ => 0.0,
        }
    }

    /// `P_n(z) = z^{n−1}(z − a)/√(aⁿ(1−a))` for `n ≥ 1`.
    pub fn p(&self, n: usize, z: Complex64) -> Complex64 {
        if n == 0 {
            return Complex64::new(1.0, 0.0);
        }
        let a = self.a;
        z.powu(n as u32 - 1) * (z - a) / (a.powi(n as i32) * (1.0 - a)).sqrt()
    }

    /// Tridiagonal classical inverse.
    pub fn a_entry(&self, i: usize, j: usize) -> f64 {
        let a = self.a;
        let s = 1.0 / (1.0 - a);
        let (lo, hi) = (i.min(j), i.max(j));
        if lo == hi {
            if lo == 0 {
                s
            } else {
                s * (a + 1.0) / a.powi(lo as i32)
            }
        } else if hi == lo + 1 {
            -s / a.powi(lo as i32)
        } else {
            0.0
        }
    }

    pub fn lambda_limit(&self) -> f64 {
        0.0
    }
}

/// `ν = ½ m + ½ δ_1`, whose Toeplitz matrix is `½(I + J)`.
#[derive(Debug, Clone, Copy)]
pub struct Example3;

impl Example3 {
    pub fn moment(&self, i: usize, j: usize) -> f64 {
        if i == j {
            1.0
        } else {
            0.5
        }
    }

    pub fn exact_moment(&self, i: usize, j: usize) -> BigRational {
        if i == j {
            BigRational::one()
        } else {
            ratio(1, 2)
        }
    }

    /// Eigenvalues of `½(I + J)` of order `n`: ½ (n times) and `(n+2)/2`,
    /// so the smallest is ½ from `n = 1` on.
    pub fn lambda(&self, n: usize) -> f64 {
        if n == 0 {
            1.0
        } else {
            0.5
        }
    }

    pub fn lambda_max(&self, n: usize) -> f64 {
        (n as f64 + 2.0) / 2.0
    }

    /// `M_n⁻¹[i][j] = 2(δ_{ij} − 1/(n+2))`.
    pub fn inverse_entry(&self, n: usize, i: usize, j: usize) -> f64 {
        let delta = if i == j { 1.0 } else { 0.0 };
        2.0 * (delta - 1.0 / (n as f64 + 2.0))
    }

    /// `b_{n,n}² = M_n⁻¹[n][n] = 2(n+1)/(n+2)`.
    pub fn b_diag(&self, n: usize) -> f64 {
        (2.0 * (n as f64 + 1.0) / (n as f64 + 2.0)).sqrt()
    }

    pub fn a_entry(&self, i: usize, j: usize) -> f64 {
        if i == j {
            2.0
        } else {
            0.0
        }
    }

    pub fn beta(&self, k: usize) -> f64 {
        if k == 0 {
            2.0_f64.sqrt()
        } else {
            0.0
        }
    }

    pub fn lambda_limit(&self) -> f64 {
        0.5
    }
}

/// Tridiagonal Toeplitz matrix with symbol `(1 + a² + 2a cos θ)/(1 − a²)`.
#[derive(Debug, Clone, Copy)]
pub struct Example4 {
    pub a: f64,
}

impl Example4 {
    pub fn t(&self, k: i64) -> f64 {
        let a = self.a;
        match k.unsigned_abs() {
            0 => (1.0 + a * a) / (1.0 - a * a),
            1 => a / (1.0 - a * a),
            _ => 0.0,
        }
    }

    pub fn moment(&self, i: usize, j: usize) -> f64 {
        self.t(i as i64 - j as i64)
    }

    pub fn symbol(&self, theta: f64) -> f64 {
        let a = self.a;
        (1.0 + a * a + 2.0 * a * theta.cos()) / (1.0 - a * a)
    }

    /// `det T_n = (1 − a^{2(n+2)})/(1 − a²)^{n+2}`.
    pub fn det(&self, n: usize) -> f64 {
        let a2 = self.a * self.a;
        (1.0 - a2.powi(n as i32 + 2)) / (1.0 - a2).powi(n as i32 + 2)
    }

    /// `b_{n−k,n}` for `k ≤ n`.
    pub fn b_from_top(&self, n: usize, k: usize) -> f64 {
        assert!(k <= n);
        let a = self.a;
        let a2 = a * a;
        let sign = if k.is_multiple_of(2) { 1.0 } else { -1.0 };
        (1.0 - a2).sqrt() * sign * a.powi(k as i32) * (1.0 - a2.powi((n - k + 1) as i32))
            / ((1.0 - a2.powi(n as i32 + 1)) * (1.0 - a2.powi(n as i32 + 2))).sqrt()
    }

    /// `b_{k,n}` in row/column form.
    pub fn b(&self, k: usize, n: usize) -> f64 {
        if k > n {
            0.0
        } else {
            self.b_from_top(n, n - k)
        }
    }

    /// `β_k = (−a)^k √(1 − a²)`.
    pub fn beta(&self, k: usize) -> f64 {
        (-self.a).powi(k as i32) * (1.0 - self.a * self.a).sqrt()
    }

    /// `α_k = (−a)^{|k|}`, also the Fourier coefficients of the reciprocal symbol.
    pub fn alpha(&self, k: i64) -> f64 {
        (-self.a).powi(k.unsigned_abs() as i32)
    }

    /// Classical inverse: `a_{ij} = (−a)^{|i−j|}(1 − a^{2(min(i,j)+1)})`.
    pub fn a_entry(&self, i: usize, j: usize) -> f64 {
        let a = self.a;
        let lo = i.min(j) as i32;
        (-a).powi((i as i64 - j as i64).unsigned_abs() as i32) * (1.0 - a.powi(2 * (lo + 1)))
    }

    pub fn lambda_min(&self, n: usize) -> f64 {
        tridiag_min_eig(self.a, n)
    }

    pub fn essinf(&self) -> f64 {
        (1.0 - self.a) / (1.0 + self.a)
    }
}

/// `P_n(z) = b_n zⁿ`: diagonal moment matrix `c_i = b_i^{−2}`.
#[derive(Debug, Clone)]
pub struct CaseI {
    pub b: Vec<f64>,
}

impl CaseI {
    pub fn moment(&self, i: usize, j: usize) -> f64 {
        if i == j {
            self.b[i].powi(-2)
        } else {
            0.0
        }
    }

    pub fn a_entry(&self, i: usize, j: usize) -> f64 {
        if i == j {
            self.b[i] * self.b[i]
        } else {
            0.0
        }
    }
}

/// `P_0 = 1`, `P_n(z) = b_n z^{n−1}(z − 1)`: `M = (c_{min(i,j)})` with
/// `c_n = Σ_{k≤n} b_k^{−2}` (taking `b_0 = 1`) and tridiagonal inverse.
#[derive(Debug, Clone)]
pub struct CaseII {
    /// `b_1, b_2, …`; `b_0 = 1` is implied.
    pub b: Vec<f64>,
}

impl CaseII {
    fn b_at(&self, n: usize) -> f64 {
        if n == 0 {
            1.0
        } else {
            self.b[n - 1]
        }
    }

    pub fn moment(&self, i: usize, j: usize) -> f64 {
        (0..=i.min(j)).map(|k| self.b_at(k).powi(-2)).sum()
    }

    pub fn b_entry(&self, k: usize, n: usize) -> f64 {
        if k == n {
            self.b_at(n)
        } else if n >= 1 && k + 1 == n {
            -self.b_at(n)
        } else {
            0.0
        }
    }

    pub fn a_entry(&self, i: usize, j: usize) -> f64 {
        let (lo, hi) = (i.min(j), i.max(j));
        if lo == hi {
            self.b_at(lo).powi(2) + self.b_at(lo + 1).powi(2)
        } else if hi == lo + 1 {
            -self.b_at(hi).powi(2)
        } else {
            0.0
        }
    }
}

/// `M = (min(i, j) + 1)`, which fails the moment log-convexity test at `n = 1`.
#[derive(Debug, Clone, Copy)]
pub struct Hofmaier;

impl Hofmaier {
    pub fn moment(&self, i: usize, j: usize) -> f64 {
        (i.min(j) + 1) as f64
    }

    pub fn exact_moment(&self, i: usize, j: usize) -> BigRational {
        BigRational::from_integer(BigInt::from(i.min(j) + 1))
    }
}

/// Hilbert matrix `1/(i + j + 1)`: moments of Lebesgue measure on `[0, 1]`.
#[derive(Debug, Clone, Copy)]
pub struct Hilbert;

impl Hilbert {
    pub fn moment(&self, i: usize, j: usize) -> f64 {
        1.0 / (i + j + 1) as f64
    }

    pub fn exact_moment(&self, i: usize, j: usize) -> BigRational {
        ratio(1, (i + j + 1) as i64)
    }
}

/// Uniform area measure on the unit disk (total mass π).
#[derive(Debug, Clone, Copy)]
pub struct DiskUniform;

impl DiskUniform {
    pub fn moment(&self, i: usize, j: usize) -> f64 {
        if i == j {
            PI / (i as f64 + 1.0)
        } else {
            0.0
        }
    }

    pub fn a_entry(&self, i: usize, j: usize) -> f64 {
        if i == j {
            (i as f64 + 1.0) / PI
        } else {
            0.0
        }
    }
}

#[derive(Debug, Clone)]
pub enum ClosedForm {
    Example1(Example1),
    Example2(Example2),
    Example3(Example3),
    Example4(Example4),
    CaseI(CaseI),
    CaseII(CaseII),
    Hofmaier(Hofmaier),
    Hilbert(Hilbert),
    DiskUniform(DiskUniform),
}

impl ClosedForm {
    pub fn moment(&self, i: usize, j: usize) -> f64 {
        match self {
            ClosedForm::Example1(e) => e.moment(i, j),
            ClosedForm::Example2(e) => e.moment(i, j),
            ClosedForm::Example3(e) => e.moment(i, j),
            ClosedForm::Example4(e) => e.moment(i, j),
            ClosedForm::CaseI(e) => e.moment(i, j),
            ClosedForm::CaseII(e) => e.moment(i, j),
            ClosedForm::Hofmaier(e) => e.moment(i, j),
            ClosedForm::Hilbert(e) => e.moment(i, j),
            ClosedForm::DiskUniform(e) => e.moment(i, j),
        }
    }

    /// Entry of the candidate inverse `A`, when a closed form is known.
    pub fn a_entry(&self, i: usize, j: usize) -> Option<f64> {
        match self {
            ClosedForm::Example2(e) => Some(e.a_entry(i, j)),
            ClosedForm::Example3(e) => Some(e.a_entry(i, j)),
            ClosedForm::Example4(e) => Some(e.a_entry(i, j)),
            ClosedForm::CaseI(e) => Some(e.a_entry(i, j)),
            ClosedForm::CaseII(e) => Some(e.a_entry(i, j)),
            ClosedForm::DiskUniform(e) => Some(e.a_entry(i, j)),
            ClosedForm::Example1(_) | ClosedForm::Hofmaier(_) | ClosedForm::Hilbert(_) => None,
        }
    }
}

/// Parameters accepted by [`closed_form`].
#[derive(Debug, Clone, Default)]
pub struct OracleParams {
    pub a: Option<f64>,
    pub b: Vec<f64>,
}

fn param_a(params: &OracleParams) -> Result<f64> {
    match params.a {
        Some(a) if a > 0.0 && a < 1.0 => Ok(a),
        Some(a) => Err(MsxError::InvalidParameter(format!("a = {a} must lie in (0, 1)"))),
        None => Err(MsxError::InvalidParameter("parameter `a` is required".into())),
    }
}

fn param_b(params: &OracleParams) -> Result<Vec<f64>> {
    if params.b.is_empty() || params.b.iter().any(|&x| !(x > 0.0)) {
        return Err(MsxError::InvalidParameter("`b` must be a non-empty list of positive values".into()));
    }
    Ok(params.b.clone())
}

pub fn closed_form(example_id: &str, params: &OracleParams) -> Result<ClosedForm> {
    Ok(match example_id {
        "example1" | "pascal" => ClosedForm::Example1(Example1),
        "example2" => ClosedForm::Example2(Example2 { a: param_a(params)? }),
        "example3" => ClosedForm::Example3(Example3),
        "example4" => ClosedForm::Example4(Example4 { a: param_a(params)? }),
        "case1" | "caseI" => ClosedForm::CaseI(CaseI { b: param_b(params)? }),
        "case2" | "caseII" => ClosedForm::CaseII(CaseII { b: param_b(params)? }),
        "hofmaier" => ClosedForm::Hofmaier(Hofmaier),
        "hilbert" => ClosedForm::Hilbert(Hilbert),
        "disk" | "disk_uniform" => ClosedForm::DiskUniform(DiskUniform),
        other => return Err(MsxError::UnknownExample(other.to_string())),
    })
}

/// `(1 + a² − 2a cos(π/(n+2)))/(1 − a²)`: smallest eigenvalue of the
/// order-`n` tridiagonal section with diagonal `(1+a²)/(1−a²)` and
/// off-diagonal `a/(1−a²)`.
pub fn tridiag_min_eig(a: f64, n: usize) -> f64 {
    (1.0 + a * a - 2.0 * a * (PI / (n as f64 + 2.0)).cos()) / (1.0 - a * a)
}

/// Exact inverse of `½(I + J)` of order `n`: `2(I − J/(n+2))`.
pub fn rank_one_inverse(n: usize) -> Vec<Vec<BigRational>> {
    let size = n + 1;
    let off = ratio(-2, (n + 2) as i64);
    let diag = BigRational::from_integer(BigInt::from(2)) + &off;
    (0..size)
        .map(|i| (0..size).map(|j| if i == j { diag.clone() } else { off.clone() }).collect())
        .collect()
}

/// Fourier coefficients of `1/(2 + cos θ)`: `(−(2 − √3))^{|k|}/√3`.
pub fn reciprocal_two_plus_cos(k: i64) -> f64 {
    let r = 2.0 - 3.0_f64.sqrt();
    (-r).powi(k.unsigned_abs() as i32) / 3.0_f64.sqrt()
}

/// Zero rational, for callers comparing exact matrices.
pub fn rational_zero() -> BigRational {
    BigRational::zero()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn example2_determinant() {
        let e = Example2 { a: 0.5 };
        assert!((e.det(3) - 1.0 / 512.0).abs() < 1e-18);
    }

    #[test]
    fn example4_beta_one() {
        let e = Example4 { a: 0.5 };
        assert!((e.beta(1) + 0.5 * 3.0_f64.sqrt() / 2.0).abs() < 1e-15);
    }

    #[test]
    fn example3_two_by_two_inverse() {
        let inv = rank_one_inverse(1);
        assert_eq!(inv[0][0], ratio(4, 3));
        assert_eq!(inv[0][1], ratio(-2, 3));
        assert_eq!(rank_one_inverse(0)[0][0], ratio(1, 1));
        assert!((Example3.inverse_entry(1, 0, 0) - 4.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn rank_one_inverse_times_section_is_identity() {
        for n in 0..=20 {
            let inv = rank_one_inverse(n);
            for i in 0..=n {
                for j in 0..=n {
                    let s = (0..=n).fold(BigRational::zero(), |acc, k| acc + &inv[i][k] * Example3.exact_moment(k, j));
                    let expect = if i == j { BigRational::one() } else { BigRational::zero() };
                    assert_eq!(s, expect);
                }
            }
        }
    }

    #[test]
    fn tridiagonal_eigen_formula() {
        assert!((tridiag_min_eig(0.5, 0) - 5.0 / 3.0).abs() < 1e-15);
        assert!((tridiag_min_eig(0.5, 200) - 0.33349).abs() < 1e-5);
        assert!((tridiag_min_eig(0.5, 1_000_000) - 1.0 / 3.0).abs() < 1e-10);
    }

    #[test]
    fn example4_self_consistency() {
        for a in [0.2, 0.5, 0.8] {
            let e = Example4 { a };
            let b00 = ((1.0 - a * a) / (1.0 + a * a)).sqrt();
            assert!((e.b(0, 0) - b00).abs() < 1e-15);
            assert!((e.b(0, 0) - 1.0 / e.t(0).sqrt()).abs() < 1e-15);
            assert!((e.det(0) - e.t(0)).abs() < 1e-14);
            assert!((e.det(1) - (e.t(0).powi(2) - e.t(1).powi(2))).abs() < 1e-13);
            // α_0 = Σ β_k²
            let s: f64 = (0..200).map(|k| e.beta(k).powi(2)).sum();
            assert!((s - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn example4_inverse_entries() {
        let a = 0.5;
        let e = Example4 { a };
        assert!((e.a_entry(0, 1) + 3.0 / 8.0).abs() < 1e-15);
        assert!((e.a_entry(1, 1) - 15.0 / 16.0).abs() < 1e-15);
        assert!((e.a_entry(1, 2) + a * (1.0 - a.powi(4))).abs() < 1e-15);
        assert!((e.a_entry(3, 3) - (1.0 - a.powi(8))).abs() < 1e-15);
    }

    #[test]
    fn case_two_with_unit_b_is_hofmaier() {
        let c = CaseII { b: vec![1.0; 8] };
        for i in 0..6 {
            for j in 0..6 {
                assert_eq!(c.moment(i, j), Hofmaier.moment(i, j));
            }
        }
        assert_eq!(c.a_entry(0, 0), 2.0);
        assert_eq!(c.a_entry(0, 1), -1.0);
    }

    #[test]
    fn unknown_example_is_rejected() {
        assert!(matches!(closed_form("example9", &OracleParams::default()), Err(MsxError::UnknownExample(_))));
        assert!(closed_form("example4", &OracleParams::default()).is_err());
    }

    #[test]
    fn reciprocal_coefficients_sum_to_symbol() {
        let theta: f64 = 0.9;
        let s: f64 = (-40..=40).map(|k| reciprocal_two_plus_cos(k) * (k as f64 * theta).cos()).sum();
        assert!((s - 1.0 / (2.0 + theta.cos())).abs() < 1e-14);
    }
}
