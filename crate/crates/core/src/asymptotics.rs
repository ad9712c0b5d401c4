//! Diagonal limits of semi-infinite matrices: `β_k = lim b_{n−k,n}` of the
//! transition matrix, `α_k = lim a_{n,n+k}` of the inverse, and the
//! diagonal limits of a moment matrix on the closed disk.

use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{MsxError, Result};
use crate::linalg::{self, CMatrix};
use crate::measures::{Measure, MomentKernel};
use crate::opoly::{transition_prefix, TransitionSection};
use crate::sections::section;
use crate::spectra::{estimate_limit, estimate_limit_from, lambda_sequence, LimitConfig, LimitEstimate};

/// Convergence record of one diagonal `α_k`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DiagonalDiagnostic {
    /// Spread of the tail around the estimate (sequence route), or the
    /// largest uncertainty among the `β` limits used (series route).
    pub last_delta: f64,
    /// Truncation bound of the `α` series; `None` on the sequence route.
    pub tail_bound: Option<f64>,
    pub converged: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct AsymptoticProfile {
    pub k_max: usize,
    /// `β_0, …, β_K`; empty when the profile was read off a generic matrix sequence.
    pub beta: Vec<LimitEstimate<Complex64>>,
    /// `α_{−k_max}, …, α_{k_max}`.
    pub alpha: Vec<Complex64>,
    pub alpha_diagnostics: Vec<DiagonalDiagnostic>,
}

impl AsymptoticProfile {
    pub fn alpha(&self, k: i64) -> Complex64 {
        assert!(k.unsigned_abs() as usize <= self.k_max, "diagonal {k} beyond k_max = {}", self.k_max);
        self.alpha[(k + self.k_max as i64) as usize]
    }

    pub fn beta_values(&self) -> Vec<Complex64> {
        self.beta.iter().map(|e| e.value).collect()
    }

    /// Toeplitz window `(α_{j−i})_{i,j ≤ size}`, matching `α_k = lim a_{n,n+k}`.
    pub fn lim_matrix(&self, size: usize) -> Result<CMatrix> {
        if size > self.k_max {
            return Err(MsxError::InsufficientData(format!(
                "Lim window of order {size} needs diagonals up to {size}, have {}",
                self.k_max
            )));
        }
        Ok(CMatrix::from_fn(size + 1, size + 1, |i, j| self.alpha(j as i64 - i as i64)))
    }

    pub fn all_converged(&self) -> bool {
        self.beta.iter().all(|b| b.converged) && self.alpha_diagnostics.iter().all(|d| d.converged)
    }
}

/// `lim_n b_{n−k,n}` for `k ≤ k_max`, read off the transition section of
/// the highest order (earlier columns are nested inside it).
pub fn beta_limits_of(b: &TransitionSection, k_max: usize, cfg: &LimitConfig) -> Result<Vec<LimitEstimate<Complex64>>> {
    let n = b.order();
    if k_max >= n {
        return Err(MsxError::InvalidParameter(format!("k_max = {k_max} must be below the order {n}")));
    }
    Ok((0..=k_max)
        .into_par_iter()
        .map(|k| {
            let seq: Vec<Complex64> = (k..=n).map(|m| b.entry(m - k, m)).collect();
            let est = estimate_limit_from(&seq, k, cfg);
            if !est.converged {
                log::debug!("β_{k} not converged: delta {:e} > {:e}", est.last_delta, est.tolerance);
            }
            est
        })
        .collect())
}

pub fn beta_limits(
    kernel: &MomentKernel,
    k_max: usize,
    n_max: usize,
    cfg: &LimitConfig,
) -> Result<Vec<LimitEstimate<Complex64>>> {
    if !kernel.is_toeplitz() {
        return Err(MsxError::InvalidParameter("β limits need a Toeplitz kernel".into()));
    }
    let prefix = transition_prefix(&section(kernel, n_max)?);
    match (prefix.b, prefix.failure) {
        (Some(b), None) => beta_limits_of(&b, k_max, cfg),
        (_, Some((order, pivot))) => Err(MsxError::NotPositiveDefinite { order, pivot }),
        (None, None) => unreachable!("an unfactored section always records its failure"),
    }
}

/// `Σ_i conj(β_i) β_{i+j}` over the supplied prefix.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AlphaSum {
    pub value: Complex64,
    /// Bound on the omitted terms, from the geometric decay of the last two `|β|`.
    pub tail_bound: f64,
    pub converged: bool,
}

/// Truncation tolerance for the `α` series.
pub const ALPHA_TAIL_TOL: f64 = 1e-12;

pub fn alpha_from_beta(beta: &[Complex64], j: i64) -> Result<AlphaSum> {
    if beta.is_empty() {
        return Err(MsxError::InsufficientData("empty β list".into()));
    }
    let m = j.unsigned_abs() as usize;
    let last = beta.len() - 1;
    let mut value = Complex64::new(0.0, 0.0);
    for i in 0..beta.len().saturating_sub(m) {
        value += beta[i].conj() * beta[i + m];
    }
    if j < 0 {
        value = value.conj();
    }

    let tail_bound = {
        let b_last = beta[last].norm();
        let b_prev = if last > 0 { beta[last - 1].norm() } else { f64::INFINITY };
        if b_last == 0.0 && (last == 0 || b_prev == 0.0) {
            0.0
        } else if !(b_prev > 0.0) || b_last >= b_prev {
            f64::INFINITY
        } else {
            let r = b_last / b_prev;
            // |β_i| ≤ |β_K| r^{i−K} beyond the prefix.
            let start = (last + 1).saturating_sub(m);
            let known: f64 = (start..=last).map(|i| beta[i].norm() * b_last * r.powi((i + m - last) as i32)).sum();
            known + b_last * b_last * r.powi(m as i32) * r * r / (1.0 - r * r)
        }
    };
    Ok(AlphaSum { value, tail_bound, converged: tail_bound < ALPHA_TAIL_TOL })
}

/// `a_{ik} = Σ_{j ≤ i} conj(β_j) β_{k−i+j}` for `i ≤ k`, Hermitian below.
pub fn inverse_from_beta(beta: &[Complex64], size: usize) -> Result<CMatrix> {
    if beta.len() <= size {
        return Err(MsxError::InsufficientData(format!(
            "window of order {size} needs β_0…β_{size}, have {} values",
            beta.len()
        )));
    }
    let mut a = CMatrix::zeros(size + 1, size + 1);
    for i in 0..=size {
        for k in i..=size {
            let v: Complex64 = (0..=i).map(|j| beta[j].conj() * beta[k - i + j]).sum();
            a[(i, k)] = v;
            a[(k, i)] = v.conj();
        }
    }
    for i in 0..=size {
        a[(i, i)].im = 0.0;
    }
    Ok(a)
}

/// Profile with `β` limits from the kernel's transition sections and `α`
/// from the `β` series.
pub fn beta_profile(kernel: &MomentKernel, k_max: usize, n_max: usize, cfg: &LimitConfig) -> Result<AsymptoticProfile> {
    let beta = beta_limits(kernel, k_max, n_max, cfg)?;
    profile_from_beta(beta, k_max)
}

pub fn profile_from_beta(beta: Vec<LimitEstimate<Complex64>>, k_max: usize) -> Result<AsymptoticProfile> {
    let values: Vec<Complex64> = beta.iter().map(|e| e.value).collect();
    let beta_delta = beta.iter().map(|e| e.last_delta).fold(0.0, f64::max);
    let beta_ok = beta.iter().all(|e| e.converged);
    let mut alpha = Vec::with_capacity(2 * k_max + 1);
    let mut alpha_diagnostics = Vec::with_capacity(2 * k_max + 1);
    for j in -(k_max as i64)..=k_max as i64 {
        let s = alpha_from_beta(&values, j)?;
        alpha.push(s.value);
        alpha_diagnostics.push(DiagonalDiagnostic {
            last_delta: beta_delta,
            tail_bound: Some(s.tail_bound),
            converged: s.converged && beta_ok,
        });
    }
    Ok(AsymptoticProfile { k_max, beta, alpha, alpha_diagnostics })
}

/// Window source for [`weak_asymptotic_limit`]: `n ↦` a matrix containing
/// the entries `(n, n+k)` and `(n+k, n)` for `k ≤ k_max`.
pub type WindowFn<'a> = dyn Fn(usize) -> Result<Arc<CMatrix>> + Sync + 'a;

/// Diagonal limits `α_k = lim_n a_{n,n+k}` for `|k| ≤ k_max`, over `n ≤ n_max`.
pub fn weak_asymptotic_limit(
    matrix_seq: &WindowFn<'_>,
    k_max: usize,
    n_max: usize,
    cfg: &LimitConfig,
) -> Result<AsymptoticProfile> {
    let windows: Vec<Arc<CMatrix>> = (0..=n_max).map(matrix_seq).collect::<Result<_>>()?;
    for (n, w) in windows.iter().enumerate() {
        if w.nrows() <= n + k_max || w.ncols() <= n + k_max {
            return Err(MsxError::InsufficientData(format!(
                "window {n} is {}×{}, need entry ({n}, {})",
                w.nrows(),
                w.ncols(),
                n + k_max
            )));
        }
    }
    let estimates: Vec<LimitEstimate<Complex64>> = (-(k_max as i64)..=k_max as i64)
        .into_par_iter()
        .map(|k| {
            let d = k.unsigned_abs() as usize;
            let seq: Vec<Complex64> = windows
                .iter()
                .enumerate()
                .map(|(n, w)| if k >= 0 { w[(n, n + d)] } else { w[(n + d, n)] })
                .collect();
            estimate_limit(&seq, cfg)
        })
        .collect();
    let alpha = estimates.iter().map(|e| e.value).collect();
    let alpha_diagnostics = estimates
        .iter()
        .map(|e| DiagonalDiagnostic { last_delta: e.last_delta, tail_bound: None, converged: e.converged })
        .collect();
    Ok(AsymptoticProfile { k_max, beta: Vec::new(), alpha, alpha_diagnostics })
}

/// Diagonal limits of `M(μ)` against the moments of `μ` restricted to the circle.
#[derive(Debug, Clone, Serialize)]
pub struct ToeplitzLimitReport {
    pub profile: AsymptoticProfile,
    /// `c_{0,k}` of the circle restriction, `k = −k_max, …, k_max`.
    pub restriction: Vec<Complex64>,
    pub gaps: Vec<f64>,
    pub max_gap: f64,
}

pub fn moment_matrix_toeplitz_limit(
    mu: &Measure,
    k_max: usize,
    n_max: usize,
    cfg: &LimitConfig,
) -> Result<ToeplitzLimitReport> {
    if !mu.is_disk_supported() {
        return Err(MsxError::InvalidMeasure("diagonal limits of M(μ) need a measure on the closed disk".into()));
    }
    let kernel = MomentKernel::from_measure(mu.clone())?;
    let full = Arc::new(section(&kernel, n_max + k_max)?.into_entries());
    let profile = weak_asymptotic_limit(&|_| Ok(full.clone()), k_max, n_max, cfg)?;
    let nu = mu.circle_restriction();
    let restriction: Vec<Complex64> = (-(k_max as i64)..=k_max as i64)
        .map(|k| if k >= 0 { nu.moment(0, k as usize) } else { nu.moment(k.unsigned_abs() as usize, 0) })
        .collect::<Result<_>>()?;
    let gaps: Vec<f64> = profile.alpha.iter().zip(&restriction).map(|(x, y)| (x - y).norm()).collect();
    let max_gap = gaps.iter().copied().fold(0.0, f64::max);
    Ok(ToeplitzLimitReport { profile, restriction, gaps, max_gap })
}

/// Side-by-side `β_k` of a circle measure and of its absolutely continuous
/// part. Exploratory: no verdict is attached.
#[derive(Debug, Clone, Serialize)]
pub struct AcBetaReport {
    pub lambda_limit: LimitEstimate,
    pub beta_full: Vec<LimitEstimate<Complex64>>,
    pub beta_ac: Vec<LimitEstimate<Complex64>>,
    pub gaps: Vec<f64>,
}

pub fn ac_beta_probe(nu: &Measure, k_max: usize, n_max: usize, cfg: &LimitConfig) -> Result<AcBetaReport> {
    if !nu.is_circle_supported() {
        return Err(MsxError::InvalidMeasure("the probe needs a measure on the unit circle".into()));
    }
    let kernel = MomentKernel::from_measure(nu.clone())?;
    let lambdas = lambda_sequence(&kernel, n_max)?;
    let lambda_limit = estimate_limit(&lambdas.values, &LimitConfig::default());
    if !(lambda_limit.value > 1e-8) {
        return Err(MsxError::InvalidParameter(format!(
            "λ-limit estimate {:e} is not positive",
            lambda_limit.value
        )));
    }
    let (ac, _) = nu.ac_singular_split()?;
    if ac.is_zero() {
        return Err(MsxError::InvalidMeasure("measure has no absolutely continuous part".into()));
    }
    let beta_full = beta_limits(&kernel, k_max, n_max, cfg)?;
    let beta_ac = beta_limits(&MomentKernel::from_measure(ac)?, k_max, n_max, cfg)?;
    let gaps = beta_full.iter().zip(&beta_ac).map(|(x, y)| (x.value - y.value).norm()).collect();
    Ok(AcBetaReport { lambda_limit, beta_full, beta_ac, gaps })
}

/// `Lim(B̄) Lim(Bᵗ)` on a window, for the composition check against the `α` series.
pub fn composed_lim(beta: &[Complex64], size: usize) -> Result<CMatrix> {
    let terms = beta.len();
    if terms <= size {
        return Err(MsxError::InsufficientData(format!("need more than {size} β values")));
    }
    // Lim(B) has (n−k, n) ↦ β_k, i.e. (i, j) ↦ β_{j−i} for j ≥ i.
    let width = size + terms;
    let lim_b = CMatrix::from_fn(size + 1, width, |i, j| if j >= i && j - i < terms { beta[j - i] } else { Complex64::new(0.0, 0.0) });
    Ok(lim_b.map(|z| z.conj()) * lim_b.transpose())
}

/// `‖x − y‖_max` for two windows of equal shape.
pub fn window_gap(x: &CMatrix, y: &CMatrix) -> f64 {
    linalg::max_abs_diff(x, y)
}
