//! Smallest eigenvalues `λ_n` of sections, limit estimation for scalar
//! sequences, and the essential infimum of circle densities.

use std::f64::consts::PI;
use std::ops::{Add, Div, Mul, Sub};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{MsxError, Result};
use crate::linalg::{self, CVector};
use crate::measures::{Density, Measure, MomentKernel};
use crate::sections::{section, HermitianSection};

/// Scalars whose limits can be estimated.
pub trait LimitScalar:
    Copy
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Mul<f64, Output = Self>
    + Send
    + Sync
{
    fn magnitude(self) -> f64;
    fn zero() -> Self;
}

impl LimitScalar for f64 {
    fn magnitude(self) -> f64 {
        self.abs()
    }
    fn zero() -> Self {
        0.0
    }
}

impl LimitScalar for Complex64 {
    fn magnitude(self) -> f64 {
        self.norm()
    }
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
}

/// Sequence acceleration applied before the convergence test.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Extrapolation {
    None,
    /// Aitken Δ² on the tail; falls back to the raw tail when unstable.
    Aitken,
    /// Polynomial extrapolation to `h = 1/(n+1) → 0` on the nodes `n_last,
    /// n_last/2, n_last/4, …` (at most `levels` of them). Suited to
    /// sequences with an expansion in powers of `1/n`.
    Richardson { levels: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LimitConfig {
    pub tail_window: usize,
    pub tol_abs: f64,
    pub tol_rel: f64,
    pub extrapolation: Extrapolation,
}

impl Default for LimitConfig {
    fn default() -> Self {
        Self { tail_window: 5, tol_abs: 1e-8, tol_rel: 1e-6, extrapolation: Extrapolation::None }
    }
}

impl LimitConfig {
    pub fn aitken() -> Self {
        Self { extrapolation: Extrapolation::Aitken, ..Self::default() }
    }

    pub fn richardson() -> Self {
        Self { extrapolation: Extrapolation::Richardson { levels: 5 }, ..Self::default() }
    }

    fn tolerance(&self, value: f64) -> f64 {
        self.tol_abs + self.tol_rel * value.abs()
    }
}

/// Estimated limit of a sequence with its convergence diagnostics.
///
/// `converged` implies `last_delta ≤ tolerance`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LimitEstimate<T = f64> {
    pub value: T,
    pub converged: bool,
    pub last_delta: f64,
    pub tolerance: f64,
    pub n_used: usize,
    pub tail_window: usize,
}

/// Limit of `seq`, where `seq[i]` is the term of index `i`.
pub fn estimate_limit<T: LimitScalar>(seq: &[T], cfg: &LimitConfig) -> LimitEstimate<T> {
    estimate_limit_from(seq, 0, cfg)
}

/// Limit of `seq`, where `seq[i]` is the term of index `first_n + i`.
pub fn estimate_limit_from<T: LimitScalar>(seq: &[T], first_n: usize, cfg: &LimitConfig) -> LimitEstimate<T> {
    assert!(!seq.is_empty(), "limit of an empty sequence");
    match cfg.extrapolation {
        Extrapolation::None => raw_tail(seq, cfg),
        Extrapolation::Aitken => aitken(seq, cfg).unwrap_or_else(|| raw_tail(seq, cfg)),
        Extrapolation::Richardson { levels } => {
            richardson(seq, first_n, levels, cfg).unwrap_or_else(|| raw_tail(seq, cfg))
        }
    }
}

fn judge<T: LimitScalar>(value: T, tail: &[T], n_used: usize, cfg: &LimitConfig) -> LimitEstimate<T> {
    let last_delta = tail.iter().map(|&x| (x - value).magnitude()).fold(0.0, f64::max);
    let tolerance = cfg.tolerance(value.magnitude());
    LimitEstimate {
        value,
        converged: tail.len() >= cfg.tail_window && last_delta <= tolerance,
        last_delta,
        tolerance,
        n_used,
        tail_window: cfg.tail_window,
    }
}

fn raw_tail<T: LimitScalar>(seq: &[T], cfg: &LimitConfig) -> LimitEstimate<T> {
    let window = cfg.tail_window.max(1).min(seq.len());
    let tail = &seq[seq.len() - window..];
    let mut est = judge(*seq.last().expect("non-empty"), tail, seq.len(), cfg);
    est.converged &= seq.len() >= cfg.tail_window;
    est
}

fn aitken<T: LimitScalar>(seq: &[T], cfg: &LimitConfig) -> Option<LimitEstimate<T>> {
    let window = cfg.tail_window.max(1);
    if seq.len() < window + 2 {
        return None;
    }
    let mut accel = Vec::with_capacity(window);
    for i in seq.len() - window - 2..seq.len() - 2 {
        let (a, b, c) = (seq[i], seq[i + 1], seq[i + 2]);
        let d1 = b - a;
        let d2 = c - b * 2.0 + a;
        if d2.magnitude() <= 1e-300 || d1.magnitude() <= 1e-14 * c.magnitude() {
            return None;
        }
        let v = c - (c - b) * (c - b) / d2;
        if !v.magnitude().is_finite() {
            return None;
        }
        accel.push(v);
    }
    Some(judge(*accel.last().expect("window ≥ 1"), &accel, seq.len(), cfg))
}

fn neville<T: LimitScalar>(h: &[f64], y: &[T]) -> T {
    let mut p: Vec<T> = y.to_vec();
    let n = h.len();
    for level in 1..n {
        for i in 0..n - level {
            // p_i ← (h_{i+level} p_i − h_i p_{i+1}) / (h_{i+level} − h_i) at h = 0
            let (hi, hj) = (h[i], h[i + level]);
            p[i] = (p[i] * hj - p[i + 1] * hi) * (1.0 / (hj - hi));
        }
    }
    p[0]
}

fn richardson<T: LimitScalar>(seq: &[T], first_n: usize, levels: usize, cfg: &LimitConfig) -> Option<LimitEstimate<T>> {
    let mut idx = Vec::new();
    let mut i = seq.len() - 1;
    while idx.len() < levels.max(2) && i >= 2 {
        idx.push(i);
        i /= 2;
    }
    if idx.len() < 2 {
        return None;
    }
    let h: Vec<f64> = idx.iter().map(|&i| 1.0 / (first_n + i + 1) as f64).collect();
    let y: Vec<T> = idx.iter().map(|&i| seq[i]).collect();
    let full = neville(&h, &y);
    let reduced = neville(&h[..h.len() - 1], &y[..y.len() - 1]);
    let last_delta = (full - reduced).magnitude();
    let tolerance = cfg.tolerance(full.magnitude());
    Some(LimitEstimate {
        value: full,
        converged: last_delta <= tolerance,
        last_delta,
        tolerance,
        n_used: seq.len(),
        tail_window: idx.len(),
    })
}

/// Smallest eigenvalue with its unit eigenvector and residual `‖Sv − λv‖`.
#[derive(Debug, Clone)]
pub struct Eigenpair {
    pub value: f64,
    pub vector: CVector,
    pub residual: f64,
}

pub fn smallest_eigenvalue(s: &HermitianSection) -> Result<Eigenpair> {
    let (value, vector) = linalg::smallest_eigenpair(s.entries());
    let r = s.entries() * &vector - &vector * Complex64::new(value, 0.0);
    let residual = r.norm();
    let scale = s.entries().norm().max(f64::MIN_POSITIVE);
    if !(residual <= 1e-10 * scale) {
        return Err(MsxError::EigenNonConvergence { residual });
    }
    Ok(Eigenpair { value, vector, residual })
}

/// `λ_0, …, λ_{n_max}` together with how far the sections stayed positive
/// definite.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LambdaSequence {
    /// Smallest eigenvalue of every section up to the requested order.
    pub values: Vec<f64>,
    /// Number of leading orders whose sections passed the Cholesky test.
    pub hpd_orders: usize,
    /// `λ_{n+1} ≤ λ_n + 1e−10` held throughout the HPD prefix.
    pub monotone: bool,
}

impl LambdaSequence {
    pub fn n_max(&self) -> usize {
        self.values.len() - 1
    }

    /// Values restricted to the positive definite prefix.
    pub fn hpd_values(&self) -> &[f64] {
        &self.values[..self.hpd_orders]
    }

    pub fn is_fully_hpd(&self) -> bool {
        self.hpd_orders == self.values.len()
    }
}

pub fn lambda_sequence(kernel: &MomentKernel, n_max: usize) -> Result<LambdaSequence> {
    let full = section(kernel, n_max)?;
    lambda_sequence_of(&full)
}

/// λ-sequence of all leading blocks of a materialised section.
pub fn lambda_sequence_of(full: &HermitianSection) -> Result<LambdaSequence> {
    let n_max = full.order();
    let hpd_orders = linalg::cholesky_prefix(full.entries()).rows();
    if hpd_orders <= n_max {
        log::warn!("sections are positive definite only through order {}", hpd_orders as isize - 1);
    }
    let values: Vec<f64> = (0..=n_max)
        .into_par_iter()
        .map(|n| linalg::hermitian_eigenvalues(&full.leading(n).into_entries())[0])
        .collect();
    let monotone = values[..hpd_orders].windows(2).all(|w| w[1] <= w[0] + 1e-10);
    if !monotone {
        log::warn!("λ-sequence is not monotone within the positive definite prefix");
    }
    Ok(LambdaSequence { values, hpd_orders, monotone })
}

/// Minimum of a continuous density on dyadically refined grids, refined
/// until successive minima differ by less than `1e−8` or `2^max_level`
/// nodes are reached.
pub fn essinf_symbol(w: &dyn Fn(f64) -> f64, max_level: u32) -> f64 {
    let mut level = 6_u32;
    let grid_min = |n: usize, odd_only: bool| -> f64 {
        let h = 2.0 * PI / n as f64;
        let step = if odd_only { 2 } else { 1 };
        let start = usize::from(odd_only);
        (start..n).step_by(step).map(|m| w(h * m as f64)).fold(f64::INFINITY, f64::min)
    };
    let mut current = grid_min(1 << level, false);
    while level < max_level.max(6) {
        level += 1;
        let next = current.min(grid_min(1 << level, true));
        let change = current - next;
        current = next;
        if change < 1e-8 {
            break;
        }
    }
    current
}

/// Convenience wrapper for [`Density`] values.
pub fn density_essinf(d: &Density) -> f64 {
    essinf_symbol(&|t| d.eval(t), 20)
}

#[derive(Debug, Clone, Serialize)]
pub struct AcPartReport {
    pub lambda_full: LambdaSequence,
    pub lambda_ac: Option<LambdaSequence>,
    pub limit_full: LimitEstimate,
    /// `None` when the measure has no absolutely continuous part.
    pub limit_ac: Option<LimitEstimate>,
    pub essinf: Option<f64>,
    pub gap_full_ac: Option<f64>,
    pub gap_ac_essinf: Option<f64>,
    pub gap_full_essinf: Option<f64>,
}

/// Side-by-side λ-limits of a circle measure, of its absolutely continuous
/// part, and the essential infimum of that part's density.
pub fn ac_part_experiment(nu: &Measure, n_max: usize, cfg: &LimitConfig) -> Result<AcPartReport> {
    let (ac, _) = nu.ac_singular_split()?;
    let lambda_full = lambda_sequence(&MomentKernel::from_measure(nu.clone())?, n_max)?;
    let limit_full = estimate_limit(&lambda_full.values, cfg);

    let (lambda_ac, limit_ac, essinf) = match &ac {
        Measure::CircleAc(d) => {
            let seq = lambda_sequence(&MomentKernel::from_measure(ac.clone())?, n_max)?;
            let lim = estimate_limit(&seq.values, cfg);
            (Some(seq), Some(lim), Some(density_essinf(d)))
        }
        _ => (None, None, None),
    };
    let gap = |a: Option<f64>, b: Option<f64>| a.zip(b).map(|(x, y)| (x - y).abs());
    let full = Some(limit_full.value);
    let acv = limit_ac.map(|l| l.value);
    Ok(AcPartReport {
        gap_full_ac: gap(full, acv),
        gap_ac_essinf: gap(acv, essinf),
        gap_full_essinf: gap(full, essinf),
        lambda_full,
        lambda_ac,
        limit_full,
        limit_ac,
        essinf,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::Atom;

    #[test]
    fn constant_sequence_converges() {
        let est = estimate_limit(&[0.5; 10], &LimitConfig::default());
        assert_eq!(est.value, 0.5);
        assert!(est.converged);
        assert!(est.last_delta <= est.tolerance);
    }

    #[test]
    fn harmonic_sequence_is_not_converged() {
        let seq: Vec<f64> = (0..200).map(|n| 1.0 / (n as f64 + 1.0)).collect();
        let cfg = LimitConfig { tol_abs: 1e-10, tol_rel: 0.0, ..LimitConfig::default() };
        assert!(!estimate_limit(&seq, &cfg).converged);
    }

    #[test]
    fn short_sequence_cannot_converge() {
        assert!(!estimate_limit(&[1.0, 1.0], &LimitConfig::default()).converged);
    }

    #[test]
    fn aitken_is_exact_on_geometric_tails() {
        let seq: Vec<f64> = (0..30).map(|n| 2.0 + 0.7_f64.powi(n)).collect();
        let est = estimate_limit(&seq, &LimitConfig::aitken());
        assert!((est.value - 2.0).abs() < 1e-12);
        assert!(est.converged);
    }

    #[test]
    fn aitken_falls_back_on_constant_sequences() {
        let est = estimate_limit(&[3.0; 12], &LimitConfig::aitken());
        assert_eq!(est.value, 3.0);
        assert!(est.converged);
    }

    #[test]
    fn richardson_removes_inverse_powers() {
        let seq: Vec<f64> = (0..300).map(|n| 2.0 - 2.0 / (n as f64 + 2.0)).collect();
        let est = estimate_limit(&seq, &LimitConfig::richardson());
        assert!((est.value - 2.0).abs() < 1e-7, "{}", est.value);
        let seq: Vec<Complex64> = (0..300).map(|n| Complex64::new(0.0, 3.0 / (n as f64 + 1.0))).collect();
        let est = estimate_limit(&seq, &LimitConfig::richardson());
        assert!(est.value.norm() < 1e-12);
    }

    #[test]
    fn essinf_of_known_symbols() {
        let a = 0.5;
        let w = move |t: f64| (1.0 + a * a + 2.0 * a * t.cos()) / (1.0 - a * a);
        assert!((essinf_symbol(&w, 20) - 1.0 / 3.0).abs() < 1e-12);
        assert_eq!(essinf_symbol(&|_| 0.75, 20), 0.75);
        assert!((essinf_symbol(&|t: f64| 2.0 + t.cos(), 20) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn identity_section_eigenvalue() {
        let e = smallest_eigenvalue(&HermitianSection::identity(5)).unwrap();
        assert!((e.value - 1.0).abs() < 1e-14);
    }

    #[test]
    fn lebesgue_lambdas_are_one() {
        let k = MomentKernel::from_measure(Measure::lebesgue()).unwrap();
        let seq = lambda_sequence(&k, 10).unwrap();
        assert!(seq.values.iter().all(|&l| (l - 1.0).abs() < 1e-14));
        assert!(seq.is_fully_hpd());
    }

    #[test]
    fn finitely_many_atoms_drive_lambda_to_zero() {
        let nu = Measure::CircleAtoms(vec![Atom::new(0.3, 1.0), Atom::new(2.0, 0.5), Atom::new(4.0, 2.0)]);
        let seq = lambda_sequence(&MomentKernel::from_measure(nu).unwrap(), 30).unwrap();
        assert_eq!(seq.hpd_orders, 3);
        assert!(seq.values[3..].iter().all(|l| l.abs() < 1e-12));
        assert!(seq.values[2] > 1e-6);
    }

    #[test]
    fn example3_experiment_has_no_gap() {
        let nu = Measure::Mixture(vec![
            (0.5, Measure::lebesgue()),
            (1.0, Measure::CircleAtoms(vec![Atom::new(0.0, 0.5)])),
        ]);
        let r = ac_part_experiment(&nu, 40, &LimitConfig::default()).unwrap();
        assert!((r.limit_full.value - 0.5).abs() < 1e-12);
        assert!(r.gap_full_ac.unwrap() < 1e-12);
        assert!(r.gap_ac_essinf.unwrap() < 1e-12);
    }
}
