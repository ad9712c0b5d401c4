//! The reference checks: every worked example recomputed by the numerical
//! modules and compared with its closed form.

use std::fmt;

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::Signed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::asymptotics::{beta_limits, inverse_from_beta, moment_matrix_toeplitz_limit, profile_from_beta};
use crate::catalog::{example_kernel, exact_kernel, ExampleParams};
use crate::error::Result;
use crate::inverse::{inverse_residual_window, reciprocal_symbol_check, SectionInverses};
use crate::linalg::{self, CMatrix};
use crate::measures::{Atom, Density, Measure, MomentKernel, TrigPolynomial};
use crate::opoly::{cholesky_transition, norm_identity_check};
use crate::oracles::{self, Example1, Example2, Example3, Example4};
use crate::sections::exact::to_f64;
use crate::sections::{moment_necessary_check, persymmetry_defect, section};
use crate::spectra::{estimate_limit, lambda_sequence, ac_part_experiment, LimitConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    /// The tolerance was missed while the limit estimate itself reported
    /// non-convergence, i.e. more terms are needed rather than a fix.
    NotConverged,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::NotConverged => "NOT CONVERGED",
        })
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckOutcome {
    pub name: String,
    pub expected: String,
    pub got: String,
    pub tolerance: f64,
    pub status: Status,
}

#[derive(Debug, Clone, Serialize)]
pub struct CriterionReport {
    pub id: usize,
    pub title: String,
    pub checks: Vec<CheckOutcome>,
}

impl CriterionReport {
    pub fn status(&self) -> Status {
        if self.checks.iter().any(|c| c.status == Status::Fail) {
            Status::Fail
        } else if self.checks.iter().any(|c| c.status == Status::NotConverged) {
            Status::NotConverged
        } else {
            Status::Pass
        }
    }

    /// One-line summary for terminals and logs.
    pub fn line(&self) -> String {
        let worst = self.checks.iter().find(|c| c.status == self.status()).or(self.checks.first());
        match worst {
            Some(c) => format!(
                "[{:>2}] {:<13} {} :: {}: expected {}, got {} (tol {:e})",
                self.id,
                self.status().to_string(),
                self.title,
                c.name,
                c.expected,
                c.got,
                c.tolerance
            ),
            None => format!("[{:>2}] {:<13} {}", self.id, self.status().to_string(), self.title),
        }
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct VerifyOptions {
    /// Replaces the section order of every limit-based check.
    pub n_max: Option<usize>,
}

impl VerifyOptions {
    fn order(&self, default: usize) -> usize {
        self.n_max.unwrap_or(default)
    }
}

fn outcome(name: impl Into<String>, expected: impl fmt::Display, got: f64, err: f64, tol: f64, converged: bool) -> CheckOutcome {
    let status = if err <= tol {
        Status::Pass
    } else if !converged {
        Status::NotConverged
    } else {
        Status::Fail
    };
    CheckOutcome { name: name.into(), expected: expected.to_string(), got: format!("{got:.12e}"), tolerance: tol, status }
}

/// Deviation check where smaller is better and there is no limit involved.
fn bound(name: impl Into<String>, got: f64, tol: f64) -> CheckOutcome {
    outcome(name, format!("≤ {tol:e}"), got, got, tol, true)
}

fn failed(name: impl Into<String>, err: impl fmt::Display) -> CheckOutcome {
    CheckOutcome {
        name: name.into(),
        expected: "computation succeeds".into(),
        got: err.to_string(),
        tolerance: 0.0,
        status: Status::Fail,
    }
}

fn guard(name: &str, f: impl FnOnce() -> Result<Vec<CheckOutcome>>) -> Vec<CheckOutcome> {
    f().unwrap_or_else(|e| vec![failed(name, e)])
}

fn params(a: f64) -> ExampleParams {
    ExampleParams::with_a(a)
}

/// Pascal moments: exact and floating-point transition matrices and the
/// divergence of `Σ|P_k(0)|²`.
pub fn criterion1() -> CriterionReport {
    let checks = guard("pascal", || {
        let oracle = Example1;
        let exact = exact_kernel("example1", &ExampleParams::default())?;
        let mut exact_mismatch = 0usize;
        let mut sum_mismatch = 0usize;
        for n in 0..=12 {
            let t = exact.section(n).transition().expect("Pascal sections are positive definite");
            for m in 0..=n {
                for k in 0..=m {
                    let want = BigRational::from_float(oracle.b(k, m)).expect("integer");
                    if t.entry(k, m).as_ref() != Some(&want) {
                        exact_mismatch += 1;
                    }
                }
            }
            let s = (0..=n).fold(BigRational::from_integer(0.into()), |acc, k| acc + t.signed_square(0, k).abs());
            if s != BigRational::from_integer((n + 1).into()) {
                sum_mismatch += 1;
            }
        }

        let kernel = example_kernel("example1", &ExampleParams::default())?;
        let mut rel: f64 = 0.0;
        let mut float_sum_err: f64 = 0.0;
        for n in 0..=20 {
            let (_, b) = cholesky_transition(&section(&kernel, n)?)?;
            for m in 0..=n {
                for k in 0..=n {
                    let want = oracle.b(k, m);
                    let got = b.entry(k, m);
                    rel = rel.max(if want == 0.0 { got.norm() } else { (got - want).norm() / want.abs() });
                }
            }
            let s: f64 = (0..=n).map(|k| crate::opoly::poly_eval(&b, k, Complex64::new(0.0, 0.0)).map(|v| v.norm_sqr())).sum::<Result<f64>>()?;
            float_sum_err = float_sum_err.max((s - oracle.divergence_partial_sum(n)).abs() / (n + 1) as f64);
        }
        Ok(vec![
            outcome("exact B_n entries, n ≤ 12 (mismatches)", 0, exact_mismatch as f64, exact_mismatch as f64, 0.0, true),
            outcome("exact Σ|P_k(0)|² = n+1, n ≤ 12 (mismatches)", 0, sum_mismatch as f64, sum_mismatch as f64, 0.0, true),
            bound("float B_n relative error, n ≤ 20", rel, 1e-8),
            bound("float Σ|P_k(0)|² relative error, n ≤ 20", float_sum_err, 1e-8),
        ])
    });
    CriterionReport { id: 1, title: "Pascal transition matrix".into(), checks }
}

/// `a^{max(i,j)}` moments for three values of `a`.
pub fn criterion2() -> CriterionReport {
    let mut checks = Vec::new();
    for a in [0.2, 0.5, 0.8] {
        checks.extend(guard(&format!("a = {a}"), || {
            let oracle = Example2 { a };
            let kernel = example_kernel("example2", &params(a))?;
            let mut col_rel: f64 = 0.0;
            let mut det_rel: f64 = 0.0;
            for n in 0..=25 {
                let (l, b) = cholesky_transition(&section(&kernel, n)?)?;
                for m in 0..=n {
                    let scale = (0..=n).map(|k| oracle.b(k, m).abs()).fold(0.0, f64::max);
                    let err = (0..=n).map(|k| (b.entry(k, m) - oracle.b(k, m)).norm()).fold(0.0, f64::max);
                    col_rel = col_rel.max(err / scale);
                }
                if n <= 20 {
                    let det: f64 = (0..=n).map(|i| l[(i, i)].re * l[(i, i)].re).product();
                    let want = oracle.det(n);
                    det_rel = det_rel.max((det - want).abs() / want);
                }
            }
            let a_cf = move |i: usize, j: usize| Complex64::new(oracle.a_entry(i, j), 0.0);
            let r = inverse_residual_window(&kernel, &a_cf, 5, 40)?;
            Ok(vec![
                bound(format!("a = {a}: B_n column-relative error, n ≤ 25"), col_rel, 1e-10),
                bound(format!("a = {a}: residual of closed-form A (window 5, truncation 40)"), r.left.max(r.right), 1e-9),
                bound(format!("a = {a}: det M_n relative error, n ≤ 20"), det_rel, 1e-10),
            ])
        }));
    }
    CriterionReport { id: 2, title: "a^max(i,j) moments: B, A, det".into(), checks }
}

/// `½(I + J)`: exact smallest eigenvalue, entrywise inverse limits, the
/// finite-order inverses, and the failure of `A = 2I` as an inverse.
pub fn criterion3(opts: &VerifyOptions) -> CriterionReport {
    let checks = guard("rank-one example", || {
        let oracle = Example3;
        let kernel = example_kernel("example3", &ExampleParams::default())?;
        let lambdas = lambda_sequence(&kernel, 100)?;
        let lambda_err = lambdas.values.iter().enumerate().map(|(n, l)| (l - oracle.lambda(n)).abs()).fold(0.0, f64::max);

        let n_lim = opts.order(200);
        let inv = SectionInverses::from_kernel(&kernel, n_lim)?;
        let cfg = LimitConfig::richardson();
        let mut lim_err: f64 = 0.0;
        let mut lim_conv = true;
        for i in 0..4 {
            for j in 0..4 {
                let est = inv.entry_limit(i, j, &cfg)?;
                lim_err = lim_err.max((est.value - oracle.a_entry(i, j)).norm());
                lim_conv &= est.converged;
            }
        }

        let inv40 = SectionInverses::from_kernel(&kernel, 40)?;
        let mut finite_err: f64 = 0.0;
        for n in 0..=40 {
            let exact = oracles::rank_one_inverse(n);
            let got = inv40.inverse(n);
            for i in 0..=n {
                for j in 0..=n {
                    finite_err = finite_err.max((got[(i, j)] - to_f64(&exact[i][j])).norm());
                    finite_err = finite_err.max((got[(i, j)] - oracle.inverse_entry(n, i, j)).norm());
                }
            }
        }
        let two_i = |i: usize, j: usize| Complex64::new(oracle.a_entry(i, j), 0.0);
        let r = inverse_residual_window(&kernel, &two_i, 3, 40)?;
        let residual = r.left.min(r.right);
        Ok(vec![
            bound("λ_n vs ½ (λ_0 = 1), n ≤ 100", lambda_err, 1e-12),
            outcome(format!("lim M_n⁻¹ on 4×4 window vs 2δ (n ≤ {n_lim})"), "2δ_ij", lim_err, lim_err, 1e-6, lim_conv),
            bound("finite-n inverse vs exact rank-one oracle, n ≤ 40", finite_err, 1e-12),
            CheckOutcome {
                name: "residual of A = 2I against T (window 3, truncation 40)".into(),
                expected: "≥ 0.9".into(),
                got: format!("{residual:.12e}"),
                tolerance: 0.9,
                status: if residual >= 0.9 { Status::Pass } else { Status::Fail },
            },
        ])
    });
    CriterionReport { id: 3, title: "½(I+J): λ, inverse limits, non-inverse".into(), checks }
}

/// Tridiagonal Toeplitz example with `a = ½`.
pub fn criterion4(opts: &VerifyOptions) -> CriterionReport {
    let checks = guard("tridiagonal example", || {
        let a = 0.5;
        let oracle = Example4 { a };
        let kernel = example_kernel("example4", &params(a))?;
        let n_max = opts.order(200);
        let cfg = LimitConfig::default();
        let k_beta = 40.min(n_max.saturating_sub(1));
        let beta = beta_limits(&kernel, k_beta, n_max, &cfg)?;
        let (mut beta_err, mut beta_conv) = (0.0_f64, true);
        for (k, e) in beta.iter().enumerate().take(9) {
            beta_err = beta_err.max((e.value - oracle.beta(k)).norm());
            beta_conv &= e.converged;
        }
        let profile = profile_from_beta(beta.clone(), 8.min(k_beta))?;
        let mut alpha_err: f64 = 0.0;
        for k in -(profile.k_max as i64)..=profile.k_max as i64 {
            alpha_err = alpha_err.max((profile.alpha(k) - oracle.alpha(k)).norm());
        }
        if profile.k_max < 8 {
            alpha_err = f64::INFINITY;
        }
        let alpha_conv = beta_conv && profile.alpha_diagnostics.iter().all(|d| d.converged);

        let lambdas = lambda_sequence(&kernel, n_max)?;
        let lim = estimate_limit(&lambdas.values, &cfg);
        let lambda_gap = (lim.value - 1.0 / 3.0).abs();
        let eig_formula = lambdas
            .values
            .iter()
            .enumerate()
            .map(|(n, l)| (l - oracle.lambda_min(n)).abs())
            .fold(0.0, f64::max);

        let window = 8.min(k_beta);
        let from_beta = inverse_from_beta(&beta.iter().map(|e| e.value).collect::<Vec<_>>(), window)?;
        let direct = linalg::inverse(section(&kernel, 20)?.entries())?;
        let recon = if window < 8 {
            f64::INFINITY
        } else {
            linalg::max_abs_diff(&from_beta, &direct.view((0, 0), (9, 9)).into_owned())
        };
        let closed = CMatrix::from_fn(9, 9, |i, j| Complex64::new(oracle.a_entry(i, j), 0.0));
        let recon_closed = if window < 8 { f64::INFINITY } else { linalg::max_abs_diff(&from_beta, &closed) };
        Ok(vec![
            outcome(format!("β_k, k ≤ 8 (n_max = {n_max})"), "(−1)^k 2^−k √3/2", beta_err, beta_err, 1e-6, beta_conv),
            outcome("α_k from β series, |k| ≤ 8", "(−1)^k 2^−k", alpha_err, alpha_err, 1e-6, alpha_conv),
            outcome(format!("λ-limit estimate (n_max = {n_max})"), "1/3", lim.value, lambda_gap, 2e-3, lim.converged),
            bound("λ_n vs tridiagonal eigenvalue formula", eig_formula, 1e-10),
            outcome("inverse_from_beta(β, 8) vs inverse(T_20) window", "≤ 1e-4", recon, recon, 1e-4, beta_conv),
            outcome("inverse_from_beta(β, 8) vs closed-form A", "≤ 1e-6", recon_closed, recon_closed, 1e-6, beta_conv),
        ])
    });
    CriterionReport { id: 4, title: "tridiagonal symbol a = ½: β, α, λ, A".into(), checks }
}

/// Diagonal limits of inverse Toeplitz sections for `w = 2 + cos θ`.
pub fn criterion5(opts: &VerifyOptions) -> CriterionReport {
    let checks = guard("reciprocal symbol", || {
        let n_max = opts.order(200);
        let r = reciprocal_symbol_check(&Density::two_plus_cos(), 6, n_max, &LimitConfig::default())?;
        let converged = r.profile.alpha_diagnostics.iter().all(|d| d.converged);
        let quad_vs_closed = (-6..=6_i64)
            .zip(&r.reference)
            .map(|(k, z)| (z - oracles::reciprocal_two_plus_cos(k)).norm())
            .fold(0.0, f64::max);
        Ok(vec![
            outcome(format!("α_k vs (1/w)^_k, |k| ≤ 6 (n_max = {n_max})"), "≤ 1e-5", r.max_gap, r.max_gap, 1e-5, converged),
            bound("quadrature (1/w)^_k vs closed form", quad_vs_closed, 1e-12),
        ])
    });
    CriterionReport { id: 5, title: "inverse sections of T(2+cos θ) vs T(1/w)".into(), checks }
}

/// Condition number above which `σ_max(B)²·λ_min` is not resolvable to
/// `1e−8` in double precision.
pub const NORM_IDENTITY_MAX_COND: f64 = 1e6;

/// Random positive densities `|q(e^{iθ})|² + ε` with complex `q` of degree 1..=4.
pub fn random_trig_densities(count: usize, seed: u64) -> Vec<Density> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let d: usize = rng.random_range(1..=4);
            let q: Vec<Complex64> =
                (0..=d).map(|_| Complex64::new(rng.random::<f64>() * 2.0 - 1.0, rng.random::<f64>() * 2.0 - 1.0)).collect();
            let eps = 0.05 + 0.5 * rng.random::<f64>();
            let coeffs: Vec<Complex64> = (0..=d)
                .map(|k| {
                    let s: Complex64 = (0..=d - k).map(|j| q[j + k] * q[j].conj()).sum();
                    if k == 0 {
                        s + eps
                    } else {
                        s
                    }
                })
                .collect();
            Density::Trig(TrigPolynomial::new(coeffs).expect("non-empty coefficient list"))
        })
        .collect()
}

pub fn criterion6() -> CriterionReport {
    let mut kernels: Vec<(String, MomentKernel)> = Vec::new();
    let mut checks = Vec::new();
    let mut named = |name: String, k: Result<MomentKernel>| match k {
        Ok(k) => kernels.push((name, k)),
        Err(e) => checks.push(failed(name, e)),
    };
    for id in ["example1", "example3", "hofmaier", "hilbert", "disk", "two_plus_cos"] {
        named(id.to_string(), example_kernel(id, &ExampleParams::default()));
    }
    for a in [0.2, 0.5, 0.8] {
        named(format!("example2 a={a}"), example_kernel("example2", &params(a)));
        named(format!("example4 a={a}"), example_kernel("example4", &params(a)));
    }
    let b = ExampleParams { a: None, b: (1..=31).map(|n| 1.0 + 0.1 * n as f64).collect() };
    named("case1".into(), example_kernel("case1", &b));
    named("case2".into(), example_kernel("case2", &b));
    for (i, d) in random_trig_densities(20, 0x5eed).into_iter().enumerate() {
        named(format!("random density {i}"), MomentKernel::from_measure(Measure::CircleAc(d)));
    }

    let mut worst: f64 = 0.0;
    let mut checked = 0usize;
    let mut skipped = 0usize;
    for (name, k) in &kernels {
        let r = (|| -> Result<()> {
            let full = section(k, 30)?;
            let hpd = linalg::cholesky_prefix(full.entries()).rows();
            for n in 0..hpd {
                let s = full.leading(n);
                let eig = linalg::hermitian_eigenvalues(s.entries());
                if !(eig[0] > 0.0 && eig[eig.len() - 1] / eig[0] <= NORM_IDENTITY_MAX_COND) {
                    skipped += 1;
                    continue;
                }
                let id = norm_identity_check(&s)?;
                worst = worst.max(id.defect);
                checked += 1;
            }
            Ok(())
        })();
        if let Err(e) = r {
            checks.push(failed(name.clone(), e));
        }
    }
    log::info!("norm identity: {checked} sections checked, {skipped} skipped as ill-conditioned");
    checks.push(bound(
        format!("|σ_max(B_n)²λ_min − 1| over {checked} sections (cond ≤ 1e6; {skipped} skipped)"),
        worst,
        1e-8,
    ));
    CriterionReport { id: 6, title: "‖B_n‖² λ_min(M_n) = 1".into(), checks }
}

pub fn criterion7() -> CriterionReport {
    let mut list: Vec<(String, Result<MomentKernel>)> = vec![
        ("example3".into(), example_kernel("example3", &ExampleParams::default())),
        ("two_plus_cos".into(), example_kernel("two_plus_cos", &ExampleParams::default())),
    ];
    for a in [0.2, 0.5, 0.8] {
        list.push((format!("example4 a={a}"), example_kernel("example4", &params(a))));
    }
    list.push((
        "2+cos θ with atom".into(),
        MomentKernel::from_measure(Measure::Mixture(vec![
            (1.0, Measure::CircleAc(Density::two_plus_cos())),
            (1.0, Measure::CircleAtoms(vec![Atom::new(1.0, 0.25)])),
        ])),
    ));
    let checks = list
        .into_iter()
        .flat_map(|(name, k)| {
            guard(&name.clone(), || {
                let k = k?;
                let full = section(&k, 40)?;
                let mut worst: f64 = 0.0;
                for n in 0..=40 {
                    worst = worst.max(persymmetry_defect(&linalg::inverse(full.leading(n).entries())?));
                }
                Ok(vec![bound(format!("{name}: persymmetry defect of T_n⁻¹, n ≤ 40"), worst, 1e-10)])
            })
        })
        .collect();
    CriterionReport { id: 7, title: "persymmetry of Toeplitz inverses".into(), checks }
}

pub fn criterion8(opts: &VerifyOptions) -> CriterionReport {
    let checks = guard("atom experiment", || {
        let n_max = opts.order(150);
        let nu = Measure::Mixture(vec![
            (1.0, Measure::CircleAc(Density::two_plus_cos())),
            (1.0, Measure::CircleAtoms(vec![Atom::new(1.0, 0.25)])),
        ]);
        let r = ac_part_experiment(&nu, n_max, &LimitConfig::default())?;
        let ac = r.limit_ac.expect("measure has a density part");
        let gap = r.gap_full_ac.expect("both limits present");
        let conv = r.limit_full.converged && ac.converged;
        let essinf = r.essinf.expect("density part");
        Ok(vec![
            outcome(format!("|λlim(ν) − λlim(ν_a)| (n_max = {n_max})"), "≤ 2e-2", gap, gap, 2e-2, conv),
            outcome("λlim(ν_a) vs essinf", "1", ac.value, (ac.value - 1.0).abs(), 5e-3, ac.converged),
            bound("essinf(2 + cos θ) vs 1", (essinf - 1.0).abs(), 1e-10),
        ])
    });
    CriterionReport { id: 8, title: "λ-limit with and without the atom".into(), checks }
}

pub fn criterion9(opts: &VerifyOptions) -> CriterionReport {
    let checks = guard("disk measures", || {
        let n_max = opts.order(500);
        let cfg = LimitConfig::richardson();
        let disk = moment_matrix_toeplitz_limit(&Measure::disk_uniform(), 4, n_max, &cfg)?;
        let conv = disk.profile.alpha_diagnostics.iter().all(|d| d.converged);
        let worst = (0..=4_i64).map(|k| disk.profile.alpha(k).norm()).fold(0.0, f64::max);
        let mixed = Measure::Mixture(vec![(1.0, Measure::disk_uniform()), (1.0, Measure::lebesgue())]);
        let mix = moment_matrix_toeplitz_limit(&mixed, 4, n_max, &cfg)?;
        let mix_conv = mix.profile.alpha_diagnostics.iter().all(|d| d.converged);
        let mix_err = (0..=4_i64)
            .map(|k| (mix.profile.alpha(k) - if k == 0 { 1.0 } else { 0.0 }).norm())
            .fold(0.0, f64::max);
        let diag_err = (0..=n_max)
            .map(|n| -> Result<f64> {
                Ok((Measure::disk_uniform().moment(n, n)? - oracles::DiskUniform.moment(n, n)).norm())
            })
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .fold(0.0, f64::max);
        Ok(vec![
            outcome(format!("|lim c_(n,n+k)(disk)|, k ≤ 4 (n ≤ {n_max})"), "0", worst, worst, 1e-6, conv),
            outcome("disk + circle: lim c_(n,n+k) vs δ_k0, k ≤ 4", "δ_k0", mix_err, mix_err, 1e-3, mix_conv),
            bound("disk diagonal moments vs π/(n+1)", diag_err, 1e-15),
            bound("disk + circle: gap to restriction moments", mix.max_gap, 1e-3),
        ])
    });
    CriterionReport { id: 9, title: "diagonal limits of disk moment matrices".into(), checks }
}

pub fn criterion10() -> CriterionReport {
    let checks = guard("hofmaier", || {
        let k = example_kernel("hofmaier", &ExampleParams::default())?;
        let report = moment_necessary_check(&k, 10)?;
        let first = report.violations.first();
        let ok = first.is_some_and(|v| v.n == 1 && v.lhs == 4.0 && v.rhs == 3.0);
        Ok(vec![CheckOutcome {
            name: "first log-convexity violation of min(i,j)+1".into(),
            expected: "n = 1: 4 > 3".into(),
            got: first.map_or("none".into(), |v| format!("n = {}: {} > {}", v.n, v.lhs, v.rhs)),
            tolerance: 0.0,
            status: if ok { Status::Pass } else { Status::Fail },
        }])
    });
    CriterionReport { id: 10, title: "min(i,j)+1 is not a moment matrix".into(), checks }
}

/// `‖H_N x_n‖` for `x_n = n^{−1/2}(e_1 + … + e_n)` and the Hilbert section
/// of size `N`, with the basis indexed from `e_0`.
pub fn hilbert_norm(n: usize, big_n: usize) -> f64 {
    let h = oracles::Hilbert;
    let scale = 1.0 / (n as f64).sqrt();
    (0..big_n)
        .map(|m| {
            let row: f64 = (1..=n).map(|i| h.moment(m, i)).sum();
            (row * scale).powi(2)
        })
        .sum::<f64>()
        .sqrt()
}

pub fn criterion11() -> CriterionReport {
    let (n, big_n) = (64, 4096);
    let v = hilbert_norm(n, big_n);
    let at_least = |name: String, x: f64| CheckOutcome {
        name,
        expected: "≥ 0.99".into(),
        got: format!("{x:.12e}"),
        tolerance: 0.99,
        status: if x >= 0.99 { Status::Pass } else { Status::Fail },
    };
    let checks = vec![
        at_least(format!("‖H_N x_n‖, n = {n}, N = {big_n}"), v),
        at_least(format!("‖H_N x_n‖², n = {n}, N = {big_n}"), v * v),
    ];
    CriterionReport { id: 11, title: "Hilbert matrix is not compact".into(), checks }
}

/// All reference checks in order.
pub fn run_all(opts: &VerifyOptions) -> Vec<CriterionReport> {
    vec![
        criterion1(),
        criterion2(),
        criterion3(opts),
        criterion4(opts),
        criterion5(opts),
        criterion6(),
        criterion7(),
        criterion8(opts),
        criterion9(opts),
        criterion10(),
        criterion11(),
    ]
}

/// Used by the CLI and the tests to render the table.
pub fn render(reports: &[CriterionReport]) -> String {
    let mut out = String::new();
    for r in reports {
        out.push_str(&r.line());
        out.push('\n');
        for c in &r.checks {
            out.push_str(&format!(
                "       {:<13} {}: expected {}, got {} (tol {:e})\n",
                c.status.to_string(),
                c.name,
                c.expected,
                c.got,
                c.tolerance
            ));
        }
    }
    out
}
