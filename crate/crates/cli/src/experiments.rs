//! The four experiment kinds. Each writes its CSV tables and returns the
//! JSON summary body.

use std::path::Path;

use num_complex::Complex64;
use serde_json::{json, Value};

use msx_core::asymptotics::{
    beta_limits, inverse_from_beta, moment_matrix_toeplitz_limit, ac_beta_probe, profile_from_beta, window_gap,
    AcBetaReport, ToeplitzLimitReport,
};
use msx_core::export::{complex_cells, num, write_csv};
use msx_core::inverse::{inverse_residual_window, inverse_series_entry, SectionInverses};
use msx_core::linalg::CMatrix;
use msx_core::oracles::ClosedForm;
use msx_core::spectra::{estimate_limit, lambda_sequence, ac_part_experiment, LimitConfig, LimitEstimate};
use msx_core::{Measure, MsxError, Result};

use crate::config::{best_limit, best_limit_with, Config, Kind};

/// Summary of a finished run. `failure` records a numerical failure that
/// did not prevent the outputs from being written.
pub struct Run {
    pub summary: Value,
    pub failure: Option<String>,
}

impl From<Value> for Run {
    fn from(summary: Value) -> Self {
        Run { summary, failure: None }
    }
}

pub fn run(cfg: &Config, out: &Path) -> Result<Run> {
    match cfg.kind {
        Kind::Spectrum => spectrum(cfg, out),
        Kind::Invert => invert(cfg, out).map(Run::from),
        Kind::Asymptotics => asymptotics(cfg, out).map(Run::from),
        Kind::ToeplitzLimit => toeplitz_limit(cfg, out).map(Run::from),
    }
}

fn limit_json(e: &LimitEstimate) -> Value {
    json!({
        "value": e.value,
        "converged": e.converged,
        "last_delta": e.last_delta,
        "tolerance": e.tolerance,
        "n_used": e.n_used,
        "tail_window": e.tail_window,
    })
}

fn complex_json(z: Complex64) -> Value {
    json!([z.re, z.im])
}

fn climit_json(e: &LimitEstimate<Complex64>) -> Value {
    json!({
        "value": complex_json(e.value),
        "converged": e.converged,
        "last_delta": e.last_delta,
        "tolerance": e.tolerance,
    })
}

fn bool_cell(b: bool) -> String {
    b.to_string()
}

fn opt_cell(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

fn spectrum(cfg: &Config, out: &Path) -> Result<Run> {
    let n_max = cfg.n_max.unwrap_or(100);
    let cfgs = cfg.limit_configs();
    let seq = lambda_sequence(&cfg.target.kernel, n_max)?;
    let rows = seq.values.iter().enumerate().map(|(n, &l)| {
        let delta = if n == 0 { String::new() } else { num(l - seq.values[n - 1]) };
        vec![n.to_string(), num(l), delta]
    });
    write_csv(&out.join("lambda.csv"), &["n", "lambda_n", "delta"], rows)?;

    let hpd = seq.hpd_values();
    let values = if hpd.is_empty() { &seq.values } else { hpd };
    let (limit, used) = best_limit_with(&cfgs, |c| Ok(estimate_limit(values, c)))?;
    let lcfg = cfgs.iter().find(|c| c.extrapolation == used).copied().unwrap_or_default();
    let mut summary = json!({
        "n_max": n_max,
        "hpd_orders": seq.hpd_orders,
        "monotone": seq.monotone,
        "limit": limit_json(&limit),
        "extrapolation": used,
    });
    if let Some(mu) = cfg.target.measure.as_ref().filter(|m| m.is_circle_supported()) {
        let t2 = ac_part_experiment(mu, n_max, &lcfg)?;
        summary["essinf"] = json!(t2.essinf);
        summary["limit_ac"] = t2.limit_ac.as_ref().map(limit_json).unwrap_or(Value::Null);
        summary["gap_full_ac"] = json!(t2.gap_full_ac);
        summary["gap_ac_essinf"] = json!(t2.gap_ac_essinf);
        summary["gap_full_essinf"] = json!(t2.gap_full_essinf);
    }
    let closed = match &cfg.target.closed {
        Some(ClosedForm::Example2(e)) => Some(e.lambda_limit()),
        Some(ClosedForm::Example3(e)) => Some(e.lambda_limit()),
        Some(ClosedForm::Example4(e)) => Some(e.essinf()),
        _ => None,
    };
    if let Some(c) = closed {
        summary["closed_form_limit"] = json!(c);
        summary["closed_form_gap"] = json!((limit.value - c).abs());
    }
    let failure = (!seq.is_fully_hpd())
        .then(|| format!("section of order {} is numerically not positive definite", seq.hpd_orders));
    Ok(Run { summary, failure })
}

/// Highest index at which the closed-form `A` can be evaluated.
fn closed_reach(c: &ClosedForm) -> usize {
    match c {
        ClosedForm::CaseI(e) => e.b.len().saturating_sub(1),
        ClosedForm::CaseII(e) => e.b.len().saturating_sub(1),
        _ => usize::MAX,
    }
}

fn write_window(path: &Path, est: &[Vec<LimitEstimate<Complex64>>], size: usize) -> Result<()> {
    let rows = (0..=size).flat_map(|i| {
        (0..=size).map(move |j| {
            let e = &est[i][j];
            let [re, im] = complex_cells(e.value);
            vec![i.to_string(), j.to_string(), re, im, num(e.last_delta), bool_cell(e.converged)]
        })
    });
    write_csv(path, &["i", "j", "re", "im", "last_delta", "converged"], rows)
}

fn invert(cfg: &Config, out: &Path) -> Result<Value> {
    let n_max = cfg.n_max.unwrap_or(200);
    let window = cfg.window.unwrap_or(4);
    let truncation = cfg.truncation.unwrap_or(n_max / 2).max(window);
    if truncation >= n_max {
        return Err(MsxError::InvalidParameter(format!("truncation {truncation} must be below n_max = {n_max}")));
    }
    let cfgs = cfg.limit_configs();
    let kernel = &cfg.target.kernel;
    let inv = SectionInverses::from_kernel(kernel, n_max)?;

    // A by entrywise limits of the inverse sections, up to the truncation order.
    let est: Vec<Vec<LimitEstimate<Complex64>>> = (0..=truncation)
        .map(|i| (0..=truncation).map(|j| best_limit(&cfgs, |c| inv.entry_limit(i, j, c))).collect::<Result<_>>())
        .collect::<Result<_>>()?;
    write_window(&out.join("a_limit.csv"), &est, window)?;
    let a_lim = CMatrix::from_fn(truncation + 1, truncation + 1, |i, j| est[i][j].value);

    // A by the series of transition entries.
    let b = inv.transition();
    let mut series_rows = Vec::new();
    let mut tail_bounds = Vec::new();
    let mut route_gap: f64 = 0.0;
    let mut all_summable = true;
    for i in 0..=window {
        for j in 0..=window {
            let s = inverse_series_entry(&b, i, j, 1e-12)?;
            route_gap = route_gap.max((s.value - est[i][j].value).norm());
            all_summable &= s.summable;
            tail_bounds.push(json!({"i": i, "j": j, "tail_bound": s.tail_bound, "summable": s.summable}));
            let [re, im] = complex_cells(s.value);
            series_rows.push(vec![i.to_string(), j.to_string(), re, im, num(s.tail_bound), bool_cell(s.summable)]);
        }
    }
    write_csv(&out.join("a_series.csv"), &["i", "j", "re", "im", "tail_bound", "summable"], series_rows)?;

    let entries: Vec<Value> = (0..=window)
        .flat_map(|i| (0..=window).map(move |j| (i, j)))
        .map(|(i, j)| json!({"i": i, "j": j, "limit": climit_json(&est[i][j])}))
        .collect();
    let residual = inverse_residual_window(kernel, &|i, j| a_lim[(i, j)], window, truncation)?;
    let mut residuals = json!({ "limit_route": residual });

    if let Some(c) = cfg.target.closed.as_ref().filter(|c| c.a_entry(0, 0).is_some()) {
        let reach = truncation.min(closed_reach(c));
        if reach >= window {
            let a = |i: usize, j: usize| Complex64::new(c.a_entry(i, j).unwrap_or(f64::NAN), 0.0);
            residuals["closed_form"] = json!(inverse_residual_window(kernel, &a, window, reach)?);
            let gap = (0..=window)
                .flat_map(|i| (0..=window).map(move |j| (i, j)))
                .map(|(i, j)| (est[i][j].value - a(i, j)).norm())
                .fold(0.0, f64::max);
            residuals["closed_form_gap"] = json!(gap);
        }
    }
    Ok(json!({
        "n_max": n_max,
        "window": window,
        "truncation": truncation,
        "entries": entries,
        "route_gap": route_gap,
        "all_summable": all_summable,
        "all_converged": est.iter().take(window + 1).all(|r| r.iter().take(window + 1).all(|e| e.converged)),
        "residuals": residuals,
        "tail_bounds": tail_bounds,
    }))
}

fn asymptotics(cfg: &Config, out: &Path) -> Result<Value> {
    let kernel = &cfg.target.kernel;
    if !kernel.is_toeplitz() {
        return Err(MsxError::InvalidParameter("asymptotics needs a Toeplitz moment matrix (a circle measure)".into()));
    }
    let n_max = cfg.n_max.unwrap_or(200);
    let k_max = cfg.k_max.unwrap_or(8);
    let window = cfg.window.unwrap_or(4).min(k_max);
    if 2 * k_max + 2 > n_max {
        return Err(MsxError::InvalidParameter(format!("n_max = {n_max} is too small for k_max = {k_max}")));
    }
    let cfgs = cfg.limit_configs();
    // More β terms than diagonals, so the α series is not cut short.
    let k_beta = (n_max / 2).min((4 * k_max).max(40));
    let runs: Vec<Vec<LimitEstimate<Complex64>>> =
        cfgs.iter().map(|c| beta_limits(kernel, k_beta, n_max, c)).collect::<Result<_>>()?;
    let beta: Vec<LimitEstimate<Complex64>> = (0..=k_beta)
        .map(|k| {
            let mut tried = runs.iter().map(|r| r[k]);
            best_limit(&cfgs, |_| Ok(tried.next().expect("one run per setting")))
        })
        .collect::<Result<_>>()?;
    let profile = profile_from_beta(beta, k_max)?;

    let beta_rows = profile.beta.iter().enumerate().map(|(k, e)| {
        let [re, im] = complex_cells(e.value);
        vec![k.to_string(), re, im, num(e.last_delta), bool_cell(e.converged)]
    });
    write_csv(&out.join("beta.csv"), &["k", "re", "im", "last_delta", "converged"], beta_rows)?;

    // Sequence route: the diagonals of A read off the entrywise limits.
    let inv = SectionInverses::from_kernel(kernel, n_max)?;
    let n_last = n_max / 2 - k_max;
    let mut traces = Vec::new();
    let mut diag_seq = vec![Vec::with_capacity(n_last + 1); 2 * k_max + 1];
    for n in 0..=n_last {
        for k in -(k_max as i64)..=k_max as i64 {
            let d = k.unsigned_abs() as usize;
            let (i, j) = if k >= 0 { (n, n + d) } else { (n + d, n) };
            let v = best_limit(&cfgs, |c| inv.entry_limit(i, j, c))?.value;
            diag_seq[(k + k_max as i64) as usize].push(v);
            let [re, im] = complex_cells(v);
            traces.push(vec![n.to_string(), k.to_string(), re, im]);
        }
    }
    write_csv(&out.join("diagonal_traces.csv"), &["n", "k", "re", "im"], traces)?;
    let seq_alpha: Vec<LimitEstimate<Complex64>> =
        diag_seq.iter().map(|s| best_limit(&cfgs, |c| Ok(estimate_limit(s, c)))).collect::<Result<_>>()?;

    let mut alpha_rows = Vec::new();
    let mut diagnostics = Vec::new();
    for (idx, k) in (-(k_max as i64)..=k_max as i64).enumerate() {
        let a = profile.alpha[idx];
        let d = profile.alpha_diagnostics[idx];
        let s = &seq_alpha[idx];
        let gap = (a - s.value).norm();
        let [re, im] = complex_cells(a);
        let [sre, sim] = complex_cells(s.value);
        alpha_rows.push(vec![k.to_string(), re, im, opt_cell(d.tail_bound), bool_cell(d.converged), sre, sim, num(gap)]);
        diagnostics.push(json!({
            "k": k,
            "series": d,
            "sequence": climit_json(s),
            "route_gap": gap,
        }));
    }
    write_csv(
        &out.join("alpha.csv"),
        &["k", "re", "im", "tail_bound", "converged", "seq_re", "seq_im", "route_gap"],
        alpha_rows,
    )?;

    let beta = profile.beta_values();
    let from_beta = inverse_from_beta(&beta, window)?;
    let direct = inv.inverse(n_max);
    let direct_window = direct.view((0, 0), (window + 1, window + 1)).into_owned();
    let mut summary = json!({
        "n_max": n_max,
        "k_max": k_max,
        "beta_terms": k_beta + 1,
        "window": window,
        "beta": profile.beta.iter().map(climit_json).collect::<Vec<_>>(),
        "alpha": profile.alpha.iter().map(|z| complex_json(*z)).collect::<Vec<_>>(),
        "diagnostics": diagnostics,
        "all_converged": profile.all_converged(),
        "inverse_from_beta_vs_direct": window_gap(&from_beta, &direct_window),
    });

    if let Some(ClosedForm::Example4(e)) = &cfg.target.closed {
        let beta_gap = profile.beta.iter().enumerate().map(|(k, b)| (b.value.re - e.beta(k)).abs()).fold(0.0, f64::max);
        let alpha_gap = (-(k_max as i64)..=k_max as i64).map(|k| (profile.alpha(k).re - e.alpha(k)).abs()).fold(0.0, f64::max);
        summary["closed_form"] = json!({"beta_gap": beta_gap, "alpha_gap": alpha_gap});
    }

    if let Some(mu) = &cfg.target.measure {
        if has_singular_part(mu)? {
            summary["ac_beta_probe"] = match probe(mu, k_max.min(4), n_max, &cfgs) {
                Ok(r) => json!({
                    "lambda_limit": limit_json(&r.lambda_limit),
                    "beta_full": r.beta_full.iter().map(climit_json).collect::<Vec<_>>(),
                    "beta_ac": r.beta_ac.iter().map(climit_json).collect::<Vec<_>>(),
                    "gaps": r.gaps,
                }),
                Err(e) => json!({"skipped": e.to_string()}),
            };
        }
    }
    Ok(summary)
}

/// `β` comparison with the absolutely continuous part, under the first settings whose `β` limits all converge.
fn probe(mu: &Measure, k_max: usize, n_max: usize, cfgs: &[LimitConfig]) -> Result<AcBetaReport> {
    let mut last = None;
    for c in cfgs {
        let r = ac_beta_probe(mu, k_max, n_max, c)?;
        if r.beta_full.iter().chain(&r.beta_ac).all(|b| b.converged) {
            return Ok(r);
        }
        last = Some(r);
    }
    last.ok_or_else(|| MsxError::InvalidParameter("no limit settings".into()))
}

fn has_singular_part(mu: &Measure) -> Result<bool> {
    let (_, singular) = mu.ac_singular_split()?;
    Ok(!singular.is_zero())
}

fn toeplitz_limit(cfg: &Config, out: &Path) -> Result<Value> {
    let mu = cfg
        .target
        .measure
        .as_ref()
        .ok_or_else(|| MsxError::InvalidParameter(format!("`{}` is not given as a measure", cfg.target.label)))?;
    let n_max = cfg.n_max.unwrap_or(200);
    let k_max = cfg.k_max.unwrap_or(4);
    let mut reports = Vec::new();
    for c in cfg.limit_configs() {
        let r = moment_matrix_toeplitz_limit(mu, k_max, n_max, &c)?;
        if r.profile.all_converged() {
            reports.clear();
            reports.push(r);
            break;
        }
        reports.push(r);
    }
    let spread = |r: &ToeplitzLimitReport| r.profile.alpha_diagnostics.iter().map(|d| d.last_delta).fold(0.0, f64::max);
    let r = reports
        .into_iter()
        .min_by(|x, y| spread(x).total_cmp(&spread(y)))
        .ok_or_else(|| MsxError::InvalidParameter("no limit settings".into()))?;
    let rows = (-(k_max as i64)..=k_max as i64).enumerate().map(|(idx, k)| {
        let [re, im] = complex_cells(r.profile.alpha[idx]);
        let [rre, rim] = complex_cells(r.restriction[idx]);
        vec![k.to_string(), re, im, rre, rim, num(r.gaps[idx]), bool_cell(r.profile.alpha_diagnostics[idx].converged)]
    });
    write_csv(
        &out.join("diagonals.csv"),
        &["k", "re", "im", "restriction_re", "restriction_im", "gap", "converged"],
        rows,
    )?;
    Ok(json!({
        "n_max": n_max,
        "k_max": k_max,
        "alpha": r.profile.alpha.iter().map(|z| complex_json(*z)).collect::<Vec<_>>(),
        "restriction": r.restriction.iter().map(|z| complex_json(*z)).collect::<Vec<_>>(),
        "diagnostics": r.profile.alpha_diagnostics,
        "gaps": r.gaps,
        "max_gap": r.max_gap,
        "all_converged": r.profile.all_converged(),
    }))
}
