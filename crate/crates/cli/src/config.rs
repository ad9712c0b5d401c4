//! Experiment configuration files.

use serde::Deserialize;
use serde_json::{Map, Value};

use msx_core::catalog::{example_kernel, example_measure, ExampleParams, EXAMPLE_IDS};
use msx_core::measures::json::measure_from_value;
use msx_core::oracles::{closed_form, ClosedForm, OracleParams};
use msx_core::spectra::{Extrapolation, LimitConfig, LimitEstimate};
use msx_core::{Measure, MomentKernel, MsxError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Kind {
    Spectrum,
    Invert,
    Asymptotics,
    ToeplitzLimit,
}

impl Kind {
    pub fn name(self) -> &'static str {
        match self {
            Kind::Spectrum => "spectrum",
            Kind::Invert => "invert",
            Kind::Asymptotics => "asymptotics",
            Kind::ToeplitzLimit => "toeplitz-limit",
        }
    }
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(rename_all = "snake_case")]
enum ExtrapolationName {
    /// Plain tail first, Richardson when the tail has not settled.
    Auto,
    None,
    Aitken,
    Richardson,
}

/// Fields shared by all experiment kinds; measure parameters sit alongside.
#[derive(Debug, Clone, Deserialize)]
struct Common {
    kind: Kind,
    measure: Value,
    n_max: Option<usize>,
    window: Option<usize>,
    truncation: Option<usize>,
    k_max: Option<usize>,
    a: Option<f64>,
    #[serde(default)]
    b: Vec<f64>,
    tail_window: Option<usize>,
    tol_abs: Option<f64>,
    tol_rel: Option<f64>,
    extrapolation: Option<ExtrapolationName>,
    richardson_levels: Option<usize>,
}

/// What the experiment runs on.
pub struct Target {
    pub label: String,
    pub kernel: MomentKernel,
    pub measure: Option<Measure>,
    pub closed: Option<ClosedForm>,
}

pub struct Config {
    pub kind: Kind,
    pub target: Target,
    pub n_max: Option<usize>,
    pub window: Option<usize>,
    pub truncation: Option<usize>,
    pub k_max: Option<usize>,
    limit: LimitOverrides,
    pub raw: Value,
}

#[derive(Debug, Clone, Copy, Default)]
struct LimitOverrides {
    tail_window: Option<usize>,
    tol_abs: Option<f64>,
    tol_rel: Option<f64>,
    extrapolation: Option<ExtrapolationName>,
    richardson_levels: Option<usize>,
}

/// Richardson depth used when the configuration does not set one.
pub const DEFAULT_RICHARDSON_LEVELS: usize = 6;

impl Config {
    /// Limit settings to try in order; the first converged estimate wins.
    pub fn limit_configs(&self) -> Vec<LimitConfig> {
        let o = self.limit;
        let base = LimitConfig::default();
        let with = |extrapolation| LimitConfig {
            tail_window: o.tail_window.unwrap_or(base.tail_window),
            tol_abs: o.tol_abs.unwrap_or(base.tol_abs),
            tol_rel: o.tol_rel.unwrap_or(base.tol_rel),
            extrapolation,
        };
        let richardson = Extrapolation::Richardson { levels: o.richardson_levels.unwrap_or(DEFAULT_RICHARDSON_LEVELS) };
        match o.extrapolation.unwrap_or(ExtrapolationName::Auto) {
            ExtrapolationName::Auto => vec![with(Extrapolation::None), with(richardson)],
            ExtrapolationName::None => vec![with(Extrapolation::None)],
            ExtrapolationName::Aitken => vec![with(Extrapolation::Aitken)],
            ExtrapolationName::Richardson => vec![with(richardson)],
        }
    }
}

/// First converged estimate over `configs`, else the one with the smallest
/// spread, together with the extrapolation that produced it.
pub fn best_limit_with<T: Copy>(
    configs: &[LimitConfig],
    mut f: impl FnMut(&LimitConfig) -> msx_core::Result<LimitEstimate<T>>,
) -> msx_core::Result<(LimitEstimate<T>, Extrapolation)> {
    let mut best: Option<(LimitEstimate<T>, Extrapolation)> = None;
    for c in configs {
        let e = f(c)?;
        if e.converged {
            return Ok((e, c.extrapolation));
        }
        if best.as_ref().is_none_or(|(b, _)| e.last_delta < b.last_delta) {
            best = Some((e, c.extrapolation));
        }
    }
    best.ok_or_else(|| MsxError::InvalidParameter("no limit settings".into()))
}

pub fn best_limit<T: Copy>(
    configs: &[LimitConfig],
    f: impl FnMut(&LimitConfig) -> msx_core::Result<LimitEstimate<T>>,
) -> msx_core::Result<LimitEstimate<T>> {
    best_limit_with(configs, f).map(|(e, _)| e)
}

const RESERVED: &[&str] = &[
    "kind",
    "measure",
    "n_max",
    "window",
    "truncation",
    "k_max",
    "tail_window",
    "tol_abs",
    "tol_rel",
    "extrapolation",
    "richardson_levels",
];

fn target(common: &Common, raw: &Map<String, Value>) -> Result<Target, MsxError> {
    match &common.measure {
        Value::String(id) if EXAMPLE_IDS.contains(&id.as_str()) => {
            let params = ExampleParams { a: common.a, b: common.b.clone() };
            let kernel = example_kernel(id, &params)?;
            let measure = example_measure(id, &params)?;
            let closed = closed_form(id, &OracleParams { a: common.a, b: common.b.clone() }).ok();
            Ok(Target { label: id.clone(), kernel, measure, closed })
        }
        Value::String(ty) => {
            // The measure type with its parameters given at the top level.
            let mut spec: Map<String, Value> =
                raw.iter().filter(|(k, _)| !RESERVED.contains(&k.as_str())).map(|(k, v)| (k.clone(), v.clone())).collect();
            spec.insert("type".into(), Value::String(ty.clone()));
            let mu = measure_from_value(Value::Object(spec))?;
            Ok(Target { label: ty.clone(), kernel: MomentKernel::from_measure(mu.clone())?, measure: Some(mu), closed: None })
        }
        obj @ Value::Object(_) => {
            let mu = measure_from_value(obj.clone())?;
            let label = obj.get("type").and_then(Value::as_str).unwrap_or("measure").to_string();
            Ok(Target { label, kernel: MomentKernel::from_measure(mu.clone())?, measure: Some(mu), closed: None })
        }
        other => Err(MsxError::InvalidParameter(format!("`measure` must be a string or an object, got {other}"))),
    }
}

pub fn parse(text: &str) -> Result<Config, MsxError> {
    let raw: Value = serde_json::from_str(text)?;
    let map = raw
        .as_object()
        .ok_or_else(|| MsxError::InvalidParameter("configuration must be a JSON object".into()))?
        .clone();
    let common: Common = serde_json::from_value(raw.clone())?;
    let target = target(&common, &map)?;
    Ok(Config {
        kind: common.kind,
        target,
        n_max: common.n_max,
        window: common.window,
        truncation: common.truncation,
        k_max: common.k_max,
        limit: LimitOverrides {
            tail_window: common.tail_window,
            tol_abs: common.tol_abs,
            tol_rel: common.tol_rel,
            extrapolation: common.extrapolation,
            richardson_levels: common.richardson_levels,
        },
        raw,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn example_with_inline_parameter() {
        let c = parse(r#"{"kind":"spectrum","measure":"example4","a":0.5,"n_max":20}"#).unwrap();
        assert_eq!(c.kind, Kind::Spectrum);
        assert_eq!(c.n_max, Some(20));
        assert!(c.target.kernel.is_toeplitz());
        assert!(c.target.closed.is_some());
    }

    #[test]
    fn measure_type_with_top_level_fields() {
        let c = parse(r#"{"kind":"spectrum","measure":"circle_ac","w":"one","n_max":10}"#).unwrap();
        assert_eq!(c.target.label, "circle_ac");
        assert!(matches!(c.target.measure, Some(Measure::CircleAc(_))));
    }

    #[test]
    fn limit_overrides() {
        let c = parse(r#"{"kind":"invert","measure":"example3","extrapolation":"aitken","tol_abs":1e-3}"#).unwrap();
        let cfgs = c.limit_configs();
        assert_eq!(cfgs.len(), 1);
        assert_eq!(cfgs[0].extrapolation, Extrapolation::Aitken);
        assert_eq!(cfgs[0].tol_abs, 1e-3);
        let c = parse(r#"{"kind":"invert","measure":"example3"}"#).unwrap();
        let kinds: Vec<_> = c.limit_configs().iter().map(|c| c.extrapolation).collect();
        assert_eq!(kinds, [Extrapolation::None, Extrapolation::Richardson { levels: DEFAULT_RICHARDSON_LEVELS }]);
    }

    #[test]
    fn best_limit_prefers_first_converged() {
        let cfgs = [LimitConfig::default(), LimitConfig::richardson()];
        let slow: Vec<f64> = (0..200).map(|n| 1.0 / (n as f64 + 1.0)).collect();
        let e = best_limit(&cfgs, |c| Ok(msx_core::estimate_limit(&slow, c))).unwrap();
        assert!(e.converged && e.value.abs() < 1e-8);
        let fast: Vec<f64> = (0..40).map(|n| 0.5_f64.powi(n)).collect();
        let (e, used) = best_limit_with(&cfgs, |c| Ok(msx_core::estimate_limit(&fast, c))).unwrap();
        assert!(e.converged);
        assert_eq!(used, Extrapolation::None);
    }

    #[test]
    fn bad_configs() {
        assert!(parse(r#"{"kind":"spectrum"}"#).is_err());
        assert!(parse(r#"{"kind":"dance","measure":"example3"}"#).is_err());
        assert!(parse(r#"{"kind":"spectrum","measure":"example4"}"#).is_err());
        assert!(parse(r#"{"kind":"spectrum","measure":"circle_ac","w":"nope"}"#).is_err());
        assert!(parse("[1, 2]").is_err());
    }
}
