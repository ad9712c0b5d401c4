//! JSON description of measures.
//!
//! ```json
//! {"type": "circle_ac", "w": "example4", "a": 0.5}
//! {"type": "circle_ac", "fourier": [2.0, 0.5]}
//! {"type": "atoms", "atoms": [{"theta": 0.0, "mass": 0.5}]}
//! {"type": "disk_uniform"}
//! {"type": "shifted_circle", "center": [1.0, 0.0], "radius": 1.0}
//! {"type": "scaled_circle_image", "scale": 0.5, "base": {"type": "circle_ac", "w": "poisson", "r": 0.7}}
//! {"type": "mixture", "components": [{"weight": 0.5, "measure": {"type": "circle_ac", "w": "one"}}]}
//! ```
//!
//! Fourier lists give `ŵ_0, ŵ_1, …, ŵ_d` (each a number or `[re, im]`);
//! negative indices follow from `ŵ_{−k} = conj(ŵ_k)`.

use num_complex::Complex64;
use serde::Deserialize;
use serde_json::Value;

use super::{Atom, Density, Measure, TrigPolynomial};
use crate::error::{MsxError, Result};

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum ComplexSpec {
    Real(f64),
    Pair([f64; 2]),
}

impl From<&ComplexSpec> for Complex64 {
    fn from(c: &ComplexSpec) -> Self {
        match c {
            ComplexSpec::Real(x) => Complex64::new(*x, 0.0),
            ComplexSpec::Pair([re, im]) => Complex64::new(*re, *im),
        }
    }
}

#[derive(Debug, Deserialize)]
struct AtomSpec {
    theta: f64,
    mass: f64,
}

#[derive(Debug, Deserialize)]
struct ComponentSpec {
    weight: f64,
    measure: MeasureSpec,
}

#[derive(Debug, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
enum MeasureSpec {
    CircleAc {
        w: Option<String>,
        a: Option<f64>,
        r: Option<f64>,
        c: Option<f64>,
        fourier: Option<Vec<ComplexSpec>>,
    },
    Atoms {
        atoms: Vec<AtomSpec>,
    },
    DiskUniform {
        mass: Option<f64>,
    },
    ShiftedCircle {
        center: ComplexSpec,
        radius: f64,
    },
    ScaledCircleImage {
        scale: f64,
        base: Box<MeasureSpec>,
    },
    Mixture {
        components: Vec<ComponentSpec>,
    },
}

fn require(name: &str, value: Option<f64>, owner: &str) -> Result<f64> {
    value.ok_or_else(|| MsxError::InvalidMeasure(format!("density `{owner}` needs parameter `{name}`")))
}

/// Named built-in densities.
pub fn builtin_density(name: &str, a: Option<f64>, r: Option<f64>, c: Option<f64>) -> Result<Density> {
    match name {
        "one" => Ok(Density::Constant(1.0)),
        "constant" => Ok(Density::Constant(require("c", c, name)?)),
        "example4" | "tridiagonal" => Density::tridiagonal(require("a", a, name)?),
        "two_plus_cos" => Ok(Density::two_plus_cos()),
        "poisson" => Ok(Density::Poisson { r: require("r", r, name)? }),
        other => Err(MsxError::InvalidMeasure(format!("unknown density `{other}`"))),
    }
}

impl TryFrom<MeasureSpec> for Measure {
    type Error = MsxError;

    fn try_from(spec: MeasureSpec) -> Result<Measure> {
        let mu = match spec {
            MeasureSpec::CircleAc { w, a, r, c, fourier } => match (w, fourier) {
                (Some(name), None) => Measure::CircleAc(builtin_density(&name, a, r, c)?),
                (None, Some(list)) => {
                    let coeffs = list.iter().map(Complex64::from).collect();
                    Measure::CircleAc(Density::Trig(TrigPolynomial::new(coeffs)?))
                }
                _ => {
                    return Err(MsxError::InvalidMeasure(
                        "circle_ac needs exactly one of `w` or `fourier`".into(),
                    ))
                }
            },
            MeasureSpec::Atoms { atoms } => {
                Measure::CircleAtoms(atoms.iter().map(|a| Atom::new(a.theta, a.mass)).collect())
            }
            MeasureSpec::DiskUniform { mass } => {
                Measure::DiskUniform { mass: mass.unwrap_or(std::f64::consts::PI) }
            }
            MeasureSpec::ShiftedCircle { center, radius } => {
                Measure::ShiftedCircle { center: (&center).into(), radius }
            }
            MeasureSpec::ScaledCircleImage { scale, base } => {
                Measure::ScaledCircleImage { scale, base: Box::new(Measure::try_from(*base)?) }
            }
            MeasureSpec::Mixture { components } => Measure::Mixture(
                components
                    .into_iter()
                    .map(|c| Ok((c.weight, Measure::try_from(c.measure)?)))
                    .collect::<Result<_>>()?,
            ),
        };
        mu.validate()?;
        Ok(mu)
    }
}

pub fn measure_from_value(value: Value) -> Result<Measure> {
    let spec: MeasureSpec = serde_json::from_value(value)?;
    Measure::try_from(spec)
}

pub fn parse_measure(text: &str) -> Result<Measure> {
    let spec: MeasureSpec = serde_json::from_str(text)?;
    Measure::try_from(spec)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_example4_density() {
        let mu = parse_measure(r#"{"type": "circle_ac", "w": "example4", "a": 0.5}"#).unwrap();
        let t1 = mu.moment(0, 1).unwrap();
        assert!((t1.re - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn parses_nested_mixture() {
        let text = r#"{"type": "mixture", "components": [
            {"weight": 0.5, "measure": {"type": "circle_ac", "w": "one"}},
            {"weight": 1.0, "measure": {"type": "atoms", "atoms": [{"theta": 0.0, "mass": 0.5}]}}
        ]}"#;
        let mu = parse_measure(text).unwrap();
        assert!((mu.moment(0, 0).unwrap().re - 1.0).abs() < 1e-15);
        assert!((mu.moment(3, 1).unwrap().re - 0.5).abs() < 1e-15);
    }

    #[test]
    fn parses_explicit_fourier_list() {
        let mu = parse_measure(r#"{"type": "circle_ac", "fourier": [2.0, [0.25, 0.25]]}"#).unwrap();
        assert_eq!(mu.moment(0, 1).unwrap(), Complex64::new(0.25, 0.25));
    }

    #[test]
    fn shifted_circle_center_forms() {
        let a = parse_measure(r#"{"type": "shifted_circle", "center": 1.0, "radius": 1.0}"#).unwrap();
        let b = parse_measure(r#"{"type": "shifted_circle", "center": [1.0, 0.0], "radius": 1.0}"#).unwrap();
        assert_eq!(a.moment(2, 3).unwrap(), b.moment(2, 3).unwrap());
    }

    #[test]
    fn rejects_unknown_density_and_bad_mass() {
        assert!(parse_measure(r#"{"type": "circle_ac", "w": "nope"}"#).is_err());
        assert!(parse_measure(r#"{"type": "atoms", "atoms": [{"theta": 0.0, "mass": -1}]}"#).is_err());
        assert!(parse_measure(r#"{"type": "circle_ac", "w": "example4"}"#).is_err());
    }
}
