//! Named example kernels, built through the measure families where the
//! example is a measure and from explicit entry formulas otherwise.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::One;

use crate::error::{MsxError, Result};
use crate::measures::{Atom, Density, Measure, MomentKernel};
use crate::sections::exact::{rational, ExactKernel, Rational};

/// Parameters shared by the named examples.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ExampleParams {
    pub a: Option<f64>,
    /// Case I/II coefficient lists.
    pub b: Vec<f64>,
}

impl ExampleParams {
    pub fn with_a(a: f64) -> Self {
        Self { a: Some(a), b: Vec::new() }
    }

    fn a(&self, id: &str) -> Result<f64> {
        match self.a {
            Some(a) if a > 0.0 && a < 1.0 => Ok(a),
            Some(a) => Err(MsxError::InvalidParameter(format!("{id}: a = {a} must lie in (0, 1)"))),
            None => Err(MsxError::InvalidParameter(format!("{id} needs parameter `a`"))),
        }
    }

    fn b(&self, id: &str) -> Result<Vec<f64>> {
        if self.b.is_empty() || self.b.iter().any(|&x| !(x > 0.0 && x.is_finite())) {
            return Err(MsxError::InvalidParameter(format!("{id} needs a non-empty positive list `b`")));
        }
        Ok(self.b.clone())
    }
}

pub const EXAMPLE_IDS: &[&str] =
    &["example1", "example2", "example3", "example4", "case1", "case2", "hofmaier", "hilbert", "disk", "two_plus_cos"];

/// `½ m + ½ δ_1`.
pub fn example3_measure() -> Measure {
    Measure::Mixture(vec![(0.5, Measure::lebesgue()), (1.0, Measure::CircleAtoms(vec![Atom::new(0.0, 0.5)]))])
}

/// The measure behind a named example, when there is one in the supported families.
pub fn example_measure(id: &str, params: &ExampleParams) -> Result<Option<Measure>> {
    let mu = match id {
        "example1" | "pascal" => Measure::ShiftedCircle { center: Complex64::new(1.0, 0.0), radius: 1.0 },
        "example2" => {
            let a = params.a(id)?;
            Measure::ScaledCircleImage {
                scale: a,
                base: Box::new(Measure::CircleAc(Density::Poisson { r: a.sqrt() })),
            }
        }
        "example3" => example3_measure(),
        "example4" => Measure::CircleAc(Density::tridiagonal(params.a(id)?)?),
        "disk" | "disk_uniform" => Measure::disk_uniform(),
        "two_plus_cos" => Measure::CircleAc(Density::two_plus_cos()),
        "case1" | "case2" | "hofmaier" | "hilbert" => return Ok(None),
        other => return Err(MsxError::UnknownExample(other.to_string())),
    };
    Ok(Some(mu))
}

pub fn example_kernel(id: &str, params: &ExampleParams) -> Result<MomentKernel> {
    if let Some(mu) = example_measure(id, params)? {
        return Ok(MomentKernel::from_measure(mu)?.with_tag(id));
    }
    let kernel = match id {
        "case1" => {
            let b = params.b(id)?;
            MomentKernel::general(move |i, j| {
                let bi = *b.get(i).ok_or_else(|| short_list(i, b.len()))?;
                Ok(Complex64::new(if i == j { bi.powi(-2) } else { 0.0 }, 0.0))
            })
        }
        "case2" => {
            let b = params.b(id)?;
            MomentKernel::general(move |i, j| {
                let n = i.min(j);
                if n > b.len() {
                    return Err(short_list(n, b.len() + 1));
                }
                let c: f64 = 1.0 + b[..n].iter().map(|x| x.powi(-2)).sum::<f64>();
                Ok(Complex64::new(c, 0.0))
            })
        }
        "hofmaier" => MomentKernel::real(|i, j| (i.min(j) + 1) as f64),
        "hilbert" => MomentKernel::real(|i, j| 1.0 / (i + j + 1) as f64),
        other => return Err(MsxError::UnknownExample(other.to_string())),
    };
    Ok(kernel.with_tag(id))
}

fn short_list(index: usize, len: usize) -> MsxError {
    MsxError::InvalidParameter(format!("coefficient list of length {len} does not reach index {index}"))
}

fn binomial_big(n: usize, k: usize) -> BigInt {
    let k = k.min(n - k);
    (0..k).fold(BigInt::one(), |acc, t| acc * BigInt::from(n - t) / BigInt::from(t + 1))
}

/// Rational-valued kernels for the exact backend.
pub fn exact_kernel(id: &str, params: &ExampleParams) -> Result<ExactKernel> {
    Ok(match id {
        "example1" | "pascal" => ExactKernel::new(|i, j| Rational::from_integer(binomial_big(i + j, i))),
        "example2" => {
            let a = params.a(id)?;
            let a = BigRational::from_float(a).ok_or_else(|| MsxError::InvalidParameter("a is not finite".into()))?;
            ExactKernel::new(move |i, j| (0..i.max(j)).fold(Rational::one(), |acc, _| acc * &a))
        }
        "example3" => ExactKernel::new(|i, j| if i == j { rational(1, 1) } else { rational(1, 2) }),
        "hofmaier" => ExactKernel::new(|i, j| rational((i.min(j) + 1) as i64, 1)),
        "hilbert" => ExactKernel::new(|i, j| rational(1, (i + j + 1) as i64)),
        other => {
            return Err(MsxError::InvalidParameter(format!("no rational kernel for example `{other}`")));
        }
    })
}
