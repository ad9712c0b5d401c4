//! Densities on the unit circle and trapezoidal Fourier analysis.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{MsxError, Result};

/// Successive trapezoid estimates must agree to this before doubling stops.
pub const QUADRATURE_TOL: f64 = 1e-12;
/// Hard cap on the number of trapezoid nodes.
pub const QUADRATURE_MAX_POINTS: usize = 1 << 20;
/// Samples below `-NEGATIVITY_SLACK` are reported as a negative density.
const NEGATIVITY_SLACK: f64 = 1e-14;

/// Finite Fourier series `w(θ) = Σ_{|k|≤d} ŵ_k e^{ikθ}` with `ŵ_{-k} = conj(ŵ_k)`.
///
/// Only the non-negative half `ŵ_0, …, ŵ_d` is stored; `ŵ_0` must be real.
#[derive(Debug, Clone, PartialEq)]
pub struct TrigPolynomial {
    coeffs: Vec<Complex64>,
}

impl TrigPolynomial {
    pub fn new(coeffs: Vec<Complex64>) -> Result<Self> {
        match coeffs.first() {
            None => Err(MsxError::InvalidMeasure("empty Fourier coefficient list".into())),
            Some(c0) if c0.im.abs() > 1e-14 * c0.re.abs().max(1.0) => Err(
                MsxError::InvalidMeasure("zeroth Fourier coefficient must be real".into()),
            ),
            Some(_) => {
                let mut coeffs = coeffs;
                coeffs[0].im = 0.0;
                Ok(Self { coeffs })
            }
        }
    }

    pub fn from_real(coeffs: &[f64]) -> Result<Self> {
        Self::new(coeffs.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coefficient(&self, k: i64) -> Complex64 {
        let idx = k.unsigned_abs() as usize;
        match self.coeffs.get(idx) {
            None => Complex64::new(0.0, 0.0),
            Some(c) if k >= 0 => *c,
            Some(c) => c.conj(),
        }
    }

    pub fn eval(&self, theta: f64) -> f64 {
        let mut value = self.coeffs[0].re;
        for (k, c) in self.coeffs.iter().enumerate().skip(1) {
            value += 2.0 * (c * Complex64::from_polar(1.0, k as f64 * theta)).re;
        }
        value
    }

    fn scaled(&self, weight: f64) -> Self {
        Self { coeffs: self.coeffs.iter().map(|c| c * weight).collect() }
    }
}

/// A real 2π-periodic density `w(θ)` for `dν = w(θ) dθ / 2π`.
///
/// Every variant can be sampled; variants other than [`Density::Custom`] also
/// know their Fourier coefficients in closed form.
#[derive(Clone)]
pub enum Density {
    Constant(f64),
    Trig(TrigPolynomial),
    /// Poisson kernel `(1 − r²)/(1 − 2r cos θ + r²)`, coefficients `r^|k|`.
    Poisson { r: f64 },
    /// Non-negative linear combination of densities.
    Sum(Vec<(f64, Density)>),
    Custom { name: String, f: Arc<dyn Fn(f64) -> f64 + Send + Sync> },
}

impl fmt::Debug for Density {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Density::Constant(c) => write!(f, "Constant({c})"),
            Density::Trig(p) => write!(f, "Trig({:?})", p.coeffs),
            Density::Poisson { r } => write!(f, "Poisson {{ r: {r} }}"),
            Density::Sum(parts) => f.debug_list().entries(parts.iter()).finish(),
            Density::Custom { name, .. } => write!(f, "Custom({name})"),
        }
    }
}

impl Density {
    /// `(1 + a² + 2a cos θ)/(1 − a²)`: the symbol of the tridiagonal Toeplitz
    /// family with diagonal `(1+a²)/(1−a²)` and off-diagonal `a/(1−a²)`.
    pub fn tridiagonal(a: f64) -> Result<Self> {
        if !(a > 0.0 && a < 1.0) {
            return Err(MsxError::InvalidParameter(format!("a = {a} must lie in (0, 1)")));
        }
        let s = 1.0 - a * a;
        Ok(Density::Trig(TrigPolynomial::from_real(&[(1.0 + a * a) / s, a / s])?))
    }

    /// `2 + cos θ`.
    pub fn two_plus_cos() -> Self {
        Density::Trig(TrigPolynomial::from_real(&[2.0, 0.5]).expect("valid coefficients"))
    }

    pub fn custom(name: impl Into<String>, f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        Density::Custom { name: name.into(), f: Arc::new(f) }
    }

    pub fn eval(&self, theta: f64) -> f64 {
        match self {
            Density::Constant(c) => *c,
            Density::Trig(p) => p.eval(theta),
            Density::Poisson { r } => (1.0 - r * r) / (1.0 - 2.0 * r * theta.cos() + r * r),
            Density::Sum(parts) => parts.iter().map(|(w, d)| w * d.eval(theta)).sum(),
            Density::Custom { f, .. } => f(theta),
        }
    }

    /// Closed-form `ŵ_k = (1/2π) ∫ w(θ) e^{−ikθ} dθ`, when known.
    pub fn closed_form_coefficient(&self, k: i64) -> Option<Complex64> {
        match self {
            Density::Constant(c) => Some(Complex64::new(if k == 0 { *c } else { 0.0 }, 0.0)),
            Density::Trig(p) => Some(p.coefficient(k)),
            Density::Poisson { r } => Some(Complex64::new(r.powi(k.unsigned_abs() as i32), 0.0)),
            Density::Sum(parts) => parts
                .iter()
                .map(|(w, d)| d.closed_form_coefficient(k).map(|c| c * *w))
                .sum(),
            Density::Custom { .. } => None,
        }
    }

    /// Fourier coefficient, by closed form or adaptive trapezoid quadrature.
    pub fn fourier_coefficient(&self, k: i64) -> Result<Complex64> {
        match self.closed_form_coefficient(k) {
            Some(c) => Ok(c),
            None => adaptive_fourier_coefficient(&|t| self.eval(t), k, true),
        }
    }

    pub fn scaled(&self, weight: f64) -> Density {
        match self {
            Density::Constant(c) => Density::Constant(c * weight),
            Density::Trig(p) => Density::Trig(p.scaled(weight)),
            other => Density::Sum(vec![(weight, other.clone())]),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Density::Constant(c) if !(*c >= 0.0) => {
                Err(MsxError::InvalidMeasure(format!("constant density {c} is negative")))
            }
            Density::Poisson { r } if !(*r >= 0.0 && *r < 1.0) => {
                Err(MsxError::InvalidMeasure(format!("Poisson radius {r} outside [0, 1)")))
            }
            Density::Sum(parts) => {
                for (w, d) in parts {
                    if !(*w > 0.0) {
                        return Err(MsxError::InvalidMeasure(format!("weight {w} is not positive")));
                    }
                    d.validate()?;
                }
                Ok(())
            }
            Density::Trig(_) => {
                // Non-negativity on a fine grid; trigonometric polynomials of
                // moderate degree cannot dip far between 4096 nodes.
                let n = 4096;
                for m in 0..n {
                    let theta = 2.0 * PI * m as f64 / n as f64;
                    let v = self.eval(theta);
                    if v < -NEGATIVITY_SLACK {
                        return Err(MsxError::NegativeDensity { theta, value: v });
                    }
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }
}

/// Composite trapezoid approximation of `ŵ_k` on `n_points` equispaced nodes.
///
/// Exact up to rounding when `w` is a trigonometric polynomial of degree
/// below `n_points − |k|`.
pub fn symbol_fourier_coefficient(
    w: &dyn Fn(f64) -> f64,
    k: i64,
    n_points: usize,
) -> Result<Complex64> {
    let need = 4 * (k.unsigned_abs() as usize + 1);
    if n_points < need {
        return Err(MsxError::InvalidParameter(format!(
            "{n_points} trapezoid nodes are too few for coefficient {k} (need {need})"
        )));
    }
    let h = 2.0 * PI / n_points as f64;
    let sum: Complex64 = (0..n_points)
        .map(|m| {
            let theta = h * m as f64;
            Complex64::from_polar(w(theta), -(k as f64) * theta)
        })
        .sum();
    Ok(sum / n_points as f64)
}

/// Doubling trapezoid rule for `ŵ_k`: starts at the smallest power of two
/// admissible for `k` and stops once successive estimates differ by less
/// than [`QUADRATURE_TOL`].
pub fn adaptive_fourier_coefficient(
    w: &dyn Fn(f64) -> f64,
    k: i64,
    check_nonnegative: bool,
) -> Result<Complex64> {
    let sample = |theta: f64| -> Result<Complex64> {
        let v = w(theta);
        if check_nonnegative && v < -NEGATIVITY_SLACK {
            return Err(MsxError::NegativeDensity { theta, value: v });
        }
        Ok(Complex64::from_polar(v, -(k as f64) * theta))
    };

    let mut n = (4 * (k.unsigned_abs() as usize + 1)).next_power_of_two().max(16);
    let mut sum = Complex64::new(0.0, 0.0);
    for m in 0..n {
        sum += sample(2.0 * PI * m as f64 / n as f64)?;
    }
    let mut estimate = sum / n as f64;
    loop {
        if 2 * n > QUADRATURE_MAX_POINTS {
            return Err(MsxError::Quadrature { points: n, residual: f64::NAN });
        }
        // Refinement only visits the new odd nodes of the doubled grid.
        let h = 2.0 * PI / (2 * n) as f64;
        for m in 0..n {
            sum += sample(h * (2 * m + 1) as f64)?;
        }
        n *= 2;
        let next = sum / n as f64;
        let residual = (next - estimate).norm();
        estimate = next;
        if residual < QUADRATURE_TOL {
            return Ok(estimate);
        }
        if n >= QUADRATURE_MAX_POINTS {
            return Err(MsxError::Quadrature { points: n, residual });
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_symbol_has_no_higher_coefficients() {
        let c = symbol_fourier_coefficient(&|_| 1.0, 3, 64).unwrap();
        assert!(c.norm() < 1e-15);
    }

    #[test]
    fn tridiagonal_symbol_first_coefficient() {
        let a = 0.5;
        let w = |t: f64| (1.0 + a * a + 2.0 * a * t.cos()) / (1.0 - a * a);
        let c = symbol_fourier_coefficient(&w, 1, 64).unwrap();
        assert!((c.re - 2.0 / 3.0).abs() < 1e-15);
        assert!(c.im.abs() < 1e-15);
    }

    #[test]
    fn cosine_coefficients_both_signs() {
        let w = |t: f64| 2.0 + t.cos();
        for k in [-1, 1] {
            let c = symbol_fourier_coefficient(&w, k, 32).unwrap();
            assert!((c - Complex64::new(0.5, 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn too_few_nodes_rejected() {
        assert!(symbol_fourier_coefficient(&|_| 1.0, 3, 8).is_err());
    }

    #[test]
    fn adaptive_matches_closed_form_for_poisson() {
        let d = Density::Poisson { r: 0.6 };
        for k in -5..=5 {
            let q = adaptive_fourier_coefficient(&|t| d.eval(t), k, true).unwrap();
            let exact = d.closed_form_coefficient(k).unwrap();
            assert!((q - exact).norm() < 1e-12, "k={k}");
        }
    }

    #[test]
    fn adaptive_reports_negative_density() {
        let err = adaptive_fourier_coefficient(&|t| t.cos(), 0, true).unwrap_err();
        assert!(matches!(err, MsxError::NegativeDensity { .. }));
    }

    #[test]
    fn sum_density_coefficients_are_linear() {
        let d = Density::Sum(vec![(0.5, Density::Constant(2.0)), (2.0, Density::two_plus_cos())]);
        let c0 = d.closed_form_coefficient(0).unwrap();
        let c1 = d.closed_form_coefficient(1).unwrap();
        assert!((c0.re - 5.0).abs() < 1e-15);
        assert!((c1.re - 1.0).abs() < 1e-15);
    }

    #[test]
    fn trig_polynomial_must_stay_nonnegative() {
        let d = Density::Trig(TrigPolynomial::from_real(&[1.0, 1.0]).unwrap());
        assert!(matches!(d.validate(), Err(MsxError::NegativeDensity { .. })));
    }
}
