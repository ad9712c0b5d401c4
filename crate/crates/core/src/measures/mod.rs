//! Parametric positive measures on the unit circle and the closed disk, and
//! their moments `c_{ij} = ∫ zⁱ z̄ʲ dμ`.
//!
//! Lebesgue measure on the circle is normalised as `dθ/2π`, so a circle
//! density `w` gives `c_{ij} = ŵ_{j−i}` with `ŵ_k = (1/2π)∫ w(θ) e^{−ikθ} dθ`,
//! and `w ≡ 1` yields the identity moment matrix.

mod density;
pub mod json;
mod kernel;

pub use density::{
    adaptive_fourier_coefficient, symbol_fourier_coefficient, Density, TrigPolynomial,
    QUADRATURE_MAX_POINTS, QUADRATURE_TOL,
};
pub use kernel::MomentKernel;

use num_complex::Complex64;

use crate::error::{MsxError, Result};

/// Point mass `mass · δ_{e^{iθ}}` on the unit circle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Atom {
    pub theta: f64,
    pub mass: f64,
}

impl Atom {
    pub fn new(theta: f64, mass: f64) -> Self {
        Self { theta, mass }
    }
}

#[derive(Debug, Clone)]
pub enum Measure {
    /// `w(θ) dθ/2π` on the unit circle.
    CircleAc(Density),
    CircleAtoms(Vec<Atom>),
    /// Area measure on the unit disk rescaled to the given total mass.
    DiskUniform { mass: f64 },
    /// Normalised arc length on `|z − center| = radius`.
    ShiftedCircle { center: Complex64, radius: f64 },
    /// Image of a circle measure under `z ↦ √scale · z`.
    ScaledCircleImage { scale: f64, base: Box<Measure> },
    /// `Σ weight · measure`; the empty mixture is the zero measure.
    Mixture(Vec<(f64, Measure)>),
}

impl Measure {
    pub fn zero() -> Self {
        Measure::Mixture(Vec::new())
    }

    pub fn lebesgue() -> Self {
        Measure::CircleAc(Density::Constant(1.0))
    }

    pub fn disk_uniform() -> Self {
        Measure::DiskUniform { mass: std::f64::consts::PI }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Measure::Mixture(parts) => parts.iter().all(|(_, m)| m.is_zero()),
            Measure::CircleAtoms(atoms) => atoms.is_empty(),
            _ => false,
        }
    }

    /// Supported on the unit circle (so the moment matrix is Toeplitz).
    pub fn is_circle_supported(&self) -> bool {
        match self {
            Measure::CircleAc(_) | Measure::CircleAtoms(_) => true,
            Measure::ShiftedCircle { center, radius } => center.norm() == 0.0 && *radius == 1.0,
            Measure::Mixture(parts) => parts.iter().all(|(_, m)| m.is_circle_supported()),
            Measure::DiskUniform { .. } | Measure::ScaledCircleImage { .. } => false,
        }
    }

    /// Supported on the closed unit disk.
    pub fn is_disk_supported(&self) -> bool {
        match self {
            Measure::CircleAc(_) | Measure::CircleAtoms(_) | Measure::DiskUniform { .. } => true,
            Measure::ShiftedCircle { center, radius } => center.norm() + radius <= 1.0 + 1e-15,
            Measure::ScaledCircleImage { scale, base } => *scale <= 1.0 && base.is_circle_supported(),
            Measure::Mixture(parts) => parts.iter().all(|(_, m)| m.is_disk_supported()),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(MsxError::InvalidMeasure(msg));
        match self {
            Measure::CircleAc(d) => d.validate(),
            Measure::CircleAtoms(atoms) => {
                for a in atoms {
                    if !(a.mass > 0.0) || !a.theta.is_finite() {
                        return bad(format!("atom {a:?} needs a finite angle and positive mass"));
                    }
                }
                Ok(())
            }
            Measure::DiskUniform { mass } if !(*mass > 0.0) => bad(format!("disk mass {mass} is not positive")),
            Measure::DiskUniform { .. } => Ok(()),
            Measure::ShiftedCircle { radius, center } => {
                if !(*radius > 0.0) || !center.re.is_finite() || !center.im.is_finite() {
                    bad(format!("circle radius {radius} must be positive"))
                } else {
                    Ok(())
                }
            }
            Measure::ScaledCircleImage { scale, base } => {
                if !(*scale > 0.0 && *scale < 1.0) {
                    return bad(format!("scale {scale} must lie in (0, 1)"));
                }
                if !base.is_circle_supported() {
                    return bad("scaled image needs a base measure on the unit circle".into());
                }
                base.validate()
            }
            Measure::Mixture(parts) => {
                for (w, m) in parts {
                    if !(*w > 0.0) {
                        return bad(format!("mixture weight {w} is not positive"));
                    }
                    m.validate()?;
                }
                Ok(())
            }
        }
    }

    /// `c_{ij} = ∫ zⁱ z̄ʲ dμ`.
    pub fn moment(&self, i: usize, j: usize) -> Result<Complex64> {
        match self {
            Measure::CircleAc(w) => w.fourier_coefficient(j as i64 - i as i64),
            Measure::CircleAtoms(atoms) => {
                let d = i as f64 - j as f64;
                Ok(atoms.iter().map(|a| Complex64::from_polar(a.mass, d * a.theta)).sum())
            }
            Measure::DiskUniform { mass } => Ok(if i == j {
                Complex64::new(mass / (i as f64 + 1.0), 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }),
            Measure::ShiftedCircle { center, radius } => Ok(shifted_circle_moment(*center, *radius, i, j)),
            Measure::ScaledCircleImage { scale, base } => {
                let factor = scale.sqrt().powi((i + j) as i32);
                Ok(base.moment(i, j)? * factor)
            }
            Measure::Mixture(parts) => {
                let mut total = Complex64::new(0.0, 0.0);
                for (w, m) in parts {
                    total += m.moment(i, j)? * *w;
                }
                Ok(total)
            }
        }
    }

    /// Lebesgue decomposition of a circle measure into its absolutely
    /// continuous part (a single density with mixture weights folded in) and
    /// its singular part (the merged atom list). Absent parts are zero.
    pub fn ac_singular_split(&self) -> Result<(Measure, Measure)> {
        let mut densities = Vec::new();
        let mut atoms = Vec::new();
        collect_circle_parts(self, 1.0, &mut densities, &mut atoms)?;
        let ac = match densities.len() {
            0 => Measure::zero(),
            1 => {
                let (w, d) = densities.pop().expect("one density");
                Measure::CircleAc(if w == 1.0 { d } else { d.scaled(w) })
            }
            _ => Measure::CircleAc(Density::Sum(densities)),
        };
        let singular = if atoms.is_empty() { Measure::zero() } else { Measure::CircleAtoms(atoms) };
        Ok((ac, singular))
    }

    /// The part of a disk measure carried by the unit circle.
    pub fn circle_restriction(&self) -> Measure {
        match self {
            Measure::CircleAc(_) | Measure::CircleAtoms(_) => self.clone(),
            // Any circle other than the unit circle meets it in at most two points.
            Measure::ShiftedCircle { center, radius } if center.norm() == 0.0 && *radius == 1.0 => {
                Measure::lebesgue()
            }
            Measure::ShiftedCircle { .. } | Measure::DiskUniform { .. } => Measure::zero(),
            Measure::ScaledCircleImage { .. } => Measure::zero(),
            Measure::Mixture(parts) => {
                let kept: Vec<(f64, Measure)> = parts
                    .iter()
                    .map(|(w, m)| (*w, m.circle_restriction()))
                    .filter(|(_, m)| !m.is_zero())
                    .collect();
                match kept.len() {
                    0 => Measure::zero(),
                    1 if kept[0].0 == 1.0 => kept.into_iter().next().expect("one part").1,
                    _ => Measure::Mixture(kept),
                }
            }
        }
    }
}

fn collect_circle_parts(
    mu: &Measure,
    weight: f64,
    densities: &mut Vec<(f64, Density)>,
    atoms: &mut Vec<Atom>,
) -> Result<()> {
    match mu {
        Measure::CircleAc(d) => densities.push((weight, d.clone())),
        Measure::CircleAtoms(list) => {
            atoms.extend(list.iter().map(|a| Atom::new(a.theta, a.mass * weight)));
        }
        Measure::ShiftedCircle { center, radius } if center.norm() == 0.0 && *radius == 1.0 => {
            densities.push((weight, Density::Constant(1.0)));
        }
        Measure::Mixture(parts) => {
            for (w, m) in parts {
                collect_circle_parts(m, weight * w, densities, atoms)?;
            }
        }
        other => {
            return Err(MsxError::InvalidMeasure(format!(
                "Lebesgue decomposition needs a measure on the unit circle, got {other:?}"
            )))
        }
    }
    Ok(())
}

/// `C(n, k)` as a float; exact while the value fits in 2⁵³.
pub(crate) fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for t in 0..k {
        match acc.checked_mul((n - t) as u128) {
            Some(v) => acc = v / (t as u128 + 1),
            None => {
                let mut f = 1.0_f64;
                for s in 0..k {
                    f = f * (n - s) as f64 / (s + 1) as f64;
                }
                return f;
            }
        }
    }
    acc as f64
}

fn shifted_circle_moment(center: Complex64, radius: f64, i: usize, j: usize) -> Complex64 {
    if center == Complex64::new(1.0, 0.0) && radius == 1.0 {
        return Complex64::new(binomial(i + j, i), 0.0);
    }
    // z = c + r e^{iθ}; averaging over θ keeps the matching powers of e^{iθ}.
    let mut total = Complex64::new(0.0, 0.0);
    for k in 0..=i.min(j) {
        let coeff = binomial(i, k) * binomial(j, k) * radius.powi(2 * k as i32);
        total += center.powu((i - k) as u32) * center.conj().powu((j - k) as u32) * coeff;
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn example3() -> Measure {
        Measure::Mixture(vec![
            (0.5, Measure::lebesgue()),
            (1.0, Measure::CircleAtoms(vec![Atom::new(0.0, 0.5)])),
        ])
    }

    #[test]
    fn disk_diagonal_moment() {
        let c = Measure::disk_uniform().moment(2, 2).unwrap();
        assert!((c.re - PI / 3.0).abs() < 1e-15);
        assert_eq!(Measure::disk_uniform().moment(1, 2).unwrap().norm(), 0.0);
    }

    #[test]
    fn shifted_circle_gives_pascal_entries() {
        let mu = Measure::ShiftedCircle { center: Complex64::new(1.0, 0.0), radius: 1.0 };
        assert_eq!(mu.moment(1, 2).unwrap().re, 3.0);
        assert_eq!(mu.moment(3, 3).unwrap().re, 20.0);
    }

    #[test]
    fn shifted_circle_general_formula_matches_quadrature() {
        let center = Complex64::new(0.2, -0.1);
        let radius = 0.5;
        let mu = Measure::ShiftedCircle { center, radius };
        for (i, j) in [(0, 0), (2, 1), (1, 3), (4, 4)] {
            let n = 256;
            let q: Complex64 = (0..n)
                .map(|m| {
                    let z = center + Complex64::from_polar(radius, 2.0 * PI * m as f64 / n as f64);
                    z.powu(i as u32) * z.conj().powu(j as u32)
                })
                .sum::<Complex64>()
                / n as f64;
            assert!((mu.moment(i, j).unwrap() - q).norm() < 1e-13, "({i},{j})");
        }
    }

    #[test]
    fn example3_off_diagonal_is_half() {
        let c = example3().moment(0, 1).unwrap();
        assert!((c - Complex64::new(0.5, 0.0)).norm() < 1e-15);
        assert!((example3().moment(2, 2).unwrap().re - 1.0).abs() < 1e-15);
    }

    #[test]
    fn circle_moment_index_convention() {
        // w = 1 + 2 Re(ŵ_1 e^{iθ}) with complex ŵ_1: c_{01} = ŵ_1, c_{10} = conj(ŵ_1)
        let w1 = Complex64::new(0.1, 0.3);
        let d = Density::Trig(TrigPolynomial::new(vec![Complex64::new(1.0, 0.0), w1]).unwrap());
        let mu = Measure::CircleAc(d.clone());
        assert_eq!(mu.moment(0, 1).unwrap(), w1);
        assert_eq!(mu.moment(1, 0).unwrap(), w1.conj());
        // quadrature of ∫ z^0 z̄^1 w dθ/2π
        let q = adaptive_fourier_coefficient(&|t| d.eval(t), 1, true).unwrap();
        assert!((q - w1).norm() < 1e-13);
    }

    #[test]
    fn split_of_example3() {
        let (ac, sing) = example3().ac_singular_split().unwrap();
        match ac {
            Measure::CircleAc(d) => assert!((d.eval(0.7) - 0.5).abs() < 1e-15),
            other => panic!("unexpected {other:?}"),
        }
        match sing {
            Measure::CircleAtoms(atoms) => assert_eq!(atoms, vec![Atom::new(0.0, 0.5)]),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn split_of_pure_parts() {
        let (ac, sing) = Measure::lebesgue().ac_singular_split().unwrap();
        assert!(!ac.is_zero());
        assert!(sing.is_zero());
        let atoms = Measure::CircleAtoms(vec![Atom::new(1.0, 1.0), Atom::new(2.0, 0.5)]);
        let (ac, sing) = atoms.ac_singular_split().unwrap();
        assert!(ac.is_zero());
        assert!(!sing.is_zero());
    }

    #[test]
    fn split_rejects_disk_measures() {
        assert!(Measure::disk_uniform().ac_singular_split().is_err());
    }

    #[test]
    fn restriction_to_circle() {
        assert!(Measure::disk_uniform().circle_restriction().is_zero());
        let mixed = Measure::Mixture(vec![
            (1.0, Measure::disk_uniform()),
            (1.0, Measure::CircleAc(Density::two_plus_cos())),
        ]);
        match mixed.circle_restriction() {
            Measure::CircleAc(d) => assert!((d.eval(0.0) - 3.0).abs() < 1e-15),
            other => panic!("unexpected {other:?}"),
        }
        let r = example3().circle_restriction();
        for (i, j) in [(0, 0), (0, 3), (2, 5)] {
            assert_eq!(r.moment(i, j).unwrap(), example3().moment(i, j).unwrap());
        }
    }

    #[test]
    fn validation_catches_bad_parameters() {
        assert!(Measure::CircleAtoms(vec![Atom::new(0.0, -1.0)]).validate().is_err());
        assert!(Measure::DiskUniform { mass: 0.0 }.validate().is_err());
        assert!(Measure::Mixture(vec![(0.0, Measure::lebesgue())]).validate().is_err());
        assert!(example3().validate().is_ok());
    }

    #[test]
    fn binomial_small_values() {
        assert_eq!(binomial(10, 3), 120.0);
        assert_eq!(binomial(40, 20), 137846528820.0);
        assert_eq!(binomial(3, 5), 0.0);
    }
}
