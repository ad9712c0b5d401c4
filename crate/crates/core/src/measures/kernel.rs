use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use super::Measure;
use crate::error::Result;

type EntryFn = dyn Fn(usize, usize) -> Result<Complex64> + Send + Sync;
type DiagonalFn = dyn Fn(usize) -> Result<Complex64> + Send + Sync;

#[derive(Clone)]
enum Source {
    /// `c_{i,i+d} = g(d)` for `d ≥ 0`; the lower triangle is the conjugate.
    Toeplitz(Arc<DiagonalFn>),
    /// Upper-triangle generator `(i, j) ↦ c_{ij}` for `i ≤ j`.
    General(Arc<EntryFn>),
}

/// Lazy Hermitian map `(i, j) ↦ c_{ij}`.
///
/// Only the upper triangle is ever evaluated and the lower triangle is its
/// conjugate mirror, so Hermitian symmetry holds exactly regardless of how
/// the generator was computed.
#[derive(Clone)]
pub struct MomentKernel {
    source: Source,
    tag: Option<String>,
}

impl fmt::Debug for MomentKernel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MomentKernel")
            .field("toeplitz", &self.is_toeplitz())
            .field("tag", &self.tag)
            .finish()
    }
}

impl MomentKernel {
    pub fn general(f: impl Fn(usize, usize) -> Result<Complex64> + Send + Sync + 'static) -> Self {
        Self { source: Source::General(Arc::new(f)), tag: None }
    }

    /// Real kernel from an infallible entry function.
    pub fn real(f: impl Fn(usize, usize) -> f64 + Send + Sync + 'static) -> Self {
        Self::general(move |i, j| Ok(Complex64::new(f(i, j), 0.0)))
    }

    /// Toeplitz kernel from its upper diagonals `c_{0,d}`.
    pub fn toeplitz(f: impl Fn(usize) -> Result<Complex64> + Send + Sync + 'static) -> Self {
        Self { source: Source::Toeplitz(Arc::new(f)), tag: None }
    }

    pub fn from_measure(mu: Measure) -> Result<Self> {
        mu.validate()?;
        let toeplitz = mu.is_circle_supported();
        let kernel = if toeplitz {
            Self::toeplitz(move |d| mu.moment(0, d))
        } else {
            Self::general(move |i, j| mu.moment(i, j))
        };
        Ok(kernel)
    }

    pub fn with_tag(mut self, tag: impl Into<String>) -> Self {
        self.tag = Some(tag.into());
        self
    }

    pub fn tag(&self) -> Option<&str> {
        self.tag.as_deref()
    }

    pub fn is_toeplitz(&self) -> bool {
        matches!(self.source, Source::Toeplitz(_))
    }

    pub fn entry(&self, i: usize, j: usize) -> Result<Complex64> {
        let (lo, hi, flip) = if i <= j { (i, j, false) } else { (j, i, true) };
        let v = match &self.source {
            Source::Toeplitz(g) => g(hi - lo)?,
            Source::General(f) => f(lo, hi)?,
        };
        Ok(if flip { v.conj() } else { v })
    }

    /// Upper diagonal generator `d ↦ c_{0,d}` for Toeplitz kernels.
    pub(crate) fn toeplitz_diagonal(&self, d: usize) -> Option<Result<Complex64>> {
        match &self.source {
            Source::Toeplitz(g) => Some(g(d)),
            Source::General(_) => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::{Atom, Density};

    #[test]
    fn toeplitz_entries_are_hermitian() {
        let mu = Measure::Mixture(vec![
            (1.0, Measure::CircleAc(Density::two_plus_cos())),
            (1.0, Measure::CircleAtoms(vec![Atom::new(1.0, 0.25)])),
        ]);
        let k = MomentKernel::from_measure(mu).unwrap();
        assert!(k.is_toeplitz());
        for (i, j) in [(0, 3), (5, 2), (4, 4)] {
            assert_eq!(k.entry(i, j).unwrap(), k.entry(j, i).unwrap().conj());
        }
    }

    #[test]
    fn disk_kernel_is_not_toeplitz() {
        let k = MomentKernel::from_measure(Measure::disk_uniform()).unwrap();
        assert!(!k.is_toeplitz());
    }
}
