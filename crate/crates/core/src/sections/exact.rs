//! Exact rational arithmetic for kernels with rational moments, used to
//! cross-check the floating-point path on small sections.

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Rational = BigRational;

pub fn rational(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Square root of a rational when it is itself rational.
pub fn exact_sqrt(r: &Rational) -> Option<Rational> {
    if r.is_negative() {
        return None;
    }
    let n = r.numer().sqrt();
    let d = r.denom().sqrt();
    (&n * &n == *r.numer() && &d * &d == *r.denom()).then(|| Rational::new(n, d))
}

/// Real symmetric rational kernel.
#[derive(Clone)]
pub struct ExactKernel {
    f: Arc<dyn Fn(usize, usize) -> Rational + Send + Sync>,
}

impl ExactKernel {
    pub fn new(f: impl Fn(usize, usize) -> Rational + Send + Sync + 'static) -> Self {
        Self { f: Arc::new(f) }
    }

    pub fn entry(&self, i: usize, j: usize) -> Rational {
        if i <= j {
            (self.f)(i, j)
        } else {
            (self.f)(j, i)
        }
    }

    pub fn section(&self, n: usize) -> ExactSection {
        let entries = (0..=n).map(|i| (0..=n).map(|j| self.entry(i, j)).collect()).collect();
        ExactSection { entries }
    }
}

/// `M = U D Uᵗ` with `U` unit lower triangular.
#[derive(Debug, Clone)]
pub struct Ldl {
    pub unit_lower: Vec<Vec<Rational>>,
    pub pivots: Vec<Rational>,
}

/// Exact transition matrix in square-root-free form: column `m` is the monic
/// orthogonal polynomial of degree `m` and `b_{m,m}² = 1/d_m`.
#[derive(Debug, Clone)]
pub struct ExactTransition {
    pub monic: Vec<Vec<Rational>>,
    pub leading_sq: Vec<Rational>,
}

impl ExactTransition {
    pub fn order(&self) -> usize {
        self.leading_sq.len() - 1
    }

    /// `b_{k,m}` when `b_{m,m}` is rational.
    pub fn entry(&self, k: usize, m: usize) -> Option<Rational> {
        if k > m {
            return Some(Rational::zero());
        }
        exact_sqrt(&self.leading_sq[m]).map(|lead| &self.monic[k][m] * lead)
    }

    /// `b_{k,m}²` with the sign of `b_{k,m}`, always exact.
    pub fn signed_square(&self, k: usize, m: usize) -> Rational {
        if k > m {
            return Rational::zero();
        }
        let c = &self.monic[k][m];
        let sq = c * c * &self.leading_sq[m];
        if c.is_negative() {
            -sq
        } else {
            sq
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExactSection {
    pub entries: Vec<Vec<Rational>>,
}

impl ExactSection {
    pub fn size(&self) -> usize {
        self.entries.len()
    }

    /// Square-root-free factorisation; `None` when a pivot is not positive.
    pub fn ldl(&self) -> Option<Ldl> {
        let n = self.size();
        let mut u = vec![vec![Rational::zero(); n]; n];
        let mut d: Vec<Rational> = Vec::with_capacity(n);
        for i in 0..n {
            for j in 0..i {
                let mut s = self.entries[i][j].clone();
                for k in 0..j {
                    s -= &u[i][k] * &u[j][k] * &d[k];
                }
                u[i][j] = s / &d[j];
            }
            let mut p = self.entries[i][i].clone();
            for k in 0..i {
                p -= &u[i][k] * &u[i][k] * &d[k];
            }
            if !p.is_positive() {
                return None;
            }
            u[i][i] = Rational::one();
            d.push(p);
        }
        Some(Ldl { unit_lower: u, pivots: d })
    }

    pub fn determinant(&self) -> Option<Rational> {
        self.ldl().map(|f| f.pivots.iter().fold(Rational::one(), |acc, p| acc * p))
    }

    pub fn transition(&self) -> Option<ExactTransition> {
        let f = self.ldl()?;
        let n = self.size();
        // Rows of U⁻¹, built in the same nested order as the float path.
        let mut inv = vec![vec![Rational::zero(); n]; n];
        for m in 0..n {
            inv[m][m] = Rational::one();
            for k in 0..m {
                let mut s = Rational::zero();
                for j in k..m {
                    s += &f.unit_lower[m][j] * &inv[j][k];
                }
                inv[m][k] = -s;
            }
        }
        let monic = (0..n).map(|k| (0..n).map(|m| inv[m][k].clone()).collect()).collect();
        let leading_sq = f.pivots.iter().map(|p| p.recip()).collect();
        Some(ExactTransition { monic, leading_sq })
    }

    /// Gauss–Jordan inverse; `None` when singular.
    pub fn inverse(&self) -> Option<Vec<Vec<Rational>>> {
        let n = self.size();
        let mut a = self.entries.clone();
        let mut inv: Vec<Vec<Rational>> = (0..n)
            .map(|i| (0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }).collect())
            .collect();
        for col in 0..n {
            let pivot_row = (col..n).find(|&r| !a[r][col].is_zero())?;
            a.swap(col, pivot_row);
            inv.swap(col, pivot_row);
            let p = a[col][col].clone();
            for j in 0..n {
                a[col][j] = &a[col][j] / &p;
                inv[col][j] = &inv[col][j] / &p;
            }
            for r in 0..n {
                if r != col && !a[r][col].is_zero() {
                    let factor = a[r][col].clone();
                    for j in 0..n {
                        let t = &factor * &a[col][j];
                        a[r][j] -= t;
                        let t = &factor * &inv[col][j];
                        inv[r][j] -= t;
                    }
                }
            }
        }
        Some(inv)
    }
}

pub fn exact_product(a: &[Vec<Rational>], b: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    let n = a.len();
    let m = b[0].len();
    (0..n)
        .map(|i| {
            (0..m)
                .map(|j| (0..b.len()).fold(Rational::zero(), |acc, k| acc + &a[i][k] * &b[k][j]))
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn binom(n: usize, k: usize) -> i64 {
        (0..k).fold(1i64, |acc, t| acc * (n - t) as i64 / (t as i64 + 1))
    }

    #[test]
    fn pascal_transition_is_signed_binomial() {
        let k = ExactKernel::new(|i, j| rational(binom(i + j, i), 1));
        let t = k.section(6).transition().unwrap();
        for m in 0..=6 {
            for kk in 0..=m {
                let sign = if (m - kk) % 2 == 0 { 1 } else { -1 };
                assert_eq!(t.entry(kk, m).unwrap(), rational(sign * binom(m, kk), 1));
            }
        }
    }

    #[test]
    fn two_by_two_inverse() {
        let s = ExactSection {
            entries: vec![vec![rational(1, 1), rational(1, 2)], vec![rational(1, 2), rational(1, 1)]],
        };
        let inv = s.inverse().unwrap();
        assert_eq!(inv[0][0], rational(4, 3));
        assert_eq!(inv[0][1], rational(-2, 3));
        assert_eq!(s.determinant().unwrap(), rational(3, 4));
    }

    #[test]
    fn singular_section_has_no_ldl() {
        let s = ExactSection { entries: vec![vec![rational(1, 1); 2]; 2] };
        assert!(s.ldl().is_none());
        assert!(s.inverse().is_none());
    }

    #[test]
    fn sqrt_of_rationals() {
        assert_eq!(exact_sqrt(&rational(9, 4)), Some(rational(3, 2)));
        assert_eq!(exact_sqrt(&rational(2, 1)), None);
    }
}
