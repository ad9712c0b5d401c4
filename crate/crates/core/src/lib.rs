//! Finite sections of Hermitian moment matrices `M = (∫ zⁱ z̄ʲ dμ)`:
//! orthonormal polynomials, smallest eigenvalues, weak limits of the
//! transition and inverse matrices, and closed-form reference values.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod asymptotics;
pub mod catalog;
pub mod error;
pub mod export;
pub mod inverse;
pub mod linalg;
pub mod measures;
pub mod opoly;
pub mod oracles;
pub mod sections;
pub mod spectra;
pub mod verify;

pub use error::{MsxError, Result};
pub use measures::{Atom, Density, Measure, MomentKernel};
pub use opoly::{cholesky_transition, TransitionSection};
pub use sections::{section, HermitianSection};
pub use spectra::{estimate_limit, Extrapolation, LimitConfig, LimitEstimate};
