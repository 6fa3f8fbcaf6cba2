//! Spherical-harmonic pseudospectral engine on the unit sphere.

mod exp;
mod field;
mod grid;
mod propagate;
mod transform;

pub use exp::{ExpMeasure, EXP_GUARD};
pub use field::{Dirichlet, SphereField};
pub use grid::{coeff_index, coeff_len, gauss_legendre, normalized_legendre, SphereGrid};
pub use propagate::{propagate_linear, ModeKernel, WaveState, MEAN_TOLERANCE};
pub use transform::{analyze, evaluate_at, gradient_norm_sq, real_harmonic, resize_coeffs, synthesize};

pub(crate) use propagate::check_mean_zero;
