//! Numerical laboratory for two conformally invariant wave equations: the
//! Liouville wave equation (and system) on the round sphere, and the wave
//! constant-mean-curvature equation on the plane.

pub mod cmc;
pub mod diagnostics;
pub mod error;
pub mod liouville;
pub mod sphere;

pub use error::{Error, Result};

/// Crate version, recorded in run summaries.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
