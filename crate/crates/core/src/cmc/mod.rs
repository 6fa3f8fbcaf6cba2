//! Wave CMC equation on the plane: closed-form ground states, their
//! variational identities, a periodic pseudospectral solver and the
//! finite-time blow-up certificate.

mod blowup;
mod dynamics;
mod family;
mod grid;
mod map;
mod quadrature;
mod sobolev;
mod stereo;

use std::sync::Arc;

pub use blowup::{blowup_certificate, data_search, Certificate, DataSearch, CERTIFICATE_TOLERANCE};
pub use dynamics::{
    cmc_energy, cmc_force, cmc_rhs, leapfrog_evolve, BlowupSeries, CmcOptions, CmcRun, CmcState, EnergyParts,
    SeriesSample, DEFAULT_CFL, OVERFLOW_THRESHOLD,
};
pub use family::{sobolev_family, sobolev_sweep, SobolevFamilyConfig, SobolevFamilyReport, SobolevMember, SobolevSample};
pub use grid::{Derivatives, PlaneField3, PlaneGrid};
pub use map::{cross, cutoff, dot, smooth_step, BumpProfile, Combination, GaussianSum, GaussianTerm, Jet, PlaneMap};
pub use quadrature::{MapIntegrals, PolarQuadrature};
pub use sobolev::{
    delta_bar, f_at_ground_state, f_lambda, f_shape_check, gap_check, ground_state_gradient_norm,
    ground_state_identities, quantization_check, sobolev_constant, GapReport, GroundStateReport, Identity,
    QuantizationReport, ShapeCheck, TrapSide, GROUND_STATE_ENERGY,
};
pub use stereo::{stereographic, stereographic_ext, RationalMapSpec, NORTH_POLE};

/// Samples `pi(P/Q) + C` on the grid.
pub fn ground_state(spec: &RationalMapSpec, grid: &Arc<PlaneGrid>) -> crate::Result<PlaneField3> {
    spec.validate()?;
    Ok(PlaneField3::from_map(grid, spec))
}
