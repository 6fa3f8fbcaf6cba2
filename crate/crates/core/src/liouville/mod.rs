//! Scalar Liouville wave equation and Liouville systems on the sphere.

pub mod coupling;
pub mod energy;
pub mod integrator;
pub mod parity;
pub mod picard;
pub mod rhs;
pub mod state;

pub use coupling::{lambda_report, CouplingSpec, EquationKind, Feasibility, LambdaReport, SubsetValue};
pub use energy::{energy, scalar_energy, system_energy, EnergyBreakdown};
pub use integrator::{evolve, step, Evolution, Integrator, MonitorConfig, OverflowEvent};
pub use parity::{even_symmetrize, is_even, odd_mass};
pub use picard::{picard_solve, PicardParams, PicardSolution};
pub use rhs::{rhs_scalar, rhs_system};
pub use state::SystemState;
