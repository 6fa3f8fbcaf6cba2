//! Variational functionals and blow-up diagnostics on the sphere.

pub mod concentration;
pub mod family;
pub mod functionals;
pub mod monitor;
pub mod record;

pub use concentration::{cap_fraction, concentration_scan, CenterId, ConcentrationReport};
pub use family::{
    bubble, generate_family, mt_sweep, system_floor_sweep, FamilyConfig, FamilyMember, Floor, MemberKind,
    MtSweepReport, SystemFloorReport,
};
pub use functionals::{center_of_mass, mt_record, system_mt_functional, CenterOfMass, MTRecord, Slack};
pub use monitor::{blowup_monitor, BlowupAssessment, BlowupFlag, MonitorThresholds, Trend};
pub use record::{DiagnosticsRecord, FLAG_OVERFLOW};
