use serde::Serialize;

use super::concentration::concentration_scan;
use super::functionals::center_of_mass_of;
use crate::error::Result;
use crate::liouville::{energy, CouplingSpec, SystemState};
use crate::sphere::ExpMeasure;

/// Record flag set on the last valid state of a run stopped by the exponential guard.
pub const FLAG_OVERFLOW: &str = "overflow";

/// Monitored quantities of one sampled state of a sphere run.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DiagnosticsRecord {
    pub t: f64,
    pub kinetic: f64,
    pub dirichlet: f64,
    pub mt_term: f64,
    pub energy: f64,
    /// `mean u_j`
    pub means: Vec<f64>,
    /// `mean e^{2u_j}`
    pub masses: Vec<f64>,
    pub cm_norms: Vec<f64>,
    pub grad_norm: f64,
    pub velocity_norm: f64,
    /// Largest cap fraction at the monitored radius, over components
    pub concentration: Option<f64>,
    pub max_2u: f64,
    pub flags: Vec<&'static str>,
}

impl DiagnosticsRecord {
    pub fn measure(state: &SystemState, spec: &CouplingSpec, concentration_eps: Option<f64>) -> Result<Self> {
        let e = energy(state, spec)?;
        let mut masses = Vec::with_capacity(state.components());
        let mut cm_norms = Vec::with_capacity(state.components());
        let mut max_2u = f64::NEG_INFINITY;
        let mut concentration: Option<f64> = None;
        for u in &state.u {
            let m = ExpMeasure::of(u)?;
            masses.push(m.mean());
            cm_norms.push(center_of_mass_of(&m).norm);
            max_2u = max_2u.max(m.max_2u());
            if let Some(eps) = concentration_eps {
                let r = concentration_scan(u, &[eps])?[0].ratio;
                concentration = Some(concentration.map_or(r, |c| c.max(r)));
            }
        }
        Ok(Self {
            t: state.t,
            kinetic: e.kinetic,
            dirichlet: e.dirichlet,
            mt_term: e.mt_term,
            energy: e.total,
            means: state.u.iter().map(|u| u.mean()).collect(),
            masses,
            cm_norms,
            grad_norm: state.gradient_norm(),
            velocity_norm: state.velocity_norm(),
            concentration,
            max_2u,
            flags: Vec::new(),
        })
    }

    /// `||u_t||_{L^2} + ||grad u||_{L^2}`
    pub fn monitored_norm(&self) -> f64 {
        self.velocity_norm + self.grad_norm
    }

    pub fn max_cm(&self) -> f64 {
        self.cm_norms.iter().copied().fold(0.0, f64::max)
    }

    pub fn max_mass(&self) -> f64 {
        self.masses.iter().copied().fold(0.0, f64::max)
    }
}
