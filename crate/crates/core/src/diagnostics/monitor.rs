//! Trend analysis of a recorded run for the blow-up signatures: center of
//! mass approaching the sphere, growth of `mean e^{2u}` and of the gradient
//! norm, and concentration of the measure in a single small cap.

use serde::{Deserialize, Serialize};

use super::record::{DiagnosticsRecord, FLAG_OVERFLOW};
use crate::error::{Error, Result};
use crate::liouville::{CouplingSpec, EquationKind};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MonitorThresholds {
    pub cm_norm: f64,
    /// Growth factor of `mean e^{2u}` over its initial value
    pub mass_growth: f64,
    /// Growth factor of `||grad u||` over its initial value
    pub gradient_growth: f64,
    /// Cap radius of the concentration records; flagged when the ratio reaches `1 - eps`
    pub concentration_eps: f64,
}

impl Default for MonitorThresholds {
    fn default() -> Self {
        Self { cm_norm: 0.95, mass_growth: 10.0, gradient_growth: 10.0, concentration_eps: 0.1 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Trend {
    pub initial: f64,
    pub max: f64,
    /// First time at which the running maximum is attained
    pub t_max: f64,
    pub last: f64,
    /// Least-squares slope against `t`
    pub slope: f64,
}

impl Trend {
    fn of(t: &[f64], y: &[f64]) -> Self {
        let mut max = y[0];
        let mut t_max = t[0];
        for (ti, yi) in t.iter().zip(y) {
            if *yi > max {
                max = *yi;
                t_max = *ti;
            }
        }
        let n = t.len() as f64;
        let tbar = t.iter().sum::<f64>() / n;
        let den: f64 = t.iter().map(|ti| (ti - tbar).powi(2)).sum();
        // measured from y[0] so that a constant series has slope exactly 0
        let num: f64 = t.iter().zip(y).map(|(ti, yi)| (ti - tbar) * (yi - y[0])).sum();
        let slope = if den > 0.0 { num / den } else { 0.0 };
        Self { initial: y[0], max, t_max, last: *y.last().unwrap(), slope }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BlowupFlag {
    CenterOfMass,
    MassGrowth,
    GradientGrowth,
    Concentration,
    Overflow,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BlowupAssessment {
    pub cm: Trend,
    pub mass: Trend,
    pub gradient: Trend,
    pub concentration: Option<Trend>,
    /// Scalar equation at `alpha = 1`, where a single bubble is expected
    pub single_bubble_case: bool,
    pub flags: Vec<BlowupFlag>,
}

impl BlowupAssessment {
    pub fn raised(&self) -> bool {
        !self.flags.is_empty()
    }
}

pub fn blowup_monitor(
    records: &[DiagnosticsRecord],
    spec: &CouplingSpec,
    thresholds: &MonitorThresholds,
) -> Result<BlowupAssessment> {
    if records.is_empty() {
        return Err(Error::InvalidArgument("empty record series".into()));
    }
    let t: Vec<f64> = records.iter().map(|r| r.t).collect();
    let series = |f: &dyn Fn(&DiagnosticsRecord) -> f64| records.iter().map(f).collect::<Vec<_>>();
    let cm = Trend::of(&t, &series(&|r| r.max_cm()));
    let mass = Trend::of(&t, &series(&|r| r.max_mass()));
    let gradient = Trend::of(&t, &series(&|r| r.grad_norm));
    let concentration = records
        .iter()
        .all(|r| r.concentration.is_some())
        .then(|| Trend::of(&t, &series(&|r| r.concentration.unwrap())));

    let mut flags = Vec::new();
    if cm.max >= thresholds.cm_norm {
        flags.push(BlowupFlag::CenterOfMass);
    }
    if mass.max >= thresholds.mass_growth * mass.initial {
        flags.push(BlowupFlag::MassGrowth);
    }
    if gradient.initial > 0.0 && gradient.max >= thresholds.gradient_growth * gradient.initial {
        flags.push(BlowupFlag::GradientGrowth);
    }
    if concentration.is_some_and(|c| c.max >= 1.0 - thresholds.concentration_eps) {
        flags.push(BlowupFlag::Concentration);
    }
    if records.iter().any(|r| r.flags.contains(&FLAG_OVERFLOW)) {
        flags.push(BlowupFlag::Overflow);
    }
    Ok(BlowupAssessment {
        cm,
        mass,
        gradient,
        concentration,
        single_bubble_case: spec.kind() == EquationKind::Scalar && spec.alpha() == 1.0,
        flags,
    })
}
