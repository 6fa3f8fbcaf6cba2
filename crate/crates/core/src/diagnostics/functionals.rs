//! Moser-Trudinger type functionals and the center of mass of `e^{2u} dvol`.

use serde::Serialize;

use crate::error::Result;
use crate::liouville::energy::{gradient_inner, mt_sum};
use crate::liouville::CouplingSpec;
use crate::sphere::{ExpMeasure, SphereField};

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Slack {
    pub mu: f64,
    /// `mu * mean|grad u|^2 - log mean e^{2(u - mean u)}`
    pub value: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MTRecord {
    /// `log mean e^{2(u - mean u)}`, nonnegative by Jensen
    pub log_avg: f64,
    /// `mean |grad u|^2`
    pub dirichlet_avg: f64,
    pub slack: Vec<Slack>,
    /// `S[u] = mean |grad u|^2 + 2 mean u`
    pub s_functional: f64,
}

impl MTRecord {
    pub fn slack_at(&self, mu: f64) -> Option<f64> {
        self.slack.iter().find(|s| s.mu == mu).map(|s| s.value)
    }
}

pub fn mt_record(u: &SphereField, mus: &[f64]) -> Result<MTRecord> {
    let log_avg = ExpMeasure::of(u)?.log_mean_centered();
    let dirichlet_avg = u.dirichlet().average;
    Ok(MTRecord {
        log_avg,
        dirichlet_avg,
        slack: mus.iter().map(|&mu| Slack { mu, value: mu * dirichlet_avg - log_avg }).collect(),
        s_functional: dirichlet_avg + 2.0 * u.mean(),
    })
}

/// `mean sum a^{ij} <grad u_i, grad u_j> - sum M_i log mean e^{2(u_i - mean u_i)}`.
pub fn system_mt_functional(u: &[SphereField], spec: &CouplingSpec) -> Result<f64> {
    let inv = spec.inverse()?;
    let n = spec.components();
    if u.len() != n {
        return Err(crate::Error::InvalidArgument(format!("{} components for N = {n}", u.len())));
    }
    let mut quad = 0.0;
    for i in 0..n {
        for j in 0..n {
            if inv[(i, j)] != 0.0 {
                quad += inv[(i, j)] * gradient_inner(&u[i], &u[j]);
            }
        }
    }
    Ok(quad / u[0].grid().total_weight() - mt_sum(u, spec)?)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CenterOfMass {
    pub vector: [f64; 3],
    pub norm: f64,
}

pub fn center_of_mass(u: &SphereField) -> Result<CenterOfMass> {
    Ok(center_of_mass_of(&ExpMeasure::of(u)?))
}

pub(crate) fn center_of_mass_of(m: &ExpMeasure) -> CenterOfMass {
    let vector = m.center_of_mass();
    let norm = vector.iter().map(|x| x * x).sum::<f64>().sqrt();
    CenterOfMass { vector, norm }
}
