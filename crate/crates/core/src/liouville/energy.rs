use std::f64::consts::PI;

use serde::Serialize;

use super::coupling::{CouplingSpec, EquationKind};
use super::state::SystemState;
use crate::error::Result;
use crate::sphere::{ExpMeasure, SphereField};

/// Conserved energy split into its three pieces; `total = kinetic + dirichlet - mt_term`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EnergyBreakdown {
    pub kinetic: f64,
    pub dirichlet: f64,
    pub mt_term: f64,
    pub total: f64,
}

impl EnergyBreakdown {
    fn new(kinetic: f64, dirichlet: f64, mt_term: f64) -> Self {
        Self { kinetic, dirichlet, mt_term, total: kinetic + dirichlet - mt_term }
    }
}

/// `mean(|u_t|^2 + |grad u|^2) - alpha log mean e^{2(u - mean u)}`.
pub fn scalar_energy(u: &SphereField, v: &SphereField, alpha: f64) -> Result<EnergyBreakdown> {
    let kinetic = v.l2_norm_sq() / (4.0 * PI);
    let dirichlet = u.dirichlet().average;
    let mt = if alpha == 0.0 { 0.0 } else { alpha * ExpMeasure::of(u)?.log_mean_centered() };
    Ok(EnergyBreakdown::new(kinetic, dirichlet, mt))
}

/// `mean sum a^{ij} (u_t,i u_t,j + <grad u_i, grad u_j>) - sum M_i log mean e^{2(u_i - mean u_i)}`.
pub fn system_energy(state: &SystemState, spec: &CouplingSpec) -> Result<EnergyBreakdown> {
    let inv = spec.inverse()?;
    let n = state.components();
    let mut kinetic = 0.0;
    let mut dirichlet = 0.0;
    for i in 0..n {
        for j in 0..n {
            let w = inv[(i, j)];
            if w == 0.0 {
                continue;
            }
            kinetic += w * dot(state.v[i].coeffs(), state.v[j].coeffs());
            dirichlet += w * gradient_inner(&state.u[i], &state.u[j]);
        }
    }
    let mt = mt_sum(&state.u, spec)?;
    Ok(EnergyBreakdown::new(kinetic / (4.0 * PI), dirichlet / (4.0 * PI), mt))
}

/// Dispatches on the equation kind of `spec`.
pub fn energy(state: &SystemState, spec: &CouplingSpec) -> Result<EnergyBreakdown> {
    match spec.kind() {
        EquationKind::Scalar => scalar_energy(&state.u[0], &state.v[0], spec.alpha()),
        EquationKind::System => system_energy(state, spec),
    }
}

pub(crate) fn mt_sum(u: &[SphereField], spec: &CouplingSpec) -> Result<f64> {
    u.iter()
        .zip(spec.masses())
        .filter(|(_, m)| **m != 0.0)
        .map(|(uj, m)| Ok(m * ExpMeasure::of(uj)?.log_mean_centered()))
        .sum()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// `integral <grad u, grad w>` from the coefficients.
pub(crate) fn gradient_inner(u: &SphereField, w: &SphereField) -> f64 {
    let (a, b) = (u.coeffs(), w.coeffs());
    let lmax = u.grid().lmax();
    (1..=lmax)
        .map(|l| (l * (l + 1)) as f64 * dot(&a[l * l..(l + 1) * (l + 1)], &b[l * l..(l + 1) * (l + 1)]))
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sphere::SphereGrid;

    #[test]
    fn zero_state_zero_energy() {
        let g = SphereGrid::new(8).unwrap();
        let s = SystemState::scalar(SphereField::zeros(&g), SphereField::zeros(&g)).unwrap();
        assert!(energy(&s, &CouplingSpec::scalar(1.2)).unwrap().total.abs() < 1e-15);
        let spec = CouplingSpec::system(vec![vec![1.0, 0.1], vec![0.1, 1.0]], vec![0.3, 0.3]).unwrap();
        let z = SystemState::new(vec![SphereField::zeros(&g); 2], vec![SphereField::zeros(&g); 2]).unwrap();
        assert!(energy(&z, &spec).unwrap().total.abs() < 1e-15);
    }

    #[test]
    fn zonal_linear_closed_form() {
        let g = SphereGrid::new(32).unwrap();
        let (alpha, beta) = (0.5, 1.3f64);
        let u = SphereField::from_fn(&g, |p| beta * p[2]);
        let e = scalar_energy(&u, &SphereField::zeros(&g), alpha).unwrap();
        let expect = 2.0 * beta * beta / 3.0 - alpha * ((2.0 * beta).sinh() / (2.0 * beta)).ln();
        assert!((e.total - expect).abs() < 1e-12);
        assert_eq!(e.total, e.kinetic + e.dirichlet - e.mt_term);
    }

    #[test]
    fn one_component_system_energy_is_scaled_scalar_energy() {
        let g = SphereGrid::new(16).unwrap();
        let alpha = 0.7;
        let u = SphereField::from_fn(&g, |p| 0.5 * p[2] + 0.2 * p[0] * p[1]);
        let v = SphereField::from_fn(&g, |p| p[1] - 0.3 * p[0] * p[2]);
        let s = SystemState::scalar(u.clone(), v.clone()).unwrap();
        let n1 = CouplingSpec::system(vec![vec![alpha]], vec![1.0]).unwrap();
        let sys = system_energy(&s, &n1).unwrap();
        let sc = scalar_energy(&u, &v, alpha).unwrap();
        assert!((sys.kinetic * alpha - sc.kinetic).abs() < 1e-14);
        assert!((sys.dirichlet * alpha - sc.dirichlet).abs() < 1e-14);
        assert!((alpha * sys.total - sc.total).abs() < 1e-13);
    }

    #[test]
    fn singular_coupling_rejected() {
        let g = SphereGrid::new(4).unwrap();
        let s = SystemState::scalar(SphereField::zeros(&g), SphereField::zeros(&g)).unwrap();
        let spec = CouplingSpec::system(vec![vec![0.0]], vec![1.0]).unwrap();
        assert!(matches!(system_energy(&s, &spec), Err(crate::Error::SingularCoupling)));
    }
}
