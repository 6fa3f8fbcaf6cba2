use std::sync::Arc;

use crate::error::{Error, Result};
use crate::sphere::{check_mean_zero, SphereField, SphereGrid, WaveState};

/// `(u, u_t)` for an `N`-component system at time `t`, with the initial
/// means `I_j = mean(u_0j)` that the flow preserves.
#[derive(Clone, Debug)]
pub struct SystemState {
    pub u: Vec<SphereField>,
    pub v: Vec<SphereField>,
    pub t: f64,
    initial_means: Vec<f64>,
}

impl SystemState {
    /// Admissible initial data: every velocity component has zero mean.
    pub fn new(u: Vec<SphereField>, v: Vec<SphereField>) -> Result<Self> {
        if u.is_empty() || u.len() != v.len() {
            return Err(Error::InvalidArgument(format!("{} positions vs {} velocities", u.len(), v.len())));
        }
        let first = &u[0];
        if u.iter().chain(&v).any(|f| !f.same_grid(first)) {
            return Err(Error::GridMismatch);
        }
        for vj in &v {
            check_mean_zero("initial velocity", vj)?;
        }
        let initial_means = u.iter().map(SphereField::mean).collect();
        Ok(Self { u, v, t: 0.0, initial_means })
    }

    pub fn scalar(u: SphereField, v: SphereField) -> Result<Self> {
        Self::new(vec![u], vec![v])
    }

    pub(crate) fn advanced(&self, u: Vec<SphereField>, v: Vec<SphereField>, t: f64) -> Self {
        Self { u, v, t, initial_means: self.initial_means.clone() }
    }

    pub fn grid(&self) -> &Arc<SphereGrid> {
        self.u[0].grid()
    }

    pub fn components(&self) -> usize {
        self.u.len()
    }

    pub fn initial_means(&self) -> &[f64] {
        &self.initial_means
    }

    /// `max_j |mean(u_j) - I_j|`
    pub fn mean_drift(&self) -> f64 {
        self.u.iter().zip(&self.initial_means).map(|(u, i)| (u.mean() - i).abs()).fold(0.0, f64::max)
    }

    /// `(sum_j integral |grad u_j|^2)^(1/2)`
    pub fn gradient_norm(&self) -> f64 {
        self.u.iter().map(|u| u.dirichlet().integral).sum::<f64>().sqrt()
    }

    /// `(sum_j integral u_t,j^2)^(1/2)`
    pub fn velocity_norm(&self) -> f64 {
        self.v.iter().map(SphereField::l2_norm_sq).sum::<f64>().sqrt()
    }

    /// Component `j` as a scalar wave state.
    pub fn component(&self, j: usize) -> WaveState {
        WaveState { u: self.u[j].clone(), v: self.v[j].clone(), t: self.t }
    }
}

impl From<WaveState> for SystemState {
    fn from(w: WaveState) -> Self {
        let mean = w.u.mean();
        Self { u: vec![w.u], v: vec![w.v], t: w.t, initial_means: vec![mean] }
    }
}
