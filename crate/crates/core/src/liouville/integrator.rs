//! Trigonometric (Gautschi-type) time stepping.
//!
//! Per mode with frequency `w = sqrt(l(l+1))` and step `h`:
//!
//! ```text
//! u+ = cos(hw) u + sin(hw)/w v + (1 - cos(hw))/w^2 f(u)
//! v+ = -w sin(hw) u + cos(hw) v + tan(hw/2)/w (cos(hw) f(u) + f(u+))
//! ```
//!
//! Both updates are exact when the forcing is constant over the step, the
//! scheme is second order, and the `l = 0` mode is never touched, so the
//! means are carried exactly.

use std::f64::consts::PI;

use serde::Serialize;

use super::coupling::CouplingSpec;
use super::rhs::forcing_coeffs;
use super::state::SystemState;
use crate::diagnostics::{DiagnosticsRecord, FLAG_OVERFLOW};
use crate::error::{Error, Result};
use crate::sphere::{ModeKernel, SphereField};

/// Stepper holding the forcing of the current state between steps.
#[derive(Clone, Debug)]
pub struct Integrator<'a> {
    spec: &'a CouplingSpec,
    kernel: ModeKernel,
    state: SystemState,
    forcing: Vec<Vec<f64>>,
    start: f64,
    steps: usize,
    even: bool,
}

impl<'a> Integrator<'a> {
    pub fn new(state: SystemState, spec: &'a CouplingSpec, dt: f64) -> Result<Self> {
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(Error::InvalidArgument(format!("time step {dt}")));
        }
        let kernel = ModeKernel::new(state.grid().lmax(), dt);
        let product = kernel.max_phase();
        if product >= PI {
            return Err(Error::StepTooLarge { dt, product });
        }
        let forcing = forcing_coeffs(&state.u, spec)?;
        let start = state.t;
        Ok(Self { spec, kernel, state, forcing, start, steps: 0, even: false })
    }

    /// Restricts the flow to even data: odd-degree coefficients are zeroed
    /// after every step. For `alpha > 1` the odd `l = 1` modes of the
    /// linearization about a constant are unstable, so rounding errors in
    /// the odd subspace otherwise grow like `e^{sqrt(2 alpha - 2) t}`.
    pub fn with_even_symmetry(mut self) -> Self {
        self.even = true;
        self
    }

    pub fn state(&self) -> &SystemState {
        &self.state
    }

    pub fn into_state(self) -> SystemState {
        self.state
    }

    pub fn dt(&self) -> f64 {
        self.kernel.dt
    }

    /// Advances one step. On error the held state is left unchanged.
    pub fn step(&mut self) -> Result<()> {
        let k = &self.kernel;
        let grid = self.state.grid().clone();
        let lmax = grid.lmax();
        let n = self.state.components();
        let mut new_u = Vec::with_capacity(n);
        let mut partial_v = Vec::with_capacity(n);
        for j in 0..n {
            let (u, v, f) = (self.state.u[j].coeffs(), self.state.v[j].coeffs(), &self.forcing[j]);
            let mut nu = u.to_vec();
            let mut nv = v.to_vec();
            for l in 1..=lmax {
                if self.even && l % 2 == 1 {
                    nu[l * l..(l + 1) * (l + 1)].iter_mut().for_each(|x| *x = 0.0);
                    nv[l * l..(l + 1) * (l + 1)].iter_mut().for_each(|x| *x = 0.0);
                    continue;
                }
                for i in l * l..(l + 1) * (l + 1) {
                    nu[i] = k.cos[l] * u[i] + k.sinc_dt[l] * v[i] + k.one_minus_cos[l] * f[i];
                    nv[i] = -k.omega_sin[l] * u[i] + k.cos[l] * v[i] + k.half_tan[l] * k.cos[l] * f[i];
                }
            }
            new_u.push(SphereField::from_coeffs(&grid, nu)?);
            partial_v.push(nv);
        }
        let new_f = forcing_coeffs(&new_u, self.spec)?;
        let mut new_v = Vec::with_capacity(n);
        for (mut nv, f) in partial_v.into_iter().zip(&new_f) {
            for l in (1..=lmax).filter(|l| !self.even || l % 2 == 0) {
                for i in l * l..(l + 1) * (l + 1) {
                    nv[i] += k.half_tan[l] * f[i];
                }
            }
            new_v.push(SphereField::from_coeffs(&grid, nv)?);
        }
        self.steps += 1;
        self.state = self.state.advanced(new_u, new_v, self.start + self.steps as f64 * k.dt);
        self.forcing = new_f;
        Ok(())
    }
}

/// One step from `state`.
pub fn step(state: &SystemState, spec: &CouplingSpec, dt: f64) -> Result<SystemState> {
    let mut it = Integrator::new(state.clone(), spec, dt)?;
    it.step()?;
    Ok(it.into_state())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MonitorConfig {
    /// Record every `sample_every` steps (the first and last states are always recorded).
    pub sample_every: usize,
    /// Cap radius for the concentration monitor.
    pub concentration_eps: Option<f64>,
    /// Keep the sampled states alongside the records.
    pub keep_states: bool,
    /// Evolve in the even subspace (see [`Integrator::with_even_symmetry`]).
    pub even_symmetry: bool,
}

impl Default for MonitorConfig {
    fn default() -> Self {
        Self { sample_every: 10, concentration_eps: None, keep_states: false, even_symmetry: false }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OverflowEvent {
    /// Time of the last valid state
    pub t: f64,
    pub max_2u: f64,
}

#[derive(Clone, Debug)]
pub struct Evolution {
    pub records: Vec<DiagnosticsRecord>,
    pub states: Vec<SystemState>,
    pub final_state: SystemState,
    pub overflow: Option<OverflowEvent>,
    pub steps: usize,
}

/// Runs `ceil(horizon / dt)` steps, sampling diagnostics, and stops at the
/// first amplitude overflow with the last valid state.
pub fn evolve(
    state: &SystemState,
    spec: &CouplingSpec,
    horizon: f64,
    dt: f64,
    monitors: &MonitorConfig,
) -> Result<Evolution> {
    if !(horizon > 0.0 && horizon.is_finite()) {
        return Err(Error::InvalidArgument(format!("horizon {horizon}")));
    }
    let every = monitors.sample_every.max(1);
    let total = (horizon / dt - 1e-9).ceil().max(1.0) as usize;
    let mut it = Integrator::new(state.clone(), spec, dt)?;
    if monitors.even_symmetry {
        it = it.with_even_symmetry();
    }
    let mut records = Vec::new();
    let mut states = Vec::new();
    let mut sample = |s: &SystemState, records: &mut Vec<DiagnosticsRecord>| -> Result<()> {
        records.push(DiagnosticsRecord::measure(s, spec, monitors.concentration_eps)?);
        if monitors.keep_states {
            states.push(s.clone());
        }
        Ok(())
    };
    sample(it.state(), &mut records)?;
    let mut overflow = None;
    let mut steps = 0;
    while steps < total {
        match it.step() {
            Ok(()) => steps += 1,
            Err(Error::AmplitudeOverflow { max2u }) => {
                overflow = Some(OverflowEvent { t: it.state().t, max_2u: max2u });
                break;
            }
            Err(e) => return Err(e),
        }
        if steps % every == 0 || steps == total {
            sample(it.state(), &mut records)?;
        }
    }
    if overflow.is_some() {
        let last = records.last().map(|r| r.t);
        if last != Some(it.state().t) {
            sample(it.state(), &mut records)?;
        }
        records.last_mut().expect("initial record").flags.push(FLAG_OVERFLOW);
    }
    Ok(Evolution { records, states, final_state: it.into_state(), overflow, steps })
}
