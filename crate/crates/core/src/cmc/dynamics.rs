//! Wave CMC equation `u_tt = Delta u - 2 u_x x u_y` on the periodic box.
//!
//! The solver advances the spatially discrete Hamiltonian system with
//! energy `(1/2)|v|^2 + (1/2) u.(-Delta_h u) + (2/3) K_h(u)`,
//! `K_h(u) = h^2 sum u . (D_x u x D_y u)`. Its exact gradient
//! `grad K_h = u_x x u_y - D_x(u_y x u) - D_y(u x u_x)` equals
//! `3 u_x x u_y` in the continuum, so the force is
//! `Delta u - (2/3) grad K_h`, a consistent discretization of the equation
//! whose discrete energy Stormer-Verlet conserves to second order.

use serde::Serialize;

use super::grid::{cross_fields, PlaneField3};
use super::sobolev::GROUND_STATE_ENERGY;
use crate::error::{Error, Result};

/// Threshold for `sup |u|` beyond which a run is declared blown up.
pub const OVERFLOW_THRESHOLD: f64 = 1e8;

/// Default step as a fraction of the grid spacing.
pub const DEFAULT_CFL: f64 = 0.25;

/// `Delta u - 2 u_x x u_y`, the direct pointwise form (spectral derivatives).
pub fn cmc_rhs(u: &PlaneField3) -> PlaneField3 {
    let d = u.derivatives();
    let w = cross_fields(&d.ux, &d.uy);
    let mut out = PlaneField3::zeros(u.grid());
    for k in 0..3 {
        out.c[k] = d.lap[k].iter().zip(&w[k]).map(|(l, c)| l - 2.0 * c).collect();
    }
    out
}

/// Force of the discrete Hamiltonian (see the module notes).
pub fn cmc_force(u: &PlaneField3, nonlinear: bool) -> PlaneField3 {
    let d = u.derivatives();
    let mut out = PlaneField3::zeros(u.grid());
    if !nonlinear {
        out.c = d.lap;
        return out;
    }
    let u3 = &u.c;
    let w = cross_fields(&d.ux, &d.uy);
    let a = cross_fields(&d.uy, u3);
    let b = cross_fields(u3, &d.ux);
    let div = PlaneField3::divergence(u.grid(), &a, &b);
    for k in 0..3 {
        out.c[k] = (0..u.grid().len()).map(|p| d.lap[k][p] - 2.0 / 3.0 * (w[k][p] - div[k][p])).collect();
    }
    out
}

#[derive(Clone, Debug)]
pub struct CmcState {
    pub u: PlaneField3,
    pub v: PlaneField3,
    pub t: f64,
    /// Radius outside which the data are constant at `t = 0`; `None` when
    /// the data reach the box edge (genuinely periodic data)
    pub support_radius: Option<f64>,
}

impl CmcState {
    /// Initial data; the support radius is measured on the grid.
    pub fn new(u: PlaneField3, v: PlaneField3) -> Result<Self> {
        if !std::sync::Arc::ptr_eq(u.grid(), v.grid()) {
            return Err(Error::GridMismatch);
        }
        let v_support = (0..v.grid().len())
            .filter(|&p| (0..3).any(|k| v.c[k][p] != 0.0))
            .map(|p| {
                let (x, y) = v.grid().point(p);
                x.hypot(y)
            })
            .fold(0.0, f64::max);
        let r = u.support_radius(0.0).max(v_support);
        let support_radius = (r < u.grid().half_width() - u.grid().spacing()).then_some(r);
        Ok(Self { u, v, t: 0.0, support_radius })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EnergyParts {
    pub kinetic: f64,
    pub gradient: f64,
    pub cubic: f64,
    pub total: f64,
}

/// `E = integral (1/2)(|u_t|^2 + |grad u|^2) + (2/3) u . (u_x x u_y)`.
pub fn cmc_energy(state: &CmcState) -> EnergyParts {
    let kinetic = state.v.l2_sq();
    let gradient = state.u.gradient_sq();
    let cubic = state.u.cubic();
    EnergyParts { kinetic, gradient, cubic, total: 0.5 * (kinetic + gradient) + 2.0 / 3.0 * cubic }
}

/// One sample of `y(t) = ||u||^2` and its first two derivatives.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SeriesSample {
    pub t: f64,
    pub y: f64,
    /// `2 integral u . u_t`
    pub dy: f64,
    /// `integral 2|u_t|^2 - 2|grad u|^2 - 4 u . (u_x x u_y)`
    pub ddy: f64,
    /// `||u_t||^2`
    pub kinetic: f64,
    /// `||grad u||^2`
    pub gradient_sq: f64,
    pub cubic: f64,
    pub energy: f64,
    pub max_abs: f64,
}

impl SeriesSample {
    pub fn of(state: &CmcState) -> Self {
        let e = cmc_energy(state);
        Self {
            t: state.t,
            y: state.u.l2_sq(),
            dy: 2.0 * state.u.dot(&state.v),
            ddy: 2.0 * e.kinetic - 2.0 * e.gradient - 4.0 * e.cubic,
            kinetic: e.kinetic,
            gradient_sq: e.gradient,
            cubic: e.cubic,
            energy: e.total,
            max_abs: state.u.max_abs(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BlowupSeries {
    pub samples: Vec<SeriesSample>,
    pub initial_energy: f64,
    /// `E(W, 0) - E(u0, u1)` when positive
    pub epsilon: Option<f64>,
    pub overflow: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CmcOptions {
    /// Drop the cross-product term (linear wave equation)
    pub nonlinear: bool,
    pub sample_every: usize,
    pub overflow_threshold: f64,
    pub keep_states: bool,
}

impl Default for CmcOptions {
    fn default() -> Self {
        Self { nonlinear: true, sample_every: 1, overflow_threshold: OVERFLOW_THRESHOLD, keep_states: false }
    }
}

#[derive(Clone, Debug)]
pub struct CmcRun {
    pub series: BlowupSeries,
    pub final_state: CmcState,
    pub states: Vec<CmcState>,
    pub steps: usize,
    /// Time of the first state with `sup |u|` above the threshold
    pub overflow_time: Option<f64>,
}

/// Stormer-Verlet (kick-drift-kick) with per-step samples of `y, y', y''`.
pub fn leapfrog_evolve(initial: &CmcState, horizon: f64, dt: f64, options: &CmcOptions) -> Result<CmcRun> {
    let grid = initial.u.grid().clone();
    let limit = 0.5 * grid.spacing();
    if !(dt > 0.0) || dt > limit * (1.0 + 1e-12) {
        return Err(Error::Cfl { dt, limit });
    }
    // leapfrog is stable for dt * omega_max < 2, with omega_max = sqrt(2) pi / h
    let product = dt * grid.max_frequency();
    if product >= 2.0 {
        return Err(Error::StepTooLarge { dt, product });
    }
    if !(horizon > 0.0 && horizon.is_finite()) {
        return Err(Error::InvalidArgument(format!("horizon {horizon}")));
    }
    if let Some(support) = initial.support_radius {
        if support + horizon >= grid.half_width() {
            return Err(Error::SupportWraparound { support, horizon, half_width: grid.half_width() });
        }
    }
    let total = (horizon / dt - 1e-9).ceil().max(1.0) as usize;
    let every = options.sample_every.max(1);
    let mut state = initial.clone();
    let first = SeriesSample::of(&state);
    let initial_energy = first.energy;
    let gap = GROUND_STATE_ENERGY - initial_energy;
    let mut samples = vec![first];
    let mut states = if options.keep_states { vec![state.clone()] } else { Vec::new() };
    let mut acc = cmc_force(&state.u, options.nonlinear);
    let mut overflow_time = None;
    let mut steps = 0;
    while steps < total {
        for k in 0..3 {
            for p in 0..grid.len() {
                state.v.c[k][p] += 0.5 * dt * acc.c[k][p];
                state.u.c[k][p] += dt * state.v.c[k][p];
            }
        }
        acc = cmc_force(&state.u, options.nonlinear);
        for k in 0..3 {
            for p in 0..grid.len() {
                state.v.c[k][p] += 0.5 * dt * acc.c[k][p];
            }
        }
        steps += 1;
        state.t = initial.t + steps as f64 * dt;
        let max_abs = state.u.max_abs();
        let blown = !(max_abs <= options.overflow_threshold);
        if blown {
            overflow_time = Some(state.t);
        }
        if !blown && (steps % every == 0 || steps == total) {
            samples.push(SeriesSample::of(&state));
            if options.keep_states {
                states.push(state.clone());
            }
        }
        if blown {
            break;
        }
    }
    Ok(CmcRun {
        series: BlowupSeries {
            samples,
            initial_energy,
            epsilon: (gap > 0.0).then_some(gap),
            overflow: overflow_time.is_some(),
        },
        final_state: state,
        states,
        steps,
        overflow_time,
    })
}
