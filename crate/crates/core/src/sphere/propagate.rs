//! Exact modewise propagation of the linear wave equation
//! `u_tt - Delta_g u = f` on the sphere, with mean-zero forcing.

use std::sync::Arc;

use super::field::SphereField;
use super::grid::SphereGrid;
use crate::error::{Error, Result};

/// Mean tolerance for admissible velocities and forcing samples.
pub const MEAN_TOLERANCE: f64 = 1e-10;

/// `(u, u_t)` at time `t`.
#[derive(Clone, Debug)]
pub struct WaveState {
    pub u: SphereField,
    pub v: SphereField,
    pub t: f64,
}

impl WaveState {
    /// Initial data; the velocity must have zero mean.
    pub fn admissible(u: SphereField, v: SphereField) -> Result<Self> {
        if !u.same_grid(&v) {
            return Err(Error::GridMismatch);
        }
        check_mean_zero("initial velocity", &v)?;
        Ok(Self { u, v, t: 0.0 })
    }

    pub fn grid(&self) -> &Arc<SphereGrid> {
        self.u.grid()
    }

    /// `mean(|u_t|^2 + |grad u|^2)`.
    pub fn linear_energy(&self) -> f64 {
        let g = self.u.grid();
        (self.v.l2_norm_sq() + self.u.dirichlet().integral) / g.total_weight()
    }
}

pub(crate) fn check_mean_zero(what: &'static str, f: &SphereField) -> Result<()> {
    let m = f.mean();
    if m.abs() > MEAN_TOLERANCE {
        return Err(Error::NonzeroMean { what, value: m });
    }
    Ok(())
}

/// Per-degree trigonometric multipliers for a step of length `dt`.
#[derive(Clone, Debug)]
pub struct ModeKernel {
    pub dt: f64,
    /// `cos(dt w)`
    pub cos: Vec<f64>,
    /// `sin(dt w) / w` (equals `dt` at `w = 0`)
    pub sinc_dt: Vec<f64>,
    /// `w sin(dt w)`
    pub omega_sin: Vec<f64>,
    /// `(1 - cos(dt w)) / w^2` (equals `dt^2 / 2` at `w = 0`)
    pub one_minus_cos: Vec<f64>,
    /// `tan(dt w / 2) / w` (equals `dt / 2` at `w = 0`)
    pub half_tan: Vec<f64>,
}

impl ModeKernel {
    pub fn new(lmax: usize, dt: f64) -> Self {
        let mut k = ModeKernel {
            dt,
            cos: Vec::with_capacity(lmax + 1),
            sinc_dt: Vec::with_capacity(lmax + 1),
            omega_sin: Vec::with_capacity(lmax + 1),
            one_minus_cos: Vec::with_capacity(lmax + 1),
            half_tan: Vec::with_capacity(lmax + 1),
        };
        for l in 0..=lmax {
            let w = ((l * (l + 1)) as f64).sqrt();
            if l == 0 {
                k.cos.push(1.0);
                k.sinc_dt.push(dt);
                k.omega_sin.push(0.0);
                k.one_minus_cos.push(0.5 * dt * dt);
                k.half_tan.push(0.5 * dt);
            } else {
                let (s, c) = (dt * w).sin_cos();
                k.cos.push(c);
                k.sinc_dt.push(s / w);
                k.omega_sin.push(w * s);
                // 1 - cos = 2 sin^2(x/2), stable for small x
                let h = (0.5 * dt * w).sin();
                k.one_minus_cos.push(2.0 * h * h / (w * w));
                k.half_tan.push((0.5 * dt * w).tan() / w);
            }
        }
        k
    }

    /// Largest `dt * w` over the resolved degrees.
    pub fn max_phase(&self) -> f64 {
        let l = self.cos.len() - 1;
        self.dt * ((l * (l + 1)) as f64).sqrt()
    }
}

/// Advances `state` by `dt` with the propagators `cos(dt sqrt(-Delta))` and
/// `sin(dt sqrt(-Delta)) / sqrt(-Delta)`, plus the Duhamel integral of a
/// forcing held at its midpoint sample `forcing_mid` over the step.
/// The `l = 0` coefficient of `u` is carried unchanged.
pub fn propagate_linear(state: &WaveState, forcing_mid: Option<&SphereField>, dt: f64) -> Result<WaveState> {
    if !(dt.is_finite()) {
        return Err(Error::InvalidArgument(format!("time step {dt}")));
    }
    check_mean_zero("velocity", &state.v)?;
    if let Some(f) = forcing_mid {
        if !f.same_grid(&state.u) {
            return Err(Error::GridMismatch);
        }
        check_mean_zero("forcing", f)?;
    }
    let grid = state.grid();
    let kernel = ModeKernel::new(grid.lmax(), dt);
    let (u, v) = apply_kernel(
        &kernel,
        state.u.coeffs(),
        state.v.coeffs(),
        forcing_mid.map(|f| f.coeffs()),
    );
    Ok(WaveState {
        u: SphereField::from_coeffs(grid, u)?,
        v: SphereField::from_coeffs(grid, v)?,
        t: state.t + dt,
    })
}

pub(crate) fn apply_kernel(kernel: &ModeKernel, u: &[f64], v: &[f64], f: Option<&[f64]>) -> (Vec<f64>, Vec<f64>) {
    let mut nu = u.to_vec();
    let mut nv = v.to_vec();
    let lmax = kernel.cos.len() - 1;
    for l in 1..=lmax {
        let (c, sd, ws, omc) = (kernel.cos[l], kernel.sinc_dt[l], kernel.omega_sin[l], kernel.one_minus_cos[l]);
        for k in l * l..(l + 1) * (l + 1) {
            let (a, b) = (u[k], v[k]);
            let fk = f.map_or(0.0, |f| f[k]);
            nu[k] = c * a + sd * b + omc * fk;
            nv[k] = -ws * a + c * b + sd * fk;
        }
    }
    (nu, nv)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid() -> Arc<SphereGrid> {
        SphereGrid::new(8).unwrap()
    }

    #[test]
    fn single_mode_cosine() {
        let g = grid();
        let y10 = SphereField::harmonic(&g, 1, 0);
        let s = WaveState::admissible(y10.clone(), SphereField::zeros(&g)).unwrap();
        let t = 3.7;
        let out = propagate_linear(&s, None, t).unwrap();
        let expect = (2f64.sqrt() * t).cos();
        for (a, b) in out.u.values().iter().zip(y10.values()) {
            assert!((a - expect * b).abs() < 1e-13);
        }
    }

    #[test]
    fn single_mode_sine_from_velocity() {
        let g = grid();
        let y21 = SphereField::harmonic(&g, 2, 1);
        let s = WaveState::admissible(SphereField::zeros(&g), y21.clone()).unwrap();
        let t = 1.3;
        let out = propagate_linear(&s, None, t).unwrap();
        let w = 6f64.sqrt();
        for (a, b) in out.u.values().iter().zip(y21.values()) {
            assert!((a - (w * t).sin() / w * b).abs() < 1e-13);
        }
    }

    #[test]
    fn constant_is_stationary() {
        let g = grid();
        let s = WaveState::admissible(SphereField::constant(&g, 0.8), SphereField::zeros(&g)).unwrap();
        let out = propagate_linear(&s, None, 5.0).unwrap();
        assert!(out.u.values().iter().all(|v| (v - 0.8).abs() < 1e-14));
        assert_eq!(out.u.mean(), s.u.mean());
    }

    #[test]
    fn rejects_forcing_with_mean() {
        let g = grid();
        let s = WaveState::admissible(SphereField::zeros(&g), SphereField::zeros(&g)).unwrap();
        let f = SphereField::constant(&g, 1e-6);
        assert!(matches!(propagate_linear(&s, Some(&f), 0.1), Err(Error::NonzeroMean { .. })));
        assert!(WaveState::admissible(SphereField::zeros(&g), SphereField::constant(&g, 1.0)).is_err());
    }

    #[test]
    fn constant_forcing_is_exact() {
        // u_tt + 2u = Y10 from rest: u = (1 - cos(sqrt2 t)) / 2 * Y10
        let g = grid();
        let y10 = SphereField::harmonic(&g, 1, 0);
        let s = WaveState::admissible(SphereField::zeros(&g), SphereField::zeros(&g)).unwrap();
        let t = 0.9;
        let out = propagate_linear(&s, Some(&y10), t).unwrap();
        let expect = (1.0 - (2f64.sqrt() * t).cos()) / 2.0;
        let got = out.u.coeffs()[crate::sphere::grid::coeff_index(1, 0)];
        assert!((got - expect).abs() < 1e-14);
    }
}
