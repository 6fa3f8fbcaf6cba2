//! Fixed-point iteration of the Duhamel map
//!
//! ```text
//! Phi(u)(t) = cos(t w) u0 + sin(t w)/w u1 + integral_0^t sin((t-s) w)/w F(u(s)) ds
//! ```
//!
//! on a uniform time grid. Splitting `sin((t-s)w)` turns the integral into
//! `(sin(tw) C(t) - cos(tw) S(t)) / w` with running trapezoid sums
//! `C(t) = integral cos(sw) F`, `S(t) = integral sin(sw) F`.

use serde::Serialize;

use super::coupling::CouplingSpec;
use super::rhs::forcing_coeffs;
use super::state::SystemState;
use crate::error::{Error, Result};
use crate::sphere::{SphereField, SphereGrid};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PicardParams {
    pub horizon: f64,
    pub dt: f64,
    /// Ball radius in `C^0 H^1 x C^0 L^2`
    pub radius: f64,
    pub means: Vec<f64>,
    pub tolerance: f64,
    pub max_iterations: usize,
    /// Operator norm of the coupling matrix
    pub beta: f64,
}

impl PicardParams {
    /// Radius `3 (||u0||_{H^1} + ||u1||_{L^2})` and the means of `u0`.
    pub fn for_data(state: &SystemState, spec: &CouplingSpec, horizon: f64, dt: f64) -> Self {
        let radius = 3.0 * (state.gradient_norm() + state.velocity_norm());
        Self {
            horizon,
            dt,
            radius,
            means: state.initial_means().to_vec(),
            tolerance: 1e-12,
            max_iterations: 60,
            beta: spec.operator_norm(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct PicardSolution {
    pub trajectory: Vec<SystemState>,
    /// `d_k / d_{k-1}` for successive iterate distances
    pub contraction_ratios: Vec<f64>,
    pub distances: Vec<f64>,
    pub iterations: usize,
}

/// Coefficient trajectory: `[time][component]` for positions and velocities.
struct Iterate {
    u: Vec<Vec<Vec<f64>>>,
    v: Vec<Vec<Vec<f64>>>,
}

fn h1_sq(c: &[f64], lmax: usize) -> f64 {
    (1..=lmax).map(|l| (l * (l + 1)) as f64 * c[l * l..(l + 1) * (l + 1)].iter().map(|x| x * x).sum::<f64>()).sum()
}

fn l2_sq(c: &[f64]) -> f64 {
    c.iter().map(|x| x * x).sum()
}

impl Iterate {
    /// `sup_t ||u||_{H^1} + sup_t ||v||_{L^2}` of `self - other` (or of `self`).
    fn norm(&self, other: Option<&Iterate>, lmax: usize) -> f64 {
        let mut su: f64 = 0.0;
        let mut sv: f64 = 0.0;
        for n in 0..self.u.len() {
            let (mut a, mut b) = (0.0, 0.0);
            for j in 0..self.u[n].len() {
                let du: Vec<f64> = match other {
                    Some(o) => self.u[n][j].iter().zip(&o.u[n][j]).map(|(x, y)| x - y).collect(),
                    None => self.u[n][j].clone(),
                };
                let dv: Vec<f64> = match other {
                    Some(o) => self.v[n][j].iter().zip(&o.v[n][j]).map(|(x, y)| x - y).collect(),
                    None => self.v[n][j].clone(),
                };
                a += h1_sq(&du, lmax);
                b += l2_sq(&dv);
            }
            su = su.max(a.sqrt());
            sv = sv.max(b.sqrt());
        }
        su + sv
    }
}

/// `Phi` applied to a trajectory with forcing samples `forcing[time][component]`.
fn duhamel(u0: &[&[f64]], u1: &[&[f64]], forcing: Option<&[Vec<Vec<f64>>]>, times: &[f64], lmax: usize) -> Iterate {
    let ncomp = u0.len();
    let len = u0[0].len();
    let dt = if times.len() > 1 { times[1] - times[0] } else { 0.0 };
    let mut u = vec![vec![vec![0.0; len]; ncomp]; times.len()];
    let mut v = vec![vec![vec![0.0; len]; ncomp]; times.len()];
    for j in 0..ncomp {
        u.iter_mut().for_each(|un| un[j][0] = u0[j][0]);
        for l in 1..=lmax {
            let w = ((l * (l + 1)) as f64).sqrt();
            for i in l * l..(l + 1) * (l + 1) {
                let (mut c_sum, mut s_sum) = (0.0, 0.0);
                let mut prev = (0.0, 0.0);
                for (n, &t) in times.iter().enumerate() {
                    let (s, c) = (t * w).sin_cos();
                    if let Some(f) = forcing {
                        let fi = f[n][j][i];
                        let cur = (c * fi, s * fi);
                        if n > 0 {
                            c_sum += 0.5 * dt * (prev.0 + cur.0);
                            s_sum += 0.5 * dt * (prev.1 + cur.1);
                        }
                        prev = cur;
                    }
                    u[n][j][i] = c * u0[j][i] + s / w * u1[j][i] + (s * c_sum - c * s_sum) / w;
                    v[n][j][i] = -w * s * u0[j][i] + c * u1[j][i] + c * c_sum + s * s_sum;
                }
            }
        }
    }
    Iterate { u, v }
}

fn forcing_along(it: &Iterate, grid: &std::sync::Arc<SphereGrid>, spec: &CouplingSpec) -> Result<Vec<Vec<Vec<f64>>>> {
    it.u.iter()
        .map(|un| {
            let fields = un.iter().map(|c| SphereField::from_coeffs(grid, c.clone())).collect::<Result<Vec<_>>>()?;
            forcing_coeffs(&fields, spec)
        })
        .collect()
}

/// Iterates the Duhamel map from the linear flow until successive iterates
/// agree within `tolerance * max(1, radius)`.
pub fn picard_solve(initial: &SystemState, spec: &CouplingSpec, params: &PicardParams) -> Result<PicardSolution> {
    if !(params.horizon > 0.0 && params.dt > 0.0) {
        return Err(Error::InvalidArgument("horizon and step must be positive".into()));
    }
    if params.means.len() != initial.components() {
        return Err(Error::InvalidArgument("one mean per component".into()));
    }
    let grid = initial.grid().clone();
    let lmax = grid.lmax();
    let steps = (params.horizon / params.dt - 1e-9).ceil().max(1.0) as usize;
    let h = params.horizon / steps as f64;
    let times: Vec<f64> = (0..=steps).map(|n| n as f64 * h).collect();
    let mut u0: Vec<Vec<f64>> = initial.u.iter().map(|f| f.coeffs().to_vec()).collect();
    for (c, m) in u0.iter_mut().zip(&params.means) {
        c[0] = m * (4.0 * std::f64::consts::PI).sqrt();
    }
    let u0r: Vec<&[f64]> = u0.iter().map(|c| c.as_slice()).collect();
    let u1: Vec<&[f64]> = initial.v.iter().map(|f| f.coeffs()).collect();

    let threshold = params.tolerance * params.radius.max(1.0);
    let ball = params.radius + threshold;
    let mut current = duhamel(&u0r, &u1, None, &times, lmax);
    let mut distances = Vec::new();
    let mut ratios = Vec::new();
    let mut growing = 0;
    let mut iterations = 0;
    loop {
        let f = forcing_along(&current, &grid, spec)?;
        let next = duhamel(&u0r, &u1, Some(&f), &times, lmax);
        iterations += 1;
        let norm = next.norm(None, lmax);
        if norm > ball {
            return Err(Error::LeftBall { radius: params.radius, norm });
        }
        let d = next.norm(Some(&current), lmax);
        if let Some(&prev) = distances.last() {
            let r: f64 = if prev > 0.0 { d / prev } else { 0.0 };
            ratios.push(r);
            growing = if r >= 1.0 { growing + 1 } else { 0 };
            if growing >= 3 {
                return Err(Error::NoContraction { ratios });
            }
        }
        distances.push(d);
        current = next;
        if d < threshold {
            break;
        }
        if iterations >= params.max_iterations {
            return Err(Error::NoContraction { ratios });
        }
    }

    let mut trajectory = Vec::with_capacity(times.len());
    for (n, &t) in times.iter().enumerate() {
        let u = current.u[n].iter().map(|c| SphereField::from_coeffs(&grid, c.clone())).collect::<Result<Vec<_>>>()?;
        let v = current.v[n].iter().map(|c| SphereField::from_coeffs(&grid, c.clone())).collect::<Result<Vec<_>>>()?;
        trajectory.push(initial.advanced(u, v, t));
    }
    Ok(PicardSolution { trajectory, contraction_ratios: ratios, distances, iterations })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liouville::evolve;
    use crate::liouville::MonitorConfig;

    #[test]
    fn linear_problem_converges_in_one_iteration() {
        let g = SphereGrid::new(8).unwrap();
        let s = SystemState::scalar(SphereField::from_fn(&g, |p| p[0] + p[2] * p[1]), SphereField::harmonic(&g, 2, 1))
            .unwrap();
        let spec = CouplingSpec::scalar(0.0);
        let sol = picard_solve(&s, &spec, &PicardParams::for_data(&s, &spec, 1.0, 0.01)).unwrap();
        assert_eq!(sol.iterations, 1);
        let last = sol.trajectory.last().unwrap();
        let y10 = last.u[0].coeffs()[crate::sphere::coeff_index(1, 1)];
        let x0 = s.u[0].coeffs()[crate::sphere::coeff_index(1, 1)];
        assert!((y10 - x0 * 2f64.sqrt().cos()).abs() < 1e-13);
    }

    #[test]
    fn constant_data_constant_trajectory() {
        let g = SphereGrid::new(6).unwrap();
        let s = SystemState::scalar(SphereField::constant(&g, -0.4), SphereField::zeros(&g)).unwrap();
        let spec = CouplingSpec::scalar(1.0);
        let sol = picard_solve(&s, &spec, &PicardParams::for_data(&s, &spec, 0.5, 0.01)).unwrap();
        for st in &sol.trajectory {
            assert!(st.u[0].values().iter().all(|v| (v + 0.4).abs() < 1e-13));
        }
    }

    #[test]
    fn agrees_with_time_stepper_on_small_data() {
        let g = SphereGrid::new(12).unwrap();
        let u = SphereField::from_fn(&g, |p| p[2] + 0.5 * p[0] * p[1]);
        let v = SphereField::from_fn(&g, |p| p[1] - p[0] * p[2]);
        let s0 = SystemState::scalar(u.clone(), v.clone()).unwrap();
        let k = 0.07 / (s0.gradient_norm() + s0.velocity_norm());
        let s = SystemState::scalar(u.scale(k), v.scale(k)).unwrap();
        let spec = CouplingSpec::scalar(1.0);
        let sol = picard_solve(&s, &spec, &PicardParams::for_data(&s, &spec, 0.1, 1e-3)).unwrap();
        assert!(sol.contraction_ratios.iter().all(|r| *r < 1.0));
        let ev = evolve(&s, &spec, 0.1, 1e-3, &MonitorConfig { sample_every: 1, keep_states: true, ..Default::default() })
            .unwrap();
        let mut worst: f64 = 0.0;
        for (a, b) in sol.trajectory.iter().zip(&ev.states) {
            let d: Vec<f64> = a.u[0].coeffs().iter().zip(b.u[0].coeffs()).map(|(x, y)| x - y).collect();
            worst = worst.max(h1_sq(&d, 12).sqrt());
        }
        assert!(worst < 1e-5, "{worst}");
    }

    #[test]
    fn long_horizon_large_data_fails() {
        let g = SphereGrid::new(8).unwrap();
        let s = SystemState::scalar(SphereField::from_fn(&g, |p| 3.0 * p[2]), SphereField::zeros(&g)).unwrap();
        let spec = CouplingSpec::scalar(1.5);
        let r = picard_solve(&s, &spec, &PicardParams::for_data(&s, &spec, 20.0, 0.01));
        assert!(matches!(r, Err(Error::NoContraction { .. }) | Err(Error::LeftBall { .. })));
    }
}
