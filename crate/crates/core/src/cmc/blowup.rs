//! Admissible blow-up data `u0 = s Phi, u1 = 0` and the concavity certificate
//! for `y(t) = ||u(t)||^2`.
//!
//! With `E(u(t)) = E0 < E(W)` and `||grad u|| > sqrt(8 pi)`,
//! `y'' = 5 ||u_t||^2 + ||grad u||^2 - 6 E0 >= 5 ||u_t||^2 + 6 eps`, which
//! forces `y' >= c y^{5/4}` after `y'` turns positive and hence a finite
//! blow-up time.

use serde::Serialize;

use super::dynamics::BlowupSeries;
use super::grid::PlaneField3;
use super::sobolev::{ground_state_gradient_norm, GROUND_STATE_ENERGY};
use crate::error::{Error, Result};

/// Relative tolerance of the key inequality.
pub const CERTIFICATE_TOLERANCE: f64 = 1e-3;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DataSearch {
    /// `||grad Phi||^2`
    pub gradient_sq: f64,
    /// `integral Phi . (Phi_x x Phi_y)`
    pub cubic: f64,
    /// Sign of `s` that makes `s^3 cubic` negative
    pub sign: f64,
    /// Smallest `|s|` with `s^2 ||grad Phi||^2 > 8 pi`
    pub gradient_threshold: f64,
    /// Smallest `|s|` beyond the energy maximum with `E(s Phi) < E(W)`
    pub energy_threshold: f64,
    /// Scanned values (signed) that satisfy both strict inequalities
    pub admissible: Vec<f64>,
}

impl DataSearch {
    /// `E(s Phi) = (s^2 / 2) ||grad Phi||^2 + (2 s^3 / 3) integral Phi . (Phi_x x Phi_y)`
    pub fn energy(&self, s: f64) -> f64 {
        0.5 * s * s * self.gradient_sq + 2.0 / 3.0 * s.powi(3) * self.cubic
    }

    pub fn is_admissible(&self, s: f64) -> bool {
        self.energy(s) < GROUND_STATE_ENERGY && s * s * self.gradient_sq > 8.0 * std::f64::consts::PI
    }
}

/// Scans `|s|` over `points` equispaced values of `s_range` (magnitudes) with
/// the sign that makes the cubic term negative.
pub fn data_search(phi: &PlaneField3, s_range: (f64, f64), points: usize) -> Result<DataSearch> {
    let (lo, hi) = s_range;
    if !(lo >= 0.0 && hi > lo && points >= 2) {
        return Err(Error::InvalidArgument(format!("bad scan {s_range:?} x {points}")));
    }
    let gradient_sq = phi.gradient_sq();
    let cubic = phi.cubic();
    if !(cubic.abs() > 1e-12 * gradient_sq.powf(1.5).max(1e-300)) {
        return Err(Error::NotApplicable("profile has vanishing cubic term".into()));
    }
    let sign = -cubic.signum();
    let a = 0.5 * gradient_sq;
    let b = 2.0 / 3.0 * cubic.abs();
    // E(s) = a s^2 - b s^3 along the preferred sign; maximum at 2a / 3b
    let e = |s: f64| a * s * s - b * s.powi(3);
    let peak = 2.0 * a / (3.0 * b);
    let energy_threshold = if e(peak) < GROUND_STATE_ENERGY {
        0.0
    } else {
        let (mut l, mut h) = (peak, 2.0 * peak);
        while e(h) >= GROUND_STATE_ENERGY {
            h *= 2.0;
        }
        while h - l > 1e-14 * h {
            let m = 0.5 * (l + h);
            if e(m) >= GROUND_STATE_ENERGY {
                l = m;
            } else {
                h = m;
            }
        }
        h
    };
    let mut out = DataSearch {
        gradient_sq,
        cubic,
        sign,
        gradient_threshold: ground_state_gradient_norm() / gradient_sq.sqrt(),
        energy_threshold,
        admissible: Vec::new(),
    };
    out.admissible = (0..points)
        .map(|k| sign * (lo + (hi - lo) * k as f64 / (points - 1) as f64))
        .filter(|&s| out.is_admissible(s))
        .collect();
    if out.admissible.is_empty() {
        return Err(Error::NotApplicable(format!("no admissible s in {s_range:?}")));
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Certificate {
    pub epsilon: f64,
    pub samples: usize,
    /// `min (y'' - 5 ||u_t||^2 - 6 eps + tol max(1, |y''|))`; nonnegative when the inequality holds
    pub min_margin: f64,
    pub inequality_holds: bool,
    pub first_failure: Option<f64>,
    /// First sampled time after which `y' > 0` at every sample
    pub t1: Option<f64>,
    /// `min y' / y^{5/4}` over samples at or after `t1`
    pub fit_c: Option<f64>,
    /// `t1 + 4 y(t1)^{-1/4} / c`
    pub blowup_bound: Option<f64>,
    /// `min ||grad u(t)|| - sqrt(8 pi)`
    pub trap_margin: f64,
    /// `max |(y(t+h) - y(t-h)) / 2h - y'(t)|` over interior samples
    pub derivative_mismatch: f64,
    pub overflow: bool,
    pub end_time: f64,
}

impl Certificate {
    /// Every run-level condition of the criterion.
    pub fn verified(&self) -> bool {
        self.inequality_holds && self.t1.is_some() && self.trap_margin > 0.0 && self.overflow
    }
}

pub fn blowup_certificate(series: &BlowupSeries) -> Result<Certificate> {
    let s = &series.samples;
    if s.len() < 10 {
        return Err(Error::SeriesTooShort { got: s.len(), need: 10 });
    }
    let epsilon = match series.epsilon {
        Some(e) if e > 0.0 => e,
        _ => return Err(Error::NotApplicable("energy is not below the ground state".into())),
    };
    let mut min_margin = f64::INFINITY;
    let mut first_failure = None;
    for x in s {
        let m = x.ddy - 5.0 * x.kinetic - 6.0 * epsilon + CERTIFICATE_TOLERANCE * x.ddy.abs().max(1.0);
        min_margin = min_margin.min(m);
        if m < 0.0 && first_failure.is_none() {
            first_failure = Some(x.t);
        }
    }
    let t1_idx = match s.iter().rposition(|x| x.dy <= 0.0) {
        None => Some(0),
        Some(i) if i + 1 < s.len() => Some(i + 1),
        Some(_) => None,
    };
    let t1 = t1_idx.map(|i| s[i].t);
    let fit_c = t1_idx.map(|i| s[i..].iter().map(|x| x.dy / x.y.powf(1.25)).fold(f64::INFINITY, f64::min));
    let blowup_bound = match (t1_idx, fit_c) {
        (Some(i), Some(c)) if c > 0.0 => Some(s[i].t + 4.0 * s[i].y.powf(-0.25) / c),
        _ => None,
    };
    let trap_margin =
        s.iter().map(|x| x.gradient_sq.sqrt()).fold(f64::INFINITY, f64::min) - ground_state_gradient_norm();
    let derivative_mismatch = s
        .windows(3)
        .map(|w| ((w[2].y - w[0].y) / (w[2].t - w[0].t) - w[1].dy).abs())
        .fold(0.0, f64::max);
    Ok(Certificate {
        epsilon,
        samples: s.len(),
        min_margin,
        inequality_holds: first_failure.is_none(),
        first_failure,
        t1,
        fit_c,
        blowup_bound,
        trap_margin,
        derivative_mismatch,
        overflow: series.overflow,
        end_time: s.last().unwrap().t,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cmc::dynamics::{leapfrog_evolve, CmcOptions, CmcState};
    use crate::cmc::grid::PlaneGrid;
    use crate::cmc::map::BumpProfile;

    fn phi() -> PlaneField3 {
        let g = PlaneGrid::new(64, 16.0).unwrap();
        PlaneField3::from_map(&g, &BumpProfile { lambda: 0.5, inner: 1.5, outer: 3.5 })
    }

    #[test]
    fn cubic_formula_matches_direct_integration() {
        let p = phi();
        let d = data_search(&p, (0.0, 3.0), 301).unwrap();
        for s in [0.3, -0.7, 1.1, 1.5, -1.9, 2.2, 0.05, 2.9, -2.5, 1.77] {
            let direct = p.scale(s).stationary_energy();
            assert!((d.energy(s) - direct).abs() < 1e-10 * direct.abs().max(1.0), "{s}");
        }
        for &s in &d.admissible {
            let u = p.scale(s);
            assert!(u.stationary_energy() < GROUND_STATE_ENERGY);
            assert!(u.gradient_sq() > 8.0 * std::f64::consts::PI);
            assert!(s.abs() > d.gradient_threshold && s.abs() > d.energy_threshold);
        }
    }

    #[test]
    fn planar_profile_rejected() {
        let p = phi();
        let mut flat = p.clone();
        flat.c[2] = vec![0.0; p.grid().len()];
        flat.c[1] = vec![0.0; p.grid().len()];
        assert!(matches!(data_search(&flat, (0.0, 3.0), 50), Err(Error::NotApplicable(_))));
    }

    #[test]
    fn stationary_run_declines() {
        let p = phi();
        let s = CmcState::new(p.scale(0.1), PlaneField3::zeros(p.grid())).unwrap();
        let run = leapfrog_evolve(&s, 2.0, 0.25 * p.grid().spacing(), &CmcOptions::default()).unwrap();
        let mut series = run.series.clone();
        series.epsilon = None;
        assert!(matches!(blowup_certificate(&series), Err(Error::NotApplicable(_))));
        series.samples.truncate(5);
        assert!(matches!(blowup_certificate(&series), Err(Error::SeriesTooShort { .. })));
    }
}
