//! Ground-state constants: `||grad W||^2 = 8 pi`, the best constant
//! `C = 1 / (2 sqrt(8 pi))` of `|integral u . (u_x x u_y)| <= C ||grad u||^3`,
//! and `f(lambda) = lambda^2 / 2 - (2/3) C lambda^3`, whose maximum
//! `f(sqrt(8 pi)) = 4 pi / 3` is the ground-state energy.

use std::f64::consts::PI;

use serde::Serialize;

use super::quadrature::{MapIntegrals, PolarQuadrature};
use super::stereo::RationalMapSpec;
use crate::error::{Error, Result};

/// `||grad W||_{L^2} = sqrt(8 pi)`
pub fn ground_state_gradient_norm() -> f64 {
    (8.0 * PI).sqrt()
}

/// `E(W, 0) = 4 pi / 3`
pub const GROUND_STATE_ENERGY: f64 = 4.0 * PI / 3.0;

pub fn sobolev_constant() -> f64 {
    1.0 / (2.0 * ground_state_gradient_norm())
}

pub fn f_lambda(lambda: f64) -> Result<f64> {
    if !(lambda >= 0.0) {
        return Err(Error::InvalidArgument(format!("f is defined for lambda >= 0, got {lambda}")));
    }
    Ok(0.5 * lambda * lambda - 2.0 / 3.0 * sobolev_constant() * lambda.powi(3))
}

/// `f` at `lambda = sqrt(8 pi)` computed as `4 pi - (2/3)(8 pi)^{3/2} / (2 sqrt(8 pi)) = 4 pi - 8 pi / 3`.
pub fn f_at_ground_state() -> f64 {
    let g2 = 8.0 * PI;
    0.5 * g2 - 2.0 / 3.0 * (g2 / 2.0)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ShapeCheck {
    pub points: usize,
    pub increasing_below: bool,
    pub decreasing_above: bool,
}

/// Samples `f` on `points` equispaced points of `(0, lambda_max]` and checks
/// strict monotonicity on either side of `sqrt(8 pi)`.
pub fn f_shape_check(points: usize, lambda_max: f64) -> ShapeCheck {
    let peak = ground_state_gradient_norm();
    let xs: Vec<f64> = (1..=points).map(|k| lambda_max * k as f64 / points as f64).collect();
    let f = |x: f64| f_lambda(x).expect("nonnegative");
    let mut inc = true;
    let mut dec = true;
    for w in xs.windows(2) {
        let (a, b) = (w[0], w[1]);
        if b <= peak && f(b) <= f(a) {
            inc = false;
        }
        if a >= peak && f(b) >= f(a) {
            dec = false;
        }
    }
    ShapeCheck { points, increasing_below: inc, decreasing_above: dec }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TrapSide {
    Below,
    Above,
    /// Inside the forbidden band around `sqrt(8 pi)`; impossible for exact
    /// integrals, so this signals a discretization inconsistency
    InGap,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GapReport {
    pub delta: f64,
    /// `sqrt(8 pi) - lambda_-` with `f(lambda_-) = (1 - delta) E(W)` on the increasing branch
    pub delta_bar_below: f64,
    /// `lambda_+ - sqrt(8 pi)` on the decreasing branch
    pub delta_bar_above: f64,
    pub delta_bar: f64,
    pub gradient_norm: f64,
    pub stationary_energy: f64,
    pub side: TrapSide,
}

fn bisect(mut lo: f64, mut hi: f64, target: f64, increasing: bool) -> f64 {
    let f = |x: f64| f_lambda(x).expect("nonnegative");
    while hi - lo > 1e-13 * hi.max(1.0) {
        let mid = 0.5 * (lo + hi);
        if (f(mid) < target) == increasing {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Branch offsets `delta_bar` for `f(sqrt(8 pi) -+ delta_bar) = (1 - delta) E(W)`.
pub fn delta_bar(delta: f64) -> Result<(f64, f64)> {
    if !(delta > 0.0 && delta <= 1.0) {
        return Err(Error::InvalidArgument(format!("delta {delta} outside (0, 1]")));
    }
    let peak = ground_state_gradient_norm();
    let target = (1.0 - delta) * GROUND_STATE_ENERGY;
    let below = bisect(0.0, peak, target, true);
    // f(lambda) = -infinity as lambda -> infinity; f(3 peak / 2 * 2) < 0
    let above = bisect(peak, 3.0 * peak, target, false);
    Ok((peak - below, above - peak))
}

/// Classifies `||grad u||` relative to the trap given `E(u) <= (1 - delta) E(W)`.
pub fn gap_check(gradient_norm: f64, stationary_energy: f64, delta: f64) -> Result<GapReport> {
    if stationary_energy > (1.0 - delta) * GROUND_STATE_ENERGY {
        return Err(Error::NotApplicable(format!(
            "stationary energy {stationary_energy} exceeds (1 - {delta}) E(W)"
        )));
    }
    let (b, a) = delta_bar(delta)?;
    let peak = ground_state_gradient_norm();
    let side = if gradient_norm < peak - b {
        TrapSide::Below
    } else if gradient_norm > peak + a {
        TrapSide::Above
    } else {
        TrapSide::InGap
    };
    Ok(GapReport {
        delta,
        delta_bar_below: b,
        delta_bar_above: a,
        delta_bar: b.min(a),
        gradient_norm,
        stationary_energy,
        side,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Identity {
    pub measured: f64,
    pub expected: f64,
    pub relative_error: f64,
}

impl Identity {
    fn new(measured: f64, expected: f64) -> Self {
        let relative_error = if expected == 0.0 { measured.abs() } else { (measured - expected).abs() / expected.abs() };
        Self { measured, expected, relative_error }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GroundStateReport {
    pub r_cut: f64,
    pub gradient_sq: Identity,
    pub cubic: Identity,
    pub energy: Identity,
    /// `|cubic| / ||grad W||^3` against `1 / (2 sqrt(8 pi))`
    pub sobolev_constant: Identity,
    pub gradient_tail: f64,
    pub integrals: MapIntegrals,
}

impl GroundStateReport {
    pub fn within(&self, tol: f64) -> bool {
        [self.gradient_sq, self.cubic, self.energy, self.sobolev_constant].iter().all(|i| i.relative_error <= tol)
    }
}

pub fn ground_state_identities(quad: &PolarQuadrature) -> GroundStateReport {
    let m = quad.integrate(&RationalMapSpec::reference());
    GroundStateReport {
        r_cut: quad.r_cut,
        gradient_sq: Identity::new(m.gradient_sq, 8.0 * PI),
        cubic: Identity::new(m.cubic, -4.0 * PI),
        energy: Identity::new(m.stationary_energy, GROUND_STATE_ENERGY),
        sobolev_constant: Identity::new(m.cubic.abs() / m.gradient_sq.powf(1.5), sobolev_constant()),
        gradient_tail: m.gradient_tail,
        integrals: m,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct QuantizationReport {
    pub degree: usize,
    pub measured: f64,
    pub expected: f64,
    pub relative_error: f64,
}

/// `||grad u||^2` of `pi(P/Q) + C` against `8 pi max(deg P, deg Q)`.
pub fn quantization_check(spec: &RationalMapSpec, quad: &PolarQuadrature) -> Result<QuantizationReport> {
    spec.validate()?;
    let degree = spec.degree();
    let measured = quad.integrate(spec).gradient_sq;
    let expected = 8.0 * PI * degree as f64;
    let relative_error = if degree == 0 { measured.abs() } else { (measured - expected).abs() / expected };
    Ok(QuantizationReport { degree, measured, expected, relative_error })
}
