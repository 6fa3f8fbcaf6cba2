//! The measure `e^{2u} dvol` evaluated on the de-aliasing grid.
//!
//! Values are held shifted by `max(2u)` so that ratios such as
//! `e^{2u} / mean(e^{2u})` never overflow.

use std::f64::consts::PI;
use std::sync::Arc;

use super::field::SphereField;
use super::grid::SphereGrid;
use super::transform::{analyze, resize_coeffs};
use crate::error::{Error, Result};

/// Largest admissible `max(2u)` before the exponential is considered to have overflowed.
pub const EXP_GUARD: f64 = 700.0;

#[derive(Clone, Debug)]
pub struct ExpMeasure {
    fine: Arc<SphereGrid>,
    /// `e^{2u - shift}` on the fine grid
    shifted: Vec<f64>,
    /// `max(2u)` on the fine grid
    shift: f64,
    /// `integral e^{2u - shift}`
    shifted_integral: f64,
    mean_u: f64,
}

impl ExpMeasure {
    pub fn of(u: &SphereField) -> Result<Self> {
        let fine = u.grid().dealias();
        let vals = u.fine_values();
        let shift = vals.iter().fold(f64::NEG_INFINITY, |m, v| m.max(2.0 * v));
        if !shift.is_finite() || shift > EXP_GUARD {
            return Err(Error::AmplitudeOverflow { max2u: shift });
        }
        let shifted: Vec<f64> = vals.iter().map(|v| (2.0 * v - shift).exp()).collect();
        let shifted_integral = fine.integrate(&shifted);
        Ok(Self { fine, shifted, shift, shifted_integral, mean_u: u.mean() })
    }

    pub fn max_2u(&self) -> f64 {
        self.shift
    }

    /// `integral e^{2u}`
    pub fn mass(&self) -> f64 {
        self.shifted_integral * self.shift.exp()
    }

    /// `mean e^{2u}`
    pub fn mean(&self) -> f64 {
        self.mass() / (4.0 * PI)
    }

    /// `log mean e^{2(u - mean u)}`, evaluated without forming `e^{2u}`.
    pub fn log_mean_centered(&self) -> f64 {
        (self.shifted_integral / (4.0 * PI)).ln() + self.shift - 2.0 * self.mean_u
    }

    /// `integral x e^{2u} / integral e^{2u}`
    pub fn center_of_mass(&self) -> [f64; 3] {
        let mut acc = [0.0; 3];
        for (k, s) in self.shifted.iter().enumerate() {
            let w = self.fine.weight(k) * s;
            let p = self.fine.point(k);
            for d in 0..3 {
                acc[d] += w * p[d];
            }
        }
        acc.map(|a| a / self.shifted_integral)
    }

    /// SH coefficients (fine band limit) of the probability density `e^{2u} / integral e^{2u}`.
    pub fn density_coeffs(&self) -> Vec<f64> {
        let rho: Vec<f64> = self.shifted.iter().map(|s| s / self.shifted_integral).collect();
        analyze(&self.fine, &rho).expect("fine-grid values")
    }

    /// Coefficients, truncated to band limit `lmax`, of
    /// `e^{2u} / mean(e^{2u}) - 1`. The mean (l = 0) entry is set to zero,
    /// which it is identically.
    pub fn normalized_excess_coeffs(&self, lmax: usize) -> Vec<f64> {
        let scale = 4.0 * PI / self.shifted_integral;
        let vals: Vec<f64> = self.shifted.iter().map(|s| s * scale - 1.0).collect();
        let mut c = resize_coeffs(&analyze(&self.fine, &vals).expect("fine-grid values"), lmax);
        c[0] = 0.0;
        c
    }

    pub fn fine_grid(&self) -> &Arc<SphereGrid> {
        &self.fine
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zonal_linear_closed_forms() {
        let g = SphereGrid::new(32).unwrap();
        for beta in [0.5f64, 1.0, 2.0] {
            let u = SphereField::from_fn(&g, |p| beta * p[2]);
            let m = ExpMeasure::of(&u).unwrap();
            let mean = (2.0 * beta).sinh() / (2.0 * beta);
            assert!((m.mean() - mean).abs() < 1e-12 * mean);
            assert!((m.log_mean_centered() - mean.ln()).abs() < 1e-12);
            let cm = m.center_of_mass();
            let cm3 = 1.0 / (2.0 * beta).tanh() - 1.0 / (2.0 * beta);
            assert!((cm[2] - cm3).abs() < 1e-12 && cm[0].abs() < 1e-14 && cm[1].abs() < 1e-14);
        }
    }

    #[test]
    fn overflow_guard() {
        let g = SphereGrid::new(4).unwrap();
        let u = SphereField::constant(&g, 400.0);
        assert!(matches!(ExpMeasure::of(&u), Err(Error::AmplitudeOverflow { .. })));
    }

    #[test]
    fn excess_has_zero_mean() {
        let g = SphereGrid::new(8).unwrap();
        let u = SphereField::from_fn(&g, |p| p[0] * p[1] * 3.0 + p[2]);
        let c = ExpMeasure::of(&u).unwrap().normalized_excess_coeffs(8);
        assert_eq!(c[0], 0.0);
        assert_eq!(c.len(), 81);
    }
}
