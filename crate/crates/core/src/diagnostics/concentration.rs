//! Fraction of the measure `e^{2u} dvol` inside geodesic balls, maximized
//! over candidate centers.
//!
//! Cap integrals are computed spectrally: the indicator of a cap of radius
//! `eps` is zonal, so by Funk-Hecke its convolution with `Y_lm` is
//! `lambda_l Y_lm` with `lambda_l = 2 pi integral_{cos eps}^1 P_l`. Filtering the
//! density coefficients and synthesizing gives the cap fraction at every
//! node at once.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::sphere::{evaluate_at, synthesize, ExpMeasure, SphereField, SphereGrid};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum CenterId {
    /// Row-major node index on the de-aliasing grid
    Node(usize),
    NorthPole,
    SouthPole,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ConcentrationReport {
    pub center: [f64; 3],
    pub center_id: CenterId,
    pub radius: f64,
    /// `integral_{B(p, eps)} e^{2u} / integral e^{2u}`
    pub ratio: f64,
}

/// `lambda_l / (2 pi) = integral_{cos eps}^1 P_l(t) dt` for `l = 0..=lmax`.
fn cap_moments(lmax: usize, eps: f64) -> Vec<f64> {
    let a = eps.cos();
    // P_0..P_{lmax+1}(a)
    let mut p = vec![1.0, a];
    for k in 1..=lmax {
        let kf = k as f64;
        p.push(((2.0 * kf + 1.0) * a * p[k] - kf * p[k - 1]) / (kf + 1.0));
    }
    (0..=lmax)
        .map(|l| if l == 0 { 1.0 - a } else { (p[l - 1] - p[l + 1]) / (2 * l + 1) as f64 })
        .collect()
}

fn filtered(density: &[f64], lmax: usize, eps: f64) -> Vec<f64> {
    let mom = cap_moments(lmax, eps);
    let mut c = density.to_vec();
    for l in 0..=lmax {
        let lam = 2.0 * PI * mom[l];
        c[l * l..(l + 1) * (l + 1)].iter_mut().for_each(|x| *x *= lam);
    }
    c
}

fn check_radius(eps: f64) -> Result<()> {
    if !(eps > 0.0 && eps <= PI) {
        return Err(Error::InvalidArgument(format!("cap radius {eps} outside (0, pi]")));
    }
    Ok(())
}

/// Cap fraction for a single center `p`.
pub fn cap_fraction(u: &SphereField, p: [f64; 3], eps: f64) -> Result<f64> {
    check_radius(eps)?;
    let m = ExpMeasure::of(u)?;
    let lmax = m.fine_grid().lmax();
    Ok(evaluate_at(&filtered(&m.density_coeffs(), lmax, eps), p).clamp(0.0, 1.0))
}

/// Best center for each radius; candidates are the de-aliasing grid nodes
/// followed by the two poles, ties resolved in favour of the first candidate.
pub fn concentration_scan(u: &SphereField, radii: &[f64]) -> Result<Vec<ConcentrationReport>> {
    radii.iter().try_for_each(|e| check_radius(*e))?;
    let m = ExpMeasure::of(u)?;
    let fine: &SphereGrid = m.fine_grid();
    let lmax = fine.lmax();
    let density = m.density_coeffs();
    radii
        .iter()
        .map(|&eps| {
            let c = filtered(&density, lmax, eps);
            let vals = synthesize(fine, &c)?;
            let mut best = (CenterId::Node(0), fine.point(0), vals[0]);
            for (k, v) in vals.iter().enumerate().skip(1) {
                if *v > best.2 {
                    best = (CenterId::Node(k), fine.point(k), *v);
                }
            }
            for (id, p) in [(CenterId::NorthPole, [0.0, 0.0, 1.0]), (CenterId::SouthPole, [0.0, 0.0, -1.0])] {
                let v = evaluate_at(&c, p);
                if v > best.2 {
                    best = (id, p, v);
                }
            }
            Ok(ConcentrationReport { center: best.1, center_id: best.0, radius: eps, ratio: best.2.clamp(0.0, 1.0) })
        })
        .collect()
}
