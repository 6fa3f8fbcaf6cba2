//! Real spherical-harmonic analysis and synthesis on a [`SphereGrid`].
//!
//! Associated-Legendre recurrence in colatitude, FFT in longitude. The
//! real basis is `Y_l0 = lambda_l0`, `Y_lm = sqrt2 lambda_lm cos(m phi)` and
//! `Y_l,-m = sqrt2 lambda_lm sin(m phi)` for `m > 0`.

use std::f64::consts::SQRT_2;

use num_complex::Complex64;

use super::grid::{coeff_index, normalized_legendre, normalized_legendre_dtheta, plm_index, plm_len, SphereGrid};
use crate::error::{Error, Result};

fn check_len(expected: usize, got: usize) -> Result<()> {
    if expected != got {
        return Err(Error::ShapeMismatch { expected, got });
    }
    Ok(())
}

/// Grid values (row-major, ring by ring) to real SH coefficients up to `grid.lmax()`.
pub fn analyze(grid: &SphereGrid, values: &[f64]) -> Result<Vec<f64>> {
    check_len(grid.len(), values.len())?;
    let lmax = grid.lmax();
    let nphi = grid.nphi();
    let mut coeffs = vec![0.0; grid.coeff_len()];
    let mut buf = vec![Complex64::new(0.0, 0.0); nphi];
    for i in 0..grid.ntheta() {
        for (b, v) in buf.iter_mut().zip(&values[i * nphi..(i + 1) * nphi]) {
            *b = Complex64::new(*v, 0.0);
        }
        grid.fft_forward().process(&mut buf);
        let w = grid.ring_weight(i);
        let plm = grid.plm_ring(i);
        for l in 0..=lmax {
            coeffs[coeff_index(l, 0)] += w * plm[plm_index(l, 0)] * buf[0].re;
        }
        for m in 1..=lmax {
            let a = w * SQRT_2 * buf[m].re;
            let b = -w * SQRT_2 * buf[m].im;
            let mi = m as i64;
            for l in m..=lmax {
                let p = plm[plm_index(l, m)];
                coeffs[coeff_index(l, mi)] += p * a;
                coeffs[coeff_index(l, -mi)] += p * b;
            }
        }
    }
    Ok(coeffs)
}

/// Real SH coefficients to grid values. Accepts any band limit up to
/// `grid.lmax()`; missing high-degree coefficients are treated as zero.
pub fn synthesize(grid: &SphereGrid, coeffs: &[f64]) -> Result<Vec<f64>> {
    synthesize_with(grid, coeffs, Synthesis::Value)
}

#[derive(Clone, Copy, PartialEq)]
enum Synthesis {
    Value,
    DTheta,
    /// `(1 / sin theta) d/d phi`
    DPhiOverSin,
}

fn coeff_band_limit(grid: &SphereGrid, len: usize) -> Result<usize> {
    let l = (len as f64).sqrt().round() as usize;
    if l == 0 || l * l != len || l - 1 > grid.lmax() {
        return Err(Error::ShapeMismatch { expected: grid.coeff_len(), got: len });
    }
    Ok(l - 1)
}

fn synthesize_with(grid: &SphereGrid, coeffs: &[f64], kind: Synthesis) -> Result<Vec<f64>> {
    let lmax = coeff_band_limit(grid, coeffs.len())?;
    let nphi = grid.nphi();
    let mut values = vec![0.0; grid.len()];
    let mut buf = vec![Complex64::new(0.0, 0.0); nphi];
    let mut dplm = if kind == Synthesis::DTheta { vec![0.0; plm_len(grid.lmax())] } else { Vec::new() };
    for i in 0..grid.ntheta() {
        let plm_full = grid.plm_ring(i);
        let table: &[f64] = if kind == Synthesis::DTheta {
            normalized_legendre_dtheta(grid.lmax(), grid.cos_theta()[i], plm_full, &mut dplm);
            &dplm
        } else {
            plm_full
        };
        buf.iter_mut().for_each(|b| *b = Complex64::new(0.0, 0.0));
        for m in 0..=lmax {
            let mut a = 0.0;
            let mut b = 0.0;
            if m == 0 {
                for l in 0..=lmax {
                    a += coeffs[coeff_index(l, 0)] * table[plm_index(l, 0)];
                }
            } else {
                let mi = m as i64;
                for l in m..=lmax {
                    let p = table[plm_index(l, m)];
                    a += coeffs[coeff_index(l, mi)] * p;
                    b += coeffs[coeff_index(l, -mi)] * p;
                }
                a *= SQRT_2;
                b *= SQRT_2;
            }
            if kind == Synthesis::DPhiOverSin {
                // d/dphi (a cos + b sin) = m (b cos - a sin)
                let mf = m as f64 / grid.sin_theta()[i];
                let (na, nb) = (mf * b, -mf * a);
                a = na;
                b = nb;
            }
            buf[m] = Complex64::new(a, -b);
        }
        grid.fft_inverse().process(&mut buf);
        for (v, b) in values[i * nphi..(i + 1) * nphi].iter_mut().zip(&buf) {
            *v = b.re;
        }
    }
    Ok(values)
}

/// Pointwise `|grad u|^2` on the grid, from the coefficients of `u`.
pub fn gradient_norm_sq(grid: &SphereGrid, coeffs: &[f64]) -> Result<Vec<f64>> {
    let dt = synthesize_with(grid, coeffs, Synthesis::DTheta)?;
    let dp = synthesize_with(grid, coeffs, Synthesis::DPhiOverSin)?;
    Ok(dt.iter().zip(&dp).map(|(a, b)| a * a + b * b).collect())
}

/// Evaluate a coefficient vector at a point `x` on the unit sphere.
pub fn evaluate_at(coeffs: &[f64], x: [f64; 3]) -> f64 {
    let lmax = ((coeffs.len() as f64).sqrt().round() as usize).saturating_sub(1);
    let r = (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt();
    let c = (x[2] / r).clamp(-1.0, 1.0);
    let phi = x[1].atan2(x[0]);
    let mut plm = vec![0.0; plm_len(lmax)];
    normalized_legendre(lmax, c, &mut plm);
    let mut total = 0.0;
    for l in 0..=lmax {
        total += coeffs[coeff_index(l, 0)] * plm[plm_index(l, 0)];
    }
    for m in 1..=lmax {
        let (s, co) = (m as f64 * phi).sin_cos();
        let mi = m as i64;
        for l in m..=lmax {
            let p = SQRT_2 * plm[plm_index(l, m)];
            total += p * (coeffs[coeff_index(l, mi)] * co + coeffs[coeff_index(l, -mi)] * s);
        }
    }
    total
}

/// Value of the real harmonic `Y_lm` at `x`.
pub fn real_harmonic(l: usize, m: i64, x: [f64; 3]) -> f64 {
    let mut c = vec![0.0; (l + 1) * (l + 1)];
    c[coeff_index(l, m)] = 1.0;
    evaluate_at(&c, x)
}

/// Zero-pad or truncate a coefficient vector to band limit `lmax`.
pub fn resize_coeffs(coeffs: &[f64], lmax: usize) -> Vec<f64> {
    let n = (lmax + 1) * (lmax + 1);
    let mut out = vec![0.0; n];
    let k = n.min(coeffs.len());
    out[..k].copy_from_slice(&coeffs[..k]);
    out
}
