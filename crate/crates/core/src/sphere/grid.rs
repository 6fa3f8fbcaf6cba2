//! Gauss-Legendre x equispaced-longitude product grid on the unit sphere.
//!
//! For band limit `L` the grid has `L + 1` colatitude rings placed at the
//! Gauss-Legendre nodes in `cos(theta)` and `2L + 2` equispaced longitudes.
//! The product rule integrates every polynomial of degree `<= 2L + 1`
//! restricted to the sphere exactly, which covers all products
//! `Y_lm * Y_l'm'` with `l, l' <= L`.

use std::f64::consts::PI;
use std::fmt;
use std::sync::{Arc, OnceLock};

use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};

/// Number of real coefficients for band limit `lmax`.
pub const fn coeff_len(lmax: usize) -> usize {
    (lmax + 1) * (lmax + 1)
}

/// Position of the real harmonic `Y_lm`, `-l <= m <= l`, in a coefficient vector.
#[inline]
pub fn coeff_index(l: usize, m: i64) -> usize {
    debug_assert!(m.unsigned_abs() as usize <= l);
    ((l * l + l) as i64 + m) as usize
}

/// Position of `(l, m)`, `m >= 0`, in a packed associated-Legendre table.
#[inline]
pub(crate) fn plm_index(l: usize, m: usize) -> usize {
    l * (l + 1) / 2 + m
}

pub(crate) const fn plm_len(lmax: usize) -> usize {
    (lmax + 1) * (lmax + 2) / 2
}

/// Orthonormal associated Legendre functions `lambda_lm(x)` for all
/// `0 <= m <= l <= lmax`, such that `lambda_lm(cos theta) * {1, sqrt2 cos, sqrt2 sin}(m phi)`
/// has unit L2 norm on the sphere. No Condon-Shortley phase.
pub fn normalized_legendre(lmax: usize, x: f64, out: &mut [f64]) {
    debug_assert!(out.len() >= plm_len(lmax));
    let s = (1.0 - x * x).max(0.0).sqrt();
    let mut pmm = 1.0 / (4.0 * PI).sqrt();
    for m in 0..=lmax {
        if m > 0 {
            pmm *= ((2 * m + 1) as f64 / (2 * m) as f64).sqrt() * s;
        }
        out[plm_index(m, m)] = pmm;
        if m == lmax {
            break;
        }
        let mut p_prev = pmm;
        let mut p_curr = ((2 * m + 3) as f64).sqrt() * x * pmm;
        out[plm_index(m + 1, m)] = p_curr;
        for l in (m + 2)..=lmax {
            let lf = l as f64;
            let mf = m as f64;
            let a = ((4.0 * lf * lf - 1.0) / (lf * lf - mf * mf)).sqrt();
            let b = (((lf - 1.0) * (lf - 1.0) - mf * mf) / (4.0 * (lf - 1.0) * (lf - 1.0) - 1.0)).sqrt();
            let p_next = a * (x * p_curr - b * p_prev);
            out[plm_index(l, m)] = p_next;
            p_prev = p_curr;
            p_curr = p_next;
        }
    }
}

/// `d lambda_lm / d theta` from the table of `lambda_lm` at `x = cos theta`, `0 < theta < pi`.
pub(crate) fn normalized_legendre_dtheta(lmax: usize, x: f64, plm: &[f64], out: &mut [f64]) {
    let s = (1.0 - x * x).sqrt();
    for m in 0..=lmax {
        for l in m..=lmax {
            let lf = l as f64;
            let mf = m as f64;
            let own = lf * x * plm[plm_index(l, m)];
            let lower = if l > m {
                ((2.0 * lf + 1.0) * (lf * lf - mf * mf) / (2.0 * lf - 1.0)).sqrt() * plm[plm_index(l - 1, m)]
            } else {
                0.0
            };
            out[plm_index(l, m)] = (own - lower) / s;
        }
    }
}

/// Gauss-Legendre nodes (ascending) and weights on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let half = n.div_ceil(2);
    for i in 0..half {
        // Tricomi initial guess, then Newton on P_n.
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 1..n {
        let kf = k as f64;
        let p2 = ((2.0 * kf + 1.0) * x * p1 - kf * p0) / (kf + 1.0);
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

pub struct SphereGrid {
    lmax: usize,
    cos_theta: Vec<f64>,
    sin_theta: Vec<f64>,
    phi: Vec<f64>,
    ring_weights: Vec<f64>,
    plm: Vec<f64>,
    fft_forward: Arc<dyn Fft<f64>>,
    fft_inverse: Arc<dyn Fft<f64>>,
    dealias: OnceLock<Arc<SphereGrid>>,
}

impl fmt::Debug for SphereGrid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SphereGrid")
            .field("lmax", &self.lmax)
            .field("ntheta", &self.ntheta())
            .field("nphi", &self.nphi())
            .finish()
    }
}

impl SphereGrid {
    pub fn new(lmax: usize) -> Result<Arc<Self>> {
        if lmax < 2 {
            return Err(Error::InvalidBandLimit(lmax));
        }
        Ok(Arc::new(Self::build(lmax)))
    }

    fn build(lmax: usize) -> Self {
        let ntheta = lmax + 1;
        let nphi = 2 * lmax + 2;
        let (x, w) = gauss_legendre(ntheta);
        // Rings ordered from the north pole (x = 1) southwards.
        let cos_theta: Vec<f64> = x.iter().rev().copied().collect();
        let gl_weights: Vec<f64> = w.iter().rev().copied().collect();
        let sin_theta = cos_theta.iter().map(|c| (1.0 - c * c).sqrt()).collect();
        let dphi = 2.0 * PI / nphi as f64;
        let phi = (0..nphi).map(|j| j as f64 * dphi).collect();
        let ring_weights = gl_weights.iter().map(|w| w * dphi).collect();
        let np = plm_len(lmax);
        let mut plm = vec![0.0; ntheta * np];
        for (i, c) in cos_theta.iter().enumerate() {
            normalized_legendre(lmax, *c, &mut plm[i * np..(i + 1) * np]);
        }
        let mut planner = FftPlanner::new();
        let fft_forward = planner.plan_fft_forward(nphi);
        let fft_inverse = planner.plan_fft_inverse(nphi);
        Self {
            lmax,
            cos_theta,
            sin_theta,
            phi,
            ring_weights,
            plm,
            fft_forward,
            fft_inverse,
            dealias: OnceLock::new(),
        }
    }

    pub fn lmax(&self) -> usize {
        self.lmax
    }

    pub fn ntheta(&self) -> usize {
        self.cos_theta.len()
    }

    pub fn nphi(&self) -> usize {
        self.phi.len()
    }

    pub fn len(&self) -> usize {
        self.ntheta() * self.nphi()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn coeff_len(&self) -> usize {
        coeff_len(self.lmax)
    }

    pub fn cos_theta(&self) -> &[f64] {
        &self.cos_theta
    }

    pub fn sin_theta(&self) -> &[f64] {
        &self.sin_theta
    }

    pub fn phi(&self) -> &[f64] {
        &self.phi
    }

    /// Quadrature weight of every node on ring `i`.
    pub fn ring_weight(&self, i: usize) -> f64 {
        self.ring_weights[i]
    }

    /// Weight of node `k` in row-major `(ring, longitude)` order.
    pub fn weight(&self, k: usize) -> f64 {
        self.ring_weights[k / self.nphi()]
    }

    pub fn total_weight(&self) -> f64 {
        self.ring_weights.iter().sum::<f64>() * self.nphi() as f64
    }

    /// Cartesian position of node `k`.
    pub fn point(&self, k: usize) -> [f64; 3] {
        let i = k / self.nphi();
        let j = k % self.nphi();
        let (s, c) = (self.sin_theta[i], self.cos_theta[i]);
        let (sp, cp) = self.phi[j].sin_cos();
        [s * cp, s * sp, c]
    }

    pub fn points(&self) -> Vec<[f64; 3]> {
        (0..self.len()).map(|k| self.point(k)).collect()
    }

    /// Quadrature of grid values: `sum_k w_k f_k`.
    pub fn integrate(&self, values: &[f64]) -> f64 {
        let nphi = self.nphi();
        values
            .chunks_exact(nphi)
            .zip(&self.ring_weights)
            .map(|(ring, w)| w * ring.iter().sum::<f64>())
            .sum()
    }

    /// Average `(1/4pi) * integral`.
    pub fn average(&self, values: &[f64]) -> f64 {
        self.integrate(values) / (4.0 * PI)
    }

    pub(crate) fn plm_ring(&self, i: usize) -> &[f64] {
        let np = plm_len(self.lmax);
        &self.plm[i * np..(i + 1) * np]
    }

    pub(crate) fn fft_forward(&self) -> &dyn Fft<f64> {
        self.fft_forward.as_ref()
    }

    pub(crate) fn fft_inverse(&self) -> &dyn Fft<f64> {
        self.fft_inverse.as_ref()
    }

    /// Grid with twice the band limit, used to evaluate exponential
    /// nonlinearities before truncating back to this band limit.
    pub fn dealias(&self) -> Arc<SphereGrid> {
        self.dealias
            .get_or_init(|| Arc::new(SphereGrid::build(2 * self.lmax)))
            .clone()
    }
}
