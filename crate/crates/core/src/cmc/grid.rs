//! Periodic box `[-L/2, L/2)^2` with `n x n` nodes, Fourier-spectral
//! derivatives, and a fourth-order finite-difference path for cross-checks.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use super::map::{cross, cutoff, PlaneMap};
use crate::error::{Error, Result};

pub struct PlaneGrid {
    n: usize,
    length: f64,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    /// Angular wavenumbers in FFT order
    k: Vec<f64>,
}

impl fmt::Debug for PlaneGrid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PlaneGrid").field("n", &self.n).field("length", &self.length).finish()
    }
}

impl PlaneGrid {
    pub fn new(n: usize, length: f64) -> Result<Arc<Self>> {
        if n < 16 || n % 2 != 0 {
            return Err(Error::InvalidArgument(format!("grid size {n} must be even and at least 16")));
        }
        if !(length > 0.0 && length.is_finite()) {
            return Err(Error::InvalidArgument(format!("box length {length}")));
        }
        let mut planner = FftPlanner::new();
        let k = (0..n)
            .map(|i| {
                let m = if i <= n / 2 { i as f64 } else { i as f64 - n as f64 };
                2.0 * PI * m / length
            })
            .collect();
        Ok(Arc::new(Self { n, length, forward: planner.plan_fft_forward(n), inverse: planner.plan_fft_inverse(n), k }))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn half_width(&self) -> f64 {
        0.5 * self.length
    }

    pub fn spacing(&self) -> f64 {
        self.length / self.n as f64
    }

    pub fn len(&self) -> usize {
        self.n * self.n
    }

    /// Largest frequency `|k|` of the spectral Laplacian, `sqrt(2) pi / h`.
    pub fn max_frequency(&self) -> f64 {
        std::f64::consts::SQRT_2 * std::f64::consts::PI / self.spacing()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn coord(&self, i: usize) -> f64 {
        -0.5 * self.length + i as f64 * self.spacing()
    }

    /// `(x, y)` of node `idx = j n + i`.
    pub fn point(&self, idx: usize) -> (f64, f64) {
        (self.coord(idx % self.n), self.coord(idx / self.n))
    }

    /// `h^2 sum f`
    pub fn integrate(&self, f: &[f64]) -> f64 {
        let h = self.spacing();
        h * h * f.iter().sum::<f64>()
    }

    fn transpose(&self, a: &mut [Complex64]) {
        let n = self.n;
        for j in 0..n {
            for i in j + 1..n {
                a.swap(j * n + i, i * n + j);
            }
        }
    }

    fn fft2_in_place(&self, a: &mut [Complex64], plan: &Arc<dyn Fft<f64>>) {
        plan.process(a);
        self.transpose(a);
        plan.process(a);
        self.transpose(a);
    }

    pub fn fft2(&self, f: &[f64]) -> Vec<Complex64> {
        let mut a: Vec<Complex64> = f.iter().map(|x| Complex64::new(*x, 0.0)).collect();
        self.fft2_in_place(&mut a, &self.forward);
        a
    }

    /// Real part of the normalized inverse transform.
    pub fn ifft2(&self, mut a: Vec<Complex64>) -> Vec<f64> {
        self.fft2_in_place(&mut a, &self.inverse);
        let s = 1.0 / (self.n * self.n) as f64;
        a.iter().map(|c| c.re * s).collect()
    }

    /// Two real fields through one complex transform: `(F(a), F(b))`.
    fn fft2_pair(&self, a: &[f64], b: &[f64]) -> (Vec<Complex64>, Vec<Complex64>) {
        let mut z: Vec<Complex64> = a.iter().zip(b).map(|(x, y)| Complex64::new(*x, *y)).collect();
        self.fft2_in_place(&mut z, &self.forward);
        let n = self.n;
        let mut fa = vec![Complex64::new(0.0, 0.0); z.len()];
        let mut fb = vec![Complex64::new(0.0, 0.0); z.len()];
        for j in 0..n {
            for i in 0..n {
                let m = ((n - j) % n) * n + (n - i) % n;
                let (p, q) = (z[j * n + i], z[m].conj());
                fa[j * n + i] = 0.5 * (p + q);
                fb[j * n + i] = Complex64::new(0.0, -0.5) * (p - q);
            }
        }
        (fa, fb)
    }

    /// `i k_x`, with the Nyquist column zeroed so the operator is antisymmetric.
    fn ikx(&self, idx: usize) -> Complex64 {
        let i = idx % self.n;
        if i == self.n / 2 { Complex64::new(0.0, 0.0) } else { Complex64::new(0.0, self.k[i]) }
    }

    fn iky(&self, idx: usize) -> Complex64 {
        let j = idx / self.n;
        if j == self.n / 2 { Complex64::new(0.0, 0.0) } else { Complex64::new(0.0, self.k[j]) }
    }

    fn k2(&self, idx: usize) -> f64 {
        let (i, j) = (idx % self.n, idx / self.n);
        self.k[i] * self.k[i] + self.k[j] * self.k[j]
    }
}

type Vec3 = [Vec<f64>; 3];

/// A map from the box to `R^3`, stored as three component arrays.
#[derive(Clone, Debug)]
pub struct PlaneField3 {
    grid: Arc<PlaneGrid>,
    pub c: Vec3,
}

/// Spectral first derivatives and Laplacian of a field.
#[derive(Clone, Debug)]
pub struct Derivatives {
    pub ux: Vec3,
    pub uy: Vec3,
    pub lap: Vec3,
}

fn zeros3(len: usize) -> Vec3 {
    [vec![0.0; len], vec![0.0; len], vec![0.0; len]]
}

pub(crate) fn cross_fields(a: &Vec3, b: &Vec3) -> Vec3 {
    let len = a[0].len();
    let mut out = zeros3(len);
    for p in 0..len {
        let c = cross([a[0][p], a[1][p], a[2][p]], [b[0][p], b[1][p], b[2][p]]);
        for k in 0..3 {
            out[k][p] = c[k];
        }
    }
    out
}

impl PlaneField3 {
    pub fn zeros(grid: &Arc<PlaneGrid>) -> Self {
        Self { grid: grid.clone(), c: zeros3(grid.len()) }
    }

    pub fn constant(grid: &Arc<PlaneGrid>, v: [f64; 3]) -> Self {
        Self { grid: grid.clone(), c: [vec![v[0]; grid.len()], vec![v[1]; grid.len()], vec![v[2]; grid.len()]] }
    }

    pub fn from_components(grid: &Arc<PlaneGrid>, c: Vec3) -> Result<Self> {
        if c.iter().any(|x| x.len() != grid.len()) {
            return Err(Error::ShapeMismatch { expected: grid.len(), got: c.iter().map(Vec::len).find(|l| *l != grid.len()).unwrap() });
        }
        if c.iter().flatten().any(|x| !x.is_finite()) {
            return Err(Error::InvalidArgument("non-finite field value".into()));
        }
        Ok(Self { grid: grid.clone(), c })
    }

    pub fn from_fn(grid: &Arc<PlaneGrid>, f: impl Fn(f64, f64) -> [f64; 3]) -> Self {
        let mut c = zeros3(grid.len());
        for p in 0..grid.len() {
            let (x, y) = grid.point(p);
            let v = f(x, y);
            for k in 0..3 {
                c[k][p] = v[k];
            }
        }
        Self { grid: grid.clone(), c }
    }

    pub fn from_map(grid: &Arc<PlaneGrid>, map: &dyn PlaneMap) -> Self {
        Self::from_fn(grid, |x, y| map.value(x, y))
    }

    pub fn grid(&self) -> &Arc<PlaneGrid> {
        &self.grid
    }

    pub fn at(&self, p: usize) -> [f64; 3] {
        [self.c[0][p], self.c[1][p], self.c[2][p]]
    }

    pub fn scale(&self, s: f64) -> Self {
        Self { grid: self.grid.clone(), c: self.c.clone().map(|v| v.into_iter().map(|x| x * s).collect()) }
    }

    pub fn max_abs(&self) -> f64 {
        self.c.iter().flatten().fold(0.0, |m, x| m.max(x.abs()))
    }

    /// `integral |u|^2`
    pub fn l2_sq(&self) -> f64 {
        self.grid.integrate(&self.c.iter().flat_map(|v| v.iter().map(|x| x * x)).collect::<Vec<_>>())
    }

    /// `integral u . w`
    pub fn dot(&self, w: &PlaneField3) -> f64 {
        let h = self.grid.spacing();
        h * h * (0..3).map(|k| self.c[k].iter().zip(&w.c[k]).map(|(a, b)| a * b).sum::<f64>()).sum::<f64>()
    }

    pub fn derivatives(&self) -> Derivatives {
        let g = &self.grid;
        let len = g.len();
        let mut ux = zeros3(len);
        let mut uy = zeros3(len);
        let mut lap = zeros3(len);
        let (f0, f1) = g.fft2_pair(&self.c[0], &self.c[1]);
        let f2 = g.fft2(&self.c[2]);
        for (k, f) in [f0, f1, f2].into_iter().enumerate() {
            let mut dx = f.clone();
            let mut dy = f.clone();
            let mut l = f;
            for p in 0..len {
                dx[p] *= g.ikx(p);
                dy[p] *= g.iky(p);
                l[p] *= -g.k2(p);
            }
            ux[k] = g.ifft2(dx);
            uy[k] = g.ifft2(dy);
            lap[k] = g.ifft2(l);
        }
        Derivatives { ux, uy, lap }
    }

    /// `D_x a + D_y b` for vector fields `a`, `b` (spectral).
    pub(crate) fn divergence(grid: &Arc<PlaneGrid>, a: &Vec3, b: &Vec3) -> Vec3 {
        let len = grid.len();
        let mut out = zeros3(len);
        for k in 0..3 {
            let (fa, fb) = grid.fft2_pair(&a[k], &b[k]);
            let d: Vec<Complex64> = (0..len).map(|p| grid.ikx(p) * fa[p] + grid.iky(p) * fb[p]).collect();
            out[k] = grid.ifft2(d);
        }
        out
    }

    /// `integral |grad u|^2 = sum |k|^2 |u_k|^2` (Parseval).
    pub fn gradient_sq(&self) -> f64 {
        let g = &self.grid;
        let h = g.spacing();
        let n2 = (g.n * g.n) as f64;
        let (f0, f1) = g.fft2_pair(&self.c[0], &self.c[1]);
        let f2 = g.fft2(&self.c[2]);
        let s: f64 = [f0, f1, f2].iter().map(|f| f.iter().enumerate().map(|(p, c)| g.k2(p) * c.norm_sqr()).sum::<f64>()).sum();
        h * h * s / n2
    }

    /// `integral u . (u_x x u_y)` with spectral derivatives.
    pub fn cubic(&self) -> f64 {
        let d = self.derivatives();
        let w = cross_fields(&d.ux, &d.uy);
        self.grid.integrate(&(0..self.grid.len()).map(|p| (0..3).map(|k| self.c[k][p] * w[k][p]).sum()).collect::<Vec<f64>>())
    }

    /// `(1/2) integral |grad u|^2 + (2/3) integral u . (u_x x u_y)`
    pub fn stationary_energy(&self) -> f64 {
        0.5 * self.gradient_sq() + 2.0 / 3.0 * self.cubic()
    }

    /// Fourth-order centered differences `(u_x, u_y)` (periodic).
    pub fn derivatives_fd(&self) -> (Vec3, Vec3) {
        let n = self.grid.n;
        let h = self.grid.spacing();
        let len = self.grid.len();
        let mut ux = zeros3(len);
        let mut uy = zeros3(len);
        let w = |a: f64, b: f64, c: f64, d: f64| (-a + 8.0 * b - 8.0 * c + d) / (12.0 * h);
        for k in 0..3 {
            let f = &self.c[k];
            for j in 0..n {
                for i in 0..n {
                    let at = |ii: usize, jj: usize| f[(jj % n) * n + ii % n];
                    ux[k][j * n + i] = w(at(i + 2, j), at(i + 1, j), at(i + n - 1, j), at(i + n - 2, j));
                    uy[k][j * n + i] = w(at(i, j + 2), at(i, j + 1), at(i, j + n - 1), at(i, j + n - 2));
                }
            }
        }
        (ux, uy)
    }

    /// Fourth-order five-point-per-axis Laplacian.
    pub fn laplacian_fd(&self) -> Vec3 {
        let n = self.grid.n;
        let h2 = self.grid.spacing().powi(2);
        let mut out = zeros3(self.grid.len());
        for k in 0..3 {
            let f = &self.c[k];
            for j in 0..n {
                for i in 0..n {
                    let at = |ii: usize, jj: usize| f[(jj % n) * n + ii % n];
                    let c = at(i, j);
                    let dxx = -at(i + 2, j) + 16.0 * at(i + 1, j) - 30.0 * c + 16.0 * at(i + n - 1, j) - at(i + n - 2, j);
                    let dyy = -at(i, j + 2) + 16.0 * at(i, j + 1) - 30.0 * c + 16.0 * at(i, j + n - 1) - at(i, j + n - 2);
                    out[k][j * n + i] = (dxx + dyy) / (12.0 * h2);
                }
            }
        }
        out
    }

    /// `integral |grad u|^2` and `integral u . (u_x x u_y)` from fourth-order differences.
    pub fn integrals_fd(&self) -> (f64, f64) {
        let (ux, uy) = self.derivatives_fd();
        let w = cross_fields(&ux, &uy);
        let len = self.grid.len();
        let g: Vec<f64> = (0..len).map(|p| (0..3).map(|k| ux[k][p] * ux[k][p] + uy[k][p] * uy[k][p]).sum()).collect();
        let c: Vec<f64> = (0..len).map(|p| (0..3).map(|k| self.c[k][p] * w[k][p]).sum()).collect();
        (self.grid.integrate(&g), self.grid.integrate(&c))
    }

    /// `background + eta(r) (u - background)` with the smooth cutoff `eta`
    /// equal to 1 on `r <= inner` and 0 on `r >= outer`.
    pub fn windowed(&self, inner: f64, outer: f64, background: [f64; 3]) -> Self {
        let mut out = self.clone();
        for p in 0..self.grid.len() {
            let (x, y) = self.grid.point(p);
            let (eta, _) = cutoff(x.hypot(y), inner, outer);
            for k in 0..3 {
                out.c[k][p] = background[k] + eta * (self.c[k][p] - background[k]);
            }
        }
        out
    }

    /// Largest distance from the box center of a node where `u` differs from
    /// its corner value by more than `tol` (0 when the field is constant).
    pub fn support_radius(&self, tol: f64) -> f64 {
        let far = self.at(0);
        (0..self.grid.len())
            .filter(|&p| (0..3).any(|k| (self.c[k][p] - far[k]).abs() > tol))
            .map(|p| {
                let (x, y) = self.grid.point(p);
                x.hypot(y)
            })
            .fold(0.0, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cmc::map::{GaussianSum, GaussianTerm};

    fn gaussian() -> GaussianSum {
        GaussianSum {
            terms: vec![
                GaussianTerm { amplitude: [1.0, 0.3, -0.5], center: [0.5, -0.3], width: 1.0 },
                GaussianTerm { amplitude: [-0.2, 0.8, 0.4], center: [-0.6, 0.9], width: 0.7 },
            ],
        }
    }

    #[test]
    fn rejects_bad_grids() {
        assert!(PlaneGrid::new(15, 1.0).is_err());
        assert!(PlaneGrid::new(8, 1.0).is_err());
        assert!(PlaneGrid::new(32, 0.0).is_err());
    }

    #[test]
    fn spectral_derivatives_of_gaussians() {
        let g = PlaneGrid::new(128, 16.0).unwrap();
        let m = gaussian();
        let u = PlaneField3::from_map(&g, &m);
        let d = u.derivatives();
        let mut err: f64 = 0.0;
        for p in 0..g.len() {
            let (x, y) = g.point(p);
            let j = m.jet(x, y);
            for k in 0..3 {
                err = err.max((d.ux[k][p] - j.ux[k]).abs()).max((d.uy[k][p] - j.uy[k]).abs());
            }
        }
        assert!(err < 1e-10, "{err}");
        let quad = crate::cmc::quadrature::PolarQuadrature::with_r_cut(8.0).integrate(&m);
        assert!((u.gradient_sq() - quad.gradient_sq).abs() < 1e-9);
        assert!((u.cubic() - quad.cubic).abs() < 1e-9);
        let (gfd, cfd) = u.integrals_fd();
        assert!((gfd - quad.gradient_sq).abs() < 1e-3 * quad.gradient_sq);
        assert!((cfd - quad.cubic).abs() < 1e-3 * quad.cubic.abs().max(1e-3));
    }

    #[test]
    fn plane_wave_laplacian() {
        let g = PlaneGrid::new(32, 2.0 * PI).unwrap();
        let u = PlaneField3::from_fn(&g, |x, y| [(3.0 * x).sin(), (2.0 * x + y).cos(), 1.0]);
        let d = u.derivatives();
        for p in 0..g.len() {
            let (x, y) = g.point(p);
            assert!((d.lap[0][p] + 9.0 * (3.0 * x).sin()).abs() < 1e-11);
            assert!((d.lap[1][p] + 5.0 * (2.0 * x + y).cos()).abs() < 1e-11);
            assert!(d.lap[2][p].abs() < 1e-12);
        }
        let fd = u.laplacian_fd();
        assert!((fd[0][5] - d.lap[0][5]).abs() < 0.05);
    }

    #[test]
    fn support_and_window() {
        let g = PlaneGrid::new(64, 20.0).unwrap();
        let b = crate::cmc::map::BumpProfile { lambda: 1.0, inner: 2.0, outer: 4.0 };
        let u = PlaneField3::from_map(&g, &b);
        let r = u.support_radius(0.0);
        assert!(r < 4.0 && r > 3.5);
        let c = PlaneField3::constant(&g, [1.0, 2.0, 3.0]);
        assert_eq!(c.support_radius(0.0), 0.0);
        let w = u.windowed(1.0, 2.0, [0.0; 3]);
        assert!(w.support_radius(0.0) < 2.0);
    }
}
