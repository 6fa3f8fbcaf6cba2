use std::f64::consts::PI;
use std::sync::Arc;

use super::grid::{coeff_index, SphereGrid};
use super::transform::{analyze, gradient_norm_sq, resize_coeffs, synthesize};
use crate::error::{Error, Result};

/// A band-limited scalar field on the sphere, stored both as grid values
/// and as real orthonormal SH coefficients.
#[derive(Clone, Debug)]
pub struct SphereField {
    grid: Arc<SphereGrid>,
    coeffs: Vec<f64>,
    values: Vec<f64>,
}

/// `integral |grad u|^2` and the average `(1/4pi) integral |grad u|^2`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Dirichlet {
    pub integral: f64,
    pub average: f64,
}

impl SphereField {
    pub fn zeros(grid: &Arc<SphereGrid>) -> Self {
        Self { grid: grid.clone(), coeffs: vec![0.0; grid.coeff_len()], values: vec![0.0; grid.len()] }
    }

    pub fn constant(grid: &Arc<SphereGrid>, c: f64) -> Self {
        let mut coeffs = vec![0.0; grid.coeff_len()];
        coeffs[0] = c * (4.0 * PI).sqrt();
        Self { grid: grid.clone(), coeffs, values: vec![c; grid.len()] }
    }

    /// Projects grid values onto the band limit. Values that are not
    /// band-limited are replaced by their projection.
    pub fn from_values(grid: &Arc<SphereGrid>, values: Vec<f64>) -> Result<Self> {
        let coeffs = analyze(grid, &values)?;
        let values = synthesize(grid, &coeffs)?;
        Ok(Self { grid: grid.clone(), coeffs, values })
    }

    pub fn from_coeffs(grid: &Arc<SphereGrid>, coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.len() != grid.coeff_len() {
            return Err(Error::ShapeMismatch { expected: grid.coeff_len(), got: coeffs.len() });
        }
        let values = synthesize(grid, &coeffs)?;
        Ok(Self { grid: grid.clone(), coeffs, values })
    }

    /// Samples `f` at the grid nodes and projects onto the band limit.
    pub fn from_fn(grid: &Arc<SphereGrid>, f: impl Fn([f64; 3]) -> f64) -> Self {
        let values = (0..grid.len()).map(|k| f(grid.point(k))).collect();
        Self::from_values(grid, values).expect("grid-shaped values")
    }

    /// Single real harmonic `Y_lm`.
    pub fn harmonic(grid: &Arc<SphereGrid>, l: usize, m: i64) -> Self {
        let mut c = vec![0.0; grid.coeff_len()];
        c[coeff_index(l, m)] = 1.0;
        Self::from_coeffs(grid, c).expect("grid-shaped coefficients")
    }

    pub fn grid(&self) -> &Arc<SphereGrid> {
        &self.grid
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_coeffs(self) -> Vec<f64> {
        self.coeffs
    }

    pub fn same_grid(&self, other: &SphereField) -> bool {
        Arc::ptr_eq(&self.grid, &other.grid) || self.grid.lmax() == other.grid.lmax()
    }

    pub fn mean(&self) -> f64 {
        self.coeffs[0] / (4.0 * PI).sqrt()
    }

    pub fn integral(&self) -> f64 {
        self.coeffs[0] * (4.0 * PI).sqrt()
    }

    /// `integral u^2` from the coefficients.
    pub fn l2_norm_sq(&self) -> f64 {
        self.coeffs.iter().map(|c| c * c).sum()
    }

    /// `integral u^2` by grid quadrature.
    pub fn l2_norm_sq_quadrature(&self) -> f64 {
        let sq: Vec<f64> = self.values.iter().map(|v| v * v).collect();
        self.grid.integrate(&sq)
    }

    /// `integral |grad u|^2 = sum l(l+1) c_lm^2`.
    pub fn dirichlet(&self) -> Dirichlet {
        let mut integral = 0.0;
        for l in 1..=self.grid.lmax() {
            let ll = (l * (l + 1)) as f64;
            let band: f64 = self.coeffs[l * l..(l + 1) * (l + 1)].iter().map(|c| c * c).sum();
            integral += ll * band;
        }
        Dirichlet { integral, average: integral / (4.0 * PI) }
    }

    /// Grid quadrature of the pointwise `|grad u|^2`; independent of [`Self::dirichlet`].
    pub fn dirichlet_quadrature(&self) -> Dirichlet {
        let g2 = gradient_norm_sq(&self.grid, &self.coeffs).expect("grid-shaped coefficients");
        let integral = self.grid.integrate(&g2);
        Dirichlet { integral, average: integral / (4.0 * PI) }
    }

    /// `Delta_g u`, coefficientwise `-l(l+1)`.
    pub fn laplacian(&self) -> Self {
        self.map_degree(|l, c| -((l * (l + 1)) as f64) * c)
    }

    /// Applies `f(l, c_lm)` to every coefficient.
    pub fn map_degree(&self, f: impl Fn(usize, f64) -> f64) -> Self {
        let mut coeffs = self.coeffs.clone();
        for l in 0..=self.grid.lmax() {
            for c in &mut coeffs[l * l..(l + 1) * (l + 1)] {
                *c = f(l, *c);
            }
        }
        Self::from_coeffs(&self.grid, coeffs).expect("grid-shaped coefficients")
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            grid: self.grid.clone(),
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
            values: self.values.iter().map(|v| v * s).collect(),
        }
    }

    /// `self + s * other`.
    pub fn axpy(&self, s: f64, other: &SphereField) -> Result<Self> {
        if !self.same_grid(other) {
            return Err(Error::GridMismatch);
        }
        Ok(Self {
            grid: self.grid.clone(),
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + s * b).collect(),
            values: self.values.iter().zip(&other.values).map(|(a, b)| a + s * b).collect(),
        })
    }

    pub fn max_value(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    /// Values on the oversampled de-aliasing grid.
    pub fn fine_values(&self) -> Vec<f64> {
        let fine = self.grid.dealias();
        synthesize(&fine, &self.coeffs).expect("band limit below the fine grid")
    }

    /// Re-expresses the field on another grid (zero-pad or truncate).
    pub fn resample(&self, grid: &Arc<SphereGrid>) -> Self {
        Self::from_coeffs(grid, resize_coeffs(&self.coeffs, grid.lmax())).expect("resized coefficients")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sphere::grid::coeff_len;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn grid(l: usize) -> Arc<SphereGrid> {
        SphereGrid::new(l).unwrap()
    }

    #[test]
    fn laplacian_eigenvalues() {
        let g = grid(8);
        let x3 = SphereField::from_fn(&g, |p| p[2]);
        let lap = x3.laplacian();
        for (a, b) in lap.values().iter().zip(x3.values()) {
            assert!((a + 2.0 * b).abs() < 1e-12);
        }
        let c = SphereField::constant(&g, 3.0);
        assert!(c.laplacian().values().iter().all(|v| v.abs() < 1e-12));
        let y53 = SphereField::harmonic(&g, 5, 3);
        for (a, b) in y53.laplacian().values().iter().zip(y53.values()) {
            assert!((a + 30.0 * b).abs() < 1e-10);
        }
    }

    #[test]
    fn means() {
        let g = grid(8);
        assert!((SphereField::constant(&g, 2.5).mean() - 2.5).abs() < 1e-14);
        assert!(SphereField::from_fn(&g, |p| p[2]).mean().abs() < 1e-12);
        assert!((SphereField::from_fn(&g, |p| p[2] * p[2]).mean() - 1.0 / 3.0).abs() < 1e-10);
    }

    #[test]
    fn dirichlet_of_zonal_linear() {
        let g = grid(8);
        let beta = 1.7;
        let u = SphereField::from_fn(&g, |p| beta * p[2]);
        let d = u.dirichlet();
        assert!((d.average - 2.0 * beta * beta / 3.0).abs() < 1e-12);
        assert!((d.integral - 4.0 * PI * d.average).abs() < 1e-12);
        assert_eq!(SphereField::constant(&g, 1.0).dirichlet().integral, 0.0);
    }

    #[test]
    fn dirichlet_spectral_matches_quadrature() {
        let g = grid(24);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let c: Vec<f64> = (0..coeff_len(24)).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let u = SphereField::from_coeffs(&g, c).unwrap();
        let a = u.dirichlet().integral;
        let b = u.dirichlet_quadrature().integral;
        assert!((a - b).abs() < 1e-8 * a, "{a} vs {b}");
    }

    #[test]
    fn parseval() {
        let g = grid(16);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let c: Vec<f64> = (0..coeff_len(16)).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let u = SphereField::from_coeffs(&g, c).unwrap();
        let a = u.l2_norm_sq();
        assert!((a - u.l2_norm_sq_quadrature()).abs() < 1e-10 * a);
    }

    #[test]
    fn resample_round_trip() {
        let g = grid(6);
        let u = SphereField::from_fn(&g, |p| p[0] * p[1] + p[2]);
        let fine = u.resample(&g.dealias());
        let back = fine.resample(&g);
        for (a, b) in back.values().iter().zip(u.values()) {
            assert!((a - b).abs() < 1e-13);
        }
        let fv = u.fine_values();
        assert_eq!(fv.len(), g.dealias().len());
    }
}
