//! Right-hand sides `alpha (e^{2u} / mean e^{2u} - 1)` and
//! `A (M e^{2u} / mean e^{2u} - M)`, de-aliased on the doubled grid.

use super::coupling::CouplingSpec;
use crate::error::{Error, Result};
use crate::sphere::{ExpMeasure, SphereField};

pub fn rhs_scalar(u: &SphereField, alpha: f64) -> Result<SphereField> {
    let grid = u.grid();
    let excess = ExpMeasure::of(u)?.normalized_excess_coeffs(grid.lmax());
    SphereField::from_coeffs(grid, excess.into_iter().map(|c| alpha * c).collect())
}

pub fn rhs_system(u: &[SphereField], spec: &CouplingSpec) -> Result<Vec<SphereField>> {
    let grid = u.first().ok_or_else(|| Error::InvalidArgument("no components".into()))?.grid().clone();
    forcing_coeffs(u, spec)?
        .into_iter()
        .map(|c| SphereField::from_coeffs(&grid, c))
        .collect()
}

/// Coefficient form of [`rhs_system`], used by the integrators.
pub(crate) fn forcing_coeffs(u: &[SphereField], spec: &CouplingSpec) -> Result<Vec<Vec<f64>>> {
    let n = spec.components();
    if u.len() != n {
        return Err(Error::InvalidArgument(format!("{} components for an N = {n} coupling", u.len())));
    }
    let lmax = u[0].grid().lmax();
    let brackets = u
        .iter()
        .zip(spec.masses())
        .enumerate()
        .map(|(j, (uj, mj))| {
            if *mj == 0.0 || (0..n).all(|i| spec.a(i, j) == 0.0) {
                return Ok(vec![0.0; uj.coeffs().len()]);
            }
            let mut c = ExpMeasure::of(uj)?.normalized_excess_coeffs(lmax);
            c.iter_mut().for_each(|x| *x *= mj);
            Ok(c)
        })
        .collect::<Result<Vec<_>>>()?;
    let len = brackets[0].len();
    Ok((0..n)
        .map(|i| {
            let mut out = vec![0.0; len];
            for (j, b) in brackets.iter().enumerate() {
                let a = spec.a(i, j);
                if a != 0.0 {
                    out.iter_mut().zip(b).for_each(|(o, x)| *o += a * x);
                }
            }
            out
        })
        .collect())
}
