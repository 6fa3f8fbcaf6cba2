//! Named initial-data generators. A raw-grid import would slot in here as
//! another recipe variant; none is provided yet.

use std::sync::Arc;

use liouwave::cmc::{
    data_search, ground_state, stereographic_ext, BumpProfile, CmcState, DataSearch, PlaneField3, PlaneGrid,
    RationalMapSpec,
};
use num_complex::Complex64;
use liouwave::liouville::{even_symmetrize, SystemState};
use liouwave::sphere::{SphereField, SphereGrid};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::config::{PlaneRecipe, SphereRecipe};
use crate::CliError;

fn monomials(grid: &Arc<SphereGrid>, terms: &[[f64; 4]]) -> SphereField {
    SphereField::from_fn(grid, |x| {
        terms.iter().map(|t| t[0] * x[0].powi(t[1] as i32) * x[1].powi(t[2] as i32) * x[2].powi(t[3] as i32)).sum()
    })
}

fn random_field(grid: &Arc<SphereGrid>, rng: &mut ChaCha8Rng, degree: usize, amplitude: f64, even: bool) -> Result<SphereField, CliError> {
    let mut c = vec![0.0; grid.coeff_len()];
    for l in 1..=degree {
        for x in &mut c[l * l..(l + 1) * (l + 1)] {
            *x = rng.sample::<f64, _>(StandardNormal) / l as f64;
        }
    }
    let mut u = SphereField::from_coeffs(grid, c)?;
    if even {
        u = even_symmetrize(&u);
    }
    let d = u.dirichlet().average;
    Ok(if d > 0.0 { u.scale(amplitude / d.sqrt()) } else { u })
}

pub fn sphere_state(grid: &Arc<SphereGrid>, recipes: &[SphereRecipe], seed: u64) -> Result<SystemState, CliError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut u = Vec::new();
    let mut v = Vec::new();
    for r in recipes {
        match r {
            SphereRecipe::Zonal { beta, velocity } => {
                u.push(SphereField::from_fn(grid, |x| beta * x[2]));
                v.push(SphereField::from_fn(grid, |x| velocity * x[2]));
            }
            SphereRecipe::Monomials { u: a, v: b } => {
                u.push(monomials(grid, a));
                v.push(monomials(grid, b));
            }
            SphereRecipe::Random { degree, amplitude, velocity, even } => {
                u.push(random_field(grid, &mut rng, *degree, *amplitude, *even)?);
                v.push(random_field(grid, &mut rng, *degree, *velocity, *even)?);
            }
        }
    }
    Ok(SystemState::new(u, v)?)
}

/// `pi(lim P/Q) + C` as `|z| -> infinity`.
fn value_at_infinity(spec: &RationalMapSpec) -> [f64; 3] {
    let lead = |c: &[[f64; 2]]| {
        c.iter().rposition(|a| a[0] != 0.0 || a[1] != 0.0).map(|d| (d, Complex64::new(c[d][0], c[d][1])))
    };
    let limit = match (lead(&spec.p), lead(&spec.q)) {
        (Some((dp, p)), Some((dq, q))) if dp == dq => Some(p / q),
        (Some((dp, _)), Some((dq, _))) if dp < dq => Some(Complex64::new(0.0, 0.0)),
        (None, _) => Some(Complex64::new(0.0, 0.0)),
        _ => None,
    };
    let base = stereographic_ext(limit);
    [base[0] + spec.shift[0], base[1] + spec.shift[1], base[2] + spec.shift[2]]
}

pub struct PlaneData {
    pub state: CmcState,
    pub search: Option<DataSearch>,
    pub s: Option<f64>,
}

pub fn plane_state(grid: &Arc<PlaneGrid>, recipe: &PlaneRecipe) -> Result<PlaneData, CliError> {
    match recipe {
        PlaneRecipe::Bump { lambda, inner, outer, magnitude, scan } => {
            let phi = PlaneField3::from_map(grid, &BumpProfile { lambda: *lambda, inner: *inner, outer: *outer });
            let search = data_search(&phi, (scan.0, scan.1), scan.2)?;
            let s = search.sign * magnitude;
            let state = CmcState::new(phi.scale(s), PlaneField3::zeros(grid))?;
            Ok(PlaneData { state, search: Some(search), s: Some(s) })
        }
        PlaneRecipe::GroundState { spec, inner, outer } => {
            let u = ground_state(spec, grid)?.windowed(*inner, *outer, value_at_infinity(spec));
            Ok(PlaneData { state: CmcState::new(u, PlaneField3::zeros(grid))?, search: None, s: None })
        }
        PlaneRecipe::Gaussians { sum, inner, outer, velocity } => {
            let u = PlaneField3::from_map(grid, sum).windowed(*inner, *outer, [0.0; 3]);
            let v = u.scale(*velocity);
            Ok(PlaneData { state: CmcState::new(u, v)?, search: None, s: None })
        }
    }
}
