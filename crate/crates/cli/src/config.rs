//! JSON run configurations. Every field has a default so an empty object is a
//! valid config; unknown keys are rejected.

use liouwave::cmc::{GaussianSum, PolarQuadrature, RationalMapSpec, SobolevFamilyConfig};
use liouwave::diagnostics::{FamilyConfig, MonitorThresholds};
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Equation {
    LiouvilleScalar,
    LiouvilleSystem,
    Cmc,
}

/// Initial data for one sphere component.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "recipe", rename_all = "kebab-case", deny_unknown_fields)]
pub enum SphereRecipe {
    /// `u0 = beta x3`, `u1 = velocity x3`
    Zonal {
        beta: f64,
        #[serde(default)]
        velocity: f64,
    },
    /// Polynomials `sum c x^a y^b z^c`, each term `[c, a, b, c]`
    Monomials {
        #[serde(default)]
        u: Vec<[f64; 4]>,
        #[serde(default)]
        v: Vec<[f64; 4]>,
    },
    /// Gaussian coefficients on degrees `1..=degree`, scaled so `mean |grad u0|^2 = amplitude^2`
    Random {
        degree: usize,
        amplitude: f64,
        #[serde(default)]
        velocity: f64,
        #[serde(default)]
        even: bool,
    },
}

/// Initial data for the plane equation (`u1 = 0` unless stated).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "recipe", rename_all = "kebab-case", deny_unknown_fields)]
pub enum PlaneRecipe {
    /// `s eta(r) (W(z / lambda) - e3)`; `s` defaults to the search's preferred sign times `magnitude`
    Bump {
        lambda: f64,
        inner: f64,
        outer: f64,
        magnitude: f64,
        #[serde(default = "default_scan")]
        scan: (f64, f64, usize),
    },
    /// `e3 + eta(r) (pi(P/Q) + C - e3)`
    GroundState {
        spec: RationalMapSpec,
        inner: f64,
        outer: f64,
    },
    /// Windowed Gaussian sum, with optional initial velocity `velocity * u0`
    Gaussians {
        sum: GaussianSum,
        inner: f64,
        outer: f64,
        #[serde(default)]
        velocity: f64,
    },
}

fn default_scan() -> (f64, f64, usize) {
    (0.0, 3.0, 301)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SpecConfig {
    Scalar { alpha: f64 },
    System { a: Vec<Vec<f64>>, m: Vec<f64> },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Monitors {
    pub sample_every: usize,
    pub concentration_eps: Option<f64>,
    pub even_symmetry: bool,
    pub thresholds: MonitorThresholds,
}

impl Default for Monitors {
    fn default() -> Self {
        Self { sample_every: 16, concentration_eps: None, even_symmetry: false, thresholds: MonitorThresholds::default() }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Outputs {
    pub series: String,
    pub summary: String,
}

impl Default for Outputs {
    fn default() -> Self {
        Self { series: "series.csv".into(), summary: "summary.json".into() }
    }
}

/// Config of the `liouville`, `system` and `cmc` subcommands.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub equation: Equation,
    /// Sphere band limit
    pub lmax: usize,
    /// Plane grid points per side and box side length
    pub n: usize,
    pub length: f64,
    pub horizon: f64,
    /// Defaults to `0.5 / lmax` on the sphere and `h / 4` in the plane
    pub dt: Option<f64>,
    pub spec: SpecConfig,
    pub initial: Vec<SphereRecipe>,
    pub plane_initial: PlaneRecipe,
    pub monitors: Monitors,
    pub outputs: Outputs,
    pub seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self::liouville()
    }
}

impl RunConfig {
    /// `alpha = 0.5`, `u0 = 0.5 x3`, `L = 32`, `T = 10`.
    pub fn liouville() -> Self {
        Self {
            equation: Equation::LiouvilleScalar,
            lmax: 32,
            n: 256,
            length: 16.0,
            horizon: 10.0,
            dt: None,
            spec: SpecConfig::Scalar { alpha: 0.5 },
            initial: vec![SphereRecipe::Zonal { beta: 0.5, velocity: 0.0 }],
            plane_initial: PlaneRecipe::Bump { lambda: 0.5, inner: 2.0, outer: 4.0, magnitude: 1.5, scan: default_scan() },
            monitors: Monitors::default(),
            outputs: Outputs::default(),
            seed: 7,
        }
    }

    /// `A = [[1, 0.1], [0.1, 1]]`, `M = (0.3, 0.3)`.
    pub fn system() -> Self {
        Self {
            equation: Equation::LiouvilleSystem,
            spec: SpecConfig::System { a: vec![vec![1.0, 0.1], vec![0.1, 1.0]], m: vec![0.3, 0.3] },
            initial: vec![
                SphereRecipe::Zonal { beta: 0.5, velocity: 0.0 },
                SphereRecipe::Monomials { u: vec![[0.4, 1.0, 0.0, 0.0], [0.2, 0.0, 1.0, 1.0]], v: vec![] },
            ],
            ..Self::liouville()
        }
    }

    /// Admissible bump data `1.5 Phi` on a 256^2 grid of side 16, run to `L/2 - R0`.
    pub fn cmc() -> Self {
        Self { equation: Equation::Cmc, horizon: 4.0, monitors: Monitors { sample_every: 1, ..Monitors::default() }, ..Self::liouville() }
    }

    pub fn default_for(equation: Equation) -> Self {
        match equation {
            Equation::LiouvilleScalar => Self::liouville(),
            Equation::LiouvilleSystem => Self::system(),
            Equation::Cmc => Self::cmc(),
        }
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let bad = |m: String| Err(CliError::Config(m));
        if !(self.horizon > 0.0 && self.horizon.is_finite()) {
            return bad(format!("horizon must be positive, got {}", self.horizon));
        }
        if let Some(dt) = self.dt {
            if !(dt > 0.0 && dt.is_finite()) {
                return bad(format!("dt must be positive, got {dt}"));
            }
        }
        if self.monitors.sample_every == 0 {
            return bad("sample_every must be positive".into());
        }
        if let Some(e) = self.monitors.concentration_eps {
            if !(e > 0.0 && e <= std::f64::consts::PI) {
                return bad(format!("concentration_eps {e} outside (0, pi]"));
            }
        }
        for name in [&self.outputs.series, &self.outputs.summary] {
            if name.is_empty() || name.contains('/') || name.contains('\\') {
                return bad(format!("output name {name:?} must be a plain file name"));
            }
        }
        match self.equation {
            Equation::Cmc => {
                if !(self.length > 0.0 && self.length.is_finite()) {
                    return bad(format!("length must be positive, got {}", self.length));
                }
                match &self.plane_initial {
                    PlaneRecipe::Bump { lambda, inner, outer, magnitude, scan } => {
                        if !(*lambda > 0.0 && *inner > 0.0 && outer > inner && *magnitude > 0.0) {
                            return bad("bump needs lambda, inner, magnitude > 0 and outer > inner".into());
                        }
                        if !(scan.0 >= 0.0 && scan.1 > scan.0 && scan.2 >= 2) {
                            return bad(format!("bad scan {scan:?}"));
                        }
                    }
                    PlaneRecipe::GroundState { inner, outer, .. } | PlaneRecipe::Gaussians { inner, outer, .. } => {
                        if !(*inner > 0.0 && outer > inner) {
                            return bad("collar needs 0 < inner < outer".into());
                        }
                    }
                }
            }
            kind => {
                let scalar = kind == Equation::LiouvilleScalar;
                match (&self.spec, scalar) {
                    (SpecConfig::Scalar { .. }, true) => {}
                    (SpecConfig::System { m, .. }, false) => {
                        if m.len() != self.initial.len() {
                            return bad(format!("{} masses but {} initial components", m.len(), self.initial.len()));
                        }
                    }
                    _ => return bad("spec does not match the equation".into()),
                }
                if scalar && self.initial.len() != 1 {
                    return bad("the scalar equation takes exactly one initial component".into());
                }
                if self.initial.is_empty() {
                    return bad("no initial data".into());
                }
                for r in &self.initial {
                    if let SphereRecipe::Monomials { u, v } = r {
                        if u.iter().chain(v).any(|t| t[1..].iter().any(|e| !(*e >= 0.0 && e.fract() == 0.0 && *e <= 64.0))) {
                            return bad("monomial exponents must be integers in [0, 64]".into());
                        }
                    }
                    if let SphereRecipe::Random { degree, amplitude, .. } = r {
                        if *degree == 0 || *degree > self.lmax || !(*amplitude >= 0.0) {
                            return bad("random recipe needs 1 <= degree <= lmax and amplitude >= 0".into());
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GroundStateConfig {
    pub quadrature: PolarQuadrature,
    pub degrees: Vec<usize>,
    pub identity_tolerance: f64,
    pub quantization_tolerance: f64,
    /// Points of the monotone-branch check of `f`
    pub shape_points: usize,
    pub delta: f64,
    /// Optional Sobolev-ratio sweep
    pub sobolev_family: Option<SobolevFamilyConfig>,
}

impl Default for GroundStateConfig {
    fn default() -> Self {
        Self {
            quadrature: PolarQuadrature::default(),
            degrees: vec![1, 2, 3],
            identity_tolerance: 2e-3,
            quantization_tolerance: 3e-3,
            shape_points: 10_000,
            delta: 0.5,
            sobolev_family: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MtCheckConfig {
    pub family: FamilyConfig,
    /// System functional sweep (skipped when absent)
    pub system: Option<SystemSweepConfig>,
    pub output: String,
}

impl Default for MtCheckConfig {
    fn default() -> Self {
        Self { family: FamilyConfig::default(), system: None, output: "mt_floor.json".into() }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemSweepConfig {
    pub a: Vec<Vec<f64>>,
    pub m: Vec<f64>,
    pub samples: usize,
    #[serde(default = "default_system_lmax")]
    pub lmax: usize,
    #[serde(default = "default_system_lambda")]
    pub max_lambda: f64,
}

fn default_system_lmax() -> usize {
    16
}

fn default_system_lambda() -> f64 {
    10.0
}
