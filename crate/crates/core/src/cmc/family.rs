//! Seeded family of closed-form maps for the Sobolev-ratio sweep
//! `|integral u . (u_x x u_y)|^{1/3} / ||grad u||`.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::map::{BumpProfile, Combination, GaussianSum, GaussianTerm};
use super::quadrature::PolarQuadrature;
use super::sobolev::sobolev_constant;
use super::stereo::RationalMapSpec;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SobolevFamilyConfig {
    pub size: usize,
    pub seed: u64,
    pub quadrature: PolarQuadrature,
}

impl Default for SobolevFamilyConfig {
    fn default() -> Self {
        Self { size: 1000, seed: 11, quadrature: PolarQuadrature::default() }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum SobolevMember {
    Reference,
    Mobius { lambda: f64, theta: f64, a: [f64; 2], conjugate: bool },
    Rational { spec: RationalMapSpec },
    PerturbedReference { amplitude: f64, perturbation: GaussianSum },
    Gaussians { sum: GaussianSum },
    Profile { profile: BumpProfile, scale: f64 },
}

impl SobolevMember {
    /// True for the reference map and its conformal images, all of which
    /// attain the sharp constant.
    pub fn is_ground_state(&self) -> bool {
        match self {
            Self::Reference | Self::Mobius { .. } => true,
            Self::Rational { spec } => spec.degree() == 1,
            _ => false,
        }
    }

    fn ratio(&self, q: &PolarQuadrature) -> (f64, f64, f64) {
        let m = match self {
            Self::Reference => q.integrate(&RationalMapSpec::reference()),
            Self::Mobius { lambda, theta, a, conjugate } => {
                let mut s = RationalMapSpec::mobius(*lambda, *theta, Complex64::new(a[0], a[1]));
                s.conjugate = *conjugate;
                q.integrate(&s)
            }
            Self::Rational { spec } => q.integrate(spec),
            Self::PerturbedReference { amplitude, perturbation } => {
                let base = RationalMapSpec::reference();
                let mut g = perturbation.clone();
                for t in &mut g.terms {
                    t.amplitude = t.amplitude.map(|x| amplitude * x);
                }
                q.integrate(&Combination { base: &base, scale: 1.0, perturbation: Some(&g) })
            }
            Self::Gaussians { sum } => q.integrate(sum),
            Self::Profile { profile, scale } => q.integrate(&Combination { base: profile, scale: *scale, perturbation: None }),
        };
        (m.gradient_sq, m.cubic, m.sobolev_ratio())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SobolevSample {
    pub member: SobolevMember,
    pub gradient_sq: f64,
    pub cubic: f64,
    pub ratio: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SobolevFamilyReport {
    pub config: SobolevFamilyConfig,
    /// `(1 / (2 sqrt(8 pi)))^{1/3}`, the sharp bound on the ratio
    pub sharp_ratio: f64,
    pub reference_ratio: f64,
    /// `|reference_ratio / sharp_ratio - 1|`
    pub reference_deviation: f64,
    /// Empirical constant: the largest ratio seen
    pub max_ratio: f64,
    pub argmax: usize,
    pub argmax_is_ground_state: bool,
    /// `max ratio / reference_ratio - 1` over members that are not conformal images of the reference
    pub max_excess_over_reference: f64,
    pub samples: Vec<SobolevSample>,
}

fn gaussian_sum(rng: &mut ChaCha8Rng, terms: usize, spread: f64, amp: f64) -> GaussianSum {
    GaussianSum {
        terms: (0..terms)
            .map(|_| GaussianTerm {
                amplitude: [rng.gen_range(-amp..amp), rng.gen_range(-amp..amp), rng.gen_range(-amp..amp)],
                center: [rng.gen_range(-spread..spread), rng.gen_range(-spread..spread)],
                width: rng.gen_range(0.3..2.0),
            })
            .collect(),
    }
}

fn random_complex(rng: &mut ChaCha8Rng, r: f64) -> Complex64 {
    Complex64::new(rng.gen_range(-r..r), rng.gen_range(-r..r))
}

/// Member `0` is the reference map; the rest cycle through the other kinds.
pub fn sobolev_family(config: &SobolevFamilyConfig) -> Vec<SobolevMember> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut out = Vec::with_capacity(config.size);
    if config.size > 0 {
        out.push(SobolevMember::Reference);
    }
    for i in 1..config.size {
        let m = match i % 6 {
            0 => SobolevMember::Mobius {
                lambda: rng.gen_range(0.5..2.0),
                theta: rng.gen_range(0.0..std::f64::consts::TAU),
                a: [rng.gen_range(-0.5..0.5), rng.gen_range(-0.5..0.5)],
                conjugate: rng.gen_bool(0.3),
            },
            1 => {
                let dp = rng.gen_range(1..=3);
                let dq = rng.gen_range(0..=2);
                let mut p: Vec<Complex64> = (0..=dp).map(|_| random_complex(&mut rng, 1.0)).collect();
                let mut q: Vec<Complex64> = (0..=dq).map(|_| random_complex(&mut rng, 1.0)).collect();
                p[dp] += Complex64::new(1.0, 0.0);
                q[0] += Complex64::new(2.0, 0.0);
                let shift = [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)];
                SobolevMember::Rational { spec: RationalMapSpec::new(p, q, shift).expect("nonzero") }
            }
            2 | 3 => SobolevMember::PerturbedReference {
                amplitude: rng.gen_range(0.01..0.5),
                perturbation: {
                    let n = rng.gen_range(1..=3);
                    gaussian_sum(&mut rng, n, 1.5, 1.0)
                },
            },
            4 => {
                let n = rng.gen_range(1..=5);
                SobolevMember::Gaussians { sum: gaussian_sum(&mut rng, n, 2.0, 2.0) }
            }
            _ => {
                let lambda = rng.gen_range(0.2..1.0);
                let inner = lambda * rng.gen_range(2.0..20.0);
                SobolevMember::Profile {
                    profile: BumpProfile { lambda, inner, outer: inner * rng.gen_range(1.3..2.5) },
                    scale: rng.gen_range(0.2..2.0),
                }
            }
        };
        out.push(m);
    }
    out
}

pub fn sobolev_sweep(config: &SobolevFamilyConfig) -> Result<SobolevFamilyReport> {
    if config.size == 0 {
        return Err(Error::InvalidArgument("empty family".into()));
    }
    let members = sobolev_family(config);
    let samples: Vec<SobolevSample> = members
        .into_par_iter()
        .map(|member| {
            let (gradient_sq, cubic, ratio) = member.ratio(&config.quadrature);
            SobolevSample { member, gradient_sq, cubic, ratio }
        })
        .collect();
    let sharp_ratio = sobolev_constant().cbrt();
    let reference_ratio = samples[0].ratio;
    let (argmax, max_ratio) =
        samples.iter().enumerate().fold((0, f64::NEG_INFINITY), |b, (i, s)| if s.ratio > b.1 { (i, s.ratio) } else { b });
    let other = samples.iter().filter(|s| !s.member.is_ground_state()).map(|s| s.ratio).fold(0.0, f64::max);
    Ok(SobolevFamilyReport {
        config: config.clone(),
        sharp_ratio,
        reference_ratio,
        reference_deviation: (reference_ratio / sharp_ratio - 1.0).abs(),
        max_ratio,
        argmax,
        argmax_is_ground_state: samples[argmax].member.is_ground_state(),
        max_excess_over_reference: other / reference_ratio - 1.0,
        samples,
    })
}
