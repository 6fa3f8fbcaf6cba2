//! Stereographic projection and the harmonic maps `pi(P/Q) + C`.
//!
//! Convention: `pi(z) = (2 Re z, 2 Im z, |z|^2 - 1) / (1 + |z|^2)`, so
//! `pi(0)` is the south pole and `pi(infinity)` the north pole.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::map::{Jet, PlaneMap};
use crate::error::{Error, Result};

pub const NORTH_POLE: [f64; 3] = [0.0, 0.0, 1.0];

pub fn stereographic(z: Complex64) -> [f64; 3] {
    let d = 1.0 + z.norm_sqr();
    [2.0 * z.re / d, 2.0 * z.im / d, (z.norm_sqr() - 1.0) / d]
}

/// `None` stands for the point at infinity.
pub fn stereographic_ext(z: Option<Complex64>) -> [f64; 3] {
    z.map_or(NORTH_POLE, stereographic)
}

/// Value and differential of `pi` applied to `w(z)` with `dw/dz = dw`,
/// i.e. `u_x = Dpi(w)[dw]` and `u_y = Dpi(w)[i dw]`.
fn jet_near(w: Complex64, dw: Complex64) -> Jet {
    let d = 1.0 + w.norm_sqr();
    let u = stereographic(w);
    let dpi = |delta: Complex64| {
        let rho = 2.0 * (w.conj() * delta).re;
        [
            (2.0 * delta.re * d - 2.0 * w.re * rho) / (d * d),
            (2.0 * delta.im * d - 2.0 * w.im * rho) / (d * d),
            2.0 * rho / (d * d),
        ]
    };
    Jet { u, ux: dpi(dw), uy: dpi(Complex64::i() * dw) }
}

/// Same with `g = 1/w`, using `pi(w) = (2 Re g, -2 Im g, 1 - |g|^2) / (1 + |g|^2)`.
fn jet_far(g: Complex64, dg: Complex64) -> Jet {
    let d = 1.0 + g.norm_sqr();
    let u = [2.0 * g.re / d, -2.0 * g.im / d, (1.0 - g.norm_sqr()) / d];
    let dpi = |delta: Complex64| {
        let rho = 2.0 * (g.conj() * delta).re;
        [
            (2.0 * delta.re * d - 2.0 * g.re * rho) / (d * d),
            -(2.0 * delta.im * d - 2.0 * g.im * rho) / (d * d),
            -2.0 * rho / (d * d),
        ]
    };
    Jet { u, ux: dpi(dg), uy: dpi(Complex64::i() * dg) }
}

/// Polynomial with coefficients in increasing degree.
fn horner(c: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for a in c.iter().rev() {
        dp = dp * z + p;
        p = p * z + a;
    }
    (p, dp)
}

fn degree(c: &[Complex64]) -> Option<usize> {
    c.iter().rposition(|a| a.norm() != 0.0)
}

/// `u(z) = pi(P(z) / Q(z)) + C`, optionally with `z` replaced by `conj(z)`
/// (an orientation-reversing solution of the sign-flipped equation).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RationalMapSpec {
    /// `P` coefficients `[re, im]`, increasing degree
    pub p: Vec<[f64; 2]>,
    pub q: Vec<[f64; 2]>,
    #[serde(default)]
    pub shift: [f64; 3],
    #[serde(default)]
    pub conjugate: bool,
}

impl RationalMapSpec {
    pub fn new(p: Vec<Complex64>, q: Vec<Complex64>, shift: [f64; 3]) -> Result<Self> {
        if degree(&p).is_none() && degree(&q).is_none() {
            return Err(Error::InvalidArgument("P and Q both vanish".into()));
        }
        Ok(Self { p: p.iter().map(|c| [c.re, c.im]).collect(), q: q.iter().map(|c| [c.re, c.im]).collect(), shift, conjugate: false })
    }

    /// `pi(z)`, the reference ground state.
    pub fn reference() -> Self {
        Self::monomial(1)
    }

    /// `pi(z^d)`
    pub fn monomial(d: usize) -> Self {
        let mut p = vec![Complex64::new(0.0, 0.0); d + 1];
        p[d] = Complex64::new(1.0, 0.0);
        Self::new(p, vec![Complex64::new(1.0, 0.0)], [0.0; 3]).expect("nonzero")
    }

    /// `pi(lambda e^{i theta} (z - a))`, a Mobius image of the reference map.
    pub fn mobius(lambda: f64, theta: f64, a: Complex64) -> Self {
        let k = Complex64::from_polar(lambda, theta);
        Self::new(vec![-k * a, k], vec![Complex64::new(1.0, 0.0)], [0.0; 3]).expect("nonzero")
    }

    fn poly(c: &[[f64; 2]]) -> Vec<Complex64> {
        c.iter().map(|a| Complex64::new(a[0], a[1])).collect()
    }

    /// `max(deg P, deg Q)` after cancelling nothing (the spec is taken as given).
    pub fn degree(&self) -> usize {
        let (p, q) = (Self::poly(&self.p), Self::poly(&self.q));
        match (degree(&p), degree(&q)) {
            (Some(a), Some(b)) => a.max(b),
            (a, b) => a.or(b).unwrap_or(0),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let (p, q) = (Self::poly(&self.p), Self::poly(&self.q));
        if degree(&p).is_none() && degree(&q).is_none() {
            return Err(Error::InvalidArgument("P and Q both vanish".into()));
        }
        if self.p.iter().chain(&self.q).flatten().chain(&self.shift).any(|x| !x.is_finite()) {
            return Err(Error::InvalidArgument("non-finite coefficient".into()));
        }
        Ok(())
    }
}

impl PlaneMap for RationalMapSpec {
    fn jet(&self, x: f64, y: f64) -> Jet {
        let z = Complex64::new(x, if self.conjugate { -y } else { y });
        let (p, dp) = horner(&Self::poly(&self.p), z);
        let (q, dq) = horner(&Self::poly(&self.q), z);
        let mut j = if p.norm() <= q.norm() {
            jet_near(p / q, (dp * q - p * dq) / (q * q))
        } else {
            jet_far(q / p, (dq * p - q * dp) / (p * p))
        };
        if self.conjugate {
            j.uy = j.uy.map(|c| -c);
        }
        for k in 0..3 {
            j.u[k] += self.shift[k];
        }
        j
    }
}
