//! Maps `R^2 -> R^3` given in closed form with exact first derivatives.

use serde::{Deserialize, Serialize};

use super::stereo::{RationalMapSpec, NORTH_POLE};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Jet {
    pub u: [f64; 3],
    pub ux: [f64; 3],
    pub uy: [f64; 3],
}

impl Jet {
    /// `|u_x|^2 + |u_y|^2`
    pub fn gradient_sq(&self) -> f64 {
        dot(self.ux, self.ux) + dot(self.uy, self.uy)
    }

    /// `u . (u_x x u_y)`
    pub fn cubic(&self) -> f64 {
        dot(self.u, cross(self.ux, self.uy))
    }
}

pub fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

pub fn dot(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub trait PlaneMap: Sync {
    fn jet(&self, x: f64, y: f64) -> Jet;

    fn value(&self, x: f64, y: f64) -> [f64; 3] {
        self.jet(x, y).u
    }
}

/// `C^infinity` step: 0 for `t <= 0`, 1 for `t >= 1`; returns value and derivative.
pub fn smooth_step(t: f64) -> (f64, f64) {
    if t <= 0.0 {
        return (0.0, 0.0);
    }
    if t >= 1.0 {
        return (1.0, 0.0);
    }
    let a = (-1.0 / t).exp();
    let b = (-1.0 / (1.0 - t)).exp();
    let da = a / (t * t);
    let db = -b / ((1.0 - t) * (1.0 - t));
    let s = a + b;
    (a / s, (da * s - a * (da + db)) / (s * s))
}

/// Radial cutoff: 1 on `r <= inner`, 0 on `r >= outer`; value and `d/dr`.
pub fn cutoff(r: f64, inner: f64, outer: f64) -> (f64, f64) {
    let (s, ds) = smooth_step((outer - r) / (outer - inner));
    (s, -ds / (outer - inner))
}

/// `eta(r) (W(z / lambda) - (0, 0, 1))`: a compactly supported profile that
/// agrees with a dilated ground state (shifted to vanish at infinity) on the
/// disc of radius `inner`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BumpProfile {
    pub lambda: f64,
    pub inner: f64,
    /// Support radius
    pub outer: f64,
}

impl PlaneMap for BumpProfile {
    fn jet(&self, x: f64, y: f64) -> Jet {
        let r = x.hypot(y);
        if r >= self.outer {
            return Jet { u: [0.0; 3], ux: [0.0; 3], uy: [0.0; 3] };
        }
        let w = RationalMapSpec::reference().jet(x / self.lambda, y / self.lambda);
        let (eta, deta) = cutoff(r, self.inner, self.outer);
        let base = [w.u[0] - NORTH_POLE[0], w.u[1] - NORTH_POLE[1], w.u[2] - NORTH_POLE[2]];
        let (cx, cy) = if r > 0.0 { (x / r, y / r) } else { (0.0, 0.0) };
        let mut j = Jet { u: [0.0; 3], ux: [0.0; 3], uy: [0.0; 3] };
        for k in 0..3 {
            j.u[k] = eta * base[k];
            j.ux[k] = deta * cx * base[k] + eta * w.ux[k] / self.lambda;
            j.uy[k] = deta * cy * base[k] + eta * w.uy[k] / self.lambda;
        }
        j
    }
}

/// `sum_k a_k exp(-|z - c_k|^2 / w_k^2)` with vector amplitudes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GaussianSum {
    pub terms: Vec<GaussianTerm>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GaussianTerm {
    pub amplitude: [f64; 3],
    pub center: [f64; 2],
    pub width: f64,
}

impl PlaneMap for GaussianSum {
    fn jet(&self, x: f64, y: f64) -> Jet {
        let mut j = Jet { u: [0.0; 3], ux: [0.0; 3], uy: [0.0; 3] };
        for t in &self.terms {
            let (dx, dy) = (x - t.center[0], y - t.center[1]);
            let w2 = t.width * t.width;
            let g = (-(dx * dx + dy * dy) / w2).exp();
            for k in 0..3 {
                j.u[k] += t.amplitude[k] * g;
                j.ux[k] += -2.0 * dx / w2 * t.amplitude[k] * g;
                j.uy[k] += -2.0 * dy / w2 * t.amplitude[k] * g;
            }
        }
        j
    }
}

/// `scale * base + perturbation`
pub struct Combination<'a> {
    pub base: &'a dyn PlaneMap,
    pub scale: f64,
    pub perturbation: Option<&'a dyn PlaneMap>,
}

impl PlaneMap for Combination<'_> {
    fn jet(&self, x: f64, y: f64) -> Jet {
        let mut j = self.base.jet(x, y);
        for k in 0..3 {
            j.u[k] *= self.scale;
            j.ux[k] *= self.scale;
            j.uy[k] *= self.scale;
        }
        if let Some(p) = self.perturbation {
            let q = p.jet(x, y);
            for k in 0..3 {
                j.u[k] += q.u[k];
                j.ux[k] += q.ux[k];
                j.uy[k] += q.uy[k];
            }
        }
        j
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_fd(m: &dyn PlaneMap, pts: &[(f64, f64)]) {
        let h = 1e-6;
        for &(x, y) in pts {
            let j = m.jet(x, y);
            let (a, b) = (m.value(x + h, y), m.value(x - h, y));
            let (c, d) = (m.value(x, y + h), m.value(x, y - h));
            for k in 0..3 {
                assert!((j.ux[k] - (a[k] - b[k]) / (2.0 * h)).abs() < 1e-6, "{x} {y}");
                assert!((j.uy[k] - (c[k] - d[k]) / (2.0 * h)).abs() < 1e-6, "{x} {y}");
            }
        }
    }

    #[test]
    fn smooth_step_shape() {
        assert_eq!(smooth_step(-1.0), (0.0, 0.0));
        assert_eq!(smooth_step(2.0), (1.0, 0.0));
        assert!((smooth_step(0.5).0 - 0.5).abs() < 1e-15);
        let h = 1e-7;
        for t in [0.1, 0.3, 0.77] {
            let fd = (smooth_step(t + h).0 - smooth_step(t - h).0) / (2.0 * h);
            assert!((smooth_step(t).1 - fd).abs() < 1e-6);
        }
    }

    #[test]
    fn profile_and_gaussians_jets() {
        let b = BumpProfile { lambda: 0.5, inner: 1.5, outer: 3.0 };
        check_fd(&b, &[(0.2, 0.1), (1.0, 1.4), (2.0, -1.2), (-0.1, 2.7)]);
        assert_eq!(b.value(3.1, 0.0), [0.0; 3]);
        let w = super::super::stereo::RationalMapSpec::reference();
        let inside = [0.3, -0.4];
        let (p, q) = (b.value(inside[0], inside[1]), w.value(inside[0] / 0.5, inside[1] / 0.5));
        assert!((p[2] - (q[2] - 1.0)).abs() < 1e-15);
        let g = GaussianSum {
            terms: vec![
                GaussianTerm { amplitude: [1.0, -0.5, 0.2], center: [0.3, 0.1], width: 0.8 },
                GaussianTerm { amplitude: [0.0, 0.7, 1.1], center: [-1.0, 0.5], width: 1.3 },
            ],
        };
        check_fd(&g, &[(0.0, 0.0), (1.1, -0.6)]);
    }
}
