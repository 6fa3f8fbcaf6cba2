//! Polar quadrature of the energy densities of closed-form maps on the disc
//! `|z - center| < r_cut`: Gauss-Legendre on geometrically growing radial
//! panels and the trapezoid rule in angle.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::map::PlaneMap;
use crate::sphere::gauss_legendre;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PolarQuadrature {
    pub r_cut: f64,
    pub center: [f64; 2],
    /// Outer radius of the first panel `[0, first_panel]`
    pub first_panel: f64,
    pub panel_ratio: f64,
    pub nodes_per_panel: usize,
    pub angles: usize,
}

impl Default for PolarQuadrature {
    fn default() -> Self {
        Self { r_cut: 1e3, center: [0.0, 0.0], first_panel: 0.25, panel_ratio: 1.3, nodes_per_panel: 20, angles: 256 }
    }
}

/// Integrals of a map over the quadrature disc.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MapIntegrals {
    /// `integral |grad u|^2`
    pub gradient_sq: f64,
    /// `integral u . (u_x x u_y)`
    pub cubic: f64,
    /// `(1/2) gradient_sq + (2/3) cubic`
    pub stationary_energy: f64,
    /// Tail estimate `pi R^2 rho(R)` of the omitted gradient integral, valid for `|z|^-4` decay
    pub gradient_tail: f64,
    pub cubic_tail: f64,
    pub r_cut: f64,
}

impl MapIntegrals {
    /// `|cubic|^(1/3) / ||grad u||`
    pub fn sobolev_ratio(&self) -> f64 {
        if self.gradient_sq > 0.0 {
            self.cubic.abs().cbrt() / self.gradient_sq.sqrt()
        } else {
            0.0
        }
    }
}

impl PolarQuadrature {
    pub fn with_r_cut(r_cut: f64) -> Self {
        Self { r_cut, ..Self::default() }
    }

    fn radial_nodes(&self) -> Vec<(f64, f64)> {
        let (x, w) = gauss_legendre(self.nodes_per_panel);
        let mut edges = vec![0.0, self.first_panel.min(self.r_cut)];
        while *edges.last().unwrap() < self.r_cut {
            let next = (edges.last().unwrap() * self.panel_ratio).min(self.r_cut);
            edges.push(next);
        }
        let mut out = Vec::new();
        for pair in edges.windows(2) {
            let (a, b) = (pair[0], pair[1]);
            for (xi, wi) in x.iter().zip(&w) {
                out.push((0.5 * (a + b) + 0.5 * (b - a) * xi, 0.5 * (b - a) * wi));
            }
        }
        out
    }

    /// Angular means of `|grad u|^2` and `u . (u_x x u_y)` on the circle of radius `r`.
    fn ring(&self, map: &dyn PlaneMap, r: f64) -> (f64, f64) {
        let n = self.angles;
        let (mut g, mut c) = (0.0, 0.0);
        for k in 0..n {
            let th = 2.0 * PI * k as f64 / n as f64;
            let j = map.jet(self.center[0] + r * th.cos(), self.center[1] + r * th.sin());
            g += j.gradient_sq();
            c += j.cubic();
        }
        (g / n as f64, c / n as f64)
    }

    pub fn integrate(&self, map: &dyn PlaneMap) -> MapIntegrals {
        let nodes = self.radial_nodes();
        let rings: Vec<(f64, f64)> = nodes
            .par_iter()
            .map(|&(r, w)| {
                let (g, c) = self.ring(map, r);
                (2.0 * PI * r * w * g, 2.0 * PI * r * w * c)
            })
            .collect();
        let gradient_sq: f64 = rings.iter().map(|x| x.0).sum();
        let cubic: f64 = rings.iter().map(|x| x.1).sum();
        let (ge, ce) = self.ring(map, self.r_cut);
        let area = PI * self.r_cut * self.r_cut;
        MapIntegrals {
            gradient_sq,
            cubic,
            stationary_energy: 0.5 * gradient_sq + 2.0 / 3.0 * cubic,
            gradient_tail: area * ge,
            cubic_tail: area * ce,
            r_cut: self.r_cut,
        }
    }
}
