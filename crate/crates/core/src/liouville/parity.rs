//! Antipodal parity. `Y_lm(-x) = (-1)^l Y_lm(x)`, so the even part of a
//! field is its even-degree coefficients.

use crate::sphere::SphereField;

/// Odd-degree coefficient mass below which a field counts as even.
pub const EVEN_TOLERANCE: f64 = 1e-10;

/// `(u(x) + u(-x)) / 2`
pub fn even_symmetrize(u: &SphereField) -> SphereField {
    u.map_degree(|l, c| if l % 2 == 0 { c } else { 0.0 })
}

/// `integral |odd part of u|^2`
pub fn odd_mass(u: &SphereField) -> f64 {
    let c = u.coeffs();
    (1..=u.grid().lmax()).step_by(2).map(|l| c[l * l..(l + 1) * (l + 1)].iter().map(|x| x * x).sum::<f64>()).sum()
}

pub fn is_even(u: &SphereField) -> bool {
    odd_mass(u) < EVEN_TOLERANCE
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sphere::SphereGrid;

    #[test]
    fn parity_of_coordinate_functions() {
        let g = SphereGrid::new(8).unwrap();
        let x3 = SphereField::from_fn(&g, |p| p[2]);
        assert!(even_symmetrize(&x3).coeffs().iter().all(|c| c.abs() < 1e-15));
        assert!(!is_even(&x3));
        let sq = SphereField::from_fn(&g, |p| p[2] * p[2]);
        assert!(is_even(&sq));
        for (a, b) in even_symmetrize(&sq).values().iter().zip(sq.values()) {
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn matches_antipodal_average() {
        let g = SphereGrid::new(10).unwrap();
        let f = |p: [f64; 3]| (p[0] + 0.3 * p[1] * p[2]).exp();
        let u = SphereField::from_fn(&g, f);
        let e = even_symmetrize(&u);
        let avg = SphereField::from_fn(&g, |p| 0.5 * (f(p) + f([-p[0], -p[1], -p[2]])));
        for (a, b) in e.coeffs().iter().zip(avg.coeffs()) {
            assert!((a - b).abs() < 1e-12);
        }
    }
}
