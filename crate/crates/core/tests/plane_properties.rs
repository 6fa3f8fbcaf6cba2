use std::f64::consts::PI;

use liouwave::cmc::{
    data_search, f_lambda, quantization_check, stereographic, BumpProfile, PlaneField3, PlaneGrid, PolarQuadrature,
    RationalMapSpec, GROUND_STATE_ENERGY,
};
use num_complex::Complex64;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn stereographic_lands_on_sphere(re in -1e3f64..1e3, im in -1e3f64..1e3) {
        let p = stereographic(Complex64::new(re, im));
        let n = (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt();
        prop_assert!((n - 1.0).abs() < 1e-14);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn f_never_exceeds_ground_state_energy(lambda in 0.0f64..30.0) {
        prop_assert!(f_lambda(lambda).unwrap() <= GROUND_STATE_ENERGY + 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn mobius_images_have_degree_one_energy(lambda in 0.5f64..2.0, theta in 0.0..2.0 * PI, ar in -0.5f64..0.5, ai in -0.5f64..0.5) {
        let spec = RationalMapSpec::mobius(lambda, theta, Complex64::new(ar, ai));
        let quad = PolarQuadrature { center: [ar, ai], ..PolarQuadrature::with_r_cut(1e3) };
        let q = quantization_check(&spec, &quad).unwrap();
        prop_assert!((q.expected - 8.0 * PI).abs() < 1e-12);
        prop_assert!(q.relative_error < 3e-3, "{}", q.relative_error);
    }

    #[test]
    fn search_cubic_matches_grid_energy(lambda in 0.3f64..1.5, s in -3.0f64..3.0) {
        let grid = PlaneGrid::new(64, 16.0).unwrap();
        let phi = PlaneField3::from_map(&grid, &BumpProfile { lambda, inner: 2.0, outer: 4.0 });
        let search = data_search(&phi, (0.0, 3.0), 31).unwrap();
        let direct = phi.scale(s).stationary_energy();
        prop_assert!((search.energy(s) - direct).abs() <= 1e-10 * direct.abs().max(1.0));
        prop_assert!(search.sign * search.cubic <= 0.0);
    }
}
