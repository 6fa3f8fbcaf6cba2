use liouwave::diagnostics::{center_of_mass, mt_sweep, FamilyConfig};
use liouwave::liouville::{evolve, even_symmetrize, lambda_report, odd_mass, CouplingSpec, MonitorConfig, SystemState};
use liouwave::sphere::{analyze, synthesize, SphereField, SphereGrid};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_field(lmax: usize, degree: usize, amp: f64, seed: u64) -> SphereField {
    let g = SphereGrid::new(lmax).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut c = vec![0.0; g.coeff_len()];
    for x in c.iter_mut().take((degree + 1) * (degree + 1)) {
        *x = amp * rng.gen_range(-1.0..1.0);
    }
    SphereField::from_coeffs(&g, c).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn transform_round_trip(lmax in 2usize..20, seed in any::<u64>()) {
        let u = random_field(lmax, lmax, 1.0, seed);
        let back = analyze(u.grid(), &synthesize(u.grid(), u.coeffs()).unwrap()).unwrap();
        for (a, b) in u.coeffs().iter().zip(&back) {
            prop_assert!((a - b).abs() < 1e-11);
        }
    }

    #[test]
    fn center_of_mass_in_unit_ball(degree in 1usize..8, amp in 0.0f64..4.0, seed in any::<u64>()) {
        let cm = center_of_mass(&random_field(12, degree, amp, seed)).unwrap();
        prop_assert!(cm.norm <= 1.0 + 1e-12, "{}", cm.norm);
    }

    #[test]
    fn dirichlet_quadrature_matches_spectral(degree in 1usize..12, seed in any::<u64>()) {
        let u = random_field(16, degree, 1.0, seed);
        let (a, b) = (u.dirichlet().integral, u.dirichlet_quadrature().integral);
        prop_assert!((a - b).abs() <= 1e-10 * a.max(1.0));
    }

    #[test]
    fn scalar_lambda_is_m_minus_alpha(alpha in -2.0f64..2.0) {
        let r = lambda_report(&CouplingSpec::scalar(alpha)).unwrap();
        prop_assert_eq!(r.entries.len(), 1);
        prop_assert!((r.entries[0].value - (1.0 - alpha)).abs() < 1e-15);
        prop_assert_eq!(r.global_existence_hypotheses(), alpha > 0.0 && alpha < 1.0);
    }

    #[test]
    fn lambda_subsets_cover_all(n in 1usize..6, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut a = vec![vec![0.0; n]; n];
        for i in 0..n {
            for j in 0..=i {
                let x = rng.gen_range(0.0..0.3);
                a[i][j] = x;
                a[j][i] = x;
            }
            a[i][i] += 1.0;
        }
        let m: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..1.0)).collect();
        let r = lambda_report(&CouplingSpec::system(a.clone(), m.clone()).unwrap()).unwrap();
        prop_assert_eq!(r.entries.len(), (1 << n) - 1);
        for j in 0..n {
            let v = r.value(&[j + 1]).unwrap();
            prop_assert!((v - (m[j] - a[j][j] * m[j] * m[j])).abs() < 1e-14);
        }
    }
}

#[test]
fn onofri_floors_on_test_family() {
    let r = mt_sweep(&FamilyConfig { size: 300, ..FamilyConfig::default() }).unwrap();
    assert_eq!(r.general.members, 300);
    assert!(r.general.floor >= -1e-9, "{}", r.general.floor);
    assert!(r.even.floor >= -1e-9, "{}", r.even.floor);
    assert!(r.max_dirichlet_seen <= 1.0 + 1e-9);
    assert!(r.max_cm <= 1.0);
}

#[test]
fn mt_sweep_is_deterministic() {
    let c = FamilyConfig { size: 50, lmax: 12, ..FamilyConfig::default() };
    assert_eq!(mt_sweep(&c).unwrap(), mt_sweep(&c).unwrap());
}

#[test]
fn even_data_stay_even() {
    let g = SphereGrid::new(16).unwrap();
    let u = even_symmetrize(&SphereField::from_fn(&g, |x| 0.4 * x[2] * x[2] + 0.3 * x[0] * x[1] + 0.2 * x[0]));
    let v = even_symmetrize(&SphereField::from_fn(&g, |x| 0.2 * (x[1] * x[1] - x[0] * x[0])));
    let s = SystemState::scalar(u, v).unwrap();
    let run = evolve(
        &s,
        &CouplingSpec::scalar(0.5),
        10.0,
        0.02,
        &MonitorConfig { sample_every: 50, keep_states: true, ..Default::default() },
    )
    .unwrap();
    assert!(run.states.len() > 5);
    for st in &run.states {
        assert!(odd_mass(&st.u[0]) < 1e-8, "odd mass {} at t = {}", odd_mass(&st.u[0]), st.t);
        assert!(odd_mass(&st.v[0]) < 1e-8);
    }
}
