use std::f64::consts::PI;

use dsu11::gaussian::{phase_matrix, squeezer_matrix, symplectic_form, two_mode_squeezer_matrix};
use dsu11::homodyne;
use dsu11::interferometer::{closed_form_photon_number, evolve_full, probe_state, transfer_coefficients};
use dsu11::metrology;
use dsu11::{Backend, Error, InterferometerConfig, Mode};
use proptest::prelude::*;

fn balanced() -> impl Strategy<Value = InterferometerConfig> {
    (
        (0.0..=2.0f64, -PI..PI, 0.0..=1.0f64, -PI..PI),
        (0.0..=3.0f64, -PI..PI, 0.0..=5.0f64, -PI..PI, -PI..PI),
    )
        .prop_map(|((g, theta1, r, theta_xi), (beta, theta_beta, gamma, theta_gamma, phi))| InterferometerConfig {
            r,
            theta_xi,
            beta,
            theta_beta,
            gamma,
            theta_gamma,
            phi,
            ..InterferometerConfig::balanced(g, theta1)
        })
}

fn figure_angles() -> impl Strategy<Value = InterferometerConfig> {
    (0.05..=2.0f64, 0.0..=1.0f64, 0.0..=3.0f64, 0.0..=5.0f64)
        .prop_map(|(g, r, beta, gamma)| InterferometerConfig::figure(g, r, beta, gamma))
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * b.abs().max(1.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn unitaries_are_symplectic(g in 0.0..2.0f64, theta in -PI..PI, r in 0.0..1.5f64, phi in -PI..PI) {
        let omega = symplectic_form();
        for s in [
            two_mode_squeezer_matrix(g, theta),
            squeezer_matrix(Mode::A, r, theta),
            squeezer_matrix(Mode::B, r, theta),
            phase_matrix(Mode::B, phi),
        ] {
            prop_assert!((s * omega * s.transpose() - omega).abs().max() < 1e-12);
        }
    }

    #[test]
    fn output_states_are_physical(cfg in balanced(), t in 0.0..=1.0f64) {
        let out = evolve_full(&cfg, Some(t), Backend::Gaussian).unwrap();
        prop_assert!(out.as_gaussian().unwrap().uncertainty_margin() > -1e-10);
    }

    #[test]
    fn transfer_coefficients_are_normalized(cfg in balanced()) {
        let c = transfer_coefficients(&cfg);
        prop_assert!((c.y.norm_sqr() - c.z.norm_sqr() - 1.0).abs() < 1e-9 * c.y.norm_sqr());
    }

    #[test]
    fn homodyne_formulas_match_the_engine(cfg in balanced()) {
        let (mean, var) = evolve_full(&cfg, None, Backend::Gaussian).unwrap().quadrature_moments(Mode::A);
        prop_assert!(close(homodyne::output_signal(&cfg).unwrap(), mean, 1e-9));
        prop_assert!(close(homodyne::signal_variance(&cfg).unwrap(), var, 1e-9));
    }

    #[test]
    fn lossy_sensitivity_matches_the_engine(cfg in figure_angles(), phi in -1.0..1.0f64, t in 0.05..=1.0f64) {
        let c = cfg.with_phi(phi);
        match (homodyne::phase_sensitivity_lossy(&c, t), homodyne::phase_sensitivity_numeric(&c, Some(t), 1e-5)) {
            (Ok(closed), Ok(numeric)) => prop_assert!((closed / numeric - 1.0).abs() < 1e-5, "{closed} vs {numeric}"),
            (Err(Error::DivergentSensitivity(_)), _) | (_, Err(Error::DivergentSensitivity(_))) => {}
            (a, b) => prop_assert!(false, "{a:?} {b:?}"),
        }
    }

    #[test]
    fn qfi_routes_agree(cfg in balanced()) {
        let (_, cf) = metrology::cf_moments(&cfg).unwrap();
        let engine = metrology::probe_moments(&cfg).unwrap();
        prop_assert!(close(cf.variance, engine.variance, 1e-9), "{} vs {}", cf.variance, engine.variance);
        prop_assert!(close(cf.gamma1, engine.gamma1, 1e-9));
    }

    #[test]
    fn lossy_qfi_is_monotone_and_bounded(cfg in balanced()) {
        let f = metrology::qfi_ideal(&cfg).unwrap();
        let mut last = 0.0;
        for k in 0..=20 {
            let fl = metrology::qfi_lossy(&cfg, k as f64 / 20.0).unwrap();
            prop_assert!(fl >= last && fl <= f * (1.0 + 1e-12));
            last = fl;
        }
        prop_assert_eq!(last, f);
    }

    #[test]
    fn lossy_sensitivity_improves_with_transmission(cfg in figure_angles()) {
        let mut last = f64::INFINITY;
        for k in 1..=20 {
            let d = homodyne::phase_sensitivity_lossy(&cfg, k as f64 / 20.0).unwrap();
            prop_assert!(d <= last * (1.0 + 1e-12));
            last = d;
        }
    }

    #[test]
    fn loss_gap_narrows_with_displacement(cfg in figure_angles(), t in 0.05..1.0f64, step in 0.01..2.0f64) {
        let gap = |c: &InterferometerConfig| {
            homodyne::phase_sensitivity_lossy(c, t).unwrap() - homodyne::phase_sensitivity(c).unwrap()
        };
        let (near, far) = (gap(&cfg), gap(&cfg.with_gamma(cfg.gamma + step)));
        prop_assert!(far <= near + 1e-12 * near.abs().max(1.0), "{far} > {near}");
    }

    #[test]
    fn closed_form_photon_number_matches_the_probe(cfg in figure_angles()) {
        let engine = probe_state(&cfg, Backend::Gaussian).unwrap().total_photon_number();
        prop_assert!(close(closed_form_photon_number(&cfg), engine, 1e-10));
    }

    #[test]
    fn cramer_rao_bound_sits_below_homodyne(cfg in figure_angles()) {
        let bound = metrology::qcrb(metrology::qfi_ideal(&cfg).unwrap(), 1).unwrap();
        prop_assert!(bound <= homodyne::phase_sensitivity(&cfg).unwrap() * (1.0 + 1e-12));
    }
}

#[test]
fn lossless_limits_are_exact() {
    let cfg = InterferometerConfig::figure(1.3, 0.7, 2.0, 1.5);
    assert_eq!(metrology::qfi_lossy(&cfg, 1.0).unwrap(), metrology::qfi_ideal(&cfg).unwrap());
    assert_eq!(
        homodyne::phase_sensitivity_lossy_optimal(&cfg, 1.0).unwrap(),
        homodyne::phase_sensitivity_optimal(&cfg).unwrap()
    );
    assert_eq!(metrology::qfi_lossy(&cfg, 0.0).unwrap(), 0.0);
}
