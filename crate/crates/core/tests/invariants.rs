use combwalk::asymptotics::{dispatch, RegimeParams};
use combwalk::contour::cauchy_circle;
use combwalk::dyadic::Dyadic;
use combwalk::green::{eval_g, eval_gd, C64};
use combwalk::harness::{oracle_log, OracleKind};
use combwalk::lattice::{CombVertex, LatticeOracle};
use combwalk::saddle::{phi_x, phi_y, psi_prime, saddle};
use combwalk::series::{green_series_origin, prob_coeff, Axis};
use proptest::prelude::*;

fn axis() -> impl Strategy<Value = Axis> {
    prop_oneof![Just(Axis::Y), Just(Axis::X)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn lattice_and_series_agree(axis in axis(), k in 0u64..8, n in 0usize..30) {
        let start = match axis {
            Axis::Y => CombVertex::new(0, 2 * k as i64),
            Axis::X => CombVertex::new(2 * k as i64, 0),
        };
        let lat = LatticeOracle::new(100).exact_prob(start, CombVertex::ORIGIN, 2 * n).unwrap();
        prop_assert_eq!(lat, prob_coeff::<Dyadic>(axis, k, n).unwrap());
    }

    #[test]
    fn float_oracles_track_exact(axis in axis(), k in 0u64..40, n in 40u64..200) {
        let exact = oracle_log(OracleKind::SeriesExact, axis, k, n, 300).unwrap();
        let float = oracle_log(OracleKind::SeriesFloat, axis, k, n, 300).unwrap();
        let circle = cauchy_circle(axis, k, n, None).unwrap().ln_value;
        prop_assert!((float - exact).abs() < 1e-13 * exact.abs().max(1.0));
        prop_assert!((circle - exact).abs() < 1e-10);
    }

    #[test]
    fn distribution_keeps_mass(x in -3i64..3, y in -3i64..3, n in 0usize..25) {
        let d = LatticeOracle::new(100).distribution(CombVertex::new(x, y), n).unwrap();
        prop_assert_eq!(d.total_mass(), Dyadic::from_int(1));
    }

    #[test]
    fn green_closed_form_matches_series(r in 0.0f64..0.7, th in -3.1f64..3.1) {
        let z = C64::from_polar(r, th);
        let s = green_series_origin::<f64>(250).unwrap();
        let sum = s.coeffs().iter().rev().fold(C64::new(0.0, 0.0), |acc, &c| acc * z + c);
        prop_assert!((eval_g(z).unwrap() - sum).norm() < 1e-12);
    }

    #[test]
    fn green_is_real_on_reals_and_conjugate_symmetric(re in -0.99f64..0.99, im in -1.0f64..1.0, d in 2u32..5) {
        let z = C64::new(re, im);
        let a = eval_gd(d, z).unwrap();
        let b = eval_gd(d, z.conj()).unwrap();
        prop_assert!((a - b.conj()).norm() < 1e-13 * a.norm().max(1.0));
        prop_assert!(eval_gd(d, C64::new(re, 0.0)).unwrap().im.abs() < 1e-15);
    }

    #[test]
    fn saddle_is_stationary_and_rates_are_ordered(xi in 0.001f64..0.95) {
        for axis in [Axis::Y, Axis::X] {
            let s = saddle(axis, xi).unwrap();
            prop_assert!(psi_prime(axis, C64::new(s.z_o, 0.0), xi).unwrap().norm() < 1e-11);
            prop_assert!(s.psi2 > 0.0);
        }
        // the backbone start decays faster at every xi
        prop_assert!(phi_x(xi).unwrap() < phi_y(xi));
    }

    #[test]
    fn estimates_are_finite_probabilities(axis in axis(), n in 50u64..100_000, frac in 0.0f64..0.9) {
        let k = (frac * n as f64) as u64;
        let e = dispatch(axis, k, n, &RegimeParams::default()).unwrap();
        prop_assert!(e.log_value.is_finite() && e.log_value < 0.0);
        if let Some(nb) = &e.neighbor {
            // adjacent windows stay within a factor of two at their shared edge
            prop_assert!((nb.log_value - e.log_value).abs() < 2f64.ln(), "{} vs {}", e.regime, nb.regime);
        }
    }
}
