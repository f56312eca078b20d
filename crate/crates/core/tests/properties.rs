//! Property tests for the structural invariants of the library.

use num_complex::Complex64;
use proptest::prelude::*;

use halfplane_iso_core::conformal::{
    boundary_unimodular_measure, cayley, cayley_inverse, is_finite_blaschke,
};
use halfplane_iso_core::ratfunc::{
    compose, iterate, partial_fractions, PointValue, Polynomial, RationalMap,
};
use halfplane_iso_core::Config;

fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn complex_in_disc(max_radius: f64) -> impl Strategy<Value = Complex64> {
    (0.0..max_radius, 0.0..std::f64::consts::TAU)
        .prop_map(|(r, t)| Complex64::from_polar(r, t))
}

/// `Π (a_i − z)/(1 − ā_i z)`, optionally with the first factor scaled.
fn blaschke_product(zeros: &[Complex64], first_factor_scale: f64) -> RationalMap {
    let mut num = Polynomial::constant(c64(first_factor_scale, 0.0));
    let mut den = Polynomial::one();
    for &a in zeros {
        num = &num * &Polynomial::from_coeffs(vec![a, c64(-1.0, 0.0)]);
        den = &den * &Polynomial::from_coeffs(vec![c64(1.0, 0.0), -a.conj()]);
    }
    RationalMap::new(num, den).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn cayley_round_trip(z in complex_in_disc(0.99)) {
        let w = cayley(z).finite().unwrap();
        prop_assert!(w.im > -1e-12, "image must stay in the closed upper half-plane");
        let back = cayley_inverse(w).finite().unwrap();
        prop_assert!((back - z).norm() < 1e-12);
    }

    #[test]
    fn partial_fraction_reconstruction(
        num_c in prop::collection::vec(-2.0..2.0f64, 1..=7),
        den_c in prop::collection::vec(-2.0..2.0f64, 2..=7),
    ) {
        let cfg = Config::default();
        let r = match RationalMap::from_real(&num_c, &den_c) {
            Ok(r) if r.den().degree() > 0 => r,
            _ => return Ok(()),
        };
        let pf = match partial_fractions(&r, &cfg) {
            Ok(pf) => pf,
            // Clustered poles can be too ill-conditioned for random draws;
            // the contract is an explicit error, not a wrong answer.
            Err(_) => return Ok(()),
        };
        let mut checked = 0;
        for k in 0..400 {
            if checked == 50 {
                break;
            }
            let z = Complex64::from_polar(0.3 + (k % 17) as f64 * 0.45, 0.7 * k as f64);
            let (a, b) = match (r.evaluate(z), pf.eval(z)) {
                (PointValue::Finite(a), PointValue::Finite(b)) => (a, b),
                _ => continue,
            };
            if r.den().eval_scale(z) > 1e4 * r.den().eval(z).norm() {
                continue; // too close to a pole for a meaningful relative check
            }
            // Relative agreement is only demanded above the cancellation
            // noise both evaluation routes carry at z.
            let floor = 1e3 * (r.eval_noise_floor(z) + pf.eval_noise_floor(z));
            prop_assert!(
                (a - b).norm() <= 1e-8 * (1.0 + a.norm()) + floor,
                "reconstruction residual {} at {z}", (a - b).norm()
            );
            checked += 1;
        }
    }

    #[test]
    fn iterate_respects_composition(
        gamma in -3.0..3.0f64,
        mu in -4.0..-0.2f64,
        alpha in -2.0..2.0f64,
        m in 1usize..=2,
        n in 1usize..=2,
    ) {
        let cfg = Config::default();
        // z + alpha + mu/(z - gamma), multiplied out.
        let den = Polynomial::from_real(&[-gamma, 1.0]);
        let num = &(&Polynomial::from_real(&[alpha, 1.0]) * &den)
            + &Polynomial::from_real(&[mu]);
        let r = RationalMap::new(num, den).unwrap();

        let lhs = iterate(&r, m + n, &cfg).unwrap();
        let rhs = compose(
            &iterate(&r, m, &cfg).unwrap(),
            &iterate(&r, n, &cfg).unwrap(),
            &cfg,
        )
        .unwrap();
        let mut checked = 0;
        for k in 0..200 {
            if checked == 20 {
                break;
            }
            let z = Complex64::from_polar(0.6 + (k % 11) as f64, 1.3 * k as f64 + 0.2);
            let (a, b) = match (lhs.evaluate(z), rhs.evaluate(z)) {
                (PointValue::Finite(a), PointValue::Finite(b)) => (a, b),
                _ => continue,
            };
            let floor = 1e3 * (lhs.eval_noise_floor(z) + rhs.eval_noise_floor(z));
            prop_assert!((a - b).norm() <= 1e-8 * (1.0 + a.norm()) + floor);
            checked += 1;
        }
        prop_assert!(checked >= 10);
    }

    #[test]
    fn blaschke_products_test_inner_and_scaling_breaks_it(
        zeros in prop::collection::vec(complex_in_disc(0.9), 1..=5),
    ) {
        let cfg = Config::default();
        let product = blaschke_product(&zeros, 1.0);
        let test = is_finite_blaschke(&product, 1e-6, &cfg).unwrap();
        prop_assert!(test.is_blaschke, "residual {}", test.coeff_residual);

        let damped = blaschke_product(&zeros, 0.99);
        let test = is_finite_blaschke(&damped, 1e-6, &cfg).unwrap();
        prop_assert!(!test.is_blaschke);
    }

    #[test]
    fn boundary_measure_dichotomy(
        zeros in prop::collection::vec(complex_in_disc(0.9), 1..=5),
        damp in prop::bool::ANY,
    ) {
        let cfg = Config::default();
        let scale = if damp { 0.99 } else { 1.0 };
        let phi = blaschke_product(&zeros, scale);
        let samples = 4096;
        let measure = boundary_unimodular_measure(&phi, samples, cfg.tau_boundary);
        let band = 8.0 / samples as f64;
        prop_assert!(
            measure <= band || measure >= 1.0 - band,
            "measure {measure} falls between the dichotomy bands"
        );
        if damp {
            prop_assert!(measure <= band);
        } else {
            prop_assert!(measure >= 1.0 - band);
        }
    }
}
