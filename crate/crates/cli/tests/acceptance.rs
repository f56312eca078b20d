//! Acceptance suite: one test per release criterion, each printing a
//! PASS/FAIL line (run with `--nocapture` to see them all).
//!
//! The criteria pin the classifier against the independent quadrature
//! oracle, the disc-side innerness machinery, the outer-function limit,
//! and the CLI contract, at fixed numeric tolerances.

use std::process::Command;
use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use halfplane_iso_core::classify::{
    classify, NagyBound, PoleTerm, PolyaSzegoForm, PolyaSzegoOutcome, OperatorNorm, Verdict,
    Witness,
};
use halfplane_iso_core::classify::{asymptotic_slope, is_self_map, operator_norm, polya_szego_form, Slope};
use halfplane_iso_core::conformal::{
    boundary_unimodular_measure, build_outer, is_finite_blaschke, is_inner_halfplane,
    transfer_isometry, OuterFunctionSpec,
};
use halfplane_iso_core::oracle::{
    default_battery, equivalence_residual, hardy_norm, integrate_circle,
    measure_preservation_check, nagy_probe, QuadratureSettings, TestFunction,
};
use halfplane_iso_core::quad::integrate_interval;
use halfplane_iso_core::ratfunc::{Polynomial, RationalMap};
use halfplane_iso_core::Config;

fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn cfg() -> Config {
    Config::default()
}

fn settings() -> QuadratureSettings {
    QuadratureSettings::default()
}

fn pass(criterion: u32, summary: &str) {
    println!("[ACCEPTANCE] criterion {criterion}: PASS — {summary}");
}

/// Canonical-form generator: up to `max_terms` poles in [-10, 10] separated
/// by ≥ 0.5, residues in [-10, -0.1], alpha in [-5, 5].
fn random_form(rng: &mut ChaCha8Rng, max_terms: usize) -> PolyaSzegoForm {
    let n = rng.gen_range(0..=max_terms);
    let mut gammas: Vec<f64> = Vec::new();
    while gammas.len() < n {
        let g = rng.gen_range(-10.0..10.0);
        if gammas.iter().all(|x| (x - g).abs() >= 0.5) {
            gammas.push(g);
        }
    }
    let terms = gammas
        .into_iter()
        .map(|gamma| PoleTerm {
            gamma,
            mu: -rng.gen_range(0.1..10.0),
        })
        .collect();
    PolyaSzegoForm {
        sign: 1,
        alpha: rng.gen_range(-5.0..5.0),
        terms,
    }
}

/// `z + alpha + Σ mu_k/(z - gamma_k)` with one pole raised to second order.
fn build_map_with_double_pole(form: &PolyaSzegoForm, doubled: usize) -> RationalMap {
    let mut den = Polynomial::one();
    for (i, t) in form.terms.iter().enumerate() {
        let factor = Polynomial::from_real(&[-t.gamma, 1.0]);
        den = &den * &factor;
        if i == doubled {
            den = &den * &factor;
        }
    }
    let mut num = &Polynomial::from_real(&[form.alpha, 1.0]) * &den;
    for (i, t) in form.terms.iter().enumerate() {
        let mut others = Polynomial::one();
        for (k, o) in form.terms.iter().enumerate() {
            if k == i {
                continue;
            }
            let factor = Polynomial::from_real(&[-o.gamma, 1.0]);
            others = &others * &factor;
            if k == doubled {
                others = &others * &factor;
            }
        }
        num = &num + &others.scale(c64(t.mu, 0.0));
    }
    RationalMap::new(num, den).unwrap()
}

/// `Π (a_i − z)/(1 − ā_i z)`, with an optional damping of the first factor.
fn blaschke_product(zeros: &[Complex64], first_factor_scale: f64) -> RationalMap {
    let mut num = Polynomial::constant(c64(first_factor_scale, 0.0));
    let mut den = Polynomial::one();
    for &a in zeros {
        num = &num * &Polynomial::from_coeffs(vec![a, c64(-1.0, 0.0)]);
        den = &den * &Polynomial::from_coeffs(vec![c64(1.0, 0.0), -a.conj()]);
    }
    RationalMap::new(num, den).unwrap()
}

#[test]
fn criterion_1_generator_closure_and_measure_residuals() {
    let started = Instant::now();
    let cfg = cfg();
    let mut rng = ChaCha8Rng::seed_from_u64(10_001);
    let battery = default_battery();

    let mut forms = Vec::with_capacity(500);
    for _ in 0..500 {
        forms.push(random_form(&mut rng, 5));
    }
    for (i, form) in forms.iter().enumerate() {
        let r = form.build_map(&cfg).unwrap();
        let report = classify(&r, 2.0, &cfg).unwrap();
        assert_eq!(
            report.verdict,
            Verdict::IsometryAndSimilar,
            "form {i} misclassified: {form:?}"
        );
        let cert = report.certificate.expect("isometric verdict carries a certificate");
        assert_eq!(cert.sign, 1);
        assert_eq!(cert.terms.len(), form.terms.len());
    }

    let mut worst: f64 = 0.0;
    for form in forms.iter().take(50) {
        let r = form.build_map(&cfg).unwrap();
        let oracle = measure_preservation_check(&r, &battery, &settings(), &cfg).unwrap();
        let max = oracle.max_residual.unwrap();
        assert!(
            max <= 1e-6,
            "invariant-integral residual {max:.3e} for {form:?}"
        );
        worst = worst.max(max);
    }

    let elapsed = started.elapsed();
    assert!(
        elapsed.as_secs_f64() <= 60.0,
        "criterion must complete within 60 s, took {elapsed:?}"
    );
    pass(
        1,
        &format!("500 canonical forms isometric; 50 oracle residuals ≤ 1e-6 (worst {worst:.2e}) in {elapsed:.2?}"),
    );
}

#[test]
fn criterion_2_slope_one_inner_self_maps_have_canonical_form() {
    let cfg = cfg();
    let mut rng = ChaCha8Rng::seed_from_u64(10_002);
    let mut admitted = 0usize;

    for round in 0..1000 {
        // Half arbitrary monic/monic real coefficients, half pole-term sums
        // with random residue signs; both populations have
        // deg num = deg den + 1 ≤ 6 and real coefficients.
        let r = if round % 2 == 0 {
            let dd = rng.gen_range(0..=5usize);
            let mut den_c: Vec<f64> = (0..dd).map(|_| rng.gen_range(-3.0..3.0)).collect();
            den_c.push(1.0);
            let mut num_c: Vec<f64> = (0..=dd).map(|_| rng.gen_range(-3.0..3.0)).collect();
            num_c.push(1.0);
            match RationalMap::from_real(&num_c, &den_c) {
                Ok(r) => r,
                Err(_) => continue,
            }
        } else {
            let mut form = random_form(&mut rng, 5);
            for t in &mut form.terms {
                if rng.gen_bool(0.5) {
                    t.mu = -t.mu;
                }
            }
            match form.build_map(&cfg) {
                Ok(r) => r,
                Err(_) => continue,
            }
        };

        if asymptotic_slope(&r) != Slope::Finite(c64(1.0, 0.0)) {
            continue;
        }
        if !is_inner_halfplane(&r, cfg.tau_real).is_inner() {
            continue;
        }
        if !is_self_map(&r, &cfg).unwrap().is_self_map {
            continue;
        }
        admitted += 1;
        match polya_szego_form(&r, &cfg).unwrap() {
            PolyaSzegoOutcome::Form(f) => {
                assert_eq!(f.sign, 1, "sign must be +1 for {r}");
                for t in &f.terms {
                    assert!(t.mu < 0.0, "residue {} at pole {} for {r}", t.mu, t.gamma);
                }
            }
            PolyaSzegoOutcome::Rejected(reason) => {
                panic!("inner slope-1 self-map rejected ({reason:?}): {r}")
            }
        }
    }
    assert!(admitted >= 50, "filter admitted only {admitted} of 1000");
    pass(
        2,
        &format!("{admitted}/1000 filtered maps, all with simple real poles and negative residues"),
    );
}

#[test]
fn criterion_3_witness_soundness_for_perturbed_forms() {
    let cfg = cfg();
    let mut rng = ChaCha8Rng::seed_from_u64(10_003);
    let mut residue_flips = 0usize;
    let mut pole_doublings = 0usize;

    for _ in 0..200 {
        let mut form = random_form(&mut rng, 5);
        if form.terms.is_empty() {
            form.terms.push(PoleTerm {
                gamma: rng.gen_range(-10.0..10.0),
                mu: -rng.gen_range(0.1..10.0),
            });
        }
        let idx = rng.gen_range(0..form.terms.len());
        let r = if rng.gen_bool(0.5) {
            residue_flips += 1;
            form.terms[idx].mu = form.terms[idx].mu.abs();
            form.build_map(&cfg).unwrap()
        } else {
            pole_doublings += 1;
            build_map_with_double_pole(&form, idx)
        };

        let report = classify(&r, 2.0, &cfg).unwrap();
        assert_eq!(report.verdict, Verdict::InvalidSymbol, "map {r} not invalidated");
        match report.witness.expect("invalid symbol carries a witness") {
            Witness::Point { z, im_r } => {
                assert!(z.im > 0.0, "witness {z} not in the upper half-plane");
                assert!(im_r < -1e-9, "witness image {im_r} not below -1e-9");
                let direct = r.evaluate(z).finite().expect("witness avoids poles");
                assert!(direct.im < -1e-9, "direct evaluation disagrees at {z}");
            }
            Witness::Reason { code } => panic!("expected a point witness, got {code}"),
        }
    }
    pass(
        3,
        &format!("200 perturbed forms invalidated ({residue_flips} residue flips, {pole_doublings} pole doublings), all witnesses sound"),
    );
}

#[test]
fn criterion_4_power_orbit_tables() {
    let cfg = cfg();
    let kernel = [TestFunction::HpKernel { w: c64(0.0, 1.0), m: 1 }];

    // Vertical translation: ratio(n)² = 1/(n+1).
    let translation = RationalMap::new(
        Polynomial::from_coeffs(vec![c64(0.0, 1.0), c64(1.0, 0.0)]),
        Polynomial::one(),
    )
    .unwrap();
    let report = nagy_probe(
        &translation,
        2.0,
        &kernel,
        8,
        NagyBound::new(10.0).unwrap(),
        &settings(),
        &cfg,
    )
    .unwrap();
    assert_eq!(report.norm_orbit.len(), 9);
    let mut worst_sq: f64 = 0.0;
    for entry in &report.norm_orbit {
        let expected_sq = 1.0 / (entry.n as f64 + 1.0);
        let dev = (entry.ratio * entry.ratio - expected_sq).abs();
        assert!(
            dev <= 1e-6,
            "n = {}: ratio² = {} vs {expected_sq}",
            entry.n,
            entry.ratio * entry.ratio
        );
        worst_sq = worst_sq.max(dev);
    }

    // Measure-preserving symbol: every ratio pinned to 1.
    let inner = RationalMap::from_real(&[-1.0, 0.0, 1.0], &[0.0, 1.0]).unwrap();
    let report = nagy_probe(
        &inner,
        2.0,
        &kernel,
        8,
        NagyBound::new(2.0).unwrap(),
        &settings(),
        &cfg,
    )
    .unwrap();
    assert!(report.nagy.as_ref().unwrap().pass);
    let mut worst_one: f64 = 0.0;
    for entry in &report.norm_orbit {
        let dev = (entry.ratio - 1.0).abs();
        assert!(dev <= 1e-4, "n = {}: ratio {}", entry.n, entry.ratio);
        worst_one = worst_one.max(dev);
    }
    pass(
        4,
        &format!("translation orbit matches 1/(n+1) within {worst_sq:.2e}; isometric orbit within {worst_one:.2e} of 1"),
    );
}

#[test]
fn criterion_5_norm_formula_cross_validation() {
    let cfg = cfg();
    let double = RationalMap::from_real(&[0.0, 2.0], &[1.0]).unwrap();

    match operator_norm(&double, 2.0, &cfg).unwrap() {
        OperatorNorm::Finite(v) => assert!((v - 0.5_f64.sqrt()).abs() < 1e-15),
        other => panic!("expected finite norm, got {other:?}"),
    }

    let report = nagy_probe(
        &double,
        2.0,
        &default_battery(),
        1,
        NagyBound::new(2.0).unwrap(),
        &settings(),
        &cfg,
    )
    .unwrap();
    let max_ratio_1 = report
        .norm_orbit
        .iter()
        .filter(|e| e.n == 1)
        .map(|e| e.ratio)
        .fold(f64::NEG_INFINITY, f64::max);
    assert!(
        (0.70..=0.7072).contains(&max_ratio_1),
        "max ratio(1, f) = {max_ratio_1}"
    );
    pass(
        5,
        &format!("operator norm 2^(-1/2); oracle max ratio(1, f) = {max_ratio_1:.6}"),
    );
}

#[test]
fn criterion_6_transfer_equivalence_and_unitarity() {
    let cfg = cfg();
    let battery = default_battery();
    let symbols = vec![
        RationalMap::identity(),
        RationalMap::from_real(&[1.0, 1.0], &[1.0]).unwrap(),
        RationalMap::from_real(&[0.0, 2.0], &[1.0]).unwrap(),
        RationalMap::from_real(&[-1.0, 0.0, 1.0], &[0.0, 1.0]).unwrap(),
    ];
    let mut worst: f64 = 0.0;
    for phi in &symbols {
        let report = equivalence_residual(phi, 2.0, &battery, &settings(), &cfg).unwrap();
        let max = report.max_residual.unwrap();
        assert!(max <= 1e-6, "transfer residual {max:.3e} for {phi}");
        worst = worst.max(max);
    }

    let mut worst_unitarity: f64 = 0.0;
    for f in [
        TestFunction::HpKernel { w: c64(0.0, 1.0), m: 1 },
        TestFunction::HpKernel { w: c64(1.0, 2.0), m: 2 },
    ] {
        let (line_norm, _) = hardy_norm(&f, 2.0, &settings()).unwrap();
        let vf = transfer_isometry(|w| f.eval(w), 2.0);
        let circle = integrate_circle(
            &|z| {
                let v = vf(z).norm_sqr();
                if v.is_finite() {
                    v
                } else {
                    0.0
                }
            },
            &settings(),
        );
        let disc_norm = circle.value.sqrt();
        let dev = (disc_norm - line_norm).abs();
        assert!(dev <= 1e-6, "{}: |‖Vf‖ − ‖f‖| = {dev:.3e}", f.label());
        worst_unitarity = worst_unitarity.max(dev);
    }
    pass(
        6,
        &format!("4 symbols within {worst:.2e}; transfer unitarity within {worst_unitarity:.2e}"),
    );
}

#[test]
fn criterion_7_blaschke_exactness_and_dichotomy() {
    let cfg = cfg();
    let mut rng = ChaCha8Rng::seed_from_u64(10_007);
    let samples = 4096usize;
    let band = 8.0 / samples as f64;

    for i in 0..50 {
        let count = rng.gen_range(1..=5usize);
        let zeros: Vec<Complex64> = (0..count)
            .map(|_| {
                Complex64::from_polar(
                    rng.gen_range(0.0..0.9),
                    rng.gen_range(0.0..std::f64::consts::TAU),
                )
            })
            .collect();

        let product = blaschke_product(&zeros, 1.0);
        let test = is_finite_blaschke(&product, 1e-6, &cfg).unwrap();
        assert!(
            test.is_blaschke,
            "product {i} rejected (residual {:.3e})",
            test.coeff_residual
        );

        let damped = blaschke_product(&zeros, 0.99);
        let test = is_finite_blaschke(&damped, 1e-6, &cfg).unwrap();
        assert!(!test.is_blaschke, "damped product {i} accepted");

        for (phi, expect_inner) in [(&product, true), (&damped, false)] {
            let measure = boundary_unimodular_measure(phi, samples, cfg.tau_boundary);
            assert!(
                measure <= band || measure >= 1.0 - band,
                "dichotomy violated: measure {measure}"
            );
            assert_eq!(measure >= 1.0 - band, expect_inner);
        }
    }
    pass(7, "50 products exact under the coefficient identity; damping flips them; dichotomy band respected");
}

#[test]
fn criterion_8_outer_function_power_limit() {
    // Two-level boundary modulus (1 on half the circle, 1/2 elsewhere):
    // the boundary p-means of f^j must approach the measure of the
    // modulus-1 arc. Evaluation happens just inside the boundary, where
    // the smoothing bias stays a few multiples of 1 − ρ.
    let spec = OuterFunctionSpec::two_level(0.5, 0.5).unwrap();
    let rho = 1.0 - 1e-4;
    let outer_settings = QuadratureSettings {
        abs_tol: 1e-9,
        rel_tol: 1e-9,
        max_depth: 44,
    };
    let mean_settings = QuadratureSettings {
        abs_tol: 1e-7,
        rel_tol: 1e-7,
        max_depth: 44,
    };

    // The arc endpoints sit at angles 0 and ±π; grade toward them.
    let mut breaks = Vec::new();
    for k in 0..=18 {
        let off = std::f64::consts::PI * 0.5_f64.powi(k);
        breaks.push(-off);
        breaks.push(off);
        breaks.push(std::f64::consts::PI - off);
        breaks.push(-std::f64::consts::PI + off);
    }

    let log_mod = |theta: f64| -> f64 {
        build_outer(&spec, Complex64::from_polar(rho, theta), &outer_settings)
            .unwrap()
            .norm()
            .ln()
    };

    let mut previous = f64::INFINITY;
    let mut at_24 = f64::NAN;
    for j in 1..=24u32 {
        let result = integrate_interval(
            &|theta| (2.0 * j as f64 * log_mod(theta)).exp(),
            -std::f64::consts::PI,
            std::f64::consts::PI,
            &breaks,
            &mean_settings,
        );
        assert!(result.converged, "power mean j = {j} did not converge");
        let mean = result.value / std::f64::consts::TAU;
        assert!(
            mean <= previous + 10.0 * result.error_estimate + 1e-9,
            "power means must decrease: j = {j}, {mean} after {previous}"
        );
        previous = mean;
        if j == 24 {
            at_24 = mean;
        }
    }
    assert!(
        (at_24 - 0.5).abs() <= 5e-3,
        "limit at j = 24 is {at_24}, expected 0.5 ± 5e-3"
    );
    pass(
        8,
        &format!("boundary power means decrease to {at_24:.5} at j = 24 (target 0.5 ± 5e-3)"),
    );
}

fn run_cli(args: &[&str]) -> (i32, String) {
    let output = Command::new(env!("CARGO_BIN_EXE_halfplane-iso"))
        .args(args)
        .output()
        .expect("binary runs");
    (
        output.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&output.stdout).into_owned(),
    )
}

#[test]
fn criterion_9_cli_contract_and_determinism() {
    // Exit-code contract over the golden corpus: 0 verdict, 2 invalid
    // symbol, 3 input error, 4 numerical failure.
    let corpus: Vec<(Vec<&str>, i32)> = vec![
        (vec!["classify", "z - 1/z", "--p", "2"], 0),
        (vec!["classify", "z"], 0),
        (vec!["classify", "2*z"], 0),
        (vec!["classify", "z + i"], 0),
        (vec!["classify", "-1/z"], 0),
        (vec!["classify", "z + 1/z", "--p", "2"], 2),
        (vec!["classify", "-(z - 1/z)"], 2),
        (vec!["classify", "z - 1/z^2"], 2),
        (vec!["classify", "1/z"], 2),
        (vec!["classify", "z +"], 3),
        (vec!["classify", "z^-1"], 3),
        (vec!["classify", "(z-z)/(z-z)"], 3),
        (vec!["classify", "w + 1"], 3),
        (vec!["classify", "z^65"], 3),
        (vec!["oracle-measure", "z - 1/z"], 0),
        (vec!["oracle-measure", "z + i"], 2),
        (vec!["oracle-nagy", "z - 1/z", "--n", "3", "--k", "2"], 0),
        (vec!["oracle-nagy", "z", "--n", "2", "--k", "0.5"], 3),
        (
            vec!["oracle-nagy", "z", "--n", "1", "--k", "2", "--p", "1", "--battery", "kernels"],
            4,
        ),
        (vec!["oracle-equiv", "z + 1"], 0),
    ];
    assert_eq!(corpus.len(), 20);
    for (args, expected) in &corpus {
        let (code, _) = run_cli(args);
        assert_eq!(
            code, *expected,
            "exit code mismatch for {:?}",
            args.join(" ")
        );
    }

    // Byte-identical JSON across repeated deterministic runs.
    for args in [
        vec!["classify", "z - 1/z", "--p", "2", "--json", "--deterministic"],
        vec!["oracle-nagy", "z - 1/z", "--n", "2", "--k", "2", "--json", "--deterministic"],
        vec!["blaschke", "(z - 1/2)/(1 - z/2)", "--json", "--deterministic"],
        vec!["transfer", "2*z", "--json", "--deterministic"],
    ] {
        let (code_a, out_a) = run_cli(&args);
        let (code_b, out_b) = run_cli(&args);
        assert_eq!(code_a, code_b);
        assert!(!out_a.is_empty());
        assert_eq!(out_a, out_b, "bytes differ for {:?}", args.join(" "));
    }
    pass(9, "20-case exit-code corpus and byte-identical deterministic JSON");
}
