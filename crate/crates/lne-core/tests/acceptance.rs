//! Acceptance gate. Each test runs one criterion end to end and prints a
//! single pass or fail line, so `cargo test --test acceptance -- --nocapture`
//! doubles as a checklist.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use lne_core::curve::{plane_curve_ne, space_curve_ne, Reason, Status};
use lne_core::parse::parse_polynomial;
use lne_core::poly::gcd::is_squarefree;
use lne_core::poly::Polynomial;
use lne_core::puiseux::{puiseux_expand, residual_check};
use lne_core::report;
use lne_core::scalar::ExactScalar;
use lne_core::slicer::{
    brieskorn_test, discriminant, is_general, revalidate, sectional_test, SearchConfig,
    SliceCertificate,
};
use lne_core::tol;
use lne_core::witness::{
    arc_pair_from_branches, report_for_pair, witness_report, Conclusion, WitnessConfig,
    WitnessReport,
};

fn gate(number: u32, name: &str, body: impl FnOnce()) {
    let outcome = catch_unwind(AssertUnwindSafe(body));
    println!(
        "criterion {number} ({name}): {}",
        if outcome.is_ok() { "PASS" } else { "FAIL" }
    );
    if let Err(payload) = outcome {
        std::panic::resume_unwind(payload);
    }
}

fn p(text: &str) -> Polynomial {
    let vars = vec!["x".to_string(), "y".to_string()];
    parse_polynomial(text, Some(&vars)).unwrap()
}

fn germ(text: &str) -> Polynomial {
    parse_polynomial(text, None).unwrap()
}

fn ones(n: usize) -> Vec<ExactScalar> {
    vec![ExactScalar::one(); n]
}

/// Equality up to a nonzero constant, by cross-scaling with the leading
/// coefficients.
fn proportional(a: &Polynomial, b: &Polynomial) -> bool {
    match (a.leading(), b.leading()) {
        (Some((ma, ca)), Some((mb, cb))) => ma == mb && a.scale(cb) == b.scale(ca),
        (None, None) => true,
        _ => false,
    }
}

/// Exponent triples with 1 < k1 < k2 <= k3 <= 6.
fn sweep_triples() -> Vec<(u32, u32, u32)> {
    let mut triples = Vec::new();
    for k1 in 2..=6u32 {
        for k2 in (k1 + 1)..=6 {
            for k3 in k2..=6 {
                triples.push((k1, k2, k3));
            }
        }
    }
    triples
}

fn full_pipeline_certificate(f: &Polynomial) -> SliceCertificate {
    let config = SearchConfig {
        use_cone_shortcut: false,
        precision: 128,
        ..SearchConfig::default()
    };
    let verdict = sectional_test(f, &config).unwrap();
    assert_eq!(verdict.status, Status::NonNE, "{f}");
    match verdict.reason {
        Reason::SliceWitness(certificate) => *certificate,
        other => panic!("{f}: expected a slice witness, got {other:?}"),
    }
}

/// Ordinary least squares slope of ln(value) against ln(t); an oracle kept
/// independent of the library's own fit.
fn log_slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let (mut sx, mut sy, mut sxx, mut sxy) = (0.0, 0.0, 0.0, 0.0);
    for &(t, value) in points {
        let (x, y) = (t.ln(), value.ln());
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    (n * sxy - sx * sy) / (n * sxx - sx * sx)
}

#[test]
fn criterion_1_verdict_corpus() {
    gate(1, "verdict corpus", || {
        for (text, expected) in [
            ("x^2 - y^2", Status::NE),
            ("y^2 + x^4", Status::NonNE),
            ("y^2 - x^3", Status::NonNE),
        ] {
            let start = Instant::now();
            let verdict = plane_curve_ne(&p(text)).unwrap();
            assert_eq!(verdict.status, expected, "{text}");
            assert!(start.elapsed() < Duration::from_secs(1), "{text} too slow");
        }
        for text in ["x^3 + x^2*y + y^3*z + z^5", "x^3 + x^2*y + z^5"] {
            let start = Instant::now();
            let verdict = sectional_test(&germ(text), &SearchConfig::default()).unwrap();
            assert_eq!(verdict.status, Status::NonNE, "{text}");
            assert!(
                matches!(verdict.reason, Reason::MultipleConeComponent { .. }),
                "{text}: expected a multiple cone component"
            );
            assert!(start.elapsed() < Duration::from_secs(1), "{text} too slow");
        }
        let start = Instant::now();
        assert_eq!(
            brieskorn_test(&[2, 3, 3], &ones(3)).unwrap().status,
            Status::NonNE
        );
        assert_eq!(
            brieskorn_test(&[2, 2, 3], &ones(3)).unwrap().status,
            Status::Inconclusive
        );
        assert!(start.elapsed() < Duration::from_secs(1));
    });
}

#[test]
fn criterion_2_generality_detection() {
    gate(2, "non-generality detection", || {
        let f = germ("x^2 + y^2 - z^3");
        let zero = ExactScalar::zero;
        let one = ExactScalar::one;
        assert!(
            is_general(&f, &[zero(), zero(), one()]).unwrap().is_none(),
            "(0,0,1) lies in the tangent cone and must be rejected"
        );
        let frame = is_general(&f, &[one(), zero(), zero()])
            .unwrap()
            .expect("(1,0,0) misses the cone x^2 + y^2 = 0");
        let delta = discriminant(&f, &frame).unwrap();

        // Sylvester oracle: with x projected out, f = x^2 + g(s1, s2) where
        // the base keeps (y, z) as (s1, s2), so Res_x(f, 2x) is the 3 by 3
        // determinant below; it must come out as 4 g and the reduced
        // discriminant as g up to a unit.
        let vars = vec!["s1".to_string(), "s2".to_string()];
        let c = |text: &str| parse_polynomial(text, Some(&vars)).unwrap();
        let g = c("s1^2 - s2^3");
        let m = [
            [c("1"), c("0"), g.clone()],
            [c("2"), c("0"), c("0")],
            [c("0"), c("2"), c("0")],
        ];
        let mut det = Polynomial::zero(&vars);
        for j in 0..3 {
            let minor = &(&m[1][(j + 1) % 3] * &m[2][(j + 2) % 3])
                - &(&m[1][(j + 2) % 3] * &m[2][(j + 1) % 3]);
            det = &det + &(&m[0][j] * &minor);
        }
        assert_eq!(det, g.scale(&ExactScalar::from_int(4)));
        assert!(proportional(&delta, &det), "discriminant {delta} vs {det}");
    });
}

#[test]
fn criterion_3_brieskorn_sweep() {
    gate(3, "Brieskorn sweep", || {
        let triples = sweep_triples();
        assert_eq!(triples.len(), 20);
        for (k1, k2, k3) in triples {
            let text = format!("x^{k1} + y^{k2} + z^{k3}");
            let f = germ(&text);
            let start = Instant::now();
            let certificate = full_pipeline_certificate(&f);
            let checks = revalidate(&f, &certificate).unwrap();
            let elapsed = start.elapsed();
            assert_eq!(checks.len(), 6, "{text}");
            assert!(elapsed < Duration::from_secs(10), "{text} took {elapsed:?}");
        }
    });
}

#[test]
fn criterion_4_puiseux_property_suite() {
    gate(4, "Puiseux property suite", || {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        let vars = vec!["x".to_string(), "y".to_string()];
        let horizon = BigRational::from_integer(BigInt::from(6));
        let mut checked = 0;
        while checked < 200 {
            let mut terms = Vec::new();
            for a in 0..=6u32 {
                for b in 0..=(6 - a) {
                    if a + b == 0 || !rng.gen_bool(0.4) {
                        continue;
                    }
                    let re = rng.gen_range(-5i64..=5);
                    let im = rng.gen_range(-5i64..=5);
                    if re == 0 && im == 0 {
                        continue;
                    }
                    let c = ExactScalar::from_int(re)
                        + ExactScalar::from_int(im) * ExactScalar::i();
                    terms.push((vec![a, b], c));
                }
            }
            let Ok(f) = Polynomial::from_terms(&vars, terms) else {
                continue;
            };
            if f.is_zero() {
                continue;
            }
            let ord = f.order_at_origin().unwrap();
            if ord == 0 || ord > 4 || !is_squarefree(&f).unwrap() {
                continue;
            }

            let branches =
                tol::retry_with_precision(128, |prec| puiseux_expand(&f, &horizon, prec))
                    .unwrap();
            let total: u32 = branches.iter().map(|b| b.ramification_index).sum();
            assert_eq!(total, ord, "germ {f}");
            for branch in &branches {
                let residual = residual_check(&f, branch, 3, 192).unwrap();
                assert!(residual < 1e-15, "germ {f}: residual {residual:e}");
            }
            let plane = plane_curve_ne(&f).unwrap().status;
            let space =
                tol::retry_with_precision(128, |prec| space_curve_ne(&branches, prec))
                    .unwrap()
                    .status;
            assert_eq!(plane, space, "germ {f}");
            checked += 1;
        }
    });
}

fn control_pair_report(config: &WitnessConfig) -> WitnessReport {
    let f = p("x^2 - y^2");
    let horizon = BigRational::from_integer(BigInt::from(6));
    let branches = puiseux_expand(&f, &horizon, config.precision).unwrap();
    assert_eq!(branches.len(), 2);
    let pair =
        arc_pair_from_branches(&f, branches[0].clone(), branches[1].clone(), config).unwrap();
    report_for_pair(&f, &pair, config, Vec::new()).unwrap()
}

#[test]
fn criterion_5_witness_asymptotics() {
    gate(5, "witness asymptotics", || {
        let config = WitnessConfig::default();
        assert_eq!(config.t_min, 1e-6);
        assert_eq!(config.t_max, 1e-2);

        let start = Instant::now();
        let cusp = witness_report(&p("y^2 - x^3"), &config).unwrap();
        assert!(start.elapsed() < Duration::from_secs(5), "cusp too slow");
        assert!(
            (cusp.fitted_slope + 0.5).abs() <= 0.1,
            "cusp ratio slope {}",
            cusp.fitted_slope
        );
        assert_eq!(cusp.conclusion, Conclusion::RatioDiverges);
        let outer: Vec<(f64, f64)> = cusp.samples.iter().map(|r| (r.t, r.outer)).collect();
        let outer_slope = log_slope(&outer);
        assert!(
            (outer_slope - 1.5).abs() <= 0.05,
            "cusp outer slope {outer_slope}"
        );

        let start = Instant::now();
        let noncusp = witness_report(&p("y^2 + x^4"), &config).unwrap();
        assert!(start.elapsed() < Duration::from_secs(5), "noncusp too slow");
        assert!(
            (noncusp.fitted_slope + 1.0).abs() <= 0.1,
            "noncusp ratio slope {}",
            noncusp.fitted_slope
        );
        assert_eq!(noncusp.conclusion, Conclusion::RatioDiverges);

        let start = Instant::now();
        let control = control_pair_report(&config);
        assert!(start.elapsed() < Duration::from_secs(5), "control too slow");
        assert!(
            control.fitted_slope.abs() <= 0.05,
            "control slope {}",
            control.fitted_slope
        );
        assert_eq!(control.conclusion, Conclusion::Bounded);
    });
}

#[test]
fn criterion_6_lemma_inequalities() {
    gate(6, "Lemma inequalities", || {
        let config = WitnessConfig::default();
        // Quadrature slack: the arclength estimate converges to relative
        // 1e-7 and is reported from the upper side.
        let slack = 1.0 + 1e-6;
        let mut reports = vec![
            witness_report(&p("y^2 - x^3"), &config).unwrap(),
            witness_report(&p("y^2 + x^4"), &config).unwrap(),
            witness_report(&p("y^2 - x^5"), &config).unwrap(),
            control_pair_report(&config),
        ];
        for report in reports.drain(..) {
            assert!(!report.samples.is_empty());
            for row in &report.samples {
                let arc = row.inner_arclength.expect("arclength is always sampled");
                assert!(
                    row.outer <= arc * slack,
                    "outer {} exceeds inner arclength {arc} at t = {:e}",
                    row.outer,
                    row.t
                );
                assert!(
                    row.inner_lower <= arc * slack,
                    "inner lower bound {} exceeds inner arclength {arc} at t = {:e}",
                    row.inner_lower,
                    row.t
                );
            }
        }
    });
}

#[test]
fn criterion_7_certificate_revalidation() {
    gate(7, "certificate revalidation", || {
        let mut emitted: Vec<(Polynomial, SliceCertificate)> = Vec::new();
        for text in ["x^3 + x^2*y + y^3*z + z^5", "x^3 + x^2*y + z^5"] {
            let f = germ(text);
            let certificate = full_pipeline_certificate(&f);
            emitted.push((f, certificate));
        }
        for (k1, k2, k3) in sweep_triples() {
            let f = germ(&format!("x^{k1} + y^{k2} + z^{k3}"));
            let certificate = full_pipeline_certificate(&f);
            emitted.push((f, certificate));
        }
        for (f, certificate) in &emitted {
            let checks = revalidate(f, certificate).unwrap();
            assert_eq!(checks.len(), 6, "{f}");
        }

        let (f, certificate) = &emitted[2];
        let base = report::certificate_json(certificate, f);
        assert_ne!(base.generality_value, "1234567");
        assert_ne!(base.admissibility_value, "1234567");
        let mutations: Vec<(&str, Box<dyn Fn(&mut report::CertificateJson)>)> = vec![
            ("germ", Box::new(|c| c.germ = "x^2 + y^3 + z^4".into())),
            ("variables", Box::new(|c| c.variables[2] = "w".into())),
            (
                "kernel_direction",
                Box::new(|c| c.kernel_direction[0] = "23".into()),
            ),
            ("matrix", Box::new(|c| c.matrix[0][0] = "23".into())),
            (
                "generality_value",
                Box::new(|c| c.generality_value = "1234567".into()),
            ),
            (
                "discriminant",
                Box::new(|c| c.discriminant = "s1*s2".into()),
            ),
            (
                "line_direction",
                Box::new(|c| c.line_direction[0] = "23".into()),
            ),
            (
                "admissibility_value",
                Box::new(|c| c.admissibility_value = "1234567".into()),
            ),
            (
                "slice_polynomial",
                Box::new(|c| c.slice_polynomial = "s^2 - u^2".into()),
            ),
            (
                "slice_verdict",
                Box::new(|c| c.slice_verdict.status = "NE".into()),
            ),
        ];
        for (label, mutate) in mutations {
            let mut tampered = base.clone();
            mutate(&mut tampered);
            let outcome = report::certificate_from_json(&tampered)
                .and_then(|(germ, cert)| revalidate(&germ, &cert));
            assert!(outcome.is_err(), "mutated {label} must fail revalidation");
        }
    });
}
