use fisherp::densities::DensityModel;
use fisherp::functionals::cross_functional;
use fisherp::hermite::{hermite, MonicPolynomial};
use fisherp::quadrature::QuadratureConfig;
use fisherp::verify::*;
use proptest::prelude::*;

fn cfg() -> QuadratureConfig {
    QuadratureConfig::default()
}

fn gamma(n: f64) -> DensityModel {
    DensityModel::gamma(n).unwrap()
}

fn normal(s: f64) -> DensityModel {
    DensityModel::normal(0.0, s).unwrap()
}

fn x_poly() -> MonicPolynomial {
    MonicPolynomial::monomial(1)
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

#[test]
fn cramer_rao_examples() {
    let z = DensityModel::std_normal();
    let r = check_cramer_rao(&z, 2, &hermite(2).unwrap(), &cfg()).unwrap();
    assert_eq!(r[0].verdict, Verdict::Pass);
    assert!(r[0].slack.abs() <= 10.0 * default_tolerance(4.0), "{:?}", r[0]);
    assert_eq!(r[1].check_name, "cramer_rao_hermite");
    assert!(r[1].passed());

    // Gamma(12): 1/10 + n(n+1) against 2
    let r = &check_cramer_rao(&gamma(12.0), 1, &x_poly(), &cfg()).unwrap()[0];
    assert!(r.passed());
    assert!(rel(r.lhs, 0.1 + 156.0) < 1e-9, "{r:?}");
    assert_eq!(r.rhs, 2.0);

    let r = &check_cramer_rao(&normal(2.0), 1, &x_poly(), &cfg()).unwrap()[0];
    assert!(r.passed());
    assert!((r.slack - 2.25).abs() < 1e-9);

    // heavy tail: no finite second moment for q = 2.5
    let t = DensityModel::polynomial_tail(2.5).unwrap();
    let r = &check_cramer_rao(&t, 1, &x_poly(), &cfg()).unwrap()[0];
    assert!(matches!(r.verdict, Verdict::Skipped(_)));
}

#[test]
fn thm13_examples() {
    let z = DensityModel::std_normal();
    let r = check_thm13(&z, &cfg()).unwrap();
    assert_eq!(r.len(), 2);
    assert!(r.iter().all(InequalityReport::passed));
    assert!(rel(r[0].lhs, 2.0) < 1e-9 && rel(r[0].rhs, 1.0) < 1e-9);
    assert!(rel(r[1].rhs, 1.0 / 3.0) < 1e-9);

    let r = check_thm13(&gamma(10.0), &cfg()).unwrap();
    assert!(r.iter().all(InequalityReport::passed));
    assert!(rel(r[0].lhs, 1.0 / 14.0) < 1e-8);
    assert!(rel(r[1].rhs, 1.0 / 192.0) < 1e-8);

    let r = check_thm13(&DensityModel::hermite_weighted(), &cfg()).unwrap();
    assert_eq!(r[0].verdict, Verdict::Skipped("DivergentInput".into()));
}

#[test]
fn stam_examples() {
    let g = gamma(10.0);
    let r = check_stam(&g, &g, 2, 1, &cfg()).unwrap();
    assert!(r.passed());
    // closed forms: 1/I^(2)(Γ20) = 17·16·18/44, and 14 + 14 + 64
    let want = 17.0 * 16.0 * 18.0 / 44.0;
    assert!(rel(r.lhs, want) < 1e-4, "{r:?}");
    assert!(rel(r.rhs, 92.0) < 1e-8);

    let z = DensityModel::std_normal();
    let r = check_stam(&z, &z, 2, 1, &cfg()).unwrap();
    assert!(r.passed());
    assert!((r.lhs - 2.0).abs() < 1e-12 && (r.rhs - 2.0).abs() < 1e-9);

    let r = check_stam_product(&g, &g, 2, 1, &cfg()).unwrap();
    assert!(r.passed());
    assert!((r.lhs - 0.015625).abs() < 1e-9);
    assert!(rel(r.rhs, 0.0089869281) < 1e-6);

    assert!(check_stam(&g, &g, 2, 0, &cfg()).is_err());
    let r = check_stam(&gamma(5.0), &g, 3, 1, &cfg()).unwrap();
    assert!(matches!(r.verdict, Verdict::Skipped(_)));
}

#[test]
fn stam_sharp_examples() {
    let z = DensityModel::std_normal();
    let r = check_stam_sharp(&z, &z, 3, &cfg()).unwrap();
    assert!(r.passed());
    assert!((r.lhs - 4.0 / 3.0).abs() < 1e-12 && (r.rhs - 4.0 / 3.0).abs() < 1e-9);
    for y in [gamma(14.0), DensityModel::logistic()] {
        let r = check_stam_sharp(&z, &y, 2, &cfg()).unwrap();
        assert!(r.passed(), "{r:?}");
        assert_eq!(r.inputs["exploratory"], false);
    }
    let r = check_stam_sharp(&gamma(10.0), &DensityModel::logistic(), 2, &cfg()).unwrap();
    assert_eq!(r.inputs["exploratory"], true);
    assert_ne!(r.verdict, Verdict::Fail);
}

#[test]
fn counterexample_examples() {
    let r = check_counterexample_110(10.0, &cfg()).unwrap();
    assert!(r.iter().all(InequalityReport::passed));
    assert!(rel(r[0].lhs, 1.0 / 28.0) < 1e-9);
    assert!(rel(r[1].lhs, 1.0 / 784.0) < 1e-8);

    let r = check_counterexample_110(8.0, &cfg()).unwrap();
    assert!(rel(r[0].lhs, 2.0 / 30.0) < 1e-9);

    let r = check_counterexample_110(6.0, &cfg()).unwrap();
    assert!(matches!(r[0].verdict, Verdict::Skipped(_)));

    // normal control: the cross-functional vanishes
    let z = DensityModel::std_normal();
    let v12 = cross_functional(&z, 1, 2, &cfg()).unwrap();
    assert!(v12.value.abs() < 1e-12);
}

#[test]
fn convexity_examples() {
    let two = DensityModel::mixture(vec![
        (0.5, DensityModel::normal(-2.0, 1.0).unwrap()),
        (0.5, DensityModel::normal(2.0, 1.0).unwrap()),
    ])
    .unwrap();
    let r = check_convexity(&two, 1, &cfg()).unwrap();
    assert!(r.passed() && r.lhs == 1.0 && r.rhs < 1.0, "{r:?}");

    let single = DensityModel::mixture(vec![(1.0, gamma(10.0))]).unwrap();
    let r = check_convexity(&single, 2, &cfg()).unwrap();
    assert!(r.slack.abs() < 1e-9, "{r:?}");

    let gg = DensityModel::mixture(vec![(1.0 / 3.0, gamma(10.0)), (2.0 / 3.0, gamma(14.0))]).unwrap();
    assert!(check_convexity(&gg, 2, &cfg()).unwrap().passed());
    assert!(check_convexity(&gamma(10.0), 1, &cfg()).is_err());
}

#[test]
fn derivative_bound_examples() {
    for m in [DensityModel::std_normal(), gamma(12.0)] {
        let r = check_derivative_bounds(&m, 2, &cfg()).unwrap();
        let names: Vec<&str> = r.iter().map(|r| r.check_name.as_str()).collect();
        for want in ["a", "b", "c_tv", "c_sup", "d", "e", "f"] {
            assert!(names.contains(&format!("derivative_bounds_{want}").as_str()), "{names:?}");
        }
        assert!(r.iter().all(InequalityReport::passed), "{r:?}");
    }
    let r = check_derivative_bounds(&DensityModel::std_normal(), 2, &cfg()).unwrap();
    let c = r.iter().find(|r| r.check_name == "derivative_bounds_c_tv").unwrap();
    // ∫|φ''| = 4φ(1) and √2
    let phi1 = (-0.5f64).exp() / (2.0 * std::f64::consts::PI).sqrt();
    assert!(rel(c.rhs, 4.0 * phi1) < 1e-9 && rel(c.lhs, 2f64.sqrt()) < 1e-9);
    let b = r.iter().find(|r| r.check_name == "derivative_bounds_b").unwrap();
    assert!(rel(b.rhs, (2.0 / std::f64::consts::PI).sqrt()) < 1e-9);
    assert!(rel(b.lhs, 1.0 + 2.0 / 3.0 * 4.0 * phi1) < 1e-9);
}

#[test]
fn charfn_decay_examples() {
    // oracle: |t|^2 (1+t²)^{-5}
    let r = check_charfn_decay(&gamma(10.0), 2, &cfg()).unwrap();
    assert!(r.passed());
    let v = |t: f64| 2.0 * t.ln() - 5.0 * (1.0 + t * t).ln();
    let oracle = [5.0, 10.0, 20.0].iter().map(|&t| v(t) - v(2.0 * t)).fold(f64::INFINITY, f64::min);
    assert!((r.lhs - oracle).abs() < 1e-9);
    assert!(check_charfn_decay(&DensityModel::std_normal(), 3, &cfg()).unwrap().passed());
    assert!(check_charfn_decay(&DensityModel::hermite_weighted(), 1, &cfg()).unwrap().passed());
}

#[test]
fn closed_form_and_identity_checks() {
    let r = check_fisher_closed_form(&gamma(5.0), 3, &cfg()).unwrap();
    assert_eq!(r.verdict, Verdict::Skipped("DivergentInput".into()));
    for p in 1..=3 {
        assert!(check_fisher_closed_form(&gamma(16.0), p, &cfg()).unwrap().passed());
    }
    for p in 1..=2 {
        assert!(check_relative_fisher_identity(&gamma(12.0), p, &cfg()).unwrap().passed());
    }
    assert!(check_product_bound(&gamma(10.0), 2, &cfg()).unwrap().passed());
    assert!(check_hermite_orthogonality(3, 5, &cfg()).unwrap().passed());
    assert!(check_convolution_monotonicity(&gamma(10.0), &DensityModel::logistic(), 1, &cfg()).unwrap().passed());
}

#[test]
fn manifest_behaviour() {
    let empty = Manifest::from_json_str(r#"{"checks": []}"#).unwrap();
    let r = run_suite(&empty, &cfg()).unwrap();
    assert!(r.is_empty() && suite_passed(&r));

    assert!(matches!(
        Manifest::from_json_str(r#"{"checks": [{"name": "no_such_check"}]}"#),
        Err(fisherp::error::Error::Manifest(_))
    ));

    let m = Manifest::from_json_str(
        r#"{"checks": [{"name": "fisher_closed_form", "params": {"density": {"family": "gamma", "params": {"n": 5}}, "p": 3}}]}"#,
    )
    .unwrap();
    let r = run_suite(&m, &cfg()).unwrap();
    assert_eq!(r[0].verdict, Verdict::Skipped("DivergentInput".into()));
    assert!(suite_passed(&r));

    let grid = Manifest::from_json_str(
        r#"{"checks": [{"name": "hermite_orthogonality", "grid": {"k": [0, 1, 2], "l": [3, 4]}}]}"#,
    )
    .unwrap();
    assert_eq!(grid.expand().len(), 6);
    let a = run_suite(&grid, &cfg()).unwrap();
    let b = run_suite(&grid, &cfg()).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.len(), 6);
    let keys: Vec<String> = a.iter().map(|r| format!("{}{}", r.check_name, r.inputs)).collect();
    let mut sorted = keys.clone();
    sorted.sort();
    assert_eq!(keys, sorted);

    let rev = Manifest::from_json_str(
        r#"{"checks": [{"name": "product_bound", "params": {"density": {"family": "gamma", "params": {"n": 10}}, "p": 1, "reverse": true}}]}"#,
    )
    .unwrap();
    assert!(!suite_passed(&run_suite(&rev, &cfg()).unwrap()));
}

#[test]
fn verdicts_invariant_under_rescaling() {
    let bases = [gamma(10.0), DensityModel::logistic(), DensityModel::std_normal()];
    for base in &bases {
        let v0: Vec<Verdict> = verdicts(base);
        for b in [0.5, 2.0] {
            let scaled = DensityModel::affine(base.clone(), 0.0, b).unwrap();
            assert_eq!(verdicts(&scaled), v0, "{} scaled by {b}", base.label());
        }
    }
}

fn verdicts(m: &DensityModel) -> Vec<Verdict> {
    let mut out: Vec<Verdict> = check_thm13(m, &cfg()).unwrap().into_iter().map(|r| r.verdict).collect();
    out.push(check_product_bound(m, 2, &cfg()).unwrap().verdict);
    out.push(check_stam(m, m, 2, 1, &cfg()).unwrap().verdict);
    out.push(check_charfn_decay(m, 1, &cfg()).unwrap().verdict);
    out
}

#[test]
fn optimal_weights_closed_form() {
    let a = [2.0, 0.5, 3.0, 1.0];
    let w = StamWeights::optimal(&a).unwrap();
    assert!((w.alphas.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    let inv: f64 = a.iter().map(|v| 1.0 / v).sum();
    assert!((w.q_value(&a) - 1.0 / inv).abs() < 1e-15);
    assert!((optimal_q(&a).unwrap() - 1.0 / inv).abs() < 1e-15);
    assert!(StamWeights::new(vec![0.5, 0.6]).is_err());
    assert!(StamWeights::optimal(&[1.0, 0.0]).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn perturbed_weights_never_beat_optimum(
        a in prop::collection::vec(0.05f64..20.0, 2..7),
        bumps in prop::collection::vec(-1.0f64..1.0, 7),
        scale in 1e-3f64..0.5,
    ) {
        let best = StamWeights::optimal(&a).unwrap();
        let q0 = best.q_value(&a);
        // move along a zero-sum direction, then clip into the simplex
        let n = a.len();
        let mean: f64 = bumps[..n].iter().sum::<f64>() / n as f64;
        let mut alt: Vec<f64> = best.alphas.iter().zip(&bumps).map(|(w, d)| (w + scale * (d - mean)).max(0.0)).collect();
        let s: f64 = alt.iter().sum();
        alt.iter_mut().for_each(|w| *w /= s);
        let q = StamWeights { alphas: alt }.q_value(&a);
        prop_assert!(q >= q0 * (1.0 - 1e-12), "q = {q}, optimum {q0}");
    }
}
