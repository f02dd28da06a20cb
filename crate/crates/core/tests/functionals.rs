use fisherp::densities::DensityModel;
use fisherp::functionals::*;
use fisherp::hermite::{hermite, MonicPolynomial};
use fisherp::quadrature::QuadratureConfig;

fn cfg() -> QuadratureConfig {
    QuadratureConfig::default()
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn gamma(n: f64) -> DensityModel {
    DensityModel::gamma(n).unwrap()
}

#[test]
fn fisher_info_examples() {
    let z = DensityModel::std_normal();
    let v = fisher_info(&z, 3, &cfg()).unwrap();
    assert!(v.is_finite());
    assert!(rel(v.value, 6.0) < 1e-8, "{v:?}");
    let v = fisher_info(&gamma(10.0), 2, &cfg()).unwrap();
    assert!(rel(v.value, 1.0 / 14.0) < 1e-8, "{v:?}");
    assert!(fisher_info(&gamma(5.0), 3, &cfg()).unwrap().is_divergent());
    let v = fisher_info(&DensityModel::normal(0.0, 2.0).unwrap(), 2, &cfg()).unwrap();
    assert!(rel(v.value, 0.125) < 1e-8);
}

#[test]
fn score_moment_examples() {
    let z = DensityModel::std_normal();
    assert!(rel(score_moment(&z, 4.0, &cfg()).unwrap().value, 3.0) < 1e-8);
    assert!(rel(score_moment(&z, 2.0, &cfg()).unwrap().value, 1.0) < 1e-8);
    assert!(rel(score_moment(&gamma(10.0), 2.0, &cfg()).unwrap().value, 0.125) < 1e-8);
    // I_1 is the total variation of f
    let tv = derivative_tv_norm(&gamma(10.0), 1, &cfg()).unwrap().value;
    assert!(rel(score_moment(&gamma(10.0), 1.0, &cfg()).unwrap().value, tv) < 1e-8);
}

#[test]
fn cross_functional_examples() {
    let v = cross_functional(&gamma(10.0), 1, 2, &cfg()).unwrap();
    assert!(rel(v.value, 2.0 / 56.0) < 1e-8, "{v:?}");
    let z = DensityModel::std_normal();
    assert!(cross_functional(&z, 1, 2, &cfg()).unwrap().value.abs() < 1e-9);
    assert!(cross_functional(&gamma(10.0), 3, 0, &cfg()).unwrap().value.abs() < 1e-9);
}

#[test]
fn cross_matrix_structure() {
    let m = CrossFunctionalMatrix::compute(&gamma(12.0), 3, &cfg()).unwrap();
    for k in 0..=3 {
        for l in 0..=3 {
            assert_eq!(m.entry(k, l), m.entry(l, k));
        }
        if k >= 1 {
            assert!(m.entry(k, 0).value.abs() < 1e-11, "V_{k},0 = {}", m.entry(k, 0).value);
            let d = fisher_info(&gamma(12.0), k, &cfg()).unwrap().value;
            assert!(rel(m.entry(k, k).value, d) < 2e-9);
        }
    }
}

#[test]
fn relative_fisher_examples() {
    let z = DensityModel::std_normal();
    for p in 1..=4 {
        let r = relative_fisher(&z, p, &cfg()).unwrap();
        assert!(r.direct.value.abs() < 1e-9, "p={p}: {:?}", r.direct);
    }
    let x = DensityModel::normal(0.0, 2f64.sqrt()).unwrap();
    let r = relative_fisher(&x, 1, &cfg()).unwrap();
    assert!((r.direct.value - 0.5).abs() < 1e-9);
    assert!((r.via_identity.value - 0.5).abs() < 1e-9);
    let r = relative_fisher(&gamma(12.0), 2, &cfg()).unwrap();
    assert!(r.discrepancy() < 1e-6, "{r:?}");
    let t = DensityModel::polynomial_tail(2.5).unwrap();
    assert!(matches!(relative_fisher(&t, 1, &cfg()), Err(fisherp::error::Error::MomentRequired { .. })));
}

#[test]
fn hermite_square_mean_examples() {
    let z = DensityModel::std_normal();
    for p in 0..=6 {
        let v = hermite_square_mean(&z, &hermite(p).unwrap(), &cfg());
        let f: f64 = (1..=p).map(|i| i as f64).product();
        assert!(rel(v.value, f) < 1e-9);
    }
    let x2 = MonicPolynomial::monomial(2);
    assert!(rel(hermite_square_mean(&z, &x2, &cfg()).value, 3.0) < 1e-9);
    let x1 = MonicPolynomial::monomial(1);
    assert!(rel(hermite_square_mean(&z, &x1, &cfg()).value, 1.0) < 1e-9);
}

#[test]
fn derivative_norms() {
    let z = DensityModel::std_normal();
    let phi0 = 1.0 / (2.0 * std::f64::consts::PI).sqrt();
    assert!(rel(derivative_tv_norm(&z, 1, &cfg()).unwrap().value, 2.0 * phi0) < 1e-9);
    let tv = derivative_tv_norm(&gamma(10.0), 1, &cfg()).unwrap().value;
    assert!(tv <= 0.125f64.sqrt());
    // symmetric unimodal: total variation is twice the peak
    let l = DensityModel::logistic();
    assert!(rel(derivative_tv_norm(&l, 1, &cfg()).unwrap().value, 0.5) < 1e-9);
    let sp = std::f64::consts::PI.sqrt();
    assert!(rel(derivative_l2_norm(&z, 1, &cfg()).unwrap().value, 1.0 / (4.0 * sp)) < 1e-9);
    assert!(rel(derivative_l2_norm(&z, 0, &cfg()).unwrap().value, 1.0 / (2.0 * sp)) < 1e-9);
    let g = gamma(10.0);
    let l2 = derivative_l2_norm(&g, 2, &cfg()).unwrap().value;
    assert!(l2 < (1.0f64 / 14.0).powf(1.5));
}

#[test]
fn charfn() {
    let z = DensityModel::std_normal();
    assert!((charfn_modulus(&z, 2.0, &cfg()).value - (-2f64).exp()).abs() < 1e-15);
    for m in [z.clone(), gamma(3.0), DensityModel::beta(2.0, 3.0).unwrap(), DensityModel::half_gaussian()] {
        assert!((charfn_modulus(&m, 0.0, &cfg()).value - 1.0).abs() < 1e-9, "{}", m.label());
    }
    // the numeric route against the gamma closed form
    let g = gamma(10.0);
    for &t in &[0.5, 1.0, 3.0] {
        let (re, im) = charfn_numeric(&g, t, &cfg());
        let want = (1.0 + t * t).powf(-5.0);
        let got = re.value.hypot(im.value);
        assert!((got - want).abs() < 1e-10, "t={t}: {got} vs {want}");
    }
    let mut prev = f64::INFINITY;
    for &t in &[5.0f64, 10.0, 20.0, 40.0] {
        let v = t * t * charfn_modulus(&g, t, &cfg()).value;
        assert!(v < prev);
        prev = v;
    }
    let b = DensityModel::beta(2.0, 3.0).unwrap();
    assert!(!charfn_modulus(&b, 2e3, &cfg()).is_finite());
    let x = DensityModel::hermite_weighted();
    let (re, _) = charfn_numeric(&x, 0.7, &cfg());
    assert!((re.value - (1.0 - 0.49) * (-0.245f64).exp()).abs() < 1e-10);
}

#[test]
fn scale_and_shift_laws() {
    for base in [DensityModel::std_normal(), gamma(10.0)] {
        for p in 1..=2 {
            let i0 = fisher_info(&base, p, &cfg()).unwrap().value;
            for b in [0.5, 2.0, 3.0] {
                let m = DensityModel::affine(base.clone(), 0.0, b).unwrap();
                let v = fisher_info(&m, p, &cfg()).unwrap().value;
                assert!(rel(v, b.powi(-2 * p as i32) * i0) < 1e-7, "b={b} p={p}");
            }
            for a in [-3.0, 7.0] {
                let m = DensityModel::affine(base.clone(), a, 1.0).unwrap();
                assert!(rel(fisher_info(&m, p, &cfg()).unwrap().value, i0) < 1e-9);
            }
        }
    }
}

#[test]
fn score_moment_norms_are_monotone() {
    for m in [DensityModel::std_normal(), gamma(12.0)] {
        let mut prev = 0.0;
        for p in 1..=4 {
            let v = score_moment(&m, p as f64, &cfg()).unwrap().value.powf(1.0 / p as f64);
            assert!(v >= prev - 1e-12);
            prev = v;
        }
    }
}
