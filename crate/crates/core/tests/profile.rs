use fisherp::densities::DensityModel;
use fisherp::functionals::{fisher_info, score_moment};
use fisherp::profile::*;
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
fn cdf_and_quantile_examples() {
    assert_eq!(cdf(&DensityModel::std_normal(), 0.0), 0.5);
    assert!(quantile(&DensityModel::std_normal(), 0.5).unwrap().abs() < 1e-12);
    let l = DensityModel::logistic();
    assert!((quantile(&l, 0.75).unwrap() - 3f64.ln()).abs() < 1e-12);
    assert!(quantile(&l, 0.0).is_err());
}

#[test]
fn quantile_round_trip() {
    let models = [
        DensityModel::std_normal(),
        DensityModel::logistic(),
        gamma(10.0),
        gamma(2.5),
        DensityModel::beta(2.0, 5.0).unwrap(),
        DensityModel::polynomial_tail(3.0).unwrap(),
        DensityModel::half_gaussian(),
    ];
    for m in &models {
        for j in 0..50 {
            let t = (j as f64 + 0.5) / 50.0;
            let x = quantile(m, t).unwrap();
            assert!((m.cdf(x) - t).abs() <= 1e-10, "{} t={t}", m.label());
        }
        for k in 2..=12 {
            let s = 10f64.powi(-k);
            let x = quantile(m, s).unwrap();
            assert!((m.cdf(x) - s).abs() <= 1e-10 * s, "{} lower {s}", m.label());
            let y = upper_quantile(m, s).unwrap();
            assert!((m.survival(y) - s).abs() <= 1e-10 * s, "{} upper {s}", m.label());
        }
    }
}

#[test]
fn profile_grid_values() {
    let l = DensityModel::logistic();
    let g = build_profile(&l, 64).unwrap();
    for j in 0..g.len() {
        let t = g.t[j];
        assert!((g.l[j] - t * (1.0 - t)).abs() < 1e-12);
        assert!((g.lp[j] - (1.0 - 2.0 * t)).abs() < 1e-10);
        // L L'' = -2 t (1 - t)
        assert!((g.llpp[j] + 2.0 * t * (1.0 - t)).abs() < 1e-10);
    }
    let z = build_profile(&DensityModel::std_normal(), 5).unwrap();
    assert!((z.t[2] - 0.5).abs() < 1e-15);
    assert!((z.l[2] - 0.398_942_280_401_432_7).abs() < 1e-12);
    assert!(build_profile(&DensityModel::hermite_weighted(), 10).is_err());
}

#[test]
fn grid_invariants() {
    for m in [DensityModel::std_normal(), gamma(10.0), DensityModel::logistic()] {
        let g = build_profile(&m, 41).unwrap();
        assert!(g.t.windows(2).all(|w| w[0] < w[1]));
        assert!(g.t[0] >= PROFILE_CLIP && *g.t.last().unwrap() <= 1.0 - PROFILE_CLIP);
        for j in 0..g.len() {
            assert!(g.l[j] > 0.0);
            assert!((m.cdf(g.x[j]) - g.t[j]).abs() <= 1e-10);
            // L' against a central difference of L over t
            let h = 1e-5 * g.t[j].min(1.0 - g.t[j]);
            let lt = |t: f64| m.density(quantile(&m, t).unwrap());
            let fd = (lt(g.t[j] + h) - lt(g.t[j] - h)) / (2.0 * h);
            assert!((fd - g.lp[j]).abs() <= 1e-4 * g.lp[j].abs().max(1e-2), "{} t={}", m.label(), g.t[j]);
        }
    }
}

#[test]
fn csv_export() {
    let g = build_profile(&DensityModel::logistic(), 4).unwrap();
    let mut buf = Vec::new();
    g.write_csv(&mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "t,x,L,L',LL''");
    assert_eq!(lines.count(), 4);
}

#[test]
fn profile_fisher_information() {
    let l = DensityModel::logistic();
    assert!((info_via_profile(&l, 2.0, &cfg()).unwrap().value - 1.0 / 3.0).abs() < 1e-9);
    let z = DensityModel::std_normal();
    assert!(rel(info_via_profile(&z, 2.0, &cfg()).unwrap().value, 1.0) < 1e-6);
    assert!(rel(info_via_profile(&gamma(10.0), 2.0, &cfg()).unwrap().value, 0.125) < 1e-5);
    for m in [z, l, gamma(10.0)] {
        let direct = fisher_info(&m, 1, &cfg()).unwrap().value;
        assert!(rel(info_via_profile(&m, 2.0, &cfg()).unwrap().value, direct) < 1e-5);
        let i4 = score_moment(&m, 4.0, &cfg()).unwrap().value;
        assert!(rel(info_via_profile(&m, 4.0, &cfg()).unwrap().value, i4) < 1e-5);
    }
}

#[test]
fn second_order_three_ways() {
    let mut cases = vec![(DensityModel::std_normal(), 2.0)];
    for n in [8.0, 10.0, 16.0] {
        cases.push((gamma(n), 2.0 * (n + 2.0) / ((n - 2.0) * (n - 3.0) * (n - 4.0))));
    }
    for (m, want) in cases {
        let direct = fisher_info(&m, 2, &cfg()).unwrap().value;
        let sq = i2_via_profile(&m, I2Variant::Squared, &cfg()).unwrap().value;
        let sp = i2_via_profile(&m, I2Variant::Split, &cfg()).unwrap().value;
        assert!(rel(direct, want) < 1e-8);
        assert!(rel(sq, want) < 1e-5, "{} squared {sq} vs {want}", m.label());
        assert!(rel(sp, want) < 1e-5, "{} split {sp} vs {want}", m.label());
        assert!(rel(sq, sp) < 1e-4);
    }
}

#[test]
fn boundary_terms_vanish() {
    let z = boundary_diagnostics(&DensityModel::std_normal()).unwrap();
    assert!(z.monotone());
    // L L' = f'(F^{-1}(t)) = -x φ(x)
    for r in z.lower.iter().chain(&z.upper) {
        let want = -r.x * (-0.5 * r.x * r.x).exp() / (2.0 * std::f64::consts::PI).sqrt();
        assert!((r.l_lp - want).abs() < 1e-12 * want.abs());
    }
    let at_1e4 = &z.lower[2];
    assert_eq!(at_1e4.t, 1e-4);
    assert!(at_1e4.l_lp.abs() < 2e-3);
    assert!(z.lower[3].l_lp.abs() < 1e-3);
    let l = boundary_diagnostics(&DensityModel::logistic()).unwrap();
    for r in &l.lower {
        let t = r.t;
        assert!((r.l_lp3 - t * (1.0 - t) * (1.0 - 2.0 * t).powi(3)).abs() < 1e-12);
    }
    assert!(l.monotone());
    assert!(boundary_diagnostics(&gamma(10.0)).unwrap().monotone());
}
