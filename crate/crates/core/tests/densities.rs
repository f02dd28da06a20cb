use fisherp::densities::DensityModel;
use fisherp::quadrature::{integrate_on, QuadratureConfig, Status};

fn catalog() -> Vec<(DensityModel, f64, f64)> {
    vec![
        (DensityModel::normal(0.5, 1.3).unwrap(), -3.0, 4.0),
        (DensityModel::gamma(10.0).unwrap(), 2.0, 25.0),
        (DensityModel::gamma(3.5).unwrap(), 0.3, 10.0),
        (DensityModel::beta(5.0, 7.0).unwrap(), 0.05, 0.95),
        (DensityModel::hermite_weighted(), 0.2, 4.0),
        (DensityModel::polynomial_tail(2.5).unwrap(), -4.05, 3.1),
        (DensityModel::half_gaussian(), 0.1, 4.0),
        (DensityModel::logistic(), -8.0, 8.0),
        (
            DensityModel::mixture(vec![
                (0.3, DensityModel::normal(-2.0, 1.0).unwrap()),
                (0.7, DensityModel::gamma(6.0).unwrap()),
            ])
            .unwrap(),
            -4.0,
            10.0,
        ),
        (
            DensityModel::gaussian_convolution(DensityModel::gamma(4.0).unwrap(), 0.5).unwrap(),
            -1.0,
            10.0,
        ),
        (
            DensityModel::affine(DensityModel::logistic(), 1.0, 0.5).unwrap(),
            -2.0,
            4.0,
        ),
    ]
}

/// Central difference of `g` at `x`, refined by Richardson extrapolation.
fn richardson_derivative(g: impl Fn(f64) -> f64, x: f64, h0: f64) -> f64 {
    let levels = 5;
    let mut table = vec![vec![0.0; levels]; levels];
    let mut h = h0;
    for i in 0..levels {
        table[i][0] = (g(x + h) - g(x - h)) / (2.0 * h);
        let mut factor = 4.0;
        for j in 1..=i {
            table[i][j] = table[i][j - 1] + (table[i][j - 1] - table[i - 1][j - 1]) / (factor - 1.0);
            factor *= 4.0;
        }
        h *= 0.5;
    }
    table[levels - 1][levels - 1]
}

#[test]
fn analytic_derivatives_match_finite_differences() {
    for (m, lo, hi) in catalog() {
        let probes: Vec<f64> = (0..25).map(|i| lo + (hi - lo) * (i as f64 + 0.5) / 25.0).collect();
        for k in 1..=4 {
            let analytic: Vec<f64> = probes.iter().map(|&x| m.derivative(k, x).unwrap()).collect();
            let typical = (analytic.iter().map(|v| v * v).sum::<f64>() / 25.0).sqrt();
            for (&x, &want) in probes.iter().zip(&analytic) {
                let h0 = 0.02 * (hi - lo).min(x - m.support().lower).min(m.support().upper - x).min(1.0);
                let got = richardson_derivative(|y| m.derivative(k - 1, y).unwrap(), x, h0);
                // relative error, guarded at zero crossings of f^(k)
                let scale = want.abs().max(1e-3 * typical);
                assert!(
                    (got - want).abs() <= 1e-6 * scale,
                    "{} k={k} x={x}: analytic {want} vs fd {got}",
                    m.label()
                );
            }
        }
    }
}

#[test]
fn densities_are_normalized() {
    let cfg = QuadratureConfig::default();
    for (m, _, _) in catalog() {
        let v = integrate_on(|x| m.density(x), &m.integration_domain(), &cfg);
        assert_eq!(v.status, Status::Finite, "{}", m.label());
        assert!((v.value - 1.0).abs() <= 1e-9, "{}: {}", m.label(), v.value);
    }
}

#[test]
fn gaussian_convolution_of_normal_is_normal() {
    let c = DensityModel::gaussian_convolution(DensityModel::normal(0.7, 1.2).unwrap(), 0.5).unwrap();
    let n = DensityModel::normal(0.7, (1.44f64 + 0.25).sqrt()).unwrap();
    for i in 0..=40 {
        let x = -6.0 + 0.3 * i as f64;
        assert!((c.density(x) - n.density(x)).abs() <= 1e-12);
        for k in 1..=3 {
            let a = c.derivative(k, x).unwrap();
            let b = n.derivative(k, x).unwrap();
            assert!((a - b).abs() <= 1e-12 * b.abs().max(1.0));
        }
    }
}

#[test]
fn generic_gaussian_convolution_matches_normal_route() {
    // force the numeric kernel route with a base that is normal in disguise
    let base = DensityModel::mixture(vec![(1.0, DensityModel::std_normal())]).unwrap();
    let c = DensityModel::gaussian_convolution(base, 0.6).unwrap();
    let n = DensityModel::normal(0.0, (1.36f64).sqrt()).unwrap();
    for &x in &[-3.0, -0.4, 0.0, 1.1, 2.5] {
        for k in 0..=3 {
            let a = c.derivative(k, x).unwrap();
            let b = n.derivative(k, x).unwrap();
            assert!((a - b).abs() <= 1e-10 * b.abs().max(1e-3), "k={k} x={x}: {a} vs {b}");
        }
    }
}

#[test]
fn mixture_is_pointwise_weighted_sum() {
    let a = DensityModel::normal(-2.0, 1.0).unwrap();
    let b = DensityModel::gamma(10.0).unwrap();
    let m = DensityModel::mixture(vec![(0.4, a.clone()), (0.6, b.clone())]).unwrap();
    for i in 0..30 {
        let x = -5.0 + 0.7 * i as f64;
        let want = 0.4 * a.density(x) + 0.6 * b.density(x);
        assert!((m.density(x) - want).abs() <= 1e-15 * want.max(1e-300));
        let d = 0.4 * a.derivative(2, x).unwrap() + 0.6 * b.derivative(2, x).unwrap();
        assert!((m.derivative(2, x).unwrap() - d).abs() <= 1e-14 * d.abs().max(1e-12));
    }
    assert!(DensityModel::mixture(vec![(0.5, a.clone()), (0.4, b.clone())]).is_err());
    assert!(DensityModel::mixture(vec![(-0.5, a), (1.5, b)]).is_err());
}

#[test]
fn moments() {
    let cfg = QuadratureConfig::default();
    let z = DensityModel::std_normal();
    assert!((z.moment(2.0, &cfg).value - 1.0).abs() < 1e-14);
    assert!((z.moment(4.0, &cfg).value - 3.0).abs() < 1e-13);
    let g = DensityModel::gamma(3.0).unwrap();
    assert!((g.moment(2.0, &cfg).value - 12.0).abs() < 1e-12);
    // closed form against quadrature
    let q = integrate_on(|x| x * x * g.density(x), &g.integration_domain(), &cfg);
    assert!((q.value - 12.0).abs() < 1e-8);
    let t = DensityModel::polynomial_tail(2.0).unwrap();
    assert!(t.moment(2.0, &cfg).is_divergent());
    let t4 = DensityModel::polynomial_tail(4.0).unwrap();
    let closed = t4.moment(1.5, &cfg).value;
    let quad = integrate_on(|x| x.abs().powf(1.5) * t4.density(x), &t4.integration_domain(), &cfg);
    assert!((closed - quad.value).abs() < 1e-8 * closed, "{closed} vs {}", quad.value);
    let hg = DensityModel::half_gaussian();
    let quad = integrate_on(|x| x.powi(3) * hg.density(x), &hg.integration_domain(), &cfg);
    assert!((hg.moment(3.0, &cfg).value - quad.value).abs() < 1e-9);
    let l = DensityModel::logistic();
    assert!((l.moment(2.0, &cfg).value - std::f64::consts::PI.powi(2) / 3.0).abs() < 1e-8);
}

#[test]
fn cdf_closed_forms() {
    assert_eq!(DensityModel::std_normal().cdf(0.0), 0.5);
    assert_eq!(DensityModel::logistic().cdf(0.0), 0.5);
    let g = DensityModel::gamma(2.0).unwrap();
    assert!((g.cdf(1.0) - (1.0 - 2.0 * (-1f64).exp())).abs() < 1e-14);
    let cfg = QuadratureConfig::default();
    for (m, lo, hi) in catalog() {
        for i in 0..8 {
            let x = lo + (hi - lo) * i as f64 / 7.0;
            let dom = m.integration_domain();
            let mut left = dom.clone();
            left.interval.upper = x;
            if x <= m.support().lower {
                continue;
            }
            let q = integrate_on(|y| m.density(y), &left, &cfg);
            assert!((m.cdf(x) - q.value).abs() < 1e-9, "{} x={x}: {} vs {}", m.label(), m.cdf(x), q.value);
            assert!((m.cdf(x) + m.survival(x) - 1.0).abs() < 1e-12, "{}", m.label());
        }
    }
}
