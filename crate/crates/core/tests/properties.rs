use fisherp::densities::DensityModel;
use fisherp::functionals::{fisher_info, hermite_square_mean};
use fisherp::hermite::{factorial, hermite, hermite_eval};
use fisherp::profile::quantile;
use fisherp::quadrature::QuadratureConfig;
use proptest::prelude::*;

fn cfg() -> QuadratureConfig {
    QuadratureConfig::default()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn scale_law(n in 9.0f64..20.0, b in 0.3f64..3.0, p in 1usize..=2) {
        let g = DensityModel::gamma(n).unwrap();
        let base = fisher_info(&g, p, &cfg()).unwrap().value;
        let scaled = fisher_info(&DensityModel::affine(g, 0.0, b).unwrap(), p, &cfg()).unwrap().value;
        let want = base * b.powi(-2 * p as i32);
        prop_assert!(((scaled - want) / want).abs() < 1e-7, "{scaled} vs {want}");
    }

    #[test]
    fn shift_invariance(a in -5.0f64..5.0, p in 1usize..=3) {
        let l = DensityModel::logistic();
        let base = fisher_info(&l, p, &cfg()).unwrap().value;
        let moved = fisher_info(&DensityModel::affine(l, a, 1.0).unwrap(), p, &cfg()).unwrap().value;
        prop_assert!(((moved - base) / base).abs() < 1e-8);
    }

    #[test]
    fn quantile_inverts_cdf(t in 1e-9f64..(1.0 - 1e-9), n in 3.0f64..30.0) {
        for m in [DensityModel::gamma(n).unwrap(), DensityModel::logistic(), DensityModel::beta(2.0, n).unwrap()] {
            let x = quantile(&m, t).unwrap();
            let back = if t <= 0.5 { m.cdf(x) } else { 1.0 - m.survival(x) };
            prop_assert!((back - t).abs() <= 1e-10 * t.min(1.0 - t).max(1e-300) + 1e-15, "{} t={t}", m.label());
        }
    }

    #[test]
    fn hermite_three_term_recurrence(p in 1usize..25, x in -8.0f64..8.0) {
        let lhs = hermite_eval(p + 1, x);
        let rhs = x * hermite_eval(p, x) - p as f64 * hermite_eval(p - 1, x);
        prop_assert!((lhs - rhs).abs() <= 1e-12 * lhs.abs().max(rhs.abs()).max(1.0));
    }

    #[test]
    fn cramer_rao_on_random_normals(mean in -2.0f64..2.0, sigma in 0.3f64..3.0, p in 1usize..=3) {
        let m = DensityModel::normal(mean, sigma).unwrap();
        let i = fisher_info(&m, p, &cfg()).unwrap().value;
        let e = hermite_square_mean(&m, &hermite(p).unwrap(), &cfg()).value;
        prop_assert!(i + e >= 2.0 * factorial(p) * (1.0 - 1e-9));
        prop_assert!(((i - factorial(p) * sigma.powi(-2 * p as i32)) / i).abs() < 1e-8);
    }

    #[test]
    fn density_nonnegative_and_ratio_consistent(x in -6.0f64..30.0, n in 5.0f64..15.0) {
        for m in [DensityModel::gamma(n).unwrap(), DensityModel::logistic(), DensityModel::hermite_weighted()] {
            let f = m.density(x);
            prop_assert!(f >= 0.0);
            if f > 1e-200 {
                let r = m.ratio(2, x).unwrap();
                let d = m.derivative(2, x).unwrap();
                prop_assert!((r * f - d).abs() <= 1e-9 * d.abs().max(f));
            }
        }
    }
}
