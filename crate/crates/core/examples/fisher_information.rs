// `I^(p)` for several families, including divergent cases, with the
// Gamma closed forms alongside.

use fisherp::densities::DensityModel;
use fisherp::functionals::{fisher_info, fisher_info_ungated, score_moment};
use fisherp::quadrature::QuadratureConfig;
use fisherp::verify::fisher_closed_form;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let cfg = QuadratureConfig::default();
    for n in [5.0, 8.0, 10.0, 16.0] {
        let g = DensityModel::gamma(n)?;
        for p in 1..=3 {
            let v = fisher_info(&g, p, &cfg)?;
            let closed = fisher_closed_form(&g, p).unwrap_or(f64::NAN);
            println!("gamma n={n:>4} p={p}: {:>24.16e} {:?}  closed {closed:.16e}", v.value, v.status);
            if v.is_finite() && ((v.value - closed) / closed).abs() > 1e-7 {
                return Err(format!("gamma n={n} p={p} misses its closed form").into());
            }
        }
    }

    let z = DensityModel::normal(0.0, 2.0)?;
    for p in 1..=5 {
        println!("N(0,4) p={p}: {:.16e}", fisher_info(&z, p, &cfg)?.value);
    }

    let l = DensityModel::logistic();
    println!("logistic I = {:.12}, I_4 = {:.12}", fisher_info(&l, 1, &cfg)?.value, score_moment(&l, 4.0, &cfg)?.value);

    // the hermite-weighted density x²φ(x): finite at p = 1, 3, infinite at p = 2
    let hw = DensityModel::hermite_weighted();
    for p in 1..=3 {
        let v = fisher_info_ungated(&hw, p, &cfg)?;
        println!("x^2 phi(x) p={p}: {:?} value {:.6e}", v.status, v.value);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
