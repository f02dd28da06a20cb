// Stam-type inequalities for independent sums and the optimal convex
// weights behind the sharp form.

use fisherp::densities::DensityModel;
use fisherp::quadrature::QuadratureConfig;
use fisherp::verify::{check_stam, check_stam_product, check_stam_sharp, optimal_q, StamWeights};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let cfg = QuadratureConfig::default();
    let g = DensityModel::gamma(10.0)?;
    let z = DensityModel::std_normal();
    let reports = [
        check_stam(&g, &g, 2, 1, &cfg)?,
        check_stam_product(&g, &g, 2, 1, &cfg)?,
        check_stam(&z, &DensityModel::normal(0.0, 2.0)?, 2, 1, &cfg)?,
        check_stam_sharp(&z, &z, 3, &cfg)?,
        check_stam_sharp(&z, &DensityModel::gamma(14.0)?, 2, &cfg)?,
        check_stam_sharp(&g, &DensityModel::logistic(), 2, &cfg)?,
    ];
    for r in &reports {
        println!("{:<14} {:<12} lhs {:.10e} rhs {:.10e} slack {:+.3e}", r.check_name, r.verdict.to_string(), r.lhs, r.rhs, r.slack);
        if r.failed() {
            return Err(format!("{} failed", r.check_name).into());
        }
    }

    let a = [2.0, 0.5, 3.0];
    let w = StamWeights::optimal(&a)?;
    println!("A = {a:?}: optimal alpha {:?}, Q = {:.12} = {:.12}", w.alphas, w.q_value(&a), optimal_q(&a)?);
    let even = StamWeights::new(vec![1.0 / 3.0; 3])?;
    println!("uniform alpha gives Q = {:.12}", even.q_value(&a));
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
