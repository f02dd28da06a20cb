// Integrability and decay bounds on the derivatives of a density in terms
// of `I^(p)` and its moments.

use fisherp::densities::DensityModel;
use fisherp::quadrature::QuadratureConfig;
use fisherp::verify::{check_charfn_decay, check_derivative_bounds};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let cfg = QuadratureConfig::default();
    for m in [DensityModel::std_normal(), DensityModel::gamma(12.0)?] {
        println!("{}", m.label());
        let mut reports = check_derivative_bounds(&m, 2, &cfg)?;
        reports.push(check_charfn_decay(&m, 2, &cfg)?);
        for r in &reports {
            println!("    {:<26} {:<6} bound {:.6e} value {:.6e}", r.check_name, r.verdict.to_string(), r.lhs, r.rhs);
            if r.failed() {
                return Err(format!("{} failed", r.check_name).into());
            }
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
