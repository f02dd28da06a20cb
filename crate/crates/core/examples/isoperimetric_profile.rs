// The profile `L(t) = f(F^{-1}(t))`: a sampled grid as CSV, and `I`,
// `I^(2)` as integrals over `t`.

use fisherp::densities::DensityModel;
use fisherp::functionals::fisher_info;
use fisherp::profile::{boundary_diagnostics, build_profile, i2_via_profile, info_via_profile, quantile, I2Variant};
use fisherp::quadrature::QuadratureConfig;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let cfg = QuadratureConfig::default();
    let l = DensityModel::logistic();
    let grid = build_profile(&l, 9)?;
    let mut csv = Vec::new();
    grid.write_csv(&mut csv)?;
    print!("{}", String::from_utf8(csv)?);

    println!("logistic F^-1(0.9) = {:.15}", quantile(&l, 0.9)?);
    for m in [DensityModel::std_normal(), DensityModel::gamma(10.0)?, l] {
        let direct = fisher_info(&m, 2, &cfg)?.value;
        let sq = i2_via_profile(&m, I2Variant::Squared, &cfg)?.value;
        let split = i2_via_profile(&m, I2Variant::Split, &cfg)?.value;
        let i = info_via_profile(&m, 2.0, &cfg)?.value;
        println!("{:<24} I(profile) {i:.10e}  I2 direct {direct:.10e} squared {sq:.10e} split {split:.10e}", m.label());
        if ((sq - direct) / direct).abs() > 1e-4 || ((split - direct) / direct).abs() > 1e-4 {
            return Err("profile representations disagree".into());
        }
    }

    let diag = boundary_diagnostics(&DensityModel::std_normal())?;
    for r in &diag.lower {
        println!("t={:.0e} L*L'={:.4e} L*L'^3={:.4e}", r.t, r.l_lp, r.l_lp3);
    }
    println!("boundary terms shrink: {}", diag.monotone());
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
