// Densities of independent sums, their Fisher information, and the
// Gaussian smoothing ladder `I^(p)(X + εZ)` as `ε` shrinks.

use fisherp::convolution::{fisher_info_convolved, smoothing_ladder, ConvolvedDensity};
use fisherp::densities::DensityModel;
use fisherp::quadrature::QuadratureConfig;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let cfg = QuadratureConfig::default();
    let g = DensityModel::gamma(10.0)?;
    let sum = ConvolvedDensity::new(g.clone(), g.clone());
    println!("h(20) = {:.12e} (gamma(20) density {:.12e})", sum.eval(0, 20.0, &cfg)?.value, DensityModel::gamma(20.0)?.density(20.0));
    for p in 1..=2 {
        let v = fisher_info_convolved(&sum, p, &cfg)?;
        println!("I^({p})(G10 + G10) = {:.10e}", v.value);
    }

    let ladder = smoothing_ladder(&g, 1, &[1.0, 0.5, 0.25, 0.1], &cfg)?;
    for r in &ladder.rungs {
        println!("eps {:<5} I = {:.10e}  bound {:.4e}", r.eps, r.value.value, r.bound);
    }
    println!("extrapolated to eps = 0: {:?}", ladder.extrapolated);
    if !ladder.is_monotone(0.0) || !ladder.within_bounds() {
        return Err("ladder is not monotone or exceeds its bound".into());
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
