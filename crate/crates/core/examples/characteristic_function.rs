// The characteristic function: closed forms where known, quadrature
// otherwise, and the decay `|t|^p |f̂(t)| → 0`.

use fisherp::densities::DensityModel;
use fisherp::functionals::{charfn_log_modulus, charfn_modulus, charfn_numeric};
use fisherp::quadrature::QuadratureConfig;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let cfg = QuadratureConfig::default();
    let g = DensityModel::gamma(6.0)?;
    for t in [0.5, 1.0, 2.0] {
        let (re, im) = charfn_numeric(&g, t, &cfg);
        let closed = charfn_modulus(&g, t, &cfg).value;
        println!("gamma(6) t={t}: numeric |f^| {:.14e}, closed {:.14e}", re.value.hypot(im.value), closed);
    }
    let b = DensityModel::beta(5.0, 5.0)?;
    for t in [5.0, 10.0, 20.0, 40.0] {
        let lm = charfn_log_modulus(&b, t, &cfg);
        println!("beta(5,5) t={t:>4}: ln|f^| = {:.6} ({:?}), t^2 |f^| = {:.6e}", lm.value, lm.status, t * t * lm.value.exp());
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
