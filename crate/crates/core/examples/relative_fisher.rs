// Relative Fisher information against the standard normal, by direct
// quadrature and by the identity `I^(p) - 2 p! + E H_p(X)²`.

use fisherp::densities::DensityModel;
use fisherp::functionals::relative_fisher;
use fisherp::quadrature::QuadratureConfig;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let cfg = QuadratureConfig::default();
    let cases = [
        DensityModel::gamma(12.0)?,
        DensityModel::logistic(),
        DensityModel::normal(0.5, 1.2)?,
        DensityModel::std_normal(),
    ];
    for m in &cases {
        for p in 1..=2 {
            let r = relative_fisher(m, p, &cfg)?;
            println!(
                "{:<32} p={p} direct {:.12e} identity {:.12e} discrepancy {:.1e}",
                m.label(),
                r.direct.value,
                r.via_identity.value,
                r.discrepancy()
            );
            if r.discrepancy() > 1e-5 {
                return Err("identity does not hold".into());
            }
        }
    }
    // heavy tails: E X^4 is infinite for q = 4.5 only from p = 2 on
    let t = DensityModel::polynomial_tail(4.5)?;
    println!("polynomial tail p=2: {:?}", relative_fisher(&t, 2, &cfg).err());
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
