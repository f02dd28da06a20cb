// The matrix `V_{k,l} = ∫ f^(k) f^(l) / f` and the Gamma counterexample:
// `V_{1,2}` is strictly positive, so the cross term cannot be dropped.

use fisherp::densities::DensityModel;
use fisherp::functionals::CrossFunctionalMatrix;
use fisherp::quadrature::QuadratureConfig;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let cfg = QuadratureConfig::default();
    for n in [8.0, 10.0, 16.0] {
        let g = DensityModel::gamma(n)?;
        let m = CrossFunctionalMatrix::compute(&g, 2, &cfg)?;
        println!("gamma n={n}");
        for row in &m.entries {
            println!("    {}", row.iter().map(|v| format!("{:>14.8e}", v.value)).collect::<Vec<_>>().join(" "));
        }
        let want = 2.0 / ((n - 2.0) * (n - 3.0));
        let got = m.entry(1, 2).value;
        println!("    V12 = {got:.12e}, 2/((n-2)(n-3)) = {want:.12e}");
        if ((got - want) / want).abs() > 1e-6 || m.entry(1, 0).value.abs() > 1e-9 {
            return Err("cross-functional mismatch".into());
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
