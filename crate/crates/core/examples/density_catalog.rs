// The density catalog: construction, support, derivatives, score ratios,
// CDFs and the JSON descriptors the CLI accepts.

use fisherp::densities::DensityModel;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let models = vec![
        DensityModel::std_normal(),
        DensityModel::gamma(10.0)?,
        DensityModel::beta(3.0, 3.0)?,
        DensityModel::hermite_weighted(),
        DensityModel::polynomial_tail(4.5)?,
        DensityModel::half_gaussian(),
        DensityModel::logistic(),
        DensityModel::mixture(vec![(0.4, DensityModel::std_normal()), (0.6, DensityModel::normal(3.0, 0.5)?)])?,
        DensityModel::gaussian_convolution(DensityModel::gamma(10.0)?, 0.5)?,
    ];
    for m in &models {
        let (c, _) = m.center_scale();
        let x = c + 0.3;
        println!(
            "{:<60} support {:?}  f={:.6e} f'={:+.6e} f''/f={:+.6e} F={:.6}",
            m.label(),
            (m.support().lower, m.support().upper),
            m.density(x),
            m.derivative(1, x)?,
            m.ratio(2, x)?,
            m.cdf(x),
        );
        println!("    smoothness order: {:?}", m.smoothness_order());
    }

    let from_json = DensityModel::from_descriptor_str(r#"{"family":"gamma","params":{"n":10}}"#)?;
    assert_eq!(from_json, models[1]);
    println!("descriptor: {}", from_json.to_descriptor());

    match DensityModel::from_descriptor_str(r#"{"family":"gamma","params":{"n":-1}}"#) {
        Err(e) => println!("rejected: {e}"),
        Ok(_) => return Err("negative shape accepted".into()),
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
