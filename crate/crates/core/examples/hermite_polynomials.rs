// Chebyshev–Hermite polynomials: coefficients, stable evaluation, and the
// Gaussian moments `E H_p(Z)² = p!`.

use fisherp::hermite::{factorial, hermite, hermite_eval, hermite_eval_all, hermite_sq_gaussian_mean};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let h4 = hermite(4)?;
    println!("H_4 coefficients (ascending): {:?}", h4.coeffs());
    assert_eq!(h4.coeffs(), &[3.0, 0.0, -6.0, 0.0, 1.0]);

    let x = 1.7;
    let all = hermite_eval_all(6, x);
    for (p, v) in all.iter().enumerate() {
        println!("H_{p}({x}) = {v:.12}");
    }
    if (hermite_eval(4, x) - h4.eval(x)).abs() > 1e-12 {
        return Err("recurrence and coefficients disagree".into());
    }

    for p in 0..=6 {
        let m = hermite_sq_gaussian_mean(p)?;
        println!("E H_{p}(Z)^2 = {m} (p! = {})", factorial(p));
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
