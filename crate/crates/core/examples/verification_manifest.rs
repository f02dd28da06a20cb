// A verification manifest with a parameter grid, run as a suite, plus a
// reversed negative control that must fail.

use fisherp::quadrature::QuadratureConfig;
use fisherp::report::{suite_json, summarize};
use fisherp::verify::{run_suite, suite_passed, Manifest};

const MANIFEST: &str = r#"{
  "checks": [
    {"name": "fisher_closed_form",
     "grid": {"density": [{"family":"gamma","params":{"n":8}}, {"family":"gamma","params":{"n":5}}],
              "p": [1, 2, 3]}},
    {"name": "thm13",
     "grid": {"density": [{"family":"logistic","params":{}}, {"family":"hermite_weighted","params":{}}]}},
    {"name": "counterexample_110", "grid": {"n": [6, 10]}},
    {"name": "product_bound", "params": {"density": {"family":"beta","params":{"alpha":5,"beta":5}}}, "grid": {"p": [1, 2]}}
  ]
}"#;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let cfg = QuadratureConfig::default();
    let reports = run_suite(&Manifest::from_json_str(MANIFEST)?, &cfg)?;
    for r in &reports {
        println!("{:<20} {:<24} {}", r.check_name, r.verdict.to_string(), r.inputs);
    }
    let s = summarize(&reports);
    println!("pass {} fail {} skipped {}", s.pass, s.fail, s.skipped);
    if !suite_passed(&reports) {
        return Err("manifest failed".into());
    }

    let reversed = r#"{"checks":[{"name":"product_bound","params":{"density":{"family":"gamma","params":{"n":10}},"p":2,"reverse":true}}]}"#;
    let control = run_suite(&Manifest::from_json_str(reversed)?, &cfg)?;
    println!("{}", serde_json::to_string(&suite_json(&control)["summary"])?);
    if suite_passed(&control) {
        return Err("reversed inequality was not detected".into());
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
