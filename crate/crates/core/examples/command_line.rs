// Driving the `fisherp` command line in-process: compute, table, profile
// and verify, writing reports to a scratch directory.

use fisherp::cli::run;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let dir = std::env::temp_dir().join(format!("fisherp-example-{}", std::process::id()));
    std::fs::create_dir_all(&dir)?;
    let path = |name: &str| dir.join(name).to_string_lossy().into_owned();

    let runs: Vec<(Vec<String>, i32)> = vec![
        (vec!["compute", "--family", "gamma", "--n", "10", "--p", "1,2", "--out", &path("compute.json")], 0),
        (vec!["compute", "--family", "gamma", "--n", "5", "--p", "3", "--format", "csv", "--out", &path("divergent.csv")], 0),
        (vec!["table", "--format", "md", "--out", &path("gamma.md")], 0),
        (vec!["profile", "--family", "logistic", "--nodes", "16", "--format", "csv", "--out", &path("profile.csv")], 0),
        (vec!["verify", "--manifest", &path("missing.json")], 2),
    ]
    .into_iter()
    .map(|(a, c)| (a.into_iter().map(String::from).collect(), c))
    .collect();

    for (args, want) in runs {
        let code = run(std::iter::once("fisherp".to_string()).chain(args.iter().cloned()));
        println!("fisherp {} -> exit {code}", args.join(" "));
        if code != want {
            return Err(format!("expected exit {want}, got {code}").into());
        }
    }
    println!("{}", std::fs::read_to_string(dir.join("gamma.md"))?);
    println!("{}", std::fs::read_to_string(dir.join("divergent.csv"))?);
    std::fs::remove_dir_all(&dir)?;
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
