//! Command-line front end: `compute`, `profile`, `verify` and `table`.
//!
//! Exit codes: 0 success, 1 a verification failed, 2 bad input or internal
//! error. A divergent functional is an answer, not an error.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Deserialize;
use serde_json::{json, Map, Value};

use crate::densities::DensityModel;
use crate::error::{Error, Result};
use crate::functionals::{fisher_info, relative_fisher, score_moment, CrossFunctionalMatrix};
use crate::profile::{build_profile, i2_via_profile, info_via_profile, I2Variant};
use crate::quadrature::{FunctionalValue, QuadratureConfig};
use crate::report::{self, cell, num, status_cell, value_cell, value_json, Format, Table};
use crate::verify::{fisher_closed_form, run_suite, suite_passed, Manifest};

#[derive(Debug, Parser)]
#[command(name = "fisherp", version, about = "Higher-order Fisher information of one-dimensional densities")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// I^(p), score moments, cross-functionals and relative Fisher information.
    Compute(ComputeArgs),
    /// Sampled isoperimetric profile and profile integrals.
    Profile(ProfileArgs),
    /// Run a verification manifest.
    Verify(VerifyArgs),
    /// Closed form against numerics over a family of parameters.
    Table(TableArgs),
}

#[derive(Debug, Clone, Args, Default)]
pub struct DensityArgs {
    /// normal, gamma, beta, hermite_weighted, polynomial_tail, half_gaussian, logistic
    #[arg(long)]
    pub family: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    pub mean: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub sigma: Option<f64>,
    /// Gamma shape.
    #[arg(long, allow_negative_numbers = true)]
    pub n: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub alpha: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub beta: Option<f64>,
    /// Polynomial tail exponent.
    #[arg(long, allow_negative_numbers = true)]
    pub q: Option<f64>,
    /// Full JSON descriptor, e.g. '{"family":"gamma","params":{"n":10}}'.
    #[arg(long, conflicts_with = "family")]
    pub density: Option<String>,
}

#[derive(Debug, Clone, Args, Default)]
pub struct CommonArgs {
    #[arg(long)]
    pub rel_tol: Option<f64>,
    /// json, csv or md
    #[arg(long)]
    pub format: Option<String>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// JSON file of defaults; flags override it.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct ComputeArgs {
    #[command(flatten)]
    pub density: DensityArgs,
    /// Orders, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub p: Vec<usize>,
    /// Also emit the matrix V_{k,l} up to the largest p.
    #[arg(long)]
    pub matrix: bool,
    /// Also emit the relative Fisher information against N(0,1).
    #[arg(long)]
    pub relative: bool,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Clone, Args)]
pub struct ProfileArgs {
    #[command(flatten)]
    pub density: DensityArgs,
    #[arg(long, default_value_t = 64)]
    pub nodes: usize,
    /// Also emit I, I_p and I^(2) through the profile.
    #[arg(long)]
    pub integrals: bool,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    #[arg(long)]
    pub manifest: PathBuf,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Clone, Args)]
pub struct TableArgs {
    /// gamma or normal
    #[arg(long, default_value = "gamma")]
    pub family: String,
    /// Gamma shapes, comma separated; empty for a header-only table.
    #[arg(long)]
    pub shapes: Option<String>,
    /// Normal scales, comma separated.
    #[arg(long)]
    pub sigmas: Option<String>,
    /// Orders for the normal table, comma separated.
    #[arg(long)]
    pub p: Option<String>,
    #[command(flatten)]
    pub common: CommonArgs,
}

/// Defaults read from `--config`.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub rel_tol: Option<f64>,
    pub abs_tol: Option<f64>,
    pub max_depth: Option<usize>,
    pub divergence_cap: Option<f64>,
    pub format: Option<String>,
    pub out: Option<PathBuf>,
    pub density: Option<Value>,
    pub p: Option<Vec<usize>>,
}

/// Text produced by a command and the exit status it implies.
#[derive(Debug, Clone, PartialEq)]
pub struct CommandOutput {
    pub code: i32,
    pub text: String,
    pub out: Option<PathBuf>,
}

/// Everything a command needs once flags and the config file are merged.
#[derive(Debug, Clone)]
pub struct RunDescriptor {
    pub density: Option<DensityModel>,
    pub p: Vec<usize>,
    pub cfg: QuadratureConfig,
    pub format: Format,
    pub out: Option<PathBuf>,
}

fn load_config(path: Option<&Path>) -> Result<ConfigFile> {
    let Some(path) = path else {
        return Ok(ConfigFile::default());
    };
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Io(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| Error::descriptor(format!("config line {}, column {}", e.line(), e.column()), e.to_string()))
}

fn density_from_flags(d: &DensityArgs) -> Result<Option<Value>> {
    if let Some(s) = &d.density {
        let v: Value = serde_json::from_str(s)
            .map_err(|e| Error::descriptor(format!("line {}, column {}", e.line(), e.column()), e.to_string()))?;
        return Ok(Some(v));
    }
    let Some(family) = &d.family else {
        return Ok(None);
    };
    let mut params = Map::new();
    let mut put = |k: &str, v: Option<f64>| {
        if let Some(v) = v {
            params.insert(k.into(), json!(v));
        }
    };
    put("mean", d.mean);
    put("sigma", d.sigma);
    put("n", d.n);
    put("alpha", d.alpha);
    put("beta", d.beta);
    put("q", d.q);
    Ok(Some(json!({"family": family, "params": params})))
}

/// Merges flags over the config file.
pub fn resolve(density: Option<&DensityArgs>, p: &[usize], common: &CommonArgs) -> Result<RunDescriptor> {
    let file = load_config(common.config.as_deref())?;
    let desc = match density.map(density_from_flags).transpose()?.flatten() {
        Some(v) => Some(v),
        None => file.density.clone(),
    };
    let density = desc.as_ref().map(DensityModel::from_descriptor).transpose()?;
    let mut cfg = match common.rel_tol.or(file.rel_tol) {
        Some(t) => QuadratureConfig::with_rel_tol(t),
        None => QuadratureConfig::default(),
    };
    if let Some(a) = file.abs_tol {
        cfg.abs_tol = a;
    }
    if let Some(d) = file.max_depth {
        cfg.max_depth = d;
    }
    if let Some(c) = file.divergence_cap {
        cfg.divergence_cap = c;
    }
    cfg.validate()?;
    let format = match common.format.as_deref().or(file.format.as_deref()) {
        Some(s) => s.parse().map_err(Error::InvalidParameter)?,
        None => Format::Json,
    };
    let p = if p.is_empty() { file.p.unwrap_or_default() } else { p.to_vec() };
    Ok(RunDescriptor {
        density,
        p,
        cfg,
        format,
        out: common.out.clone().or(file.out),
    })
}

fn require_density(rd: &RunDescriptor) -> Result<&DensityModel> {
    rd.density
        .as_ref()
        .ok_or_else(|| Error::descriptor("family", "a density is required (--family or --density)"))
}

fn render_table(t: &Table, format: Format, title: Value) -> Result<String> {
    Ok(match format {
        Format::Json => report::json_text(&json!({"table": title, "rows": t.to_json()})),
        Format::Csv => t.to_csv()?,
        Format::Markdown => t.to_markdown(),
    })
}

pub fn cmd_compute(rd: &RunDescriptor, matrix: bool, relative: bool) -> Result<CommandOutput> {
    let model = require_density(rd)?;
    let orders = if rd.p.is_empty() { vec![1] } else { rd.p.clone() };
    let cfg = &rd.cfg;
    let mut rows = Vec::new();
    for &p in &orders {
        let fisher = fisher_info(model, p, cfg)?;
        let moment = if p >= 1 {
            Some(score_moment(model, p as f64, cfg)?)
        } else {
            None
        };
        let rel = if relative {
            match relative_fisher(model, p, cfg) {
                Ok(r) => Some(Ok(r)),
                Err(Error::MomentRequired { .. }) => Some(Err(())),
                Err(e) => return Err(e),
            }
        } else {
            None
        };
        rows.push((p, fisher, moment, rel));
    }
    let top = *orders.iter().max().expect("orders are nonempty");
    let mat = if matrix {
        Some(CrossFunctionalMatrix::compute(model, top, cfg)?)
    } else {
        None
    };
    let text = match rd.format {
        Format::Json => {
            let results: Vec<Value> = rows
                .iter()
                .map(|(p, f, m, r)| {
                    let mut o = json!({"p": p, "fisher": value_json(f)});
                    if let Some(m) = m {
                        o["score_moment"] = value_json(m);
                    }
                    match r {
                        Some(Ok(r)) => {
                            o["relative_fisher"] = json!({
                                "direct": value_json(&r.direct),
                                "via_identity": value_json(&r.via_identity),
                                "hermite_mean": value_json(&r.hermite_mean),
                            })
                        }
                        Some(Err(())) => o["relative_fisher"] = json!({"status": "moment_required"}),
                        None => {}
                    }
                    o
                })
                .collect();
            let mut out = json!({"density": model.to_descriptor(), "results": results});
            if let Some(m) = &mat {
                out["cross_matrix"] = Value::Array(
                    m.entries
                        .iter()
                        .map(|row| Value::Array(row.iter().map(value_json).collect()))
                        .collect(),
                );
            }
            report::json_text(&out)
        }
        f => {
            let mut t = Table::new(["p", "quantity", "value", "status", "error_estimate"]);
            let mut add = |p: usize, q: &str, v: &FunctionalValue| {
                t.push(vec![p.to_string(), q.into(), value_cell(v), status_cell(v).into(), cell(v.error_estimate)]);
            };
            for (p, fi, m, r) in &rows {
                add(*p, "fisher", fi);
                if let Some(m) = m {
                    add(*p, "score_moment", m);
                }
                if let Some(Ok(r)) = r {
                    add(*p, "relative_fisher", &r.direct);
                }
            }
            if let Some(m) = &mat {
                for k in 0..=top {
                    for l in 0..=top {
                        add(top, &format!("V[{k},{l}]"), m.entry(k, l));
                    }
                }
            }
            render_table(&t, f, model.to_descriptor())?
        }
    };
    Ok(CommandOutput {
        code: 0,
        text,
        out: rd.out.clone(),
    })
}

pub fn cmd_profile(rd: &RunDescriptor, nodes: usize, integrals: bool) -> Result<CommandOutput> {
    let model = require_density(rd)?;
    let grid = build_profile(model, nodes)?;
    let cfg = &rd.cfg;
    let extra = if integrals {
        Some(vec![
            ("fisher_direct", fisher_info(model, 1, cfg)?),
            ("fisher_profile", info_via_profile(model, 2.0, cfg)?),
            ("i2_direct", fisher_info(model, 2, cfg)?),
            ("i2_profile_squared", i2_via_profile(model, I2Variant::Squared, cfg)?),
            ("i2_profile_split", i2_via_profile(model, I2Variant::Split, cfg)?),
        ])
    } else {
        None
    };
    let text = match rd.format {
        Format::Csv => {
            let mut buf = Vec::new();
            grid.write_csv(&mut buf)?;
            String::from_utf8(buf).expect("csv output is utf-8")
        }
        Format::Json => {
            let col = |v: &[f64]| Value::Array(v.iter().map(|x| num(*x)).collect());
            let mut out = json!({
                "density": model.to_descriptor(),
                "grid": {"t": col(&grid.t), "x": col(&grid.x), "L": col(&grid.l), "L'": col(&grid.lp), "LL''": col(&grid.llpp)},
            });
            if let Some(e) = &extra {
                out["integrals"] = Value::Object(e.iter().map(|(k, v)| (k.to_string(), value_json(v))).collect());
            }
            report::json_text(&out)
        }
        Format::Markdown => {
            let mut t = Table::new(["t", "x", "L", "L'", "LL''"]);
            for j in 0..grid.len() {
                t.push([grid.t[j], grid.x[j], grid.l[j], grid.lp[j], grid.llpp[j]].iter().map(|v| cell(*v)).collect());
            }
            let mut s = t.to_markdown();
            if let Some(e) = &extra {
                let mut t = Table::new(["integral", "value", "status"]);
                for (k, v) in e {
                    t.push(vec![k.to_string(), value_cell(v), status_cell(v).into()]);
                }
                s.push('\n');
                s.push_str(&t.to_markdown());
            }
            s
        }
    };
    Ok(CommandOutput {
        code: 0,
        text,
        out: rd.out.clone(),
    })
}

pub fn cmd_verify(manifest: &Path, rd: &RunDescriptor) -> Result<CommandOutput> {
    let m = Manifest::load(manifest)?;
    let reports = run_suite(&m, &rd.cfg)?;
    let text = match rd.format {
        Format::Json => report::json_text(&report::suite_json(&reports)),
        Format::Csv => report::suite_table(&reports).to_csv()?,
        Format::Markdown => {
            let s = report::summarize(&reports);
            format!(
                "{}\npass {} / fail {} / skipped {} / observation {}\n",
                report::suite_table(&reports).to_markdown(),
                s.pass,
                s.fail,
                s.skipped,
                s.observation
            )
        }
    };
    Ok(CommandOutput {
        code: if suite_passed(&reports) { 0 } else { 1 },
        text,
        out: rd.out.clone(),
    })
}

fn parse_list<T: std::str::FromStr>(s: Option<&str>, default: &[T], what: &str) -> Result<Vec<T>>
where
    T: Clone,
{
    match s {
        None => Ok(default.to_vec()),
        Some(s) if s.trim().is_empty() => Ok(Vec::new()),
        Some(s) => s
            .split(',')
            .map(|x| {
                x.trim()
                    .parse()
                    .map_err(|_| Error::InvalidParameter(format!("bad {what} value `{x}`")))
            })
            .collect(),
    }
}

fn rel_err(closed: f64, v: &FunctionalValue) -> String {
    if v.is_finite() && closed.is_finite() {
        cell(((v.value - closed) / closed).abs())
    } else {
        String::new()
    }
}

pub fn cmd_table(args: &TableArgs, rd: &RunDescriptor) -> Result<CommandOutput> {
    let cfg = &rd.cfg;
    let (t, title) = match args.family.as_str() {
        "gamma" => {
            let shapes: Vec<f64> = parse_list(args.shapes.as_deref(), &[8.0, 10.0, 16.0], "shape")?;
            let mut t = Table::new(["n", "quantity", "closed_form", "numeric", "status", "rel_error"]);
            for n in shapes {
                let g = DensityModel::gamma(n)?;
                for p in 1..=3 {
                    let closed = fisher_closed_form(&g, p).unwrap_or(f64::NAN);
                    let v = fisher_info(&g, p, cfg)?;
                    let q = if p == 1 { "I".to_string() } else { format!("I^({p})") };
                    t.push(vec![cell(n), q, cell(closed), value_cell(&v), status_cell(&v).into(), rel_err(closed, &v)]);
                }
                let closed = if n > 4.0 { 2.0 / ((n - 2.0) * (n - 3.0)) } else { f64::INFINITY };
                let v = crate::functionals::cross_functional(&g, 1, 2, cfg)?;
                t.push(vec![cell(n), "V12".into(), cell(closed), value_cell(&v), status_cell(&v).into(), rel_err(closed, &v)]);
            }
            (t, json!("gamma"))
        }
        "normal" => {
            let sigmas: Vec<f64> = parse_list(args.sigmas.as_deref(), &[1.0, 2.0], "sigma")?;
            let orders: Vec<usize> = parse_list(args.p.as_deref(), &[1, 2, 3], "p")?;
            let mut t = Table::new(["sigma", "p", "closed_form", "numeric", "status", "rel_error"]);
            for s in sigmas {
                let m = DensityModel::normal(0.0, s)?;
                for &p in &orders {
                    let closed = fisher_closed_form(&m, p).unwrap_or(f64::NAN);
                    let v = fisher_info(&m, p, cfg)?;
                    t.push(vec![cell(s), p.to_string(), cell(closed), value_cell(&v), status_cell(&v).into(), rel_err(closed, &v)]);
                }
            }
            (t, json!("normal"))
        }
        other => {
            return Err(Error::descriptor("family", format!("table supports gamma and normal, got `{other}`")));
        }
    };
    Ok(CommandOutput {
        code: 0,
        text: render_table(&t, rd.format, title)?,
        out: rd.out.clone(),
    })
}

/// Runs a parsed command.
pub fn execute(cli: &Cli) -> Result<CommandOutput> {
    match &cli.command {
        Command::Compute(a) => cmd_compute(&resolve(Some(&a.density), &a.p, &a.common)?, a.matrix, a.relative),
        Command::Profile(a) => cmd_profile(&resolve(Some(&a.density), &[], &a.common)?, a.nodes, a.integrals),
        Command::Verify(a) => cmd_verify(&a.manifest, &resolve(None, &[], &a.common)?),
        Command::Table(a) => cmd_table(a, &resolve(None, &[], &a.common)?),
    }
}

/// Parses arguments, runs, writes the output (to `--out` or stdout) and
/// returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(&cli) {
        Ok(o) => {
            let written = match &o.out {
                Some(path) => std::fs::write(path, &o.text),
                None => {
                    print!("{}", o.text);
                    Ok(())
                }
            };
            match written {
                Ok(()) => o.code,
                Err(e) => {
                    eprintln!("error: {e}");
                    2
                }
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}
