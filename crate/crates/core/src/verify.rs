//! The inequality harness: each inequality, bound and closed form becomes a
//! named check producing [`InequalityReport`]s, and manifests of checks with
//! parameter grids run as a suite.

use std::fmt;
use std::path::Path;

use rayon::prelude::*;
use serde_json::{json, Map, Value};

use crate::convolution::{fisher_info_convolved, smoothing_ladder, ConvolvedDensity};
use crate::densities::{DensityModel, Family};
use crate::error::{Error, Result};
use crate::functionals::{
    cross_functional, derivative_l2_norm, derivative_tv_norm, effective_support, charfn_log_modulus,
    fisher_info, hermite_square_mean, relative_fisher, score_moment,
};
use crate::hermite::{factorial, hermite, hermite_eval, MonicPolynomial};
use crate::profile::{i2_via_profile, info_via_profile, I2Variant};
use crate::quadrature::{integrate_on, FunctionalValue, IntegrationDomain, QuadratureConfig, Status};
use crate::support::SupportInterval;

/// Outcome of one check instance.
#[derive(Debug, Clone, PartialEq)]
pub enum Verdict {
    Pass,
    Fail,
    Skipped(String),
    /// Exploratory check of a conjecture; a violation is recorded, not failed.
    Observation,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Skipped(_) => "skipped",
            Verdict::Observation => "observation",
        }
    }

    pub fn skip_reason(&self) -> Option<&str> {
        match self {
            Verdict::Skipped(r) => Some(r),
            _ => None,
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Skipped(r) => write!(f, "skipped({r})"),
            v => f.write_str(v.as_str()),
        }
    }
}

/// One verified inequality instance. `slack = lhs - rhs`, oriented so that
/// a nonnegative slack means the inequality holds.
#[derive(Debug, Clone, PartialEq)]
pub struct InequalityReport {
    pub check_name: String,
    pub inputs: Value,
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
    pub verdict: Verdict,
    pub tolerance_used: f64,
}

/// `max(1e-6 |rhs|, 1e-9)`.
pub fn default_tolerance(rhs: f64) -> f64 {
    (1e-6 * rhs.abs()).max(1e-9)
}

/// Ten times [`default_tolerance`], used for equality cases.
pub fn equality_tolerance(rhs: f64) -> f64 {
    10.0 * default_tolerance(rhs)
}

impl InequalityReport {
    /// `lhs ≥ rhs` within `tol`.
    pub fn inequality(name: &str, inputs: Value, lhs: f64, rhs: f64, tol: f64) -> Self {
        let slack = lhs - rhs;
        InequalityReport {
            check_name: name.to_string(),
            inputs,
            lhs,
            rhs,
            slack,
            verdict: if slack >= -tol { Verdict::Pass } else { Verdict::Fail },
            tolerance_used: tol,
        }
    }

    /// `lhs > rhs` strictly.
    pub fn strict(name: &str, inputs: Value, lhs: f64, rhs: f64) -> Self {
        let mut r = Self::inequality(name, inputs, lhs, rhs, 0.0);
        if !(r.slack > 0.0) {
            r.verdict = Verdict::Fail;
        }
        r
    }

    /// `|lhs - rhs| ≤ tol`; the slack is `-|lhs - rhs|`.
    pub fn equality(name: &str, inputs: Value, lhs: f64, rhs: f64, tol: f64) -> Self {
        let gap = (lhs - rhs).abs();
        InequalityReport {
            check_name: name.to_string(),
            inputs,
            lhs,
            rhs,
            slack: -gap,
            verdict: if gap <= tol { Verdict::Pass } else { Verdict::Fail },
            tolerance_used: tol,
        }
    }

    pub fn skipped(name: &str, inputs: Value, reason: &str) -> Self {
        InequalityReport {
            check_name: name.to_string(),
            inputs,
            lhs: f64::NAN,
            rhs: f64::NAN,
            slack: f64::NAN,
            verdict: Verdict::Skipped(reason.to_string()),
            tolerance_used: 0.0,
        }
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    pub fn failed(&self) -> bool {
        self.verdict == Verdict::Fail
    }

    /// Swaps the two sides (negative control).
    pub fn reversed(mut self) -> Self {
        if matches!(self.verdict, Verdict::Pass | Verdict::Fail) {
            std::mem::swap(&mut self.lhs, &mut self.rhs);
            self.slack = self.lhs - self.rhs;
            self.verdict = if self.slack >= -self.tolerance_used {
                Verdict::Pass
            } else {
                Verdict::Fail
            };
        }
        self
    }
}

// ------------------------------------------------------------------ plumbing

enum Halt {
    Skip(&'static str),
    Err(Error),
}

impl From<Error> for Halt {
    fn from(e: Error) -> Self {
        Halt::Err(e)
    }
}

type Checked<T> = std::result::Result<T, Halt>;

fn need(v: FunctionalValue) -> Checked<f64> {
    match v.status {
        Status::Finite => Ok(v.value),
        Status::Divergent => Err(Halt::Skip("DivergentInput")),
        Status::Inconclusive => Err(Halt::Skip("InconclusiveInput")),
    }
}

fn settle(name: &str, inputs: &Value, r: Checked<Vec<InequalityReport>>) -> Result<Vec<InequalityReport>> {
    match r {
        Ok(v) => Ok(v),
        Err(Halt::Skip(reason)) => Ok(vec![InequalityReport::skipped(name, inputs.clone(), reason)]),
        Err(Halt::Err(e)) => Err(e),
    }
}

fn settle_one(name: &str, inputs: &Value, r: Checked<InequalityReport>) -> Result<InequalityReport> {
    settle(name, inputs, r.map(|x| vec![x])).map(|mut v| v.remove(0))
}

fn desc(m: &DensityModel) -> Value {
    m.to_descriptor()
}

/// Known closed forms of `I^(p)`.
pub fn fisher_closed_form(model: &DensityModel, p: usize) -> Option<f64> {
    if p == 0 {
        return Some(1.0);
    }
    if let Some((_, s)) = model.as_normal() {
        return Some(factorial(p) / s.powi(2 * p as i32));
    }
    match model.family() {
        Family::Gamma { shape: n } => {
            let n = *n;
            if n <= 2.0 * p as f64 {
                return Some(f64::INFINITY);
            }
            match p {
                1 => Some(1.0 / (n - 2.0)),
                2 => Some(2.0 * (n + 2.0) / ((n - 2.0) * (n - 3.0) * (n - 4.0))),
                3 => Some(
                    6.0 * (n * n + 13.0 * n + 6.0)
                        / ((n - 2.0) * (n - 3.0) * (n - 4.0) * (n - 5.0) * (n - 6.0)),
                ),
                _ => None,
            }
        }
        Family::Affine { base, scale, .. } => {
            fisher_closed_form(base, p).map(|v| v * scale.powi(-2 * p as i32))
        }
        _ => None,
    }
}

// -------------------------------------------------------------------- checks

/// Numerical `I^(p)` against its closed form (equality).
pub fn check_fisher_closed_form(model: &DensityModel, p: usize, cfg: &QuadratureConfig) -> Result<InequalityReport> {
    let name = "fisher_closed_form";
    let inputs = json!({"density": desc(model), "p": p});
    let r = (|| -> Checked<InequalityReport> {
        let want = fisher_closed_form(model, p).ok_or(Halt::Skip("NoClosedForm"))?;
        let got = need(fisher_info(model, p, cfg)?)?;
        if !want.is_finite() {
            return Err(Halt::Skip("DivergentInput"));
        }
        Ok(InequalityReport::equality(name, inputs.clone(), got, want, equality_tolerance(want)))
    })();
    settle_one(name, &inputs, r)
}

/// `I^(p)(X) + E H(X)² ≥ 2 p!`; when `H = H_p` and `E H_p(X)² = p!`, also
/// `I^(p)(X) ≥ p!`.
pub fn check_cramer_rao(
    model: &DensityModel,
    p: usize,
    poly: &MonicPolynomial,
    cfg: &QuadratureConfig,
) -> Result<Vec<InequalityReport>> {
    let name = "cramer_rao";
    let inputs = json!({"density": desc(model), "p": p, "poly": poly.coeffs()});
    let r = (|| -> Checked<Vec<InequalityReport>> {
        if poly.degree() > p {
            return Err(Halt::Err(Error::InvalidParameter(format!(
                "polynomial degree {} exceeds p = {p}",
                poly.degree()
            ))));
        }
        need(model.moment(2.0 * poly.degree() as f64, cfg))?;
        let i = need(fisher_info(model, p, cfg)?)?;
        let eh = need(hermite_square_mean(model, poly, cfg))?;
        let rhs = 2.0 * factorial(p);
        let mut out = vec![InequalityReport::inequality(name, inputs.clone(), i + eh, rhs, default_tolerance(rhs))];
        let hp = hermite(p)?;
        if hp.coeffs() == poly.coeffs() && (eh - factorial(p)).abs() <= 1e-6 * factorial(p) {
            out.push(InequalityReport::inequality(
                "cramer_rao_hermite",
                inputs.clone(),
                i,
                factorial(p),
                1e-6,
            ));
        }
        Ok(out)
    })();
    settle(name, &inputs, r)
}

/// `I^(2) ≥ I_4/3` and `I_4/3 ≥ I²/3`.
pub fn check_thm13(model: &DensityModel, cfg: &QuadratureConfig) -> Result<Vec<InequalityReport>> {
    let name = "thm13";
    let inputs = json!({"density": desc(model)});
    let r = (|| -> Checked<Vec<InequalityReport>> {
        let i2 = need(fisher_info(model, 2, cfg)?)?;
        let i4 = need(score_moment(model, 4.0, cfg)?)?;
        let i1 = need(fisher_info(model, 1, cfg)?)?;
        let a = i4 / 3.0;
        let b = i1 * i1 / 3.0;
        Ok(vec![
            InequalityReport::inequality("thm13_upper", inputs.clone(), i2, a, default_tolerance(a)),
            InequalityReport::inequality("thm13_lower", inputs.clone(), a, b, default_tolerance(b)),
        ])
    })();
    settle(name, &inputs, r)
}

/// Informations of both summands and of the sum, as needed by Stam checks.
struct StamInputs {
    sum: f64,
    x: Vec<f64>,
    y: Vec<f64>,
}

fn stam_inputs(x: &DensityModel, y: &DensityModel, p: usize, cfg: &QuadratureConfig) -> Checked<StamInputs> {
    let xs = (0..=p).map(|k| need(fisher_info(x, k, cfg)?)).collect::<Checked<Vec<_>>>()?;
    let ys = (0..=p).map(|k| need(fisher_info(y, k, cfg)?)).collect::<Checked<Vec<_>>>()?;
    let sum = need(fisher_info_convolved(&ConvolvedDensity::new(x.clone(), y.clone()), p, cfg)?)?;
    Ok(StamInputs { sum, x: xs, y: ys })
}

/// `1/I^(p)(X+Y) ≥ 1/I^(p)(X) + 1/I^(p)(Y) + 1/(I^(k)(X) I^(p-k)(Y))`.
pub fn check_stam(x: &DensityModel, y: &DensityModel, p: usize, k: usize, cfg: &QuadratureConfig) -> Result<InequalityReport> {
    let name = "stam";
    let inputs = json!({"x": desc(x), "y": desc(y), "p": p, "k": k});
    if k == 0 || k >= p {
        return Err(Error::InvalidParameter(format!("need 1 <= k <= p - 1, got k = {k}, p = {p}")));
    }
    let r = (|| -> Checked<InequalityReport> {
        let s = stam_inputs(x, y, p, cfg)?;
        let lhs = 1.0 / s.sum;
        let rhs = 1.0 / s.x[p] + 1.0 / s.y[p] + 1.0 / (s.x[k] * s.y[p - k]);
        Ok(InequalityReport::inequality(name, inputs.clone(), lhs, rhs, default_tolerance(rhs)))
    })();
    settle_one(name, &inputs, r)
}

/// `I^(k)(X) I^(p-k)(Y) ≥ I^(p)(X+Y)`.
pub fn check_stam_product(x: &DensityModel, y: &DensityModel, p: usize, k: usize, cfg: &QuadratureConfig) -> Result<InequalityReport> {
    let name = "stam_product";
    let inputs = json!({"x": desc(x), "y": desc(y), "p": p, "k": k});
    let r = (|| -> Checked<InequalityReport> {
        let s = stam_inputs(x, y, p, cfg)?;
        let lhs = s.x[k] * s.y[p - k];
        Ok(InequalityReport::inequality(name, inputs.clone(), lhs, s.sum, default_tolerance(s.sum)))
    })();
    settle_one(name, &inputs, r)
}

/// `1/I^(p)(X+Y) ≥ Σ_k 1/(I^(k)(X) I^(p-k)(Y))`. Proven when one summand is
/// normal; for other pairs the verdict is Pass or Observation.
pub fn check_stam_sharp(x: &DensityModel, y: &DensityModel, p: usize, cfg: &QuadratureConfig) -> Result<InequalityReport> {
    let name = "stam_sharp";
    let proven = x.as_normal().is_some() || y.as_normal().is_some();
    let inputs = json!({"x": desc(x), "y": desc(y), "p": p, "exploratory": !proven});
    let r = (|| -> Checked<InequalityReport> {
        let s = stam_inputs(x, y, p, cfg)?;
        let lhs = 1.0 / s.sum;
        let a: Vec<f64> = (0..=p).map(|k| s.x[k] * s.y[p - k]).collect();
        let rhs = 1.0 / optimal_q(&a)?;
        let mut rep = if x.as_normal().is_some() && y.as_normal().is_some() {
            InequalityReport::equality(name, inputs.clone(), lhs, rhs, equality_tolerance(rhs))
        } else {
            InequalityReport::inequality(name, inputs.clone(), lhs, rhs, default_tolerance(rhs))
        };
        if !proven && rep.verdict == Verdict::Fail {
            rep.verdict = Verdict::Observation;
        }
        Ok(rep)
    })();
    settle_one(name, &inputs, r)
}

/// For the Gamma(n) density: `V_{1,2} = 2/((n-2)(n-3))` and the product
/// `V_{1,2} V_{2,1}` is strictly positive.
pub fn check_counterexample_110(n: f64, cfg: &QuadratureConfig) -> Result<Vec<InequalityReport>> {
    let name = "counterexample_110";
    let inputs = json!({"n": n});
    let r = (|| -> Checked<Vec<InequalityReport>> {
        if !(n > 6.0) {
            return Err(Halt::Skip("ShapeAtMostSix"));
        }
        let g = DensityModel::gamma(n)?;
        let v12 = need(cross_functional(&g, 1, 2, cfg)?)?;
        let v21 = need(cross_functional(&g, 2, 1, cfg)?)?;
        let want = 2.0 / ((n - 2.0) * (n - 3.0));
        Ok(vec![
            InequalityReport::equality("v12_closed_form", inputs.clone(), v12, want, 1e-6 * want),
            InequalityReport::strict(name, inputs.clone(), v12 * v21, 0.0),
        ])
    })();
    settle(name, &inputs, r)
}

/// `Σ αᵢ I^(p)(fᵢ) ≥ I^(p)(Σ αᵢ fᵢ)`.
pub fn check_convexity(mixture: &DensityModel, p: usize, cfg: &QuadratureConfig) -> Result<InequalityReport> {
    let name = "convexity";
    let inputs = json!({"density": desc(mixture), "p": p});
    let Family::FiniteMixture(cs) = mixture.family() else {
        return Err(Error::InvalidParameter("convexity check needs a mixture".into()));
    };
    let r = (|| -> Checked<InequalityReport> {
        let mut lhs = 0.0;
        for (w, m) in cs {
            lhs += w * need(fisher_info(m, p, cfg)?)?;
        }
        let rhs = need(fisher_info(mixture, p, cfg)?)?;
        Ok(InequalityReport::inequality(name, inputs.clone(), lhs, rhs, default_tolerance(rhs)))
    })();
    settle_one(name, &inputs, r)
}

fn sup_abs_derivative(model: &DensityModel, k: usize) -> f64 {
    let iv = effective_support(model, 1e-14);
    let n = 4000;
    let w = (iv.upper - iv.lower) / n as f64;
    let mut best = (0.0f64, iv.lower);
    for i in 0..=n {
        let x = iv.lower + w * i as f64;
        let v = model.derivative_unchecked(k, x).abs();
        if v > best.0 {
            best = (v, x);
        }
    }
    // golden-section polish around the best grid point
    let (mut a, mut b) = ((best.1 - w).max(iv.lower), (best.1 + w).min(iv.upper));
    let g = 0.5 * (5f64.sqrt() - 1.0);
    for _ in 0..60 {
        let c = b - g * (b - a);
        let d = a + g * (b - a);
        if model.derivative_unchecked(k, c).abs() > model.derivative_unchecked(k, d).abs() {
            b = d;
        } else {
            a = c;
        }
    }
    best.0.max(model.derivative_unchecked(k, 0.5 * (a + b)).abs())
}

fn decay_grid(model: &DensityModel) -> Vec<f64> {
    let s = model.support();
    let (c, w) = model.center_scale();
    let margin = 1e-3 * w;
    let lo = (c - 5.0 * w).max(if s.lower.is_finite() { s.lower + margin } else { f64::NEG_INFINITY });
    let hi = (c + 5.0 * w).min(if s.upper.is_finite() { s.upper - margin } else { f64::INFINITY });
    (0..21).map(|i| lo + (hi - lo) * i as f64 / 20.0).collect()
}

/// Derivative integrability and decay bounds:
/// (a) `∫|f^(k)| ≤ 4^{p-1} ∫|f| + 2^{4^p} ∫|f^(p)|`, `1 ≤ k ≤ p-1`;
/// (b) `∫|f'| ≤ ∫|f| + ⅔ ∫|f''|`;
/// (c) `∫|f^(p)| ≤ √I^(p)` and `sup|f^(p-1)| ≤ √I^(p)`;
/// (d) `∫ (f^(p))² ≤ I^(p)^{3/2}`;
/// (e) `∫ |x|^s |f^(p)| ≤ √(β_{2s} I^(p))` at `s = p`;
/// (f) `|f^(p-1)(x)| ≤ (1 + √β_{2s}) √I^(p) / (1 + |x|^s)` on a 21-point grid.
pub fn check_derivative_bounds(model: &DensityModel, p: usize, cfg: &QuadratureConfig) -> Result<Vec<InequalityReport>> {
    let name = "derivative_bounds";
    let inputs = json!({"density": desc(model), "p": p});
    if p == 0 {
        return Err(Error::InvalidParameter("derivative bounds need p >= 1".into()));
    }
    let r = (|| -> Checked<Vec<InequalityReport>> {
        let ip = need(fisher_info(model, p, cfg)?)?;
        let sq = ip.sqrt();
        let tv = |k: usize| -> Checked<f64> { need(derivative_tv_norm(model, k, cfg)?) };
        let l0 = tv(0)?;
        let lp = tv(p)?;
        let mut out = Vec::new();
        let with = |extra: Value| {
            let mut v = inputs.clone();
            if let (Value::Object(m), Value::Object(e)) = (&mut v, extra) {
                m.extend(e);
            }
            v
        };
        // (a)
        let a_p = 4f64.powi(p as i32 - 1);
        let b_p = 2f64.powf(4f64.powi(p as i32));
        for k in 1..p {
            let lk = tv(k)?;
            let rhs_bound = a_p * l0 + b_p * lp;
            out.push(InequalityReport::inequality(
                "derivative_bounds_a",
                with(json!({"k": k})),
                rhs_bound,
                lk,
                default_tolerance(lk),
            ));
        }
        // (b)
        if model.smoothness_gate(2) {
            let l1 = tv(1)?;
            let l2 = tv(2)?;
            let bound = l0 + 2.0 / 3.0 * l2;
            out.push(InequalityReport::inequality("derivative_bounds_b", inputs.clone(), bound, l1, default_tolerance(l1)));
        }
        // (c)
        out.push(InequalityReport::inequality("derivative_bounds_c_tv", inputs.clone(), sq, lp, default_tolerance(lp)));
        let sup = sup_abs_derivative(model, p - 1);
        out.push(InequalityReport::inequality("derivative_bounds_c_sup", inputs.clone(), sq, sup, default_tolerance(sup)));
        // (d)
        let l2p = need(derivative_l2_norm(model, p, cfg)?)?;
        let bound = ip.powf(1.5);
        out.push(InequalityReport::inequality("derivative_bounds_d", inputs.clone(), bound, l2p, default_tolerance(l2p)));
        // (e)
        let s = p as f64;
        let beta = need(model.moment(2.0 * s, cfg))?;
        let weighted = need(integrate_on(
            |x| x.abs().powf(s) * model.derivative_unchecked(p, x).abs(),
            &model.integration_domain(),
            cfg,
        ))?;
        let bound = (beta * ip).sqrt();
        out.push(InequalityReport::inequality(
            "derivative_bounds_e",
            with(json!({"s": s})),
            bound,
            weighted,
            default_tolerance(weighted),
        ));
        // (f): the worst grid point
        let c = (1.0 + beta.sqrt()) * sq;
        let worst = decay_grid(model)
            .into_iter()
            .map(|x| {
                let lhs = c / (1.0 + x.abs().powf(s));
                let rhs = model.derivative_unchecked(p - 1, x).abs();
                (lhs - rhs, lhs, rhs, x)
            })
            .min_by(|a, b| a.0.total_cmp(&b.0))
            .expect("grid is nonempty");
        out.push(InequalityReport::inequality(
            "derivative_bounds_f",
            with(json!({"s": s, "worst_x": worst.3, "grid_points": 21})),
            worst.1,
            worst.2,
            default_tolerance(worst.2),
        ));
        Ok(out)
    })();
    settle(name, &inputs, r)
}

/// Frequencies of the decay probe.
pub const CHARFN_PROBES: [f64; 4] = [5.0, 10.0, 20.0, 40.0];

/// `|t|^p |f̂(t)|` strictly decreases along `t ∈ {5, 10, 20, 40}`. Compared
/// in logarithms; the slack is the smallest log-decrease.
pub fn check_charfn_decay(model: &DensityModel, p: usize, cfg: &QuadratureConfig) -> Result<InequalityReport> {
    let name = "charfn_decay";
    let inputs = json!({"density": desc(model), "p": p, "t": CHARFN_PROBES});
    let r = (|| -> Checked<InequalityReport> {
        need(fisher_info(model, p, cfg)?)?;
        let logs = CHARFN_PROBES
            .iter()
            .map(|&t| Ok(p as f64 * t.ln() + need(charfn_log_modulus(model, t, cfg))?))
            .collect::<Checked<Vec<f64>>>()?;
        let min_drop = logs.windows(2).map(|w| w[0] - w[1]).fold(f64::INFINITY, f64::min);
        Ok(InequalityReport::strict(name, inputs.clone(), min_drop, 0.0))
    })();
    settle_one(name, &inputs, r)
}

/// Relative Fisher information by direct quadrature against the identity
/// `I^(p) - 2 p! + E H_p(X)²` (equality, relative 1e-5).
pub fn check_relative_fisher_identity(model: &DensityModel, p: usize, cfg: &QuadratureConfig) -> Result<InequalityReport> {
    let name = "relative_fisher_identity";
    let inputs = json!({"density": desc(model), "p": p});
    let r = (|| -> Checked<InequalityReport> {
        let rf = match relative_fisher(model, p, cfg) {
            Err(Error::MomentRequired { .. }) => return Err(Halt::Skip("MomentRequired")),
            other => other?,
        };
        let direct = need(rf.direct)?;
        let ident = need(rf.via_identity)?;
        let tol = 1e-5 * direct.abs().max(ident.abs()).max(1.0);
        Ok(InequalityReport::equality(name, inputs.clone(), direct, ident, tol))
    })();
    settle_one(name, &inputs, r)
}

/// `I^(p)(X) · E X^{2p} ≥ p!/2`.
pub fn check_product_bound(model: &DensityModel, p: usize, cfg: &QuadratureConfig) -> Result<InequalityReport> {
    let name = "product_bound";
    let inputs = json!({"density": desc(model), "p": p});
    let r = (|| -> Checked<InequalityReport> {
        let i = need(fisher_info(model, p, cfg)?)?;
        let m = need(model.moment(2.0 * p as f64, cfg))?;
        let rhs = 0.5 * factorial(p);
        Ok(InequalityReport::inequality(name, inputs.clone(), i * m, rhs, default_tolerance(rhs)))
    })();
    settle_one(name, &inputs, r)
}

/// `min(I^(p)(X), I^(p)(Y)) ≥ I^(p)(X+Y)` within `1e-6`.
pub fn check_convolution_monotonicity(x: &DensityModel, y: &DensityModel, p: usize, cfg: &QuadratureConfig) -> Result<InequalityReport> {
    let name = "convolution_monotonicity";
    let inputs = json!({"x": desc(x), "y": desc(y), "p": p});
    let r = (|| -> Checked<InequalityReport> {
        let ix = need(fisher_info(x, p, cfg)?)?;
        let iy = need(fisher_info(y, p, cfg)?)?;
        let s = need(fisher_info_convolved(&ConvolvedDensity::new(x.clone(), y.clone()), p, cfg)?)?;
        Ok(InequalityReport::inequality(name, inputs.clone(), ix.min(iy), s, 1e-6))
    })();
    settle_one(name, &inputs, r)
}

/// Along a smoothing ladder: values increase strictly as `ε` decreases, and
/// each stays below `p! ε^{-2p}`.
pub fn check_smoothing_ladder(model: &DensityModel, p: usize, eps: &[f64], cfg: &QuadratureConfig) -> Result<Vec<InequalityReport>> {
    let name = "smoothing_ladder";
    let inputs = json!({"density": desc(model), "p": p, "eps": eps});
    let r = (|| -> Checked<Vec<InequalityReport>> {
        let ladder = smoothing_ladder(model, p, eps, cfg)?;
        let vals = ladder
            .rungs
            .iter()
            .map(|r| need(r.value))
            .collect::<Checked<Vec<f64>>>()?;
        let min_rise = vals.windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min);
        let worst = ladder
            .rungs
            .iter()
            .zip(&vals)
            .map(|(r, v)| (r.bound - v, r.bound, *v))
            .min_by(|a, b| a.0.total_cmp(&b.0))
            .ok_or(Halt::Skip("EmptyLadder"))?;
        let mut out = Vec::new();
        if vals.len() >= 2 {
            out.push(InequalityReport::strict("smoothing_ladder_monotone", inputs.clone(), min_rise, 0.0));
        }
        out.push(InequalityReport::inequality(
            "smoothing_ladder_bound",
            inputs.clone(),
            worst.1,
            worst.2,
            default_tolerance(worst.2),
        ));
        Ok(out)
    })();
    settle(name, &inputs, r)
}

/// `∫ H_k H_l φ = δ_{kl} k!` by quadrature.
pub fn check_hermite_orthogonality(k: usize, l: usize, cfg: &QuadratureConfig) -> Result<InequalityReport> {
    let name = "hermite_orthogonality";
    let inputs = json!({"k": k, "l": l});
    let z = DensityModel::std_normal();
    // the off-diagonal target is absolute while ∫|H_k H_l| φ grows like
    // √(k! l!)
    let cfg = QuadratureConfig {
        rel_tol: cfg.rel_tol.min(1e-12),
        ..*cfg
    };
    let v = integrate_on(
        |x| hermite_eval(k, x) * hermite_eval(l, x) * z.density(x),
        &IntegrationDomain::new(SupportInterval::real_line()),
        &cfg,
    );
    let r = (|| -> Checked<InequalityReport> {
        let got = need(v)?;
        let want = if k == l { factorial(k) } else { 0.0 };
        let tol = if k == l { 1e-9 * want } else { 1e-9 };
        Ok(InequalityReport::equality(name, inputs.clone(), got, want, tol))
    })();
    settle_one(name, &inputs, r)
}

/// Profile representations against direct quadrature: `I^(2)` in both
/// forms (relative 1e-4) and `I` (relative 1e-5).
pub fn check_profile_equivalence(model: &DensityModel, cfg: &QuadratureConfig) -> Result<Vec<InequalityReport>> {
    let name = "profile_equivalence";
    let inputs = json!({"density": desc(model)});
    let r = (|| -> Checked<Vec<InequalityReport>> {
        let i1 = need(fisher_info(model, 1, cfg)?)?;
        let p1 = need(info_via_profile(model, 2.0, cfg)?)?;
        let mut out = vec![InequalityReport::equality("profile_fisher", inputs.clone(), p1, i1, 1e-5 * i1)];
        let i2 = fisher_info(model, 2, cfg)?;
        if i2.is_divergent() {
            return Ok(out);
        }
        let i2 = need(i2)?;
        let sq = need(i2_via_profile(model, I2Variant::Squared, cfg)?)?;
        let sp = need(i2_via_profile(model, I2Variant::Split, cfg)?)?;
        out.push(InequalityReport::equality("profile_i2_squared", inputs.clone(), sq, i2, 1e-4 * i2));
        out.push(InequalityReport::equality("profile_i2_split", inputs.clone(), sp, i2, 1e-4 * i2));
        out.push(InequalityReport::equality("profile_i2_variants", inputs.clone(), sq, sp, 1e-4 * sp));
        Ok(out)
    })();
    settle(name, &inputs, r)
}

// --------------------------------------------------------------- weights

/// Convex weights `α_0..α_p` for the quadratic form `Q(α) = Σ A_k α_k²`.
#[derive(Debug, Clone, PartialEq)]
pub struct StamWeights {
    pub alphas: Vec<f64>,
}

impl StamWeights {
    pub fn new(alphas: Vec<f64>) -> Result<Self> {
        if alphas.iter().any(|a| !(*a >= 0.0)) {
            return Err(Error::InvalidParameter("weights must be nonnegative".into()));
        }
        let s: f64 = alphas.iter().sum();
        if (s - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidParameter(format!("weights sum to {s}, expected 1")));
        }
        Ok(StamWeights { alphas })
    }

    /// The minimizer `α_k = (1/A_k) (Σ 1/A_j)^{-1}`.
    pub fn optimal(a: &[f64]) -> Result<Self> {
        let inv_sum = inverse_sum(a)?;
        Ok(StamWeights {
            alphas: a.iter().map(|ak| 1.0 / (ak * inv_sum)).collect(),
        })
    }

    /// `Q(α) = Σ A_k α_k²`.
    pub fn q_value(&self, a: &[f64]) -> f64 {
        self.alphas.iter().zip(a).map(|(w, ak)| ak * w * w).sum()
    }
}

fn inverse_sum(a: &[f64]) -> Result<f64> {
    if a.is_empty() || a.iter().any(|v| !(*v > 0.0)) {
        return Err(Error::InvalidParameter("all A_k must be positive".into()));
    }
    Ok(a.iter().map(|v| 1.0 / v).sum())
}

/// `min Q = (Σ 1/A_k)^{-1}`.
pub fn optimal_q(a: &[f64]) -> Result<f64> {
    Ok(1.0 / inverse_sum(a)?)
}

// --------------------------------------------------------------- manifests

/// One manifest entry: a check name, fixed parameters, and a grid of
/// parameter lists whose Cartesian product is run.
#[derive(Debug, Clone, PartialEq)]
pub struct ManifestEntry {
    pub name: String,
    pub params: Map<String, Value>,
    pub grid: Vec<(String, Vec<Value>)>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Manifest {
    pub checks: Vec<ManifestEntry>,
}

/// Names accepted in manifests.
pub const CHECK_NAMES: &[&str] = &[
    "fisher_closed_form",
    "cramer_rao",
    "thm13",
    "stam",
    "stam_product",
    "stam_sharp",
    "counterexample_110",
    "convexity",
    "derivative_bounds",
    "charfn_decay",
    "relative_fisher_identity",
    "product_bound",
    "convolution_monotonicity",
    "smoothing_ladder",
    "hermite_orthogonality",
    "profile_equivalence",
];

fn manifest_err(msg: impl Into<String>) -> Error {
    Error::Manifest(msg.into())
}

impl Manifest {
    pub fn from_value(v: &Value) -> Result<Self> {
        let checks = v
            .get("checks")
            .and_then(Value::as_array)
            .ok_or_else(|| manifest_err("expected an object with a `checks` array"))?;
        let mut out = Vec::with_capacity(checks.len());
        for (i, c) in checks.iter().enumerate() {
            let name = c
                .get("name")
                .and_then(Value::as_str)
                .ok_or_else(|| manifest_err(format!("checks[{i}].name missing or not a string")))?;
            if !CHECK_NAMES.contains(&name) {
                return Err(manifest_err(format!("checks[{i}]: unknown check `{name}`")));
            }
            let params = match c.get("params") {
                None => Map::new(),
                Some(Value::Object(m)) => m.clone(),
                Some(_) => return Err(manifest_err(format!("checks[{i}].params must be an object"))),
            };
            let grid = match c.get("grid") {
                None => Vec::new(),
                Some(Value::Object(m)) => m
                    .iter()
                    .map(|(k, v)| {
                        v.as_array()
                            .map(|a| (k.clone(), a.clone()))
                            .ok_or_else(|| manifest_err(format!("checks[{i}].grid.{k} must be an array")))
                    })
                    .collect::<Result<_>>()?,
                Some(_) => return Err(manifest_err(format!("checks[{i}].grid must be an object"))),
            };
            out.push(ManifestEntry {
                name: name.to_string(),
                params,
                grid,
            });
        }
        Ok(Manifest { checks: out })
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let v: Value = serde_json::from_str(s).map_err(|e| manifest_err(e.to_string()))?;
        Self::from_value(&v)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| manifest_err(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json_str(&text)
    }

    /// Every `(name, params)` instance, grids expanded in order.
    pub fn expand(&self) -> Vec<(String, Map<String, Value>)> {
        let mut jobs = Vec::new();
        for e in &self.checks {
            let mut combos = vec![e.params.clone()];
            for (key, values) in &e.grid {
                combos = combos
                    .into_iter()
                    .flat_map(|base| {
                        values.iter().map(move |v| {
                            let mut m = base.clone();
                            m.insert(key.clone(), v.clone());
                            m
                        })
                    })
                    .collect();
            }
            jobs.extend(combos.into_iter().map(|m| (e.name.clone(), m)));
        }
        jobs
    }
}

fn param<'a>(p: &'a Map<String, Value>, key: &str) -> Result<&'a Value> {
    p.get(key).ok_or_else(|| manifest_err(format!("missing parameter `{key}`")))
}

fn p_usize(p: &Map<String, Value>, key: &str) -> Result<usize> {
    param(p, key)?
        .as_u64()
        .map(|v| v as usize)
        .ok_or_else(|| manifest_err(format!("`{key}` must be a nonnegative integer")))
}

fn p_f64(p: &Map<String, Value>, key: &str) -> Result<f64> {
    param(p, key)?
        .as_f64()
        .ok_or_else(|| manifest_err(format!("`{key}` must be a number")))
}

fn p_density(p: &Map<String, Value>, key: &str) -> Result<DensityModel> {
    DensityModel::from_descriptor(param(p, key)?).map_err(|e| manifest_err(format!("`{key}`: {e}")))
}

fn p_poly(p: &Map<String, Value>, order: usize) -> Result<MonicPolynomial> {
    match p.get("poly") {
        None => hermite(order),
        Some(Value::String(s)) if s == "hermite" => hermite(order),
        Some(Value::String(s)) if s == "monomial" => Ok(MonicPolynomial::monomial(order)),
        Some(Value::Array(a)) => {
            let coeffs = a
                .iter()
                .map(|v| v.as_f64().ok_or_else(|| manifest_err("`poly` coefficients must be numbers")))
                .collect::<Result<Vec<_>>>()?;
            MonicPolynomial::from_coeffs(coeffs)
        }
        Some(other) => Err(manifest_err(format!("`poly` must be \"hermite\", \"monomial\" or a list, got {other}"))),
    }
}

/// Runs one named check with JSON parameters.
pub fn run_check(name: &str, p: &Map<String, Value>, cfg: &QuadratureConfig) -> Result<Vec<InequalityReport>> {
    let one = |r: Result<InequalityReport>| r.map(|x| vec![x]);
    match name {
        "fisher_closed_form" => one(check_fisher_closed_form(&p_density(p, "density")?, p_usize(p, "p")?, cfg)),
        "cramer_rao" => {
            let order = p_usize(p, "p")?;
            check_cramer_rao(&p_density(p, "density")?, order, &p_poly(p, order)?, cfg)
        }
        "thm13" => check_thm13(&p_density(p, "density")?, cfg),
        "stam" => one(check_stam(&p_density(p, "x")?, &p_density(p, "y")?, p_usize(p, "p")?, p_usize(p, "k")?, cfg)),
        "stam_product" => one(check_stam_product(
            &p_density(p, "x")?,
            &p_density(p, "y")?,
            p_usize(p, "p")?,
            p_usize(p, "k")?,
            cfg,
        )),
        "stam_sharp" => one(check_stam_sharp(&p_density(p, "x")?, &p_density(p, "y")?, p_usize(p, "p")?, cfg)),
        "counterexample_110" => check_counterexample_110(p_f64(p, "n")?, cfg),
        "convexity" => one(check_convexity(&p_density(p, "density")?, p_usize(p, "p")?, cfg)),
        "derivative_bounds" => check_derivative_bounds(&p_density(p, "density")?, p_usize(p, "p")?, cfg),
        "charfn_decay" => one(check_charfn_decay(&p_density(p, "density")?, p_usize(p, "p")?, cfg)),
        "relative_fisher_identity" => one(check_relative_fisher_identity(&p_density(p, "density")?, p_usize(p, "p")?, cfg)),
        "product_bound" => one(check_product_bound(&p_density(p, "density")?, p_usize(p, "p")?, cfg)),
        "convolution_monotonicity" => one(check_convolution_monotonicity(
            &p_density(p, "x")?,
            &p_density(p, "y")?,
            p_usize(p, "p")?,
            cfg,
        )),
        "smoothing_ladder" => {
            let eps = param(p, "eps")?
                .as_array()
                .and_then(|a| a.iter().map(Value::as_f64).collect::<Option<Vec<_>>>())
                .ok_or_else(|| manifest_err("`eps` must be a list of numbers"))?;
            check_smoothing_ladder(&p_density(p, "density")?, p_usize(p, "p")?, &eps, cfg)
        }
        "hermite_orthogonality" => one(check_hermite_orthogonality(p_usize(p, "k")?, p_usize(p, "l")?, cfg)),
        "profile_equivalence" => check_profile_equivalence(&p_density(p, "density")?, cfg),
        other => Err(manifest_err(format!("unknown check `{other}`"))),
    }
}

/// Runs every instance of a manifest, in parallel, returning reports sorted
/// by check name and input fingerprint. A `"reverse": true` parameter swaps
/// the two sides of each resulting report (negative control).
pub fn run_suite(manifest: &Manifest, cfg: &QuadratureConfig) -> Result<Vec<InequalityReport>> {
    let jobs = manifest.expand();
    let results: Vec<Vec<InequalityReport>> = jobs
        .par_iter()
        .map(|(name, params)| {
            let reverse = params.get("reverse").and_then(Value::as_bool).unwrap_or(false);
            let mut clean = params.clone();
            clean.remove("reverse");
            let reports = run_check(name, &clean, cfg)?;
            Ok(reports
                .into_iter()
                .map(|r| {
                    if reverse {
                        let mut r = r.reversed();
                        if let Value::Object(m) = &mut r.inputs {
                            m.insert("reverse".into(), Value::Bool(true));
                        }
                        r
                    } else {
                        r
                    }
                })
                .collect())
        })
        .collect::<Result<_>>()?;
    let mut all: Vec<InequalityReport> = results.into_iter().flatten().collect();
    all.sort_by(|a, b| {
        a.check_name
            .cmp(&b.check_name)
            .then_with(|| a.inputs.to_string().cmp(&b.inputs.to_string()))
    });
    Ok(all)
}

/// True when no report failed.
pub fn suite_passed(reports: &[InequalityReport]) -> bool {
    !reports.iter().any(InequalityReport::failed)
}
