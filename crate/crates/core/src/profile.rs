//! The isoperimetric profile `L(t) = f(F^{-1}(t))` and the representations
//! of `I`, `I_p` and `I^(2)` as integrals over `t ∈ (0, 1)`.
//!
//! `L'` and `L·L''` are never obtained by differencing `L`; they are the
//! pullbacks `ρ_1(x)` and `ρ_2(x) - ρ_1(x)²` at `x = F^{-1}(t)`.

use std::io::Write;

use serde::Serialize;

use crate::densities::DensityModel;
use crate::error::{Error, Result};
use crate::quadrature::{integrate_on, FunctionalValue, IntegrationDomain, QuadratureConfig};
use crate::support::SupportInterval;

/// Grid nodes are kept inside `[δ, 1 - δ]`.
pub const PROFILE_CLIP: f64 = 1e-6;

const MAX_ROOT_ITERATIONS: usize = 200;

/// `F(x)`.
pub fn cdf(model: &DensityModel, x: f64) -> f64 {
    model.cdf(x)
}

/// Solves `g(x) = 0` for a function increasing in `x` on the support.
fn invert(model: &DensityModel, target: f64, g: impl Fn(f64) -> f64, slope_sign: f64) -> Result<f64> {
    let s = model.support();
    let (c, w) = model.center_scale();
    let fail = || Error::NonConvergence {
        iterations: MAX_ROOT_ITERATIONS,
        target,
    };
    let mut iterations = 0;
    // bracket
    let mut lo = if s.lower.is_finite() { s.lower } else { c - w };
    let mut hi = if s.upper.is_finite() { s.upper } else { c + w };
    let mut step = w;
    while !s.lower.is_finite() && g(lo) > 0.0 {
        step *= 2.0;
        lo = c - step;
        iterations += 1;
        if iterations > MAX_ROOT_ITERATIONS {
            return Err(fail());
        }
    }
    step = w;
    while !s.upper.is_finite() && g(hi) < 0.0 {
        step *= 2.0;
        hi = c + step;
        iterations += 1;
        if iterations > MAX_ROOT_ITERATIONS {
            return Err(fail());
        }
    }
    // bisection
    while hi - lo > 1e-8 * lo.abs().max(hi.abs()).max(1.0) {
        let mid = 0.5 * (lo + hi);
        let r = g(mid);
        if r == 0.0 {
            return Ok(mid);
        }
        if r > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
        iterations += 1;
        if iterations > MAX_ROOT_ITERATIONS {
            return Err(fail());
        }
    }
    // Newton polish, kept inside the bracket
    let mut x = 0.5 * (lo + hi);
    loop {
        let r = g(x);
        if r == 0.0 || r.abs() <= 1e-14 * target {
            return Ok(x);
        }
        let f = model.density(x);
        if f <= 0.0 {
            return Ok(x);
        }
        let next = x - slope_sign * r / f;
        if !(next > lo && next < hi) || (next - x).abs() <= 4.0 * f64::EPSILON * x.abs() {
            return Ok(x);
        }
        if r > 0.0 {
            hi = x;
        } else {
            lo = x;
        }
        x = next;
        iterations += 1;
        if iterations > MAX_ROOT_ITERATIONS {
            return Err(fail());
        }
    }
}

/// `F^{-1}(t)` for `0 < t < 1`.
///
/// Works on the lower tail through `F` and on the upper tail through the
/// survival function, so both ends keep full relative accuracy.
pub fn quantile(model: &DensityModel, t: f64) -> Result<f64> {
    if !(t > 0.0 && t < 1.0) {
        return Err(Error::InvalidParameter(format!("quantile level must lie in (0, 1), got {t}")));
    }
    if t <= 0.5 {
        invert(model, t, |x| model.cdf(x) - t, 1.0)
    } else {
        upper_quantile(model, 1.0 - t)
    }
}

/// The `x` with `P(X > x) = s`.
pub fn upper_quantile(model: &DensityModel, s: f64) -> Result<f64> {
    if !(s > 0.0 && s < 1.0) {
        return Err(Error::InvalidParameter(format!("tail level must lie in (0, 1), got {s}")));
    }
    invert(model, s, |x| s - model.survival(x), 1.0)
}

fn check_single_interval(model: &DensityModel) -> Result<()> {
    for p in model.singular_points() {
        if model.density(p) <= 0.0 {
            return Err(Error::UnsupportedDensity(format!(
                "{} is not positive on a single interval (vanishes at {p})",
                model.label()
            )));
        }
    }
    Ok(())
}

/// Sampled profile on Chebyshev nodes in `[δ, 1 - δ]`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProfileGrid {
    pub t: Vec<f64>,
    pub x: Vec<f64>,
    /// `L(t_j) = f(x_j)`
    pub l: Vec<f64>,
    /// `L'(t_j) = f'(x_j)/f(x_j)`
    pub lp: Vec<f64>,
    /// `L(t_j) L''(t_j) = f''/f - (f'/f)²` at `x_j`
    pub llpp: Vec<f64>,
}

struct Pullback {
    x: f64,
    l: f64,
    lp: f64,
    llpp: f64,
}

fn pullback(model: &DensityModel, t: f64) -> Result<Pullback> {
    let x = quantile(model, t)?;
    pullback_at(model, x)
}

fn pullback_at(model: &DensityModel, x: f64) -> Result<Pullback> {
    let r1 = model.ratio(1, x)?;
    let r2 = model.ratio(2, x)?;
    Ok(Pullback {
        x,
        l: model.density(x),
        lp: r1,
        llpp: r2 - r1 * r1,
    })
}

pub fn build_profile(model: &DensityModel, n_nodes: usize) -> Result<ProfileGrid> {
    check_single_interval(model)?;
    if n_nodes == 0 {
        return Err(Error::InvalidParameter("a profile needs at least one node".into()));
    }
    let mut grid = ProfileGrid {
        t: Vec::with_capacity(n_nodes),
        x: Vec::with_capacity(n_nodes),
        l: Vec::with_capacity(n_nodes),
        lp: Vec::with_capacity(n_nodes),
        llpp: Vec::with_capacity(n_nodes),
    };
    let n = n_nodes as f64;
    for j in 0..n_nodes {
        let theta = std::f64::consts::PI * (j as f64 + 0.5) / n;
        let t = (0.5 * (1.0 - theta.cos())).clamp(PROFILE_CLIP, 1.0 - PROFILE_CLIP);
        if grid.t.last().is_some_and(|&prev| t <= prev) {
            continue;
        }
        let pb = pullback(model, t)?;
        grid.t.push(t);
        grid.x.push(pb.x);
        grid.l.push(pb.l);
        grid.lp.push(pb.lp);
        grid.llpp.push(pb.llpp);
    }
    Ok(grid)
}

impl ProfileGrid {
    pub fn len(&self) -> usize {
        self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t.is_empty()
    }

    /// CSV with columns `t, x, L, L', LL''`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let io = |e: csv::Error| Error::Io(e.to_string());
        w.write_record(["t", "x", "L", "L'", "LL''"]).map_err(io)?;
        for j in 0..self.len() {
            w.write_record(
                [self.t[j], self.x[j], self.l[j], self.lp[j], self.llpp[j]].map(|v| format!("{v:.17e}")),
            )
            .map_err(io)?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Integrates `h(pullback)` over `t ∈ (0, 1)` as two integrals over
/// `(0, 1/2]`: one by lower-tail level, one by upper-tail level, so no
/// precision is lost near either end.
fn integrate_over_profile(
    model: &DensityModel,
    h: impl Fn(&Pullback) -> f64,
    cfg: &QuadratureConfig,
) -> Result<FunctionalValue> {
    check_single_interval(model)?;
    let eval = |x: Result<f64>| match x.and_then(|x| pullback_at(model, x)) {
        Ok(pb) if pb.l > 0.0 => h(&pb),
        Ok(_) => 0.0,
        Err(_) => f64::NAN,
    };
    let domain = IntegrationDomain::new(SupportInterval { lower: 0.0, upper: 0.5 });
    let half = cfg.tightened(0.5);
    let lower = integrate_on(|s| eval(quantile(model, s)), &domain, &half);
    let upper = integrate_on(|s| eval(upper_quantile(model, s)), &domain, &half);
    Ok(lower.combine(&upper, |a, b| a + b))
}

/// `I_p = ∫_0^1 |L'(t)|^p dt`.
pub fn info_via_profile(model: &DensityModel, p_exponent: f64, cfg: &QuadratureConfig) -> Result<FunctionalValue> {
    if !(p_exponent.is_finite() && p_exponent >= 1.0) {
        return Err(Error::InvalidParameter(format!("exponent must be >= 1, got {p_exponent}")));
    }
    integrate_over_profile(model, |pb| pb.lp.abs().powf(p_exponent), cfg)
}

/// Which profile representation of `I^(2)` to integrate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum I2Variant {
    /// `¼ ∫ ((L²)'')² = ∫ (L'² + L L'')²`
    Squared,
    /// `∫ (L L'')² + ⅓ L'⁴`
    Split,
}

pub fn i2_via_profile(model: &DensityModel, variant: I2Variant, cfg: &QuadratureConfig) -> Result<FunctionalValue> {
    if !model.smoothness_gate(2) {
        return Ok(FunctionalValue::divergent(0));
    }
    match variant {
        I2Variant::Squared => integrate_over_profile(
            model,
            |pb| {
                let s = pb.lp * pb.lp + pb.llpp;
                s * s
            },
            cfg,
        ),
        I2Variant::Split => integrate_over_profile(
            model,
            |pb| pb.llpp * pb.llpp + pb.lp.powi(4) / 3.0,
            cfg,
        ),
    }
}

/// `L·L'` and `L·L'³` at one boundary probe.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundaryRow {
    pub t: f64,
    pub x: f64,
    pub l_lp: f64,
    pub l_lp3: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundaryDiagnostics {
    /// Probes `t = 10^{-k}`, `k = 2..6`.
    pub lower: Vec<BoundaryRow>,
    /// Probes `t = 1 - 10^{-k}`, `k = 2..6`.
    pub upper: Vec<BoundaryRow>,
}

fn decreasing(rows: &[BoundaryRow], pick: impl Fn(&BoundaryRow) -> f64) -> bool {
    rows.windows(2).all(|w| pick(&w[1]).abs() < pick(&w[0]).abs())
}

impl BoundaryDiagnostics {
    /// Both boundary terms shrink in magnitude toward each end.
    pub fn monotone(&self) -> bool {
        [&self.lower, &self.upper].iter().all(|rows| {
            decreasing(rows, |r| r.l_lp) && decreasing(rows, |r| r.l_lp3)
        })
    }
}

pub fn boundary_diagnostics(model: &DensityModel) -> Result<BoundaryDiagnostics> {
    check_single_interval(model)?;
    let row = |t: f64, x: f64| -> Result<BoundaryRow> {
        let pb = pullback_at(model, x)?;
        Ok(BoundaryRow {
            t,
            x,
            l_lp: pb.l * pb.lp,
            l_lp3: pb.l * pb.lp.powi(3),
        })
    };
    let mut lower = Vec::new();
    let mut upper = Vec::new();
    for k in 2..=6 {
        let s = 10f64.powi(-k);
        lower.push(row(s, quantile(model, s)?)?);
        upper.push(row(1.0 - s, upper_quantile(model, s)?)?);
    }
    Ok(BoundaryDiagnostics { lower, upper })
}
