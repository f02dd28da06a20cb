//! Adaptive integration of singular and improper integrands with an explicit
//! finite / divergent / inconclusive verdict.
//!
//! The domain is cut into segments at the support endpoints and at any
//! declared interior points. Every end of a segment that is a finite support
//! endpoint, a singular point, or an infinity is approached by *geometric
//! layering*: panels `[w 2^{-(j+1)}, w 2^{-j}]` in the distance `u` from that
//! end, one refinement generation per panel. Each panel is integrated by an
//! adaptive Gauss–Kronrod (7, 15) pair. Infinite ends are compactified by
//! `x = c + λ t / (1 - t)` before layering.
//!
//! The running partial sums over generations form the history fed to
//! [`classify_divergence`], which decides convergence (with a geometric tail
//! extrapolation) or divergence.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::support::SupportInterval;

/// Minimum number of layering generations before a verdict is taken.
pub const MIN_GENERATIONS: usize = 8;

/// Number of trailing generations inspected by the divergence rule.
const DIVERGENCE_WINDOW: usize = 6;

/// Increments shrinking faster than this per generation rule out divergence.
const NON_SHRINKING_RATIO: f64 = 0.95;

/// Subdivision limit of the adaptive Gauss–Kronrod rule on one panel.
const PANEL_SUBDIVISIONS: usize = 200;
const ROUNDOFF_FLOOR: f64 = 100.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_depth: usize,
    pub divergence_cap: f64,
    pub tail_mass_bound: f64,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig {
            rel_tol: 1e-9,
            abs_tol: 1e-12,
            max_depth: 60,
            divergence_cap: 1e12,
            tail_mass_bound: 1e-10,
        }
    }
}

impl QuadratureConfig {
    /// Default configuration at a different relative tolerance; the tail
    /// bound follows as `rel_tol / 10`.
    pub fn with_rel_tol(rel_tol: f64) -> Self {
        QuadratureConfig {
            rel_tol,
            tail_mass_bound: rel_tol / 10.0,
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("rel_tol", self.rel_tol),
            ("abs_tol", self.abs_tol),
            ("divergence_cap", self.divergence_cap),
            ("tail_mass_bound", self.tail_mass_bound),
        ];
        for (name, v) in positive {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::InvalidParameter(format!(
                    "{name} must be positive and finite, got {v}"
                )));
            }
        }
        if self.max_depth < 10 {
            return Err(Error::InvalidParameter(format!(
                "max_depth must be at least 10, got {}",
                self.max_depth
            )));
        }
        Ok(())
    }

    /// Configuration scaled down for an inner (nested) integral.
    pub fn tightened(&self, factor: f64) -> Self {
        QuadratureConfig {
            rel_tol: self.rel_tol / factor,
            abs_tol: self.abs_tol / factor,
            tail_mass_bound: self.tail_mass_bound / factor,
            ..*self
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Finite,
    Divergent,
    Inconclusive,
}

/// Numeric value of an improper integral with its error estimate and verdict.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FunctionalValue {
    pub value: f64,
    pub error_estimate: f64,
    pub status: Status,
    pub node_count: usize,
}

impl FunctionalValue {
    /// A value known in closed form.
    pub fn exact(value: f64) -> Self {
        FunctionalValue {
            value,
            error_estimate: 0.0,
            status: Status::Finite,
            node_count: 0,
        }
    }

    pub fn divergent(node_count: usize) -> Self {
        FunctionalValue {
            value: f64::INFINITY,
            error_estimate: f64::INFINITY,
            status: Status::Divergent,
            node_count,
        }
    }

    pub fn inconclusive(value: f64, error_estimate: f64, node_count: usize) -> Self {
        FunctionalValue {
            value,
            error_estimate,
            status: Status::Inconclusive,
            node_count,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.status == Status::Finite
    }

    pub fn is_divergent(&self) -> bool {
        self.status == Status::Divergent
    }

    /// Combines two results with `g`; divergence dominates, then inconclusiveness.
    pub fn combine(&self, other: &FunctionalValue, g: impl Fn(f64, f64) -> f64) -> FunctionalValue {
        let nodes = self.node_count + other.node_count;
        if self.is_divergent() || other.is_divergent() {
            return FunctionalValue::divergent(nodes);
        }
        let status = if self.is_finite() && other.is_finite() {
            Status::Finite
        } else {
            Status::Inconclusive
        };
        FunctionalValue {
            value: g(self.value, other.value),
            error_estimate: self.error_estimate + other.error_estimate,
            status,
            node_count: nodes,
        }
    }

    /// Applies `g` to the value of a finite result, propagating the error
    /// linearly with the local slope `dg`.
    pub fn map(self, g: impl Fn(f64) -> f64, dg: f64) -> Self {
        match self.status {
            Status::Finite | Status::Inconclusive => FunctionalValue {
                value: g(self.value),
                error_estimate: self.error_estimate * dg.abs(),
                ..self
            },
            Status::Divergent => self,
        }
    }
}

/// Outcome of a single Gauss–Kronrod 15-point evaluation.
struct Qk15 {
    result: f64,
    error: f64,
    resabs: f64,
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_225,
    0.063_092_092_629_978_56,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn qk15<F: Fn(f64) -> f64 + ?Sized>(f: &F, a: f64, b: f64) -> Qk15 {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut resg = fc * WG[3];
    let mut resk = fc * WGK[7];
    let mut resabs = resk.abs();
    let mut fv1 = [0.0; 7];
    let mut fv2 = [0.0; 7];
    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        resk += WGK[j] * (f1 + f2);
        resabs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            resg += WG[j / 2] * (f1 + f2);
        }
    }
    let reskh = 0.5 * resk;
    let mut resasc = WGK[7] * (fc - reskh).abs();
    for j in 0..7 {
        resasc += WGK[j] * ((fv1[j] - reskh).abs() + (fv2[j] - reskh).abs());
    }
    let result = resk * half;
    resabs *= half.abs();
    resasc *= half.abs();
    let mut error = ((resk - resg) * half).abs();
    if resasc != 0.0 && error != 0.0 {
        error = resasc * (200.0 * error / resasc).powf(1.5).min(1.0);
    }
    if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        error = error.max(50.0 * f64::EPSILON * resabs);
    }
    Qk15 { result, error, resabs }
}

pub(crate) struct PanelResult {
    pub value: f64,
    pub error: f64,
    /// Integral of `|f|`.
    pub resabs: f64,
    pub nodes: usize,
    pub converged: bool,
}

/// Globally adaptive Gauss–Kronrod integration over a bounded panel.
pub(crate) fn adaptive_panel<F: Fn(f64) -> f64 + ?Sized>(
    f: &F,
    a: f64,
    b: f64,
    rel_tol: f64,
    abs_tol: f64,
) -> PanelResult {
    struct Piece {
        a: f64,
        b: f64,
        value: f64,
        error: f64,
        resabs: f64,
    }
    let first = qk15(f, a, b);
    let mut pieces = vec![Piece {
        a,
        b,
        value: first.result,
        error: first.error,
        resabs: first.resabs,
    }];
    let mut nodes = 15;
    loop {
        let value: f64 = pieces.iter().map(|p| p.value).sum();
        let error: f64 = pieces.iter().map(|p| p.error).sum();
        // below this the Kronrod error estimate only measures cancellation
        let resabs: f64 = pieces.iter().map(|p| p.resabs).sum();
        let floor = ROUNDOFF_FLOOR * f64::EPSILON * resabs;
        let tol = (rel_tol * value.abs()).max(abs_tol).max(floor);
        if error <= tol || !value.is_finite() {
            return PanelResult {
                value,
                error,
                resabs,
                nodes,
                converged: value.is_finite(),
            };
        }
        let (worst, _) = pieces
            .iter()
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |acc, (i, p)| {
                if p.error > acc.1 {
                    (i, p.error)
                } else {
                    acc
                }
            });
        let p = &pieces[worst];
        let mid = 0.5 * (p.a + p.b);
        let too_small = (p.b - p.a).abs() <= 1e3 * f64::EPSILON * mid.abs().max(f64::MIN_POSITIVE);
        if pieces.len() >= PANEL_SUBDIVISIONS || too_small {
            return PanelResult {
                value,
                error,
                resabs,
                nodes,
                converged: false,
            };
        }
        let (pa, pb) = (p.a, p.b);
        let left = qk15(f, pa, mid);
        let right = qk15(f, mid, pb);
        nodes += 30;
        pieces[worst] = Piece {
            a: pa,
            b: mid,
            value: left.result,
            error: left.error,
            resabs: left.resabs,
        };
        pieces.push(Piece {
            a: mid,
            b: pb,
            value: right.result,
            error: right.error,
            resabs: right.resabs,
        });
    }
}

/// Reading of a partial-sum history.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HistoryAnalysis {
    pub status: Status,
    /// Last partial sum plus the extrapolated geometric tail, when available.
    pub estimate: f64,
    /// Change of the extrapolated estimate over the last generation.
    pub uncertainty: f64,
}

fn extrapolated(history: &[f64], i: usize) -> Option<f64> {
    let s = history[i];
    let d = |k: usize| if k == 0 { history[0] } else { history[k] - history[k - 1] };
    let di = d(i);
    if di == 0.0 {
        return Some(s);
    }
    if i < 2 {
        return None;
    }
    let dp = d(i - 1);
    let dpp = d(i - 2);
    if dp == 0.0 || dpp == 0.0 {
        return None;
    }
    let r = di / dp;
    let rp = dp / dpp;
    if r.abs() >= NON_SHRINKING_RATIO || (r - rp).abs() > 0.25 * r.abs().max(rp.abs()).max(0.05) {
        return None;
    }
    Some(s + di * r / (1.0 - r))
}

/// Analyzes a sequence of partial sums, one per refinement generation.
///
/// * `Finite` when the tail-extrapolated estimate has settled within
///   tolerance, or the raw increments are below tolerance.
/// * `Divergent` when the last six increments share a sign and do not
///   shrink, and the sums either exceed `divergence_cap` or grow by a
///   factor of at least `1 + 10 rel_tol` per generation.
/// * `Inconclusive` otherwise, and for fewer than eight generations.
pub fn analyze_history(history: &[f64], cfg: &QuadratureConfig) -> HistoryAnalysis {
    let n = history.len();
    let last = history.last().copied().unwrap_or(0.0);
    if n < MIN_GENERATIONS {
        return HistoryAnalysis {
            status: Status::Inconclusive,
            estimate: last,
            uncertainty: f64::INFINITY,
        };
    }
    if history.iter().any(|v| v.is_nan()) {
        return HistoryAnalysis {
            status: Status::Inconclusive,
            estimate: f64::NAN,
            uncertainty: f64::INFINITY,
        };
    }
    if last.is_infinite() {
        return HistoryAnalysis {
            status: Status::Divergent,
            estimate: f64::INFINITY,
            uncertainty: f64::INFINITY,
        };
    }
    let d = |k: usize| if k == 0 { history[0] } else { history[k] - history[k - 1] };
    let i = n - 1;

    let cur = extrapolated(history, i);
    let prev = extrapolated(history, i - 1);
    if let (Some(e1), Some(e0)) = (cur, prev) {
        let tol = (cfg.rel_tol * e1.abs()).max(cfg.abs_tol);
        let change = (e1 - e0).abs();
        if change <= 0.1 * tol {
            return HistoryAnalysis {
                status: Status::Finite,
                estimate: e1,
                uncertainty: change,
            };
        }
    }
    let raw = d(i).abs() + d(i - 1).abs();
    if raw <= 0.1 * (cfg.rel_tol * last.abs()).max(cfg.abs_tol) {
        return HistoryAnalysis {
            status: Status::Finite,
            estimate: cur.unwrap_or(last),
            uncertainty: raw,
        };
    }

    let window = (n - DIVERGENCE_WINDOW)..n;
    let sign = d(i).signum();
    let monotone = window.clone().all(|k| {
        let dk = d(k);
        dk != 0.0 && dk.signum() == sign
    });
    let non_shrinking = window
        .clone()
        .skip(1)
        .all(|k| d(k).abs() >= NON_SHRINKING_RATIO * d(k - 1).abs());
    let grows = last.abs() >= cfg.divergence_cap
        || window.clone().skip(1).all(|k| {
            let prev = history[k - 1].abs();
            prev > 0.0 && history[k].abs() / prev >= 1.0 + 10.0 * cfg.rel_tol
        });
    if monotone && non_shrinking && grows {
        return HistoryAnalysis {
            status: Status::Divergent,
            estimate: if sign > 0.0 { f64::INFINITY } else { f64::NEG_INFINITY },
            uncertainty: f64::INFINITY,
        };
    }
    HistoryAnalysis {
        status: Status::Inconclusive,
        estimate: cur.unwrap_or(last),
        uncertainty: raw,
    }
}

/// Verdict on a partial-sum history; see [`analyze_history`].
pub fn classify_divergence(history: &[f64], cfg: &QuadratureConfig) -> Status {
    analyze_history(history, cfg).status
}

struct Layered {
    value: f64,
    error: f64,
    resabs: f64,
    status: Status,
    nodes: usize,
}

/// Integrates `g` over `(0, width]` with geometric panels toward `u = 0`.
fn layered<G: Fn(f64) -> f64>(g: &G, width: f64, cfg: &QuadratureConfig, infinite_end: bool) -> Layered {
    let panel_rel = cfg.rel_tol * 0.1;
    let panel_abs = cfg.abs_tol * 0.01;
    let mut history = Vec::with_capacity(cfg.max_depth);
    let mut sum = 0.0;
    let mut panel_error = 0.0;
    let mut resabs = 0.0;
    let mut nodes = 0;
    let mut all_converged = true;
    let mut last_increment = 0.0;
    let mut verdict: Option<HistoryAnalysis> = None;
    for j in 0..cfg.max_depth {
        let hi = width * 0.5f64.powi(j as i32);
        let lo = 0.5 * hi;
        let panel = adaptive_panel(g, lo, hi, panel_rel, panel_abs);
        nodes += panel.nodes;
        all_converged &= panel.converged;
        panel_error += panel.error;
        resabs += panel.resabs;
        sum += panel.value;
        last_increment = panel.value;
        history.push(sum);
        if sum.is_nan() {
            verdict = Some(HistoryAnalysis {
                status: Status::Inconclusive,
                estimate: f64::NAN,
                uncertainty: f64::INFINITY,
            });
            break;
        }
        if sum.is_infinite() {
            verdict = Some(HistoryAnalysis {
                status: Status::Divergent,
                estimate: sum,
                uncertainty: f64::INFINITY,
            });
            break;
        }
        if history.len() < MIN_GENERATIONS {
            continue;
        }
        let a = analyze_history(&history, cfg);
        match a.status {
            // a growing stretch may still be pre-asymptotic; only the cap
            // or the full depth settles divergence
            Status::Divergent if sum.abs() >= cfg.divergence_cap => {
                verdict = Some(a);
                break;
            }
            Status::Divergent => {}
            Status::Finite => {
                let tail_ok = !infinite_end
                    || last_increment.abs() <= cfg.tail_mass_bound * a.estimate.abs().max(cfg.abs_tol);
                if tail_ok && all_converged {
                    verdict = Some(a);
                    break;
                }
            }
            Status::Inconclusive => {}
        }
    }
    let a = verdict.unwrap_or_else(|| {
        let mut a = analyze_history(&history, cfg);
        if a.status == Status::Finite {
            let tail_ok = !infinite_end
                || last_increment.abs() <= cfg.tail_mass_bound * a.estimate.abs().max(cfg.abs_tol);
            if !tail_ok || !all_converged {
                a.status = Status::Inconclusive;
            }
        }
        a
    });
    Layered {
        value: a.estimate,
        error: a.uncertainty + panel_error,
        resabs,
        status: a.status,
        nodes,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum EndKind {
    /// A point where the integrand is smooth.
    Regular,
    /// A finite support endpoint or a declared singular point.
    Special,
    Infinite,
}

/// Integration domain: an interval plus interior points where it is cut.
///
/// Singular points (e.g. interior zeros of a density) are approached by
/// geometric layering from both sides; regular points only split the domain
/// (useful to expose narrow peaks to the adaptive rule).
#[derive(Debug, Clone, PartialEq)]
pub struct IntegrationDomain {
    pub interval: SupportInterval,
    pub singular_points: Vec<f64>,
    pub regular_points: Vec<f64>,
    /// Split point used when the interval is the whole real line.
    pub center: f64,
    /// Length scale of the compactifying map for infinite ends.
    pub scale: f64,
}

impl IntegrationDomain {
    pub fn new(interval: SupportInterval) -> Self {
        let center = match (interval.lower.is_finite(), interval.upper.is_finite()) {
            (true, true) => 0.5 * (interval.lower + interval.upper),
            (true, false) => interval.lower + 1.0,
            (false, true) => interval.upper - 1.0,
            (false, false) => 0.0,
        };
        IntegrationDomain {
            interval,
            singular_points: Vec::new(),
            regular_points: Vec::new(),
            center,
            scale: 1.0,
        }
    }

    pub fn with_singular_points(mut self, pts: impl IntoIterator<Item = f64>) -> Self {
        self.singular_points.extend(pts);
        self
    }

    pub fn with_regular_points(mut self, pts: impl IntoIterator<Item = f64>) -> Self {
        self.regular_points.extend(pts);
        self
    }

    pub fn with_center_scale(mut self, center: f64, scale: f64) -> Self {
        if center.is_finite() {
            self.center = center;
        }
        if scale.is_finite() && scale > 0.0 {
            self.scale = scale;
        }
        self
    }

    /// Ordered cut points with their kinds, including both interval ends.
    fn cuts(&self) -> Vec<(f64, EndKind)> {
        let iv = self.interval;
        let mut inner: Vec<(f64, EndKind)> = self
            .singular_points
            .iter()
            .map(|&x| (x, EndKind::Special))
            .chain(self.regular_points.iter().map(|&x| (x, EndKind::Regular)))
            .filter(|(x, _)| x.is_finite() && iv.contains_interior(*x))
            .collect();
        if !iv.lower.is_finite() && !iv.upper.is_finite() && inner.is_empty() {
            inner.push((self.center, EndKind::Regular));
        }
        inner.sort_by(|a, b| a.0.total_cmp(&b.0));
        // a singular point wins over a regular one at the same location
        inner.dedup_by(|b, a| {
            if a.0 == b.0 {
                if b.1 == EndKind::Special {
                    a.1 = EndKind::Special;
                }
                true
            } else {
                false
            }
        });
        let lower_kind = if iv.lower.is_finite() { EndKind::Special } else { EndKind::Infinite };
        let upper_kind = if iv.upper.is_finite() { EndKind::Special } else { EndKind::Infinite };
        let mut cuts = Vec::with_capacity(inner.len() + 2);
        cuts.push((iv.lower, lower_kind));
        cuts.extend(inner);
        cuts.push((iv.upper, upper_kind));
        cuts
    }
}

struct Accumulator {
    value: f64,
    compensation: f64,
    /// Integral of `|f|`, the scale for the relative tolerance when the
    /// integrand changes sign.
    resabs: f64,
    error: f64,
    nodes: usize,
    divergent: bool,
    inconclusive: bool,
}

impl Accumulator {
    fn new() -> Self {
        Accumulator {
            value: 0.0,
            compensation: 0.0,
            resabs: 0.0,
            error: 0.0,
            nodes: 0,
            divergent: false,
            inconclusive: false,
        }
    }

    fn add_value(&mut self, v: f64) {
        // Neumaier summation
        let t = self.value + v;
        if self.value.abs() >= v.abs() {
            self.compensation += (self.value - t) + v;
        } else {
            self.compensation += (v - t) + self.value;
        }
        self.value = t;
    }

    fn push(&mut self, l: Layered) {
        self.nodes += l.nodes;
        match l.status {
            Status::Divergent => self.divergent = true,
            Status::Inconclusive => self.inconclusive = true,
            Status::Finite => {}
        }
        self.add_value(l.value);
        self.resabs += l.resabs;
        self.error += l.error;
    }

    fn finish(self, cfg: &QuadratureConfig) -> FunctionalValue {
        if self.divergent {
            return FunctionalValue::divergent(self.nodes);
        }
        let value = self.value + self.compensation;
        let tol = (cfg.rel_tol * value.abs().max(self.resabs)).max(cfg.abs_tol);
        let status = if self.inconclusive || !value.is_finite() || self.error > tol {
            Status::Inconclusive
        } else {
            Status::Finite
        };
        FunctionalValue {
            value,
            error_estimate: self.error,
            status,
            node_count: self.nodes,
        }
    }
}

fn integrate_segment<F: Fn(f64) -> f64>(
    f: &F,
    (l, lk): (f64, EndKind),
    (r, rk): (f64, EndKind),
    scale: f64,
    cfg: &QuadratureConfig,
    acc: &mut Accumulator,
) {
    use EndKind::*;
    match (lk, rk) {
        (Infinite, Infinite) => unreachable!("the real line is always split"),
        (Regular, Regular) => {
            let p = adaptive_panel(f, l, r, cfg.rel_tol * 0.1, cfg.abs_tol * 0.01);
            acc.push(Layered {
                value: p.value,
                error: p.error,
                resabs: p.resabs,
                status: if p.converged { Status::Finite } else { Status::Inconclusive },
                nodes: p.nodes,
            });
        }
        (Special, Special) => {
            let half = 0.5 * (r - l);
            acc.push(layered(&|u| f(l + u), half, cfg, false));
            acc.push(layered(&|u| f(r - u), half, cfg, false));
        }
        (Special, Regular) => acc.push(layered(&|u| f(l + u), r - l, cfg, false)),
        (Regular, Special) => acc.push(layered(&|u| f(r - u), r - l, cfg, false)),
        (Special, Infinite) | (Regular, Infinite) => {
            // x = l + s t / (1 - t), t in [0, 1)
            let toward_inf = |u: f64| {
                let x = l + scale * (1.0 - u) / u;
                let v = f(x);
                if v == 0.0 { 0.0 } else { v * scale / (u * u) }
            };
            if lk == Special {
                let toward_l = |u: f64| {
                    let w = 1.0 - u;
                    f(l + scale * u / w) * scale / (w * w)
                };
                acc.push(layered(&toward_l, 0.5, cfg, false));
                acc.push(layered(&toward_inf, 0.5, cfg, true));
            } else {
                acc.push(layered(&toward_inf, 1.0, cfg, true));
            }
        }
        (Infinite, Special) | (Infinite, Regular) => {
            let toward_inf = |u: f64| {
                let x = r - scale * (1.0 - u) / u;
                let v = f(x);
                if v == 0.0 { 0.0 } else { v * scale / (u * u) }
            };
            if rk == Special {
                let toward_r = |u: f64| {
                    let w = 1.0 - u;
                    f(r - scale * u / w) * scale / (w * w)
                };
                acc.push(layered(&toward_r, 0.5, cfg, false));
                acc.push(layered(&toward_inf, 0.5, cfg, true));
            } else {
                acc.push(layered(&toward_inf, 1.0, cfg, true));
            }
        }
    }
}

/// Integrates `f` over a domain with declared cut points.
pub fn integrate_on<F: Fn(f64) -> f64>(f: F, domain: &IntegrationDomain, cfg: &QuadratureConfig) -> FunctionalValue {
    let cuts = domain.cuts();
    let mut acc = Accumulator::new();
    for pair in cuts.windows(2) {
        integrate_segment(&f, pair[0], pair[1], domain.scale, cfg, &mut acc);
        if acc.divergent {
            break;
        }
    }
    acc.finish(cfg)
}

/// Integrates `f` over `interval`; finite endpoints are treated as possibly singular.
pub fn integrate<F: Fn(f64) -> f64>(f: F, interval: SupportInterval, cfg: &QuadratureConfig) -> FunctionalValue {
    integrate_on(f, &IntegrationDomain::new(interval), cfg)
}

/// Smooth integrand on a bounded interval; plain adaptive Gauss–Kronrod.
pub fn integrate_smooth<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, cfg: &QuadratureConfig) -> FunctionalValue {
    let p = adaptive_panel(&f, a, b, cfg.rel_tol, cfg.abs_tol);
    FunctionalValue {
        value: p.value,
        error_estimate: p.error,
        status: if p.converged { Status::Finite } else { Status::Inconclusive },
        node_count: p.nodes,
    }
}
