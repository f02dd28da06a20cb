//! Catalog of one-dimensional densities with exact analytic derivatives.
//!
//! Every model knows its support, its derivatives `f^(k)` up to
//! [`MAX_DERIVATIVE_ORDER`], the ratios `ρ_k = f^(k)/f` (evaluated without
//! forming tiny quotients where a closed form exists), moments, and the CDF.
//!
//! Models are immutable values; all evaluation methods take `&self`.

use std::f64::consts::{PI, SQRT_2};
use std::sync::OnceLock;

use serde_json::{json, Map, Value};
use statrs::function::beta::{beta_reg, ln_beta};
use statrs::function::erf::erfc;
use statrs::function::gamma::{gamma_lr, gamma_ur, ln_gamma};

use crate::error::{Error, Result};
use crate::hermite::{hermite_eval, hermite_eval_all};
use crate::jet::Jet;
use crate::quadrature::{
    integrate_on, integrate_smooth, FunctionalValue, IntegrationDomain, QuadratureConfig, Status,
};
use crate::support::SupportInterval;

/// Highest derivative order with an analytic rule in every family.
pub const MAX_DERIVATIVE_ORDER: usize = 16;

/// Densities at or below this level are treated as zero by integrands of the
/// form `g²/f`.
pub const DENSITY_FLOOR: f64 = 1e-300;

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

/// Gaussian kernel cut-off, in units of the kernel width. `φ(38)` underflows.
const KERNEL_REACH: f64 = 38.0;

/// The family of a [`DensityModel`] together with its parameters.
#[derive(Debug, Clone, PartialEq)]
pub enum Family {
    Normal { mean: f64, sigma: f64 },
    /// `x^{n-1} e^{-x} / Γ(n)` on `(0, ∞)`.
    Gamma { shape: f64 },
    Beta { alpha: f64, beta: f64 },
    /// `x² φ(x)`.
    HermiteWeighted,
    /// Even, smooth, equal to `c |x|^{-q}` for `|x| ≥ 1` and to `c` on `[-1/2, 1/2]`.
    /// `c` is the normalizing constant.
    PolynomialTail { q: f64, c: f64 },
    /// `x e^{-x²/2}` on `(0, ∞)`.
    HalfGaussian,
    /// Standard logistic, `f = F(1 - F)`.
    Logistic,
    FiniteMixture(Vec<(f64, DensityModel)>),
    /// Law of `X + εZ` with `Z` standard normal independent of `X`.
    GaussianConvolution { base: Box<DensityModel>, eps: f64 },
    /// Law of `shift + scale·X`, `scale > 0`.
    Affine { base: Box<DensityModel>, shift: f64, scale: f64 },
}

/// A density from the catalog.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityModel {
    family: Family,
    support: SupportInterval,
}

fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}

fn positive(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(invalid(format!("{name} must be positive and finite, got {v}")))
    }
}

/// `a (a-1) ... (a-j+1)`.
fn falling(a: f64, j: usize) -> f64 {
    (0..j).map(|i| a - i as f64).product()
}

fn binomials(k: usize) -> Vec<f64> {
    let mut row = vec![1.0; k + 1];
    for j in 1..k {
        row[j] = row[j - 1] * (k - j + 1) as f64 / j as f64;
    }
    row
}

/// Polynomials `Q_k(s)` with `f^(k)/f = Q_k(s)` for the logistic, `s = F(x)`.
///
/// `Q_0 = 1`, `Q_{k+1} = (1 - 2s) Q_k + s(1 - s) Q_k'`.
fn logistic_ratio_polys() -> &'static [Vec<f64>] {
    static TABLE: OnceLock<Vec<Vec<f64>>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut out: Vec<Vec<i128>> = vec![vec![1]];
        for k in 0..MAX_DERIVATIVE_ORDER {
            let q = &out[k];
            let mut next = vec![0i128; q.len() + 1];
            for (j, &c) in q.iter().enumerate() {
                // (1 - 2s) c s^j
                next[j] += c;
                next[j + 1] -= 2 * c;
                // s(1 - s) j c s^{j-1}
                if j > 0 {
                    let d = j as i128 * c;
                    next[j] += d;
                    next[j + 1] -= d;
                }
            }
            out.push(next);
        }
        out.into_iter()
            .map(|p| p.into_iter().map(|c| c as f64).collect())
            .collect()
    })
}

fn poly_eval(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
}

/// Logistic CDF and its complement, both accurate in the far tails.
fn logistic_pair(x: f64) -> (f64, f64) {
    if x >= 0.0 {
        let e = (-x).exp();
        (1.0 / (1.0 + e), e / (1.0 + e))
    } else {
        let e = x.exp();
        (e / (1.0 + e), 1.0 / (1.0 + e))
    }
}

fn normal_cdf(z: f64) -> f64 {
    0.5 * erfc(-z / SQRT_2)
}

fn normal_sf(z: f64) -> f64 {
    0.5 * erfc(z / SQRT_2)
}

fn std_normal_pdf(z: f64) -> f64 {
    (-0.5 * z * z - LN_SQRT_2PI).exp()
}

/// `E|Z|^s` for standard normal `Z`.
fn abs_normal_moment(s: f64) -> f64 {
    (0.5 * s * 2f64.ln() + ln_gamma(0.5 * (s + 1.0)) - 0.5 * PI.ln()).exp()
}

/// Profile of the tail-splice: `g(u) = 1` on `[0, 1/2]`, `u^{-q}` on `[1, ∞)`,
/// joined by a smooth partition of unity. Returns a jet of `g` at `u`.
fn poly_tail_jet(q: f64, u: f64, order: usize) -> Jet {
    let uj = Jet::variable(u, order);
    if u <= 0.5 {
        return Jet::constant(1.0, order);
    }
    let tail = uj.powf(-q);
    if u >= 1.0 {
        return tail;
    }
    let t = uj.scale(2.0).add_scalar(-1.0);
    let one_minus_t = t.scale(-1.0).add_scalar(1.0);
    let psi = |v: &Jet| v.recip().scale(-1.0).exp();
    let a = psi(&t);
    let b = psi(&one_minus_t);
    let s = a.div(&(&a + &b));
    let bump = tail.add_scalar(-1.0);
    (&s * &bump).add_scalar(1.0)
}

fn poly_tail_g(q: f64, u: f64) -> f64 {
    if u <= 0.5 {
        1.0
    } else if u >= 1.0 {
        u.powf(-q)
    } else {
        poly_tail_jet(q, u, 0).value()
    }
}

/// `∫_u^1 g` for `0 ≤ u ≤ 1`.
fn poly_tail_inner_mass(q: f64, u: f64) -> f64 {
    let cfg = QuadratureConfig::with_rel_tol(1e-14);
    let lo = u.max(0.5);
    let splice = if lo < 1.0 {
        integrate_smooth(|v| poly_tail_g(q, v), lo, 1.0, &cfg).value
    } else {
        0.0
    };
    splice + (0.5 - u).max(0.0)
}

impl DensityModel {
    fn build(family: Family, support: SupportInterval) -> Self {
        DensityModel { family, support }
    }

    pub fn normal(mean: f64, sigma: f64) -> Result<Self> {
        if !mean.is_finite() {
            return Err(invalid(format!("mean must be finite, got {mean}")));
        }
        positive("sigma", sigma)?;
        Ok(Self::build(Family::Normal { mean, sigma }, SupportInterval::real_line()))
    }

    pub fn std_normal() -> Self {
        Self::build(Family::Normal { mean: 0.0, sigma: 1.0 }, SupportInterval::real_line())
    }

    pub fn gamma(shape: f64) -> Result<Self> {
        positive("shape", shape)?;
        Ok(Self::build(Family::Gamma { shape }, SupportInterval::positive_half_line()))
    }

    pub fn beta(alpha: f64, beta: f64) -> Result<Self> {
        positive("alpha", alpha)?;
        positive("beta", beta)?;
        Ok(Self::build(Family::Beta { alpha, beta }, SupportInterval::unit()))
    }

    pub fn hermite_weighted() -> Self {
        Self::build(Family::HermiteWeighted, SupportInterval::real_line())
    }

    pub fn polynomial_tail(q: f64) -> Result<Self> {
        if !(q.is_finite() && q > 1.0) {
            return Err(invalid(format!("tail exponent q must exceed 1, got {q}")));
        }
        let half_mass = poly_tail_inner_mass(q, 0.0) + 1.0 / (q - 1.0);
        let c = 0.5 / half_mass;
        Ok(Self::build(Family::PolynomialTail { q, c }, SupportInterval::real_line()))
    }

    pub fn half_gaussian() -> Self {
        Self::build(Family::HalfGaussian, SupportInterval::positive_half_line())
    }

    pub fn logistic() -> Self {
        Self::build(Family::Logistic, SupportInterval::real_line())
    }

    /// A finite mixture `Σ wᵢ fᵢ`. Weights must be positive and sum to 1.
    pub fn mixture(components: Vec<(f64, DensityModel)>) -> Result<Self> {
        if components.is_empty() {
            return Err(invalid("a mixture needs at least one component"));
        }
        for (w, _) in &components {
            positive("mixture weight", *w)?;
        }
        let total: f64 = components.iter().map(|(w, _)| w).sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(invalid(format!("mixture weights sum to {total}, expected 1")));
        }
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for (_, m) in &components {
            lo = lo.min(m.support.lower);
            hi = hi.max(m.support.upper);
        }
        let support = SupportInterval::new(lo, hi)?;
        Ok(Self::build(Family::FiniteMixture(components), support))
    }

    /// The law of `X + εZ`.
    pub fn gaussian_convolution(base: DensityModel, eps: f64) -> Result<Self> {
        positive("eps", eps)?;
        Ok(Self::build(
            Family::GaussianConvolution { base: Box::new(base), eps },
            SupportInterval::real_line(),
        ))
    }

    /// The law of `shift + scale·X` with `scale > 0`.
    pub fn affine(base: DensityModel, shift: f64, scale: f64) -> Result<Self> {
        if !shift.is_finite() {
            return Err(invalid(format!("shift must be finite, got {shift}")));
        }
        positive("scale", scale)?;
        let support = base.support.affine(shift, scale);
        Ok(Self::build(
            Family::Affine { base: Box::new(base), shift, scale },
            support,
        ))
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    pub fn support(&self) -> SupportInterval {
        self.support
    }

    /// Short family tag, as used in descriptors.
    pub fn family_name(&self) -> &'static str {
        match &self.family {
            Family::Normal { .. } => "normal",
            Family::Gamma { .. } => "gamma",
            Family::Beta { .. } => "beta",
            Family::HermiteWeighted => "hermite_weighted",
            Family::PolynomialTail { .. } => "polynomial_tail",
            Family::HalfGaussian => "half_gaussian",
            Family::Logistic => "logistic",
            Family::FiniteMixture(_) => "mixture",
            Family::GaussianConvolution { .. } => "gaussian_convolution",
            Family::Affine { .. } => "affine",
        }
    }

    /// Human-readable label such as `gamma(n=10)`.
    pub fn label(&self) -> String {
        match &self.family {
            Family::Normal { mean, sigma } => format!("normal(mean={mean}, sigma={sigma})"),
            Family::Gamma { shape } => format!("gamma(n={shape})"),
            Family::Beta { alpha, beta } => format!("beta(alpha={alpha}, beta={beta})"),
            Family::HermiteWeighted => "hermite_weighted".into(),
            Family::PolynomialTail { q, .. } => format!("polynomial_tail(q={q})"),
            Family::HalfGaussian => "half_gaussian".into(),
            Family::Logistic => "logistic".into(),
            Family::FiniteMixture(cs) => {
                let parts: Vec<String> =
                    cs.iter().map(|(w, m)| format!("{w}*{}", m.label())).collect();
                format!("mixture[{}]", parts.join(" + "))
            }
            Family::GaussianConvolution { base, eps } => {
                format!("{} * N(0, {eps}^2)", base.label())
            }
            Family::Affine { base, shift, scale } => {
                format!("{shift} + {scale}*{}", base.label())
            }
        }
    }

    /// When the model is exactly a normal law, its `(mean, sigma)`.
    pub fn as_normal(&self) -> Option<(f64, f64)> {
        match &self.family {
            Family::Normal { mean, sigma } => Some((*mean, *sigma)),
            Family::GaussianConvolution { base, eps } => {
                let (m, s) = base.as_normal()?;
                Some((m, (s * s + eps * eps).sqrt()))
            }
            Family::Affine { base, shift, scale } => {
                let (m, s) = base.as_normal()?;
                Some((shift + scale * m, scale * s))
            }
            _ => None,
        }
    }

    // ---------------------------------------------------------------- gate

    /// Whether `I^(p)` is admitted for this model. Encodes the per-family
    /// criteria; when false, `I^(p)` is infinite by definition.
    pub fn smoothness_gate(&self, p: usize) -> bool {
        match &self.family {
            Family::Gamma { shape } => *shape > 2.0 * p as f64,
            Family::Beta { alpha, beta } => alpha.min(*beta) > 2.0 * p as f64,
            Family::HalfGaussian => p <= 1,
            Family::FiniteMixture(cs) => cs.iter().all(|(_, m)| m.smoothness_gate(p)),
            Family::Affine { base, .. } => base.smoothness_gate(p),
            Family::Normal { .. }
            | Family::HermiteWeighted
            | Family::PolynomialTail { .. }
            | Family::Logistic
            | Family::GaussianConvolution { .. } => true,
        }
    }

    /// Largest `p` passing [`Self::smoothness_gate`]; `None` means unbounded.
    pub fn smoothness_order(&self) -> Option<usize> {
        let half_floor = |v: f64| ((v / 2.0).ceil() as usize).saturating_sub(1);
        match &self.family {
            Family::Gamma { shape } => Some(half_floor(*shape)),
            Family::Beta { alpha, beta } => Some(half_floor(alpha.min(*beta))),
            Family::HalfGaussian => Some(1),
            Family::FiniteMixture(cs) => cs
                .iter()
                .filter_map(|(_, m)| m.smoothness_order())
                .min(),
            Family::Affine { base, .. } => base.smoothness_order(),
            _ => None,
        }
    }

    // ---------------------------------------------------------- evaluation

    /// `ln f(x)`; `-∞` outside the support.
    pub fn log_density(&self, x: f64) -> f64 {
        if !self.support.contains_interior(x) {
            return f64::NEG_INFINITY;
        }
        match &self.family {
            Family::Normal { mean, sigma } => {
                let z = (x - mean) / sigma;
                -0.5 * z * z - sigma.ln() - LN_SQRT_2PI
            }
            Family::Gamma { shape } => (shape - 1.0) * x.ln() - x - ln_gamma(*shape),
            Family::Beta { alpha, beta } => {
                (alpha - 1.0) * x.ln() + (beta - 1.0) * (-x).ln_1p() - ln_beta(*alpha, *beta)
            }
            Family::HermiteWeighted => 2.0 * x.abs().ln() - 0.5 * x * x - LN_SQRT_2PI,
            Family::PolynomialTail { q, c } => c.ln() + poly_tail_g(*q, x.abs()).ln(),
            Family::HalfGaussian => x.ln() - 0.5 * x * x,
            Family::Logistic => {
                let a = x.abs();
                -a - 2.0 * (-a).exp().ln_1p()
            }
            Family::FiniteMixture(cs) => {
                let logs: Vec<f64> =
                    cs.iter().map(|(w, m)| w.ln() + m.log_density(x)).collect();
                log_sum_exp(&logs)
            }
            Family::GaussianConvolution { base, eps } => match self.as_normal() {
                Some((m, s)) => {
                    let z = (x - m) / s;
                    -0.5 * z * z - s.ln() - LN_SQRT_2PI
                }
                None => conv_derivative(base, *eps, 0, x).ln(),
            },
            Family::Affine { base, shift, scale } => {
                base.log_density((x - shift) / scale) - scale.ln()
            }
        }
    }

    /// `f(x)`; 0 outside the support.
    pub fn density(&self, x: f64) -> f64 {
        match &self.family {
            Family::GaussianConvolution { base, eps } if self.as_normal().is_none() => {
                conv_derivative(base, *eps, 0, x).max(0.0)
            }
            Family::FiniteMixture(cs) => cs.iter().map(|(w, m)| w * m.density(x)).sum(),
            _ => {
                let l = self.log_density(x);
                if l == f64::NEG_INFINITY {
                    0.0
                } else {
                    l.exp()
                }
            }
        }
    }

    fn check_order(&self, k: usize) -> Result<()> {
        if k > MAX_DERIVATIVE_ORDER {
            return Err(Error::UnsupportedOrder {
                family: self.family_name().to_string(),
                order: k,
            });
        }
        Ok(())
    }

    /// `f^(k)(x)`. Derivatives of boundary-supported families are taken on
    /// the support interior and reported as 0 outside it.
    pub fn derivative(&self, k: usize, x: f64) -> Result<f64> {
        self.check_order(k)?;
        Ok(self.derivative_unchecked(k, x))
    }

    pub(crate) fn derivative_unchecked(&self, k: usize, x: f64) -> f64 {
        if k == 0 {
            return self.density(x);
        }
        match &self.family {
            Family::FiniteMixture(cs) => cs
                .iter()
                .map(|(w, m)| w * m.derivative_unchecked(k, x))
                .sum(),
            Family::GaussianConvolution { base, eps } if self.as_normal().is_none() => {
                conv_derivative(base, *eps, k, x)
            }
            Family::Affine { base, shift, scale } => {
                base.derivative_unchecked(k, (x - shift) / scale) / scale.powi(k as i32 + 1)
            }
            _ => {
                let f = self.density(x);
                if f == 0.0 {
                    return match &self.family {
                        // f vanishes at the origin but its derivatives need not
                        Family::HermiteWeighted if x == 0.0 => {
                            let s = if k.is_multiple_of(2) { 1.0 } else { -1.0 };
                            s * (hermite_eval(k, 0.0) + hermite_eval(k + 2, 0.0))
                                * std_normal_pdf(0.0)
                        }
                        _ => 0.0,
                    };
                }
                f * self.ratio_unchecked(k, x)
            }
        }
    }

    /// `ρ_k(x) = f^(k)(x)/f(x)` on the support interior.
    pub fn ratio(&self, k: usize, x: f64) -> Result<f64> {
        self.check_order(k)?;
        Ok(self.ratio_unchecked(k, x))
    }

    pub(crate) fn ratio_unchecked(&self, k: usize, x: f64) -> f64 {
        if k == 0 {
            return 1.0;
        }
        let sign = if k.is_multiple_of(2) { 1.0 } else { -1.0 };
        match &self.family {
            Family::Normal { mean, sigma } => {
                let z = (x - mean) / sigma;
                sign * hermite_eval(k, z) / sigma.powi(k as i32)
            }
            Family::Gamma { shape } => {
                let binom = binomials(k);
                let inv = 1.0 / x;
                let mut acc = 0.0;
                let mut pw = 1.0;
                for j in 0..=k {
                    let s = if (k - j).is_multiple_of(2) { 1.0 } else { -1.0 };
                    acc += s * binom[j] * falling(shape - 1.0, j) * pw;
                    pw *= inv;
                }
                acc
            }
            Family::Beta { alpha, beta } => {
                let binom = binomials(k);
                let (u, v) = (1.0 / x, 1.0 / (1.0 - x));
                (0..=k)
                    .map(|j| {
                        let s = if (k - j).is_multiple_of(2) { 1.0 } else { -1.0 };
                        s * binom[j]
                            * falling(alpha - 1.0, j)
                            * u.powi(j as i32)
                            * falling(beta - 1.0, k - j)
                            * v.powi((k - j) as i32)
                    })
                    .sum()
            }
            Family::HermiteWeighted => {
                let h = hermite_eval_all(k + 2, x);
                sign * (h[k] + h[k + 2]) / (x * x)
            }
            Family::PolynomialTail { q, .. } => {
                let u = x.abs();
                let g = poly_tail_jet(*q, u, k);
                let d = g.derivative(k) / g.value();
                if x < 0.0 {
                    sign * d
                } else {
                    d
                }
            }
            Family::HalfGaussian => sign * hermite_eval(k + 1, x) / x,
            Family::Logistic => {
                let (s, _) = logistic_pair(x);
                poly_eval(&logistic_ratio_polys()[k], s)
            }
            Family::FiniteMixture(cs) => {
                let logs: Vec<f64> =
                    cs.iter().map(|(w, m)| w.ln() + m.log_density(x)).collect();
                let top = logs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
                if top == f64::NEG_INFINITY {
                    return 0.0;
                }
                let mut num = 0.0;
                let mut den = 0.0;
                for ((_, m), l) in cs.iter().zip(&logs) {
                    if *l == f64::NEG_INFINITY {
                        continue;
                    }
                    let w = (l - top).exp();
                    num += w * m.ratio_unchecked(k, x);
                    den += w;
                }
                num / den
            }
            Family::GaussianConvolution { base, eps } => match self.as_normal() {
                Some((m, s)) => sign * hermite_eval(k, (x - m) / s) / s.powi(k as i32),
                None => conv_derivative(base, *eps, k, x) / conv_derivative(base, *eps, 0, x),
            },
            Family::Affine { base, shift, scale } => {
                base.ratio_unchecked(k, (x - shift) / scale) / scale.powi(k as i32)
            }
        }
    }

    /// Integrand `f^(k) f^(l) / f` with the convention that it vanishes where
    /// `f ≤ 1e-300`.
    pub(crate) fn cross_integrand(&self, k: usize, l: usize, x: f64) -> f64 {
        if let Family::GaussianConvolution { base, eps } = &self.family {
            if self.as_normal().is_none() {
                let h = conv_derivative(base, *eps, 0, x);
                if h <= DENSITY_FLOOR {
                    return 0.0;
                }
                let a = conv_derivative(base, *eps, k, x);
                let b = if l == k { a } else { conv_derivative(base, *eps, l, x) };
                return a * b / h;
            }
        }
        let f = self.density(x);
        if f <= DENSITY_FLOOR {
            return 0.0;
        }
        let rk = self.ratio_unchecked(k, x);
        let rl = if l == k { rk } else { self.ratio_unchecked(l, x) };
        rk * rl * f
    }

    // -------------------------------------------------------- integration

    /// Interior points where the density vanishes.
    pub fn singular_points(&self) -> Vec<f64> {
        match &self.family {
            Family::HermiteWeighted => vec![0.0],
            Family::FiniteMixture(cs) => {
                let mut pts = Vec::new();
                for (_, m) in cs {
                    let s = m.support();
                    pts.extend(m.singular_points());
                    pts.extend([s.lower, s.upper].into_iter().filter(|v| v.is_finite()));
                }
                pts.retain(|&p| self.support.contains_interior(p));
                pts.sort_by(f64::total_cmp);
                pts.dedup();
                pts
            }
            Family::Affine { base, shift, scale } => base
                .singular_points()
                .into_iter()
                .map(|p| shift + scale * p)
                .collect(),
            _ => Vec::new(),
        }
    }

    /// Interior points worth splitting the domain at (peaks, seams).
    pub fn regular_points(&self) -> Vec<f64> {
        let mut pts = match &self.family {
            Family::PolynomialTail { .. } => vec![-1.0, -0.5, 0.5, 1.0],
            Family::FiniteMixture(cs) => cs
                .iter()
                .flat_map(|(_, m)| {
                    let mut v = m.regular_points();
                    v.push(m.center_scale().0);
                    v
                })
                .collect(),
            Family::Affine { base, shift, scale } => base
                .regular_points()
                .into_iter()
                .map(|p| shift + scale * p)
                .collect(),
            _ => vec![self.center_scale().0],
        };
        pts.retain(|&p| self.support.contains_interior(p));
        pts.sort_by(f64::total_cmp);
        pts.dedup();
        pts
    }

    /// A location and a length scale of the bulk of the distribution
    /// (mean and standard deviation when they exist).
    pub fn center_scale(&self) -> (f64, f64) {
        match &self.family {
            Family::Normal { mean, sigma } => (*mean, *sigma),
            Family::Gamma { shape } => (*shape, shape.sqrt()),
            Family::Beta { alpha, beta } => {
                let s = alpha + beta;
                (alpha / s, (alpha * beta / (s * s * (s + 1.0))).sqrt())
            }
            Family::HermiteWeighted => (0.0, 3f64.sqrt()),
            Family::PolynomialTail { .. } => (0.0, 1.0),
            Family::HalfGaussian => ((PI / 2.0).sqrt(), (2.0 - PI / 2.0).sqrt()),
            Family::Logistic => (0.0, PI / 3f64.sqrt()),
            Family::FiniteMixture(cs) => {
                let mean: f64 = cs.iter().map(|(w, m)| w * m.center_scale().0).sum();
                let second: f64 = cs
                    .iter()
                    .map(|(w, m)| {
                        let (c, s) = m.center_scale();
                        w * (s * s + c * c)
                    })
                    .sum();
                (mean, (second - mean * mean).max(1e-300).sqrt())
            }
            Family::GaussianConvolution { base, eps } => {
                let (c, s) = base.center_scale();
                (c, (s * s + eps * eps).sqrt())
            }
            Family::Affine { base, shift, scale } => {
                let (c, s) = base.center_scale();
                (shift + scale * c, scale * s)
            }
        }
    }

    /// Integration domain for integrands built from this density.
    pub fn integration_domain(&self) -> IntegrationDomain {
        let (c, s) = self.center_scale();
        IntegrationDomain::new(self.support)
            .with_singular_points(self.singular_points())
            .with_regular_points(self.regular_points())
            .with_center_scale(c, s)
    }

    // ------------------------------------------------------------ moments

    /// `β_s = E|X|^s`.
    pub fn moment(&self, s: f64, cfg: &QuadratureConfig) -> FunctionalValue {
        if s == 0.0 {
            return FunctionalValue::exact(1.0);
        }
        match &self.family {
            Family::Normal { mean, sigma } if *mean == 0.0 => {
                FunctionalValue::exact(sigma.powf(s) * abs_normal_moment(s))
            }
            Family::Gamma { shape } => {
                FunctionalValue::exact((ln_gamma(shape + s) - ln_gamma(*shape)).exp())
            }
            Family::Beta { alpha, beta } => {
                FunctionalValue::exact((ln_beta(alpha + s, *beta) - ln_beta(*alpha, *beta)).exp())
            }
            Family::HermiteWeighted => FunctionalValue::exact(abs_normal_moment(s + 2.0)),
            Family::HalfGaussian => {
                FunctionalValue::exact((0.5 * s * 2f64.ln() + ln_gamma(0.5 * s + 1.0)).exp())
            }
            Family::PolynomialTail { q, c } => {
                if s >= q - 1.0 {
                    return FunctionalValue::divergent(0);
                }
                let inner = integrate_smooth(
                    |u| u.powf(s) * poly_tail_g(*q, u),
                    0.0,
                    1.0,
                    &cfg.tightened(0.1),
                );
                FunctionalValue::exact(2.0 * c * (inner.value + 1.0 / (q - 1.0 - s)))
            }
            Family::FiniteMixture(cs) => {
                let mut total = 0.0;
                let mut err = 0.0;
                let mut nodes = 0;
                for (w, m) in cs {
                    let v = m.moment(s, cfg);
                    match v.status {
                        Status::Divergent => return FunctionalValue::divergent(nodes + v.node_count),
                        Status::Inconclusive => {
                            return FunctionalValue::inconclusive(f64::NAN, f64::INFINITY, nodes)
                        }
                        Status::Finite => {}
                    }
                    total += w * v.value;
                    err += w * v.error_estimate;
                    nodes += v.node_count;
                }
                FunctionalValue {
                    value: total,
                    error_estimate: err,
                    status: Status::Finite,
                    node_count: nodes,
                }
            }
            Family::Affine { base, shift, scale } if *shift == 0.0 => {
                base.moment(s, cfg).map(|v| v * scale.powf(s), scale.powf(s))
            }
            _ => integrate_on(
                |x| {
                    let f = self.density(x);
                    if f == 0.0 {
                        0.0
                    } else {
                        x.abs().powf(s) * f
                    }
                },
                &self.integration_domain(),
                cfg,
            ),
        }
    }

    // ---------------------------------------------------------------- cdf

    /// `F(x) = P(X ≤ x)`.
    pub fn cdf(&self, x: f64) -> f64 {
        if x <= self.support.lower {
            return 0.0;
        }
        if x >= self.support.upper {
            return 1.0;
        }
        match &self.family {
            Family::Normal { mean, sigma } => normal_cdf((x - mean) / sigma),
            Family::Gamma { shape } => gamma_lr(*shape, x),
            Family::Beta { alpha, beta } => beta_reg(*alpha, *beta, x),
            Family::HermiteWeighted => {
                if x <= 0.0 {
                    normal_cdf(x) - x * std_normal_pdf(x)
                } else {
                    1.0 - self.survival(x)
                }
            }
            Family::HalfGaussian => -(-0.5 * x * x).exp_m1(),
            Family::Logistic => logistic_pair(x).0,
            Family::PolynomialTail { .. } => {
                if x <= 0.0 {
                    self.survival(-x)
                } else {
                    1.0 - self.survival(x)
                }
            }
            Family::FiniteMixture(cs) => cs.iter().map(|(w, m)| w * m.cdf(x)).sum(),
            Family::GaussianConvolution { base, eps } => match self.as_normal() {
                Some((m, s)) => normal_cdf((x - m) / s),
                None => smoothed(|y| base.cdf(y), *eps, x),
            },
            Family::Affine { base, shift, scale } => base.cdf((x - shift) / scale),
        }
    }

    /// `P(X > x)`, accurate where it is small.
    pub fn survival(&self, x: f64) -> f64 {
        if x <= self.support.lower {
            return 1.0;
        }
        if x >= self.support.upper {
            return 0.0;
        }
        match &self.family {
            Family::Normal { mean, sigma } => normal_sf((x - mean) / sigma),
            Family::Gamma { shape } => gamma_ur(*shape, x),
            Family::Beta { alpha, beta } => beta_reg(*beta, *alpha, 1.0 - x),
            Family::HermiteWeighted => {
                if x >= 0.0 {
                    normal_sf(x) + x * std_normal_pdf(x)
                } else {
                    1.0 - self.cdf(x)
                }
            }
            Family::HalfGaussian => (-0.5 * x * x).exp(),
            Family::Logistic => logistic_pair(x).1,
            Family::PolynomialTail { q, c } => {
                let u = x.abs();
                let upper = if u >= 1.0 {
                    c * u.powf(1.0 - q) / (q - 1.0)
                } else {
                    c * (poly_tail_inner_mass(*q, u) + 1.0 / (q - 1.0))
                };
                if x >= 0.0 {
                    upper
                } else {
                    1.0 - upper
                }
            }
            Family::FiniteMixture(cs) => cs.iter().map(|(w, m)| w * m.survival(x)).sum(),
            Family::GaussianConvolution { base, eps } => match self.as_normal() {
                Some((m, s)) => normal_sf((x - m) / s),
                None => smoothed(|y| base.survival(y), *eps, x),
            },
            Family::Affine { base, shift, scale } => base.survival((x - shift) / scale),
        }
    }

    // ------------------------------------------------ characteristic function

    /// Closed-form characteristic function as `(ln |f̂(t)|, arg f̂(t))`, when
    /// the family has one. Working in log-modulus keeps fast decay visible.
    pub fn charfn_closed(&self, t: f64) -> Option<(f64, f64)> {
        match &self.family {
            Family::Normal { mean, sigma } => Some((-0.5 * sigma * sigma * t * t, mean * t)),
            Family::Gamma { shape } => Some((-0.5 * shape * t.mul_add(t, 1.0).ln(), shape * t.atan())),
            Family::Logistic => {
                if t == 0.0 {
                    return Some((0.0, 0.0));
                }
                let a = PI * t.abs();
                // π t / sinh(π t)
                Some((a.ln() - a - (-(-2.0 * a).exp()).ln_1p() + 2f64.ln(), 0.0))
            }
            Family::HermiteWeighted => {
                let r = 1.0 - t * t;
                let arg = if r < 0.0 { PI } else { 0.0 };
                Some((r.abs().ln() - 0.5 * t * t, arg))
            }
            Family::GaussianConvolution { base, eps } => {
                let (l, a) = base.charfn_closed(t)?;
                Some((l - 0.5 * eps * eps * t * t, a))
            }
            Family::Affine { base, shift, scale } => {
                let (l, a) = base.charfn_closed(scale * t)?;
                Some((l, a + shift * t))
            }
            Family::FiniteMixture(cs) => {
                let parts: Option<Vec<(f64, f64, f64)>> = cs
                    .iter()
                    .map(|(w, m)| m.charfn_closed(t).map(|(l, a)| (w.ln() + l, a, 0.0)))
                    .collect();
                let parts = parts?;
                let top = parts.iter().map(|p| p.0).fold(f64::NEG_INFINITY, f64::max);
                if top == f64::NEG_INFINITY {
                    return Some((f64::NEG_INFINITY, 0.0));
                }
                let (mut re, mut im) = (0.0, 0.0);
                for (l, a, _) in parts {
                    let r = (l - top).exp();
                    re += r * a.cos();
                    im += r * a.sin();
                }
                Some((top + re.hypot(im).ln(), im.atan2(re)))
            }
            _ => None,
        }
    }

    // --------------------------------------------------------- descriptors

    /// JSON descriptor `{"family": ..., "params": {...}}`.
    pub fn to_descriptor(&self) -> Value {
        let (name, params) = match &self.family {
            Family::Normal { mean, sigma } => ("normal", json!({"mean": mean, "sigma": sigma})),
            Family::Gamma { shape } => ("gamma", json!({"n": shape})),
            Family::Beta { alpha, beta } => ("beta", json!({"alpha": alpha, "beta": beta})),
            Family::HermiteWeighted => ("hermite_weighted", json!({})),
            Family::PolynomialTail { q, .. } => ("polynomial_tail", json!({"q": q})),
            Family::HalfGaussian => ("half_gaussian", json!({})),
            Family::Logistic => ("logistic", json!({})),
            Family::FiniteMixture(cs) => {
                let comps: Vec<Value> = cs
                    .iter()
                    .map(|(w, m)| json!({"weight": w, "density": m.to_descriptor()}))
                    .collect();
                ("mixture", json!({ "components": comps }))
            }
            Family::GaussianConvolution { base, eps } => (
                "gaussian_convolution",
                json!({"base": base.to_descriptor(), "eps": eps}),
            ),
            Family::Affine { base, shift, scale } => (
                "affine",
                json!({"base": base.to_descriptor(), "shift": shift, "scale": scale}),
            ),
        };
        json!({"family": name, "params": params})
    }

    /// Parses a JSON descriptor. Errors name the offending field path.
    pub fn from_descriptor(v: &Value) -> Result<Self> {
        parse_descriptor(v, "")
    }

    pub fn from_descriptor_str(s: &str) -> Result<Self> {
        let v: Value = serde_json::from_str(s).map_err(|e| {
            Error::descriptor(format!("line {}, column {}", e.line(), e.column()), e.to_string())
        })?;
        Self::from_descriptor(&v)
    }
}

fn log_sum_exp(logs: &[f64]) -> f64 {
    let top = logs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if top == f64::NEG_INFINITY {
        return top;
    }
    top + logs.iter().map(|l| (l - top).exp()).sum::<f64>().ln()
}

/// `∫ g(x - εz) φ(z) dz`.
fn smoothed(g: impl Fn(f64) -> f64, eps: f64, x: f64) -> f64 {
    let cfg = QuadratureConfig {
        abs_tol: 1e-300,
        ..QuadratureConfig::with_rel_tol(1e-13)
    };
    let domain = IntegrationDomain::new(SupportInterval {
        lower: -KERNEL_REACH,
        upper: KERNEL_REACH,
    })
    .with_regular_points([-8.0, -4.0, 0.0, 4.0, 8.0]);
    // the ends are not singular, but layering toward them is harmless
    integrate_on(|z| g(x - eps * z) * std_normal_pdf(z), &domain, &cfg).value
}

/// `(f * φ_ε)^(k)(x) = ∫ f(y) φ_ε^(k)(x - y) dy` with the derivative placed on
/// the Gaussian kernel.
fn conv_derivative(base: &DensityModel, eps: f64, k: usize, x: f64) -> f64 {
    let cfg = QuadratureConfig {
        abs_tol: 1e-300,
        ..QuadratureConfig::with_rel_tol(1e-12)
    };
    let window = SupportInterval {
        lower: x - KERNEL_REACH * eps,
        upper: x + KERNEL_REACH * eps,
    };
    let Some(iv) = window.intersect(&base.support()) else {
        return 0.0;
    };
    let mut regular: Vec<f64> = (-2..=2).map(|j| x + 4.0 * eps * j as f64).collect();
    regular.extend(base.regular_points());
    let domain = IntegrationDomain::new(iv)
        .with_singular_points(base.singular_points())
        .with_regular_points(regular);
    let sign = if k.is_multiple_of(2) { 1.0 } else { -1.0 };
    let norm = sign / eps.powi(k as i32 + 1);
    let v = integrate_on(
        |y| {
            let fy = base.density(y);
            if fy == 0.0 {
                return 0.0;
            }
            let z = (x - y) / eps;
            fy * hermite_eval(k, z) * std_normal_pdf(z)
        },
        &domain,
        &cfg,
    );
    norm * v.value
}

// ------------------------------------------------------------- descriptors

fn join(path: &str, field: &str) -> String {
    if path.is_empty() {
        field.to_string()
    } else {
        format!("{path}.{field}")
    }
}

fn num_param(params: &Map<String, Value>, path: &str, key: &str, default: Option<f64>) -> Result<f64> {
    match params.get(key) {
        Some(v) => v
            .as_f64()
            .ok_or_else(|| Error::descriptor(join(path, key), format!("expected a number, got {v}"))),
        None => default.ok_or_else(|| Error::descriptor(join(path, key), "missing required parameter")),
    }
}

fn check_keys(params: &Map<String, Value>, path: &str, allowed: &[&str]) -> Result<()> {
    for k in params.keys() {
        if !allowed.contains(&k.as_str()) {
            return Err(Error::descriptor(
                join(path, k),
                format!("unknown parameter; expected one of {allowed:?}"),
            ));
        }
    }
    Ok(())
}

fn parse_descriptor(v: &Value, path: &str) -> Result<DensityModel> {
    let obj = v
        .as_object()
        .ok_or_else(|| Error::descriptor(path_or_root(path), "expected an object"))?;
    let family = obj
        .get("family")
        .and_then(Value::as_str)
        .ok_or_else(|| Error::descriptor(join(path, "family"), "missing or not a string"))?;
    let empty = Map::new();
    let params = match obj.get("params") {
        Some(Value::Object(m)) => m,
        Some(_) => return Err(Error::descriptor(join(path, "params"), "expected an object")),
        None => &empty,
    };
    let pp = join(path, "params");
    let wrap = |field: &str, e: Error| match e {
        Error::InvalidParameter(m) => Error::descriptor(join(&pp, field), m),
        other => other,
    };
    match family {
        "normal" => {
            check_keys(params, &pp, &["mean", "sigma"])?;
            let mean = num_param(params, &pp, "mean", Some(0.0))?;
            let sigma = num_param(params, &pp, "sigma", Some(1.0))?;
            DensityModel::normal(mean, sigma).map_err(|e| wrap("sigma", e))
        }
        "gamma" => {
            check_keys(params, &pp, &["n"])?;
            DensityModel::gamma(num_param(params, &pp, "n", None)?).map_err(|e| wrap("n", e))
        }
        "beta" => {
            check_keys(params, &pp, &["alpha", "beta"])?;
            let a = num_param(params, &pp, "alpha", None)?;
            let b = num_param(params, &pp, "beta", None)?;
            DensityModel::beta(a, b).map_err(|e| wrap("alpha", e))
        }
        "hermite_weighted" => {
            check_keys(params, &pp, &[])?;
            Ok(DensityModel::hermite_weighted())
        }
        "polynomial_tail" => {
            check_keys(params, &pp, &["q"])?;
            DensityModel::polynomial_tail(num_param(params, &pp, "q", None)?).map_err(|e| wrap("q", e))
        }
        "half_gaussian" => {
            check_keys(params, &pp, &[])?;
            Ok(DensityModel::half_gaussian())
        }
        "logistic" => {
            check_keys(params, &pp, &[])?;
            Ok(DensityModel::logistic())
        }
        "mixture" => {
            check_keys(params, &pp, &["components"])?;
            let cp = join(&pp, "components");
            let list = params
                .get("components")
                .and_then(Value::as_array)
                .ok_or_else(|| Error::descriptor(&cp, "expected an array"))?;
            let mut comps = Vec::with_capacity(list.len());
            for (i, item) in list.iter().enumerate() {
                let ip = format!("{cp}[{i}]");
                let w = item
                    .get("weight")
                    .and_then(Value::as_f64)
                    .ok_or_else(|| Error::descriptor(join(&ip, "weight"), "missing or not a number"))?;
                let d = item
                    .get("density")
                    .ok_or_else(|| Error::descriptor(join(&ip, "density"), "missing"))?;
                comps.push((w, parse_descriptor(d, &join(&ip, "density"))?));
            }
            DensityModel::mixture(comps).map_err(|e| wrap("components", e))
        }
        "gaussian_convolution" => {
            check_keys(params, &pp, &["base", "eps"])?;
            let b = params
                .get("base")
                .ok_or_else(|| Error::descriptor(join(&pp, "base"), "missing"))?;
            let base = parse_descriptor(b, &join(&pp, "base"))?;
            let eps = num_param(params, &pp, "eps", None)?;
            DensityModel::gaussian_convolution(base, eps).map_err(|e| wrap("eps", e))
        }
        "affine" => {
            check_keys(params, &pp, &["base", "shift", "scale"])?;
            let b = params
                .get("base")
                .ok_or_else(|| Error::descriptor(join(&pp, "base"), "missing"))?;
            let base = parse_descriptor(b, &join(&pp, "base"))?;
            let shift = num_param(params, &pp, "shift", Some(0.0))?;
            let scale = num_param(params, &pp, "scale", Some(1.0))?;
            DensityModel::affine(base, shift, scale).map_err(|e| wrap("scale", e))
        }
        other => Err(Error::descriptor(
            join(path, "family"),
            format!("unknown family `{other}`"),
        )),
    }
}

fn path_or_root(path: &str) -> String {
    if path.is_empty() {
        "<root>".to_string()
    } else {
        path.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn point_values() {
        let phi0 = 1.0 / (2.0 * PI).sqrt();
        assert!((DensityModel::std_normal().density(0.0) - phi0).abs() < 1e-15);
        let g = DensityModel::gamma(2.0).unwrap();
        assert!((g.density(1.0) - (-1f64).exp()).abs() < 1e-15);
        assert_eq!(g.density(-1.0), 0.0);
        let h = DensityModel::hermite_weighted();
        assert!((h.density(1.0) - 0.241_970_724_519_143_37).abs() < 1e-15);
        assert_eq!(h.density(0.0), 0.0);
    }

    #[test]
    fn derivative_examples() {
        let z = DensityModel::std_normal();
        let phi0 = 1.0 / (2.0 * PI).sqrt();
        assert!((z.derivative(2, 0.0).unwrap() + phi0).abs() < 1e-15);
        let hg = DensityModel::half_gaussian();
        assert!((hg.derivative(2, 1.0).unwrap() + 2.0 * (-0.5f64).exp()).abs() < 1e-14);
        assert!(z.derivative(MAX_DERIVATIVE_ORDER + 1, 0.0).is_err());
    }

    #[test]
    fn logistic_ratio_table() {
        let q = logistic_ratio_polys();
        assert_eq!(q[1], vec![1.0, -2.0]);
        // f''/f = 1 - 6s + 6s²
        assert_eq!(q[2], vec![1.0, -6.0, 6.0]);
    }

    #[test]
    fn poly_tail_is_continuous_at_seams() {
        let m = DensityModel::polynomial_tail(2.5).unwrap();
        for &x in &[0.5, 1.0] {
            let a = m.density(x - 1e-9);
            let b = m.density(x + 1e-9);
            assert!((a - b).abs() < 1e-7 * a, "seam {x}");
        }
        assert_eq!(m.density(0.3), m.density(-0.3));
    }

    #[test]
    fn gates() {
        assert!(!DensityModel::half_gaussian().smoothness_gate(2));
        assert!(DensityModel::half_gaussian().smoothness_gate(1));
        assert!(DensityModel::beta(5.0, 5.0).unwrap().smoothness_gate(2));
        assert!(!DensityModel::beta(3.0, 3.0).unwrap().smoothness_gate(2));
        assert_eq!(DensityModel::gamma(10.0).unwrap().smoothness_order(), Some(4));
        assert_eq!(DensityModel::gamma(5.0).unwrap().smoothness_order(), Some(2));
        assert_eq!(DensityModel::std_normal().smoothness_order(), None);
    }

    #[test]
    fn descriptor_round_trip() {
        let m = DensityModel::mixture(vec![
            (0.25, DensityModel::gamma(10.0).unwrap()),
            (0.75, DensityModel::affine(DensityModel::logistic(), 1.0, 2.0).unwrap()),
        ])
        .unwrap();
        let back = DensityModel::from_descriptor(&m.to_descriptor()).unwrap();
        assert_eq!(back, m);
    }

    #[test]
    fn descriptor_errors_name_fields() {
        let e = DensityModel::from_descriptor_str(r#"{"family":"gamma","params":{"n":"x"}}"#)
            .unwrap_err();
        assert!(matches!(e, Error::Descriptor { ref field, .. } if field == "params.n"), "{e}");
        let e = DensityModel::from_descriptor_str(
            r#"{"family":"mixture","params":{"components":[{"weight":1,"density":{"family":"nope"}}]}}"#,
        )
        .unwrap_err();
        assert!(
            matches!(e, Error::Descriptor { ref field, .. } if field == "params.components[0].density.family"),
            "{e}"
        );
        let e = DensityModel::from_descriptor_str("{ bad").unwrap_err();
        assert!(matches!(e, Error::Descriptor { ref field, .. } if field.starts_with("line 1")));
    }
}
