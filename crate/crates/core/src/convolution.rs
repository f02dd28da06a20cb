//! Density of `X + Y` for independent catalog variables, its derivatives,
//! and the Fisher information of the sum.
//!
//! `h^(p)(x) = ∫ f^(k)(x - y) g^(p-k)(y) dy` for any split `k`; the split
//! puts derivatives on the smoother factor.

use serde::Serialize;

use crate::densities::{DensityModel, DENSITY_FLOOR};
use crate::error::{Error, Result};
use crate::functionals::fisher_info;
use crate::hermite::factorial;
use crate::quadrature::{integrate_on, FunctionalValue, IntegrationDomain, QuadratureConfig};
use crate::support::SupportInterval;

/// Largest order for [`fisher_info_convolved`] (nested quadrature cost).
pub const MAX_CONVOLVED_ORDER: usize = 3;

/// Smallest kernel width accepted by [`smoothing_ladder`].
pub const MIN_LADDER_EPS: f64 = 0.01;

/// Law of `X + Y` with `X ~ left`, `Y ~ right` independent.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvolvedDensity {
    pub left: DensityModel,
    pub right: DensityModel,
}

fn smoothness_rank(m: &DensityModel) -> usize {
    m.smoothness_order().unwrap_or(usize::MAX)
}

fn bulk_points(m: &DensityModel) -> Vec<f64> {
    let (c, s) = m.center_scale();
    let mut pts = m.regular_points();
    pts.extend([-8.0, -4.0, 0.0, 4.0, 8.0].iter().map(|k| c + k * s));
    pts
}

impl ConvolvedDensity {
    pub fn new(left: DensityModel, right: DensityModel) -> Self {
        ConvolvedDensity { left, right }
    }

    pub fn support(&self) -> SupportInterval {
        self.left.support().minkowski_sum(&self.right.support())
    }

    /// `(k, order - k)`: derivatives on `left` and on `right`.
    pub fn derivative_split(&self, order: usize) -> (usize, usize) {
        let (a, b) = (smoothness_rank(&self.left), smoothness_rank(&self.right));
        let k = if a > b {
            order
        } else if b > a {
            0
        } else {
            order.div_ceil(2)
        };
        (k, order - k)
    }

    /// `∫ left^(k)(x - y) right^(l)(y) dy`.
    pub fn eval_split(&self, k: usize, l: usize, x: f64, cfg: &QuadratureConfig) -> Result<FunctionalValue> {
        self.left.derivative(k, 0.0)?;
        self.right.derivative(l, 0.0)?;
        let ls = self.left.support();
        let reach = SupportInterval {
            lower: x - ls.upper,
            upper: x - ls.lower,
        };
        let Some(iv) = reach.intersect(&self.right.support()) else {
            return Ok(FunctionalValue::exact(0.0));
        };
        let mut singular = self.right.singular_points();
        singular.extend(self.left.singular_points().into_iter().map(|p| x - p));
        let mut regular = bulk_points(&self.right);
        regular.extend(bulk_points(&self.left).into_iter().map(|p| x - p));
        let (c, s) = self.right.center_scale();
        let domain = IntegrationDomain::new(iv)
            .with_singular_points(singular)
            .with_regular_points(regular)
            .with_center_scale(c, s);
        Ok(integrate_on(
            |y| {
                let g = self.right.derivative_unchecked(l, y);
                if g == 0.0 {
                    return 0.0;
                }
                self.left.derivative_unchecked(k, x - y) * g
            },
            &domain,
            cfg,
        ))
    }

    /// `h^(order)(x)` with the default split.
    pub fn eval(&self, order: usize, x: f64, cfg: &QuadratureConfig) -> Result<FunctionalValue> {
        let (k, l) = self.derivative_split(order);
        self.eval_split(k, l, x, cfg)
    }

    /// Both factors normal: the sum is normal with added variances.
    pub fn as_normal(&self) -> Option<(f64, f64)> {
        let (m1, s1) = self.left.as_normal()?;
        let (m2, s2) = self.right.as_normal()?;
        Some((m1 + m2, (s1 * s1 + s2 * s2).sqrt()))
    }

    fn outer_domain(&self) -> IntegrationDomain {
        let (c1, s1) = self.left.center_scale();
        let (c2, s2) = self.right.center_scale();
        let center = c1 + c2;
        let scale = (s1 * s1 + s2 * s2).sqrt();
        IntegrationDomain::new(self.support())
            .with_regular_points([-4.0, 0.0, 4.0].iter().map(|k| center + k * scale))
            .with_center_scale(center, scale)
    }
}

/// `h^(order)(x)` for `h = left * right`.
pub fn convolve_eval(c: &ConvolvedDensity, order: usize, x: f64, cfg: &QuadratureConfig) -> Result<FunctionalValue> {
    c.eval(order, x, cfg)
}

/// `I^(p)(X + Y)` by an outer quadrature of `h^(p)²/h`, with inner
/// quadratures at one tenth of the outer tolerance. Two normal factors
/// bypass the numerics.
pub fn fisher_info_convolved(c: &ConvolvedDensity, p: usize, cfg: &QuadratureConfig) -> Result<FunctionalValue> {
    if p > MAX_CONVOLVED_ORDER {
        return Err(Error::OrderTooLarge {
            order: p,
            max: MAX_CONVOLVED_ORDER,
        });
    }
    if p == 0 {
        return Ok(FunctionalValue::exact(1.0));
    }
    if let Some((_, s)) = c.as_normal() {
        return Ok(FunctionalValue::exact(factorial(p) / s.powi(2 * p as i32)));
    }
    let inner = QuadratureConfig {
        abs_tol: 1e-300,
        ..cfg.tightened(0.1)
    };
    let (k, l) = c.derivative_split(p);
    c.left.derivative(k, 0.0)?;
    c.right.derivative(l, 0.0)?;
    Ok(integrate_on(
        |x| {
            let h = c.eval_split(0, 0, x, &inner).map(|v| v.value).unwrap_or(f64::NAN);
            if h <= DENSITY_FLOOR {
                return 0.0;
            }
            let d = c.eval_split(k, l, x, &inner).map(|v| v.value).unwrap_or(f64::NAN);
            d * d / h
        },
        &c.outer_domain(),
        cfg,
    ))
}

/// One rung of a smoothing ladder.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LadderRung {
    pub eps: f64,
    pub value: FunctionalValue,
    /// `p! ε^{-2p}`, the information of `εZ` alone.
    pub bound: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SmoothingLadder {
    pub order: usize,
    pub rungs: Vec<LadderRung>,
    /// Polynomial extrapolation to `ε = 0` through the last three rungs.
    /// Reported only; the limit is not asserted.
    pub extrapolated: Option<f64>,
}

impl SmoothingLadder {
    /// Values do not decrease as `ε` decreases (tolerance `tol`).
    pub fn is_monotone(&self, tol: f64) -> bool {
        self.rungs.windows(2).all(|w| w[1].value.value >= w[0].value.value - tol)
    }

    pub fn within_bounds(&self) -> bool {
        self.rungs.iter().all(|r| r.value.value <= r.bound)
    }
}

/// `I^(p)(X + εZ)` along a strictly decreasing list of `ε ≥ 0.01`.
pub fn smoothing_ladder(
    model: &DensityModel,
    p: usize,
    eps_list: &[f64],
    cfg: &QuadratureConfig,
) -> Result<SmoothingLadder> {
    if eps_list.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::InvalidParameter("ladder widths must strictly decrease".into()));
    }
    if let Some(&e) = eps_list.iter().find(|&&e| !(e >= MIN_LADDER_EPS && e.is_finite())) {
        return Err(Error::InvalidParameter(format!(
            "ladder width {e} is below the minimum {MIN_LADDER_EPS}"
        )));
    }
    let rungs = eps_list
        .iter()
        .map(|&eps| {
            let m = DensityModel::gaussian_convolution(model.clone(), eps)?;
            Ok(LadderRung {
                eps,
                value: fisher_info(&m, p, cfg)?,
                bound: factorial(p) * eps.powi(-2 * p as i32),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let extrapolated = (rungs.len() >= 3 && rungs.iter().all(|r| r.value.is_finite())).then(|| {
        let last = &rungs[rungs.len() - 3..];
        neville_at_zero(
            &last.iter().map(|r| r.eps).collect::<Vec<_>>(),
            &last.iter().map(|r| r.value.value).collect::<Vec<_>>(),
        )
    });
    Ok(SmoothingLadder {
        order: p,
        rungs,
        extrapolated,
    })
}

/// Value at 0 of the interpolating polynomial through `(xs, ys)`.
fn neville_at_zero(xs: &[f64], ys: &[f64]) -> f64 {
    let mut p = ys.to_vec();
    let n = xs.len();
    for m in 1..n {
        for i in 0..n - m {
            p[i] = (xs[i + m] * p[i] - xs[i] * p[i + 1]) / (xs[i + m] - xs[i]);
        }
    }
    p[0]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn neville_recovers_quadratic() {
        let xs = [1.0, 0.5, 0.25];
        let ys: Vec<f64> = xs.iter().map(|x| 3.0 - 2.0 * x + x * x).collect();
        assert!((neville_at_zero(&xs, &ys) - 3.0).abs() < 1e-14);
    }

    #[test]
    fn split_prefers_smoother_factor() {
        let g = DensityModel::gamma(10.0).unwrap();
        let c = ConvolvedDensity::new(g.clone(), DensityModel::std_normal());
        assert_eq!(c.derivative_split(3), (0, 3));
        let c = ConvolvedDensity::new(g.clone(), g);
        assert_eq!(c.derivative_split(3), (2, 1));
    }
}
