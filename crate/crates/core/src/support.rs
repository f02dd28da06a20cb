use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Open interval `(lower, upper)` on which a density is supported.
/// Endpoints may be infinite.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SupportInterval {
    pub lower: f64,
    pub upper: f64,
}

impl SupportInterval {
    pub fn new(lower: f64, upper: f64) -> Result<Self> {
        if lower.is_nan() || upper.is_nan() || lower >= upper {
            return Err(Error::InvalidParameter(format!(
                "support interval requires lower < upper, got ({lower}, {upper})"
            )));
        }
        Ok(SupportInterval { lower, upper })
    }

    pub const fn real_line() -> Self {
        SupportInterval {
            lower: f64::NEG_INFINITY,
            upper: f64::INFINITY,
        }
    }

    pub const fn positive_half_line() -> Self {
        SupportInterval {
            lower: 0.0,
            upper: f64::INFINITY,
        }
    }

    pub const fn unit() -> Self {
        SupportInterval {
            lower: 0.0,
            upper: 1.0,
        }
    }

    /// Closed-interval membership.
    pub fn contains(&self, x: f64) -> bool {
        x >= self.lower && x <= self.upper
    }

    /// Open-interval membership.
    pub fn contains_interior(&self, x: f64) -> bool {
        x > self.lower && x < self.upper
    }

    pub fn is_finite(&self) -> bool {
        self.lower.is_finite() && self.upper.is_finite()
    }

    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }

    pub fn intersect(&self, other: &SupportInterval) -> Option<SupportInterval> {
        let lower = self.lower.max(other.lower);
        let upper = self.upper.min(other.upper);
        (lower < upper).then_some(SupportInterval { lower, upper })
    }

    /// Image under `x -> shift + scale * x`.
    pub fn affine(&self, shift: f64, scale: f64) -> SupportInterval {
        let a = shift + scale * self.lower;
        let b = shift + scale * self.upper;
        let (lower, upper) = if scale > 0.0 { (a, b) } else { (b, a) };
        SupportInterval { lower, upper }
    }

    /// Minkowski sum, the support of an independent sum.
    pub fn minkowski_sum(&self, other: &SupportInterval) -> SupportInterval {
        SupportInterval {
            lower: self.lower + other.lower,
            upper: self.upper + other.upper,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_empty_interval() {
        assert!(SupportInterval::new(1.0, 1.0).is_err());
        assert!(SupportInterval::new(2.0, 1.0).is_err());
        assert!(SupportInterval::new(f64::NAN, 1.0).is_err());
        assert!(SupportInterval::new(f64::NEG_INFINITY, f64::INFINITY).is_ok());
    }

    #[test]
    fn affine_flips_on_negative_scale() {
        let s = SupportInterval::positive_half_line().affine(1.0, -2.0);
        assert_eq!(s.lower, f64::NEG_INFINITY);
        assert_eq!(s.upper, 1.0);
    }

    #[test]
    fn minkowski_sum_of_half_lines() {
        let s = SupportInterval::positive_half_line()
            .minkowski_sum(&SupportInterval::new(1.0, 2.0).unwrap());
        assert_eq!(s.lower, 1.0);
        assert!(s.upper.is_infinite());
    }
}
