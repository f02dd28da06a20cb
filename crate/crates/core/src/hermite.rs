//! Chebyshev–Hermite polynomials in the probabilists' (monic) normalization,
//! and general monic polynomials.
//!
//! `H_0 = 1`, `H_1 = x`, `H_{p+1}(x) = x H_p(x) - p H_{p-1}(x)`. These are
//! orthogonal under the standard Gaussian weight with `E H_p(Z)^2 = p!`, and
//! the derivatives of the Gaussian density are `φ^{(p)} = (-1)^p H_p φ`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest degree for which exact integer coefficients are produced.
pub const MAX_HERMITE_DEGREE: usize = 30;

/// Largest `p` accepted by [`hermite_sq_gaussian_mean`].
pub const MAX_FACTORIAL_ORDER: usize = 20;

/// A real polynomial `x^p + a_{p-1} x^{p-1} + ... + a_0`.
///
/// Coefficients are stored in ascending order; the last one is exactly 1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MonicPolynomial {
    coeffs: Vec<f64>,
}

impl MonicPolynomial {
    /// Builds a polynomial from ascending coefficients. The leading one must be 1.
    pub fn from_coeffs(coeffs: Vec<f64>) -> Result<Self> {
        match coeffs.last() {
            Some(&lead) if lead == 1.0 => Ok(MonicPolynomial { coeffs }),
            Some(&lead) => Err(Error::NotMonic(lead)),
            None => Err(Error::NotMonic(0.0)),
        }
    }

    /// `x^p`.
    pub fn monomial(p: usize) -> Self {
        let mut coeffs = vec![0.0; p + 1];
        coeffs[p] = 1.0;
        MonicPolynomial { coeffs }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// Horner evaluation.
    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
    }

    /// Coefficients of the derivative (no longer monic in general).
    pub fn derivative_coeffs(&self) -> Vec<f64> {
        self.coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, &c)| k as f64 * c)
            .collect()
    }
}

/// Exact integer coefficients of `H_p`, ascending.
fn hermite_integer_coeffs(p: usize) -> Vec<i128> {
    let mut prev: Vec<i128> = vec![1];
    if p == 0 {
        return prev;
    }
    let mut cur: Vec<i128> = vec![0, 1];
    for k in 1..p {
        // H_{k+1} = x H_k - k H_{k-1}
        let mut next = vec![0i128; k + 2];
        for (j, &c) in cur.iter().enumerate() {
            next[j + 1] += c;
        }
        for (j, &c) in prev.iter().enumerate() {
            next[j] -= k as i128 * c;
        }
        prev = cur;
        cur = next;
    }
    cur
}

/// The monic Chebyshev–Hermite polynomial of degree `p`.
pub fn hermite(p: usize) -> Result<MonicPolynomial> {
    if p > MAX_HERMITE_DEGREE {
        return Err(Error::DegreeTooLarge(p));
    }
    let coeffs = hermite_integer_coeffs(p)
        .into_iter()
        .map(|c| c as f64)
        .collect();
    Ok(MonicPolynomial { coeffs })
}

/// `H_p(x)` by the three-term recursion.
pub fn hermite_eval(p: usize, x: f64) -> f64 {
    let mut prev = 1.0;
    if p == 0 {
        return prev;
    }
    let mut cur = x;
    for k in 1..p {
        let next = x * cur - k as f64 * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// All of `H_0(x), ..., H_p(x)` in one pass.
pub fn hermite_eval_all(p: usize, x: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(p + 1);
    out.push(1.0);
    if p >= 1 {
        out.push(x);
    }
    for k in 1..p {
        let next = x * out[k] - k as f64 * out[k - 1];
        out.push(next);
    }
    out
}

/// `p!` as a float, exact for `p <= 20`.
pub fn factorial(p: usize) -> f64 {
    (1..=p as u64).product::<u64>() as f64
}

/// `E H_p(Z)^2` for standard normal `Z`, which is `p!`.
pub fn hermite_sq_gaussian_mean(p: usize) -> Result<f64> {
    if p > MAX_FACTORIAL_ORDER {
        return Err(Error::OrderTooLarge {
            order: p,
            max: MAX_FACTORIAL_ORDER,
        });
    }
    Ok(factorial(p))
}
