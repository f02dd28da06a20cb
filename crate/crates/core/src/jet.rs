//! Truncated Taylor series ("jets") for exact high-order derivatives of
//! composite closed-form expressions.
//!
//! A jet of order `n` at a point `x0` holds `c_k = g^{(k)}(x0) / k!` for
//! `k = 0..=n`. Arithmetic propagates these coefficients exactly up to rounding.

use std::ops::{Add, Mul, Sub};

#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Jet {
    c: Vec<f64>,
}

impl Jet {
    pub fn constant(value: f64, order: usize) -> Self {
        let mut c = vec![0.0; order + 1];
        c[0] = value;
        Jet { c }
    }

    /// The identity function `x` expanded at `x0`.
    pub fn variable(x0: f64, order: usize) -> Self {
        let mut c = vec![0.0; order + 1];
        c[0] = x0;
        if order >= 1 {
            c[1] = 1.0;
        }
        Jet { c }
    }

    pub fn value(&self) -> f64 {
        self.c[0]
    }

    /// `g^{(k)}(x0)`.
    pub fn derivative(&self, k: usize) -> f64 {
        let fact: f64 = (1..=k).map(|i| i as f64).product();
        self.c[k] * fact
    }

    pub fn scale(&self, s: f64) -> Jet {
        Jet {
            c: self.c.iter().map(|v| v * s).collect(),
        }
    }

    pub fn add_scalar(&self, s: f64) -> Jet {
        let mut out = self.clone();
        out.c[0] += s;
        out
    }

    pub fn recip(&self) -> Jet {
        let n = self.c.len();
        let mut r = vec![0.0; n];
        r[0] = 1.0 / self.c[0];
        for k in 1..n {
            let s: f64 = (1..=k).map(|j| self.c[j] * r[k - j]).sum();
            r[k] = -s / self.c[0];
        }
        Jet { c: r }
    }

    pub fn div(&self, other: &Jet) -> Jet {
        self * &other.recip()
    }

    pub fn exp(&self) -> Jet {
        let n = self.c.len();
        let mut g = vec![0.0; n];
        g[0] = self.c[0].exp();
        for k in 1..n {
            let s: f64 = (1..=k)
                .map(|j| j as f64 * self.c[j] * g[k - j])
                .sum();
            g[k] = s / k as f64;
        }
        Jet { c: g }
    }

    /// Natural log; requires a positive constant term.
    pub fn ln(&self) -> Jet {
        let n = self.c.len();
        let mut h = vec![0.0; n];
        h[0] = self.c[0].ln();
        for k in 1..n {
            let s: f64 = (1..k)
                .map(|j| j as f64 * h[j] * self.c[k - j])
                .sum();
            h[k] = (self.c[k] - s / k as f64) / self.c[0];
        }
        Jet { c: h }
    }

    /// `self^a` for a positive constant term.
    pub fn powf(&self, a: f64) -> Jet {
        self.ln().scale(a).exp()
    }
}

impl Add for &Jet {
    type Output = Jet;
    fn add(self, rhs: &Jet) -> Jet {
        Jet {
            c: self.c.iter().zip(&rhs.c).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &Jet {
    type Output = Jet;
    fn sub(self, rhs: &Jet) -> Jet {
        Jet {
            c: self.c.iter().zip(&rhs.c).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Mul for &Jet {
    type Output = Jet;
    fn mul(self, rhs: &Jet) -> Jet {
        let n = self.c.len().min(rhs.c.len());
        let c = (0..n)
            .map(|k| (0..=k).map(|j| self.c[j] * rhs.c[k - j]).sum())
            .collect();
        Jet { c }
    }
}
