use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

/// One term `c · xⁿ · e^{r x}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpTerm {
    pub coeff: Complex64,
    pub power: u32,
    pub rate: f64,
}

/// Finite sum of [`ExpTerm`]s, closed under differentiation. Every profile
/// of the mode and Ansatz oracles has this shape, so derivatives are exact.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ExpPoly {
    terms: Vec<ExpTerm>,
}

impl ExpPoly {
    pub fn new() -> Self {
        ExpPoly::default()
    }

    pub fn constant(c: Complex64) -> Self {
        ExpPoly::new().term(c, 0, 0.0)
    }

    /// Appends `c · xⁿ · e^{r x}`.
    pub fn term(mut self, coeff: Complex64, power: u32, rate: f64) -> Self {
        self.terms.push(ExpTerm { coeff, power, rate });
        self
    }

    /// Appends a real-coefficient term.
    pub fn real_term(self, coeff: f64, power: u32, rate: f64) -> Self {
        self.term(Complex64::new(coeff, 0.0), power, rate)
    }

    pub fn terms(&self) -> &[ExpTerm] {
        &self.terms
    }

    pub fn eval(&self, x: f64) -> Complex64 {
        self.terms
            .iter()
            .map(|t| t.coeff * x.powi(t.power as i32) * (t.rate * x).exp())
            .sum()
    }

    /// Sum of the moduli of the individual terms at `x`, a natural scale
    /// for relative residuals.
    pub fn magnitude(&self, x: f64) -> f64 {
        self.terms
            .iter()
            .map(|t| t.coeff.norm() * x.abs().powi(t.power as i32) * (t.rate * x).exp())
            .sum()
    }

    pub fn derivative(&self) -> ExpPoly {
        let mut out = ExpPoly::new();
        for t in &self.terms {
            if t.power > 0 {
                out.terms.push(ExpTerm {
                    coeff: t.coeff * t.power as f64,
                    power: t.power - 1,
                    rate: t.rate,
                });
            }
            if t.rate != 0.0 {
                out.terms.push(ExpTerm {
                    coeff: t.coeff * t.rate,
                    power: t.power,
                    rate: t.rate,
                });
            }
        }
        out
    }

    pub fn nth_derivative(&self, order: u32) -> ExpPoly {
        (0..order).fold(self.clone(), |p, _| p.derivative())
    }

    /// True when `e^{-s x} · p(x)` stays bounded as `x → −∞`: every nonzero
    /// term needs `r > s`, or `r = s` with no polynomial growth.
    pub fn bounded_left_with_weight(&self, s: f64) -> bool {
        self.terms
            .iter()
            .filter(|t| t.coeff.norm() > 0.0)
            .all(|t| t.rate > s || (t.rate == s && t.power == 0))
    }

    /// True when `e^{-s x} · p(x)` stays bounded as `x → +∞`.
    pub fn bounded_right_with_weight(&self, s: f64) -> bool {
        self.terms
            .iter()
            .filter(|t| t.coeff.norm() > 0.0)
            .all(|t| t.rate < s || (t.rate == s && t.power == 0))
    }
}

impl Add for &ExpPoly {
    type Output = ExpPoly;
    fn add(self, rhs: &ExpPoly) -> ExpPoly {
        let mut terms = self.terms.clone();
        terms.extend_from_slice(&rhs.terms);
        ExpPoly { terms }
    }
}

impl Sub for &ExpPoly {
    type Output = ExpPoly;
    fn sub(self, rhs: &ExpPoly) -> ExpPoly {
        self + &(rhs * -1.0)
    }
}

impl Mul<Complex64> for &ExpPoly {
    type Output = ExpPoly;
    fn mul(self, c: Complex64) -> ExpPoly {
        ExpPoly {
            terms: self
                .terms
                .iter()
                .map(|t| ExpTerm {
                    coeff: t.coeff * c,
                    ..*t
                })
                .collect(),
        }
    }
}

impl Mul<f64> for &ExpPoly {
    type Output = ExpPoly;
    fn mul(self, c: f64) -> ExpPoly {
        self * Complex64::new(c, 0.0)
    }
}
