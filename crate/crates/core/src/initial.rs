//! Initial fronts on the `2π`-periodic grid.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{FrontError, Result};
use crate::spectral::{Grid, SpectralField};

/// Named preset or explicit one-sided Fourier coefficients `[k, re, im]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Psi0Spec {
    Preset(Preset),
    Coefficients(Vec<(usize, f64, f64)>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Preset {
    /// `sin x`.
    Sin,
    /// `cos x`.
    Cos,
    /// `0.1 (cos x + cos 2x + cos 3x)`.
    Tri,
}

impl Psi0Spec {
    pub fn sin() -> Self {
        Psi0Spec::Preset(Preset::Sin)
    }

    pub fn cos() -> Self {
        Psi0Spec::Preset(Preset::Cos)
    }

    pub fn tri() -> Self {
        Psi0Spec::Preset(Preset::Tri)
    }

    /// Builds the field from exact coefficients (no sampling error).
    pub fn build(&self, grid: &Grid) -> Result<SpectralField> {
        let mut coeffs = vec![Complex64::new(0.0, 0.0); grid.n_half() + 1];
        let mut set = |k: usize, c: Complex64| -> Result<()> {
            let slot = coeffs
                .get_mut(k)
                .ok_or_else(|| FrontError::param("psi0", format!("mode {k} exceeds n_modes/2 = {}", grid.n_half())))?;
            *slot += c;
            Ok(())
        };
        match self {
            Psi0Spec::Preset(Preset::Sin) => set(1, Complex64::new(0.0, -0.5))?,
            Psi0Spec::Preset(Preset::Cos) => set(1, Complex64::new(0.5, 0.0))?,
            Psi0Spec::Preset(Preset::Tri) => {
                for k in 1..=3 {
                    set(k, Complex64::new(0.05, 0.0))?;
                }
            }
            Psi0Spec::Coefficients(list) => {
                for &(k, re, im) in list {
                    if !(re.is_finite() && im.is_finite()) {
                        return Err(FrontError::param(
                            "psi0",
                            format!("coefficient of mode {k} is not finite"),
                        ));
                    }
                    set(k, Complex64::new(re, im))?;
                }
            }
        }
        grid.from_coefficients(coeffs)
    }
}

impl fmt::Display for Psi0Spec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Psi0Spec::Preset(Preset::Sin) => write!(f, "sin"),
            Psi0Spec::Preset(Preset::Cos) => write!(f, "cos"),
            Psi0Spec::Preset(Preset::Tri) => write!(f, "tri"),
            Psi0Spec::Coefficients(list) => write!(f, "{} coefficients", list.len()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::GridConfig;

    fn grid() -> Grid {
        Grid::new(GridConfig::periodic_2pi(32).unwrap()).unwrap()
    }

    #[test]
    fn presets_match_samples() {
        let g = grid();
        let cases: [(Psi0Spec, fn(f64) -> f64); 3] = [
            (Psi0Spec::sin(), f64::sin),
            (Psi0Spec::cos(), f64::cos),
            (Psi0Spec::tri(), |x| 0.1 * (x.cos() + (2.0 * x).cos() + (3.0 * x).cos())),
        ];
        for (spec, f) in cases {
            let field = spec.build(&g).unwrap();
            for (x, v) in g.nodes().iter().zip(field.to_physical()) {
                assert!((v - f(*x)).abs() < 1e-14, "{spec}");
            }
        }
    }

    #[test]
    fn explicit_coefficients() {
        let g = grid();
        let spec = Psi0Spec::Coefficients(vec![(0, 1.0, 0.0), (2, 0.0, -0.5)]);
        let field = spec.build(&g).unwrap();
        for (x, v) in g.nodes().iter().zip(field.to_physical()) {
            assert!((v - 1.0 - (2.0 * x).sin()).abs() < 1e-14);
        }
        assert!(Psi0Spec::Coefficients(vec![(17, 1.0, 0.0)]).build(&g).is_err());
        assert!(Psi0Spec::Coefficients(vec![(1, f64::NAN, 0.0)]).build(&g).is_err());
    }

    #[test]
    fn serde_forms() {
        let s: Psi0Spec = serde_json::from_str("\"tri\"").unwrap();
        assert_eq!(s, Psi0Spec::tri());
        let c: Psi0Spec = serde_json::from_str("[[1, 0.5, 0.0], [3, 0.0, 0.1]]").unwrap();
        assert_eq!(c, Psi0Spec::Coefficients(vec![(1, 0.5, 0.0), (3, 0.0, 0.1)]));
        assert!(serde_json::from_str::<Psi0Spec>("\"square\"").is_err());
    }
}
