//! Closed-form verification objects: the planar traveling wave, the profiles
//! of the formal expansion in `ε`, the Fourier-mode inner solutions and the
//! spectral helpers built on the Kuramoto-Sivashinsky limit.

mod ansatz;
mod exp_poly;
mod modes;
mod traveling_wave;

use std::f64::consts::PI;

use num_complex::Complex64;

pub use ansatz::{
    ansatz_first_order_coeffs, ansatz_zeroth_profiles, first_order, first_order_residuals, zeroth_order,
    zeroth_order_residuals, AnsatzInputs, FirstOrderCoeffs, FirstOrderResiduals, Piecewise, ZerothResiduals,
    ZerothValues,
};
pub use exp_poly::{ExpPoly, ExpTerm};
pub use modes::{
    front_equation_phi_t, front_equation_residual, mode_solution_build, BoundaryResiduals, ModeCoefficients,
    ModeInputs, ModeSolution,
};
pub use traveling_wave::{traveling_wave_eval, TravelingWave, WaveResiduals, WaveValues};

use crate::error::Result;
use crate::spectral::SpectralField;

const UNDERFLOW_SCALE: f64 = 1e-290;

/// `|p(x)|` relative to the sum of the moduli of its terms; zero once the
/// terms have underflowed and no relative accuracy is left to measure.
pub(crate) fn relative_residual(p: &ExpPoly, x: f64) -> f64 {
    let scale = p.magnitude(x);
    if scale < UNDERFLOW_SCALE {
        0.0
    } else {
        p.eval(x).norm() / scale
    }
}

/// `n` Chebyshev points of the open interval `(−10/U, 0)`.
pub fn chebyshev_samples(u: f64, n: usize) -> Vec<f64> {
    let half = 5.0 / u;
    (0..n)
        .map(|j| -half + half * ((2 * j + 1) as f64 * PI / (2 * n) as f64).cos())
        .collect()
}

/// `‖Φ_τ + Φ_ηη + 4Φ_ηηηη + ½(Φ_η)²‖_{L²}`, with the square dealiased.
pub fn solvability_residual(phi: &SpectralField, phi_tau: &SpectralField) -> Result<f64> {
    phi.same_grid(phi_tau)?;
    let linear = &(phi_tau + &phi.derivative(2)) + &phi.derivative(4).scaled(4.0);
    let residual = &linear + &phi.nonlinear_square_of_derivative().scaled(0.5);
    Ok(residual.norm_l2())
}

/// `ρ = 𝓟(ζ) + υ`, with `𝓟` the zero-mean antiderivative of `ζ − ζ̄`.
///
/// The derivative of the result is `ζ` minus its mean; the mean of the
/// result is `υ`.
pub fn reconstruct_rho(zeta: &SpectralField, upsilon: f64) -> SpectralField {
    let grid = zeta.grid();
    let n_half = grid.n_half();
    let even = grid.n_modes() % 2 == 0;
    let kappa = 2.0 * PI / grid.period();
    zeta.map_modes(|k, c| {
        if k == 0 {
            Complex64::new(upsilon, 0.0)
        } else if even && k == n_half {
            Complex64::new(0.0, 0.0)
        } else {
            c / Complex64::new(0.0, kappa * k as f64)
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::{Grid, GridConfig};
    use approx::assert_relative_eq;

    fn grid(n: usize, period: f64) -> Grid {
        Grid::new(GridConfig::new(n, period).unwrap()).unwrap()
    }

    #[test]
    fn samples_lie_in_open_interval() {
        let s = chebyshev_samples(0.5, 20);
        assert_eq!(s.len(), 20);
        assert!(s.iter().all(|&x| x < 0.0 && x > -20.0));
    }

    #[test]
    fn solvability_residual_cases() {
        let g = grid(64, 2.0 * PI);
        let constant = g.sample(|_| 3.0);
        assert_eq!(solvability_residual(&constant, &g.zeros()).unwrap(), 0.0);
        // Exact coefficients: sampling noise would be amplified by ∂⁴.
        let mut c = vec![Complex64::new(0.0, 0.0); 33];
        c[1] = Complex64::new(0.0, -0.5);
        let phi = g.from_coefficients(c.clone()).unwrap();
        c[0] = Complex64::new(-0.25, 0.0);
        c[1] = Complex64::new(0.0, 1.5);
        c[2] = Complex64::new(-0.125, 0.0);
        let phi_tau = g.from_coefficients(c).unwrap();
        assert!(solvability_residual(&phi, &phi_tau).unwrap() < 1e-14);
        let wrong = g.sample(|x| 3.0 * x.sin() - 0.5 * x.cos().powi(2));
        assert!(solvability_residual(&phi, &wrong).unwrap() > 1.0);
        assert!(solvability_residual(&phi, &grid(32, 2.0 * PI).zeros()).is_err());
    }

    #[test]
    fn rho_from_constant_and_cosine() {
        let g = grid(64, 2.0 * PI);
        let rho = reconstruct_rho(&g.zeros(), 1.5);
        assert!(rho.to_physical().iter().all(|&v| (v - 1.5).abs() < 1e-15));
        let rho = reconstruct_rho(&g.sample(f64::cos), 0.0);
        let nodes = g.nodes();
        for (x, v) in nodes.iter().zip(rho.to_physical()) {
            assert!((v - x.sin()).abs() < 1e-13);
        }
    }

    #[test]
    fn rho_matches_quadrature_antiderivative() {
        // 𝓟(ζ)(η) = ∫_{-ℓ/2}^{η} ζ − (1/ℓ)∫_{-ℓ/2}^{ℓ/2} ∫_{-ℓ/2}^{s} ζ ds, computed by
        // the exact integrals of a trigonometric polynomial on a period 5.
        let ell = 5.0;
        let g = grid(64, ell);
        let w = 2.0 * PI / ell;
        let zeta_fn = |x: f64| 0.7 * (w * x).cos() - 1.3 * (3.0 * w * x).sin() + 0.4 * (2.0 * w * x + 0.3).cos();
        let prim = |x: f64| {
            0.7 * (w * x).sin() / w
                + 1.3 * (3.0 * w * x).cos() / (3.0 * w)
                + 0.4 * (2.0 * w * x + 0.3).sin() / (2.0 * w)
        };
        let lower = prim(-ell / 2.0);
        // Mean of x ↦ prim(x) − prim(−ℓ/2): trigonometric terms average to zero.
        let p_of = |x: f64| (prim(x) - lower) - (0.0 - lower);
        let rho = reconstruct_rho(&g.sample(zeta_fn), 0.25);
        for (x, v) in g.nodes().iter().zip(rho.to_physical()) {
            assert_relative_eq!(v, p_of(*x) + 0.25, epsilon = 1e-12);
        }
        let back = rho.derivative(1);
        let zeta = g.sample(zeta_fn);
        for k in 0..=g.n_half() {
            assert!((back.coeff(k) - zeta.zero_mean().coeff(k)).norm() < 1e-13);
        }
    }
}
