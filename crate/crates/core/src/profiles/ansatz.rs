//! Zeroth- and first-order profiles of the formal expansion in `ε`, and the
//! elimination that turns the first-order interface conditions into the
//! Kuramoto-Sivashinsky equation for `ψ⁰`.
//!
//! All derivative values of `ψ⁰` and `ψ¹` enter as pointwise scalars, so
//! these oracles do not depend on the solver they are used to check.

use super::exp_poly::ExpPoly;
use super::relative_residual;
use crate::error::{FrontError, Result};

/// Pointwise values of the expansion data at one `(τ, η)`.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct AnsatzInputs {
    pub psi0_eta: f64,
    pub psi0_etaeta: f64,
    pub psi0_eta4: f64,
    pub psi0_tau: f64,
    pub psi1_etaeta: f64,
    /// The free constant `v₁¹(0)`.
    pub v11_at_zero: f64,
}

impl AnsatzInputs {
    /// `ψ⁰_τ + ψ⁰_ηη + 4ψ⁰_ηηηη + ½(ψ⁰_η)²`.
    pub fn ks_residual(&self) -> f64 {
        self.psi0_tau + self.psi0_etaeta + 4.0 * self.psi0_eta4 + 0.5 * self.psi0_eta * self.psi0_eta
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZerothValues {
    pub u1_0: f64,
    pub v1_0: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FirstOrderCoeffs {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

/// Piecewise profile: `left` on `x < 0`, `right` on `x ≥ 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct Piecewise {
    pub left: ExpPoly,
    pub right: ExpPoly,
}

impl Piecewise {
    pub fn eval(&self, x: f64) -> f64 {
        if x < 0.0 {
            self.left.eval(x).re
        } else {
            self.right.eval(x).re
        }
    }
}

fn check_u(u: f64) -> Result<()> {
    if u > 0.0 && u < 1.0 {
        Ok(())
    } else {
        Err(FrontError::param("U", format!("must lie in (0, 1), got {u}")))
    }
}

/// `(u₁⁰, v₁⁰)` as functions of `x`, proportional to `ψ⁰_ηη`.
pub fn zeroth_order(u: f64, psi0_etaeta: f64) -> Result<(Piecewise, Piecewise)> {
    check_u(u)?;
    let p = psi0_etaeta;
    let u10 = Piecewise {
        left: ExpPoly::new().real_term(u * p, 1, u),
        right: ExpPoly::new(),
    };
    let v10 = Piecewise {
        left: ExpPoly::new()
            .real_term(p, 0, u)
            .real_term(u * u.ln() * p, 1, u)
            .real_term(u * u * p, 2, u),
        right: ExpPoly::new().real_term(p, 0, 0.0),
    };
    Ok((u10, v10))
}

pub fn ansatz_zeroth_profiles(u: f64, x: f64, psi0_etaeta: f64) -> Result<ZerothValues> {
    let (u10, v10) = zeroth_order(u, psi0_etaeta)?;
    Ok(ZerothValues {
        u1_0: u10.eval(x),
        v1_0: v10.eval(x),
    })
}

pub fn ansatz_first_order_coeffs(u: f64, d: &AnsatzInputs) -> Result<FirstOrderCoeffs> {
    check_u(u)?;
    let ln_u = u.ln();
    let p1sq = d.psi0_eta * d.psi0_eta;
    let a = u * ln_u * (d.psi1_etaeta - p1sq + d.psi0_eta4) - u * d.psi0_tau - u * p1sq - 3.0 * u * d.psi0_eta4;
    let b =
        u * u * (d.psi0_etaeta + d.psi1_etaeta - p1sq) - 0.5 * u * u * ln_u * d.psi0_eta4 + 1.5 * u * u * d.psi0_eta4;
    let c = -0.5 * u * u * u * d.psi0_eta4;
    Ok(FirstOrderCoeffs { a, b, c })
}

/// `(u₁¹, v₁¹)` as functions of `x`.
pub fn first_order(u: f64, d: &AnsatzInputs) -> Result<(Piecewise, Piecewise)> {
    let FirstOrderCoeffs { a, b, c } = ansatz_first_order_coeffs(u, d)?;
    let p1sq = d.psi0_eta * d.psi0_eta;
    let u11 = Piecewise {
        left: ExpPoly::new()
            .real_term(u * (d.psi0_eta4 - p1sq + d.psi1_etaeta), 1, u)
            .real_term(-0.5 * u * u * d.psi0_eta4, 2, u),
        right: ExpPoly::new(),
    };
    let v11 = Piecewise {
        left: ExpPoly::new()
            .real_term(d.v11_at_zero, 0, u)
            .real_term(a, 1, u)
            .real_term(b, 2, u)
            .real_term(c, 3, u),
        right: ExpPoly::new()
            .real_term(d.v11_at_zero, 0, 0.0)
            .real_term(u * d.psi0_eta4, 1, 0.0),
    };
    Ok((u11, v11))
}

/// Residuals of the zeroth-order problem.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZerothResiduals {
    /// Largest relative residual of the two ODEs on `x < 0` and the one on `x > 0`.
    pub interior: f64,
    /// `u₁⁰(0⁻)` and `[v₁⁰]`.
    pub continuity: f64,
    /// `(u₁⁰)_x(0) − U v₁⁰(0)`.
    pub flux: f64,
    /// `[(v₁⁰)_x] + (1 + ln U)(u₁⁰)_x(0)`; satisfied for every `ψ⁰`.
    pub enthalpy_jump: f64,
}

pub fn zeroth_order_residuals(u: f64, psi0_etaeta: f64, samples: &[f64]) -> Result<ZerothResiduals> {
    let (u10, v10) = zeroth_order(u, psi0_etaeta)?;
    let v = -u * u.ln();
    let ln_u = u.ln();
    let p = psi0_etaeta;
    let (ux, uxx) = (u10.left.derivative(), u10.left.nth_derivative(2));
    let (vx, vxx) = (v10.left.derivative(), v10.left.nth_derivative(2));
    let forcing1 = ExpPoly::new().real_term(-u * u * p, 0, u);
    let forcing2 = ExpPoly::new().real_term(-u * u * u * p, 1, u);
    let e1 = &(&(&ux * u) - &uxx) - &forcing1;
    let lhs2 = &(&(&(&ux * v) - &vxx) + &(&uxx * (1.0 + ln_u))) + &(&vx * u);
    let e2 = &lhs2 - &forcing2;
    let e3 = &v10.right.nth_derivative(2) - &(&v10.right.derivative() * u);

    let mut interior = 0.0f64;
    for &x in samples {
        interior = interior
            .max(relative_residual(&e1, x))
            .max(relative_residual(&e2, x))
            .max(relative_residual(&e3, -x));
    }
    let v_jump = v10.right.eval(0.0).re - v10.left.eval(0.0).re;
    let ux0 = ux.eval(0.0).re;
    let vx_jump = v10.right.derivative().eval(0.0).re - vx.eval(0.0).re;
    Ok(ZerothResiduals {
        interior,
        continuity: u10.left.eval(0.0).re.abs().max(v_jump.abs()),
        flux: ux0 - u * v10.left.eval(0.0).re,
        enthalpy_jump: vx_jump + (1.0 + ln_u) * ux0,
    })
}

/// Residuals of the first-order problem.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FirstOrderResiduals {
    pub interior: f64,
    pub continuity: f64,
    /// `U v₁¹(0) − (u₁¹)_x(0) − ½U(ψ⁰_η)²`.
    pub flux: f64,
    /// `[(v₁¹)_x] + (1 + ln U)(u₁¹)_x(0) + (u₁⁰)_x(0)`.
    pub enthalpy_jump: f64,
}

impl FirstOrderResiduals {
    /// Sum of the two interface residuals. The unknowns `v₁¹(0)` and
    /// `ψ¹_ηη` cancel, leaving `U` times the K-S residual of `ψ⁰`.
    pub fn solvability(&self) -> f64 {
        self.flux + self.enthalpy_jump
    }
}

pub fn first_order_residuals(u: f64, d: &AnsatzInputs, samples: &[f64]) -> Result<FirstOrderResiduals> {
    let (u10, _) = zeroth_order(u, d.psi0_etaeta)?;
    // The η-derivatives of the zeroth-order profiles: ψ⁰_ηη ↦ ψ⁰_ηηηη.
    let (u10_ee, v10_ee) = zeroth_order(u, d.psi0_eta4)?;
    let (u11, v11) = first_order(u, d)?;
    let v = -u * u.ln();
    let ln_u = u.ln();
    let p1sq = d.psi0_eta * d.psi0_eta;

    let (ux, uxx) = (u11.left.derivative(), u11.left.nth_derivative(2));
    let (vx, vxx) = (v11.left.derivative(), v11.left.nth_derivative(2));
    let u10xx = u10.left.nth_derivative(2);

    let forcing1 = ExpPoly::new().real_term((u * p1sq - u * d.psi1_etaeta) * u, 0, u);
    let e1 = &(&(&(&ux * u) - &uxx) - &(&u10_ee.left * (u * u))) - &forcing1;

    let forcing2 = ExpPoly::new()
        .real_term(u * u * d.psi0_tau + p1sq * u * u, 0, u)
        .real_term(
            p1sq * u.powi(3) - u.powi(3) * d.psi1_etaeta - u.powi(3) * d.psi0_etaeta,
            1,
            u,
        );
    let bracket = &uxx + &(&u10_ee.left * (u * u));
    let lhs2 =
        &(&(&(&(&(&ux * v) - &vxx) - &(&v10_ee.left * (u * u))) + &u10xx) + &(&bracket * (1.0 + ln_u))) + &(&vx * u);
    let e2 = &lhs2 - &forcing2;

    let e3 = &(&v11.right.nth_derivative(2) + &(&v10_ee.right * (u * u))) - &(&v11.right.derivative() * u);

    let mut interior = 0.0f64;
    for &x in samples {
        interior = interior
            .max(relative_residual(&e1, x))
            .max(relative_residual(&e2, x))
            .max(relative_residual(&e3, -x));
    }
    let v_jump = v11.right.eval(0.0).re - v11.left.eval(0.0).re;
    let ux0 = ux.eval(0.0).re;
    let vx_jump = v11.right.derivative().eval(0.0).re - vx.eval(0.0).re;
    Ok(FirstOrderResiduals {
        interior,
        continuity: u11.left.eval(0.0).re.abs().max(v_jump.abs()),
        flux: u * v11.left.eval(0.0).re - ux0 - 0.5 * u * p1sq,
        enthalpy_jump: vx_jump + (1.0 + ln_u) * ux0 + u10.left.derivative().eval(0.0).re,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profiles::chebyshev_samples;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn zeroth_interface_values() {
        let u = 0.6;
        let v = ansatz_zeroth_profiles(u, 0.0, 1.7).unwrap();
        assert_eq!(v.u1_0, 0.0);
        assert_relative_eq!(v.v1_0, 1.7, max_relative = 1e-15);
        let left = ansatz_zeroth_profiles(u, -1e-300, 1.7).unwrap();
        assert_relative_eq!(left.v1_0, 1.7, max_relative = 1e-15);
        let r = zeroth_order_residuals(u, 1.7, &chebyshev_samples(u, 20)).unwrap();
        assert!(r.interior < 1e-12, "{r:?}");
        assert!(r.continuity < 1e-15);
        assert!(r.flux.abs() < 1e-15);
        assert!(r.enthalpy_jump.abs() < 1e-14);
    }

    #[test]
    fn first_order_coefficients() {
        let zero = ansatz_first_order_coeffs(0.5, &AnsatzInputs::default()).unwrap();
        assert_eq!((zero.a, zero.b, zero.c), (0.0, 0.0, 0.0));
        let d = AnsatzInputs {
            psi0_eta4: 2.0,
            ..AnsatzInputs::default()
        };
        assert_relative_eq!(
            ansatz_first_order_coeffs(0.5, &d).unwrap().c,
            -0.125,
            max_relative = 1e-15
        );
        assert!(ansatz_first_order_coeffs(1.5, &d).is_err());
    }

    #[test]
    fn sine_solvability_example() {
        // Φ = sin η at η = 0.9 with Φ_τ = −3 sin η − ½cos²η.
        let eta: f64 = 0.9;
        let d = AnsatzInputs {
            psi0_eta: eta.cos(),
            psi0_etaeta: -eta.sin(),
            psi0_eta4: eta.sin(),
            psi0_tau: -3.0 * eta.sin() - 0.5 * eta.cos().powi(2),
            psi1_etaeta: 0.3,
            v11_at_zero: -1.1,
        };
        assert!(d.ks_residual().abs() < 1e-15);
    }

    proptest! {
        #[test]
        fn elimination_leaves_ks(
            u in 0.05f64..0.95,
            p1 in -3.0f64..3.0, p2 in -3.0f64..3.0, p4 in -3.0f64..3.0,
            pt in -3.0f64..3.0, q2 in -3.0f64..3.0, v0 in -3.0f64..3.0,
        ) {
            let d = AnsatzInputs {
                psi0_eta: p1, psi0_etaeta: p2, psi0_eta4: p4,
                psi0_tau: pt, psi1_etaeta: q2, v11_at_zero: v0,
            };
            let r = first_order_residuals(u, &d, &chebyshev_samples(u, 20)).unwrap();
            prop_assert!(r.interior < 1e-10, "{:?}", r);
            prop_assert!(r.continuity < 1e-14);
            let scale = 1.0 + p1 * p1 + p2.abs() + p4.abs() + pt.abs() + q2.abs() + v0.abs();
            prop_assert!((r.solvability() - u * d.ks_residual()).abs() < 1e-13 * scale);
            // The displayed linear forms of the two conditions.
            let v20 = -u * p4 + u * p1 * p1 - u * q2 + u * v0 - 0.5 * u * p1 * p1;
            let jump = u * q2 - u * v0 + u * pt + u * p2 + 5.0 * u * p4;
            prop_assert!((r.flux - v20).abs() < 1e-13 * scale);
            prop_assert!((r.enthalpy_jump - jump).abs() < 1e-13 * scale);
        }

        #[test]
        fn zeroth_order_holds_for_any_curvature(u in 0.05f64..0.95, p in -5.0f64..5.0) {
            let r = zeroth_order_residuals(u, p, &chebyshev_samples(u, 20)).unwrap();
            prop_assert!(r.interior < 1e-10);
            prop_assert!(r.flux.abs() < 1e-13 * (1.0 + p.abs()));
            prop_assert!(r.enthalpy_jump.abs() < 1e-13 * (1.0 + p.abs()));
        }
    }
}
