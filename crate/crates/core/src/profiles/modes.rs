//! Fourier-mode inner solutions `(û, v̂)` of the linearised free-interface
//! system, and the residual of the one interface condition they leave
//! unused. That residual vanishes exactly when the front mode obeys the
//! compact third-order equation `b φ̂_t = l φ̂ + f (φ_y)²̂`.

use num_complex::Complex64;

use super::exp_poly::ExpPoly;
use super::relative_residual;
use crate::error::Result;
use crate::symbols::{nu_k, symbols_pre_rescale, ModelParams};

/// Coefficients of `v̂`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ModeCoefficients {
    /// `k = 0`: `v̂ = (φ̂_t/U)e^{Ux} + P x e^{Ux} + Q x² e^{Ux}` on `x < 0`,
    /// `φ̂_t/U` on `x > 0`.
    Mean { p: Complex64, q: Complex64 },
    /// `k ≥ 1`: `v̂ = c₁e^{νx} + A e^{Ux} + B x e^{Ux} + C x e^{νx}` on
    /// `x < 0`, `c₂ e^{(U−ν)x}` on `x ≥ 0`.
    Oscillatory {
        a: Complex64,
        b: Complex64,
        c: Complex64,
        c1: Complex64,
        c2: Complex64,
    },
}

/// Input coefficients of one mode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeInputs {
    pub phi_hat: Complex64,
    pub phi_hat_t: Complex64,
    /// Coefficient of `(φ_y)²`.
    pub grad_sq_hat: Complex64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModeSolution {
    pub k: usize,
    pub lambda: f64,
    pub nu: f64,
    pub u: f64,
    pub gamma: f64,
    pub inputs: ModeInputs,
    pub coefficients: ModeCoefficients,
    pub u_left: ExpPoly,
    pub v_left: ExpPoly,
    pub v_right: ExpPoly,
}

/// Boundary conditions at `x = 0` evaluated on a [`ModeSolution`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryResiduals {
    /// `|û(0⁻)|`.
    pub dirichlet: f64,
    /// `|[v̂]|`.
    pub v_jump: f64,
    /// `U v̂(0) − û_x(0⁻) − ½U (φ_y)²̂`, the condition left for the front.
    pub flux: Complex64,
    /// `[v̂_x] + α û_x(0⁻)`.
    pub vx_jump: Complex64,
    /// `e^{−Ux/2}û` bounded on `x ≤ 0` and `e^{−Ux/2}v̂` bounded on `ℝ`.
    pub decay: bool,
}

impl ModeSolution {
    fn alpha(&self) -> f64 {
        self.gamma + self.u.ln()
    }

    /// `û(x)` for `x ≤ 0`; zero for `x > 0`.
    pub fn u_hat(&self, x: f64) -> Complex64 {
        if x <= 0.0 {
            self.u_left.eval(x)
        } else {
            Complex64::new(0.0, 0.0)
        }
    }

    /// `v̂(x)`; the left branch is used for `x < 0`.
    pub fn v_hat(&self, x: f64) -> Complex64 {
        if x < 0.0 {
            self.v_left.eval(x)
        } else {
            self.v_right.eval(x)
        }
    }

    pub fn boundary_residuals(&self) -> BoundaryResiduals {
        let u = self.u;
        let ux0 = self.u_left.derivative().eval(0.0);
        let v0 = self.v_right.eval(0.0);
        let vx_jump = self.v_right.derivative().eval(0.0) - self.v_left.derivative().eval(0.0);
        let half = u / 2.0;
        BoundaryResiduals {
            dirichlet: self.u_left.eval(0.0).norm(),
            v_jump: (v0 - self.v_left.eval(0.0)).norm(),
            flux: v0 * u - ux0 - self.inputs.grad_sq_hat * half,
            vx_jump: vx_jump + ux0 * self.alpha(),
            decay: self.u_left.bounded_left_with_weight(half)
                && self.v_left.bounded_left_with_weight(half)
                && self.v_right.bounded_right_with_weight(half),
        }
    }

    /// `|flux| / (|U v̂(0)| + |û_x(0⁻)| + |½U (φ_y)²̂|)`.
    pub fn relative_flux_residual(&self) -> f64 {
        let u = self.u;
        let scale = (self.v_right.eval(0.0) * u).norm()
            + self.u_left.derivative().eval(0.0).norm()
            + (self.inputs.grad_sq_hat * (u / 2.0)).norm();
        let r = self.boundary_residuals().flux.norm();
        if scale > 0.0 {
            r / scale
        } else {
            r
        }
    }

    /// Largest relative residual of the three mode ODEs: the `û` equation
    /// and the `v̂` equation at each `x` in `samples` (all negative), and
    /// the homogeneous `v̂` equation at `−x`.
    pub fn interior_residual(&self, samples: &[f64]) -> f64 {
        let u = self.u;
        let lambda = self.lambda;
        let speed = -u * u.ln();
        let alpha = self.alpha();
        let ModeInputs {
            phi_hat,
            phi_hat_t,
            grad_sq_hat: n,
        } = self.inputs;

        let (ux, uxx) = (self.u_left.derivative(), self.u_left.nth_derivative(2));
        let (vx, vxx) = (self.v_left.derivative(), self.v_left.nth_derivative(2));
        let lap_u = &uxx - &(&self.u_left * lambda);
        let lap_v = &vxx - &(&self.v_left * lambda);

        let u_forcing = ExpPoly::new().term((n * u + phi_hat * lambda) * u, 0, u);
        let u_eq = &(&(&ux * u) - &lap_u) - &u_forcing;

        let v_forcing = ExpPoly::new()
            .term(phi_hat_t * u + n * (self.gamma * u * u), 0, u)
            .term(
                n * (self.gamma * u * u * u) + phi_hat * (u * u * self.gamma * lambda),
                1,
                u,
            );
        let v_eq = &(&(&(&(&ux * speed) - &lap_v) + &(&lap_u * alpha)) + &(&vx * u)) - &v_forcing;

        let right = &self.v_right;
        let r_eq = &(&(&right.derivative() * u) - &right.nth_derivative(2)) + &(right * lambda);

        samples.iter().fold(0.0f64, |acc, &x| {
            acc.max(relative_residual(&u_eq, x))
                .max(relative_residual(&v_eq, x))
                .max(relative_residual(&r_eq, -x))
        })
    }
}

pub fn mode_solution_build(
    k: usize,
    params: &ModelParams,
    phi_hat: Complex64,
    phi_hat_t: Complex64,
    grad_sq_hat: Complex64,
) -> Result<ModeSolution> {
    params.validate_physical()?;
    let u = params.u;
    let g = params.gamma;
    let ln_u = u.ln();
    let alpha = g + ln_u;
    let lambda = params.lambda(k);
    let nu = nu_k(u, lambda);
    let n = grad_sq_hat;
    let inputs = ModeInputs {
        phi_hat,
        phi_hat_t,
        grad_sq_hat,
    };

    let (coefficients, u_left, v_left, v_right) = if k == 0 {
        let p = -n * (g * u) - n * (u * ln_u) - phi_hat_t;
        let q = -n * (g * u * u);
        let u_left = ExpPoly::new().term(-n * u, 1, u);
        let v_left = ExpPoly::new().term(phi_hat_t / u, 0, u).term(p, 1, u).term(q, 2, u);
        let v_right = ExpPoly::constant(phi_hat_t / u);
        (ModeCoefficients::Mean { p, q }, u_left, v_left, v_right)
    } else {
        let amp = (n * u + phi_hat * lambda) * (u / lambda);
        let u_left = ExpPoly::new().term(amp, 0, u).term(-amp, 0, nu);
        let d = u - 2.0 * nu;
        let a = n * ((alpha + g) * u * u / lambda) + phi_hat * (alpha * u) + phi_hat_t * (u / lambda);
        let b = n * (g * u.powi(3) / lambda) + phi_hat * (g * u * u);
        let c = n * (g * u.powi(3) * nu / (lambda * d)) + phi_hat * (g * u * u * nu / d);
        let c2 = n
            * (g * u * u * (u - nu) / (lambda * d) + g * u.powi(3) / (lambda * d) + g * u.powi(3) / ((nu - u) * d * d))
            + phi_hat * (g * u * u / d + g * u * u * nu / (d * d))
            + phi_hat_t * (u * (u - nu) / (lambda * d));
        let c1 = c2 - a;
        let v_left = ExpPoly::new()
            .term(c1, 0, nu)
            .term(a, 0, u)
            .term(b, 1, u)
            .term(c, 1, nu);
        let v_right = ExpPoly::new().term(c2, 0, u - nu);
        (
            ModeCoefficients::Oscillatory { a, b, c, c1, c2 },
            u_left,
            v_left,
            v_right,
        )
    };

    Ok(ModeSolution {
        k,
        lambda,
        nu,
        u,
        gamma: g,
        inputs,
        coefficients,
        u_left,
        v_left,
        v_right,
    })
}

/// Residual of the unused interface condition, `U v̂(0) − û_x(0⁻) − ½U(φ_y)²̂`.
pub fn front_equation_residual(
    k: usize,
    params: &ModelParams,
    phi_hat: Complex64,
    phi_hat_t: Complex64,
    grad_sq_hat: Complex64,
) -> Result<Complex64> {
    Ok(mode_solution_build(k, params, phi_hat, phi_hat_t, grad_sq_hat)?
        .boundary_residuals()
        .flux)
}

/// `φ̂_t` from the compact front equation `(X U) φ̂_t = l φ̂ + f (φ_y)²̂`.
pub fn front_equation_phi_t(
    k: usize,
    params: &ModelParams,
    phi_hat: Complex64,
    grad_sq_hat: Complex64,
) -> Result<Complex64> {
    params.validate_physical()?;
    let s = symbols_pre_rescale(params, params.lambda(k));
    Ok((phi_hat * s.l + grad_sq_hat * s.f) / s.b)
}
