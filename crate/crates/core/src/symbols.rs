//! Symbols of the pseudo-differential operators acting on the front, the
//! spectrum of the linearised operator and its critical threshold.
//!
//! Two families are provided:
//!
//! * the physical symbols in the strip of width `ℓ` with flow intensity `U`
//!   ([`symbols_pre_rescale`]), built on `X_k = √(U² + 4λ_k)`;
//! * the rescaled ε-symbols ([`symbols_rescaled`]), built on
//!   `X_{ε,k} = √(1 + 4ελ_k)`, which drive the time stepper through a
//!   precomputed [`SymbolTable`].
//!
//! The symbol formulas stay well defined at `γ = 1/2`, where the asymptotic
//! split of `a_k` used for sectoriality degenerates; nothing here depends on
//! that split.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{FrontError, Result};
use crate::spectral::{GridConfig, SpectralField};

/// `|a_k|` below this is reported as [`Stability::Critical`].
pub const CRITICAL_TOLERANCE: f64 = 1e-12;

/// Physical and rescaled parameters of the model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    /// Flow intensity `U ∈ (0, 1)`.
    pub u: f64,
    /// Reduced parameter `γ = α − ln U`.
    pub gamma: f64,
    /// Small parameter of the rescaled equation.
    pub eps: f64,
    /// Bifurcation parameter of the `2π`-periodic scheme.
    pub beta: f64,
    /// Strip width.
    pub ell: f64,
    /// Time step of the scheme.
    pub dt: f64,
}

impl Default for ModelParams {
    fn default() -> Self {
        ModelParams {
            u: 0.5,
            gamma: 1.0,
            eps: 0.0,
            beta: 10.0,
            ell: 8.0 * PI,
            dt: 1e-4,
        }
    }
}

impl ModelParams {
    /// Invariants needed by the rescaled time stepper.
    pub fn validate_scheme(&self) -> Result<()> {
        if !(self.eps.is_finite() && self.eps >= 0.0) {
            return Err(FrontError::param("eps", format!("must be >= 0, got {}", self.eps)));
        }
        if !(self.beta.is_finite() && self.beta > 0.0) {
            return Err(FrontError::param("beta", format!("must be > 0, got {}", self.beta)));
        }
        if !(self.dt.is_finite() && self.dt > 0.0) {
            return Err(FrontError::param("dt", format!("must be > 0, got {}", self.dt)));
        }
        Ok(())
    }

    /// Invariants needed by the pre-rescaling symbols and the stability analysis.
    pub fn validate_physical(&self) -> Result<()> {
        if !(self.u > 0.0 && self.u < 1.0) {
            return Err(FrontError::param("U", format!("must lie in (0, 1), got {}", self.u)));
        }
        if !(self.ell.is_finite() && self.ell > 0.0) {
            return Err(FrontError::param("ell", format!("must be > 0, got {}", self.ell)));
        }
        if !self.gamma.is_finite() {
            return Err(FrontError::param("gamma", "must be finite"));
        }
        Ok(())
    }

    /// `λ_k(ℓ) = (2πk/ℓ)²`.
    pub fn lambda(&self, k: usize) -> f64 {
        let kappa = 2.0 * PI * k as f64 / self.ell;
        kappa * kappa
    }
}

/// `X_k = √(U² + 4λ)`.
pub fn x_k(u: f64, lambda: f64) -> f64 {
    (u * u + 4.0 * lambda).sqrt()
}

/// `X_{ε,k} = √(1 + 4ελ)`.
pub fn x_eps_k(eps: f64, lambda: f64) -> f64 {
    (1.0 + 4.0 * eps * lambda).sqrt()
}

/// `ν_k = U/2 + X_k/2`, the decay rate of the inner temperature mode.
pub fn nu_k(u: f64, lambda: f64) -> f64 {
    0.5 * u + 0.5 * x_k(u, lambda)
}

/// Symbols of the front equation in physical variables at one wavenumber.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalSymbols {
    /// `b = X U`, the operator applied to `φ_t`.
    pub b: f64,
    /// `l = −4λ² + (γ − 1)λU²`.
    pub l: f64,
    /// `f = ¼(X³ − 3UX² − 4γU²X + 4γU³)`, acting on `(φ_y)²`.
    pub f: f64,
    /// Eigenvalue `a = (U² − X²)(X² − γU²) / (4UX)` of the linear part.
    pub a: f64,
    /// `m = (X³ − 3UX² − 4γU²X + 4γU³) / (4UX)`.
    pub m: f64,
    pub nu: f64,
}

pub fn symbols_pre_rescale(params: &ModelParams, lambda: f64) -> PhysicalSymbols {
    let u = params.u;
    let gamma = params.gamma;
    let x = x_k(u, lambda);
    let x2 = x * x;
    let cubic = x2 * x - 3.0 * u * x2 - 4.0 * gamma * u * u * x + 4.0 * gamma * u * u * u;
    PhysicalSymbols {
        b: x * u,
        l: -4.0 * lambda * lambda + (gamma - 1.0) * lambda * u * u,
        f: 0.25 * cubic,
        a: (u * u - x2) * (x2 - gamma * u * u) / (4.0 * u * x),
        m: cubic / (4.0 * u * x),
        nu: nu_k(u, lambda),
    }
}

/// Symbols of the rescaled fourth-order equation at one wavenumber.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RescaledSymbols {
    /// `b_ε = X_ε`.
    pub b_eps: f64,
    /// `s = −λ(4λ − 1)`.
    pub s: f64,
    /// `f_ε = ¼(X³ − 3X² − 4(1+ε)X + 4 + 4ε)`.
    pub f_eps: f64,
    /// `h_ε = (X_ε − 1)/ε`, extended continuously to `ε = 0`.
    pub h_eps: f64,
    /// `m_ε = (X³ − 3X² − 4(1+ε)X + 6 + 4ε)/(4ε)`, extended continuously to `ε = 0`.
    pub m_eps: f64,
}

pub fn symbols_rescaled(eps: f64, lambda: f64) -> RescaledSymbols {
    let x = x_eps_k(eps, lambda);
    let x2 = x * x;
    // h = (X − 1)/ε = 4λ/(X + 1) with no difference quotient.
    let h = 4.0 * lambda / (x + 1.0);
    // With d = X − 1 = εh, the numerator of m factors as d(d² − 7 − 4ε).
    let d = eps * h;
    let m = 0.25 * h * (d * d - 7.0 - 4.0 * eps);
    RescaledSymbols {
        b_eps: x,
        s: -lambda * (4.0 * lambda - 1.0),
        f_eps: 0.25 * (x2 * x - 3.0 * x2 - 4.0 * (1.0 + eps) * x + 4.0 + 4.0 * eps),
        h_eps: h,
        m_eps: m,
    }
}

/// `γ_c = 1 + 16π² / (ℓ² U²)`.
pub fn gamma_critical(ell: f64, u: f64) -> f64 {
    1.0 + 16.0 * PI * PI / (ell * ell * u * u)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Stability {
    Stable,
    Unstable,
    Critical,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StabilityReport {
    pub gamma_c: f64,
    /// `λ_k` for `k = 0 ..= k_max`.
    pub lambdas: Vec<f64>,
    /// `a_k` for `k = 0 ..= k_max`.
    pub eigenvalues: Vec<f64>,
    pub classification: Stability,
    /// Index `k ≥ 1` of the largest `a_k`.
    pub most_unstable_k: usize,
}

impl StabilityReport {
    /// CSV with header `k,lambda_k,a_k`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("k,lambda_k,a_k\n");
        for (k, (lambda, a)) in self.lambdas.iter().zip(&self.eigenvalues).enumerate() {
            out.push_str(&format!("{k},{lambda:.16e},{a:.16e}\n"));
        }
        out
    }
}

/// Spectrum `a_0 ..= a_{k_max}` of the linearised operator and the sign
/// classification of the null front.
pub fn spectrum_report(params: &ModelParams, k_max: usize) -> Result<StabilityReport> {
    params.validate_physical()?;
    if k_max < 1 {
        return Err(FrontError::param("k_max", "must be at least 1"));
    }
    let lambdas: Vec<f64> = (0..=k_max).map(|k| params.lambda(k)).collect();
    let mut eigenvalues: Vec<f64> = lambdas
        .iter()
        .map(|&lambda| symbols_pre_rescale(params, lambda).a)
        .collect();
    // X_0 = √(U²) = U exactly in IEEE arithmetic; pin it regardless.
    eigenvalues[0] = 0.0;

    let (most_unstable_k, _) =
        eigenvalues.iter().enumerate().skip(1).fold(
            (1, f64::NEG_INFINITY),
            |best, (k, &a)| if a > best.1 { (k, a) } else { best },
        );
    let tail = &eigenvalues[1..];
    let classification = if tail.iter().any(|&a| a > CRITICAL_TOLERANCE) {
        Stability::Unstable
    } else if tail.iter().any(|&a| a.abs() <= CRITICAL_TOLERANCE) {
        Stability::Critical
    } else {
        Stability::Stable
    };

    Ok(StabilityReport {
        gamma_c: gamma_critical(params.ell, params.u),
        lambdas,
        eigenvalues,
        classification,
        most_unstable_k,
    })
}

/// Spectral projection onto the kernel of the linear operator: the mean.
pub fn projection_mean(field: &SpectralField) -> f64 {
    field.mean()
}

/// Per-mode coefficients of the semi-implicit update at fixed `(ε, β, Δt)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymbolTable {
    pub eps: f64,
    pub beta: f64,
    pub dt: f64,
    pub lambda: Vec<f64>,
    /// `b_{ε,k} = X_{ε,k}`.
    pub b_eps: Vec<f64>,
    /// Linear symbol of the scheme, `βλ_k − 4λ_k²` (equal to `s_k` at `β = 1`).
    pub linear: Vec<f64>,
    pub f_eps: Vec<f64>,
    /// `(βΔt/4)(X³ − 3X² − 4(1+ε)(X − 1))`, multiplying the nonlinear term.
    pub nonlinear_gain: Vec<f64>,
    /// `b_{ε,k} + 4λ_k²Δt − βλ_kΔt`.
    pub denominator: Vec<f64>,
}

impl SymbolTable {
    /// Tabulates every mode `k = 0 ..= N/2`, including those above the
    /// dealiasing cutoff, and rejects any nonpositive denominator.
    pub fn new(grid: &GridConfig, eps: f64, beta: f64, dt: f64) -> Result<Self> {
        ModelParams {
            eps,
            beta,
            dt,
            ..ModelParams::default()
        }
        .validate_scheme()?;
        let n = grid.n_half() + 1;
        let mut table = SymbolTable {
            eps,
            beta,
            dt,
            lambda: Vec::with_capacity(n),
            b_eps: Vec::with_capacity(n),
            linear: Vec::with_capacity(n),
            f_eps: Vec::with_capacity(n),
            nonlinear_gain: Vec::with_capacity(n),
            denominator: Vec::with_capacity(n),
        };
        let gain_scale = beta * dt / 4.0;
        for k in 0..n {
            let lambda = grid.lambda(k);
            let x = x_eps_k(eps, lambda);
            let x2 = x * x;
            let bracket = x2 * x - 3.0 * x2 - 4.0 * (1.0 + eps) * (x - 1.0);
            let denominator = x + 4.0 * lambda * lambda * dt - beta * lambda * dt;
            if !(denominator > 0.0) {
                return Err(FrontError::NonPositiveDenominator { k, value: denominator });
            }
            table.lambda.push(lambda);
            table.b_eps.push(x);
            table.linear.push(beta * lambda - 4.0 * lambda * lambda);
            table.f_eps.push(symbols_rescaled(eps, lambda).f_eps);
            table.nonlinear_gain.push(gain_scale * bracket);
            table.denominator.push(denominator);
        }
        Ok(table)
    }

    pub fn len(&self) -> usize {
        self.lambda.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lambda.is_empty()
    }

    /// Per-step amplification `b/(b + 4λ²Δt − βλΔt)` of mode `k` with the
    /// nonlinearity switched off.
    pub fn linear_amplification(&self, k: usize) -> f64 {
        self.b_eps[k] / self.denominator[k]
    }
}
