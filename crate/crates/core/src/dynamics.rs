//! Semi-implicit pseudo-spectral time stepping of the rescaled front equation
//! on `[0, 2π)`, and the changes of variables connecting the physical front,
//! the rescaled front and the `2π`-periodic scheme.
//!
//! One step advances every mode `k` by
//!
//! ```text
//! ψ̂ₖⁿ⁺¹ = [ b_k ψ̂ₖⁿ + g_k N̂ₖⁿ ] / [ b_k + 4λ_k²Δt − βλ_kΔt ]
//! ```
//!
//! with `b_k = √(1 + 4ελ_k)`, `g_k = (βΔt/4)(b³ − 3b² − 4(1+ε)(b − 1))` and
//! `N̂ⁿ` the dealiased coefficients of `(ψ_x)²` at the old level. Linear
//! terms are implicit (backward Euler), the nonlinearity explicit, and the
//! mean is evolved along with every other mode. At `ε = 0` the update is
//! the standard semi-implicit Kuramoto-Sivashinsky step.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{FrontError, Result};
use crate::spectral::{Grid, SpectralField};
use crate::symbols::{ModelParams, SymbolTable};

pub const DEFAULT_DT: f64 = 1e-4;
pub const DEFAULT_SNAPSHOT_STRIDE: usize = 100;
pub const DEFAULT_BLOWUP_BOUND: f64 = 1e6;

/// Immutable single-step propagator.
#[derive(Debug, Clone)]
pub struct Stepper {
    grid: Grid,
    params: ModelParams,
    table: SymbolTable,
}

impl Stepper {
    /// Fails when a parameter is out of range or some scheme denominator is
    /// not positive.
    pub fn new(grid: &Grid, params: ModelParams) -> Result<Self> {
        params.validate_scheme()?;
        let table = SymbolTable::new(grid.config(), params.eps, params.beta, params.dt)?;
        Ok(Stepper {
            grid: grid.clone(),
            params,
            table,
        })
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    pub fn table(&self) -> &SymbolTable {
        &self.table
    }

    pub fn dt(&self) -> f64 {
        self.params.dt
    }

    /// One backward-Euler / explicit-nonlinearity step.
    pub fn step(&self, state: &SpectralField) -> Result<SpectralField> {
        if state.grid() != &self.grid {
            return Err(FrontError::GridMismatch);
        }
        let nonlinear = state.nonlinear_square_of_derivative();
        let mut next = state.clone();
        self.advance(state, &nonlinear, &mut next);
        if next.coeffs().iter().any(|c| !(c.re.is_finite() && c.im.is_finite())) {
            return Err(FrontError::NonFinite { step: 0, t: 0.0 });
        }
        Ok(next)
    }

    fn advance(&self, state: &SpectralField, nonlinear: &SpectralField, next: &mut SpectralField) {
        let table = &self.table;
        for (k, out) in next.coeffs_mut().iter_mut().enumerate() {
            let psi: Complex64 = state.coeff(k);
            let n: Complex64 = nonlinear.coeff(k);
            *out = (psi * table.b_eps[k] + n * table.nonlinear_gain[k]) / table.denominator[k];
        }
    }
}

/// Scalar diagnostics recorded after every step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Diagnostics {
    pub t: f64,
    pub l2_norm: f64,
    pub sup_norm: f64,
    pub mean: f64,
    /// `L²` norm of the field with its mean removed.
    pub zero_mean_l2: f64,
    /// Sup norm of the field with its mean removed.
    pub zero_mean_sup: f64,
}

impl Diagnostics {
    pub fn of(field: &SpectralField, t: f64) -> Self {
        let mean = field.mean();
        let nodal = field.to_physical();
        let (sup, zero_mean_sup) = nodal
            .iter()
            .fold((0.0f64, 0.0f64), |(s, z), &v| (s.max(v.abs()), z.max((v - mean).abs())));
        Diagnostics {
            t,
            l2_norm: field.norm_l2(),
            sup_norm: sup,
            mean,
            zero_mean_l2: field.zero_mean().norm_l2(),
            zero_mean_sup,
        }
    }
}

/// Snapshots every `stride` steps plus per-step diagnostics.
#[derive(Debug, Clone)]
pub struct Trajectory {
    /// Times of the snapshots, strictly increasing.
    pub times: Vec<f64>,
    pub snapshots: Vec<SpectralField>,
    /// One record per step, starting with the initial state.
    pub diagnostics: Vec<Diagnostics>,
    pub stride: usize,
    pub dt: f64,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.snapshots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.snapshots.is_empty()
    }

    pub fn last(&self) -> Option<&SpectralField> {
        self.snapshots.last()
    }

    pub fn final_diagnostics(&self) -> Option<&Diagnostics> {
        self.diagnostics.last()
    }
}

/// Options of [`simulate_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimulationOptions {
    pub t_final: f64,
    pub snapshot_stride: usize,
    /// Abort once the sup norm exceeds this value.
    pub blowup_bound: f64,
}

impl SimulationOptions {
    pub fn new(t_final: f64) -> Self {
        SimulationOptions {
            t_final,
            snapshot_stride: DEFAULT_SNAPSHOT_STRIDE,
            blowup_bound: DEFAULT_BLOWUP_BOUND,
        }
    }

    pub fn with_stride(mut self, stride: usize) -> Self {
        self.snapshot_stride = stride;
        self
    }

    /// Number of steps to reach `t_final` with step `dt`.
    pub fn steps(&self, dt: f64) -> usize {
        (self.t_final / dt).round() as usize
    }
}

/// Runs `round(t_final / dt)` steps, snapshotting every `snapshot_stride`
/// steps (the initial state included) with the default blow-up guard.
pub fn simulate(
    initial: &SpectralField,
    stepper: &Stepper,
    t_final: f64,
    snapshot_stride: usize,
) -> Result<Trajectory> {
    simulate_with(
        initial,
        stepper,
        &SimulationOptions::new(t_final).with_stride(snapshot_stride),
    )
}

pub fn simulate_with(initial: &SpectralField, stepper: &Stepper, options: &SimulationOptions) -> Result<Trajectory> {
    if !(options.t_final > 0.0) {
        return Err(FrontError::param(
            "t_final",
            format!("must be > 0, got {}", options.t_final),
        ));
    }
    if options.snapshot_stride == 0 {
        return Err(FrontError::param("snapshot_stride", "must be at least 1"));
    }
    if initial.grid() != stepper.grid() {
        return Err(FrontError::GridMismatch);
    }
    let dt = stepper.dt();
    let steps = options.steps(dt);
    let mut trajectory = Trajectory {
        times: vec![0.0],
        snapshots: vec![initial.clone()],
        diagnostics: Vec::with_capacity(steps + 1),
        stride: options.snapshot_stride,
        dt,
    };
    trajectory.diagnostics.push(Diagnostics::of(initial, 0.0));

    let mut state = initial.clone();
    let mut next = initial.clone();
    for n in 1..=steps {
        let t = n as f64 * dt;
        let nonlinear = state.nonlinear_square_of_derivative();
        stepper.advance(&state, &nonlinear, &mut next);
        std::mem::swap(&mut state, &mut next);

        if state.coeffs().iter().any(|c| !(c.re.is_finite() && c.im.is_finite())) {
            return Err(FrontError::NonFinite { step: n, t });
        }
        let diagnostics = Diagnostics::of(&state, t);
        if diagnostics.sup_norm > options.blowup_bound {
            return Err(FrontError::BlowUp {
                t,
                sup_norm: diagnostics.sup_norm,
                bound: options.blowup_bound,
            });
        }
        trajectory.diagnostics.push(diagnostics);
        if n % options.snapshot_stride == 0 {
            trajectory.times.push(t);
            trajectory.snapshots.push(state.clone());
        }
    }
    Ok(trajectory)
}

fn check_scaling(eps: f64, u: f64) -> Result<()> {
    if !(eps.is_finite() && eps > 0.0) {
        return Err(FrontError::param("eps", "the rescaling is singular unless eps > 0"));
    }
    if !(u > 0.0 && u < 1.0) {
        return Err(FrontError::param("U", format!("must lie in (0, 1), got {u}")));
    }
    Ok(())
}

/// `ψ = U φ / ε`.
pub fn rescale_front_to_psi(phi: f64, eps: f64, u: f64) -> Result<f64> {
    check_scaling(eps, u)?;
    Ok(u * phi / eps)
}

/// `φ = ε ψ / U`.
pub fn rescale_psi_to_front(psi: f64, eps: f64, u: f64) -> Result<f64> {
    check_scaling(eps, u)?;
    Ok(eps * psi / u)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    /// `(t, y) ↦ (τ, η) = (ε²U² t, √ε U y)`.
    ToRescaled,
    /// `(τ, η) ↦ (t, y) = (τ / (ε²U²), η / (√ε U))`.
    ToPhysical,
}

pub fn rescale_coords(time: f64, space: f64, direction: Direction, eps: f64, u: f64) -> Result<(f64, f64)> {
    check_scaling(eps, u)?;
    let time_scale = eps * eps * u * u;
    let space_scale = eps.sqrt() * u;
    Ok(match direction {
        Direction::ToRescaled => (time * time_scale, space * space_scale),
        Direction::ToPhysical => (time / time_scale, space / space_scale),
    })
}

/// Maps from the rescaled variables `(η, τ, ε)` on a period `ℓ₀` to the
/// `2π`-periodic scheme variables `(x, t, ε')`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Section5Scaling {
    pub ell0: f64,
    /// `ℓ̃₀ = ℓ₀ / 4π`.
    pub ell_tilde: f64,
    /// `β = 4 ℓ̃₀²`.
    pub beta: f64,
}

impl Section5Scaling {
    /// Period `ℓ₀ = 2π√β` giving bifurcation parameter `β`.
    pub fn from_beta(beta: f64) -> Result<Self> {
        if !(beta.is_finite() && beta > 0.0) {
            return Err(FrontError::param("beta", format!("must be > 0, got {beta}")));
        }
        rescale_section5(2.0 * PI * beta.sqrt())
    }

    /// `x = η / (2ℓ̃₀)`.
    pub fn eta_to_x(&self, eta: f64) -> f64 {
        eta / (2.0 * self.ell_tilde)
    }

    pub fn x_to_eta(&self, x: f64) -> f64 {
        x * 2.0 * self.ell_tilde
    }

    /// `t = τ / β²`.
    pub fn tau_to_t(&self, tau: f64) -> f64 {
        tau / (self.beta * self.beta)
    }

    pub fn t_to_tau(&self, t: f64) -> f64 {
        t * self.beta * self.beta
    }

    /// `ε' = ε / β`.
    pub fn eps_to_scheme(&self, eps: f64) -> f64 {
        eps / self.beta
    }

    pub fn scheme_to_eps(&self, eps_scheme: f64) -> f64 {
        eps_scheme * self.beta
    }
}

pub fn rescale_section5(ell0: f64) -> Result<Section5Scaling> {
    if !(ell0.is_finite() && ell0 > 0.0) {
        return Err(FrontError::param("ell0", format!("must be > 0, got {ell0}")));
    }
    let ell_tilde = ell0 / (4.0 * PI);
    Ok(Section5Scaling {
        ell0,
        ell_tilde,
        beta: 4.0 * ell_tilde * ell_tilde,
    })
}
