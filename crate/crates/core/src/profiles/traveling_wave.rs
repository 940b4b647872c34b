use crate::error::{FrontError, Result};

/// Planar traveling wave in the moving frame; the front sits at `x = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TravelingWave {
    pub u: f64,
    /// `γ = α − ln U`.
    pub gamma: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WaveValues {
    pub theta_bar: f64,
    pub s_bar: f64,
}

/// Residuals of the steady equations and of the two jump conditions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WaveResiduals {
    /// Max over samples of `|U θ̄_x − θ̄_xx|` on `x < 0`.
    pub temperature: f64,
    /// Max over samples of `|V θ̄_x + U S̄_x − S̄_xx + α θ̄_xx|` on `x ≠ 0`.
    pub enthalpy: f64,
    /// `[θ̄_x] + e^{S̄(0)}`.
    pub flux_jump: f64,
    /// `[S̄_x] − α[θ̄_x]`.
    pub enthalpy_jump: f64,
}

impl WaveResiduals {
    pub fn max(&self) -> f64 {
        self.temperature
            .max(self.enthalpy)
            .max(self.flux_jump.abs())
            .max(self.enthalpy_jump.abs())
    }
}

impl TravelingWave {
    pub fn new(u: f64, gamma: f64) -> Result<Self> {
        if !(u > 0.0 && u < 1.0) {
            return Err(FrontError::param("U", format!("must lie in (0, 1), got {u}")));
        }
        if !gamma.is_finite() {
            return Err(FrontError::param("gamma", "must be finite"));
        }
        Ok(TravelingWave { u, gamma })
    }

    /// Front speed `V = −U ln U > 0`.
    pub fn speed(&self) -> f64 {
        -self.u * self.u.ln()
    }

    /// `α = γ + ln U`.
    pub fn alpha(&self) -> f64 {
        self.gamma + self.u.ln()
    }

    /// Profiles at `x`; the left branch is used for `x ≤ 0`.
    pub fn eval(&self, x: f64) -> WaveValues {
        let u = self.u;
        if x <= 0.0 {
            let e = (u * x).exp();
            WaveValues {
                theta_bar: e,
                s_bar: self.gamma * u * x * e + u.ln() * e,
            }
        } else {
            WaveValues {
                theta_bar: 1.0,
                s_bar: u.ln(),
            }
        }
    }

    /// `(θ̄_x, θ̄_xx, S̄_x, S̄_xx)` on the left branch.
    fn left_derivatives(&self, x: f64) -> (f64, f64, f64, f64) {
        let u = self.u;
        let e = (u * x).exp();
        let g = self.gamma;
        let ln_u = u.ln();
        let theta_x = u * e;
        let theta_xx = u * u * e;
        let s_x = g * u * e + g * u * u * x * e + u * ln_u * e;
        let s_xx = 2.0 * g * u * u * e + g * u * u * u * x * e + u * u * ln_u * e;
        (theta_x, theta_xx, s_x, s_xx)
    }

    /// Evaluates all residuals at `samples` points of `x < 0` (the right
    /// branch is constant, so its equations hold trivially).
    pub fn residuals(&self, samples: &[f64]) -> WaveResiduals {
        let u = self.u;
        let v = self.speed();
        let alpha = self.alpha();
        let (mut temperature, mut enthalpy) = (0.0f64, 0.0f64);
        for &x in samples.iter().filter(|&&x| x < 0.0) {
            let (tx, txx, sx, sxx) = self.left_derivatives(x);
            temperature = temperature.max((u * tx - txx).abs());
            enthalpy = enthalpy.max((v * tx + u * sx - sxx + alpha * txx).abs());
        }
        let (tx0, _, sx0, _) = self.left_derivatives(0.0);
        let theta_jump = 0.0 - tx0;
        let s_jump = 0.0 - sx0;
        WaveResiduals {
            temperature,
            enthalpy,
            flux_jump: theta_jump + self.eval(0.0).s_bar.exp(),
            enthalpy_jump: s_jump - alpha * theta_jump,
        }
    }
}

/// Convenience form of [`TravelingWave::eval`].
pub fn traveling_wave_eval(u: f64, gamma: f64, x: f64) -> Result<WaveValues> {
    Ok(TravelingWave::new(u, gamma)?.eval(x))
}
