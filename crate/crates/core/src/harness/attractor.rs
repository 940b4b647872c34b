use serde::Serialize;

use crate::dynamics::{simulate_with, SimulationOptions, Stepper, Trajectory};
use crate::error::{FrontError, Result};
use crate::parallel::{par_map, Execution};
use crate::spectral::SpectralField;
use crate::symbols::ModelParams;

/// Zero-mean sup norm below which the attractor is the null front.
pub const TRIVIAL_TOLERANCE: f64 = 1e-6;
/// Relative spread of the zero-mean `L²` series below which the state is
/// treated as steady: the autocorrelation is then undefined.
pub const STEADY_TOLERANCE: f64 = 1e-6;
pub const PERIODIC_PEAK: f64 = 0.99;
pub const MIN_PERIOD_LAG: usize = 10;
/// Number of modes listed in [`AttractorReport::dominant_modes`].
pub const DOMINANT_MODES: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum AttractorClass {
    Trivial,
    /// Nonzero cellular state whose zero-mean norm no longer changes.
    Steady,
    Periodic,
    Complex,
}

impl std::fmt::Display for AttractorClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            AttractorClass::Trivial => "trivial",
            AttractorClass::Steady => "steady",
            AttractorClass::Periodic => "periodic",
            AttractorClass::Complex => "complex",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanConfig {
    pub dt: f64,
    /// Fraction of `[0, T]` discarded before classifying.
    pub transient_fraction: f64,
    /// The `L²` series is sampled every `sample_stride` steps.
    pub sample_stride: usize,
    pub blowup_bound: f64,
    pub execution: Execution,
}

impl Default for ScanConfig {
    fn default() -> Self {
        ScanConfig {
            dt: crate::dynamics::DEFAULT_DT,
            transient_fraction: 0.5,
            sample_stride: 100,
            blowup_bound: crate::dynamics::DEFAULT_BLOWUP_BOUND,
            execution: Execution::available(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AttractorReport {
    pub beta: f64,
    pub eps: f64,
    pub classification: AttractorClass,
    pub period_estimate: Option<f64>,
    /// Highest autocorrelation past the first zero crossing.
    pub autocorrelation_peak: Option<f64>,
    /// `(k, mean |ψ̂_k|)` over the sampled window, largest first.
    pub dominant_modes: Vec<(usize, f64)>,
    /// Time-averaged energy `2|ψ̂_k|²` (once at Nyquist), `k ≥ 1`; index 0 is unused.
    pub mode_energy: Vec<f64>,
    pub final_zero_mean_sup: f64,
    /// Relative spread of the zero-mean `L²` series.
    pub l2_spread: f64,
    /// Set when the run failed; the other fields are then empty.
    pub failure: Option<String>,
}

impl AttractorReport {
    /// Share of the zero-mean energy carried by `modes`.
    pub fn band_energy_fraction(&self, modes: &[usize]) -> f64 {
        let total: f64 = self.mode_energy.iter().skip(1).sum();
        if total == 0.0 {
            return 0.0;
        }
        let band: f64 = modes.iter().filter_map(|&k| self.mode_energy.get(k)).sum();
        band / total
    }

    fn failed(beta: f64, eps: f64, reason: String) -> Self {
        AttractorReport {
            beta,
            eps,
            classification: AttractorClass::Complex,
            period_estimate: None,
            autocorrelation_peak: None,
            dominant_modes: Vec::new(),
            mode_energy: Vec::new(),
            final_zero_mean_sup: f64::NAN,
            l2_spread: f64::NAN,
            failure: Some(reason),
        }
    }
}

/// Pearson correlation of `x[..n−lag]` with `x[lag..]`.
pub fn autocorrelation(series: &[f64], lag: usize) -> f64 {
    let n = series.len();
    if lag >= n.saturating_sub(1) {
        return 0.0;
    }
    let a = &series[..n - lag];
    let b = &series[lag..];
    let m = a.len() as f64;
    let (ma, mb) = (a.iter().sum::<f64>() / m, b.iter().sum::<f64>() / m);
    let (mut sab, mut saa, mut sbb) = (0.0, 0.0, 0.0);
    for (x, y) in a.iter().zip(b) {
        let (dx, dy) = (x - ma, y - mb);
        sab += dx * dy;
        saa += dx * dx;
        sbb += dy * dy;
    }
    if saa == 0.0 || sbb == 0.0 {
        0.0
    } else {
        sab / (saa * sbb).sqrt()
    }
}

/// `(lag, peak)` of the dominant autocorrelation peak: the first local
/// maximum within 0.01 of the highest correlation found at lags of at least
/// [`MIN_PERIOD_LAG`] beyond the first zero crossing, searched up to half
/// the series length. Multiples of a period correlate equally well, so the
/// first such maximum is the fundamental. `None` when the correlation never
/// changes sign.
pub fn autocorrelation_peak(series: &[f64]) -> Option<(usize, f64)> {
    let max_lag = series.len() / 2;
    let first_zero = (1..=max_lag).find(|&lag| autocorrelation(series, lag) < 0.0)?;
    let start = first_zero.max(MIN_PERIOD_LAG);
    if start > max_lag {
        return None;
    }
    let r: Vec<f64> = (start..=max_lag).map(|lag| autocorrelation(series, lag)).collect();
    let best = r.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let is_local_max = |i: usize| {
        let left = i == 0 || r[i] >= r[i - 1];
        let right = i + 1 == r.len() || r[i] >= r[i + 1];
        left && right
    };
    (0..r.len())
        .find(|&i| r[i] >= best - 0.01 && is_local_max(i))
        .map(|i| (start + i, r[i]))
}

fn relative_spread(series: &[f64]) -> f64 {
    let n = series.len() as f64;
    let mean = series.iter().sum::<f64>() / n;
    let var = series.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
    if mean.abs() > 0.0 {
        var.sqrt() / mean.abs()
    } else {
        var.sqrt()
    }
}

/// Classifies a finished trajectory.
pub fn classify(trajectory: &Trajectory, beta: f64, eps: f64, config: &ScanConfig) -> Result<AttractorReport> {
    let last = trajectory.final_diagnostics().ok_or(FrontError::EmptyTrajectory)?;
    let t_final = last.t;
    let t_start = config.transient_fraction * t_final;

    let series: Vec<f64> = trajectory
        .diagnostics
        .iter()
        .enumerate()
        .filter(|(i, d)| i % config.sample_stride == 0 && d.t >= t_start)
        .map(|(_, d)| d.zero_mean_l2)
        .collect();
    let window: Vec<&SpectralField> = trajectory
        .times
        .iter()
        .zip(&trajectory.snapshots)
        .filter(|(t, _)| **t >= t_start)
        .map(|(_, s)| s)
        .collect();

    let n_half = trajectory.snapshots[0].grid().n_half();
    let even = trajectory.snapshots[0].grid().n_modes() % 2 == 0;
    let mut mean_modulus = vec![0.0; n_half + 1];
    let mut mode_energy = vec![0.0; n_half + 1];
    for snap in &window {
        for k in 1..=n_half {
            let c = snap.coeff(k).norm();
            let weight = if even && k == n_half { 1.0 } else { 2.0 };
            mean_modulus[k] += c;
            mode_energy[k] += weight * c * c;
        }
    }
    let count = window.len().max(1) as f64;
    mean_modulus.iter_mut().for_each(|v| *v /= count);
    mode_energy.iter_mut().for_each(|v| *v /= count);
    let mut dominant_modes: Vec<(usize, f64)> = (1..=n_half).map(|k| (k, mean_modulus[k])).collect();
    dominant_modes.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
    dominant_modes.truncate(DOMINANT_MODES);

    let spread = if series.is_empty() {
        0.0
    } else {
        relative_spread(&series)
    };
    let sample_dt = config.sample_stride as f64 * trajectory.dt;
    let mut period_estimate = None;
    let mut peak_value = None;
    let classification = if last.zero_mean_sup < TRIVIAL_TOLERANCE {
        AttractorClass::Trivial
    } else if spread < STEADY_TOLERANCE {
        AttractorClass::Steady
    } else {
        match autocorrelation_peak(&series) {
            Some((lag, peak)) => {
                peak_value = Some(peak);
                if peak >= PERIODIC_PEAK {
                    period_estimate = Some(lag as f64 * sample_dt);
                    AttractorClass::Periodic
                } else {
                    AttractorClass::Complex
                }
            }
            None => AttractorClass::Complex,
        }
    };

    Ok(AttractorReport {
        beta,
        eps,
        classification,
        period_estimate,
        autocorrelation_peak: peak_value,
        dominant_modes,
        mode_energy,
        final_zero_mean_sup: last.zero_mean_sup,
        l2_spread: spread,
        failure: None,
    })
}

/// Simulates every `β` from `psi0` up to `t_final` and classifies the
/// long-time behaviour of the zero-mean part.
pub fn attractor_scan(
    beta_list: &[f64],
    eps: f64,
    psi0: &SpectralField,
    t_final: f64,
    config: &ScanConfig,
) -> Result<Vec<AttractorReport>> {
    if !(0.0..1.0).contains(&config.transient_fraction) {
        return Err(FrontError::param("transient_fraction", "must lie in [0, 1)"));
    }
    if config.sample_stride == 0 {
        return Err(FrontError::param("sample_stride", "must be at least 1"));
    }
    let grid = psi0.grid().clone();
    let results = par_map(beta_list, config.execution, |&beta| -> Result<AttractorReport> {
        let params = ModelParams {
            beta,
            eps,
            dt: config.dt,
            ..ModelParams::default()
        };
        let stepper = Stepper::new(&grid, params)?;
        let options = SimulationOptions {
            t_final,
            snapshot_stride: config.sample_stride,
            blowup_bound: config.blowup_bound,
        };
        match simulate_with(psi0, &stepper, &options) {
            Ok(traj) => classify(&traj, beta, eps, config),
            Err(e) if e.is_numeric() => Ok(AttractorReport::failed(beta, eps, e.to_string())),
            Err(e) => Err(e),
        }
    });
    results.into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::{Grid, GridConfig};
    use std::f64::consts::PI;

    #[test]
    fn autocorrelation_of_sine() {
        let series: Vec<f64> = (0..400).map(|i| (2.0 * PI * i as f64 / 40.0).sin()).collect();
        assert!((autocorrelation(&series, 40) - 1.0).abs() < 1e-12);
        assert!(autocorrelation(&series, 20) < -0.99);
        let (lag, peak) = autocorrelation_peak(&series).unwrap();
        assert_eq!(lag, 40);
        assert!(peak > 0.999);
    }

    #[test]
    fn monotone_series_has_no_peak() {
        let series: Vec<f64> = (0..200).map(|i| (-(i as f64) / 50.0).exp()).collect();
        assert!(autocorrelation_peak(&series).is_none());
        assert_eq!(autocorrelation(&[1.0; 10], 2), 0.0);
    }

    #[test]
    fn noise_is_not_periodic() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let series: Vec<f64> = (0..500).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let (_, peak) = autocorrelation_peak(&series).unwrap();
        assert!(peak < PERIODIC_PEAK);
    }

    #[test]
    fn small_beta_decays_to_trivial() {
        let g = Grid::new(GridConfig::periodic_2pi(32).unwrap()).unwrap();
        let config = ScanConfig {
            dt: 1e-3,
            sample_stride: 10,
            execution: Execution::Sequential,
            ..ScanConfig::default()
        };
        let reports = attractor_scan(&[1.0, 2.0], 0.001, &g.sample(f64::sin), 30.0, &config).unwrap();
        for r in &reports {
            assert_eq!(r.classification, AttractorClass::Trivial, "{r:?}");
        }
    }

    #[test]
    fn band_fraction() {
        let r = AttractorReport {
            mode_energy: vec![0.0, 1.0, 0.0, 2.0, 5.0, 2.0],
            ..AttractorReport::failed(1.0, 0.0, String::new())
        };
        assert!((r.band_energy_fraction(&[3, 4, 5]) - 0.9).abs() < 1e-15);
    }
}
