use serde::Serialize;

use super::apriori::{apriori_monitor, AprioriMonitor};
use crate::dynamics::{simulate_with, SimulationOptions, Stepper, Trajectory};
use crate::error::{FrontError, Result};
use crate::parallel::{par_map, Execution};
use crate::spectral::{Grid, SpectralField};
use crate::symbols::ModelParams;

/// Grid, step and sampling shared by every run of a study.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StudyConfig {
    pub dt: f64,
    /// Differences are taken every `compare_stride` steps.
    pub compare_stride: usize,
    pub blowup_bound: f64,
    pub execution: Execution,
}

impl Default for StudyConfig {
    fn default() -> Self {
        StudyConfig {
            dt: crate::dynamics::DEFAULT_DT,
            compare_stride: 10,
            blowup_bound: crate::dynamics::DEFAULT_BLOWUP_BOUND,
            execution: Execution::available(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceResult {
    pub beta: f64,
    pub eps_values: Vec<f64>,
    /// `max_t sup_x |ψ_ε − Φ|`; `NaN` for runs that failed.
    pub sup_errors: Vec<f64>,
    /// Slope of the least-squares fit of `ln error` against `ln ε`.
    pub fitted_order: Option<f64>,
    /// `C` in `error ≈ C εᵖ`.
    pub constant: Option<f64>,
    /// Every error is exactly zero, so no fit is possible.
    pub degenerate: bool,
    /// `(ε, reason)` for runs excluded from the fit.
    pub failed: Vec<(f64, String)>,
}

impl ConvergenceResult {
    /// Errors strictly decrease along the (decreasing) `ε` list.
    pub fn is_monotone(&self) -> bool {
        self.sup_errors.windows(2).all(|w| w[1] < w[0])
    }
}

/// Least-squares line through `(x, y)`; returns `(slope, intercept)`.
pub fn fit_line(x: &[f64], y: &[f64]) -> Option<(f64, f64)> {
    let n = x.len();
    if n < 2 || y.len() != n {
        return None;
    }
    let mx = x.iter().sum::<f64>() / n as f64;
    let my = y.iter().sum::<f64>() / n as f64;
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let slope = sxy / sxx;
    Some((slope, my - slope * mx))
}

fn run(
    grid: &Grid,
    psi0: &SpectralField,
    beta: f64,
    eps: f64,
    t_final: f64,
    config: &StudyConfig,
) -> Result<Trajectory> {
    let params = ModelParams {
        beta,
        eps,
        dt: config.dt,
        ..ModelParams::default()
    };
    let stepper = Stepper::new(grid, params)?;
    let options = SimulationOptions {
        t_final,
        snapshot_stride: config.compare_stride,
        blowup_bound: config.blowup_bound,
    };
    simulate_with(psi0, &stepper, &options)
}

fn max_sup_difference(a: &[SpectralField], b: &[SpectralField]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(FrontError::TrajectoryMismatch(format!(
            "{} vs {} snapshots",
            a.len(),
            b.len()
        )));
    }
    let mut worst = 0.0f64;
    for (x, y) in a.iter().zip(b) {
        worst = worst.max((x - y).norm_sup());
    }
    Ok(worst)
}

/// Runs `Φ` (ε = 0) and every `ψ_ε` from the same initial front and
/// measures `max_t ‖ψ_ε − Φ‖_∞` on the common snapshot times.
pub fn convergence_study(
    psi0: &SpectralField,
    beta: f64,
    eps_list: &[f64],
    t_final: f64,
    config: &StudyConfig,
) -> Result<ConvergenceResult> {
    study(psi0, beta, eps_list, t_final, config, None).map(|(result, _)| result)
}

/// [`convergence_study`] plus the a-priori monitor of order `n` for every
/// `ε` run that completed, from the same trajectories.
pub fn convergence_study_with_apriori(
    psi0: &SpectralField,
    beta: f64,
    eps_list: &[f64],
    t_final: f64,
    config: &StudyConfig,
    n: u32,
) -> Result<(ConvergenceResult, Vec<AprioriMonitor>)> {
    study(psi0, beta, eps_list, t_final, config, Some(n))
}

fn study(
    psi0: &SpectralField,
    beta: f64,
    eps_list: &[f64],
    t_final: f64,
    config: &StudyConfig,
    apriori_order: Option<u32>,
) -> Result<(ConvergenceResult, Vec<AprioriMonitor>)> {
    if eps_list.len() < 2 {
        return Err(FrontError::param("eps_list", "needs at least two values"));
    }
    if eps_list.iter().any(|&e| !(e.is_finite() && e > 0.0)) {
        return Err(FrontError::param("eps_list", "every value must be > 0"));
    }
    if eps_list.windows(2).any(|w| w[1] >= w[0]) {
        return Err(FrontError::param("eps_list", "must be strictly decreasing"));
    }
    let grid = psi0.grid().clone();
    let reference = run(&grid, psi0, beta, 0.0, t_final, config)?;

    let outcomes = par_map(
        eps_list,
        config.execution,
        |&eps| -> Result<(f64, Option<AprioriMonitor>)> {
            let traj = run(&grid, psi0, beta, eps, t_final, config)?;
            let err = max_sup_difference(&traj.snapshots, &reference.snapshots)?;
            let monitor = match apriori_order {
                Some(n) => Some(apriori_monitor(&traj, &reference, eps, n, None)?),
                None => None,
            };
            Ok((err, monitor))
        },
    );

    let mut sup_errors = Vec::with_capacity(eps_list.len());
    let mut monitors = Vec::new();
    let mut failed = Vec::new();
    for (&eps, outcome) in eps_list.iter().zip(outcomes) {
        match outcome {
            Ok((err, monitor)) => {
                sup_errors.push(err);
                monitors.extend(monitor);
            }
            Err(e) if e.is_numeric() => {
                sup_errors.push(f64::NAN);
                failed.push((eps, e.to_string()));
            }
            Err(e) => return Err(e),
        }
    }

    let degenerate = sup_errors.iter().all(|&e| e == 0.0);
    let (xs, ys): (Vec<f64>, Vec<f64>) = eps_list
        .iter()
        .zip(&sup_errors)
        .filter(|(_, &e)| e.is_finite() && e > 0.0)
        .map(|(&eps, &e)| (eps.ln(), e.ln()))
        .unzip();
    let fit = if degenerate { None } else { fit_line(&xs, &ys) };

    let result = ConvergenceResult {
        beta,
        eps_values: eps_list.to_vec(),
        sup_errors,
        fitted_order: fit.map(|(slope, _)| slope),
        constant: fit.map(|(_, intercept)| intercept.exp()),
        degenerate,
        failed,
    };
    Ok((result, monitors))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::GridConfig;
    use approx::assert_relative_eq;

    fn grid() -> Grid {
        Grid::new(GridConfig::periodic_2pi(32).unwrap()).unwrap()
    }

    #[test]
    fn line_fit() {
        let (s, c) = fit_line(&[0.0, 1.0, 2.0], &[1.0, 3.0, 5.0]).unwrap();
        assert_relative_eq!(s, 2.0, max_relative = 1e-15);
        assert_relative_eq!(c, 1.0, max_relative = 1e-15);
        assert!(fit_line(&[1.0], &[1.0]).is_none());
        assert!(fit_line(&[1.0, 1.0], &[0.0, 2.0]).is_none());
    }

    #[test]
    fn zero_data_is_degenerate() {
        let g = grid();
        let config = StudyConfig {
            dt: 1e-3,
            ..StudyConfig::default()
        };
        let r = convergence_study(&g.zeros(), 10.0, &[0.1, 0.01], 0.05, &config).unwrap();
        assert!(r.degenerate);
        assert!(r.fitted_order.is_none());
        assert_eq!(r.sup_errors, vec![0.0, 0.0]);
    }

    #[test]
    fn rejects_bad_eps_lists() {
        let g = grid();
        let c = StudyConfig::default();
        assert!(convergence_study(&g.zeros(), 10.0, &[0.1], 0.1, &c).is_err());
        assert!(convergence_study(&g.zeros(), 10.0, &[0.01, 0.1], 0.1, &c).is_err());
        assert!(convergence_study(&g.zeros(), 10.0, &[0.1, 0.0], 0.1, &c).is_err());
    }

    #[test]
    fn deterministic_and_execution_independent() {
        let g = grid();
        let psi0 = g.sample(f64::sin);
        let seq = StudyConfig {
            dt: 1e-3,
            execution: Execution::Sequential,
            ..StudyConfig::default()
        };
        let par = StudyConfig {
            execution: Execution::Parallel,
            ..seq
        };
        let a = convergence_study(&psi0, 10.0, &[0.1, 0.01], 0.1, &seq).unwrap();
        let b = convergence_study(&psi0, 10.0, &[0.1, 0.01], 0.1, &par).unwrap();
        let c = convergence_study(&psi0, 10.0, &[0.1, 0.01], 0.1, &seq).unwrap();
        assert_eq!(a.sup_errors, b.sup_errors);
        assert_eq!(a.sup_errors, c.sup_errors);
        assert!(a.is_monotone());
    }

    #[test]
    fn apriori_shares_the_runs() {
        let g = grid();
        let config = StudyConfig {
            dt: 1e-3,
            ..StudyConfig::default()
        };
        let psi0 = g.sample(f64::sin);
        let plain = convergence_study(&psi0, 10.0, &[0.1, 0.01], 0.05, &config).unwrap();
        let (result, monitors) = convergence_study_with_apriori(&psi0, 10.0, &[0.1, 0.01], 0.05, &config, 0).unwrap();
        assert_eq!(plain, result);
        assert_eq!(monitors.len(), 2);
        assert_eq!((monitors[0].eps, monitors[1].eps), (0.1, 0.01));
        assert!(monitors.iter().all(|m| m.max.is_finite() && m.series[0] == 0.0));
    }
}
