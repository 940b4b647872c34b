use serde::Serialize;

use crate::dynamics::Trajectory;
use crate::error::{FrontError, Result};

/// `‖Dⁿ ζ(τ)‖²_{1/2,ε}` along a pair of runs, where
/// `ζ = ∂_η (ψ_ε − Φ) / ε` compares an `ε` run with the K-S run `Φ`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AprioriMonitor {
    pub n: u32,
    pub eps: f64,
    pub times: Vec<f64>,
    pub series: Vec<f64>,
    pub max: f64,
    /// Configured `Kₙ`, if any.
    pub bound: Option<f64>,
    /// The series stays at or below `Kₙ` (always true without a bound).
    pub bound_hit: bool,
}

pub fn apriori_monitor(
    traj_eps: &Trajectory,
    traj_ks: &Trajectory,
    eps: f64,
    n: u32,
    bound: Option<f64>,
) -> Result<AprioriMonitor> {
    if !(eps.is_finite() && eps > 0.0) {
        return Err(FrontError::param("eps", "the monitor needs eps > 0"));
    }
    if traj_eps.is_empty() || traj_ks.is_empty() {
        return Err(FrontError::EmptyTrajectory);
    }
    if traj_eps.len() != traj_ks.len() {
        return Err(FrontError::TrajectoryMismatch(format!(
            "{} vs {} snapshots",
            traj_eps.len(),
            traj_ks.len()
        )));
    }
    let mut series = Vec::with_capacity(traj_eps.len());
    for ((ta, a), (tb, b)) in traj_eps
        .times
        .iter()
        .zip(&traj_eps.snapshots)
        .zip(traj_ks.times.iter().zip(&traj_ks.snapshots))
    {
        if (ta - tb).abs() > 1e-9 * ta.abs().max(1.0) {
            return Err(FrontError::TrajectoryMismatch(format!(
                "snapshot times {ta} and {tb} differ"
            )));
        }
        a.same_grid(b)?;
        let zeta = (a - b).derivative(1).scaled(1.0 / eps);
        let d = if n == 0 { zeta } else { zeta.derivative(n) };
        let norm = d.norm_half_eps(eps);
        series.push(norm * norm);
    }
    let max = series.iter().cloned().fold(0.0, f64::max);
    Ok(AprioriMonitor {
        n,
        eps,
        times: traj_eps.times.clone(),
        series,
        max,
        bound,
        bound_hit: bound.map_or(true, |k| max <= k),
    })
}
