use serde::Serialize;

use crate::dynamics::{simulate, Stepper, Trajectory};
use crate::error::{FrontError, Result};
use crate::initial::Psi0Spec;
use crate::spectral::{Grid, GridConfig, DEFAULT_N_MODES};
use crate::symbols::ModelParams;

/// Default horizon of a figure run, in scheme time units.
pub const FIGURE_T_FINAL: f64 = 4.0;
/// Default number of fronts drawn in a waterfall.
pub const FIGURE_FRONTS: usize = 40;

/// Parameters of one of the thirteen reference figures.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FigureSpec {
    pub id: u32,
    pub beta: f64,
    pub eps: f64,
    pub psi0: Psi0Spec,
}

/// Run settings not fixed by the figure itself.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FigureRun {
    pub dt: f64,
    pub n_modes: usize,
    pub t_final: f64,
    pub snapshot_stride: usize,
}

impl Default for FigureRun {
    fn default() -> Self {
        let dt = crate::dynamics::DEFAULT_DT;
        FigureRun {
            dt,
            n_modes: DEFAULT_N_MODES,
            t_final: FIGURE_T_FINAL,
            snapshot_stride: ((FIGURE_T_FINAL / dt).round() as usize / FIGURE_FRONTS).max(1),
        }
    }
}

pub fn figure_spec(id: u32) -> Result<FigureSpec> {
    const SWEEP: [f64; 4] = [0.1, 0.01, 0.001, 0.0];
    let (beta, eps, psi0) = match id {
        1..=4 => (10.0, SWEEP[id as usize - 1], Psi0Spec::sin()),
        5..=8 => (20.0, SWEEP[id as usize - 5], Psi0Spec::sin()),
        9 => (30.0, 0.001, Psi0Spec::sin()),
        10 => (30.0, 0.001, Psi0Spec::cos()),
        11 => (60.0, 0.001, Psi0Spec::sin()),
        12 => (60.0, 0.001, Psi0Spec::cos()),
        13 => (108.0, 1e-4, Psi0Spec::tri()),
        _ => return Err(FrontError::UnknownFigure(id)),
    };
    Ok(FigureSpec { id, beta, eps, psi0 })
}

/// Runs the configuration of figure `id`.
pub fn figure_reproduction(id: u32, run: &FigureRun) -> Result<(FigureSpec, Trajectory)> {
    let spec = figure_spec(id)?;
    let grid = Grid::new(GridConfig::periodic_2pi(run.n_modes)?)?;
    let params = ModelParams {
        beta: spec.beta,
        eps: spec.eps,
        dt: run.dt,
        ..ModelParams::default()
    };
    let stepper = Stepper::new(&grid, params)?;
    let trajectory = simulate(&spec.psi0.build(&grid)?, &stepper, run.t_final, run.snapshot_stride)?;
    Ok((spec, trajectory))
}
