//! Experiment drivers: `ε → 0` convergence studies, `β` sweeps with
//! attractor triage, the a-priori norm monitor and the reference figures.
//! Sweep entries are independent and run through [`crate::parallel`].

mod apriori;
mod attractor;
mod convergence;
mod figures;

pub use apriori::{apriori_monitor, AprioriMonitor};
pub use attractor::{
    attractor_scan, autocorrelation, autocorrelation_peak, classify, AttractorClass, AttractorReport, ScanConfig,
    DOMINANT_MODES, MIN_PERIOD_LAG, PERIODIC_PEAK, STEADY_TOLERANCE, TRIVIAL_TOLERANCE,
};
pub use convergence::{convergence_study, convergence_study_with_apriori, fit_line, ConvergenceResult, StudyConfig};
pub use figures::{figure_reproduction, figure_spec, FigureRun, FigureSpec, FIGURE_FRONTS, FIGURE_T_FINAL};
