//! JSON run configuration.
//!
//! A configuration is one flat object. Every key is optional; unknown keys
//! are rejected. Defaults depend on the mode (see [`RunConfig::defaults`]),
//! and a `figure` configuration starts from the figure's own `β`, `ε` and
//! initial front.

use std::path::PathBuf;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::dynamics::DEFAULT_SNAPSHOT_STRIDE;
use crate::error::{FrontError, Result};
use crate::harness::{figure_spec, FigureRun, FIGURE_T_FINAL};
use crate::initial::Psi0Spec;
use crate::spectral::GridConfig;
use crate::symbols::ModelParams;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Simulate,
    Stability,
    Converge,
    Attractor,
    Verify,
    Figure,
}

impl FromStr for Mode {
    type Err = FrontError;
    fn from_str(s: &str) -> Result<Self> {
        serde_json::from_value(serde_json::Value::String(s.to_string()))
            .map_err(|_| FrontError::param("mode", format!("unknown mode `{s}`")))
    }
}

/// Keys accepted in a configuration file.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    mode: Option<Mode>,
    u: Option<f64>,
    gamma: Option<f64>,
    eps: Option<f64>,
    beta: Option<f64>,
    ell: Option<f64>,
    dt: Option<f64>,
    n_modes: Option<usize>,
    dealias_fraction: Option<f64>,
    psi0: Option<Psi0Spec>,
    t_final: Option<f64>,
    snapshot_stride: Option<usize>,
    output_dir: Option<PathBuf>,
    seed: Option<u64>,
    figure_id: Option<u32>,
    eps_list: Option<Vec<f64>>,
    beta_list: Option<Vec<f64>>,
    transient_fraction: Option<f64>,
    k_max: Option<usize>,
    apriori_order: Option<u32>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub mode: Mode,
    pub params: ModelParams,
    pub grid: GridConfig,
    pub psi0: Psi0Spec,
    pub t_final: f64,
    pub snapshot_stride: usize,
    pub output_dir: PathBuf,
    pub seed: u64,
    pub figure_id: Option<u32>,
    /// `ε` values of a convergence study, strictly decreasing.
    pub eps_list: Vec<f64>,
    /// `β` values of an attractor scan.
    pub beta_list: Vec<f64>,
    pub transient_fraction: f64,
    /// Highest mode of a stability report.
    pub k_max: usize,
    /// Derivative order of the a-priori monitor.
    pub apriori_order: u32,
}

impl RunConfig {
    /// Defaults for `mode`.
    pub fn defaults(mode: Mode) -> Self {
        let t_final = match mode {
            Mode::Converge => 0.5,
            Mode::Attractor => 50.0,
            Mode::Figure => FIGURE_T_FINAL,
            _ => 1.0,
        };
        RunConfig {
            mode,
            params: ModelParams::default(),
            grid: GridConfig::default(),
            psi0: Psi0Spec::sin(),
            t_final,
            snapshot_stride: if mode == Mode::Figure {
                FigureRun::default().snapshot_stride
            } else {
                DEFAULT_SNAPSHOT_STRIDE
            },
            output_dir: PathBuf::from("out"),
            seed: 0,
            figure_id: None,
            eps_list: vec![0.1, 0.01, 0.001],
            beta_list: vec![1.0, 2.0, 3.0, 4.0],
            transient_fraction: 0.5,
            k_max: 16,
            apriori_order: 0,
        }
    }

    /// Checks every invariant; errors name the offending field.
    pub fn validate(&self) -> Result<()> {
        self.params.validate_scheme()?;
        self.grid.validate()?;
        if !(self.t_final.is_finite() && self.t_final > 0.0) {
            return Err(FrontError::param(
                "t_final",
                format!("must be > 0, got {}", self.t_final),
            ));
        }
        if self.snapshot_stride == 0 {
            return Err(FrontError::param("snapshot_stride", "must be at least 1"));
        }
        if !(0.0..1.0).contains(&self.transient_fraction) {
            return Err(FrontError::param("transient_fraction", "must lie in [0, 1)"));
        }
        match self.mode {
            Mode::Stability => {
                self.params.validate_physical()?;
                if self.k_max < 1 {
                    return Err(FrontError::param("k_max", "must be at least 1"));
                }
            }
            Mode::Converge => {
                if self.eps_list.len() < 2
                    || self.eps_list.iter().any(|&e| !(e.is_finite() && e > 0.0))
                    || self.eps_list.windows(2).any(|w| w[1] >= w[0])
                {
                    return Err(FrontError::param(
                        "eps_list",
                        "needs at least two positive, strictly decreasing values",
                    ));
                }
            }
            Mode::Attractor => {
                if self.beta_list.is_empty() || self.beta_list.iter().any(|&b| !(b.is_finite() && b > 0.0)) {
                    return Err(FrontError::param("beta_list", "needs at least one positive value"));
                }
            }
            Mode::Figure => {
                figure_spec(
                    self.figure_id
                        .ok_or_else(|| FrontError::param("figure_id", "is required"))?,
                )?;
            }
            Mode::Simulate | Mode::Verify => {}
        }
        Ok(())
    }
}

/// Parses and validates a configuration. `mode` defaults to `simulate`.
pub fn parse_config(text: &str) -> Result<RunConfig> {
    parse_config_as(text, None)
}

/// As [`parse_config`], with `mode` forced (the CLI subcommand wins over
/// the file).
pub fn parse_config_as(text: &str, mode: Option<Mode>) -> Result<RunConfig> {
    let config = parse_config_unchecked(text, mode)?;
    config.validate()?;
    Ok(config)
}

/// Parses and applies defaults without validating, so that command-line
/// [`Overrides`] can still supply missing values; [`RunConfig::apply`]
/// validates the result.
pub fn parse_config_unchecked(text: &str, mode: Option<Mode>) -> Result<RunConfig> {
    let raw: RawConfig = serde_json::from_str(text).map_err(|e| FrontError::Config(e.to_string()))?;
    resolve(raw, mode)
}

fn resolve(raw: RawConfig, forced: Option<Mode>) -> Result<RunConfig> {
    let mode = forced.or(raw.mode).unwrap_or(Mode::Simulate);
    let mut c = RunConfig::defaults(mode);
    c.figure_id = raw.figure_id;

    if mode == Mode::Figure {
        if let Some(id) = raw.figure_id {
            let spec = figure_spec(id)?;
            c.params.beta = spec.beta;
            c.params.eps = spec.eps;
            c.psi0 = spec.psi0;
        }
    }

    let p = &mut c.params;
    macro_rules! take {
        ($($src:ident => $dst:expr),* $(,)?) => {
            $(if let Some(v) = raw.$src { $dst = v; })*
        };
    }
    take! {
        u => p.u,
        gamma => p.gamma,
        eps => p.eps,
        beta => p.beta,
        ell => p.ell,
        dt => p.dt,
        n_modes => c.grid.n_modes,
        dealias_fraction => c.grid.dealias_fraction,
        psi0 => c.psi0,
        t_final => c.t_final,
        snapshot_stride => c.snapshot_stride,
        output_dir => c.output_dir,
        seed => c.seed,
        eps_list => c.eps_list,
        beta_list => c.beta_list,
        transient_fraction => c.transient_fraction,
        k_max => c.k_max,
        apriori_order => c.apriori_order,
    }
    Ok(c)
}

/// Values given on the command line; each one replaces the configured value.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub dt: Option<f64>,
    pub n_modes: Option<usize>,
    pub beta: Option<f64>,
    pub eps: Option<f64>,
    pub t_final: Option<f64>,
    pub output_dir: Option<PathBuf>,
    pub figure_id: Option<u32>,
}

impl RunConfig {
    pub fn apply(&mut self, o: &Overrides) -> Result<()> {
        if let Some(id) = o.figure_id {
            let spec = figure_spec(id)?;
            self.figure_id = Some(id);
            self.params.beta = spec.beta;
            self.params.eps = spec.eps;
            self.psi0 = spec.psi0;
        }
        if let Some(v) = o.dt {
            self.params.dt = v;
        }
        if let Some(v) = o.n_modes {
            self.grid.n_modes = v;
        }
        if let Some(v) = o.beta {
            self.params.beta = v;
        }
        if let Some(v) = o.eps {
            self.params.eps = v;
        }
        if let Some(v) = o.t_final {
            self.t_final = v;
        }
        if let Some(v) = &o.output_dir {
            self.output_dir = v.clone();
        }
        self.validate()
    }
}
