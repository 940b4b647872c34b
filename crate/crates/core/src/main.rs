//! `frontlab` command-line entry point.
//!
//! Every failure prints one line `error[<kind>]: <reason>` on stderr and
//! exits with 1 (usage, configuration or I/O), 2 (numerical failure) or
//! 3 (verification failure).

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use frontlab::config::{parse_config_unchecked, Mode, Overrides, RunConfig};
use frontlab::dynamics::{simulate_with, SimulationOptions, Stepper, Trajectory, DEFAULT_BLOWUP_BOUND};
use frontlab::error::FrontError;
use frontlab::harness::{attractor_scan, convergence_study_with_apriori, ScanConfig, StudyConfig};
use frontlab::output::{diagnostics_csv, trajectory_csv, waterfall_svg};
use frontlab::spectral::Grid;
use frontlab::symbols::spectrum_report;
use frontlab::verify::{run_battery, VerifyOptions};

#[derive(Parser)]
#[command(name = "frontlab", version, about = "Flame-front solver and verification harness")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Integrate one front and write its trajectory.
    Simulate(Common),
    /// Print the linear spectrum and the stability of the planar front.
    Stability(Common),
    /// Compare runs at decreasing eps with the K-S limit.
    Converge(Common),
    /// Classify the long-time behaviour over a list of beta values.
    Attractor(Common),
    /// Run the oracle battery.
    Verify {
        #[command(flatten)]
        common: Common,
        /// Seed of the random draws (overrides the configured seed).
        #[arg(long)]
        seed: Option<u64>,
        /// Random draws per randomized check.
        #[arg(long, default_value_t = VerifyOptions::default().draws)]
        draws: usize,
    },
    /// Reproduce one of the thirteen reference runs.
    Figure {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        figure_id: Option<u32>,
    },
}

#[derive(Args)]
struct Common {
    /// JSON configuration file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, allow_negative_numbers = true)]
    dt: Option<f64>,
    #[arg(long)]
    n_modes: Option<usize>,
    #[arg(long, allow_negative_numbers = true)]
    beta: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    eps: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    t_final: Option<f64>,
}

enum Failure {
    Usage(String),
    Io(String),
    Numeric(String),
    Verification(String),
}

impl Failure {
    fn kind(&self) -> &'static str {
        match self {
            Failure::Usage(_) => "usage",
            Failure::Io(_) => "io",
            Failure::Numeric(_) => "numeric",
            Failure::Verification(_) => "verify",
        }
    }

    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) | Failure::Io(_) => 1,
            Failure::Numeric(_) => 2,
            Failure::Verification(_) => 3,
        }
    }

    fn reason(&self) -> &str {
        match self {
            Failure::Usage(s) | Failure::Io(s) | Failure::Numeric(s) | Failure::Verification(s) => s,
        }
    }
}

impl From<FrontError> for Failure {
    fn from(e: FrontError) -> Self {
        let text = e.to_string();
        if e.is_numeric() {
            Failure::Numeric(text)
        } else if matches!(e, FrontError::Io(_)) {
            Failure::Io(text)
        } else {
            Failure::Usage(text)
        }
    }
}

type Outcome = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            // --help and --version.
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let text = e.to_string();
            let first = text.lines().next().unwrap_or("invalid arguments");
            return fail(&Failure::Usage(first.trim_start_matches("error: ").to_string()));
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => fail(&f),
    }
}

fn fail(f: &Failure) -> ExitCode {
    let one_line = f.reason().split_whitespace().collect::<Vec<_>>().join(" ");
    eprintln!("error[{}]: {one_line}", f.kind());
    ExitCode::from(f.code())
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Simulate(c) => simulate_cmd(&load(Mode::Simulate, &c, None)?),
        Command::Stability(c) => stability_cmd(&load(Mode::Stability, &c, None)?),
        Command::Converge(c) => converge_cmd(&load(Mode::Converge, &c, None)?),
        Command::Attractor(c) => attractor_cmd(&load(Mode::Attractor, &c, None)?),
        Command::Verify { common, seed, draws } => {
            let config = load(Mode::Verify, &common, None)?;
            verify_cmd(&config, seed.unwrap_or(config.seed), draws)
        }
        Command::Figure { common, figure_id } => figure_cmd(&load(Mode::Figure, &common, figure_id)?),
    }
}

/// Configuration file (if any), then command-line overrides, then validation.
fn load(mode: Mode, c: &Common, figure_id: Option<u32>) -> Result<RunConfig, Failure> {
    let mut config = match &c.config {
        Some(path) => {
            let text = fs::read_to_string(path)
                .map_err(|e| Failure::Usage(format!("cannot read config {}: {e}", path.display())))?;
            parse_config_unchecked(&text, Some(mode))?
        }
        None => RunConfig::defaults(mode),
    };
    config.apply(&Overrides {
        dt: c.dt,
        n_modes: c.n_modes,
        beta: c.beta,
        eps: c.eps,
        t_final: c.t_final,
        output_dir: c.out.clone(),
        figure_id,
    })?;
    Ok(config)
}

fn write(dir: &Path, name: &str, contents: &str) -> Outcome {
    fs::create_dir_all(dir).map_err(|e| Failure::Io(format!("cannot create {}: {e}", dir.display())))?;
    let path = dir.join(name);
    fs::write(&path, contents).map_err(|e| Failure::Io(format!("cannot write {}: {e}", path.display())))
}

fn to_json(value: &impl serde::Serialize) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("serializable value");
    text.push('\n');
    text
}

fn simulation(config: &RunConfig) -> Result<Trajectory, Failure> {
    let grid = Grid::new(config.grid)?;
    let stepper = Stepper::new(&grid, config.params)?;
    let options = SimulationOptions {
        t_final: config.t_final,
        snapshot_stride: config.snapshot_stride,
        blowup_bound: DEFAULT_BLOWUP_BOUND,
    };
    Ok(simulate_with(&config.psi0.build(&grid)?, &stepper, &options)?)
}

fn summary(config: &RunConfig, traj: &Trajectory) -> serde_json::Value {
    let last = traj.final_diagnostics();
    json!({
        "params": config.params,
        "n_modes": config.grid.n_modes,
        "dealias_fraction": config.grid.dealias_fraction,
        "psi0": config.psi0,
        "t_final": config.t_final,
        "steps": traj.diagnostics.len().saturating_sub(1),
        "snapshots": traj.len(),
        "final": last.map(|d| json!({
            "t": d.t,
            "l2_norm": d.l2_norm,
            "sup_norm": d.sup_norm,
            "mean": d.mean,
            "zero_mean_sup": d.zero_mean_sup,
        })),
    })
}

fn write_trajectory(config: &RunConfig, traj: &Trajectory, stem: &str) -> Outcome {
    let dir = &config.output_dir;
    write(dir, &format!("{stem}.csv"), &trajectory_csv(traj)?)?;
    write(dir, &format!("{stem}_diagnostics.csv"), &diagnostics_csv(traj))?;
    write(dir, &format!("{stem}.svg"), &waterfall_svg(traj)?)?;
    write(dir, &format!("{stem}.json"), &to_json(&summary(config, traj)))?;
    println!(
        "{} snapshots written to {}",
        traj.len(),
        dir.join(format!("{stem}.csv")).display()
    );
    Ok(())
}

fn simulate_cmd(config: &RunConfig) -> Outcome {
    let traj = simulation(config)?;
    write_trajectory(config, &traj, "trajectory")
}

fn figure_cmd(config: &RunConfig) -> Outcome {
    let id = config.figure_id.expect("validated figure id");
    let traj = simulation(config)?;
    write_trajectory(config, &traj, &format!("figure_{id:02}"))
}

fn stability_cmd(config: &RunConfig) -> Outcome {
    let report = spectrum_report(&config.params, config.k_max)?;
    let csv = report.to_csv();
    print!("{csv}");
    write(&config.output_dir, "stability.csv", &csv)?;
    let meta = json!({
        "u": config.params.u,
        "gamma": config.params.gamma,
        "ell": config.params.ell,
        "gamma_c": report.gamma_c,
        "classification": report.classification,
        "most_unstable_k": report.most_unstable_k,
    });
    write(&config.output_dir, "stability.json", &to_json(&meta))
}

fn converge_cmd(config: &RunConfig) -> Outcome {
    let grid = Grid::new(config.grid)?;
    let study = StudyConfig {
        dt: config.params.dt,
        ..StudyConfig::default()
    };
    let (result, monitors) = convergence_study_with_apriori(
        &config.psi0.build(&grid)?,
        config.params.beta,
        &config.eps_list,
        config.t_final,
        &study,
        config.apriori_order,
    )?;
    for (eps, err) in result.eps_values.iter().zip(&result.sup_errors) {
        println!("eps = {eps:e}  max sup error = {err:.6e}");
    }
    match result.fitted_order {
        Some(p) => println!("fitted order {p:.4}, monotone: {}", result.is_monotone()),
        None => println!("no order fitted"),
    }
    let bound = monitors.iter().map(|m| m.max).fold(0.0, f64::max);
    write(
        &config.output_dir,
        "convergence.json",
        &to_json(&json!({
            "n_modes": config.grid.n_modes,
            "dt": config.params.dt,
            "t_final": config.t_final,
            "result": result,
            "apriori_bound": bound,
            "apriori": monitors,
        })),
    )?;
    if result.failed.is_empty() {
        Ok(())
    } else {
        let (eps, reason) = &result.failed[0];
        Err(Failure::Numeric(format!("run at eps = {eps} failed: {reason}")))
    }
}

fn attractor_cmd(config: &RunConfig) -> Outcome {
    let grid = Grid::new(config.grid)?;
    let scan = ScanConfig {
        dt: config.params.dt,
        transient_fraction: config.transient_fraction,
        ..ScanConfig::default()
    };
    let reports = attractor_scan(
        &config.beta_list,
        config.params.eps,
        &config.psi0.build(&grid)?,
        config.t_final,
        &scan,
    )?;
    for r in &reports {
        let peak = r.autocorrelation_peak.map_or("-".to_string(), |p| format!("{p:.4}"));
        let period = r.period_estimate.map_or("-".to_string(), |p| format!("{p:.4}"));
        println!(
            "beta = {:<8} {:<9} peak {peak:<8} period {period:<8} sup {:.3e}",
            r.beta, r.classification, r.final_zero_mean_sup
        );
    }
    write(&config.output_dir, "attractor.json", &to_json(&reports))?;
    match reports.iter().find(|r| r.failure.is_some()) {
        Some(r) => Err(Failure::Numeric(format!(
            "run at beta = {} failed: {}",
            r.beta,
            r.failure.as_deref().unwrap_or_default()
        ))),
        None => Ok(()),
    }
}

fn verify_cmd(config: &RunConfig, seed: u64, draws: usize) -> Outcome {
    let report = run_battery(&VerifyOptions { seed, draws })?;
    println!("{report}");
    write(&config.output_dir, "verify.json", &to_json(&report))?;
    if report.passed() {
        Ok(())
    } else {
        Err(Failure::Verification(format!(
            "{} of {} checks failed",
            report.failures(),
            report.rows.len()
        )))
    }
}
