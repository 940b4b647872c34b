//! Trajectory files: CSV of nodal values and a waterfall SVG.
//!
//! Numbers are written with 17 significant digits, which round-trips every
//! `f64`. Output never depends on locale or wall-clock time.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use crate::dynamics::Trajectory;
use crate::error::{FrontError, Result};

/// Header `t,x_0,…,x_{N−1}`, then one row per snapshot.
pub fn trajectory_csv(traj: &Trajectory) -> Result<String> {
    let first = traj.snapshots.first().ok_or(FrontError::EmptyTrajectory)?;
    let n = first.grid().n_modes();
    let mut out = String::from("t");
    for j in 0..n {
        write!(out, ",x_{j}").unwrap();
    }
    out.push('\n');
    for (t, snap) in traj.times.iter().zip(&traj.snapshots) {
        write!(out, "{t:.16e}").unwrap();
        for v in snap.to_physical() {
            write!(out, ",{v:.16e}").unwrap();
        }
        out.push('\n');
    }
    Ok(out)
}

/// Writes [`trajectory_csv`]; an empty trajectory is an error and creates
/// no file.
pub fn write_trajectory_csv(traj: &Trajectory, path: &Path) -> Result<()> {
    let text = trajectory_csv(traj)?;
    fs::write(path, text)?;
    Ok(())
}

/// Per-step diagnostics with header
/// `t,l2_norm,sup_norm,mean,zero_mean_l2,zero_mean_sup`.
pub fn diagnostics_csv(traj: &Trajectory) -> String {
    let mut out = String::from("t,l2_norm,sup_norm,mean,zero_mean_l2,zero_mean_sup\n");
    for d in &traj.diagnostics {
        writeln!(
            out,
            "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
            d.t, d.l2_norm, d.sup_norm, d.mean, d.zero_mean_l2, d.zero_mean_sup
        )
        .unwrap();
    }
    out
}

/// Times and nodal rows of a trajectory CSV.
#[derive(Debug, Clone, PartialEq)]
pub struct CsvTrajectory {
    pub times: Vec<f64>,
    pub rows: Vec<Vec<f64>>,
}

pub fn read_trajectory_csv(path: &Path) -> Result<CsvTrajectory> {
    let text = fs::read_to_string(path)?;
    parse_trajectory_csv(&text).map_err(|reason| FrontError::Csv {
        path: PathBuf::from(path),
        reason,
    })
}

fn parse_trajectory_csv(text: &str) -> std::result::Result<CsvTrajectory, String> {
    let mut lines = text.lines();
    let header = lines.next().ok_or("empty file")?;
    let columns: Vec<&str> = header.split(',').collect();
    if columns.first() != Some(&"t") || columns.len() < 2 {
        return Err(format!("unexpected header `{header}`"));
    }
    let width = columns.len();
    let mut times = Vec::new();
    let mut rows = Vec::new();
    for (i, line) in lines.enumerate() {
        let values = line
            .split(',')
            .map(|v| v.parse::<f64>().map_err(|e| format!("row {}: {e}", i + 1)))
            .collect::<std::result::Result<Vec<f64>, String>>()?;
        if values.len() != width {
            return Err(format!("row {} has {} columns, expected {width}", i + 1, values.len()));
        }
        times.push(values[0]);
        rows.push(values[1..].to_vec());
    }
    Ok(CsvTrajectory { times, rows })
}

/// Consecutive fronts stacked upward with time, one polyline per snapshot.
pub fn waterfall_svg(traj: &Trajectory) -> Result<String> {
    const WIDTH: f64 = 800.0;
    const HEIGHT: f64 = 600.0;
    const MARGIN: f64 = 40.0;

    let first = traj.snapshots.first().ok_or(FrontError::EmptyTrajectory)?;
    let period = first.grid().period();
    let nodes = first.grid().nodes();
    let fronts: Vec<Vec<f64>> = traj.snapshots.iter().map(|s| s.to_physical()).collect();

    // Each front is drawn relative to its own mean so that the drift does
    // not hide the shape; the amplitude scale is shared.
    let amplitude = fronts
        .iter()
        .map(|f| {
            let mean = f.iter().sum::<f64>() / f.len() as f64;
            f.iter().map(|v| (v - mean).abs()).fold(0.0, f64::max)
        })
        .fold(0.0, f64::max);
    let count = fronts.len();
    let spacing = (HEIGHT - 2.0 * MARGIN) / count.max(1) as f64;
    let scale = if amplitude > 0.0 {
        1.5 * spacing / amplitude
    } else {
        0.0
    };

    let mut svg = String::new();
    writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    )
    .unwrap();
    writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#).unwrap();
    for (i, (front, t)) in fronts.iter().zip(&traj.times).enumerate() {
        let mean = front.iter().sum::<f64>() / front.len() as f64;
        let baseline = HEIGHT - MARGIN - spacing * i as f64;
        let mut points = String::new();
        for (x, v) in nodes.iter().zip(front).chain(std::iter::once((&period, &front[0]))) {
            let px = MARGIN + (WIDTH - 2.0 * MARGIN) * x / period;
            let py = baseline - scale * (v - mean);
            write!(points, "{px:.3},{py:.3} ").unwrap();
        }
        writeln!(
            svg,
            r#"<polyline fill="none" stroke="black" stroke-width="0.8" points="{}"><title>t = {t:.6}</title></polyline>"#,
            points.trim_end()
        )
        .unwrap();
    }
    writeln!(svg, "</svg>").unwrap();
    Ok(svg)
}

pub fn write_waterfall_svg(traj: &Trajectory, path: &Path) -> Result<()> {
    let text = waterfall_svg(traj)?;
    fs::write(path, text)?;
    Ok(())
}
