//! Command execution: run a configuration, write tables and plots.

use std::fs::{self, File};
use std::io::{self, BufWriter};
use std::path::{Path, PathBuf};

use eemit_core::basin::{basin_grid, Label};
use eemit_core::integrator::DEFAULT_RECORD;
use eemit_core::scan::{distinct_count, Collect, DISTINCT_TOLERANCE};
use eemit_core::{ee_stats, peak_histogram, record_peaks, scan_1d, scan_2d, simulate, SimError};

use crate::config::{Config, ConfigError};
use crate::output::{self, MleRow};
use crate::pool::Pool;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Simulate,
    Stats,
    Scan1d,
    Scan2d,
    Bifurcate,
    Mle,
    Basin,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Simulate => "simulate",
            Command::Stats => "stats",
            Command::Scan1d => "scan1d",
            Command::Scan2d => "scan2d",
            Command::Bifurcate => "bifurcate",
            Command::Mle => "mle",
            Command::Basin => "basin",
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("{0}")]
    Simulation(#[from] SimError),
    #[error("writing {path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("writing {path}: {source}")]
    Csv { path: PathBuf, source: csv::Error },
    #[error("starting worker pool: {0}")]
    Pool(#[from] rayon::ThreadPoolBuildError),
}

impl RunError {
    /// 2 = config parse error, 3 = validation error, 1 = anything at run time.
    pub fn exit_code(&self) -> u8 {
        match self {
            RunError::Config(e) => e.exit_code(),
            _ => 1,
        }
    }
}

pub struct RunOptions {
    pub out: PathBuf,
    pub workers: usize,
    pub svg: bool,
}

/// Files written and a human-readable summary.
#[derive(Debug, Default)]
pub struct Report {
    pub files: Vec<PathBuf>,
    pub lines: Vec<String>,
}

struct Out<'a> {
    dir: &'a Path,
    report: Report,
}

impl Out<'_> {
    fn csv<F>(&mut self, name: &str, write: F) -> Result<(), RunError>
    where
        F: FnOnce(BufWriter<File>) -> csv::Result<()>,
    {
        let path = self.dir.join(name);
        let file = File::create(&path).map_err(|source| RunError::Io {
            path: path.clone(),
            source,
        })?;
        write(BufWriter::new(file)).map_err(|source| RunError::Csv {
            path: path.clone(),
            source,
        })?;
        self.report.files.push(path);
        Ok(())
    }

    fn text(&mut self, name: &str, body: &str) -> Result<(), RunError> {
        let path = self.dir.join(name);
        fs::write(&path, body).map_err(|source| RunError::Io {
            path: path.clone(),
            source,
        })?;
        self.report.files.push(path);
        Ok(())
    }

    fn say(&mut self, line: String) {
        self.report.lines.push(line);
    }
}

pub fn run(cmd: Command, cfg: &Config, opts: &RunOptions) -> Result<Report, RunError> {
    fs::create_dir_all(&opts.out).map_err(|source| RunError::Io {
        path: opts.out.clone(),
        source,
    })?;
    let mut out = Out {
        dir: &opts.out,
        report: Report::default(),
    };
    let spec = &cfg.spec;
    match cmd {
        Command::Simulate => {
            let plan = cfg.sim_plan(DEFAULT_RECORD);
            let traj = simulate(spec, &plan)?;
            out.csv("trajectory.csv", |w| output::trajectory(w, &traj))?;
            if opts.svg {
                // a leading window rather than a thinned record, so oscillations stay visible
                let window: Vec<(f64, f64, f64)> = traj.rows().take(20_000).collect();
                let series: Vec<(f64, f64)> = window
                    .iter()
                    .zip(&traj.values)
                    .map(|(r, &v)| (r.0, v))
                    .collect();
                let phase: Vec<(f64, f64)> = window.iter().map(|r| (r.1, r.2)).collect();
                out.text(
                    "trajectory.svg",
                    &output::line_plot(&[series], "t", plan.observable.name()),
                )?;
                out.text("phase.svg", &output::line_plot(&[phase], "x", "y"))?;
            }
            out.say(format!(
                "{} samples of {} ({})",
                traj.len(),
                spec.kind,
                plan.observable.name()
            ));
        }
        Command::Stats => {
            let plan = cfg.sim_plan(DEFAULT_RECORD);
            let peaks = record_peaks(spec, &plan)?;
            let stats = ee_stats(&peaks, cfg.qualifier());
            let hist = peak_histogram(&peaks, cfg.bins, None);
            out.csv("peaks.csv", |w| output::peaks(w, &peaks))?;
            out.csv("stats.csv", |w| output::stats(w, &stats))?;
            out.csv("pdf.csv", |w| output::histogram(w, &hist))?;
            if opts.svg {
                let pdf: Vec<(f64, f64)> = hist
                    .centers
                    .iter()
                    .copied()
                    .zip(hist.densities.iter().copied())
                    .collect();
                let threshold = vec![
                    (stats.threshold, 0.0),
                    (
                        stats.threshold,
                        hist.densities.iter().copied().fold(0.0, f64::max),
                    ),
                ];
                out.text(
                    "pdf.svg",
                    &output::line_plot(&[pdf, threshold], "peak value", "density"),
                )?;
            }
            out.say(format!(
                "peaks {}  events {}  probability {}  threshold {}  d_max {}{}",
                stats.peak_count,
                stats.ee_count,
                stats.probability,
                stats.threshold,
                stats.d_max,
                if stats.degenerate {
                    "  (zero spread)"
                } else {
                    ""
                }
            ));
        }
        Command::Scan1d | Command::Bifurcate => {
            let bif = cmd == Command::Bifurcate;
            let plan = cfg.scan_plan(
                false,
                Collect {
                    bif_maxima: bif,
                    ..Collect::default()
                },
            )?;
            let pool = Pool::new(opts.workers)?;
            let rows = scan_1d(&plan, &pool).map_err(|e| ConfigError::Invalid(e.to_string()))?;
            out.csv("scan1d.csv", |w| output::scan1d(w, &rows))?;
            if bif {
                out.csv("bifurcation.csv", |w| output::bifurcation(w, &rows))?;
            }
            let n_ics = plan.ics.len();
            if opts.svg {
                let per_ic = |pick: &dyn Fn(&eemit_core::scan::PointResult) -> Option<f64>| -> Vec<Vec<(f64, f64)>> {
                    (0..n_ics)
                        .map(|k| rows.iter().filter_map(|r| pick(&r.results[k]).map(|v| (r.p1, v))).collect())
                        .collect()
                };
                let name = plan.axis1.param.key();
                out.text(
                    "probability.svg",
                    &output::line_plot(&per_ic(&|r| r.probability()), name, "probability"),
                )?;
                out.text(
                    "d_max.svg",
                    &output::line_plot(&per_ic(&|r| r.d_max()), name, "d_max"),
                )?;
                if plan.collect.mle {
                    out.text(
                        "mle.svg",
                        &output::line_plot(&per_ic(&|r| r.mle), name, "MLE"),
                    )?;
                }
                if bif {
                    let pts: Vec<Vec<(f64, f64)>> = (0..n_ics)
                        .map(|k| {
                            rows.iter()
                                .flat_map(|r| {
                                    r.results[k].bif_maxima.iter().map(move |&m| (r.p1, m))
                                })
                                .collect()
                        })
                        .collect();
                    out.text(
                        "bifurcation.svg",
                        &output::scatter_plot(&pts, name, plan.sim.observable.name()),
                    )?;
                }
            }
            let mut nonzero = 0;
            let mut diverged = 0;
            for row in &rows {
                for r in &row.results {
                    nonzero += usize::from(r.probability().is_some_and(|p| p > 0.0));
                    diverged += usize::from(r.diverged());
                }
            }
            out.say(format!(
                "{} points x {} initial conditions: {} with events, {} diverged",
                rows.len(),
                n_ics,
                nonzero,
                diverged
            ));
            if bif {
                for row in &rows {
                    let counts: Vec<String> = row
                        .results
                        .iter()
                        .map(|r| distinct_count(&r.bif_maxima, DISTINCT_TOLERANCE).to_string())
                        .collect();
                    out.say(format!(
                        "{} = {}: distinct maxima {}",
                        plan.axis1.param,
                        row.p1,
                        counts.join(" ")
                    ));
                }
            }
        }
        Command::Scan2d => {
            let plan = cfg.scan_plan(true, Collect::default())?;
            let pool = Pool::new(opts.workers)?;
            let grid = scan_2d(&plan, &pool).map_err(|e| ConfigError::Invalid(e.to_string()))?;
            out.csv("scan2d.csv", |w| output::scan2d(w, &grid))?;
            if opts.svg {
                let (a1, a2) = (grid.axis1, grid.axis2);
                // raster columns follow axis 1, rows axis 2
                let mut cells = Vec::with_capacity(grid.rows.len());
                for j in 0..a2.points {
                    for i in 0..a1.points {
                        cells.push(output::probability_color(
                            grid.cell(i, j).results[0].probability(),
                            4e-5,
                        ));
                    }
                }
                out.text(
                    "scan2d.svg",
                    &output::raster(
                        a1.points,
                        a2.points,
                        (a1.lo, a1.hi),
                        (a2.lo, a2.hi),
                        &cells,
                        a1.param.key(),
                        a2.param.key(),
                    ),
                )?;
            }
            let nonzero = grid
                .rows
                .iter()
                .filter(|r| r.results[0].probability().is_some_and(|p| p > 0.0))
                .count();
            out.say(format!(
                "{} cells, {} with events",
                grid.rows.len(),
                nonzero
            ));
        }
        Command::Mle => {
            let settings = cfg.mle_settings();
            settings
                .validate()
                .map_err(|e| ConfigError::Invalid(e.to_string()))?;
            let rows: Vec<MleRow> = cfg
                .initial_conditions()
                .into_iter()
                .map(|ic| {
                    let mle = eemit_core::mle(spec, ic, &settings).ok();
                    let label = match mle {
                        None => Label::Divergent,
                        Some(l) if l > eemit_core::CHAOS_THRESHOLD => Label::Chaotic,
                        Some(_) => Label::Periodic,
                    };
                    MleRow {
                        x0: ic.x,
                        y0: ic.y,
                        mle,
                        label: label.name(),
                    }
                })
                .collect();
            out.csv("mle.csv", |w| output::mle(w, &rows))?;
            for r in &rows {
                out.say(format!(
                    "ic ({}, {}): MLE {} ({})",
                    r.x0,
                    r.y0,
                    r.mle.map_or("-".into(), |v| v.to_string()),
                    r.label
                ));
            }
        }
        Command::Basin => {
            let plan = cfg.basin_plan()?;
            let pool = Pool::new(opts.workers)?;
            let grid = basin_grid(&plan, &pool).map_err(|e| ConfigError::Invalid(e.to_string()))?;
            out.csv("basin.csv", |w| output::basin(w, &grid))?;
            if opts.svg {
                let cells: Vec<String> = grid
                    .cells
                    .iter()
                    .map(|c| {
                        match c.label {
                            Label::Chaotic => "#909090",
                            Label::Periodic => "#d62728",
                            Label::Divergent => "#000000",
                        }
                        .to_string()
                    })
                    .collect();
                out.text(
                    "basin.svg",
                    &output::raster(
                        plan.nx,
                        plan.ny,
                        plan.x_range,
                        plan.y_range,
                        &cells,
                        "x0",
                        "y0",
                    ),
                )?;
            }
            out.say(format!(
                "{} cells: {} periodic, {} chaotic, {} divergent; {} where the stroboscopic count disagrees",
                grid.cells.len(),
                grid.count(Label::Periodic),
                grid.count(Label::Chaotic),
                grid.count(Label::Divergent),
                grid.disagreements()
            ));
        }
    }
    Ok(out.report)
}
