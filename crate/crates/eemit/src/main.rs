use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use eemit::config::{ConfigError, Pairs};
use eemit::pool::default_workers;
use eemit::repro;
use eemit::run::{run, Command, RunError, RunOptions};

/// Extreme-event statistics, Lyapunov exponents, scans and basins for forced oscillators.
#[derive(Parser)]
#[command(name = "eemit", version)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Integrate and write trajectory.csv (t, x, y).
    Simulate(Run),
    /// Peak statistics: peaks.csv, stats.csv, pdf.csv.
    Stats(Run),
    /// Probability, d_max (and optionally MLE) along one parameter: scan1d.csv.
    Scan1d(Run),
    /// Probability over two parameters: scan2d.csv.
    Scan2d(Run),
    /// Attractor maxima along one parameter: bifurcation.csv and scan1d.csv.
    Bifurcate(Run),
    /// Maximal Lyapunov exponent per initial condition: mle.csv.
    Mle(Run),
    /// Attractor labels over a grid of initial conditions: basin.csv.
    Basin(Run),
    /// Run a figure preset (see --list).
    Repro(Repro),
}

#[derive(Args)]
struct Common {
    /// Output directory.
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Worker threads for scans and basins.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    workers: Option<u64>,
    /// Override a configuration key (repeatable).
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
    /// Initial condition, replacing x0/y0 and ics.
    #[arg(long, value_name = "X,Y", allow_hyphen_values = true)]
    seed_ic: Option<String>,
    /// Skip the SVG quick-look plots.
    #[arg(long)]
    no_svg: bool,
}

#[derive(Args)]
struct Run {
    /// Configuration file (flat key=value).
    #[arg(long)]
    config: PathBuf,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct Repro {
    /// Preset id (e.g. fig2b) or `all`.
    #[arg(required_unless_present = "list")]
    figure: Option<String>,
    /// List the presets and exit.
    #[arg(long)]
    list: bool,
    #[command(flatten)]
    common: Common,
}

fn apply(mut pairs: Pairs, common: &Common) -> Result<eemit::Config, ConfigError> {
    for s in &common.set {
        pairs.set(s)?;
    }
    if let Some(ic) = &common.seed_ic {
        let bad = || ConfigError::Parse {
            line: 0,
            msg: format!("--seed-ic expects x,y, got `{ic}`"),
        };
        let (x, y) = ic.split_once(',').ok_or_else(bad)?;
        let (x, y) = (x.trim(), y.trim());
        x.parse::<f64>().map_err(|_| bad())?;
        y.parse::<f64>().map_err(|_| bad())?;
        pairs.set(&format!("x0={x}"))?;
        pairs.set(&format!("y0={y}"))?;
        pairs.set(&format!("ics={x},{y}"))?;
    }
    pairs.into_config()
}

fn execute(cmd: Command, pairs: Pairs, common: &Common, out: PathBuf) -> Result<(), RunError> {
    let cfg = apply(pairs, common)?;
    let opts = RunOptions {
        out,
        workers: common.workers.map_or_else(default_workers, |w| w as usize),
        svg: !common.no_svg,
    };
    let report = run(cmd, &cfg, &opts)?;
    // a closed pipe (e.g. `| head`) is not an error once the files are written
    let mut stdout = std::io::stdout().lock();
    for line in &report.lines {
        let _ = writeln!(stdout, "{line}");
    }
    for f in &report.files {
        let _ = writeln!(stdout, "wrote {}", f.display());
    }
    Ok(())
}

fn main_inner(cli: Cli) -> Result<(), RunError> {
    let (cmd, args) = match cli.cmd {
        Cmd::Simulate(a) => (Command::Simulate, a),
        Cmd::Stats(a) => (Command::Stats, a),
        Cmd::Scan1d(a) => (Command::Scan1d, a),
        Cmd::Scan2d(a) => (Command::Scan2d, a),
        Cmd::Bifurcate(a) => (Command::Bifurcate, a),
        Cmd::Mle(a) => (Command::Mle, a),
        Cmd::Basin(a) => (Command::Basin, a),
        Cmd::Repro(r) => return repro_cmd(r),
    };
    let text = std::fs::read_to_string(&args.config).map_err(|e| ConfigError::Parse {
        line: 0,
        msg: format!("cannot read {}: {e}", args.config.display()),
    })?;
    let pairs = Pairs::parse(&text)?;
    execute(cmd, pairs, &args.common, args.common.out.clone())
}

fn repro_cmd(r: Repro) -> Result<(), RunError> {
    if r.list {
        for p in repro::presets() {
            let _ = writeln!(
                std::io::stdout(),
                "{:<11} {:<10} {}",
                p.id,
                p.command.name(),
                p.title
            );
        }
        return Ok(());
    }
    let id = r.figure.unwrap_or_default();
    let chosen = if id.eq_ignore_ascii_case("all") {
        repro::presets()
    } else {
        vec![repro::find(&id).ok_or_else(|| {
            ConfigError::Invalid(format!("unknown preset `{id}` (try `eemit repro --list`)"))
        })?]
    };
    for p in chosen {
        let _ = writeln!(
            std::io::stdout(),
            "== {} ({}): {}",
            p.id,
            p.command.name(),
            p.title
        );
        let pairs = Pairs::parse(&p.config)?;
        execute(p.command, pairs, &r.common, r.common.out.join(p.id))?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match main_inner(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
