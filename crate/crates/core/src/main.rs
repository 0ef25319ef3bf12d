use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use holophase::cli::report::{plane_table, rows_table, synth_table};
use holophase::cli::{
    parse_config, run_convergence, run_plane_demo, run_recover, run_synth, write_plane_report, write_report,
    write_synth, ExperimentConfig, RunOptions,
};
use holophase::Error;

#[derive(Parser)]
#[command(name = "holophase", version, about = "Recover radiated waves from intensity-only ray data")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print field values and intensities along the configured ray.
    Synth(Common),
    /// Recover far-field coefficients along a single ray.
    Recover(Common),
    /// Recover and estimate per-level convergence orders.
    Convergence(Common),
    /// Recover the radiated field at target points of a plane.
    Plane(Common),
}

#[derive(Args)]
struct Common {
    /// Experiment configuration (TOML).
    #[arg(long)]
    config: PathBuf,
    /// Output directory; overrides `output.dir`.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Noise seed; overrides `noise.seed`.
    #[arg(long)]
    seed: Option<u64>,
    /// Suppress the summary on stdout.
    #[arg(long)]
    quiet: bool,
}

fn load(c: &Common) -> Result<ExperimentConfig, Error> {
    let text = fs::read_to_string(&c.config).map_err(|e| Error::Io {
        path: c.config.clone(),
        source: e.into(),
    })?;
    parse_config(&text)
}

fn run(cmd: &Command) -> Result<bool, Error> {
    let common = match cmd {
        Command::Synth(c) | Command::Recover(c) | Command::Convergence(c) | Command::Plane(c) => c,
    };
    let cfg = load(common)?;
    let opts = RunOptions { seed: common.seed };
    let dir = common.out.clone().unwrap_or_else(|| cfg.output.dir.clone());
    let format = cfg.output.format;
    let show = |bytes: Vec<u8>, text: String| {
        if !common.quiet {
            print!("{}", String::from_utf8_lossy(&bytes));
            print!("{text}");
        }
    };
    match cmd {
        Command::Synth(_) => {
            let rows = run_synth(&cfg, opts)?;
            write_synth(&rows, &cfg.id, format, &dir)?;
            show(synth_table(&rows, format)?, String::new());
            Ok(true)
        }
        Command::Recover(_) | Command::Convergence(_) => {
            let run = if matches!(cmd, Command::Recover(_)) {
                run_recover(&cfg, opts)?
            } else {
                run_convergence(&cfg, opts)?
            };
            write_report(&run.rows, &run.summary, format, &dir)?;
            show(rows_table(&run.rows, format)?, run.summary.render());
            Ok(run.summary.passed())
        }
        Command::Plane(_) => {
            let run = run_plane_demo(&cfg, opts)?;
            write_plane_report(&run.rows, &run.summary, format, &dir)?;
            show(plane_table(&run.rows, format)?, run.summary.render());
            Ok(run.summary.passed())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
