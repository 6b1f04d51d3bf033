use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use ddchan_harness::diag::{diagnose, BoundConstants};
use ddchan_harness::output::{read_csv, write_csv};
use ddchan_harness::plot::render_svg;
use ddchan_harness::{presets, run_sweep, summarize, ExperimentConfig, HarnessError, Result};

#[derive(Parser)]
#[command(name = "ddchan", version, about = "Compressive doubly selective channel estimation experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the sweep described by a configuration file.
    Run {
        #[arg(long)]
        config: PathBuf,
        #[command(flatten)]
        opts: RunOpts,
    },
    /// Run a built-in preset.
    Preset {
        #[arg(long, value_parser = presets::NAMES)]
        name: String,
        /// Print the preset configuration instead of running it.
        #[arg(long)]
        show: bool,
        #[command(flatten)]
        opts: RunOpts,
    },
    /// Draw the per-point means of a result CSV as an SVG chart.
    Plot {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Print the sparsity estimate, basis coherences and pilot-count bounds.
    Diag {
        #[arg(long, conflicts_with = "preset", required_unless_present = "preset")]
        config: Option<PathBuf>,
        #[arg(long, value_parser = presets::NAMES)]
        preset: Option<String>,
    },
}

#[derive(clap::Args)]
struct RunOpts {
    /// Master seed, overriding the configuration.
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads (default: one per core).
    #[arg(long)]
    workers: Option<usize>,
    /// Output CSV (default: `output.path` or `<preset>.csv`).
    #[arg(long)]
    out: Option<PathBuf>,
}

fn run(mut config: ExperimentConfig, opts: &RunOpts) -> Result<()> {
    if let Some(seed) = opts.seed {
        config.seed = seed;
    }
    let out = opts
        .out
        .clone()
        .or_else(|| config.output.path.as_ref().map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from(format!("{}.csv", config.preset)));
    let result = run_sweep(&config, opts.workers)?;
    write_csv(&result.rows, &out)?;
    println!(
        "{}: {} rows, {} of {} trials aborted, written to {}",
        config.preset,
        result.rows.len(),
        result.aborted,
        result.attempted,
        out.display()
    );
    println!("{:>10}  {:<34} {:>9} {:>10} {:>10}", config.sweep.axis.name(), "estimator", "mse_db", "ber", "ref_ber");
    for s in summarize(&result.rows) {
        println!(
            "{:>10}  {:<34} {:>9.2} {:>10.3e} {:>10.3e}",
            s.axis_value,
            s.label(),
            s.mse_db,
            s.ber,
            s.ref_ber
        );
    }
    Ok(())
}

fn plot(input: &Path, out: &Path) -> Result<()> {
    let rows = read_csv(input)?;
    let svg = render_svg(&rows)?;
    std::fs::write(out, svg).map_err(|e| HarnessError::io(out, e))?;
    println!("wrote {}", out.display());
    Ok(())
}

fn diag(config: &ExperimentConfig) -> Result<()> {
    let d = diagnose(config, BoundConstants::default())?;
    println!("D = {}, J = {}, pilots = {}, sparsity S = {}", d.d, d.j, d.pilots, d.sparsity);
    let base = d.bases[0].pilot_bound;
    for b in &d.bases {
        println!(
            "{:<10} coherence {:.4}  pilot bound {:.4e} (x{:.3} vs dft)",
            b.basis,
            b.coherence,
            b.pilot_bound,
            b.pilot_bound / base
        );
    }
    Ok(())
}

fn dispatch(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Run { config, opts } => run(ExperimentConfig::load(&config)?, &opts),
        Command::Preset { name, show, opts } => {
            if show {
                print!("{}", presets::preset_text(&name).unwrap_or_default());
                return Ok(());
            }
            run(presets::preset(&name)?, &opts)
        }
        Command::Plot { input, out } => plot(&input, &out),
        Command::Diag { config, preset } => {
            let cfg = match (config, preset) {
                (Some(path), _) => ExperimentConfig::load(&path)?,
                (None, Some(name)) => presets::preset(&name)?,
                (None, None) => unreachable!("clap requires one of them"),
            };
            diag(&cfg)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            // --help and --version
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let msg = e.to_string();
            let first = msg.lines().next().unwrap_or("").trim_start_matches("error: ");
            eprintln!("{}", HarnessError::Config(first.to_string()).error_line().replacen("config", "usage", 1));
            return ExitCode::from(2);
        }
    };
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", e.error_line());
            ExitCode::from(1)
        }
    }
}
