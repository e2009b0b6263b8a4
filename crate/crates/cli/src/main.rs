use std::io;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use optocool_cli::commands::{self, RunOptions};
use optocool_cli::{load_config, CliError};

/// Shortcut-to-adiabaticity cooling of an optomechanical resonator.
///
/// Times are in units of 1/ω, the bare mechanical angular frequency.
#[derive(Parser)]
#[command(name = "optocool", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct ConfigArg {
    /// JSON run configuration.
    #[arg(long)]
    config: PathBuf,
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    config: ConfigArg,
    /// Stroke duration.
    #[arg(long)]
    tf: Option<f64>,
    /// Frequency reduction factor for fast cooling.
    #[arg(short = 'R')]
    ratio_r: Option<f64>,
    /// Repeat the run with mechanical damping at the configured Q.
    #[arg(long)]
    damped: bool,
    /// Also run a direct ramp between the same endpoints.
    #[arg(long)]
    baseline: bool,
    /// Write the summary JSON here.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write series.csv, summary.json and report.json here.
    #[arg(long)]
    outdir: Option<PathBuf>,
}

impl RunArgs {
    fn options(&self) -> RunOptions {
        RunOptions {
            tf: self.tf,
            ratio_r: self.ratio_r,
            damped: self.damped,
            baseline: self.baseline,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Variant {
    FastCooling,
    GroundState,
}

#[derive(Subcommand)]
enum Command {
    /// Emit the designed schedule and drive intensities as CSV.
    Design {
        #[command(flatten)]
        config: ConfigArg,
        #[arg(long)]
        tf: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Design and propagate the configured protocol.
    Simulate(RunArgs),
    /// Run one of the built-in protocols.
    Protocol {
        variant: Variant,
        #[command(flatten)]
        args: RunArgs,
    },
    /// Schedules and drives for t_f = 0.2, 0.6 and 2.
    Fig2 {
        #[command(flatten)]
        config: ConfigArg,
        #[arg(long, default_value = ".")]
        outdir: PathBuf,
    },
    /// One summary row per duration.
    Sweep {
        #[command(flatten)]
        config: ConfigArg,
        #[arg(long)]
        from: f64,
        #[arg(long)]
        to: f64,
        #[arg(long, default_value_t = 11)]
        points: usize,
        #[arg(long)]
        parallel: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Shortest duration the drives can realize.
    Mintime {
        #[command(flatten)]
        config: ConfigArg,
        /// Upper limit on the Born-Oppenheimer ratio.
        #[arg(long)]
        max_bo: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn run(cli: Cli) -> Result<(), CliError> {
    let stdout = &mut io::stdout().lock();
    match cli.command {
        Command::Design { config, tf, out } => {
            commands::cmd_design(&load_config(&config.config)?, tf, out.as_deref(), stdout)
        }
        Command::Simulate(args) => commands::cmd_simulate(
            &load_config(&args.config.config)?,
            &args.options(),
            args.out.as_deref(),
            args.outdir.as_deref(),
            stdout,
        ),
        Command::Protocol { variant, args } => {
            let name = match variant {
                Variant::FastCooling => "fast-cooling",
                Variant::GroundState => "ground-state",
            };
            commands::cmd_protocol(
                &load_config(&args.config.config)?,
                name,
                &args.options(),
                args.out.as_deref(),
                args.outdir.as_deref(),
                stdout,
            )
        }
        Command::Fig2 { config, outdir } => commands::cmd_fig2(&load_config(&config.config)?, &outdir),
        Command::Sweep {
            config,
            from,
            to,
            points,
            parallel,
            out,
        } => {
            let config = load_config(&config.config)?;
            let durations = commands::sweep_points(from, to, points)?;
            commands::cmd_sweep(&config, &durations, parallel, out.as_deref(), stdout)
        }
        Command::Mintime { config, max_bo, out } => {
            commands::cmd_mintime(&load_config(&config.config)?, max_bo, out.as_deref(), stdout)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(3),
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
