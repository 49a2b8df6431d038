//! `arcsine-fock`: exact moment tables, convergence runs, spectral
//! reconstructions and the selfcheck suite from the command line.

mod commands;
mod config;
mod svg;

use std::path::PathBuf;
use std::process::ExitCode;

use arcsine_fock::selfcheck::Suite;
use arcsine_fock::{parse_exact, JacobiSequence, ScaleRule};
use clap::{Args, Parser, Subcommand};

use commands::CliError;
use config::{field_error, Command, EngineChoice, Format, RunConfig};

#[derive(Parser)]
#[command(
    name = "arcsine-fock",
    version,
    about = "Exact number-state moments and their arcsine limit"
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Exact scaled moments on an (N, order) grid.
    Moments {
        #[command(flatten)]
        shared: Shared,
        #[arg(long, value_enum, default_value_t = EngineChoice::Tridiagonal)]
        engine: EngineChoice,
    },
    /// Scaled moments against arcsine targets, with envelopes.
    Converge {
        #[command(flatten)]
        shared: Shared,
    },
    /// Spectral measure of one number state from a truncated Jacobi matrix.
    Reconstruct {
        #[command(flatten)]
        shared: Shared,
        /// Also write the Hermite density grid (standard sequence only).
        #[arg(long, value_name = "PATH")]
        density: Option<PathBuf>,
    },
    /// Time-averaged moments of the classical oscillator `A sin t`.
    Classical {
        #[command(flatten)]
        shared: Shared,
        /// Squared amplitude, a positive rational.
        #[arg(
            long = "A2",
            value_name = "RATIONAL",
            default_value = "2",
            allow_hyphen_values = true
        )]
        amplitude_squared: String,
        /// Trapezoid panels for the quadrature cross-check.
        #[arg(long, default_value_t = 256)]
        panels: usize,
    },
    /// Cross-engine oracle suite.
    Selfcheck {
        #[command(flatten)]
        shared: Shared,
        /// Smaller grids.
        #[arg(long)]
        fast: bool,
        #[arg(long, hide = true, value_name = "SUITE")]
        inject_fault: Option<String>,
    },
}

#[derive(Args)]
struct Shared {
    /// `standard`, `q=VAL`, or a JSON object such as {"kind":"q","q":"1/2"}.
    #[arg(long, default_value = "standard")]
    jacobi: String,
    /// Number state indices, comma separated.
    #[arg(
        long = "N",
        value_name = "LIST",
        value_delimiter = ',',
        allow_negative_numbers = true
    )]
    states: Option<Vec<usize>>,
    /// Moment orders, comma separated.
    #[arg(
        long,
        value_name = "LIST",
        value_delimiter = ',',
        allow_negative_numbers = true
    )]
    orders: Option<Vec<usize>>,
    /// `canonical` or a positive rational.
    #[arg(long, default_value = "canonical", allow_hyphen_values = true)]
    scale: String,
    /// Truncation dimension for reconstruct (default 2N + 64).
    #[arg(long = "K", allow_negative_numbers = true)]
    k: Option<usize>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Write the main output here instead of stdout.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Also write an SVG figure here.
    #[arg(long, value_name = "PATH")]
    plot: Option<PathBuf>,
    /// Print the resolved configuration as JSON and exit.
    #[arg(long)]
    print_config: bool,
}

impl Shared {
    fn apply(self, config: &mut RunConfig) -> Result<bool, CliError> {
        config.jacobi =
            JacobiSequence::parse(&self.jacobi).map_err(|e| field_error("--jacobi", e))?;
        if let Some(states) = self.states {
            config.states = states;
        }
        if let Some(orders) = self.orders {
            config.orders = orders;
        }
        config.scale = ScaleRule::parse(&self.scale).map_err(|e| field_error("--scale", e))?;
        config.k = self.k;
        config.format = self.format;
        config.out = self.out;
        config.plot = self.plot;
        Ok(self.print_config)
    }
}

fn build(cmd: Cmd) -> Result<(RunConfig, bool, Option<Suite>), CliError> {
    let (mut config, shared) = match cmd {
        Cmd::Moments { shared, engine } => {
            let mut c = RunConfig::new(Command::Moments);
            c.engine = engine;
            (c, shared)
        }
        Cmd::Converge { shared } => (RunConfig::new(Command::Converge), shared),
        Cmd::Reconstruct { shared, density } => {
            let mut c = RunConfig::new(Command::Reconstruct);
            c.density = density;
            (c, shared)
        }
        Cmd::Classical {
            shared,
            amplitude_squared,
            panels,
        } => {
            let mut c = RunConfig::new(Command::Classical);
            c.amplitude_squared =
                parse_exact(&amplitude_squared).map_err(|e| field_error("--A2", e))?;
            c.panels = panels;
            (c, shared)
        }
        Cmd::Selfcheck {
            shared,
            fast,
            inject_fault,
        } => {
            let fault = inject_fault
                .map(|name| {
                    Suite::from_name(&name).ok_or_else(|| {
                        field_error("--inject-fault", format!("unknown suite `{name}`"))
                    })
                })
                .transpose()?;
            let mut c = RunConfig::new(Command::Selfcheck);
            c.fast = fast;
            let print = shared.apply(&mut c)?;
            return Ok((c, print, fault));
        }
    };
    let print = shared.apply(&mut config)?;
    Ok((config, print, None))
}

fn run(cli: Cli) -> Result<bool, CliError> {
    let (config, print_config, fault) = build(cli.command)?;
    if print_config {
        config.validate()?;
        println!("{}", config.to_json());
        return Ok(true);
    }
    commands::execute(&config, fault)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
