mod commands;
mod config;
mod error;
mod output;

use clap::{Parser, Subcommand};
use commands::Ctx;
use error::CliError;
use output::Sink;
use std::path::PathBuf;
use std::process::ExitCode;

/// Scattering data, long-time asymptotics and direct simulation for the
/// nonlocal NLS equation.
#[derive(Parser, Debug)]
#[command(version, about)]
struct Args {
    #[command(subcommand)]
    command: Command,
    /// Run configuration (TOML).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory, overriding `output.dir` of the config.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Proceed when the assumptions fail; outputs are watermarked.
    #[arg(long, global = true)]
    override_gates: bool,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
}

#[derive(Subcommand, Debug, Clone, Copy)]
enum Command {
    /// Scattering data a1, a2, b on the k grid.
    Scatter,
    /// ν, χ, p and the leading term along the configured rays.
    Rays,
    /// Direct simulation against the leading term.
    Compare,
    /// Checks of the parabolic cylinder model problem.
    ModelVerify,
    /// Direct simulation with snapshots.
    Evolve,
    /// Report on the assumptions behind the long-time asymptotics.
    Gates,
}

fn run(args: Args) -> Result<(), CliError> {
    if let Some(n) = args.threads {
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(CliError::input)?;
    }
    let path = args.config.ok_or_else(|| CliError::Input("--config PATH is required".into()))?;
    let loaded = config::load(&path)?;
    let dir = match args.out {
        Some(d) => d,
        None if loaded.config.output.dir.is_absolute() => loaded.config.output.dir.clone(),
        None => loaded.base_dir.join(&loaded.config.output.dir),
    };
    let sink = Sink::new(dir, loaded.sha256.clone(), args.override_gates)?;
    let ctx = Ctx { loaded, sink, override_gates: args.override_gates };
    match args.command {
        Command::Scatter => commands::cmd_scatter(&ctx),
        Command::Rays => commands::cmd_rays(&ctx),
        Command::Compare => commands::cmd_compare(&ctx),
        Command::ModelVerify => commands::cmd_model_verify(&ctx),
        Command::Evolve => commands::cmd_evolve(&ctx),
        Command::Gates => commands::cmd_gates(&ctx),
    }
}

fn main() -> ExitCode {
    match run(Args::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("nnls: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
