//! `stepwave` command-line front end.
//!
//! Exit codes: 0 success, 1 usage or configuration error, 2 tolerance or
//! physics-check failure, 3 I/O failure.

mod commands;
mod config;
mod error;
mod format;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use config::{parse_overrides, CommandKind, RunConfig};
use error::{CliError, CliResult};
use format::Format;

#[derive(Debug, Parser)]
#[command(
    name = "stepwave",
    version,
    about = "Point-source transients in a step potential"
)]
struct Cli {
    /// Flat `key = value` configuration file.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Output directory (default: $STEPWAVE_OUT_DIR, else the working directory).
    #[arg(long, global = true, value_name = "DIR")]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    #[arg(long, global = true, value_parser = ["natural", "ev-nm-fs"])]
    units: Option<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Space or time cuts of the wave function.
    Field(Overrides),
    /// Forerunner report (JSON).
    Forerunner(Overrides),
    /// Crank-Nicolson and Talbot comparison against the exact solution.
    Oracle(Overrides),
    /// Data behind figures 1 to 7: `reproduce [1..7|all] [--key value ...]`.
    Reproduce(Overrides),
}

#[derive(Debug, clap::Args)]
struct Overrides {
    /// Per-command keys as `--key value` or `--key=value`.
    #[arg(
        trailing_var_arg = true,
        allow_hyphen_values = true,
        value_name = "ARGS"
    )]
    args: Vec<String>,
}

fn build_config(cli: &Cli, kind: CommandKind, args: &[String]) -> CliResult<RunConfig> {
    let mut cfg = RunConfig::new(kind);
    if let Some(path) = &cli.config {
        cfg.load_file(path)?;
    }
    if let Some(out) = &cli.out {
        cfg.set("out", &out.to_string_lossy())?;
    }
    if let Some(f) = cli.format {
        cfg.set("format", f.extension())?;
    }
    if let Some(u) = &cli.units {
        cfg.set("units", u)?;
    }
    cfg.apply(parse_overrides(args)?)?;
    Ok(cfg)
}

fn run(cli: &Cli) -> CliResult<()> {
    match &cli.command {
        Command::Field(o) => commands::field::run(&build_config(cli, CommandKind::Field, &o.args)?),
        Command::Forerunner(o) => {
            commands::forerunner::run(&build_config(cli, CommandKind::Forerunner, &o.args)?)
        }
        Command::Oracle(o) => {
            commands::oracle::run(&build_config(cli, CommandKind::Oracle, &o.args)?)
        }
        Command::Reproduce(o) => {
            let (figure, rest) = match o.args.split_first() {
                Some((first, rest)) if !first.starts_with("--") => (Some(first.as_str()), rest),
                _ => (None, o.args.as_slice()),
            };
            let cfg = build_config(cli, CommandKind::Reproduce, rest)?;
            commands::reproduce::run(&cfg, figure)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn exit_code(e: &CliError) -> u8 {
    e.exit_code() as u8
}
