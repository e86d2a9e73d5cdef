//! Command-line front end: resolves a config file plus flag overrides into
//! an experiment, runs it, and prints the batch summary.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

use wsn_sim::error::{Error, Result};
use wsn_sim::harness::config_file::{parse_bool_value, parse_field_dims, parse_seed_list};
use wsn_sim::harness::{parse_config, run_experiment, Overrides};

/// Deterministic round-based simulator for cluster-routed wireless sensor
/// networks, with an optional energy-threshold sleep overlay.
#[derive(Debug, Parser)]
#[command(name = "wsn-sim", version)]
struct Cli {
    /// Election protocol: leach, teen, sep, or deec.
    #[arg(long, value_name = "NAME")]
    protocol: Option<String>,

    /// Enable the sleep overlay; pass an explicit value to force it off.
    #[arg(
        long,
        value_name = "BOOL",
        num_args = 0..=1,
        default_missing_value = "true",
        value_parser = parse_bool_arg
    )]
    ehorm: Option<bool>,

    /// Run both overlay arms for every seed and report paired win rates.
    #[arg(long)]
    compare: bool,

    /// Seeds to sweep: comma list with half-open ranges, e.g. 1,2,10..13.
    #[arg(long, value_name = "LIST")]
    seeds: Option<String>,

    /// Maximum number of rounds per run.
    #[arg(long, value_name = "N")]
    rounds: Option<u64>,

    /// Number of nodes to deploy.
    #[arg(long, value_name = "N")]
    nodes: Option<usize>,

    /// Field dimensions in meters, e.g. 100x100.
    #[arg(long, value_name = "WxH")]
    field: Option<String>,

    /// Config file in flat key=value format ('#' starts a comment).
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,

    /// Directory for per-run CSV files and summary.txt.
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
}

fn parse_bool_arg(value: &str) -> std::result::Result<bool, String> {
    parse_bool_value(value)
        .ok_or_else(|| format!("expected true/false (or on/off, 1/0), got {value:?}"))
}

fn execute(cli: Cli) -> Result<()> {
    let file_text = match &cli.config {
        Some(path) => std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?,
        None => String::new(),
    };
    let overrides = Overrides {
        protocol: cli.protocol,
        ehorm: cli.ehorm,
        compare: cli.compare,
        seeds: cli.seeds.as_deref().map(parse_seed_list).transpose()?,
        rounds: cli.rounds,
        nodes: cli.nodes,
        field: cli.field.as_deref().map(parse_field_dims).transpose()?,
        out: cli.out,
    };
    let spec = parse_config(&file_text, &overrides)?;
    let outcome = run_experiment(&spec)?;
    print!("{}", outcome.summary_text);
    println!(
        "wrote {} files under {}",
        outcome.files.len(),
        spec.output_dir.display()
    );
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            // clap reports --help/--version through Err as well; those exit 0.
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0u8,
                _ => 1u8,
            };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
